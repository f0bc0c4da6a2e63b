#![allow(dead_code)]

use greenseq_core::{Entry, ExchangeMatrix, IntMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn ex(rows: Vec<Vec<Entry>>) -> ExchangeMatrix {
    ExchangeMatrix::from_rows(rows).unwrap()
}

pub fn example_cycle() -> ExchangeMatrix {
    ex(vec![vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]])
}

pub fn example_two() -> ExchangeMatrix {
    ex(vec![vec![0, -2], vec![3, 0]])
}

pub fn example_five() -> ExchangeMatrix {
    ex(vec![
        vec![0, 1, -1, -2, -2],
        vec![-1, 0, 1, 0, -4],
        vec![1, -1, 0, -3, 0],
        vec![2, 0, 3, 0, -2],
        vec![1, 2, 0, 1, 0],
    ])
}

pub fn markov() -> ExchangeMatrix {
    ex(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]])
}

/// Random skew-symmetrizable matrix of size `n` with entries in
/// `[-max_entry, max_entry]`, built from a random diagonal `S` with entries
/// in `1..=3`.
pub fn random_exchange(rng: &mut ChaCha8Rng, n: usize, max_entry: Entry) -> ExchangeMatrix {
    let s: Vec<Entry> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let mut b = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.25) {
                continue;
            }
            for _ in 0..8 {
                let x: Entry = rng.gen_range(-max_entry..=max_entry);
                if x == 0 {
                    continue;
                }
                // s_i x = -s_j y
                if (s[i] * x) % s[j] != 0 {
                    continue;
                }
                let y = -(s[i] * x) / s[j];
                if y.abs() <= max_entry {
                    b[(i, j)] = x;
                    b[(j, i)] = y;
                    break;
                }
            }
        }
    }
    ExchangeMatrix::new(b).expect("generator builds skew-symmetrizable matrices")
}

/// Random acyclic matrix: arrows only go forward in a random vertex order.
pub fn random_acyclic(rng: &mut ChaCha8Rng, n: usize, max_entry: Entry) -> ExchangeMatrix {
    let base = random_exchange(rng, n, max_entry);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pos = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut b = base.matrix().clone();
    for i in 0..n {
        for j in 0..n {
            let x = b[(i, j)].abs();
            b[(i, j)] = if pos[i] < pos[j] { x } else { -x };
        }
    }
    ExchangeMatrix::new(b).expect("reorienting keeps skew-symmetrizability")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// Reference implementation used as an oracle. It works on plain nested
// vectors and shares no code with the library.

pub type Grid = Vec<Vec<i128>>;

pub fn grid(m: &IntMatrix) -> Grid {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as i128).collect())
        .collect()
}

pub fn oracle_frame(b: &ExchangeMatrix) -> Grid {
    let n = b.n();
    let mut g = grid(b.matrix());
    for i in 0..n {
        g.push((0..n).map(|j| i128::from(i == j)).collect());
    }
    g
}

pub fn oracle_mutate(m: &Grid, k: usize) -> Grid {
    let k = k - 1;
    let n = m[0].len();
    let mut out = m.clone();
    for i in 0..m.len() {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -m[i][j]
            } else {
                m[i][j] + m[i][k].signum() * (m[i][k] * m[k][j]).max(0)
            };
        }
    }
    out
}

/// +1 for nonnegative nonzero column of the lower block, -1 for
/// nonpositive nonzero, 0 otherwise.
pub fn oracle_sign(m: &Grid, n: usize, j: usize) -> i32 {
    let col: Vec<i128> = m[n..].iter().map(|r| r[j - 1]).collect();
    let pos = col.iter().any(|&x| x > 0);
    let neg = col.iter().any(|&x| x < 0);
    match (pos, neg) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    }
}

pub fn oracle_is_maximal_green(b: &ExchangeMatrix, seq: &[usize]) -> bool {
    let n = b.n();
    let mut m = oracle_frame(b);
    for &k in seq {
        if oracle_sign(&m, n, k) != 1 {
            return false;
        }
        m = oracle_mutate(&m, k);
    }
    (1..=n).all(|j| oracle_sign(&m, n, j) == -1)
}

/// Lexicographically least among the shortest maximal green sequences of
/// length at most `depth`, by plain enumeration of all sequences.
pub fn oracle_shortest_mgs(b: &ExchangeMatrix, depth: usize) -> Option<Vec<usize>> {
    fn first_of_len(b: &ExchangeMatrix, len: usize, prefix: &mut Vec<usize>) -> Option<Vec<usize>> {
        if prefix.len() == len {
            return oracle_is_maximal_green(b, prefix).then(|| prefix.clone());
        }
        for k in 1..=b.n() {
            prefix.push(k);
            if let Some(found) = first_of_len(b, len, prefix) {
                return Some(found);
            }
            prefix.pop();
        }
        None
    }
    (0..=depth).find_map(|len| first_of_len(b, len, &mut Vec::new()))
}

// Printed traces of the worked examples: B stacked over C after each step.

pub fn stacked(b: &[[Entry; 5]], c: &[[Entry; 5]]) -> IntMatrix {
    let rows = b.iter().chain(c).map(|r| r.to_vec()).collect();
    IntMatrix::from_rows(rows).unwrap()
}

pub fn stacked3(b: [[Entry; 3]; 3], c: [[Entry; 3]; 3]) -> IntMatrix {
    let rows = b.iter().chain(&c).map(|r| r.to_vec()).collect();
    IntMatrix::from_rows(rows).unwrap()
}

pub fn cycle_trace_expected() -> Vec<IntMatrix> {
    let id = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    vec![
        stacked3([[0, 1, -1], [-1, 0, 1], [1, -1, 0]], id),
        stacked3(
            [[0, -1, 0], [1, 0, -1], [0, 1, 0]],
            [[1, 0, 0], [0, -1, 1], [0, 0, 1]],
        ),
        stacked3(
            [[0, -1, 0], [1, 0, 1], [0, -1, 0]],
            [[1, 0, 0], [0, 0, -1], [0, 1, -1]],
        ),
        stacked3(
            [[0, 1, 0], [-1, 0, 1], [0, -1, 0]],
            [[-1, 0, 0], [0, 0, -1], [0, 1, -1]],
        ),
        stacked3(
            [[0, -1, 1], [1, 0, -1], [-1, 1, 0]],
            [[-1, 0, 0], [0, 0, -1], [0, -1, 0]],
        ),
    ]
}

pub fn two_trace_expected() -> Vec<IntMatrix> {
    let m = |rows: Vec<Vec<Entry>>| IntMatrix::from_rows(rows).unwrap();
    vec![
        m(vec![vec![0, -2], vec![3, 0], vec![1, 0], vec![0, 1]]),
        m(vec![vec![0, 2], vec![-3, 0], vec![-1, 0], vec![0, 1]]),
        m(vec![vec![0, -2], vec![3, 0], vec![-1, 0], vec![0, -1]]),
    ]
}

pub fn five_trace_expected() -> Vec<IntMatrix> {
    let e = |b: [[Entry; 5]; 5], c: [[Entry; 5]; 5]| stacked(&b, &c);
    vec![
        e(
            [
                [0, 1, -1, -2, -2],
                [-1, 0, 1, 0, -4],
                [1, -1, 0, -3, 0],
                [2, 0, 3, 0, -2],
                [1, 2, 0, 1, 0],
            ],
            [
                [1, 0, 0, 0, 0],
                [0, 1, 0, 0, 0],
                [0, 0, 1, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 0, 0, 0, 1],
            ],
        ),
        e(
            [
                [0, -1, 0, -2, -2],
                [1, 0, -1, 0, 4],
                [0, 1, 0, -3, -4],
                [2, 0, 3, 0, -2],
                [1, -2, 2, 1, 0],
            ],
            [
                [1, 0, 0, 0, 0],
                [0, -1, 1, 0, 0],
                [0, 0, 1, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 0, 0, 0, 1],
            ],
        ),
        e(
            [
                [0, -1, 0, -2, -2],
                [1, 0, 1, -3, 0],
                [0, -1, 0, 3, 4],
                [2, 3, -3, 0, -2],
                [1, 0, -2, 1, 0],
            ],
            [
                [1, 0, 0, 0, 0],
                [0, 0, -1, 0, 0],
                [0, 1, -1, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 0, 0, 0, 1],
            ],
        ),
        e(
            [
                [0, 1, 0, 2, 2],
                [-1, 0, 1, -3, 0],
                [0, -1, 0, 3, 4],
                [-2, 3, -3, 0, -2],
                [-1, 0, -2, 1, 0],
            ],
            [
                [-1, 0, 0, 0, 0],
                [0, 0, -1, 0, 0],
                [0, 1, -1, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 0, 0, 0, 1],
            ],
        ),
        e(
            [
                [0, -1, 1, 2, 2],
                [1, 0, -1, 3, 0],
                [-1, 1, 0, 0, 4],
                [-2, -3, 0, 0, -2],
                [-1, 0, -2, 1, 0],
            ],
            [
                [-1, 0, 0, 0, 0],
                [0, 0, -1, 0, 0],
                [0, -1, 0, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 0, 0, 0, 1],
            ],
        ),
        e(
            [
                [0, -1, 1, -2, 2],
                [1, 0, -1, -3, 0],
                [-1, 1, 0, 0, 4],
                [2, 3, 0, 0, 2],
                [-1, 0, -2, -1, 0],
            ],
            [
                [-1, 0, 0, 0, 0],
                [0, 0, -1, 0, 0],
                [0, -1, 0, 0, 0],
                [0, 0, 0, -1, 0],
                [0, 0, 0, 0, 1],
            ],
        ),
        e(
            [
                [0, -1, 1, -2, -2],
                [1, 0, -1, -3, 0],
                [-1, 1, 0, 0, -4],
                [2, 3, 0, 0, -2],
                [1, 0, 2, 1, 0],
            ],
            [
                [-1, 0, 0, 0, 0],
                [0, 0, -1, 0, 0],
                [0, -1, 0, 0, 0],
                [0, 0, 0, -1, 0],
                [0, 0, 0, 0, -1],
            ],
        ),
    ]
}
