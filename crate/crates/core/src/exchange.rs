//! Exchange matrices: square integer matrices together with a certified
//! skew-symmetrizer.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Entry, IntMatrix};

/// Positive diagonal `S = diag(s_1, .., s_n)` with `SB` skew-symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symmetrizer(Vec<Entry>);

impl Symmetrizer {
    pub fn identity(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn new(entries: Vec<Entry>) -> Result<Self> {
        if let Some(pos) = entries.iter().position(|&s| s < 1) {
            return Err(Error::InvalidSymmetrizer(format!(
                "entry {} is {}, must be positive",
                pos + 1,
                entries[pos]
            )));
        }
        Ok(Self(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.0
    }

    fn gcd(&self) -> Entry {
        self.0.iter().fold(0, |g, &s| gcd(g, s))
    }

    /// Checks `s_i * b_ij == -s_j * b_ji` for every pair.
    pub fn certifies(&self, b: &IntMatrix) -> Result<bool> {
        if !b.is_square() || b.rows() != self.len() {
            return Ok(false);
        }
        let n = b.rows();
        for i in 0..n {
            for j in i..n {
                let lhs = self.0[i]
                    .checked_mul(b[(i, j)])
                    .ok_or(Error::ArithmeticOverflow("symmetrizer check"))?;
                let rhs = self.0[j]
                    .checked_mul(b[(j, i)])
                    .and_then(Entry::checked_neg)
                    .ok_or(Error::ArithmeticOverflow("symmetrizer check"))?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Symmetrizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Entry::to_string).collect();
        write!(f, "diag({})", parts.join(","))
    }
}

fn gcd(a: Entry, b: Entry) -> Entry {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_u(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Square skew-symmetrizable matrix `B` with its symmetrizer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    b: IntMatrix,
    symmetrizer: Symmetrizer,
}

impl ExchangeMatrix {
    /// Computes the canonical symmetrizer of `b` (see [`find_symmetrizer`]).
    pub fn new(b: IntMatrix) -> Result<Self> {
        find_symmetrizer(&b)
    }

    /// Uses a caller-supplied symmetrizer, which must certify `b` and have
    /// entries with gcd 1.
    pub fn with_symmetrizer(b: IntMatrix, symmetrizer: Symmetrizer) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::NotSkewSymmetrizable(format!(
                "matrix is {}x{}, not square",
                b.rows(),
                b.cols()
            )));
        }
        if symmetrizer.len() != b.rows() {
            return Err(Error::InvalidSymmetrizer(format!(
                "expected {} entries, got {}",
                b.rows(),
                symmetrizer.len()
            )));
        }
        if !symmetrizer.certifies(&b)? {
            return Err(Error::InvalidSymmetrizer(format!(
                "{symmetrizer} does not make SB skew-symmetric"
            )));
        }
        if !symmetrizer.is_empty() && symmetrizer.gcd() != 1 {
            return Err(Error::InvalidSymmetrizer(format!(
                "{symmetrizer} has entries with common factor {}",
                symmetrizer.gcd()
            )));
        }
        Ok(Self { b, symmetrizer })
    }

    /// Shorthand for tests and examples: rows to exchange matrix.
    pub fn from_rows(rows: Vec<Vec<Entry>>) -> Result<Self> {
        let n = rows.len();
        Self::new(IntMatrix::from_rows_with_cols(rows, n)?)
    }

    pub fn n(&self) -> usize {
        self.b.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.b
    }

    pub fn symmetrizer(&self) -> &Symmetrizer {
        &self.symmetrizer
    }

    pub fn into_parts(self) -> (IntMatrix, Symmetrizer) {
        (self.b, self.symmetrizer)
    }

    /// Principal submatrix on the given 1-based vertices, in that order.
    pub fn principal_submatrix(&self, vertices: &[usize]) -> Result<Self> {
        let idx = to_zero_based(vertices, self.n())?;
        find_symmetrizer(&self.b.submatrix(&idx, &idx))
    }

    /// Relabels so that new vertex `t + 1` is old vertex `order[t]` (1-based).
    pub fn relabel(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "relabeling has {} entries, matrix has size {}",
                order.len(),
                self.n()
            )));
        }
        let idx = to_zero_based(order, self.n())?;
        let mut seen = vec![false; self.n()];
        for &i in &idx {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::ShapeMismatch(format!(
                    "vertex {} repeated in relabeling",
                    i + 1
                )));
            }
        }
        let s = idx.iter().map(|&i| self.symmetrizer.0[i]).collect();
        Ok(Self {
            b: self.b.submatrix(&idx, &idx),
            symmetrizer: Symmetrizer(s),
        })
    }
}

fn to_zero_based(vertices: &[usize], n: usize) -> Result<Vec<usize>> {
    vertices
        .iter()
        .map(|&v| {
            if (1..=n).contains(&v) {
                Ok(v - 1)
            } else {
                Err(Error::IndexOutOfRange { index: v, max: n })
            }
        })
        .collect()
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}S = {}", self.b, self.symmetrizer)
    }
}

/// Finds the minimal skew-symmetrizer of a square matrix.
///
/// Ratios `s_j / s_i = |b_ij| / |b_ji|` are propagated over each connected
/// component of the nonzero pattern, checked on every edge, and scaled to
/// the smallest positive integers in that component.
pub fn find_symmetrizer(b: &IntMatrix) -> Result<ExchangeMatrix> {
    if !b.is_square() {
        return Err(Error::NotSkewSymmetrizable(format!(
            "matrix is {}x{}, not square",
            b.rows(),
            b.cols()
        )));
    }
    let n = b.rows();
    for i in 0..n {
        if b[(i, i)] != 0 {
            return Err(Error::NotSkewSymmetrizable(format!(
                "diagonal entry ({0},{0}) is nonzero",
                i + 1
            )));
        }
        for j in i + 1..n {
            let (x, y) = (b[(i, j)], b[(j, i)]);
            if (x == 0) != (y == 0) || x.signum() * y.signum() > 0 {
                return Err(Error::NotSkewSymmetrizable(format!(
                    "sign pattern violated at ({},{}) = {x} and ({},{}) = {y}",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
    }

    const OVERFLOW: Error = Error::ArithmeticOverflow("symmetrizer search");
    // Rational s_i as (numerator, denominator), reduced.
    let mut ratio: Vec<Option<(u128, u128)>> = vec![None; n];
    let mut s: Vec<Entry> = vec![0; n];
    for root in 0..n {
        if ratio[root].is_some() {
            continue;
        }
        ratio[root] = Some((1, 1));
        let mut component = vec![root];
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let (num, den) = ratio[i].expect("visited vertex has a ratio");
            for j in 0..n {
                if j == i || b[(i, j)] == 0 {
                    continue;
                }
                let up = b[(i, j)].unsigned_abs() as u128;
                let down = b[(j, i)].unsigned_abs() as u128;
                let jn = num.checked_mul(up).ok_or(OVERFLOW)?;
                let jd = den.checked_mul(down).ok_or(OVERFLOW)?;
                let g = gcd_u(jn, jd);
                let candidate = (jn / g, jd / g);
                match ratio[j] {
                    None => {
                        ratio[j] = Some(candidate);
                        component.push(j);
                        stack.push(j);
                    }
                    Some(existing) if existing != candidate => {
                        return Err(Error::NotSkewSymmetrizable(format!(
                            "inconsistent ratio around a cycle through vertices {} and {}",
                            i + 1,
                            j + 1
                        )));
                    }
                    Some(_) => {}
                }
            }
        }

        let lcm = component.iter().try_fold(1u128, |acc, &v| {
            let d = ratio[v].unwrap().1;
            (acc / gcd_u(acc, d)).checked_mul(d).ok_or(OVERFLOW)
        })?;
        let scaled: Vec<u128> = component
            .iter()
            .map(|&v| {
                let (num, den) = ratio[v].unwrap();
                num.checked_mul(lcm / den).ok_or(OVERFLOW)
            })
            .collect::<Result<_>>()?;
        let g = scaled.iter().fold(0, |g, &x| gcd_u(g, x));
        for (&v, &x) in component.iter().zip(&scaled) {
            s[v] = Entry::try_from(x / g).map_err(|_| OVERFLOW)?;
        }
    }

    let symmetrizer = Symmetrizer(s);
    debug_assert!(symmetrizer.certifies(b).unwrap_or(false));
    Ok(ExchangeMatrix {
        b: b.clone(),
        symmetrizer,
    })
}
