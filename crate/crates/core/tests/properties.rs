mod common;

use common::*;
use greenseq_core::{
    block_invariance_check, check_uniform_sign_coherence, column_sign_coherent, compose_mgs,
    decompose, emit_dot, find_sequence, find_symmetrizer, frame, is_irreducible, parse_matrix,
    scaling_commutation_check, split_mgs, underlying_quiver, uniform_coherence_certificate,
    verify_sequence, Entry, Error, ExchangeMatrix, ExtendedMatrix, IntMatrix, IrreducibilityMethod,
    MatrixDocument, MutationSequence, SearchConfig, SearchTarget, Strategy as SearchStrategy,
};
use proptest::prelude::*;
use rand::Rng;

fn arb_exchange(max_n: usize) -> impl Strategy<Value = ExchangeMatrix> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| random_exchange(&mut rng(seed), n, 3))
}

fn arb_acyclic(max_n: usize) -> impl Strategy<Value = ExchangeMatrix> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| random_acyclic(&mut rng(seed), n, 3))
}

/// A matrix with a sequence of valid directions for it.
fn arb_with_sequence(
    max_n: usize,
    max_len: usize,
) -> impl Strategy<Value = (ExchangeMatrix, Vec<usize>)> {
    arb_exchange(max_n).prop_flat_map(move |b| {
        let n = b.n();
        (Just(b), prop::collection::vec(1..=n, 0..=max_len))
    })
}

fn random_matrix(seed: u64, rows: usize, cols: usize, lo: Entry, hi: Entry) -> IntMatrix {
    let mut r = rng(seed);
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| r.gen_range(lo..=hi)).collect())
        .collect();
    IntMatrix::from_rows_with_cols(data, cols).unwrap()
}

/// Random column sign-coherent matrix: each column gets one random sign.
fn random_coherent(seed: u64, rows: usize, cols: usize) -> IntMatrix {
    let mut r = rng(seed);
    let signs: Vec<Entry> = (0..cols)
        .map(|_| if r.gen_bool(0.5) { 1 } else { -1 })
        .collect();
    let data = (0..rows)
        .map(|_| (0..cols).map(|j| signs[j] * r.gen_range(0..=3)).collect())
        .collect();
    IntMatrix::from_rows_with_cols(data, cols).unwrap()
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

/// Rank as the size of the largest nonzero minor.
fn oracle_rank(m: &IntMatrix) -> usize {
    let g = grid(m);
    (1..=m.rows().min(m.cols()))
        .rev()
        .find(|&k| {
            subsets(m.rows(), k).iter().any(|rs| {
                subsets(m.cols(), k).iter().any(|cs| {
                    let minor: Vec<Vec<i128>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| g[i][j]).collect())
                        .collect();
                    det(&minor) != 0
                })
            })
        })
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mutation_is_an_involution((b, s) in arb_with_sequence(4, 6), seed in any::<u64>()) {
        let attached = random_matrix(seed, 3, b.n(), -3, 3);
        let start = ExtendedMatrix::new(&b, &attached).unwrap();
        let mut state = start.clone();
        for &k in &s {
            state = state.mutate(k).unwrap();
        }
        for &k in s.iter().rev() {
            let once = state.mutate(k).unwrap();
            prop_assert_eq!(&once.mutate(k).unwrap(), &state);
            state = once;
        }
        prop_assert_eq!(state, start);
    }

    #[test]
    fn mutation_matches_reference((b, s) in arb_with_sequence(4, 6)) {
        let mut reference = oracle_frame(&b);
        let mut state = frame(&b);
        for &k in &s {
            reference = oracle_mutate(&reference, k);
            state = state.mutate(k).unwrap();
            prop_assert_eq!(grid(state.data()), reference.clone());
        }
    }

    #[test]
    fn symmetrizer_is_preserved((b, s) in arb_with_sequence(4, 6)) {
        let end = frame(&b).mutate_sequence(&MutationSequence::new(s)).unwrap();
        let principal = end.principal();
        prop_assert!(b.symmetrizer().certifies(&principal).unwrap());
        let found = find_symmetrizer(&principal).unwrap();
        prop_assert_eq!(found.symmetrizer(), b.symmetrizer());
        for i in 0..b.n() {
            for j in 0..b.n() {
                prop_assert_eq!(principal[(i, j)].signum(), -principal[(j, i)].signum());
            }
        }
    }

    #[test]
    fn c_matrices_are_sign_coherent(b in arb_exchange(4)) {
        let verdict = check_uniform_sign_coherence(&b, &IntMatrix::identity(b.n()), 4).unwrap();
        prop_assert!(verdict.is_verified(), "{:?}", verdict);
    }

    #[test]
    fn scaling_commutes_with_mutation(b in arb_exchange(4), seeds in any::<(u64, u64)>(), k in 1usize..=4) {
        let n = b.n();
        let k = (k - 1) % n + 1;
        let b2 = random_coherent(seeds.0, 3, n);
        let p = random_matrix(seeds.1, 2, 3, 0, 3);
        prop_assert!(scaling_commutation_check(&b, &b2, &p, k).unwrap());
    }

    #[test]
    fn nonnegative_products_stay_uniformly_coherent(b in arb_exchange(4), seeds in any::<(u64, u64)>()) {
        let n = b.n();
        let b2 = random_matrix(seeds.0, 2, n, 0, 3);
        prop_assert!(check_uniform_sign_coherence(&b, &b2, 4).unwrap().is_verified());
        let p = random_matrix(seeds.1, 3, 2, 0, 2);
        let product = p.checked_mul(&b2).unwrap();
        prop_assert!(check_uniform_sign_coherence(&b, &product, 4).unwrap().is_verified());
    }

    #[test]
    fn rank_one_coherent_rows_are_uniformly_coherent(b in arb_exchange(4), seed in any::<u64>()) {
        let n = b.n();
        let mut r = rng(seed);
        let scale: Vec<Entry> = (0..3).map(|_| r.gen_range(0..=3)).collect();
        let alpha: Vec<Entry> = (0..n).map(|_| r.gen_range(-3..=3)).collect();
        let rows = scale.iter().map(|&c| alpha.iter().map(|&a| c * a).collect()).collect();
        let b2 = IntMatrix::from_rows_with_cols(rows, n).unwrap();
        prop_assert!(column_sign_coherent(&b2));
        prop_assert!(uniform_coherence_certificate(&b2).unwrap().is_some());
        prop_assert!(check_uniform_sign_coherence(&b, &b2, 4).unwrap().is_verified());
    }

    #[test]
    fn block_invariance_lags_uniform_coherence(b in arb_exchange(4), split in 1usize..4, depth in 0usize..4) {
        let n = b.n();
        prop_assume!(n >= 2);
        let split = (split - 1) % (n - 1) + 1;
        let first: Vec<usize> = (1..=split).collect();
        let b1 = b.principal_submatrix(&first).unwrap();
        let b2 = b.matrix().block(split, 0, n - split, split);
        let block = block_invariance_check(&b, split, depth + 1).unwrap().is_verified();
        match check_uniform_sign_coherence(&b1, &b2, depth) {
            Ok(verdict) => prop_assert_eq!(block, verdict.is_verified()),
            Err(Error::NotSignCoherentInput { .. }) => prop_assert!(!block),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn irreducibility_methods_agree(b in arb_exchange(5)) {
        let q = underlying_quiver(&b);
        let by_definition = is_irreducible(&b, IrreducibilityMethod::Definition).unwrap();
        let by_cycle = is_irreducible(&b, IrreducibilityMethod::Cycle).unwrap();
        if q.classify().connected {
            prop_assert_eq!(by_definition, by_cycle);
        }
        if by_definition && b.n() >= 2 {
            prop_assert!(q.classify().connected);
        }
    }

    #[test]
    fn decomposition_is_valid(b in arb_exchange(5)) {
        let d = decompose(&b);
        prop_assert!(d.is_valid_for(&b));
        for block in &d.blocks {
            let sub = b.principal_submatrix(block).unwrap();
            prop_assert!(block.len() == 1 || is_irreducible(&sub, IrreducibilityMethod::Definition).unwrap());
        }
        let relabeled = d.relabeled(&b).unwrap();
        let mut offset = 0;
        for size in d.block_sizes() {
            let m = relabeled.matrix();
            for i in offset + size..b.n() {
                for j in offset..offset + size {
                    prop_assert!(m[(i, j)] >= 0);
                }
            }
            offset += size;
        }
    }

    #[test]
    fn acyclic_matrices_split_into_vertices(b in arb_acyclic(5)) {
        prop_assert!(underlying_quiver(&b).classify().acyclic);
        prop_assert!(decompose(&b).blocks.iter().all(|blk| blk.len() == 1));
    }

    #[test]
    fn compose_and_split_are_inverse(b in arb_exchange(4)) {
        let d = decompose(&b);
        prop_assume!(d.blocks.len() >= 2);
        let relabeled = d.relabeled(&b).unwrap();
        let split = d.blocks[0].len();
        let upper = relabeled.principal_submatrix(&(1..=split).collect::<Vec<_>>()).unwrap();
        let lower = relabeled.principal_submatrix(&(split + 1..=b.n()).collect::<Vec<_>>()).unwrap();
        let config = SearchConfig::with_depth(6);
        for target in [SearchTarget::MaximalGreen, SearchTarget::GreenToRed] {
            let first = find_sequence(&upper, target, &config).unwrap();
            let second = find_sequence(&lower, target, &config).unwrap();
            let (Some(first), Some(second)) = (first.found(), second.found()) else { continue };
            let joined = compose_mgs(&relabeled, split, first, second, target).unwrap();
            prop_assert!(verify_sequence(&relabeled, &joined).unwrap().satisfies(target));
            let (a, c) = split_mgs(&relabeled, split, &joined, target).unwrap();
            prop_assert_eq!(&a, first);
            prop_assert_eq!(&c, second);
        }
    }

    #[test]
    fn verdicts_match_reference((b, s) in arb_with_sequence(3, 5)) {
        let verdict = verify_sequence(&b, &MutationSequence::new(s.clone())).unwrap();
        prop_assert_eq!(verdict.is_maximal_green, oracle_is_maximal_green(&b, &s));
    }

    #[test]
    fn green_search_never_loses_a_green_direction(b in arb_exchange(4)) {
        let outcome = find_sequence(&b, SearchTarget::MaximalGreen, &SearchConfig::with_depth(6));
        prop_assert!(outcome.is_ok(), "{:?}", outcome);
    }

    #[test]
    fn documents_round_trip(b in arb_exchange(4), seed in any::<u64>(), with_rows in any::<bool>()) {
        let mut doc = MatrixDocument::new(b.clone());
        if with_rows {
            doc.attached = Some(random_matrix(seed, 2, b.n(), -3, 3));
        }
        prop_assert_eq!(&parse_matrix(&doc.to_json()).unwrap(), &doc);
        prop_assert_eq!(&parse_matrix(&doc.to_text()).unwrap(), &doc);
    }

    #[test]
    fn dot_output_is_stable(b in arb_exchange(5)) {
        let q = underlying_quiver(&b);
        let dot = emit_dot(&q, None);
        prop_assert_eq!(&dot, &emit_dot(&underlying_quiver(&b.clone()), None));
        for arrow in q.arrows() {
            let edge = format!("{} -> {}", arrow.source, arrow.target);
            prop_assert!(dot.contains(&edge), "missing {}", edge);
        }
    }

    #[test]
    fn sequences_print_and_parse(s in prop::collection::vec(1usize..20, 0..8)) {
        let seq = MutationSequence::new(s);
        prop_assert_eq!(seq.to_string().parse::<MutationSequence>().unwrap(), seq);
    }

    #[test]
    fn rank_matches_minors(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..5) {
        let m = random_matrix(seed, rows, cols, -3, 3);
        prop_assert_eq!(m.rank().unwrap(), oracle_rank(&m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_finds_the_least_shortest_sequence(b in arb_exchange(3)) {
        let expected = oracle_shortest_mgs(&b, 5);
        for strategy in [SearchStrategy::Bfs, SearchStrategy::Iddfs] {
            let config = SearchConfig { strategy, ..SearchConfig::with_depth(5) };
            let outcome = find_sequence(&b, SearchTarget::MaximalGreen, &config).unwrap();
            prop_assert_eq!(outcome.found().map(|s| s.indices().to_vec()), expected.clone());
        }
    }
}

#[test]
fn principal_submatrices_of_examples_keep_sequences() {
    // A matrix with a maximal green sequence of length L has one on every
    // principal submatrix, of length at most L.
    for b in [example_cycle(), example_two(), example_five()] {
        let outcome =
            find_sequence(&b, SearchTarget::MaximalGreen, &SearchConfig::with_depth(8)).unwrap();
        let length = outcome.found().expect("examples have sequences").len();
        let n = b.n();
        for mask in 1u32..(1 << n) - 1 {
            let vertices: Vec<usize> = (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            let sub = b.principal_submatrix(&vertices).unwrap();
            let found = find_sequence(
                &sub,
                SearchTarget::MaximalGreen,
                &SearchConfig::with_depth(length),
            )
            .unwrap();
            assert!(found.found().is_some(), "no sequence for {vertices:?}");
        }
    }
}
