//! Exact mutation of skew-symmetrizable integer matrices.
//!
//! The crate tracks framed matrices `[B; C]` under mutation, checks column
//! sign-coherence (including bounded-depth checks of uniform
//! sign-coherence), decomposes exchange matrices into irreducible blocks
//! through the strongly connected components of their quivers, and
//! searches for maximal green and green-to-red sequences, either directly
//! or block by block.
//!
//! Mutation directions, quiver vertices and column labels are 1-based,
//! as in the usual mathematical notation. Raw matrix element access is
//! 0-based.
//!
//! ```
//! use greenseq_core::{verify_sequence, ExchangeMatrix, MutationSequence};
//!
//! let b = ExchangeMatrix::from_rows(vec![vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]])?;
//! let verdict = verify_sequence(&b, &MutationSequence::new(vec![2, 3, 1, 2]))?;
//! assert!(verdict.is_maximal_green);
//! # Ok::<(), greenseq_core::Error>(())
//! ```

pub mod coherence;
pub mod error;
pub mod exchange;
pub mod green;
pub mod io;
pub mod matrix;
pub mod mutation;
pub mod quiver;

pub use coherence::{
    block_invariance_check, check_uniform_sign_coherence, column_sign, column_sign_coherent,
    row_sign_coherent, scaling_commutation_check, uniform_coherence_certificate,
    CoherenceCertificate, CoherenceVerdict, ColumnSign,
};
pub use error::{Error, Result};
pub use exchange::{find_symmetrizer, ExchangeMatrix, Symmetrizer};
pub use green::{
    compose_mgs, find_sequence, reduce_and_search, split_mgs, verify_sequence, GreenState,
    ReducedSearch, SearchConfig, SearchOutcome, SearchResult, SearchTarget, SequenceVerdict,
    Strategy,
};
pub use io::{emit_dot, parse_int_matrix, parse_matrix, MatrixDocument};
pub use matrix::{Entry, IntMatrix};
pub use mutation::{frame, ExtendedMatrix, MutationSequence};
pub use quiver::{
    decompose, is_irreducible, underlying_quiver, BlockDecomposition, IrreducibilityMethod,
    QuiverClass, QuiverGraph,
};
