//! Sign-coherence of columns and bounded-depth checks of uniform column
//! sign-coherence.
//!
//! Uniform sign-coherence quantifies over every mutation sequence, so the
//! checks here enumerate all sequences up to a depth and say which depth
//! they reached. A verified verdict is evidence, not a proof.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::ExchangeMatrix;
use crate::matrix::IntMatrix;
use crate::mutation::{ExtendedMatrix, MutationSequence};

pub const DEFAULT_COHERENCE_DEPTH: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnSign {
    /// All entries nonnegative, at least one positive.
    Green,
    /// All entries nonpositive, at least one negative.
    Red,
    Zero,
    Mixed,
}

impl ColumnSign {
    pub fn of<I: IntoIterator<Item = crate::matrix::Entry>>(entries: I) -> Self {
        let (mut pos, mut neg) = (false, false);
        for x in entries {
            pos |= x > 0;
            neg |= x < 0;
        }
        match (pos, neg) {
            (true, true) => ColumnSign::Mixed,
            (true, false) => ColumnSign::Green,
            (false, true) => ColumnSign::Red,
            (false, false) => ColumnSign::Zero,
        }
    }

    /// The sign `+1` / `-1` of a green or red column. Zero and mixed
    /// columns have no sign.
    pub fn epsilon(self, column: usize) -> Result<i8> {
        match self {
            ColumnSign::Green => Ok(1),
            ColumnSign::Red => Ok(-1),
            ColumnSign::Zero | ColumnSign::Mixed => Err(Error::SignUndefined { column }),
        }
    }
}

/// Sign of column `j` (1-based).
pub fn column_sign(m: &IntMatrix, j: usize) -> Result<ColumnSign> {
    if j == 0 || j > m.cols() {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: m.cols(),
        });
    }
    Ok(ColumnSign::of(m.column(j - 1)))
}

/// First mixed column, 1-based.
pub fn first_mixed_column(m: &IntMatrix) -> Option<usize> {
    (0..m.cols())
        .find(|&j| ColumnSign::of(m.column(j)) == ColumnSign::Mixed)
        .map(|j| j + 1)
}

pub fn column_sign_coherent(m: &IntMatrix) -> bool {
    first_mixed_column(m).is_none()
}

pub fn row_sign_coherent(m: &IntMatrix) -> bool {
    column_sign_coherent(&m.transpose())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "camelCase")]
pub enum CoherenceVerdict {
    /// Every sequence of length at most `depth` was checked.
    #[serde(rename_all = "camelCase")]
    VerifiedToDepth { depth: usize, states_visited: usize },
    /// Replaying `sequence` breaks the property at (`row`, `column`) of the
    /// watched block, both 1-based.
    #[serde(rename_all = "camelCase")]
    Counterexample {
        sequence: MutationSequence,
        row: usize,
        column: usize,
    },
}

impl CoherenceVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, CoherenceVerdict::VerifiedToDepth { .. })
    }
}

/// Reason an attached block is known to be uniformly column sign-coherent
/// without enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CoherenceCertificate {
    /// Every entry is nonnegative.
    Nonnegative,
    /// Column sign-coherent with rank at most one.
    RankAtMostOne,
}

/// Returns a certificate when `b2` is uniformly column sign-coherent with
/// respect to every exchange matrix of matching size.
pub fn uniform_coherence_certificate(b2: &IntMatrix) -> Result<Option<CoherenceCertificate>> {
    if b2.is_nonnegative() {
        return Ok(Some(CoherenceCertificate::Nonnegative));
    }
    if column_sign_coherent(b2) && b2.rank()? <= 1 {
        return Ok(Some(CoherenceCertificate::RankAtMostOne));
    }
    Ok(None)
}

/// Breadth-first enumeration of mutation sequences over directions
/// `1..=directions`, skipping immediate repeats and already-seen states.
/// `violation` inspects each reached state and returns the offending
/// `(row, column)` if any.
fn enumerate<F>(
    start: &ExtendedMatrix,
    directions: usize,
    depth: usize,
    mut violation: F,
) -> Result<CoherenceVerdict>
where
    F: FnMut(&ExtendedMatrix) -> Option<(usize, usize)>,
{
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    seen.insert(start.data().clone());
    let mut queue = VecDeque::from([(start.clone(), MutationSequence::empty())]);
    while let Some((state, seq)) = queue.pop_front() {
        if seq.len() == depth {
            continue;
        }
        for k in 1..=directions {
            if seq.last() == Some(k) {
                continue;
            }
            let next = state.mutate(k)?;
            if !seen.insert(next.data().clone()) {
                continue;
            }
            let next_seq = seq.with(k);
            if let Some((row, column)) = violation(&next) {
                return Ok(CoherenceVerdict::Counterexample {
                    sequence: next_seq,
                    row,
                    column,
                });
            }
            queue.push_back((next, next_seq));
        }
    }
    Ok(CoherenceVerdict::VerifiedToDepth {
        depth,
        states_visited: seen.len(),
    })
}

fn mixed_witness(block: &IntMatrix) -> Option<(usize, usize)> {
    let column = first_mixed_column(block)?;
    // Report the first row whose sign differs from the column's first
    // nonzero entry.
    let entries: Vec<_> = block.column(column - 1).collect();
    let first = entries.iter().find(|&&x| x != 0)?.signum();
    let row = entries.iter().position(|&x| x.signum() == -first)?;
    Some((row + 1, column))
}

/// Mutates `B1` stacked over `B2` along every sequence of length at most
/// `depth` and reports the first sequence leaving a mixed column in the
/// attached block.
pub fn check_uniform_sign_coherence(
    b1: &ExchangeMatrix,
    b2: &IntMatrix,
    depth: usize,
) -> Result<CoherenceVerdict> {
    if b2.cols() != b1.n() {
        return Err(Error::ShapeMismatch(format!(
            "attached block has {} columns, principal part has size {}",
            b2.cols(),
            b1.n()
        )));
    }
    if let Some(column) = first_mixed_column(b2) {
        return Err(Error::NotSignCoherentInput { column });
    }
    let start = ExtendedMatrix::new(b1, b2)?;
    enumerate(&start, b1.n(), depth, |state| {
        mixed_witness(&state.attached())
    })
}

/// Evaluates both sides of
/// `mu_k(diag(I, P) * [B1; B2]) == diag(I, P) * mu_k([B1; B2])`.
pub fn scaling_commutation_check(
    b1: &ExchangeMatrix,
    b2: &IntMatrix,
    p: &IntMatrix,
    k: usize,
) -> Result<bool> {
    if b2.cols() != b1.n() {
        return Err(Error::ShapeMismatch(format!(
            "attached block has {} columns, principal part has size {}",
            b2.cols(),
            b1.n()
        )));
    }
    if p.cols() != b2.rows() {
        return Err(Error::ShapeMismatch(format!(
            "P has {} columns, attached block has {} rows",
            p.cols(),
            b2.rows()
        )));
    }
    if let Some(column) = first_mixed_column(b2) {
        return Err(Error::NotSignCoherentInput { column });
    }
    if let Some((row, column, value)) = p.first_negative() {
        return Err(Error::NonNegativityViolation {
            row: row + 1,
            column: column + 1,
            value: value as i128,
        });
    }

    let scaled_first = ExtendedMatrix::new(b1, &p.checked_mul(b2)?)?.mutate(k)?;
    let mutated = ExtendedMatrix::new(b1, b2)?.mutate(k)?;
    let mutated_then_scaled =
        ExtendedMatrix::new(&mutated.exchange(), &p.checked_mul(&mutated.attached())?)?;
    Ok(scaled_first == mutated_then_scaled)
}

/// Mutates the full matrix in directions `1..=split` only and reports the
/// first sequence that changes the lower-right block.
///
/// The lower-right block changes at step `s + 1` exactly when the
/// lower-left block has a mixed column after step `s`, so verification to
/// depth `d + 1` here matches [`check_uniform_sign_coherence`] of the
/// lower-left block to depth `d`.
pub fn block_invariance_check(
    b: &ExchangeMatrix,
    split: usize,
    depth: usize,
) -> Result<CoherenceVerdict> {
    let size = b.n();
    if split == 0 || split >= size {
        return Err(Error::InvalidSplit {
            n: split,
            m: size.saturating_sub(split),
            size,
        });
    }
    let m = size - split;
    let original = b.matrix().block(split, split, m, m);
    let start = ExtendedMatrix::new(b, &IntMatrix::zeros(0, size))?;
    enumerate(&start, split, depth, |state| {
        let current = state.data().block(split, split, m, m);
        (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .find(|&(i, j)| current[(i, j)] != original[(i, j)])
            .map(|(i, j)| (i + 1, j + 1))
    })
}
