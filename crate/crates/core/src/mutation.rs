//! Extended matrices and matrix mutation.
//!
//! An extended matrix stacks `m` attached rows below an `n x n`
//! skew-symmetrizable principal part. Mutation in direction `k` rewrites
//! every entry by
//!
//! ```text
//! b'_ij = -b_ij                                   if i = k or j = k
//! b'_ij = b_ij + sgn(b_ik) * max(b_ik * b_kj, 0)  otherwise
//! ```
//!
//! The framed matrix of `B` attaches the identity; its attached block is
//! the C-matrix.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::{ExchangeMatrix, Symmetrizer};
use crate::matrix::{Entry, IntMatrix};

/// Mutation directions in application order, 1-based.
///
/// `(k1, k2, .., ks)` applies `k1` first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MutationSequence(Vec<usize>);

impl MutationSequence {
    pub fn new(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, k: usize) {
        self.0.push(k);
    }

    pub fn pop(&mut self) -> Option<usize> {
        self.0.pop()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn with(&self, k: usize) -> Self {
        let mut next = self.clone();
        next.push(k);
        next
    }

    /// Every index lies in `1..=n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&k| k == 0 || k > n) {
            Some(&k) => Err(Error::IndexOutOfRange { index: k, max: n }),
            None => Ok(()),
        }
    }

    /// Adds `offset` to every index.
    pub fn shifted(&self, offset: usize) -> Self {
        Self(self.0.iter().map(|k| k + offset).collect())
    }

    /// Maps every index `k` to `labels[k - 1]`.
    pub fn relabeled(&self, labels: &[usize]) -> Self {
        Self(self.0.iter().map(|&k| labels[k - 1]).collect())
    }

    pub fn concat(&self, other: &MutationSequence) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }
}

impl From<Vec<usize>> for MutationSequence {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl fmt::Display for MutationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for MutationSequence {
    type Err = Error;

    /// Parses `2,3,1,2`, optionally wrapped in parentheses or brackets.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s
            .trim()
            .trim_start_matches(['(', '['])
            .trim_end_matches([')', ']']);
        if trimmed.trim().is_empty() {
            return Ok(Self::empty());
        }
        let mut out = Vec::new();
        let mut column = 1;
        for part in trimmed.split(',') {
            let k = part.trim().parse::<usize>().map_err(|e| Error::Parse {
                line: 1,
                column,
                message: format!("bad mutation index {:?}: {e}", part.trim()),
            })?;
            out.push(k);
            column += part.len() + 1;
        }
        Ok(Self(out))
    }
}

/// `(m + n) x n` matrix with skew-symmetrizable principal part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedMatrix {
    n: usize,
    data: IntMatrix,
    symmetrizer: Symmetrizer,
}

impl ExtendedMatrix {
    /// `B` stacked over `attached`.
    pub fn new(principal: &ExchangeMatrix, attached: &IntMatrix) -> Result<Self> {
        Ok(Self {
            n: principal.n(),
            data: principal.matrix().vstack(attached)?,
            symmetrizer: principal.symmetrizer().clone(),
        })
    }

    /// Checks that the top `n x n` block is certified by `symmetrizer`.
    pub fn from_parts(data: IntMatrix, symmetrizer: Symmetrizer) -> Result<Self> {
        let n = data.cols();
        if data.rows() < n {
            return Err(Error::ShapeMismatch(format!(
                "extended matrix has {} rows but {} columns",
                data.rows(),
                n
            )));
        }
        let principal = data.block(0, 0, n, n);
        ExchangeMatrix::with_symmetrizer(principal, symmetrizer.clone())?;
        Ok(Self {
            n,
            data,
            symmetrizer,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of attached rows.
    pub fn m(&self) -> usize {
        self.data.rows() - self.n
    }

    pub fn data(&self) -> &IntMatrix {
        &self.data
    }

    pub fn symmetrizer(&self) -> &Symmetrizer {
        &self.symmetrizer
    }

    pub fn principal(&self) -> IntMatrix {
        self.data.block(0, 0, self.n, self.n)
    }

    pub fn attached(&self) -> IntMatrix {
        self.data.block(self.n, 0, self.m(), self.n)
    }

    /// Principal part as an exchange matrix; the carried symmetrizer
    /// certifies it by construction.
    pub fn exchange(&self) -> ExchangeMatrix {
        ExchangeMatrix::with_symmetrizer(self.principal(), self.symmetrizer.clone())
            .expect("mutation preserves the symmetrizer")
    }

    pub fn entry(&self, i: usize, j: usize) -> Entry {
        self.data[(i, j)]
    }

    /// Mutation in direction `k` (1-based). Returns a new matrix.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.n {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.n,
            });
        }
        let k = k - 1;
        let src = &self.data;
        let mut out = src.clone();
        for i in 0..src.rows() {
            let b_ik = src[(i, k)];
            for j in 0..self.n {
                out[(i, j)] = if i == k || j == k {
                    src[(i, j)]
                        .checked_neg()
                        .ok_or(Error::ArithmeticOverflow("mutation"))?
                } else if b_ik == 0 {
                    src[(i, j)]
                } else {
                    let b_kj = src[(k, j)];
                    // sgn(b_ik) * max(b_ik * b_kj, 0) is nonzero only when
                    // b_ik and b_kj share a sign.
                    if b_ik.signum() == b_kj.signum() {
                        let prod = b_ik
                            .checked_mul(b_kj)
                            .ok_or(Error::ArithmeticOverflow("mutation"))?;
                        let delta = if b_ik > 0 { prod } else { -prod };
                        src[(i, j)]
                            .checked_add(delta)
                            .ok_or(Error::ArithmeticOverflow("mutation"))?
                    } else {
                        src[(i, j)]
                    }
                };
            }
        }
        Ok(Self {
            n: self.n,
            data: out,
            symmetrizer: self.symmetrizer.clone(),
        })
    }

    /// Applies the sequence left to right.
    pub fn mutate_sequence(&self, seq: &MutationSequence) -> Result<Self> {
        seq.validate(self.n)?;
        seq.indices()
            .iter()
            .try_fold(self.clone(), |acc, &k| acc.mutate(k))
    }

    /// Every intermediate matrix, starting with `self`.
    pub fn trace(&self, seq: &MutationSequence) -> Result<Vec<Self>> {
        seq.validate(self.n)?;
        let mut out = vec![self.clone()];
        for &k in seq.indices() {
            let next = out.last().unwrap().mutate(k)?;
            out.push(next);
        }
        Ok(out)
    }
}

impl fmt::Display for ExtendedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.data.to_rows();
        let width = self
            .data
            .entries()
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for (i, row) in rows.iter().enumerate() {
            if i == self.n && self.m() > 0 {
                writeln!(f, "{}", "-".repeat((width + 1) * self.n - 1))?;
            }
            let line: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// `B` stacked over the identity.
pub fn frame(b: &ExchangeMatrix) -> ExtendedMatrix {
    ExtendedMatrix::new(b, &IntMatrix::identity(b.n())).expect("identity has n columns")
}
