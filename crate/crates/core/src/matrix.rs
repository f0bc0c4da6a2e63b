//! Dense integer matrices with overflow-checked arithmetic.
//!
//! Entries are stored row-major. Element access through [`IntMatrix::get`]
//! and indexing is 0-based; everything above this layer (mutation
//! directions, quiver vertices, column labels) is 1-based.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Scalar type of every matrix entry.
#[cfg(not(feature = "wide"))]
pub type Entry = i64;
#[cfg(feature = "wide")]
pub type Entry = i128;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Entry>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from row vectors. `cols` is needed to describe a
    /// matrix with no rows.
    pub fn from_rows_with_cols(rows: Vec<Vec<Entry>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    cols
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from row vectors; an empty list gives the 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<Entry>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Entry> {
        (i < self.rows && j < self.cols).then(|| self.data[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[Entry] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = Entry> + '_ {
        assert!(j < self.cols, "column {j} out of bounds");
        (0..self.rows).map(move |i| self.data[i * self.cols + j])
    }

    pub fn entries(&self) -> &[Entry] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Entry>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &IntMatrix) -> Result<Self> {
        if self.cols != below.cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot stack {} columns over {} columns",
                self.cols, below.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(Self {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    /// Rows `rows` and columns `cols` (0-based, in the order given).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        m
    }

    /// Contiguous block starting at `(row0, col0)`.
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        let r: Vec<usize> = (row0..row0 + rows).collect();
        let c: Vec<usize> = (col0..col0 + cols).collect();
        self.submatrix(&r, &c)
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc: Entry = 0;
                for l in 0..self.cols {
                    let term = self[(i, l)]
                        .checked_mul(rhs[(l, j)])
                        .ok_or(Error::ArithmeticOverflow("matrix product"))?;
                    acc = acc
                        .checked_add(term)
                        .ok_or(Error::ArithmeticOverflow("matrix product"))?;
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.first_negative().is_none()
    }

    pub fn is_nonpositive(&self) -> bool {
        self.data.iter().all(|&x| x <= 0)
    }

    /// First negative entry in row-major order as `(row, col, value)`, 0-based.
    pub fn first_negative(&self) -> Option<(usize, usize, Entry)> {
        self.data
            .iter()
            .position(|&x| x < 0)
            .map(|p| (p / self.cols, p % self.cols, self.data[p]))
    }

    /// Exact rank over the rationals, by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> Result<usize> {
        let mut a = self.clone();
        let (rows, cols) = (a.rows, a.cols);
        let mut rank = 0;
        let mut prev: Entry = 1;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot_row) = (rank..rows).find(|&r| a[(r, col)] != 0) else {
                continue;
            };
            if pivot_row != rank {
                for j in 0..cols {
                    a.data.swap(pivot_row * cols + j, rank * cols + j);
                }
            }
            let pivot = a[(rank, col)];
            for r in rank + 1..rows {
                let factor = a[(r, col)];
                for j in col..cols {
                    // (pivot * a[r][j] - factor * a[rank][j]) / prev is exact.
                    let lhs = pivot
                        .checked_mul(a[(r, j)])
                        .ok_or(Error::ArithmeticOverflow("rank elimination"))?;
                    let rhs = factor
                        .checked_mul(a[(rank, j)])
                        .ok_or(Error::ArithmeticOverflow("rank elimination"))?;
                    let diff = lhs
                        .checked_sub(rhs)
                        .ok_or(Error::ArithmeticOverflow("rank elimination"))?;
                    a[(r, j)] = diff / prev;
                }
            }
            prev = pivot;
            rank += 1;
        }
        Ok(rank)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Entry;

    fn index(&self, (i, j): (usize, usize)) -> &Entry {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds for {}x{} matrix",
            self.rows,
            self.cols
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Entry {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds for {}x{} matrix",
            self.rows,
            self.cols
        );
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for IntMatrix {
    /// Whitespace grid with right-aligned columns.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Entry>>::deserialize(deserializer)?;
        IntMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
