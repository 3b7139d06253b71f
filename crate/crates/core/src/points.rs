use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A set of `n` points in `R^dim`, stored row-major.
///
/// `dim == 0` is allowed and represents an empty block of columns (for
/// example "no conditioning variables"); such a set still knows its `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet<T> {
    n: usize,
    dim: usize,
    coords: Vec<T>,
}

impl<T: Scalar> PointSet<T> {
    /// Builds from row-major coordinates. All entries must be finite.
    pub fn from_flat(n: usize, dim: usize, coords: Vec<T>) -> Result<Self> {
        if coords.len() != n * dim {
            return Err(Error::LengthMismatch {
                left: coords.len(),
                right: n * dim,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(Self { n, dim, coords })
    }

    /// Builds from rows; every row must have the same length.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::from_flat(rows.len(), dim, coords)
    }

    /// A one-dimensional point set.
    pub fn from_column(values: &[T]) -> Result<Self> {
        Self::from_flat(values.len(), 1, values.to_vec())
    }

    /// Builds from columns of equal length.
    pub fn from_columns<C: AsRef<[T]>>(columns: &[C]) -> Result<Self> {
        let n = columns.first().map_or(0, |c| c.as_ref().len());
        Self::from_columns_with_len(n, columns)
    }

    /// Like [`from_columns`](Self::from_columns) but with an explicit `n`, so
    /// that zero columns still produce a set of `n` points.
    pub fn from_columns_with_len<C: AsRef<[T]>>(n: usize, columns: &[C]) -> Result<Self> {
        let dim = columns.len();
        for c in columns {
            if c.as_ref().len() != n {
                return Err(Error::LengthMismatch {
                    left: c.as_ref().len(),
                    right: n,
                });
            }
        }
        let mut coords = Vec::with_capacity(n * dim);
        for i in 0..n {
            coords.extend(columns.iter().map(|c| c.as_ref()[i]));
        }
        Self::from_flat(n, dim, coords)
    }

    /// No columns, `n` points.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            dim: 0,
            coords: Vec::new(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> + '_ {
        (0..self.n).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self.coords[i * self.dim + j]).collect()
    }

    /// Points made of the selected columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(self.n * cols.len());
        for i in 0..self.n {
            let row = self.row(i);
            coords.extend(cols.iter().map(|&j| row[j]));
        }
        Self {
            n: self.n,
            dim: cols.len(),
            coords,
        }
    }

    /// Row-wise concatenation `(self_i, other_i)`.
    pub fn hconcat(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let dim = self.dim + other.dim;
        let mut coords = Vec::with_capacity(self.n * dim);
        for i in 0..self.n {
            coords.extend_from_slice(self.row(i));
            coords.extend_from_slice(other.row(i));
        }
        Ok(Self {
            n: self.n,
            dim,
            coords,
        })
    }
}
