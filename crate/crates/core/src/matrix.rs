use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Dense row-major K×K matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix<T> {
    k: usize,
    data: Vec<T>,
}

impl<T: Copy + Default> SquareMatrix<T> {
    pub fn zeros(k: usize) -> Self {
        Self {
            k,
            data: vec![T::default(); k * k],
        }
    }

    pub fn from_fn(k: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(k * k);
        for r in 0..k {
            for c in 0..k {
                data.push(f(r, c));
            }
        }
        Self { k, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let k = rows.len();
        let mut data = Vec::with_capacity(k * k);
        for row in rows {
            if row.len() != k {
                return Err(Error::NotSquare {
                    rows: k,
                    cols: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { k, data })
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.k.max(1)).map(<[T]>::to_vec).collect()
    }

    /// Reorders rows and columns: entry `(r, c)` of the result is entry
    /// `(rows[r], cols[c])` of `self`.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(self.k, |r, c| self.get(rows[r], cols[c]))
    }

    pub fn map<U: Copy + Default>(&self, f: impl Fn(T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            k: self.k,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl<T: Copy> SquareMatrix<T> {
    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.k + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[row * self.k + col] = value;
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.k..(row + 1) * self.k]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

impl<T: Copy + fmt::Debug> fmt::Debug for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.k).map(|r| self.row(r)))
            .finish()
    }
}

impl<T: Copy + Serialize> Serialize for SquareMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.k))?;
        for r in 0..self.k {
            seq.serialize_element(self.row(r))?;
        }
        seq.end()
    }
}
