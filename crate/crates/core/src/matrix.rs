//! Dense integer and rational matrices with exact products and rank.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Rational, Result};

/// Largest entry magnitude accepted from external input. Keeps every
/// product and Gram accumulation comfortably inside `i64`.
pub const MAX_ENTRY: i64 = 1 << 20;

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(&v) = data.iter().find(|v| v.abs() > MAX_ENTRY) {
            return Err(Error::EntryOutOfRange(v));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).ok_or(Error::Empty)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Ragged {
                    row: i,
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

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
            m.data[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: i64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = i64> + '_ {
        (0..self.rows).map(move |r| self.data[r * self.cols + col])
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `selfᵗ · self`: inner products of the columns.
    pub fn column_gram(&self) -> IntMatrix {
        self.transpose().row_gram()
    }

    /// `self · selfᵗ`: inner products of the rows.
    pub fn row_gram(&self) -> IntMatrix {
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            let ri = self.row(i);
            for j in i..n {
                let v: i64 = ri.iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
                out.data[i * n + j] = v;
                out.data[j * n + i] = v;
            }
        }
        out
    }

    /// Columns `indices` of `self`, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(self.rows * indices.len());
        for r in 0..self.rows {
            data.extend(indices.iter().map(|&c| self.get(r, c)));
        }
        IntMatrix {
            rows: self.rows,
            cols: indices.len(),
            data,
        }
    }

    /// Horizontal concatenation; all blocks must have the same row count.
    pub fn hstack(blocks: &[&IntMatrix]) -> Result<IntMatrix> {
        let rows = blocks.first().map(|b| b.rows).ok_or(Error::Empty)?;
        let mut cols = 0;
        for b in blocks {
            if b.rows != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: b.rows,
                });
            }
            cols += b.cols;
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for b in blocks {
                data.extend_from_slice(b.row(r));
            }
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// `Some(c)` when `self == c·I`.
    pub fn scalar_identity(&self) -> Option<i64> {
        if self.rows != self.cols {
            return None;
        }
        let c = self.get(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expected = if i == j { c } else { 0 };
                if self.get(i, j) != expected {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Rank over the rationals.
    ///
    /// Elimination modulo a large prime gives a lower bound that is exact
    /// whenever it reaches full rank; otherwise the rank is recomputed with
    /// fraction-free (Bareiss) elimination over big integers.
    pub fn rank(&self) -> usize {
        let full = self.rows.min(self.cols);
        let modular = self.rank_mod_prime();
        if modular == full {
            return modular;
        }
        self.rank_bareiss()
    }

    fn rank_mod_prime(&self) -> usize {
        const P: u64 = (1 << 61) - 1;
        let reduce = |v: i64| -> u64 { (v as i128).rem_euclid(P as i128) as u64 };
        let mulmod = |a: u64, b: u64| -> u64 { ((a as u128 * b as u128) % P as u128) as u64 };
        let powmod = |mut b: u64, mut e: u64| -> u64 {
            let mut acc = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(acc, b);
                }
                b = mulmod(b, b);
                e >>= 1;
            }
            acc
        };
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<u64> = self.data.iter().map(|&v| reduce(v)).collect();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
                continue;
            };
            if pivot != rank {
                for c in 0..cols {
                    a.swap(pivot * cols + c, rank * cols + c);
                }
            }
            let inv = powmod(a[rank * cols + col], P - 2);
            for r in rank + 1..rows {
                let f = a[r * cols + col];
                if f == 0 {
                    continue;
                }
                let f = mulmod(f, inv);
                for c in col..cols {
                    let sub = mulmod(f, a[rank * cols + c]);
                    let cur = a[r * cols + c];
                    a[r * cols + c] = if cur >= sub { cur - sub } else { cur + P - sub };
                }
            }
            rank += 1;
        }
        rank
    }

    fn rank_bareiss(&self) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<BigInt> = self.data.iter().map(|&v| BigInt::from(v)).collect();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| !a[r * cols + col].is_zero()) else {
                continue;
            };
            if pivot != rank {
                for c in 0..cols {
                    a.swap(pivot * cols + c, rank * cols + c);
                }
            }
            let p = a[rank * cols + col].clone();
            for r in rank + 1..rows {
                let f = a[r * cols + col].clone();
                for c in col + 1..cols {
                    let v = (&p * &a[r * cols + c] - &f * &a[rank * cols + c]) / &prev;
                    a[r * cols + c] = v;
                }
                a[r * cols + col] = BigInt::zero();
            }
            prev = p;
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.cols)).finish()
    }
}

/// Row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// `scale · m`, entry by entry.
    pub fn scaled(m: &IntMatrix, scale: Rational) -> Self {
        Self::from_fn(m.rows(), m.cols(), |r, c| {
            scale * Rational::from(m.get(r, c) as i128)
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.data[row * self.cols + col]
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| {
                acc + self.get(i, k) * rhs.get(k, j)
            })
        }))
    }

    pub fn add(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + rhs.get(i, j)
        }))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    /// `Some(a)` when `self == a·I`.
    pub fn scalar_identity(&self) -> Option<Rational> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let a = self.get(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if (i == j && v != a) || (i != j && !v.is_zero()) {
                    return None;
                }
            }
        }
        Some(a)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(rational_to_f64).collect()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for row in self.data.chunks(self.cols.max(1)) {
            list.entry(&row.iter().map(DisplayRational).collect::<Vec<_>>());
        }
        list.finish()
    }
}

struct DisplayRational<'a>(&'a Rational);

impl fmt::Debug for DisplayRational<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self.0, f)
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub(crate) fn int(v: i64) -> Rational {
    Rational::from(v as i128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(IntMatrix::identity(3).rank(), 3);
        let m = IntMatrix::from_rows(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(z.rank(), 0);
        let col = IntMatrix::from_rows(&[[1], [0]]).unwrap();
        assert_eq!(col.rank(), 1);
    }

    #[test]
    fn bareiss_matches_modular_rank() {
        let m = IntMatrix::from_rows(&[[3, -1, 4, 1], [5, 9, -2, 6], [8, 8, 2, 7], [1, 0, 0, 0]])
            .unwrap();
        assert_eq!(m.rank_bareiss(), m.rank_mod_prime());
        let dep = IntMatrix::from_rows(&[[1, 1, 0], [0, 1, 1], [1, 2, 1], [2, 3, 1]]).unwrap();
        assert_eq!(dep.rank_bareiss(), 2);
        assert_eq!(dep.rank(), 2);
    }

    #[test]
    fn products_and_grams() {
        let a = IntMatrix::from_rows(&[[1, 1], [1, -1]]).unwrap();
        assert_eq!(a.row_gram().scalar_identity(), Some(2));
        assert_eq!(a.column_gram().scalar_identity(), Some(2));
        let b = a.mul(&a.transpose()).unwrap();
        assert_eq!(b, a.row_gram());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(IntMatrix::from_rows::<[i64; 0]>(&[]), Err(Error::Empty));
        assert!(matches!(
            IntMatrix::from_rows(&[vec![1, 2], vec![1]]),
            Err(Error::Ragged { row: 1, .. })
        ));
        assert_eq!(
            IntMatrix::new(1, 1, vec![MAX_ENTRY + 1]),
            Err(Error::EntryOutOfRange(MAX_ENTRY + 1))
        );
    }
}
