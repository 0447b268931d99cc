//! Unit-norm frames stored as integer columns with a shared rational scale.
//!
//! Frame vector `i` is `raw[:, i] · √scale_sq`. Every certificate works
//! with squared quantities, so the square root never has to be taken
//! exactly: Gram entries are `(rawᵗ·raw)(i, j) · scale_sq` and the frame
//! operator is `raw·rawᵗ · scale_sq`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Signed, Zero};

use crate::hadamard::{validate_hadamard, SignMatrix};
use crate::matrix::{int, rational_to_f64, IntMatrix, RatMatrix};
use crate::{Error, Rational, Result};

/// Tolerance of the symmetric eigensolver used by the diagnostic bounds.
pub const EIGEN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameWarning {
    /// Order-2 Hadamard input: two antipodal points on the real line.
    DegenerateEtf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledFrame {
    raw: IntMatrix,
    scale_sq: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceReport {
    /// Square of the maximal frame correlation.
    pub max_corr_sq: Rational,
    /// Every pair `(i, j)`, `i < j`, attaining the maximum.
    pub achieving_pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameCertificate {
    pub tight: bool,
    pub bound_a: Option<Rational>,
    pub equiangular: bool,
    pub alpha_sq: Option<Rational>,
    pub welch_equality: bool,
    /// Tight and equiangular, which makes the frame Grassmannian. A false
    /// value makes no claim either way.
    pub grassmannian_by_etf: bool,
}

impl FrameCertificate {
    pub fn passed(&self) -> bool {
        self.grassmannian_by_etf
    }
}

impl ScaledFrame {
    /// Validates unit norm of every scaled column and that the columns span
    /// the ambient space.
    pub fn from_integer_columns(raw: IntMatrix, scale_sq: Rational) -> Result<Self> {
        if !scale_sq.is_positive() {
            return Err(Error::NonPositiveScale(scale_sq));
        }
        for c in 0..raw.cols() {
            let norm: i64 = raw.column(c).map(|v| v * v).sum();
            let norm_sq = int(norm) * scale_sq;
            if !norm_sq.is_one() {
                return Err(Error::NonUnitNorm { column: c, norm_sq });
            }
        }
        let rank = raw.rank();
        if rank < raw.rows() {
            return Err(Error::RankDeficient {
                rank,
                ambient: raw.rows(),
            });
        }
        Ok(Self { raw, scale_sq })
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.raw.rows()
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.raw.cols()
    }

    pub fn raw(&self) -> &IntMatrix {
        &self.raw
    }

    pub fn scale_sq(&self) -> Rational {
        self.scale_sq
    }

    pub fn warnings(&self) -> Vec<FrameWarning> {
        let mut out = Vec::new();
        if self.ambient_dim() == 1 && self.count() == 2 {
            out.push(FrameWarning::DegenerateEtf);
        }
        out
    }

    /// Frame vector `i` in floating point.
    pub fn vector(&self, i: usize) -> Vec<f64> {
        let s = libm::sqrt(rational_to_f64(&self.scale_sq));
        self.raw.column(i).map(|v| v as f64 * s).collect()
    }

    pub fn to_real(&self) -> RealFrame {
        RealFrame {
            dim: self.ambient_dim(),
            vectors: (0..self.count()).map(|i| self.vector(i)).collect(),
        }
    }

    /// Unscaled Gram matrix `rawᵗ·raw`.
    pub fn raw_gram(&self) -> IntMatrix {
        self.raw.column_gram()
    }

    pub fn gram(&self) -> RatMatrix {
        RatMatrix::scaled(&self.raw_gram(), self.scale_sq)
    }

    /// Frame operator `Σ eᵢ eᵢᵗ`.
    pub fn frame_operator(&self) -> RatMatrix {
        RatMatrix::scaled(&self.raw.row_gram(), self.scale_sq)
    }

    pub fn coherence(&self) -> Result<CoherenceReport> {
        let n = self.count();
        if n < 2 {
            return Err(Error::TooFewVectors(n));
        }
        let g = self.raw_gram();
        let mut best = 0i64;
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = g.get(i, j).abs();
                if v > best {
                    best = v;
                    pairs.clear();
                }
                if v == best {
                    pairs.push((i, j));
                }
            }
        }
        let corr = int(best) * self.scale_sq;
        Ok(CoherenceReport {
            max_corr_sq: corr * corr,
            achieving_pairs: pairs,
        })
    }

    /// `Some(A)` when the frame operator equals `A·I` exactly.
    pub fn is_tight(&self) -> Option<Rational> {
        self.raw
            .row_gram()
            .scalar_identity()
            .map(|c| int(c) * self.scale_sq)
    }

    /// `Some(α²)` when every off-diagonal Gram entry has square `α²`.
    pub fn is_equiangular(&self) -> Result<Option<Rational>> {
        let n = self.count();
        if n < 2 {
            return Err(Error::TooFewVectors(n));
        }
        let g = self.raw_gram();
        let common = g.get(0, 1).abs();
        for i in 0..n {
            for j in i + 1..n {
                if g.get(i, j).abs() != common {
                    return Ok(None);
                }
            }
        }
        let alpha = int(common) * self.scale_sq;
        Ok(Some(alpha * alpha))
    }

    pub fn grassmannian_certificate(&self) -> Result<FrameCertificate> {
        let bound_a = self.is_tight();
        let alpha_sq = self.is_equiangular()?;
        let coherence = self.coherence()?;
        let welch = welch_bound_sq(self.count(), self.ambient_dim())?;
        let tight = bound_a.is_some();
        let equiangular = alpha_sq.is_some();
        Ok(FrameCertificate {
            tight,
            bound_a,
            equiangular,
            alpha_sq,
            welch_equality: coherence.max_corr_sq == welch,
            grassmannian_by_etf: tight && equiangular,
        })
    }

    /// Analysis coefficients `(⟨x, eᵢ⟩)ᵢ`.
    pub fn analyze(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len(), self.ambient_dim())?;
        let s = libm::sqrt(rational_to_f64(&self.scale_sq));
        Ok((0..self.count())
            .map(|i| {
                self.raw
                    .column(i)
                    .zip(x)
                    .map(|(r, &xv)| r as f64 * xv)
                    .sum::<f64>()
                    * s
            })
            .collect())
    }

    /// Synthesis `Σ cᵢ eᵢ` without any normalization.
    pub fn synthesize(&self, coefficients: &[f64]) -> Result<Vec<f64>> {
        self.check_len(coefficients.len(), self.count())?;
        let s = libm::sqrt(rational_to_f64(&self.scale_sq));
        Ok((0..self.ambient_dim())
            .map(|r| {
                self.raw
                    .row(r)
                    .iter()
                    .zip(coefficients)
                    .map(|(&v, &c)| v as f64 * c)
                    .sum::<f64>()
                    * s
            })
            .collect())
    }

    /// `(1/A)·Σ cᵢ eᵢ` for a tight frame with bound `A`.
    pub fn reconstruct_tight(&self, coefficients: &[f64]) -> Result<Vec<f64>> {
        let a = self.is_tight().ok_or(Error::NotTight)?;
        let inv_a = rational_to_f64(&a.recip());
        Ok(self
            .synthesize(coefficients)?
            .into_iter()
            .map(|v| v * inv_a)
            .collect())
    }

    /// Exact analysis. The returned values are `rawᵗ·x`, that is the
    /// coefficients `⟨x, eᵢ⟩` divided by `√scale_sq`.
    pub fn analyze_exact(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(x.len(), self.ambient_dim())?;
        Ok((0..self.count())
            .map(|i| {
                self.raw
                    .column(i)
                    .zip(x)
                    .fold(Rational::zero(), |acc, (r, xv)| acc + int(r) * xv)
            })
            .collect())
    }

    /// Exact inverse of [`ScaledFrame::analyze_exact`] on a tight frame:
    /// `(scale_sq / A)·raw·c`.
    pub fn reconstruct_tight_exact(&self, coefficients: &[Rational]) -> Result<Vec<Rational>> {
        let a = self.is_tight().ok_or(Error::NotTight)?;
        self.check_len(coefficients.len(), self.count())?;
        let factor = self.scale_sq / a;
        Ok((0..self.ambient_dim())
            .map(|r| {
                self.raw
                    .row(r)
                    .iter()
                    .zip(coefficients)
                    .fold(Rational::zero(), |acc, (&v, c)| acc + int(v) * c)
                    * factor
            })
            .collect())
    }

    /// Optimal frame bounds `(A, B)` as the extreme eigenvalues of the frame
    /// operator. Diagnostic only.
    pub fn frame_bounds(&self) -> (f64, f64) {
        self.to_real().frame_bounds()
    }

    fn check_len(&self, found: usize, expected: usize) -> Result<()> {
        if found != expected {
            return Err(Error::DimensionMismatch { expected, found });
        }
        Ok(())
    }
}

/// `(N − M) / (M·(N − 1))`, the square of the lower bound on the maximal
/// correlation of `N` unit vectors in dimension `M`.
pub fn welch_bound_sq(count: usize, dim: usize) -> Result<Rational> {
    if dim == 0 || count < dim || count < 2 {
        return Err(Error::WelchDomain { count, dim });
    }
    let (n, m) = (count as i128, dim as i128);
    Ok(Rational::new(n - m, m * (n - 1)))
}

/// Equiangular tight frame from a normalized Hadamard matrix of order `n`:
/// the columns with the first row removed, scaled by `1/√(n − 1)`.
pub fn etf_from_hadamard(h: &SignMatrix) -> Result<ScaledFrame> {
    let n = h.order();
    if n < 2 {
        return Err(Error::TooFewVectors(n));
    }
    if let Some(c) = (0..n).find(|&c| h.get(0, c) != 1) {
        return Err(Error::NotNormalized(c));
    }
    if !h.is_validated() && !validate_hadamard(h).hadamard {
        return Err(Error::NotHadamard(n));
    }
    let mut data = Vec::with_capacity((n - 1) * n);
    for r in 1..n {
        data.extend(h.row(r).iter().map(|&v| v as i64));
    }
    let raw = IntMatrix::new(n - 1, n, data)?;
    ScaledFrame::from_integer_columns(raw, Rational::new(1, n as i128 - 1))
}

/// Floating-point frame for vectors without an exact integer form.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFrame {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl RealFrame {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 || vectors.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        Ok(Self { dim, vectors })
    }

    /// Normalizes each vector to unit length.
    pub fn normalized(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let mut frame = Self::new(dim, vectors)?;
        for (i, v) in frame.vectors.iter_mut().enumerate() {
            let norm = libm::sqrt(v.iter().map(|x| x * x).sum());
            if norm == 0.0 {
                return Err(Error::Invalid(alloc::format!("vector {i} is zero")));
            }
            v.iter_mut().for_each(|x| *x /= norm);
        }
        Ok(frame)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn coherence_sq(&self) -> Result<f64> {
        let n = self.count();
        if n < 2 {
            return Err(Error::TooFewVectors(n));
        }
        let mut best = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                let d: f64 = self.vectors[i]
                    .iter()
                    .zip(&self.vectors[j])
                    .map(|(a, b)| a * b)
                    .sum();
                best = best.max(d * d);
            }
        }
        Ok(best)
    }

    pub fn frame_operator(&self) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(self.dim, self.dim);
        for v in &self.vectors {
            for r in 0..self.dim {
                for c in 0..self.dim {
                    s[(r, c)] += v[r] * v[c];
                }
            }
        }
        s
    }

    /// `(A, B)`: smallest and largest eigenvalue of the frame operator.
    pub fn frame_bounds(&self) -> (f64, f64) {
        let eig = SymmetricEigen::try_new(self.frame_operator(), EIGEN_TOLERANCE, 0)
            .expect("symmetric eigensolver converges on a symmetric matrix");
        let values = eig.eigenvalues;
        (values.min(), values.max())
    }
}
