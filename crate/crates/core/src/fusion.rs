//! Subspaces, chordal distance and fusion frames, including the
//! Walsh–Hadamard Grassmannian fusion frame construction.
//!
//! A [`Subspace`] carries an integer basis `B` (one column per basis vector)
//! and a rational `scale_sq` such that `Bᵗ·B·scale_sq = I`. Its projection
//! is then `B·Bᵗ·scale_sq` and `tr(P₁P₂) = ‖B₁ᵗB₂‖²_F · s₁ · s₂`.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::hadamard::build_walsh_with_limit;
use crate::hadamard::DEFAULT_MAX_ORDER;
use crate::matrix::{int, rational_to_f64, IntMatrix, RatMatrix};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: IntMatrix,
    scale_sq: Rational,
}

impl Subspace {
    /// Validates that the scaled columns are exactly orthonormal.
    pub fn from_columns(basis: IntMatrix, scale_sq: Rational) -> Result<Self> {
        if !scale_sq.is_positive() {
            return Err(Error::NonPositiveScale(scale_sq));
        }
        let g = basis.column_gram();
        for i in 0..g.rows() {
            for j in i..g.cols() {
                let inner = int(g.get(i, j)) * scale_sq;
                let expected = if i == j { 1 } else { 0 };
                if inner != Rational::from(expected) {
                    return Err(Error::NonOrthonormal {
                        first: i,
                        second: j,
                        inner,
                    });
                }
            }
        }
        Ok(Self { basis, scale_sq })
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn scale_sq(&self) -> Rational {
        self.scale_sq
    }

    /// Orthogonal projection onto the subspace.
    pub fn projection(&self) -> RatMatrix {
        RatMatrix::scaled(&self.basis.row_gram(), self.scale_sq)
    }

    /// `P·x` in floating point.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: x.len(),
            });
        }
        let s = rational_to_f64(&self.scale_sq);
        let coords: Vec<f64> = (0..self.dim())
            .map(|k| {
                self.basis
                    .column(k)
                    .zip(x)
                    .map(|(b, &v)| b as f64 * v)
                    .sum()
            })
            .collect();
        Ok((0..self.ambient_dim())
            .map(|r| {
                self.basis
                    .row(r)
                    .iter()
                    .zip(&coords)
                    .map(|(&b, &c)| b as f64 * c)
                    .sum::<f64>()
                    * s
            })
            .collect())
    }

    /// `P·x` over the rationals.
    pub fn project_exact(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: x.len(),
            });
        }
        let coords: Vec<Rational> = (0..self.dim())
            .map(|k| {
                self.basis
                    .column(k)
                    .zip(x)
                    .fold(Rational::zero(), |acc, (b, v)| acc + int(b) * v)
            })
            .collect();
        Ok((0..self.ambient_dim())
            .map(|r| {
                self.basis
                    .row(r)
                    .iter()
                    .zip(&coords)
                    .fold(Rational::zero(), |acc, (&b, c)| acc + int(b) * c)
                    * self.scale_sq
            })
            .collect())
    }
}

/// `tr(P₁·P₂)` for two subspaces of the same ambient space.
pub fn trace_product(a: &Subspace, b: &Subspace) -> Result<Rational> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim(),
            found: b.ambient_dim(),
        });
    }
    let cross = a.basis.transpose().mul(&b.basis)?;
    let frob: i64 = cross.as_slice().iter().map(|v| v * v).sum();
    Ok(int(frob) * a.scale_sq * b.scale_sq)
}

/// Squared chordal distance `m − tr(P₁P₂)` between two `m`-dimensional
/// subspaces.
pub fn chordal_dist_sq(a: &Subspace, b: &Subspace) -> Result<Rational> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(Rational::from(a.dim() as i128) - trace_product(a, b)?)
}

pub fn chordal_dist(a: &Subspace, b: &Subspace) -> Result<f64> {
    Ok(libm::sqrt(rational_to_f64(&chordal_dist_sq(a, b)?)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FusionWarning {
    /// At least two subspaces are equal, as in the Walsh construction with
    /// `n = m + 1`.
    CoincidentSubspaces,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionFrame {
    ambient_dim: usize,
    subspaces: Vec<Subspace>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionCertificate {
    pub tight: bool,
    pub bound_a: Option<Rational>,
    pub equal_dim: bool,
    pub equi_distance: bool,
    pub dist_sq: Option<Rational>,
    /// The frame is exactly the Walsh–Hadamard construction for some
    /// `(n, m)`. A provenance flag, not an optimality proof.
    pub grassmannian_by_construction: bool,
}

impl FusionCertificate {
    pub fn passed(&self) -> bool {
        self.tight && self.equal_dim && self.equi_distance
    }
}

impl FusionFrame {
    /// Validates a common ambient dimension and that the subspaces jointly
    /// span it.
    pub fn new(subspaces: Vec<Subspace>) -> Result<Self> {
        let ambient_dim = subspaces
            .first()
            .map(Subspace::ambient_dim)
            .ok_or(Error::NoSubspaces)?;
        if let Some(s) = subspaces.iter().find(|s| s.ambient_dim() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: s.ambient_dim(),
            });
        }
        let blocks: Vec<&IntMatrix> = subspaces.iter().map(|s| &s.basis).collect();
        let rank = IntMatrix::hstack(&blocks)?.rank();
        if rank < ambient_dim {
            return Err(Error::RankDeficient {
                rank,
                ambient: ambient_dim,
            });
        }
        Ok(Self {
            ambient_dim,
            subspaces,
        })
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    /// Scans all pairs for coinciding subspaces.
    pub fn warnings(&self) -> Vec<FusionWarning> {
        let coincident = self
            .pairwise_trace_products()
            .into_iter()
            .any(|((i, j), t)| {
                let (a, b) = (&self.subspaces[i], &self.subspaces[j]);
                a.dim() == b.dim() && t == Rational::from(a.dim() as i128)
            });
        if coincident {
            alloc::vec![FusionWarning::CoincidentSubspaces]
        } else {
            Vec::new()
        }
    }

    /// `Some(A)` when `Σ Pᵢ = A·I` exactly.
    pub fn fusion_tight(&self) -> Option<Rational> {
        // Projection numerators B·Bᵗ are summed per distinct scale so the
        // accumulation stays in integers.
        let mut groups: Vec<(Rational, IntMatrix)> = Vec::new();
        for s in &self.subspaces {
            let p = s.basis.row_gram();
            match groups.iter_mut().find(|(scale, _)| *scale == s.scale_sq) {
                Some((_, acc)) => add_assign(acc, &p),
                None => groups.push((s.scale_sq, p)),
            }
        }
        let mut total: Option<RatMatrix> = None;
        for (scale, acc) in &groups {
            let part = RatMatrix::scaled(acc, *scale);
            total = Some(match total {
                Some(t) => t
                    .add(&part)
                    .expect("projections share the ambient dimension"),
                None => part,
            });
        }
        total?.scalar_identity()
    }

    /// Sufficient condition for tightness: the rows of the matrix whose
    /// columns are all the scaled basis vectors are pairwise orthogonal with
    /// a common squared norm, returned on success.
    pub fn lemma_row_check(&self) -> Option<Rational> {
        let m = self.ambient_dim;
        let mut common: Option<Rational> = None;
        for r1 in 0..m {
            for r2 in r1..m {
                let inner = self.subspaces.iter().fold(Rational::zero(), |acc, s| {
                    let dot: i64 = s
                        .basis
                        .row(r1)
                        .iter()
                        .zip(s.basis.row(r2))
                        .map(|(a, b)| a * b)
                        .sum();
                    acc + int(dot) * s.scale_sq
                });
                if r1 == r2 {
                    match common {
                        None => common = Some(inner),
                        Some(c) if c != inner => return None,
                        Some(_) => {}
                    }
                } else if !inner.is_zero() {
                    return None;
                }
            }
        }
        common.filter(|c| c.is_positive())
    }

    /// Pairwise `tr(PᵢPⱼ)` for `i < j`, in lexicographic order.
    pub fn pairwise_trace_products(&self) -> Vec<((usize, usize), Rational)> {
        let n = self.subspaces.len();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let t = trace_product(&self.subspaces[i], &self.subspaces[j])
                    .expect("subspaces share the ambient dimension");
                out.push(((i, j), t));
            }
        }
        out
    }

    pub fn equidistance_certificate(&self) -> Result<FusionCertificate> {
        let n = self.subspaces.len();
        if n < 2 {
            return Err(Error::TooFewSubspaces(n));
        }
        let bound_a = self.fusion_tight();
        let dim = self.subspaces[0].dim();
        let equal_dim = self.subspaces.iter().all(|s| s.dim() == dim);
        let mut dist_sq = None;
        let mut equi_distance = equal_dim;
        if equal_dim {
            let mut pairs = self.pairwise_trace_products().into_iter();
            let (_, first) = pairs.next().expect("at least two subspaces");
            equi_distance = pairs.all(|(_, t)| t == first);
            if equi_distance {
                dist_sq = Some(Rational::from(dim as i128) - first);
            }
        }
        let tight = bound_a.is_some();
        let grassmannian_by_construction =
            tight && equal_dim && equi_distance && self.walsh_parameters().is_some();
        Ok(FusionCertificate {
            tight,
            bound_a,
            equal_dim,
            equi_distance,
            dist_sq,
            grassmannian_by_construction,
        })
    }

    /// `Some((n, m))` when this fusion frame is exactly `build_gff(n, m)`.
    pub fn walsh_parameters(&self) -> Option<(u32, u32)> {
        let count = self.subspaces.len();
        let dim = self.subspaces[0].dim();
        if !count.is_power_of_two() || count < 2 || !dim.is_power_of_two() {
            return None;
        }
        let total = count.checked_mul(dim)?;
        if self.ambient_dim != total - dim {
            return None;
        }
        let n = total.trailing_zeros();
        let m = dim.trailing_zeros();
        let reference = build_gff(n, m).ok()?;
        (reference.subspaces == self.subspaces).then_some((n, m))
    }

    /// Pieces `Pᵢ·x`.
    pub fn analyze(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.subspaces.iter().map(|s| s.project(x)).collect()
    }

    /// `(1/A)·Σ pieceᵢ` on a tight fusion frame.
    pub fn reconstruct_tight(&self, pieces: &[Vec<f64>]) -> Result<Vec<f64>> {
        let a = self.fusion_tight().ok_or(Error::NotTight)?;
        self.check_pieces(pieces.len(), pieces.iter().map(Vec::len))?;
        let inv_a = rational_to_f64(&a.recip());
        let mut out = alloc::vec![0.0; self.ambient_dim];
        for piece in pieces {
            out.iter_mut().zip(piece).for_each(|(o, v)| *o += v);
        }
        out.iter_mut().for_each(|o| *o *= inv_a);
        Ok(out)
    }

    pub fn analyze_exact(&self, x: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        self.subspaces.iter().map(|s| s.project_exact(x)).collect()
    }

    pub fn reconstruct_tight_exact(&self, pieces: &[Vec<Rational>]) -> Result<Vec<Rational>> {
        let a = self.fusion_tight().ok_or(Error::NotTight)?;
        self.check_pieces(pieces.len(), pieces.iter().map(Vec::len))?;
        let mut out = alloc::vec![Rational::zero(); self.ambient_dim];
        for piece in pieces {
            out.iter_mut().zip(piece).for_each(|(o, v)| *o += v);
        }
        Ok(out.into_iter().map(|v| v / a).collect())
    }

    fn check_pieces(&self, count: usize, mut lens: impl Iterator<Item = usize>) -> Result<()> {
        if count != self.subspaces.len() {
            return Err(Error::DimensionMismatch {
                expected: self.subspaces.len(),
                found: count,
            });
        }
        if let Some(len) = lens.find(|&l| l != self.ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: len,
            });
        }
        Ok(())
    }
}

fn add_assign(acc: &mut IntMatrix, rhs: &IntMatrix) {
    for r in 0..acc.rows() {
        for c in 0..acc.cols() {
            acc.set(r, c, acc.get(r, c) + rhs.get(r, c));
        }
    }
}

pub fn build_gff(n: u32, m: u32) -> Result<FusionFrame> {
    build_gff_with_limit(n, m, DEFAULT_MAX_ORDER)
}

/// Walsh–Hadamard fusion frame: `2^(n−m)` subspaces of dimension `2^m` in
/// `F^(2^n − 2^m)`. Subspace `i` is spanned by columns `i + k·2^(n−m)`,
/// `k < 2^m`, of `W_n` with its first `2^m` rows removed, scaled by
/// `1/√(2^n − 2^m)`.
pub fn build_gff_with_limit(n: u32, m: u32, max_order: usize) -> Result<FusionFrame> {
    if m >= n {
        return Err(Error::GffDomain { n, m });
    }
    let walsh = build_walsh_with_limit(n, max_order)?;
    let w = walsh.base();
    let order = 1usize << n;
    let dim = 1usize << m;
    let count = 1usize << (n - m);
    let ambient = order - dim;
    let scale_sq = Rational::new(1, ambient as i128);
    let mut subspaces = Vec::with_capacity(count);
    for i in 0..count {
        let mut data = Vec::with_capacity(ambient * dim);
        for j in dim..order {
            data.extend((0..dim).map(|k| w.get(j, i + k * count) as i64));
        }
        let basis = IntMatrix::new(ambient, dim, data)?;
        subspaces.push(Subspace::from_columns(basis, scale_sq)?);
    }
    FusionFrame::new(subspaces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn sub(rows: &[&[i64]], scale: Rational) -> Subspace {
        Subspace::from_columns(IntMatrix::from_rows(rows).unwrap(), scale).unwrap()
    }

    #[test]
    fn subspace_validation() {
        let s = sub(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]], q(1, 1));
        assert_eq!((s.ambient_dim(), s.dim()), (4, 2));
        let whole = sub(&[&[1, 1], &[1, -1]], q(1, 2));
        assert_eq!(whole.projection(), RatMatrix::identity(2));
        let err = Subspace::from_columns(IntMatrix::from_rows(&[[1, 1], [1, 1]]).unwrap(), q(1, 2));
        assert_eq!(
            err,
            Err(Error::NonOrthonormal {
                first: 0,
                second: 1,
                inner: q(1, 1)
            })
        );
    }

    #[test]
    fn projections() {
        let line = sub(&[&[1], &[0]], q(1, 1));
        let p = line.projection();
        assert_eq!(
            p,
            RatMatrix::from_fn(2, 2, |i, j| if i == 0 && j == 0 {
                q(1, 1)
            } else {
                q(0, 1)
            })
        );
        let diag = sub(&[&[1], &[1]], q(1, 2));
        assert_eq!(diag.projection(), RatMatrix::from_fn(2, 2, |_, _| q(1, 2)));
    }

    #[test]
    fn chordal_distances() {
        let e0 = sub(&[&[1], &[0]], q(1, 1));
        let e1 = sub(&[&[0], &[1]], q(1, 1));
        assert_eq!(chordal_dist_sq(&e0, &e0).unwrap(), q(0, 1));
        assert_eq!(chordal_dist_sq(&e0, &e1).unwrap(), q(1, 1));
        assert!((chordal_dist(&e0, &e1).unwrap() - 1.0).abs() < 1e-15);
        let plane = sub(&[&[1, 0], &[0, 1]], q(1, 1));
        assert!(matches!(
            chordal_dist_sq(&e0, &plane),
            Err(Error::DimensionMismatch {
                expected: 1,
                found: 2
            })
        ));
    }

    #[test]
    fn tightness_examples() {
        let e0 = sub(&[&[1], &[0]], q(1, 1));
        let e1 = sub(&[&[0], &[1]], q(1, 1));
        let plane = sub(&[&[1, 0], &[0, 1]], q(1, 1));
        let ff = FusionFrame::new(vec![e0.clone(), e1]).unwrap();
        assert_eq!(ff.fusion_tight(), Some(q(1, 1)));
        assert_eq!(ff.lemma_row_check(), Some(q(1, 1)));
        let ff = FusionFrame::new(vec![e0.clone(), plane]).unwrap();
        assert_eq!(ff.fusion_tight(), None);
        let ff = FusionFrame::new(vec![e0.clone(), e0.clone()]);
        assert_eq!(
            ff,
            Err(Error::RankDeficient {
                rank: 1,
                ambient: 2
            })
        );
    }

    #[test]
    fn row_check_rejects_duplicate_line_in_larger_frame() {
        let e0 = sub(&[&[1], &[0]], q(1, 1));
        let e1 = sub(&[&[0], &[1]], q(1, 1));
        let ff = FusionFrame::new(vec![e0.clone(), e0, e1]).unwrap();
        assert_eq!(ff.lemma_row_check(), None);
        assert_eq!(ff.fusion_tight(), None);
    }

    #[test]
    fn coordinate_blocks_of_r4() {
        let a = sub(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]], q(1, 1));
        let b = sub(&[&[0, 0], &[0, 0], &[1, 0], &[0, 1]], q(1, 1));
        let ff = FusionFrame::new(vec![a, b]).unwrap();
        assert_eq!(ff.lemma_row_check(), Some(q(1, 1)));
        assert_eq!(ff.fusion_tight(), Some(q(1, 1)));
    }

    #[test]
    fn gff_three_one() {
        let ff = build_gff(3, 1).unwrap();
        assert_eq!((ff.len(), ff.ambient_dim()), (4, 6));
        assert!(ff.subspaces().iter().all(|s| s.dim() == 2));
        assert_eq!(ff.fusion_tight(), Some(q(4, 3)));
        assert_eq!(ff.lemma_row_check(), Some(q(4, 3)));
        for (_, t) in ff.pairwise_trace_products() {
            assert_eq!(t, q(2, 9));
        }
        let cert = ff.equidistance_certificate().unwrap();
        assert!(cert.passed() && cert.grassmannian_by_construction);
        assert_eq!(cert.dist_sq, Some(q(16, 9)));
        assert_eq!(ff.walsh_parameters(), Some((3, 1)));
        assert!(ff.warnings().is_empty());
    }

    #[test]
    fn gff_degenerate() {
        let ff = build_gff(2, 1).unwrap();
        assert_eq!((ff.len(), ff.ambient_dim()), (2, 2));
        assert_eq!(ff.fusion_tight(), Some(q(2, 1)));
        let cert = ff.equidistance_certificate().unwrap();
        assert_eq!(cert.dist_sq, Some(q(0, 1)));
        assert_eq!(ff.warnings(), vec![FusionWarning::CoincidentSubspaces]);
    }

    #[test]
    fn gff_domain() {
        assert_eq!(build_gff(2, 2), Err(Error::GffDomain { n: 2, m: 2 }));
        assert_eq!(build_gff(1, 3), Err(Error::GffDomain { n: 1, m: 3 }));
    }

    #[test]
    fn non_equidistant_lines() {
        let e0 = sub(&[&[1], &[0]], q(1, 1));
        let e1 = sub(&[&[0], &[1]], q(1, 1));
        let d = sub(&[&[1], &[1]], q(1, 2));
        let ff = FusionFrame::new(vec![e0, e1, d]).unwrap();
        let traces: Vec<_> = ff
            .pairwise_trace_products()
            .into_iter()
            .map(|(_, t)| t)
            .collect();
        assert_eq!(traces, vec![q(0, 1), q(1, 2), q(1, 2)]);
        let cert = ff.equidistance_certificate().unwrap();
        assert!(cert.equal_dim && !cert.equi_distance && cert.dist_sq.is_none());
        assert!(!cert.grassmannian_by_construction);
    }

    #[test]
    fn coordinate_axes_in_r3() {
        let axes: Vec<_> = (0..3)
            .map(|i| {
                let rows: Vec<Vec<i64>> = (0..3).map(|r| vec![(r == i) as i64]).collect();
                Subspace::from_columns(IntMatrix::from_rows(&rows).unwrap(), q(1, 1)).unwrap()
            })
            .collect();
        let ff = FusionFrame::new(axes).unwrap();
        let cert = ff.equidistance_certificate().unwrap();
        assert!(cert.tight && cert.equal_dim && cert.equi_distance);
        assert_eq!(cert.bound_a, Some(q(1, 1)));
        assert_eq!(cert.dist_sq, Some(q(1, 1)));
        assert!(!cert.grassmannian_by_construction);
    }

    #[test]
    fn too_few_subspaces() {
        let whole = sub(&[&[1, 0], &[0, 1]], q(1, 1));
        let ff = FusionFrame::new(vec![whole]).unwrap();
        assert_eq!(
            ff.equidistance_certificate(),
            Err(Error::TooFewSubspaces(1))
        );
        assert_eq!(FusionFrame::new(vec![]), Err(Error::NoSubspaces));
    }

    #[test]
    fn fusion_round_trips() {
        let ff = build_gff(3, 1).unwrap();
        let zero = ff
            .reconstruct_tight(&ff.analyze(&[0.0; 6]).unwrap())
            .unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));
        let x: Vec<Rational> = (0..6).map(|i| q(2 * i - 5, 3 + i)).collect();
        let back = ff
            .reconstruct_tight_exact(&ff.analyze_exact(&x).unwrap())
            .unwrap();
        assert_eq!(back, x);
        assert!(matches!(
            ff.reconstruct_tight(&[vec![0.0; 6]]),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 1
            })
        ));
        assert!(matches!(
            ff.analyze(&[0.0; 5]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
