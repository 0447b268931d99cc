//! Sylvester and Walsh (sequency-ordered) Hadamard matrices and the fast
//! Walsh–Hadamard transform.
//!
//! Sylvester matrices come from the doubling `H_{2n} = [[H, H], [H, -H]]`,
//! whose entry `(r, c)` is `(-1)^popcount(r & c)`. The Walsh matrix `W_k`
//! lists the same rows sorted by number of sign changes: sequency row `j`
//! is Sylvester row `bitrev_k(gray(j))`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Sub};

use crate::matrix::IntMatrix;
use crate::{Error, Result};

/// Largest matrix order built unless a caller passes its own limit.
pub const DEFAULT_MAX_ORDER: usize = 1 << 16;

/// Square matrix with entries in {+1, -1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    order: usize,
    entries: Vec<i8>,
    validated: bool,
}

impl SignMatrix {
    /// Checks shape and signs. The result is not marked Hadamard-validated;
    /// call [`SignMatrix::into_validated`] for that.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::Empty);
        }
        let mut entries = Vec::with_capacity(order * order);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != order {
                return Err(Error::NotSquare {
                    rows: order,
                    cols: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                match v {
                    1 => entries.push(1),
                    -1 => entries.push(-1),
                    _ => {
                        return Err(Error::NotSign {
                            row: r,
                            col: c,
                            value: v,
                        })
                    }
                }
            }
        }
        Ok(Self {
            order,
            entries,
            validated: false,
        })
    }

    /// Runs [`validate_hadamard`] and sets the validated flag on success.
    pub fn into_validated(mut self) -> Result<Self> {
        if !validate_hadamard(&self).hadamard {
            return Err(Error::NotHadamard(self.order));
        }
        self.validated = true;
        Ok(self)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// True when `H·Hᵗ = n·I` has been established, either by exact check
    /// or by construction.
    #[inline]
    pub fn is_validated(&self) -> bool {
        self.validated
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.order + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row * self.order..(row + 1) * self.order]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .chunks(self.order)
            .map(|r| r.iter().map(|&v| v as i64).collect())
            .collect()
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::new(
            self.order,
            self.order,
            self.entries.iter().map(|&v| v as i64).collect(),
        )
        .expect("sign matrices are nonempty")
    }

    /// Number of sign changes reading row `row` left to right.
    pub fn sign_changes(&self, row: usize) -> usize {
        self.row(row).windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// `self · v` with exact integer arithmetic.
    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                found: v.len(),
            });
        }
        Ok((0..self.order)
            .map(|r| self.row(r).iter().zip(v).map(|(&s, &x)| s as i64 * x).sum())
            .collect())
    }
}

impl core::fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SignMatrix")
            .field("order", &self.order)
            .field("validated", &self.validated)
            .field("rows", &self.entries.chunks(self.order).collect::<Vec<_>>())
            .finish()
    }
}

/// Hadamard matrix of order `2^log_order` whose rows are in sequency order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WalshMatrix {
    log_order: u32,
    base: SignMatrix,
}

impl WalshMatrix {
    /// Wraps a sign matrix of power-of-two order as a Walsh candidate. Row
    /// ordering is not checked here; see [`validate_walsh_order`].
    pub fn from_sign_matrix(base: SignMatrix) -> Result<Self> {
        if !base.order.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(base.order));
        }
        Ok(Self {
            log_order: base.order.trailing_zeros(),
            base,
        })
    }

    #[inline]
    pub fn log_order(&self) -> u32 {
        self.log_order
    }

    #[inline]
    pub fn base(&self) -> &SignMatrix {
        &self.base
    }

    pub fn into_base(self) -> SignMatrix {
        self.base
    }

    pub fn validate_order(&self) -> WalshOrderCertificate {
        validate_walsh_order(&self.base)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HadamardCertificate {
    pub order: usize,
    /// `H·Hᵗ = n·I` holds exactly.
    pub hadamard: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshOrderCertificate {
    pub order: usize,
    /// Every row `j` has exactly `j` sign changes and starts with +1.
    pub sequency_ordered: bool,
    /// First row violating the ordering, if any.
    pub first_bad_row: Option<usize>,
}

fn check_order(log_order: u32, max_order: usize) -> Result<usize> {
    if log_order >= usize::BITS - 1 || (1usize << log_order) > max_order {
        return Err(Error::OrderTooLarge {
            log_order,
            max_order,
        });
    }
    Ok(1 << log_order)
}

pub fn build_sylvester(log_order: u32) -> Result<SignMatrix> {
    build_sylvester_with_limit(log_order, DEFAULT_MAX_ORDER)
}

pub fn build_sylvester_with_limit(log_order: u32, max_order: usize) -> Result<SignMatrix> {
    let n = check_order(log_order, max_order)?;
    let mut entries = vec![1i8; n * n];
    let mut size = 1;
    while size < n {
        // Double the leading size×size block into the leading 2size×2size one.
        for r in 0..size {
            for c in 0..size {
                let v = entries[r * n + c];
                entries[r * n + c + size] = v;
                entries[(r + size) * n + c] = v;
                entries[(r + size) * n + c + size] = -v;
            }
        }
        size *= 2;
    }
    Ok(SignMatrix {
        order: n,
        entries,
        validated: true,
    })
}

pub fn build_walsh(log_order: u32) -> Result<WalshMatrix> {
    build_walsh_with_limit(log_order, DEFAULT_MAX_ORDER)
}

pub fn build_walsh_with_limit(log_order: u32, max_order: usize) -> Result<WalshMatrix> {
    let sylvester = build_sylvester_with_limit(log_order, max_order)?;
    let n = sylvester.order;
    let perm = sequency_permutation(log_order);
    let mut entries = Vec::with_capacity(n * n);
    for &natural in &perm {
        entries.extend_from_slice(sylvester.row(natural));
    }
    // A row permutation keeps H·Hᵗ = n·I.
    let base = SignMatrix {
        order: n,
        entries,
        validated: true,
    };
    let walsh = WalshMatrix { log_order, base };
    debug_assert!(walsh.validate_order().sequency_ordered);
    Ok(walsh)
}

/// `perm[j]` is the Sylvester (natural-order) row holding sequency row `j`.
pub fn sequency_permutation(log_order: u32) -> Vec<usize> {
    let n = 1usize << log_order;
    (0..n)
        .map(|j| {
            let gray = j ^ (j >> 1);
            if log_order == 0 {
                0
            } else {
                gray.reverse_bits() >> (usize::BITS - log_order)
            }
        })
        .collect()
}

/// Exact check of `H·Hᵗ = n·I` in integer arithmetic.
pub fn validate_hadamard(m: &SignMatrix) -> HadamardCertificate {
    let n = m.order;
    let mut hadamard = true;
    'outer: for i in 0..n {
        let ri = m.row(i);
        for j in i..n {
            let dot: i64 = ri.iter().zip(m.row(j)).map(|(&a, &b)| (a * b) as i64).sum();
            let expected = if i == j { n as i64 } else { 0 };
            if dot != expected {
                hadamard = false;
                break 'outer;
            }
        }
    }
    HadamardCertificate { order: n, hadamard }
}

/// Checks that row `j` has exactly `j` sign changes and that column 0 is all
/// +1. Assumes the input already passed [`validate_hadamard`].
pub fn validate_walsh_order(m: &SignMatrix) -> WalshOrderCertificate {
    let first_bad_row = (0..m.order).find(|&j| m.get(j, 0) != 1 || m.sign_changes(j) != j);
    WalshOrderCertificate {
        order: m.order,
        sequency_ordered: first_bad_row.is_none(),
        first_bad_row,
    }
}

/// Negates every column whose first entry is -1. The Hadamard property and
/// the validated flag carry over.
pub fn normalize_first_row(m: &SignMatrix) -> SignMatrix {
    let n = m.order;
    let mut entries = m.entries.clone();
    for c in 0..n {
        if m.get(0, c) == -1 {
            for r in 0..n {
                entries[r * n + c] = -entries[r * n + c];
            }
        }
    }
    SignMatrix {
        order: n,
        entries,
        validated: m.validated,
    }
}

/// In-place butterfly producing `H_k · v` with `H_k` the Sylvester matrix.
pub fn fwht_natural<T>(v: &mut [T]) -> Result<()>
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let n = v.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut half = 1;
    while half < n {
        for block in v.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half *= 2;
    }
    Ok(())
}

/// `W_k · v` in sequency order, matching [`build_walsh`] row for row.
/// Exact on integer input; `O(n log n)` additions.
pub fn fwht<T>(v: &[T]) -> Result<Vec<T>>
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let mut natural = v.to_vec();
    fwht_natural(&mut natural)?;
    let log_order = v.len().trailing_zeros();
    Ok(sequency_permutation(log_order)
        .into_iter()
        .map(|i| natural[i])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sylvester_small_orders() {
        assert_eq!(build_sylvester(0).unwrap().to_rows(), vec![vec![1]]);
        assert_eq!(
            build_sylvester(1).unwrap().to_rows(),
            vec![vec![1, 1], vec![1, -1]]
        );
        let h4 = build_sylvester(2).unwrap();
        assert_eq!(
            validate_hadamard(&h4),
            HadamardCertificate {
                order: 4,
                hadamard: true
            }
        );
        for i in 0..4 {
            assert_eq!(h4.get(0, i), 1);
            assert_eq!(h4.get(i, 0), 1);
        }
    }

    #[test]
    fn sylvester_sign_changes_are_not_sequency() {
        let h = build_sylvester(2).unwrap();
        let changes: Vec<_> = (0..4).map(|r| h.sign_changes(r)).collect();
        assert_eq!(changes, vec![0, 3, 1, 2]);
        let cert = validate_walsh_order(&h);
        assert!(!cert.sequency_ordered);
        assert_eq!(cert.first_bad_row, Some(1));
    }

    #[test]
    fn walsh_order_two_matches_sampled_functions() {
        let w = build_walsh(2).unwrap();
        assert_eq!(
            w.base().to_rows(),
            vec![
                vec![1, 1, 1, 1],
                vec![1, 1, -1, -1],
                vec![1, -1, -1, 1],
                vec![1, -1, 1, -1],
            ]
        );
        assert!(w.validate_order().sequency_ordered);
        assert_eq!(build_walsh(0).unwrap().base().to_rows(), vec![vec![1]]);
        assert!(build_walsh(0).unwrap().validate_order().sequency_ordered);
    }

    #[test]
    fn order_limit_is_enforced() {
        assert!(matches!(
            build_sylvester_with_limit(5, 16),
            Err(Error::OrderTooLarge {
                log_order: 5,
                max_order: 16
            })
        ));
        assert!(build_walsh_with_limit(4, 16).is_ok());
        assert!(matches!(build_walsh(17), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn non_hadamard_inputs() {
        let rank_one = SignMatrix::from_rows(&[[1, 1], [1, 1]]).unwrap();
        assert!(!validate_hadamard(&rank_one).hadamard);
        let ones3 = SignMatrix::from_rows(&[[1, 1, 1], [1, 1, 1], [1, 1, 1]]).unwrap();
        assert_eq!(
            validate_hadamard(&ones3),
            HadamardCertificate {
                order: 3,
                hadamard: false
            }
        );
        assert_eq!(rank_one.into_validated(), Err(Error::NotHadamard(2)));
        assert!(matches!(
            SignMatrix::from_rows(&[[1, 0], [1, 1]]),
            Err(Error::NotSign {
                row: 0,
                col: 1,
                value: 0
            })
        ));
        assert!(matches!(
            SignMatrix::from_rows(&[vec![1, 1], vec![1]]),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn normalize_negates_columns() {
        let m = SignMatrix::from_rows(&[[1, -1], [1, 1]])
            .unwrap()
            .into_validated()
            .unwrap();
        let n = normalize_first_row(&m);
        assert_eq!(n.to_rows(), vec![vec![1, 1], vec![1, -1]]);
        assert!(n.is_validated());
        let w = build_walsh(3).unwrap();
        assert_eq!(&normalize_first_row(w.base()), w.base());
    }

    #[test]
    fn fwht_small_cases() {
        assert_eq!(fwht(&[1i64, 0, 0, 0]).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(fwht(&[1i64, 1, 1, 1]).unwrap(), vec![4, 0, 0, 0]);
        assert_eq!(fwht(&[7i64]).unwrap(), vec![7]);
        assert_eq!(fwht(&[1i64, 2, 3]), Err(Error::NotPowerOfTwo(3)));
        assert_eq!(fwht::<i64>(&[]), Err(Error::NotPowerOfTwo(0)));
        let v = [0.5f64, -1.0, 2.0, 0.25];
        let w = build_walsh(2).unwrap();
        let out = fwht(&v).unwrap();
        for (j, y) in out.iter().enumerate() {
            let naive: f64 = (0..4).map(|t| w.base().get(j, t) as f64 * v[t]).sum();
            assert_eq!(*y, naive);
        }
    }
}
