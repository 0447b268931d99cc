//! Exact construction and certification of Hadamard-based frames.
//!
//! The crate builds Sylvester and sequency-ordered (Walsh) Hadamard matrices,
//! turns normalized Hadamard matrices into equiangular tight frames, and
//! partitions Walsh–Hadamard submatrices into equi-distance tight fusion
//! frames. Every certificate is decided with exact integer or rational
//! arithmetic; floating point is only used for signal analysis and for
//! diagnostic frame bounds.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod frames;
pub mod fusion;
pub mod hadamard;
pub mod matrix;

pub use error::{Error, Result};
pub use frames::{
    etf_from_hadamard, welch_bound_sq, CoherenceReport, FrameCertificate, FrameWarning, RealFrame,
    ScaledFrame,
};
pub use fusion::{
    build_gff, build_gff_with_limit, chordal_dist, chordal_dist_sq, trace_product,
    FusionCertificate, FusionFrame, FusionWarning, Subspace,
};
pub use hadamard::{
    build_sylvester, build_sylvester_with_limit, build_walsh, build_walsh_with_limit, fwht,
    fwht_natural, normalize_first_row, sequency_permutation, validate_hadamard,
    validate_walsh_order, HadamardCertificate, SignMatrix, WalshMatrix, WalshOrderCertificate,
    DEFAULT_MAX_ORDER,
};
pub use matrix::{IntMatrix, RatMatrix};

/// Exact rational scalar used by every certificate.
pub type Rational = num_rational::Ratio<i128>;
