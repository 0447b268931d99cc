//! The objects the toolkit constructs, imports and certifies.

use walshframe_core::{
    validate_hadamard, validate_walsh_order, FrameCertificate, FrameWarning, FusionCertificate,
    FusionFrame, FusionWarning, HadamardCertificate, ScaledFrame, SignMatrix, WalshMatrix,
    WalshOrderCertificate,
};

use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Artifact {
    Hadamard(SignMatrix),
    Walsh(WalshMatrix),
    Frame(ScaledFrame),
    Fusion(FusionFrame),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Hadamard(HadamardCertificate),
    Walsh(HadamardCertificate, WalshOrderCertificate),
    Frame(FrameCertificate),
    Fusion(FusionCertificate),
}

impl Certificate {
    pub fn passed(&self) -> bool {
        match self {
            Certificate::Hadamard(h) => h.hadamard,
            Certificate::Walsh(h, w) => h.hadamard && w.sequency_ordered,
            Certificate::Frame(f) => f.passed(),
            Certificate::Fusion(f) => f.passed(),
        }
    }
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Hadamard(_) => "hadamard",
            Artifact::Walsh(_) => "walsh",
            Artifact::Frame(_) => "frame",
            Artifact::Fusion(_) => "fusion_frame",
        }
    }

    /// Runs every certificate that applies to this kind of object.
    pub fn certify(&self) -> Result<Certificate> {
        Ok(match self {
            Artifact::Hadamard(m) => Certificate::Hadamard(validate_hadamard(m)),
            Artifact::Walsh(w) => {
                Certificate::Walsh(validate_hadamard(w.base()), validate_walsh_order(w.base()))
            }
            Artifact::Frame(f) => Certificate::Frame(f.grassmannian_certificate()?),
            Artifact::Fusion(ff) => Certificate::Fusion(ff.equidistance_certificate()?),
        })
    }

    pub fn warnings(&self) -> Vec<&'static str> {
        match self {
            Artifact::Frame(f) => f
                .warnings()
                .into_iter()
                .map(|w| match w {
                    FrameWarning::DegenerateEtf => "degenerate-etf",
                })
                .collect(),
            Artifact::Fusion(ff) => ff
                .warnings()
                .into_iter()
                .map(|w| match w {
                    FusionWarning::CoincidentSubspaces => "coincident-subspaces",
                })
                .collect(),
            _ => Vec::new(),
        }
    }
}
