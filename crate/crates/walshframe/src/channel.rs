//! Monte-Carlo erasure/noise channel for frames and fusion frames.
//!
//! A trial draws a signal, transmits its analysis coefficients (one scalar
//! per frame vector, or the ambient-coordinate vector `Pᵢx` per subspace),
//! adds i.i.d. Gaussian noise to every transmitted scalar, erases whole
//! units, and decodes from the survivors. Each trial owns a ChaCha stream
//! selected by its index, so results do not depend on scheduling.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walshframe_core::{FusionFrame, IntMatrix, ScaledFrame};

use crate::{Error, Result};

/// Trials with squared error below this count as exact recoveries.
pub const EXACT_RECOVERY_THRESHOLD: f64 = 1e-20;

/// Singular values below this fraction of the largest are treated as zero
/// by the least-squares decoder.
pub const PINV_RELATIVE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ErasureSpec {
    #[default]
    None,
    FixedSet {
        indices: Vec<usize>,
    },
    RandomK {
        k: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reconstruction {
    /// Pseudo-inverse of the surviving analysis map.
    #[default]
    LeastSquares,
    /// `(1/A)·Σ` over the survivors; needs a tight frame.
    NaiveTight,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub noise_std: f64,
    #[serde(default)]
    pub erasures: ErasureSpec,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub reconstruction: Reconstruction,
}

impl ChannelConfig {
    pub fn validate(&self, units: usize) -> Result<()> {
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return Err(Error::Config(format!(
                "noise_std must be finite and nonnegative, got {}",
                self.noise_std
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        match &self.erasures {
            ErasureSpec::None => {}
            ErasureSpec::RandomK { k } => {
                if *k >= units {
                    return Err(Error::Config(format!(
                        "random_k erases {k} of {units} units; k must be less than {units}"
                    )));
                }
            }
            ErasureSpec::FixedSet { indices } => {
                let mut seen = vec![false; units];
                for &i in indices {
                    if i >= units {
                        return Err(Error::Config(format!(
                            "erasure index {i} out of range for {units} units"
                        )));
                    }
                    if std::mem::replace(&mut seen[i], true) {
                        return Err(Error::Config(format!("erasure index {i} repeated")));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum SignalSource {
    /// Uniform on the unit sphere.
    #[default]
    RandomUnit,
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub mean_mse: f64,
    pub max_mse: f64,
    pub trials_run: usize,
    pub exact_recovery_count: usize,
    /// Trials whose survivors did not span the space. The minimum-norm
    /// estimate is still scored.
    pub non_recoverable_count: usize,
    pub config: ChannelConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub signal: Vec<f64>,
    pub estimate: Vec<f64>,
    pub survivors: Vec<usize>,
    pub recoverable: bool,
    pub mse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CandidateObject {
    Frame(ScaledFrame),
    Fusion(FusionFrame),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub name: String,
    pub object: CandidateObject,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub name: String,
    pub kind: &'static str,
    pub units: usize,
    pub report: SimReport,
}

enum Units<'a> {
    Vectors(&'a ScaledFrame),
    Subspaces(&'a FusionFrame),
}

struct Decoder {
    recoverable: bool,
    pinv: DMatrix<f64>,
}

/// Analysis map of one frame or fusion frame, stacked unit by unit.
struct Link<'a> {
    units: Units<'a>,
    count: usize,
    width: usize,
    ambient: usize,
    analysis: DMatrix<f64>,
    inv_bound: Option<f64>,
    decoders: Mutex<HashMap<Vec<usize>, Arc<Decoder>>>,
}

impl<'a> Link<'a> {
    fn frame(f: &'a ScaledFrame) -> Self {
        let (m, n) = (f.ambient_dim(), f.count());
        let vectors: Vec<Vec<f64>> = (0..n).map(|i| f.vector(i)).collect();
        let analysis = DMatrix::from_fn(n, m, |i, j| vectors[i][j]);
        Link {
            units: Units::Vectors(f),
            count: n,
            width: 1,
            ambient: m,
            analysis,
            inv_bound: f.is_tight().map(|a| ratio_f64(a.recip())),
            decoders: Mutex::new(HashMap::new()),
        }
    }

    fn fusion(ff: &'a FusionFrame) -> Self {
        let m = ff.ambient_dim();
        let n = ff.len();
        let projections: Vec<Vec<f64>> = ff
            .subspaces()
            .iter()
            .map(|s| s.projection().to_f64())
            .collect();
        let analysis = DMatrix::from_fn(n * m, m, |r, c| projections[r / m][(r % m) * m + c]);
        Link {
            units: Units::Subspaces(ff),
            count: n,
            width: m,
            ambient: m,
            analysis,
            inv_bound: ff.fusion_tight().map(|a| ratio_f64(a.recip())),
            decoders: Mutex::new(HashMap::new()),
        }
    }

    fn survivors_span(&self, survivors: &[usize]) -> bool {
        if survivors.is_empty() {
            return false;
        }
        let rank = match self.units {
            Units::Vectors(f) => f.raw().select_columns(survivors).rank(),
            Units::Subspaces(ff) => {
                let blocks: Vec<&IntMatrix> = survivors
                    .iter()
                    .map(|&i| ff.subspaces()[i].basis())
                    .collect();
                IntMatrix::hstack(&blocks).map(|m| m.rank()).unwrap_or(0)
            }
        };
        rank == self.ambient
    }

    fn rows(&self, survivors: &[usize]) -> Vec<usize> {
        survivors
            .iter()
            .flat_map(|&u| u * self.width..(u + 1) * self.width)
            .collect()
    }

    fn decoder(&self, survivors: &[usize]) -> Arc<Decoder> {
        if let Some(d) = self.decoders.lock().expect("decoder cache").get(survivors) {
            return d.clone();
        }
        let recoverable = self.survivors_span(survivors);
        let rows = self.rows(survivors);
        let pinv = if rows.is_empty() {
            DMatrix::zeros(self.ambient, 0)
        } else {
            let a = self.analysis.select_rows(&rows);
            let svd = a.svd(true, true);
            let eps = svd.singular_values.max() * PINV_RELATIVE_TOLERANCE;
            svd.pseudo_inverse(eps)
                .expect("SVD computed with both factors")
        };
        let d = Arc::new(Decoder { recoverable, pinv });
        self.decoders
            .lock()
            .expect("decoder cache")
            .entry(survivors.to_vec())
            .or_insert(d)
            .clone()
    }

    fn run_trial(&self, cfg: &ChannelConfig, signal: &SignalSource, trial: usize) -> TrialOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial as u64);

        let x = match signal {
            SignalSource::Fixed(v) => DVector::from_column_slice(v),
            SignalSource::RandomUnit => loop {
                let v = DVector::from_fn(self.ambient, |_, _| {
                    <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng)
                });
                let norm = v.norm();
                if norm > 0.0 {
                    break v / norm;
                }
            },
        };

        let mut y = &self.analysis * &x;
        if cfg.noise_std > 0.0 {
            let noise = Normal::new(0.0, cfg.noise_std).expect("validated noise_std");
            y.iter_mut().for_each(|v| *v += noise.sample(&mut rng));
        }

        let survivors: Vec<usize> = match &cfg.erasures {
            ErasureSpec::None => (0..self.count).collect(),
            ErasureSpec::FixedSet { indices } => {
                (0..self.count).filter(|u| !indices.contains(u)).collect()
            }
            ErasureSpec::RandomK { k } => {
                let mut erased = vec![false; self.count];
                for i in index::sample(&mut rng, self.count, *k) {
                    erased[i] = true;
                }
                (0..self.count).filter(|&u| !erased[u]).collect()
            }
        };

        let decoder = self.decoder(&survivors);
        let rows = self.rows(&survivors);
        let y_s = DVector::from_iterator(rows.len(), rows.iter().map(|&r| y[r]));
        let estimate = match cfg.reconstruction {
            Reconstruction::LeastSquares => &decoder.pinv * &y_s,
            Reconstruction::NaiveTight => {
                let inv_a = self.inv_bound.expect("naive mode checked for tightness");
                let mut acc = DVector::zeros(self.ambient);
                // Frame case: Σ cᵢ eᵢ. Fusion case: Σ Pᵢ yᵢ, i.e. each noisy
                // received piece projected back onto its subspace first.
                for (k, &u) in survivors.iter().enumerate() {
                    let block = self.analysis.rows(u * self.width, self.width);
                    acc += block.transpose() * y_s.rows(k * self.width, self.width);
                }
                acc * inv_a
            }
        };
        let mse = (&estimate - &x).norm_squared();
        TrialOutcome {
            signal: x.as_slice().to_vec(),
            estimate: estimate.as_slice().to_vec(),
            survivors,
            recoverable: decoder.recoverable,
            mse,
        }
    }

    fn simulate(
        &self,
        cfg: &ChannelConfig,
        signal: &SignalSource,
    ) -> Result<(SimReport, Vec<TrialOutcome>)> {
        cfg.validate(self.count)?;
        if let SignalSource::Fixed(v) = signal {
            if v.len() != self.ambient {
                return Err(Error::Config(format!(
                    "signal has length {}, ambient dimension is {}",
                    v.len(),
                    self.ambient
                )));
            }
        }
        if cfg.reconstruction == Reconstruction::NaiveTight && self.inv_bound.is_none() {
            return Err(Error::Config(
                "naive_tight reconstruction needs a tight frame".into(),
            ));
        }
        let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| self.run_trial(cfg, signal, t))
            .collect();
        // Fixed reduction order keeps the floating-point sums reproducible.
        let mut sum = 0.0;
        let mut max_mse = 0.0f64;
        let mut exact = 0;
        let mut non_recoverable = 0;
        for o in &outcomes {
            sum += o.mse;
            max_mse = max_mse.max(o.mse);
            exact += usize::from(o.mse < EXACT_RECOVERY_THRESHOLD);
            non_recoverable += usize::from(!o.recoverable);
        }
        let report = SimReport {
            mean_mse: sum / cfg.trials as f64,
            max_mse,
            trials_run: cfg.trials,
            exact_recovery_count: exact,
            non_recoverable_count: non_recoverable,
            config: cfg.clone(),
        };
        Ok((report, outcomes))
    }
}

fn ratio_f64(q: walshframe_core::Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub fn simulate_frame(
    f: &ScaledFrame,
    cfg: &ChannelConfig,
    signal: &SignalSource,
) -> Result<SimReport> {
    Ok(simulate_frame_detailed(f, cfg, signal)?.0)
}

/// Like [`simulate_frame`], also returning every trial in index order.
pub fn simulate_frame_detailed(
    f: &ScaledFrame,
    cfg: &ChannelConfig,
    signal: &SignalSource,
) -> Result<(SimReport, Vec<TrialOutcome>)> {
    Link::frame(f).simulate(cfg, signal)
}

pub fn simulate_fusion(
    ff: &FusionFrame,
    cfg: &ChannelConfig,
    signal: &SignalSource,
) -> Result<SimReport> {
    Ok(simulate_fusion_detailed(ff, cfg, signal)?.0)
}

pub fn simulate_fusion_detailed(
    ff: &FusionFrame,
    cfg: &ChannelConfig,
    signal: &SignalSource,
) -> Result<(SimReport, Vec<TrialOutcome>)> {
    Link::fusion(ff).simulate(cfg, signal)
}

/// Runs every candidate under the same configuration and seed schedule and
/// sorts the rows by mean squared error (stable for ties).
pub fn compare(
    candidates: &[Candidate],
    cfg: &ChannelConfig,
    signal: &SignalSource,
) -> Result<Vec<ComparisonRow>> {
    let dims: Vec<usize> = candidates
        .iter()
        .map(|c| match &c.object {
            CandidateObject::Frame(f) => f.ambient_dim(),
            CandidateObject::Fusion(ff) => ff.ambient_dim(),
        })
        .collect();
    if let Some(&first) = dims.first() {
        if let Some((c, &d)) = candidates.iter().zip(&dims).find(|(_, &d)| d != first) {
            return Err(Error::Config(format!(
                "candidate '{}' lives in dimension {d}, expected {first}",
                c.name
            )));
        }
    }
    let mut rows = candidates
        .iter()
        .map(|c| {
            let (kind, units, report) = match &c.object {
                CandidateObject::Frame(f) => ("frame", f.count(), simulate_frame(f, cfg, signal)?),
                CandidateObject::Fusion(ff) => {
                    ("fusion_frame", ff.len(), simulate_fusion(ff, cfg, signal)?)
                }
            };
            Ok(ComparisonRow {
                name: c.name.clone(),
                kind,
                units,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.report.mean_mse.total_cmp(&b.report.mean_mse));
    Ok(rows)
}
