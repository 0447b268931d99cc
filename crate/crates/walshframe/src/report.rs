//! Plain-text rendering of artifacts, certificates and simulation results.

use std::fmt::Write;

use walshframe_core::Rational;

use crate::artifact::{Artifact, Certificate};
use crate::channel::{ChannelConfig, ComparisonRow, ErasureSpec, Reconstruction, SimReport};

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt_rational(q: Option<Rational>) -> String {
    q.map_or_else(|| "-".to_string(), |q| q.to_string())
}

fn matrix_rows(out: &mut String, rows: &[Vec<i64>]) {
    let width = rows
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

pub fn artifact_text(artifact: &Artifact) -> String {
    let mut out = String::new();
    match artifact {
        Artifact::Hadamard(h) => {
            let _ = writeln!(out, "hadamard matrix, order {}", h.order());
            matrix_rows(&mut out, &h.to_rows());
        }
        Artifact::Walsh(w) => {
            let _ = writeln!(
                out,
                "walsh matrix, order {} (k = {})",
                w.base().order(),
                w.log_order()
            );
            matrix_rows(&mut out, &w.base().to_rows());
        }
        Artifact::Frame(f) => {
            let _ = writeln!(
                out,
                "frame, {} vectors in dimension {}, scale^2 = {}",
                f.count(),
                f.ambient_dim(),
                f.scale_sq()
            );
            matrix_rows(&mut out, &f.raw().to_rows());
        }
        Artifact::Fusion(ff) => {
            let _ = writeln!(
                out,
                "fusion frame, {} subspaces in dimension {}",
                ff.len(),
                ff.ambient_dim()
            );
            for (i, s) in ff.subspaces().iter().enumerate() {
                let _ = writeln!(
                    out,
                    "subspace {i}: dim {}, scale^2 = {}",
                    s.dim(),
                    s.scale_sq()
                );
                matrix_rows(&mut out, &s.basis().to_rows());
            }
        }
    }
    for w in artifact.warnings() {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

pub fn certificate_text(cert: &Certificate) -> String {
    let mut rows: Vec<(&str, String)> = Vec::new();
    match cert {
        Certificate::Hadamard(h) => {
            rows.push(("order", h.order.to_string()));
            rows.push(("H H^t = nI", yes_no(h.hadamard).into()));
        }
        Certificate::Walsh(h, w) => {
            rows.push(("order", h.order.to_string()));
            rows.push(("H H^t = nI", yes_no(h.hadamard).into()));
            rows.push(("sequency ordered", yes_no(w.sequency_ordered).into()));
            if let Some(r) = w.first_bad_row {
                rows.push(("first bad row", r.to_string()));
            }
        }
        Certificate::Frame(f) => {
            rows.push(("tight", yes_no(f.tight).into()));
            rows.push(("A", opt_rational(f.bound_a)));
            rows.push(("equiangular", yes_no(f.equiangular).into()));
            rows.push(("alpha^2", opt_rational(f.alpha_sq)));
            rows.push(("welch equality", yes_no(f.welch_equality).into()));
            rows.push(("grassmannian (etf)", yes_no(f.grassmannian_by_etf).into()));
        }
        Certificate::Fusion(f) => {
            rows.push(("tight", yes_no(f.tight).into()));
            rows.push(("A", opt_rational(f.bound_a)));
            rows.push(("equal dimension", yes_no(f.equal_dim).into()));
            rows.push(("equi-distance", yes_no(f.equi_distance).into()));
            rows.push(("dist^2", opt_rational(f.dist_sq)));
            rows.push((
                "walsh construction",
                yes_no(f.grassmannian_by_construction).into(),
            ));
        }
    }
    rows.push(("result", if cert.passed() { "PASS" } else { "FAIL" }.into()));
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::from("certificate\n");
    for (k, v) in rows {
        let _ = writeln!(out, "  {k:<width$}  {v}");
    }
    out
}

/// Names of the certificate checks that did not hold.
pub fn failed_checks(cert: &Certificate) -> Vec<&'static str> {
    let mut failed = Vec::new();
    let mut check = |ok: bool, name| {
        if !ok {
            failed.push(name)
        }
    };
    match cert {
        Certificate::Hadamard(h) => check(h.hadamard, "hadamard"),
        Certificate::Walsh(h, w) => {
            check(h.hadamard, "hadamard");
            check(w.sequency_ordered, "sequency order");
        }
        Certificate::Frame(f) => {
            check(f.tight, "tightness");
            check(f.equiangular, "equiangularity");
            check(f.welch_equality, "welch equality");
        }
        Certificate::Fusion(f) => {
            check(f.tight, "tightness");
            check(f.equal_dim, "equal dimension");
            check(f.equi_distance, "equi-distance");
        }
    }
    failed
}

fn erasures_text(e: &ErasureSpec) -> String {
    match e {
        ErasureSpec::None => "none".into(),
        ErasureSpec::FixedSet { indices } => {
            let list: Vec<String> = indices.iter().map(usize::to_string).collect();
            format!("fixed {}", list.join(","))
        }
        ErasureSpec::RandomK { k } => format!("random {k}"),
    }
}

fn config_text(c: &ChannelConfig) -> String {
    let mode = match c.reconstruction {
        Reconstruction::LeastSquares => "least squares",
        Reconstruction::NaiveTight => "naive tight",
    };
    format!(
        "noise_std = {}, erasures = {}, trials = {}, seed = {}, mode = {mode}",
        c.noise_std,
        erasures_text(&c.erasures),
        c.trials,
        c.seed
    )
}

pub fn sim_report_text(r: &SimReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "config: {}", config_text(&r.config));
    let _ = writeln!(out, "  mean_mse         {:.6e}", r.mean_mse);
    let _ = writeln!(out, "  max_mse          {:.6e}", r.max_mse);
    let _ = writeln!(out, "  trials_run       {}", r.trials_run);
    let _ = writeln!(out, "  exact_recovery   {}", r.exact_recovery_count);
    let _ = writeln!(out, "  non_recoverable  {}", r.non_recoverable_count);
    out
}

/// Aligned table, one row per candidate, in the order given.
pub fn comparison_text(rows: &[ComparisonRow]) -> String {
    let header = [
        "name",
        "kind",
        "units",
        "mean_mse",
        "max_mse",
        "exact",
        "non_recoverable",
        "trials",
    ];
    let mut table: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        table.push(vec![
            r.name.clone(),
            r.kind.to_string(),
            r.units.to_string(),
            format!("{:.6e}", r.report.mean_mse),
            format!("{:.6e}", r.report.max_mse),
            r.report.exact_recovery_count.to_string(),
            r.report.non_recoverable_count.to_string(),
            r.report.trials_run.to_string(),
        ]);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| table.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    if let Some(first) = rows.first() {
        let _ = writeln!(out, "config: {}", config_text(&first.report.config));
    }
    for row in &table {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (cell, &w))| {
                // Text columns left-aligned, numbers right-aligned.
                if c < 2 {
                    format!("{cell:<w$}")
                } else {
                    format!("{cell:>w$}")
                }
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}
