//! Command-line front end.
//!
//! Exit status: 0 when every requested certificate passes, 1 when one fails,
//! 2 on invalid input or arguments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use walshframe_core::{
    build_gff_with_limit, build_sylvester_with_limit, build_walsh_with_limit, etf_from_hadamard,
    normalize_first_row, IntMatrix, Rational, ScaledFrame, DEFAULT_MAX_ORDER,
};

use crate::artifact::{Artifact, Certificate};
use crate::channel::{
    self, Candidate, CandidateObject, ChannelConfig, ErasureSpec, Reconstruction, SignalSource,
};
use crate::format::{self, CertificateJson, Document};
use crate::report;
use crate::{Error, Result};

pub const MAX_ORDER_ENV: &str = "WALSHFRAME_MAX_ORDER";

#[derive(Debug, Parser)]
#[command(
    name = "walshframe",
    version,
    about = "Walsh-Hadamard frames and fusion frames"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Largest matrix order any constructor may build.
    #[arg(long, global = true, env = MAX_ORDER_ENV, default_value_t = DEFAULT_MAX_ORDER)]
    pub max_order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sylvester Hadamard matrix of order 2^k.
    GenHadamard {
        #[arg(long)]
        k: u32,
    },
    /// Sequency-ordered Walsh matrix of order 2^k.
    GenWalsh {
        #[arg(long)]
        k: u32,
    },
    /// Equiangular tight frame from a Hadamard matrix.
    GenEtf {
        /// Order of the Walsh matrix to start from (a power of two, at least 2).
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        order: Option<usize>,
        /// Hadamard or Walsh matrix file; normalized before use.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Walsh-Hadamard fusion frame with parameters (n, m).
    GenGff {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
    },
    /// Re-run every applicable certificate on a file.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the erasure/noise channel on one object.
    Simulate(SimulateArgs),
    /// Run the channel on several objects and rank them by mean MSE.
    Compare(CompareArgs),
    /// Convert a file to another format.
    Export {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    /// JSON channel configuration; replaces the individual flags.
    #[arg(long, conflicts_with_all = ["noise_std", "erase", "trials", "seed", "mode"])]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub noise_std: Option<f64>,
    /// none | fixed:i,j,... | random:k
    #[arg(long)]
    pub erase: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Fixed signal x1,x2,...; a random unit vector per trial otherwise.
    #[arg(long, allow_hyphen_values = true)]
    pub signal: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ls,
    Naive,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Frame or fusion frame file.
    #[arg(long, conflicts_with = "object", required_unless_present = "object")]
    pub input: Option<PathBuf>,
    /// etf:N | basis:M | gff:n,m | file:PATH
    #[arg(long)]
    pub object: Option<String>,
    #[command(flatten)]
    pub channel: ChannelArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// etf:N | basis:M | gff:n,m | file:PATH (repeatable)
    #[arg(long = "candidate", required = true)]
    pub candidates: Vec<String>,
    #[command(flatten)]
    pub channel: ChannelArgs,
}

/// Result of one invocation before it is written anywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    /// Diagnostics for stderr.
    pub messages: Vec<String>,
    pub certificates_passed: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome {
            output,
            messages: Vec::new(),
            certificates_passed: true,
        }
    }
}

pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for m in &outcome.messages {
                eprintln!("{m}");
            }
            if let Err(e) = emit(&outcome.output, cli.output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.certificates_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let limit = cli.max_order;
    match &cli.command {
        Command::GenHadamard { k } => {
            let a = Artifact::Hadamard(build_sylvester_with_limit(*k, limit)?);
            render_generated(&a, cli.format)
        }
        Command::GenWalsh { k } => {
            let w = build_walsh_with_limit(*k, limit)?;
            render_generated(&Artifact::Walsh(w), cli.format)
        }
        Command::GenEtf { order, input } => {
            let h = match (order, input) {
                (Some(n), _) => {
                    if *n < 2 || !n.is_power_of_two() {
                        return Err(Error::Usage(format!(
                            "--order must be a power of two and at least 2, got {n}"
                        )));
                    }
                    build_walsh_with_limit(n.trailing_zeros(), limit)?.into_base()
                }
                (None, Some(path)) => match format::read_artifact(path)?.0 {
                    Artifact::Hadamard(h) => h,
                    Artifact::Walsh(w) => w.into_base(),
                    other => {
                        return Err(Error::Document(format!(
                            "expected a hadamard or walsh matrix, found {}",
                            other.kind()
                        )))
                    }
                },
                (None, None) => unreachable!("clap requires --order or --input"),
            };
            if h.order() > limit {
                return Err(walshframe_core::Error::OrderTooLarge {
                    log_order: h.order().ilog2(),
                    max_order: limit,
                }
                .into());
            }
            let f = etf_from_hadamard(&normalize_first_row(&h))?;
            render_generated(&Artifact::Frame(f), cli.format)
        }
        Command::GenGff { n, m } => {
            let ff = build_gff_with_limit(*n, *m, limit)?;
            render_generated(&Artifact::Fusion(ff), cli.format)
        }
        Command::Verify { input } => verify(input, cli.format),
        Command::Export { input } => {
            let (artifact, _) = format::read_artifact(input)?;
            Ok(Outcome::ok(match cli.format {
                OutputFormat::Json => {
                    let cert = artifact.certify()?;
                    format::to_json(&Document::from_artifact(&artifact, Some(&cert)))?
                }
                OutputFormat::Csv => format::to_csv(&artifact)?,
                OutputFormat::Text => report::artifact_text(&artifact),
            }))
        }
        Command::Simulate(args) => {
            let cfg = channel_config(&args.channel)?;
            let signal = signal_source(&args.channel)?;
            let candidate = match (&args.input, &args.object) {
                (Some(path), _) => candidate_from_file(&path.display().to_string(), path)?,
                (None, Some(spec)) => parse_candidate(spec, limit)?,
                (None, None) => unreachable!("clap requires --input or --object"),
            };
            let report = match &candidate.object {
                CandidateObject::Frame(f) => channel::simulate_frame(f, &cfg, &signal)?,
                CandidateObject::Fusion(ff) => channel::simulate_fusion(ff, &cfg, &signal)?,
            };
            Ok(Outcome::ok(match cli.format {
                OutputFormat::Json => format::to_json(&report)?,
                OutputFormat::Text => report::sim_report_text(&report),
                OutputFormat::Csv => return Err(no_csv("simulate")),
            }))
        }
        Command::Compare(args) => {
            let cfg = channel_config(&args.channel)?;
            let signal = signal_source(&args.channel)?;
            let candidates = args
                .candidates
                .iter()
                .map(|s| parse_candidate(s, limit))
                .collect::<Result<Vec<_>>>()?;
            let rows = channel::compare(&candidates, &cfg, &signal)?;
            Ok(Outcome::ok(match cli.format {
                OutputFormat::Json => format::to_json(&rows)?,
                OutputFormat::Text => report::comparison_text(&rows),
                OutputFormat::Csv => return Err(no_csv("compare")),
            }))
        }
    }
}

fn no_csv(what: &str) -> Error {
    Error::Usage(format!(
        "{what} output is json or text; csv carries matrices only"
    ))
}

fn render_generated(artifact: &Artifact, fmt: OutputFormat) -> Result<Outcome> {
    let cert = artifact.certify()?;
    let output = match fmt {
        OutputFormat::Json => format::to_json(&Document::from_artifact(artifact, Some(&cert)))?,
        OutputFormat::Csv => format::to_csv(artifact)?,
        OutputFormat::Text => report::artifact_text(artifact) + &report::certificate_text(&cert),
    };
    Ok(certificate_outcome(output, &cert, Vec::new()))
}

fn certificate_outcome(output: String, cert: &Certificate, mut messages: Vec<String>) -> Outcome {
    let failed = report::failed_checks(cert);
    if !failed.is_empty() {
        messages.push(format!("certificate failed: {}", failed.join(", ")));
    }
    Outcome {
        output,
        certificates_passed: cert.passed() && messages.is_empty(),
        messages,
    }
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    kind: &'static str,
    passed: bool,
    certificate: CertificateJson,
    /// Whether a certificate stored in the input agrees; absent when the
    /// input carried none.
    #[serde(skip_serializing_if = "Option::is_none")]
    embedded_matches: Option<bool>,
    warnings: Vec<&'a str>,
}

fn verify(input: &Path, fmt: OutputFormat) -> Result<Outcome> {
    let (artifact, embedded) = format::read_artifact(input)?;
    let cert = artifact.certify()?;
    let recomputed = CertificateJson::from(&cert);
    let embedded_matches = embedded.as_ref().map(|e| *e == recomputed);
    let mut messages = Vec::new();
    if embedded_matches == Some(false) {
        messages.push("embedded certificate disagrees with the recomputed one".to_string());
    }
    let output = match fmt {
        OutputFormat::Json => format::to_json(&VerifyJson {
            kind: artifact.kind(),
            passed: cert.passed(),
            certificate: recomputed,
            embedded_matches,
            warnings: artifact.warnings(),
        })?,
        OutputFormat::Text => {
            let mut text = format!("{}: {}\n", input.display(), artifact.kind());
            text += &report::certificate_text(&cert);
            if let Some(m) = embedded_matches {
                text += &format!(
                    "  embedded certificate matches: {}\n",
                    if m { "yes" } else { "no" }
                );
            }
            for w in artifact.warnings() {
                text += &format!("warning: {w}\n");
            }
            text
        }
        OutputFormat::Csv => return Err(no_csv("verify")),
    };
    Ok(certificate_outcome(output, &cert, messages))
}

fn channel_config(args: &ChannelArgs) -> Result<ChannelConfig> {
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        return serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())));
    }
    Ok(ChannelConfig {
        noise_std: args.noise_std.unwrap_or(0.0),
        erasures: match &args.erase {
            Some(s) => parse_erasures(s)?,
            None => ErasureSpec::None,
        },
        trials: args.trials.unwrap_or(1000),
        seed: args.seed.unwrap_or(0),
        reconstruction: match args.mode {
            Some(Mode::Naive) => Reconstruction::NaiveTight,
            Some(Mode::Ls) | None => Reconstruction::LeastSquares,
        },
    })
}

fn signal_source(args: &ChannelArgs) -> Result<SignalSource> {
    match &args.signal {
        None => Ok(SignalSource::RandomUnit),
        Some(s) => s
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("--signal entry '{v}': {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(SignalSource::Fixed),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|e| Error::Usage(format!("{what}: '{v}': {e}")))
        })
        .collect()
}

pub fn parse_erasures(s: &str) -> Result<ErasureSpec> {
    match s.split_once(':') {
        None if s == "none" => Ok(ErasureSpec::None),
        Some(("fixed", list)) => Ok(ErasureSpec::FixedSet {
            indices: parse_list(list, "--erase fixed")?,
        }),
        Some(("random", k)) => Ok(ErasureSpec::RandomK {
            k: k.trim()
                .parse()
                .map_err(|e| Error::Config(format!("--erase random: '{k}': {e}")))?,
        }),
        _ => Err(Error::Config(format!(
            "--erase expects none, fixed:i,j,... or random:k, got '{s}'"
        ))),
    }
}

fn candidate_from_file(name: &str, path: &Path) -> Result<Candidate> {
    let object = match format::read_artifact(path)?.0 {
        Artifact::Frame(f) => CandidateObject::Frame(f),
        Artifact::Fusion(ff) => CandidateObject::Fusion(ff),
        other => {
            return Err(Error::Document(format!(
                "{}: expected a frame or fusion_frame, found {}",
                path.display(),
                other.kind()
            )))
        }
    };
    Ok(Candidate {
        name: name.to_string(),
        object,
    })
}

pub fn parse_candidate(spec: &str, max_order: usize) -> Result<Candidate> {
    let bad = || {
        Error::Usage(format!(
            "candidate '{spec}': expected etf:N, basis:M, gff:n,m or file:PATH"
        ))
    };
    let (kind, arg) = spec.split_once(':').ok_or_else(bad)?;
    let object = match kind {
        "etf" => {
            let n: usize = arg.parse().map_err(|_| bad())?;
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::Usage(format!(
                    "candidate '{spec}': ETF order must be a power of two and at least 2"
                )));
            }
            let w = build_walsh_with_limit(n.trailing_zeros(), max_order)?;
            CandidateObject::Frame(etf_from_hadamard(w.base())?)
        }
        "basis" => {
            let m: usize = arg.parse().map_err(|_| bad())?;
            if m == 0 {
                return Err(Error::Usage(format!("candidate '{spec}': empty basis")));
            }
            if m > max_order {
                return Err(walshframe_core::Error::OrderTooLarge {
                    log_order: m.ilog2(),
                    max_order,
                }
                .into());
            }
            let rows: Vec<Vec<i64>> = (0..m)
                .map(|r| (0..m).map(|c| i64::from(r == c)).collect())
                .collect();
            let raw = IntMatrix::from_rows(&rows)?;
            CandidateObject::Frame(ScaledFrame::from_integer_columns(raw, Rational::from(1))?)
        }
        "gff" => {
            let v: Vec<u32> = parse_list(arg, "candidate gff")?;
            let [n, m] = v[..] else { return Err(bad()) };
            CandidateObject::Fusion(build_gff_with_limit(n, m, max_order)?)
        }
        "file" => return candidate_from_file(spec, Path::new(arg)),
        _ => return Err(bad()),
    };
    Ok(Candidate {
        name: spec.to_string(),
        object,
    })
}
