//! JSON and CSV interchange.
//!
//! JSON documents are tagged by `kind`. Rationals are `{num, den}` pairs in
//! lowest terms with a positive denominator, and matrices are arrays of
//! rows. Serialization is deterministic so identical objects always produce
//! identical bytes.
//!
//! CSV carries the raw integer matrix only, preceded by one header line:
//!
//! ```text
//! # kind=frame scale_sq=1/7
//! 1,1,1,1,-1,-1,-1,-1
//! ...
//! ```
//!
//! Fusion frames are written as the concatenation of their bases with the
//! per-subspace column counts in a `dims=` field.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use walshframe_core::{
    FrameCertificate, FusionCertificate, FusionFrame, HadamardCertificate, IntMatrix, Rational,
    ScaledFrame, SignMatrix, Subspace, WalshMatrix, WalshOrderCertificate,
};

use crate::artifact::{Artifact, Certificate};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: i128,
    pub den: i128,
}

impl From<Rational> for RationalJson {
    fn from(q: Rational) -> Self {
        // `Ratio` keeps itself reduced with a positive denominator.
        RationalJson {
            num: *q.numer(),
            den: *q.denom(),
        }
    }
}

impl TryFrom<RationalJson> for Rational {
    type Error = Error;

    fn try_from(q: RationalJson) -> Result<Rational> {
        if q.den == 0 {
            return Err(Error::Document("rational with zero denominator".into()));
        }
        Ok(Rational::new(q.num, q.den))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HadamardCertificateJson {
    pub order: usize,
    pub hadamard: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequency_ordered: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameCertificateJson {
    pub tight: bool,
    pub bound_a: Option<RationalJson>,
    pub equiangular: bool,
    pub alpha_sq: Option<RationalJson>,
    pub welch_equality: bool,
    pub grassmannian_by_etf: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionCertificateJson {
    pub tight: bool,
    pub bound_a: Option<RationalJson>,
    pub equal_dim: bool,
    pub equi_distance: bool,
    pub dist_sq: Option<RationalJson>,
    pub grassmannian_by_construction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CertificateJson {
    Hadamard(HadamardCertificateJson),
    Frame(FrameCertificateJson),
    Fusion(FusionCertificateJson),
}

impl From<&HadamardCertificate> for HadamardCertificateJson {
    fn from(c: &HadamardCertificate) -> Self {
        HadamardCertificateJson {
            order: c.order,
            hadamard: c.hadamard,
            sequency_ordered: None,
        }
    }
}

impl From<&FrameCertificate> for FrameCertificateJson {
    fn from(c: &FrameCertificate) -> Self {
        FrameCertificateJson {
            tight: c.tight,
            bound_a: c.bound_a.map(Into::into),
            equiangular: c.equiangular,
            alpha_sq: c.alpha_sq.map(Into::into),
            welch_equality: c.welch_equality,
            grassmannian_by_etf: c.grassmannian_by_etf,
        }
    }
}

impl From<&FusionCertificate> for FusionCertificateJson {
    fn from(c: &FusionCertificate) -> Self {
        FusionCertificateJson {
            tight: c.tight,
            bound_a: c.bound_a.map(Into::into),
            equal_dim: c.equal_dim,
            equi_distance: c.equi_distance,
            dist_sq: c.dist_sq.map(Into::into),
            grassmannian_by_construction: c.grassmannian_by_construction,
        }
    }
}

fn walsh_certificate_json(
    h: &HadamardCertificate,
    w: &WalshOrderCertificate,
) -> HadamardCertificateJson {
    HadamardCertificateJson {
        order: h.order,
        hadamard: h.hadamard,
        sequency_ordered: Some(w.sequency_ordered),
    }
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        match c {
            Certificate::Hadamard(h) => CertificateJson::Hadamard(h.into()),
            Certificate::Walsh(h, w) => CertificateJson::Hadamard(walsh_certificate_json(h, w)),
            Certificate::Frame(f) => CertificateJson::Frame(f.into()),
            Certificate::Fusion(f) => CertificateJson::Fusion(f.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HadamardDocument {
    pub kind: String,
    pub order: usize,
    pub entries: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<HadamardCertificateJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalshDocument {
    pub kind: String,
    pub log_order: u32,
    pub order: usize,
    pub entries: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<HadamardCertificateJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDocument {
    pub kind: String,
    pub ambient_dim: usize,
    pub count: usize,
    pub scale_sq: RationalJson,
    pub raw: Vec<Vec<i64>>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<FrameCertificateJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionDocument {
    pub kind: String,
    pub ambient_dim: usize,
    pub scale_sq: RationalJson,
    pub subspaces: Vec<Vec<Vec<i64>>>,
    /// Per-subspace scales, present only when they are not all equal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace_scale_sq: Option<Vec<RationalJson>>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<FusionCertificateJson>,
}

/// A JSON document, discriminated by its `kind` field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Document {
    Hadamard(HadamardDocument),
    Walsh(WalshDocument),
    Frame(FrameDocument),
    FusionFrame(FusionDocument),
}

impl Document {
    pub fn from_json(text: &str) -> Result<Document> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let kind = value
            .get("kind")
            .and_then(serde_json::Value::as_str)
            .ok_or_else(|| Error::Document("missing string field 'kind'".into()))?;
        Ok(match kind {
            "hadamard" => Document::Hadamard(serde_json::from_value(value)?),
            "walsh" => Document::Walsh(serde_json::from_value(value)?),
            "frame" => Document::Frame(serde_json::from_value(value)?),
            "fusion_frame" => Document::FusionFrame(serde_json::from_value(value)?),
            other => return Err(Error::Document(format!("unknown kind '{other}'"))),
        })
    }

    /// Builds the canonical document, optionally embedding a certificate.
    pub fn from_artifact(artifact: &Artifact, certificate: Option<&Certificate>) -> Document {
        let warnings: Vec<String> = artifact.warnings().into_iter().map(String::from).collect();
        match artifact {
            Artifact::Hadamard(m) => Document::Hadamard(HadamardDocument {
                kind: artifact.kind().into(),
                order: m.order(),
                entries: m.to_rows(),
                certificate: match certificate {
                    Some(Certificate::Hadamard(h)) => Some(h.into()),
                    _ => None,
                },
            }),
            Artifact::Walsh(w) => Document::Walsh(WalshDocument {
                kind: artifact.kind().into(),
                log_order: w.log_order(),
                order: w.base().order(),
                entries: w.base().to_rows(),
                certificate: match certificate {
                    Some(Certificate::Walsh(h, o)) => Some(walsh_certificate_json(h, o)),
                    _ => None,
                },
            }),
            Artifact::Frame(f) => Document::Frame(FrameDocument {
                kind: artifact.kind().into(),
                ambient_dim: f.ambient_dim(),
                count: f.count(),
                scale_sq: f.scale_sq().into(),
                raw: f.raw().to_rows(),
                warnings,
                certificate: match certificate {
                    Some(Certificate::Frame(c)) => Some(c.into()),
                    _ => None,
                },
            }),
            Artifact::Fusion(ff) => {
                let scales: Vec<Rational> = ff.subspaces().iter().map(Subspace::scale_sq).collect();
                let uniform = scales.iter().all(|s| *s == scales[0]);
                Document::FusionFrame(FusionDocument {
                    kind: artifact.kind().into(),
                    ambient_dim: ff.ambient_dim(),
                    scale_sq: scales[0].into(),
                    subspaces: ff.subspaces().iter().map(|s| s.basis().to_rows()).collect(),
                    subspace_scale_sq: (!uniform)
                        .then(|| scales.iter().map(|&s| s.into()).collect()),
                    warnings,
                    certificate: match certificate {
                        Some(Certificate::Fusion(c)) => Some(c.into()),
                        _ => None,
                    },
                })
            }
        }
    }

    /// Rebuilds and validates the object. The embedded certificate, if any,
    /// is returned alongside so callers can compare it with a fresh one.
    pub fn into_artifact(self) -> Result<(Artifact, Option<CertificateJson>)> {
        match self {
            Document::Hadamard(HadamardDocument {
                order,
                entries,
                certificate,
                ..
            }) => {
                check_len("order", order, entries.len())?;
                let m = SignMatrix::from_rows(&entries)?;
                Ok((
                    Artifact::Hadamard(m),
                    certificate.map(CertificateJson::Hadamard),
                ))
            }
            Document::Walsh(WalshDocument {
                log_order,
                order,
                entries,
                certificate,
                ..
            }) => {
                check_len("order", order, entries.len())?;
                let w = WalshMatrix::from_sign_matrix(SignMatrix::from_rows(&entries)?)?;
                check_len("log_order", log_order as usize, w.log_order() as usize)?;
                Ok((
                    Artifact::Walsh(w),
                    certificate.map(CertificateJson::Hadamard),
                ))
            }
            Document::Frame(FrameDocument {
                ambient_dim,
                count,
                scale_sq,
                raw,
                certificate,
                ..
            }) => {
                let raw = IntMatrix::from_rows(&raw)?;
                check_len("ambient_dim", ambient_dim, raw.rows())?;
                check_len("count", count, raw.cols())?;
                let f = ScaledFrame::from_integer_columns(raw, scale_sq.try_into()?)?;
                Ok((Artifact::Frame(f), certificate.map(CertificateJson::Frame)))
            }
            Document::FusionFrame(FusionDocument {
                ambient_dim,
                scale_sq,
                subspaces,
                subspace_scale_sq,
                certificate,
                ..
            }) => {
                let default_scale: Rational = scale_sq.try_into()?;
                let scales: Vec<Rational> = match subspace_scale_sq {
                    Some(list) => {
                        check_len("subspace_scale_sq", subspaces.len(), list.len())?;
                        list.into_iter()
                            .map(Rational::try_from)
                            .collect::<Result<_>>()?
                    }
                    None => vec![default_scale; subspaces.len()],
                };
                let subspaces = subspaces
                    .iter()
                    .zip(scales)
                    .map(|(rows, s)| Ok(Subspace::from_columns(IntMatrix::from_rows(rows)?, s)?))
                    .collect::<Result<Vec<_>>>()?;
                let ff = FusionFrame::new(subspaces)?;
                check_len("ambient_dim", ambient_dim, ff.ambient_dim())?;
                Ok((
                    Artifact::Fusion(ff),
                    certificate.map(CertificateJson::Fusion),
                ))
            }
        }
    }
}

fn check_len(field: &str, declared: usize, actual: usize) -> Result<()> {
    if declared != actual {
        return Err(Error::Document(format!(
            "{field} is {declared} but the data implies {actual}"
        )));
    }
    Ok(())
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv(artifact: &Artifact) -> Result<String> {
    let (scale, rows, dims) = match artifact {
        Artifact::Hadamard(m) => (Rational::from(1), m.to_rows(), None),
        Artifact::Walsh(w) => (Rational::from(1), w.base().to_rows(), None),
        Artifact::Frame(f) => (f.scale_sq(), f.raw().to_rows(), None),
        Artifact::Fusion(ff) => {
            let scale = ff.subspaces()[0].scale_sq();
            if ff.subspaces().iter().any(|s| s.scale_sq() != scale) {
                return Err(Error::Document(
                    "CSV needs a common scale_sq across subspaces; use JSON".into(),
                ));
            }
            let blocks: Vec<&IntMatrix> = ff.subspaces().iter().map(Subspace::basis).collect();
            let stacked = IntMatrix::hstack(&blocks)?;
            let dims: Vec<String> = ff.subspaces().iter().map(|s| s.dim().to_string()).collect();
            (scale, stacked.to_rows(), Some(dims.join(",")))
        }
    };
    let mut out = format!("# kind={} scale_sq={}", artifact.kind(), scale);
    if let Some(d) = dims {
        out.push_str(&format!(" dims={d}"));
    }
    out.push('\n');
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out.into_bytes());
    for row in rows {
        w.write_record(row.iter().map(i64::to_string))
            .map_err(|e| csv_error(0, e))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Document(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of integers is ASCII"))
}

fn csv_error(header_line: usize, e: csv::Error) -> Error {
    let line = e
        .position()
        .map_or(header_line + 1, |p| header_line + p.line() as usize);
    let message = match e.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => format!("row has {len} entries, expected {expected_len}"),
        _ => e.to_string(),
    };
    Error::Csv { line, message }
}

pub fn from_csv(text: &str) -> Result<Artifact> {
    let mut header_line = 0;
    let mut rest = text;
    let header = loop {
        let (line, tail) = rest.split_once('\n').unwrap_or((rest, ""));
        header_line += 1;
        rest = tail;
        if !line.trim().is_empty() {
            break line;
        }
        if rest.is_empty() {
            return Err(Error::Csv {
                line: 1,
                message: "empty input".into(),
            });
        }
    };
    let header = header.trim().strip_prefix('#').ok_or(Error::Csv {
        line: header_line,
        message: "missing '# kind=... scale_sq=...' header".into(),
    })?;
    let mut kind = None;
    let mut scale = Rational::from(1);
    let mut dims: Option<Vec<usize>> = None;
    for field in header.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or(Error::Csv {
            line: 1,
            message: format!("malformed header field '{field}'"),
        })?;
        let bad = |what: &str| Error::Csv {
            line: 1,
            message: format!("bad {what} '{value}'"),
        };
        match key {
            "kind" => kind = Some(value.to_string()),
            "scale_sq" => scale = value.parse().map_err(|_| bad("scale_sq"))?,
            "dims" => {
                dims = Some(
                    value
                        .split(',')
                        .map(|d| d.parse().map_err(|_| bad("dims")))
                        .collect::<Result<_>>()?,
                )
            }
            _ => {
                return Err(Error::Csv {
                    line: 1,
                    message: format!("unknown header field '{key}'"),
                })
            }
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(rest.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(header_line, e))?;
        let line = header_line + record.position().map_or(0, |p| p.line() as usize);
        let row = record
            .iter()
            .map(|v| {
                v.parse::<i64>().map_err(|_| Error::Csv {
                    line,
                    message: format!("'{v}' is not an integer"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    match kind.as_deref() {
        Some("hadamard") => Ok(Artifact::Hadamard(SignMatrix::from_rows(&rows)?)),
        Some("walsh") => Ok(Artifact::Walsh(WalshMatrix::from_sign_matrix(
            SignMatrix::from_rows(&rows)?,
        )?)),
        Some("frame") => Ok(Artifact::Frame(ScaledFrame::from_integer_columns(
            IntMatrix::from_rows(&rows)?,
            scale,
        )?)),
        Some("fusion_frame") => {
            let dims = dims.ok_or(Error::Csv {
                line: 1,
                message: "fusion_frame needs dims=".into(),
            })?;
            let stacked = IntMatrix::from_rows(&rows)?;
            if dims.iter().sum::<usize>() != stacked.cols() {
                return Err(Error::Csv {
                    line: 1,
                    message: format!(
                        "dims sum to {} but rows have {} columns",
                        dims.iter().sum::<usize>(),
                        stacked.cols()
                    ),
                });
            }
            let mut start = 0;
            let mut subspaces = Vec::with_capacity(dims.len());
            for d in dims {
                let cols: Vec<usize> = (start..start + d).collect();
                subspaces.push(Subspace::from_columns(
                    stacked.select_columns(&cols),
                    scale,
                )?);
                start += d;
            }
            Ok(Artifact::Fusion(FusionFrame::new(subspaces)?))
        }
        Some(other) => Err(Error::Csv {
            line: 1,
            message: format!("unknown kind '{other}'"),
        }),
        None => Err(Error::Csv {
            line: 1,
            message: "header lacks kind=".into(),
        }),
    }
}

/// Reads JSON or CSV, detected from the first non-blank character.
pub fn read_artifact(path: &Path) -> Result<(Artifact, Option<CertificateJson>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_artifact(&text)
}

pub fn parse_artifact(text: &str) -> Result<(Artifact, Option<CertificateJson>)> {
    if text.trim_start().starts_with('#') {
        Ok((from_csv(text)?, None))
    } else {
        Document::from_json(text)?.into_artifact()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use walshframe_core::{build_gff, build_walsh, etf_from_hadamard};

    #[test]
    fn rationals_serialize_in_lowest_terms() {
        let q: RationalJson = Rational::new(6, -8).into();
        assert_eq!(q, RationalJson { num: -3, den: 4 });
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"{"num":-3,"den":4}"#);
        let back: Rational = RationalJson { num: 2, den: -4 }.try_into().unwrap();
        assert_eq!(back, Rational::new(-1, 2));
        assert!(Rational::try_from(RationalJson { num: 1, den: 0 }).is_err());
    }

    #[test]
    fn walsh_json_is_byte_stable() {
        let a = Artifact::Walsh(build_walsh(1).unwrap());
        let cert = a.certify().unwrap();
        let json = to_json(&Document::from_artifact(&a, Some(&cert))).unwrap();
        assert_eq!(
            json,
            "{\n  \"kind\": \"walsh\",\n  \"log_order\": 1,\n  \"order\": 2,\n  \"entries\": [\n    [\n      1,\n      1\n    ],\n    [\n      1,\n      -1\n    ]\n  ],\n  \"certificate\": {\n    \"order\": 2,\n    \"hadamard\": true,\n    \"sequency_ordered\": true\n  }\n}\n"
        );
    }

    #[test]
    fn frame_csv_round_trip() {
        let f = etf_from_hadamard(build_walsh(2).unwrap().base()).unwrap();
        let a = Artifact::Frame(f);
        let csv = to_csv(&a).unwrap();
        assert_eq!(
            csv,
            "# kind=frame scale_sq=1/3\n1,1,-1,-1\n1,-1,-1,1\n1,-1,1,-1\n"
        );
        assert_eq!(from_csv(&csv).unwrap(), a);
    }

    #[test]
    fn fusion_csv_round_trip() {
        let a = Artifact::Fusion(build_gff(3, 1).unwrap());
        let csv = to_csv(&a).unwrap();
        assert!(csv.starts_with("# kind=fusion_frame scale_sq=1/6 dims=2,2,2,2\n"));
        assert_eq!(from_csv(&csv).unwrap(), a);
    }

    #[test]
    fn csv_errors_name_the_line() {
        let err = from_csv("# kind=frame scale_sq=1\n1,0\n0,x\n").unwrap_err();
        assert!(matches!(err, Error::Csv { line: 3, .. }), "{err}");
        assert!(matches!(from_csv("1,0\n"), Err(Error::Csv { line: 1, .. })));
        let ragged = from_csv("\n# kind=frame scale_sq=1\n1,0\n0\n").unwrap_err();
        assert!(matches!(ragged, Error::Csv { line: 4, .. }), "{ragged}");
        assert!(from_csv("# kind=frame scale_sq=1/0\n1\n").is_err());
        assert!(matches!(
            from_csv("# kind=cube\n1\n"),
            Err(Error::Csv { .. })
        ));
    }

    #[test]
    fn document_dimension_checks() {
        let doc = r#"{"kind":"frame","ambient_dim":3,"count":2,"scale_sq":{"num":1,"den":1},"raw":[[1,0],[0,1]]}"#;
        assert!(matches!(parse_artifact(doc), Err(Error::Document(_))));
        let doc = r#"{"kind":"hadamard","order":2,"entries":[[1,1],[1,-1]],"extra":1}"#;
        assert!(matches!(parse_artifact(doc), Err(Error::Json(_))));
    }

    #[test]
    fn mixed_scale_fusion_frames_use_per_subspace_scales() {
        let e0 = Subspace::from_columns(
            IntMatrix::from_rows(&[[1], [0]]).unwrap(),
            Rational::from(1),
        )
        .unwrap();
        let d = Subspace::from_columns(
            IntMatrix::from_rows(&[[1], [1]]).unwrap(),
            Rational::new(1, 2),
        )
        .unwrap();
        let a = Artifact::Fusion(FusionFrame::new(vec![e0, d]).unwrap());
        let json = to_json(&Document::from_artifact(&a, None)).unwrap();
        assert!(json.contains("subspace_scale_sq"));
        assert_eq!(parse_artifact(&json).unwrap().0, a);
        assert!(to_csv(&a).is_err());
    }
}
