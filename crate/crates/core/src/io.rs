//! Instance and result files.
//!
//! Both are JSON. Numbers use the shortest decimal form that reads back to
//! the same `f64` bits (never more than 17 significant digits), so a
//! write/read cycle is exact. Polygon indices in files are 1-based.
//!
//! Instance:
//!
//! ```json
//! { "version": 1, "polygons": [ [[0, 0], [1, 0], [0, 1]], ... ] }
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::factor::{Contact, Side};
use crate::geom::{Configuration, ConvexPolygon, Direction, GeomError, Line, Point};
use crate::solver::{Certificate, Classification, Diagnostics, Solution};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("polygon {polygon}: {source}")]
    Validation {
        /// 1-based position in the file.
        polygon: usize,
        #[source]
        source: GeomError,
    },
    #[error("invalid result file: {0}")]
    Result(String),
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl IoError {
    fn from_json(e: serde_json::Error) -> Self {
        IoError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }

    fn file(path: &Path, source: std::io::Error) -> Self {
        IoError::File {
            path: path.display().to_string(),
            source,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub polygons: Vec<Vec<[f64; 2]>>,
}

impl InstanceFile {
    pub fn from_configuration(config: &Configuration) -> Self {
        InstanceFile {
            version: FORMAT_VERSION,
            polygons: config
                .polygons()
                .iter()
                .map(|p| p.vertices().iter().map(|v| [v.x, v.y]).collect())
                .collect(),
        }
    }

    pub fn to_configuration(&self) -> Result<Configuration, IoError> {
        let polygons = self
            .polygons
            .iter()
            .enumerate()
            .map(|(i, raw)| {
                ConvexPolygon::new(raw.iter().map(|&[x, y]| Point::new(x, y)).collect()).map_err(
                    |source| IoError::Validation {
                        polygon: i + 1,
                        source,
                    },
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        Configuration::new(polygons).map_err(|source| IoError::Validation { polygon: 0, source })
    }
}

fn number(v: f64) -> String {
    serde_json::Value::from(v).to_string()
}

pub fn parse_instance(text: &str) -> Result<Configuration, IoError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(IoError::from_json)?;
    if file.version != FORMAT_VERSION {
        return Err(IoError::Parse {
            line: 1,
            column: 1,
            message: format!("unsupported version {}", file.version),
        });
    }
    if file.polygons.is_empty() {
        return Err(IoError::Parse {
            line: 1,
            column: 1,
            message: "polygon list is empty".into(),
        });
    }
    file.to_configuration()
}

pub fn read_instance(path: &Path) -> Result<Configuration, IoError> {
    let text = fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    parse_instance(&text)
}

/// Canonical text of an instance, one polygon per line.
pub fn write_instance(config: &Configuration) -> String {
    let mut out = format!("{{\n  \"version\": {FORMAT_VERSION},\n  \"polygons\": [\n");
    let n = config.len();
    for (i, p) in config.polygons().iter().enumerate() {
        let verts: Vec<String> = p
            .vertices()
            .iter()
            .map(|v| format!("[{}, {}]", number(v.x), number(v.y)))
            .collect();
        out.push_str("    [");
        out.push_str(&verts.join(", "));
        out.push(']');
        if i + 1 < n {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    out
}

/// SHA-256 of the canonical instance text, hex encoded.
pub fn instance_digest(config: &Configuration) -> String {
    hex::encode(Sha256::digest(write_instance(config).as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineRecord {
    pub theta: f64,
    pub offset: f64,
    /// `a·x + b·y = c`; informational, `theta`/`offset` are authoritative.
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateRecord {
    pub tangent_indices: Vec<usize>,
    pub contacts: Vec<String>,
    pub sides: Vec<i8>,
    pub residuals: Vec<f64>,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsRecord {
    pub grid_size: usize,
    pub refinement_iterations: usize,
    pub bracket_width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub version: u32,
    pub instance_digest: String,
    pub c_m: f64,
    pub classification: String,
    pub degenerate: bool,
    pub lines: Vec<LineRecord>,
    pub certificates: Vec<CertificateRecord>,
    pub diagnostics: DiagnosticsRecord,
}

impl ResultFile {
    pub fn from_solution(sol: &Solution, instance_digest: String) -> Self {
        ResultFile {
            version: FORMAT_VERSION,
            instance_digest,
            c_m: sol.c_m,
            classification: sol.classification.as_str().to_string(),
            degenerate: sol.degenerate,
            lines: sol
                .lines
                .iter()
                .map(|l| {
                    let (a, b, c) = l.implicit();
                    LineRecord {
                        theta: l.theta(),
                        offset: l.offset(),
                        a,
                        b,
                        c,
                    }
                })
                .collect(),
            certificates: sol
                .certificates
                .iter()
                .map(|c| CertificateRecord {
                    tangent_indices: c.tangent_indices.iter().map(|i| i + 1).collect(),
                    contacts: c.contacts.iter().map(|k| k.as_str().to_string()).collect(),
                    sides: c.sides.iter().map(|s| s.value()).collect(),
                    residuals: c.residuals.clone(),
                    valid: c.is_valid(),
                })
                .collect(),
            diagnostics: DiagnosticsRecord {
                grid_size: sol.diagnostics.grid_size,
                refinement_iterations: sol.diagnostics.refinement_iterations,
                bracket_width: sol.diagnostics.bracket_width,
            },
        }
    }

    pub fn to_solution(&self) -> Result<Solution, IoError> {
        let bad = |m: String| IoError::Result(m);
        if self.version != FORMAT_VERSION {
            return Err(bad(format!("unsupported version {}", self.version)));
        }
        let classification = Classification::parse(&self.classification)
            .ok_or_else(|| bad(format!("unknown classification {:?}", self.classification)))?;
        let mut lines = Vec::with_capacity(self.lines.len());
        for rec in &self.lines {
            if !(rec.theta.is_finite() && rec.offset.is_finite())
                || !(0.0..std::f64::consts::PI).contains(&rec.theta)
            {
                return Err(bad(format!("line has non-canonical theta {}", rec.theta)));
            }
            lines.push(Line::new(Direction::new(rec.theta), rec.offset));
        }
        if lines.is_empty() {
            return Err(bad("no lines".into()));
        }
        let mut certificates = Vec::with_capacity(self.certificates.len());
        for rec in &self.certificates {
            let k = rec.tangent_indices.len();
            if rec.contacts.len() != k || rec.sides.len() != k || rec.residuals.len() != k {
                return Err(bad("certificate arrays differ in length".into()));
            }
            let tangent_indices = rec
                .tangent_indices
                .iter()
                .map(|&i| i.checked_sub(1).ok_or_else(|| bad("polygon index 0".into())))
                .collect::<Result<Vec<_>, _>>()?;
            let contacts = rec
                .contacts
                .iter()
                .map(|s| Contact::parse(s).ok_or_else(|| bad(format!("unknown contact {s:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let sides = rec
                .sides
                .iter()
                .map(|&v| Side::from_value(v as i64).ok_or_else(|| bad(format!("bad side {v}"))))
                .collect::<Result<Vec<_>, _>>()?;
            certificates.push(Certificate {
                tangent_indices,
                contacts,
                sides,
                residuals: rec.residuals.clone(),
            });
        }
        Ok(Solution {
            c_m: self.c_m,
            lines,
            certificates,
            degenerate: self.degenerate,
            classification,
            diagnostics: Diagnostics {
                grid_size: self.diagnostics.grid_size,
                refinement_iterations: self.diagnostics.refinement_iterations,
                bracket_width: self.diagnostics.bracket_width,
            },
        })
    }
}

pub fn write_result(sol: &Solution, config: &Configuration) -> String {
    let file = ResultFile::from_solution(sol, instance_digest(config));
    let mut text = serde_json::to_string_pretty(&file).expect("result serializes");
    text.push('\n');
    text
}

pub fn parse_result(text: &str) -> Result<ResultFile, IoError> {
    serde_json::from_str(text).map_err(IoError::from_json)
}

pub fn read_result(path: &Path) -> Result<ResultFile, IoError> {
    let text = fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    parse_result(&text)
}

pub fn write_file(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|e| IoError::file(path, e))
}
