//! Curve files.
//!
//! A curve file is a small JSON document:
//!
//! ```json
//! {
//!   "degree": 1,
//!   "disks": [ { "x": 0.0, "y": 0.0, "r": 1.0 }, { "x": 2.0, "y": 0.0, "r": 0.5 } ],
//!   "weights": [ 1.0, 2.0 ]
//! }
//! ```
//!
//! Numbers are written with 17 significant digits, so saving and loading a
//! curve reproduces it bit for bit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curve::DiskRationalBezier;
use crate::disk::Disk;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid {field}: {message}")]
    Invariant { field: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskEntry {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

/// On-disk schema of a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub degree: usize,
    pub disks: Vec<DiskEntry>,
    pub weights: Vec<f64>,
}

impl CurveFile {
    pub fn from_curve(c: &DiskRationalBezier) -> Self {
        Self {
            degree: c.degree(),
            disks: c
                .disks()
                .iter()
                .map(|d| DiskEntry {
                    x: d.cx(),
                    y: d.cy(),
                    r: d.radius(),
                })
                .collect(),
            weights: c.weights().to_vec(),
        }
    }

    pub fn into_curve(self) -> Result<DiskRationalBezier, FileError> {
        let expected = self.degree + 1;
        if self.disks.len() != expected || self.weights.len() != expected {
            return Err(FileError::Shape(format!(
                "degree {} needs {expected} disks and weights, found {} disks and {} weights",
                self.degree,
                self.disks.len(),
                self.weights.len()
            )));
        }
        let mut disks = Vec::with_capacity(expected);
        for (i, e) in self.disks.iter().enumerate() {
            for (name, v) in [("x", e.x), ("y", e.y), ("r", e.r)] {
                if !v.is_finite() {
                    return Err(FileError::Invariant {
                        field: format!("disks[{i}].{name}"),
                        message: format!("{v} is not finite"),
                    });
                }
            }
            let d = Disk::new(e.x, e.y, e.r).map_err(|err| FileError::Invariant {
                field: format!("disks[{i}].r"),
                message: err.to_string(),
            })?;
            disks.push(d);
        }
        for (i, w) in self.weights.iter().enumerate() {
            if !(w.is_finite() && *w > 0.0) {
                return Err(FileError::Invariant {
                    field: format!("weights[{i}]"),
                    message: format!("{w} must be positive"),
                });
            }
        }
        DiskRationalBezier::new(disks, self.weights).map_err(|err| FileError::Invariant {
            field: "curve".into(),
            message: err.to_string(),
        })
    }
}

/// 17 significant digits, valid as a JSON number.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn curve_to_string(c: &DiskRationalBezier) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{{");
    let _ = writeln!(s, "  \"degree\": {},", c.degree());
    let _ = writeln!(s, "  \"disks\": [");
    let n = c.degree();
    for (i, d) in c.disks().iter().enumerate() {
        let sep = if i < n { "," } else { "" };
        let _ = writeln!(
            s,
            "    {{ \"x\": {}, \"y\": {}, \"r\": {} }}{sep}",
            num(d.cx()),
            num(d.cy()),
            num(d.radius())
        );
    }
    let _ = writeln!(s, "  ],");
    let weights: Vec<String> = c.weights().iter().map(|w| num(*w)).collect();
    let _ = writeln!(s, "  \"weights\": [ {} ]", weights.join(", "));
    let _ = writeln!(s, "}}");
    s
}

pub fn parse_curve(text: &str) -> Result<DiskRationalBezier, FileError> {
    let file: CurveFile = serde_json::from_str(text).map_err(|e| FileError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_curve()
}

pub fn load_curve(path: impl AsRef<Path>) -> Result<DiskRationalBezier, FileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_curve(&text)
}

pub fn save_curve(c: &DiskRationalBezier, path: impl AsRef<Path>) -> Result<(), FileError> {
    let path = path.as_ref();
    std::fs::write(path, curve_to_string(c)).map_err(|source| FileError::Io {
        path: path.to_path_buf(),
        source,
    })
}
