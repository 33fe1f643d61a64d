use std::fs;
use std::path::Path;

use gabor_core::{SpectrumReport64, TolerancePolicy64};
use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Serialize)]
pub struct Tolerances {
    pub zero_tol: f64,
    pub angle_tol: f64,
}

impl From<&TolerancePolicy64> for Tolerances {
    fn from(p: &TolerancePolicy64) -> Self {
        Self {
            zero_tol: p.zero_tol,
            angle_tol: p.angle_cluster_tol,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SpectrumOut {
    /// `λ[a][b]`, row-major.
    pub eigenvalues: Vec<Vec<f64>>,
    pub rank: usize,
    pub trace: f64,
    pub is_ic: bool,
    pub is_sic: bool,
}

#[derive(Debug, Serialize)]
pub struct AnglesOut {
    /// Distinct values of `|<g, M^k T^l g>|`, origin included.
    pub values: Vec<f64>,
    pub count: usize,
}

impl SpectrumOut {
    pub fn new(s: &SpectrumReport64) -> Self {
        Self {
            eigenvalues: s.eigenvalues.chunks(s.d).map(<[f64]>::to_vec).collect(),
            rank: s.rank,
            trace: s.trace,
            is_ic: s.is_ic,
            is_sic: s.is_sic,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report<B: Serialize> {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub d: usize,
    pub input: String,
    pub vector: Vec<[f64; 2]>,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub elapsed_ms: f64,
    #[serde(flatten)]
    pub body: B,
}

pub fn spectrum_csv(s: &SpectrumReport64) -> String {
    let mut out = String::new();
    for row in s.eigenvalues.chunks(s.d) {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Domain(format!("cannot serialize report: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => write(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
