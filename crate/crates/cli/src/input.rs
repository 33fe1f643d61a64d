//! Vector wire format and input resolution.

use std::fs;
use std::path::Path;

use gabor_core::{CVec64, Complex64, GeneratorSpec, TolerancePolicy64, UnitVector64};
use serde_json::Value;

use crate::args::{InputArgs, TolArgs};
use crate::error::CliError;

/// Norm precondition for user-supplied vectors.
pub const NORM_TOL: f64 = 1e-8;

pub fn to_pairs(g: &CVec64) -> Vec<[f64; 2]> {
    g.iter().map(|z| [z.re, z.im]).collect()
}

fn pairs_from_value(v: &Value) -> Result<Vec<Complex64>, CliError> {
    let v = match v {
        Value::Object(map) => map
            .get("vector")
            .ok_or_else(|| CliError::Usage("JSON object has no \"vector\" field".into()))?,
        other => other,
    };
    let arr = v
        .as_array()
        .ok_or_else(|| CliError::Usage("vector must be an array of [re, im] pairs".into()))?;
    arr.iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) if re.is_finite() && im.is_finite() => {
                    Ok(Complex64::new(re, im))
                }
                _ => Err(CliError::Usage(format!("bad entry {p}"))),
            },
            _ => Err(CliError::Usage(format!("entry {p} is not an [re, im] pair"))),
        })
        .collect()
}

pub fn parse_vector(text: &str) -> Result<Vec<Complex64>, CliError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad vector JSON: {e}")))?;
    pairs_from_value(&v)
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// What the user asked for, echoed in reports.
pub struct Resolved {
    pub g: UnitVector64,
    pub source: String,
}

pub fn resolve(args: &InputArgs) -> Result<Resolved, CliError> {
    let (entries, source) = match (&args.generator, &args.vec, &args.input) {
        (Some(spec), _, _) => {
            let d = args
                .d
                .ok_or_else(|| CliError::Usage("--gen needs --d".into()))?;
            let spec: GeneratorSpec = spec.parse()?;
            let g = spec.build::<f64>(d).map_err(CliError::from_generator)?;
            return Ok(Resolved {
                g,
                source: spec.to_string(),
            });
        }
        (None, Some(text), _) => (parse_vector(text)?, "vec".to_string()),
        (None, None, Some(path)) => {
            let text = read_file(path)?;
            (parse_vector(&text)?, format!("file:{}", path.display()))
        }
        (None, None, None) => {
            return Err(CliError::Usage("one of --gen, --vec or --in is required".into()))
        }
    };
    if let Some(d) = args.d {
        if d != entries.len() {
            return Err(CliError::Domain(format!(
                "--d {d} does not match vector length {}",
                entries.len()
            )));
        }
    }
    let v = CVec64::new(entries)?;
    let g = if args.normalize {
        UnitVector64::normalize(v)?
    } else {
        UnitVector64::with_tolerance(v, NORM_TOL)?
    };
    Ok(Resolved { g, source })
}

pub fn policy(t: &TolArgs) -> Result<TolerancePolicy64, CliError> {
    let def = TolerancePolicy64::default();
    let zero = t.tol.unwrap_or(def.zero_tol);
    let angle = t.angle_tol.unwrap_or(def.angle_cluster_tol.max(zero));
    TolerancePolicy64::new(zero, angle).map_err(|e| CliError::Usage(e.to_string()))
}
