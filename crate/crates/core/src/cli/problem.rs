use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ComplexVector, C64};

/// Largest accepted `dim`.
pub const MAX_DIM: usize = 64;
/// Entries beyond this magnitude are refused; they overflow the kernel
/// arithmetic long before they mean anything.
pub const MAX_ENTRY: f64 = 1e100;

/// Per-file overrides; command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    pub rank_tol: Option<f64>,
    pub psd_tol: Option<f64>,
    pub boundary_tol: Option<f64>,
    pub degree: Option<usize>,
    pub samples: Option<usize>,
    pub radius: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub map: AffineMap,
    pub options: ProblemOptions,
}

fn bad(path: &str, what: &str) -> Error {
    Error::Input(format!("{path}: {what}"))
}

fn complex(v: &Value, path: &str) -> Result<C64> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| bad(path, "complex entries must be [re, im] arrays of two numbers"))?;
    let part = |i: usize| {
        pair[i]
            .as_f64()
            .ok_or_else(|| bad(path, "complex entries must be [re, im] arrays of two numbers"))
    };
    let (re, im) = (part(0)?, part(1)?);
    if re.abs() > MAX_ENTRY || im.abs() > MAX_ENTRY {
        return Err(bad(path, &format!("entry magnitude exceeds {MAX_ENTRY:e}")));
    }
    Ok(C64::new(re, im))
}

fn vector(v: &Value, path: &str, dim: usize) -> Result<Vec<C64>> {
    let items = v.as_array().ok_or_else(|| bad(path, "expected an array"))?;
    if items.len() != dim {
        return Err(bad(path, &format!("expected {dim} entries, found {}", items.len())));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| complex(x, &format!("{path}[{i}]")))
        .collect()
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let root: Value =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("problem file is not valid JSON: {e}")))?;
        let obj = root.as_object().ok_or_else(|| bad("$", "expected a JSON object"))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "dim" | "A" | "b" | "options") {
                return Err(bad(key, "unknown field"));
            }
        }
        let field = |k: &str| obj.get(k).ok_or_else(|| bad(k, "missing field"));
        let dim = field("dim")?
            .as_u64()
            .filter(|&d| d >= 1 && d as usize <= MAX_DIM)
            .ok_or_else(|| bad("dim", &format!("expected an integer in 1..={MAX_DIM}")))? as usize;
        let rows = field("A")?.as_array().ok_or_else(|| bad("A", "expected an array of rows"))?;
        if rows.len() != dim {
            return Err(bad("A", &format!("expected {dim} rows, found {}", rows.len())));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            data.extend(vector(row, &format!("A[{i}]"), dim)?);
        }
        let b = vector(field("b")?, "b", dim)?;
        let options = match obj.get("options") {
            None | Some(Value::Null) => ProblemOptions::default(),
            Some(v) => serde_json::from_value(v.clone()).map_err(|e| bad("options", &e.to_string()))?,
        };
        let map = AffineMap::new(ComplexMatrix::new(dim, dim, data)?, ComplexVector::new(b)?)?;
        Ok(Self { map, options })
    }

    /// Canonical JSON encoding, accepted by [`ProblemFile::parse`].
    pub fn to_json(&self) -> String {
        let pair = |z: &C64| Value::from(vec![z.re, z.im]);
        let n = self.map.dim();
        let a: Vec<Value> = (0..n)
            .map(|i| Value::from(self.map.a().row(i).iter().map(pair).collect::<Vec<_>>()))
            .collect();
        let b: Vec<Value> = self.map.b().iter().map(pair).collect();
        let mut obj = Map::new();
        obj.insert("dim".into(), n.into());
        obj.insert("A".into(), a.into());
        obj.insert("b".into(), b.into());
        obj.insert(
            "options".into(),
            serde_json::to_value(&self.options).expect("options serialize"),
        );
        serde_json::to_string_pretty(&Value::Object(obj)).expect("problem serializes")
    }
}
