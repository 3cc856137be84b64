use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::diag::{GapReport, Sequence, SeriesEvidence, SeriesVerdict};
use crate::kernel::PsdVerdict;
use crate::numerics::{ComplexVector, Tolerances};

/// Machine-readable result of one command. The text format is a flattened
/// rendering of the same JSON value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub tolerances: Option<Tolerances>,
    pub dim: Option<usize>,
    pub verdicts: Option<Verdicts>,
    pub norm: Option<NormSection>,
    pub oracles: Option<OracleSection>,
    pub diag: Option<DiagSection>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed: None,
            tolerances: None,
            dim: None,
            verdicts: None,
            norm: None,
            oracles: None,
            diag: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One `key = value` line per JSON leaf, keys as dotted paths.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        flatten("", &value, &mut out);
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        leaf => {
            out.push_str(prefix);
            out.push_str(" = ");
            match leaf {
                Value::String(s) => out.push_str(s),
                other => out.push_str(&other.to_string()),
            }
            out.push('\n');
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdicts {
    pub bounded: bool,
    pub compact: bool,
    pub normal: bool,
    pub isometric: bool,
    pub coisometric: bool,
    pub unitary: bool,
    /// `‖A‖` within `boundary_tol` of 1.
    pub boundary: bool,
    /// `⟨Aζ, b⟩ = 0` on `ker(I − A*A)`; absent when `‖A‖ > 1`.
    pub cms_condition: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSection {
    /// Absent when unbounded or when the value overflows `f64`.
    pub norm: Option<f64>,
    /// `½‖v‖² + ½‖b‖²`.
    pub log_norm: Option<f64>,
    pub cms_norm: Option<f64>,
    pub a_norm: f64,
    pub v: Option<ComplexVector>,
    pub w0: Option<ComplexVector>,
    pub membership_residual: Option<f64>,
    pub kernel_projection: Option<f64>,
    pub kernel_dim: Option<usize>,
    /// Relative agreement required between the two norm formulas.
    pub cross_check_tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncatedEntry {
    pub degree: usize,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsdSection {
    pub plan_size: usize,
    pub samples: usize,
    pub radius: f64,
    pub bisect_tol: f64,
    pub lower_bound: Option<f64>,
    pub lower_bound_error: Option<String>,
    /// `|lower_bound / norm − 1| ≤ agreement_tol`.
    pub agrees: Option<bool>,
    pub agreement_tol: f64,
    /// `M = norm · (1 + 1e-8)`, where the Gram must be PSD.
    pub certify_at: Option<f64>,
    pub certify: Option<PsdVerdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub degree: usize,
    /// Relative slack allowed in monotonicity and in `truncated ≤ norm`.
    pub truncation_tol: f64,
    pub truncated_norms: Vec<TruncatedEntry>,
    pub monotone: bool,
    pub below_norm: Option<bool>,
    pub psd: PsdSection,
    pub pass: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumCheckpoint {
    pub m: usize,
    pub sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagSection {
    pub preset: String,
    pub parameter: Option<f64>,
    pub horizon: usize,
    pub alpha: Sequence,
    pub b: Sequence,
    /// `S_m` at `m = 1, 2, 5, 10, 20, 50, …` and at the last index summed.
    pub partial_sums: Vec<SumCheckpoint>,
    pub verdict: SeriesVerdict,
    pub evidence: SeriesEvidence,
    pub tail_bound: Option<f64>,
    pub dropped: Vec<usize>,
    /// `|α_m| < 1` for every `m` up to the horizon, so the orthogonality
    /// condition on `ker(I − A*A)` holds vacuously.
    pub trivial_kernel: bool,
    pub gaps: Vec<GapReport>,
    pub norm: Option<f64>,
    pub log_norm: Option<f64>,
    pub b_norm_sqr: Option<f64>,
    pub norm_error: Option<String>,
}
