//! Diagonal sequence model for the infinite-dimensional theory.
//!
//! `A v_m = α_m v_m` on an orthonormal basis `(v_m)` and `b = Σ b_m v_m`.
//! Boundedness of `C_φ` reduces to
//! `S = Σ |α_m b_m|² / (1 − |α_m|²) < ∞`, a coordinate with `|α_m| = 1`
//! being admissible only when `α_m b_m = 0` (it is then dropped). A finite
//! computation can only see a horizon `N`, so verdicts here are evidence
//! at that horizon, not proofs.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ComplexVector, C64};

pub const DEFAULT_HORIZON: usize = 1000;
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;
/// Growth exponent of `S_k` over the last half of the horizon at or above
/// which the series is called diverging.
pub const GROWTH_EXPONENT: f64 = 0.9;
/// A tail whose terms decay like `m^{-p}` counts as summable for
/// `p ≥ 1 + POWER_MARGIN`.
pub const POWER_MARGIN: f64 = 0.05;
const MIN_REGRESSION_HORIZON: usize = 8;

/// Generator `m ↦ x_m` for `m = 1, 2, …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sequence {
    Zero,
    Constant { value: C64 },
    /// `ratio^m`.
    Geometric { ratio: C64 },
    /// `scale · m^{-exponent}`.
    Power { scale: C64, exponent: f64 },
    /// `√(1 − m⁻³/2)`, inside the band `(1 − m⁻³, 1)` for `α_m²`.
    Counterexample,
    /// Listed values, zero past the end.
    Explicit { values: Vec<C64> },
}

impl Sequence {
    /// `1/m`.
    pub fn harmonic() -> Self {
        Self::Power {
            scale: C64::new(1.0, 0.0),
            exponent: 1.0,
        }
    }

    pub fn at(&self, m: usize) -> C64 {
        assert!(m >= 1, "sequences are indexed from 1");
        match self {
            Self::Zero => C64::new(0.0, 0.0),
            Self::Constant { value } => *value,
            Self::Geometric { ratio } => ratio.powu(m as u32),
            Self::Power { scale, exponent } => scale * (m as f64).powf(-exponent),
            Self::Counterexample => C64::new((1.0 - 0.5 * (m as f64).powi(-3)).sqrt(), 0.0),
            Self::Explicit { values } => values.get(m - 1).copied().unwrap_or(C64::new(0.0, 0.0)),
        }
    }

    /// `1 − |x_m|²` without cancellation for the counterexample band.
    pub fn defect(&self, m: usize) -> f64 {
        match self {
            Self::Counterexample => 0.5 * (m as f64).powi(-3),
            _ => {
                let r = self.at(m).norm();
                (1.0 - r) * (1.0 + r)
            }
        }
    }

    /// Some `K` with `x_m = 0` for every `m > K`, when that is structural.
    pub fn support_end(&self) -> Option<usize> {
        let zero = C64::new(0.0, 0.0);
        match self {
            Self::Zero => Some(0),
            Self::Constant { value } if *value == zero => Some(0),
            Self::Geometric { ratio } if *ratio == zero => Some(0),
            Self::Power { scale, .. } if *scale == zero => Some(0),
            Self::Explicit { values } => Some(values.len()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalModel {
    pub alpha: Sequence,
    pub b: Sequence,
    pub horizon: usize,
}

impl DiagonalModel {
    pub fn new(alpha: Sequence, b: Sequence, horizon: usize) -> Result<Self> {
        let model = Self { alpha, b, horizon };
        model.validate(horizon)?;
        Ok(model)
    }

    /// `α_m² = 1 − m⁻³/2`, `b_m = 1/m`.
    pub fn counterexample(horizon: usize) -> Result<Self> {
        Self::new(Sequence::Counterexample, Sequence::harmonic(), horizon)
    }

    fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Input("horizon must be at least 1".into()));
        }
        if let Sequence::Power { exponent, .. } = &self.b {
            if !exponent.is_finite() {
                return Err(Error::Input("power exponent must be finite".into()));
            }
        }
        let mut b_sq = 0.0;
        for m in 1..=n {
            let a = self.alpha.at(m);
            let bm = self.b.at(m);
            if !(a.re.is_finite() && a.im.is_finite() && bm.re.is_finite() && bm.im.is_finite()) {
                return Err(Error::Input(format!("sequence value at m = {m} is not finite")));
            }
            if self.alpha.defect(m) < 0.0 {
                return Err(Error::Input(format!("|α_{m}| = {} exceeds 1", a.norm())));
            }
            b_sq += bm.norm_sqr();
        }
        if !b_sq.is_finite() {
            return Err(Error::Input("Σ|b_m|² overflows at the horizon".into()));
        }
        Ok(())
    }

    /// Series term `|α_m b_m|² / (1 − |α_m|²)`; `None` means `+∞`.
    pub fn term(&self, m: usize) -> Option<f64> {
        let ab = (self.alpha.at(m) * self.b.at(m)).norm_sqr();
        if ab == 0.0 {
            return Some(0.0);
        }
        let d = self.alpha.defect(m);
        (d > 0.0).then(|| ab / d)
    }

    /// Indices `m ≤ n` with `|α_m| = 1`: the kernel of `I − A*A`.
    pub fn unit_modulus_indices(&self, n: usize) -> Vec<usize> {
        (1..=n).filter(|&m| self.alpha.defect(m) == 0.0).collect()
    }

    /// First `n` coordinates as a finite affine map.
    pub fn to_affine(&self, n: usize) -> Result<AffineMap> {
        let diag: Vec<C64> = (1..=n).map(|m| self.alpha.at(m)).collect();
        let b: Vec<C64> = (1..=n).map(|m| self.b.at(m)).collect();
        AffineMap::new(ComplexMatrix::from_diag(&diag), ComplexVector::new(b)?)
    }

    /// `Σ_{m ≤ n} |b_m|²`.
    pub fn b_norm_sqr(&self, n: usize) -> f64 {
        let mut acc = Neumaier::default();
        for m in 1..=n {
            acc.add(self.b.at(m).norm_sqr());
        }
        acc.sum()
    }
}

/// Compensated summation in ascending index order.
#[derive(Clone, Copy, Debug, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesVerdict {
    Converging,
    Diverging,
    Inconclusive,
}

/// How the verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SeriesEvidence {
    /// `|α_m| = 1` with `α_m b_m ≠ 0`.
    InfiniteTerm { m: usize },
    Threshold { partial_sum: f64 },
    Growth { exponent: f64 },
    /// Every term past `after` is zero.
    ZeroTail { after: usize },
    Geometric { ratio: f64 },
    Power { exponent: f64 },
    None,
}

impl std::fmt::Display for SeriesEvidence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::InfiniteTerm { m } => write!(f, "|α_{m}| = 1 with α_{m} b_{m} ≠ 0"),
            Self::Threshold { partial_sum } => write!(f, "partial sum {partial_sum} above {DIVERGENCE_THRESHOLD:e}"),
            Self::Growth { exponent } => write!(f, "partial sums grow like k^{exponent:.3}"),
            Self::ZeroTail { after } => write!(f, "all terms past m = {after} vanish"),
            Self::Geometric { ratio } => write!(f, "terms decay geometrically with ratio {ratio:.4}"),
            Self::Power { exponent } => write!(f, "terms decay like m^-{exponent:.3}"),
            Self::None => write!(f, "no decay pattern detected"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    /// `S_k` for `k = 1, …` up to the horizon, or up to just before an
    /// infinite term.
    pub partial_sums: Vec<f64>,
    pub verdict: SeriesVerdict,
    pub evidence: SeriesEvidence,
    /// Estimated `S_∞ − S_N` for converging verdicts.
    pub tail_bound: Option<f64>,
    /// Indices with `|α_m| = 1` and `α_m b_m = 0`, left out of the sum.
    pub dropped: Vec<usize>,
}

impl SeriesReport {
    pub fn last(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// Least-squares slope of `ln S_k` against `ln k` over `k ∈ [n/2, n]`.
fn growth_exponent(sums: &[f64]) -> Option<f64> {
    let n = sums.len();
    let pts: Vec<(f64, f64)> = (n / 2..=n)
        .filter(|&k| k >= 1 && sums[k - 1] > 0.0)
        .map(|k| ((k as f64).ln(), sums[k - 1].ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn tail_evidence(terms: &[f64]) -> Option<(SeriesEvidence, f64)> {
    let n = terms.len();
    let half = n / 2;
    let (t_half, t_n) = (terms[half - 1], terms[n - 1]);
    if terms[half - 1..].iter().all(|&t| t == 0.0) {
        return Some((SeriesEvidence::ZeroTail { after: half }, 0.0));
    }
    if t_n <= 0.0 || t_half <= 0.0 {
        return None;
    }
    // Ratio test over the last quarter. Power laws also have local ratios
    // below 1, so the ratio must hold steady across the last half too.
    let quarter = &terms[n - n / 4 - 1..];
    let local = quarter.windows(2).map(|w| w[1] / w[0]).fold(0.0f64, f64::max);
    let mean = (t_n / t_half).powf(1.0 / (n - half) as f64);
    if local < 0.99 && (mean / local - 1.0).abs() < 1e-3 {
        let ratio = local.max(mean);
        return Some((SeriesEvidence::Geometric { ratio }, t_n * ratio / (1.0 - ratio)));
    }
    let p = (t_half / t_n).ln() / (n as f64 / half as f64).ln();
    if p >= 1.0 + POWER_MARGIN {
        return Some((SeriesEvidence::Power { exponent: p }, t_n * n as f64 / (p - 1.0)));
    }
    None
}

/// Partial sums of the boundedness series and a horizon-relative verdict.
pub fn series_criterion(model: &DiagonalModel, n: usize) -> Result<SeriesReport> {
    model.validate(n)?;
    let mut acc = Neumaier::default();
    let mut sums = Vec::with_capacity(n);
    let mut terms = Vec::with_capacity(n);
    let mut dropped = Vec::new();
    for m in 1..=n {
        match model.term(m) {
            None => {
                return Ok(SeriesReport {
                    partial_sums: sums,
                    verdict: SeriesVerdict::Diverging,
                    evidence: SeriesEvidence::InfiniteTerm { m },
                    tail_bound: None,
                    dropped,
                })
            }
            Some(t) => {
                if model.alpha.defect(m) == 0.0 {
                    dropped.push(m);
                }
                acc.add(t);
                terms.push(t);
                sums.push(acc.sum());
            }
        }
    }
    let last = acc.sum();
    let report = |verdict, evidence, tail_bound| SeriesReport {
        partial_sums: sums.clone(),
        verdict,
        evidence,
        tail_bound,
        dropped: dropped.clone(),
    };
    if last > DIVERGENCE_THRESHOLD {
        return Ok(report(
            SeriesVerdict::Diverging,
            SeriesEvidence::Threshold { partial_sum: last },
            None,
        ));
    }
    let support = match (model.alpha.support_end(), model.b.support_end()) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    if let Some(k) = support.filter(|&k| k <= n) {
        return Ok(report(
            SeriesVerdict::Converging,
            SeriesEvidence::ZeroTail { after: k },
            Some(0.0),
        ));
    }
    if n < MIN_REGRESSION_HORIZON {
        return Ok(report(SeriesVerdict::Inconclusive, SeriesEvidence::None, None));
    }
    if let Some(e) = growth_exponent(&sums).filter(|&e| e >= GROWTH_EXPONENT) {
        return Ok(report(
            SeriesVerdict::Diverging,
            SeriesEvidence::Growth { exponent: e },
            None,
        ));
    }
    match tail_evidence(&terms) {
        Some((evidence, tail)) => Ok(report(SeriesVerdict::Converging, evidence, Some(tail))),
        None => Ok(report(SeriesVerdict::Inconclusive, SeriesEvidence::None, None)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagNorm {
    /// `exp(½ S_N + ½ Σ_{m≤N} |b_m|²)`.
    pub norm: f64,
    pub series_sum: f64,
    pub b_norm_sqr: f64,
    /// Estimated `S_∞ − S_N`; the norm factor it allows is `exp(½ tail)`.
    pub tail_bound: f64,
}

/// Norm of `C_φ` for the diagonal model at horizon `n`.
pub fn diag_norm(model: &DiagonalModel, n: usize) -> Result<DiagNorm> {
    let series = series_criterion(model, n)?;
    match series.verdict {
        SeriesVerdict::Diverging => Err(Error::Unbounded(format!(
            "boundedness series diverges at horizon {n}: {}",
            series.evidence
        ))),
        SeriesVerdict::Inconclusive => Err(Error::Inconclusive(format!(
            "no convergence evidence at horizon {n} (S_N = {})",
            series.last()
        ))),
        SeriesVerdict::Converging => {
            let s = series.last();
            let b_sq = model.b_norm_sqr(n);
            Ok(DiagNorm {
                norm: (0.5 * s + 0.5 * b_sq).exp(),
                series_sum: s,
                b_norm_sqr: b_sq,
                tail_bound: series.tail_bound.unwrap_or(0.0),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub m: usize,
    /// Scale of the test vector `t_m v_m`.
    pub t: C64,
    /// `|α_m t_m + b_m|² − |t_m|²`, the part of the gap carried by coordinate `m`.
    pub coordinate_gap: f64,
    /// `‖φ(t_m v_m)‖² − ‖t_m v_m‖²`, with `b` cut at the horizon.
    pub full_gap: f64,
    /// `|b_m|² / (1 − |α_m|²)`.
    pub closed_form: f64,
}

/// Gap `‖φ(z)‖² − ‖z‖²` at `z = t_m v_m` with
/// `t_m = conj(α_m) b_m / (1 − |α_m|²)`, which for `b_m = 1/m` and real
/// `α_m` is `α_m (1 − α_m²)^{-1} m^{-1}`. Any `M ≥ ‖C_φ‖` satisfies
/// `2 ln M ≥ gap`, so an unbounded gap sequence proves unboundedness.
pub fn counterexample_gap(model: &DiagonalModel, m: usize) -> Result<GapReport> {
    if m == 0 {
        return Err(Error::Input("coordinates are indexed from 1".into()));
    }
    let d = model.alpha.defect(m);
    if d <= 0.0 {
        return Err(Error::Input(format!("|α_{m}| = 1 leaves t_m undefined")));
    }
    let a = model.alpha.at(m);
    let bm = model.b.at(m);
    let t = a.conj() * bm / d;
    // |αt + b|² − |t|², regrouped around the exact defect to avoid cancelling two O(|t|²) terms
    let coordinate_gap = -d * t.norm_sqr() + 2.0 * (a * t * bm.conj()).re + bm.norm_sqr();
    let rest = model.b_norm_sqr(model.horizon.max(m)) - bm.norm_sqr();
    Ok(GapReport {
        m,
        t,
        coordinate_gap,
        full_gap: coordinate_gap + rest.max(0.0),
        closed_form: bm.norm_sqr() / d,
    })
}
