//! Positive semi-definite kernel certificates.
//!
//! `‖C_φ‖ ≤ M` holds exactly when
//! `Φ_M(z, w) = M² exp(⟨z, w⟩) − exp(⟨φ(z), φ(w)⟩)` is a PSD kernel. Gram
//! matrices of `Φ_M` over finite sample plans give sound lower bounds on
//! the norm: a negative eigenvalue certifies `‖C_φ‖ > M`. The diagonal
//! alone gives `2 ln M ≥ ‖φ(z)‖² − ‖z‖²`, which is already tight at `w₀`.
//!
//! The quadratic kernel `F(z, w) = ⟨Tz, w⟩ − ⟨z, u⟩ − ⟨u, w⟩ + M²`
//! is PSD iff `T ≥ 0` and `u = T^{1/2}û` with `‖û‖ ≤ M`, and then
//! `inf F(z, z) = M² − ‖v‖²` for the minimal-norm `v` with `T^{1/2}v = u`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::affine::{AffineMap, NormCertificate};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, min_norm_solve, ComplexMatrix, ComplexVector, Tolerances, C64};

/// Bound on `|⟨z, w⟩|` (via `‖z‖·‖w‖`) before `exp` is refused.
pub const EXP_GUARD: f64 = 700.0;
pub const DEFAULT_RADIUS: f64 = 2.0;
pub const MAX_DEFAULT_SAMPLES: usize = 32;

/// Finite point set over which Gram matrices are formed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    points: Vec<ComplexVector>,
    seed: u64,
    radius: f64,
}

impl SamplePlan {
    pub fn new(points: Vec<ComplexVector>, radius: f64) -> Result<Self> {
        Self::with_seed(points, radius, 0)
    }

    fn with_seed(points: Vec<ComplexVector>, radius: f64, seed: u64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Input(format!("sample radius must be positive, got {radius}")));
        }
        if let Some(dim) = points.first().map(ComplexVector::dim) {
            for (i, p) in points.iter().enumerate() {
                if p.dim() != dim {
                    return Err(Error::Dimension(format!("sample {i} has dimension {}", p.dim())));
                }
                if !p.is_finite() {
                    return Err(Error::Input(format!("sample {i} is not finite")));
                }
                if p.norm() > radius * (1.0 + 1e-12) {
                    return Err(Error::Input(format!(
                        "sample {i} has norm {} beyond radius {radius}",
                        p.norm()
                    )));
                }
            }
        }
        Ok(Self { points, seed, radius })
    }

    /// `m` complex Gaussian points in `C^n`, pulled back onto the ball of
    /// the given radius when they fall outside it.
    pub fn random(n: usize, m: usize, radius: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spread = radius / (2.0 * (n.max(1) as f64).sqrt());
        let points = (0..m)
            .map(|_| {
                let p = ComplexVector::from_vec_unchecked(
                    (0..n)
                        .map(|_| {
                            let re: f64 = StandardNormal.sample(&mut rng);
                            let im: f64 = StandardNormal.sample(&mut rng);
                            C64::new(re, im) * spread
                        })
                        .collect(),
                );
                let norm = p.norm();
                if norm > radius {
                    p.scale(C64::new(radius / norm, 0.0))
                } else {
                    p
                }
            })
            .collect();
        Self::with_seed(points, radius, seed)
    }

    /// `0`, then `w₀` when the certificate has one, then `m` random points.
    /// The radius grows to cover `w₀` if needed.
    pub fn structured(phi: &AffineMap, cert: &NormCertificate, m: usize, radius: f64, seed: u64) -> Result<Self> {
        let n = phi.dim();
        let mut points = vec![ComplexVector::zeros(n)];
        let mut r = radius;
        if let Some(w0) = &cert.w0 {
            r = r.max(w0.norm());
            points.push(w0.clone());
        }
        points.extend(Self::random(n, m, radius, seed)?.points);
        Self::with_seed(points, r, seed)
    }

    pub fn points(&self) -> &[ComplexVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// A new plan with `extra` appended.
    pub fn extended(&self, extra: &[ComplexVector]) -> Result<Self> {
        let mut points = self.points.clone();
        points.extend_from_slice(extra);
        let r = extra.iter().map(ComplexVector::norm).fold(self.radius, f64::max);
        Self::with_seed(points, r, self.seed)
    }
}

/// `K(z, w) = exp(⟨z, w⟩)`.
pub fn bargmann_kernel(z: &ComplexVector, w: &ComplexVector) -> Result<C64> {
    if z.dim() != w.dim() {
        return Err(Error::Dimension("kernel arguments differ in dimension".into()));
    }
    let bound = z.norm() * w.norm();
    if bound > EXP_GUARD {
        return Err(Error::Range(format!(
            "‖z‖·‖w‖ = {bound} exceeds the overflow guard {EXP_GUARD}"
        )));
    }
    Ok(z.inner(w).exp())
}

fn kernel_gram(points: &[ComplexVector]) -> Result<ComplexMatrix> {
    let m = points.len();
    let mut g = ComplexMatrix::zeros(m, m);
    for l in 0..m {
        for j in l..m {
            let k = bargmann_kernel(&points[l], &points[j])?;
            g[(l, j)] = k;
            g[(j, l)] = k.conj();
        }
    }
    Ok(g)
}

struct GramParts {
    base: ComplexMatrix,
    image: ComplexMatrix,
}

fn gram_parts(phi: &AffineMap, plan: &SamplePlan) -> Result<GramParts> {
    if let Some(p) = plan.points().first() {
        if p.dim() != phi.dim() {
            return Err(Error::Dimension("plan and map dimensions differ".into()));
        }
    }
    let images: Vec<ComplexVector> = plan.points().iter().map(|x| phi.apply(x)).collect();
    Ok(GramParts {
        base: kernel_gram(plan.points())?,
        image: kernel_gram(&images)?,
    })
}

impl GramParts {
    fn assemble(&self, m: f64) -> ComplexMatrix {
        &self.base.scale(C64::new(m * m, 0.0)) - &self.image
    }

    fn scale(&self, m: f64) -> f64 {
        (m * m * self.base.max_abs()).max(self.image.max_abs())
    }
}

/// Gram matrix `G[l][j] = Φ_M(x_l, x_j)` over the plan.
pub fn phi_gram(phi: &AffineMap, m: f64, plan: &SamplePlan) -> Result<ComplexMatrix> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Input(format!("M must be positive, got {m}")));
    }
    Ok(gram_parts(phi, plan)?.assemble(m))
}

/// PSD verdict for one Gram matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub psd: bool,
    pub min_eig: f64,
    /// The floor `min_eig` was compared against (nonpositive).
    pub floor: f64,
}

fn certify_parts(parts: &GramParts, m: f64, tol: &Tolerances) -> Result<PsdVerdict> {
    let g = parts.assemble(m);
    let eig = hermitian_eig(&g)?;
    let min_eig = eig.values.first().copied().unwrap_or(0.0);
    let g_norm = eig.values.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let floor = -tol.psd_tol * 1f64.max(g_norm).max(parts.scale(m));
    Ok(PsdVerdict {
        psd: min_eig >= floor,
        min_eig,
        floor,
    })
}

/// Is `Φ_M` PSD on the plan? `psd == false` proves `‖C_φ‖ > M`;
/// `psd == true` is evidence only for the sampled points.
///
/// The eigenvalue floor is `psd_tol` relative to the larger of `‖G‖` and
/// the magnitudes of the two Grams being subtracted, which bounds the
/// round-off in forming `G`.
pub fn psd_certify(phi: &AffineMap, m: f64, plan: &SamplePlan, tol: &Tolerances) -> Result<PsdVerdict> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Input(format!("M must be positive, got {m}")));
    }
    certify_parts(&gram_parts(phi, plan)?, m, tol)
}

/// `exp(½ max_z (‖φ(z)‖² − ‖z‖²))` over the plan.
pub fn single_point_bound(phi: &AffineMap, plan: &SamplePlan) -> Result<f64> {
    if plan.is_empty() {
        return Err(Error::Input("sample plan is empty".into()));
    }
    let gap = plan
        .points()
        .iter()
        .map(|z| phi.apply(z).norm_sqr() - z.norm_sqr())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((0.5 * gap).exp())
}

const MAX_BRACKET_GROWTH: usize = 200;

/// Smallest `M` (to relative `bisect_tol`) whose Gram is PSD on the plan.
///
/// When `C_φ` is bounded the result is at most `‖C_φ‖ · (1 + bisect_tol)`;
/// a plan containing `w₀` makes it exact.
pub fn norm_lower_bound(phi: &AffineMap, plan: &SamplePlan, bisect_tol: f64, tol: &Tolerances) -> Result<f64> {
    if !(bisect_tol > 0.0 && bisect_tol < 1.0) {
        return Err(Error::Input(format!("bisection tolerance must lie in (0, 1), got {bisect_tol}")));
    }
    let mut lo = single_point_bound(phi, plan)?;
    let parts = gram_parts(phi, plan)?;
    if certify_parts(&parts, lo, tol)?.psd {
        return Ok(lo);
    }
    let max_image = plan
        .points()
        .iter()
        .map(|x| phi.apply(x).norm_sqr())
        .fold(0.0, f64::max);
    let mut hi = (0.5 * max_image + 1.0).exp().max(lo);
    let mut grown = 0;
    while !certify_parts(&parts, hi, tol)?.psd {
        lo = hi;
        hi *= std::f64::consts::E;
        grown += 1;
        if grown > MAX_BRACKET_GROWTH || !hi.is_finite() {
            return Err(Error::Inconclusive(
                "no PSD upper bracket found for the bisection".into(),
            ));
        }
    }
    while hi - lo > bisect_tol * hi {
        let mid = 0.5 * (lo + hi);
        if certify_parts(&parts, mid, tol)?.psd {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Data of the quadratic kernel `F(z, w) = ⟨Tz, w⟩ − ⟨z, u⟩ − ⟨u, w⟩ + M²`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticKernelSpec {
    pub t: ComplexMatrix,
    pub u: ComplexVector,
    pub m: f64,
}

impl QuadraticKernelSpec {
    pub fn new(t: ComplexMatrix, u: ComplexVector, m: f64) -> Result<Self> {
        t.require_square("T")?;
        t.require_finite()?;
        if t.rows() != u.dim() {
            return Err(Error::Dimension(format!(
                "T is {}x{} but u has dimension {}",
                t.rows(),
                t.cols(),
                u.dim()
            )));
        }
        if !m.is_finite() || !u.is_finite() {
            return Err(Error::Input("M and u must be finite".into()));
        }
        Ok(Self { t, u, m })
    }

    /// `F(z, w)`.
    pub fn eval(&self, z: &ComplexVector, w: &ComplexVector) -> C64 {
        self.t.matvec(z).inner(w) - z.inner(&self.u) - self.u.inner(w) + self.m * self.m
    }

    /// The quadratic kernel built from `φ` and `ln M`:
    /// `F(z, w) = ⟨z, w⟩ − ⟨φ(z), φ(w)⟩ + 2 ln M`, i.e.
    /// `T = I − A*A`, `u = A*b`, and constant `2 ln M − ‖b‖²`.
    pub fn from_affine(phi: &AffineMap, ln_m: f64) -> Result<Self> {
        let n = phi.dim();
        let t = &ComplexMatrix::identity(n) - &(&phi.a().adjoint() * phi.a());
        let constant = 2.0 * ln_m - phi.b().norm_sqr();
        if constant < 0.0 {
            return Err(Error::Input("2 ln M must be at least ‖b‖²".into()));
        }
        Self::new(t, phi.adjoint_b(), constant.sqrt())
    }
}

/// Why `F(z, z)` is unbounded below.
#[derive(Clone, Debug, PartialEq)]
pub enum Unboundedness {
    /// `T` has a negative eigenvalue.
    NotPositive { min_eig: f64 },
    /// `u ∉ ran T^{1/2}`; `residual` is the distance left by the best fit.
    OutsideRange { residual: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuadraticInfimum {
    Finite {
        /// `M² − ‖v‖²`.
        inf: f64,
        v: ComplexVector,
        /// `‖v‖ ≤ M`, equivalently `F` is a PSD kernel.
        psd_equiv: bool,
    },
    UnboundedBelow {
        reason: Unboundedness,
        /// `F(t·dir, t·dir) → −∞` as `t → ∞`.
        direction: ComplexVector,
    },
}

impl QuadraticInfimum {
    /// The infimum, `−∞` when unbounded below.
    pub fn value(&self) -> f64 {
        match self {
            Self::Finite { inf, .. } => *inf,
            Self::UnboundedBelow { .. } => f64::NEG_INFINITY,
        }
    }
}

/// Closed-form `inf { F(z, z) : z ∈ C^n }`.
pub fn quadratic_form_infimum(spec: &QuadraticKernelSpec, tol: &Tolerances) -> Result<QuadraticInfimum> {
    let t_scale = 1f64.max(spec.t.max_abs());
    if spec.t.hermitian_defect() > tol.rank_tol * t_scale {
        return Err(Error::Input(format!(
            "T is not Hermitian (defect {})",
            spec.t.hermitian_defect()
        )));
    }
    let eig = hermitian_eig(&spec.t)?;
    let lam_max = eig.values.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let min_eig = eig.values.first().copied().unwrap_or(0.0);
    if min_eig < -tol.psd_tol * 1f64.max(lam_max) {
        return Ok(QuadraticInfimum::UnboundedBelow {
            reason: Unboundedness::NotPositive { min_eig },
            direction: eig.vectors.column(0),
        });
    }
    let cutoff = tol.rank_tol * 1f64.max(lam_max);
    let root = eig.apply_fn(|x| if x <= cutoff { 0.0 } else { x.sqrt() });
    let sol = min_norm_solve(&root, &spec.u, tol)?;
    let root_norm = eig.values.iter().fold(0.0f64, |a, &x| a.max(x.max(0.0).sqrt()));
    let threshold = tol.rank_tol * 1f64.max(spec.u.norm()).max(root_norm * sol.x.norm());
    if sol.residual > threshold {
        // the component of u in ker T drives F to −∞
        let n = spec.u.dim();
        let mut dir = ComplexVector::zeros(n);
        for k in 0..n {
            if eig.values[k] <= cutoff {
                let q = eig.vectors.column(k);
                dir = &dir + &q.scale(spec.u.inner(&q));
            }
        }
        return Ok(QuadraticInfimum::UnboundedBelow {
            reason: Unboundedness::OutsideRange { residual: sol.residual },
            direction: dir,
        });
    }
    let v_sq = sol.x.norm_sqr();
    Ok(QuadraticInfimum::Finite {
        inf: spec.m * spec.m - v_sq,
        psd_equiv: sol.x.norm() <= spec.m,
        v: sol.x,
    })
}

/// Gram matrix of `F` over the given points.
pub fn quadratic_gram(spec: &QuadraticKernelSpec, points: &[ComplexVector]) -> ComplexMatrix {
    let m = points.len();
    ComplexMatrix::from_fn(m, m, |l, j| spec.eval(&points[j], &points[l]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::composition_norm;

    fn v(x: &[f64]) -> ComplexVector {
        ComplexVector::from_real(x).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn shift(b: &[f64]) -> AffineMap {
        AffineMap::new(ComplexMatrix::zeros(b.len(), b.len()), v(b)).unwrap()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(bargmann_kernel(&v(&[0.0]), &v(&[0.0])).unwrap(), c(1.0, 0.0));
        let e = bargmann_kernel(&v(&[1.0]), &v(&[1.0])).unwrap();
        assert!((e.re - std::f64::consts::E).abs() < 1e-15);
        let z = ComplexVector::new(vec![c(0.3, -0.7), c(1.1, 0.2)]).unwrap();
        let w = ComplexVector::new(vec![c(-0.5, 0.4), c(0.1, 0.9)]).unwrap();
        let (kzw, kwz) = (bargmann_kernel(&z, &w).unwrap(), bargmann_kernel(&w, &z).unwrap());
        assert!((kzw - kwz.conj()).norm() < 1e-15);
    }

    #[test]
    fn kernel_overflow_guard() {
        let big = v(&[30.0]);
        assert!(matches!(bargmann_kernel(&big, &big), Err(Error::Range(_))));
    }

    #[test]
    fn gram_examples() {
        let plan = SamplePlan::random(2, 5, 2.0, 7).unwrap();
        let g = phi_gram(&AffineMap::identity(2), 1.0, &plan).unwrap();
        assert_eq!(g.max_abs(), 0.0);

        let b = [0.6, -0.8];
        let origin = SamplePlan::new(vec![v(&[0.0, 0.0])], 1.0).unwrap();
        let g = phi_gram(&shift(&b), 1.3, &origin).unwrap();
        assert!((g[(0, 0)].re - (1.69 - 1f64.exp())).abs() < 1e-15);
    }

    #[test]
    fn large_m_is_positive_definite() {
        let phi = AffineMap::new(ComplexMatrix::from_real_diag(&[0.5, -0.3]), v(&[0.2, 0.4])).unwrap();
        let plan = SamplePlan::random(2, 8, 1.0, 3).unwrap();
        let gmax = plan.points().iter().map(|x| phi.apply(x).norm_sqr()).fold(0.0, f64::max);
        let m = 2.0 * (0.5 * gmax).exp();
        let eig = hermitian_eig(&phi_gram(&phi, m, &plan).unwrap()).unwrap();
        assert!(eig.values[0] > 0.0);
    }

    #[test]
    fn certify_examples() {
        let tol = Tolerances::default();
        let plan = SamplePlan::random(1, 6, 2.0, 11).unwrap();
        let id = psd_certify(&AffineMap::identity(1), 1.0, &plan, &tol).unwrap();
        assert!(id.psd);
        assert_eq!(id.min_eig, 0.0);

        let origin = SamplePlan::new(vec![v(&[0.0])], 1.0).unwrap();
        assert!(!psd_certify(&shift(&[1.0]), 1.6, &origin, &tol).unwrap().psd);
        assert!(psd_certify(&shift(&[1.0]), 1.7, &origin, &tol).unwrap().psd);
    }

    #[test]
    fn lower_bound_examples() {
        let tol = Tolerances::default();
        let plan = SamplePlan::random(2, 6, 2.0, 5).unwrap();
        let lb = norm_lower_bound(&AffineMap::identity(2), &plan, 1e-9, &tol).unwrap();
        assert_eq!(lb, 1.0);

        let phi = AffineMap::new(ComplexMatrix::from_real_diag(&[0.5]), v(&[0.5])).unwrap();
        let at_w0 = SamplePlan::new(vec![v(&[1.0 / 3.0])], 1.0).unwrap();
        let lb = norm_lower_bound(&phi, &at_w0, 1e-9, &tol).unwrap();
        assert!((lb / (1.0f64 / 6.0).exp() - 1.0).abs() < 1e-9);

        let b = [0.3, 0.9];
        let origin = SamplePlan::new(vec![v(&[0.0, 0.0])], 1.0).unwrap();
        let lb = norm_lower_bound(&shift(&b), &origin, 1e-9, &tol).unwrap();
        assert!((lb / (0.45f64).exp() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lower_bound_rejects_empty_plan() {
        let empty = SamplePlan::new(vec![], 1.0).unwrap();
        let r = norm_lower_bound(&AffineMap::identity(1), &empty, 1e-9, &Tolerances::default());
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn structured_plan_contains_w0() {
        let phi = AffineMap::new(ComplexMatrix::from_real_diag(&[0.9]), v(&[1.5])).unwrap();
        let cert = composition_norm(&phi, &Tolerances::default()).unwrap();
        let plan = SamplePlan::structured(&phi, &cert, 4, 2.0, 1).unwrap();
        assert_eq!(plan.len(), 6);
        assert_eq!(plan.points()[0].norm(), 0.0);
        assert_eq!(&plan.points()[1], cert.w0.as_ref().unwrap());
        assert!(plan.radius() >= cert.w0.as_ref().unwrap().norm());
    }

    #[test]
    fn quadratic_examples() {
        let tol = Tolerances::default();
        let s = QuadraticKernelSpec::new(ComplexMatrix::identity(2), v(&[0.0, 0.0]), 1.0).unwrap();
        match quadratic_form_infimum(&s, &tol).unwrap() {
            QuadraticInfimum::Finite { inf, v, psd_equiv } => {
                assert!((inf - 1.0).abs() < 1e-15);
                assert_eq!(v.norm(), 0.0);
                assert!(psd_equiv);
            }
            other => panic!("unexpected {other:?}"),
        }

        let t = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let s = QuadraticKernelSpec::new(t.clone(), v(&[1.0, 0.0]), 2.0).unwrap();
        match quadratic_form_infimum(&s, &tol).unwrap() {
            QuadraticInfimum::Finite { inf, v: vv, .. } => {
                assert!((inf - 3.0).abs() < 1e-14);
                assert!((&vv - &v(&[1.0, 0.0])).norm() < 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }

        let s = QuadraticKernelSpec::new(t, v(&[0.0, 1.0]), 5.0).unwrap();
        let r = quadratic_form_infimum(&s, &tol).unwrap();
        assert_eq!(r.value(), f64::NEG_INFINITY);
        if let QuadraticInfimum::UnboundedBelow { direction, .. } = r {
            let f_near = s.eval(&direction.scale(c(100.0, 0.0)), &direction.scale(c(100.0, 0.0))).re;
            let f_far = s.eval(&direction.scale(c(1000.0, 0.0)), &direction.scale(c(1000.0, 0.0))).re;
            assert!(f_far < f_near && f_near < 0.0);
        }
    }

    #[test]
    fn quadratic_rejects_non_hermitian() {
        let t = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        let s = QuadraticKernelSpec::new(t, v(&[0.0, 0.0]), 1.0).unwrap();
        assert!(matches!(quadratic_form_infimum(&s, &Tolerances::default()), Err(Error::Input(_))));
    }

    #[test]
    fn negative_t_is_unbounded() {
        let s = QuadraticKernelSpec::new(ComplexMatrix::from_real_diag(&[1.0, -0.5]), v(&[0.0, 0.0]), 1.0).unwrap();
        assert!(matches!(
            quadratic_form_infimum(&s, &Tolerances::default()).unwrap(),
            QuadraticInfimum::UnboundedBelow { reason: Unboundedness::NotPositive { .. }, .. }
        ));
    }

    #[test]
    fn from_affine_recovers_norm_exponent() {
        // with 2 ln M = ‖v‖² + ‖b‖² the infimum of F(z, z) is exactly 0
        let phi = AffineMap::new(ComplexMatrix::from_real_diag(&[0.5]), v(&[0.5])).unwrap();
        let spec = QuadraticKernelSpec::from_affine(&phi, 1.0 / 6.0).unwrap();
        let inf = quadratic_form_infimum(&spec, &Tolerances::default()).unwrap().value();
        assert!(inf.abs() < 1e-14);
    }
}
