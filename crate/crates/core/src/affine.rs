//! Boundedness, norm and structure of `C_φ` for affine `φ(z) = Az + b`.
//!
//! `C_φ` is bounded exactly when `‖A‖ ≤ 1` and `A*b` lies in the range of
//! the defect operator `(I − A*A)^{1/2}`; its norm is then
//! `exp(½‖v‖² + ½‖b‖²)` with `v` the minimal-norm solution of
//! `(I − A*A)^{1/2} v = A*b`. On `C^n` the latter is equivalent to
//! `⟨Aζ, b⟩ = 0` for every `ζ` with `‖Aζ‖ = ‖ζ‖`, and every solution `w₀` of
//! `(I − A*A) w₀ = A*b` gives the same norm as
//! `exp(½(‖w₀‖² − ‖Aw₀‖² + ‖b‖²))`. Both routes are computed and compared.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, min_norm_solve, spectral_norm, ComplexMatrix, ComplexVector, Tolerances};

/// Relative agreement required between the two norm formulas and between
/// the two routes to `v`.
pub const CROSS_CHECK_TOL: f64 = 1e-8;

/// The affine self-map `φ(z) = Az + b` of `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    a: ComplexMatrix,
    b: ComplexVector,
}

impl AffineMap {
    pub fn new(a: ComplexMatrix, b: ComplexVector) -> Result<Self> {
        a.require_square("A")?;
        a.require_finite()?;
        if a.rows() != b.dim() {
            return Err(Error::Dimension(format!(
                "A is {}x{} but b has dimension {}",
                a.rows(),
                a.cols(),
                b.dim()
            )));
        }
        if a.rows() == 0 {
            return Err(Error::Input("dimension must be at least 1".into()));
        }
        if !b.is_finite() {
            return Err(Error::Input("b is not finite".into()));
        }
        Ok(Self { a, b })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            a: ComplexMatrix::identity(n),
            b: ComplexVector::zeros(n),
        }
    }

    /// `φ(z) = Az`.
    pub fn linear(a: ComplexMatrix) -> Result<Self> {
        let n = a.rows();
        Self::new(a, ComplexVector::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexVector {
        &self.b
    }

    pub fn apply(&self, z: &ComplexVector) -> ComplexVector {
        &self.a.matvec(z) + &self.b
    }

    /// `A*b`.
    pub fn adjoint_b(&self) -> ComplexVector {
        self.a.adjoint().matvec(&self.b)
    }

    /// `self ∘ inner`, i.e. `z ↦ self(inner(z))`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        if self.dim() != inner.dim() {
            return Err(Error::Dimension("cannot compose maps of different dimension".into()));
        }
        let a = &self.a * &inner.a;
        let b = &self.a.matvec(&inner.b) + &self.b;
        Ok(AffineMap { a, b })
    }
}

/// Spectral data of `I − A*A` with small eigenvalues snapped to zero.
///
/// Eigenvalues `≤ rank_tol` (including negative round-off) are set to zero;
/// the matching eigenvectors span the kernel `{ζ : ‖Aζ‖ = ‖ζ‖}`.
#[derive(Clone, Debug)]
pub struct Defect {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    pub kernel_dim: usize,
}

impl Defect {
    pub fn of(a: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        a.require_square("A")?;
        let n = a.rows();
        let d = &ComplexMatrix::identity(n) - &(&a.adjoint() * a);
        let eig = hermitian_eig(&d)?;
        let mut kernel_dim = 0;
        let values = eig
            .values
            .iter()
            .map(|&x| {
                if x <= tol.rank_tol {
                    kernel_dim += 1;
                    0.0
                } else {
                    x
                }
            })
            .collect();
        Ok(Self {
            values,
            vectors: eig.vectors,
            kernel_dim,
        })
    }

    fn assemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let q = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| q[(i, k)] * f(self.values[k]) * q[(j, k)].conj())
                .sum()
        })
    }

    /// `I − A*A` rebuilt from the snapped spectrum.
    pub fn matrix(&self) -> ComplexMatrix {
        self.assemble(|x| x)
    }

    /// `(I − A*A)^{1/2}`.
    pub fn sqrt(&self) -> ComplexMatrix {
        self.assemble(f64::sqrt)
    }

    /// Orthonormal basis of `ker(I − A*A)`.
    pub fn kernel_basis(&self) -> Vec<ComplexVector> {
        // eigenvalues are ascending, so the kernel comes first
        (0..self.kernel_dim).map(|k| self.vectors.column(k)).collect()
    }
}

fn check_contraction(a: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    let norm = spectral_norm(a)?;
    if norm > 1.0 + tol.boundary_tol {
        return Err(Error::Precondition(format!(
            "‖A‖ = {norm} exceeds 1; the defect I − A*A is not positive semi-definite"
        )));
    }
    Ok(norm)
}

/// `(I − A*A)^{1/2}` as a Hermitian PSD matrix.
pub fn defect_sqrt(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    a.require_square("A")?;
    check_contraction(a, tol)?;
    Ok(Defect::of(a, tol)?.sqrt())
}

/// Outcome of the test `A*b ∈ ran (I − A*A)^{1/2}`.
#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    /// Minimal-norm (least-squares) solution of `(I − A*A)^{1/2} v = A*b`.
    pub v: ComplexVector,
    /// `‖(I − A*A)^{1/2} v − A*b‖`.
    pub residual: f64,
    /// Norm of the projection of `A*b` onto `ker(I − A*A)`.
    pub kernel_projection: f64,
    pub kernel_dim: usize,
}

fn membership_threshold(tol: &Tolerances, atb: &ComplexVector, sqrt_norm: f64, v: &ComplexVector) -> f64 {
    tol.rank_tol * 1f64.max(atb.norm()).max(sqrt_norm * v.norm())
}

/// Decide range membership by two routes: the pseudoinverse residual and the
/// projection of `A*b` onto the defect kernel. A disagreement between them
/// is reported as [`Error::CrossCheck`].
pub fn range_membership(phi: &AffineMap, tol: &Tolerances) -> Result<Membership> {
    check_contraction(phi.a(), tol)?;
    let defect = Defect::of(phi.a(), tol)?;
    membership_from_defect(phi, &defect, tol)
}

fn membership_from_defect(phi: &AffineMap, defect: &Defect, tol: &Tolerances) -> Result<Membership> {
    let atb = phi.adjoint_b();
    let root = defect.sqrt();
    let sol = min_norm_solve(&root, &atb, tol)?;
    let root_norm = defect.values.iter().fold(0.0f64, |m, &x| m.max(x.sqrt()));
    let threshold = membership_threshold(tol, &atb, root_norm, &sol.x);
    let by_residual = sol.residual <= threshold;

    let kernel_projection = defect
        .kernel_basis()
        .iter()
        .map(|zeta| atb.inner(zeta).norm_sqr())
        .fold(0.0, |acc, x| acc + x)
        .sqrt();
    let by_projection = kernel_projection <= threshold;

    if by_residual != by_projection {
        return Err(Error::CrossCheck(format!(
            "range membership routes disagree: residual {} vs kernel projection {} (threshold {threshold})",
            sol.residual, kernel_projection
        )));
    }
    Ok(Membership {
        member: by_residual,
        v: sol.x,
        residual: sol.residual,
        kernel_projection,
        kernel_dim: defect.kernel_dim,
    })
}

/// The vector `v` together with a solution `w₀` of `(I − A*A) w₀ = A*b`.
#[derive(Clone, Debug)]
pub struct MinimalNormVectors {
    pub v: ComplexVector,
    pub w0: ComplexVector,
}

/// Compute `v` and `w₀`, checking `v = (I − A*A)^{1/2} w₀` to
/// [`CROSS_CHECK_TOL`].
pub fn minimal_norm_vector(phi: &AffineMap, tol: &Tolerances) -> Result<MinimalNormVectors> {
    check_contraction(phi.a(), tol)?;
    let defect = Defect::of(phi.a(), tol)?;
    minimal_vectors_from_defect(phi, &defect, tol)
}

fn minimal_vectors_from_defect(
    phi: &AffineMap,
    defect: &Defect,
    tol: &Tolerances,
) -> Result<MinimalNormVectors> {
    let m = membership_from_defect(phi, defect, tol)?;
    if !m.member {
        return Err(Error::Unbounded(format!(
            "A*b is not in the range of (I − A*A)^(1/2) (residual {})",
            m.residual
        )));
    }
    let atb = phi.adjoint_b();
    let w0 = min_norm_solve(&defect.matrix(), &atb, tol)?.x;
    let via_w0 = defect.sqrt().matvec(&w0);
    let gap = (&via_w0 - &m.v).norm();
    if gap > CROSS_CHECK_TOL * 1f64.max(m.v.norm()) {
        return Err(Error::CrossCheck(format!(
            "v from the square-root solve and from (I − A*A)^(1/2) w0 differ by {gap}"
        )));
    }
    // v must be orthogonal to the defect kernel
    let leak = defect
        .kernel_basis()
        .iter()
        .map(|zeta| m.v.inner(zeta).norm_sqr())
        .fold(0.0, |acc, x| acc + x)
        .sqrt();
    if leak > CROSS_CHECK_TOL * 1f64.max(m.v.norm()) {
        return Err(Error::CrossCheck(format!(
            "v has a component {leak} in the defect kernel"
        )));
    }
    Ok(MinimalNormVectors { v: m.v, w0 })
}

/// Everything known about `‖C_φ‖` for one map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormCertificate {
    pub bounded: bool,
    pub norm: Option<f64>,
    /// The CMS form `exp(½(‖w₀‖² − ‖Aw₀‖² + ‖b‖²))`, when `w₀` exists.
    pub cms_norm: Option<f64>,
    pub v: Option<ComplexVector>,
    pub w0: Option<ComplexVector>,
    pub a_norm: f64,
    /// Absent when `‖A‖ > 1`, where membership is not defined.
    pub membership_residual: Option<f64>,
    pub kernel_projection: Option<f64>,
    pub kernel_dim: Option<usize>,
    /// `‖A‖` within `boundary_tol` of 1.
    pub boundary: bool,
    pub tolerances: Tolerances,
}

/// `‖C_φ‖` from the closed formula, cross-checked against the CMS form.
///
/// Unboundedness is a verdict (`bounded == false`), not an error. Errors
/// are returned only for invalid tolerances or when the two independent
/// routes disagree.
pub fn composition_norm(phi: &AffineMap, tol: &Tolerances) -> Result<NormCertificate> {
    tol.validate()?;
    let a_norm = spectral_norm(phi.a())?;
    let boundary = (a_norm - 1.0).abs() <= tol.boundary_tol;
    let mut cert = NormCertificate {
        bounded: false,
        norm: None,
        cms_norm: None,
        v: None,
        w0: None,
        a_norm,
        membership_residual: None,
        kernel_projection: None,
        kernel_dim: None,
        boundary,
        tolerances: *tol,
    };
    if a_norm > 1.0 + tol.boundary_tol {
        return Ok(cert);
    }
    let defect = Defect::of(phi.a(), tol)?;
    let m = membership_from_defect(phi, &defect, tol)?;
    cert.membership_residual = Some(m.residual);
    cert.kernel_projection = Some(m.kernel_projection);
    cert.kernel_dim = Some(m.kernel_dim);
    if !m.member {
        return Ok(cert);
    }
    let vecs = minimal_vectors_from_defect(phi, &defect, tol)?;
    let b_sq = phi.b().norm_sqr();
    let norm = (0.5 * (vecs.v.norm_sqr() + b_sq)).exp();
    let aw0 = phi.a().matvec(&vecs.w0);
    let cms = (0.5 * (vecs.w0.norm_sqr() - aw0.norm_sqr() + b_sq)).exp();
    if ((norm - cms) / norm).abs() > CROSS_CHECK_TOL {
        return Err(Error::CrossCheck(format!(
            "norm formulas disagree: exp(½‖v‖²+½‖b‖²) = {norm}, CMS form = {cms}"
        )));
    }
    cert.bounded = true;
    cert.norm = Some(norm);
    cert.cms_norm = Some(cms);
    cert.v = Some(vecs.v);
    cert.w0 = Some(vecs.w0);
    Ok(cert)
}

/// `⟨Aζ, b⟩ = 0` for every `ζ` with `‖Aζ‖ = ‖ζ‖`.
pub fn cms_condition_check(phi: &AffineMap, tol: &Tolerances) -> Result<bool> {
    check_contraction(phi.a(), tol)?;
    let defect = Defect::of(phi.a(), tol)?;
    let atb = phi.adjoint_b();
    let root_norm = defect.values.iter().fold(0.0f64, |m, &x| m.max(x.sqrt()));
    let sol_norm = min_norm_solve(&defect.sqrt(), &atb, tol)?.x;
    let threshold = membership_threshold(tol, &atb, root_norm, &sol_norm);
    let worst = defect
        .kernel_basis()
        .iter()
        .map(|zeta| phi.a().matvec(zeta).inner(phi.b()).norm_sqr())
        .fold(0.0, |acc, x| acc + x)
        .sqrt();
    Ok(worst <= threshold)
}

/// Structural verdicts for `C_φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub compact: bool,
    pub normal: bool,
    pub isometric: bool,
    pub coisometric: bool,
    pub unitary: bool,
}

/// Compactness and normal / isometric / co-isometric structure of `C_φ`.
///
/// On `C^n` every matrix is compact, so compactness reduces to
/// `‖A‖ < 1`. Normality and (co-)isometry need `φ(0) = b = 0`; then `C_φ`
/// is normal iff `A` is normal, isometric iff `AA* = I`, co-isometric iff
/// `A*A = I`.
pub fn classify_structure(phi: &AffineMap, tol: &Tolerances) -> Result<StructureReport> {
    tol.validate()?;
    let a = phi.a();
    let n = phi.dim();
    let a_norm = spectral_norm(a)?;
    let scale = 1f64.max(a_norm * a_norm);
    let eq_tol = tol.boundary_tol * scale;
    let b_zero = phi.b().norm() <= tol.boundary_tol;
    let contraction = a_norm <= 1.0 + tol.boundary_tol;

    let aa = a * &a.adjoint();
    let a_a = &a.adjoint() * a;
    let id = ComplexMatrix::identity(n);
    let normal_a = spectral_norm(&(&aa - &a_a))? <= eq_tol;
    let coisometric_a = spectral_norm(&(&aa - &id))? <= eq_tol;
    let isometric_a = spectral_norm(&(&a_a - &id))? <= eq_tol;

    let compact = a_norm < 1.0 - tol.boundary_tol;
    let normal = b_zero && contraction && normal_a;
    let isometric = b_zero && coisometric_a;
    let coisometric = b_zero && isometric_a;
    Ok(StructureReport {
        compact,
        normal,
        isometric,
        coisometric,
        unitary: isometric && coisometric,
    })
}

/// `z ↦ U A U* z + U b`, the conjugate of `φ` by the unitary `U`.
pub fn unitary_conjugate(phi: &AffineMap, u: &ComplexMatrix) -> Result<AffineMap> {
    let a = &(u * phi.a()) * &u.adjoint();
    AffineMap::new(a, u.matvec(phi.b()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::C64;

    fn diag(d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(d)
    }

    fn vec_r(x: &[f64]) -> ComplexVector {
        ComplexVector::from_real(x).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::for_dim(2)
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        let r = AffineMap::new(ComplexMatrix::identity(2), ComplexVector::zeros(3));
        assert!(matches!(r, Err(Error::Dimension(_))));
        let r = AffineMap::new(ComplexMatrix::zeros(2, 3), ComplexVector::zeros(2));
        assert!(matches!(r, Err(Error::Dimension(_))));
    }

    #[test]
    fn defect_sqrt_examples() {
        let t = tol();
        let s = defect_sqrt(&ComplexMatrix::zeros(2, 2), &t).unwrap();
        assert!((&s - &ComplexMatrix::identity(2)).max_abs() < 1e-15);
        let s = defect_sqrt(&diag(&[0.6]), &t).unwrap();
        assert!((s[(0, 0)].re - 0.8).abs() < 1e-15);
        let rot = ComplexMatrix::from_real_rows(&[vec![0.6, -0.8], vec![0.8, 0.6]]).unwrap();
        assert!(defect_sqrt(&rot, &t).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn defect_sqrt_squares_back() {
        let a = ComplexMatrix::from_rows(&[
            vec![C64::new(0.3, 0.1), C64::new(0.2, 0.0)],
            vec![C64::new(-0.1, 0.4), C64::new(0.5, -0.2)],
        ])
        .unwrap();
        let s = defect_sqrt(&a, &tol()).unwrap();
        let want = &ComplexMatrix::identity(2) - &(&a.adjoint() * &a);
        assert!((&(&s * &s) - &want).max_abs() < 1e-12);
        assert!(s.hermitian_defect() < 1e-15);
    }

    #[test]
    fn defect_sqrt_rejects_expansive() {
        assert!(matches!(
            defect_sqrt(&diag(&[1.5, 0.0]), &tol()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn membership_examples() {
        let t = tol();
        let out = AffineMap::new(diag(&[1.0, 0.5]), vec_r(&[1.0, 0.0])).unwrap();
        let m = range_membership(&out, &t).unwrap();
        assert!(!m.member);
        assert!((m.residual - 1.0).abs() < 1e-12);
        assert!((m.kernel_projection - 1.0).abs() < 1e-12);

        let inn = AffineMap::new(diag(&[1.0, 0.5]), vec_r(&[0.0, 1.0])).unwrap();
        let m = range_membership(&inn, &t).unwrap();
        assert!(m.member);
        assert!(m.v[0].norm() < 1e-15);
        assert!((m.v[1].re - 1.0 / 3f64.sqrt()).abs() < 1e-14);

        let strict = AffineMap::new(diag(&[0.9, -0.3]), vec_r(&[5.0, -2.0])).unwrap();
        assert!(range_membership(&strict, &t).unwrap().member);
    }

    #[test]
    fn minimal_norm_vector_examples() {
        let t = Tolerances::for_dim(1);
        let phi = AffineMap::new(diag(&[0.5]), vec_r(&[0.5])).unwrap();
        let mv = minimal_norm_vector(&phi, &t).unwrap();
        assert!((mv.v[0].re - 0.25 / 0.75f64.sqrt()).abs() < 1e-15);
        assert!((mv.w0[0].re - 1.0 / 3.0).abs() < 1e-15);

        let phi = AffineMap::new(ComplexMatrix::zeros(2, 2), vec_r(&[3.0, -1.0])).unwrap();
        assert_eq!(minimal_norm_vector(&phi, &tol()).unwrap().v.norm(), 0.0);

        let out = AffineMap::new(diag(&[1.0, 0.5]), vec_r(&[1.0, 0.0])).unwrap();
        assert!(matches!(minimal_norm_vector(&out, &tol()), Err(Error::Unbounded(_))));
    }

    #[test]
    fn composition_norm_examples() {
        let id = composition_norm(&AffineMap::identity(3), &Tolerances::for_dim(3)).unwrap();
        assert!(id.bounded && id.boundary);
        assert_eq!(id.norm, Some(1.0));
        assert_eq!(id.kernel_dim, Some(3));

        let b = vec_r(&[0.3, -1.2]);
        let phi = AffineMap::new(ComplexMatrix::zeros(2, 2), b.clone()).unwrap();
        let cert = composition_norm(&phi, &tol()).unwrap();
        assert!((cert.norm.unwrap() - (0.5 * b.norm_sqr()).exp()).abs() < 1e-14);

        let phi = AffineMap::new(diag(&[0.5]), vec_r(&[0.5])).unwrap();
        let cert = composition_norm(&phi, &Tolerances::for_dim(1)).unwrap();
        assert!((cert.norm.unwrap() - (1.0f64 / 6.0).exp()).abs() < 1e-14);
        assert!((cert.cms_norm.unwrap() - (1.0f64 / 6.0).exp()).abs() < 1e-14);
        assert!(!cert.boundary);
    }

    #[test]
    fn expansive_map_is_unbounded_verdict() {
        let phi = AffineMap::linear(diag(&[1.1, 0.2])).unwrap();
        let cert = composition_norm(&phi, &tol()).unwrap();
        assert!(!cert.bounded);
        assert!(cert.norm.is_none() && cert.membership_residual.is_none());
    }

    #[test]
    fn cms_condition_examples() {
        let t = tol();
        let out = AffineMap::new(diag(&[1.0, 0.5]), vec_r(&[1.0, 0.0])).unwrap();
        assert!(!cms_condition_check(&out, &t).unwrap());
        let inn = AffineMap::new(diag(&[1.0, 0.5]), vec_r(&[0.0, 1.0])).unwrap();
        assert!(cms_condition_check(&inn, &t).unwrap());
        let strict = AffineMap::new(diag(&[0.7, 0.1]), vec_r(&[1.0, 1.0])).unwrap();
        assert!(cms_condition_check(&strict, &t).unwrap());
    }

    #[test]
    fn structure_examples() {
        let t = tol();
        let rot = ComplexMatrix::from_rows(&[
            vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(-0.6, 0.8)],
        ])
        .unwrap();
        let s = classify_structure(&AffineMap::linear(rot).unwrap(), &t).unwrap();
        assert_eq!(
            s,
            StructureReport { compact: false, normal: true, isometric: true, coisometric: true, unitary: true }
        );

        let half = diag(&[0.5, 0.5]);
        let s = classify_structure(&AffineMap::linear(half.clone()).unwrap(), &t).unwrap();
        assert!(s.normal && s.compact && !s.isometric && !s.unitary);

        let s = classify_structure(&AffineMap::new(half, vec_r(&[0.0, 1.0])).unwrap(), &t).unwrap();
        assert!(s.compact && !s.normal && !s.isometric && !s.coisometric);
    }

    #[test]
    fn compose_matches_pointwise() {
        let f = AffineMap::new(diag(&[0.5, 2.0]), vec_r(&[1.0, 0.0])).unwrap();
        let g = AffineMap::new(
            ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
            vec_r(&[0.0, -1.0]),
        )
        .unwrap();
        let z = vec_r(&[0.3, 0.7]);
        let fg = f.compose(&g).unwrap();
        assert!((&fg.apply(&z) - &f.apply(&g.apply(&z))).norm() < 1e-15);
    }
}
