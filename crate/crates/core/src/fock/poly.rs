use std::sync::Arc;

use super::basis::TruncatedBasis;
use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::numerics::{ComplexVector, C64};

/// A polynomial `f = Σ c_α z^α` stored by its monomial coefficients.
#[derive(Clone, Debug)]
pub struct PolyCoeffs {
    basis: Arc<TruncatedBasis>,
    coeffs: Vec<C64>,
}

impl PolyCoeffs {
    pub fn new(basis: Arc<TruncatedBasis>, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::Dimension(format!(
                "basis has {} elements but {} coefficients were given",
                basis.len(),
                coeffs.len()
            )));
        }
        Ok(Self { basis, coeffs })
    }

    pub fn zero(basis: Arc<TruncatedBasis>) -> Self {
        let n = basis.len();
        Self {
            basis,
            coeffs: vec![C64::new(0.0, 0.0); n],
        }
    }

    /// The single monomial `z^α` with `α = basis.multi_index(i)`.
    pub fn monomial(basis: Arc<TruncatedBasis>, i: usize) -> Self {
        let mut p = Self::zero(basis);
        p.coeffs[i] = C64::new(1.0, 0.0);
        p
    }

    pub fn basis(&self) -> &Arc<TruncatedBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Highest degree carrying a nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .find(|(_, c)| c.norm() != 0.0)
            .map_or(0, |(i, _)| self.basis.multi_index(i).degree() as usize)
    }

    /// Coordinates in the orthonormal basis `f_α = z^α / √α!`.
    pub fn orthonormal_coordinates(&self) -> ComplexVector {
        ComplexVector::from_vec_unchecked(
            self.coeffs
                .iter()
                .zip(self.basis.indices())
                .map(|(c, a)| c * a.factorial().sqrt())
                .collect(),
        )
    }

    /// Direct evaluation `f(z) = Σ c_α z^α`.
    pub fn evaluate(&self, z: &ComplexVector) -> C64 {
        assert_eq!(z.dim(), self.basis.n());
        self.coeffs
            .iter()
            .zip(self.basis.indices())
            .map(|(c, a)| {
                let mono: C64 = a
                    .exponents()
                    .iter()
                    .zip(z.iter())
                    .map(|(&k, zi)| zi.powu(k))
                    .product();
                c * mono
            })
            .sum()
    }

    /// `self · (b + Σ_j a_j z_j)`. Panics if the product would leave the
    /// basis (callers keep `deg self < d`).
    pub(crate) fn mul_linear(&self, constant: C64, linear: &[C64]) -> Self {
        let mut out = Self::zero(self.basis.clone());
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            out.coeffs[i] += c * constant;
            for (j, &aj) in linear.iter().enumerate() {
                let p = self
                    .basis
                    .successor(i, j)
                    .expect("product degree exceeds the truncation");
                out.coeffs[p] += c * aj;
            }
        }
        out
    }
}

/// `⟨f, g⟩ = Σ_α α! c_α(f) conj(c_α(g))`.
pub fn poly_inner(f: &PolyCoeffs, g: &PolyCoeffs) -> Result<C64> {
    if !f.basis.same_as(&g.basis) {
        return Err(Error::Input("polynomials live on different bases".into()));
    }
    Ok(f.coeffs
        .iter()
        .zip(&g.coeffs)
        .zip(f.basis.indices())
        .map(|((a, b), idx)| a * b.conj() * idx.factorial())
        .sum())
}

/// Products `Π_i ℓ_i^{α_i}` with `ℓ_i(z) = (Az + b)_i`, for every `α` in
/// the basis with `|α| ≤ max_degree`. Built in basis order, each from a
/// predecessor of one lower degree.
pub(crate) fn affine_monomials(phi: &AffineMap, basis: &Arc<TruncatedBasis>, max_degree: usize) -> Vec<PolyCoeffs> {
    let n = basis.n();
    let rows: Vec<Vec<C64>> = (0..n).map(|i| phi.a().row(i).to_vec()).collect();
    let limit = basis.degree_range(max_degree).end;
    let mut out: Vec<PolyCoeffs> = Vec::with_capacity(limit);
    for pos in 0..limit {
        let alpha = basis.multi_index(pos);
        if pos == 0 {
            out.push(PolyCoeffs::monomial(basis.clone(), 0));
            continue;
        }
        let i = alpha
            .exponents()
            .iter()
            .rposition(|&k| k > 0)
            .expect("nonzero index");
        let mut prev = alpha.exponents().to_vec();
        prev[i] -= 1;
        let prev_pos = basis
            .position(&super::basis::MultiIndex::new(prev))
            .expect("predecessor in basis");
        let p = out[prev_pos].mul_linear(phi.b()[i], &rows[i]);
        out.push(p);
    }
    out
}

/// Monomial coefficients of `f ∘ φ`.
pub fn compose_poly(phi: &AffineMap, f: &PolyCoeffs) -> Result<PolyCoeffs> {
    if phi.dim() != f.basis.n() {
        return Err(Error::Dimension(format!(
            "map acts on C^{} but the polynomial has {} variables",
            phi.dim(),
            f.basis.n()
        )));
    }
    let deg = f.degree();
    let products = affine_monomials(phi, &f.basis, deg);
    let mut out = PolyCoeffs::zero(f.basis.clone());
    for (c, p) in f.coeffs.iter().zip(&products) {
        if *c == C64::new(0.0, 0.0) {
            continue;
        }
        for (o, q) in out.coeffs.iter_mut().zip(&p.coeffs) {
            *o += c * q;
        }
    }
    Ok(out)
}

/// Truncation of `K_w(z) = exp(⟨z, w⟩)` to the basis: coefficients
/// `conj(w)^α / α!`.
pub fn kernel_truncation(basis: &Arc<TruncatedBasis>, w: &ComplexVector) -> Result<PolyCoeffs> {
    if w.dim() != basis.n() {
        return Err(Error::Dimension("kernel point has the wrong dimension".into()));
    }
    let wc = w.conj();
    let coeffs = basis
        .indices()
        .iter()
        .map(|a| {
            let mono: C64 = a
                .exponents()
                .iter()
                .zip(wc.iter())
                .map(|(&k, z)| z.powu(k))
                .product();
            mono / a.factorial()
        })
        .collect();
    PolyCoeffs::new(basis.clone(), coeffs)
}

/// `(⟨f, K_w⟩, f(w))`; equal up to round-off whenever `deg f ≤ d`.
pub fn reproducing_check(w: &ComplexVector, f: &PolyCoeffs) -> Result<(C64, C64)> {
    let k = kernel_truncation(f.basis(), w)?;
    Ok((poly_inner(f, &k)?, f.evaluate(w)))
}
