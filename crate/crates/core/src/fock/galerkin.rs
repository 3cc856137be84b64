use std::sync::Arc;

use super::basis::{enumerate_basis, sqrt_factorial_ratio, TruncatedBasis};
use super::poly::affine_monomials;
use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::numerics::{spectral_norm, ComplexMatrix, ComplexVector, C64};

/// Largest truncated basis for which a dense matrix is assembled.
pub const MAX_MATRIX_SIZE: usize = 3000;

/// `C_φ` restricted to polynomials of degree `≤ d`, in the orthonormal
/// basis `f_α = z^α / √α!`.
///
/// Column `α` holds the coordinates of `C_φ f_α`. Affine maps never raise
/// degree, so this subspace is invariant and the matrix is the exact
/// restriction, not a compression.
pub fn matrix_of_composition(phi: &AffineMap, d: usize) -> Result<ComplexMatrix> {
    let basis = Arc::new(enumerate_basis(phi.dim(), d)?);
    matrix_on_basis(phi, &basis)
}

pub fn matrix_on_basis(phi: &AffineMap, basis: &Arc<TruncatedBasis>) -> Result<ComplexMatrix> {
    if basis.n() != phi.dim() {
        return Err(Error::Dimension("basis and map dimensions differ".into()));
    }
    let size = basis.len();
    if size > MAX_MATRIX_SIZE {
        return Err(Error::Resource(format!(
            "truncated matrix would be {size}x{size} (limit {MAX_MATRIX_SIZE})"
        )));
    }
    let products = affine_monomials(phi, basis, basis.max_degree());
    let mut m = ComplexMatrix::zeros(size, size);
    for (col, p) in products.iter().enumerate() {
        let alpha = basis.multi_index(col);
        for (row, &c) in p.coeffs().iter().enumerate() {
            if c != C64::new(0.0, 0.0) {
                m[(row, col)] = c * sqrt_factorial_ratio(basis.multi_index(row), alpha);
            }
        }
    }
    Ok(m)
}

/// `‖C_φ‖` restricted to degree `≤ d`: nondecreasing in `d`, bounded by
/// `‖C_φ‖` when it is finite and divergent otherwise.
pub fn truncated_norm(phi: &AffineMap, d: usize) -> Result<f64> {
    spectral_norm(&matrix_of_composition(phi, d)?)
}

/// Truncated norms for degrees `0..=d`.
pub fn truncated_norms(phi: &AffineMap, d: usize) -> Result<Vec<f64>> {
    (0..=d).map(|k| truncated_norm(phi, k)).collect()
}

/// Norm of the degree-`m` diagonal block of `C_A`.
pub fn homogeneous_block_norm(a: &ComplexMatrix, m: usize) -> Result<f64> {
    let phi = AffineMap::linear(a.clone())?;
    let basis = Arc::new(enumerate_basis(phi.dim(), m)?);
    let full = matrix_on_basis(&phi, &basis)?;
    let r = basis.degree_range(m);
    spectral_norm(&full.submatrix(r.start, r.end, r.start, r.end))
}

/// Orthonormal coordinates of the truncated kernel `K_z`:
/// `⟨K_z, f_α⟩ = conj(z^α) / √α!`.
pub fn kernel_coordinates(basis: &TruncatedBasis, z: &ComplexVector) -> ComplexVector {
    ComplexVector::from_vec_unchecked(
        basis
            .indices()
            .iter()
            .map(|a| {
                let mono: C64 = a
                    .exponents()
                    .iter()
                    .zip(z.iter())
                    .map(|(&k, zi)| zi.powu(k))
                    .product();
                mono.conj() / a.factorial().sqrt()
            })
            .collect(),
    )
}
