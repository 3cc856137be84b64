//! Galerkin picture of the Fock space: monomial bases of the polynomials of
//! degree `≤ d`, the inner product `⟨z^α, z^β⟩ = δ_{αβ} α!`, and the exact
//! matrix of `C_φ` on that invariant subspace.

mod basis;
mod galerkin;
mod poly;

pub use basis::{
    basis_size, enumerate_basis, factorial, ln_factorial, sqrt_factorial_ratio, MultiIndex, TruncatedBasis,
    MAX_BASIS_SIZE,
};
pub use galerkin::{
    homogeneous_block_norm, kernel_coordinates, matrix_of_composition, matrix_on_basis, truncated_norm,
    truncated_norms, MAX_MATRIX_SIZE,
};
pub use poly::{compose_poly, kernel_truncation, poly_inner, reproducing_check, PolyCoeffs};
