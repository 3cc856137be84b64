//! Composition operators `C_φ h = h ∘ φ` on the Segal-Bargmann (Fock) space
//! over `C^n` with reproducing kernel `K(z, w) = exp(⟨z, w⟩)`.
//!
//! For `φ(z) = Az + b` the crate decides boundedness, compactness and the
//! normal / isometric / co-isometric structure, computes `‖C_φ‖` in closed
//! form, and checks every answer against independent numerical routes:
//! Galerkin truncation on polynomials ([`fock`]), PSD certificates for the
//! kernel `M² K − K∘(φ×φ)` ([`kernel`]) and a diagonal sequence model of the
//! infinite-dimensional case ([`diag`]).

pub mod affine;
pub mod cli;
pub mod diag;
mod error;
pub mod fock;
pub mod kernel;
pub mod numerics;

pub use affine::{AffineMap, NormCertificate, StructureReport};
pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, ComplexVector, Tolerances, C64};
