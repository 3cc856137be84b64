//! Jacobi-based Hermitian eigendecomposition and SVD.
//!
//! Both routines use a fixed cyclic sweep order, so results are
//! bit-for-bit reproducible for identical inputs.

use super::matrix::{ComplexMatrix, ComplexVector, C64};
use super::Tolerances;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// `H = Q Λ Q*` with eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `Q f(Λ) Q*`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let q = &self.vectors;
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| q[(i, k)] * fv[k] * q[(j, k)].conj()).sum()
        })
    }
}

/// `M = U Σ V*` with `U` (rows×rows) and `V` (cols×cols) unitary and
/// `sigma` of length `min(rows, cols)`, nonnegative and descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        ComplexMatrix::from_fn(m, n, |i, j| {
            self.sigma
                .iter()
                .enumerate()
                .map(|(k, &s)| self.u[(i, k)] * s * self.v[(j, k)].conj())
                .sum()
        })
    }
}

/// Rotation that zeroes the off-diagonal entry `g = |g| e^{iθ}` of the
/// Hermitian 2×2 block `[[a, g], [conj g, d]]`.
///
/// Returns `(c, s, phase)` with `phase = e^{-iθ}`; the unitary acting on
/// columns `(p, q)` is `[[c, s], [-s·phase, c·phase]]`.
fn jacobi_rotation(a: f64, d: f64, g: C64) -> (f64, f64, C64) {
    let mag = g.norm();
    let phase = (g / mag).conj();
    let zeta = (d - a) / (2.0 * mag);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, phase)
}

/// Apply the rotation to columns `p, q` of a row-major buffer.
fn rotate_columns(data: &mut [C64], cols: usize, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let rows = data.len() / cols;
    let up = -s * phase;
    let uq = c * phase;
    for k in 0..rows {
        let xp = data[k * cols + p];
        let xq = data[k * cols + q];
        data[k * cols + p] = xp * c + xq * up;
        data[k * cols + q] = xp * s + xq * uq;
    }
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// `(H + H*)/2` before decomposing.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    h.require_square("hermitian_eig input")?;
    h.require_finite()?;
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut q = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if n > 1 && scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= f64::EPSILON * scale * 1e-2 {
                break;
            }
            let mut rotated = false;
            for p in 0..n - 1 {
                for r in p + 1..n {
                    let g = a[(p, r)];
                    let app = a[(p, p)].re;
                    let arr = a[(r, r)].re;
                    if g.norm() <= f64::EPSILON * 1e-3 * (app.abs() + arr.abs()).max(f64::MIN_POSITIVE)
                        || g.norm() == 0.0
                    {
                        continue;
                    }
                    rotated = true;
                    let (c, s, phase) = jacobi_rotation(app, arr, g);
                    // A ← U* A U: columns first, then rows via the mirror update.
                    let cols = a.cols();
                    rotate_columns(a.data_mut(), cols, p, r, c, s, phase);
                    rotate_rows(a.data_mut(), cols, p, r, c, s, phase);
                    a[(p, r)] = C64::new(0.0, 0.0);
                    a[(r, p)] = C64::new(0.0, 0.0);
                    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                    a[(r, r)] = C64::new(a[(r, r)].re, 0.0);
                    rotate_columns(q.data_mut(), n, p, r, c, s, phase);
                }
            }
            if !rotated {
                break;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| q[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Mirror of [`rotate_columns`] for rows: rows `p, q` ← `U*` applied from the left.
fn rotate_rows(data: &mut [C64], cols: usize, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    // U* = [[c, -s·conj(phase)], [s, c·conj(phase)]]
    let ph = phase.conj();
    for k in 0..cols {
        let xp = data[p * cols + k];
        let xq = data[q * cols + k];
        data[p * cols + k] = xp * c - xq * (s * ph);
        data[q * cols + k] = xp * s + xq * (c * ph);
    }
}

/// One-sided (Hestenes) Jacobi on a tall matrix. Returns the orthogonalized
/// columns `W = M V` and, when requested, the accumulated `V`.
fn one_sided_jacobi(m: &ComplexMatrix, want_v: bool) -> (ComplexMatrix, Option<ComplexMatrix>) {
    let n = m.cols();
    let rows = m.rows();
    let mut w = m.clone();
    let mut v = want_v.then(|| ComplexMatrix::identity(n));
    if n < 2 {
        return (w, v);
    }
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for r in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, C64::new(0.0, 0.0));
                for k in 0..rows {
                    let wp = w[(k, p)];
                    let wr = w[(k, r)];
                    alpha += wp.norm_sqr();
                    beta += wr.norm_sqr();
                    gamma += wp.conj() * wr;
                }
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(w.data_mut(), n, p, r, c, s, phase);
                if let Some(v) = v.as_mut() {
                    rotate_columns(v.data_mut(), n, p, r, c, s, phase);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

/// Extend orthonormal columns to a full unitary basis of `C^dim`.
fn complete_unitary(mut cols: Vec<ComplexVector>, dim: usize) -> Vec<ComplexVector> {
    let mut candidate = 0;
    while cols.len() < dim && candidate < dim {
        let mut x = ComplexVector::basis(dim, candidate);
        candidate += 1;
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for c in &cols {
                let proj = x.inner(c);
                x = &x - &c.scale(proj);
            }
        }
        let nx = x.norm();
        if nx > 1e-8 {
            cols.push(x.scale(C64::new(1.0 / nx, 0.0)));
        }
    }
    cols
}

fn svd_tall(m: &ComplexMatrix) -> Svd {
    let (rows, n) = (m.rows(), m.cols());
    let (w, v) = one_sided_jacobi(m, true);
    let v = v.expect("V requested");
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let smax = sigma.first().copied().unwrap_or(0.0);
    let floor = smax * f64::EPSILON * rows.max(n) as f64;

    let mut ucols = Vec::with_capacity(rows);
    for (&j, &s) in order.iter().zip(&sigma) {
        if s > floor && s > 0.0 {
            ucols.push(w.column(j).scale(C64::new(1.0 / s, 0.0)));
        } else {
            break;
        }
    }
    let ucols = complete_unitary(ucols, rows);
    let u = ComplexMatrix::from_columns(&ucols);
    let v = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Svd { u, sigma, v }
}

/// Singular value decomposition `M = U Σ V*`.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    m.require_finite()?;
    if m.rows() >= m.cols() {
        Ok(svd_tall(m))
    } else {
        let t = svd_tall(&m.adjoint());
        Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        })
    }
}

/// Singular values only, descending.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.require_finite()?;
    let tall = if m.rows() >= m.cols() {
        m.clone()
    } else {
        m.adjoint()
    };
    let (w, _) = one_sided_jacobi(&tall, false);
    let mut s: Vec<f64> = (0..w.cols()).map(|j| w.column(j).norm()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Minimal-norm least-squares solution of `M x = y`.
#[derive(Clone, Debug)]
pub struct MinNormSolution {
    pub x: ComplexVector,
    /// `‖M x − y‖`.
    pub residual: f64,
    /// Number of singular values kept above the cutoff.
    pub rank: usize,
}

/// Pseudoinverse solve; singular values at or below `rank_tol · σ_max` are
/// treated as zero.
pub fn min_norm_solve(m: &ComplexMatrix, y: &ComplexVector, tol: &Tolerances) -> Result<MinNormSolution> {
    if m.rows() != y.dim() {
        return Err(Error::Dimension(format!(
            "matrix has {} rows but right-hand side has dimension {}",
            m.rows(),
            y.dim()
        )));
    }
    if !y.is_finite() {
        return Err(Error::Input("right-hand side is not finite".into()));
    }
    let dec = svd(m)?;
    let smax = dec.sigma.first().copied().unwrap_or(0.0);
    let cutoff = tol.rank_tol * smax;
    let mut x = ComplexVector::zeros(m.cols());
    let mut rank = 0;
    for (k, &s) in dec.sigma.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            break;
        }
        rank += 1;
        // coefficient u_k* y / σ_k along v_k
        let coef: C64 = (0..m.rows()).map(|i| dec.u[(i, k)].conj() * y[i]).sum::<C64>() / s;
        for j in 0..m.cols() {
            x[j] += dec.v[(j, k)] * coef;
        }
    }
    let residual = (&m.matvec(&x) - y).norm();
    Ok(MinNormSolution { x, residual, rank })
}
