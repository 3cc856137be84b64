//! Independent oracles and random instance generators shared by the
//! integration tests. Nothing here calls the library's decompositions;
//! only the plain container types and arithmetic are reused.

#![allow(dead_code)]

use std::collections::HashMap;

use bargmann::{AffineMap, ComplexMatrix, ComplexVector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Standard complex Gaussian via Box-Muller.
pub fn gauss(r: &mut TestRng) -> C64 {
    let u1: f64 = r.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = r.random();
    let rad = (-2.0 * u1.ln()).sqrt();
    let th = std::f64::consts::TAU * u2;
    c(rad * th.cos(), rad * th.sin()) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_vector(r: &mut TestRng, n: usize) -> ComplexVector {
    ComplexVector::new((0..n).map(|_| gauss(r)).collect()).unwrap()
}

pub fn random_matrix(r: &mut TestRng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gauss(r))
}

pub fn with_norm(v: &ComplexVector, target: f64) -> ComplexVector {
    let n = v.norm();
    if n == 0.0 {
        v.clone()
    } else {
        v.scale(c(target / n, 0.0))
    }
}

/// Largest singular value by power iteration on `M*M` (Rayleigh quotient).
pub fn power_norm(m: &ComplexMatrix) -> f64 {
    if m.max_abs() == 0.0 {
        return 0.0;
    }
    let mh = m.adjoint();
    let mut r = rng(0x5eed);
    let mut x = random_vector(&mut r, m.cols());
    x = with_norm(&x, 1.0);
    let mut est = 0.0;
    for _ in 0..5000 {
        let y = mh.matvec(&m.matvec(&x));
        let next = y.norm();
        if next == 0.0 {
            return 0.0;
        }
        x = y.scale(c(1.0 / next, 0.0));
        if (next - est).abs() <= 1e-15 * next {
            break;
        }
        est = next;
    }
    // Rayleigh quotient of the converged vector
    m.matvec(&x).norm()
}

pub fn scaled_to_norm(m: &ComplexMatrix, target: f64) -> ComplexMatrix {
    let s = power_norm(m);
    m.scale(c(target / s, 0.0))
}

/// Haar-ish unitary from modified Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(r: &mut TestRng, n: usize) -> ComplexMatrix {
    let g = random_matrix(r, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<C64> = (0..n).map(|i| g[(i, j)]).collect();
        for _ in 0..2 {
            for q in &cols {
                let p: C64 = q.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / nrm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Random contraction-like matrix with `‖A‖ = target`, as `U Σ V*` with
/// the top singular value set exactly.
pub fn random_with_norm(r: &mut TestRng, n: usize, target: f64) -> ComplexMatrix {
    let u = random_unitary(r, n);
    let v = random_unitary(r, n);
    let mut s: Vec<f64> = (0..n).map(|_| target * r.random::<f64>()).collect();
    s[0] = target;
    let sigma = ComplexMatrix::from_real_diag(&s);
    &(&u * &sigma) * &v.adjoint()
}

pub fn random_affine(r: &mut TestRng, n: usize, a_norm: f64, b_norm: f64) -> AffineMap {
    let a = random_with_norm(r, n, a_norm);
    let b = with_norm(&random_vector(r, n), b_norm);
    AffineMap::new(a, b).unwrap()
}

pub fn frob(m: &ComplexMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn fact(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).map(|i| f64::from(n - i) / f64::from(i + 1)).product()
}

/// One-variable Galerkin matrix of `z ↦ az + b`:
/// `M[j][k] = C(k, j) a^j b^{k−j} √(j!/k!)`.
pub fn galerkin_1d(a: C64, b: C64, d: u32) -> ComplexMatrix {
    let size = d as usize + 1;
    ComplexMatrix::from_fn(size, size, |j, k| {
        let (j, k) = (j as u32, k as u32);
        if j > k {
            return c(0.0, 0.0);
        }
        a.powu(j) * b.powu(k - j) * binom(k, j) * (fact(j) / fact(k)).sqrt()
    })
}

/// Sparse multivariate polynomial keyed by exponent vectors.
pub type Poly = HashMap<Vec<u32>, C64>;

fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in p {
        for (eb, cb) in q {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(c(0.0, 0.0)) += ca * cb;
        }
    }
    out
}

/// Brute-force expansion of `Π_i ((Az + b)_i)^{α_i}`.
pub fn expand_affine_power(phi: &AffineMap, alpha: &[u32]) -> Poly {
    let n = phi.dim();
    let mut acc: Poly = [(vec![0; n], c(1.0, 0.0))].into_iter().collect();
    for (i, &k) in alpha.iter().enumerate() {
        let mut lin = Poly::new();
        lin.insert(vec![0; n], phi.b()[i]);
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            *lin.entry(e).or_insert(c(0.0, 0.0)) += phi.a()[(i, j)];
        }
        for _ in 0..k {
            acc = poly_mul(&acc, &lin);
        }
    }
    acc
}

pub fn multi_fact(e: &[u32]) -> f64 {
    e.iter().map(|&k| fact(k)).product()
}

/// All exponent vectors of total degree `≤ d`, in no particular order.
pub fn all_indices(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().sum();
            for k in 0..=d - used {
                let mut f = e.clone();
                f.push(k);
                next.push(f);
            }
        }
        out = next;
    }
    out
}

/// Real form of `F(z, z) = ⟨Tz, z⟩ − 2 Re⟨z, u⟩ + M²` on `x = (Re z, Im z)`:
/// `xᵀHx − 2gᵀx + M²`.
pub struct RealQuadratic {
    pub h: Vec<Vec<f64>>,
    pub g: Vec<f64>,
    pub m_sq: f64,
}

impl RealQuadratic {
    pub fn new(t: &ComplexMatrix, u: &ComplexVector, m: f64) -> Self {
        let n = u.dim();
        let mut h = vec![vec![0.0; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                let z = t[(i, j)];
                h[i][j] = z.re;
                h[i][j + n] = -z.im;
                h[i + n][j] = z.im;
                h[i + n][j + n] = z.re;
            }
        }
        // symmetrize round-off
        let h = (0..2 * n)
            .map(|i| (0..2 * n).map(|j| 0.5 * (h[i][j] + h[j][i])).collect())
            .collect();
        let g = (0..n).map(|i| u[i].re).chain((0..n).map(|i| u[i].im)).collect();
        Self { h, g, m_sq: m * m }
    }

    fn hx(&self, x: &[f64]) -> Vec<f64> {
        self.h.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let hx = self.hx(x);
        dot(x, &hx) - 2.0 * dot(&self.g, x) + self.m_sq
    }

    pub fn to_complex(x: &[f64]) -> ComplexVector {
        let n = x.len() / 2;
        ComplexVector::new((0..n).map(|i| c(x[i], x[i + n])).collect()).unwrap()
    }

    /// Conjugate-gradient descent from 0 with restarts. Returns the final
    /// iterate and its value.
    pub fn minimize(&self) -> (Vec<f64>, f64) {
        let dim = self.g.len();
        let mut x = vec![0.0; dim];
        for _ in 0..8 {
            // residual of the stationarity equation Hx = g
            let mut r: Vec<f64> = self.g.iter().zip(self.hx(&x)).map(|(g, hx)| g - hx).collect();
            let mut p = r.clone();
            let mut rr = dot(&r, &r);
            for _ in 0..dim {
                if rr < 1e-30 {
                    break;
                }
                let hp = self.hx(&p);
                let php = dot(&p, &hp);
                if php <= 0.0 {
                    break;
                }
                let step = rr / php;
                for k in 0..dim {
                    x[k] += step * p[k];
                    r[k] -= step * hp[k];
                }
                let next = dot(&r, &r);
                let beta = next / rr;
                rr = next;
                for k in 0..dim {
                    p[k] = r[k] + beta * p[k];
                }
            }
        }
        let v = self.value(&x);
        (x, v)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Smallest eigenvalue of a Hermitian matrix via the real-symmetric
/// embedding and a shifted power iteration. Slow, but independent.
pub fn min_eig_oracle(g: &ComplexMatrix) -> f64 {
    let n = g.rows();
    let bound = frob(g);
    // eigenvalues of (bound·I − G) are ≥ 0; its top one gives bound − λ_min
    let shifted = &ComplexMatrix::identity(n).scale(c(bound, 0.0)) - g;
    let mut r = rng(0xe16);
    let mut x = with_norm(&random_vector(&mut r, n), 1.0);
    let mut lam = 0.0;
    for _ in 0..20000 {
        let y = shifted.matvec(&x);
        let ny = y.norm();
        if ny == 0.0 {
            break;
        }
        let next = x.inner(&y).re;
        x = y.scale(c(1.0 / ny, 0.0));
        if (next - lam).abs() <= 1e-15 * bound.max(1.0) {
            lam = next;
            break;
        }
        lam = next;
    }
    bound - lam
}
