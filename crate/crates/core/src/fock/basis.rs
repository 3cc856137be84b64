use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest basis the enumerator will build.
pub const MAX_BASIS_SIZE: usize = 2_000_000;

/// Exponent tuple `α = (α₁, …, α_n)` of the monomial `z^α`.
///
/// Ordered graded-lexicographically: total degree ascending, then
/// lexicographically descending on the exponents, so for `n = 2` the order
/// is `1, z₁, z₂, z₁², z₁z₂, z₂², …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = α₁! ⋯ α_n!`.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&k| factorial(k)).product()
    }

    /// `ln α!`.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&k| ln_factorial(k)).sum()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const EXACT_FACTORIAL_MAX: u32 = 20;

/// `k!` as `f64`; exact integer arithmetic up to `20!`.
pub fn factorial(k: u32) -> f64 {
    if k <= EXACT_FACTORIAL_MAX {
        (1..=k as u64).product::<u64>() as f64
    } else {
        ln_factorial(k).exp()
    }
}

pub fn ln_factorial(k: u32) -> f64 {
    if k <= EXACT_FACTORIAL_MAX {
        factorial(k).ln()
    } else {
        // summed in log domain to stay finite past 170!
        factorial(EXACT_FACTORIAL_MAX).ln() + (EXACT_FACTORIAL_MAX + 1..=k).map(|i| (i as f64).ln()).sum::<f64>()
    }
}

/// `√(β! / α!)`, via exact factorials when both degrees are small and the
/// log domain otherwise.
pub fn sqrt_factorial_ratio(beta: &MultiIndex, alpha: &MultiIndex) -> f64 {
    if beta.degree() <= EXACT_FACTORIAL_MAX && alpha.degree() <= EXACT_FACTORIAL_MAX {
        (beta.factorial() / alpha.factorial()).sqrt()
    } else {
        (0.5 * (beta.ln_factorial() - alpha.ln_factorial())).exp()
    }
}

/// `C(n + d, d)`, or `None` on overflow.
pub fn basis_size(n: usize, d: usize) -> Option<usize> {
    let mut acc: u128 = 1;
    for i in 1..=d as u128 {
        acc = acc.checked_mul(n as u128 + i)? / i;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    usize::try_from(acc).ok()
}

/// Graded monomial basis `{z^α : |α| ≤ d}` of the polynomials of degree at
/// most `d` in `n` variables.
#[derive(Clone, Debug)]
pub struct TruncatedBasis {
    n: usize,
    d: usize,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    /// `offsets[k]` is the position of the first index of degree `k`;
    /// `offsets[d + 1]` is the basis size.
    offsets: Vec<usize>,
    /// `succ[i * n + j]` is the position of `indices[i] + e_j`, or
    /// `usize::MAX` when that exceeds degree `d`.
    succ: Vec<usize>,
}

fn push_degree(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() + 1 == n {
        prefix.push(k);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    for first in (0..=k).rev() {
        prefix.push(first);
        push_degree(n, k - first, prefix, out);
        prefix.pop();
    }
}

impl TruncatedBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn multi_index(&self, i: usize) -> &MultiIndex {
        &self.indices[i]
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    /// Range of positions holding indices of exact degree `k`.
    pub fn degree_range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    /// Position of `indices[i] + e_j`, if it lies in the basis.
    pub fn successor(&self, i: usize, j: usize) -> Option<usize> {
        match self.succ[i * self.n + j] {
            usize::MAX => None,
            p => Some(p),
        }
    }

    pub fn same_as(&self, other: &TruncatedBasis) -> bool {
        self.n == other.n && self.d == other.d
    }
}

/// Enumerate `{α : |α| ≤ d}` in graded-lex order. The zero index comes first.
pub fn enumerate_basis(n: usize, d: usize) -> Result<TruncatedBasis> {
    if n == 0 {
        return Err(Error::Input("number of variables must be at least 1".into()));
    }
    let size = basis_size(n, d).filter(|&s| s <= MAX_BASIS_SIZE).ok_or_else(|| {
        Error::Resource(format!(
            "basis for n = {n}, d = {d} exceeds {MAX_BASIS_SIZE} elements"
        ))
    })?;
    let mut indices = Vec::with_capacity(size);
    let mut offsets = Vec::with_capacity(d + 2);
    let mut prefix = Vec::with_capacity(n);
    for k in 0..=d as u32 {
        offsets.push(indices.len());
        push_degree(n, k, &mut prefix, &mut indices);
    }
    offsets.push(indices.len());
    debug_assert_eq!(indices.len(), size);

    let lookup: HashMap<MultiIndex, usize> =
        indices.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let mut succ = vec![usize::MAX; size * n];
    for (i, alpha) in indices.iter().enumerate() {
        if alpha.degree() as usize == d {
            continue;
        }
        for j in 0..n {
            let mut next = alpha.0.clone();
            next[j] += 1;
            succ[i * n + j] = lookup[&MultiIndex(next)];
        }
    }
    Ok(TruncatedBasis {
        n,
        d,
        indices,
        lookup,
        offsets,
        succ,
    })
}
