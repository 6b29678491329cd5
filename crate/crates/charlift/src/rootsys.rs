//! Root data of u(p,q) relative to the diagonal Cartan, Weyl denominators
//! and the Δ-quotients of the double lift.

use num_complex::Complex64;
use serde::Serialize;

use crate::cartan::CoveredTorusPoint;
use crate::error::{Error, Result};

/// A root e_i - e_j, 1-based.
pub type Root = (usize, usize);

/// Default coincidence tolerance for diagonal entries.
pub const SINGULAR_TOL: f64 = 1e-10;

/// How the strongly orthogonal roots pair up indices.
///
/// `Adjacent` gives e_k - e_{p+k}, the chain used for U(p,q).
/// `Nested` gives e_k - e_{p+q+1-k}, the chain used for U(n,n+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    Adjacent,
    Nested,
}

impl Pairing {
    pub fn partner(self, p: usize, q: usize, k: usize) -> usize {
        match self {
            Pairing::Adjacent => p + k,
            Pairing::Nested => p + q + 1 - k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    pub p: usize,
    pub q: usize,
    pub roots: Vec<Root>,
    pub positive: Vec<bool>,
    pub compact: Vec<bool>,
}

pub fn build_root_datum(p: usize, q: usize) -> Result<RootDatum> {
    let dim = p + q;
    if dim == 0 {
        return Err(Error::EmptyGroup);
    }
    let mut roots = Vec::with_capacity(dim * (dim - 1));
    let mut positive = Vec::with_capacity(dim * (dim - 1));
    let mut compact = Vec::with_capacity(dim * (dim - 1));
    for i in 1..=dim {
        for j in 1..=dim {
            if i == j {
                continue;
            }
            roots.push((i, j));
            positive.push(i < j);
            compact.push((i <= p) == (j <= p));
        }
    }
    Ok(RootDatum { p, q, roots, positive, compact })
}

impl RootDatum {
    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn contains(&self, (i, j): Root) -> bool {
        i != j && (1..=self.dim()).contains(&i) && (1..=self.dim()).contains(&j)
    }

    pub fn is_compact(&self, (i, j): Root) -> bool {
        (i <= self.p) == (j <= self.p)
    }

    pub fn noncompact(&self) -> impl Iterator<Item = Root> + '_ {
        self.roots.iter().zip(&self.compact).filter(|(_, c)| !**c).map(|(r, _)| *r)
    }

    /// Is the integer vector `v` (length p+q) of the form e_i - e_j?
    fn vector_is_root(&self, v: &[i32]) -> bool {
        let plus: Vec<usize> = (0..v.len()).filter(|&k| v[k] == 1).collect();
        let minus: Vec<usize> = (0..v.len()).filter(|&k| v[k] == -1).collect();
        let zeros = v.iter().filter(|&&x| x == 0).count();
        plus.len() == 1 && minus.len() == 1 && zeros + 2 == v.len()
    }

    fn root_vector(&self, (i, j): Root) -> Vec<i32> {
        let mut v = vec![0; self.dim()];
        v[i - 1] += 1;
        v[j - 1] -= 1;
        v
    }
}

/// α ≠ ±β and α ± β not roots.
pub fn is_strongly_orthogonal(datum: &RootDatum, a: Root, b: Root) -> bool {
    if a == b || a == (b.1, b.0) {
        return false;
    }
    let va = datum.root_vector(a);
    let vb = datum.root_vector(b);
    let sum: Vec<i32> = va.iter().zip(&vb).map(|(x, y)| x + y).collect();
    let diff: Vec<i32> = va.iter().zip(&vb).map(|(x, y)| x - y).collect();
    !datum.vector_is_root(&sum) && !datum.vector_is_root(&diff)
}

/// S_t = {e_k - e_{p+k} : 1 <= k <= t}.
pub fn strongly_orthogonal_set(datum: &RootDatum, t: usize) -> Result<Vec<Root>> {
    strongly_orthogonal_set_with(datum, t, Pairing::Adjacent)
}

pub fn strongly_orthogonal_set_with(
    datum: &RootDatum,
    t: usize,
    pairing: Pairing,
) -> Result<Vec<Root>> {
    let max = datum.p.min(datum.q);
    if t > max {
        return Err(Error::TOutOfRange { t, max });
    }
    Ok((1..=t).map(|k| (k, pairing.partner(datum.p, datum.q, k))).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Psi,
    Phi,
}

/// Δ_Ψ or Δ_Φ at a covered torus point. Half powers come from the
/// unreduced coordinates, so the value is a function on the cover.
pub fn weyl_denominator(datum: &RootDatum, side: Side, point: &CoveredTorusPoint) -> Complex64 {
    assert_eq!(datum.dim(), point.dim(), "root datum and point have different ranks");
    weyl_denominator_logs(side, &point.logs())
}

/// Same as [`weyl_denominator`], from the complex logarithms ℓ_k of the
/// diagonal entries.
pub fn weyl_denominator_logs(side: Side, logs: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..logs.len() {
        for j in i + 1..logs.len() {
            let half = match side {
                Side::Psi => (logs[i] - logs[j]) * 0.5,
                Side::Phi => (logs[j] - logs[i]) * 0.5,
            };
            acc *= half.exp() - (-half).exp();
        }
    }
    acc
}

/// Sign of a permutation given as a sequence of distinct integers.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// ε(σ)·Δ_{Φ(Z)}(σ⁻¹ȟ)/Δ_Φ(ȟ), where Z is the Levi factor acting on the
/// positions `front+1 ..= N-back` and `sigma` is 1-based.
pub fn centralizer_quotient(sigma: &[usize], front: usize, back: usize, logs: &[Complex64]) -> Complex64 {
    let n = logs.len();
    assert_eq!(sigma.len(), n);
    let mut num = Complex64::new(1.0, 0.0);
    for a in front..n - back {
        for b in a + 1..n - back {
            let half = (logs[sigma[b] - 1] - logs[sigma[a] - 1]) * 0.5;
            num *= half.exp() - (-half).exp();
        }
    }
    let den = weyl_denominator_logs(Side::Phi, logs);
    num / den * permutation_sign(sigma) as f64
}

/// First pair (i, j), 1-based, of coincident entries.
pub fn coincidence(h: &[Complex64], tol: f64) -> Option<(usize, usize)> {
    for i in 0..h.len() {
        for j in i + 1..h.len() {
            if (h[i] - h[j]).norm() < tol * h[i].norm().max(1.0) {
                return Some((i + 1, j + 1));
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaQuotient {
    pub i: usize,
    pub j: usize,
    pub value: Complex64,
}

/// Δ(i,j,ȟ) = h_i^n h_j^n ∏_{k≠i,j} h_k / [∏_{k≠i}(h_i - h_k) ∏_{l≠i,j}(h_j - h_l)].
pub fn delta_quotient(n: usize, i: usize, j: usize, point: &CoveredTorusPoint) -> Result<DeltaQuotient> {
    let dim = 2 * n + 1;
    if point.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: point.dim() });
    }
    check_pair(i, j, dim)?;
    let h = point.diagonal();
    if let Some((a, b)) = coincidence(&h, SINGULAR_TOL) {
        return Err(Error::Singular(a, b));
    }
    let value = h[i - 1].powi(n as i32) * h[j - 1].powi(n as i32) * omega_raw(i, j, &h);
    Ok(DeltaQuotient { i, j, value })
}

pub(crate) fn check_pair(i: usize, j: usize, dim: usize) -> Result<()> {
    if i == j || i == 0 || j == 0 || i > dim || j > dim {
        return Err(Error::Invalid(format!("index pair ({i}, {j}) not distinct in 1..={dim}")));
    }
    Ok(())
}

/// Ω_{i,j}(h) without regularity checks; 1-based indices.
pub(crate) fn omega_raw(i: usize, j: usize, h: &[Complex64]) -> Complex64 {
    let (hi, hj) = (h[i - 1], h[j - 1]);
    let mut num = Complex64::new(1.0, 0.0);
    let mut den = Complex64::new(1.0, 0.0);
    for (k, &hk) in h.iter().enumerate().map(|(k, v)| (k + 1, v)) {
        if k != i {
            den *= hi - hk;
        }
        if k != i && k != j {
            num *= hk;
            den *= hj - hk;
        }
    }
    num / den
}
