//! Cartan subgroups of U(p,q) from strongly orthogonal roots: coordinates,
//! Cayley transforms, regularity, chambers and the J/K/A/B index sets.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::{self, Pairing, Root};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CartanLabel {
    pub t: usize,
    pub pairing: Pairing,
}

impl CartanLabel {
    pub fn new(t: usize) -> Self {
        CartanLabel { t, pairing: Pairing::Adjacent }
    }

    pub fn nested(t: usize) -> Self {
        CartanLabel { t, pairing: Pairing::Nested }
    }
}

/// A point of the double cover of H_{S_t}, stored as real coordinates
/// X_1..X_{p+q}. For each strongly orthogonal root e_a - e_b, X_a is an
/// angle and X_b a hyperbolic coordinate: h_a = e^{iX_a - X_b},
/// h_b = e^{iX_a + X_b}. Every other X_c is an angle with h_c = e^{iX_c}.
/// Angles are kept unreduced; the sheet of the cover is implicit in them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveredTorusPoint {
    p: usize,
    q: usize,
    label: CartanLabel,
    coords: Vec<f64>,
}

impl CoveredTorusPoint {
    pub fn new(p: usize, q: usize, label: CartanLabel, coords: Vec<f64>) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::EmptyGroup);
        }
        let max = p.min(q);
        if label.t > max {
            return Err(Error::TOutOfRange { t: label.t, max });
        }
        if coords.len() != p + q {
            return Err(Error::DimensionMismatch { expected: p + q, got: coords.len() });
        }
        if let Some(k) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::Invalid(format!("coordinate X{} is not finite", k + 1)));
        }
        Ok(CoveredTorusPoint { p, q, label, coords })
    }

    /// A point of U(n, n+1) on the Cartan with nested pairing.
    pub fn unn1(n: usize, t: usize, coords: Vec<f64>) -> Result<Self> {
        Self::new(n, n + 1, CartanLabel::nested(t), coords)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn label(&self) -> CartanLabel {
        self.label
    }

    pub fn t(&self) -> usize {
        self.label.t
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn with_coords(&self, coords: Vec<f64>) -> Result<Self> {
        Self::new(self.p, self.q, self.label, coords)
    }

    /// (angle index, hyperbolic index) for each root of S_t, 1-based.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (1..=self.label.t).map(|k| (k, self.label.pairing.partner(self.p, self.q, k))).collect()
    }

    pub fn hyperbolic_indices(&self) -> Vec<usize> {
        self.pairs().into_iter().map(|(_, b)| b).collect()
    }

    /// Indices whose diagonal entry lies on the unit circle.
    pub fn compact_indices(&self) -> Vec<usize> {
        let paired: Vec<usize> = self.pairs().into_iter().flat_map(|(a, b)| [a, b]).collect();
        (1..=self.dim()).filter(|c| !paired.contains(c)).collect()
    }

    pub fn pair_of(&self, index: usize) -> Option<(usize, usize)> {
        self.pairs().into_iter().find(|&(a, b)| a == index || b == index)
    }

    /// Unreduced complex logarithms ℓ_k with h_k = e^{ℓ_k}.
    pub fn logs(&self) -> Vec<Complex64> {
        let x = &self.coords;
        let mut out: Vec<Complex64> = x.iter().map(|&v| Complex64::new(0.0, v)).collect();
        for (a, b) in self.pairs() {
            out[a - 1] = Complex64::new(-x[b - 1], x[a - 1]);
            out[b - 1] = Complex64::new(x[b - 1], x[a - 1]);
        }
        out
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        self.logs().into_iter().map(|l| l.exp()).collect()
    }
}

/// c(α) = exp(π/4 (Y_α - X_α)) with X_α = E_ab, Y_α = E_ba (a <= p < b).
/// Equal to the identity outside the {a,b} block, where it is
/// (1/√2)[[1, -1], [1, 1]].
pub fn cayley_generator(alpha: Root, p: usize, dim: usize) -> Result<DMatrix<Complex64>> {
    let (i, j) = alpha;
    if i == 0 || j == 0 || i == j {
        return Err(Error::NotARoot(i, j));
    }
    if i > dim || j > dim {
        return Err(Error::DimensionMismatch { expected: dim, got: i.max(j) });
    }
    if (i <= p) == (j <= p) {
        return Err(Error::CompactRoot(i, j));
    }
    let (a, b) = (i.min(j) - 1, i.max(j) - 1);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut c = DMatrix::<Complex64>::identity(dim, dim);
    c[(a, a)] = s.into();
    c[(a, b)] = (-s).into();
    c[(b, a)] = s.into();
    c[(b, b)] = s.into();
    Ok(c)
}

/// c(S) = ∏_{α∈S} c(α); the factors act on disjoint blocks.
pub fn cayley_transform(s: &[Root], p: usize, dim: usize) -> Result<DMatrix<Complex64>> {
    let mut used: Vec<usize> = Vec::new();
    let mut c = DMatrix::<Complex64>::identity(dim, dim);
    for &(i, j) in s {
        if used.contains(&i) || used.contains(&j) {
            let clash = if used.contains(&i) { i } else { j };
            return Err(Error::OverlappingBlocks(clash, if clash == i { j } else { i }));
        }
        used.extend([i, j]);
        c *= cayley_generator((i, j), p, dim)?;
    }
    Ok(c)
}

pub fn torus_matrix(point: &CoveredTorusPoint) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(point.diagonal()))
}

/// The Cayley transform c(S_t) attached to the Cartan of `point`.
pub fn cayley_of(point: &CoveredTorusPoint) -> DMatrix<Complex64> {
    cayley_transform(&point.pairs(), point.p(), point.dim()).expect("S_t is strongly orthogonal")
}

/// c(S_t)·p(ȟ)·c(S_t)⁻¹, an element of U(p,q).
pub fn embed_in_group(point: &CoveredTorusPoint) -> DMatrix<Complex64> {
    let c = cayley_of(point);
    // c is real orthogonal
    let c_inv = c.transpose();
    &c * torus_matrix(point) * c_inv
}

/// Id_{p,q} = diag(1,..,1,-1,..,-1).
pub fn signature_matrix(p: usize, q: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(p + q, p + q, |r, c| {
        if r != c {
            Complex64::new(0.0, 0.0)
        } else if r < p {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    })
}

pub fn is_regular(point: &CoveredTorusPoint, tol: f64) -> bool {
    check_regular(point, tol).is_ok()
}

/// Like [`is_regular`] but names the offending coordinate or pair.
pub fn check_regular(point: &CoveredTorusPoint, tol: f64) -> Result<()> {
    for b in point.hyperbolic_indices() {
        if point.coords()[b - 1].abs() < tol {
            return Err(Error::NonRegular(b));
        }
    }
    match rootsys::coincidence(&point.diagonal(), tol) {
        Some((i, j)) => Err(Error::Singular(i, j)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSets {
    pub j: Vec<usize>,
    pub k: Vec<usize>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl IndexSets {
    /// Diagonal positions with |h| > 1 or, for compact entries, in B_t.
    pub fn outside(&self, n: usize) -> Vec<usize> {
        let mut out = self.b.clone();
        out.extend(self.j.iter().map(|&j| 2 * n + 2 - j));
        out.extend(self.k.iter().copied());
        out.sort_unstable();
        out
    }

    /// Diagonal positions with |h| < 1 or, for compact entries, in A_t.
    pub fn inside(&self, n: usize) -> Vec<usize> {
        let mut inn = self.a.clone();
        inn.extend(self.j.iter().copied());
        inn.extend(self.k.iter().map(|&k| 2 * n + 2 - k));
        inn.sort_unstable();
        inn
    }
}

/// J, K, A_t, B_t for a point of U(n, n+1) with nested pairing.
pub fn index_sets(point: &CoveredTorusPoint) -> Result<IndexSets> {
    let n = point.p();
    if point.q() != n + 1 || point.label().pairing != Pairing::Nested {
        return Err(Error::Invalid("index sets need a U(n, n+1) point with nested pairing".into()));
    }
    let t = point.t();
    let x = point.coords();
    let mut sets = IndexSets {
        j: vec![],
        k: vec![],
        a: (t + 1..=n).collect(),
        b: (n + 1..=2 * n + 1 - t).collect(),
    };
    for j in 1..=t {
        let xb = x[2 * n + 1 - j];
        if xb > 0.0 {
            sets.j.push(j);
        } else if xb < 0.0 {
            sets.k.push(j);
        } else {
            return Err(Error::NonRegular(2 * n + 2 - j));
        }
    }
    Ok(sets)
}

/// Sign pattern of the hyperbolic coordinates, then `|` and the cyclic
/// order of the compact angles, rotated to start at the smallest index.
pub fn chamber_id(point: &CoveredTorusPoint) -> Result<String> {
    check_regular(point, rootsys::SINGULAR_TOL)?;
    let x = point.coords();
    let mut id: String =
        point.hyperbolic_indices().iter().map(|&b| if x[b - 1] > 0.0 { '+' } else { '-' }).collect();
    let compact = point.compact_indices();
    if !compact.is_empty() {
        let tau = 2.0 * std::f64::consts::PI;
        let mut order: Vec<(f64, usize)> = compact.iter().map(|&c| (x[c - 1].rem_euclid(tau), c)).collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let start = order.iter().enumerate().min_by_key(|(_, (_, c))| *c).map(|(k, _)| k).unwrap_or(0);
        order.rotate_left(start);
        id.push('|');
        id.push_str(&order.iter().map(|(_, c)| c.to_string()).collect::<Vec<_>>().join(","));
    }
    Ok(id)
}
