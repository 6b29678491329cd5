//! Closed-form characters: the U(1) seed, its lift to U(p,q) on every
//! Cartan subgroup, the double lift to U(n, n+1), and the ε character.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::cartan::{self, CartanLabel, CoveredTorusPoint};
use crate::error::{Error, Result};
use crate::rootsys::{self, Pairing, SINGULAR_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterKind {
    SeedU1,
    LiftUpq,
    DoubleLiftUnn1,
}

/// Which character to evaluate. For the double lift, (p, q) = (n, n+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CharacterSpec {
    pub kind: CharacterKind,
    pub p: usize,
    pub q: usize,
    pub m: i64,
    pub label: CartanLabel,
}

impl CharacterSpec {
    pub fn seed_u1(p: usize, q: usize, m: i64) -> Self {
        CharacterSpec { kind: CharacterKind::SeedU1, p, q, m, label: CartanLabel::new(0) }
    }

    pub fn lift_upq(p: usize, q: usize, m: i64, t: usize) -> Self {
        CharacterSpec { kind: CharacterKind::LiftUpq, p, q, m, label: CartanLabel::new(t) }
    }

    pub fn double_lift(n: usize, m: i64, t: usize) -> Self {
        CharacterSpec { kind: CharacterKind::DoubleLiftUnn1, p: n, q: n + 1, m, label: CartanLabel::nested(t) }
    }

    pub fn n(&self) -> usize {
        self.p
    }

    pub fn t(&self) -> usize {
        self.label.t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Absolute,
    UpToGlobalConstant,
}

impl Normalization {
    pub fn tag(self) -> &'static str {
        match self {
            Normalization::Absolute => "absolute",
            Normalization::UpToGlobalConstant => "up_to_global_constant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedValue {
    pub value: Complex64,
    pub normalization: Normalization,
}

impl NormalizedValue {
    fn up_to_constant(value: Complex64) -> Self {
        NormalizedValue { value, normalization: Normalization::UpToGlobalConstant }
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// e^{i·angle·(m + (q-p)/2)} on the lifted angle.
pub fn theta_u1(m: i64, p: usize, q: usize, angle_lift: f64) -> NormalizedValue {
    let exponent = m as f64 + (q as f64 - p as f64) / 2.0;
    NormalizedValue::up_to_constant(Complex64::new(0.0, angle_lift * exponent).exp())
}

fn check_shape(spec: &CharacterSpec, point: &CoveredTorusPoint, pairing: Pairing) -> Result<()> {
    if point.p() != spec.p || point.q() != spec.q {
        return Err(Error::Invalid(format!(
            "point lives on U({},{}) but the character is for U({},{})",
            point.p(),
            point.q(),
            spec.p,
            spec.q
        )));
    }
    if point.t() != spec.t() || point.label().pairing != pairing {
        return Err(Error::Invalid(format!("point is on Cartan t={} but the character asks for t={}", point.t(), spec.t())));
    }
    Ok(())
}

/// The case split of the U(p,q) lift: true on the branch with
/// m <= -1 - (q-p)/2.
pub fn upq_lower_case(p: usize, q: usize, m: i64) -> bool {
    2 * m + q as i64 - p as i64 <= -2
}

/// Signed summands of the U(p,q) lift, before the C² factor.
fn upq_terms(p: usize, q: usize, m: i64, point: &CoveredTorusPoint) -> Vec<Complex64> {
    let logs = point.logs();
    let h: Vec<Complex64> = logs.iter().map(|l| l.exp()).collect();
    let half_all = (logs.iter().sum::<Complex64>() * 0.5).exp();
    let power = (p as i64 - 1 - m) as f64;
    let term = |j: usize| {
        let mut den = Complex64::new(1.0, 0.0);
        for (i, hi) in h.iter().enumerate() {
            if i + 1 != j {
                den *= h[j - 1] - hi;
            }
        }
        (logs[j - 1] * power).exp() * half_all / den
    };
    let t = point.t();
    let x = point.coords();
    let (jset, kset): (Vec<usize>, Vec<usize>) = (1..=t).partition(|&j| x[p + j - 1] > 0.0);
    if upq_lower_case(p, q, m) {
        let mut out: Vec<Complex64> = jset.iter().map(|&j| -term(j)).collect();
        out.extend(kset.iter().map(|&j| -term(p + j)));
        out.extend((t + 1..=p).map(|j| -term(j)));
        out
    } else {
        let mut out: Vec<Complex64> = kset.iter().map(|&j| term(j)).collect();
        out.extend(jset.iter().map(|&j| term(p + j)));
        out.extend((p + t + 1..=p + q).map(term));
        out
    }
}

/// The lift of the U(1) character m to U(p,q), p <= q, on the Cartan
/// H_{S_t}:
///
/// lower case (m <= -1-(q-p)/2):
///   -C² [Σ_{j∈J} T(j) + Σ_{j∈K} T(p+j) + Σ_{j=t+1}^{p} T(j)]
/// otherwise:
///   +C² [Σ_{j∈K} T(j) + Σ_{j∈J} T(p+j) + Σ_{j=p+t+1}^{p+q} T(j)]
///
/// with T(j) = h_j^{-m+p-1} ∏_i h_i^{1/2} / ∏_{i≠j}(h_j - h_i), C = 1/(p+q-1)!,
/// J = {j <= t : X_{p+j} > 0} and K = {j <= t : X_{p+j} < 0}.
pub fn theta_upq(spec: &CharacterSpec, point: &CoveredTorusPoint) -> Result<NormalizedValue> {
    let (value, _) = theta_upq_with_scale(spec, point)?;
    Ok(NormalizedValue::up_to_constant(value))
}

/// Value together with Σ|summand|, the natural scale for cancellation.
pub fn theta_upq_with_scale(spec: &CharacterSpec, point: &CoveredTorusPoint) -> Result<(Complex64, f64)> {
    if spec.kind != CharacterKind::LiftUpq {
        return Err(Error::Invalid("theta_upq needs a lift_upq spec".into()));
    }
    if spec.p > spec.q {
        return Err(Error::Invalid(format!("U({},{}) lift needs p <= q", spec.p, spec.q)));
    }
    check_shape(spec, point, Pairing::Adjacent)?;
    cartan::check_regular(point, SINGULAR_TOL)?;
    let c = 1.0 / factorial(spec.p + spec.q - 1);
    let terms = upq_terms(spec.p, spec.q, spec.m, point);
    let value: Complex64 = terms.iter().sum::<Complex64>() * (c * c);
    let scale = terms.iter().map(|z| z.norm()).sum::<f64>() * c * c;
    Ok((value, scale))
}

/// The compact-Cartan form of the U(p,q) lift:
/// ∏h^{1/2} Σ_{i<=p} T'(i) in the lower case, -∏h^{1/2} Σ_{i>p} T'(i) otherwise,
/// times C². It equals minus [`theta_upq`] at t = 0.
pub fn theta_upq_compact(p: usize, q: usize, m: i64, point: &CoveredTorusPoint) -> Result<Complex64> {
    let spec = CharacterSpec::lift_upq(p, q, m, 0);
    let value = theta_upq(&spec, point)?.value;
    Ok(-value)
}

/// The four-case U(1,1) formula on the split Cartan, h' = e^{iθ}[[ch X, -sh X], [-sh X, ch X]].
pub fn theta_u11_split(m: i64, theta: f64, x: f64) -> Result<Complex64> {
    if x.abs() < SINGULAR_TOL {
        return Err(Error::NonRegular(2));
    }
    let den = x.exp() - (-x).exp();
    let minus = Complex64::new(-x, theta).exp();
    let plus = Complex64::new(x, theta).exp();
    let pow = |z: Complex64| z.powi(-(m as i32));
    Ok(match (m <= -1, x > 0.0) {
        (true, true) => pow(minus) / den,
        (true, false) => -pow(plus) / den,
        (false, true) => pow(plus) / den,
        (false, false) => -pow(minus) / den,
    })
}

fn lift_diagonal(n: usize, point: &CoveredTorusPoint) -> Result<Vec<Complex64>> {
    if point.dim() != 2 * n + 1 {
        return Err(Error::DimensionMismatch { expected: 2 * n + 1, got: point.dim() });
    }
    cartan::check_regular(point, SINGULAR_TOL)?;
    Ok(point.diagonal())
}

/// Ω_{i,j}(h) = ∏_{k≠i,j} h_k / [∏_{k≠i}(h_i - h_k) ∏_{l≠i,j}(h_j - h_l)].
pub fn omega(n: usize, i: usize, j: usize, point: &CoveredTorusPoint) -> Result<Complex64> {
    rootsys::check_pair(i, j, 2 * n + 1)?;
    let h = lift_diagonal(n, point)?;
    Ok(rootsys::omega_raw(i, j, &h))
}

fn hyperbolic_last(n: usize, point: &CoveredTorusPoint) -> Result<f64> {
    if point.t() == 0 || point.label().pairing != Pairing::Nested || point.p() != n || point.q() != n + 1 {
        return Err(Error::Invalid("needs a U(n, n+1) point with t >= 1 and nested pairing".into()));
    }
    let x = point.coords()[2 * n];
    if x.abs() < SINGULAR_TOL {
        return Err(Error::NonRegular(2 * n + 1));
    }
    Ok(x)
}

/// ∏_{k=2}^{2n}(1 - h_1/h_k) ∏_{k=2}^{2n}(1 - h_k/h_{2n+1}).
pub fn denominator_product(n: usize, point: &CoveredTorusPoint) -> Result<Complex64> {
    hyperbolic_last(n, point)?;
    let h = lift_diagonal(n, point)?;
    let one = Complex64::new(1.0, 0.0);
    let mut acc = one;
    for hk in &h[1..2 * n] {
        acc *= (one - h[0] / hk) * (one - hk / h[2 * n]);
    }
    Ok(acc)
}

/// Σ(h) = sgn(X) e^{imX_1} |e^{(2n-2)X}| (1 - e^{-2X})
///        / ( |∏(1 - h_1/h_k) ∏(1 - h_k/h_{2n+1})| |1 - e^{-2X}|² ),  X = X_{2n+1}.
pub fn sigma_raw(n: usize, m: i64, point: &CoveredTorusPoint) -> Result<Complex64> {
    let x = hyperbolic_last(n, point)?;
    let prod = denominator_product(n, point)?;
    let x1 = point.coords()[0];
    let e2 = 1.0 - (-2.0 * x).exp();
    let num = Complex64::new(0.0, m as f64 * x1).exp() * (x.signum() * ((2 * n) as f64 - 2.0) * x).exp().max(0.0);
    let num = num * x.signum() * e2;
    Ok(num / (prod.norm() * e2 * e2))
}

/// Σ(h) times e^{-(m+1) sgn(X) X} for m >= 0, e^{(m-1) sgn(X) X} for m <= -1.
pub fn sigma_term(n: usize, m: i64, point: &CoveredTorusPoint) -> Result<Complex64> {
    let x = hyperbolic_last(n, point)?;
    let s = x.signum();
    let pre = if m >= 0 { (-(m as f64 + 1.0) * s * x).exp() } else { ((m as f64 - 1.0) * s * x).exp() };
    Ok(sigma_raw(n, m, point)? * pre)
}

/// Normalization bundle for the double lift. The constants
/// (the sign exponent u, the overall C, and the ratio of Weyl-integration
/// constants inside B) are not fixed numerically, so they are inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftConstants {
    pub u: u8,
    pub overall: f64,
    pub measure_ratio: f64,
}

impl Default for LiftConstants {
    fn default() -> Self {
        LiftConstants { u: 0, overall: 1.0, measure_ratio: 1.0 }
    }
}

impl LiftConstants {
    pub fn a(&self, n: usize) -> f64 {
        let sign = if self.u.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign / (2.0 * factorial(2 * n - 1))
    }

    pub fn a_tilde(&self, n: usize) -> f64 {
        self.a(n) / factorial(2 * n - 1)
    }

    pub fn b(&self, n: usize) -> f64 {
        let nn = n as f64;
        2f64.powi(4 * n as i32 + 3) * (2.0 * nn - 1.0) * self.measure_ratio / (2.0 * (2.0 * nn + 1.0).powi(2))
    }
}

/// The two parts of the double-lift formula, already multiplied by the
/// overall constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftParts {
    pub omega_part: Complex64,
    pub delta_part: Complex64,
    /// Σ of the moduli of all summands.
    pub scale: f64,
}

impl LiftParts {
    pub fn total(&self) -> Complex64 {
        self.omega_part + self.delta_part
    }
}

/// The double lift to U(n, n+1) on H_{n,S_t}:
///
///   m >= 1:  -Ã Σ_{i∈Out, j∈In} h_i^n h_j^{n+m} Ω_{i,j} + δ B e^{-(m+1)sgn(X)X} Σ
///   m = 0:   +Ã Σ_{i≠j∈Out} h_i^n h_j^n Ω_{i,j}        + δ B e^{-sgn(X)X} Σ
///   m <= -1: +Ã Σ_{i≠j∈Out} h_i^{n+m} h_j^n Ω_{i,j}    + δ B e^{(m-1)sgn(X)X} Σ
///
/// Out are the diagonal positions with |h| > 1 together with B_t, In those
/// with |h| < 1 together with A_t; δ = 0 for t = 0 and 1 otherwise.
pub fn theta_lift_unn1(spec: &CharacterSpec, point: &CoveredTorusPoint, constants: &LiftConstants) -> Result<NormalizedValue> {
    Ok(NormalizedValue::up_to_constant(theta_lift_parts(spec, point, constants)?.total()))
}

pub fn theta_lift_parts(spec: &CharacterSpec, point: &CoveredTorusPoint, constants: &LiftConstants) -> Result<LiftParts> {
    if spec.kind != CharacterKind::DoubleLiftUnn1 || spec.n() == 0 {
        return Err(Error::Invalid("theta_lift_unn1 needs a double_lift spec with n >= 1".into()));
    }
    check_shape(spec, point, Pairing::Nested)?;
    let n = spec.n();
    let m = spec.m;
    let h = lift_diagonal(n, point)?;
    let sets = cartan::index_sets(point)?;
    let out = sets.outside(n);
    let inn = sets.inside(n);
    let a_tilde = constants.a_tilde(n) * constants.overall;
    let pw = |i: usize, k: i64| h[i - 1].powi(k as i32);

    let mut terms: Vec<Complex64> = Vec::new();
    if m >= 1 {
        for &i in &out {
            for &j in &inn {
                terms.push(-pw(i, n as i64) * pw(j, n as i64 + m) * rootsys::omega_raw(i, j, &h));
            }
        }
    } else {
        for &i in &out {
            for &j in &out {
                if i != j {
                    terms.push(pw(i, n as i64 + m) * pw(j, n as i64) * rootsys::omega_raw(i, j, &h));
                }
            }
        }
    }
    let omega_part = terms.iter().sum::<Complex64>() * a_tilde;
    let delta_part = if point.t() == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        sigma_term(n, m, point)? * constants.b(n) * constants.overall
    };
    let scale = terms.iter().map(|z| z.norm()).sum::<f64>() * a_tilde.abs() + delta_part.norm();
    Ok(LiftParts { omega_part, delta_part, scale })
}

/// ε(g̃) = Θ/|Θ| with Θ² = det(g)⁻¹ det(½(c(g)+1))², c(g) = (g+1)(g-1)⁻¹,
/// for g acting on the real polarization X. Θ is the principal square
/// root times (-1)^sheet.
pub fn epsilon_real_linear(g: &DMatrix<f64>, sheet: u8) -> Result<Complex64> {
    if !g.is_square() || g.nrows() == 0 {
        return Err(Error::Invalid("ε needs a non-empty square matrix".into()));
    }
    let d = g.nrows();
    let id = DMatrix::<f64>::identity(d, d);
    let gm1 = g - &id;
    let scale = g.abs().max().max(1.0).powi(d as i32);
    if gm1.determinant().abs() <= 1e-12 * scale {
        return Err(Error::CayleyDomain);
    }
    let inv = gm1.try_inverse().ok_or(Error::CayleyDomain)?;
    let cayley = (g + &id) * inv;
    let half = (cayley + &id) * 0.5;
    let theta_sq = Complex64::new(half.determinant().powi(2) / g.determinant(), 0.0);
    if !theta_sq.norm().is_finite() || theta_sq.norm() == 0.0 {
        return Err(Error::Invalid("g is not invertible".into()));
    }
    let mut theta = theta_sq.sqrt();
    if sheet % 2 == 1 {
        theta = -theta;
    }
    Ok(theta / theta.norm())
}

/// ε for a complex-linear map of a complex space, seen as a real-linear map
/// of the underlying real space.
pub fn epsilon_complex_linear(g: &DMatrix<Complex64>, sheet: u8) -> Result<Complex64> {
    let d = g.nrows();
    let real = DMatrix::<f64>::from_fn(2 * d, 2 * d, |r, c| {
        let z = g[(r % d, c % d)];
        match (r < d, c < d) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    epsilon_real_linear(&real, sheet)
}

/// ε of g̃ whose restriction to X is `gx`. A matrix with real entries is read
/// as a real-linear map of X; otherwise as a complex-linear map, realified.
pub fn epsilon_character(gx: &DMatrix<Complex64>, sheet: u8) -> Result<Complex64> {
    let size = gx.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if gx.iter().all(|z| z.im.abs() <= 1e-15 * size) {
        epsilon_real_linear(&gx.map(|z| z.re), sheet)
    } else {
        epsilon_complex_linear(gx, sheet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_datum, weyl_denominator, Side};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn seed_examples() {
        assert!((theta_u1(0, 1, 1, 0.0).value - c(1.0, 0.0)).norm() < 1e-15);
        assert!((theta_u1(2, 1, 1, PI / 2.0).value - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((theta_u1(1, 1, 2, PI).value - c(0.0, -1.0)).norm() < 1e-15);
        // genuine for odd q - p: one turn flips the sign
        let a = theta_u1(1, 1, 2, 0.4).value;
        let b = theta_u1(1, 1, 2, 0.4 + 2.0 * PI).value;
        assert!((a + b).norm() < 1e-14);
    }

    #[test]
    fn compact_u11_value() {
        let pt = CoveredTorusPoint::new(1, 1, CartanLabel::new(0), vec![PI / 2.0, 0.0]).unwrap();
        let v = theta_upq_compact(1, 1, 0, &pt).unwrap();
        assert!((v - c(0.0, -1.0 / 2f64.sqrt())).norm() < 1e-15);
        let spec = CharacterSpec::lift_upq(1, 1, 0, 0);
        assert!((theta_upq(&spec, &pt).unwrap().value + v).norm() < 1e-15);
    }

    #[test]
    fn compact_u11_ktype_series() {
        // For m >= 0 the compact value is -h2^{-m} (h2/h1)^{1/2} Σ_k (h2/h1)^k;
        // Fejér means of the series converge on the circle.
        let (t1, t2, m) = (0.9, -1.3, 2);
        let pt = CoveredTorusPoint::new(1, 1, CartanLabel::new(0), vec![t1, t2]).unwrap();
        let closed = theta_upq(&CharacterSpec::lift_upq(1, 1, m, 0), &pt).unwrap().value;
        let z = Complex64::new(0.0, t2 - t1).exp();
        let terms = 1000;
        let mut partial = c(0.0, 0.0);
        let mut fejer = c(0.0, 0.0);
        let mut zk = c(1.0, 0.0);
        for _ in 0..terms {
            partial += zk;
            fejer += partial;
            zk *= z;
        }
        fejer /= terms as f64;
        let series = -Complex64::new(0.0, -(m as f64) * t2 + (t2 - t1) / 2.0).exp() * fejer;
        assert!((series - closed).norm() < 5e-3 * closed.norm());
    }

    #[test]
    fn split_u11_value() {
        let pt = CoveredTorusPoint::new(1, 1, CartanLabel::new(1), vec![0.0, 1.0]).unwrap();
        let v = theta_upq(&CharacterSpec::lift_upq(1, 1, 0, 1), &pt).unwrap().value;
        assert!((v - c(0.425_459_064_1, 0.0)).norm() < 1e-10);
        assert!((theta_u11_split(0, 0.0, 1.0).unwrap() - v).norm() < 1e-15);
    }

    #[test]
    fn upq_rejects_bad_input() {
        let spec = CharacterSpec::lift_upq(1, 1, 0, 1);
        let flat = CoveredTorusPoint::new(1, 1, CartanLabel::new(1), vec![0.2, 0.0]).unwrap();
        assert_eq!(theta_upq(&spec, &flat), Err(Error::NonRegular(2)));
        let sing = CoveredTorusPoint::new(1, 1, CartanLabel::new(0), vec![0.2, 0.2]).unwrap();
        assert_eq!(theta_upq(&CharacterSpec::lift_upq(1, 1, 0, 0), &sing), Err(Error::Singular(1, 2)));
        let wide = CoveredTorusPoint::new(2, 1, CartanLabel::new(0), vec![0.1, 0.2, 0.3]).unwrap();
        assert!(theta_upq(&CharacterSpec::lift_upq(2, 1, 0, 0), &wide).is_err());
    }

    #[test]
    fn omega_and_delta_quotient() {
        let pt = CoveredTorusPoint::unn1(1, 0, vec![PI / 2.0, PI / 4.0, -PI / 3.0]).unwrap();
        let h = pt.diagonal();
        for (i, j) in [(1, 3), (3, 1), (2, 1)] {
            let om = omega(1, i, j, &pt).unwrap();
            let dq = rootsys::delta_quotient(1, i, j, &pt).unwrap().value;
            assert!((dq - h[i - 1] * h[j - 1] * om).norm() < 1e-14);
        }
        let sing = CoveredTorusPoint::unn1(1, 0, vec![0.5, 0.5, 1.0]).unwrap();
        assert!(omega(1, 1, 3, &sing).is_err());
    }

    #[test]
    fn sigma_examples() {
        let pt = CoveredTorusPoint::unn1(1, 1, vec![0.2, 1.3, 0.7]).unwrap();
        let s = sigma_term(1, 0, &pt).unwrap();
        assert!(s.norm().is_finite() && s.norm() > 0.0);
        let prod = denominator_product(1, &pt).unwrap();
        assert!(prod.im.abs() < 1e-12 * prod.norm());
        let flipped = CoveredTorusPoint::unn1(1, 1, vec![0.2, 1.3, -0.7]).unwrap();
        let a = sigma_raw(1, 0, &pt).unwrap();
        let b = sigma_raw(1, 0, &flipped).unwrap();
        assert!(a.re > 0.0 && b.re > 0.0, "sgn(X)(1 - e^(-2X)) is even in X");
        let zero = CoveredTorusPoint::unn1(1, 1, vec![0.2, 1.3, 0.0]).unwrap();
        assert_eq!(sigma_term(1, 0, &zero), Err(Error::NonRegular(3)));
    }

    #[test]
    fn lift_t0_has_no_delta_term() {
        let pt = CoveredTorusPoint::unn1(1, 0, vec![0.5, 1.7, 2.9]).unwrap();
        let parts = theta_lift_parts(&CharacterSpec::double_lift(1, 1, 0), &pt, &LiftConstants::default()).unwrap();
        assert_eq!(parts.delta_part, c(0.0, 0.0));
        let pt = CoveredTorusPoint::unn1(1, 1, vec![0.2, 1.3, 0.7]).unwrap();
        let parts = theta_lift_parts(&CharacterSpec::double_lift(1, 0, 1), &pt, &LiftConstants::default()).unwrap();
        assert!(parts.delta_part.norm() > 0.0);
        assert!(parts.total().norm().is_finite());
    }

    #[test]
    fn delta_quotient_antisymmetry_kills_m0_at_t0() {
        let pt = CoveredTorusPoint::unn1(2, 0, vec![0.3, 1.1, 2.0, 3.3, 4.9]).unwrap();
        let parts = theta_lift_parts(&CharacterSpec::double_lift(2, 0, 0), &pt, &LiftConstants::default()).unwrap();
        assert!(parts.omega_part.norm() < 1e-13 * parts.scale);
    }

    #[test]
    fn weyl_denominator_u11_relation() {
        // Θ·Δ_Ψ on the compact torus of U(1,1) is minus a single monomial.
        let d = build_root_datum(1, 1).unwrap();
        for m in [-2i64, 0, 3] {
            let pt = CoveredTorusPoint::new(1, 1, CartanLabel::new(0), vec![0.4, 2.1]).unwrap();
            let v = theta_upq(&CharacterSpec::lift_upq(1, 1, m, 0), &pt).unwrap().value * weyl_denominator(&d, Side::Psi, &pt);
            let h = pt.diagonal();
            let expect = if m >= 0 { -h[1].powi(-m as i32) } else { -h[0].powi(-m as i32) };
            assert!((v - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn epsilon_examples() {
        let minus = DMatrix::from_element(1, 1, c(-1.0, 0.0)) * c(1.0, 0.0);
        let minus2 = DMatrix::<Complex64>::identity(2, 2) * c(-1.0, 0.0);
        for g in [minus, minus2] {
            let e = epsilon_character(&g, 0).unwrap();
            assert!((e.norm() - 1.0).abs() < 1e-12);
            assert!((e.powi(4) - 1.0).norm() < 1e-9);
        }
        // -Id on a line: Θ² = det(-1)/det(-2)² = -1/4, so ε = ±i
        let e = epsilon_character(&(DMatrix::identity(1, 1) * c(-1.0, 0.0)), 0).unwrap();
        assert!((e - c(0.0, 1.0)).norm() < 1e-12);
        assert!((epsilon_character(&(DMatrix::identity(1, 1) * c(-1.0, 0.0)), 1).unwrap() + e).norm() < 1e-12);
        // complex-linear maps give ±1
        let u = DMatrix::from_row_slice(1, 1, &[Complex64::new(0.0, 0.7).exp()]);
        let e = epsilon_character(&u, 0).unwrap();
        assert!((e.im).abs() < 1e-12 && (e.re.abs() - 1.0).abs() < 1e-12);
        assert_eq!(epsilon_character(&DMatrix::identity(2, 2), 0), Err(Error::CayleyDomain));
    }
}
