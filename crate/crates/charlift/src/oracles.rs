//! Numerical oracles: trapezoid quadrature on the unit circle, directional
//! limits r → 1±, the σ-sums behind the closed forms, and chamber scans.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use itertools::Itertools;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::{self, CartanLabel, CoveredTorusPoint};
use crate::characters::{self, factorial, CharacterSpec, LiftConstants};
use crate::error::{Error, Result};
use crate::rootsys::{self, Side, SINGULAR_TOL};

/// Poles closer than this many node spacings (over 2π) are refused outright.
pub const POLE_GUARD: f64 = 10.0;
/// Minimum offset, in the same units, for radii fed to the extrapolation.
pub const EXTRAPOLATION_GUARD: f64 = 32.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Extrapolation {
    None,
    Richardson,
}

/// Quadrature settings. `offsets` are the distances |1 - r| of the radii
/// approaching the circle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureParams {
    pub nodes: usize,
    pub offsets: Vec<f64>,
    pub extrapolation: Extrapolation,
    pub tolerance: f64,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        QuadratureParams {
            nodes: 4096,
            offsets: (4..=10).map(|k| 2f64.powi(-k)).collect(),
            extrapolation: Extrapolation::Richardson,
            tolerance: 1e-5,
        }
    }
}

impl QuadratureParams {
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_nodes()?;
        if self.offsets.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
            return Err(Error::Invalid("every offset |1 - r| must lie in (0, 1)".into()));
        }
        if self.usable_offsets().is_empty() {
            return Err(Error::Invalid("no offset survives the near-pole guard".into()));
        }
        Ok(())
    }

    pub fn validate_nodes(&self) -> Result<()> {
        if self.nodes < 64 || !self.nodes.is_power_of_two() {
            return Err(Error::Invalid(format!("nodes = {} must be a power of two >= 64", self.nodes)));
        }
        Ok(())
    }

    /// Offsets used for extrapolation. A pole at distance d from the circle
    /// leaves a trapezoid error of order e^{-d·nodes}, so radii closer than
    /// 32/nodes are skipped.
    pub fn usable_offsets(&self) -> Vec<f64> {
        let guard = EXTRAPOLATION_GUARD / self.nodes as f64;
        self.offsets.iter().copied().filter(|&d| d >= guard).collect()
    }
}

/// Equispaced nodes on S¹, so z^k can be read off by index.
struct Circle {
    nodes: Vec<Complex64>,
}

impl Circle {
    fn new(n: usize) -> Self {
        Circle { nodes: (0..n).map(|l| Complex64::from_polar(1.0, 2.0 * PI * l as f64 / n as f64)).collect() }
    }

    /// (1/2πi)∮ z^k/(z - a) dz ≈ (1/N) Σ z_l^{k+1}/(z_l - a).
    fn moment(&self, k: i64, a: Complex64) -> Complex64 {
        let n = self.nodes.len() as i64;
        let step = (k + 1).rem_euclid(n) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = 0usize;
        for z in &self.nodes {
            acc += self.nodes[idx] / (z - a);
            idx = (idx + step) % self.nodes.len();
        }
        acc / n as f64
    }
}

fn check_pole(a: Complex64, nodes: usize) -> Result<()> {
    if a.norm() == 0.0 || (a.norm() - 1.0).abs() < POLE_GUARD / nodes as f64 {
        return Err(Error::PoleOnContour(a.norm()));
    }
    Ok(())
}

/// Trapezoid value of (1/2πi)∮_{S¹} z^k/(z - a) dz.
pub fn contour_unit_circle_moment(k: i64, a: Complex64, params: &QuadratureParams) -> Result<Complex64> {
    params.validate_nodes()?;
    check_pole(a, params.nodes)?;
    Ok(Circle::new(params.nodes).moment(k, a))
}

/// Residue value of the same integral: a^k if k >= 0 and |a| < 1,
/// -a^k if k < 0 and |a| > 1, and 0 otherwise.
pub fn contour_moment_exact(k: i64, a: Complex64) -> Complex64 {
    let inside = a.norm() < 1.0;
    match (k >= 0, inside) {
        (true, true) => a.powi(k as i32),
        (false, false) => -a.powi(k as i32),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// Neville extrapolation of samples (x_i, y_i) to x = 0.
pub fn richardson(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let mut p = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xa, xb) = (xs[i], xs[i + level]);
            p[i] = (xa * p[i + 1] - xb * p[i]) / (xa - xb);
        }
    }
    p[0]
}

fn extrapolate(xs: &[f64], ys: &[Complex64], mode: Extrapolation) -> Complex64 {
    match mode {
        Extrapolation::Richardson => richardson(xs, ys),
        Extrapolation::None => {
            let (k, _) = xs.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
            ys[k]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    FromInside,
    FromOutside,
    Free,
}

impl Direction {
    fn radius(self, offset: f64) -> f64 {
        match self {
            Direction::FromInside => 1.0 - offset,
            Direction::FromOutside => 1.0 + offset,
            Direction::Free => 1.0,
        }
    }

    fn flipped(self) -> Self {
        match self {
            Direction::FromInside => Direction::FromOutside,
            Direction::FromOutside => Direction::FromInside,
            Direction::Free => Direction::Free,
        }
    }
}

/// How the radius attached to diagonal position i approaches 1. Entries of
/// a hyperbolic pair are off the circle already; the rest come from inside
/// for the first block and from outside for the second.
pub fn limit_direction(i: usize, point: &CoveredTorusPoint) -> Result<Direction> {
    if i == 0 || i > point.dim() {
        return Err(Error::Invalid(format!("index {i} outside 1..={}", point.dim())));
    }
    cartan::check_regular(point, SINGULAR_TOL)?;
    Ok(if point.pair_of(i).is_some() {
        Direction::Free
    } else if i <= point.p() {
        Direction::FromInside
    } else {
        Direction::FromOutside
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub case: String,
    pub coords: Vec<f64>,
    pub closed_form: Complex64,
    pub numeric: Complex64,
    pub calibration: Complex64,
    pub relative_error: f64,
    /// Σ|summand| of the closed form; used as the error scale when the
    /// value itself vanishes identically.
    pub term_scale: f64,
    pub params: QuadratureParams,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Values of the pre-limit sum at each usable offset.
struct Sampled {
    offsets: Vec<f64>,
    values: Vec<Complex64>,
}

impl Sampled {
    fn limit(&self, mode: Extrapolation) -> Complex64 {
        extrapolate(&self.offsets, &self.values, mode)
    }

    /// Spread between the full extrapolation and one without the closest radius.
    fn spread(&self, mode: Extrapolation) -> f64 {
        if self.offsets.len() < 3 {
            return 0.0;
        }
        let k = self.offsets.len() - 1;
        (self.limit(mode) - extrapolate(&self.offsets[..k], &self.values[..k], mode)).norm()
    }
}

/// Σ over σ grouped by σ(1): w_j = Σ_{σ(1)=j} ε(σ) Δ_{Φ(Z)}(σ⁻¹ȟ)/Δ_Φ(ȟ) / (N-1)!.
fn first_index_weights(logs: &[Complex64]) -> Vec<Complex64> {
    let n = logs.len();
    let norm = factorial(n - 1);
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for sigma in (1..=n).permutations(n) {
        w[sigma[0] - 1] += rootsys::centralizer_quotient(&sigma, 1, 0, logs) / norm;
    }
    w
}

fn upq_samples(p: usize, q: usize, m: i64, point: &CoveredTorusPoint, params: &QuadratureParams, flip: Option<usize>) -> Result<Sampled> {
    params.validate()?;
    cartan::check_regular(point, SINGULAR_TOL)?;
    let logs = point.logs();
    let n = logs.len();
    let weights = first_index_weights(&logs);
    let odd = n % 2 == 1;
    let k = -m - 1 - (q as i64 - p as i64 + 1).div_euclid(2);
    let circle = Circle::new(params.nodes);
    let mut dirs = Vec::with_capacity(n);
    for i in 1..=n {
        let d = limit_direction(i, point)?;
        dirs.push(if flip == Some(i) { d.flipped() } else { d });
    }
    let offsets = params.usable_offsets();
    let mut values = Vec::with_capacity(offsets.len());
    for &delta in &offsets {
        let per_index: Vec<Result<Complex64>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let a = logs[j].exp() * dirs[j].radius(delta);
                check_pole(a, params.nodes)?;
                let pref = if odd { (logs[j] * 0.5).exp() } else { Complex64::new(1.0, 0.0) };
                Ok(weights[j] * pref * (-a) * circle.moment(k, a))
            })
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for v in per_index {
            acc += v?;
        }
        values.push(acc);
    }
    Ok(Sampled { offsets, values })
}

/// The σ-sum for the lift to U(p,q): each σ contributes its
/// centralizer quotient times the contour integral ∮ h^{K}/(h - r h'_{σ(1)})
/// with K = -m-1-⌈(q-p)/2⌉ (times h'^{1/2}_{σ(1)} when p+q is odd), the
/// radius approaching 1 per [`limit_direction`]. `flip` reverses the
/// direction of one index.
pub fn oracle_theta_upq(p: usize, q: usize, m: i64, point: &CoveredTorusPoint, params: &QuadratureParams, flip: Option<usize>) -> Result<Complex64> {
    Ok(upq_samples(p, q, m, point, params, flip)?.limit(params.extrapolation))
}

fn hash_seed(parts: &[i64]) -> u64 {
    parts.iter().fold(0x9e37_79b9_7f4a_7c15u64, |h, &v| (h ^ v as u64).wrapping_mul(0x100_0000_01b3).rotate_left(17))
}

/// Random regular point with angles in [-π, π) pairwise at circular
/// distance >= 0.2 and hyperbolic coordinates 0.25 <= |X| <= 1.5.
pub fn random_regular_point<R: Rng>(p: usize, q: usize, label: CartanLabel, rng: &mut R) -> Result<CoveredTorusPoint> {
    let dim = p + q;
    let probe = CoveredTorusPoint::new(p, q, label, vec![0.0; dim])?;
    let hyper = probe.hyperbolic_indices();
    let angle_idx: Vec<usize> = (1..=dim).filter(|c| !hyper.contains(c)).collect();
    for _ in 0..10_000 {
        let angles: Vec<f64> = angle_idx.iter().map(|_| rng.random_range(-PI..PI)).collect();
        let separated = angles.iter().tuple_combinations().all(|(a, b)| {
            let d = (a - b).rem_euclid(2.0 * PI);
            d.min(2.0 * PI - d) >= 0.2
        });
        if !separated {
            continue;
        }
        let mut coords = vec![0.0; dim];
        for (&c, &v) in angle_idx.iter().zip(&angles) {
            coords[c - 1] = v;
        }
        for &b in &hyper {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            coords[b - 1] = sign * rng.random_range(0.25..=1.5);
        }
        let point = probe.with_coords(coords)?;
        if cartan::is_regular(&point, 1e-6) {
            return Ok(point);
        }
    }
    Err(Error::Invalid("could not sample a regular point".into()))
}

/// Deterministic calibration point for a (group, t) pair.
pub fn reference_point(p: usize, q: usize, label: CartanLabel) -> Result<CoveredTorusPoint> {
    let tag = match label.pairing {
        rootsys::Pairing::Adjacent => 0,
        rootsys::Pairing::Nested => 1,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(hash_seed(&[p as i64, q as i64, label.t as i64, tag]));
    random_regular_point(p, q, label, &mut rng)
}

struct Calibrated {
    calibration: Complex64,
    notes: Vec<String>,
}

/// cal = closed/numeric at the reference point, or 1 when the closed value
/// there is zero up to rounding (nothing to fit).
fn calibrate(closed: Complex64, scale: f64, numeric: Complex64) -> Calibrated {
    if closed.norm() <= 1e-8 * scale || numeric.norm() == 0.0 {
        Calibrated {
            calibration: Complex64::new(1.0, 0.0),
            notes: vec!["closed form vanishes identically at the reference point; calibration fixed to 1".into()],
        }
    } else {
        Calibrated { calibration: closed / numeric, notes: vec![] }
    }
}

fn relative_error(closed: Complex64, predicted: Complex64, scale: f64) -> f64 {
    let denom = if closed.norm() > 1e-8 * scale { closed.norm() } else { scale };
    if denom == 0.0 {
        (closed - predicted).norm()
    } else {
        (closed - predicted).norm() / denom
    }
}

/// Compare [`characters::theta_upq`] with [`oracle_theta_upq`] after
/// fitting one constant at [`reference_point`].
pub fn verify_theta_upq(p: usize, q: usize, m: i64, t: usize, point: &CoveredTorusPoint, params: &QuadratureParams) -> Result<VerificationReport> {
    if p + q > 4 {
        return Err(Error::Invalid("the U(p,q) oracle is limited to p + q <= 4".into()));
    }
    let spec = CharacterSpec::lift_upq(p, q, m, t);
    let reference = reference_point(p, q, CartanLabel::new(t))?;
    let (ref_closed, ref_scale) = characters::theta_upq_with_scale(&spec, &reference)?;
    let ref_numeric = oracle_theta_upq(p, q, m, &reference, params, None)?;
    let cal = calibrate(ref_closed, ref_scale, ref_numeric);

    let (closed, scale) = characters::theta_upq_with_scale(&spec, point)?;
    let sampled = upq_samples(p, q, m, point, params, None)?;
    let numeric = sampled.limit(params.extrapolation);
    let predicted = cal.calibration * numeric;
    let err = relative_error(closed, predicted, scale);
    let mut notes = cal.notes;
    let spread = sampled.spread(params.extrapolation) * cal.calibration.norm();
    if !spread.is_finite() || spread > 1e-3 * closed.norm().max(scale) {
        notes.push(format!("extrapolation not converging: spread {spread:.3e}"));
    }
    let pass = err <= params.tolerance && notes.iter().all(|n| !n.starts_with("extrapolation"));
    Ok(VerificationReport {
        case: format!("upq p={p} q={q} m={m} t={t}"),
        coords: point.coords().to_vec(),
        closed_form: closed,
        numeric,
        calibration: cal.calibration,
        relative_error: err,
        term_scale: scale,
        params: params.clone(),
        pass,
        notes,
    })
}

/// Monomials c·h'_1^{e1} h'_2^{e2} of the U(1,1) seed Θ·Δ_Ψ (conjugated),
/// read off by a discrete Fourier transform on a shifted grid.
pub fn seed_monomials(m: i64) -> Result<Vec<(i64, i64, Complex64)>> {
    let g = 16usize.max(2 * m.unsigned_abs() as usize + 4);
    let spec = CharacterSpec::lift_upq(1, 1, m, 0);
    let datum = rootsys::build_root_datum(1, 1)?;
    let mut samples = Vec::with_capacity(g * g);
    for a in 0..g {
        for b in 0..g {
            let t1 = 2.0 * PI * a as f64 / g as f64 + 0.1;
            let t2 = 2.0 * PI * b as f64 / g as f64 + 0.37;
            let pt = CoveredTorusPoint::new(1, 1, CartanLabel::new(0), vec![t1, t2])?;
            let v = characters::theta_upq(&spec, &pt)?.value * rootsys::weyl_denominator(&datum, Side::Psi, &pt);
            samples.push((t1, t2, v.conj()));
        }
    }
    let half = g as i64 / 2;
    let mut out = Vec::new();
    for e1 in -half..half {
        for e2 in -half..half {
            let c: Complex64 = samples
                .iter()
                .map(|&(t1, t2, f)| f * Complex64::new(0.0, -(e1 as f64 * t1 + e2 as f64 * t2)).exp())
                .sum::<Complex64>()
                / (g * g) as f64;
            if c.norm() > 1e-9 {
                out.push((e1, e2, c));
            }
        }
    }
    Ok(out)
}

/// Σ over σ grouped by (σ(1), σ(N)) of the centralizer quotient for the
/// Levi factor on the middle positions.
fn pair_weights(logs: &[Complex64]) -> BTreeMap<(usize, usize), Complex64> {
    let n = logs.len();
    let mut w = BTreeMap::new();
    for sigma in (1..=n).permutations(n) {
        *w.entry((sigma[0], sigma[n - 1])).or_insert(Complex64::new(0.0, 0.0)) +=
            rootsys::centralizer_quotient(&sigma, 1, 1, logs);
    }
    w
}

fn lift_samples(n: usize, m: i64, point: &CoveredTorusPoint, params: &QuadratureParams, constants: &LiftConstants) -> Result<Sampled> {
    params.validate()?;
    cartan::check_regular(point, SINGULAR_TOL)?;
    let logs = point.logs();
    let dim = 2 * n + 1;
    let monomials = seed_monomials(m)?;
    let weights = pair_weights(&logs);
    let circle = Circle::new(params.nodes);
    let exps: Vec<i64> = monomials.iter().flat_map(|&(e1, e2, _)| [e1, e2]).sorted().dedup().collect();
    let dirs: Vec<Direction> = (1..=dim).map(|i| limit_direction(i, point)).collect::<Result<_>>()?;
    let offsets = params.usable_offsets();
    let a_const = constants.a(n) * constants.overall;
    let mut values = Vec::with_capacity(offsets.len());
    for &delta in &offsets {
        // I[i][e] = (1/2πi)∮ z^{e-1} (-a_i)/(z - a_i) dz
        let table: Vec<Result<Vec<Complex64>>> = (0..dim)
            .into_par_iter()
            .map(|i| {
                let a = logs[i].exp() * dirs[i].radius(delta);
                check_pole(a, params.nodes)?;
                Ok(exps.iter().map(|&e| -a * circle.moment(e - 1, a)).collect())
            })
            .collect();
        let table: Vec<Vec<Complex64>> = table.into_iter().collect::<Result<_>>()?;
        let col = |e: i64| exps.binary_search(&e).unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(i, j), &w) in &weights {
            let mut inner = Complex64::new(0.0, 0.0);
            for &(e1, e2, c) in &monomials {
                inner += c * table[i - 1][col(e1)] * table[j - 1][col(e2)];
            }
            acc += w * inner;
        }
        values.push(acc * a_const);
    }
    Ok(Sampled { offsets, values })
}

/// The double-contour σ-sum for the Ω-part of the lift to U(n, n+1):
/// A Σ_σ (centralizer quotient) ∮∮ F(h') / ((1 - h'_1/(r h)_{σ(1)})(1 - h'_2/(r h)_{σ(2n+1)})),
/// where F is the seed character times its Weyl denominator.
pub fn oracle_theta_lift(n: usize, m: i64, point: &CoveredTorusPoint, params: &QuadratureParams, constants: &LiftConstants) -> Result<Complex64> {
    Ok(lift_samples(n, m, point, params, constants)?.limit(params.extrapolation))
}

/// Compare [`characters::theta_lift_unn1`] with the oracle Ω-part plus the
/// closed δ-term, after fitting one constant at [`reference_point`].
pub fn verify_theta_lift(n: usize, m: i64, t: usize, point: &CoveredTorusPoint, params: &QuadratureParams) -> Result<VerificationReport> {
    if n == 0 || n > 2 {
        return Err(Error::Invalid("the lift oracle is limited to 1 <= n <= 2".into()));
    }
    let spec = CharacterSpec::double_lift(n, m, t);
    let constants = LiftConstants::default();
    let reference = reference_point(n, n + 1, CartanLabel::nested(t))?;
    let ref_parts = characters::theta_lift_parts(&spec, &reference, &constants)?;
    let ref_numeric = oracle_theta_lift(n, m, &reference, params, &constants)?;
    let cal = calibrate(ref_parts.omega_part, ref_parts.scale, ref_numeric);

    let parts = characters::theta_lift_parts(&spec, point, &constants)?;
    let sampled = lift_samples(n, m, point, params, &constants)?;
    let numeric = sampled.limit(params.extrapolation);
    let closed = parts.total();
    let predicted = cal.calibration * numeric + parts.delta_part;
    let err = relative_error(closed, predicted, parts.scale);
    let mut notes = cal.notes;
    let spread = sampled.spread(params.extrapolation) * cal.calibration.norm();
    if !spread.is_finite() || spread > 1e-3 * closed.norm().max(parts.scale) {
        notes.push(format!("extrapolation not converging: spread {spread:.3e}"));
    }
    let pass = err <= params.tolerance && notes.iter().all(|n| !n.starts_with("extrapolation"));
    Ok(VerificationReport {
        case: format!("lift n={n} m={m} t={t}"),
        coords: point.coords().to_vec(),
        closed_form: closed,
        numeric,
        calibration: cal.calibration,
        relative_error: err,
        term_scale: parts.scale,
        params: params.clone(),
        pass,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChamberResult {
    pub chamber_id: String,
    pub samples: usize,
    pub sign: i8,
    pub max_imag_ratio: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChamberScanReport {
    pub n: usize,
    pub t: usize,
    pub seed: u64,
    pub chambers: Vec<ChamberResult>,
    pub resampled: usize,
    pub violations: usize,
    pub pass: bool,
}

fn cyclic_orders(c: usize) -> Vec<Vec<usize>> {
    if c == 0 {
        return vec![vec![]];
    }
    (1..c).permutations(c - 1).map(|rest| std::iter::once(0).chain(rest).collect()).collect()
}

fn sample_in_chamber(
    probe: &CoveredTorusPoint,
    signs: &[bool],
    order: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Option<CoveredTorusPoint>> {
    let dim = probe.dim();
    let hyper = probe.hyperbolic_indices();
    let compact = probe.compact_indices();
    let mut coords = vec![0.0; dim];
    for (a, _) in probe.pairs() {
        coords[a - 1] = rng.random_range(-PI..PI);
    }
    for (&b, &plus) in hyper.iter().zip(signs) {
        let mag = rng.random_range(0.05..=3.0);
        coords[b - 1] = if plus { mag } else { -mag };
    }
    let mut angles: Vec<f64> = (0..compact.len()).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    let shift = rng.random_range(0.0..2.0 * PI);
    for (slot, &which) in order.iter().enumerate() {
        coords[compact[which] - 1] = angles[slot] + shift - PI;
    }
    let point = probe.with_coords(coords)?;
    Ok(if cartan::is_regular(&point, 1e-6) { Some(point) } else { None })
}

/// Sample every chamber of H_{n,S_t} and check that
/// ∏_{k=2}^{2n}(1 - h_1/h_k)(1 - h_k/h_{2n+1}) is real with a fixed sign.
pub fn chamber_sign_scan(n: usize, t: usize, samples_per_chamber: usize, seed: u64) -> Result<ChamberScanReport> {
    if n == 0 {
        return Err(Error::Invalid("chamber scan needs n >= 1".into()));
    }
    let probe = CoveredTorusPoint::unn1(n, t, vec![0.5; 2 * n + 1])?;
    if t == 0 {
        return Ok(ChamberScanReport { n, t, seed, chambers: vec![], resampled: 0, violations: 0, pass: true });
    }
    let c = probe.compact_indices().len();
    let mut targets = Vec::new();
    for bits in 0..1usize << t {
        let signs: Vec<bool> = (0..t).map(|k| bits >> k & 1 == 0).collect();
        for order in cyclic_orders(c) {
            targets.push((signs.clone(), order));
        }
    }
    let results: Vec<Result<(ChamberResult, usize)>> = targets
        .par_iter()
        .enumerate()
        .map(|(idx, (signs, order))| {
            let mut rng = ChaCha8Rng::seed_from_u64(hash_seed(&[seed as i64, n as i64, t as i64, idx as i64]));
            let mut resampled = 0;
            let mut id = None;
            let mut sign = 0i8;
            let mut max_ratio = 0f64;
            let mut violations = 0;
            let mut done = 0;
            while done < samples_per_chamber {
                let Some(point) = sample_in_chamber(&probe, signs, order, &mut rng)? else {
                    resampled += 1;
                    continue;
                };
                let label = cartan::chamber_id(&point)?;
                match &id {
                    None => id = Some(label),
                    Some(expect) if *expect != label => {
                        return Err(Error::Invalid(format!("sampler left chamber {expect}: got {label}")));
                    }
                    _ => {}
                }
                let v = characters::denominator_product(n, &point)?;
                let ratio = if v.norm() > 0.0 { v.im.abs() / v.norm() } else { 0.0 };
                max_ratio = max_ratio.max(ratio);
                let s = if v.re > 0.0 { 1 } else { -1 };
                if ratio >= 1e-10 || (sign != 0 && s != sign) {
                    violations += 1;
                }
                if sign == 0 {
                    sign = s;
                }
                done += 1;
            }
            let result = ChamberResult {
                chamber_id: id.unwrap_or_default(),
                samples: done,
                sign,
                max_imag_ratio: max_ratio,
                violations,
            };
            Ok((result, resampled))
        })
        .collect();
    let mut chambers = Vec::with_capacity(results.len());
    let mut resampled = 0;
    for r in results {
        let (c, k) = r?;
        resampled += k;
        chambers.push(c);
    }
    let violations = chambers.iter().map(|c| c.violations).sum();
    Ok(ChamberScanReport { n, t, seed, chambers, resampled, violations, pass: violations == 0 })
}
