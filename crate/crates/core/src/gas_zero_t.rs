//! Zero-temperature thermodynamics of the magnetized electron gas.
//!
//! Every quantity is dimensionless with its natural prefactor factored out:
//!
//! | quantity | unit |
//! |---|---|
//! | grand potential ω, energy density u | m⁴/4π² |
//! | number density n, density of states g | m³/2π² |
//! | magnetization M | e·m²/2π² |
//!
//! With Q = p_F²/b the filling, the central closed forms are
//! n = b^{3/2} ℋ_{−1/2}(Q), ω = −b^{5/2} ∫₀^Q ℋ_{−1/2}(q)(1+bq)^{−1/2} dq,
//! u = ω + 2ε_F n and M = −∂ω/∂b.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::hfamily::{h_z, is_integral, landau_sum, zeta_frac};
use crate::hurwitz::{subtracted_zeta, zeta, zeta_f64, ZetaEngineConfig};
use crate::numerics::{integrate, QuadratureSpec};

/// Natural field unit B₀ = m²c³/(2eħ) in gauss; b = B/B₀.
pub const B0_GAUSS: f64 = 2.2e13;

pub fn field_to_gauss(b: f64) -> f64 {
    b * B0_GAUSS
}

pub fn gauss_to_field(gauss: f64) -> f64 {
    gauss / B0_GAUSS
}

/// A zero-temperature state: Fermi energy ε_F > 1 and field b > 0, both in
/// electron-mass units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasPointT0 {
    eps_f: f64,
    b: f64,
    p2: f64,
}

impl GasPointT0 {
    pub fn new(eps_f: f64, b: f64) -> Result<Self> {
        if !(eps_f > 1.0) || !eps_f.is_finite() {
            return Err(Error::InvalidInput(format!("Fermi energy must exceed 1, got {eps_f}")));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::InvalidInput(format!("field b must be positive, got {b}")));
        }
        Ok(Self { eps_f, b, p2: (eps_f - 1.0) * (eps_f + 1.0) })
    }

    pub fn eps_f(&self) -> f64 {
        self.eps_f
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p_f2(&self) -> f64 {
        self.p2
    }

    pub fn p_f(&self) -> f64 {
        self.p2.sqrt()
    }

    /// p_F²/b
    pub fn filling(&self) -> f64 {
        self.p2 / self.b
    }

    /// Index of the highest occupied Landau level.
    pub fn highest_level(&self) -> usize {
        self.filling().floor() as usize
    }

    pub fn at_threshold(&self) -> bool {
        is_integral(self.filling())
    }

    fn acosh_eps(&self) -> f64 {
        (self.eps_f + self.p_f()).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    SmallBExpansion,
    LargeFillingExpansion,
    BruteForce,
    NonRelativistic,
    Sommerfeld,
    OscillationSeries,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::SmallBExpansion => "small_b_expansion",
            Method::LargeFillingExpansion => "large_filling_expansion",
            Method::BruteForce => "brute_force",
            Method::NonRelativistic => "nonrelativistic",
            Method::Sommerfeld => "sommerfeld",
            Method::OscillationSeries => "oscillation_series",
        }
    }
}

/// A thermodynamic value with its monotonic/oscillatory decomposition.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ThermoResult {
    pub value: f64,
    pub monotonic: f64,
    pub oscillatory: f64,
    pub abs_error_estimate: f64,
    pub method: Method,
    /// p_F²/b sat exactly on a Landau threshold; fractional-part terms used
    /// the limit from below.
    pub at_threshold: bool,
}

impl ThermoResult {
    pub(crate) fn new(monotonic: f64, oscillatory: f64, err: f64, method: Method, at_threshold: bool) -> Self {
        Self { value: monotonic + oscillatory, monotonic, oscillatory, abs_error_estimate: err, method, at_threshold }
    }

    fn unsupported(quantity: &str, method: Method) -> Error {
        Error::InvalidInput(format!("{quantity} has no {} evaluation", method.name()))
    }
}

fn spec(abs: f64, rel: f64) -> QuadratureSpec {
    QuadratureSpec::new(abs, rel).with_max_subdivisions(4000)
}

// 1, 2, 4, ... strictly inside (0, top).
fn geometric_breakpoints(top: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut x = 1.0;
    while x < top {
        v.push(x);
        x *= 2.0;
    }
    v
}

// ζ(s, x) − ζ(s, x + n) = Σ_{k<n} (x+k)^{−s}, summed directly when short.
fn zeta_window(s: f64, x: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n <= 64 {
        return (0..n).rev().map(|k| (x + k as f64).powf(-s)).sum();
    }
    zeta_f64(s, x) - zeta_f64(s, x + n as f64)
}

/// ∫₀^a ζ(z,t) g(t) dt for z < 0 and 0 < a ≤ 1, with t = u² absorbing the
/// t^{−z} cusp at the origin.
fn integrate_zeta_weighted<G: Fn(f64) -> f64>(z: f64, a: f64, g: G, abs_tol: f64) -> Result<(f64, f64)> {
    if a <= 0.0 {
        return Ok((0.0, 0.0));
    }
    // the weight is a difference of O(g) zeta values; ask for no more than its rounding
    let abs_tol = abs_tol * g(0.5 * a).abs().max(1.0);
    let q = integrate(
        |u: f64| {
            let t = u * u;
            2.0 * u * zeta_f64(z, t.max(f64::MIN_POSITIVE)) * g(t)
        },
        0.0,
        a.sqrt(),
        &spec(abs_tol, 1e-11),
    )?;
    Ok((q.value, q.abs_error))
}

/// ∫₀^Q ζ(z,{q}) (1+bq)^{−s} dq through the reduction to one period:
/// b^{−s}[∫₀^{{Q}} ζ(z,q)(q+1/b+⌊Q⌋)^{−s} dq + ∫₀¹ ζ(z,q)(ζ(s,q+1/b) − ζ(s,q+1/b+⌊Q⌋)) dq].
///
/// Returns (value, error estimate).
pub fn oscillatory_integral(z: f64, s: f64, b: f64, filling: f64) -> Result<(f64, f64)> {
    let n = filling.floor();
    let f = filling - n;
    let inv_b = 1.0 / b;
    let shift = inv_b + n;
    let (i1, e1) = integrate_zeta_weighted(z, f, |t| (t + shift).powf(-s), 1e-14)?;
    let (i2, e2) = if n >= 1.0 {
        let nn = n as usize;
        integrate_zeta_weighted(z, 1.0, |t| zeta_window(s, t + inv_b, nn), 1e-14)?
    } else {
        (0.0, 0.0)
    };
    let scale = b.powf(-s);
    Ok((scale * (i1 + i2), scale * (e1 + e2)))
}

/// n = b^{3/2}ℋ_{−1/2}(p_F²/b) by literal summation over Landau levels.
pub fn number_density_levels(pt: &GasPointT0) -> f64 {
    pt.b.powf(1.5) * landau_sum(-0.5, pt.filling()).unwrap_or(0.0)
}

/// g(E) = b^{1/2} ε ℋ_{1/2}((ε²−1)/b), in units m³/2π².
pub fn density_of_states(energy: f64, b: f64) -> Result<f64> {
    if !(energy > 1.0) {
        return Err(Error::Domain(format!("density of states needs E > 1, got {energy}")));
    }
    if !(b > 0.0) {
        return Err(Error::InvalidInput(format!("field b must be positive, got {b}")));
    }
    let q = (energy - 1.0) * (energy + 1.0) / b;
    Ok(b.sqrt() * energy * h_z(0.5, q)?.total)
}

/// g(E) by literal summation of the per-level 1/p_z densities.
pub fn density_of_states_levels(energy: f64, b: f64) -> Result<f64> {
    let q = (energy - 1.0) * (energy + 1.0) / b;
    Ok(b.sqrt() * energy * landau_sum(0.5, q)?)
}

/// G(E_F)/V = b^{3/2}ℋ_{−1/2}(p_F²/b): states up to the Fermi energy.
pub fn cumulative_states(pt: &GasPointT0) -> f64 {
    pt.b.powf(1.5) * h_z(-0.5, pt.filling()).map(|h| h.total).unwrap_or(0.0)
}

pub fn number_density(pt: &GasPointT0, method: Method) -> Result<ThermoResult> {
    let b = pt.b;
    let b32 = b.powf(1.5);
    let q = pt.filling();
    let thr = pt.at_threshold();
    match method {
        Method::Quadrature => {
            let h = h_z(-0.5, q)?;
            let err = 8.0 * f64::EPSILON * b32 * (h.monotonic.abs() + h.oscillatory.abs());
            Ok(ThermoResult::new(b32 * h.monotonic, b32 * h.oscillatory, err, method, thr))
        }
        Method::SmallBExpansion | Method::LargeFillingExpansion => {
            let p = pt.p_f();
            let mon = 2.0 / 3.0 * p * pt.p2 + b * b / (24.0 * p);
            let osc = b32 * zeta_frac(-0.5, q)?;
            // dropped: −b^{3/2} ζ̃₃(−1/2, Q) ≈ −b⁴/(1920 p⁵)
            let err = b.powi(4) / (1920.0 * p.powi(5));
            Ok(ThermoResult::new(mon, osc, err, method, thr))
        }
        Method::BruteForce => {
            let v = number_density_levels(pt);
            Ok(ThermoResult::new(v, 0.0, 8.0 * f64::EPSILON * v.abs() * (1.0 + q).sqrt(), method, thr))
        }
        Method::NonRelativistic | Method::Sommerfeld | Method::OscillationSeries => {
            Err(ThermoResult::unsupported("number density", method))
        }
    }
}

// E(b) − E(0): the field-dependent part of the closed-form monotonic terms,
// arranged so that nothing cancels at small b.
fn closed_terms_field_part(pt: &GasPointT0) -> f64 {
    let (eps, b, p) = (pt.eps_f, pt.b, pt.p_f());
    let sb = b.sqrt();
    let s = (b + pt.p2).sqrt();
    let d = b / (s + p);
    let lambda = (d / (eps + p)).ln_1p() - sb.ln_1p();
    b * b / 12.0 * pt.acosh_eps() + 0.5 * (1.0 - b + b * b / 6.0) * lambda - 0.5 * eps * d + 0.5 * sb
        + eps * d * (s * s + s * p + pt.p2) / 3.0
        - b * sb / 3.0
        - 0.5 * b * p * eps
}

// E(0) = ½ acosh ε + ⅓ ε p³ − ½ ε p, minus the b → 0 grand potential.
fn closed_terms_zero_field(pt: &GasPointT0) -> f64 {
    let (eps, p) = (pt.eps_f, pt.p_f());
    0.5 * pt.acosh_eps() + eps * p * pt.p2 / 3.0 - 0.5 * eps * p
}

// dE/db, arranged to vanish cleanly as b → 0.
fn closed_terms_db(pt: &GasPointT0) -> f64 {
    let (eps, b, p) = (pt.eps_f, pt.b, pt.p_f());
    let sb = b.sqrt();
    let s = (b + pt.p2).sqrt();
    let d = b / (s + p);
    let lambda = (d / (eps + p)).ln_1p() - sb.ln_1p();
    let l = pt.acosh_eps() + lambda;
    b / 6.0 * l - 0.5 * lambda + (1.0 - b + b * b / 6.0) / (4.0 * s * (eps + s))
        + (1.0 + sb - b * sb / 6.0) / (4.0 * (1.0 + sb))
        - eps / (4.0 * s)
        + 0.5 * eps * d
        - 0.5 * sb
}

fn zeta3_residual(q: f64) -> f64 {
    subtracted_zeta(3, -0.5, q + 1.0, &ZetaEngineConfig::DEFAULT).unwrap_or(f64::NAN)
}

// ∫₀^top ζ̃₃(−1/2, q+1) w(q) dq, top possibly infinite.
fn residual_integral<W: Fn(f64) -> f64>(top: f64, w: W) -> Result<(f64, f64)> {
    let bps = geometric_breakpoints(if top.is_finite() { top } else { 1e12 });
    // ζ̃₃ carries ~1e-13 absolute rounding below the asymptotic cutover
    let sp = spec(1e-13, 1e-10).with_breakpoints(bps);
    let r = integrate(|q| zeta3_residual(q) * w(q), 0.0, top, &sp)?;
    Ok((r.value, r.abs_error))
}

/// ω^(mon) by the exact closed form plus the ζ̃₃ residual integral, split as
/// (value at b = 0, field part, error).
fn omega_mon_quadrature(pt: &GasPointT0) -> Result<(f64, f64, f64)> {
    let b = pt.b;
    let (ires, err) = residual_integral(pt.filling(), |q| (1.0 + b * q).powf(-0.5))?;
    let b52 = b * b * b.sqrt();
    let zero = -closed_terms_zero_field(pt);
    let field = -closed_terms_field_part(pt) + b52 * ires;
    Ok((zero, field, b52 * err + 4.0 * f64::EPSILON * (zero.abs() + field.abs())))
}

fn omega_osc_quadrature(pt: &GasPointT0) -> Result<(f64, f64)> {
    let b = pt.b;
    let b52 = b * b * b.sqrt();
    let (v, e) = oscillatory_integral(-0.5, 0.5, b, pt.filling())?;
    Ok((-b52 * v, b52 * e))
}

/// Per-b constants of the large-filling expansion:
/// J(b) = ∫₀^∞ ζ̃₃(−1/2,q+1)(1+bq)^{−1/2} dq and K(b) = ∫₀¹ ζ(−1/2,q)ζ(1/2,q+1/b) dq.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LargeFillingConstants {
    pub j: f64,
    pub k: f64,
}

pub fn large_filling_constants(b: f64) -> Result<LargeFillingConstants> {
    static CACHE: OnceLock<RwLock<HashMap<u64, LargeFillingConstants>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    let key = b.to_bits();
    if let Some(c) = cache.read().expect("cache lock poisoned").get(&key) {
        return Ok(*c);
    }
    let (j, _) = residual_integral(f64::INFINITY, |q| (1.0 + b * q).powf(-0.5))?;
    let inv_b = 1.0 / b;
    let (k, _) = integrate_zeta_weighted(-0.5, 1.0, |t| zeta_f64(0.5, t + inv_b), 1e-14)?;
    let c = LargeFillingConstants { j, k };
    cache.write().expect("cache lock poisoned").entry(key).or_insert(c);
    Ok(c)
}

fn omega_brute(pt: &GasPointT0) -> (f64, f64) {
    let (eps, b) = (pt.eps_f, pt.b);
    let top = pt.highest_level();
    let mut sum = 0.0;
    let mut scale = 0.0;
    for j in (0..=top).rev() {
        let m2 = 1.0 + b * j as f64;
        let pj2 = pt.p2 - b * j as f64;
        if pj2 <= 0.0 {
            continue;
        }
        let pj = pj2.sqrt();
        let g = if j == 0 { 1.0 } else { 2.0 };
        let t = b * g * (0.5 * m2 * (pj / m2.sqrt()).asinh() - 0.5 * eps * pj);
        sum += t;
        scale += t.abs();
    }
    (sum, 4.0 * f64::EPSILON * scale)
}

// −∂/∂b of the level sum, term by term: each level contributes
// −g_j[½M_j² asinh(p_j/M_j) − ½εp_j + ½bj asinh(p_j/M_j)].
fn magnetization_brute(pt: &GasPointT0) -> (f64, f64) {
    let (eps, b) = (pt.eps_f, pt.b);
    let mut sum = 0.0;
    let mut scale = 0.0;
    for j in (0..=pt.highest_level()).rev() {
        let jf = j as f64;
        let m2 = 1.0 + b * jf;
        let pj2 = pt.p2 - b * jf;
        if pj2 <= 0.0 {
            continue;
        }
        let pj = pj2.sqrt();
        let g = if j == 0 { 1.0 } else { 2.0 };
        let ash = (pj / m2.sqrt()).asinh();
        let t = -g * (0.5 * (m2 + b * jf) * ash - 0.5 * eps * pj);
        sum += t;
        scale += t.abs();
    }
    (sum, 4.0 * f64::EPSILON * scale)
}

fn energy_brute(pt: &GasPointT0) -> (f64, f64) {
    let (eps, b) = (pt.eps_f, pt.b);
    let top = pt.highest_level();
    let mut sum = 0.0;
    for j in (0..=top).rev() {
        let m2 = 1.0 + b * j as f64;
        let pj2 = pt.p2 - b * j as f64;
        if pj2 <= 0.0 {
            continue;
        }
        let pj = pj2.sqrt();
        let g = if j == 0 { 1.0 } else { 2.0 };
        sum += b * g * 0.5 * (pj * eps + m2 * (pj / m2.sqrt()).asinh());
    }
    (sum, 4.0 * f64::EPSILON * sum.abs())
}

// Coefficient of b⁴ in ω beyond the small-b expansion, used as its error
// estimate.
fn small_b_omega_next_order(pt: &GasPointT0) -> f64 {
    let (eps, b, p) = (pt.eps_f, pt.b, pt.p_f());
    let mon = b.powi(4) * eps * (2.0 * pt.p2 - 1.0).abs() / (2880.0 * p.powi(3));
    let osc = 2.0 / 35.0 * b.powf(4.5) / eps.powi(5) * 0.05;
    mon + osc
}

pub fn grand_potential(pt: &GasPointT0, method: Method) -> Result<ThermoResult> {
    let thr = pt.at_threshold();
    let (eps, b) = (pt.eps_f, pt.b);
    match method {
        Method::Quadrature => {
            let (zero, field, e1) = omega_mon_quadrature(pt)?;
            let (osc, e2) = omega_osc_quadrature(pt)?;
            Ok(ThermoResult::new(zero + field, osc, e1 + e2, method, thr))
        }
        Method::SmallBExpansion => {
            let q = pt.filling();
            let a = pt.acosh_eps();
            let mon = -(closed_terms_zero_field(pt) + b * b / 12.0 * a);
            let osc = -(2.0 / 3.0 * b.powf(2.5) / eps * zeta_frac(-1.5, q)?
                + 2.0 / 15.0 * b.powf(3.5) / eps.powi(3) * zeta_frac(-2.5, q)?);
            Ok(ThermoResult::new(mon, osc, small_b_omega_next_order(pt), method, thr))
        }
        Method::LargeFillingExpansion => {
            let q = pt.filling();
            let c = large_filling_constants(b)?;
            let b52 = b * b * b.sqrt();
            let mon = -closed_terms_zero_field(pt) - closed_terms_field_part(pt) + b52 * c.j
                - b.powi(4) / (3840.0 * eps.powi(4));
            let osc = -(2.0 / 3.0 * b52 / eps * zeta_frac(-1.5, q)?
                + 2.0 / 15.0 * b.powf(3.5) / eps.powi(3) * zeta_frac(-2.5, q)?
                + b * b * c.k);
            let err = b.powf(4.5) / eps.powi(5) + b.powi(4) / pt.p2.powi(2) * 1e-3;
            Ok(ThermoResult::new(mon, osc, err, method, thr))
        }
        Method::BruteForce => {
            let (v, e) = omega_brute(pt);
            Ok(ThermoResult::new(v, 0.0, e, method, thr))
        }
        Method::NonRelativistic => {
            let h = h_z(-1.5, pt.filling())?;
            let pref = -2.0 / 3.0 * b.powf(2.5);
            Ok(ThermoResult::new(pref * h.monotonic, pref * h.oscillatory, 0.0, method, thr))
        }
        Method::Sommerfeld | Method::OscillationSeries => Err(ThermoResult::unsupported("grand potential", method)),
    }
}

/// ω(ε_F, b) − ω(ε_F, 0), computed without forming the two large terms.
/// Supports quadrature and the small-b expansion.
pub fn grand_potential_field_part(pt: &GasPointT0, method: Method) -> Result<ThermoResult> {
    let thr = pt.at_threshold();
    match method {
        Method::Quadrature => {
            let (_, field, e1) = omega_mon_quadrature(pt)?;
            let (osc, e2) = omega_osc_quadrature(pt)?;
            let e1 = e1.min(4.0 * f64::EPSILON * field.abs() + e2);
            Ok(ThermoResult::new(field, osc, e1 + e2, method, thr))
        }
        Method::SmallBExpansion => {
            let full = grand_potential(pt, method)?;
            let mon = -pt.b * pt.b / 12.0 * pt.acosh_eps();
            Ok(ThermoResult { value: mon + full.oscillatory, monotonic: mon, ..full })
        }
        _ => Err(ThermoResult::unsupported("field part of the grand potential", method)),
    }
}

/// Grand potential of the non-relativistic gas, −(2/3) b^{5/2} ℋ_{−3/2}(p_F²/b)
/// with p_F² = 2μ_nr, in units m⁴/4π².
pub fn nonrelativistic_grand_potential(mu_nr: f64, b: f64) -> Result<ThermoResult> {
    if !(mu_nr > 0.0) || !(b > 0.0) {
        return Err(Error::InvalidInput(format!("need mu_nr > 0 and b > 0, got {mu_nr}, {b}")));
    }
    let q = 2.0 * mu_nr / b;
    let h = h_z(-1.5, q)?;
    let pref = -2.0 / 3.0 * b.powf(2.5);
    Ok(ThermoResult::new(pref * h.monotonic, pref * h.oscillatory, 0.0, Method::NonRelativistic, is_integral(q)))
}

pub fn energy_density(pt: &GasPointT0, method: Method) -> Result<ThermoResult> {
    let eps = pt.eps_f;
    match method {
        Method::Quadrature | Method::LargeFillingExpansion => {
            let w = grand_potential(pt, method)?;
            let n = number_density(pt, method)?;
            Ok(ThermoResult::new(
                w.monotonic + 2.0 * eps * n.monotonic,
                w.oscillatory + 2.0 * eps * n.oscillatory,
                w.abs_error_estimate + 2.0 * eps * n.abs_error_estimate,
                method,
                pt.at_threshold(),
            ))
        }
        Method::SmallBExpansion => {
            let (b, p) = (pt.b, pt.p_f());
            let q = pt.filling();
            let a = pt.acosh_eps();
            let mon = eps * p * pt.p2 + 0.5 * eps * p - 0.5 * a + b * b / 12.0 * eps / p - b * b / 12.0 * a;
            let osc = 2.0 * b.powf(1.5) * eps * zeta_frac(-0.5, q)?
                - 2.0 / 3.0 * b.powf(2.5) / eps * zeta_frac(-1.5, q)?
                - 2.0 / 15.0 * b.powf(3.5) / eps.powi(3) * zeta_frac(-2.5, q)?;
            let err = small_b_omega_next_order(pt) + 2.0 * eps * b.powi(4) / (1920.0 * p.powi(5));
            Ok(ThermoResult::new(mon, osc, err, method, pt.at_threshold()))
        }
        Method::BruteForce => {
            let (v, e) = energy_brute(pt);
            Ok(ThermoResult::new(v, 0.0, e, method, pt.at_threshold()))
        }
        _ => Err(ThermoResult::unsupported("energy density", method)),
    }
}

fn magnetization_mon_quadrature(pt: &GasPointT0) -> Result<(f64, f64)> {
    // M^(mon) = −∂ω^(mon)/∂b with ω^(mon) = −E(b) + b^{5/2} ∫₀^Q ζ̃₃(q+1)(1+bq)^{−1/2}
    let b = pt.b;
    let q = pt.filling();
    let (i_half, e1) = residual_integral(q, |x| (1.0 + b * x).powf(-0.5))?;
    let (i_q, e2) = residual_integral(q, |x| x * (1.0 + b * x).powf(-1.5))?;
    let boundary = zeta3_residual(q) / pt.eps_f * (-q / b);
    let b32 = b * b.sqrt();
    let b52 = b * b32;
    let d_ires = boundary - 0.5 * i_q;
    let v = closed_terms_db(pt) - 2.5 * b32 * i_half - b52 * d_ires;
    Ok((v, 2.5 * b32 * e1 + 0.5 * b52 * e2 + 16.0 * f64::EPSILON * v.abs().max(b)))
}

fn magnetization_osc_quadrature(pt: &GasPointT0) -> Result<(f64, f64)> {
    let b = pt.b;
    let q = pt.filling();
    let (a_half, e1) = oscillatory_integral(-0.5, 0.5, b, q)?;
    let (a_3half, e2) = oscillatory_integral(-0.5, 1.5, b, q)?;
    let b32 = b * b.sqrt();
    let boundary = b.sqrt() * pt.p2 / pt.eps_f * zeta_frac(-0.5, q)?;
    let v = b32 * (2.0 * a_half + 0.5 * a_3half) - boundary;
    Ok((v, b32 * (2.0 * e1 + 0.5 * e2) + 8.0 * f64::EPSILON * boundary.abs()))
}

pub fn magnetization(pt: &GasPointT0, method: Method) -> Result<ThermoResult> {
    let thr = pt.at_threshold();
    let (eps, b) = (pt.eps_f, pt.b);
    match method {
        Method::Quadrature => {
            let (mon, e1) = magnetization_mon_quadrature(pt)?;
            let (osc, e2) = magnetization_osc_quadrature(pt)?;
            Ok(ThermoResult::new(mon, osc, e1 + e2, method, thr))
        }
        Method::SmallBExpansion => {
            let q = pt.filling();
            let mon = b / 6.0 * pt.acosh_eps();
            let osc = -b.sqrt() * pt.p2 / eps * zeta_frac(-0.5, q)?
                + b.powf(1.5) / 3.0 * (4.0 * eps * eps + 1.0) / eps.powi(3) * zeta_frac(-1.5, q)?
                + b.powf(2.5) / 15.0 * (4.0 * eps * eps + 3.0) / eps.powi(5) * zeta_frac(-2.5, q)?;
            let err = 4.0 * b.powi(3) * eps * (2.0 * pt.p2 - 1.0).abs() / (2880.0 * pt.p_f().powi(3))
                + b.powf(3.5) * pt.p2 / eps.powi(7) * 0.05;
            Ok(ThermoResult::new(mon, osc, err, method, thr))
        }
        Method::BruteForce => {
            let (v, e) = magnetization_brute(pt);
            Ok(ThermoResult::new(v, 0.0, e, method, thr))
        }
        _ => Err(ThermoResult::unsupported("magnetization", method)),
    }
}

/// Extrema of ζ(−1/2, x) over one period x ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodExtrema {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
}

/// Located once by a dense scan plus golden-section refinement. The minimum
/// sits at the period ends (ζ(−1/2) ≈ −0.2079); the maximum is interior,
/// where ζ(1/2, x) = 0.
pub fn zeta_minus_half_extrema() -> PeriodExtrema {
    static EXT: OnceLock<PeriodExtrema> = OnceLock::new();
    *EXT.get_or_init(|| {
        let f = |x: f64| zeta_f64(-0.5, x.max(0.0));
        let n = 200;
        let (mut imax, mut imin) = (0, 0);
        let vals: Vec<f64> = (0..=n).map(|i| f(i as f64 / n as f64)).collect();
        for i in 0..=n {
            if vals[i] > vals[imax] {
                imax = i;
            }
            if vals[i] < vals[imin] {
                imin = i;
            }
        }
        let refine = |i: usize, sign: f64| -> (f64, f64) {
            let lo = (i.saturating_sub(1)) as f64 / n as f64;
            let hi = ((i + 1).min(n)) as f64 / n as f64;
            let (x, v) = golden_section(|x| sign * f(x), lo, hi, 1e-12);
            (x, sign * v)
        };
        let (argmax, max) = refine(imax, 1.0);
        let (argmin, min) = refine(imin, -1.0);
        PeriodExtrema { min, argmin, max, argmax }
    })
}

// Maximizer of f on [a, b].
fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let cands = [(a, f(a)), (b, f(b)), (0.5 * (a + b), f(0.5 * (a + b)))];
    cands.into_iter().fold((a, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Envelope {
    pub lower: f64,
    pub upper: f64,
}

/// Envelope of M₀: the leading oscillatory term −b^{1/2}(p_F²/ε_F)ζ(−1/2,{p_F²/b})
/// with ζ replaced by its period extrema, plus the monotonic (b/6)acosh ε_F.
pub fn magnetization_envelope_t0(eps_f: f64, b: f64) -> Result<Envelope> {
    let pt = GasPointT0::new(eps_f, b)?;
    let ext = zeta_minus_half_extrema();
    let mon = b / 6.0 * pt.acosh_eps();
    let amp = b.sqrt() * pt.p2 / eps_f;
    Ok(Envelope { lower: mon - amp * ext.max, upper: mon - amp * ext.min })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityInversion {
    pub eps_f: f64,
    /// The solution lies within the inversion tolerance of a Landau threshold,
    /// where n rises with infinite slope; `eps_f` is the lower bracket.
    pub near_threshold: bool,
    pub iterations: usize,
}

/// Fermi energy whose density n₀(ε_F, b) equals `n` (units m³/2π²).
pub fn fermi_energy_from_density(n: f64, b: f64) -> Result<DensityInversion> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidInput(format!("density must be positive, got {n}")));
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::InvalidInput(format!("field b must be positive, got {b}")));
    }
    // bisection in p² (monotone, continuous)
    let dens = |p2: f64| b.powf(1.5) * h_z(-0.5, p2 / b).map(|h| h.total).unwrap_or(f64::NAN);
    let mut hi = (1.5 * n).powf(2.0 / 3.0).max(b);
    while dens(hi) < n {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    let mut it = 0;
    while hi - lo > 1e-15 * hi && it < 400 {
        let mid = 0.5 * (lo + hi);
        if dens(mid) < n {
            lo = mid;
        } else {
            hi = mid;
        }
        it += 1;
    }
    let p2 = if (dens(hi) - n).abs() <= (dens(lo) - n).abs() { hi } else { lo };
    let near = (lo / b).floor() != (hi / b).floor() || (p2 / b - (p2 / b).round()).abs() < 1e-9 * (p2 / b).max(1.0);
    let p2 = if near { lo } else { p2 };
    Ok(DensityInversion { eps_f: (1.0 + p2).sqrt(), near_threshold: near, iterations: it })
}

/// The l-th term of the binomial (effective action) series,
/// 2b²(b/ε_F²)^{l+1/2}[ζ(−l−3/2,{Q}) − ζ(−l−3/2,Q)]/((2l+1)(2l+3)).
pub fn effective_action_term(pt: &GasPointT0, l: usize) -> Result<f64> {
    let (eps, b) = (pt.eps_f, pt.b);
    let q = pt.filling();
    let z = -(l as f64) - 1.5;
    let lf = l as f64;
    let coef = 2.0 * b * b * (b / (eps * eps)).powf(lf + 0.5) / ((2.0 * lf + 1.0) * (2.0 * lf + 3.0));
    Ok(coef * (zeta_frac(z, q)? - zeta(z, q)?))
}

/// Truncated small-field effective action ΔS (units m⁴/4π²):
/// (b/2)(ε_F p_F − acosh ε_F) plus the binomial series through `l_max`.
/// Equals −ω₀ when the series converges, which needs p_F² < 1.
pub fn effective_action_series_check(pt: &GasPointT0, l_max: usize) -> Result<f64> {
    if pt.p2 >= 1.0 {
        return Err(Error::Domain(format!("binomial series needs p_F^2 < 1, got {}", pt.p2)));
    }
    let mut s = 0.5 * pt.b * (pt.eps_f * pt.p_f() - pt.acosh_eps());
    for l in 0..=l_max {
        s += effective_action_term(pt, l)?;
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Cold,
    ColdSmallField,
    Warm,
    Nondegenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RegimeLabel {
    pub regime: Regime,
    /// eB/E_F = b/(2ε_F)
    pub landau_spacing: f64,
    /// T_F = ε_F − 1
    pub fermi_temperature: f64,
}

impl RegimeLabel {
    pub fn is_cold(&self) -> bool {
        matches!(self.regime, Regime::Cold | Regime::ColdSmallField)
    }
}

pub const DEFAULT_RATIO_THRESHOLD: f64 = 0.1;

/// `x ≪ y` is read as `x < ratio·y`. Temperatures between ratio·spacing and
/// the spacing count as warm.
pub fn regime_classify(pt: &GasPointT0, t: f64, ratio: f64) -> Result<RegimeLabel> {
    if !(t >= 0.0) || !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidInput(format!("need T >= 0 and 0 < ratio <= 1, got {t}, {ratio}")));
    }
    let spacing = pt.b / (2.0 * pt.eps_f);
    let tf = pt.eps_f - 1.0;
    let regime = if t >= ratio * tf {
        Regime::Nondegenerate
    } else if t < ratio * spacing {
        if spacing < ratio * tf {
            Regime::ColdSmallField
        } else {
            Regime::Cold
        }
    } else {
        Regime::Warm
    };
    Ok(RegimeLabel { regime, landau_spacing: spacing, fermi_temperature: tf })
}

/// Free-gas grand potential −(½acosh ε + ⅓εp³ − ½εp), the b → 0 limit.
pub fn free_grand_potential(eps_f: f64) -> f64 {
    let p = ((eps_f - 1.0) * (eps_f + 1.0)).sqrt();
    -(0.5 * (eps_f + p).ln() + eps_f * p * p * p / 3.0 - 0.5 * eps_f * p)
}

/// ∫₀¹ qᵏ ζ(−1/2, q) dq by quadrature.
pub fn zeta_minus_half_moment(k: i32) -> Result<f64> {
    integrate_zeta_weighted(-0.5, 1.0, |t| t.powi(k), 1e-15).map(|r| r.0)
}

/// (∫₀^∞ ζ̃₃(−1/2,q+1) dq, ∫₀^∞ q ζ̃₃(−1/2,q+1) dq) by quadrature.
pub fn residual_constants() -> Result<(f64, f64)> {
    let (c0, _) = residual_integral(f64::INFINITY, |_| 1.0)?;
    let (c1, _) = residual_integral(f64::INFINITY, |q| q)?;
    Ok((c0, c1))
}
