//! Finite temperature: convolution of T = 0 quantities with the Fermi-Dirac
//! hump, the Sommerfeld expansion of the monotonic parts, and the
//! sinh-damped oscillation series.
//!
//! Units follow [`crate::gas_zero_t`]. μ and T are in electron-mass units.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gas_zero_t::{self, GasPointT0, Method, ThermoResult};
use crate::hfamily::{frac, zeta_frac};
use crate::numerics::{find_roots_scan, fourth_diff, integrate, second_diff, sum_with_bound, QuadratureSpec, RootSpec};

/// Fine-structure constant used for e² = 4πα.
pub const FINE_STRUCTURE: f64 = 1.0 / 137.035999;

/// Demagnetizing factor of a uniformly magnetized sphere.
pub const GAMMA_SPHERE: f64 = 3.0 / (8.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasPointT {
    mu: f64,
    t: f64,
    b: f64,
}

impl GasPointT {
    pub fn new(mu: f64, t: f64, b: f64) -> Result<Self> {
        if !(mu > 1.0) || !mu.is_finite() {
            return Err(Error::InvalidInput(format!("chemical potential must exceed 1, got {mu}")));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidInput(format!("temperature must be positive, got {t}")));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::InvalidInput(format!("field b must be positive, got {b}")));
        }
        Ok(Self { mu, t, b })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p_f2(&self) -> f64 {
        (self.mu - 1.0) * (self.mu + 1.0)
    }

    pub fn filling(&self) -> f64 {
        self.p_f2() / self.b
    }

    /// T < μ − 1
    pub fn is_degenerate(&self) -> bool {
        self.t < self.mu - 1.0
    }

    /// μT/b, the argument controlling the oscillation damping.
    pub fn damping_ratio(&self) -> f64 {
        self.mu * self.t / self.b
    }

    pub fn at_zero_temperature(&self) -> Result<GasPointT0> {
        GasPointT0::new(self.mu, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscSeriesSpec {
    pub n_max: usize,
    /// Tail tolerance relative to the series prefactor.
    pub tail_tol: f64,
}

impl Default for OscSeriesSpec {
    fn default() -> Self {
        Self { n_max: 10_000_000, tail_tol: 1e-14 }
    }
}

/// eˣ/(eˣ+1)², evaluated as 1/(4cosh²(x/2)).
pub fn hump(x: f64) -> f64 {
    let c = (0.5 * x).cosh();
    if c.is_infinite() {
        return 0.0;
    }
    0.25 / (c * c)
}

/// ∫ x^n h(x) dx over the real line: π^n |(2^n − 2)B_n| for even n, 0 for odd.
pub fn hump_moment(n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let bn = crate::hurwitz::bernoulli_number(n)?;
    Ok(PI.powi(n as i32) * ((2f64.powi(n as i32) - 2.0) * bn).abs())
}

/// Half-width X of the convolution window, where h(X) drops below `tail_tol`.
pub fn hump_window(tail_tol: f64) -> f64 {
    2.0 * (2.0 / tail_tol).ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionSpec {
    pub tail_tol: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// When set, (ε²−1)/b crossing an integer inside the window becomes a
    /// breakpoint.
    pub landau_b: Option<f64>,
}

impl Default for ConvolutionSpec {
    fn default() -> Self {
        Self { tail_tol: 1e-16, abs_tol: 1e-14, rel_tol: 1e-11, landau_b: None }
    }
}

impl ConvolutionSpec {
    pub fn for_field(b: f64) -> Self {
        Self { landau_b: Some(b), ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convolution {
    pub value: f64,
    pub abs_error: f64,
    /// T ≥ μ − 1: the lower limit was not replaced and the whole range
    /// ε ∈ (1, μ + XT) was integrated.
    pub nondegenerate: bool,
}

fn threshold_breakpoints(mu: f64, t: f64, b: f64, lo: f64, hi: f64) -> Vec<f64> {
    let e_lo = (mu + t * lo).max(1.0);
    let e_hi = mu + t * hi;
    let k_lo = ((e_lo * e_lo - 1.0) / b).ceil().max(1.0) as usize;
    let k_hi = ((e_hi * e_hi - 1.0) / b).floor() as usize;
    if k_hi < k_lo || k_hi - k_lo > 200_000 {
        return Vec::new();
    }
    (k_lo..=k_hi).map(|k| ((1.0 + b * k as f64).sqrt() - mu) / t).filter(|&x| x > lo && x < hi).collect()
}

/// ∫ q0(μ + Tx) h(x) dx over x ∈ (−(μ−1)/T, ∞), truncated to |x| < X.
pub fn convolve_from_t0<F: Fn(f64) -> f64>(q0: F, pt: &GasPointT, spec: &ConvolutionSpec) -> Result<Convolution> {
    let x_win = hump_window(spec.tail_tol);
    let lower = -(pt.mu - 1.0) / pt.t;
    let nondegenerate = lower > -x_win;
    let lo = lower.max(-x_win);
    let hi = x_win;
    let mut bps = vec![0.0];
    if let Some(b) = spec.landau_b {
        bps.extend(threshold_breakpoints(pt.mu, pt.t, b, lo, hi));
    }
    let qs = QuadratureSpec::new(spec.abs_tol, spec.rel_tol).with_breakpoints(bps).with_max_subdivisions(200_000);
    let r = integrate(|x| q0(pt.mu + pt.t * x) * hump(x), lo, hi, &qs)?;
    Ok(Convolution { value: r.value, abs_error: r.abs_error, nondegenerate })
}

/// q0 + (π²/6)T²q0'' + (7π⁴/360)T⁴q0⁗.
pub fn sommerfeld_from_derivatives(q0: f64, d2: f64, d4: f64, t: f64) -> f64 {
    let t2 = t * t;
    q0 + PI * PI / 6.0 * t2 * d2 + 7.0 * PI.powi(4) / 360.0 * t2 * t2 * d4
}

/// Sommerfeld expansion with the derivatives of `q0` at μ taken by finite
/// differences of step `h`. Meant for smooth (monotonic) parts only.
pub fn sommerfeld_expansion<F: Fn(f64) -> f64>(q0: F, pt: &GasPointT, h: f64) -> f64 {
    let h = h.min(0.25 * (pt.mu - 1.0));
    sommerfeld_from_derivatives(q0(pt.mu), second_diff(&q0, pt.mu, h), fourth_diff(&q0, pt.mu, 2.0 * h), pt.t)
}

fn default_fd_step(mu: f64) -> f64 {
    1e-2 * mu.max(1.0)
}

fn series_prefactor_terms(c: f64, spec: &OscSeriesSpec) -> Result<()> {
    if !(spec.tail_tol > 0.0) || spec.n_max == 0 {
        return Err(Error::InvalidInput("oscillation series needs n_max >= 1 and tail_tol > 0".into()));
    }
    let needed = (2.0 / spec.tail_tol).ln() / c;
    if needed > spec.n_max as f64 {
        return Err(Error::Truncation { terms: spec.n_max, partial: f64::NAN });
    }
    Ok(())
}

/// Σ_n w(n) f(n)/sinh(cn) with |w(n)| ≤ 1, stopped when the bound
/// 2e^{−cn}/(√n(1−e^{−c})) on the tail drops below tail_tol.
/// At least three terms are always summed.
fn damped_series<F: Fn(usize) -> f64>(f: F, c: f64, spec: &OscSeriesSpec) -> Result<f64> {
    series_prefactor_terms(c, spec)?;
    let geom = 1.0 / (-(-c).exp_m1());
    let bound = |n: usize| {
        if n <= 3 {
            f64::INFINITY
        } else {
            2.0 * (-c * n as f64).exp() * geom / (n as f64).sqrt()
        }
    };
    Ok(sum_with_bound(|n| f(n) / (c * n as f64).sinh(), bound, spec.tail_tol, spec.n_max)?.value)
}

/// I_z(α, β) = ∫ζ(z,{α+βx}) h(x) dx by its Fourier series
/// (2π)^{z+1}Γ(1−z)β Σ n^z sin(2πnα + zπ/2)/sinh(2π²βn).
pub fn i_z_fourier(z: f64, alpha: f64, beta: f64, spec: &OscSeriesSpec) -> Result<f64> {
    if !(z < 0.0) || !(beta > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("I_z needs z < 0 and beta > 0, got z={z}, beta={beta}")));
    }
    let a = frac(alpha);
    let c = 2.0 * PI * PI * beta;
    let pref = (2.0 * PI).powf(z + 1.0) * libm::tgamma(1.0 - z) * beta;
    let s = damped_series(|n| (n as f64).powf(z) * (2.0 * PI * n as f64 * a + 0.5 * z * PI).sin(), c, spec)?;
    Ok(pref * s)
}

/// I_z(α, β) by direct quadrature over |x| < 40 with the period crossings as
/// breakpoints. Efficient when β is small.
pub fn i_z_quadrature(z: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(z < 0.0) || !(beta > 0.0) {
        return Err(Error::Domain(format!("I_z needs z < 0 and beta > 0, got z={z}, beta={beta}")));
    }
    let x_win = 40.0;
    let a = frac(alpha);
    let k_lo = (a - beta * x_win).ceil() as i64;
    let k_hi = (a + beta * x_win).floor() as i64;
    if k_hi - k_lo > 100_000 {
        return Err(Error::InvalidInput(format!("beta = {beta} too large for direct quadrature")));
    }
    let bps: Vec<f64> = (k_lo..=k_hi).map(|k| (k as f64 - a) / beta).collect();
    let qs = QuadratureSpec::new(1e-14, 1e-11).with_breakpoints(bps).with_max_subdivisions(400_000);
    let r = integrate(
        |x| {
            let v = a + beta * x;
            let f = frac(v);
            // the cusp of ζ(z, ·) at 0 is integrable; t = 0 means the limit 1⁻
            let f = if f == 0.0 { 1.0 } else { f };
            crate::hurwitz::zeta(z, f).unwrap_or(f64::NAN) * hump(x)
        },
        -x_win,
        x_win,
        &qs,
    )?;
    Ok(r.value)
}

/// I_z(α, β) by whichever representation converges fastest.
pub fn i_z(z: f64, alpha: f64, beta: f64, spec: &OscSeriesSpec) -> Result<f64> {
    if beta >= 0.05 {
        i_z_fourier(z, alpha, beta, spec)
    } else {
        i_z_quadrature(z, alpha, beta)
    }
}

fn osc_beta(pt: &GasPointT) -> f64 {
    2.0 * pt.mu * pt.t / pt.b
}

/// Leading oscillatory grand potential at finite T,
/// (T/√2) b^{3/2} Σ cos(2πn p_F²/b − π/4)/(n^{3/2} sinh(4π²nμT/b)).
///
/// The T²x² term of the expanded phase is dropped, an O((T/μ)²) model error.
pub fn omega_osc_finite_t(pt: &GasPointT, spec: &OscSeriesSpec) -> Result<f64> {
    let beta = osc_beta(pt);
    let b = pt.b;
    if beta < 0.05 {
        return Ok(-2.0 / 3.0 * b.powf(2.5) / pt.mu * i_z_quadrature(-1.5, pt.filling(), beta)?);
    }
    let theta = 2.0 * PI * frac(pt.filling());
    let s = damped_series(
        |n| (theta * n as f64 - 0.25 * PI).cos() / (n as f64).powf(1.5),
        2.0 * PI * PI * beta,
        spec,
    )?;
    Ok(pt.t / 2f64.sqrt() * b.powf(1.5) * s)
}

/// The two leading oscillatory terms of the T = 0 grand potential,
/// −(2/3)(b^{5/2}/ε)ζ(−3/2,{Q}) − (2/15)(b^{7/2}/ε³)ζ(−5/2,{Q}).
fn omega_osc_small_b(e: f64, b: f64) -> Result<f64> {
    let q = (e - 1.0) * (e + 1.0) / b;
    Ok(-(2.0 / 3.0 * b.powf(2.5) / e * zeta_frac(-1.5, q)? + 2.0 / 15.0 * b.powf(3.5) / e.powi(3) * zeta_frac(-2.5, q)?))
}

/// The T = 0 grand potential with its two leading oscillatory terms removed,
/// as a function of ε_F at fixed b. What is left oscillates only at
/// O(b^{9/2}) and is treated as smooth.
pub fn omega_smooth_t0(b: f64) -> impl Fn(f64) -> f64 {
    move |e: f64| {
        GasPointT0::new(e, b)
            .and_then(|p| gas_zero_t::grand_potential(&p, Method::Quadrature))
            .and_then(|r| Ok(r.value - omega_osc_small_b(e, b)?))
            .unwrap_or(f64::NAN)
    }
}

/// Grand potential at finite T: Sommerfeld on the smooth part plus the two
/// leading oscillatory terms, each hump-averaged through I_z.
pub fn grand_potential_finite_t(pt: &GasPointT, spec: &OscSeriesSpec) -> Result<ThermoResult> {
    let b = pt.b;
    let mon = sommerfeld_expansion(omega_smooth_t0(b), pt, default_fd_step(pt.mu));
    if !mon.is_finite() {
        return Err(Error::NonFinite { x: pt.mu });
    }
    let (alpha, beta) = (pt.filling(), osc_beta(pt));
    let osc = -(2.0 / 3.0 * b.powf(2.5) / pt.mu * i_z(-1.5, alpha, beta, spec)?
        + 2.0 / 15.0 * b.powf(3.5) / pt.mu.powi(3) * i_z(-2.5, alpha, beta, spec)?);
    let t = pt.t;
    // first omitted: T⁶ Sommerfeld term and the (T/μ) prefactor drift of the oscillation
    let err = (31.0 * PI.powi(6) / 15120.0) * t.powi(6) * pt.mu / pt.p_f2().powf(2.5) * pt.mu.powi(2)
        + osc.abs() * (t / pt.mu).max((t / pt.mu).powi(2));
    Ok(ThermoResult::new(mon, osc, err, Method::OscillationSeries, false))
}

/// (b/6)[acosh μ − (π²/6)(μ/p_F³)T² − (7π⁴/60)μ(μ²+3/2)/p_F⁷ T⁴]
pub fn magnetization_mon_finite_t(pt: &GasPointT) -> f64 {
    let (mu, t) = (pt.mu, pt.t);
    let p2 = pt.p_f2();
    let p = p2.sqrt();
    let acosh = (mu + p).ln();
    pt.b / 6.0
        * (acosh - PI * PI / 6.0 * mu / (p * p2) * t * t
            - 7.0 * PI.powi(4) / 60.0 * mu * (mu * mu + 1.5) / p.powi(7) * t.powi(4))
}

/// −2π(p_F²T/√(2b)) Σ sin(2πn p_F²/b − π/4)/(√n sinh(4π²nμT/b)), units e·m²/2π².
pub fn magnetization_osc_finite_t(pt: &GasPointT, spec: &OscSeriesSpec) -> Result<f64> {
    let beta = osc_beta(pt);
    let p2 = pt.p_f2();
    if beta < 0.05 {
        return Ok(-pt.b.sqrt() * p2 / pt.mu * i_z_quadrature(-0.5, pt.filling(), beta)?);
    }
    let theta = 2.0 * PI * frac(pt.filling());
    let s = damped_series(
        |n| (theta * n as f64 - 0.25 * PI).sin() / (n as f64).sqrt(),
        2.0 * PI * PI * beta,
        spec,
    )?;
    Ok(-2.0 * PI * p2 * pt.t / (2.0 * pt.b).sqrt() * s)
}

pub fn magnetization_finite_t(pt: &GasPointT, spec: &OscSeriesSpec) -> Result<ThermoResult> {
    let mon = magnetization_mon_finite_t(pt);
    let osc = magnetization_osc_finite_t(pt, spec)?;
    let (b, mu) = (pt.b, pt.mu);
    // next osc order (b^{3/2}ζ(−3/2) term) and the T⁶ monotonic term
    let err = b.powf(1.5) * (4.0 * mu * mu + 1.0) / (3.0 * mu.powi(3)) * 0.03
        + b / 6.0 * pt.t.powi(6) * mu.powi(5) / pt.p_f2().powf(5.5);
    Ok(ThermoResult::new(mon, osc, err, Method::OscillationSeries, false))
}

/// Landau's non-relativistic oscillatory magnetization at the point's μ:
/// the finite-T series with sinh(4π²nT/b) and amplitude prefactor
/// p_F² → 2μ_nr, μ_nr = μ − 1. The phase keeps 2πn p_F²/b.
pub fn magnetization_nonrel_landau(pt: &GasPointT, spec: &OscSeriesSpec) -> Result<f64> {
    landau_series(2.0 * (pt.mu - 1.0), pt.p_f2(), pt.t, pt.b, spec)
}

/// Landau's formula written purely in the non-relativistic chemical
/// potential: p_F² = 2μ_nr in both amplitude and phase.
pub fn magnetization_landau(mu_nr: f64, t: f64, b: f64, spec: &OscSeriesSpec) -> Result<f64> {
    if !(mu_nr > 0.0) || !(t > 0.0) || !(b > 0.0) {
        return Err(Error::InvalidInput(format!("need mu_nr, T, b > 0, got {mu_nr}, {t}, {b}")));
    }
    landau_series(2.0 * mu_nr, 2.0 * mu_nr, t, b, spec)
}

fn landau_series(amp_p2: f64, phase_p2: f64, t: f64, b: f64, spec: &OscSeriesSpec) -> Result<f64> {
    let c = 4.0 * PI * PI * t / b;
    let theta = 2.0 * PI * frac(phase_p2 / b);
    let s = damped_series(|n| (theta * n as f64 - 0.25 * PI).sin() / (n as f64).sqrt(), c, spec)?;
    Ok(-2.0 * PI * amp_p2 * t / (2.0 * b).sqrt() * s)
}

/// Upper envelope of the oscillatory magnetization,
/// 2π(p_F²T/√(2b)) Σ 1/(√n sinh(4π²nμT/b)).
///
/// Long sums are closed with an integral tail; as T → 0 the value tends to
/// p_F²√b ζ(3/2)/(2√2 π μ).
pub fn oscillation_envelope_t(pt: &GasPointT, spec: &OscSeriesSpec) -> Result<f64> {
    let c = 4.0 * PI * PI * pt.damping_ratio();
    let p2 = pt.p_f2();
    let pref = 2.0 * PI * p2 / (2.0 * pt.b).sqrt();
    // T/sinh(cn) with c ∝ T, written to stay finite as T → 0
    let k = c / pt.t;
    let term = |n: f64| {
        let x = c * n;
        let ratio = if x < 1e-8 { 1.0 / (k * n) } else { pt.t / x.sinh() };
        ratio / n.sqrt()
    };
    let direct = 20_000usize;
    let needed = ((2.0 / spec.tail_tol).ln() / c).ceil();
    if needed <= direct as f64 {
        let mut s = 0.0;
        let mut n = 1usize;
        loop {
            s += term(n as f64);
            if n >= 3 && (-c * n as f64).exp() < spec.tail_tol * (1.0 - (-c).exp()) / 2.0 {
                break;
            }
            n += 1;
        }
        return Ok(pref * s);
    }
    // monotone decreasing summand: midpoint-rule tail from n = direct + 1/2
    let head: f64 = (1..=direct).rev().map(|n| term(n as f64)).sum();
    let tail = integrate(term, direct as f64 + 0.5, f64::INFINITY, &QuadratureSpec::new(1e-300, 1e-13))?.value;
    Ok(pref * (head + tail))
}

/// T → 0 limit of [`oscillation_envelope_t`].
pub fn oscillation_envelope_t0_limit(mu: f64, b: f64) -> f64 {
    let p2 = (mu - 1.0) * (mu + 1.0);
    let zeta_3_2 = crate::hurwitz::zeta(1.5, 1.0).unwrap_or(2.612_375_348_685_488);
    p2 * b.sqrt() * zeta_3_2 / (2.0 * 2f64.sqrt() * PI * mu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelfMagnetizationMode {
    /// M is the monotonic plus oscillatory magnetization.
    Total,
    /// M is the monotonic part plus the oscillation envelope.
    Envelope,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfMagnetizationSpec {
    /// e² in natural units; 4πα by default.
    pub charge_squared: f64,
    /// Scan points per unit change of p_F²/b.
    pub points_per_period: usize,
    pub max_scan: usize,
    pub mode: SelfMagnetizationMode,
    pub series: OscSeriesSpec,
}

impl Default for SelfMagnetizationSpec {
    fn default() -> Self {
        Self {
            charge_squared: 4.0 * PI * FINE_STRUCTURE,
            points_per_period: 24,
            max_scan: 2_000_000,
            mode: SelfMagnetizationMode::Total,
            series: OscSeriesSpec::default(),
        }
    }
}

/// γB expressed in the magnetization unit e·m²/2π²: γbπ²/e².
pub fn self_magnetization_line(gamma: f64, b: f64, charge_squared: f64) -> f64 {
    gamma * b * PI * PI / charge_squared
}

/// Magnetization used by the self-consistency condition.
pub fn self_magnetization_m(mu: f64, t: f64, b: f64, spec: &SelfMagnetizationSpec) -> Result<f64> {
    let pt = GasPointT::new(mu, t, b)?;
    match spec.mode {
        SelfMagnetizationMode::Total => magnetization_finite_t(&pt, &spec.series).map(|r| r.value),
        SelfMagnetizationMode::Envelope => {
            Ok(magnetization_mon_finite_t(&pt) + oscillation_envelope_t(&pt, &spec.series)?)
        }
    }
}

/// All b in the bracket with M(T, μ, b) = γB(b), by a scan uniform in
/// p_F²/b followed by bisection. Roots are returned in increasing b.
pub fn self_magnetization_solve(
    mu: f64,
    t: f64,
    gamma: f64,
    b_bracket: (f64, f64),
    spec: &SelfMagnetizationSpec,
) -> Result<Vec<f64>> {
    let (b_lo, b_hi) = b_bracket;
    if !(b_lo > 0.0) || !(b_hi > b_lo) || !b_hi.is_finite() {
        return Err(Error::Domain(format!("invalid field bracket ({b_lo}, {b_hi})")));
    }
    GasPointT::new(mu, t, b_lo)?;
    let p2 = (mu - 1.0) * (mu + 1.0);
    let (q_lo, q_hi) = (p2 / b_hi, p2 / b_lo);
    let n_scan = (((q_hi - q_lo) * spec.points_per_period as f64).ceil() as usize).clamp(64, spec.max_scan);
    let g = |q: f64| {
        let b = p2 / q;
        self_magnetization_m(mu, t, b, spec).map(|m| m - self_magnetization_line(gamma, b, spec.charge_squared)).unwrap_or(f64::NAN)
    };
    let rs = RootSpec { bracket: (q_lo, q_hi), tol: 1e-13 * q_hi, max_iter: 200 };
    let roots = find_roots_scan(g, n_scan, &rs)?;
    let mut bs: Vec<f64> = roots.iter().filter(|r| !r.discontinuous).map(|r| p2 / r.x).collect();
    bs.sort_by(f64::total_cmp);
    Ok(bs)
}

/// Oscillatory part of the T = 0 number density averaged over the hump,
/// b^{3/2} I_{−1/2}(p_F²/b, 2μT/b).
pub fn number_density_osc_finite_t(pt: &GasPointT, spec: &OscSeriesSpec) -> Result<f64> {
    Ok(pt.b.powf(1.5) * i_z(-0.5, pt.filling(), osc_beta(pt), spec)?)
}

/// T = 0 leading oscillatory grand potential −(2/3)(b^{5/2}/μ)ζ(−3/2,{p_F²/b}).
pub fn omega_osc_leading_t0(mu: f64, b: f64) -> Result<f64> {
    let p2 = (mu - 1.0) * (mu + 1.0);
    Ok(-2.0 / 3.0 * b.powf(2.5) / mu * zeta_frac(-1.5, p2 / b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hump_basics() {
        assert_eq!(hump(0.0), 0.25);
        assert_eq!(hump(50.0), hump(-50.0));
        assert!(hump(2000.0) == 0.0 && hump(-2000.0) == 0.0);
        let x = 3.0f64;
        assert!((hump(x) - x.exp() / (x.exp() + 1.0).powi(2)).abs() < 1e-16);
        let norm = integrate(hump, -80.0, 80.0, &QuadratureSpec::new(1e-14, 1e-13)).unwrap().value;
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hump_moments() {
        assert!((hump_moment(1).unwrap()).abs() == 0.0);
        assert!((hump_moment(2).unwrap() - PI * PI / 3.0).abs() < 1e-14);
        assert!((hump_moment(4).unwrap() - 7.0 * PI.powi(4) / 15.0).abs() < 1e-12);
        assert!((hump_moment(6).unwrap() - 31.0 * PI.powi(6) / 21.0).abs() < 1e-10);
        let q = integrate(|x| x.powi(6) * hump(x), -120.0, 120.0, &QuadratureSpec::new(1e-12, 1e-13)).unwrap().value;
        assert!((q - hump_moment(6).unwrap()).abs() < 1e-9);
        // Sommerfeld coefficients
        assert!((hump_moment(2).unwrap() / 2.0 - PI * PI / 6.0).abs() < 1e-14);
        assert!((hump_moment(4).unwrap() / 24.0 - 7.0 * PI.powi(4) / 360.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_identity() {
        for &a in &[0.1f64, 1.0, 5.0] {
            let qs = QuadratureSpec::new(1e-14, 1e-13).with_breakpoints(vec![0.0]);
            let re = integrate(|x| (a * x).cos() * hump(x), -80.0, 80.0, &qs).unwrap().value;
            let im = integrate(|x| (a * x).sin() * hump(x), -80.0, 80.0, &qs).unwrap().value;
            let exact = PI * a / (PI * a).sinh();
            assert!((re - exact).abs() < 1e-10 && im.abs() < 1e-14, "a={a}");
        }
    }

    #[test]
    fn convolution_of_constant() {
        let pt = GasPointT::new(2.0, 0.01, 0.3).unwrap();
        let c = convolve_from_t0(|_| 3.5, &pt, &ConvolutionSpec::default()).unwrap();
        assert!((c.value - 3.5).abs() < 1e-10);
        assert!(!c.nondegenerate);
        let hot = GasPointT::new(1.01, 0.5, 0.3).unwrap();
        assert!(convolve_from_t0(|_| 1.0, &hot, &ConvolutionSpec::default()).unwrap().nondegenerate);
    }

    #[test]
    fn convolution_linearity() {
        let pt = GasPointT::new(1.7, 0.02, 0.2).unwrap();
        let spec = ConvolutionSpec::for_field(0.2);
        let f = |e: f64| (e * e - 1.0).sqrt();
        let g = |e: f64| e.ln();
        let lhs = convolve_from_t0(|e| 2.5 * f(e) + g(e), &pt, &spec).unwrap().value;
        let rhs = 2.5 * convolve_from_t0(f, &pt, &spec).unwrap().value + convolve_from_t0(g, &pt, &spec).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-11);
    }

    #[test]
    fn sommerfeld_matches_convolution_of_smooth_part() {
        let pt = GasPointT::new(2.0, 1e-3, 0.31).unwrap();
        let w = omega_smooth_t0(0.31);
        let s = sommerfeld_expansion(&w, &pt, 1e-2);
        let c = convolve_from_t0(&w, &pt, &ConvolutionSpec::default()).unwrap().value;
        assert!((s - c).abs() < 1e-12, "{s} {c}");
        let cold = GasPointT::new(2.0, 1e-12, 0.31).unwrap();
        assert!((sommerfeld_expansion(&w, &cold, 1e-2) - w(2.0)).abs() < 1e-13);
    }

    #[test]
    fn i_z_representations_agree() {
        let spec = OscSeriesSpec::default();
        let f = i_z_fourier(-1.5, 0.37, 0.8, &spec).unwrap();
        let q = i_z_quadrature(-1.5, 0.37, 0.8).unwrap();
        assert!((f - q).abs() < 1e-6, "{f} {q}");
        let shifted = i_z_fourier(-1.5, 1.37, 0.8, &spec).unwrap();
        assert!((shifted - i_z_fourier(-1.5, 0.37, 0.8, &spec).unwrap()).abs() < 1e-15);
        assert!(i_z_fourier(-1.5, 0.37, 50.0, &spec).unwrap().abs() < 1e-300);
        let f = i_z_fourier(-0.5, 0.81, 0.06, &spec).unwrap();
        let q = i_z_quadrature(-0.5, 0.81, 0.06).unwrap();
        assert!((f - q).abs() < 1e-9, "{f} {q}");
    }

    #[test]
    fn omega_osc_zero_temperature_limit() {
        let spec = OscSeriesSpec::default();
        let (mu, b) = (1.6, 0.11);
        let t0 = omega_osc_leading_t0(mu, b).unwrap();
        let v = omega_osc_finite_t(&GasPointT::new(mu, 1e-9, b).unwrap(), &spec).unwrap();
        assert!((v - t0).abs() < 1e-6 * t0.abs(), "{v} {t0}");
        // Fourier branch agrees with its quadrature counterpart at the switch
        let pt = GasPointT::new(mu, 0.05 * b / (2.0 * mu) * 1.0001, b).unwrap();
        let f = omega_osc_finite_t(&pt, &spec).unwrap();
        let q = -2.0 / 3.0 * b.powf(2.5) / mu * i_z_quadrature(-1.5, pt.filling(), osc_beta(&pt)).unwrap();
        assert!((f - q).abs() < 1e-9 * t0.abs());
    }

    #[test]
    fn omega_osc_term_ratio() {
        // μT/b = 2: second term below 2^{-3/2} e^{-4π²μT/b} of the first, up to the cosine
        let (mu, b) = (10.0, 1.0);
        let pt = GasPointT::new(mu, 2.0 * b / mu, b).unwrap();
        let c = 4.0 * PI * PI * pt.damping_ratio();
        let t1 = 1.0 / c.sinh();
        let t2 = 1.0 / (2f64.powf(1.5) * (2.0 * c).sinh());
        assert!(t2 / t1 <= 2f64.powf(-1.5) * (-c).exp() * 1.000001);
    }

    #[test]
    fn envelope_limits_and_bracketing() {
        let spec = OscSeriesSpec::default();
        let (mu, b) = (100.0, 1.0);
        // the approach to the limit is O(√(μT/b))
        let lim = oscillation_envelope_t0_limit(mu, b);
        let cold = oscillation_envelope_t(&GasPointT::new(mu, 1e-16, b).unwrap(), &spec).unwrap();
        assert!(cold < lim && (cold - lim).abs() < 1e-5 * lim, "{cold} {lim}");
        let pt = GasPointT::new(mu, 3e-4, b).unwrap();
        let env = oscillation_envelope_t(&pt, &spec).unwrap();
        for k in 0..200 {
            let b2 = b * (1.0 + 1e-5 * k as f64);
            let p = GasPointT::new(mu, 3e-4, b2).unwrap();
            let env2 = oscillation_envelope_t(&p, &spec).unwrap();
            assert!(magnetization_osc_finite_t(&p, &spec).unwrap().abs() <= env2 * (1.0 + 1e-12));
        }
        let small = oscillation_envelope_t(&GasPointT::new(mu, 3e-4, 0.1).unwrap(), &spec).unwrap();
        let large = oscillation_envelope_t(&GasPointT::new(mu, 3e-4, 10.0).unwrap(), &spec).unwrap();
        assert!(small < env && env < large);
    }

    #[test]
    fn monotonic_magnetization_zero_temperature() {
        let pt = GasPointT::new(3.0, 1e-9, 0.2).unwrap();
        let exact = 0.2 / 6.0 * (3.0f64 + 8f64.sqrt()).ln();
        assert!((magnetization_mon_finite_t(&pt) - exact).abs() < 1e-15);
    }

    #[test]
    fn nonrelativistic_reduction() {
        let spec = OscSeriesSpec::default();
        let pt = GasPointT::new(1.0005, 1e-5, 1e-3).unwrap();
        let r = magnetization_osc_finite_t(&pt, &spec).unwrap();
        let l = magnetization_nonrel_landau(&pt, &spec).unwrap();
        assert!((r - l).abs() < 1e-3 * l.abs(), "{r} {l}");
    }

    #[test]
    fn self_magnetization_warm_has_no_roots() {
        let spec = SelfMagnetizationSpec::default();
        let roots = self_magnetization_solve(100.0, 0.05, GAMMA_SPHERE, (0.5, 1.0), &spec).unwrap();
        assert!(roots.is_empty());
        assert!(self_magnetization_solve(100.0, 0.05, GAMMA_SPHERE, (1.0, 0.5), &spec).is_err());
    }
}
