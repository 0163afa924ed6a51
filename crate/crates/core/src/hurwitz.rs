//! Real-argument Hurwitz zeta function ζ(z, q) and the Bernoulli machinery
//! behind it.
//!
//! The main evaluator shifts `q` upward with ζ(z,q) = ζ(z,q+1) + q^{-z} and
//! then sums the divergent Bernoulli asymptotic series, truncated at its
//! smallest term. Non-positive integer `z` is closed form. Two independent
//! strategies, Hermite's integral and the Fourier series, are kept as
//! oracles.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hfamily::frac;
use crate::numerics::{integrate, QuadratureSpec};

/// Highest Bernoulli index stored.
pub const BERNOULLI_MAX: usize = 64;

/// B₀..B_N as exact rationals plus their nearest doubles.
#[derive(Debug)]
pub struct BernoulliTable {
    exact: Vec<BigRational>,
    values: Vec<f64>,
    // B_{2k}/(2k)!, the coefficients of the asymptotic series.
    scaled_even: Vec<f64>,
}

impl BernoulliTable {
    fn build(n_max: usize) -> Self {
        // B_m = -1/(m+1) Σ_{k<m} C(m+1,k) B_k
        let mut exact: Vec<BigRational> = Vec::with_capacity(n_max + 1);
        exact.push(BigRational::from_integer(BigInt::from(1)));
        for m in 1..=n_max {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::from(1);
            for (k, bk) in exact.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            exact.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        let values: Vec<f64> = exact.iter().map(|b| b.to_f64().unwrap_or(f64::NAN)).collect();
        let mut scaled_even = Vec::with_capacity(n_max / 2 + 1);
        let mut fact = BigInt::from(1);
        for n in 0..=n_max {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            if n % 2 == 0 {
                let r = &exact[n] / BigRational::from_integer(fact.clone());
                scaled_even.push(r.to_f64().unwrap_or(f64::NAN));
            }
        }
        Self { exact, values, scaled_even }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Result<f64> {
        self.values.get(n).copied().ok_or(Error::Capacity { index: n, capacity: self.len() - 1 })
    }

    pub fn exact(&self, n: usize) -> Result<&BigRational> {
        self.exact.get(n).ok_or(Error::Capacity { index: n, capacity: self.len() - 1 })
    }

    /// B_{2k}/(2k)!
    fn scaled_even(&self, k: usize) -> f64 {
        self.scaled_even[k]
    }
}

pub fn bernoulli_table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| BernoulliTable::build(BERNOULLI_MAX))
}

pub fn bernoulli_number(n: usize) -> Result<f64> {
    bernoulli_table().get(n)
}

/// Bₙ(q) = Σₖ C(n,k) Bₖ q^{n−k}, evaluated by Horner's rule in q.
pub fn bernoulli_polynomial(n: usize, q: f64) -> Result<f64> {
    bernoulli_polynomial_with_scale(n, q).map(|(v, _)| v)
}

// Also returns Σ|terms|, the scale that sets the rounding error.
fn bernoulli_polynomial_with_scale(n: usize, q: f64) -> Result<(f64, f64)> {
    let table = bernoulli_table();
    table.get(n)?;
    // coefficient of q^j is C(n,j) B_{n-j}
    let mut binom = vec![1.0f64; n + 1];
    for j in 1..=n {
        binom[j] = binom[j - 1] * (n + 1 - j) as f64 / j as f64;
    }
    let mut acc = 0.0;
    let mut scale = 0.0;
    for j in (0..=n).rev() {
        let c = binom[j] * table.values[n - j];
        acc = acc * q + c;
        scale = scale * q.abs() + c.abs();
    }
    Ok((acc, scale))
}

/// Rising factorial (z)ₙ = z(z+1)…(z+n−1).
pub fn pochhammer(z: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (z + k as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEngineConfig {
    /// Minimum q after upward recurrence shifting.
    pub shift_target: f64,
    /// Cap on the number of Bernoulli terms in the asymptotic series.
    pub asymptotic_terms: usize,
    pub quadrature_abs_tol: f64,
    pub quadrature_rel_tol: f64,
}

impl ZetaEngineConfig {
    pub const DEFAULT: Self =
        Self { shift_target: 16.0, asymptotic_terms: 20, quadrature_abs_tol: 1e-12, quadrature_rel_tol: 1e-10 };

    pub fn validate(&self) -> Result<()> {
        if !(self.shift_target >= 2.0) {
            return Err(Error::InvalidInput(format!("shift_target {} must be at least 2", self.shift_target)));
        }
        if self.asymptotic_terms < 3 {
            return Err(Error::InvalidInput("asymptotic_terms must be at least 3".into()));
        }
        let cap = BERNOULLI_MAX / 2 - 1;
        if self.asymptotic_terms > cap {
            return Err(Error::Capacity { index: self.asymptotic_terms, capacity: cap });
        }
        if !(self.quadrature_abs_tol > 0.0 && self.quadrature_rel_tol > 0.0) {
            return Err(Error::InvalidInput("quadrature tolerances must be positive".into()));
        }
        Ok(())
    }
}

impl Default for ZetaEngineConfig {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaStrategy {
    RecurrenceAsymptotic,
    HermiteQuadrature,
    Fourier,
    BernoulliPolynomial,
    DirectSeries,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub strategy: ZetaStrategy,
}

fn non_positive_integer(z: f64) -> Option<usize> {
    if z <= 0.0 && z == z.round() && -z < BERNOULLI_MAX as f64 {
        Some((-z) as usize)
    } else {
        None
    }
}

// Resolves the argument conventions shared by every strategy: the pole, the
// sign of q, and ζ(z,0) ≡ ζ(z,1) for z < 0.
fn check_args(z: f64, q: f64) -> Result<f64> {
    if !z.is_finite() || !q.is_finite() {
        return Err(Error::Domain(format!("non-finite argument z = {z}, q = {q}")));
    }
    if z == 1.0 {
        return Err(Error::Pole);
    }
    if q < 0.0 {
        return Err(Error::Domain(format!("q = {q} must be positive")));
    }
    if q == 0.0 {
        if z < 0.0 {
            return Ok(1.0);
        }
        return Err(Error::Domain(format!("q = 0 requires z < 0, got z = {z}")));
    }
    Ok(q)
}

/// ζ(z, q) by recurrence shift plus asymptotic series, or the Bernoulli
/// polynomial closed form for non-positive integer z.
pub fn hurwitz_zeta(z: f64, q: f64, cfg: &ZetaEngineConfig) -> Result<ZetaValue> {
    cfg.validate()?;
    let q = check_args(z, q)?;
    if let Some(m) = non_positive_integer(z) {
        let (b, scale) = bernoulli_polynomial_with_scale(m + 1, q)?;
        let k = (m + 1) as f64;
        return Ok(ZetaValue {
            value: -b / k,
            abs_error_estimate: 4.0 * f64::EPSILON * scale / k,
            strategy: ZetaStrategy::BernoulliPolynomial,
        });
    }
    if q < cfg.shift_target && fourier_preferred(z, q) {
        return fourier_with_head(z, q);
    }
    let (value, err) = shifted_asymptotic(z, q, cfg);
    Ok(ZetaValue { value, abs_error_estimate: err, strategy: ZetaStrategy::RecurrenceAsymptotic })
}

/// ζ(z, q) with the default configuration, value only.
pub fn zeta(z: f64, q: f64) -> Result<f64> {
    hurwitz_zeta(z, q, &ZetaEngineConfig::DEFAULT).map(|v| v.value)
}

/// Integrand-friendly ζ(z, q): NaN on any error so quadrature reports it.
pub(crate) fn zeta_f64(z: f64, q: f64) -> f64 {
    zeta(z, q).unwrap_or(f64::NAN)
}

// For z well below zero the upward shift cancels against a head sum of size
// shift^{1−z}, while the Fourier series converges like n^{z−1}. Its tail
// transform degrades as {q} approaches an integer unless z is small enough.
fn fourier_preferred(z: f64, q: f64) -> bool {
    if z <= -3.0 {
        return true;
    }
    let f = frac(q);
    z <= -2.0 && f.min(1.0 - f) >= 0.05
}

// ζ(z, q) = ζ(z, r) + Σ_{k<q−r} (r+k)^{−z} with r = q − ⌈q⌉ + 1 ∈ (0, 1].
fn fourier_with_head(z: f64, q: f64) -> Result<ZetaValue> {
    let steps = (q.ceil() - 1.0).max(0.0);
    let r = q - steps;
    let base = hurwitz_zeta_fourier(z, r, 1e-18)?;
    let mut head = 0.0;
    let mut x = r;
    for _ in 0..steps as usize {
        head += x.powf(-z);
        x += 1.0;
    }
    let value = base.value - head;
    let err = base.abs_error_estimate + 4.0 * f64::EPSILON * ((steps + 1.0) * head + base.value.abs());
    Ok(ZetaValue { value, abs_error_estimate: err, strategy: ZetaStrategy::Fourier })
}

fn shifted_asymptotic(z: f64, q: f64, cfg: &ZetaEngineConfig) -> (f64, f64) {
    let mut head = 0.0;
    let mut head_scale = 0.0;
    let mut x = q;
    while x < cfg.shift_target {
        let t = x.powf(-z);
        head += t;
        head_scale += t.abs();
        x += 1.0;
    }
    let (tail, tail_err, tail_scale) = asymptotic_series(z, x, 0, cfg.asymptotic_terms);
    let value = head + tail;
    let rounding = 8.0 * f64::EPSILON * (head_scale + tail_scale);
    (value, tail_err + rounding)
}

/// The asymptotic expansion of ζ(z, x) starting at Bernoulli term `k_start`.
/// `k_start = 0` includes the two leading closed terms; larger values return
/// Σ_{k ≥ k_start} B_{2k+2}/(2k+2)! (z)_{2k+1} x^{−z−2k−1} only.
///
/// Returns (sum, first omitted term, Σ|terms|).
fn asymptotic_series(z: f64, x: f64, k_start: usize, max_terms: usize) -> (f64, f64, f64) {
    let table = bernoulli_table();
    let (mut sum, mut scale) = if k_start == 0 {
        let a = x.powf(1.0 - z) / (z - 1.0);
        let b = 0.5 * x.powf(-z);
        (a + b, a.abs() + b.abs())
    } else {
        (0.0, 0.0)
    };
    let inv_x2 = 1.0 / (x * x);
    // (z)_{2k+1} x^{−z−2k−1} built incrementally from k = 0
    let mut poch_pow = z * x.powf(-z - 1.0);
    for k in 0..k_start {
        poch_pow *= (z + (2 * k + 1) as f64) * (z + (2 * k + 2) as f64) * inv_x2;
    }
    let mut prev = f64::INFINITY;
    let omitted;
    let mut k = k_start;
    loop {
        let term = table.scaled_even(k + 1) * poch_pow;
        if term == 0.0 {
            omitted = 0.0;
            break;
        }
        if term.abs() >= prev || k >= k_start + max_terms || 2 * k + 4 > BERNOULLI_MAX {
            omitted = term.abs();
            break;
        }
        sum += term;
        scale += term.abs();
        prev = term.abs();
        poch_pow *= (z + (2 * k + 1) as f64) * (z + (2 * k + 2) as f64) * inv_x2;
        k += 1;
    }
    (sum, omitted, scale)
}

/// Hermite's integral representation,
/// ζ = q^{1−z}/(z−1) + q^{−z}/2 + 2q^{1−z} ∫₀^∞ sin(z atan t) / ((1+t²)^{z/2}(e^{2πqt}−1)) dt,
/// with the integral split at t = 1/2 and the tail mapped by t = 1/2 + u/(1−u).
pub fn hurwitz_zeta_hermite(z: f64, q: f64, cfg: &ZetaEngineConfig) -> Result<ZetaValue> {
    cfg.validate()?;
    let q = check_args(z, q)?;
    let kernel = |t: f64| -> f64 {
        let arg = 2.0 * PI * q * t;
        if arg > 700.0 {
            return 0.0;
        }
        if t == 0.0 {
            return z / (2.0 * PI * q);
        }
        (z * t.atan()).sin() / ((1.0 + t * t).powf(0.5 * z) * arg.exp_m1())
    };
    const A: f64 = 0.5;
    let pref = 2.0 * q.powf(1.0 - z);
    let closed = q.powf(1.0 - z) / (z - 1.0) + 0.5 * q.powf(-z);
    let target = cfg.quadrature_abs_tol.max(cfg.quadrature_rel_tol * closed.abs());
    let spec = QuadratureSpec::new(0.5 * target / pref, cfg.quadrature_rel_tol).with_max_subdivisions(2000);
    let head = integrate(kernel, 0.0, A, &spec)?;
    let tail = integrate(
        |u: f64| {
            if u >= 1.0 {
                return 0.0;
            }
            let w = 1.0 - u;
            kernel(A + u / w) / (w * w)
        },
        0.0,
        1.0,
        &spec,
    )?;
    let value = closed + pref * (head.value + tail.value);
    let err = pref * (head.abs_error + tail.abs_error) + 4.0 * f64::EPSILON * closed.abs();
    Ok(ZetaValue { value, abs_error_estimate: err, strategy: ZetaStrategy::HermiteQuadrature })
}

/// Fourier series for z < 0 and 0 ≤ q ≤ 1,
/// ζ(z,q) = 2Γ(1−z)(2π)^{z−1} Σₙ n^{z−1} sin(2πqn + πz/2).
///
/// Terms are summed directly until the magnitude bound drops below `tol`;
/// the remaining tail is added in closed form (Euler transform for q off the
/// integers, Euler–Maclaurin on them) so that slowly decaying cases such as
/// z = −1/2 do not need millions of terms.
pub fn hurwitz_zeta_fourier(z: f64, q: f64, tol: f64) -> Result<ZetaValue> {
    if !(z < 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("Fourier series needs z < 0, got z = {z}")));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!("Fourier series needs 0 <= q <= 1, got q = {q}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let pref = 2.0 * libm::tgamma(1.0 - z) * (2.0 * PI).powf(z - 1.0);
    let s = z - 1.0;
    let phase = 0.5 * PI * z;
    let theta = 2.0 * PI * q;
    let on_integer = q == 0.0 || q == 1.0;

    // Direct terms up to the bound crossing, but always far enough out that
    // the tail expansion converges.
    const MAX_DIRECT: usize = 2_000_000;
    let by_bound = (tol / pref).powf(1.0 / s).ceil();
    let sin_half = (PI * q).sin().abs();
    // the transform's k-th term scales like C(|s|+k−1, k)/(N|1−w|)^k
    let by_tail = if on_integer { 32.0 } else { (4.0 * (EULER_TERMS as f64 - s) / (2.0 * sin_half)).max(32.0) };
    let n_tail = by_bound.min(by_tail.max(32.0)).clamp(32.0, MAX_DIRECT as f64) as usize;

    let mut sum = 0.0;
    let mut comp = 0.0;
    for n in 1..n_tail {
        let nf = n as f64;
        let t = nf.powf(s) * (theta * nf + phase).sin() - comp;
        let y = sum + t;
        comp = (y - sum) - t;
        sum = y;
    }
    let (tail, tail_err) = if by_bound <= n_tail as f64 {
        (0.0, (n_tail as f64).powf(s))
    } else if on_integer {
        power_tail_euler_maclaurin(s, n_tail, phase)
    } else {
        power_tail_euler_transform(s, n_tail, theta, phase)
    };
    let value = pref * (sum + tail);
    let err = pref * (tail_err + 16.0 * f64::EPSILON * (n_tail as f64).sqrt() * sum.abs().max(1.0));
    Ok(ZetaValue { value, abs_error_estimate: err, strategy: ZetaStrategy::Fourier })
}

// Σ_{n≥N} n^s sin(θn + φ) = Im e^{iφ} Σ_{n≥N} n^s wⁿ with w = e^{iθ}, using
// Σ_{n≥N} f(n) wⁿ = wᴺ/(1−w) Σ_k (w/(1−w))ᵏ Δᵏf(N).
const EULER_TERMS: usize = 12;

fn power_tail_euler_transform(s: f64, n: usize, theta: f64, phase: f64) -> (f64, f64) {
    const K: usize = EULER_TERMS;
    let f: Vec<f64> = (0..=K).map(|j| ((n + j) as f64).powf(s)).collect();
    // forward differences Δᵏf(N)
    let mut diffs = Vec::with_capacity(K + 1);
    let mut row = f;
    for _ in 0..=K {
        diffs.push(row[0]);
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let (wr, wi) = (theta.cos(), theta.sin());
    let (dr, di) = (1.0 - wr, -wi);
    let den = dr * dr + di * di;
    // r = w/(1−w)
    let (rr, ri) = ((wr * dr + wi * di) / den, (wi * dr - wr * di) / den);
    let (mut pr, mut pi) = (1.0, 0.0);
    let (mut accr, mut acci) = (0.0, 0.0);
    let mut last = 0.0;
    for d in diffs.iter() {
        let (tr, ti) = (pr * d, pi * d);
        accr += tr;
        acci += ti;
        last = (tr * tr + ti * ti).sqrt();
        let npr = pr * rr - pi * ri;
        pi = pr * ri + pi * rr;
        pr = npr;
    }
    // prefactor e^{iφ} wᴺ/(1−w)
    let ang = phase + theta * n as f64;
    let (er, ei) = (ang.cos(), ang.sin());
    let (ur, ui) = ((er * dr + ei * di) / den, (ei * dr - er * di) / den);
    let im = ur * acci + ui * accr;
    (im, last / den.sqrt())
}

// Σ_{n≥N} n^s sin φ by Euler–Maclaurin.
fn power_tail_euler_maclaurin(s: f64, n: usize, phase: f64) -> (f64, f64) {
    let table = bernoulli_table();
    let x = n as f64;
    let mut sum = -x.powf(s + 1.0) / (s + 1.0) + 0.5 * x.powf(s);
    // f^{(2k−1)}(x) = s(s−1)…(s−2k+2) x^{s−2k+1}
    let mut deriv = s * x.powf(s - 1.0);
    let mut last = 0.0;
    for k in 1..=10 {
        let term = table.scaled_even(k) * deriv;
        sum -= term;
        last = term.abs();
        let kf = (2 * k) as f64;
        deriv *= (s - kf + 1.0) * (s - kf) / (x * x);
    }
    (phase.sin() * sum, last)
}

/// ζ(z, q) by the defining series Σ(n+q)^{−z}, for z > 1. The tail beyond
/// the last summed term is replaced by its leading integral estimate.
pub fn hurwitz_zeta_direct(z: f64, q: f64, tol: f64) -> Result<ZetaValue> {
    if !(z > 1.0) {
        return Err(Error::Domain(format!("direct series needs z > 1, got z = {z}")));
    }
    let q = check_args(z, q)?;
    // tail error after N terms is about z (N+q)^{−z−1}/12
    let n = ((z / (12.0 * tol)).powf(1.0 / (z + 1.0)) - q).ceil().max(1.0);
    if n > 5e7 {
        return Err(Error::Truncation { terms: n as usize, partial: f64::NAN });
    }
    let n = n as usize;
    let mut sum = 0.0;
    for k in (0..n).rev() {
        sum += (k as f64 + q).powf(-z);
    }
    let x = n as f64 + q;
    let tail = x.powf(1.0 - z) / (z - 1.0) + 0.5 * x.powf(-z);
    let err = z * x.powf(-z - 1.0) / 12.0;
    Ok(ZetaValue { value: sum + tail, abs_error_estimate: err, strategy: ZetaStrategy::DirectSeries })
}

/// ∂ᵒζ(z,q)/∂qᵒ = (−1)ᵒ (z)ₒ ζ(z+o, q).
///
/// When z is a non-positive integer −m the coefficient vanishes for o > m;
/// the result is 0 unless z+o lands on the pole, where the limit of the
/// product is the derivative of the Bernoulli polynomial, −m!.
pub fn hurwitz_q_derivative(z: f64, q: f64, order: usize, cfg: &ZetaEngineConfig) -> Result<f64> {
    if order == 0 {
        return hurwitz_zeta(z, q, cfg).map(|v| v.value);
    }
    check_args(z, q)?;
    let coeff = if order % 2 == 0 { 1.0 } else { -1.0 } * pochhammer(z, order);
    if coeff == 0.0 {
        let m = (-z).round() as usize;
        if m + 1 == order {
            let fact: f64 = (1..=m).map(|k| k as f64).product();
            return Ok(-fact);
        }
        return Ok(0.0);
    }
    let zn = z + order as f64;
    if zn == 1.0 {
        return Err(Error::Pole);
    }
    Ok(coeff * hurwitz_zeta(zn, q, cfg)?.value)
}

/// ζ(z,q) minus the first `n_terms` ∈ {3, 4} terms of its large-q expansion:
/// q^{1−z}/(z−1) + q^{−z}/2 + z q^{−z−1}/12 and, for four terms, the next
/// Bernoulli term.
pub fn subtracted_zeta(n_terms: usize, z: f64, q: f64, cfg: &ZetaEngineConfig) -> Result<f64> {
    let k_start = match n_terms {
        3 => 1,
        4 => 2,
        _ => return Err(Error::InvalidInput(format!("n_terms must be 3 or 4, got {n_terms}"))),
    };
    cfg.validate()?;
    let q = check_args(z, q)?;
    if q >= cfg.shift_target {
        let (sum, _, _) = asymptotic_series(z, q, k_start, cfg.asymptotic_terms);
        return Ok(sum);
    }
    let full = hurwitz_zeta(z, q, cfg)?.value;
    // Built term by term: the smallest-term rule must not cut it short.
    let table = bernoulli_table();
    let mut sub = q.powf(1.0 - z) / (z - 1.0) + 0.5 * q.powf(-z);
    let mut poch_pow = z * q.powf(-z - 1.0);
    for k in 0..k_start {
        sub += table.scaled_even(k + 1) * poch_pow;
        poch_pow *= (z + (2 * k + 1) as f64) * (z + (2 * k + 2) as f64) / (q * q);
    }
    Ok(full - sub)
}
