//! The ℋ_z(q) family, ℋ_z(q) = ζ(z,{q}) − ζ(z,q+1) − ½q^{−z}, which packs
//! the Landau-level sum Σ_j (g_j/2)(q−j)^{−z} (g₀ = 1, g_j = 2) into closed
//! form.

use crate::error::{Error, Result};
use crate::hurwitz::zeta;

/// Fractional part {q} = q − ⌊q⌋.
pub fn frac(q: f64) -> f64 {
    q - q.floor()
}

pub(crate) fn is_integral(q: f64) -> bool {
    q == q.floor()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HValue {
    pub total: f64,
    /// −ζ(z,q+1) − ½q^{−z}
    pub monotonic: f64,
    /// ζ(z,{q})
    pub oscillatory: f64,
}

/// ζ(z,{q}) with {q} = 0 read as the limit from below, ζ(z,1).
pub fn zeta_frac(z: f64, q: f64) -> Result<f64> {
    let f = frac(q);
    if f == 0.0 {
        if z > 0.0 {
            return Err(Error::ThresholdDivergence { q });
        }
        return zeta(z, 1.0);
    }
    zeta(z, f)
}

pub fn h_z(z: f64, q: f64) -> Result<HValue> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("ℋ_z needs q > 0, got {q}")));
    }
    if z > 0.0 && is_integral(q) {
        return Err(Error::ThresholdDivergence { q });
    }
    let oscillatory = zeta_frac(z, q)?;
    let monotonic = -zeta(z, q + 1.0)? - 0.5 * q.powf(-z);
    Ok(HValue { total: monotonic + oscillatory, monotonic, oscillatory })
}

/// ℋ_z(q) total with ℋ_z(0) = 0 for z < 0; NaN on error, for integrands.
#[cfg(test)]
pub(crate) fn h_total(z: f64, q: f64) -> f64 {
    if q <= 0.0 && z < 0.0 {
        return 0.0;
    }
    h_z(z, q).map(|h| h.total).unwrap_or(f64::NAN)
}

/// The Landau sum Σ_{j=0}^{⌊q⌋} (g_j/2)(q−j)^{−z} evaluated term by term.
/// Equals ℋ_z(q); used as an oracle.
pub fn landau_sum(z: f64, q: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("Landau sum needs q > 0, got {q}")));
    }
    if z > 0.0 && is_integral(q) {
        return Err(Error::ThresholdDivergence { q });
    }
    let top = q.floor() as usize;
    let mut sum = 0.0;
    for j in (0..=top).rev() {
        let x = q - j as f64;
        if x == 0.0 {
            continue;
        }
        let g = if j == 0 { 0.5 } else { 1.0 };
        sum += g * x.powf(-z);
    }
    Ok(sum)
}

/// Σ_j g_j (q_E − j)^{−1/2}, the degeneracy-weighted inverse square root sum
/// of the density of states. Equals 2ℋ_{1/2}(q_E).
pub fn landau_sum_inverse_sqrt(q_e: f64) -> Result<f64> {
    landau_sum(0.5, q_e).map(|s| 2.0 * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeIdentity {
    /// ℋ_{1/2} = 2 dℋ_{−1/2}/dq
    HalfFromMinusHalf,
    /// ℋ_{−1/2} = (2/3) dℋ_{−3/2}/dq
    MinusHalfFromMinusThreeHalf,
}

/// Deviation of the derivative identity at q, with the derivative taken by a
/// central difference of step 10⁻⁶·max(1,q).
///
/// The first identity involves ℋ_{1/2}, which diverges at integers; q closer
/// than ten steps to an integer is rejected.
pub fn h_derivative_identity_check(q: f64, which: DerivativeIdentity) -> Result<f64> {
    let h = 1e-6 * q.max(1.0);
    let (lhs_z, base_z, factor) = match which {
        DerivativeIdentity::HalfFromMinusHalf => (0.5, -0.5, 2.0),
        DerivativeIdentity::MinusHalfFromMinusThreeHalf => (-0.5, -1.5, 2.0 / 3.0),
    };
    if which == DerivativeIdentity::HalfFromMinusHalf {
        let dist = (q - q.round()).abs();
        if dist < 10.0 * h {
            return Err(Error::ThresholdDivergence { q });
        }
    }
    if q - h <= 0.0 {
        return Err(Error::Domain(format!("q = {q} too close to 0 for a central difference")));
    }
    let lhs = h_z(lhs_z, q)?.total;
    let d = (h_z(base_z, q + h)?.total - h_z(base_z, q - h)?.total) / (2.0 * h);
    Ok((lhs - factor * d).abs())
}
