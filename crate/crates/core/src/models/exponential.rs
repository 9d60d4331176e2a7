use num_traits::Float;

use super::{check_level, check_time, clamp_m, ModelError};
use crate::numerics::{normal_cdf, phi_times_exp};

/// `m_K(t)` for the last passage of `exp(B_t - t/2)` at level `K ≤ 1`.
///
/// With `l = ln K`, `d1 = -3√t/2 + l/√t` and `d2 = -√t/2 + l/√t`,
///
/// `m_K(t) = Φ(d1)·e^{-l} - Φ(d1)·e^{t-2l} + e^{-l}(Φ(d2) - Φ(d1))`.
///
/// The `Φ(d1)·e^{t-2l}` product goes through [`phi_times_exp`]; `d1 < 0`
/// for every `t > 0` because `l ≤ 0`.
pub fn m_exp(k: f64, t: f64) -> Result<f64, ModelError> {
    check_level(k)?;
    check_time(t)?;
    if t == 0.0 || t.is_infinite() {
        return Ok(0.0);
    }
    let l = k.ln();
    let s = t.sqrt();
    let d1 = -1.5 * s + l / s;
    let d2 = -0.5 * s + l / s;
    let inv_k = (-l).exp();
    let p1 = normal_cdf(d1);
    let p2 = normal_cdf(d2);
    let value = p1 * inv_k - phi_times_exp(d1, t - 2.0 * l)? + inv_k * (p2 - p1);
    clamp_m(value)
}
