use core::f64::consts::PI;

use num_traits::Float;

use super::{check_positive, clamp_m, invalid, ModelError};
use crate::numerics::adaptive_quad;

const QUAD_TOL: f64 = 1e-12;

// Beyond v = 40 the Gaussian factor is below e^{-800}.
const GAUSS_CUTOFF: f64 = 40.0;

/// `φ(x)/x²` where `φ(x) = E[1_{S_1<x} 1_{B_1>0} B_1(x - B_1)]`.
///
/// The integrand of the one-dimensional representation
/// `φ(x) = x³/√(2π) ∫₀¹ u(1-u)[e^{-x²u²/2} - e^{-x²(2-u)²/2}] du`
/// has its mass at `u ~ 1/x` and a bracket difference of order `x²` for
/// small `x`, so it is rescaled to stay of order one:
///
/// * `x ≤ 1`: the bracket is written `e^{-x²u²/2}·(-expm1(-2x²(1-u)))` and
///   divided by `x²`;
/// * `x > 1`: substitute `v = xu`, giving
///   `φ(x)/x² = 1/(x√(2π)) ∫₀^x v(1 - v/x) e^{-v²/2}(-expm1(-2x(x-v))) dv`.
fn phi_over_x2(x: f64) -> Result<f64, ModelError> {
    let inv_sqrt_2pi = 1.0 / (2.0 * PI).sqrt();
    if x <= 1.0 {
        let x2 = x * x;
        let f = |u: f64| {
            let bracket = -(-2.0 * x2 * (1.0 - u)).exp_m1() / x2;
            u * (1.0 - u) * (-0.5 * x2 * u * u).exp() * bracket
        };
        let r = adaptive_quad(f, 0.0, 1.0, QUAD_TOL)?;
        Ok(x * x2 * inv_sqrt_2pi * r.value)
    } else {
        let f = |v: f64| {
            let bracket = -(-2.0 * x * (x - v)).exp_m1();
            v * (1.0 - v / x) * (-0.5 * v * v).exp() * bracket
        };
        let r = adaptive_quad(f, 0.0, x.min(GAUSS_CUTOFF), QUAD_TOL)?;
        Ok(inv_sqrt_2pi * r.value / x)
    }
}

/// `φ(x) = E[1_{S_1<x} 1_{B_1>0} B_1(x - B_1)]`, with `S_1` the running
/// maximum of Brownian motion on `[0, 1]`.
pub fn phi_brownian(x: f64) -> Result<f64, ModelError> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(invalid("x", x, "must be finite and nonnegative"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(phi_over_x2(x)? * x * x)
}

/// `m(t) = φ(x)/x²` with `x = a/√t`, for the last zero of `B` before `T_a`.
pub fn m_brownian_hit(a: f64, t: f64) -> Result<f64, ModelError> {
    check_positive("a", a)?;
    if !(t > 0.0) {
        return Err(invalid("t", t, "time must be positive (m(0) = 0 by continuity)"));
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    clamp_m(phi_over_x2(a / t.sqrt())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    // midpoint rule on the literal representation, 10^6 cells
    fn riemann_phi(x: f64) -> f64 {
        let n = 1_000_000;
        let h = 1.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let u = (i as f64 + 0.5) * h;
            acc +=
                u * (1.0 - u) * ((-x * x * u * u / 2.0).exp() - (-x * x * (2.0 - u) * (2.0 - u) / 2.0).exp());
        }
        x * x * x / (2.0 * PI).sqrt() * acc * h
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_brownian(0.0).unwrap(), 0.0);
        assert!((phi_brownian(1.0).unwrap() - riemann_phi(1.0)).abs() < 1e-10);
        // large-x bound φ(x)/x² ≤ E[B_1⁺]/x = 1/(x√(2π))
        let at10 = phi_brownian(10.0).unwrap() / 100.0;
        assert!(at10 < 0.05);
        assert!(at10 <= 1.0 / (10.0 * (2.0 * PI).sqrt()));
    }

    #[test]
    fn phi_frozen_values() {
        // 50-digit quadrature
        let cases = [
            (0.5, 0.001_752_141_613_770_199_877_8),
            (1.0, 0.035_362_417_757_624_614_353),
            (3.0, 0.697_233_710_847_755_175_05),
            (10.0, 3.489_422_804_014_326_779_4),
        ];
        for (x, want) in cases {
            let got = phi_brownian(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-11, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn rescaled_branches_agree_at_the_switch() {
        let below = phi_brownian(1.0 - 1e-9).unwrap();
        let above = phi_brownian(1.0 + 1e-9).unwrap();
        assert!(((above - below) / below).abs() < 1e-8);
    }

    #[test]
    fn m_depends_on_ratio_only() {
        assert_eq!(
            m_brownian_hit(2.0, 4.0).unwrap(),
            m_brownian_hit(1.0, 1.0).unwrap()
        );
        assert_eq!(
            m_brownian_hit(3.0, 9.0).unwrap(),
            m_brownian_hit(1.0, 1.0).unwrap()
        );
    }

    #[test]
    fn m_small_time_behaves_like_half_normal_mean() {
        // x → ∞: m ≈ E[B_t⁺]/a = √t/√(2π), so m → 0 like √t
        let t = 1e-4;
        let m = m_brownian_hit(1.0, t).unwrap();
        let lead = t.sqrt() / (2.0 * PI).sqrt();
        assert!(m < lead && m > 0.98 * lead);
        assert!(m_brownian_hit(1.0, 1e-12).unwrap() < 1e-6);
    }

    #[test]
    fn m_large_time_is_cubic_in_x() {
        // x → 0: φ(x)/x² ≈ x³/(6√(2π))
        let t = 1e6;
        let x: f64 = 1.0 / t.sqrt();
        let m = m_brownian_hit(1.0, t).unwrap();
        let lead = x * x * x / (6.0 * (2.0 * PI).sqrt());
        assert!(((m - lead) / lead).abs() < 1e-5);
    }

    #[test]
    fn rejects_nonpositive_time() {
        assert!(m_brownian_hit(1.0, 0.0).is_err());
        assert!(m_brownian_hit(0.0, 1.0).is_err());
        assert!(phi_brownian(-1.0).is_err());
    }
}
