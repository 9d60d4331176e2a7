use num_traits::Float;

use super::{check_positive, clamp_m, invalid, ModelError};
use crate::numerics::{brent_root, exp_integral_scaled, lgamma, NumericsError, RootResult};

/// Residual bound the root of `2z·e^z·E_μ(z) = 1` is driven to.
pub const Z_MU_RESIDUAL: f64 = 1e-12;

/// `z_μ`, `m_μ = sup_z φ_μ(z)` and the upper bound `m′_μ` for one index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselCharacteristics {
    pub mu: f64,
    pub z_mu: f64,
    pub m_mu: f64,
    pub m_prime_mu: f64,
    /// `2z_μ·e^{z_μ}·E_μ(z_μ) - 1` at the returned root.
    pub residual: f64,
}

/// `φ_μ(z) = (z^μ e^{-z} - z^{2μ} ∫_z^∞ u^{-μ} e^{-u} du) / Γ(μ+1)`.
///
/// With `∫_z^∞ u^{-μ}e^{-u} du = z^{1-μ}E_μ(z)` this is
/// `z^μ e^{-z}(1 - z·e^z E_μ(z)) / Γ(μ+1)`; the prefactor is formed in log
/// space, relative to its peak at `z = μ`, so it neither overflows,
/// underflows early nor cancels for large `μ`.
pub fn phi_mu(mu: f64, z: f64) -> Result<f64, ModelError> {
    check_positive("mu", mu)?;
    if !(z >= 0.0) {
        return Err(invalid("z", z, "must be nonnegative"));
    }
    if z == 0.0 || z.is_infinite() {
        return Ok(0.0);
    }
    let prefactor = (mu_ln_ratio(mu, z) - (z - mu) - stirling_gap(mu)?).exp();
    if prefactor == 0.0 {
        return Ok(0.0);
    }
    let bracket = 1.0 - z * exp_integral_scaled(mu, z)?;
    Ok(prefactor * bracket)
}

/// `m(t) = φ_μ(a²/2t)` for the last passage at `a` of `BES(2μ+2)`.
pub fn m_bessel(mu: f64, a: f64, t: f64) -> Result<f64, ModelError> {
    check_positive("mu", mu)?;
    check_positive("a", a)?;
    if !(t > 0.0) {
        return Err(invalid("t", t, "time must be positive (m(0) = 0 by continuity)"));
    }
    clamp_m(phi_mu(mu, a * a / (2.0 * t))?)
}

fn e_mu_residual(mu: f64, z: f64) -> f64 {
    // the order is validated by the caller and z > 0 on every bracket point
    2.0 * z * exp_integral_scaled(mu, z).unwrap_or(f64::NAN) - 1.0
}

// The residual's slope at the root is about 1/(2μ), so the residual budget
// places z_μ to within ~1e-12·μ; beyond this that is no longer small
// against the width √μ of the peak of φ_μ.
const MAX_INDEX: f64 = 1e15;

/// Unique positive root of `1/(2z) = ∫₀^∞ (1+h)^{-μ} e^{-hz} dh`, i.e. of
/// `2z·e^z·E_μ(z) - 1`, which locates the maximum of `φ_μ`.
///
/// The residual runs from a negative limit at `0⁺` to `+1` at infinity. The
/// bracket starts at `[1e-6, max(10, 4μ)]`; for small `μ` the root sits
/// below `1e-6` and the lower end is pushed down until the sign changes.
pub fn solve_z_mu(mu: f64) -> Result<RootResult, ModelError> {
    check_positive("mu", mu)?;
    if mu > MAX_INDEX {
        return Err(invalid("mu", mu, "too large to locate z_mu in double precision"));
    }
    let hi = (4.0 * mu).max(10.0);
    let mut lo = 1e-6;
    while e_mu_residual(mu, lo) >= 0.0 {
        if lo < 1e-300 {
            return Err(NumericsError::NotBracketed {
                lo,
                hi,
                f_lo: e_mu_residual(mu, lo),
                f_hi: e_mu_residual(mu, hi),
            }
            .into());
        }
        lo *= 1e-4;
    }
    // Solved in ln z so the abscissa tolerance is relative; a tenth of the
    // residual budget goes to the solver's own stopping rule.
    let r = brent_root(
        |s| e_mu_residual(mu, s.exp()),
        (lo.ln(), hi.ln()),
        0.1 * Z_MU_RESIDUAL,
    )?;
    let root = r.root.exp();
    Ok(RootResult {
        root,
        residual: e_mu_residual(mu, root),
        iterations: r.iterations,
        bracket: (r.bracket.0.exp().min(root), r.bracket.1.exp().max(root)),
    })
}

/// `μ ln(z/μ)`, through `ln_1p` near `z = μ` where `μ` may be huge.
fn mu_ln_ratio(mu: f64, z: f64) -> f64 {
    let d = (z - mu) / mu;
    if d.abs() < 0.5 {
        mu * d.ln_1p()
    } else {
        mu * (z / mu).ln()
    }
}

/// `ln Γ(μ+1) - (μ ln μ - μ)`, by the Stirling series for large `μ` where
/// the two terms would cancel.
fn stirling_gap(mu: f64) -> Result<f64, ModelError> {
    if mu < 10.0 {
        return Ok(lgamma(mu + 1.0)? - (mu * mu.ln() - mu));
    }
    let r = 1.0 / mu;
    let r2 = r * r;
    let series = r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)));
    Ok(0.5 * (2.0 * core::f64::consts::PI * mu).ln() + series)
}

/// `z_μ` together with `m_μ = e^{-z_μ} z_μ^μ / (2Γ(μ+1))` and
/// `m′_μ = sup_z e^{-z} z^μ / (2Γ(μ+1)) = μ^μ e^{-μ} / (2Γ(μ+1))`.
pub fn bessel_characteristics(mu: f64) -> Result<BesselCharacteristics, ModelError> {
    let root = solve_z_mu(mu)?;
    let z = root.root;
    // ln m′ and ln m relative to it; z_μ sits within a unit of μ
    let ln_m_prime = -stirling_gap(mu)?;
    let m_mu = 0.5 * (ln_m_prime + mu_ln_ratio(mu, z) - (z - mu)).exp();
    let m_prime_mu = 0.5 * ln_m_prime.exp();
    Ok(BesselCharacteristics {
        mu,
        z_mu: z,
        m_mu,
        m_prime_mu,
        residual: root.residual,
    })
}
