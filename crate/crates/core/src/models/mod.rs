//! The three last-passage families and the closed forms of their
//! non-stopping timeness `m(t) = E[Z_t(1 - Z_t)]`.
//!
//! | family | random time | `Z_t` |
//! |---|---|---|
//! | [`ModelSpec::ExpLastPassage`] | last time `exp(B_t - t/2)` equals `K ≤ 1` | `1 ∧ M_t/K` |
//! | [`ModelSpec::BrownianBeforeHit`] | last zero of `B` before it first hits `a` | `1 - B⁺_{t∧T_a}/a` |
//! | [`ModelSpec::BesselLastPassage`] | last time a `BES(2μ+2)` from 0 is at `a` | `1 ∧ (a/R_t)^{2μ}` |

mod bessel;
mod brownian;
mod exponential;
mod sup;

use core::fmt;

use num_traits::Float;
use thiserror::Error;

use crate::numerics::NumericsError;

pub use bessel::{bessel_characteristics, m_bessel, phi_mu, solve_z_mu, BesselCharacteristics};
pub use brownian::{m_brownian_hit, phi_brownian};
pub use exponential::m_exp;
pub use sup::{
    kstar_experiment, sample_curve, sup_m, KStarReport, NstCurve, SupResult, SUP_CERTIFY_REL, SUP_WINDOW,
};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter {name} = {value:?}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("process state does not match the model variant")]
    StateMismatch,
    #[error("maximum of m lies at the edge of the search window (t = {t:?})")]
    EdgeMaximum { t: f64 },
    #[error("m = {value:?} left [0, 1/4] beyond rounding")]
    OutOfRange { value: f64 },
    #[error("{0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

fn invalid(name: &'static str, value: f64, reason: &'static str) -> ModelError {
    ModelError::InvalidParameter { name, value, reason }
}

/// One of the three last-passage families with its parameters.
///
/// The constructors validate; the variants are public so a spec can be
/// matched on, and every operation re-validates through
/// [`ModelSpec::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    /// Last passage of `exp(B_t - t/2)` at level `k ∈ (0, 1]`.
    ExpLastPassage { k: f64 },
    /// Last zero of Brownian motion before it first hits `a > 0`.
    BrownianBeforeHit { a: f64 },
    /// Last passage at `a > 0` of a Bessel process of index `mu > 0`
    /// (dimension `2(mu + 1)`) started at 0.
    BesselLastPassage { mu: f64, a: f64 },
}

impl ModelSpec {
    pub fn exp(k: f64) -> Result<Self, ModelError> {
        let m = ModelSpec::ExpLastPassage { k };
        m.validate()?;
        Ok(m)
    }

    pub fn brownian_hit(a: f64) -> Result<Self, ModelError> {
        let m = ModelSpec::BrownianBeforeHit { a };
        m.validate()?;
        Ok(m)
    }

    pub fn bessel(mu: f64, a: f64) -> Result<Self, ModelError> {
        let m = ModelSpec::BesselLastPassage { mu, a };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match *self {
            ModelSpec::ExpLastPassage { k } => check_level(k),
            ModelSpec::BrownianBeforeHit { a } => check_positive("a", a),
            ModelSpec::BesselLastPassage { mu, a } => {
                check_positive("mu", mu)?;
                check_positive("a", a)
            }
        }
    }

    /// Short lowercase tag used on the command line and in file names.
    pub fn tag(&self) -> &'static str {
        match self {
            ModelSpec::ExpLastPassage { .. } => "exp",
            ModelSpec::BrownianBeforeHit { .. } => "bhit",
            ModelSpec::BesselLastPassage { .. } => "bessel",
        }
    }

    /// Bessel dimension `2(mu + 1)`.
    pub fn bessel_dimension(&self) -> Option<f64> {
        match *self {
            ModelSpec::BesselLastPassage { mu, .. } => Some(2.0 * (mu + 1.0)),
            _ => None,
        }
    }
}

/// Plain decimal in the usual range, exponent form outside it.
struct Num(f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.0.abs();
        if a == 0.0 || (1e-5..1e16).contains(&a) {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModelSpec::ExpLastPassage { k } => write!(f, "exp(K={})", Num(k)),
            ModelSpec::BrownianBeforeHit { a } => write!(f, "bhit(a={})", Num(a)),
            ModelSpec::BesselLastPassage { mu, a } => write!(f, "bessel(mu={},a={})", Num(mu), Num(a)),
        }
    }
}

pub(crate) fn check_level(k: f64) -> Result<(), ModelError> {
    if k > 0.0 && k <= 1.0 {
        Ok(())
    } else {
        Err(invalid("K", k, "level must lie in (0, 1]"))
    }
}

pub(crate) fn check_positive(name: &'static str, v: f64) -> Result<(), ModelError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, v, "must be finite and positive"))
    }
}

pub(crate) fn check_time(t: f64) -> Result<(), ModelError> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(invalid("t", t, "time must be nonnegative"))
    }
}

/// Current value of the underlying process, per family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProcessState {
    /// Value of the exponential martingale `M_t`.
    Exp { m: f64 },
    /// Brownian position and whether `T_a` has already been reached.
    BrownianBeforeHit { b: f64, hit: bool },
    /// Radius of the Bessel process.
    Bessel { r: f64 },
}

/// Azéma supermartingale `Z_t` evaluated at a process state.
pub fn z_of_state(model: &ModelSpec, state: ProcessState) -> Result<f64, ModelError> {
    model.validate()?;
    match (*model, state) {
        (ModelSpec::ExpLastPassage { k }, ProcessState::Exp { m }) => {
            if !(m >= 0.0) {
                return Err(invalid("M_t", m, "martingale value must be nonnegative"));
            }
            Ok((m / k).min(1.0))
        }
        (ModelSpec::BrownianBeforeHit { a }, ProcessState::BrownianBeforeHit { b, hit }) => {
            if hit {
                return Ok(0.0);
            }
            if b.is_nan() {
                return Err(invalid("B_t", b, "position must be a number"));
            }
            Ok(1.0 - (b.max(0.0) / a).min(1.0))
        }
        (ModelSpec::BesselLastPassage { mu, a }, ProcessState::Bessel { r }) => {
            if !(r >= 0.0) {
                return Err(invalid("R_t", r, "radius must be nonnegative"));
            }
            if r <= a {
                return Ok(1.0);
            }
            Ok((2.0 * mu * (a / r).ln()).exp())
        }
        _ => Err(ModelError::StateMismatch),
    }
}

/// `m(t)` for any of the three families. `m(0) = 0` and `m(∞) = 0` exactly.
pub fn m_of(model: &ModelSpec, t: f64) -> Result<f64, ModelError> {
    model.validate()?;
    check_time(t)?;
    if t == 0.0 || t.is_infinite() {
        return Ok(0.0);
    }
    match *model {
        ModelSpec::ExpLastPassage { k } => m_exp(k, t),
        ModelSpec::BrownianBeforeHit { a } => m_brownian_hit(a, t),
        ModelSpec::BesselLastPassage { mu, a } => m_bessel(mu, a, t),
    }
}

/// Keeps a cancellation-level negative result at zero and rejects anything
/// that leaves `[0, 1/4]` by more than rounding.
pub(crate) fn clamp_m(value: f64) -> Result<f64, ModelError> {
    const SLACK: f64 = 1e-15;
    if !(-SLACK..=0.25 + SLACK).contains(&value) {
        return Err(ModelError::OutOfRange { value });
    }
    Ok(value.clamp(0.0, 0.25))
}
