//! One grid path at a time, for each family.
//!
//! A walker advances its process by one exact Gaussian step and reports
//! whether the new grid point is a passage marker. The last marker of a
//! path is its grid estimate of the random time `G`:
//!
//! * exponential: a sign change of `M - K`, recorded at the later point;
//! * Bessel: a sign change of `R - a`, recorded at the later point;
//! * Brownian before `T_a`: a grid point with `B ≤ 0`, so the earlier end of
//!   the last sign change. `B_0 = 0` makes time 0 a marker and keeps the
//!   estimate strictly below the grid `T_a`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{McError, SimConfig, StreamRng, Termination};
use crate::models::ModelSpec;

// Bridge crossing probabilities below e^{-36} are not worth a uniform draw.
const BRIDGE_CUTOFF: f64 = 18.0;

pub(crate) struct ExpWalker {
    pub(crate) ln_k: f64,
    pub(crate) ln_stop: f64,
    pub(crate) sd: f64,
    pub(crate) drift: f64,
    x: f64,
    above: bool,
}

pub(crate) struct BhitWalker {
    a: f64,
    sd: f64,
    dt: f64,
    b: f64,
    hit: bool,
}

pub(crate) struct BesselWalker {
    mu: f64,
    a2: f64,
    stop2: f64,
    sd: f64,
    coords: Vec<f64>,
    r2: f64,
    above: bool,
}

pub(crate) enum Walker {
    Exp(ExpWalker),
    Bhit(BhitWalker),
    Bessel(BesselWalker),
}

/// Integer dimension `2(mu + 1)`, or an error for a fractional one.
pub(crate) fn bessel_dimension(mu: f64) -> Result<usize, McError> {
    let d = 2.0 * (mu + 1.0);
    let r = d.round();
    if (d - r).abs() > 1e-9 || r > 1024.0 {
        return Err(McError::Unsupported(
            "Bessel paths need an integer dimension 2(mu+1); use the gamma marginal",
        ));
    }
    Ok(r as usize)
}

impl Walker {
    pub(crate) fn new(model: &ModelSpec, cfg: &SimConfig) -> Result<Self, McError> {
        model.validate()?;
        cfg.validate()?;
        let sd = cfg.dt.sqrt();
        let mut w = match *model {
            ModelSpec::ExpLastPassage { k } => Walker::Exp(ExpWalker {
                ln_k: k.ln(),
                ln_stop: k.ln() + cfg.eps_stop.ln(),
                sd,
                drift: 0.5 * cfg.dt,
                x: 0.0,
                above: true,
            }),
            ModelSpec::BrownianBeforeHit { a } => Walker::Bhit(BhitWalker {
                a,
                sd,
                dt: cfg.dt,
                b: 0.0,
                hit: false,
            }),
            ModelSpec::BesselLastPassage { mu, a } => {
                let d = bessel_dimension(mu)?;
                Walker::Bessel(BesselWalker {
                    mu,
                    a2: a * a,
                    stop2: a * a * cfg.eps_stop.powf(-1.0 / mu),
                    sd,
                    coords: vec![0.0; d],
                    r2: 0.0,
                    above: false,
                })
            }
        };
        w.reset();
        Ok(w)
    }

    pub(crate) fn reset(&mut self) {
        match self {
            Walker::Exp(w) => {
                w.x = 0.0;
                w.above = w.x >= w.ln_k;
            }
            Walker::Bhit(w) => {
                w.b = 0.0;
                w.hit = false;
            }
            Walker::Bessel(w) => {
                w.coords.iter_mut().for_each(|c| *c = 0.0);
                w.r2 = 0.0;
                w.above = w.r2 >= w.a2;
            }
        }
    }

    /// Whether the starting point is already a passage marker.
    pub(crate) fn initial_marker(&self) -> bool {
        matches!(self, Walker::Bhit(_))
    }

    /// Advances one grid step; returns whether the new point is a marker.
    #[inline]
    pub(crate) fn step(&mut self, rng: &mut StreamRng) -> bool {
        match self {
            Walker::Exp(w) => {
                let n: f64 = rng.sample(StandardNormal);
                w.x += w.sd * n - w.drift;
                let above = w.x >= w.ln_k;
                let crossed = above != w.above;
                w.above = above;
                crossed
            }
            Walker::Bhit(w) => {
                if w.hit {
                    return false;
                }
                let n: f64 = rng.sample(StandardNormal);
                let x0 = w.b;
                let x1 = x0 + w.sd * n;
                let mut hit = x1 >= w.a;
                if !hit {
                    let gap = (w.a - x0) * (w.a - x1);
                    if gap < BRIDGE_CUTOFF * w.dt {
                        let u: f64 = rng.random();
                        hit = u < (-2.0 * gap / w.dt).exp();
                    }
                }
                if hit {
                    w.b = w.a;
                    w.hit = true;
                    false
                } else {
                    w.b = x1;
                    x1 <= 0.0
                }
            }
            Walker::Bessel(w) => {
                let mut r2 = 0.0;
                for c in w.coords.iter_mut() {
                    let n: f64 = rng.sample(StandardNormal);
                    *c += w.sd * n;
                    r2 += *c * *c;
                }
                w.r2 = r2;
                let above = r2 >= w.a2;
                let crossed = above != w.above;
                w.above = above;
                crossed
            }
        }
    }

    /// Azéma supermartingale at the current point.
    #[inline]
    pub(crate) fn z(&self) -> f64 {
        match self {
            Walker::Exp(w) => (w.x - w.ln_k).exp().min(1.0),
            Walker::Bhit(w) => {
                if w.hit {
                    0.0
                } else {
                    1.0 - (w.b.max(0.0) / w.a).min(1.0)
                }
            }
            Walker::Bessel(w) => {
                if w.r2 <= w.a2 {
                    1.0
                } else {
                    (w.mu * (w.a2 / w.r2).ln()).exp()
                }
            }
        }
    }

    /// A coordinate in which `Z` is nondecreasing: `ln(M/K)`, `-B` or `-R²`.
    /// Comparing keys avoids evaluating `Z` on every step.
    #[inline]
    pub(crate) fn key(&self) -> f64 {
        match self {
            Walker::Exp(w) => w.x - w.ln_k,
            Walker::Bhit(w) => -w.b,
            Walker::Bessel(w) => -w.r2,
        }
    }

    /// The key at which `Z` equals `z ∈ (0, 1]`.
    pub(crate) fn key_of_z(&self, z: f64) -> f64 {
        match self {
            Walker::Exp(_) => z.ln(),
            Walker::Bhit(w) => -w.a * (1.0 - z),
            Walker::Bessel(w) => -w.a2 * z.powf(-1.0 / w.mu),
        }
    }

    /// Process value stored in path records: `M`, `B` (frozen at `a` after
    /// `T_a`) or `R`.
    pub(crate) fn value(&self) -> f64 {
        match self {
            Walker::Exp(w) => w.x.exp(),
            Walker::Bhit(w) => w.b,
            Walker::Bessel(w) => w.r2.sqrt(),
        }
    }

    /// Whether the path has met its own termination rule.
    #[inline]
    pub(crate) fn done(&self) -> bool {
        match self {
            Walker::Exp(w) => w.x <= w.ln_stop,
            Walker::Bhit(w) => w.hit,
            Walker::Bessel(w) => w.r2 >= w.stop2,
        }
    }

    /// Whether a marker at this point or later is certain before the path
    /// terminates, because termination lies on the other side of the level.
    #[inline]
    pub(crate) fn passage_certain(&self) -> bool {
        match self {
            Walker::Exp(w) => w.above,
            Walker::Bhit(w) => !w.hit && w.b <= 0.0,
            Walker::Bessel(w) => !w.above,
        }
    }

    pub(crate) fn termination(&self) -> Termination {
        match self {
            Walker::Bhit(_) => Termination::HitTarget,
            _ => Termination::EpsilonStop,
        }
    }

    /// Walks that follow a path to its natural end must be able to stop.
    pub(crate) fn require_finite_walk(&self, cfg: &SimConfig) -> Result<(), McError> {
        if matches!(self, Walker::Bhit(_)) && cfg.horizon.is_none() {
            return Err(McError::Unsupported(
                "walking a Brownian path to T_a needs a horizon (E[T_a] is infinite)",
            ));
        }
        Ok(())
    }
}
