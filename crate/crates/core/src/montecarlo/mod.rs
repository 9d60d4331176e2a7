//! Monte Carlo validation of the closed forms.
//!
//! Every estimator splits its paths into `n_streams` substreams. Substream
//! `i` draws from ChaCha8 seeded with `seed` on stream `i`, owns its
//! generator exclusively, and reports a partial sum; partials are merged in
//! substream order. The result therefore depends on
//! `(seed, n_paths, n_streams, dt)` only, never on how an [`Executor`]
//! schedules the substreams.

mod estimators;
mod paths;
mod walkers;

use alloc::vec::Vec;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::models::ModelError;

pub use estimators::{
    estimate_at_level_hit, estimate_at_level_hit_refined, estimate_m_identity, estimate_m_marginal,
    estimate_m_path, estimate_phi_brownian, estimate_sup_zz, estimate_sup_zz_refined, sample_joint_max,
    Engine, IdentityEstimate, SAMPLER_STREAMS,
};
pub use paths::{
    simulate_bessel_paths, simulate_brownian_before_hit, simulate_exp_paths, PathRecord, PathStream,
    Termination,
};

pub(crate) type StreamRng = ChaCha8Rng;

/// Default path-termination threshold on the cap ratio `M_t/K` or
/// `(a/R_t)^{2μ}`.
pub const DEFAULT_EPS_STOP: f64 = 1e-4;
pub const DEFAULT_STREAMS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum McError {
    #[error("invalid simulation setting {name} = {value:?}: {reason}")]
    InvalidConfig {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("{0}")]
    Unsupported(&'static str),
    #[error("path {path} stopped before Z reached the level")]
    LevelNotReached { path: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub(crate) fn bad_config(name: &'static str, value: f64, reason: &'static str) -> McError {
    McError::InvalidConfig { name, value, reason }
}

/// Simulation settings shared by the path-level estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub n_paths: u64,
    /// Grid step.
    pub dt: f64,
    /// Paths stop once the cap ratio falls to `eps_stop`; a later passage
    /// then has probability at most `eps_stop`.
    pub eps_stop: f64,
    pub n_streams: usize,
    /// Optional hard stop in time units. Walks that need the whole path of
    /// a Brownian motion up to `T_a` require it, since `T_a` has no mean.
    pub horizon: Option<f64>,
}

impl SimConfig {
    pub fn new(seed: u64, n_paths: u64, dt: f64) -> Self {
        Self {
            seed,
            n_paths,
            dt,
            eps_stop: DEFAULT_EPS_STOP,
            n_streams: DEFAULT_STREAMS,
            horizon: None,
        }
    }

    pub fn validate(&self) -> Result<(), McError> {
        if self.n_paths == 0 {
            return Err(bad_config("n_paths", 0.0, "need at least one path"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(bad_config("dt", self.dt, "must be finite and positive"));
        }
        if !(self.eps_stop > 0.0 && self.eps_stop < 1.0) {
            return Err(bad_config("eps_stop", self.eps_stop, "must lie in (0, 1)"));
        }
        if self.n_streams == 0 {
            return Err(bad_config("n_streams", 0.0, "need at least one stream"));
        }
        if let Some(h) = self.horizon {
            if !(h > 0.0) {
                return Err(bad_config("horizon", h, "must be positive"));
            }
        }
        Ok(())
    }

    /// Grid index nearest `t`, rejecting times below half a step.
    pub(crate) fn grid_index(&self, t: f64) -> Result<u64, McError> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(bad_config("t", t, "time must be finite and positive"));
        }
        let j = (t / self.dt).round();
        if j < 1.0 {
            return Err(bad_config("t", t, "time is below the grid resolution"));
        }
        Ok(j as u64)
    }

    pub(crate) fn horizon_steps(&self) -> Option<u64> {
        self.horizon.map(|h| (h / self.dt).round().max(1.0) as u64)
    }
}

/// Sample mean with its standard error and provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√n`; zero when `n = 1`.
    pub std_error: f64,
    pub n: u64,
    pub seed: u64,
    /// Smallest and largest per-path value.
    pub min: f64,
    pub max: f64,
}

impl McEstimate {
    /// `|mean - reference| / std_error`, infinite if the error is zero and
    /// the means differ.
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = (self.mean - reference).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }

    /// Whether `reference` lies within `k` standard errors plus `allowance`.
    pub fn agrees_with(&self, reference: f64, k: f64, allowance: f64) -> bool {
        (self.mean - reference).abs() <= k * self.std_error + allowance
    }
}

/// Streaming mean and variance (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Default for Moments {
    fn default() -> Self {
        Self {
            n: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }
}

impl Moments {
    pub(crate) fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub(crate) fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        self.mean += d * w;
        self.m2 += other.m2 + d * d * self.n as f64 * w;
        self.n = n;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub(crate) fn estimate(&self, seed: u64) -> McEstimate {
        let std_error = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64).sqrt() / (self.n as f64).sqrt()
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_error,
            n: self.n,
            seed,
            min: self.min,
            max: self.max,
        }
    }
}

pub(crate) fn merge_all<'a, I: IntoIterator<Item = &'a Moments>>(parts: I) -> Moments {
    let mut total = Moments::default();
    for p in parts {
        total.merge(p);
    }
    total
}

/// Generator for substream `stream` of `seed`.
pub(crate) fn stream_rng(seed: u64, stream: usize) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Number of paths substream `s` of `streams` owns, and the global index of
/// its first path.
pub(crate) fn stream_share(n: u64, streams: usize, s: usize) -> (u64, u64) {
    let k = streams as u64;
    let (q, r) = (n / k, n % k);
    let s = s as u64;
    let len = q + u64::from(s < r);
    let first = s * q + s.min(r);
    (len, first)
}

/// Runs independent substream jobs. Implementations may run them in any
/// order or concurrently but must return results indexed by substream.
pub trait Executor {
    fn run_streams<T, F>(&self, n_streams: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

/// Runs substreams one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn run_streams<T, F>(&self, n_streams: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..n_streams).map(job).collect()
    }
}
