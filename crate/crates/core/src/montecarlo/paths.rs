use alloc::vec::Vec;

use super::walkers::Walker;
use super::{stream_rng, stream_share, McError, SimConfig, StreamRng};
use crate::models::ModelSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The cap ratio fell to `eps_stop`.
    EpsilonStop,
    /// Brownian motion reached `a`.
    HitTarget,
    /// The configured horizon ran out first.
    Horizon,
}

/// One simulated grid path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    pub times: Vec<f64>,
    /// `M_t`, `B_{t∧T_a}` or `R_t`, matching `times`.
    pub values: Vec<f64>,
    /// Grid estimate of the last passage; `None` when the horizon cut the
    /// path short, since a later passage cannot be ruled out.
    pub last_passage_time: Option<f64>,
    pub termination: Termination,
}

/// Paths of one family, produced lazily substream by substream.
pub struct PathStream {
    walker: Walker,
    cfg: SimConfig,
    horizon_steps: Option<u64>,
    stream: usize,
    left_in_stream: u64,
    rng: StreamRng,
}

impl PathStream {
    fn new(model: &ModelSpec, cfg: &SimConfig) -> Result<Self, McError> {
        let walker = Walker::new(model, cfg)?;
        walker.require_finite_walk(cfg)?;
        Ok(Self {
            walker,
            cfg: *cfg,
            horizon_steps: cfg.horizon_steps(),
            stream: 0,
            left_in_stream: stream_share(cfg.n_paths, cfg.n_streams, 0).0,
            rng: stream_rng(cfg.seed, 0),
        })
    }

    fn walk(&mut self) -> PathRecord {
        let w = &mut self.walker;
        w.reset();
        let dt = self.cfg.dt;
        let mut times = Vec::new();
        let mut values = Vec::new();
        times.push(0.0);
        values.push(w.value());
        let mut last = if w.initial_marker() { Some(0.0) } else { None };
        let mut j = 0u64;
        let termination = loop {
            if w.done() {
                break w.termination();
            }
            if self.horizon_steps.is_some_and(|h| j >= h) {
                break Termination::Horizon;
            }
            let marker = w.step(&mut self.rng);
            j += 1;
            let t = j as f64 * dt;
            times.push(t);
            values.push(w.value());
            if marker {
                last = Some(t);
            }
        };
        if termination == Termination::Horizon {
            last = None;
        }
        PathRecord {
            times,
            values,
            last_passage_time: last,
            termination,
        }
    }
}

impl Iterator for PathStream {
    type Item = PathRecord;

    fn next(&mut self) -> Option<PathRecord> {
        while self.left_in_stream == 0 {
            self.stream += 1;
            if self.stream >= self.cfg.n_streams {
                return None;
            }
            self.left_in_stream = stream_share(self.cfg.n_paths, self.cfg.n_streams, self.stream).0;
            self.rng = stream_rng(self.cfg.seed, self.stream);
        }
        self.left_in_stream -= 1;
        Some(self.walk())
    }
}

/// Grid paths of `M_t = exp(B_t - t/2)` from `M_0 = 1` until `M_t ≤ eps_stop·K`.
pub fn simulate_exp_paths(k: f64, cfg: &SimConfig) -> Result<PathStream, McError> {
    PathStream::new(&ModelSpec::exp(k)?, cfg)
}

/// Grid Brownian paths until `T_a`, with a Brownian-bridge check for
/// crossings of `a` inside a step. Requires `cfg.horizon`.
pub fn simulate_brownian_before_hit(a: f64, cfg: &SimConfig) -> Result<PathStream, McError> {
    PathStream::new(&ModelSpec::brownian_hit(a)?, cfg)
}

/// Grid paths of `R_t = |W_t|` for a `2(mu+1)`-dimensional Brownian motion
/// from 0, until `(a/R_t)^{2mu} ≤ eps_stop`.
pub fn simulate_bessel_paths(mu: f64, a: f64, cfg: &SimConfig) -> Result<PathStream, McError> {
    PathStream::new(&ModelSpec::bessel(mu, a)?, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_paths_start_at_one_and_stop_below_threshold() {
        let cfg = SimConfig {
            n_streams: 3,
            ..SimConfig::new(11, 20, 1e-2)
        };
        let k = 0.5;
        let paths: Vec<_> = simulate_exp_paths(k, &cfg).unwrap().collect();
        assert_eq!(paths.len(), 20);
        for p in &paths {
            assert_eq!(p.values[0], 1.0);
            assert_eq!(p.times.len(), p.values.len());
            assert_eq!(p.termination, Termination::EpsilonStop);
            assert!(*p.values.last().unwrap() <= cfg.eps_stop * k * (1.0 + 1e-12));
            let g = p.last_passage_time.unwrap();
            let j = (g / cfg.dt).round() as usize;
            assert_eq!(p.times[j], g);
            // the recorded point is the later end of a sign change
            assert!((p.values[j] >= k) != (p.values[j - 1] >= k));
            assert!(p.values[j..].iter().all(|&v| v < k));
            assert!(p.times.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn brownian_last_zero_precedes_hit() {
        let cfg = SimConfig {
            horizon: Some(400.0),
            ..SimConfig::new(12, 50, 1e-3)
        };
        let a = 1.0;
        let mut hits = 0;
        for p in simulate_brownian_before_hit(a, &cfg).unwrap() {
            match p.termination {
                Termination::HitTarget => {
                    hits += 1;
                    let t_a = *p.times.last().unwrap();
                    let g = p.last_passage_time.unwrap();
                    assert!(g < t_a);
                    let j = (g / cfg.dt).round() as usize;
                    assert!(p.values[j] <= 0.0);
                    assert!(p.values[j + 1..p.values.len() - 1]
                        .iter()
                        .all(|&b| b > 0.0 && b < a));
                    assert_eq!(*p.values.last().unwrap(), a);
                }
                Termination::Horizon => assert!(p.last_passage_time.is_none()),
                Termination::EpsilonStop => unreachable!(),
            }
        }
        assert!(hits > 40);
        assert!(simulate_brownian_before_hit(a, &SimConfig::new(1, 1, 1e-3)).is_err());
        assert!(simulate_brownian_before_hit(0.0, &cfg).is_err());
    }

    #[test]
    fn bessel_paths_are_transient_and_nonnegative() {
        let cfg = SimConfig::new(13, 30, 1e-3);
        let (mu, a) = (6.5, 1.0);
        let stop = a * cfg.eps_stop.powf(-1.0 / (2.0 * mu));
        for p in simulate_bessel_paths(mu, a, &cfg).unwrap() {
            assert_eq!(p.values[0], 0.0);
            assert!(p.values.iter().all(|&r| r >= 0.0));
            assert_eq!(p.termination, Termination::EpsilonStop);
            assert!(*p.values.last().unwrap() >= stop * (1.0 - 1e-12));
            assert!(p.last_passage_time.is_some());
        }
        assert!(simulate_bessel_paths(0.3, 1.0, &cfg).is_err());
    }

    #[test]
    fn streams_are_reproducible() {
        let cfg = SimConfig {
            n_streams: 4,
            ..SimConfig::new(99, 9, 1e-2)
        };
        let a: Vec<_> = simulate_exp_paths(1.0, &cfg).unwrap().collect();
        let b: Vec<_> = simulate_exp_paths(1.0, &cfg).unwrap().collect();
        assert_eq!(a, b);
    }
}
