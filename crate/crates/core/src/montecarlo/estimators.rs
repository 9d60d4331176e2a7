use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use super::walkers::{ExpWalker, Walker};
use super::{
    bad_config, merge_all, stream_rng, stream_share, Executor, McError, McEstimate, Moments, Sequential,
    SimConfig, StreamRng,
};
use crate::models::ModelSpec;

/// Substreams used by the samplers that take only `(n, seed)`.
pub const SAMPLER_STREAMS: usize = 16;

/// Both sides of `m(t) = E[Z_t(1 - Z_t)] = E[(1_{G≥t} - Z_t)²]` on shared
/// paths, plus their per-path difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityEstimate {
    pub z_form: McEstimate,
    pub indicator_form: McEstimate,
    pub difference: McEstimate,
}

impl IdentityEstimate {
    /// `√(se₁² + se₂²)`, which ignores the positive correlation of the two
    /// sides and so overstates the error of their difference.
    pub fn combined_se(&self) -> f64 {
        self.z_form.std_error.hypot(self.indicator_form.std_error)
    }

    pub fn gap(&self) -> f64 {
        (self.z_form.mean - self.indicator_form.mean).abs()
    }
}

/// Estimators bound to an [`Executor`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Engine<E = Sequential> {
    exec: E,
}

impl Engine<Sequential> {
    pub fn sequential() -> Self {
        Self { exec: Sequential }
    }
}

/// Key interval outside which `Z(1 - Z)` cannot exceed `floor`, widened
/// slightly so rounding never excludes a candidate.
fn improvement_window(w: &Walker, floor: f64) -> (f64, f64) {
    let gap = (0.25 - floor).max(0.0).sqrt() * (1.0 + 1e-6) + 1e-12;
    let lo = if gap >= 0.5 {
        f64::NEG_INFINITY
    } else {
        w.key_of_z(0.5 - gap)
    };
    let hi = w.key_of_z((0.5 + gap).min(1.0));
    let pad = 1e-9 * (1.0 + lo.abs().max(hi.abs()).min(1e300));
    (lo - pad, hi + pad)
}

/// Running per-stride maxima of `Z(1 - Z)` along one path.
struct SupTracker<'a> {
    strides: &'a [usize],
    best: Vec<f64>,
    /// Keys strictly inside this interval could raise some maximum; only
    /// they need `Z` evaluated.
    window: (f64, f64),
}

impl<'a> SupTracker<'a> {
    fn new(strides: &'a [usize]) -> Self {
        Self {
            strides,
            best: vec![0.0; strides.len()],
            window: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    fn reset(&mut self, w: &Walker) {
        self.best.iter_mut().for_each(|b| *b = 0.0);
        self.window = (f64::NEG_INFINITY, w.key_of_z(1.0));
    }

    #[inline]
    fn offer(&mut self, w: &Walker, j: u64, key: f64, z: impl FnOnce() -> f64) {
        if key <= self.window.0 || key >= self.window.1 {
            return;
        }
        let z = z();
        let v = z * (1.0 - z);
        let mut floor = f64::INFINITY;
        for (b, &s) in self.best.iter_mut().zip(self.strides) {
            if j.is_multiple_of(s as u64) {
                *b = b.max(v);
            }
            floor = floor.min(*b);
        }
        self.window = improvement_window(w, floor);
    }
}

fn sup_stepwise(w: &mut Walker, rng: &mut StreamRng, tracker: &mut SupTracker, horizon: Option<u64>) {
    let mut j = 0u64;
    while !w.done() && horizon.is_none_or(|h| j < h) {
        w.step(rng);
        j += 1;
        let key = w.key();
        tracker.offer(w, j, key, || w.z());
    }
}

// Steps per block drawn in one go by `exp_sup_blocks`.
const BLOCK_STEPS: u64 = 1024;
// A bridge leaves a safe band with probability at most e^{-BRIDGE_SKIP}.
const BRIDGE_SKIP: f64 = 40.0;

#[derive(Clone, Copy)]
struct Block {
    j0: u64,
    x0: f64,
    j1: u64,
    x1: f64,
}

/// The exponential-family path of [`sup_stepwise`], built top down.
///
/// `ln M` is a Brownian motion with drift, so the grid value `BLOCK_STEPS`
/// ahead is one Gaussian draw, and the grid points inside a block follow
/// by bisecting the Brownian bridge between its ends (the drift drops out
/// of the bridge). A block is only bisected while its bridge could reach
/// the improvement window or the stop level; otherwise its interior can
/// neither raise a maximum nor end the path and is never drawn. The grid
/// path has the same law as the stepwise one.
fn exp_sup_blocks(
    w: &Walker,
    e: &ExpWalker,
    rng: &mut StreamRng,
    tracker: &mut SupTracker,
    stack: &mut Vec<Block>,
) {
    let dt = 2.0 * e.drift;
    let (mut j, mut x) = (0u64, 0.0f64);
    loop {
        let n: f64 = rng.sample(StandardNormal);
        let m = BLOCK_STEPS as f64;
        let x_end = x + e.sd * m.sqrt() * n - e.drift * m;
        stack.clear();
        stack.push(Block {
            j0: j,
            x0: x,
            j1: j + BLOCK_STEPS,
            x1: x_end,
        });
        while let Some(b) = stack.pop() {
            let len = b.j1 - b.j0;
            if len == 1 {
                let key = b.x1 - e.ln_k;
                tracker.offer(w, b.j1, key, || key.exp().min(1.0));
                if b.x1 <= e.ln_stop {
                    return;
                }
                continue;
            }
            let span = len as f64 * dt;
            let lo = tracker.window.0 + e.ln_k;
            let hi = tracker.window.1 + e.ln_k;
            let clear_of_stop = b.x0 > e.ln_stop
                && b.x1 > e.ln_stop
                && 2.0 * (b.x0 - e.ln_stop) * (b.x1 - e.ln_stop) >= BRIDGE_SKIP * span;
            let safe_above =
                b.x0 >= hi && b.x1 >= hi && 2.0 * (b.x0 - hi) * (b.x1 - hi) >= BRIDGE_SKIP * span;
            let safe_below =
                b.x0 <= lo && b.x1 <= lo && 2.0 * (lo - b.x0) * (lo - b.x1) >= BRIDGE_SKIP * span;
            if clear_of_stop && (safe_above || safe_below) {
                continue;
            }
            let left = len / 2;
            let frac = left as f64 / len as f64;
            let sd = ((left * (len - left)) as f64 / len as f64 * dt).sqrt();
            let n: f64 = rng.sample(StandardNormal);
            let xm = b.x0 + (b.x1 - b.x0) * frac + sd * n;
            let jm = b.j0 + left;
            stack.push(Block {
                j0: jm,
                x0: xm,
                j1: b.j1,
                x1: b.x1,
            });
            stack.push(Block {
                j0: b.j0,
                x0: b.x0,
                j1: jm,
                x1: xm,
            });
        }
        j += BLOCK_STEPS;
        x = x_end;
    }
}

/// First grid index in `(j0, j1]` where the exponential-family path is at or
/// below `lo` or at or above `hi`, given its values at both ends, with the
/// value there. Interior points are drawn by bridge bisection only where the
/// bridge could leave the band.
#[allow(clippy::too_many_arguments)]
fn exp_first_exit(
    rng: &mut StreamRng,
    dt: f64,
    from: (u64, f64),
    to: (u64, f64),
    lo: f64,
    hi: f64,
    stack: &mut Vec<Block>,
) -> Option<(u64, f64)> {
    stack.clear();
    stack.push(Block {
        j0: from.0,
        x0: from.1,
        j1: to.0,
        x1: to.1,
    });
    while let Some(b) = stack.pop() {
        let len = b.j1 - b.j0;
        if len == 0 {
            continue;
        }
        if len == 1 {
            if b.x1 <= lo || b.x1 >= hi {
                return Some((b.j1, b.x1));
            }
            continue;
        }
        let span = len as f64 * dt;
        let inside = b.x0 > lo && b.x1 > lo && b.x0 < hi && b.x1 < hi;
        if inside
            && 2.0 * (b.x0 - lo) * (b.x1 - lo) >= BRIDGE_SKIP * span
            && 2.0 * (hi - b.x0) * (hi - b.x1) >= BRIDGE_SKIP * span
        {
            continue;
        }
        let (xm, jm) = bridge_point(rng, dt, &b, len / 2);
        stack.push(Block {
            j0: jm,
            x0: xm,
            j1: b.j1,
            x1: b.x1,
        });
        stack.push(Block {
            j0: b.j0,
            x0: b.x0,
            j1: jm,
            x1: xm,
        });
    }
    None
}

/// Grid value `left` steps into block `b`, drawn from the bridge.
#[inline]
fn bridge_point(rng: &mut StreamRng, dt: f64, b: &Block, left: u64) -> (f64, u64) {
    let len = b.j1 - b.j0;
    let frac = left as f64 / len as f64;
    let sd = ((left * (len - left)) as f64 / len as f64 * dt).sqrt();
    let n: f64 = rng.sample(StandardNormal);
    (b.x0 + (b.x1 - b.x0) * frac + sd * n, b.j0 + left)
}

/// `(Z_t, 1_{G≥t})` for one path walked step by step.
fn stepwise_identity_path(w: &mut Walker, n_t: u64, rng: &mut StreamRng) -> (f64, bool) {
    w.reset();
    let mut terminated = false;
    let mut marker = false;
    for _ in 0..n_t {
        terminated |= w.done();
        marker = w.step(rng);
    }
    let z = w.z();
    if terminated {
        return (z, false);
    }
    if marker {
        return (z, true);
    }
    loop {
        if w.passage_certain() {
            return (z, true);
        }
        if w.done() {
            return (z, false);
        }
        if w.step(rng) {
            return (z, true);
        }
    }
}

/// `(Z_t, 1_{G≥t})` for one exponential-family path, built top down: the
/// values at the last two grid points up to `t` first, then only as much of
/// the path as decides termination before `t` and the passage after it.
fn exp_identity_path(e: &ExpWalker, n_t: u64, rng: &mut StreamRng, stack: &mut Vec<Block>) -> (f64, bool) {
    let dt = 2.0 * e.drift;
    let gauss = |rng: &mut StreamRng, m: u64| {
        let n: f64 = rng.sample(StandardNormal);
        e.sd * (m as f64).sqrt() * n - e.drift * m as f64
    };
    let x_t = gauss(rng, n_t);
    let x_prev = if n_t == 1 {
        0.0
    } else {
        bridge_point(
            rng,
            dt,
            &Block {
                j0: 0,
                x0: 0.0,
                j1: n_t,
                x1: x_t,
            },
            n_t - 1,
        )
        .0
    };
    let z = (x_t - e.ln_k).exp().min(1.0);
    let terminated = n_t > 1
        && exp_first_exit(
            rng,
            dt,
            (0, 0.0),
            (n_t - 1, x_prev),
            e.ln_stop,
            f64::INFINITY,
            stack,
        )
        .is_some();
    if terminated {
        return (z, false);
    }
    let above = x_t >= e.ln_k;
    if above || (x_prev >= e.ln_k) != above {
        return (z, true);
    }
    let (mut j, mut x) = (n_t, x_t);
    loop {
        let x_end = x + gauss(rng, BLOCK_STEPS);
        if let Some((_, hit)) = exp_first_exit(
            rng,
            dt,
            (j, x),
            (j + BLOCK_STEPS, x_end),
            e.ln_stop,
            e.ln_k,
            stack,
        ) {
            return (z, hit >= e.ln_k);
        }
        j += BLOCK_STEPS;
        x = x_end;
    }
}

fn check_strides(strides: &[usize]) -> Result<(), McError> {
    if strides.is_empty() || strides.contains(&0) {
        return Err(bad_config("stride", 0.0, "need at least one positive stride"));
    }
    Ok(())
}

/// One exact draw of `(S₁, B₁)`: `B₁ ~ N(0,1)`, then `S₁` from the
/// conditional tail `P(S₁ > x | B₁ = b) = exp(-2x(x - b))`, `x ≥ b⁺`.
#[inline]
fn draw_joint_max(rng: &mut StreamRng) -> (f64, f64) {
    let b: f64 = rng.sample(StandardNormal);
    let u: f64 = rng.random();
    let e = -(-u).ln_1p();
    let s = 0.5 * (b + (b * b + 2.0 * e).sqrt());
    (s.max(b.max(0.0)), b)
}

impl<E: Executor> Engine<E> {
    pub fn new(exec: E) -> Self {
        Self { exec }
    }

    /// Runs `job(rng, paths, first_path)` on every substream and returns the
    /// partial results in substream order.
    fn per_stream<T, F>(&self, seed: u64, n: u64, streams: usize, job: F) -> Result<Vec<T>, McError>
    where
        T: Send,
        F: Fn(&mut StreamRng, u64, u64) -> Result<T, McError> + Sync,
    {
        let parts = self.exec.run_streams(streams, |s| {
            let (len, first) = stream_share(n, streams, s);
            let mut rng = stream_rng(seed, s);
            job(&mut rng, len, first)
        });
        parts.into_iter().collect()
    }

    /// `E[Z_t(1 - Z_t)]` at each of `times` from the same grid paths.
    pub fn m_path(
        &self,
        model: &ModelSpec,
        times: &[f64],
        cfg: &SimConfig,
    ) -> Result<Vec<McEstimate>, McError> {
        Walker::new(model, cfg)?;
        let mut targets: Vec<(u64, usize)> = times
            .iter()
            .enumerate()
            .map(|(i, &t)| cfg.grid_index(t).map(|j| (j, i)))
            .collect::<Result<_, _>>()?;
        targets.sort_unstable();
        let last = targets.last().map_or(0, |t| t.0);
        let parts = self.per_stream(cfg.seed, cfg.n_paths, cfg.n_streams, |rng, len, _| {
            let mut w = Walker::new(model, cfg)?;
            let mut acc = vec![Moments::default(); times.len()];
            for _ in 0..len {
                w.reset();
                let mut next = 0;
                for j in 1..=last {
                    w.step(rng);
                    while next < targets.len() && targets[next].0 == j {
                        let z = w.z();
                        acc[targets[next].1].push(z * (1.0 - z));
                        next += 1;
                    }
                }
            }
            Ok(acc)
        })?;
        Ok((0..times.len())
            .map(|i| merge_all(parts.iter().map(|p| &p[i])).estimate(cfg.seed))
            .collect())
    }

    /// Shared-path estimates of `E[Z_t(1-Z_t)]` and `E[(1_{G≥t} - Z_t)²]`.
    ///
    /// A path is followed only until `1_{G≥t}` is settled: a marker at or
    /// after `t`, or a state from which one is certain, settles it to 1;
    /// termination settles it to 0. The outcome equals that of the full
    /// path. Exponential paths are built top down by bridge bisection, so a
    /// fine `dt` costs little. Bessel paths need an integer dimension and, for small `mu`,
    /// a generous `eps_stop`, since the stop radius is `a·eps_stop^{-1/2mu}`.
    pub fn m_identity(
        &self,
        model: &ModelSpec,
        t: f64,
        cfg: &SimConfig,
    ) -> Result<IdentityEstimate, McError> {
        Walker::new(model, cfg)?;
        let n_t = cfg.grid_index(t)?;
        let parts = self.per_stream(cfg.seed, cfg.n_paths, cfg.n_streams, |rng, len, _| {
            let mut w = Walker::new(model, cfg)?;
            let mut acc = [Moments::default(); 3];
            let mut stack = Vec::new();
            for _ in 0..len {
                let (z, settled) = match &w {
                    Walker::Exp(e) => exp_identity_path(e, n_t, rng, &mut stack),
                    _ => stepwise_identity_path(&mut w, n_t, rng),
                };
                let ind = if settled { 1.0 } else { 0.0 };
                let lhs = z * (1.0 - z);
                let rhs = (ind - z) * (ind - z);
                acc[0].push(lhs);
                acc[1].push(rhs);
                acc[2].push(lhs - rhs);
            }
            Ok(acc)
        })?;
        let est = |i: usize| merge_all(parts.iter().map(|p| &p[i])).estimate(cfg.seed);
        Ok(IdentityEstimate {
            z_form: est(0),
            indicator_form: est(1),
            difference: est(2),
        })
    }

    /// `E[Z_t(1 - Z_t)]` from exact draws of the time-`t` marginal: a
    /// lognormal `M_t`, or `R_t² = 2tγ` with `γ ~ Gamma(mu + 1, 1)`.
    pub fn m_marginal(&self, model: &ModelSpec, t: f64, n: u64, seed: u64) -> Result<McEstimate, McError> {
        model.validate()?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(bad_config("t", t, "time must be finite and positive"));
        }
        if n == 0 {
            return Err(bad_config("n", 0.0, "need at least one sample"));
        }
        let parts = match *model {
            ModelSpec::ExpLastPassage { k } => {
                let (s, shift) = (t.sqrt(), -0.5 * t - k.ln());
                self.per_stream(seed, n, SAMPLER_STREAMS, |rng, len, _| {
                    let mut acc = Moments::default();
                    for _ in 0..len {
                        let g: f64 = rng.sample(StandardNormal);
                        let z = (s * g + shift).exp().min(1.0);
                        acc.push(z * (1.0 - z));
                    }
                    Ok(acc)
                })?
            }
            ModelSpec::BesselLastPassage { mu, a } => {
                let ln_zarg = (a * a / (2.0 * t)).ln();
                let gamma = Gamma::new(mu + 1.0, 1.0)
                    .map_err(|_| bad_config("mu", mu, "gamma shape out of range"))?;
                self.per_stream(seed, n, SAMPLER_STREAMS, |rng, len, _| {
                    let mut acc = Moments::default();
                    for _ in 0..len {
                        let g: f64 = gamma.sample(rng);
                        let z = (mu * (ln_zarg - g.ln())).exp().min(1.0);
                        acc.push(z * (1.0 - z));
                    }
                    Ok(acc)
                })?
            }
            ModelSpec::BrownianBeforeHit { .. } => {
                return Err(McError::Unsupported(
                    "Z_t of the Brownian model needs the running maximum; use the joint sampler",
                ))
            }
        };
        Ok(merge_all(parts.iter()).estimate(seed))
    }

    /// `n` exact draws of `(S₁, B₁)`, substreams concatenated in order.
    pub fn joint_max(&self, n: u64, seed: u64) -> Result<Vec<(f64, f64)>, McError> {
        let parts = self.per_stream(seed, n, SAMPLER_STREAMS, |rng, len, _| {
            Ok((0..len).map(|_| draw_joint_max(rng)).collect::<Vec<_>>())
        })?;
        Ok(parts.concat())
    }

    /// Mean of `1_{S₁<x} 1_{B₁>0} B₁(x - B₁)` over exact joint draws.
    pub fn phi_brownian(&self, x: f64, n: u64, seed: u64) -> Result<McEstimate, McError> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(bad_config("x", x, "must be finite and positive"));
        }
        if n == 0 {
            return Err(bad_config("n", 0.0, "need at least one sample"));
        }
        let parts = self.per_stream(seed, n, SAMPLER_STREAMS, |rng, len, _| {
            let mut acc = Moments::default();
            for _ in 0..len {
                let (s, b) = draw_joint_max(rng);
                acc.push(if s < x && b > 0.0 { b * (x - b) } else { 0.0 });
            }
            Ok(acc)
        })?;
        Ok(merge_all(parts.iter()).estimate(seed))
    }

    /// Mean over paths of `max Z(1 - Z)` on the grids of step `s·dt`, one
    /// estimate per stride `s`, all from the same paths at step `dt`. A
    /// coarser grid is a subset of a finer one, so per path the maxima are
    /// ordered the same way as the strides.
    pub fn sup_zz_refined(
        &self,
        model: &ModelSpec,
        cfg: &SimConfig,
        strides: &[usize],
    ) -> Result<Vec<McEstimate>, McError> {
        check_strides(strides)?;
        Walker::new(model, cfg)?.require_finite_walk(cfg)?;
        let horizon = cfg.horizon_steps();
        let parts = self.per_stream(cfg.seed, cfg.n_paths, cfg.n_streams, |rng, len, _| {
            let mut w = Walker::new(model, cfg)?;
            let mut acc = vec![Moments::default(); strides.len()];
            let mut tracker = SupTracker::new(strides);
            let mut stack = Vec::new();
            for _ in 0..len {
                w.reset();
                tracker.reset(&w);
                match &w {
                    Walker::Exp(e) if horizon.is_none() => {
                        exp_sup_blocks(&w, e, rng, &mut tracker, &mut stack)
                    }
                    _ => sup_stepwise(&mut w, rng, &mut tracker, horizon),
                }
                for (a, &b) in acc.iter_mut().zip(tracker.best.iter()) {
                    a.push(b);
                }
            }
            Ok(acc)
        })?;
        Ok((0..strides.len())
            .map(|i| merge_all(parts.iter().map(|p| &p[i])).estimate(cfg.seed))
            .collect())
    }

    pub fn sup_zz(&self, model: &ModelSpec, cfg: &SimConfig) -> Result<McEstimate, McError> {
        Ok(self.sup_zz_refined(model, cfg, &[1])?[0])
    }

    /// Mean of `Z_T(1 - Z_T)` with `T` the first point of the grid of step
    /// `s·dt` where `Z ≤ level`, one estimate per stride, on shared paths.
    /// Paths are followed past their termination rule until every grid has
    /// seen the level.
    pub fn level_hit_refined(
        &self,
        model: &ModelSpec,
        level: f64,
        cfg: &SimConfig,
        strides: &[usize],
    ) -> Result<Vec<McEstimate>, McError> {
        check_strides(strides)?;
        if !(level > 0.0 && level < 1.0) {
            return Err(bad_config("level", level, "must lie in (0, 1)"));
        }
        let w0 = Walker::new(model, cfg)?;
        w0.require_finite_walk(cfg)?;
        if !matches!(w0, Walker::Bhit(_)) && level <= cfg.eps_stop {
            return Err(bad_config("level", level, "must exceed eps_stop"));
        }
        let horizon = cfg.horizon_steps();
        let level_key = {
            let k = w0.key_of_z(level);
            k + 1e-9 * (1.0 + k.abs())
        };
        let parts = self.per_stream(cfg.seed, cfg.n_paths, cfg.n_streams, |rng, len, first| {
            let mut w = Walker::new(model, cfg)?;
            let mut acc = vec![Moments::default(); strides.len()];
            let mut found: Vec<Option<f64>> = vec![None; strides.len()];
            for p in 0..len {
                w.reset();
                found.iter_mut().for_each(|f| *f = None);
                let mut pending = strides.len();
                let mut j = 0u64;
                while pending > 0 {
                    if horizon.is_some_and(|h| j >= h) {
                        return Err(McError::LevelNotReached { path: first + p });
                    }
                    w.step(rng);
                    j += 1;
                    if w.key() > level_key {
                        continue;
                    }
                    let z = w.z();
                    if z > level {
                        continue;
                    }
                    for (f, &s) in found.iter_mut().zip(strides) {
                        if f.is_none() && j.is_multiple_of(s as u64) {
                            *f = Some(z * (1.0 - z));
                            pending -= 1;
                        }
                    }
                }
                for (a, f) in acc.iter_mut().zip(found.iter()) {
                    a.push(f.unwrap_or(f64::NAN));
                }
            }
            Ok(acc)
        })?;
        Ok((0..strides.len())
            .map(|i| merge_all(parts.iter().map(|p| &p[i])).estimate(cfg.seed))
            .collect())
    }

    pub fn level_hit(&self, model: &ModelSpec, level: f64, cfg: &SimConfig) -> Result<McEstimate, McError> {
        Ok(self.level_hit_refined(model, level, cfg, &[1])?[0])
    }
}

/// [`Engine::m_identity`] on the calling thread.
pub fn estimate_m_identity(model: &ModelSpec, t: f64, cfg: &SimConfig) -> Result<IdentityEstimate, McError> {
    Engine::sequential().m_identity(model, t, cfg)
}

/// [`Engine::m_path`] on the calling thread.
pub fn estimate_m_path(
    model: &ModelSpec,
    times: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<McEstimate>, McError> {
    Engine::sequential().m_path(model, times, cfg)
}

/// [`Engine::m_marginal`] on the calling thread.
pub fn estimate_m_marginal(model: &ModelSpec, t: f64, n: u64, seed: u64) -> Result<McEstimate, McError> {
    Engine::sequential().m_marginal(model, t, n, seed)
}

/// [`Engine::joint_max`] on the calling thread.
pub fn sample_joint_max(n: u64, seed: u64) -> Result<Vec<(f64, f64)>, McError> {
    Engine::sequential().joint_max(n, seed)
}

/// [`Engine::phi_brownian`] on the calling thread.
pub fn estimate_phi_brownian(x: f64, n: u64, seed: u64) -> Result<McEstimate, McError> {
    Engine::sequential().phi_brownian(x, n, seed)
}

/// [`Engine::sup_zz`] on the calling thread.
pub fn estimate_sup_zz(model: &ModelSpec, cfg: &SimConfig) -> Result<McEstimate, McError> {
    Engine::sequential().sup_zz(model, cfg)
}

/// [`Engine::sup_zz_refined`] on the calling thread.
pub fn estimate_sup_zz_refined(
    model: &ModelSpec,
    cfg: &SimConfig,
    strides: &[usize],
) -> Result<Vec<McEstimate>, McError> {
    Engine::sequential().sup_zz_refined(model, cfg, strides)
}

/// [`Engine::level_hit`] on the calling thread.
pub fn estimate_at_level_hit(model: &ModelSpec, level: f64, cfg: &SimConfig) -> Result<McEstimate, McError> {
    Engine::sequential().level_hit(model, level, cfg)
}

/// [`Engine::level_hit_refined`] on the calling thread.
pub fn estimate_at_level_hit_refined(
    model: &ModelSpec,
    level: f64,
    cfg: &SimConfig,
    strides: &[usize],
) -> Result<Vec<McEstimate>, McError> {
    Engine::sequential().level_hit_refined(model, level, cfg, strides)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{m_exp, phi_brownian, phi_mu};
    use crate::numerics::normal_cdf;

    /// Runs substreams last to first, to show the schedule does not matter.
    struct Reversed;

    impl Executor for Reversed {
        fn run_streams<T, F>(&self, n_streams: usize, job: F) -> Vec<T>
        where
            T: Send,
            F: Fn(usize) -> T + Sync,
        {
            let mut out: Vec<T> = (0..n_streams).rev().map(job).collect();
            out.reverse();
            out
        }
    }

    fn exp_half() -> ModelSpec {
        ModelSpec::exp(0.5).unwrap()
    }

    #[test]
    fn schedule_does_not_change_results() {
        let cfg = SimConfig::new(42, 300, 1e-2);
        let m = exp_half();
        let a = Engine::sequential().m_identity(&m, 1.0, &cfg).unwrap();
        let b = Engine::new(Reversed).m_identity(&m, 1.0, &cfg).unwrap();
        assert_eq!(a, b);
        let a = Engine::sequential().m_marginal(&m, 1.0, 1000, 3).unwrap();
        let b = Engine::new(Reversed).m_marginal(&m, 1.0, 1000, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n, 1000);
        assert_eq!(a.seed, 3);
    }

    #[test]
    fn identity_sides_agree() {
        let cfg = SimConfig::new(7, 20_000, 1e-4);
        let id = estimate_m_identity(&exp_half(), 1.0, &cfg).unwrap();
        assert!(id.gap() <= 3.0 * id.combined_se(), "{id:?}");
        assert_eq!(id.z_form.n, 20_000);
        assert!(
            id.z_form.agrees_with(m_exp(0.5, 1.0).unwrap(), 3.0, 0.0),
            "{id:?}"
        );
    }

    #[test]
    fn top_down_identity_matches_stepwise_law() {
        let cfg = SimConfig::new(9, 1, 1e-2);
        let Walker::Exp(e) = Walker::new(&exp_half(), &cfg).unwrap() else {
            unreachable!()
        };
        let mut w = Walker::new(&exp_half(), &cfg).unwrap();
        let (mut top, mut step) = ([Moments::default(); 2], [Moments::default(); 2]);
        let (mut r1, mut r2) = (stream_rng(9, 0), stream_rng(9, 1));
        let mut stack = Vec::new();
        for _ in 0..40_000 {
            let (z, s) = exp_identity_path(&e, 100, &mut r1, &mut stack);
            top[0].push(z);
            top[1].push(f64::from(u8::from(s)));
            let (z, s) = stepwise_identity_path(&mut w, 100, &mut r2);
            step[0].push(z);
            step[1].push(f64::from(u8::from(s)));
        }
        for i in 0..2 {
            let (a, b) = (top[i].estimate(0), step[i].estimate(0));
            let se = a.std_error.hypot(b.std_error);
            assert!((a.mean - b.mean).abs() < 4.0 * se, "{a:?} {b:?}");
        }
    }

    #[test]
    fn identity_at_the_ends_of_time() {
        let cfg = SimConfig::new(8, 2000, 1e-2);
        let late = estimate_m_identity(&exp_half(), 100.0, &cfg).unwrap();
        assert!(late.z_form.mean < 1e-3 && late.indicator_form.mean < 1e-3);
        let early = estimate_m_identity(&exp_half(), cfg.dt, &cfg).unwrap();
        assert!(early.z_form.mean < 5e-3 && early.indicator_form.mean < 5e-3);
    }

    #[test]
    fn identity_rejects_fractional_bessel_dimension() {
        let cfg = SimConfig::new(1, 10, 1e-2);
        let m = ModelSpec::bessel(0.3, 1.0).unwrap();
        assert!(matches!(
            estimate_m_identity(&m, 1.0, &cfg),
            Err(McError::Unsupported(_))
        ));
    }

    #[test]
    fn marginal_matches_closed_forms() {
        let e = estimate_m_marginal(&ModelSpec::exp(1.0).unwrap(), 1.0, 200_000, 11).unwrap();
        assert!(e.agrees_with(m_exp(1.0, 1.0).unwrap(), 3.0, 0.0), "{e:?}");
        let z = 0.61;
        let b = ModelSpec::bessel(1.0, 1.0).unwrap();
        let e = estimate_m_marginal(&b, 1.0 / (2.0 * z), 200_000, 12).unwrap();
        assert!(e.agrees_with(phi_mu(1.0, z).unwrap(), 3.0, 0.0), "{e:?}");
        let tiny = estimate_m_marginal(&exp_half(), 1e-8, 10_000, 13).unwrap();
        assert!(tiny.mean <= 1e-6);
        let bhit = ModelSpec::brownian_hit(1.0).unwrap();
        assert!(matches!(
            estimate_m_marginal(&bhit, 1.0, 10, 1),
            Err(McError::Unsupported(_))
        ));
    }

    #[test]
    fn joint_max_dominates_and_has_half_normal_mean() {
        let draws = sample_joint_max(1_000_000, 21).unwrap();
        assert_eq!(draws.len(), 1_000_000);
        let mut m = Moments::default();
        for &(s, b) in &draws {
            assert!(s >= b.max(0.0));
            m.push(s);
        }
        let e = m.estimate(21);
        assert!(
            e.agrees_with((2.0 / core::f64::consts::PI).sqrt(), 3.0, 0.0),
            "{e:?}"
        );
    }

    #[test]
    fn joint_max_law_passes_kolmogorov_smirnov() {
        let n = 100_000;
        let mut s: Vec<f64> = sample_joint_max(n, 22)
            .unwrap()
            .into_iter()
            .map(|p| p.0)
            .collect();
        s.sort_by(f64::total_cmp);
        let mut d = 0.0f64;
        for (i, &x) in s.iter().enumerate() {
            let cdf = 2.0 * normal_cdf(x) - 1.0;
            d = d
                .max((cdf - i as f64 / n as f64).abs())
                .max(((i + 1) as f64 / n as f64 - cdf).abs());
        }
        // 1% critical value of the KS statistic
        assert!(d < 1.628 / (n as f64).sqrt(), "D = {d}");
    }

    #[test]
    fn joint_max_conditional_tail() {
        // P(S₁ > 1 | B₁ ≈ 0.5) = e^{-1}, from a narrow bin around b = 0.5
        let mut rng = stream_rng(23, 0);
        let (mut inside, mut above) = (0u64, 0u64);
        for _ in 0..10_000_000 {
            let (s, b) = draw_joint_max(&mut rng);
            if (b - 0.5).abs() < 0.005 {
                inside += 1;
                above += u64::from(s > 1.0);
            }
        }
        let p = above as f64 / inside as f64;
        let want = (-1.0f64).exp();
        let se = (want * (1.0 - want) / inside as f64).sqrt();
        // the ±0.005 bin moves the target by about 0.004·|d/db|·bin², negligible
        assert!((p - want).abs() < 4.0 * se, "{p} vs {want} ± {se}");
    }

    #[test]
    fn phi_estimates_match_quadrature() {
        for (x, seed) in [(1.0, 31), (3.0, 32)] {
            let e = estimate_phi_brownian(x, 1_000_000, seed).unwrap();
            assert!(e.agrees_with(phi_brownian(x).unwrap(), 3.0, 0.0), "x={x}: {e:?}");
        }
        let small = estimate_phi_brownian(1e-6, 10_000, 33).unwrap();
        assert!(small.mean < 1e-11);
        assert!(estimate_phi_brownian(0.0, 10, 1).is_err());
    }

    #[test]
    fn sup_zz_is_bounded_and_refines_upward() {
        let cfg = SimConfig::new(41, 2000, 1e-4);
        let est = estimate_sup_zz_refined(&exp_half(), &cfg, &[100, 10, 1]).unwrap();
        for e in &est {
            assert!(e.max <= 0.25);
        }
        assert!(est[0].mean <= est[1].mean && est[1].mean <= est[2].mean);
        assert!(est[2].mean >= 0.249 && est[2].mean <= 0.25);
    }

    #[test]
    fn block_construction_matches_stepwise_law() {
        // A horizon forces the stepwise walk; it is never reached here.
        let blocks = estimate_sup_zz(&exp_half(), &SimConfig::new(51, 50_000, 1e-2)).unwrap();
        let stepwise = SimConfig {
            horizon: Some(1e9),
            ..SimConfig::new(52, 50_000, 1e-2)
        };
        let steps = estimate_sup_zz(&exp_half(), &stepwise).unwrap();
        let se = blocks.std_error.hypot(steps.std_error);
        assert!(
            (blocks.mean - steps.mean).abs() < 4.0 * se,
            "{blocks:?} {steps:?}"
        );
    }

    #[test]
    fn level_hit_values_sit_at_the_level() {
        let cfg = SimConfig::new(61, 2000, 1e-4);
        let half = estimate_at_level_hit(&exp_half(), 0.5, &cfg).unwrap();
        assert!(half.mean >= 0.2495 && half.max <= 0.25);
        let high = estimate_at_level_hit(&exp_half(), 0.9, &cfg).unwrap();
        // Z stops at or below 0.9, where Z(1 - Z) is decreasing
        assert!(high.min >= 0.09 - 1e-12 && high.max < 0.12);
        assert!(high.mean < half.mean);
        let coarse = estimate_at_level_hit_refined(&exp_half(), 0.5, &cfg, &[100, 1]).unwrap();
        assert!(coarse[0].mean < coarse[1].mean);
        assert!(estimate_at_level_hit(&exp_half(), 1e-5, &cfg).is_err());
        let bhit = ModelSpec::brownian_hit(1.0).unwrap();
        assert!(estimate_at_level_hit(&bhit, 0.5, &cfg).is_err());
    }

    #[test]
    fn stopped_paths_rarely_cross_again() {
        // continue 10^4 paths stopped at eps·K and count returns to K
        let mut cfg = SimConfig::new(71, 1, 1e-2);
        cfg.eps_stop = 1e-2;
        let mut w = Walker::new(&exp_half(), &cfg).unwrap();
        let mut rng = stream_rng(71, 0);
        let n = 10_000;
        let mut returns = 0;
        for _ in 0..n {
            w.reset();
            while !w.done() {
                w.step(&mut rng);
            }
            // far below the stop level a return has probability < 1e-6
            while w.z() > 1e-6 * cfg.eps_stop {
                w.step(&mut rng);
                if w.z() >= 1.0 {
                    returns += 1;
                    break;
                }
            }
        }
        let p = returns as f64 / n as f64;
        let bound = cfg.eps_stop;
        assert!(
            p <= bound + 3.0 * (bound * (1.0 - bound) / n as f64).sqrt(),
            "{p}"
        );
    }

    #[test]
    fn path_estimates_share_paths() {
        let cfg = SimConfig::new(81, 5000, 1e-2);
        let m = exp_half();
        let est = estimate_m_path(&m, &[1.0, 0.2], &cfg).unwrap();
        assert_eq!(est.len(), 2);
        for (e, t) in est.iter().zip([1.0, 0.2]) {
            assert!(e.agrees_with(m_exp(0.5, t).unwrap(), 3.0, 0.0), "t={t}: {e:?}");
        }
        assert!(estimate_m_path(&m, &[1e-3], &cfg).is_err());
    }
}
