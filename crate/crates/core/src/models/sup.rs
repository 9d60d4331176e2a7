use alloc::vec::Vec;

use num_traits::Float;

use super::{check_level, check_time, invalid, m_of, ModelError, ModelSpec};
use crate::numerics::maximize_1d;

/// Time window scanned by [`sup_m`].
pub const SUP_WINDOW: (f64, f64) = (1e-6, 1e6);
const SCAN_POINTS: usize = 200;
const LOG_ABSCISSA_TOL: f64 = 1e-8;

/// Relative neighbourhood `t*(1 ± SUP_CERTIFY_REL)` on which `m_star`
/// dominates `m`; reported as [`SupResult::method_tolerance`].
pub const SUP_CERTIFY_REL: f64 = 1e-6;

/// `m* = sup_t m(t)` and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupResult {
    pub model: ModelSpec,
    pub t_star: f64,
    pub m_star: f64,
    pub method_tolerance: f64,
}

/// Sampled `(t, m(t))` pairs, strictly increasing in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct NstCurve {
    pub model: ModelSpec,
    pub points: Vec<(f64, f64)>,
}

/// Evaluates `m` at each of `times`, which must be nonnegative and strictly
/// increasing.
pub fn sample_curve(model: &ModelSpec, times: &[f64]) -> Result<NstCurve, ModelError> {
    model.validate()?;
    let mut points = Vec::with_capacity(times.len());
    let mut prev = f64::NEG_INFINITY;
    for &t in times {
        check_time(t)?;
        if !(t > prev) {
            return Err(invalid("t", t, "sample times must be strictly increasing"));
        }
        prev = t;
        points.push((t, m_of(model, t)?));
    }
    Ok(NstCurve {
        model: *model,
        points,
    })
}

/// Maximizes `m` over `t ∈ [1e-6, 1e6]`.
///
/// A 200-point logarithmic scan locates the peak; Brent's method then
/// refines it in `ln t` between the neighbours of the best scan point.
/// A peak on the window edge is an error, since the supremum may lie
/// outside.
pub fn sup_m(model: &ModelSpec) -> Result<SupResult, ModelError> {
    model.validate()?;
    let (lo, hi) = (SUP_WINDOW.0.ln(), SUP_WINDOW.1.ln());
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..SCAN_POINTS {
        let m = m_of(model, (lo + step * i as f64).exp())?;
        if m > best.1 {
            best = (i, m);
        }
    }
    let i = best.0;
    if i == 0 || i == SCAN_POINTS - 1 {
        return Err(ModelError::EdgeMaximum {
            t: (lo + step * i as f64).exp(),
        });
    }
    let bracket = (lo + step * (i - 1) as f64, lo + step * (i + 1) as f64);

    // m_of only fails on invalid input, which was ruled out above
    let objective = |s: f64| m_of(model, s.exp()).unwrap_or(f64::NAN);
    let refined = maximize_1d(objective, bracket, LOG_ABSCISSA_TOL)?;
    if refined.at_edge() {
        return Err(ModelError::EdgeMaximum {
            t: refined.argmax.exp(),
        });
    }
    Ok(SupResult {
        model: *model,
        t_star: refined.argmax.exp(),
        m_star: refined.max_value,
        method_tolerance: SUP_CERTIFY_REL,
    })
}

/// `(K, t*, m*)` rows over a grid of levels, plus whether `K ↦ m*_K` is
/// nondecreasing on that grid. The flag is an observation, not a claim.
#[derive(Debug, Clone, PartialEq)]
pub struct KStarReport {
    pub rows: Vec<SupResult>,
    pub monotone_nondecreasing: bool,
}

pub fn kstar_experiment(k_grid: &[f64]) -> Result<KStarReport, ModelError> {
    let mut prev = 0.0;
    for &k in k_grid {
        check_level(k)?;
        if !(k > prev) {
            return Err(invalid("K", k, "grid must be strictly increasing"));
        }
        prev = k;
    }
    let rows = k_grid
        .iter()
        .map(|&k| sup_m(&ModelSpec::ExpLastPassage { k }))
        .collect::<Result<Vec<_>, _>>()?;
    let monotone_nondecreasing = rows.windows(2).all(|w| w[1].m_star >= w[0].m_star);
    Ok(KStarReport {
        rows,
        monotone_nondecreasing,
    })
}
