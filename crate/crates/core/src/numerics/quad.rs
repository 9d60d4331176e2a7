//! Adaptive Simpson quadrature with a Richardson error estimate.

use alloc::vec::Vec;

use super::NumericsError;

/// Value of a definite integral together with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of the per-panel Richardson corrections; always nonnegative.
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Controls for [`adaptive_quad_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub tol: f64,
    /// Maximum bisection depth below each initial panel.
    pub max_depth: u32,
    /// Equal-width panels the interval is cut into before adapting. A handful
    /// keeps a narrow peak from slipping between the first five samples.
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            max_depth: 60,
            initial_panels: 8,
        }
    }
}

/// Integrates `f` over `[lo, hi]` with the default depth and panel count.
///
/// The result satisfies `|value - I| <= max(tol, tol·|value|)` for smooth
/// integrands.
pub fn adaptive_quad<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    adaptive_quad_with(
        f,
        lo,
        hi,
        &QuadOptions {
            tol,
            ..QuadOptions::default()
        },
    )
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
}

pub fn adaptive_quad_with<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    opts: &QuadOptions,
) -> Result<QuadResult, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(NumericsError::InvalidInterval { lo, hi });
    }
    if !(opts.tol > 0.0) {
        return Err(NumericsError::Domain {
            what: "quadrature tolerance must be positive",
            value: opts.tol,
        });
    }

    let mut evaluations = 0usize;
    let mut eval = |x: f64| -> Result<f64, NumericsError> {
        evaluations += 1;
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericsError::NonFinite { at: x })
        }
    };

    let panels = opts.initial_panels.max(1);
    let width = (hi - lo) / panels as f64;
    let mut stack: Vec<Panel> = Vec::with_capacity(panels + 2 * opts.max_depth as usize);
    let mut coarse = 0.0;
    let mut fa = eval(lo)?;
    for i in 0..panels {
        let a = lo + width * i as f64;
        let b = if i + 1 == panels {
            hi
        } else {
            lo + width * (i + 1) as f64
        };
        let m = 0.5 * (a + b);
        let fm = eval(m)?;
        let fb = eval(b)?;
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        coarse += whole;
        stack.push(Panel {
            a,
            b,
            fa,
            fm,
            fb,
            whole,
            eps: 0.0,
            depth: 0,
        });
        fa = fb;
    }
    let eps_total = opts.tol.max(opts.tol * coarse.abs());
    for p in stack.iter_mut() {
        p.eps = eps_total * (p.b - p.a) / (hi - lo);
    }
    // Process left to right so the summation order is fixed.
    stack.reverse();

    let mut value = 0.0;
    let mut error_estimate = 0.0;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = eval(lm)?;
        let frm = eval(rm)?;
        let left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
        let right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
        let delta = left + right - p.whole;
        let floor = 4.0 * f64::EPSILON * (left.abs() + right.abs());
        if delta.abs() <= 15.0 * p.eps.max(floor) || m <= p.a || m >= p.b {
            value += left + right + delta / 15.0;
            error_estimate += delta.abs() / 15.0;
            continue;
        }
        if p.depth >= opts.max_depth {
            return Err(NumericsError::QuadratureDiverged {
                depth: opts.max_depth,
                at: m,
            });
        }
        let eps = 0.5 * p.eps;
        let depth = p.depth + 1;
        stack.push(Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
            eps,
            depth,
        });
        stack.push(Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
            eps,
            depth,
        });
    }

    Ok(QuadResult {
        value,
        error_estimate,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_polynomial() {
        let one = adaptive_quad(|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((one.value - 1.0).abs() < 1e-15);
        assert!(one.evaluations >= 3);
        assert!(one.error_estimate >= 0.0);
        let poly = adaptive_quad(|u| u * (1.0 - u), 0.0, 1.0, 1e-12).unwrap();
        assert!((poly.value - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn smooth_transcendental() {
        let r = adaptive_quad(|x| x.exp(), 0.0, 2.0, 1e-12).unwrap();
        let exact = 2.0f64.exp() - 1.0;
        assert!((r.value - exact).abs() <= 1e-12 * exact);
        let g = adaptive_quad(|x| (-x * x).exp(), -8.0, 8.0, 1e-12).unwrap();
        assert!((g.value - core::f64::consts::PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn narrow_peak_is_not_missed() {
        // a single Simpson panel on [0, 1] sees only the flat part of this peak
        let f = |x: f64| (-(x - 0.3).powi(2) / 2e-4).exp();
        let r = adaptive_quad(f, 0.0, 1.0, 1e-10).unwrap();
        let exact = (2.0 * core::f64::consts::PI * 1e-4).sqrt();
        assert!((r.value - exact).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            adaptive_quad(|x| x, 1.0, 1.0, 1e-10),
            Err(NumericsError::InvalidInterval { .. })
        ));
        assert!(matches!(
            adaptive_quad(|x| 1.0 / x, 0.0, 1.0, 1e-10),
            Err(NumericsError::NonFinite { .. })
        ));
    }

    #[test]
    fn depth_limit_reports_divergence() {
        let opts = QuadOptions {
            tol: 1e-14,
            max_depth: 3,
            initial_panels: 1,
        };
        let r = adaptive_quad_with(|x: f64| x.sqrt(), 0.0, 1.0, &opts);
        assert!(matches!(
            r,
            Err(NumericsError::QuadratureDiverged { depth: 3, .. })
        ));
    }
}
