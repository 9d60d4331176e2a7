//! Brent's bracketing root finder and Brent's parabolic/golden-section
//! maximizer. Both are deterministic: the same inputs give bitwise-identical
//! outputs.

use num_traits::Float;

use super::NumericsError;

const MAX_ITERATIONS: usize = 500;

/// Converged root of a scalar equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    /// `g(root)`.
    pub residual: f64,
    pub iterations: usize,
    /// Final sign-change bracket, `bracket.0 <= root <= bracket.1`.
    pub bracket: (f64, f64),
}

/// Which end of the search bracket a maximum was pinned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketEdge {
    Low,
    High,
}

/// Location and value of a one-dimensional maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxResult {
    pub argmax: f64,
    pub max_value: f64,
    pub abscissa_tolerance: f64,
    /// Set when the best point is a bracket end; the true maximum may then
    /// lie outside the bracket.
    pub edge: Option<BracketEdge>,
}

impl MaxResult {
    pub fn at_edge(&self) -> bool {
        self.edge.is_some()
    }
}

fn finite_or_err(x: f64, y: f64) -> Result<f64, NumericsError> {
    if y.is_finite() {
        Ok(y)
    } else {
        Err(NumericsError::NonFinite { at: x })
    }
}

/// Finds a root of `g` inside `bracket`, which must straddle a sign change.
///
/// Stops once `|g(root)| <= tol` or the bracket has shrunk to
/// `tol·(1 + |root|)`.
pub fn brent_root<G>(mut g: G, bracket: (f64, f64), tol: f64) -> Result<RootResult, NumericsError>
where
    G: FnMut(f64) -> f64,
{
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(NumericsError::InvalidInterval { lo, hi });
    }
    if !(tol > 0.0) {
        return Err(NumericsError::Domain {
            what: "root tolerance must be positive",
            value: tol,
        });
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = finite_or_err(a, g(a))?;
    let mut fb = finite_or_err(b, g(b))?;
    if fa == 0.0 {
        return Ok(RootResult {
            root: a,
            residual: 0.0,
            iterations: 0,
            bracket: (a, a),
        });
    }
    if fb == 0.0 {
        return Ok(RootResult {
            root: b,
            residual: 0.0,
            iterations: 0,
            bracket: (b, b),
        });
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NotBracketed {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=MAX_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol * (1.0 + b.abs());
        let xm = 0.5 * (c - b);
        if fb.abs() <= tol || xm.abs() <= tol1 {
            let bracket = if b <= c { (b, c) } else { (c, b) };
            return Ok(RootResult {
                root: b,
                residual: fb,
                iterations: iter,
                bracket,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = finite_or_err(b, g(b))?;
    }
    Err(NumericsError::NoConvergence {
        iterations: MAX_ITERATIONS,
    })
}

/// Maximizes `f` over `bracket` with Brent's method (golden section plus
/// successive parabolic interpolation).
///
/// `f` should be unimodal on the bracket. The abscissa is resolved to
/// `tol` plus `√ε·|x|`, the floor set by the flatness of a smooth maximum.
/// A maximum at or beyond a bracket end is reported through
/// [`MaxResult::edge`] rather than as an error.
pub fn maximize_1d<F>(mut f: F, bracket: (f64, f64), tol: f64) -> Result<MaxResult, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    const CGOLD: f64 = 0.381_966_011_250_105_1;
    let sqrt_eps = f64::EPSILON.sqrt();

    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(NumericsError::InvalidInterval { lo, hi });
    }
    if !(tol > 0.0) {
        return Err(NumericsError::Domain {
            what: "abscissa tolerance must be positive",
            value: tol,
        });
    }
    // minimize the negated objective
    let mut neg = |x: f64| -> Result<f64, NumericsError> { finite_or_err(x, f(x)).map(|y| -y) };

    let mut a = lo;
    let mut b = hi;
    let mut x = a + CGOLD * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = neg(x)?;
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let xm = 0.5 * (a + b);
        let tol1 = sqrt_eps * x.abs() + tol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            converged = true;
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + tol1.copysign(d)
        };
        let fu = neg(u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    if !converged {
        return Err(NumericsError::NoConvergence {
            iterations: MAX_ITERATIONS,
        });
    }

    let mut result = MaxResult {
        argmax: x,
        max_value: -fx,
        abscissa_tolerance: tol,
        edge: None,
    };
    let tol2 = 2.0 * (sqrt_eps * x.abs() + tol / 3.0);
    let f_lo = -neg(lo)?;
    let f_hi = -neg(hi)?;
    if f_lo >= result.max_value {
        result.argmax = lo;
        result.max_value = f_lo;
    }
    if f_hi >= result.max_value {
        result.argmax = hi;
        result.max_value = f_hi;
    }
    if result.argmax - lo <= tol2 {
        result.edge = Some(BracketEdge::Low);
    } else if hi - result.argmax <= tol2 {
        result.edge = Some(BracketEdge::High);
    }
    Ok(result)
}
