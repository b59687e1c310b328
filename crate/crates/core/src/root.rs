//! Safeguarded scalar root-finding on monotone functions: secant steps when
//! they stay inside the bracket, bisection otherwise.

use crate::error::{Error, Result};

/// Expand `[lo, hi]` by doubling around the origin until `f(lo) - target`
/// and `f(hi) - target` differ in sign. `f` must be monotone.
pub fn expand_bracket(
    f: impl Fn(f64) -> f64,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    max_doublings: usize,
) -> Result<(f64, f64)> {
    let mut flo = f(lo) - target;
    let mut fhi = f(hi) - target;
    for _ in 0..max_doublings {
        if flo == 0.0 || fhi == 0.0 || flo.signum() != fhi.signum() {
            return Ok((lo, hi));
        }
        let width = hi - lo;
        lo -= width;
        hi += width;
        flo = f(lo) - target;
        fhi = f(hi) - target;
    }
    if flo.signum() != fhi.signum() {
        Ok((lo, hi))
    } else {
        Err(Error::NoConvergence { sweeps: max_doublings })
    }
}

/// Solve `f(x) = target` for a bracketed root, stopping when the residual
/// |f(x) - target| drops below `residual_tol`.
pub fn solve_bracketed(
    f: impl Fn(f64) -> f64,
    target: f64,
    bracket: (f64, f64),
    residual_tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    let mut flo = f(lo) - target;
    let mut fhi = f(hi) - target;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    assert!(
        flo.signum() != fhi.signum(),
        "root must be bracketed: f(lo)={flo}, f(hi)={fhi}"
    );
    for _ in 0..max_iter {
        // Secant candidate, clamped into the open bracket.
        let mut x = lo - flo * (hi - lo) / (fhi - flo);
        if !(x > lo && x < hi) || !x.is_finite() {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x) - target;
        if fx.abs() <= residual_tol {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if hi - lo <= f64::EPSILON * (1.0 + lo.abs() + hi.abs()) {
            // Bracket exhausted; accept the midpoint if close enough.
            let mid = 0.5 * (lo + hi);
            if (f(mid) - target).abs() <= residual_tol * 10.0 {
                return Ok(mid);
            }
            break;
        }
    }
    Err(Error::NoConvergence { sweeps: max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let f = |x: f64| x * x * x;
        let (lo, hi) = expand_bracket(f, 27.0, -1.0, 1.0, 60).unwrap();
        let x = solve_bracketed(f, 27.0, (lo, hi), 1e-12, 200).unwrap();
        assert!((x - 3.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_unbracketable_target() {
        let f = |x: f64| x.tanh();
        assert!(expand_bracket(f, 2.0, -1.0, 1.0, 40).is_err());
    }
}
