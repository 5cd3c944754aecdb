//! Adaptive Simpson quadrature.
//!
//! The integrand is fallible so that callers whose evaluations involve root
//! finds (the `g_p` inversions) can abort the integration cleanly. Intervals
//! are pre-split into uniform panels before the adaptive recursion starts;
//! integrands here are often narrow bumps on wide intervals, and a single
//! Simpson estimate over the whole range could otherwise terminate on three
//! near-zero samples.

use crate::{Error, Result};

/// Default number of uniform panels the interval is split into up front.
pub const DEFAULT_PANELS: usize = 16;
/// Default cap on the adaptive bisection depth within one panel.
pub const DEFAULT_MAX_DEPTH: u32 = 40;

/// Integrates `f` over `[a, b]` (either orientation) to absolute tolerance `tol`.
pub fn integrate<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    integrate_with(f, a, b, tol, DEFAULT_PANELS, DEFAULT_MAX_DEPTH)
}

/// As [`integrate`], with explicit panel count and depth cap.
pub fn integrate_with<F>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    panels: usize,
    max_depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return Ok(-integrate_with(f, b, a, tol, panels, max_depth)?);
    }
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let panel_tol = tol / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i == panels - 1 { b } else { lo + width };
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (eval(f, lo)?, eval(f, mid)?, eval(f, hi)?);
        let whole = simpson(lo, hi, flo, fmid, fhi);
        total += adapt(f, lo, mid, hi, flo, fmid, fhi, whole, panel_tol, max_depth)?;
    }
    Ok(total)
}

fn eval<F>(f: &F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let y = f(x)?;
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFiniteIntegrand { x })
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F>(
    f: &F,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (eval(f, lm)?, eval(f, rm)?);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // Standard Richardson criterion for composite Simpson halving.
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    let l = adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let f = |x: f64| Ok(3.0 * x * x);
        let v = integrate(&f, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn narrow_bump_on_wide_interval() {
        // exp(-x^2/2)/sqrt(2pi) over [-200, 200] integrates to 1.
        let f = |x: f64| Ok((-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt());
        let v = integrate(&f, -200.0, 200.0, 1e-11).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn orientation_flips_sign() {
        let f = |x: f64| Ok(x.cos());
        let a = integrate(&f, 0.0, 1.0, 1e-12).unwrap();
        let b = integrate(&f, 1.0, 0.0, 1e-12).unwrap();
        assert!((a + b).abs() < 1e-15);
        assert!((a - 1.0f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let f = |x: f64| Ok(1.0 / x);
        let e = integrate(&f, -1.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(e, Error::NonFiniteIntegrand { .. }));
    }

    #[test]
    fn fallible_integrand_short_circuits() {
        let f = |x: f64| {
            if x > 0.9 {
                Err(Error::InvalidInput("stop".into()))
            } else {
                Ok(x)
            }
        };
        assert!(integrate(&f, 0.0, 1.0, 1e-10).is_err());
    }
}
