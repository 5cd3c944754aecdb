//! Scalar root finding for strictly increasing functions.
//!
//! The solver first encloses the target by doubling the bracket outward from a
//! seed interval, then iterates Newton steps that fall back to bisection
//! whenever the candidate leaves the enclosing bracket. The functions inverted
//! here (`f_p` maps of arbitrage-free smiles) grow at least like `sqrt(|k|)`,
//! so brackets are found after a handful of doublings.

use crate::{Error, Result};

const MAX_ITERS: usize = 200;

/// Finds `x` with `f(x) = target` for strictly increasing `f`.
///
/// `f` returns the value together with its derivative. The bracket grows from
/// `seed` by doubling, clamped to `limits` (for sampled smiles, their knot
/// range); exhausting the clamped range yields [`Error::BracketNotFound`].
/// Convergence is declared when `|f(x) - target| <= f_tol`.
pub fn invert_increasing<F>(
    f: &F,
    target: f64,
    seed: (f64, f64),
    limits: (f64, f64),
    f_tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let (min_x, max_x) = limits;
    let mut lo = seed.0.clamp(min_x, max_x);
    let mut hi = seed.1.clamp(min_x, max_x);
    debug_assert!(lo < hi, "seed interval must be non-empty inside limits");

    let mut flo = f(lo)?.0;
    let mut fhi = f(hi)?.0;
    let mut width = hi - lo;
    while flo > target {
        if lo <= min_x {
            return Err(Error::BracketNotFound {
                target,
                lo: min_x,
                hi: max_x,
            });
        }
        hi = lo;
        fhi = flo;
        lo = (lo - width).max(min_x);
        flo = f(lo)?.0;
        width *= 2.0;
    }
    width = hi - lo;
    while fhi < target {
        if hi >= max_x {
            return Err(Error::BracketNotFound {
                target,
                lo: min_x,
                hi: max_x,
            });
        }
        lo = hi;
        flo = fhi;
        hi = (hi + width).min(max_x);
        fhi = f(hi)?.0;
        width *= 2.0;
    }
    let _ = (flo, fhi);

    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ITERS {
        let (fx, dfx) = f(x)?;
        let r = fx - target;
        if r.abs() <= f_tol {
            return Ok(x);
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            // Interval has collapsed to adjacent floats; f_tol is unreachable.
            return Ok(x);
        }
        let newton = x - r / dfx;
        x = if dfx > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NoConvergence { target, last: x })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(target: f64) -> f64 {
        // x + sinh(x) is strictly increasing with known derivative.
        let f = |x: f64| Ok((x + x.sinh(), 1.0 + x.cosh()));
        invert_increasing(&f, target, (-1.0, 1.0), (-1e6, 1e6), 1e-13).unwrap()
    }

    #[test]
    fn inverts_across_wide_targets() {
        for &t in &[-25.0, -1.0, 0.0, 0.3, 4.0, 1e4] {
            let x = solve(t);
            assert!((x + x.sinh() - t).abs() <= 1e-12 * t.abs().max(1.0));
        }
    }

    #[test]
    fn reports_exhausted_bracket() {
        let f = |x: f64| Ok((x, 1.0));
        let e = invert_increasing(&f, 50.0, (-1.0, 1.0), (-10.0, 10.0), 1e-13).unwrap_err();
        assert!(matches!(e, Error::BracketNotFound { .. }));
    }

    #[test]
    fn seed_is_clamped_to_limits() {
        let f = |x: f64| Ok((x, 1.0));
        let x = invert_increasing(&f, 0.25, (-1.0, 1.0), (0.0, 0.5), 1e-15).unwrap();
        assert!((x - 0.25).abs() < 1e-14);
    }
}
