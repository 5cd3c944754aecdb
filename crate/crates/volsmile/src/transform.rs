//! Log-strike transformations and mean representations of a smile.
//!
//! For a smile `v` the family of maps
//!
//! ```text
//! f_p(k) = k/v(k) + (1/2 - p) v(k),        p in [0, 1],
//! ```
//!
//! interpolates between `f_0 = -d0` and `f_1 = -d1`; all are strictly
//! increasing when `v` is arbitrage-free, and for `p > 0` they are bijections
//! of the real line. The midpoint map `f_{1/2}(k) = k/v(k)` defines the
//! normalized coordinate `z = f_{1/2}(k)`; its derivative determines the
//! unique positive function
//!
//! ```text
//! 1/h(k) = d/dk (k/v(k)) = (1/v)(1 - k v'/v)
//! ```
//!
//! whose harmonic mean over `[0, k]` reproduces `v(k)`, with `h(0) = v(0)`.
//! In the `z` coordinate the harmonic mean becomes the plain arithmetic mean
//! of `h_{1/2} = h ∘ g_{1/2}`. For SSVI smiles the inverse `g_{1/2}` and the
//! normalized volatility `v_{1/2}` have closed forms; the generic numeric
//! inversion here serves as the independent route against them.

use crate::quad;
use crate::roots;
use crate::smile::{Smile, SmilePoint, SsviParams};
use crate::{Error, Result};

/// Search limit for bracket expansion when inverting `f_p` on parametric
/// smiles. `f_{1/2}` grows like `sqrt(|k| / beta)`, so inverting at
/// `|z| = 12` can require `|k|` of a few hundred.
const BRACKET_CAP: f64 = 1024.0;
/// Inversion accuracy: `|f_p(k) - z| <= F_TOL` at the returned `k`.
const F_TOL: f64 = 1e-12;
/// Absolute tolerance of the mean-representation quadratures.
const QUAD_TOL: f64 = 1e-10;
/// Central-difference step for `h'(0)` in the half-skew check.
const SKEW_STEP: f64 = 1e-5;

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "p must lie in [0, 1], got {p}"
        )))
    }
}

/// `f_p(k) = k/v(k) + (1/2 - p) v(k)`.
pub fn f_p(k: f64, p: f64, smile: &Smile) -> Result<f64> {
    check_p(p)?;
    let pt = smile.eval(k)?;
    Ok(fp_point(k, p, &pt))
}

/// `f_p'(k) = (1/v)(1 - k v'/v) + (1/2 - p) v'`.
pub fn f_p_prime(k: f64, p: f64, smile: &Smile) -> Result<f64> {
    check_p(p)?;
    let pt = smile.eval(k)?;
    Ok(fp_prime_point(k, p, &pt))
}

pub(crate) fn fp_point(k: f64, p: f64, pt: &SmilePoint) -> f64 {
    k / pt.v + (0.5 - p) * pt.v
}

pub(crate) fn fp_prime_point(k: f64, p: f64, pt: &SmilePoint) -> f64 {
    (1.0 - k * pt.dv / pt.v) / pt.v + (0.5 - p) * pt.dv
}

/// The function `h` of the harmonic-mean representation, `h = v / (1 - k v'/v)`.
///
/// Fails with [`Error::NonPositiveReciprocal`] when `d/dk (k/v) <= 0`, which
/// cannot happen for an arbitrage-free smile.
pub fn h_of_k(k: f64, smile: &Smile) -> Result<f64> {
    let pt = smile.eval(k)?;
    h_point(k, &pt)
}

fn h_point(k: f64, pt: &SmilePoint) -> Result<f64> {
    let bracket = 1.0 - k * pt.dv / pt.v;
    if bracket > 0.0 {
        Ok(pt.v / bracket)
    } else {
        Err(Error::NonPositiveReciprocal { k })
    }
}

/// The harmonic-mean view of a smile.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicFunction<'a> {
    smile: &'a Smile,
}

impl<'a> HarmonicFunction<'a> {
    pub fn new(smile: &'a Smile) -> Self {
        Self { smile }
    }

    pub fn smile(&self) -> &'a Smile {
        self.smile
    }

    /// `h(k)`.
    pub fn eval(&self, k: f64) -> Result<f64> {
        h_of_k(k, self.smile)
    }

    /// Recovers the smile as `v(k) = [ (1/k) ∫_0^k dy/h(y) ]^{-1}`; `h(0)` at
    /// `k = 0`.
    pub fn reconstruct(&self, k: f64) -> Result<f64> {
        if k == 0.0 {
            return self.eval(0.0);
        }
        let integrand = |y: f64| -> Result<f64> {
            let pt = self.smile.eval(y)?;
            let recip = (1.0 - y * pt.dv / pt.v) / pt.v;
            if recip > 0.0 {
                Ok(recip)
            } else {
                Err(Error::NonPositiveReciprocal { k: y })
            }
        };
        let integral = quad::integrate(&integrand, 0.0, k, QUAD_TOL)?;
        Ok(k / integral)
    }

    /// Arithmetic mean `M(k) = (1/k) ∫_0^k h(y) dy`, an upper bound for `v(k)`.
    pub fn arithmetic_upper_bound(&self, k: f64) -> Result<f64> {
        if k == 0.0 {
            return self.smile.v(0.0);
        }
        let integrand = |y: f64| self.eval(y);
        Ok(quad::integrate(&integrand, 0.0, k, QUAD_TOL)? / k)
    }
}

/// Returns `(v'(0), h'(0)/2)`; the two sides agree for every smile with a
/// harmonic-mean representation ("1/2-skew rule").
pub fn half_skew_check(smile: &Smile) -> Result<(f64, f64)> {
    let lhs = smile.dv(0.0)?;
    let hf = HarmonicFunction::new(smile);
    let h_prime = (hf.eval(SKEW_STEP)? - hf.eval(-SKEW_STEP)?) / (2.0 * SKEW_STEP);
    Ok((lhs, 0.5 * h_prime))
}

/// Numeric inverse of `f_p`: the unique `k` with `f_p(k) = z`.
///
/// For `p = 0` the image of `f_0` may be bounded below (positive mass at
/// zero); in that case the bracket expansion exhausts its range and reports
/// [`Error::BracketNotFound`].
pub fn g_p_numeric(z: f64, p: f64, smile: &Smile) -> Result<f64> {
    check_p(p)?;
    let f = |k: f64| -> Result<(f64, f64)> {
        let pt = smile.eval(k)?;
        Ok((fp_point(k, p, &pt), fp_prime_point(k, p, &pt)))
    };
    let limits = smile.domain().unwrap_or((-BRACKET_CAP, BRACKET_CAP));
    roots::invert_increasing(&f, z, (-1.0, 1.0), limits, F_TOL)
}

/// A smile re-expressed in the normalized coordinate `z = f_p(k)`.
#[derive(Debug, Clone, Copy)]
pub struct NormalizedSmile<'a> {
    smile: &'a Smile,
    p: f64,
}

impl<'a> NormalizedSmile<'a> {
    pub fn new(smile: &'a Smile, p: f64) -> Result<Self> {
        check_p(p)?;
        Ok(Self { smile, p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Inverse transform `g_p(z)`.
    pub fn g(&self, z: f64) -> Result<f64> {
        g_p_numeric(z, self.p, self.smile)
    }

    /// Normalized implied volatility `v_p(z) = v(g_p(z))`.
    pub fn v(&self, z: f64) -> Result<f64> {
        self.smile.v(self.g(z)?)
    }
}

/// Closed-form SSVI inverse transform
/// `g_{1/2}(z) = (theta rho phi z^2 + z sqrt(theta^2 phi^2 z^2 + 4 theta)) / 2`.
pub fn ssvi_g_half(z: f64, params: &SsviParams) -> f64 {
    let tp = params.theta * params.phi;
    0.5 * (params.rho * tp * z * z + z * (tp * tp * z * z + 4.0 * params.theta).sqrt())
}

/// Closed-form normalized SSVI volatility
/// `v_{1/2}(z) = (theta rho phi z + sqrt(theta^2 phi^2 z^2 + 4 theta)) / 2`,
/// which satisfies `z v_{1/2}(z) = g_{1/2}(z)` and is asymptotically linear
/// with slopes `(theta phi / 2)(1 +- rho)`.
pub fn ssvi_v_half(z: f64, params: &SsviParams) -> f64 {
    let tp = params.theta * params.phi;
    0.5 * (params.rho * tp * z + (tp * tp * z * z + 4.0 * params.theta).sqrt())
}

/// Both sides of the arithmetic-mean representation at `z != 0`:
/// `v_{1/2}(z)` and `(1/z) ∫_0^z h(g_{1/2}(y)) dy`.
pub fn arithmetic_mean_check(z: f64, smile: &Smile) -> Result<(f64, f64)> {
    if z == 0.0 {
        return Err(Error::InvalidInput(
            "arithmetic mean representation needs z != 0".into(),
        ));
    }
    let lhs = smile.v(g_p_numeric(z, 0.5, smile)?)?;
    let integrand = |y: f64| -> Result<f64> {
        let k = g_p_numeric(y, 0.5, smile)?;
        h_of_k(k, smile)
    };
    let rhs = quad::integrate(&integrand, 0.0, z, QUAD_TOL)? / z;
    Ok((lhs, rhs))
}

/// The put-call dual smile `v(-k)`.
pub fn dual_smile(smile: &Smile) -> Smile {
    smile.mirrored()
}

/// Worst deviations of the duality identities over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport {
    /// max over the grid of `|h_dual(k) - h(-k)|`
    pub max_h_dev: f64,
    /// max over grid and `p in {0, 1/4, 1/2, 1}` of `|f_p_dual(k) + f_{1-p}(-k)|`
    pub max_fp_dev: f64,
    /// max over probe points and `p in {1/4, 1/2, 1}` of `|v_p_dual(z) - v_{1-p}(-z)|`
    pub max_vp_dev: f64,
}

/// Checks the duality identities `f̂_p(k) = -f_{1-p}(-k)`, `v̂_p(z) = v_{1-p}(-z)`
/// and `ĥ(k) = h(-k)` on the given strike grid.
pub fn duality_checks(smile: &Smile, ks: &[f64]) -> Result<DualityReport> {
    let dual = dual_smile(smile);
    let mut max_h_dev: f64 = 0.0;
    let mut max_fp_dev: f64 = 0.0;
    for &k in ks {
        max_h_dev = max_h_dev.max((h_of_k(k, &dual)? - h_of_k(-k, smile)?).abs());
        for &p in &[0.0, 0.25, 0.5, 1.0] {
            let dev = (f_p(k, p, &dual)? + f_p(-k, 1.0 - p, smile)?).abs();
            max_fp_dev = max_fp_dev.max(dev);
        }
    }
    let mut max_vp_dev: f64 = 0.0;
    for &z in &[-0.75, -0.25, 0.25, 0.75] {
        for &p in &[0.25, 0.5, 1.0] {
            let lhs = NormalizedSmile::new(&dual, p)?.v(z)?;
            let rhs = NormalizedSmile::new(smile, 1.0 - p)?.v(-z)?;
            max_vp_dev = max_vp_dev.max((lhs - rhs).abs());
        }
    }
    Ok(DualityReport {
        max_h_dev,
        max_fp_dev,
        max_vp_dev,
    })
}
