//! Dupire local volatility from an implied volatility surface, and its link
//! to the harmonic-mean function of each maturity slice.
//!
//! With `sigma = sigma_BS(T, k)` the local variance is
//!
//! ```text
//! sigma_Dup^2 = (sigma + 2 T dT_sigma)
//!             / ( T sigma'' - (T^2/4) sigma (sigma')^2 + (1/sigma)(1 - k sigma'/sigma)^2 )
//! ```
//!
//! A negative numerator is calendar arbitrage, a non-positive denominator is
//! butterfly arbitrage; both are reported as errors rather than clamped.
//! The harmonic-mean counterpart `Sigma(T, k) = h(T, k) / sqrt(T)` satisfies
//!
//! ```text
//! Sigma sqrt(1 + T a + T^2 b) = sigma_Dup,
//! a = 2 dT_sigma / sigma - (sigma''/sigma) sigma_Dup^2,
//! b = (1/4) (sigma')^2 sigma_Dup^2,
//! ```
//!
//! wherever `dT v > 0`, which makes `Sigma = sigma_Dup (1 + O(T))` for short
//! maturities.

use crate::smile::Surface;
use crate::transform;
use crate::{Error, Result};

/// Local volatility `sigma_Dup(T, k)`.
pub fn local_vol(t: f64, k: f64, surface: &Surface) -> Result<f64> {
    let s = surface.sigma_eval(t, k)?;
    let b = 1.0 - k * s.dk / s.sigma;
    let den = t * s.d2k - 0.25 * t * t * s.sigma * s.dk * s.dk + b * b / s.sigma;
    if !(den > 0.0) {
        return Err(Error::NonPositiveDenominator { t, k });
    }
    let num = s.sigma + 2.0 * t * s.dt;
    if num < 0.0 {
        return Err(Error::NegativeVariance { t, k });
    }
    Ok((num / den).sqrt())
}

/// `Sigma(T, k) = h(T, k) / sqrt(T)`, the harmonic-mean counterpart of the
/// annualized implied volatility, computed through the maturity slice.
pub fn sigma_upper(t: f64, k: f64, surface: &Surface) -> Result<f64> {
    let slice = surface.slice(t)?;
    Ok(transform::h_of_k(k, &slice)? / t.sqrt())
}

/// The coefficients `(a, b)` of the `Sigma`-to-`sigma_Dup` identity.
pub fn ab_coefficients(t: f64, k: f64, surface: &Surface) -> Result<(f64, f64)> {
    let s = surface.sigma_eval(t, k)?;
    let dup2 = local_vol(t, k, surface)?.powi(2);
    let a = 2.0 * s.dt / s.sigma - s.d2k / s.sigma * dup2;
    let b = 0.25 * s.dk * s.dk * dup2;
    Ok((a, b))
}

/// `Sigma sqrt(1 + T a + T^2 b) - sigma_Dup`; vanishes identically wherever
/// `dT v > 0`.
pub fn sigma_dupire_identity_residual(t: f64, k: f64, surface: &Surface) -> Result<f64> {
    let dup = local_vol(t, k, surface)?;
    let upper = sigma_upper(t, k, surface)?;
    let (a, b) = ab_coefficients(t, k, surface)?;
    let arg = 1.0 + t * a + t * t * b;
    if !(arg > 0.0) {
        return Err(Error::IdentityDomain { t, k, value: arg });
    }
    Ok(upper * arg.sqrt() - dup)
}

/// All the local-volatility quantities at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalVolPoint {
    pub sigma_dup: f64,
    pub sigma_upper: f64,
    pub a: f64,
    pub b: f64,
}

pub fn local_vol_point(t: f64, k: f64, surface: &Surface) -> Result<LocalVolPoint> {
    let (a, b) = ab_coefficients(t, k, surface)?;
    Ok(LocalVolPoint {
        sigma_dup: local_vol(t, k, surface)?,
        sigma_upper: sigma_upper(t, k, surface)?,
        a,
        b,
    })
}
