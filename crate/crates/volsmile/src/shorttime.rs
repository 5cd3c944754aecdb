//! Short-maturity behavior of the normalized volatilities.
//!
//! The time-rescaled transform `f̄(T, k) = k / sigma_BS(T, k)` stays
//! non-degenerate as `T -> 0` (unlike `f_{1/2}(T, k) = k / v(T, k)`, which
//! blows up). Its inverse `ḡ(T, z) = g_{1/2}(T, z / sqrt(T))` carries the
//! rescaled normalized implied and local volatilities
//!
//! ```text
//! sigma_half(T, z)     = sigma_BS(T, ḡ(T, z)),
//! sigma_dup_half(T, z) = sigma_Dup(T, ḡ(T, z)),
//! ```
//!
//! whose short-maturity limits obey the arithmetic-mean relation
//! `sigma_half(z) = (1/z) ∫_0^z sigma_dup_half(y) dy`. The residual of that
//! relation at finite `T` is the convergence diagnostic computed here.

use crate::batch;
use crate::dupire;
use crate::quad;
use crate::roots;
use crate::smile::Surface;
use crate::{Error, Result};

const BRACKET_CAP: f64 = 1024.0;
const F_TOL: f64 = 1e-12;
/// The monotonicity of the residual in `T` is resolved down to ~1e-8, so the
/// inner quadrature runs well below that.
const QUAD_TOL: f64 = 1e-10;

/// Inverse of `k -> k / sigma_BS(T, k)`: the log-moneyness visited by the
/// rescaled coordinate `z`.
pub fn rescaled_g(t: f64, z: f64, surface: &Surface) -> Result<f64> {
    let f = |k: f64| -> Result<(f64, f64)> {
        let s = surface.sigma_eval(t, k)?;
        Ok((k / s.sigma, (1.0 - k * s.dk / s.sigma) / s.sigma))
    };
    roots::invert_increasing(&f, z, (-1.0, 1.0), (-BRACKET_CAP, BRACKET_CAP), F_TOL)
}

/// `sigma_half(T, z) = sigma_BS(T, ḡ(T, z))`.
pub fn rescaled_sigma_half(t: f64, z: f64, surface: &Surface) -> Result<f64> {
    surface.sigma(t, rescaled_g(t, z, surface)?)
}

/// `sigma_dup_half(T, z) = sigma_Dup(T, ḡ(T, z))`.
pub fn rescaled_dupire_half(t: f64, z: f64, surface: &Surface) -> Result<f64> {
    dupire::local_vol(t, rescaled_g(t, z, surface)?, surface)
}

/// One rescaled-coordinate sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaledPoint {
    pub t: f64,
    pub z: f64,
    /// `ḡ(T, z)`
    pub g_bar: f64,
    pub sigma_half: f64,
    pub sigma_dup_half: f64,
}

pub fn rescaled_point(t: f64, z: f64, surface: &Surface) -> Result<RescaledPoint> {
    let g_bar = rescaled_g(t, z, surface)?;
    Ok(RescaledPoint {
        t,
        z,
        g_bar,
        sigma_half: surface.sigma(t, g_bar)?,
        sigma_dup_half: dupire::local_vol(t, g_bar, surface)?,
    })
}

/// Residual of the arithmetic-mean relation at finite `T`:
/// `sigma_half(T, z) - (1/z) ∫_0^z sigma_dup_half(T, y) dy`.
///
/// At `z = 0` the limiting value `sigma_BS(T, 0) - sigma_Dup(T, 0)` is
/// returned (both sides of the relation tend to those constants).
pub fn arithmetic_mean_residual(t: f64, z: f64, surface: &Surface) -> Result<f64> {
    if z == 0.0 {
        return Ok(surface.sigma(t, 0.0)? - dupire::local_vol(t, 0.0, surface)?);
    }
    let lhs = rescaled_sigma_half(t, z, surface)?;
    let integrand = |y: f64| rescaled_dupire_half(t, y, surface);
    let rhs = quad::integrate(&integrand, 0.0, z, QUAD_TOL)? / z;
    Ok(lhs - rhs)
}

/// Residuals along a decreasing maturity sequence; they shrink toward zero as
/// `T -> 0`. Runs the maturities in parallel under the `parallel` feature.
pub fn arithmetic_mean_limit_residual(z: f64, surface: &Surface, ts: &[f64]) -> Result<Vec<f64>> {
    check_z(z)?;
    batch::try_map(ts, |&t| arithmetic_mean_residual(t, z, surface))
}

/// Sequential twin of [`arithmetic_mean_limit_residual`].
pub fn arithmetic_mean_limit_residual_seq(
    z: f64,
    surface: &Surface,
    ts: &[f64],
) -> Result<Vec<f64>> {
    check_z(z)?;
    batch::try_map_seq(ts, |&t| arithmetic_mean_residual(t, z, surface))
}

fn check_z(z: f64) -> Result<()> {
    if z == 0.0 {
        Err(Error::InvalidInput(
            "the arithmetic-mean limit needs z != 0".into(),
        ))
    } else {
        Ok(())
    }
}
