//! Model-free pricing of European claims from a smile, and the SSVI
//! volatility swap.
//!
//! With no atom at zero (left-tail slope `beta_minus < 2`) the law of the
//! underlying is the second strike derivative of the call price, and any
//! integrable claim prices as `∫ payoff(K) f_X(K) dK`. In the normalized
//! coordinate the standard special cases read
//!
//! ```text
//! E[-2 ln X] = ∫ v_0(z)^2 phi(z) dz                      (log contract)
//! E[X^p]     = ∫ exp(p(p-1) v_p(z)^2 / 2) phi(z) dz      (p in [0, 1])
//! E[sqrt X]  = ∫ exp(-v_{1/2}(z)^2 / 8) phi(z) dz
//! ```
//!
//! For SSVI the last integral collapses, after `y = (theta phi / 2) z`, to
//!
//! ```text
//! E[sqrt X] = (2 e^{-theta/8} / (theta phi)) ∫ exp(-A y^2 - (rho/4) y sqrt(y^2 + theta)) dy / sqrt(2 pi),
//! A = (1 + rho^2)/8 + 2/(theta phi)^2,
//! ```
//!
//! with the small-theta closed form
//! `e^{-theta/8} / sqrt(1 + (1 + rho^2) theta^2 phi^2 / 16)` (exact for
//! `rho = 0`). When the underlying is annualized realized variance, that
//! expectation is the fair volatility-swap strike.

use crate::arbitrage;
use crate::batch;
use crate::blackscholes::norm_pdf;
use crate::quad;
use crate::smile::{Smile, SsviParams};
use crate::transform::{self, NormalizedSmile};
use crate::{Error, Result};

/// Truncation and tolerance settings for the pricing integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Half-width of the normalized-coordinate integration range. At the
    /// default 12 the discarded Gaussian tail is below 1e-31.
    pub z_bound: f64,
    /// Adaptive bisection depth cap.
    pub max_depth: u32,
    /// Absolute tolerance of the integrals.
    pub abs_tol: f64,
}

impl QuadratureConfig {
    pub fn new(z_bound: f64, max_depth: u32, abs_tol: f64) -> Result<Self> {
        if !(z_bound >= 8.0) {
            return Err(Error::InvalidInput(format!(
                "z_bound must be >= 8 so the Gaussian tail stays below 1e-15, got {z_bound}"
            )));
        }
        if !(abs_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "abs_tol must be > 0, got {abs_tol}"
            )));
        }
        Ok(Self {
            z_bound,
            max_depth,
            abs_tol,
        })
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            z_bound: 12.0,
            max_depth: 40,
            abs_tol: 1e-10,
        }
    }
}

/// Refuses smiles whose left tail carries an atom at zero.
fn refuse_atom(smile: &Smile) -> Result<()> {
    let est = arbitrage::tail_probe(smile)?;
    if est.mass > 0.0 {
        Err(Error::MassAtZero {
            beta_minus: est.beta_minus,
        })
    } else {
        Ok(())
    }
}

/// Prices `E[payoff(X)]` by quadrature against the implied density,
/// `∫ payoff(e^k) phi(f_0(k)) (v'' + v f_0' f_1')(k) dk`, truncated where
/// both tail maps pass the configured bound.
pub fn price_claim<F>(payoff: F, smile: &Smile, config: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    refuse_atom(smile)?;
    // phi(f_0) controls the left tail, phi(f_1) = e^k phi(f_0) the right one.
    let k_lo = transform::g_p_numeric(-config.z_bound, 0.0, smile)?;
    let k_hi = transform::g_p_numeric(config.z_bound, 1.0, smile)?;
    let integrand = |k: f64| -> Result<f64> {
        let p = smile.eval(k)?;
        let b = 1.0 - k * p.dv / p.v;
        let bracket = p.d2v - 0.25 * p.v * p.dv * p.dv + b * b / p.v;
        let f0 = k / p.v + 0.5 * p.v;
        Ok(payoff(k.exp()) * norm_pdf(f0) * bracket)
    };
    quad::integrate_with(
        &integrand,
        k_lo,
        k_hi,
        0.1 * config.abs_tol,
        64,
        config.max_depth,
    )
}

/// `E[-2 ln X]` through the `p = 0` normalized volatility.
pub fn log_contract(smile: &Smile, config: &QuadratureConfig) -> Result<f64> {
    refuse_atom(smile)?;
    let normalized = NormalizedSmile::new(smile, 0.0)?;
    let integrand = |z: f64| -> Result<f64> {
        let v0 = normalized.v(z)?;
        Ok(v0 * v0 * norm_pdf(z))
    };
    quad::integrate_with(
        &integrand,
        -config.z_bound,
        config.z_bound,
        0.1 * config.abs_tol,
        quad::DEFAULT_PANELS,
        config.max_depth,
    )
}

/// `E[X^p]` for `p in [0, 1]` through the `p`-normalized volatility. The
/// exponent vanishes for `p in {0, 1}`, where the value is exactly 1.
pub fn moment_p(smile: &Smile, p: f64, config: &QuadratureConfig) -> Result<f64> {
    refuse_atom(smile)?;
    let normalized = NormalizedSmile::new(smile, p)?;
    let c = 0.5 * p * (p - 1.0);
    let integrand = |z: f64| -> Result<f64> {
        if c == 0.0 {
            return Ok(norm_pdf(z));
        }
        let vp = normalized.v(z)?;
        Ok((c * vp * vp).exp() * norm_pdf(z))
    };
    quad::integrate_with(
        &integrand,
        -config.z_bound,
        config.z_bound,
        0.1 * config.abs_tol,
        quad::DEFAULT_PANELS,
        config.max_depth,
    )
}

/// `E[sqrt X]` through the normalized volatility `v_{1/2}` (numeric
/// inversion; works for any smile, not only SSVI).
pub fn sqrt_price(smile: &Smile, config: &QuadratureConfig) -> Result<f64> {
    refuse_atom(smile)?;
    let normalized = NormalizedSmile::new(smile, 0.5)?;
    let integrand = |z: f64| -> Result<f64> {
        let v = normalized.v(z)?;
        Ok((-0.125 * v * v).exp() * norm_pdf(z))
    };
    quad::integrate_with(
        &integrand,
        -config.z_bound,
        config.z_bound,
        0.1 * config.abs_tol,
        quad::DEFAULT_PANELS,
        config.max_depth,
    )
}

/// `E[sqrt X]` for an SSVI smile through the reduced one-dimensional
/// integral in `y = (theta phi / 2) z`.
pub fn ssvi_sqrt_quadrature(params: &SsviParams, config: &QuadratureConfig) -> Result<f64> {
    let (theta, phi, rho) = (params.theta, params.phi, params.rho);
    let tp = theta * phi;
    let a = 0.125 * (1.0 + rho * rho) + 2.0 / (tp * tp);
    // Truncate at the wider of the Gaussian width of exp(-A y^2) and the
    // image of |z| = z_bound under the change of variables.
    let y_bound = config.z_bound * (1.0 / (2.0 * a).sqrt()).max(0.5 * tp);
    let integrand = |y: f64| -> Result<f64> {
        Ok((-a * y * y - 0.25 * rho * y * (y * y + theta).sqrt()).exp()
            / (2.0 * std::f64::consts::PI).sqrt())
    };
    let tol = 0.5 * config.abs_tol * tp;
    let integral = quad::integrate_with(&integrand, -y_bound, y_bound, tol, 32, config.max_depth)?;
    Ok(2.0 * (-0.125 * theta).exp() / tp * integral)
}

/// Small-theta closed form
/// `e^{-theta/8} / sqrt(1 + (1 + rho^2) theta^2 phi^2 / 16)`; exact for
/// `rho = 0`.
pub fn ssvi_sqrt_asymptotic(params: &SsviParams) -> f64 {
    let tp = params.theta * params.phi;
    (-0.125 * params.theta).exp() / (1.0 + (1.0 + params.rho * params.rho) * tp * tp / 16.0).sqrt()
}

/// Quadrature and closed-form volatility-swap values for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolSwapResult {
    pub theta: f64,
    pub quadrature_value: f64,
    pub asymptotic_value: f64,
    pub rel_gap: f64,
}

pub fn volswap(params: &SsviParams, config: &QuadratureConfig) -> Result<VolSwapResult> {
    let quadrature_value = ssvi_sqrt_quadrature(params, config)?;
    let asymptotic_value = ssvi_sqrt_asymptotic(params);
    Ok(VolSwapResult {
        theta: params.theta,
        quadrature_value,
        asymptotic_value,
        rel_gap: (quadrature_value - asymptotic_value).abs() / asymptotic_value,
    })
}

/// Volatility-swap values across a batch of `theta`s at fixed `(phi, rho)`;
/// parallel under the `parallel` feature.
pub fn theta_sweep(
    thetas: &[f64],
    phi: f64,
    rho: f64,
    config: &QuadratureConfig,
) -> Result<Vec<VolSwapResult>> {
    batch::try_map(thetas, |&theta| {
        volswap(&SsviParams::new(theta, phi, rho)?, config)
    })
}

/// Sequential twin of [`theta_sweep`].
pub fn theta_sweep_seq(
    thetas: &[f64],
    phi: f64,
    rho: f64,
    config: &QuadratureConfig,
) -> Result<Vec<VolSwapResult>> {
    batch::try_map_seq(thetas, |&theta| {
        volswap(&SsviParams::new(theta, phi, rho)?, config)
    })
}
