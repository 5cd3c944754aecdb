//! Static no-arbitrage diagnostics for a fixed-maturity smile.
//!
//! The butterfly functional
//!
//! ```text
//! v'' - (v/4)(v')^2 + (1/v)(1 - k v'/v)^2   ( = v'' + v f0' f1' )
//! ```
//!
//! is nonnegative at `k` exactly when the call price is locally convex in
//! strike there. Monotonicity of `f_0` and `f_1` is necessary (not
//! sufficient) for absence of arbitrage; positivity of `f_{1/2}'` is the
//! weaker condition equivalent to positivity of `h`. The report exposes all
//! of them separately and makes no sufficiency claim.

use crate::batch;
use crate::blackscholes::norm_cdf;
use crate::grid::Grid;
use crate::smile::{Smile, SsviParams};
use crate::transform;
use crate::{Error, Result};

/// Roundoff allowance when declaring grid minima nonnegative.
pub const BUTTERFLY_TOL: f64 = 1e-10;
/// Default far log-moneyness of the mass-at-zero probe.
pub const DEFAULT_K_FAR: f64 = -30.0;
/// Default diagnostics grid.
pub const DEFAULT_GRID: Grid = Grid {
    min: -3.0,
    max: 3.0,
    n: 2001,
};

/// `v'' - (v/4)(v')^2 + (1/v)(1 - k v'/v)^2` at `k`.
pub fn butterfly_functional(k: f64, smile: &Smile) -> Result<f64> {
    let p = smile.eval(k)?;
    let b = 1.0 - k * p.dv / p.v;
    Ok(p.d2v - 0.25 * p.v * p.dv * p.dv + b * b / p.v)
}

/// Minimum of `f_p'` over the grid points.
pub fn fp_derivative_min(smile: &Smile, p: f64, ks: &[f64]) -> Result<f64> {
    let vals = batch::try_map(ks, |&k| transform::f_p_prime(k, p, smile))?;
    Ok(vals.into_iter().fold(f64::INFINITY, f64::min))
}

/// Sufficient slice no-arbitrage conditions for SSVI:
/// `theta phi (1 + |rho|) < 4` and `theta phi^2 (1 + |rho|) <= 4`.
pub fn check_ssvi_slice(params: &SsviParams) -> bool {
    let first = params.theta * params.phi * (1.0 + params.rho.abs());
    first < 4.0 && first * params.phi <= 4.0
}

/// Left-tail slope of the SSVI total variance, `theta phi (1 - rho) / 2`.
/// Values below 2 rule out an atom at zero.
pub fn ssvi_beta_minus(params: &SsviParams) -> f64 {
    0.5 * params.theta * params.phi * (1.0 - params.rho)
}

/// Result of the left-tail probe for `P(X = 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroMassEstimate {
    /// `N(f_0(k_far))`, or zero when the tail slope rules the atom out.
    pub mass: f64,
    /// Slope estimate `v(k_far)^2 / |k_far|`.
    pub beta_minus: f64,
}

/// Probes `P(X = 0) = N(lim_{k -> -inf} f_0(k))` at the finite proxy `k_far`.
///
/// Requires `k_far <= -10`; when the estimated left-tail slope is below 2 the
/// limit is `-inf` and the mass is reported as exactly zero.
pub fn mass_at_zero(smile: &Smile, k_far: f64) -> Result<ZeroMassEstimate> {
    if !(k_far <= -10.0) {
        return Err(Error::InvalidInput(format!(
            "mass-at-zero probe needs k_far <= -10, got {k_far}"
        )));
    }
    zero_mass_probe(smile, k_far)
}

fn zero_mass_probe(smile: &Smile, k_probe: f64) -> Result<ZeroMassEstimate> {
    let v = smile.v(k_probe)?;
    let beta_minus = v * v / k_probe.abs();
    let mass = if beta_minus < 2.0 {
        0.0
    } else {
        norm_cdf(k_probe / v + 0.5 * v)
    };
    Ok(ZeroMassEstimate { mass, beta_minus })
}

/// Left-tail probe point: `DEFAULT_K_FAR`, clipped to the domain of sampled
/// smiles (their tails are unknown, so the estimate is only as good as the
/// sampled range).
pub(crate) fn tail_probe(smile: &Smile) -> Result<ZeroMassEstimate> {
    let k_probe = match smile.domain() {
        Some((lo, _)) => lo.max(DEFAULT_K_FAR),
        None => DEFAULT_K_FAR,
    };
    zero_mass_probe(smile, k_probe)
}

/// Grid minima of the no-arbitrage functionals plus the zero-mass probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsReport {
    pub butterfly_min: f64,
    pub f0_prime_min: f64,
    pub f1_prime_min: f64,
    pub fhalf_prime_min: f64,
    pub mass_at_zero: f64,
    pub beta_minus: f64,
    pub passed: bool,
}

/// Runs every diagnostic over the grid (in parallel with the `parallel`
/// feature).
pub fn diagnose(smile: &Smile, grid: &Grid) -> Result<DiagnosticsReport> {
    let per_point = batch::try_map(&grid.points(), |&k| point_diagnostics(k, smile))?;
    assemble(smile, per_point)
}

/// Sequential twin of [`diagnose`].
pub fn diagnose_seq(smile: &Smile, grid: &Grid) -> Result<DiagnosticsReport> {
    let per_point = batch::try_map_seq(&grid.points(), |&k| point_diagnostics(k, smile))?;
    assemble(smile, per_point)
}

fn point_diagnostics(k: f64, smile: &Smile) -> Result<[f64; 4]> {
    let p = smile.eval(k)?;
    let b = 1.0 - k * p.dv / p.v;
    let butterfly = p.d2v - 0.25 * p.v * p.dv * p.dv + b * b / p.v;
    let base = b / p.v;
    Ok([butterfly, base + 0.5 * p.dv, base - 0.5 * p.dv, base])
}

fn assemble(smile: &Smile, per_point: Vec<[f64; 4]>) -> Result<DiagnosticsReport> {
    let mut mins = [f64::INFINITY; 4];
    for row in per_point {
        for (m, x) in mins.iter_mut().zip(row) {
            *m = m.min(x);
        }
    }
    let tail = tail_probe(smile)?;
    let passed = mins[0] >= -BUTTERFLY_TOL && mins[1] > 0.0 && mins[2] > 0.0 && mins[3] > 0.0;
    Ok(DiagnosticsReport {
        butterfly_min: mins[0],
        f0_prime_min: mins[1],
        f1_prime_min: mins[2],
        fhalf_prime_min: mins[3],
        mass_at_zero: tail.mass,
        beta_minus: tail.beta_minus,
        passed,
    })
}
