//! Parametric and sampled total-implied-volatility smiles and surfaces.
//!
//! A [`Smile`] is a fixed-maturity map `k -> v(k)` (total volatility,
//! `v = sqrt(T) sigma`) carrying analytic first and second `k`-derivatives, so
//! downstream code never re-differentiates. Supported shapes:
//!
//! * `Flat`: `v ≡ c`;
//! * SVI: `w(k) = a + b (rho (k - m) + sqrt((k - m)^2 + sigma^2))`, `v = sqrt(w)`;
//! * SSVI: `w(k) = (theta/2) (1 + rho phi k + sqrt((phi k + rho)^2 + 1 - rho^2))`;
//! * `Sampled`: a natural cubic spline through `(k, v)` knots (C^2, no
//!   extrapolation: evaluation outside the knot range is an error);
//! * `Mirror`: the put-call dual `v(-k)` of another smile.
//!
//! A [`Surface`] extends this with a maturity axis and the time derivative of
//! total variance; only the SSVI family (`w` linear in `T`) and the flat
//! Black-Scholes surface `v = s sqrt(T)` are provided, both with exact
//! analytic derivatives.

use crate::grid::linspace;
use crate::{Error, Result};

/// Probe grid for construction-time positivity checks.
const PROBE_RANGE: (f64, f64) = (-5.0, 5.0);
const PROBE_POINTS: usize = 2001;

// ---------------------------------------------------------------------------
// parameter sets
// ---------------------------------------------------------------------------

/// Raw SVI total-variance parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SviParams {
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub m: f64,
    pub sigma: f64,
}

impl SviParams {
    /// Validates `b >= 0`, `sigma > 0`, `|rho| < 1` and positivity of the
    /// resulting total variance on a wide probe grid.
    pub fn new(a: f64, b: f64, rho: f64, m: f64, sigma: f64) -> Result<Self> {
        if !(b >= 0.0) {
            return Err(Error::InvalidInput(format!("SVI: b must be >= 0, got {b}")));
        }
        if !(sigma > 0.0) {
            return Err(Error::InvalidInput(format!(
                "SVI: sigma must be > 0, got {sigma}"
            )));
        }
        if !(rho.abs() < 1.0) {
            return Err(Error::InvalidInput(format!(
                "SVI: rho must be in (-1, 1), got {rho}"
            )));
        }
        let params = Self {
            a,
            b,
            rho,
            m,
            sigma,
        };
        for k in linspace(PROBE_RANGE.0, PROBE_RANGE.1, PROBE_POINTS) {
            let w = params.total_variance(k);
            if !(w > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "SVI: total variance {w} <= 0 at k={k}"
                )));
            }
        }
        Ok(params)
    }

    pub fn total_variance(&self, k: f64) -> f64 {
        let x = k - self.m;
        self.a + self.b * (self.rho * x + (x * x + self.sigma * self.sigma).sqrt())
    }

    fn variance_derivs(&self, k: f64) -> (f64, f64, f64) {
        let x = k - self.m;
        let r = (x * x + self.sigma * self.sigma).sqrt();
        let w = self.a + self.b * (self.rho * x + r);
        let w1 = self.b * (self.rho + x / r);
        let w2 = self.b * self.sigma * self.sigma / (r * r * r);
        (w, w1, w2)
    }
}

/// SSVI slice parameters: ATM total variance `theta`, curvature scale `phi`,
/// skew parameter `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsviParams {
    pub theta: f64,
    pub phi: f64,
    pub rho: f64,
}

impl SsviParams {
    pub fn new(theta: f64, phi: f64, rho: f64) -> Result<Self> {
        if !(theta > 0.0) {
            return Err(Error::InvalidInput(format!(
                "SSVI: theta must be > 0, got {theta}"
            )));
        }
        if !(phi > 0.0) {
            return Err(Error::InvalidInput(format!(
                "SSVI: phi must be > 0, got {phi}"
            )));
        }
        if !(rho.abs() < 1.0) {
            return Err(Error::InvalidInput(format!(
                "SSVI: rho must be in (-1, 1), got {rho}"
            )));
        }
        Ok(Self { theta, phi, rho })
    }

    pub fn total_variance(&self, k: f64) -> f64 {
        let u = self.phi * k + self.rho;
        let delta = u * u + 1.0 - self.rho * self.rho;
        0.5 * self.theta * (1.0 + self.rho * self.phi * k + delta.sqrt())
    }

    /// Minimum of the total variance over all of `R`: `theta (1 - rho^2)`,
    /// attained at `k = -2 rho / phi`. Strictly positive for `|rho| < 1`.
    pub fn min_total_variance(&self) -> f64 {
        self.theta * (1.0 - self.rho * self.rho)
    }

    fn variance_derivs(&self, k: f64) -> (f64, f64, f64) {
        let u = self.phi * k + self.rho;
        let one_m_r2 = 1.0 - self.rho * self.rho;
        let delta = u * u + one_m_r2;
        let sq = delta.sqrt();
        let w = 0.5 * self.theta * (1.0 + self.rho * self.phi * k + sq);
        let w1 = 0.5 * self.theta * self.phi * (self.rho + u / sq);
        let w2 = 0.5 * self.theta * self.phi * self.phi * one_m_r2 / (delta * sq);
        (w, w1, w2)
    }
}

// ---------------------------------------------------------------------------
// smiles
// ---------------------------------------------------------------------------

/// Smile value and its first two strike derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmilePoint {
    pub v: f64,
    pub dv: f64,
    pub d2v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Parametric,
    Sampled,
}

/// A fixed-maturity total implied volatility `k -> v(k) > 0` with derivatives.
#[derive(Debug, Clone)]
pub enum Smile {
    Flat(f64),
    Svi(SviParams),
    Ssvi(SsviParams),
    Sampled(SampledSmile),
    /// The put-call dual `k -> v(-k)` of the wrapped smile.
    Mirror(Box<Smile>),
}

impl Smile {
    pub fn flat(v: f64) -> Result<Self> {
        if !(v > 0.0) {
            return Err(Error::InvalidInput(format!(
                "flat smile needs v > 0, got {v}"
            )));
        }
        Ok(Smile::Flat(v))
    }

    pub fn svi(params: SviParams) -> Self {
        Smile::Svi(params)
    }

    pub fn ssvi(params: SsviParams) -> Self {
        Smile::Ssvi(params)
    }

    pub fn sampled(knots: &[(f64, f64)]) -> Result<Self> {
        Ok(Smile::Sampled(SampledSmile::new(knots)?))
    }

    /// The dual smile `k -> v(-k)`.
    pub fn mirrored(&self) -> Self {
        Smile::Mirror(Box::new(self.clone()))
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            Smile::Sampled(_) => Provenance::Sampled,
            Smile::Mirror(inner) => inner.provenance(),
            _ => Provenance::Parametric,
        }
    }

    /// Knot range for sampled smiles; `None` when defined on all of `R`.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match self {
            Smile::Sampled(s) => Some(s.domain()),
            Smile::Mirror(inner) => inner.domain().map(|(lo, hi)| (-hi, -lo)),
            _ => None,
        }
    }

    pub fn eval(&self, k: f64) -> Result<SmilePoint> {
        match self {
            Smile::Flat(c) => Ok(SmilePoint {
                v: *c,
                dv: 0.0,
                d2v: 0.0,
            }),
            Smile::Svi(p) => Ok(vol_point(p.variance_derivs(k))),
            Smile::Ssvi(p) => Ok(vol_point(p.variance_derivs(k))),
            Smile::Sampled(s) => s.eval(k),
            Smile::Mirror(inner) => {
                let p = inner.eval(-k)?;
                Ok(SmilePoint {
                    v: p.v,
                    dv: -p.dv,
                    d2v: p.d2v,
                })
            }
        }
    }

    pub fn v(&self, k: f64) -> Result<f64> {
        Ok(self.eval(k)?.v)
    }

    pub fn dv(&self, k: f64) -> Result<f64> {
        Ok(self.eval(k)?.dv)
    }

    pub fn d2v(&self, k: f64) -> Result<f64> {
        Ok(self.eval(k)?.d2v)
    }
}

/// `v = sqrt(w)` and derivatives from `(w, w', w'')`.
fn vol_point((w, w1, w2): (f64, f64, f64)) -> SmilePoint {
    let v = w.sqrt();
    let dv = w1 / (2.0 * v);
    let d2v = w2 / (2.0 * v) - w1 * w1 / (4.0 * w * v);
    SmilePoint { v, dv, d2v }
}

/// Parses the `k,v` CSV smile format: one header row, comma separator,
/// decimal points, UTF-8.
pub fn sampled_smile_from_csv(text: &str) -> Result<Smile> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty smile CSV".into()))?;
    if header.trim() != "k,v" {
        return Err(Error::InvalidInput(format!(
            "smile CSV must start with header 'k,v', got '{header}'"
        )));
    }
    let mut knots = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cells = line.split(',');
        let (k, v) = match (cells.next(), cells.next(), cells.next()) {
            (Some(k), Some(v), None) => (k, v),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "smile CSV row {}: expected two comma-separated fields, got '{line}'",
                    i + 2
                )))
            }
        };
        let parse = |s: &str, what: &str| {
            s.trim().parse::<f64>().map_err(|_| {
                Error::InvalidInput(format!("smile CSV row {}: bad {what} '{s}'", i + 2))
            })
        };
        knots.push((parse(k, "k")?, parse(v, "v")?));
    }
    Smile::sampled(&knots)
}

// ---------------------------------------------------------------------------
// natural cubic spline
// ---------------------------------------------------------------------------

/// Natural cubic spline through smile knots, with first and second derivatives.
#[derive(Debug, Clone)]
pub struct SampledSmile {
    ks: Vec<f64>,
    vs: Vec<f64>,
    /// Second derivatives at the knots (zero at both ends).
    m2: Vec<f64>,
}

impl SampledSmile {
    pub fn new(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 4 {
            return Err(Error::InvalidInput(format!(
                "sampled smile needs at least 4 knots, got {}",
                knots.len()
            )));
        }
        let ks: Vec<f64> = knots.iter().map(|&(k, _)| k).collect();
        let vs: Vec<f64> = knots.iter().map(|&(_, v)| v).collect();
        if ks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput(
                "sampled smile knots must have strictly increasing k".into(),
            ));
        }
        if let Some(&bad) = vs.iter().find(|&&v| !(v > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "sampled smile values must be > 0, got {bad}"
            )));
        }
        let m2 = natural_spline_second_derivs(&ks, &vs);
        let spline = Self { ks, vs, m2 };
        // The knots are positive; make sure the interpolant stays positive
        // between them too.
        for i in 0..spline.ks.len() - 1 {
            for j in 1..8 {
                let k = spline.ks[i] + (spline.ks[i + 1] - spline.ks[i]) * j as f64 / 8.0;
                let v = spline.eval(k)?.v;
                if !(v > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "sampled smile interpolant dips to {v} at k={k}"
                    )));
                }
            }
        }
        Ok(spline)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.ks[0], *self.ks.last().unwrap())
    }

    fn eval(&self, k: f64) -> Result<SmilePoint> {
        let (lo, hi) = self.domain();
        if !(k >= lo && k <= hi) {
            return Err(Error::OutOfDomain { k, lo, hi });
        }
        // Index of the interval [ks[i], ks[i+1]] containing k.
        let i = match self.ks.binary_search_by(|x| x.partial_cmp(&k).unwrap()) {
            Ok(j) => j.min(self.ks.len() - 2),
            Err(j) => j - 1,
        };
        let h = self.ks[i + 1] - self.ks[i];
        let t = k - self.ks[i];
        let (ma, mb) = (self.m2[i], self.m2[i + 1]);
        let b = (self.vs[i + 1] - self.vs[i]) / h - h * (2.0 * ma + mb) / 6.0;
        let d = (mb - ma) / (6.0 * h);
        let v = self.vs[i] + t * (b + t * (0.5 * ma + t * d));
        let dv = b + t * (ma + 3.0 * d * t);
        let d2v = ma + 6.0 * d * t;
        Ok(SmilePoint { v, dv, d2v })
    }
}

/// Second derivatives of the natural cubic spline (Thomas algorithm on the
/// interior tridiagonal system; end values are zero).
fn natural_spline_second_derivs(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut m = vec![0.0; n];
    let sys = n - 2;
    let h = |i: usize| xs[i + 1] - xs[i];
    let mut diag = vec![0.0; sys];
    let mut rhs = vec![0.0; sys];
    for i in 0..sys {
        diag[i] = 2.0 * (h(i) + h(i + 1));
        rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h(i + 1) - (ys[i + 1] - ys[i]) / h(i));
    }
    // Forward sweep: sub/super diagonals are h(i+1) and h(i).
    for i in 1..sys {
        let f = h(i) / diag[i - 1];
        diag[i] -= f * h(i);
        rhs[i] -= f * rhs[i - 1];
    }
    m[sys] = rhs[sys - 1] / diag[sys - 1];
    for i in (1..sys).rev() {
        m[i] = (rhs[i - 1] - h(i) * m[i + 1]) / diag[i - 1];
    }
    m
}

// ---------------------------------------------------------------------------
// surfaces
// ---------------------------------------------------------------------------

/// Total volatility surface point: value, strike derivatives, time derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub v: f64,
    pub dv: f64,
    pub d2v: f64,
    pub dt_v: f64,
}

/// Annualized implied volatility surface point `sigma = v / sqrt(T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaPoint {
    pub sigma: f64,
    pub dk: f64,
    pub d2k: f64,
    pub dt: f64,
}

/// A maturity-indexed family of smiles with exact time derivatives.
#[derive(Debug, Clone)]
pub enum Surface {
    /// `w(T, k) = (theta_rate T / 2)(1 + rho phi k + sqrt(Delta(k)))`.
    Ssvi { theta_rate: f64, phi: f64, rho: f64 },
    /// Flat Black-Scholes surface `v(T, k) = s sqrt(T)`.
    FlatVol(f64),
}

/// SSVI surface with ATM total variance `theta_rate * T`.
pub fn ssvi_surface(theta_rate: f64, phi: f64, rho: f64) -> Result<Surface> {
    SsviParams::new(theta_rate, phi, rho)?;
    Ok(Surface::Ssvi {
        theta_rate,
        phi,
        rho,
    })
}

impl Surface {
    pub fn flat_vol(s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidInput(format!(
                "flat surface needs s > 0, got {s}"
            )));
        }
        Ok(Surface::FlatVol(s))
    }

    fn check_t(t: f64) -> Result<()> {
        if t.is_finite() && t > 0.0 {
            Ok(())
        } else {
            Err(Error::NonPositiveMaturity { t })
        }
    }

    /// Fixed-maturity slice as a [`Smile`].
    pub fn slice(&self, t: f64) -> Result<Smile> {
        Self::check_t(t)?;
        match *self {
            Surface::Ssvi {
                theta_rate,
                phi,
                rho,
            } => Ok(Smile::ssvi(SsviParams::new(theta_rate * t, phi, rho)?)),
            Surface::FlatVol(s) => Smile::flat(s * t.sqrt()),
        }
    }

    pub fn eval(&self, t: f64, k: f64) -> Result<SurfacePoint> {
        Self::check_t(t)?;
        match *self {
            Surface::Ssvi {
                theta_rate,
                phi,
                rho,
            } => {
                let params = SsviParams {
                    theta: theta_rate * t,
                    phi,
                    rho,
                };
                let p = vol_point(params.variance_derivs(k));
                // w is linear in T, so dT w = w / T exactly and dT v = v / (2T).
                Ok(SurfacePoint {
                    v: p.v,
                    dv: p.dv,
                    d2v: p.d2v,
                    dt_v: 0.5 * p.v / t,
                })
            }
            Surface::FlatVol(s) => {
                let sq = t.sqrt();
                Ok(SurfacePoint {
                    v: s * sq,
                    dv: 0.0,
                    d2v: 0.0,
                    dt_v: 0.5 * s / sq,
                })
            }
        }
    }

    /// Annualized-volatility view. For both families `sigma` is
    /// maturity-independent, so `dt = 0` exactly.
    pub fn sigma_eval(&self, t: f64, k: f64) -> Result<SigmaPoint> {
        Self::check_t(t)?;
        match *self {
            Surface::Ssvi {
                theta_rate,
                phi,
                rho,
            } => {
                let params = SsviParams {
                    theta: theta_rate,
                    phi,
                    rho,
                };
                let p = vol_point(params.variance_derivs(k));
                Ok(SigmaPoint {
                    sigma: p.v,
                    dk: p.dv,
                    d2k: p.d2v,
                    dt: 0.0,
                })
            }
            Surface::FlatVol(s) => Ok(SigmaPoint {
                sigma: s,
                dk: 0.0,
                d2k: 0.0,
                dt: 0.0,
            }),
        }
    }

    pub fn v(&self, t: f64, k: f64) -> Result<f64> {
        Ok(self.eval(t, k)?.v)
    }

    pub fn sigma(&self, t: f64, k: f64) -> Result<f64> {
        Ok(self.sigma_eval(t, k)?.sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig1_left() -> Smile {
        Smile::svi(SviParams::new(0.04, 0.4, -0.7, 0.1, 0.2).unwrap())
    }

    fn fig1_right() -> Smile {
        Smile::ssvi(SsviParams::new(0.25, 3.0, 0.7).unwrap())
    }

    #[test]
    fn svi_at_shift_collapses_to_a_plus_b_sigma() {
        let p = SviParams::new(0.04, 0.4, -0.7, 0.1, 0.2).unwrap();
        assert_relative_eq!(p.total_variance(0.1), 0.12, epsilon = 1e-15);
    }

    #[test]
    fn svi_atm_value() {
        // 40-digit oracle: w(0) = 0.04 + 0.4*(0.07 + sqrt(0.05)).
        let p = SviParams::new(0.04, 0.4, -0.7, 0.1, 0.2).unwrap();
        assert_relative_eq!(
            p.total_variance(0.0),
            0.1574427190999915878564,
            epsilon = 1e-15
        );
        let smile = Smile::svi(p);
        assert_relative_eq!(
            smile.v(0.0).unwrap(),
            0.3967905229462916341546,
            epsilon = 1e-15
        );
    }

    #[test]
    fn svi_zero_slope_is_flat() {
        let p = SviParams::new(0.04, 0.0, 0.3, -0.5, 0.2).unwrap();
        let smile = Smile::svi(p);
        for &k in &[-2.0, 0.0, 1.5] {
            let pt = smile.eval(k).unwrap();
            assert_relative_eq!(pt.v, 0.04f64.sqrt(), epsilon = 1e-15);
            assert_eq!(pt.dv, 0.0);
            assert_eq!(pt.d2v, 0.0);
        }
    }

    #[test]
    fn svi_rejects_bad_params_and_nonpositive_variance() {
        assert!(SviParams::new(0.04, -0.1, 0.0, 0.0, 0.2).is_err());
        assert!(SviParams::new(0.04, 0.4, 0.0, 0.0, 0.0).is_err());
        assert!(SviParams::new(0.04, 0.4, 1.0, 0.0, 0.2).is_err());
        // Large negative level pushes w below zero somewhere on the probe grid.
        assert!(SviParams::new(-1.0, 0.1, 0.0, 0.0, 0.2).is_err());
    }

    #[test]
    fn ssvi_atm_variance_is_theta() {
        for &(theta, phi, rho) in &[(0.25, 3.0, 0.7), (0.09, 4.0, -0.8), (1.0, 0.5, 0.0)] {
            let p = SsviParams::new(theta, phi, rho).unwrap();
            assert!((p.total_variance(0.0) - theta).abs() < 1e-15);
        }
    }

    #[test]
    fn ssvi_fig1_value() {
        let p = SsviParams::new(0.25, 3.0, 0.7).unwrap();
        assert_relative_eq!(
            p.total_variance(0.5),
            0.5453758376555094392521,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            Smile::ssvi(p).v(0.5).unwrap(),
            0.7384956585217745471022,
            epsilon = 1e-15
        );
    }

    #[test]
    fn ssvi_minimum_total_variance() {
        // Grid minimization: the minimum is theta (1 - rho^2) at k = -2 rho / phi.
        for &(theta, phi, rho) in &[(0.25, 3.0, 0.7), (0.09, 4.0, -0.8), (0.5, 2.0, 0.3)] {
            let p = SsviParams::new(theta, phi, rho).unwrap();
            let grid_min = linspace(-20.0, 20.0, 400_001)
                .into_iter()
                .map(|k| p.total_variance(k))
                .fold(f64::INFINITY, f64::min);
            assert_relative_eq!(grid_min, p.min_total_variance(), max_relative = 1e-8);
            assert_relative_eq!(
                p.total_variance(-2.0 * rho / phi),
                p.min_total_variance(),
                epsilon = 1e-15
            );
            assert!(p.min_total_variance() > 0.0);
        }
    }

    #[test]
    fn ssvi_wing_slopes() {
        // w(k)/|k| -> (theta phi / 2)(1 +- rho) as k -> +-inf.
        let p = SsviParams::new(0.25, 3.0, 0.7).unwrap();
        let base = 0.5 * p.theta * p.phi;
        let k = 1e3;
        assert_relative_eq!(p.total_variance(k) / k, base * 1.7, max_relative = 1e-2);
        assert_relative_eq!(p.total_variance(-k) / k, base * 0.3, max_relative = 1e-2);
    }

    #[test]
    fn parametric_derivatives_match_finite_differences() {
        for smile in [fig1_left(), fig1_right()] {
            for k in linspace(-2.0, 2.0, 81) {
                let p = smile.eval(k).unwrap();
                let h1 = 1e-5;
                let fd1 = (smile.v(k + h1).unwrap() - smile.v(k - h1).unwrap()) / (2.0 * h1);
                assert_relative_eq!(p.dv, fd1, max_relative = 1e-6, epsilon = 1e-9);
                let h2 = 1e-4;
                let fd2 =
                    (smile.v(k + h2).unwrap() - 2.0 * p.v + smile.v(k - h2).unwrap()) / (h2 * h2);
                assert_relative_eq!(p.d2v, fd2, max_relative = 1e-6, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn sampled_reproduces_flat_data() {
        let knots: Vec<(f64, f64)> = linspace(-1.0, 1.0, 11)
            .into_iter()
            .map(|k| (k, 0.2))
            .collect();
        let smile = Smile::sampled(&knots).unwrap();
        for k in linspace(-1.0, 1.0, 101) {
            assert!((smile.v(k).unwrap() - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn sampled_tracks_svi_between_knots() {
        let svi = fig1_left();
        let knots: Vec<(f64, f64)> = linspace(-1.0, 1.0, 41)
            .into_iter()
            .map(|k| (k, svi.v(k).unwrap()))
            .collect();
        let smile = Smile::sampled(&knots).unwrap();
        let mut worst_all: f64 = 0.0;
        let mut worst_interior: f64 = 0.0;
        for (i, pair) in knots.windows(2).enumerate() {
            let mid = 0.5 * (pair[0].0 + pair[1].0);
            let err = (smile.v(mid).unwrap() - svi.v(mid).unwrap()).abs();
            worst_all = worst_all.max(err);
            if (2..38).contains(&i) {
                worst_interior = worst_interior.max(err);
            }
        }
        // The natural end condition costs accuracy in the outermost intervals.
        assert!(
            worst_interior < 1e-5,
            "interior midpoint error {worst_interior}"
        );
        assert!(worst_all < 2e-5, "boundary midpoint error {worst_all}");
    }

    #[test]
    fn sampled_derivatives_are_consistent() {
        let svi = fig1_left();
        let knots: Vec<(f64, f64)> = linspace(-1.0, 1.0, 41)
            .into_iter()
            .map(|k| (k, svi.v(k).unwrap()))
            .collect();
        let smile = Smile::sampled(&knots).unwrap();
        for k in linspace(-0.9, 0.9, 37) {
            let p = smile.eval(k).unwrap();
            let h = 1e-6;
            let fd = (smile.v(k + h).unwrap() - smile.v(k - h).unwrap()) / (2.0 * h);
            assert_relative_eq!(p.dv, fd, max_relative = 1e-5, epsilon = 1e-8);
        }
    }

    #[test]
    fn sampled_rejects_bad_input() {
        assert!(Smile::sampled(&[(0.0, 0.2), (0.1, 0.2), (0.2, 0.2)]).is_err());
        assert!(Smile::sampled(&[(0.0, 0.2), (0.0, 0.2), (0.1, 0.2), (0.2, 0.2)]).is_err());
        assert!(Smile::sampled(&[(0.0, 0.2), (0.1, -0.2), (0.2, 0.2), (0.3, 0.2)]).is_err());
    }

    #[test]
    fn sampled_refuses_extrapolation() {
        let knots: Vec<(f64, f64)> = linspace(-1.0, 1.0, 11)
            .into_iter()
            .map(|k| (k, 0.2))
            .collect();
        let smile = Smile::sampled(&knots).unwrap();
        assert_eq!(smile.domain(), Some((-1.0, 1.0)));
        assert!(matches!(smile.v(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(
            smile.v(-1.0 - 1e-12),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(smile.v(1.0).is_ok());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let smile =
            sampled_smile_from_csv("k,v\n-0.3,0.25\n-0.1,0.22\n0.1,0.21\n0.3,0.23\n").unwrap();
        assert!((smile.v(-0.1).unwrap() - 0.22).abs() < 1e-15);
        assert!(sampled_smile_from_csv("x,y\n0,1\n").is_err());
        assert!(sampled_smile_from_csv("k,v\n0,abc\n0.1,0.2\n0.2,0.2\n0.3,0.2\n").is_err());
        assert!(sampled_smile_from_csv("k,v\n0,0.2,9\n0.1,0.2\n0.2,0.2\n0.3,0.2\n").is_err());
    }

    #[test]
    fn mirror_flips_strike_axis() {
        let smile = fig1_right();
        let dual = smile.mirrored();
        for &k in &[-0.7, -0.2, 0.0, 0.4] {
            let p = smile.eval(-k).unwrap();
            let q = dual.eval(k).unwrap();
            assert_eq!(q.v, p.v);
            assert_eq!(q.dv, -p.dv);
            assert_eq!(q.d2v, p.d2v);
        }
    }

    #[test]
    fn surface_atm_vol_and_time_linearity() {
        let surf = ssvi_surface(0.09, 4.0, -0.8).unwrap();
        assert_relative_eq!(surf.sigma(1.0, 0.0).unwrap(), 0.3, epsilon = 1e-15);
        assert_relative_eq!(surf.v(1.0, 0.0).unwrap(), 0.3, epsilon = 1e-15);
        assert_relative_eq!(
            surf.v(0.25, 0.2).unwrap(),
            0.1039230484541326376116,
            epsilon = 1e-15
        );
        for &t in &[0.1, 0.5, 2.0] {
            for &k in &[-0.4, 0.0, 0.3] {
                let p = surf.eval(t, k).unwrap();
                // dT w * T = w, with dT w = 2 v dT v.
                let w = p.v * p.v;
                assert_relative_eq!(2.0 * p.v * p.dt_v * t, w, epsilon = 1e-15);
                // accessor consistency: sigma = v / sqrt(T)
                let s = surf.sigma_eval(t, k).unwrap();
                assert_relative_eq!(s.sigma, p.v / t.sqrt(), epsilon = 1e-14);
                assert_relative_eq!(s.dk, p.dv / t.sqrt(), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn surface_vanishes_at_short_maturity() {
        let surf = ssvi_surface(0.09, 4.0, -0.8).unwrap();
        for &k in &[-1.0, 0.0, 1.0] {
            assert!(surf.v(1e-6, k).unwrap() < 1e-3);
        }
    }

    #[test]
    fn surface_rejects_nonpositive_maturity() {
        let surf = ssvi_surface(0.09, 4.0, -0.8).unwrap();
        assert!(matches!(
            surf.v(0.0, 0.1),
            Err(Error::NonPositiveMaturity { .. })
        ));
        assert!(matches!(
            surf.slice(-1.0),
            Err(Error::NonPositiveMaturity { .. })
        ));
    }

    #[test]
    fn flat_surface_is_black_scholes() {
        let surf = Surface::flat_vol(0.2).unwrap();
        let p = surf.eval(0.25, 0.7).unwrap();
        assert_relative_eq!(p.v, 0.1, epsilon = 1e-15);
        assert_eq!(p.dv, 0.0);
        assert_relative_eq!(p.dt_v, 0.2, epsilon = 1e-15);
        let s = surf.sigma_eval(0.25, 0.7).unwrap();
        assert_eq!(s.sigma, 0.2);
        assert_eq!(s.dt, 0.0);
    }

    #[test]
    fn slice_matches_surface() {
        let surf = ssvi_surface(0.09, 4.0, -0.8).unwrap();
        let slice = surf.slice(0.37).unwrap();
        for &k in &[-0.5, 0.0, 0.8] {
            assert_relative_eq!(
                slice.v(k).unwrap(),
                surf.v(0.37, k).unwrap(),
                epsilon = 1e-15
            );
        }
    }
}
