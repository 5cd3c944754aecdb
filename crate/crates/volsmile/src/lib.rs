//! Model-free analytics for implied volatility smiles.
//!
//! The crate works with the *total* implied volatility `v(k) = sqrt(T) * sigma_BS(k)`
//! of a fixed maturity, as a function of log-forward-moneyness `k = ln(K/F)`.
//! Around that object it provides:
//!
//! * normalized Black-Scholes pricing primitives ([`blackscholes`]),
//! * parametric (SVI, SSVI) and sampled smiles with analytic derivatives ([`smile`]),
//! * static no-arbitrage diagnostics: butterfly density, monotonicity of the
//!   `f_p` maps, SSVI slice conditions, mass at zero ([`arbitrage`]),
//! * the log-strike maps `f_p(k) = k/v(k) + (1/2 - p) v(k)`, their inverses, the
//!   positive function `h` whose harmonic mean reproduces `v`, and the
//!   arithmetic-mean representation in the `z = f_{1/2}(k)` coordinate
//!   ([`transform`]),
//! * Dupire local volatility and its link to `h` on a surface ([`dupire`]),
//! * short-maturity limits of the rescaled normalized volatilities ([`shorttime`]),
//! * density-based pricing of European claims and closed-form/quadrature
//!   volatility-swap values for SSVI ([`pricing`]).
//!
//! Grid sweeps (diagnostics, theta sweeps, per-maturity residuals) run on rayon
//! when the default `parallel` feature is enabled; every such entry point has a
//! `_seq` twin so the two can be compared (see `benches/parallel.rs`).

// `!(x > 0.0)`-style guards are deliberate: they reject NaN along with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants keep the full precision of the oracle they were
// computed with; parsing rounds them to the nearest f64.
#![allow(clippy::excessive_precision)]

pub mod arbitrage;
pub mod batch;
pub mod blackscholes;
pub mod dupire;
mod error;
pub mod grid;
pub mod pricing;
pub mod quad;
pub mod report;
pub mod roots;
pub mod shorttime;
pub mod smile;
pub mod transform;

pub use error::{Error, Result};
