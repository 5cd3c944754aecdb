/// Errors produced by smile construction, evaluation and the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Invalid parameters or arguments (construction-time checks).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A sampled smile was evaluated outside its knot range.
    #[error("evaluation at k={k} outside the sampled domain [{lo}, {hi}]")]
    OutOfDomain { k: f64, lo: f64, hi: f64 },

    /// Maturity must be strictly positive for surface evaluation.
    #[error("maturity must be > 0, got {t}")]
    NonPositiveMaturity { t: f64 },

    /// `d/dk (k/v)` is non-positive at `k`: the smile is not arbitrage-free,
    /// so the positive function `h` of the harmonic-mean representation does
    /// not exist there.
    #[error("1/h(k) <= 0 at k={k}: input smile admits arbitrage")]
    NonPositiveReciprocal { k: f64 },

    /// Bracket expansion for a root find exhausted the search interval
    /// (or the sampled-smile domain) without enclosing the target.
    #[error("no bracket for target {target} within k in [{lo}, {hi}]")]
    BracketNotFound { target: f64, lo: f64, hi: f64 },

    /// The hybrid root finder hit its iteration cap.
    #[error("root finder did not converge for target {target} (last k={last})")]
    NoConvergence { target: f64, last: f64 },

    /// The Dupire ratio is negative: calendar arbitrage (`dT w < 0`).
    #[error("negative local variance at (T={t}, k={k}): calendar arbitrage")]
    NegativeVariance { t: f64, k: f64 },

    /// The Dupire denominator is non-positive: butterfly arbitrage.
    #[error("non-positive Dupire denominator at (T={t}, k={k}): butterfly arbitrage")]
    NonPositiveDenominator { t: f64, k: f64 },

    /// `1 + T a + T^2 b` is non-positive, so the identity relating `Sigma`
    /// and the local volatility has left its domain.
    #[error("1 + T*a + T^2*b = {value} <= 0 at (T={t}, k={k})")]
    IdentityDomain { t: f64, k: f64, value: f64 },

    /// The smile carries an atom at zero (left-tail slope >= 2); the density
    /// pricing formulas assume there is none.
    #[error("mass at zero detected (beta_minus ~ {beta_minus}); pricing formulas require beta_minus < 2")]
    MassAtZero { beta_minus: f64 },

    /// A quadrature integrand evaluated to a non-finite value.
    #[error("non-finite integrand at x={x}")]
    NonFiniteIntegrand { x: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
