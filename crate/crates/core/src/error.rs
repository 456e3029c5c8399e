use thiserror::Error;

/// Errors surfaced by the analytic evaluators, samplers, and estimators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("integration error: {0}")]
    Integration(String),

    /// Iterative numerical routine failed to converge.
    #[error("numerical error: {0}")]
    Numeric(String),

    /// A fixed-step exit simulation ran out of its step budget. Carries the
    /// process time accumulated so far.
    #[error("step budget of {steps} exhausted after time {partial_time}")]
    Budget { partial_time: f64, steps: u64 },

    /// The resurrection loop exceeded its cap. For convex domains the count
    /// is dominated by a geometric law, so hitting the cap signals a
    /// geometry bug rather than bad luck.
    #[error("resurrection cap {cap} exceeded")]
    ResurrectionCap { cap: u32 },

    /// Survival-curve regression had too few tail survivors to fit a slope.
    #[error("insufficient tail: {survivors} survivors at the window end, need {needed}")]
    InsufficientTail { survivors: u64, needed: u64 },

    /// Estimator or experiment configuration violates a precondition.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
