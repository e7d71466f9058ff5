use thiserror::Error;

/// Errors raised by the numerical layers and the operator evaluations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a special function or basis.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// Operator parameters violate a stated constraint (e.g. `n - k >= 1`).
    #[error("parameter error: requires {constraint}")]
    Parameter { constraint: String },

    /// The integrals defining the operator do not converge for this function.
    #[error("divergent integral: {detail}")]
    Divergent { detail: String },

    /// Adaptive quadrature exhausted its panel budget.
    #[error("quadrature did not converge: value {value:e}, error estimate {err_est:e} after {panels} panels")]
    Quadrature {
        value: f64,
        err_est: f64,
        panels: usize,
    },

    /// A truncated series needed more terms than the configured cap.
    #[error("series cap of {j_max} terms reached with accumulated mass {mass}")]
    SeriesCap { j_max: usize, mass: f64 },

    /// Integer overflow while counting compositions.
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}

pub(crate) fn parameter(constraint: impl Into<String>) -> Error {
    Error::Parameter {
        constraint: constraint.into(),
    }
}
