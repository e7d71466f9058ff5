//! Numerical foundation: special functions, quadrature, series truncation
//! and finite differences.

mod derivative;
mod quadrature;
mod series;
pub(crate) mod special;

pub use derivative::{default_step, numeric_derivative};
pub use quadrature::{
    integrate_interval, integrate_interval_with_breaks, integrate_semi_infinite,
    integrate_semi_infinite_with_breaks, Integral, QuadratureConfig,
};
pub use series::{series_extent, truncated_series_sum, SeriesConfig, SeriesSum};
pub use special::{log_beta, log_gamma};
