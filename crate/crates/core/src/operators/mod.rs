//! Linking operators, their Kantorovich modifications and the classical limits.

mod function;
mod kantorovich;
mod limit;
mod linking;

pub use function::{lookup, Growth, TestFunction, CATALOG_NAMES};
pub use kantorovich::{
    constant_image, kantorovich_oracle, kantorovich_rep, kantorovich_rho_one, ORACLE_MAX_K, REP_MAX_K,
};
pub use limit::{forward_difference, kantorovich_limit, LimitForm};
pub use linking::{baskakov_classic, genuine_durrmeyer, iterated_integral_i, linking_op};
