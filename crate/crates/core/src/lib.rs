//! Linking operators `B_{n,ρ}` between Baskakov / Szász-Mirakjan-Durrmeyer
//! type operators and their k-th order Kantorovich modifications.
//!
//! The crate evaluates the operators two ways: through closed-form kernel
//! representations built from the basis functions `p_{n,j}`, and through
//! the defining composition `D^k ∘ B_{n,ρ} ∘ I_k` with quadrature and finite
//! differences. The [`verify`] module cross-checks the two.

pub mod basis;
mod error;
pub mod grid;
pub mod kernels;
pub mod numerics;
pub mod operators;
pub mod verify;

pub use basis::{OpConfig, ShapeParams};
pub use error::{Error, Result};
pub use grid::Grid;
