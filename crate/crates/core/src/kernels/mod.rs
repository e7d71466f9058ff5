//! Integral kernels: the densities `μ`, the integrated kernels `ω`, the
//! k-th order kernels `K` and equidistant B-splines.

mod bspline;
mod kernel;
mod mu;
mod omega;
mod weights;

pub use bspline::{bspline_n, kernel_bspline_distance, SplineDistance, KNOT_EXCLUSION};
pub use kernel::{kernel_k, kernel_k_remark, KernelK};
pub use mu::mu_density;
pub(crate) use mu::MuDensity;
pub use omega::{omega_closed, omega_integral};
pub use weights::{composition_counts, KernelWeights};
