//! The k-th order Kantorovich modifications `B^{(k)}_{n,ρ} = D^k ∘ B_{n,ρ} ∘ I_k`.
//!
//! Two independent evaluation paths:
//!
//! * [`kantorovich_rep`] sums `p_{n+kc,j}(x)` against integrals of the
//!   closed-form kernels `K^{(k)}_{n,j,ρ}` (natural `ρ` only).
//! * [`kantorovich_oracle`] literally applies `I_k`, the linking operator
//!   and a finite-difference `D^k`. It shares no kernel code with the
//!   representation and is the reference the representation is checked
//!   against.

use crate::basis::{
    basis_bump, basis_p, log_falling_factorial_c, log_rising_factorial_c, OpConfig, ShapeParams,
};
use crate::error::{parameter, Result};
use crate::kernels::KernelK;
use crate::numerics::{
    default_step, integrate_semi_infinite_with_breaks, numeric_derivative, series_extent,
    truncated_series_sum, SeriesConfig,
};

use super::function::TestFunction;
use super::linking::{iterated_integral_i, linking_op, mu_moment};

/// Highest order the finite-difference oracle supports.
pub const ORACLE_MAX_K: usize = 4;
/// Highest order the representation path accepts.
pub const REP_MAX_K: usize = 8;

/// `n^{c,rising k} / (nρ)^{c,falling k-1}`.
fn rep_constant(sp: &ShapeParams, rho: f64, k: usize) -> Result<f64> {
    let (c, n) = (sp.c(), sp.n());
    Ok((log_rising_factorial_c(n, k, c)? - log_falling_factorial_c(n * rho, k - 1, c)?).exp())
}

/// The closed form of `B^{(k)}_{n,ρ}(e_0)`: `n^{c,rising k} ρ^k / (nρ)^{c,falling k}`.
pub fn constant_image(sp: &ShapeParams, rho: f64, k: usize) -> Result<f64> {
    let (c, n) = (sp.c(), sp.n());
    Ok((log_rising_factorial_c(n, k, c)? + k as f64 * rho.ln() - log_falling_factorial_c(n * rho, k, c)?).exp())
}

/// `B^{(k)}_{n,ρ}(f; x)` through the kernel representation.
///
/// Requires `ρ ∈ ℕ`, `1 <= k <= 8` and `n - k >= 1`. Non-integer `n` is
/// evaluated as is.
pub fn kantorovich_rep(sp: &ShapeParams, cfg: &OpConfig, f: &TestFunction, x: f64) -> Result<f64> {
    cfg.validate()?;
    let rho = cfg.check_representation(sp)?;
    if cfg.k > REP_MAX_K {
        return Err(parameter(format!("k <= {REP_MAX_K} for the representation path")));
    }
    let k = cfg.k;
    f.growth().check_integrable(sp, cfg.rho, k)?;
    let kernel = KernelK::new(sp, rho, k)?;
    let constant = rep_constant(sp, cfg.rho, k)?;
    let outer = sp.with_n(sp.n() + k as f64 * sp.c())?;
    let mut breaks = Vec::with_capacity(f.breaks().len() + 2);
    let sum = truncated_series_sum(
        |j| {
            let j = j as u64;
            let (m, s) = kernel.bump(j);
            breaks.clear();
            breaks.extend_from_slice(&kernel.breaks(j));
            breaks.extend_from_slice(f.breaks());
            let r = integrate_semi_infinite_with_breaks(|t| kernel.eval(j, t) * f.eval(t), m, s, &breaks, &cfg.quad)?;
            Ok(basis_p(&outer, j as i64, x) * r.value)
        },
        |j| Ok(basis_p(&outer, j as i64, x)),
        &cfg.series,
    )?;
    Ok(constant * sum.value)
}

/// The `ρ = 1` closed form
/// `(n^{c,rising k} / n^{c,falling k-1}) Σ_j p_{n+ck,j}(x) ∫ p_{n-c(k-2),j+k-1} f`,
/// written out directly without composition counts.
pub fn kantorovich_rho_one(sp: &ShapeParams, k: usize, f: &TestFunction, x: f64, cfg: &OpConfig) -> Result<f64> {
    if k == 0 {
        return Err(parameter("k >= 1 for the rho = 1 closed form"));
    }
    f.growth().check_integrable(sp, 1.0, k)?;
    let (c, n) = (sp.c(), sp.n());
    let constant = (log_rising_factorial_c(n, k, c)? - log_falling_factorial_c(n, k - 1, c)?).exp();
    let outer = sp.with_n(n + c * k as f64)?;
    let inner = sp.with_n(n - c * (k as f64 - 2.0))?;
    let sum = truncated_series_sum(
        |j| {
            let idx = (j + k - 1) as i64;
            let (m, s) = basis_bump(&inner, idx);
            let r = integrate_semi_infinite_with_breaks(
                |t| basis_p(&inner, idx, t) * f.eval(t),
                m,
                s,
                f.breaks(),
                &cfg.quad,
            )?;
            Ok(basis_p(&outer, j as i64, x) * r.value)
        },
        |j| Ok(basis_p(&outer, j as i64, x)),
        &cfg.series,
    )?;
    Ok(constant * sum.value)
}

/// `B_{n,ρ}(I_k f)` as a fixed finite sum `Σ_{j<=J} p_{n,j}(y) a_j`.
///
/// The coefficients `a_j = ∫ μ_{n,j,ρ} I_k f` do not depend on `y`. Freezing
/// `J` keeps the sum smooth in `y`, so finite differences across the stencil
/// see no truncation jumps.
struct FrozenLinking {
    sp: ShapeParams,
    value_at_zero: f64,
    coeffs: Vec<f64>,
}

impl FrozenLinking {
    fn eval(&self, y: f64) -> f64 {
        let head = basis_p(&self.sp, 0, y) * self.value_at_zero;
        self.coeffs
            .iter()
            .enumerate()
            .fold(head, |acc, (i, a)| acc + basis_p(&self.sp, i as i64 + 1, y) * a)
    }
}

fn frozen_terms(sp: &ShapeParams, y_hi: f64, series: &SeriesConfig) -> Result<usize> {
    let j = series_extent(|j| Ok(basis_p(sp, j as i64, y_hi)), series)?;
    let extra = 10 + (5.0 * (j as f64).sqrt()).ceil() as usize;
    Ok((j + extra).min(series.j_max))
}

/// `B^{(k)}_{n,ρ}(f; x)` as `D^k` of `y ↦ B_{n,ρ}(I_k f; y)` at `x`.
///
/// Valid for any real `ρ > 0` and `k <= 4`; `k = 0` is the linking operator
/// itself.
pub fn kantorovich_oracle(sp: &ShapeParams, cfg: &OpConfig, f: &TestFunction, x: f64) -> Result<f64> {
    cfg.validate()?;
    let k = cfg.k;
    if k == 0 {
        return linking_op(sp, f, x, cfg);
    }
    if k > ORACLE_MAX_K {
        return Err(parameter(format!("k <= {ORACLE_MAX_K} for the oracle path")));
    }
    f.growth().check_integrable(sp, cfg.rho, k)?;
    let h = default_step(x, k);
    // Upper end of both the central and the one-sided stencil.
    let y_hi = x + (k as f64 + 1.0) * h;
    let terms = frozen_terms(sp, y_hi, &cfg.series)?;
    let g = |t: f64| iterated_integral_i(f, k, t, &cfg.quad).unwrap_or(f64::NAN);
    let coeffs = (1..=terms as u64)
        .map(|j| mu_moment(sp, cfg.rho, j, g, f.breaks(), &cfg.quad))
        .collect::<Result<Vec<f64>>>()?;
    let frozen = FrozenLinking {
        sp: *sp,
        value_at_zero: iterated_integral_i(f, k, 0.0, &cfg.quad)?,
        coeffs,
    };
    numeric_derivative(|y| frozen.eval(y), x, k, Some(h))
}
