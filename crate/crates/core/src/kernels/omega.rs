//! The integrated kernels `ω_{n,j,ρ}`.
//!
//! `omega_integral` evaluates the defining integrals of the densities by
//! quadrature and works for any real `ρ > 0`. `omega_closed` is the block sum
//! of `ρ` consecutive basis functions `p_{nρ+c, i+jρ}`, valid for `ρ ∈ ℕ`.

use crate::basis::{basis_p, ShapeParams};
use crate::error::Result;
use crate::numerics::{
    integrate_interval_with_breaks, integrate_semi_infinite_with_breaks, QuadratureConfig,
};

use super::mu::MuDensity;

/// `ω_{n,0,ρ}(t) = ∫_t^∞ μ_{n,1,ρ}`, `ω_{n,j,ρ}(t) = ∫_0^t (μ_{n,j,ρ} - μ_{n,j+1,ρ})`.
///
/// Each branch switches to the complementary integral past the bulk of the
/// densities: `1 - ∫_0^t μ` for small `t` when `j = 0`, and
/// `-∫_t^∞ (μ_j - μ_{j+1})` for large `t` when `j >= 1`. Both densities have
/// unit mass so the value is unchanged and no large terms cancel.
pub fn omega_integral(sp: &ShapeParams, rho: f64, j: u64, t: f64, quad: &QuadratureConfig) -> Result<f64> {
    if j == 0 {
        let mu = MuDensity::new(sp, rho, 1)?;
        let (mean, sd) = mu.bump();
        if t <= mean {
            let head = integrate_interval_with_breaks(|u| mu.eval(u), 0.0, t, &[mean - sd], quad)?;
            Ok(1.0 - head.value)
        } else {
            let tail = integrate_semi_infinite_with_breaks(
                |u| mu.eval(t + u),
                (mean - t).max(0.0),
                sd,
                &[],
                quad,
            )?;
            Ok(tail.value)
        }
    } else {
        let lo = MuDensity::new(sp, rho, j)?;
        let hi = MuDensity::new(sp, rho, j + 1)?;
        let (m_lo, s_lo) = lo.bump();
        let (m_hi, s_hi) = hi.bump();
        let diff = |u: f64| lo.eval(u) - hi.eval(u);
        let switch = 0.5 * (m_lo + m_hi);
        if t <= switch {
            let breaks = [m_lo - s_lo, m_lo, m_lo + s_lo, m_hi - s_hi, m_hi];
            Ok(integrate_interval_with_breaks(diff, 0.0, t, &breaks, quad)?.value)
        } else {
            let breaks: Vec<f64> = [m_lo, m_hi, m_hi + s_hi]
                .iter()
                .map(|b| b - t)
                .collect();
            let tail = integrate_semi_infinite_with_breaks(
                |u| diff(t + u),
                (m_hi - t).max(0.0),
                s_hi.max(s_lo),
                &breaks,
                quad,
            )?;
            Ok(-tail.value)
        }
    }
}

/// `Σ_{i=0}^{ρ-1} p_{nρ+c, i+jρ}(t)`.
pub fn omega_closed(sp: &ShapeParams, rho: u32, j: u64, t: f64) -> Result<f64> {
    let block = sp.with_n(sp.n() * rho as f64 + sp.c())?;
    let first = j as i64 * rho as i64;
    Ok((0..rho as i64).map(|i| basis_p(&block, first + i, t)).sum())
}
