//! `I_k`, the classical operator `B_{n,∞}`, the genuine Durrmeyer operator
//! `B_{n,1}` and the linking operators `B_{n,ρ}`.

use crate::basis::{basis_bump, basis_p, OpConfig, ShapeParams};
use crate::error::Result;
use crate::kernels::MuDensity;
use crate::numerics::{
    integrate_interval_with_breaks, integrate_semi_infinite_with_breaks, truncated_series_sum,
    QuadratureConfig, SeriesConfig,
};

use super::function::TestFunction;

/// `(I_k f)(x) = ∫_0^x (x-t)^{k-1}/(k-1)! f(t) dt`, `I_0 f = f`.
///
/// Uses the exact antiderivative when the catalog knows it, otherwise one
/// quadrature of the kernel form on `[0, x]`.
pub fn iterated_integral_i(f: &TestFunction, k: usize, x: f64, quad: &QuadratureConfig) -> Result<f64> {
    if let Some(v) = f.iterated_exact(k, x) {
        return Ok(v);
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    let fact: f64 = (1..k).map(|i| i as f64).product();
    let r = integrate_interval_with_breaks(
        |t| (x - t).powi(k as i32 - 1) / fact * f.eval(t),
        0.0,
        x,
        f.breaks(),
        quad,
    )?;
    Ok(r.value)
}

/// `(B_{n,∞} f)(x) = Σ_j p_{n,j}(x) f(j/n)`.
pub fn baskakov_classic(sp: &ShapeParams, f: &TestFunction, x: f64, series: &SeriesConfig) -> Result<f64> {
    let n = sp.n();
    let sum = truncated_series_sum(
        |j| {
            let node = if j == 0 {
                f.value_at_zero()
            } else {
                f.eval(j as f64 / n)
            };
            Ok(basis_p(sp, j as i64, x) * node)
        },
        |j| Ok(basis_p(sp, j as i64, x)),
        series,
    )?;
    Ok(sum.value)
}

/// `(B_{n,1} f)(x) = p_{n,0}(x) f(0) + Σ_{j>=1} p_{n,j}(x) (n+c) ∫ p_{n+2c,j-1} f`.
///
/// `cfg.rho` and `cfg.k` are not used.
pub fn genuine_durrmeyer(sp: &ShapeParams, f: &TestFunction, x: f64, cfg: &OpConfig) -> Result<f64> {
    f.growth().check_integrable(sp, 1.0, 0)?;
    let (c, n) = (sp.c(), sp.n());
    let inner = sp.with_n(n + 2.0 * c)?;
    let sum = truncated_series_sum(
        |j| {
            let w = basis_p(sp, j as i64, x);
            if j == 0 {
                return Ok(w * f.value_at_zero());
            }
            let idx = j as i64 - 1;
            let (m, s) = basis_bump(&inner, idx);
            let r = integrate_semi_infinite_with_breaks(
                |t| basis_p(&inner, idx, t) * f.eval(t),
                m,
                s,
                f.breaks(),
                &cfg.quad,
            )?;
            Ok(w * (n + c) * r.value)
        },
        |j| Ok(basis_p(sp, j as i64, x)),
        &cfg.series,
    )?;
    Ok(sum.value)
}

/// `∫_0^∞ μ_{n,j,ρ}(t) g(t) dt`.
pub(crate) fn mu_moment<G: Fn(f64) -> f64>(
    sp: &ShapeParams,
    rho: f64,
    j: u64,
    g: G,
    breaks: &[f64],
    quad: &QuadratureConfig,
) -> Result<f64> {
    let mu = MuDensity::new(sp, rho, j)?;
    let (m, s) = mu.bump();
    let r = integrate_semi_infinite_with_breaks(|t| mu.eval(t) * g(t), m, s, breaks, quad)?;
    Ok(r.value)
}

/// `(B_{n,ρ} f)(x) = p_{n,0}(x) f(0) + Σ_{j>=1} p_{n,j}(x) ∫ μ_{n,j,ρ} f`,
/// for any real `ρ = cfg.rho > 0`. `cfg.k` is not used.
pub fn linking_op(sp: &ShapeParams, f: &TestFunction, x: f64, cfg: &OpConfig) -> Result<f64> {
    cfg.validate()?;
    f.growth().check_integrable(sp, cfg.rho, 0)?;
    let sum = truncated_series_sum(
        |j| {
            let w = basis_p(sp, j as i64, x);
            if j == 0 {
                return Ok(w * f.value_at_zero());
            }
            Ok(w * mu_moment(sp, cfg.rho, j as u64, |t| f.eval(t), f.breaks(), &cfg.quad)?)
        },
        |j| Ok(basis_p(sp, j as i64, x)),
        &cfg.series,
    )?;
    Ok(sum.value)
}
