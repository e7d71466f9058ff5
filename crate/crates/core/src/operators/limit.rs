//! The `ρ → ∞` limits `B^{(k)}_{n,∞} = D^k ∘ B_{n,∞} ∘ I_k`.
//!
//! Differentiating the classical series `k` times moves the derivative onto
//! forward differences of `I_k f` at the nodes `j/n`, which Peano's theorem
//! turns into integrals against the B-splines `N_{n,k,j}`.

use serde::{Deserialize, Serialize};

use crate::basis::{basis_p, log_rising_factorial_c, ShapeParams};
use crate::error::Result;
use crate::kernels::bspline_n;
use crate::numerics::{integrate_interval_with_breaks, truncated_series_sum, QuadratureConfig, SeriesConfig};

use super::function::TestFunction;
use super::linking::{baskakov_classic, iterated_integral_i};

/// Which of the two equivalent limit forms to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LimitForm {
    /// `n^{c,rising k} Σ_j p_{n+kc,j}(x) Δ^k_{1/n}(I_k f)(j/n)`.
    #[default]
    Difference,
    /// `(n^{c,rising k} / n^{k-1}) Σ_j p_{n+kc,j}(x) ∫ N_{n,k,j} f`.
    BSpline,
}

/// `Δ^k_h g(x) = Σ_i (-1)^{k-i} C(k,i) g(x + ih)`.
pub fn forward_difference<G: FnMut(f64) -> f64>(mut g: G, k: usize, h: f64, x: f64) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for i in 0..=k {
        let sign = if (k - i) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * g(x + i as f64 * h);
        binom = binom * (k - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// `B^{(k)}_{n,∞}(f; x)`. `k = 0` is the classical operator.
pub fn kantorovich_limit(
    sp: &ShapeParams,
    k: usize,
    f: &TestFunction,
    x: f64,
    series: &SeriesConfig,
    quad: &QuadratureConfig,
    form: LimitForm,
) -> Result<f64> {
    if k == 0 {
        return baskakov_classic(sp, f, x, series);
    }
    let (c, n) = (sp.c(), sp.n());
    let outer = sp.with_n(n + k as f64 * c)?;
    let rising = log_rising_factorial_c(n, k, c)?.exp();
    let h = 1.0 / n;
    let sum = match form {
        LimitForm::Difference => truncated_series_sum(
            |j| {
                let mut err = None;
                let d = forward_difference(
                    |t| {
                        iterated_integral_i(f, k, t, quad).unwrap_or_else(|e| {
                            err.get_or_insert(e);
                            f64::NAN
                        })
                    },
                    k,
                    h,
                    j as f64 * h,
                );
                match err {
                    Some(e) => Err(e),
                    None => Ok(basis_p(&outer, j as i64, x) * d),
                }
            },
            |j| Ok(basis_p(&outer, j as i64, x)),
            series,
        )?,
        LimitForm::BSpline => {
            let mut breaks = Vec::with_capacity(k + 1 + f.breaks().len());
            truncated_series_sum(
                |j| {
                    let lo = j as f64 * h;
                    let hi = (j + k) as f64 * h;
                    breaks.clear();
                    breaks.extend((1..k).map(|i| (j + i) as f64 * h));
                    breaks.extend_from_slice(f.breaks());
                    let r = integrate_interval_with_breaks(
                        |t| bspline_n(n, k, j as i64, t) * f.eval(t),
                        lo,
                        hi,
                        &breaks,
                        quad,
                    )?;
                    Ok(basis_p(&outer, j as i64, x) * r.value)
                },
                |j| Ok(basis_p(&outer, j as i64, x)),
                series,
            )?
        }
    };
    let scale = match form {
        LimitForm::Difference => rising,
        LimitForm::BSpline => rising / n.powi(k as i32 - 1),
    };
    Ok(scale * sum.value)
}
