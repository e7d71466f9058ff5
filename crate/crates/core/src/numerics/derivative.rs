//! Finite-difference derivatives of order 1..=4 with one Richardson step.

use crate::error::{parameter, Result};

// Second-order accurate stencils, as (offset, weight) pairs in units of h.
const CENTRAL: [&[(i32, f64)]; 4] = [
    &[(-1, -0.5), (1, 0.5)],
    &[(-1, 1.0), (0, -2.0), (1, 1.0)],
    &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
    &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
];

const FORWARD: [&[(i32, f64)]; 4] = [
    &[(0, -1.5), (1, 2.0), (2, -0.5)],
    &[(0, 2.0), (1, -5.0), (2, 4.0), (3, -1.0)],
    &[(0, -2.5), (1, 9.0), (2, -12.0), (3, 7.0), (4, -1.5)],
    &[(0, 3.0), (1, -14.0), (2, 26.0), (3, -24.0), (4, 11.0), (5, -2.0)],
];

/// Default step: `max(1e-4, 1e-3 (1 + |x|))` for orders 1-2,
/// `1e-2 (1 + |x|)` for orders 3-4.
pub fn default_step(x: f64, order: usize) -> f64 {
    if order <= 2 {
        (1e-3 * (1.0 + x.abs())).max(1e-4)
    } else {
        1e-2 * (1.0 + x.abs())
    }
}

fn apply<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64, order: usize, stencil: &[(i32, f64)]) -> f64 {
    let acc: f64 = stencil.iter().map(|&(o, w)| w * f(x + o as f64 * h)).sum();
    acc / h.powi(order as i32)
}

/// Estimates `f^{(order)}(x)`.
///
/// A central stencil is used when `x - order h >= 0`, otherwise a forward
/// stencil so that `f` is never evaluated left of the origin. Both are
/// second order; the Richardson combination of `h` and `h / 2` cancels the
/// `h^2` term.
pub fn numeric_derivative<F: Fn(f64) -> f64>(f: F, x: f64, order: usize, h: Option<f64>) -> Result<f64> {
    if !(1..=4).contains(&order) {
        return Err(parameter("derivative order in 1..=4"));
    }
    let h = h.unwrap_or_else(|| default_step(x, order));
    if !(h > 0.0) {
        return Err(parameter("step h > 0"));
    }
    let stencil = if x - order as f64 * h >= 0.0 {
        CENTRAL[order - 1]
    } else {
        FORWARD[order - 1]
    };
    let coarse = apply(&f, x, h, order, stencil);
    let fine = apply(&f, x, 0.5 * h, order, stencil);
    Ok((4.0 * fine - coarse) / 3.0)
}
