//! Equidistant B-splines `N_{n,k,j}` on the knots `j/n, ..., (j+k)/n` and the
//! distance between scaled kernels and these splines.

use crate::basis::{natural_rho, OpConfig, ShapeParams};
use crate::error::Result;
use crate::grid::Grid;

use super::kernel::KernelK;

/// Grid points closer than this to a knot are left out of distance sums.
pub const KNOT_EXCLUSION: f64 = 1e-9;

/// `N_{n,k,j}(t)` by the two-term recursion
/// `N_{n,k,j} = n/(k-1) [(t - j/n) N_{n,k-1,j} + ((j+k)/n - t) N_{n,k-1,j+1}]`
/// starting from the half-open indicators of `[i/n, (i+1)/n)`.
pub fn bspline_n(n: f64, k: usize, j: i64, t: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let knot = |i: i64| i as f64 / n;
    if t < knot(j) || t >= knot(j + k as i64) {
        return 0.0;
    }
    // row[i] holds N_{n,order,j+i}.
    let mut row: Vec<f64> = (0..k as i64)
        .map(|i| {
            if t >= knot(j + i) && t < knot(j + i + 1) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for order in 2..=k {
        let scale = n / (order as f64 - 1.0);
        for i in 0..=(k - order) {
            let first = j + i as i64;
            row[i] = scale
                * ((t - knot(first)) * row[i] + (knot(first + order as i64) - t) * row[i + 1]);
        }
    }
    row[0]
}

/// Sup and trapezoidal L1 distance on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineDistance {
    pub sup_dist: f64,
    pub l1_dist: f64,
    /// Grid points kept after knot exclusion.
    pub grid_points: usize,
}

fn near_knot(t: f64, n: f64, j: i64, k: usize) -> bool {
    (0..=k as i64).any(|i| (t - (j + i) as f64 / n).abs() < KNOT_EXCLUSION)
}

/// Distance between `K^{(k)}_{n,j,ρ} / ρ^{k-1}` and `N_{n,k,j}` over `grid`,
/// skipping points within [`KNOT_EXCLUSION`] of a knot.
pub fn kernel_bspline_distance(sp: &ShapeParams, cfg: &OpConfig, j: u64, grid: &Grid) -> Result<SplineDistance> {
    let kernel = KernelK::new(sp, natural_rho(cfg.rho)?, cfg.k)?;
    let n = sp.n();
    let mut sup: f64 = 0.0;
    let mut l1 = 0.0;
    let mut kept = 0usize;
    let mut prev: Option<(f64, f64)> = None;
    for t in grid.points() {
        if near_knot(t, n, j as i64, cfg.k) {
            continue;
        }
        let d = (kernel.eval_scaled(j, t) - bspline_n(n, cfg.k, j as i64, t)).abs();
        sup = sup.max(d);
        if let Some((tp, dp)) = prev {
            l1 += 0.5 * (t - tp) * (d + dp);
        }
        prev = Some((t, d));
        kept += 1;
    }
    Ok(SplineDistance {
        sup_dist: sup,
        l1_dist: l1,
        grid_points: kept,
    })
}
