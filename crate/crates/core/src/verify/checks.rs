use rayon::prelude::*;

use crate::basis::{OpConfig, ShapeParams};
use crate::error::{parameter, Error, Result};
use crate::grid::Grid;
use crate::kernels::{kernel_bspline_distance, omega_closed, omega_integral};
use crate::numerics::QuadratureConfig;
use crate::operators::{
    forward_difference, kantorovich_oracle, kantorovich_rep, linking_op, lookup, TestFunction,
};

use super::{params_string, SweepRow, VerifyReport};

fn grid_string(grid: &Grid) -> String {
    format!("t={grid}")
}

fn points_string(xs: &[f64]) -> String {
    let pts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("x={{{}}}", pts.join(","))
}

/// Closed block sums against quadrature of the densities, one report per
/// `(ρ, j)`.
pub fn verify_lemma_omega(
    sp: &ShapeParams,
    rho_list: &[u32],
    j_list: &[u64],
    grid: &Grid,
    tol: f64,
    quad: &QuadratureConfig,
) -> Vec<VerifyReport> {
    let mut out = Vec::with_capacity(rho_list.len() * j_list.len());
    for &rho in rho_list {
        for &j in j_list {
            let params = params_string(sp, &[("rho", rho.to_string()), ("j", j.to_string())]);
            let worst = grid.points().try_fold(0.0f64, |acc, t| -> Result<f64> {
                let closed = omega_closed(sp, rho, j, t)?;
                let integral = omega_integral(sp, rho as f64, j, t, quad)?;
                Ok(acc.max((closed - integral).abs()))
            });
            let report = match worst {
                Ok(err) => {
                    let r = VerifyReport::new("lemma_omega", params, grid_string(grid), err, tol);
                    if rho == 1 {
                        r.with_note("identity case")
                    } else {
                        r
                    }
                }
                Err(e) => VerifyReport::errored("lemma_omega", params, grid_string(grid), tol, &e),
            };
            out.push(report.with_hypothesis_note(sp));
        }
    }
    out
}

fn same_rejection(a: &Result<f64>, b: &Result<f64>) -> bool {
    matches!((a, b), (Err(Error::Divergent { .. }), Err(Error::Divergent { .. })))
}

/// Kernel representation against the composition oracle, one report per
/// catalog function with the maximum over `x_grid`.
///
/// Functions for which the operator integrals diverge pass when both paths
/// reject them.
pub fn verify_representation(
    sp: &ShapeParams,
    cfg: &OpConfig,
    f_names: &[&str],
    x_grid: &[f64],
    tol: f64,
) -> Vec<VerifyReport> {
    let params_for = |name: &str| {
        params_string(
            sp,
            &[("rho", cfg.rho.to_string()), ("k", cfg.k.to_string()), ("f", name.to_string())],
        )
    };
    let grid = points_string(x_grid);
    f_names
        .iter()
        .map(|name| {
            let params = params_for(name);
            let f = match lookup(name) {
                Ok(f) => f,
                Err(e) => return VerifyReport::errored("representation", params, grid.clone(), tol, &e),
            };
            let mut worst = 0.0f64;
            let mut rejected = 0usize;
            for &x in x_grid {
                let rep = if cfg.k == 0 {
                    linking_op(sp, &f, x, cfg)
                } else {
                    kantorovich_rep(sp, cfg, &f, x)
                };
                let oracle = kantorovich_oracle(sp, cfg, &f, x);
                if same_rejection(&rep, &oracle) {
                    rejected += 1;
                    continue;
                }
                match (rep, oracle) {
                    (Ok(a), Ok(b)) => worst = worst.max((a - b).abs()),
                    (Err(e), _) | (_, Err(e)) => {
                        return VerifyReport::errored("representation", params, grid.clone(), tol, &e)
                            .with_hypothesis_note(sp)
                    }
                }
            }
            let r = VerifyReport::new("representation", params, grid.clone(), worst, tol).with_hypothesis_note(sp);
            match rejected {
                0 => r,
                _ => r.with_note("outside the integrability domain; both paths reject as divergent"),
            }
        })
        .collect()
}

/// Sign checks of the `r`-th derivative of `x ↦ B^{(k)}_{n,ρ}(f; x)`.
///
/// Check (a) takes undivided `r`-th differences of the image along `x_grid`;
/// check (b) evaluates `B^{(k+r)}_{n,ρ}(f^{(r)}; x)` through the
/// representation. The report error is the largest negative excursion of
/// either. Requires a catalog function whose `r`-th derivative is known and
/// nonnegative.
pub fn verify_convexity(
    sp: &ShapeParams,
    cfg: &OpConfig,
    r: u32,
    f: &TestFunction,
    x_grid: &Grid,
    tol: f64,
) -> VerifyReport {
    let params = params_string(
        sp,
        &[
            ("rho", cfg.rho.to_string()),
            ("k", cfg.k.to_string()),
            ("r", r.to_string()),
            ("f", f.name().to_string()),
        ],
    );
    let grid = format!("x={x_grid}");
    let deriv = if r == 0 { Some(f.clone()) } else { f.derivative(r) };
    let deriv = match deriv {
        Some(d) if d.is_nonnegative() => d,
        _ => {
            let e = parameter(format!("f^({r}) >= 0 certified by the catalog for {}", f.name()));
            return VerifyReport::errored("convexity", params, grid, tol, &e);
        }
    };
    let run = || -> Result<(f64, f64)> {
        let xs: Vec<f64> = x_grid.points().collect();
        let values = xs
            .iter()
            .map(|&x| kantorovich_rep(sp, cfg, f, x))
            .collect::<Result<Vec<f64>>>()?;
        let r = r as usize;
        let min_diff = (0..values.len().saturating_sub(r))
            .map(|i| forward_difference(|s| values[i + s as usize], r, 1.0, 0.0))
            .fold(f64::INFINITY, f64::min);
        let lifted = OpConfig { k: cfg.k + r, ..*cfg };
        let min_identity = xs
            .iter()
            .map(|&x| kantorovich_rep(sp, &lifted, &deriv, x))
            .try_fold(f64::INFINITY, |acc, v| v.map(|v| acc.min(v)))?;
        Ok((min_diff, min_identity))
    };
    match run() {
        Ok((min_diff, min_identity)) => {
            let violation = (-min_diff).max(-min_identity).max(0.0);
            VerifyReport::new("convexity", params, grid, violation, tol)
                .with_note(format!("min {r}-th difference {min_diff:.3e}, min B^(k+r) f^({r}) {min_identity:.3e}"))
                .with_hypothesis_note(sp)
        }
        Err(e) => VerifyReport::errored("convexity", params, grid, tol, &e).with_hypothesis_note(sp),
    }
}

/// Distances between the scaled kernels `K^{(k)}_{n,j,ρ}/ρ^{k-1}` and
/// `N_{n,k,j}` for each `ρ` in `rho_list` (ascending), rows in input order.
pub fn conjecture_sweep(sp: &ShapeParams, k: usize, j: u64, rho_list: &[u32], grid: &Grid) -> Result<Vec<SweepRow>> {
    if rho_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(parameter("rho list to be strictly ascending"));
    }
    rho_list
        .par_iter()
        .map(|&rho| {
            let cfg = OpConfig::new(rho as f64, k)?;
            let d = kernel_bspline_distance(sp, &cfg, j, grid)?;
            Ok(SweepRow {
                rho,
                sup_dist: d.sup_dist,
                l1_dist: d.l1_dist,
                grid_points: d.grid_points,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn lemma_examples() {
        let grid = Grid::new(0.0, 3.0, 0.05).unwrap();
        let sp0 = ShapeParams::new(0.0, 5.0).unwrap();
        assert!(verify_lemma_omega(&sp0, &[2], &[1], &grid, 1e-8, &q())[0].passed);
        let sp1 = ShapeParams::new(1.0, 5.0).unwrap();
        assert!(verify_lemma_omega(&sp1, &[3], &[0], &grid, 1e-8, &q())[0].passed);
        for sp in [sp0, sp1] {
            let r = &verify_lemma_omega(&sp, &[1], &[0, 1, 4], &grid, 1e-10, &q());
            assert!(r.iter().all(|r| r.passed && r.notes.contains("identity")), "{r:?}");
        }
        let zero = verify_lemma_omega(&sp1, &[2], &[1], &grid, 0.0, &q());
        assert!(!zero[0].passed);
    }

    #[test]
    fn representation_examples() {
        let xs = [0.25, 1.0, 2.0];
        let sp = ShapeParams::new(1.0, 5.0).unwrap();
        let r = verify_representation(&sp, &OpConfig::new(2.0, 1).unwrap(), &["e2"], &xs, 1e-5);
        assert!(r[0].passed, "{}", r[0]);
        let sp = ShapeParams::new(0.0, 6.0).unwrap();
        let r = verify_representation(&sp, &OpConfig::new(1.0, 2).unwrap(), &["e3"], &xs, 1e-5);
        assert!(r[0].passed, "{}", r[0]);
        let r = verify_representation(&sp, &OpConfig::new(2.0, 0).unwrap(), &["e2"], &xs, 0.0);
        assert!(r[0].passed && r[0].max_abs_err == 0.0);
        let r = verify_representation(&sp, &OpConfig::new(2.0, 1).unwrap(), &["nope"], &xs, 1.0);
        assert!(!r[0].passed);
    }

    #[test]
    fn divergent_point_passes_when_both_reject() {
        let sp = ShapeParams::new(1.0, 5.0).unwrap();
        let r = verify_representation(&sp, &OpConfig::new(1.0, 2).unwrap(), &["e4"], &[1.0], 1e-5);
        assert!(r[0].passed && r[0].notes.contains("divergent"), "{}", r[0]);
    }

    #[test]
    fn convexity_examples() {
        let sp = ShapeParams::new(1.0, 5.0).unwrap();
        let grid = Grid::new(0.0, 2.0, 0.25).unwrap();
        let cfg1 = OpConfig::new(2.0, 1).unwrap();
        for (f, r) in [(TestFunction::monomial(2), 2), (TestFunction::monomial(1), 1), (TestFunction::monomial(0), 0)] {
            let rep = verify_convexity(&sp, &cfg1, r, &f, &grid, 1e-10);
            assert!(rep.passed, "{rep}");
        }
        // e^{-t} has no certified nonnegative derivative.
        let rep = verify_convexity(&sp, &cfg1, 1, &TestFunction::exp_decay(1.0), &grid, 1.0);
        assert!(!rep.passed && rep.notes.contains("error"));
    }

    #[test]
    fn sweep_rows() {
        let sp = ShapeParams::new(1.0, 5.0).unwrap();
        let grid = Grid::new(0.0, 1.0, 1.0 / 512.0).unwrap();
        let rows = conjecture_sweep(&sp, 1, 1, &[10, 30, 150], &grid).unwrap();
        assert_eq!(rows.iter().map(|r| r.rho).collect::<Vec<_>>(), vec![10, 30, 150]);
        assert!(rows.windows(2).all(|w| w[1].l1_dist < w[0].l1_dist));
        let one = conjecture_sweep(&sp, 1, 1, &[1], &grid).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].sup_dist.is_finite() && one[0].l1_dist >= 0.0);
        assert!(conjecture_sweep(&sp, 1, 1, &[30, 10], &grid).is_err());
    }
}
