//! The kernels of the k-th order Kantorovich representation.
//!
//! `K^{(k)}_{n,j,ρ}(t) = Σ_s counts[s] p_{nρ - c(k-2), jρ + s + k - 1}(t)`
//! where `counts` are the composition counts of `s`. For `k = 1` this is the
//! block sum `Σ_{i<ρ} p_{nρ+c, i+jρ}(t)`.

use crate::basis::{basis_bump, basis_p, natural_rho, OpConfig, ShapeParams};
use crate::error::{parameter, Result};
use crate::numerics::{truncated_series_sum, SeriesConfig};

use super::weights::{composition_counts, KernelWeights};

/// A kernel family for fixed `(c, n, ρ, k)`, evaluable for any `j`.
#[derive(Debug, Clone)]
pub struct KernelK {
    sp: ShapeParams,
    basis: ShapeParams,
    rho: u32,
    k: usize,
    weights: KernelWeights,
}

impl KernelK {
    pub fn new(sp: &ShapeParams, rho: u32, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(parameter("k >= 1 for the kernel K"));
        }
        let m = sp.n() * rho as f64 - sp.c() * (k as f64 - 2.0);
        let basis = sp.with_n(m).map_err(|_| {
            parameter(format!(
                "n rho - c (k - 2) > c (got {m} with c = {})",
                sp.c()
            ))
        })?;
        let weights = composition_counts(rho, k as u32)?;
        Ok(Self {
            sp: *sp,
            basis,
            rho,
            k,
            weights,
        })
    }

    pub fn from_config(sp: &ShapeParams, cfg: &OpConfig) -> Result<Self> {
        Self::new(sp, natural_rho(cfg.rho)?, cfg.k)
    }

    pub fn weights(&self) -> &KernelWeights {
        &self.weights
    }

    /// Degree parameter `nρ - c(k-2)` of the basis functions in the kernel.
    pub fn basis_degree(&self) -> f64 {
        self.basis.n()
    }

    fn first_index(&self, j: u64) -> i64 {
        j as i64 * self.rho as i64 + self.k as i64 - 1
    }

    pub fn eval(&self, j: u64, t: f64) -> f64 {
        let first = self.first_index(j);
        self.weights
            .counts
            .iter()
            .enumerate()
            .map(|(s, &w)| w as f64 * basis_p(&self.basis, first + s as i64, t))
            .sum()
    }

    /// `K / ρ^{k-1}`, the normalization whose limit is conjectured to be the
    /// B-spline `N_{n,k,j}`.
    pub fn eval_scaled(&self, j: u64, t: f64) -> f64 {
        self.eval(j, t) / (self.rho as f64).powi(self.k as i32 - 1)
    }

    /// `∫_0^∞ K dt = ρ^k / (nρ - c(k-1))`, from `∫ p_{m,i} = 1 / (m - c)`.
    pub fn integral_closed(&self) -> f64 {
        self.weights.total() as f64 / (self.basis.n() - self.sp.c())
    }

    /// Location of the kernel's bulk: midpoint of the first and last basis
    /// bumps, with a spread covering both.
    pub(crate) fn bump(&self, j: u64) -> (f64, f64) {
        let first = self.first_index(j);
        let last = first + self.weights.max_sum() as i64;
        let (m0, s0) = basis_bump(&self.basis, first);
        let (m1, s1) = basis_bump(&self.basis, last);
        (0.5 * (m0 + m1), 0.5 * (m1 - m0).abs() + s0.max(s1))
    }

    /// Means of the first and last basis bumps, used as panel breaks.
    pub(crate) fn breaks(&self, j: u64) -> [f64; 2] {
        let first = self.first_index(j);
        let last = first + self.weights.max_sum() as i64;
        [basis_bump(&self.basis, first).0, basis_bump(&self.basis, last).0]
    }
}

/// `K^{(k)}_{n,j,ρ}(t)` for `cfg.rho ∈ ℕ`, `cfg.k >= 1`.
pub fn kernel_k(sp: &ShapeParams, cfg: &OpConfig, j: u64, t: f64) -> Result<f64> {
    Ok(KernelK::from_config(sp, cfg)?.eval(j, t))
}

/// The `k = 1` kernel written as the classical operator `B_{nρ+c,∞}` applied
/// to the indicator of `[jρ/(nρ+c), (j+1)ρ/(nρ+c))`, summed as a truncated
/// series in the index `i`.
pub fn kernel_k_remark(sp: &ShapeParams, rho: u32, j: u64, t: f64, series: &SeriesConfig) -> Result<f64> {
    if rho < 1 {
        return Err(parameter("rho >= 1"));
    }
    let m = sp.n() * rho as f64 + sp.c();
    let classic = sp.with_n(m)?;
    let lo = (j * rho as u64) as f64 / m;
    let hi = ((j + 1) * rho as u64) as f64 / m;
    let inside = |i: usize| {
        let node = i as f64 / m;
        node >= lo && node < hi
    };
    let sum = truncated_series_sum(
        |i| {
            Ok(if inside(i) {
                basis_p(&classic, i as i64, t)
            } else {
                0.0
            })
        },
        |i| Ok(basis_p(&classic, i as i64, t)),
        series,
    )?;
    Ok(sum.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::omega_closed;
    use crate::numerics::{integrate_semi_infinite_with_breaks, QuadratureConfig};

    #[test]
    fn k1_rho1_is_shifted_basis() {
        let sp = ShapeParams::new(1.0, 5.0).unwrap();
        let shifted = sp.with_n(6.0).unwrap();
        let kk = KernelK::new(&sp, 1, 1).unwrap();
        for j in 0..6 {
            for &t in &[0.0, 0.2, 0.9, 3.0] {
                assert_eq!(kk.eval(j, t), basis_p(&shifted, j as i64, t));
            }
        }
    }

    #[test]
    fn k1_matches_block_sum() {
        for &c in &[0.0, 1.0] {
            let sp = ShapeParams::new(c, 3.0).unwrap();
            for rho in [2u32, 3, 5] {
                let kk = KernelK::new(&sp, rho, 1).unwrap();
                for j in 0..4 {
                    for &t in &[0.0, 0.15, 0.6, 2.0] {
                        let a = kk.eval(j, t);
                        let b = omega_closed(&sp, rho, j, t).unwrap();
                        assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_mass() {
        let q = QuadratureConfig::default();
        for &(c, n) in &[(0.0, 5.0), (1.0, 5.0), (1.0, 8.0), (2.0, 9.0)] {
            let sp = ShapeParams::new(c, n).unwrap();
            for rho in [1u32, 2, 3] {
                for k in 1..=3usize {
                    let kk = KernelK::new(&sp, rho, k).unwrap();
                    for j in [0u64, 1, 4] {
                        let (m, s) = kk.bump(j);
                        let r = integrate_semi_infinite_with_breaks(|t| kk.eval(j, t), m, s, &kk.breaks(j), &q)
                            .unwrap();
                        let expect = (rho as f64).powi(k as i32) / (n * rho as f64 - c * (k as f64 - 1.0));
                        assert!((r.value - expect).abs() < 1e-8, "{c} {n} {rho} {k} {j}");
                        assert!((kk.integral_closed() - expect).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn remark_form() {
        let series = SeriesConfig::default();
        for &c in &[0.0, 1.0] {
            let sp = ShapeParams::new(c, 5.0).unwrap();
            for rho in [1u32, 2, 3, 5] {
                let kk = KernelK::new(&sp, rho, 1).unwrap();
                for j in [0u64, 1, 2, 5] {
                    for &t in &[0.0, 0.05, 0.35, 1.0, 3.0] {
                        let r = kernel_k_remark(&sp, rho, j, t, &series).unwrap();
                        assert!((r - kk.eval(j, t)).abs() <= 1e-10);
                    }
                }
            }
        }
        let sp = ShapeParams::new(1.0, 5.0).unwrap();
        assert_eq!(kernel_k_remark(&sp, 1, 0, 0.0, &series).unwrap(), 1.0);
        assert_eq!(kernel_k_remark(&sp, 3, 4, 0.0, &series).unwrap(), 0.0);
    }

    #[test]
    fn parameter_domain() {
        let sp = ShapeParams::new(2.0, 3.0).unwrap();
        // nρ - c(k-2) = 3 - 2*3 < c
        assert!(KernelK::new(&sp, 1, 5).is_err());
        assert!(KernelK::new(&sp, 1, 0).is_err());
    }
}
