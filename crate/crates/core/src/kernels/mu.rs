//! The densities `μ_{n,j,ρ}` of the linking operators.
//!
//! For `c = 0`, `μ_{n,j,ρ}` is the Gamma density with shape `jρ` and rate
//! `nρ`; for `c > 0` it is the density of `X / c` with
//! `X ~ BetaPrime(jρ, nρ/c + 1)`. Both have mean `j / n`.

use crate::basis::{beta_prime_bump, ShapeParams};
use crate::error::{domain, Result};
use crate::numerics::{log_beta, log_gamma};

/// Log-normalization of `μ_{n,j,ρ}`, shared by every evaluation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MuDensity {
    c: f64,
    n: f64,
    rho: f64,
    shape: f64,
    log_norm: f64,
}

impl MuDensity {
    pub(crate) fn new(sp: &ShapeParams, rho: f64, j: u64) -> Result<Self> {
        if j < 1 {
            return Err(domain("mu_density", "requires j >= 1"));
        }
        if !(rho > 0.0) {
            return Err(domain("mu_density", format!("requires rho > 0, got {rho}")));
        }
        let (c, n) = (sp.c(), sp.n());
        let shape = j as f64 * rho;
        let log_norm = if c == 0.0 {
            shape * (n * rho).ln() - log_gamma(shape)?
        } else {
            shape * c.ln() - log_beta(shape, n * rho / c + 1.0)?
        };
        Ok(Self {
            c,
            n,
            rho,
            shape,
            log_norm,
        })
    }

    pub(crate) fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        if t == 0.0 {
            return self.at_origin();
        }
        let body = if self.c == 0.0 {
            (self.shape - 1.0) * t.ln() - self.n * self.rho * t
        } else {
            let tail_exp = (self.n / self.c) * self.rho + self.shape + 1.0;
            (self.shape - 1.0) * t.ln() - tail_exp * (self.c * t).ln_1p()
        };
        (self.log_norm + body).exp()
    }

    fn at_origin(&self) -> f64 {
        if self.shape > 1.0 {
            0.0
        } else if self.shape == 1.0 {
            self.log_norm.exp()
        } else {
            f64::INFINITY
        }
    }

    /// Mean `j / n` and standard deviation.
    pub(crate) fn bump(&self) -> (f64, f64) {
        if self.c == 0.0 {
            let rate = self.n * self.rho;
            (self.shape / rate, self.shape.sqrt() / rate)
        } else {
            beta_prime_bump(self.shape, self.n * self.rho / self.c + 1.0, self.c)
        }
    }
}

/// The density `μ_{n,j,ρ}(t)` for `j >= 1`, `t >= 0`.
///
/// At `t = 0` the finite limit is returned when `jρ >= 1`.
pub fn mu_density(sp: &ShapeParams, rho: f64, j: u64, t: f64) -> Result<f64> {
    let mu = MuDensity::new(sp, rho, j)?;
    if t < 0.0 || t.is_nan() {
        return Err(domain("mu_density", format!("requires t >= 0, got {t}")));
    }
    if t == 0.0 && mu.shape < 1.0 {
        return Err(domain("mu_density", "unbounded at t = 0 when j rho < 1"));
    }
    Ok(mu.eval(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_semi_infinite, QuadratureConfig};

    #[test]
    fn exponential_case() {
        let sp = ShapeParams::new(0.0, 1.0).unwrap();
        for &t in &[0.0, 0.3, 1.0, 4.0] {
            let v = mu_density(&sp, 1.0, 1, t).unwrap();
            assert!((v - (-t as f64).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn origin_limits() {
        let sp = ShapeParams::new(1.0, 5.0).unwrap();
        // c / B(1, nρ/c + 1) = nρ + c
        assert!((mu_density(&sp, 2.0, 1, 0.0).unwrap() - 0.0).abs() == 0.0);
        assert!((mu_density(&sp, 1.0, 1, 0.0).unwrap() - 6.0).abs() < 1e-12);
        let sp0 = ShapeParams::new(0.0, 5.0).unwrap();
        assert!((mu_density(&sp0, 1.0, 1, 0.0).unwrap() - 5.0).abs() < 1e-12);
        assert!(mu_density(&sp0, 0.5, 1, 0.0).is_err());
        assert!(mu_density(&sp0, 1.0, 0, 1.0).is_err());
        assert!(mu_density(&sp0, 1.0, 1, -1.0).is_err());
    }

    #[test]
    fn mass_and_mean() {
        let q = QuadratureConfig::default();
        for &(c, n) in &[(0.0, 3.0), (1.0, 5.0), (2.0, 7.0)] {
            let sp = ShapeParams::new(c, n).unwrap();
            for &rho in &[0.5, 1.0, 2.5, 7.0] {
                for j in [1u64, 2, 6] {
                    let mu = MuDensity::new(&sp, rho, j).unwrap();
                    let (m, s) = mu.bump();
                    let mass = integrate_semi_infinite(|t| mu.eval(t), m, s, &q).unwrap();
                    assert!((mass.value - 1.0).abs() < 1e-8, "{c} {n} {rho} {j}: {}", mass.value);
                    let mean = integrate_semi_infinite(|t| t * mu.eval(t), m, s, &q).unwrap();
                    assert!(
                        (mean.value - j as f64 / n).abs() < 1e-8,
                        "{c} {n} {rho} {j}: {}",
                        mean.value
                    );
                }
            }
        }
    }
}
