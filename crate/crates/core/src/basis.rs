//! Generalized factorials and the basis functions `p_{n,j}` on `[0, ∞)`.
//!
//! For `c = 0` the basis is the Szász-Mirakjan (Poisson) basis
//! `(n x)^j e^{-n x} / j!`; for `c > 0` it is the Baskakov-type basis
//! `n^{c,rising j} x^j (1 + c x)^{-(n/c + j)} / j!`. All values are formed in
//! log space and exponentiated once.

use serde::{Deserialize, Serialize};

use crate::error::{domain, parameter, Result};
use crate::numerics::special::log_factorial;
use crate::numerics::{log_gamma, QuadratureConfig, SeriesConfig};

/// Family parameter `c >= 0` and degree parameter `n > c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeParams {
    c: f64,
    n: f64,
}

impl ShapeParams {
    pub fn new(c: f64, n: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(parameter(format!("c >= 0 (got c = {c})")));
        }
        if !(n > c) || !n.is_finite() {
            return Err(parameter(format!("n > c (got n = {n}, c = {c})")));
        }
        Ok(Self { c, n })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    /// The same family with degree parameter `m` (e.g. `n + c`, `nρ + c`).
    pub fn with_n(&self, m: f64) -> Result<Self> {
        Self::new(self.c, m)
    }

    /// `n` is not a natural number, which is outside the hypotheses of the
    /// k-th order representation. Reported, not rejected.
    pub fn non_integer_n(&self) -> bool {
        self.n.fract() != 0.0
    }
}

/// Link parameter `rho`, Kantorovich order `k` and numerical budgets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpConfig {
    pub rho: f64,
    pub k: usize,
    pub series: SeriesConfig,
    pub quad: QuadratureConfig,
}

impl OpConfig {
    pub fn new(rho: f64, k: usize) -> Result<Self> {
        let cfg = Self {
            rho,
            k,
            series: SeriesConfig::default(),
            quad: QuadratureConfig::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(parameter(format!("rho > 0 (got {})", self.rho)));
        }
        self.series.validate()?;
        self.quad.validate()
    }

    /// `rho` as a natural number, required by the closed-form kernels.
    pub fn rho_natural(&self) -> Result<u32> {
        natural_rho(self.rho)
    }

    /// Hypotheses of the k-th order representation: `rho ∈ ℕ`, `k >= 1`,
    /// `n - k >= 1`.
    pub fn check_representation(&self, sp: &ShapeParams) -> Result<u32> {
        let rho = self.rho_natural()?;
        if self.k == 0 {
            return Err(parameter("k >= 1 for the kernel representation"));
        }
        if sp.n() - (self.k as f64) < 1.0 {
            return Err(parameter(format!(
                "n - k >= 1 (got n = {}, k = {})",
                sp.n(),
                self.k
            )));
        }
        Ok(rho)
    }
}

pub(crate) fn natural_rho(rho: f64) -> Result<u32> {
    if rho >= 1.0 && rho.fract() == 0.0 && rho <= u32::MAX as f64 {
        Ok(rho as u32)
    } else {
        Err(parameter(format!("rho to be a natural number (got {rho})")))
    }
}

// Beyond this many factors the Gamma-ratio route is cheaper and just as sharp,
// unless a / c is so large that ln Γ(a / c) swamps the difference.
const DIRECT_PRODUCT_MAX: usize = 64;
const GAMMA_ROUTE_MAX_RATIO: f64 = 1e6;

/// `ln a^{c, rising j} = Σ_{l<j} ln(a + c l)`.
pub fn log_rising_factorial_c(a: f64, j: usize, c: f64) -> Result<f64> {
    if j == 0 {
        return Ok(0.0);
    }
    if !(c >= 0.0) {
        return Err(domain("log_rising_factorial_c", format!("c >= 0, got {c}")));
    }
    if !(a > 0.0) {
        return Err(domain(
            "log_rising_factorial_c",
            format!("factor a = {a} is not positive"),
        ));
    }
    if c == 0.0 {
        return Ok(j as f64 * a.ln());
    }
    let ratio = a / c;
    if j <= DIRECT_PRODUCT_MAX || ratio > GAMMA_ROUTE_MAX_RATIO {
        Ok((0..j).map(|l| (a + c * l as f64).ln()).sum())
    } else {
        Ok(j as f64 * c.ln() + log_gamma(ratio + j as f64)? - log_gamma(ratio)?)
    }
}

/// `ln a^{c, falling j} = Σ_{l<j} ln(a - c l)`.
pub fn log_falling_factorial_c(a: f64, j: usize, c: f64) -> Result<f64> {
    if j == 0 {
        return Ok(0.0);
    }
    if !(c >= 0.0) {
        return Err(domain("log_falling_factorial_c", format!("c >= 0, got {c}")));
    }
    let last = a - c * (j - 1) as f64;
    if !(last > 0.0) || !(a > 0.0) {
        return Err(domain(
            "log_falling_factorial_c",
            format!("factor a - c (j - 1) = {last} is not positive"),
        ));
    }
    if c == 0.0 {
        return Ok(j as f64 * a.ln());
    }
    let ratio = a / c;
    if j <= DIRECT_PRODUCT_MAX || ratio > GAMMA_ROUTE_MAX_RATIO {
        Ok((0..j).map(|l| (a - c * l as f64).ln()).sum())
    } else {
        Ok(j as f64 * c.ln() + log_gamma(ratio + 1.0)? - log_gamma(ratio - j as f64 + 1.0)?)
    }
}

/// `ln p_{n,j}(x)`; `-∞` where the basis function vanishes.
pub fn log_basis_p(sp: &ShapeParams, j: i64, x: f64) -> f64 {
    if j < 0 || !(x >= 0.0) {
        return f64::NEG_INFINITY;
    }
    if x == 0.0 {
        return if j == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let (c, n) = (sp.c, sp.n);
    let jf = j as f64;
    let lf = log_factorial(j as u64);
    if c == 0.0 {
        jf * (n * x).ln() - n * x - lf
    } else {
        // n > c > 0 so the rising factorial is always defined.
        let rising = log_rising_factorial_c(n, j as usize, c).unwrap_or(f64::NAN);
        rising - lf + jf * x.ln() - (n / c + jf) * (c * x).ln_1p()
    }
}

/// The basis function `p_{n,j}(x)`, with `p_{n,j} = 0` for `j < 0`.
pub fn basis_p(sp: &ShapeParams, j: i64, x: f64) -> f64 {
    log_basis_p(sp, j, x).exp()
}

/// `p'_{n,j}(x) = n [p_{n+c,j-1}(x) - p_{n+c,j}(x)]`.
pub fn basis_p_derivative(sp: &ShapeParams, j: i64, x: f64) -> f64 {
    let shifted = ShapeParams {
        c: sp.c,
        n: sp.n + sp.c,
    };
    sp.n * (basis_p(&shifted, j - 1, x) - basis_p(&shifted, j, x))
}

/// Mean and standard deviation of `t ↦ p_{n,j}(t)` viewed as an (unnormalized)
/// density in `t`. Used to place quadrature panels.
pub(crate) fn basis_bump(sp: &ShapeParams, j: i64) -> (f64, f64) {
    let a = j.max(0) as f64 + 1.0;
    if sp.c == 0.0 {
        (a / sp.n, a.sqrt() / sp.n)
    } else {
        // t^{a-1} (1 + ct)^{-(n/c + a - 1)} is Beta-prime(a, n/c - 1) in ct.
        let beta = sp.n / sp.c - 1.0;
        beta_prime_bump(a, beta, sp.c)
    }
}

/// Mean and deviation of `X / c` for `X ~ BetaPrime(alpha, beta)`, with finite
/// fallbacks where the moments do not exist.
pub(crate) fn beta_prime_bump(alpha: f64, beta: f64, c: f64) -> (f64, f64) {
    let mode = if alpha > 1.0 {
        (alpha - 1.0) / (beta + 1.0)
    } else {
        0.0
    };
    let mean = if beta > 1.0 {
        alpha / (beta - 1.0)
    } else {
        mode + 1.0
    };
    let sd = if beta > 2.0 {
        (alpha * (alpha + beta - 1.0) / ((beta - 2.0) * (beta - 1.0) * (beta - 1.0))).sqrt()
    } else {
        mean + 1.0
    };
    (mean / c, sd / c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::numeric_derivative;

    fn sp(c: f64, n: f64) -> ShapeParams {
        ShapeParams::new(c, n).unwrap()
    }

    #[test]
    fn shape_validation() {
        assert!(ShapeParams::new(-1.0, 5.0).is_err());
        assert!(ShapeParams::new(2.0, 2.0).is_err());
        assert!(ShapeParams::new(0.0, 0.5).is_ok());
        assert!(ShapeParams::new(0.0, 0.0).is_err());
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(log_rising_factorial_c(7.0, 0, 2.0).unwrap(), 0.0);
        assert!((log_rising_factorial_c(5.0, 2, 1.0).unwrap() - 30f64.ln()).abs() < 1e-14);
        assert!((log_rising_factorial_c(3.0, 4, 0.0).unwrap() - 4.0 * 3f64.ln()).abs() < 1e-14);
        assert_eq!(log_falling_factorial_c(7.0, 0, 2.0).unwrap(), 0.0);
        assert!((log_falling_factorial_c(10.0, 2, 1.0).unwrap() - 90f64.ln()).abs() < 1e-14);
        assert!((log_falling_factorial_c(15.0, 3, 0.0).unwrap() - 3.0 * 15f64.ln()).abs() < 1e-14);
        assert!(log_falling_factorial_c(3.0, 4, 1.0).is_err());
        assert!(log_rising_factorial_c(-1.0, 2, 1.0).is_err());
    }

    #[test]
    fn factorial_routes_agree() {
        for &(a, c) in &[(5.0, 1.0), (7.5, 2.0), (3.0, 0.25)] {
            for j in [65usize, 100, 400] {
                let direct: f64 = (0..j).map(|l| (a + c * l as f64).ln()).sum();
                let fast = log_rising_factorial_c(a, j, c).unwrap();
                assert!((direct - fast).abs() < 1e-10 * direct.abs(), "{a} {c} {j}");
            }
        }
        let direct: f64 = (0..80).map(|l| (500.0 - 2.0 * l as f64).ln()).sum();
        let fast = log_falling_factorial_c(500.0, 80, 2.0).unwrap();
        assert!((direct - fast).abs() < 1e-10 * direct.abs());
    }

    #[test]
    fn basis_examples() {
        assert_eq!(basis_p(&sp(0.0, 1.0), 0, 0.0), 1.0);
        assert!((basis_p(&sp(1.0, 5.0), 0, 1.0) - 0.03125).abs() < 1e-15);
        let v = basis_p(&sp(1.0, 6.0), 1, 0.2);
        let expect = 6.0 * 0.2 * 1.2f64.powi(-7);
        assert!((v - expect).abs() < 1e-14);
        assert!((v - 0.334_897_976_7).abs() < 1e-10);
        assert_eq!(basis_p(&sp(1.0, 6.0), -1, 0.2), 0.0);
        assert_eq!(basis_p(&sp(0.0, 6.0), 3, 0.0), 0.0);
    }

    #[test]
    fn derivative_examples() {
        let s = sp(0.0, 1.0);
        assert!((basis_p_derivative(&s, 1, 0.0) - 1.0).abs() < 1e-15);
        let s = sp(1.0, 4.0);
        let shifted = sp(1.0, 5.0);
        let d = basis_p_derivative(&s, 0, 0.7);
        assert_eq!(d, -4.0 * basis_p(&shifted, 0, 0.7));
        for j in 0..12 {
            for &x in &[0.1, 0.5, 1.3, 3.0] {
                let num = numeric_derivative(|t| basis_p(&s, j, t), x, 1, None).unwrap();
                assert!((num - basis_p_derivative(&s, j, x)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn representation_hypotheses() {
        let s = sp(1.0, 5.0);
        assert!(OpConfig::new(2.0, 4).unwrap().check_representation(&s).is_ok());
        let err = OpConfig::new(2.0, 5).unwrap().check_representation(&s).unwrap_err();
        assert!(err.to_string().contains("n - k >= 1"));
        assert!(OpConfig::new(2.5, 1).unwrap().check_representation(&s).is_err());
        assert!(OpConfig::new(0.0, 1).is_err());
        assert!(sp(0.0, 5.5).non_integer_n());
    }
}
