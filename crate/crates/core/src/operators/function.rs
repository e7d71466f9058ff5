//! Test functions the operators act on, and the standard catalog.

use std::fmt;
use std::sync::Arc;

use crate::basis::ShapeParams;
use crate::error::{parameter, Error, Result};

/// Growth bound of `|f(t)|`, the data that places `f` in the class `W_n^ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    /// `|f(t)| <= bound`.
    Bounded { bound: f64 },
    /// `|f(t)| <= bound (1 + t^degree)`; for `c > 0` this is `q = c * degree`.
    Polynomial { bound: f64, degree: f64 },
    /// `|f(t)| <= bound e^{q t}`.
    Exponential { bound: f64, q: f64 },
}

impl Growth {
    fn sample_bound(&self, t: f64) -> f64 {
        match *self {
            Growth::Bounded { bound } => bound,
            Growth::Polynomial { bound, degree } => bound * (1.0 + t.powf(degree)),
            Growth::Exponential { bound, q } => bound * (q * t).exp(),
        }
    }

    /// Checks that the defining integrals of `B_{n,ρ}` converge for the
    /// `order`-fold antiderivative `I_order f`: for `c = 0` the exponential
    /// rate must stay below `nρ`, for `c > 0` the polynomial degree of
    /// `I_order f` must stay below `nρ/c + 1`.
    pub fn check_integrable(&self, sp: &ShapeParams, rho: f64, order: usize) -> Result<()> {
        let (c, n) = (sp.c(), sp.n());
        let fail = |detail: String| Err(Error::Divergent { detail });
        match *self {
            Growth::Bounded { .. } => Ok(()),
            Growth::Polynomial { degree, .. } => {
                let total = degree + order as f64;
                if c > 0.0 && total >= n * rho / c + 1.0 {
                    fail(format!(
                        "I_{order} f grows like t^{total}, needs degree < n rho / c + 1 = {}",
                        n * rho / c + 1.0
                    ))
                } else {
                    Ok(())
                }
            }
            Growth::Exponential { q, .. } => {
                if q <= 0.0 {
                    Ok(())
                } else if c > 0.0 {
                    fail(format!("exponential growth e^({q} t) is not integrable for c > 0"))
                } else if q >= n * rho {
                    fail(format!("exponential rate {q} needs q < n rho = {}", n * rho))
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Clone)]
enum Shape {
    Monomial { coef: f64, power: u32 },
    ExpDecay { a: f64 },
    Reciprocal,
    Indicator { a: f64, b: f64 },
    AbsShift { a: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// An evaluable function on `[0, ∞)` with its value at the origin, growth
/// tag and, where known, exact iterated antiderivatives.
///
/// Evaluation is stateless, so one value can be shared across threads.
#[derive(Clone)]
pub struct TestFunction {
    name: String,
    shape: Shape,
    value_at_zero: f64,
    growth: Growth,
    breaks: Vec<f64>,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("value_at_zero", &self.value_at_zero)
            .field("growth", &self.growth)
            .finish()
    }
}

fn factorial_ratio(m: u32, k: usize) -> f64 {
    // m! / (m + k)!
    (1..=k).fold(1.0, |acc, i| acc / (m as f64 + i as f64))
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

impl TestFunction {
    /// `coef * t^power`.
    pub fn scaled_monomial(coef: f64, power: u32) -> Self {
        Self {
            name: if coef == 1.0 {
                format!("e{power}")
            } else {
                format!("{coef}*e{power}")
            },
            shape: Shape::Monomial { coef, power },
            value_at_zero: if power == 0 { coef } else { 0.0 },
            growth: if power == 0 {
                Growth::Bounded { bound: coef.abs() }
            } else {
                Growth::Polynomial {
                    bound: coef.abs(),
                    degree: power as f64,
                }
            },
            breaks: Vec::new(),
        }
    }

    /// The monomial `e_m(t) = t^m`.
    pub fn monomial(power: u32) -> Self {
        Self::scaled_monomial(1.0, power)
    }

    /// `e^{-a t}`, `a > 0`.
    pub fn exp_decay(a: f64) -> Self {
        Self {
            name: format!("exp_decay:{a}"),
            shape: Shape::ExpDecay { a },
            value_at_zero: 1.0,
            growth: Growth::Bounded { bound: 1.0 },
            breaks: Vec::new(),
        }
    }

    /// `1 / (1 + t)`.
    pub fn bounded_smooth() -> Self {
        Self {
            name: "bounded_smooth".into(),
            shape: Shape::Reciprocal,
            value_at_zero: 1.0,
            growth: Growth::Bounded { bound: 1.0 },
            breaks: Vec::new(),
        }
    }

    /// The indicator of `[a, b)`.
    pub fn indicator(a: f64, b: f64) -> Self {
        Self {
            name: format!("indicator:{a}:{b}"),
            shape: Shape::Indicator { a, b },
            value_at_zero: if a <= 0.0 && 0.0 < b { 1.0 } else { 0.0 },
            growth: Growth::Bounded { bound: 1.0 },
            breaks: vec![a, b],
        }
    }

    /// `|t - a|`.
    pub fn abs_shift(a: f64) -> Self {
        Self {
            name: format!("abs_shift:{a}"),
            shape: Shape::AbsShift { a },
            value_at_zero: a.abs(),
            growth: Growth::Polynomial {
                bound: 1.0 + a.abs(),
                degree: 1.0,
            },
            breaks: vec![a],
        }
    }

    /// A user-supplied function. The growth tag is sampled on `[0, 50]` and a
    /// warning is logged if the samples exceed it.
    pub fn custom<F>(name: impl Into<String>, f: F, value_at_zero: f64, growth: Growth) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let tf = Self {
            name: name.into(),
            shape: Shape::Custom(Arc::new(f)),
            value_at_zero,
            growth,
            breaks: Vec::new(),
        };
        if !tf.growth_tag_holds() {
            log::warn!("test function {} exceeds its growth tag on [0, 50]", tf.name);
        }
        tf
    }

    /// Adds initial quadrature breakpoints (kinks or jumps of `f`).
    pub fn with_breaks(mut self, breaks: Vec<f64>) -> Self {
        self.breaks = breaks;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value_at_zero(&self) -> f64 {
        self.value_at_zero
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::Monomial { coef, power } => coef * t.powi(*power as i32),
            Shape::ExpDecay { a } => (-a * t).exp(),
            Shape::Reciprocal => 1.0 / (1.0 + t),
            Shape::Indicator { a, b } => {
                if t >= *a && t < *b {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::AbsShift { a } => (t - a).abs(),
            Shape::Custom(f) => f(t),
        }
    }

    /// `(I_k f)(x)` in closed form, when known.
    pub fn iterated_exact(&self, k: usize, x: f64) -> Option<f64> {
        if k == 0 {
            return Some(self.eval(x));
        }
        match &self.shape {
            Shape::Monomial { coef, power } => {
                Some(coef * factorial_ratio(*power, k) * x.powi((*power as usize + k) as i32))
            }
            Shape::Reciprocal => match k {
                1 => Some(x.ln_1p()),
                2 => Some((1.0 + x) * x.ln_1p() - x),
                _ => None,
            },
            Shape::Indicator { a, b } => {
                let ramp = |s: f64| if s > 0.0 { s.powi(k as i32) } else { 0.0 };
                Some((ramp(x - a) - ramp(x - b)) / factorial(k))
            }
            _ => None,
        }
    }

    pub fn has_exact_antiderivative(&self, k: usize) -> bool {
        self.iterated_exact(k, 1.0).is_some()
    }

    /// `f^{(r)}` where the catalog knows it in closed form (monomials).
    pub fn derivative(&self, r: u32) -> Option<TestFunction> {
        match &self.shape {
            Shape::Monomial { coef, power } => {
                if r > *power {
                    Some(Self::scaled_monomial(0.0, 0))
                } else {
                    let falling = ((power - r + 1)..=*power).fold(1.0, |acc, i| acc * i as f64);
                    Some(Self::scaled_monomial(coef * falling, power - r))
                }
            }
            _ => None,
        }
    }

    /// Whether `f >= 0` on `[0, ∞)` is known from the catalog entry.
    pub fn is_nonnegative(&self) -> bool {
        match &self.shape {
            Shape::Monomial { coef, .. } => *coef >= 0.0,
            Shape::Custom(_) => false,
            _ => true,
        }
    }

    /// Samples `|f| <= growth bound` on `[0, 50]`.
    pub fn growth_tag_holds(&self) -> bool {
        (0..=500).all(|i| {
            let t = i as f64 * 0.1;
            let v = self.eval(t).abs();
            v <= self.growth.sample_bound(t) * (1.0 + 1e-12) + 1e-300
        })
    }
}

/// Names understood by [`lookup`]; parametric entries take `:`-separated
/// arguments with the defaults shown.
pub const CATALOG_NAMES: &[&str] = &[
    "e0",
    "e1",
    "e2",
    "e3",
    "e4",
    "e5",
    "e6",
    "exp_decay[:a=1]",
    "bounded_smooth",
    "indicator[:a=0.5:b=1.5]",
    "abs_shift[:a=1]",
];

/// Looks up a catalog function such as `e2`, `e_3`, `bounded_smooth`,
/// `indicator:0.2:0.4` or `abs_shift:0.5`.
pub fn lookup(name: &str) -> Result<TestFunction> {
    let mut parts = name.trim().split(':');
    let head = parts.next().unwrap_or_default();
    let args: Vec<f64> = parts
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| parameter(format!("numeric function argument (got {p:?} in {name:?})")))
        })
        .collect::<Result<_>>()?;
    let arg = |i: usize, default: f64| args.get(i).copied().unwrap_or(default);
    let mono = head.strip_prefix("e_").or_else(|| head.strip_prefix('e'));
    if let Some(Ok(m)) = mono.map(str::parse::<u32>) {
        if m <= 6 && args.is_empty() {
            return Ok(TestFunction::monomial(m));
        }
    }
    match head {
        "exp_decay" => {
            let a = arg(0, 1.0);
            if !(a > 0.0) {
                return Err(parameter("exp_decay rate a > 0"));
            }
            Ok(TestFunction::exp_decay(a))
        }
        "bounded_smooth" => Ok(TestFunction::bounded_smooth()),
        "indicator" => {
            let (a, b) = (arg(0, 0.5), arg(1, 1.5));
            if !(a < b) {
                return Err(parameter("indicator bounds a < b"));
            }
            Ok(TestFunction::indicator(a, b))
        }
        "abs_shift" => Ok(TestFunction::abs_shift(arg(0, 1.0))),
        _ => Err(parameter(format!(
            "a catalog function name, one of {} (got {name:?})",
            CATALOG_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::numeric_derivative;

    fn catalog() -> Vec<TestFunction> {
        let mut v: Vec<TestFunction> = (0..=6).map(TestFunction::monomial).collect();
        v.push(TestFunction::exp_decay(1.0));
        v.push(TestFunction::bounded_smooth());
        v.push(TestFunction::indicator(0.5, 1.5));
        v.push(TestFunction::abs_shift(1.0));
        v
    }

    #[test]
    fn growth_tags_and_values_at_zero() {
        for f in catalog() {
            assert!(f.growth_tag_holds(), "{}", f.name());
            assert_eq!(f.value_at_zero(), f.eval(0.0), "{}", f.name());
        }
    }

    #[test]
    fn antiderivatives_differentiate_back() {
        for f in catalog() {
            for k in 1..=4 {
                if !f.has_exact_antiderivative(k) {
                    continue;
                }
                for &x in &[0.3, 0.9, 2.2] {
                    let d = numeric_derivative(|t| f.iterated_exact(k, t).unwrap(), x, 1, None).unwrap();
                    let prev = f.iterated_exact(k - 1, x).unwrap();
                    assert!((d - prev).abs() < 1e-6, "{} k={k} x={x}", f.name());
                }
            }
        }
    }

    #[test]
    fn lookup_names() {
        assert_eq!(lookup("e3").unwrap().eval(2.0), 8.0);
        assert_eq!(lookup("e_2").unwrap().eval(3.0), 9.0);
        assert_eq!(lookup("indicator:0.2:0.4").unwrap().eval(0.3), 1.0);
        assert!(lookup("e7").is_err());
        assert!(lookup("nope").is_err());
        assert!(lookup("indicator:1:0").is_err());
    }

    #[test]
    fn monomial_derivatives() {
        let d = TestFunction::monomial(3).derivative(2).unwrap();
        assert_eq!(d.eval(2.0), 12.0);
        let z = TestFunction::monomial(1).derivative(2).unwrap();
        assert_eq!(z.eval(5.0), 0.0);
        assert!(TestFunction::bounded_smooth().derivative(1).is_none());
    }

    #[test]
    fn integrability_checks() {
        let sp = ShapeParams::new(1.0, 5.0).unwrap();
        let e4 = TestFunction::monomial(4).growth();
        assert!(e4.check_integrable(&sp, 1.0, 1).is_ok());
        assert!(matches!(e4.check_integrable(&sp, 1.0, 2), Err(Error::Divergent { .. })));
        assert!(e4.check_integrable(&sp, 2.0, 2).is_ok());
        let sp0 = ShapeParams::new(0.0, 5.0).unwrap();
        assert!(e4.check_integrable(&sp0, 1.0, 4).is_ok());
        let fast = Growth::Exponential { bound: 1.0, q: 6.0 };
        assert!(fast.check_integrable(&sp0, 1.0, 0).is_err());
        assert!(fast.check_integrable(&sp0, 2.0, 0).is_ok());
        assert!(fast.check_integrable(&sp, 2.0, 0).is_err());
    }
}
