//! Structural invariants checked on random parameters, each against an
//! independent computation.

use linkop_core::basis::basis_p;
use linkop_core::kernels::{bspline_n, omega_closed, KernelK};
use linkop_core::numerics::{integrate_semi_infinite, log_beta, QuadratureConfig};
use linkop_core::operators::{constant_image, kantorovich_rep, linking_op, lookup};
use linkop_core::{OpConfig, ShapeParams};
use proptest::prelude::*;
use statrs::function::gamma::ln_gamma;

fn shape() -> impl Strategy<Value = ShapeParams> {
    (prop_oneof![Just(0.0), Just(0.5), Just(1.0), Just(2.0)], 3u32..12)
        .prop_map(|(c, n)| ShapeParams::new(c, n as f64).unwrap())
}

fn product(a: f64, k: usize, step: f64) -> f64 {
    (0..k).map(|l| a + step * l as f64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_beta_matches_gamma_sum(a in 0.05f64..40.0, b in 0.05f64..40.0) {
        let expect = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
        let got = log_beta(a, b).unwrap();
        prop_assert!((got - expect).abs() <= 1e-12 * (1.0 + expect.abs()), "{got} vs {expect}");
    }

    #[test]
    fn basis_is_a_partition_of_unity(sp in shape(), x in 0.0f64..5.0) {
        let mut sum = 0.0;
        for j in 0..4000 {
            let p = basis_p(&sp, j, x);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&p));
            sum += p;
        }
        prop_assert!((sum - 1.0).abs() < 1e-12, "sum {sum}");
        prop_assert_eq!(basis_p(&sp, -1, x), 0.0);
    }

    #[test]
    fn omega_at_rho_one_is_a_shifted_basis_function(sp in shape(), j in 0u64..12, t in 0.0f64..4.0) {
        let shifted = sp.with_n(sp.n() + sp.c()).unwrap();
        let a = omega_closed(&sp, 1, j, t).unwrap();
        let b = basis_p(&shifted, j as i64, t);
        prop_assert!((a - b).abs() <= 1e-13 * (1.0 + b), "{a} vs {b}");
    }

    #[test]
    fn bsplines_sum_to_one(n in 1u32..10, k in 1usize..6, t in 0.0f64..4.0) {
        let n = n as f64;
        let top = (n * t).floor() as i64;
        let sum: f64 = (top - k as i64 + 1..=top).map(|j| bspline_n(n, k, j, t)).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12, "sum {sum}");
    }

    #[test]
    fn constant_image_is_a_ratio_of_products(sp in shape(), rho in 1u32..8, k in 0usize..5) {
        let (c, n) = (sp.c(), sp.n());
        let rho = rho as f64;
        prop_assume!(n * rho - c * k as f64 > 0.0);
        let expect = product(n, k, c) * rho.powi(k as i32) / product(n * rho, k, -c);
        let got = constant_image(&sp, rho, k).unwrap();
        prop_assert!((got - expect).abs() <= 1e-12 * expect, "{got} vs {expect}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn linking_reproduces_linear_functions(sp in shape(), rho in 0.5f64..6.0, x in 0.0f64..3.0) {
        let cfg = OpConfig::new(rho, 0).unwrap();
        let e0 = linking_op(&sp, &lookup("e0").unwrap(), x, &cfg).unwrap();
        let e1 = linking_op(&sp, &lookup("e1").unwrap(), x, &cfg).unwrap();
        prop_assert!((e0 - 1.0).abs() < 1e-8, "e0 {e0}");
        prop_assert!((e1 - x).abs() < 1e-8 * (1.0 + x), "e1 {e1} at {x}");
    }

    #[test]
    fn kernel_mass_matches_quadrature(sp in shape(), rho in 1u32..5, k in 1usize..4, j in 0u64..4) {
        prop_assume!(sp.n() * rho as f64 - sp.c() * (k as f64 - 1.0) > sp.c());
        let kernel = KernelK::new(&sp, rho, k).unwrap();
        let center = (j as f64 * rho as f64 + k as f64) / kernel.basis_degree();
        let quad = integrate_semi_infinite(|t| kernel.eval(j, t), center, 1.0 + center, &QuadratureConfig::default()).unwrap();
        let closed = kernel.integral_closed();
        prop_assert!((quad.value - closed).abs() <= 1e-8 * closed, "{} vs {closed}", quad.value);
    }

    #[test]
    fn kantorovich_image_of_one_is_constant(sp in shape(), rho in 1u32..4, k in 1usize..4, x in 0.0f64..3.0) {
        let cfg = OpConfig::new(rho as f64, k).unwrap();
        prop_assume!(cfg.check_representation(&sp).is_ok());
        let got = kantorovich_rep(&sp, &cfg, &lookup("e0").unwrap(), x).unwrap();
        let expect = constant_image(&sp, rho as f64, k).unwrap();
        prop_assert!((got - expect).abs() <= 1e-8 * expect, "{got} vs {expect}");
    }
}
