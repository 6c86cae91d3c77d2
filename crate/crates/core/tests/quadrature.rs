use std::f64::consts::PI;

use cak_core::algebra::numbers::rational;
use cak_core::kernel_map::integrals::{gauss_integral_2body_free, kernel_integral_2body};
use cak_core::kernel_map::quadrature::{
    gauss_hermite, gauss_laguerre, gauss_legendre, legendre_panels, tree_sum,
};
use num_complex::Complex64;
use proptest::prelude::*;
use statrs::function::gamma::gamma;

fn double_factorial_odd(k: u32) -> f64 {
    (1..=k).map(|j| (2 * j - 1) as f64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hermite_rule_is_exact_to_degree_2n_minus_1(n in 2usize..40, k in 0u32..40) {
        prop_assume!(2 * k < 2 * n as u32);
        let rule = gauss_hermite(n).unwrap();
        let got = rule.integrate(|x| x.powi(2 * k as i32));
        let exact = PI.sqrt() * double_factorial_odd(k) / 2f64.powi(k as i32);
        prop_assert!((got - exact).abs() <= 1e-11 * exact);
        prop_assert!(rule.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn laguerre_rule_reproduces_gamma_moments(n in 2usize..40, k in 0u32..20, alpha in -0.5f64..3.0) {
        prop_assume!(k < 2 * n as u32);
        let rule = gauss_laguerre(n, alpha).unwrap();
        let got = rule.integrate(|x| x.powi(k as i32));
        let exact = gamma(k as f64 + alpha + 1.0);
        prop_assert!((got - exact).abs() <= 1e-10 * exact);
    }

    #[test]
    fn legendre_panels_integrate_polynomials(lo in -3.0f64..0.0, width in 0.1f64..5.0, panels in 1usize..6, order in 2usize..12) {
        let hi = lo + width;
        let rule = legendre_panels(lo, hi, panels, order).unwrap();
        let deg = 2 * order as i32 - 1;
        let got = rule.integrate(|x| x.powi(deg));
        let exact = (hi.powi(deg + 1) - lo.powi(deg + 1)) / (deg + 1) as f64;
        prop_assert!((got - exact).abs() <= 1e-11 * exact.abs().max(1.0));
    }

    #[test]
    fn tree_sum_agrees_with_a_plain_sum(values in prop::collection::vec(-1e3f64..1e3, 0..300)) {
        let plain: f64 = values.iter().sum();
        let scale: f64 = values.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        prop_assert!((tree_sum(&values) - plain).abs() <= 1e-12 * scale);
    }

    #[test]
    fn free_map_matches_closed_form(half in 0u32..6, re in -1.5f64..1.5, im in -1.0f64..1.0) {
        let z = Complex64::new(re, im);
        prop_assume!(z.norm() > 0.1);
        let n = 2 * half;
        let exact = (2.0 * PI).sqrt() * (Complex64::new(0.0, 2f64.sqrt()) * z).powu(n);
        let got = gauss_integral_2body_free(n, z).unwrap();
        prop_assert!((got - exact).norm() <= 1e-10 * exact.norm());
    }
}

#[test]
fn legendre_rule_is_symmetric() {
    let rule = gauss_legendre(17).unwrap();
    for (k, x) in rule.nodes.iter().enumerate() {
        let mirror = rule.nodes.len() - 1 - k;
        assert!((x + rule.nodes[mirror]).abs() < 1e-14);
        assert!((rule.weights[k] - rule.weights[mirror]).abs() < 1e-14);
    }
    assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
}

#[test]
fn odd_free_map_is_rejected() {
    assert!(gauss_integral_2body_free(3, Complex64::new(1.0, 0.0)).is_err());
}

#[test]
fn kernel_error_estimate_is_honest() {
    let z = Complex64::new(0.9, 0.4);
    let r = kernel_integral_2body(&rational(3, 2), 3, z).unwrap();
    let exact = (2.0 * PI).sqrt() * -8.0 * z.powf(1.5) * z.powu(6);
    let err = (r.value - exact).norm() / exact.norm();
    assert!(err <= 1e-8);
    assert!(r.error_estimate <= 1e-6);
}
