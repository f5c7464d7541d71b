#![allow(clippy::excessive_precision)]

use invsqrt_core::closed_form::{eval_psi, spectral_point, SolutionCoefficients};
use invsqrt_core::grid::{linspace, logspace, GridFunction};
use invsqrt_core::heun_check::{heun_params_from_physics, integrate_tch};
use invsqrt_core::oracle::residual_check;
use invsqrt_core::quadrature::integrate;
use invsqrt_core::specfun::{hermite_h, hermite_h_deriv, kummer_1f1, kummer_1f1_direct};
use invsqrt_core::spectrum::energy_from_a;
use invsqrt_core::PhysicalSystem;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn hermite_three_term_recurrence(nu in -1.5f64..6.0, z in -3.0f64..2.0) {
        let hm = hermite_h(nu - 1.0, z).unwrap().value;
        let h0 = hermite_h(nu, z).unwrap().value;
        let hp = hermite_h(nu + 1.0, z).unwrap().value;
        let scale = hp.abs() + (2.0 * z * h0).abs() + (2.0 * nu * hm).abs();
        prop_assert!((hp - 2.0 * z * h0 + 2.0 * nu * hm).abs() <= 1e-10 * scale);
    }

    #[test]
    fn hermite_derivative_matches_difference(nu in 0.1f64..5.0, z in -2.5f64..1.5) {
        let h = 1e-5;
        let fd = (hermite_h(nu, z + h).unwrap().value - hermite_h(nu, z - h).unwrap().value) / (2.0 * h);
        let d = hermite_h_deriv(nu, z).unwrap().value;
        prop_assert!((fd - d).abs() <= 1e-6 * d.abs().max(1.0));
    }

    #[test]
    fn kummer_transformation(a in -3.0f64..4.0, b in 0.3f64..4.0, z in -12.0f64..12.0) {
        let lhs = kummer_1f1(a, b, z).unwrap().value;
        let rhs = z.exp() * kummer_1f1_direct(b - a, b, -z).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn kummer_contiguous_relation(a in -3.0f64..3.0, b in 1.2f64..4.0, z in -6.0f64..6.0) {
        // b(b-1) M(a,b-1) + b(1-b-z) M(a,b) + z(b-a) M(a,b+1) = 0
        let m = |bb: f64| kummer_1f1(a, bb, z).unwrap().value;
        let terms = [b * (b - 1.0) * m(b - 1.0), b * (1.0 - b - z) * m(b), z * (b - a) * m(b + 1.0)];
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        prop_assert!(terms.iter().sum::<f64>().abs() <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn closed_form_solves_the_equation(e in -1.5f64..-0.1, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        prop_assume!(c1.abs() + c2.abs() > 0.1);
        let sys = PhysicalSystem::unit_attractive();
        let sp = spectral_point(&sys, e).unwrap();
        let c = SolutionCoefficients::new(c1, c2).unwrap();
        let xs = logspace(0.05, 0.8 * sp.switch_point(), 3000);
        let r = residual_check(|x| eval_psi(&sys, &sp, c, x), &sys, e, &xs).unwrap();
        prop_assert!(r.max_rel_residual <= 1e-5, "{}", r.max_rel_residual);
    }

    #[test]
    fn energy_and_order_round_trip(
        m in 0.2f64..5.0, hbar in 0.2f64..3.0, v0 in -4.0f64..-0.1, a in 0.1f64..30.0
    ) {
        let sys = PhysicalSystem::new(m, hbar, v0).unwrap();
        let sp = spectral_point(&sys, energy_from_a(&sys, a).unwrap()).unwrap();
        prop_assert!((sp.a - a).abs() <= 1e-12 * a);
        // a δ³ = 8 m² V0² / ħ⁴
        let lhs = sp.a * sp.delta.powi(3);
        let rhs = 8.0 * m * m * v0 * v0 / hbar.powi(4);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn heun_abel_identity(e in -1.2f64..-0.1) {
        let p = heun_params_from_physics(&PhysicalSystem::unit_attractive(), e, -1).unwrap();
        let zs = linspace(0.0, 3.0, 61);
        let a = integrate_tch(&p, &zs, (1.0, 0.0)).unwrap();
        let b = integrate_tch(&p, &zs, (0.0, 1.0)).unwrap();
        for (i, &z) in zs.iter().enumerate() {
            let w = a.u[i] * b.u_prime[i] - b.u[i] * a.u_prime[i];
            let want = (-0.5 * p.delta_h * z * z).exp();
            prop_assert!((w - want).abs() <= 1e-9 * want);
        }
    }

    #[test]
    fn quadrature_is_exact_on_cubics(c0 in -3.0f64..3.0, c3 in -3.0f64..3.0, b in 0.1f64..5.0) {
        let v = integrate(|x| c0 + c3 * x * x * x, 0.0, b, 1e-14).unwrap();
        let want = c0 * b + 0.25 * c3 * b.powi(4);
        prop_assert!((v - want).abs() <= 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn sign_changes_count_sine_zeros(k in 1usize..8) {
        let xs = linspace(0.01, k as f64 * std::f64::consts::PI + 1.0, 2000);
        let g = GridFunction::sample(xs, |x| Ok(x.sin())).unwrap();
        prop_assert_eq!(g.sign_changes(1e-12), k);
    }
}
