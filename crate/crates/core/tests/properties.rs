use nst_core::models::{m_bessel, m_brownian_hit, m_exp, m_of, phi_brownian, phi_mu, solve_z_mu, ModelSpec};
use nst_core::montecarlo::{estimate_m_identity, estimate_m_marginal};
use nst_core::numerics::{
    adaptive_quad, brent_root, exp_integral, exp_integral_scaled, maximize_1d, normal_cdf, phi_times_exp,
};
use nst_core::SimConfig;
use proptest::prelude::*;

proptest! {
    #[test]
    fn normal_cdf_is_symmetric(x in -8.0f64..8.0) {
        prop_assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() <= 2e-16);
    }

    #[test]
    fn normal_cdf_is_monotone(x in -40.0f64..40.0, h in 0.0f64..1.0) {
        prop_assert!(normal_cdf(x) <= normal_cdf(x + h));
    }

    #[test]
    fn phi_times_exp_matches_naive_product(d in -20.0f64..=0.0, c in -300.0f64..300.0) {
        let naive = normal_cdf(d) * c.exp();
        prop_assume!(naive.is_normal() && naive > 1e-290);
        let got = phi_times_exp(d, c).unwrap();
        prop_assert!(((got - naive) / naive).abs() <= 1e-10, "{got} vs {naive}");
    }

    #[test]
    fn exp_integral_recurrence(nu in 0.5f64..10.0, z in 0.05f64..20.0) {
        // ν·E_{ν+1}(z) = e^{-z} - z·E_ν(z), in scaled form
        let lhs = nu * exp_integral_scaled(nu + 1.0, z).unwrap();
        let rhs = 1.0 - z * exp_integral_scaled(nu, z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + z), "{lhs} vs {rhs}");
    }

    #[test]
    fn scaled_exp_integral_is_a_laplace_transform(nu in 0.5f64..10.0, z in 0.1f64..30.0) {
        // e^z E_ν(z) = ∫₀^∞ (1+h)^{-ν} e^{-hz} dh; the tail past 40/z is below e^{-40}
        let f = |h: f64| (1.0 + h).powf(-nu) * (-h * z).exp();
        let q = adaptive_quad(f, 0.0, 40.0 / z, 1e-13).unwrap().value;
        let got = exp_integral_scaled(nu, z).unwrap();
        prop_assert!(((got - q) / q).abs() <= 1e-9, "{got} vs {q}");
        let plain = exp_integral(nu, z).unwrap();
        prop_assert!(((plain * z.exp() - got) / got).abs() <= 1e-12);
    }

    #[test]
    fn m_stays_in_quarter_range(
        k in 0.01f64..=1.0,
        a in 0.01f64..100.0,
        mu in 0.05f64..20.0,
        lt in -6.0f64..6.0,
    ) {
        let t = 10f64.powf(lt);
        for model in [
            ModelSpec::exp(k).unwrap(),
            ModelSpec::brownian_hit(a).unwrap(),
            ModelSpec::bessel(mu, a).unwrap(),
        ] {
            let v = m_of(&model, t).unwrap();
            prop_assert!((0.0..=0.25).contains(&v), "{model} t={t}: {v}");
        }
    }

    #[test]
    fn brownian_and_bessel_depend_on_a_squared_over_t(
        a in 0.1f64..10.0,
        c in 0.1f64..10.0,
        mu in 0.2f64..8.0,
        t in 0.01f64..100.0,
    ) {
        let b1 = m_brownian_hit(a, t).unwrap();
        let b2 = m_brownian_hit(c * a, c * c * t).unwrap();
        prop_assert!((b1 - b2).abs() <= 1e-12 * (1.0 + b1));
        let x = a / t.sqrt();
        prop_assert!((phi_brownian(x).unwrap() / (x * x) - b1).abs() <= 1e-12);
        let s1 = m_bessel(mu, a, t).unwrap();
        let s2 = m_bessel(mu, c * a, c * c * t).unwrap();
        prop_assert!((s1 - s2).abs() <= 1e-12);
        prop_assert!((phi_mu(mu, a * a / (2.0 * t)).unwrap() - s1).abs() <= 1e-15);
    }

    #[test]
    fn exp_family_vanishes_only_at_the_ends(k in 0.05f64..=1.0, t in 0.5f64..20.0) {
        prop_assert!(m_exp(k, t).unwrap() > 0.0);
    }

    #[test]
    fn phi_mu_peaks_at_z_mu(mu in 0.1f64..10.0, z in 0.01f64..30.0) {
        let z_mu = solve_z_mu(mu).unwrap().root;
        let peak = phi_mu(mu, z_mu).unwrap();
        prop_assert!(peak <= 0.25);
        prop_assert!(phi_mu(mu, z).unwrap() <= peak * (1.0 + 1e-12));
    }

    #[test]
    fn solvers_are_deterministic_and_accurate(c in -5.0f64..5.0) {
        let g = |x: f64| (x - c).powi(3) + (x - c);
        let r1 = brent_root(g, (-10.0, 10.0), 1e-12).unwrap();
        let r2 = brent_root(g, (-10.0, 10.0), 1e-12).unwrap();
        prop_assert_eq!(r1, r2);
        prop_assert!((r1.root - c).abs() <= 1e-10);
        let f = |x: f64| -(x - c) * (x - c) + 1.0;
        let m1 = maximize_1d(f, (-10.0, 10.0), 1e-10).unwrap();
        prop_assert_eq!(m1, maximize_1d(f, (-10.0, 10.0), 1e-10).unwrap());
        prop_assert!((m1.argmax - c).abs() <= 1e-6);
        prop_assert!(!m1.at_edge());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn monte_carlo_is_a_function_of_its_inputs(seed in any::<u64>(), k in 0.1f64..=1.0) {
        let model = ModelSpec::exp(k).unwrap();
        let a = estimate_m_marginal(&model, 1.0, 500, seed).unwrap();
        prop_assert_eq!(a, estimate_m_marginal(&model, 1.0, 500, seed).unwrap());
        let cfg = SimConfig::new(seed, 50, 1e-2);
        let i = estimate_m_identity(&model, 0.5, &cfg).unwrap();
        prop_assert_eq!(i, estimate_m_identity(&model, 0.5, &cfg).unwrap());
        prop_assert!(i.z_form.max <= 0.25 && i.z_form.min >= 0.0);
        prop_assert!(i.indicator_form.max <= 1.0 && i.indicator_form.min >= 0.0);
    }
}
