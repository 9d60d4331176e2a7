//! Every row of `oracles/frozen_values.txt` against the library.

use nst_core::models::{m_exp, phi_brownian, phi_mu, solve_z_mu};
use nst_core::numerics::{exp_integral, lgamma, normal_cdf, phi_times_exp};

const TABLE: &str = include_str!("oracles/frozen_values.txt");

fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

#[test]
fn frozen_table_matches() {
    let mut checked = 0;
    let mut worst: Vec<(String, f64)> = Vec::new();
    for line in TABLE.lines().filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let num = |i: usize| f[i].parse::<f64>().unwrap();
        let (got, want, tol) = match f[0] {
            "normal_cdf" => (normal_cdf(num(1)), num(2), 1e-13),
            "phi(-30)*e^400" => (phi_times_exp(-30.0, 400.0).unwrap(), num(1), 1e-12),
            "lgamma(7.5)" => (lgamma(7.5).unwrap(), num(1), 1e-14),
            "expint" => (exp_integral(num(1), num(2)).unwrap(), num(3), 1e-12),
            "m_exp" => (m_exp(num(1), num(2)).unwrap(), num(3), 1e-9),
            "phi_brownian" => (phi_brownian(num(1)).unwrap(), num(2), 1e-10),
            "phi_mu" => (phi_mu(num(1), num(2)).unwrap(), num(3), 1e-10),
            "z_mu" => {
                let z = solve_z_mu(num(1)).unwrap().root;
                assert!((z - num(2)).abs() < 1e-10, "{line}: {z}");
                (phi_mu(num(1), z).unwrap(), num(3), 1e-10)
            }
            other => panic!("unknown oracle {other}"),
        };
        let e = rel_err(got, want);
        if e > tol {
            worst.push((line.to_string(), e));
        }
        checked += 1;
    }
    assert!(worst.is_empty(), "{worst:#?}");
    assert_eq!(checked, 140);
}
