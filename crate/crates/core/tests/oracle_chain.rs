//! Cross-engine agreement on random small instances.

mod common;

use extdisc_core::engine::{mc_integral, DEFAULT_BOX_BUDGET, DEFAULT_CELL_BUDGET};
use extdisc_core::{
    certificate_lower_bound, extreme_l2_exact, extreme_linf_exact, extreme_linf_lower_mc,
    extreme_lp_exact_even_p, extreme_lp_mc, initial_error, McConfig, PointSet, WeightSet,
};

#[test]
fn l2_closed_form_matches_cell_integration() {
    for (i, (ps, ws)) in common::random_instances(100, 2024).iter().enumerate() {
        let closed = extreme_l2_exact(ps, ws).unwrap().value;
        let cells = extreme_lp_exact_even_p(ps, ws, 2, DEFAULT_CELL_BUDGET).unwrap().value;
        assert!((closed - cells).abs() <= 1e-10, "instance {i}: {closed} vs {cells}");
    }
}

#[test]
fn monte_carlo_agrees_with_exact_engines() {
    for (i, (ps, ws)) in common::random_instances(100, 2024).iter().enumerate() {
        let exact = extreme_l2_exact(ps, ws).unwrap().value;
        let mc = extreme_lp_mc(ps, ws, 2.0, McConfig::new(200_000, i as u64)).unwrap();
        let se = mc.stderr.unwrap();
        assert!((mc.value - exact).abs() <= 4.0 * se, "instance {i}: {} vs {exact} ± {se}", mc.value);

        let exact4 = extreme_lp_exact_even_p(ps, ws, 4, DEFAULT_CELL_BUDGET).unwrap().value;
        let mc4 = extreme_lp_mc(ps, ws, 4.0, McConfig::new(200_000, 1000 + i as u64)).unwrap();
        assert!((mc4.value - exact4).abs() <= 4.0 * mc4.stderr.unwrap(), "instance {i} (p=4)");
    }
}

#[test]
fn sampled_sup_never_exceeds_exact_sup() {
    for (i, (ps, ws)) in common::random_instances(100, 99).iter().enumerate() {
        let exact = extreme_linf_exact(ps, ws, DEFAULT_BOX_BUDGET).unwrap().value;
        let sampled = extreme_linf_lower_mc(ps, ws, McConfig::new(20_000, i as u64)).unwrap().value;
        assert!(sampled <= exact, "instance {i}: {sampled} > {exact}");
        assert!(exact <= ws.abs_sum().max(1.0) + 1e-12);
    }
}

#[test]
fn certificate_is_a_valid_lower_bound() {
    for (i, (ps, ws)) in common::random_instances(100, 2024).iter().enumerate() {
        let cert = certificate_lower_bound(ps, 2.0).unwrap().value;
        let exact = extreme_l2_exact(ps, ws).unwrap().value;
        assert!(cert <= exact, "instance {i}: {cert} > {exact}");
    }
}

#[test]
fn empty_set_reproduces_initial_values() {
    for d in 1..=4 {
        let ps = PointSet::empty(d).unwrap();
        let ws = WeightSet::qmc(0);
        let e2 = initial_error(2.0, d);
        assert!((extreme_l2_exact(&ps, &ws).unwrap().value - e2).abs() < 1e-14);
        for p in [2u32, 4, 6] {
            let v = extreme_lp_exact_even_p(&ps, &ws, p, DEFAULT_CELL_BUDGET).unwrap().value;
            assert!((v - initial_error(f64::from(p), d)).abs() < 1e-14);
        }
        assert_eq!(extreme_linf_exact(&ps, &ws, DEFAULT_BOX_BUDGET).unwrap().value, 1.0);
    }
}

#[test]
fn raw_power_integrals_decrease_in_p_for_qmc_weights() {
    // with QMC weights |Δ| <= 1, so ∫|Δ|^p is non-increasing in p
    let ps = PointSet::new(2, vec![0.1, 0.8, 0.45, 0.3, 0.7, 0.6]).unwrap();
    let ws = WeightSet::qmc(3);
    let cfg = McConfig::new(100_000, 17);
    let mut last = f64::INFINITY;
    for p in [1.0, 1.5, 2.0, 3.0, 5.0, 8.0] {
        let s = mc_integral(2, cfg, |a, b| {
            let delta = extreme_core_delta(&ps, &ws, a, b);
            delta.abs().powf(p)
        });
        assert!(s.mean <= last);
        last = s.mean;
    }
}

fn extreme_core_delta(ps: &PointSet, ws: &WeightSet, a: &[f64], b: &[f64]) -> f64 {
    let bx = extdisc_core::BoxPair::new(a.to_vec(), b.to_vec()).unwrap();
    extdisc_core::local_discrepancy(ps, ws, &bx).unwrap()
}
