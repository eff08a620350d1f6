//! Lower bounds never exceed computed discrepancies of concrete rules.

use extdisc_core::{
    aggregate_error_lower, certificate_lower_bound, extreme_l2_exact, generate, initial_error, GeneratorKind,
    GeneratorSpec, PointSet, WeightSet,
};

fn qmc_families(n: usize, d: usize) -> Vec<(String, PointSet)> {
    let mut out = vec![
        ("vdc".to_string(), generate(&GeneratorSpec::new(GeneratorKind::VdcHammersley, n, d)).unwrap()),
        (
            "random".to_string(),
            generate(&GeneratorSpec::new(GeneratorKind::Random, n, d).with_seed(n as u64 * 31 + d as u64)).unwrap(),
        ),
    ];
    if let Ok(g) = generate(&GeneratorSpec::new(GeneratorKind::Grid, n, d)) {
        out.push(("grid".to_string(), g));
    }
    out
}

#[test]
fn aggregate_bound_below_qmc_discrepancies() {
    for d in 1..=3 {
        for n in 1..=16 {
            let bound = aggregate_error_lower(2.0, d, n).unwrap();
            for (name, ps) in qmc_families(n, d) {
                let disc = extreme_l2_exact(&ps, &WeightSet::qmc(n)).unwrap().value;
                assert!(bound <= disc, "{name} n={n} d={d}: {bound} > {disc}");
            }
        }
    }
}

#[test]
fn certificate_below_qmc_discrepancies() {
    for d in 1..=3 {
        for n in 1..=16 {
            for (name, ps) in qmc_families(n, d) {
                let cert = certificate_lower_bound(&ps, 2.0).unwrap().value;
                let disc = extreme_l2_exact(&ps, &WeightSet::qmc(n)).unwrap().value;
                assert!(cert <= disc, "{name} n={n} d={d}");
            }
        }
    }
}

#[test]
fn one_point_rules_respect_aggregate_bound() {
    let bound = aggregate_error_lower(2.0, 1, 1).unwrap();
    for i in 0..100 {
        let x = i as f64 / 100.0;
        for w in [0.0, 0.25, 0.5, 1.0, 2.0] {
            let ps = PointSet::new(1, vec![x]).unwrap();
            let disc = extreme_l2_exact(&ps, &WeightSet::nonneg(vec![w]).unwrap()).unwrap().value;
            assert!(bound <= disc);
        }
    }
}

#[test]
fn empty_certificate_is_half_initial_error() {
    for d in 1..=4 {
        let c = certificate_lower_bound(&PointSet::empty(d).unwrap(), 3.0).unwrap();
        assert_eq!(c.value, initial_error(3.0, d) / 2.0);
    }
}

#[test]
fn vdc_beats_random_on_average() {
    for n in [4usize, 8, 16] {
        let vdc = generate(&GeneratorSpec::new(GeneratorKind::VdcHammersley, n, 1)).unwrap();
        let v = extreme_l2_exact(&vdc, &WeightSet::qmc(n)).unwrap().value;
        let mean: f64 = (0..50)
            .map(|s| {
                let ps = generate(&GeneratorSpec::new(GeneratorKind::Random, n, 1).with_seed(s)).unwrap();
                extreme_l2_exact(&ps, &WeightSet::qmc(n)).unwrap().value
            })
            .sum::<f64>()
            / 50.0;
        assert!(v < mean, "n={n}: {v} vs {mean}");
    }
}
