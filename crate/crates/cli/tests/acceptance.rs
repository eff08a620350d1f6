//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p extdisc-cli --test acceptance`.

use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use extdisc_core::curse::{b_const_numeric, c_const_closed_form, g_p, g_tilde_peak, l2_at_half};
use extdisc_core::duality::t1_apply_numeric_with_breaks;
use extdisc_core::engine::{DEFAULT_BOX_BUDGET, DEFAULT_CELL_BUDGET};
use extdisc_core::quadrature::GaussLegendre;
use extdisc_core::rng::{ChunkStream, UnitStream};
use extdisc_core::{
    a_const, aggregate_error_lower, appendix_b_diagnostics, b_const, c_const, certificate_lower_bound,
    extreme_l2_exact, extreme_linf_exact, extreme_linf_lower_mc, extreme_lp_exact_even_p, extreme_lp_mc,
    f_profile, generate, gnewuch_linf_upper, h1, initial_error, min_points_lower, nw10_l2_lower, spline_eval,
    GeneratorKind, GeneratorSpec, McConfig, PointSet, WeightSet,
};
use serde_json::Value;

/// Collects failed checks for one criterion.
#[derive(Default)]
struct Check {
    failures: Vec<String>,
    count: usize,
}

impl Check {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }
}

struct Outcome {
    id: u32,
    title: &'static str,
    check: Check,
    elapsed: Duration,
    limit: Option<Duration>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.check.failures.is_empty() && self.limit.is_none_or(|l| self.elapsed <= l)
    }

    fn report(&self) {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {}: {} ({} checks, {:.2}s{})",
            self.id,
            self.title,
            self.check.count,
            self.elapsed.as_secs_f64(),
            self.limit.map(|l| format!(", limit {}s", l.as_secs())).unwrap_or_default()
        );
        for f in self.check.failures.iter().filter(|f| !f.is_empty()) {
            println!("       {f}");
        }
        if self.check.failures.len() > 5 {
            println!("       ... {} failures in total", self.check.failures.len());
        }
    }
}

fn run(id: u32, title: &'static str, limit: Option<Duration>, body: impl FnOnce(&mut Check)) -> Outcome {
    let start = Instant::now();
    let mut check = Check::default();
    body(&mut check);
    Outcome { id, title, check, elapsed: start.elapsed(), limit }
}

fn random_instances(count: usize, seed: u64) -> Vec<(PointSet, WeightSet)> {
    let mut s = ChunkStream::new(seed, 0);
    (0..count)
        .map(|_| {
            let d = 1 + (s.next_unit() * 2.0) as usize;
            let n = (s.next_unit() * 9.0) as usize;
            let coords: Vec<f64> = (0..n * d).map(|_| s.next_unit()).collect();
            let w: Vec<f64> = (0..n).map(|_| s.next_unit() * 2.0 / n.max(1) as f64).collect();
            (PointSet::new(d, coords).unwrap(), WeightSet::nonneg(w).unwrap())
        })
        .collect()
}

fn initial_discrepancy(c: &mut Check) {
    for d in 1..=5 {
        let ps = PointSet::empty(d).unwrap();
        let ws = WeightSet::qmc(0);
        for p in [1u32, 2, 3, 4] {
            let pf = f64::from(p);
            let target = ((pf + 1.0) * (pf + 2.0)).powf(-(d as f64) / pf);
            if p % 2 == 0 {
                let v = extreme_lp_exact_even_p(&ps, &ws, p, DEFAULT_CELL_BUDGET).unwrap().value;
                c.expect((v - target).abs() <= 1e-12, || format!("even-p exact p={p} d={d}: {v} vs {target}"));
            }
            if p == 2 {
                let v = extreme_l2_exact(&ps, &ws).unwrap().value;
                c.expect((v - target).abs() <= 1e-12, || format!("L2 exact d={d}: {v} vs {target}"));
            }
            let r = extreme_lp_mc(&ps, &ws, pf, McConfig::new(2_000_000, 100 * d as u64 + u64::from(p))).unwrap();
            let se = r.stderr.unwrap();
            c.expect((r.value - target).abs() <= 3.0 * se, || {
                format!("MC p={p} d={d}: {} vs {target} (stderr {se})", r.value)
            });
        }
        let v = extreme_linf_exact(&ps, &ws, DEFAULT_BOX_BUDGET).unwrap().value;
        c.expect(v == 1.0, || format!("L_inf d={d}: {v}"));
    }
}

fn oracle_equivalence(c: &mut Check) {
    for (i, (ps, ws)) in random_instances(100, 2).iter().enumerate() {
        let l2 = extreme_l2_exact(ps, ws).unwrap().value;
        let cells = extreme_lp_exact_even_p(ps, ws, 2, DEFAULT_CELL_BUDGET).unwrap().value;
        c.expect((l2 - cells).abs() <= 1e-10, || format!("instance {i}: L2 {l2} vs even-p {cells}"));

        let mc = extreme_lp_mc(ps, ws, 2.0, McConfig::new(200_000, 5000 + i as u64)).unwrap();
        let se = mc.stderr.unwrap();
        c.expect((mc.value - l2).abs() <= 4.0 * se, || format!("instance {i}: MC {} vs {l2} (stderr {se})", mc.value));

        let sup = extreme_linf_exact(ps, ws, DEFAULT_BOX_BUDGET).unwrap().value;
        let sampled = extreme_linf_lower_mc(ps, ws, McConfig::new(20_000, i as u64)).unwrap().value;
        c.expect(sampled <= sup, || format!("instance {i}: sampled sup {sampled} > exact {sup}"));
    }
    let two = PointSet::new(1, vec![0.25, 0.75]).unwrap();
    let v = extreme_linf_exact(&two, &WeightSet::qmc(2), DEFAULT_BOX_BUDGET).unwrap().value;
    c.expect(v == 0.5, || format!("L_inf of {{0.25, 0.75}} = {v}"));
}

fn spline_suite(c: &mut Check) {
    let rule = GaussLegendre::new(8);
    for p in [1.5, 2.0, 3.0, 5.0] {
        for i in 1..=99 {
            let y = i as f64 / 100.0;
            let h = h1(p, y).unwrap();
            let s = spline_eval(p, y, y).unwrap();
            c.expect((s - h).abs() <= 1e-12, || format!("p={p} y={y}: s_y(y) = {s}, h1 = {h}"));
            let f = |x: f64| spline_eval(p, y, x).unwrap();
            let integral = rule.integrate(0.0, y, 1, f) + rule.integrate(y, 1.0, 1, f);
            c.expect((integral - h / 2.0).abs() <= 1e-9, || format!("p={p} y={y}: ∫s_y = {integral}, h1/2 = {}", h / 2.0));
        }
    }
    let mut s = ChunkStream::new(33, 0);
    let ps = [1.5, 2.0, 3.0, 5.0];
    for _ in 0..20 {
        let p = ps[(s.next_unit() * 4.0) as usize];
        let y = 0.01 + 0.98 * s.next_unit();
        let x = s.next_unit();
        let height = h1(p, y).unwrap() / (y * (1.0 - y));
        let numeric = t1_apply_numeric_with_breaks(|a, b| if a <= y && y <= b { height } else { 0.0 }, x, 2, &[y]);
        let closed = spline_eval(p, y, x).unwrap();
        c.expect((numeric - closed).abs() <= 1e-8, || format!("p={p} y={y} x={x}: {numeric} vs {closed}"));
    }
}

fn constants(c: &mut Check) {
    c.expect(a_const(2.0) == 0.75, || format!("a_const(2) = {}", a_const(2.0)));
    let (b, y, _) = b_const(2.0).unwrap();
    c.expect((b - 0.8660254).abs() <= 1e-6 && y == 0.5, || format!("b_const(2) = ({b}, {y})"));
    let c2 = c_const(2.0).unwrap();
    c.expect((c2 - 1.1547005).abs() <= 1e-6, || format!("c_const(2) = {c2}"));
    for k in 1..=50 {
        let p = 1.0 + 7.0 * k as f64 / 50.0;
        let (_, b_num) = b_const_numeric(p);
        let reference = (1.0 / a_const(p)).min(1.0 / b_num);
        let closed = c_const_closed_form(p);
        c.expect((closed - reference).abs() <= 1e-6, || format!("p={p}: closed form {closed} vs {reference}"));
    }

    let out = Command::new(env!("CARGO_BIN_EXE_extdisc"))
        .args(["constants", "--p-min", "1.05", "--p-max", "20", "--step", "0.05"])
        .output()
        .unwrap();
    c.expect(out.status.success(), || "constants command failed".into());
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("p,"))
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect();
    c.expect(rows.len() == 380, || format!("{} rows in constants table", rows.len()));
    for (p, cp) in rows {
        c.expect(cp > 1.0, || format!("c_p({p}) = {cp} <= 1"));
    }
}

fn b_below_one(c: &mut Check) {
    for k in 1..=70 {
        let p = 1.0 + k as f64 / 10.0;
        let l = l2_at_half(p);
        c.expect(l < 0.0, || format!("L''(1/2) = {l} at p={p}"));
    }
    for p in [8.0, 8.5, 9.0, 10.0, 10.9, 11.0, 15.0, 20.0, 50.0] {
        let diag = appendix_b_diagnostics(p).unwrap();
        c.expect(diag.a_star_residual <= 1e-9, || format!("a* residual {} at p={p}", diag.a_star_residual));
    }
    for p in [11.0, 15.0, 20.0, 50.0] {
        let top = (p + 1.0) / 2.0;
        for i in 1..=10_000 {
            let a = top * i as f64 / 10_000.0;
            let g = g_p(p, a);
            c.expect(g < 1.0, || format!("G_p({a}) = {g} at p={p}"));
        }
    }
    for p in [8.5, 9.0, 10.0, 10.9] {
        let g = g_tilde_peak(p);
        c.expect(g < 1.0, || format!("G̃ peak {g} at p={p}"));
    }
    for p in [8.0, 11.0, 20.0] {
        for i in 1..=10_000 {
            let y = 0.5 * i as f64 / 10_000.0;
            let (f, g) = (f_profile(p, y), g_p(p, (p + 1.0) * y));
            c.expect(f <= g, || format!("F_p({y}) = {f} > G_p = {g} at p={p}"));
        }
    }
}

fn qmc_families(n: usize, d: usize) -> Vec<(&'static str, PointSet)> {
    let mut v = vec![
        ("vdc", generate(&GeneratorSpec::new(GeneratorKind::VdcHammersley, n, d)).unwrap()),
        ("random", generate(&GeneratorSpec::new(GeneratorKind::Random, n, d).with_seed((n * 10 + d) as u64)).unwrap()),
    ];
    if let Ok(g) = generate(&GeneratorSpec::new(GeneratorKind::Grid, n, d)) {
        v.push(("grid", g));
    }
    v
}

fn bound_validity(c: &mut Check) {
    for d in 1..=3 {
        for n in 1..=16 {
            let bound = aggregate_error_lower(2.0, d, n).unwrap();
            for (name, ps) in qmc_families(n, d) {
                let disc = extreme_l2_exact(&ps, &WeightSet::qmc(n)).unwrap().value;
                c.expect(bound <= disc, || format!("{name} n={n} d={d}: bound {bound} > {disc}"));
            }
        }
    }
    for (i, (ps, ws)) in random_instances(100, 2).iter().enumerate() {
        let cert = certificate_lower_bound(ps, 2.0).unwrap().value;
        let disc = extreme_l2_exact(ps, ws).unwrap().value;
        c.expect(cert <= disc, || format!("instance {i}: certificate {cert} > {disc}"));
    }
    for d in 1..=5 {
        for p in [1.5, 2.0, 3.0] {
            let cert = certificate_lower_bound(&PointSet::empty(d).unwrap(), p).unwrap().value;
            let half = initial_error(p, d) / 2.0;
            c.expect(cert == half, || format!("empty certificate p={p} d={d}: {cert} vs {half}"));
        }
    }
}

fn calculators(c: &mut Check) {
    let g = gnewuch_linf_upper(0.5, 2).unwrap();
    c.expect(g == 134, || format!("gnewuch(0.5, 2) = {g}"));
    let nw = nw10_l2_lower(0.0, 1).unwrap();
    c.expect(nw == 2.25, || format!("nw10(0, 1) = {nw}"));
    let m = min_points_lower(2.0, 10, 0.0).unwrap();
    let target = c_const(2.0).unwrap().powi(10);
    c.expect((m - target).abs() <= 1e-6, || format!("min_points(2, 10, 0) = {m} vs {target}"));
}

fn duality(c: &mut Check) {
    let dir = std::env::temp_dir().join(format!("extdisc-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let input = dir.join("one_center.csv");
    fs::write(&input, "x1\n0.5\n").unwrap();
    let run = |workers: &str| {
        Command::new(env!("CARGO_BIN_EXE_extdisc"))
            .args(["duality-check", "--input", input.to_str().unwrap(), "--p", "2", "--samples", "1000000"])
            .args(["--seed", "7", "--workers", workers])
            .output()
            .unwrap()
    };
    let outputs: Vec<_> = ["1", "2", "8"].into_iter().map(run).collect();
    let first = &outputs[0];
    c.expect(first.status.success(), || format!("exit {:?}", first.status.code()));
    for o in &outputs[1..] {
        c.expect(o.stdout == first.stdout, || "outputs differ between worker counts".into());
    }
    match serde_json::from_slice::<Value>(&first.stdout) {
        Ok(v) => {
            for key in ["pairing_z", "representer_z"] {
                let z = v[key].as_f64().unwrap_or(f64::NAN);
                c.expect(z.abs() <= 3.0, || format!("{key} = {z}"));
            }
            let pairing = v["pairing"].as_f64().unwrap_or(f64::NAN);
            let se = v["pairing_stderr"].as_f64().unwrap_or(f64::NAN);
            c.expect((pairing - 0.2886751).abs() <= 3.0 * se, || format!("pairing {pairing} ± {se}"));
        }
        Err(e) => c.expect(false, || format!("unparsable output: {e}")),
    }
    let _ = fs::remove_dir_all(&dir);
}

fn main() -> ExitCode {
    let outcomes = [
        run(1, "initial discrepancy of the empty set", Some(Duration::from_secs(60)), initial_discrepancy),
        run(2, "cross-engine oracle equivalence", None, oracle_equivalence),
        run(3, "spline identities", None, spline_suite),
        run(4, "curse constants and table", Some(Duration::from_secs(30)), constants),
        run(5, "B_p < 1 diagnostics", None, b_below_one),
        run(6, "lower-bound validity", None, bound_validity),
        run(7, "bound calculators", None, calculators),
        run(8, "duality check and determinism", None, duality),
    ];
    for o in &outcomes {
        o.report();
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
