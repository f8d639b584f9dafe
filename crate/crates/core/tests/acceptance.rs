//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! Run with `cargo test -p mixfrac --test acceptance`.

use std::time::Instant;

use mixfrac::harness::suites::{
    self, prop21_extremal_gap, prop21_trials_with, refinement_check, EQUALITY_TOL,
};
use mixfrac::harness::{ExperimentConfig, MuEntry, Overrides, Suite, SuiteReport};
use mixfrac::par::Exec;
use serde_json::Value;

/// Aitken extrapolation of λ_1 for s = 1/4 on (−1, 1) from n = 256, 512, 1024.
const LAMBDA1_QUARTER_REF: f64 = 0.970163;

fn cfg(suite: Suite, o: Overrides) -> ExperimentConfig {
    ExperimentConfig::resolve(suite, o).expect("valid configuration")
}

fn run(c: &ExperimentConfig) -> SuiteReport {
    suites::run_suite(c).expect("suite runs")
}

fn block<'a>(r: &'a SuiteReport, name: &str) -> &'a Value {
    r.details["blocks"].as_array().unwrap().iter().find(|b| b["name"] == name).expect("block present")
}

struct Outcome {
    results: Vec<(String, bool)>,
}

impl Outcome {
    fn record(&mut self, id: &str, pass: bool, detail: String) {
        println!("{id} {} {detail}", if pass { "PASS" } else { "FAIL" });
        self.results.push((id.into(), pass));
    }
}

fn ac1(out: &mut Outcome) {
    let t = Instant::now();
    let r = run(&cfg(Suite::Constants, Overrides::default()));
    let secs = t.elapsed().as_secs_f64();
    let d = &r.details;
    out.record(
        "AC1",
        r.pass && secs < 1.0,
        format!(
            "constants: two-route gap {:.2e}, small-s2 limit gap {:.2e}, b3 gap {:.2e}, {secs:.3}s",
            d["b1_two_route"]["max_rel_gap"].as_f64().unwrap(),
            d["b1_small_s2_limit"]["rel_gap"].as_f64().unwrap(),
            d["b3_vs_sum_law"]["rel_gap"].as_f64().unwrap()
        ),
    );
}

fn ac2(out: &mut Outcome) {
    let o = Overrides {
        n: Some(512),
        k_max: Some(20),
        mu_list: Some(vec![MuEntry::Absolute(0.0), MuEntry::Absolute(1.0)]),
        ..Default::default()
    };
    let r = run(&cfg(Suite::Lower, o));
    let mut rows = 0;
    let mut margins_ok = true;
    let mut worst = f64::INFINITY;
    for b in r.details["by_mu"].as_array().unwrap() {
        for kind in ["sum", "single"] {
            for row in b[kind]["rows"].as_array().unwrap() {
                rows += 1;
                let m = row["margin"].as_f64().unwrap();
                worst = worst.min(m);
                margins_ok &= m > 0.0 || row["vacuous"] == Value::Bool(true);
            }
        }
    }
    out.record(
        "AC2",
        r.pass && margins_ok && rows == 80,
        format!("lower bounds: {rows} rows (mu in {{0, 1}}, k <= 20, n = 512), worst margin {worst:.4e}"),
    );
}

fn ac3(out: &mut Outcome) {
    let c = cfg(Suite::Spectrum, Overrides { n: Some(512), k_max: Some(20), ..Default::default() });
    let spec = run(&c);
    let s = &spec.details["structure"];
    let structure = s["pass"] == Value::Bool(true) && s["b_orthonormality_residual"].as_f64().unwrap() <= 1e-8;

    let sweep = cfg(
        Suite::SweepMu,
        Overrides {
            n: Some(512),
            mu_list: Some(vec![
                MuEntry::RelativeToLhat(-0.9),
                MuEntry::RelativeToLhat(-0.5),
                MuEntry::Absolute(0.0),
                MuEntry::Absolute(1.0),
                MuEntry::Absolute(10.0),
            ]),
            ..Default::default()
        },
    );
    let sw = run(&sweep);
    let decreasing = sw.details["strictly_decreasing"] == Value::Bool(true);

    let p = &c.params;
    let refine = refinement_check(p, -1.0, 1.0, 256, 512, 20, &c.quad).unwrap();
    let nested = refinement_check(p, -1.0, 1.0, 255, 511, 20, &c.quad).unwrap();
    out.record(
        "AC3",
        structure && decreasing && refine.pass && nested.pass,
        format!(
            "structure: B-orth {:.1e}, residual {:.1e}; mu-sweep decreasing {decreasing}; \
             refinement 256->512 worst increase {:.2e}, nested 255->511 {:.2e}",
            s["b_orthonormality_residual"].as_f64().unwrap(),
            s["relative_residual"].as_f64().unwrap(),
            refine.worst_increase,
            nested.worst_increase
        ),
    );
}

fn ac4(out: &mut Outcome) {
    let t = Instant::now();
    let base = cfg(Suite::Lemmas, Overrides::default());
    let extremal = prop21_extremal_gap(&base.params.with_mu(0.0).unwrap(), 1.0, 2.0).unwrap();
    let mut holding = 0;
    let mut total = 0;
    for mu in [0.0, 1.0] {
        let p = base.params.with_mu(mu).unwrap();
        let trials = prop21_trials_with(Exec::default(), &p, base.seed, 100).unwrap();
        total += trials.len();
        holding += trials.iter().filter(|(l, r)| l <= r).count();
    }
    let secs = t.elapsed().as_secs_f64();
    out.record(
        "AC4",
        extremal <= EQUALITY_TOL && holding == total && total == 200 && secs < 10.0,
        format!("moment majorant: extremal gap {extremal:.2e}, {holding}/{total} trials hold, {secs:.3}s"),
    );
}

fn ac5_ac6(out: &mut Outcome) {
    let r = run(&cfg(Suite::Lemmas, Overrides { n: Some(128), k_max: Some(10), ..Default::default() }));
    let b = block(&r, "bracketed root");
    out.record(
        "AC5",
        b["pass"] == Value::Bool(true) && b["bracketed"] == 100,
        format!(
            "bracketed root: {}/{} bracketed, worst residual {:.2e}, anchors {:.1e} / {:.1e}",
            b["bracketed"],
            b["trials"],
            b["worst_relative_residual"].as_f64().unwrap(),
            b["anchor_d1_2"]["error"].as_f64().unwrap(),
            b["anchor_d1_16"]["rel_error"].as_f64().unwrap()
        ),
    );

    let sym = block(&r, "plane-wave symbol");
    let worst_sym = sym["cases"].as_array().unwrap().iter().map(|c| c["rel_error"].as_f64().unwrap().abs()).fold(0.0, f64::max);
    let cut = block(&r, "cutoff Laplacian bound");
    let slopes: Vec<String> = cut["exponent_fits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| format!("{:.3}", f["fitted_exponent"].as_f64().unwrap()))
        .collect();
    let lz = block(&r, "commutator remainder bound");
    let worst_lz = lz["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["sup"].as_f64().unwrap() / c["stated_bound"].as_f64().unwrap())
        .fold(0.0, f64::max);
    out.record(
        "AC6",
        [sym, cut, lz].iter().all(|b| b["pass"] == Value::Bool(true)),
        format!(
            "symbol worst error {worst_sym:.2e}; cutoff sigma-exponents [{}]; commutator sup/stated {worst_lz:.3}",
            slopes.join(", ")
        ),
    );
}

fn ac7(out: &mut Outcome) {
    let up = run(&cfg(Suite::Upper, Overrides { n: Some(1024), k_max: Some(40), ..Default::default() }));
    let fit = &up.details["exponent_fit"];
    let weyl = run(&cfg(Suite::Weyl, Overrides { n: Some(1024), k_max: Some(40), single: Some(0.25), ..Default::default() }));
    let ratio = &weyl.details["ratio_at_k_max"];
    let has_note = up.details["note"].as_str().is_some_and(|n| n.contains("existential"));
    out.record(
        "AC7",
        fit["within"] == Value::Bool(true) && weyl.pass && has_note && !up.gating() && !weyl.gating(),
        format!(
            "diagnostics: exponent {:.4} vs {:.4} over k in [10, 40]; Weyl ratios pointwise {:.4}, sum {:.4}",
            fit["fitted"].as_f64().unwrap(),
            fit["expected"].as_f64().unwrap(),
            ratio["pointwise"].as_f64().unwrap(),
            ratio["sum"].as_f64().unwrap()
        ),
    );
}

/// Single-operator λ_1 against the stored extrapolated value.
fn single_reference(out: &mut Outcome) {
    let c = cfg(Suite::Spectrum, Overrides { n: Some(512), k_max: Some(1), single: Some(0.25), ..Default::default() });
    let r = run(&c);
    let l1 = r.details["lambda_1"].as_f64().unwrap();
    let err = (l1 / LAMBDA1_QUARTER_REF - 1.0).abs();
    out.record("AC3-single", err <= 0.01, format!("lambda_1(s = 1/4, n = 512) = {l1:.6}, rel error {err:.2e}"));
}

fn main() {
    let mut out = Outcome { results: Vec::new() };
    ac1(&mut out);
    ac2(&mut out);
    ac3(&mut out);
    single_reference(&mut out);
    ac4(&mut out);
    ac5_ac6(&mut out);
    ac7(&mut out);
    let failed: Vec<&str> = out.results.iter().filter(|(_, p)| !p).map(|(id, _)| id.as_str()).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", out.results.len());
    } else {
        println!("acceptance: FAILED {}", failed.join(", "));
        std::process::exit(1);
    }
}
