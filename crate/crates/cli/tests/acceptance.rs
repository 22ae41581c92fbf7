//! End-to-end gate: one pass/fail line per criterion, all suites exercised
//! at their full advertised scales.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rigidity_lab::config::SuiteConfig;
use rigidity_lab::report::Check;
use rigidity_lab::suites::run_suite;

fn cfg(seed: Option<u64>, params: toml::Table) -> SuiteConfig {
    SuiteConfig {
        suite: None,
        seed,
        out: None,
        tolerances: BTreeMap::new(),
        params,
    }
}

fn params(text: &str) -> toml::Table {
    text.parse().expect("inline params parse")
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |p| p.get())
}

struct Gate {
    lines: Vec<(usize, bool, String)>,
}

impl Gate {
    fn record(&mut self, criterion: usize, pass: bool, detail: String) {
        self.lines.push((criterion, pass, detail));
    }

    /// pass iff every listed check passed and the runtime budget holds
    fn from_checks(
        &mut self,
        criterion: usize,
        checks: &[Check],
        ids: &[&str],
        elapsed: Duration,
        budget: Duration,
    ) {
        let mut pass = elapsed <= budget;
        let mut worst = String::new();
        for id in ids {
            match checks.iter().find(|c| c.id == *id) {
                Some(c) if c.pass => {}
                Some(c) => {
                    pass = false;
                    worst = format!("{id} measured {:.3e} > tol {:.1e}", c.measured, c.tolerance);
                }
                None => {
                    pass = false;
                    worst = format!("check {id} missing");
                }
            }
        }
        if elapsed > budget {
            worst = format!("runtime {:.1?} over budget {:.1?}", elapsed, budget);
        }
        let detail = if pass {
            format!("{} checks in {:.2?}", ids.len(), elapsed)
        } else {
            worst
        };
        self.record(criterion, pass, detail);
    }
}

#[test]
fn acceptance_gate() {
    let mut gate = Gate { lines: Vec::new() };
    let w = workers();

    // 1: algebra relations for n = 2..6
    {
        let t = Instant::now();
        let checks = run_suite("clifford-check", &cfg(None, params("")), w).unwrap();
        let ids: Vec<String> = checks.iter().map(|c| c.id.clone()).collect();
        let idrefs: Vec<&str> = ids.iter().map(String::as_str).collect();
        gate.from_checks(1, &checks, &idrefs, t.elapsed(), Duration::from_secs(5));
    }

    // 2: scalar curvature against the independent stencil oracle
    {
        let t = Instant::now();
        let checks = run_suite("warped", &cfg(None, params("")), w).unwrap();
        gate.from_checks(
            2,
            &checks,
            &[
                "warped-hyperbolic-scalar-n3",
                "warped-hyperbolic-scalar-n4",
                "warped-closed-form-order",
            ],
            t.elapsed(),
            Duration::from_secs(60),
        );
    }

    // 3 & 4: transported spinor bases on the refined slab, plus the
    // curvature reconstruction controls
    {
        let t = Instant::now();
        let p = params("h_list = [0.015625, 0.0078125, 0.00390625]");
        let checks = run_suite("killing", &cfg(Some(7), p), w).unwrap();
        let elapsed = t.elapsed();
        gate.from_checks(
            3,
            &checks,
            &[
                "killing-residual-order",
                "killing-classifier-constancy",
                "killing-gram-offdiagonal",
                "killing-type1-witness",
            ],
            elapsed,
            Duration::from_secs(120),
        );
        gate.from_checks(
            4,
            &checks,
            &[
                "killing-reconstruction-hyperbolic-even",
                "killing-reconstruction-hyperbolic-odd",
                "killing-reconstruction-control-even",
                "killing-reconstruction-control-odd",
            ],
            elapsed,
            Duration::from_secs(240),
        );
    }

    // 5, 6, 7: boundary operator algebra, the integrated identity, and the
    // endomorphism bound sweeps
    {
        let t = Instant::now();
        let checks = run_suite("sl-residual", &cfg(Some(7), params("")), w).unwrap();
        let elapsed = t.elapsed();
        gate.from_checks(
            5,
            &checks,
            &[
                "sl-anticommutation-even",
                "sl-anticommutation-odd",
                "sl-chi-pairing-even",
                "sl-chi-pairing-odd",
            ],
            elapsed,
            Duration::from_secs(240),
        );
        gate.from_checks(
            6,
            &checks,
            &["sl-flat-order", "sl-terms-finite"],
            elapsed,
            Duration::from_secs(120),
        );
        gate.from_checks(
            7,
            &checks,
            &["sl-curvature-sweep", "sl-curvature-equality"],
            elapsed,
            Duration::from_secs(240),
        );
    }

    // 8: smoothed polytopes
    {
        let t = Instant::now();
        let checks = run_suite("smooth-polytope", &cfg(Some(7), params("")), w).unwrap();
        let ids: Vec<String> = checks.iter().map(|c| c.id.clone()).collect();
        let idrefs: Vec<&str> = ids.iter().map(String::as_str).collect();
        gate.from_checks(8, &checks, &idrefs, t.elapsed(), Duration::from_secs(240));
    }

    // 9: trace-norm comparison sweeps
    {
        let t = Instant::now();
        let checks = run_suite("tracenorm", &cfg(Some(7), params("")), w).unwrap();
        let ids: Vec<String> = checks.iter().map(|c| c.id.clone()).collect();
        let idrefs: Vec<&str> = ids.iter().map(String::as_str).collect();
        gate.from_checks(9, &checks, &idrefs, t.elapsed(), Duration::from_secs(240));
    }

    // 10: byte-identical artifacts on a same-seed rerun
    {
        let dir = tempfile::tempdir().unwrap();
        let config_path = dir.path().join("smooth-polytope.toml");
        std::fs::write(&config_path, "suite = \"smooth-polytope\"\nseed = 7\n").unwrap();
        let mut identical = true;
        let mut detail = String::new();
        let out_a = dir.path().join("a");
        let out_b = dir.path().join("b");
        for out in [&out_a, &out_b] {
            let run = rigidity_lab::execute(
                "smooth-polytope",
                &config_path,
                None,
                Some(out.clone()),
                Some(2),
            )
            .unwrap();
            assert!(run.all_pass, "determinism run should pass its checks");
        }
        let mut files: Vec<PathBuf> = vec![PathBuf::from("report.json")];
        for sub in ["tables", "plots"] {
            for entry in std::fs::read_dir(out_a.join(sub)).unwrap() {
                let name = entry.unwrap().file_name();
                files.push(PathBuf::from(sub).join(name));
            }
        }
        for rel in &files {
            let a = std::fs::read(out_a.join(rel)).unwrap();
            let b = std::fs::read(out_b.join(rel)).unwrap();
            if a != b {
                identical = false;
                detail = format!("{} differs between same-seed runs", rel.display());
            }
        }
        if identical {
            detail = format!("{} artifacts byte-identical", files.len());
        }
        gate.record(10, identical, detail);
    }

    let mut all_pass = true;
    for (criterion, pass, detail) in &gate.lines {
        println!(
            "criterion {criterion}: {} — {detail}",
            if *pass { "pass" } else { "FAIL" }
        );
        all_pass &= pass;
    }
    assert!(all_pass, "acceptance gate failed; see lines above");
}
