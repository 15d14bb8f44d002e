//! Acceptance criteria, run in sequence with one PASS/FAIL line each.
//!
//! Lines go straight to stdout so they show up without `--nocapture`.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use scalefree::bounds;
use scalefree::par::Execution;
use scalefree::verify::{self, Check, Suite, SuiteReport, VerifyOptions};

const SEED: u64 = 20_240_601;

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn line(&mut self, n: usize, title: &str, ok: bool, elapsed: Duration, detail: &str) {
        let status = if ok { "PASS" } else { "FAIL" };
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "criterion {n:>2} {status} {title} [{:.1}s] {detail}", elapsed.as_secs_f64());
        let _ = out.flush();
        if !ok {
            self.failures.push(format!("criterion {n} ({title}): {detail}"));
        }
    }
}

fn opts(trials: usize) -> VerifyOptions {
    VerifyOptions { trials, seed: SEED, exec: Execution::Parallel }
}

fn timed(suite: Suite, trials: usize) -> (SuiteReport, Duration) {
    let start = Instant::now();
    let r = verify::run_suite(suite, &opts(trials)).expect("suite runs");
    (r, start.elapsed())
}

fn pick<'a>(r: &'a SuiteReport, pred: impl Fn(&Check) -> bool) -> Vec<&'a Check> {
    r.checks.iter().filter(|c| pred(c)).collect()
}

fn summarize(checks: &[&Check]) -> (bool, String) {
    let ok = !checks.is_empty() && checks.iter().all(|c| c.ok);
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| format!("{} {}/{}: {}", c.name, c.passed, c.total, c.detail))
        .collect();
    let counts: Vec<String> = checks.iter().map(|c| format!("{} {}/{}", c.name, c.passed, c.total)).collect();
    (ok, if failed.is_empty() { counts.join("; ") } else { failed.join("; ") })
}

fn determinism(dir: &std::path::Path) -> (bool, String) {
    let cfg = dir.join("det.cfg");
    std::fs::write(
        &cfg,
        "algorithm = adaftrl\nset = l2_ball\ndim = 3\nradius = 2\nscale = corollary1\n\
         adversary = spiky\nrounds = 300\nspike_round = 77\nseed = 42\n",
    )
    .unwrap();
    let run = |out: &str, seed: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_scalefree"))
            .args(["run", "--config", cfg.to_str().unwrap(), "--seed", seed, "--out"])
            .arg(dir.join(out))
            .output()
            .expect("binary runs");
        assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
        std::fs::read(dir.join(out)).unwrap()
    };
    let a = run("a.csv", "9");
    let b = run("b.csv", "9");
    let c = run("c.csv", "10");
    let ok = a == b && a != c && a.len() > 1000;
    (ok, format!("{} bytes, identical = {}, other seed differs = {}", a.len(), a == b, a != c))
}

#[test]
fn acceptance_criteria() {
    let mut o = Outcome { failures: vec![] };

    // 1. scale invariance
    let (r, t) = timed(Suite::ScaleInvariance, 50);
    let (ok, detail) = summarize(&r.checks.iter().collect::<Vec<_>>());
    o.line(1, "scale invariance", ok && t < Duration::from_secs(30), t, &detail);

    // 2, 3, 4, 9 share one run of the bounds suite
    let (b, t) = timed(Suite::Bounds, 1000);
    let within = t < Duration::from_secs(120);
    let (ok, detail) = summarize(&pick(&b, |c| c.name.starts_with("adaftrl corollary")));
    o.line(2, "adaftrl corollary, 5.3 constant", ok && within, t, &detail);
    let (ok, detail) = summarize(&pick(&b, |c| c.name.starts_with("solo")));
    o.line(3, "solo corollary, 13.3 constant, and theorem per round", ok && within, t, &detail);
    let (ok, detail) = summarize(&pick(&b, |c| {
        c.name.starts_with("recurrence") || c.name.starts_with("multiplier equals") || c.name.starts_with("regret vs")
    }));
    o.line(4, "recurrence lemmas", ok, t, &detail);

    // 5. proof-side inequalities
    let (r, t) = timed(Suite::Inequalities, 10_000);
    let (mut ok, mut detail) = summarize(&r.checks.iter().collect::<Vec<_>>());
    let lhs = bounds::useful_inequality_lhs(1.0, &[1.0, 1.0]);
    let rhs = bounds::useful_inequality_check(1.0, &[1.0, 1.0]).bound;
    // independent arithmetic: 3.5 * 1 * 1 + 3.5 * sqrt(2)
    let hand = (lhs - 2.0).abs() <= 1e-9 && (rhs - (3.5 + 3.5 * 2f64.sqrt())).abs() <= 1e-9;
    ok &= hand;
    detail.push_str(&format!("; hand example lhs {lhs}, rhs {rhs:.6}"));
    o.line(5, "proof-side inequalities", ok, t, &detail);

    // 6 and 8: conjugate machinery and the zero-multiplier limit
    let (conj, t_conj) = timed(Suite::Conjugates, 10_000);
    let (ok, failures) = summarize(&pick(&conj, |c| c.name != "zero-multiplier limit"));
    let fd = pick(&conj, |c| c.name.starts_with("finite differences"));
    let fd_ok = !fd.is_empty() && fd.iter().all(|c| c.total == verify::FD_POINTS);
    let pairs = verify::conjugate_pairs(SEED).len();
    let per_pair = pick(&conj, |c| c.name.starts_with("fenchel-young")).iter().all(|c| c.total == 10_000);
    let detail = if ok { format!("{pairs} pairs, {} checks", conj.checks.len() - 1) } else { failures };
    o.line(6, "conjugate machinery", ok && fd_ok && per_pair, t_conj, &detail);

    // 7. lower bound
    let (r, t) = timed(Suite::LowerBound, 100_000);
    let (ok, detail) = summarize(&r.checks.iter().collect::<Vec<_>>());
    o.line(7, "lower bound (statistical)", ok && t < Duration::from_secs(120), t, &detail);

    let (ok, detail) = summarize(&pick(&conj, |c| c.name == "zero-multiplier limit"));
    o.line(8, "zero-multiplier limit", ok, t_conj, &detail);

    // 9. per-coordinate identity
    let (ok, detail) = summarize(&pick(&b, |c| c.name.starts_with("per-coordinate")));
    let count_ok = pick(&b, |c| c.name.starts_with("per-coordinate")).iter().all(|c| c.total == 100);
    o.line(9, "per-coordinate regret identity", ok && count_ok, Duration::ZERO, &detail);

    // 10. determinism
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let (ok, detail) = determinism(dir.path());
    o.line(10, "determinism", ok, start.elapsed(), &detail);

    assert!(o.failures.is_empty(), "failed:\n{}", o.failures.join("\n"));
}
