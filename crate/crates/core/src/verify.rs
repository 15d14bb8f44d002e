//! Randomized verification suites behind `scalefree verify`.
//!
//! Every trial draws from its own counter-keyed stream and owns its learner,
//! so trials run independently (in parallel by default) and the merged tally
//! does not depend on the execution mode.

use rand::Rng;

use crate::adversaries::{self, diameter_pair, mix, AdversaryKind, AdversarySpec};
use crate::bounds::{self, BoundReport, NormStats};
use crate::error::Result;
use crate::geometry::{DecisionSet, Norm};
use crate::harness::{self, Algorithm, AlgorithmConfig, ExperimentConfig, LearnerConfig, RegularizerChoice, ScalePolicy};
use crate::learners::{scale_invariance_check, Learner, LearnerState};
use crate::par::{self, Execution};
use crate::regularizers::Regularizer;
use crate::sampling::{self, Family, LossProfile, TrialRng};
use crate::vecops;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Conjugates,
    Inequalities,
    ScaleInvariance,
    Bounds,
    LowerBound,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Conjugates, Suite::Inequalities, Suite::ScaleInvariance, Suite::Bounds, Suite::LowerBound];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Conjugates => "conjugates",
            Suite::Inequalities => "inequalities",
            Suite::ScaleInvariance => "scale-invariance",
            Suite::Bounds => "bounds",
            Suite::LowerBound => "lower-bound",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Conjugates | Suite::Inequalities => 10_000,
            Suite::ScaleInvariance => 50,
            Suite::Bounds => 1000,
            Suite::LowerBound => 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub exec: Execution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub ok: bool,
    /// First failure, or a summary for statistical checks.
    pub detail: String,
}

impl Check {
    fn counted(name: &str, passed: usize, total: usize, failure: Option<String>) -> Self {
        Check { name: name.into(), passed, total, ok: passed == total, detail: failure.unwrap_or_default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Conjugates => conjugates(opts),
        Suite::Inequalities => inequalities(opts)?,
        Suite::ScaleInvariance => scale_invariance(opts)?,
        Suite::Bounds => bounds_suite(opts)?,
        Suite::LowerBound => lower_bound(opts)?,
    };
    Ok(SuiteReport { suite, checks })
}

#[derive(Debug, Clone, Default)]
struct Slot {
    passed: usize,
    total: usize,
    failure: Option<String>,
}

/// Per-trial pass/fail counts, merged associatively across trials.
#[derive(Debug, Clone)]
struct Tally {
    slots: Vec<Slot>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally { slots: vec![Slot::default(); n] }
    }

    fn check(&mut self, i: usize, ok: bool, detail: impl FnOnce() -> String) {
        let s = &mut self.slots[i];
        s.total += 1;
        if ok {
            s.passed += 1;
        } else if s.failure.is_none() {
            s.failure = Some(detail());
        }
    }

    fn report(&mut self, i: usize, r: &BoundReport, ctx: impl FnOnce() -> String) {
        self.check(i, r.passes(), || format!("{} ({:?})", ctx(), r));
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.slots.iter_mut().zip(other.slots) {
            a.passed += b.passed;
            a.total += b.total;
            if a.failure.is_none() {
                a.failure = b.failure;
            }
        }
        self
    }

    fn into_checks(self, names: &[&str]) -> Vec<Check> {
        names.iter().zip(self.slots).map(|(n, s)| Check::counted(n, s.passed, s.total, s.failure)).collect()
    }
}

fn merge_all(n: usize, tallies: Vec<Tally>) -> Tally {
    tallies.into_iter().fold(Tally::new(n), Tally::merge)
}

/// `a <= b` up to rounding relative to `scale`.
fn le(a: f64, b: f64, scale: f64) -> bool {
    a <= b + 1e-9 * scale.abs().max(1e-300) + 1e-12
}

// ---------------------------------------------------------------- conjugates

/// Unit-scale (set, regularizer) pairs exercised by the conjugate suite.
pub fn conjugate_pairs(seed: u64) -> Vec<(String, Regularizer)> {
    let mut rng = sampling::trial_rng(seed, u64::MAX);
    let mut center = |d: usize| sampling::random_feasible(&mut rng, &DecisionSet::simplex(d).unwrap());
    let c4 = center(4);
    let c3 = center(3);
    let ball = DecisionSet::l2_ball(vec![0.5, -1.0, 2.0], 1.5).unwrap();
    let box3 = DecisionSet::boxed(vec![-1.0, 0.0, 2.0], vec![1.0, 0.5, 4.0]).unwrap();
    let box4 = DecisionSet::boxed(vec![0.0, -2.0, -1.0, 0.0], vec![1.0, 2.0, 0.0, 3.0]).unwrap().with_norm(Norm::L2);
    let product = DecisionSet::product(vec![
        DecisionSet::l2_ball(vec![0.0, 1.0], 0.5).unwrap(),
        DecisionSet::boxed(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap(),
    ])
    .unwrap();
    let pairs: Vec<(&str, Result<Regularizer>)> = vec![
        ("simplex(3)+entropy/l1", Regularizer::entropy(3, 1.0)),
        (
            "simplex(5)+entropy/l2",
            Regularizer::new(
                crate::regularizers::RegularizerKind::ShiftedNegEntropy,
                DecisionSet::simplex(5).unwrap().with_norm(Norm::L2),
                1.0,
            ),
        ),
        ("simplex(4)+quadratic/l2", Regularizer::half_sq_dist(DecisionSet::simplex(4).unwrap().with_norm(Norm::L2), c4, 1.0)),
        ("simplex(3)+quadratic/l1", Regularizer::half_sq_dist(DecisionSet::simplex(3).unwrap(), c3, 1.0)),
        ("ball(3)+quadratic/l2", Regularizer::half_sq_dist(ball, vec![0.9, -0.5, 2.3], 1.0)),
        ("box(3)+quadratic/linf", Regularizer::half_sq_dist(box3, vec![0.0, 0.25, 3.0], 1.0)),
        ("box(4)+quadratic/l2", Regularizer::half_sq_dist(box4, vec![1.0, 0.0, -0.5, 0.0], 1.0)),
        ("full(3)+quadratic/l2", Regularizer::half_sq_dist(DecisionSet::full_space(3).unwrap(), vec![1.0, -2.0, 0.5], 1.0)),
        ("product(ball,box)+quadratic/l2", Regularizer::half_sq_dist(product, vec![0.0, 1.2, 0.5, 1.0], 1.0)),
    ];
    pairs.into_iter().map(|(n, r)| (n.to_string(), r.expect("fixed pairs are valid"))).collect()
}

const CONJ_CHECKS: [&str; 10] = [
    "finite and differentiable",
    "gradient is the argmin",
    "conjugate identity",
    "strong smoothness",
    "lipschitz gradient",
    "bregman vs diameter",
    "gradient range vs diameter",
    "scaling law",
    "fenchel-young",
    "finite differences",
];

fn random_dual(rng: &mut TrialRng, dim: usize) -> Vec<f64> {
    let mag = sampling::log_uniform(rng, -2.0, 2.0);
    sampling::gaussian_vec(rng, dim, mag)
}

fn conjugate_trial(name: &str, base: &Regularizer, rng: &mut TrialRng, t: &mut Tally, fd: bool) -> Result<()> {
    let d = base.dim();
    let c = sampling::log_uniform(rng, -2.0, 2.0);
    let reg = base.with_scale(c)?;
    let lambda = reg.modulus();
    let set = reg.set();
    let diam = set.diameter();
    let x = random_dual(rng, d);
    let y = if rng.gen_bool(0.2) {
        // nearby pair
        let eps = sampling::log_uniform(rng, -8.0, -2.0);
        x.iter().map(|v| v + eps * sampling::normal(rng) * v.abs().max(1e-3)).collect()
    } else {
        random_dual(rng, d)
    };
    let w = sampling::random_feasible(rng, set);
    let ctx = || format!("{name}, c={c:e}, x={x:?}, y={y:?}");

    let fx = reg.conjugate_value(&x)?;
    let gx = reg.conjugate_grad(&x)?;
    let fy = reg.conjugate_value(&y)?;
    let gy = reg.conjugate_grad(&y)?;
    t.check(0, fx.is_finite() && vecops::all_finite(&gx) && set.contains(&gx), ctx);

    // argmin of R(w) - <x, w>
    let at_g = reg.value(&gx)? - vecops::dot(&x, &gx);
    let at_w = reg.value(&w)? - vecops::dot(&x, &w);
    let mag = reg.value(&w)?.abs() + vecops::dot(&x, &w).abs() + vecops::dot(&x, &gx).abs();
    t.check(1, le(at_g, at_w, mag), || format!("{} g={gx:?} w={w:?} {at_g} > {at_w}", ctx()));

    let rg = reg.value(&gx)?;
    let lin = vecops::dot(&x, &gx);
    t.check(2, (fx + rg - lin).abs() <= 1e-8 * fx.abs().max(rg.abs()).max(lin.abs()).max(1.0), || {
        format!("{} {fx} + {rg} != {lin}", ctx())
    });

    let b = reg.bregman_conjugate(&x, &y)?;
    let dn = set.dual_norm(&vecops::sub(&x, &y))?;
    let smooth = dn * dn / (2.0 * lambda);
    t.check(3, b >= 0.0 && le(b, smooth, smooth.max(fx.abs()).max(fy.abs())), || format!("{} B={b} > {smooth}", ctx()));

    let gap = set.primal_norm(&vecops::sub(&gx, &gy))?;
    let lip = dn / lambda;
    t.check(4, le(gap, lip, lip.max(vecops::linf(&gx))), || format!("{} {gap} > {lip}", ctx()));

    if diam.is_finite() {
        t.check(5, le(b, diam * dn, (diam * dn).max(fx.abs()).max(fy.abs())), || format!("{} B={b} > D|x-y|", ctx()));
        t.check(6, le(gap, diam, diam), || format!("{} {gap} > D={diam}", ctx()));
    }

    let unit = base.conjugate_value(&vecops::scaled(&x, 1.0 / c))?;
    t.check(7, (fx - c * unit).abs() <= 1e-10 * fx.abs().max((c * unit).abs()).max(1e-300), || {
        format!("{} {fx} != {c} * {unit}", ctx())
    });

    let fw = reg.value(&w)?;
    let xw = vecops::dot(&x, &w);
    t.check(8, fw + fx >= xw - 1e-9 * (fw.abs() + fx.abs() + xw.abs()), || format!("{} w={w:?}", ctx()));

    if fd {
        // moderate duals at unit scale, where the conjugate is smooth enough
        let l = sampling::gaussian_vec(rng, d, 1.0);
        let g = base.conjugate_grad(&l)?;
        let h = 1e-5;
        let mut worst = 0.0_f64;
        for i in 0..d {
            let mut p = l.clone();
            let mut m = l.clone();
            p[i] += h;
            m[i] -= h;
            let num = (base.conjugate_value(&p)? - base.conjugate_value(&m)?) / (2.0 * h);
            worst = worst.max((num - g[i]).abs());
        }
        t.check(9, worst <= 1e-4, || format!("{name}: l={l:?} fd error {worst:e}"));
    }
    Ok(())
}

/// Number of points where the gradient is checked against finite differences.
pub const FD_POINTS: usize = 100;

fn conjugates(opts: &VerifyOptions) -> Vec<Check> {
    let pairs = conjugate_pairs(opts.seed);
    let n = CONJ_CHECKS.len();
    let mut checks = Vec::new();
    for (p, (name, reg)) in pairs.iter().enumerate() {
        let stream = mix(opts.seed, p as u64);
        let tallies = par::map_trials(opts.trials, opts.exec, |k| {
            let mut t = Tally::new(n);
            let mut rng = sampling::trial_rng(stream, k as u64);
            if let Err(e) = conjugate_trial(name, reg, &mut rng, &mut t, k < FD_POINTS) {
                t.check(0, false, || format!("{name}: {e}"));
            }
            t
        });
        for mut c in merge_all(n, tallies).into_checks(&CONJ_CHECKS) {
            if c.total > 0 {
                c.name = format!("{} [{name}]", c.name);
                checks.push(c);
            }
        }
        if let Ok(sup) = reg.sup_value() {
            let diam = reg.set().diameter();
            let rhs = (8.0 * sup / reg.modulus()).sqrt();
            checks.push(Check {
                name: format!("diameter vs range [{name}]"),
                passed: usize::from(diam <= rhs),
                total: 1,
                ok: diam <= rhs,
                detail: format!("D = {diam}, sqrt(8 sup f / lambda) = {rhs}"),
            });
        }
    }
    checks.push(limit_check(opts));
    checks
}

/// Number of instances in the zero-multiplier limit check.
pub const LIMIT_INSTANCES: usize = 100;

/// `scaled_bregman(a, x, y) -> scaled_bregman(0, x, y)` as `a -> 0`.
pub fn limit_check(opts: &VerifyOptions) -> Check {
    let stream = mix(opts.seed, 0x11_4417);
    let results = par::map_trials(LIMIT_INSTANCES, opts.exec, |k| -> std::result::Result<(), String> {
        let mut rng = sampling::trial_rng(stream, k as u64);
        let fam = Family::BOUNDED[k % Family::BOUNDED.len()];
        let base = sampling::random_regularizer(&mut rng, fam);
        let c = sampling::log_uniform(&mut rng, -1.0, 1.0);
        let reg = base.with_scale(c).map_err(|e| e.to_string())?;
        let y = sampling::gaussian_vec(&mut rng, reg.dim(), 1.0);
        let l = sampling::gaussian_vec(&mut rng, reg.dim(), 1.0);
        let x = vecops::add(&y, &l);
        let v0 = reg.scaled_bregman(0.0, &x, &y).map_err(|e| e.to_string())?;
        let diffs: Vec<f64> = [1e-4, 1e-6, 1e-8]
            .iter()
            .map(|&a| reg.scaled_bregman(a, &x, &y).map(|v| (v - v0).abs()))
            .collect::<Result<_>>()
            .map_err(|e| e.to_string())?;
        // differences already at rounding level count as converged
        let floor = 1e-13 * v0.abs().max(1.0);
        let monotone = diffs.windows(2).all(|w| w[1] <= w[0] || w[1] <= floor);
        if diffs[2] <= 1e-5 && monotone {
            Ok(())
        } else {
            Err(format!("instance {k} ({fam:?}): |v(a) - v(0)| = {diffs:?}"))
        }
    });
    let passed = results.iter().filter(|r| r.is_ok()).count();
    let failure = results.into_iter().find_map(|r| r.err());
    Check::counted("zero-multiplier limit", passed, LIMIT_INSTANCES, failure)
}

// -------------------------------------------------------------- inequalities

fn random_profile(rng: &mut TrialRng, positive_first: bool) -> Vec<f64> {
    let len = rng.gen_range(1..=50);
    let mut a: Vec<f64> = match rng.gen_range(0..3) {
        // single spike among unit values
        0 => {
            let s = rng.gen_range(0..len);
            (0..len).map(|i| if i == s { 1e6 } else { 1.0 }).collect()
        }
        1 => (0..len).map(|_| if rng.gen_bool(0.1) { 0.0 } else { sampling::log_uniform(rng, -3.0, 3.0) }).collect(),
        _ => {
            let top = sampling::log_uniform(rng, -3.0, 3.0);
            (0..len).map(|_| rng.gen_range(0.0..top)).collect()
        }
    };
    if positive_first && !(a[0] > 0.0) {
        a[0] = sampling::log_uniform(rng, -3.0, 3.0);
    }
    a
}

fn inequalities(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let names = ["useful inequality", "sqrt-sum inequality"];
    let stream = mix(opts.seed, 0x1E9);
    let tallies = par::map_trials(opts.trials, opts.exec, |k| {
        let mut t = Tally::new(2);
        let mut rng = sampling::trial_rng(stream, k as u64);
        let c = if rng.gen_bool(0.1) { 0.0 } else { sampling::log_uniform(&mut rng, -3.0, 3.0) };
        let a = random_profile(&mut rng, false);
        t.report(0, &bounds::useful_inequality_check(c, &a), || format!("C={c}, a={a:?}"));
        let a = random_profile(&mut rng, true);
        match bounds::sqrt_sum_check(&a) {
            Ok(r) => t.report(1, &r, || format!("a={a:?}")),
            Err(e) => t.check(1, false, || e.to_string()),
        }
        t
    });
    let mut checks = merge_all(2, tallies).into_checks(&names);

    let lhs = bounds::useful_inequality_lhs(1.0, &[1.0, 1.0]);
    let rhs = bounds::useful_inequality_check(1.0, &[1.0, 1.0]).bound;
    let expected = 3.5 + 3.5 * 2f64.sqrt();
    let ok = (lhs - 2.0).abs() <= 1e-9 && (rhs - expected).abs() <= 1e-9 && (rhs - 8.450).abs() < 5e-4;
    checks.push(Check {
        name: "hand example C=1, a=(1,1)".into(),
        passed: usize::from(ok),
        total: 1,
        ok,
        detail: format!("lhs = {lhs}, rhs = {rhs}"),
    });
    Ok(checks)
}

// ---------------------------------------------------------- scale invariance

/// Loss multipliers tried against the `c = 1` run.
pub const SCALES: [f64; 5] = [1e-6, 1e-3, 1.0, 1e3, 1e6];
/// Rounds per scale-invariance instance.
pub const INVARIANCE_ROUNDS: usize = 100;
/// Fraction of instances on which the fixed-rate control must fail.
pub const CONTROL_FAIL_FRACTION: f64 = 0.9;

fn scale_invariance(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let stream = mix(opts.seed, 0x5CA1E);
    let results = par::map_trials(opts.trials, opts.exec, |k| -> Result<(Tally, bool)> {
        let mut t = Tally::new(2);
        let mut rng = sampling::trial_rng(stream, k as u64);
        let fam = Family::BOUNDED[k % Family::BOUNDED.len()];
        let reg = sampling::random_regularizer(&mut rng, fam).with_scale(sampling::log_uniform(&mut rng, -1.0, 1.0))?;
        let sigma = sampling::log_uniform(&mut rng, -2.0, 2.0);
        let losses: Vec<Vec<f64>> = sampling::random_losses(&mut rng, reg.dim(), INVARIANCE_ROUNDS, LossProfile::Gaussian)
            .into_iter()
            .map(|l| vecops::scaled(&l, sigma))
            .collect();
        let ada = LearnerState::adaftrl(reg.clone())?;
        let solo = LearnerState::solo(reg.clone());
        let fixed = LearnerState::fixed_eta(reg, 1.0)?;
        let mut control_failed = false;
        for c in SCALES {
            t.check(0, scale_invariance_check(&ada, &losses, c)?, || format!("instance {k} ({fam:?}), c = {c:e}"));
            t.check(1, scale_invariance_check(&solo, &losses, c)?, || format!("instance {k} ({fam:?}), c = {c:e}"));
            if c != 1.0 && !scale_invariance_check(&fixed, &losses, c)? {
                control_failed = true;
            }
        }
        Ok((t, control_failed))
    });
    let mut tally = Tally::new(2);
    let mut control = 0;
    for r in results {
        let (t, failed) = r?;
        tally = tally.merge(t);
        control += usize::from(failed);
    }
    let mut checks = tally.into_checks(&["adaftrl invariant", "solo invariant"]);
    let n = opts.trials.max(1);
    let frac = control as f64 / n as f64;
    checks.push(Check {
        name: "fixed-eta control is not invariant".into(),
        passed: control,
        total: opts.trials,
        ok: frac >= CONTROL_FAIL_FRACTION,
        detail: format!("control failed on {control}/{} instances ({:.1}%)", opts.trials, 100.0 * frac),
    });
    Ok(checks)
}

// -------------------------------------------------------------------- bounds

const BOUND_CHECKS: [&str; 11] = [
    "adaftrl corollary (5.3)",
    "solo corollary (13.3)",
    "adaftrl theorem per round",
    "solo theorem per round",
    "solo theorem, unbounded set, per comparator",
    "recurrence step",
    "recurrence closed form",
    "multiplier equals bregman sum",
    "regret vs (1 + R(u)) multiplier",
    "generic ftrl bound",
    "per-coordinate regret identity",
];

/// Rounds played by the harness, independently of the harness.
struct Played {
    predictions: Vec<Vec<f64>>,
    /// `m_1, ..., m_{T+1}`
    multipliers: Vec<f64>,
}

fn play(mut learner: LearnerState, losses: &[Vec<f64>]) -> Result<Played> {
    let mut predictions = Vec::with_capacity(losses.len());
    let mut multipliers = vec![learner.multiplier()];
    for l in losses {
        predictions.push(learner.predict()?);
        learner.observe(l)?;
        multipliers.push(learner.multiplier());
    }
    Ok(Played { predictions, multipliers })
}

fn bounded_instance(k: usize, rng: &mut TrialRng, t: &mut Tally) -> Result<()> {
    let ada = k % 2 == 0;
    let fam = if (k / 2) % 2 == 0 { Family::SimplexEntropy } else { Family::BallQuadratic };
    let base = sampling::random_regularizer(rng, fam);
    let rounds = rng.gen_range(1..=200);
    let profile = if rng.gen_bool(0.5) { LossProfile::Mixed } else { LossProfile::Spiky };
    let overall = sampling::log_uniform(rng, -3.0, 3.0);
    let losses: Vec<Vec<f64>> = sampling::random_losses(rng, base.dim(), rounds, profile)
        .into_iter()
        .map(|l| vecops::scaled(&l, overall))
        .collect();

    let choice = match sampling::quadratic_center(&base) {
        Some(z) => RegularizerChoice::HalfSqDist { center: z.to_vec() },
        None => RegularizerChoice::Entropy,
    };
    let (algorithm, scale) =
        if ada { (Algorithm::AdaFtrl, ScalePolicy::Corollary1) } else { (Algorithm::Solo, ScalePolicy::Corollary2) };
    let lc = LearnerConfig::new(algorithm, base.set().clone(), choice, scale);
    let reg = lc.regularizer()?;
    let cfg = ExperimentConfig::new(AlgorithmConfig::Single(lc.clone()), AdversaryKind::Replay(losses.clone()), rounds);
    let ctx = |what: &str| format!("instance {k} ({fam:?}, T={rounds}, {profile:?}) {what}");

    // corollary, per round, through the harness
    let res = harness::run_experiment(&cfg)?;
    for row in &res.trace {
        let r = BoundReport::new("corollary", row.regret, row.bound);
        t.report(if ada { 0 } else { 1 }, &r, || ctx(&format!("round {}", row.t)));
    }

    // theorem and recurrences, recomputed here
    let learner = lc.build()?;
    let played = play(learner, &losses)?;
    let set = reg.set();
    let diam = set.diameter();
    let lambda = reg.modulus();
    let mut stats = NormStats::default();
    let mut cum = vec![0.0; reg.dim()];
    let mut cum_loss = 0.0;
    for (i, l) in losses.iter().enumerate() {
        let norm = set.dual_norm(l)?;
        stats.push(norm);
        vecops::add_assign(&mut cum, l);
        cum_loss += vecops::dot(l, &played.predictions[i]);
        let u = set.linear_minimizer(&cum)?;
        let regret = cum_loss - vecops::dot(&cum, &u);
        let r_u = reg.value(&u)?;
        let (bound, slot) = if ada {
            (bounds::adaftrl_bound_stats(diam, lambda, r_u, &stats)?, 2)
        } else {
            (bounds::solo_bound_stats(diam, lambda, r_u, &stats), 3)
        };
        t.report(slot, &BoundReport::new("theorem", regret, bound), || ctx(&format!("round {}", i + 1)));
        if ada {
            let (prev, next) = (played.multipliers[i], played.multipliers[i + 1]);
            let step = bounds::recurrence_step_bound(prev, diam, lambda, norm);
            t.check(5, le(next, step, step), || ctx(&format!("round {}: {next} > {step}", i + 1)));
        }
    }
    // the prediction sequence must match the harness
    for (row, w) in res.trace.iter().zip(&played.predictions) {
        if &row.prediction != w {
            t.check(9, false, || ctx("harness predictions differ"));
        }
    }

    let u_star = set.linear_minimizer(&cum)?;
    let rhs = bounds::lemma1_rhs(&reg, &played.multipliers, &losses, &u_star)?;
    let m_last = *played.multipliers.last().unwrap();
    let mut comparators = vec![u_star];
    for _ in 0..8 {
        comparators.push(sampling::random_feasible(rng, set));
    }
    for u in &comparators {
        let regret = cum_loss - vecops::dot(&cum, u);
        let generic = m_last * reg.value(u)? + rhs.initial_conjugate + rhs.term_sum;
        t.report(9, &BoundReport::new("generic", regret, generic), || ctx(&format!("u = {u:?}")));
        if ada {
            let b = (1.0 + reg.value(u)?) * m_last;
            t.report(8, &BoundReport::new("lemma2", regret, b), || ctx(&format!("u = {u:?}")));
        }
    }
    if ada {
        let closed = bounds::recurrence_solution_bound_stats(diam, lambda, &stats);
        t.report(6, &BoundReport::new("closed form", m_last, closed), || ctx(""));
        let same = (m_last - rhs.bregman_sum).abs() <= 1e-8 * m_last.abs().max(rhs.bregman_sum.abs());
        t.check(7, same || (m_last == 0.0 && rhs.bregman_sum == 0.0), || {
            ctx(&format!("delta {m_last} vs sum {}", rhs.bregman_sum))
        });
    }
    Ok(())
}

fn unbounded_instance(k: usize, rng: &mut TrialRng, t: &mut Tally) -> Result<()> {
    let base = sampling::random_regularizer(rng, Family::FullSpaceQuadratic);
    let reg = base.with_scale(sampling::log_uniform(rng, -1.0, 1.0))?;
    let rounds = rng.gen_range(1..=200);
    let profile = if rng.gen_bool(0.5) { LossProfile::Mixed } else { LossProfile::Spiky };
    let losses = sampling::random_losses(rng, reg.dim(), rounds, profile);
    let comparators: Vec<Vec<f64>> = (0..5)
        .map(|_| {
            let r = sampling::log_uniform(rng, -1.0, 2.0);
            sampling::gaussian_vec(rng, reg.dim(), r)
        })
        .collect();
    let played = play(LearnerState::solo(reg.clone()), &losses)?;
    let lambda = reg.modulus();
    let mut stats = NormStats::default();
    let mut cum = vec![0.0; reg.dim()];
    let mut cum_loss = 0.0;
    for (i, l) in losses.iter().enumerate() {
        stats.push(reg.set().dual_norm(l)?);
        vecops::add_assign(&mut cum, l);
        cum_loss += vecops::dot(l, &played.predictions[i]);
        for (j, u) in comparators.iter().enumerate() {
            let regret = cum_loss - vecops::dot(&cum, u);
            let bound = bounds::solo_bound_stats(f64::INFINITY, lambda, reg.value(u)?, &stats);
            t.report(4, &BoundReport::new("theorem", regret, bound), || {
                format!("unbounded instance {k}, round {}, comparator {j}", i + 1)
            });
        }
    }
    let rhs = bounds::lemma1_rhs(&reg, &played.multipliers, &losses, &comparators[0])?;
    let m_last = *played.multipliers.last().unwrap();
    for u in &comparators {
        let regret = cum_loss - vecops::dot(&cum, u);
        let generic = m_last * reg.value(u)? + rhs.initial_conjugate + rhs.term_sum;
        t.report(9, &BoundReport::new("generic", regret, generic), || format!("unbounded instance {k}"));
    }
    Ok(())
}

fn random_factor(rng: &mut TrialRng) -> LearnerConfig {
    let fam = Family::BOUNDED[rng.gen_range(0..Family::BOUNDED.len())];
    let base = sampling::random_regularizer(rng, fam);
    let choice = match sampling::quadratic_center(&base) {
        Some(z) => RegularizerChoice::HalfSqDist { center: z.to_vec() },
        None => RegularizerChoice::Entropy,
    };
    let (algorithm, scale) = match rng.gen_range(0..4) {
        0 => (Algorithm::AdaFtrl, ScalePolicy::Corollary1),
        1 => (Algorithm::Solo, ScalePolicy::Corollary2),
        2 => (Algorithm::Solo, ScalePolicy::Explicit(sampling::log_uniform(rng, -1.0, 1.0))),
        _ => (Algorithm::FixedEta { eta: sampling::log_uniform(rng, -1.0, 1.0) }, ScalePolicy::Explicit(1.0)),
    };
    LearnerConfig::new(algorithm, base.set().clone(), choice, scale)
}

/// Product regret equals the sum of factor regrets, each factor run on its
/// own through the harness.
pub fn per_coordinate_instance(k: usize, rng: &mut TrialRng) -> Result<std::result::Result<(), String>> {
    let factors = vec![random_factor(rng), random_factor(rng)];
    let dims: Vec<usize> = factors.iter().map(|f| f.set.dim()).collect();
    let rounds = rng.gen_range(1..=60);
    let profile = if rng.gen_bool(0.5) { LossProfile::Mixed } else { LossProfile::Gaussian };
    let losses = sampling::random_losses(rng, dims.iter().sum(), rounds, profile);
    let product = ExperimentConfig::new(
        AlgorithmConfig::PerCoordinate(factors.clone()),
        AdversaryKind::Replay(losses.clone()),
        rounds,
    );
    let whole = harness::run_experiment(&product)?;
    let mut parts = Vec::new();
    let mut start = 0;
    for f in &factors {
        let d = f.set.dim();
        let sliced: Vec<Vec<f64>> = losses.iter().map(|l| l[start..start + d].to_vec()).collect();
        start += d;
        let cfg = ExperimentConfig::new(AlgorithmConfig::Single(f.clone()), AdversaryKind::Replay(sliced), rounds);
        parts.push(harness::run_experiment(&cfg)?);
    }
    for (t, row) in whole.trace.iter().enumerate() {
        let sum: f64 = parts.iter().map(|p| p.trace[t].regret).sum();
        let scale = row.regret.abs().max(parts.iter().map(|p| p.trace[t].regret.abs()).fold(0.0, f64::max));
        if (row.regret - sum).abs() > 1e-9 * scale.max(1e-300) && (row.regret - sum).abs() > 1e-12 {
            return Ok(Err(format!("instance {k}, round {}: product {} vs sum {sum}", row.t, row.regret)));
        }
    }
    if !whole.all_pass() {
        return Ok(Err(format!("instance {k}: product bound report failed: {:?}", whole.reports)));
    }
    Ok(Ok(()))
}

fn bounds_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let n = BOUND_CHECKS.len();
    let unbounded = (opts.trials / 4).max(1);
    let product = (opts.trials / 10).max(1);
    let stream = mix(opts.seed, 0xB0_0D5);
    let tallies = par::map_trials(opts.trials + unbounded + product, opts.exec, |k| {
        let mut t = Tally::new(n);
        let mut rng = sampling::trial_rng(stream, k as u64);
        let res = if k < opts.trials {
            bounded_instance(k, &mut rng, &mut t)
        } else if k < opts.trials + unbounded {
            unbounded_instance(k, &mut rng, &mut t)
        } else {
            per_coordinate_instance(k, &mut rng).map(|r| t.check(10, r.is_ok(), || r.err().unwrap_or_default()))
        };
        if let Err(e) = res {
            t.check(9, false, || format!("instance {k}: {e}"));
        }
        t
    });
    Ok(merge_all(n, tallies).into_checks(&BOUND_CHECKS))
}

// --------------------------------------------------------------- lower bound

/// Rounds of the lower-bound game.
pub const LOWER_BOUND_ROUNDS: usize = 32;
/// Profiles checked against the Khinchin constant.
pub const KHINCHIN_PROFILES: usize = 20;

/// Learners the lower-bound adversary is played against.
pub fn lower_bound_learners() -> Result<Vec<(&'static str, LearnerState)>> {
    let set = DecisionSet::simplex(2)?;
    let ent = |p| LearnerConfig::new(Algorithm::AdaFtrl, set.clone(), RegularizerChoice::Entropy, p);
    let mut solo = ent(ScalePolicy::Corollary2);
    solo.algorithm = Algorithm::Solo;
    let mut fixed = ent(ScalePolicy::Explicit(1.0));
    fixed.algorithm = Algorithm::FixedEta { eta: 1.0 };
    let quad = LearnerConfig::new(
        Algorithm::Solo,
        set.clone(),
        RegularizerChoice::HalfSqDist { center: vec![0.5, 0.5] },
        ScalePolicy::Explicit(1.0),
    );
    Ok(vec![
        ("adaftrl", ent(ScalePolicy::Corollary1).build()?),
        ("solo", solo.build()?),
        ("solo (quadratic)", quad.build()?),
        ("fixed_eta", fixed.build()?),
    ])
}

fn lower_bound(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let set = DecisionSet::simplex(2)?;
    let pair = diameter_pair(&set)?;
    let diam = set.diameter();
    let norms = vec![1.0; LOWER_BOUND_ROUNDS];
    let target = bounds::lower_bound_value(diam, &norms);
    let learners = lower_bound_learners()?;
    let stream = mix(opts.seed, 0x10_3E4);

    let kind = AdversaryKind::LowerBound { set: set.clone(), norms: norms.clone() };
    let regrets = par::map_trials(opts.trials, opts.exec, |k| -> Result<Vec<f64>> {
        let losses = adversaries::generate(&AdversarySpec::new(kind.clone(), mix(stream, k as u64)))?;
        let mut cum = vec![0.0; 2];
        for l in &losses {
            vecops::add_assign(&mut cum, l);
        }
        let best = vecops::dot(&cum, &pair.x).min(vecops::dot(&cum, &pair.y));
        learners
            .iter()
            .map(|(_, learner)| {
                let steps = crate::learners::run(&mut learner.clone(), &losses)?;
                Ok(steps.last().map_or(0.0, |s| s.cum_loss) - best)
            })
            .collect()
    });
    let regrets: Vec<Vec<f64>> = regrets.into_iter().collect::<Result<_>>()?;

    let mut checks = Vec::new();
    let n = opts.trials.max(1) as f64;
    for (j, (name, _)) in learners.iter().enumerate() {
        let mean = regrets.iter().map(|r| r[j]).sum::<f64>() / n;
        let var = regrets.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        let se = (var / n).sqrt();
        let ok = mean >= target - 3.0 * se;
        checks.push(Check {
            name: format!("lower bound vs {name}"),
            passed: usize::from(ok),
            total: 1,
            ok,
            detail: format!("mean regret {mean:.4} (se {se:.4}) vs D/sqrt(8) sqrt(T) = {target:.4}"),
        });
    }

    let kstream = mix(opts.seed, 0x4B41);
    let mut passed = 0;
    let mut failure = None;
    for p in 0..KHINCHIN_PROFILES {
        let mut rng = sampling::trial_rng(kstream, p as u64);
        let a: Vec<f64> = match p {
            0 => vec![1.0, 1.0],
            1 => (0..20).map(|i| if i == 7 { 1e6 } else { 1.0 }).collect(),
            _ => (0..rng.gen_range(1..=40)).map(|_| sampling::log_uniform(&mut rng, -2.0, 2.0)).collect(),
        };
        let est = adversaries::khinchin_monte_carlo_with(&a, opts.trials.max(2), mix(kstream, 1000 + p as u64), opts.exec)?;
        let rhs = bounds::lower_bound_factor() * 2.0 * bounds::root_sum_sq(&a);
        if est.mean >= rhs - 3.0 * est.std_err {
            passed += 1;
        } else if failure.is_none() {
            failure = Some(format!("profile {p}: mean {} (se {}) < {rhs}", est.mean, est.std_err));
        }
    }
    checks.push(Check::counted("khinchin bound", passed, KHINCHIN_PROFILES, failure));
    Ok(checks)
}
