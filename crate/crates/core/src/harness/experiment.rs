//! Runs one configured experiment and keeps the regret books.

use crate::adversaries::{generate, scale_losses, AdversarySpec};
use crate::bounds::{self, BoundReport, NormStats};
use crate::error::{Error, Result};
use crate::geometry::DecisionSet;
use crate::learners::{Learner, LearnerState, PerCoordinateLearner};
use crate::regularizers::Regularizer;
use crate::vecops;

use super::config::{Algorithm, ExperimentConfig, LearnerConfig, ScalePolicy};

/// One row of a regret trace.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrace {
    pub t: usize,
    pub prediction: Vec<f64>,
    pub loss: Vec<f64>,
    pub inst_loss: f64,
    pub loss_dual_norm: f64,
    pub cum_loss: f64,
    pub scheme_scalar: f64,
    /// Best-in-hindsight regret on bounded sets; the max over the explicit
    /// comparators otherwise.
    pub regret: f64,
    /// Bound matching `regret` (at the same comparator).
    pub bound: f64,
    /// Per explicit comparator; empty on bounded sets.
    pub comparator_regrets: Vec<f64>,
    pub comparator_bounds: Vec<f64>,
}

impl RoundTrace {
    pub fn slack(&self) -> f64 {
        self.bound - self.regret
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub dim: usize,
    pub trace: Vec<RoundTrace>,
    pub reports: Vec<BoundReport>,
}

impl ExperimentResult {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(BoundReport::passes)
    }
}

/// `argmin_{u in K} <L, u>`, the comparator attaining the regret supremum.
pub fn best_in_hindsight(set: &DecisionSet, cum_loss: &[f64]) -> Result<Vec<f64>> {
    if !set.is_bounded() {
        return Err(Error::UnboundedSet);
    }
    set.linear_minimizer(cum_loss)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundRule {
    AdaFtrlCorollary { sup_f: f64 },
    SoloCorollary { sup_f: f64 },
    AdaFtrlTheorem,
    SoloTheorem,
    /// Generic FTRL bound evaluated numerically.
    Generic,
}

impl BoundRule {
    pub fn for_learner(cfg: &LearnerConfig) -> Result<Self> {
        Ok(match (cfg.algorithm, cfg.scale) {
            (Algorithm::AdaFtrl, ScalePolicy::Corollary1) => BoundRule::AdaFtrlCorollary { sup_f: cfg.normalized_sup()? },
            (Algorithm::Solo, ScalePolicy::Corollary2) => BoundRule::SoloCorollary { sup_f: cfg.normalized_sup()? },
            (Algorithm::AdaFtrl, _) => BoundRule::AdaFtrlTheorem,
            (Algorithm::Solo, _) => BoundRule::SoloTheorem,
            (Algorithm::FixedEta { .. }, _) => BoundRule::Generic,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundRule::AdaFtrlCorollary { .. } => "adaftrl_corollary",
            BoundRule::SoloCorollary { .. } => "solo_corollary",
            BoundRule::AdaFtrlTheorem => "adaftrl_theorem",
            BoundRule::SoloTheorem => "solo_theorem",
            BoundRule::Generic => "ftrl_generic",
        }
    }

    fn theorem(&self) -> BoundRule {
        match self {
            BoundRule::AdaFtrlCorollary { .. } => BoundRule::AdaFtrlTheorem,
            BoundRule::SoloCorollary { .. } => BoundRule::SoloTheorem,
            other => *other,
        }
    }
}

/// Running bound state of one factor learner.
#[derive(Debug, Clone)]
struct FactorBooks {
    reg: Regularizer,
    rule: BoundRule,
    diameter: f64,
    lambda: f64,
    stats: NormStats,
    initial_conjugate: f64,
    generic_terms: f64,
    multiplier: f64,
    cum: Vec<f64>,
}

impl FactorBooks {
    fn new(cfg: &LearnerConfig, learner: &LearnerState) -> Result<Self> {
        let reg = learner.regularizer().clone();
        let m1 = learner.multiplier();
        let initial_conjugate = reg.scaled_conjugate(m1, &vec![0.0; reg.dim()])?;
        Ok(FactorBooks {
            diameter: reg.set().diameter(),
            lambda: reg.modulus(),
            rule: BoundRule::for_learner(cfg)?,
            stats: NormStats::default(),
            initial_conjugate,
            generic_terms: 0.0,
            multiplier: m1,
            cum: vec![0.0; reg.dim()],
            reg,
        })
    }

    fn update(&mut self, loss: &[f64], next_multiplier: f64) -> Result<()> {
        self.stats.push(self.reg.set().norms().dual_norm(loss));
        let (_, term) = bounds::lemma1_term(&self.reg, self.multiplier, next_multiplier, &self.cum, loss)?;
        self.generic_terms += term;
        self.multiplier = next_multiplier;
        vecops::add_assign(&mut self.cum, loss);
        Ok(())
    }

    fn bound(&self, rule: BoundRule, u: &[f64]) -> Result<f64> {
        Ok(match rule {
            BoundRule::AdaFtrlCorollary { sup_f } => bounds::adaftrl_corollary_bound_stats(sup_f, &self.stats)?,
            BoundRule::SoloCorollary { sup_f } => bounds::solo_corollary_bound_stats(sup_f, &self.stats)?,
            BoundRule::AdaFtrlTheorem => {
                bounds::adaftrl_bound_stats(self.diameter, self.lambda, self.reg.value(u)?, &self.stats)?
            }
            BoundRule::SoloTheorem => bounds::solo_bound_stats(self.diameter, self.lambda, self.reg.value(u)?, &self.stats),
            BoundRule::Generic => self.multiplier * self.reg.value(u)? + self.initial_conjugate + self.generic_terms,
        })
    }
}

struct Books {
    factors: Vec<FactorBooks>,
    ranges: Vec<std::ops::Range<usize>>,
}

impl Books {
    fn bound_with(&self, pick: impl Fn(&FactorBooks) -> BoundRule, u: &[f64]) -> Result<f64> {
        self.factors.iter().zip(&self.ranges).map(|(f, r)| f.bound(pick(f), &u[r.clone()])).sum()
    }

    fn matching(&self, u: &[f64]) -> Result<f64> {
        self.bound_with(|f| f.rule, u)
    }

    fn name(&self, pick: impl Fn(&FactorBooks) -> BoundRule) -> String {
        let names: Vec<&str> = self.factors.iter().map(|f| pick(f).name()).collect();
        if names.iter().all(|n| *n == names[0]) {
            names[0].to_string()
        } else {
            "factor_sum".to_string()
        }
    }
}

/// The loss sequence the experiment plays, after `scale_factor`.
pub fn experiment_losses(cfg: &ExperimentConfig) -> Result<Vec<Vec<f64>>> {
    let raw = generate(&AdversarySpec::new(cfg.adversary.clone(), cfg.adversary_seed()))?;
    if cfg.scale_factor == 1.0 {
        Ok(raw)
    } else {
        scale_losses(&raw, cfg.scale_factor)
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let losses = experiment_losses(cfg)?;
    let learner = cfg.algorithm.build()?;
    run_on_losses(cfg, learner, &losses)
}

/// Plays `losses` against `learner` with the bookkeeping of `cfg`.
pub fn run_on_losses(
    cfg: &ExperimentConfig,
    mut learner: PerCoordinateLearner,
    losses: &[Vec<f64>],
) -> Result<ExperimentResult> {
    let set = cfg.algorithm.set()?;
    let dim = set.dim();
    let bounded = set.is_bounded();
    let mut books = Books {
        factors: cfg
            .algorithm
            .factors()
            .iter()
            .zip(learner.factors())
            .map(|(c, l)| FactorBooks::new(c, l))
            .collect::<Result<_>>()?,
        ranges: learner.ranges(),
    };

    let mut trace = Vec::with_capacity(losses.len());
    let mut cum_vec = vec![0.0; dim];
    let mut cum_loss = 0.0;
    // (relative slack, report) of the tightest round seen so far
    let mut worst: Option<(f64, BoundReport)> = None;

    for (i, loss) in losses.iter().enumerate() {
        vecops::check_dim(dim, loss)?;
        let prediction = learner.predict()?;
        let inst_loss = vecops::dot(loss, &prediction);
        learner.observe(loss)?;
        for ((b, f), r) in books.factors.iter_mut().zip(learner.factors()).zip(&books.ranges) {
            b.update(&loss[r.clone()], f.multiplier())?;
        }
        vecops::add_assign(&mut cum_vec, loss);
        cum_loss += inst_loss;

        let mut comparator_regrets = Vec::new();
        let mut comparator_bounds = Vec::new();
        let (regret, bound) = if bounded {
            let u = best_in_hindsight(&set, &cum_vec)?;
            (cum_loss - vecops::dot(&cum_vec, &u), books.matching(&u)?)
        } else {
            for u in &cfg.comparators {
                comparator_regrets.push(cum_loss - vecops::dot(&cum_vec, u));
                comparator_bounds.push(books.matching(u)?);
            }
            let k = (0..comparator_regrets.len())
                .fold(0, |b, k| if comparator_regrets[k] > comparator_regrets[b] { k } else { b });
            (comparator_regrets[k], comparator_bounds[k])
        };

        let candidates: Vec<(f64, f64)> = if bounded {
            vec![(regret, bound)]
        } else {
            comparator_regrets.iter().copied().zip(comparator_bounds.iter().copied()).collect()
        };
        for (r, b) in candidates {
            let report = BoundReport::new("", r, b);
            let rel = report.slack / report.bound.abs().max(1.0);
            if worst.as_ref().map_or(true, |(w, _)| rel < *w) {
                worst = Some((rel, report));
            }
        }

        trace.push(RoundTrace {
            t: i + 1,
            prediction,
            loss: loss.clone(),
            inst_loss,
            loss_dual_norm: set.dual_norm(loss)?,
            cum_loss,
            scheme_scalar: learner.scheme_scalar(),
            regret,
            bound,
            comparator_regrets,
            comparator_bounds,
        });
    }

    let comparators: Vec<(String, Vec<f64>)> = if bounded {
        vec![(String::new(), best_in_hindsight(&set, &cum_vec)?)]
    } else {
        cfg.comparators.iter().enumerate().map(|(k, u)| (format!("[u{k}]"), u.clone())).collect()
    };
    let has_corollary = books.factors.iter().any(|f| f.rule.theorem() != f.rule);
    let all_generic = books.factors.iter().all(|f| f.rule == BoundRule::Generic);
    let mut reports = Vec::new();
    for (suffix, u) in &comparators {
        let regret = cum_loss - vecops::dot(&cum_vec, u);
        reports.push(BoundReport::new(format!("{}{suffix}", books.name(|f| f.rule)), regret, books.matching(u)?));
        if has_corollary {
            let b = books.bound_with(|f| f.rule.theorem(), u)?;
            reports.push(BoundReport::new(format!("{}{suffix}", books.name(|f| f.rule.theorem())), regret, b));
        }
        if !all_generic {
            let b = books.bound_with(|_| BoundRule::Generic, u)?;
            reports.push(BoundReport::new(format!("ftrl_generic{suffix}"), regret, b));
        }
    }
    if let Some((_, mut w)) = worst {
        w.name = format!("{}_worst_round", books.name(|f| f.rule));
        reports.push(w);
    }
    Ok(ExperimentResult { dim, trace, reports })
}
