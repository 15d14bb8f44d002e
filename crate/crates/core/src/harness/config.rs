//! Experiment configuration.
//!
//! Flat `key = value` text, one entry per line, `#` starts a comment. A
//! per-coordinate run describes each factor with `factor.N.`-prefixed keys
//! (`N` counts from 0). Unknown and duplicate keys are rejected.
//!
//! ```text
//! algorithm = solo
//! set = simplex
//! dim = 2
//! regularizer = entropy
//! scale = corollary2
//! adversary = replay
//! loss_file = losses.csv
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::adversaries::{AdversaryKind, AdversarySpec};
use crate::bounds::{solo_corollary_scale, ADAFTRL_COROLLARY_SCALE};
use crate::error::{Error, Result};
use crate::geometry::{DecisionSet, Norm, SetKind};
use crate::learners::{LearnerState, PerCoordinateLearner};
use crate::regularizers::{Regularizer, RegularizerKind};

use super::io;

/// Offset added to the experiment seed to key the adversary stream.
pub const ADVERSARY_SEED_OFFSET: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    AdaFtrl,
    Solo,
    FixedEta { eta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalePolicy {
    Explicit(f64),
    /// `f / (16 sup f)`
    Corollary1,
    /// `f sqrt(2.75) / sqrt(sup f)`
    Corollary2,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegularizerChoice {
    Entropy,
    HalfSqDist { center: Vec<f64> },
}

/// One learner on one set.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    pub algorithm: Algorithm,
    pub set: DecisionSet,
    pub regularizer: RegularizerChoice,
    pub scale: ScalePolicy,
}

impl LearnerConfig {
    pub fn new(algorithm: Algorithm, set: DecisionSet, regularizer: RegularizerChoice, scale: ScalePolicy) -> Self {
        LearnerConfig { algorithm, set, regularizer, scale }
    }

    /// The regularizer at unit scale.
    pub fn base_regularizer(&self) -> Result<Regularizer> {
        let kind = match &self.regularizer {
            RegularizerChoice::Entropy => RegularizerKind::ShiftedNegEntropy,
            RegularizerChoice::HalfSqDist { center } => RegularizerKind::HalfSqDist { center: center.clone() },
        };
        Regularizer::new(kind, self.set.clone(), 1.0)
    }

    /// `sup f` of the base regularizer normalized to modulus one.
    pub fn normalized_sup(&self) -> Result<f64> {
        let base = self.base_regularizer()?;
        Ok(base.sup_value()? / base.base_lambda())
    }

    pub fn deployed_scale(&self) -> Result<f64> {
        let base = self.base_regularizer()?;
        let scale = match self.scale {
            ScalePolicy::Explicit(s) => s,
            ScalePolicy::Corollary1 | ScalePolicy::Corollary2 => {
                let sup = base.sup_value().map_err(|_| {
                    Error::Config("corollary scale policies need a bounded decision set".into())
                })?;
                if !(sup > 0.0) {
                    return Err(Error::Config("corollary scale policies need sup f > 0".into()));
                }
                if self.scale == ScalePolicy::Corollary1 {
                    ADAFTRL_COROLLARY_SCALE / sup
                } else {
                    solo_corollary_scale() / (base.base_lambda() * sup).sqrt()
                }
            }
        };
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Config(format!("regularizer scale must be positive and finite, got {scale}")));
        }
        Ok(scale)
    }

    pub fn regularizer(&self) -> Result<Regularizer> {
        self.base_regularizer()?.with_scale(self.deployed_scale()?)
    }

    pub fn build(&self) -> Result<LearnerState> {
        let reg = self.regularizer()?;
        match self.algorithm {
            Algorithm::AdaFtrl => {
                LearnerState::adaftrl(reg).map_err(|_| Error::Config("adaftrl requires a bounded decision set".into()))
            }
            Algorithm::Solo => Ok(LearnerState::solo(reg)),
            Algorithm::FixedEta { eta } => LearnerState::fixed_eta(reg, eta),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.algorithm == Algorithm::AdaFtrl && !self.set.is_bounded() {
            return Err(Error::Config("adaftrl requires a bounded decision set".into()));
        }
        self.regularizer().map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmConfig {
    Single(LearnerConfig),
    PerCoordinate(Vec<LearnerConfig>),
}

impl AlgorithmConfig {
    pub fn factors(&self) -> &[LearnerConfig] {
        match self {
            AlgorithmConfig::Single(c) => std::slice::from_ref(c),
            AlgorithmConfig::PerCoordinate(cs) => cs,
        }
    }

    pub fn dim(&self) -> usize {
        self.factors().iter().map(|f| f.set.dim()).sum()
    }

    /// The decision set the whole learner plays on.
    pub fn set(&self) -> Result<DecisionSet> {
        match self {
            AlgorithmConfig::Single(c) => Ok(c.set.clone()),
            AlgorithmConfig::PerCoordinate(cs) => DecisionSet::product(cs.iter().map(|c| c.set.clone()).collect()),
        }
    }

    /// A single learner is a one-factor per-coordinate learner.
    pub fn build(&self) -> Result<PerCoordinateLearner> {
        PerCoordinateLearner::new(self.factors().iter().map(LearnerConfig::build).collect::<Result<_>>()?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmConfig,
    pub adversary: AdversaryKind,
    pub rounds: usize,
    pub seed: u64,
    pub scale_factor: f64,
    pub comparators: Vec<Vec<f64>>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(algorithm: AlgorithmConfig, adversary: AdversaryKind, rounds: usize) -> Self {
        ExperimentConfig { algorithm, adversary, rounds, seed: 0, scale_factor: 1.0, comparators: vec![], output: None }
    }

    pub fn adversary_seed(&self) -> u64 {
        self.seed.wrapping_add(ADVERSARY_SEED_OFFSET)
    }

    pub fn validate(&self) -> Result<()> {
        let factors = self.algorithm.factors();
        if factors.is_empty() {
            return Err(Error::Config("per_coordinate needs at least one factor".into()));
        }
        for f in factors {
            f.validate()?;
        }
        let set = self.algorithm.set()?;
        if !set.is_bounded() {
            if factors.len() > 1 {
                return Err(Error::Config("per-coordinate factors must be bounded".into()));
            }
            if self.comparators.is_empty() {
                return Err(Error::Config("an unbounded set requires explicit comparators".into()));
            }
        }
        for (k, u) in self.comparators.iter().enumerate() {
            if u.len() != set.dim() {
                return Err(Error::Config(format!("comparator {k} has dimension {}, expected {}", u.len(), set.dim())));
            }
            if !set.contains(u) {
                return Err(Error::Config(format!("comparator {k} is not in the decision set")));
            }
        }
        if !(self.scale_factor > 0.0 && self.scale_factor.is_finite()) {
            return Err(Error::Config(format!("scale_factor must be positive, got {}", self.scale_factor)));
        }
        let d = set.dim();
        match &self.adversary {
            AdversaryKind::Replay(losses) => {
                if losses.len() != self.rounds {
                    return Err(Error::Config(format!(
                        "rounds = {} but the loss file has {} rows",
                        self.rounds,
                        losses.len()
                    )));
                }
                if let Some(l) = losses.iter().find(|l| l.len() != d) {
                    return Err(Error::Config(format!("loss of dimension {}, expected {d}", l.len())));
                }
            }
            AdversaryKind::RandomGaussian { dim, rounds, .. } | AdversaryKind::RandomSpiky { dim, rounds, .. } => {
                if *dim != d || *rounds != self.rounds {
                    return Err(Error::Config("adversary shape does not match the experiment".into()));
                }
            }
            AdversaryKind::LowerBound { set: s, norms } => {
                if s.dim() != d || norms.len() != self.rounds {
                    return Err(Error::Config("adversary shape does not match the experiment".into()));
                }
            }
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses config text; relative paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut kv = Entries::parse(text)?;
        let cfg = build(&mut kv, base_dir)?;
        kv.finish()?;
        cfg.validate()?;
        Ok(cfg)
    }
}

struct Entries {
    map: BTreeMap<String, String>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", i + 1)));
            }
            if map.insert(k.clone(), v).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", i + 1)));
            }
        }
        Ok(Entries { map })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<String> {
        self.take(key).ok_or_else(|| Error::Config(format!("missing key `{key}`")))
    }

    fn num(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key).map(|v| parse_f64(key, &v)).transpose()
    }

    fn int<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        self.take(key)
            .map(|v| v.parse().map_err(|_| Error::Config(format!("`{key}`: expected an integer, got `{v}`"))))
            .transpose()
    }

    fn vec(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.take(key).map(|v| parse_list(key, &v)).transpose()
    }

    fn has_prefix(&self, prefix: &str) -> bool {
        self.map.keys().any(|k| k.starts_with(prefix))
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            Some(k) => Err(Error::Config(format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }
}

pub(crate) fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.trim().parse().map_err(|_| Error::Config(format!("`{key}`: expected a number, got `{v}`")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("`{key}`: value must be finite")));
    }
    Ok(x)
}

pub(crate) fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|x| parse_f64(key, x)).collect()
}

fn build(kv: &mut Entries, base_dir: &Path) -> Result<ExperimentConfig> {
    let algorithm = match kv.require("algorithm")?.as_str() {
        "per_coordinate" => {
            let mut factors = Vec::new();
            while kv.has_prefix(&format!("factor.{}.", factors.len())) {
                factors.push(learner(kv, &format!("factor.{}.", factors.len()))?);
            }
            if factors.is_empty() {
                return Err(Error::Config("per_coordinate needs factor.0.* keys".into()));
            }
            AlgorithmConfig::PerCoordinate(factors)
        }
        name => {
            kv.map.insert("algorithm".into(), name.into());
            AlgorithmConfig::Single(learner(kv, "")?)
        }
    };
    let set = algorithm.set()?;
    let dim = set.dim();

    let seed = kv.int("seed")?.unwrap_or(0);
    let scale_factor = kv.num("scale_factor")?.unwrap_or(1.0);
    let comparators = match kv.take("comparators") {
        Some(v) => v.split(';').map(|p| parse_list("comparators", p)).collect::<Result<_>>()?,
        None => vec![],
    };
    let output = kv.take("output").map(|p| base_dir.join(p));
    let rounds_key: Option<usize> = kv.int("rounds")?;

    let (adversary, rounds) = match kv.require("adversary")?.as_str() {
        "replay" => {
            let path = base_dir.join(kv.require("loss_file")?);
            let losses = io::read_losses(&path)?;
            let t = rounds_key.unwrap_or(losses.len());
            (AdversaryKind::Replay(losses), t)
        }
        "gaussian" => {
            let rounds = rounds_key.ok_or_else(|| Error::Config("missing key `rounds`".into()))?;
            let sigma = kv.num("sigma")?.unwrap_or(1.0);
            (AdversaryKind::RandomGaussian { dim, sigma, rounds }, rounds)
        }
        "spiky" => {
            let rounds = rounds_key.ok_or_else(|| Error::Config("missing key `rounds`".into()))?;
            let spike_magnitude = kv.num("spike_magnitude")?.unwrap_or(1e6);
            let spike_round = kv.int("spike_round")?.unwrap_or(rounds.div_ceil(2));
            (AdversaryKind::RandomSpiky { dim, rounds, spike_magnitude, spike_round }, rounds)
        }
        "lower_bound" => {
            if matches!(set.kind(), SetKind::Product(_)) {
                return Err(Error::Config("lower_bound adversary needs a single (non-product) set".into()));
            }
            let norms = match kv.vec("norms")? {
                Some(n) => n,
                None => {
                    let rounds = rounds_key.ok_or_else(|| Error::Config("missing key `rounds` or `norms`".into()))?;
                    vec![1.0; rounds]
                }
            };
            let t = rounds_key.unwrap_or(norms.len());
            (AdversaryKind::LowerBound { set, norms }, t)
        }
        other => return Err(Error::Config(format!("unknown adversary `{other}`"))),
    };

    Ok(ExperimentConfig { algorithm, adversary, rounds, seed, scale_factor, comparators, output })
}

fn learner(kv: &mut Entries, prefix: &str) -> Result<LearnerConfig> {
    let key = |k: &str| format!("{prefix}{k}");
    let algorithm = match kv.require(&key("algorithm"))?.as_str() {
        "adaftrl" => Algorithm::AdaFtrl,
        "solo" => Algorithm::Solo,
        "fixed_eta" => {
            let eta = kv.num(&key("eta"))?.ok_or_else(|| Error::Config(format!("missing key `{}`", key("eta"))))?;
            Algorithm::FixedEta { eta }
        }
        other => return Err(Error::Config(format!("unknown algorithm `{other}`"))),
    };
    let set = decision_set(kv, prefix)?;
    let regularizer = match kv.take(&key("regularizer")).as_deref() {
        Some("entropy") => {
            if !matches!(set.kind(), SetKind::Simplex { .. }) {
                return Err(Error::Config("entropy regularizer requires set = simplex".into()));
            }
            RegularizerChoice::Entropy
        }
        Some("half_sq_dist") | Some("quadratic") | None => {
            let center = match kv.vec(&key("reg_center"))? {
                Some(c) => c,
                None => default_center(&set),
            };
            RegularizerChoice::HalfSqDist { center }
        }
        Some(other) => return Err(Error::Config(format!("unknown regularizer `{other}`"))),
    };
    let scale = match kv.take(&key("scale")).as_deref() {
        None => ScalePolicy::Explicit(1.0),
        Some("corollary1") => ScalePolicy::Corollary1,
        Some("corollary2") => ScalePolicy::Corollary2,
        Some(v) => ScalePolicy::Explicit(parse_f64(&key("scale"), v)?),
    };
    Ok(LearnerConfig { algorithm, set, regularizer, scale })
}

fn decision_set(kv: &mut Entries, prefix: &str) -> Result<DecisionSet> {
    let key = |k: &str| format!("{prefix}{k}");
    let kind = kv.require(&key("set"))?;
    let dim: Option<usize> = kv.int(&key("dim"))?;
    let need_dim = || dim.ok_or_else(|| Error::Config(format!("missing key `{}`", key("dim"))));
    let set = match kind.as_str() {
        "simplex" => DecisionSet::simplex(need_dim()?),
        "l2_ball" => {
            let radius = kv.num(&key("radius"))?.unwrap_or(1.0);
            let center = match kv.vec(&key("center"))? {
                Some(c) => c,
                None => vec![0.0; need_dim()?],
            };
            DecisionSet::l2_ball(center, radius)
        }
        "box" => {
            let lower = kv.vec(&key("lower"))?.ok_or_else(|| Error::Config(format!("missing key `{}`", key("lower"))))?;
            let upper = kv.vec(&key("upper"))?.ok_or_else(|| Error::Config(format!("missing key `{}`", key("upper"))))?;
            DecisionSet::boxed(lower, upper)
        }
        "full_space" => DecisionSet::full_space(need_dim()?),
        other => return Err(Error::Config(format!("unknown set `{other}`"))),
    }
    .map_err(|e| Error::Config(e.to_string()))?;
    if let Some(d) = dim {
        if d != set.dim() {
            return Err(Error::Config(format!("`{}` = {d} disagrees with the set's dimension {}", key("dim"), set.dim())));
        }
    }
    Ok(match kv.take(&key("norm")) {
        Some(n) => set.with_norm(Norm::parse(&n).ok_or_else(|| Error::Config(format!("unknown norm `{n}`")))?),
        None => set,
    })
}

/// Parses a generator spec `kind:key=value;key=value`, e.g.
/// `gaussian:dim=3;rounds=100;sigma=2;seed=7` or
/// `lower_bound:set=simplex;dim=2;rounds=32;seed=1`. The seed is used as is
/// (no offset).
pub fn parse_adversary_spec(spec: &str) -> Result<AdversarySpec> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut map = BTreeMap::new();
    for part in rest.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("adversary spec: expected key=value, got `{part}`")))?;
        if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Config(format!("adversary spec: duplicate key `{}`", k.trim())));
        }
    }
    let mut kv = Entries { map };
    let seed = kv.int("seed")?.unwrap_or(0);
    let need = |kv: &mut Entries, key: &str| -> Result<usize> {
        kv.int(key)?.ok_or_else(|| Error::Config(format!("adversary spec: missing `{key}`")))
    };
    let kind = match kind.trim() {
        "gaussian" => {
            let (dim, rounds) = (need(&mut kv, "dim")?, need(&mut kv, "rounds")?);
            AdversaryKind::RandomGaussian { dim, rounds, sigma: kv.num("sigma")?.unwrap_or(1.0) }
        }
        "spiky" => {
            let (dim, rounds) = (need(&mut kv, "dim")?, need(&mut kv, "rounds")?);
            let spike_magnitude = kv.num("spike_magnitude")?.unwrap_or(1e6);
            let spike_round = kv.int("spike_round")?.unwrap_or(rounds.div_ceil(2));
            AdversaryKind::RandomSpiky { dim, rounds, spike_magnitude, spike_round }
        }
        "lower_bound" => {
            let rounds: Option<usize> = kv.int("rounds")?;
            let set = decision_set(&mut kv, "")?;
            let norms = match (kv.vec("norms")?, rounds) {
                (Some(n), _) => n,
                (None, Some(t)) => vec![1.0; t],
                (None, None) => return Err(Error::Config("adversary spec: need `rounds` or `norms`".into())),
            };
            AdversaryKind::LowerBound { set, norms }
        }
        other => return Err(Error::Config(format!("adversary spec: unknown kind `{other}`"))),
    };
    kv.finish()?;
    Ok(AdversarySpec::new(kind, seed))
}

/// Default center of a quadratic regularizer: the natural midpoint of the set.
fn default_center(set: &DecisionSet) -> Vec<f64> {
    match set.kind() {
        SetKind::Simplex { dim } => vec![1.0 / *dim as f64; *dim],
        SetKind::L2Ball { center, .. } => center.clone(),
        SetKind::Box { lower, upper } => lower.iter().zip(upper).map(|(l, u)| 0.5 * (l + u)).collect(),
        SetKind::FullSpace { dim } => vec![0.0; *dim],
        SetKind::Product(fs) => fs.iter().flat_map(default_center).collect(),
    }
}
