//! FTRL with a varying multiplier on a fixed regularizer.
//!
//! Round `t` predicts `argmin_{w in K} <L_{t-1}, w> + m_t R(w)`, which is the
//! conjugate gradient of `m_t R` at `-L_{t-1}`. The schemes differ only in how
//! the multiplier `m_t` is built from past losses:
//!
//! * AdaFTRL: `m_t = Delta_{t-1}`, the running sum of scaled conjugate Bregman
//!   divergences between consecutive cumulative losses.
//! * SOLO FTRL: `m_t = sqrt(sum_{s<t} ||l_s||_*^2)`.
//! * FixedEta: `m_t = 1 / eta`, a constant (not scale-free).
//!
//! A zero multiplier means "follow the leader" with ties broken by the
//! regularizer; see [`crate::geometry::tie_broken_linear_minimizer`].

use crate::error::{Error, Result};
use crate::geometry::DecisionSet;
use crate::regularizers::Regularizer;
use crate::vecops;

/// Relative tolerance for prediction equality in [`scale_invariance_check`].
pub const SCALE_INVARIANCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    AdaFtrl { delta: f64 },
    Solo { sum_sq: f64 },
    FixedEta { eta: f64 },
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::AdaFtrl { .. } => "adaftrl",
            Scheme::Solo { .. } => "solo",
            Scheme::FixedEta { .. } => "fixed_eta",
        }
    }
}

/// Anything that plays the online linear optimization protocol.
pub trait Learner {
    fn dim(&self) -> usize;
    fn predict(&self) -> Result<Vec<f64>>;
    fn observe(&mut self, loss: &[f64]) -> Result<()>;
    /// Scheme-specific scalar after the last observed round (`Delta_t`,
    /// `sqrt(sum_sq)`, or `1/eta`).
    fn scheme_scalar(&self) -> f64;
    /// Whether `scheme_scalar` is positively homogeneous of degree one in the
    /// losses.
    fn homogeneous_scalar(&self) -> bool;
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerState {
    regularizer: Regularizer,
    cumulative_loss: Vec<f64>,
    round: usize,
    scheme: Scheme,
}

impl LearnerState {
    /// AdaFTRL. The decision set must be bounded.
    pub fn adaftrl(regularizer: Regularizer) -> Result<Self> {
        // bounded set and bounded regularizer
        regularizer.sup_value()?;
        Ok(Self::with_scheme(regularizer, Scheme::AdaFtrl { delta: 0.0 }))
    }

    pub fn solo(regularizer: Regularizer) -> Self {
        Self::with_scheme(regularizer, Scheme::Solo { sum_sq: 0.0 })
    }

    pub fn fixed_eta(regularizer: Regularizer, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidArgument(format!("eta must be positive, got {eta}")));
        }
        Ok(Self::with_scheme(regularizer, Scheme::FixedEta { eta }))
    }

    fn with_scheme(regularizer: Regularizer, scheme: Scheme) -> Self {
        let d = regularizer.dim();
        LearnerState { regularizer, cumulative_loss: vec![0.0; d], round: 0, scheme }
    }

    pub fn regularizer(&self) -> &Regularizer {
        &self.regularizer
    }

    pub fn set(&self) -> &DecisionSet {
        self.regularizer.set()
    }

    pub fn cumulative_loss(&self) -> &[f64] {
        &self.cumulative_loss
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Multiplier of `R` used for the next prediction.
    pub fn multiplier(&self) -> f64 {
        match self.scheme {
            Scheme::AdaFtrl { delta } => delta,
            Scheme::Solo { sum_sq } => sum_sq.sqrt(),
            Scheme::FixedEta { eta } => 1.0 / eta,
        }
    }
}

impl Learner for LearnerState {
    fn dim(&self) -> usize {
        self.regularizer.dim()
    }

    fn predict(&self) -> Result<Vec<f64>> {
        let m = self.multiplier();
        let neg_l = vecops::neg(&self.cumulative_loss);
        if m == 0.0 && !self.set().is_bounded() && neg_l.iter().any(|&x| x != 0.0) {
            return Err(Error::UnboundedPrediction);
        }
        self.regularizer.scaled_conjugate_grad(m, &neg_l)
    }

    fn observe(&mut self, loss: &[f64]) -> Result<()> {
        vecops::check_dim(self.dim(), loss)?;
        if !vecops::all_finite(loss) {
            return Err(Error::NonFinite("loss vector"));
        }
        let prev = vecops::neg(&self.cumulative_loss);
        vecops::add_assign(&mut self.cumulative_loss, loss);
        self.round += 1;
        match &mut self.scheme {
            Scheme::AdaFtrl { delta } => {
                let next = vecops::neg(&self.cumulative_loss);
                *delta += self.regularizer.scaled_bregman(*delta, &next, &prev)?;
            }
            Scheme::Solo { sum_sq } => {
                let n = self.regularizer.set().norms().dual_norm(loss);
                *sum_sq += n * n;
            }
            Scheme::FixedEta { .. } => {}
        }
        Ok(())
    }

    fn scheme_scalar(&self) -> f64 {
        self.multiplier()
    }

    fn homogeneous_scalar(&self) -> bool {
        !matches!(self.scheme, Scheme::FixedEta { .. })
    }
}

/// Independent learners on the factors of a Cartesian product.
#[derive(Debug, Clone, PartialEq)]
pub struct PerCoordinateLearner {
    factors: Vec<LearnerState>,
}

impl PerCoordinateLearner {
    pub fn new(factors: Vec<LearnerState>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("per-coordinate learner needs at least one factor".into()));
        }
        Ok(PerCoordinateLearner { factors })
    }

    pub fn factors(&self) -> &[LearnerState] {
        &self.factors
    }

    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.factors
            .iter()
            .map(|f| {
                let r = start..start + f.dim();
                start = r.end;
                r
            })
            .collect()
    }

    pub fn product_set(&self) -> Result<DecisionSet> {
        DecisionSet::product(self.factors.iter().map(|f| f.set().clone()).collect())
    }
}

impl Learner for PerCoordinateLearner {
    fn dim(&self) -> usize {
        self.factors.iter().map(Learner::dim).sum()
    }

    fn predict(&self) -> Result<Vec<f64>> {
        let mut w = Vec::with_capacity(self.dim());
        for f in &self.factors {
            w.extend(f.predict()?);
        }
        Ok(w)
    }

    fn observe(&mut self, loss: &[f64]) -> Result<()> {
        vecops::check_dim(self.dim(), loss)?;
        let ranges = self.ranges();
        for (f, r) in self.factors.iter_mut().zip(ranges) {
            f.observe(&loss[r])?;
        }
        Ok(())
    }

    fn scheme_scalar(&self) -> f64 {
        self.factors.iter().map(Learner::scheme_scalar).sum()
    }

    fn homogeneous_scalar(&self) -> bool {
        self.factors.iter().all(Learner::homogeneous_scalar)
    }
}

/// One round of the protocol as seen by the learner.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub t: usize,
    pub prediction: Vec<f64>,
    pub loss: Vec<f64>,
    pub inst_loss: f64,
    /// Multiplier used for this round's prediction (`m_t`).
    pub multiplier: f64,
    /// Scheme scalar after observing this round's loss.
    pub scheme_scalar: f64,
    pub cum_loss: f64,
}

/// Alternate predict/observe over `losses`.
pub fn run<L: Learner>(learner: &mut L, losses: &[Vec<f64>]) -> Result<Vec<Step>> {
    let mut steps = Vec::with_capacity(losses.len());
    let mut cum_loss = 0.0;
    for (i, loss) in losses.iter().enumerate() {
        vecops::check_dim(learner.dim(), loss)?;
        let multiplier = learner.scheme_scalar();
        let prediction = learner.predict()?;
        let inst_loss = vecops::dot(loss, &prediction);
        learner.observe(loss)?;
        cum_loss += inst_loss;
        steps.push(Step {
            t: i + 1,
            prediction,
            loss: loss.clone(),
            inst_loss,
            multiplier,
            scheme_scalar: learner.scheme_scalar(),
            cum_loss,
        });
    }
    Ok(steps)
}

fn rel_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let diff = vecops::linf(&vecops::sub(a, b));
    diff <= tol * vecops::linf(a).max(vecops::linf(b))
}

fn scalar_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Runs fresh copies of `learner` on `losses` and on `c * losses`; true when
/// every prediction pair agrees to relative [`SCALE_INVARIANCE_TOL`] and, for
/// homogeneous schemes, the scheme scalar scales by exactly `c` (same
/// tolerance).
pub fn scale_invariance_check<L: Learner + Clone>(learner: &L, losses: &[Vec<f64>], c: f64) -> Result<bool> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale factor must be positive, got {c}")));
    }
    let scaled: Vec<Vec<f64>> = losses.iter().map(|l| vecops::scaled(l, c)).collect();
    let base = run(&mut learner.clone(), losses)?;
    let other = run(&mut learner.clone(), &scaled)?;
    let homogeneous = learner.homogeneous_scalar();
    Ok(base.iter().zip(&other).all(|(a, b)| {
        rel_close(&a.prediction, &b.prediction, SCALE_INVARIANCE_TOL)
            && (!homogeneous || scalar_close(c * a.scheme_scalar, b.scheme_scalar, SCALE_INVARIANCE_TOL))
    }))
}
