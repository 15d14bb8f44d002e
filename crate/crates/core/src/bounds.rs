//! Regret-bound right-hand sides and proof-side inequalities.
//!
//! Everything here is computed from loss norms and regularizer constants only,
//! never from a learner's internal state, so a bound evaluated next to a trace
//! is an independent check of that trace.

use crate::error::{Error, Result};
use crate::regularizers::Regularizer;
use crate::vecops;

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;
/// Leading constant of the AdaFTRL corollary bound.
pub const ADAFTRL_COROLLARY_CONST: f64 = 5.3;
/// Multiplier `c` in `R = c f / sup f` optimizing the AdaFTRL corollary.
pub const ADAFTRL_COROLLARY_SCALE: f64 = 1.0 / 16.0;
/// Leading constant of the SOLO FTRL corollary bound.
pub const SOLO_COROLLARY_CONST: f64 = 13.3;
/// Coefficient of `1/lambda` in the SOLO FTRL bound.
pub const SOLO_LAMBDA_CONST: f64 = 2.75;
/// Constant of the useful inequality (both terms).
pub const USEFUL_CONST: f64 = 3.5;

/// Multiplier `c` in `R = c f / sqrt(sup f)` optimizing the SOLO corollary.
pub fn solo_corollary_scale() -> f64 {
    SOLO_LAMBDA_CONST.sqrt()
}

/// `1 / sqrt(8)`, the lower-bound factor on the diameter.
pub fn lower_bound_factor() -> f64 {
    1.0 / 8f64.sqrt()
}

fn max_norm(norms: &[f64]) -> f64 {
    norms.iter().cloned().fold(0.0, f64::max)
}

/// Relative slack a passing report may have below zero.
pub const REPORT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub observed: f64,
    pub bound: f64,
    pub slack: f64,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        BoundReport { name: name.into(), observed, bound, slack: bound - observed }
    }

    pub fn passes(&self) -> bool {
        self.slack >= -REPORT_TOL * self.bound.abs().max(1.0)
    }
}

/// Running summary of a loss-norm sequence: count, max, and an
/// overflow-safe root sum of squares.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NormStats {
    count: usize,
    max: f64,
    // sum of (a_t / max)^2
    scaled_sum_sq: f64,
}

impl NormStats {
    pub fn from_norms(norms: &[f64]) -> Self {
        let mut s = NormStats::default();
        for &a in norms {
            s.push(a);
        }
        s
    }

    pub fn push(&mut self, a: f64) {
        self.count += 1;
        if a > self.max {
            let r = self.max / a;
            self.scaled_sum_sq = self.scaled_sum_sq * r * r + 1.0;
            self.max = a;
        } else if a > 0.0 {
            let r = a / self.max;
            self.scaled_sum_sq += r * r;
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn root_sum_sq(&self) -> f64 {
        self.max * self.scaled_sum_sq.sqrt()
    }
}

/// `sqrt(sum_t a_t^2)`, overflow-safe.
pub fn root_sum_sq(norms: &[f64]) -> f64 {
    NormStats::from_norms(norms).root_sum_sq()
}

fn check_norms(norms: &[f64]) -> Result<()> {
    if norms.iter().any(|&a| !(a >= 0.0) || !a.is_finite()) {
        return Err(Error::InvalidArgument("loss norms must be finite and non-negative".into()));
    }
    Ok(())
}

/// AdaFTRL regret bound at comparator `u` with `R(u) = r_of_u`:
/// `sqrt(3) max{D, 1/sqrt(2 lambda)} sqrt(sum ||l_t||^2) (1 + R(u))`.
pub fn adaftrl_bound(diameter: f64, lambda: f64, r_of_u: f64, loss_norms: &[f64]) -> Result<f64> {
    check_norms(loss_norms)?;
    adaftrl_bound_stats(diameter, lambda, r_of_u, &NormStats::from_norms(loss_norms))
}

pub fn adaftrl_bound_stats(diameter: f64, lambda: f64, r_of_u: f64, stats: &NormStats) -> Result<f64> {
    if !diameter.is_finite() {
        return Err(Error::UnboundedSet);
    }
    Ok(recurrence_solution_bound_stats(diameter, lambda, stats) * (1.0 + r_of_u))
}

fn check_sup(sup_f: f64) -> Result<()> {
    if !(sup_f > 0.0 && sup_f.is_finite()) {
        return Err(Error::InvalidArgument(format!("sup f must be positive and finite, got {sup_f}")));
    }
    Ok(())
}

/// `5.3 sqrt(S sum ||l_t||^2)` for `R = f / (16 S)`, `S = sup f`.
pub fn adaftrl_corollary_bound(sup_f: f64, loss_norms: &[f64]) -> Result<f64> {
    check_norms(loss_norms)?;
    adaftrl_corollary_bound_stats(sup_f, &NormStats::from_norms(loss_norms))
}

pub fn adaftrl_corollary_bound_stats(sup_f: f64, stats: &NormStats) -> Result<f64> {
    check_sup(sup_f)?;
    Ok(ADAFTRL_COROLLARY_CONST * sup_f.sqrt() * stats.root_sum_sq())
}

/// SOLO FTRL regret bound at comparator `u` after `rounds` rounds:
/// `(R(u) + 2.75/lambda) sqrt(sum ||l_t||^2) + 3.5 min{sqrt(T-1)/lambda, D} max_t ||l_t||`.
pub fn solo_bound(diameter: f64, lambda: f64, r_of_u: f64, loss_norms: &[f64], rounds: usize) -> f64 {
    solo_bound_parts(diameter, lambda, r_of_u, root_sum_sq(loss_norms), max_norm(loss_norms), rounds)
}

pub fn solo_bound_stats(diameter: f64, lambda: f64, r_of_u: f64, stats: &NormStats) -> f64 {
    solo_bound_parts(diameter, lambda, r_of_u, stats.root_sum_sq(), stats.max(), stats.count())
}

fn solo_bound_parts(diameter: f64, lambda: f64, r_of_u: f64, rss: f64, max: f64, rounds: usize) -> f64 {
    if rounds == 0 {
        return 0.0;
    }
    let h = (((rounds - 1) as f64).sqrt() / lambda).min(diameter);
    (r_of_u + SOLO_LAMBDA_CONST / lambda) * rss + USEFUL_CONST * h * max
}

/// `13.3 sqrt(S sum ||l_t||^2)` for `R = f sqrt(2.75) / sqrt(S)`.
pub fn solo_corollary_bound(sup_f: f64, loss_norms: &[f64]) -> Result<f64> {
    check_norms(loss_norms)?;
    solo_corollary_bound_stats(sup_f, &NormStats::from_norms(loss_norms))
}

pub fn solo_corollary_bound_stats(sup_f: f64, stats: &NormStats) -> Result<f64> {
    check_sup(sup_f)?;
    Ok(SOLO_COROLLARY_CONST * sup_f.sqrt() * stats.root_sum_sq())
}

/// `D / sqrt(8) * sqrt(sum a_t^2)`.
pub fn lower_bound_value(diameter: f64, loss_norms: &[f64]) -> f64 {
    diameter * lower_bound_factor() * root_sum_sq(loss_norms)
}

/// Per-round recurrence bound on AdaFTRL's multiplier:
/// `Delta_{t-1} + min{D ||l_t||, ||l_t||^2 / (2 lambda Delta_{t-1})}`.
pub fn recurrence_step_bound(delta_prev: f64, diameter: f64, lambda: f64, loss_norm: f64) -> f64 {
    let smooth = if delta_prev > 0.0 {
        loss_norm * loss_norm / (2.0 * lambda * delta_prev)
    } else {
        f64::INFINITY
    };
    delta_prev + (diameter * loss_norm).min(smooth)
}

/// Closed-form solution of the recurrence:
/// `sqrt(3) max{D, 1/sqrt(2 lambda)} sqrt(sum ||l_t||^2)`.
pub fn recurrence_solution_bound(diameter: f64, lambda: f64, loss_norms: &[f64]) -> f64 {
    recurrence_solution_bound_stats(diameter, lambda, &NormStats::from_norms(loss_norms))
}

pub fn recurrence_solution_bound_stats(diameter: f64, lambda: f64, stats: &NormStats) -> f64 {
    SQRT_3 * diameter.max(1.0 / (2.0 * lambda).sqrt()) * stats.root_sum_sq()
}

/// Left side of the useful inequality,
/// `sum_t min{a_t^2 / sqrt(sum_{s<t} a_s^2), C a_t}`.
///
/// An empty prefix sum makes the first ratio `+inf`, so the minimum takes the
/// `C a_t` branch; evaluating it naively gives `0/0 = NaN` when `a_t = 0`.
pub fn useful_inequality_lhs(c: f64, a: &[f64]) -> f64 {
    let mut prefix_sq = 0.0_f64;
    let mut lhs = 0.0;
    for &at in a {
        let linear = c * at;
        let term = if prefix_sq > 0.0 { (at * at / prefix_sq.sqrt()).min(linear) } else { linear };
        lhs += term;
        prefix_sq += at * at;
    }
    lhs
}

pub fn useful_inequality_check(c: f64, a: &[f64]) -> BoundReport {
    let rhs = USEFUL_CONST * c * max_norm(a) + USEFUL_CONST * root_sum_sq(a);
    BoundReport::new("useful_inequality", useful_inequality_lhs(c, a), rhs)
}

/// `sum_t a_t / sqrt(sum_{s<=t} a_s) <= 2 sqrt(sum_t a_t)` for `a_1 > 0`.
pub fn sqrt_sum_check(a: &[f64]) -> Result<BoundReport> {
    match a.first() {
        Some(&a1) if a1 > 0.0 => {}
        _ => return Err(Error::InvalidArgument("sqrt-sum inequality needs a_1 > 0".into())),
    }
    if a.iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidArgument("sqrt-sum inequality needs a_t >= 0".into()));
    }
    let mut prefix = 0.0;
    let mut lhs = 0.0;
    for &at in a {
        prefix += at;
        lhs += at / prefix.sqrt();
    }
    Ok(BoundReport::new("sqrt_sum", lhs, 2.0 * prefix.sqrt()))
}

/// Components of the generic FTRL regret bound
/// `R_{T+1}(u) + R_1*(0) + sum_t [B_{R_t*}(-L_t, -L_{t-1}) - R_t*(-L_t) + R_{t+1}*(-L_t)]`
/// with `R_t = m_t R`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Rhs {
    pub final_regularizer: f64,
    pub initial_conjugate: f64,
    /// `sum_t B_{R_t*}(-L_t, -L_{t-1})`; `+inf` when a zero multiplier meets an
    /// unbounded set (the bracketed sum stays finite).
    pub bregman_sum: f64,
    /// `sum_t` of the full bracketed term.
    pub term_sum: f64,
    pub total: f64,
}

/// Numeric evaluation of the generic FTRL bound for the multiplier schedule
/// `multipliers = [m_1, ..., m_{T+1}]` actually used on `losses`.
///
/// Each conjugate Bregman term is evaluated from its definition (conjugate
/// values and the conjugate gradient), not through
/// [`Regularizer::bregman_conjugate`].
pub fn lemma1_rhs(reg: &Regularizer, multipliers: &[f64], losses: &[Vec<f64>], u: &[f64]) -> Result<Lemma1Rhs> {
    if multipliers.len() != losses.len() + 1 {
        return Err(Error::InvalidArgument(format!(
            "need {} multipliers for {} rounds, got {}",
            losses.len() + 1,
            losses.len(),
            multipliers.len()
        )));
    }
    let d = reg.dim();
    let final_regularizer = multipliers[losses.len()] * reg.value(u)?;
    let initial_conjugate = reg.scaled_conjugate(multipliers[0], &vec![0.0; d])?;

    let mut cum = vec![0.0; d];
    let mut bregman_sum = 0.0;
    let mut term_sum = 0.0;
    for (t, loss) in losses.iter().enumerate() {
        vecops::check_dim(d, loss)?;
        let (bregman, term) = lemma1_term(reg, multipliers[t], multipliers[t + 1], &cum, loss)?;
        bregman_sum += bregman;
        term_sum += term;
        vecops::add_assign(&mut cum, loss);
    }
    Ok(Lemma1Rhs {
        final_regularizer,
        initial_conjugate,
        bregman_sum,
        term_sum,
        total: final_regularizer + initial_conjugate + term_sum,
    })
}

/// Round-`t` contribution to the generic bound: `(B_{R_t*}(x, y), B_{R_t*}(x, y) - R_t*(x) + R_{t+1}*(x))`
/// with `y = -L_{t-1}` (`prev_cum = L_{t-1}`) and `x = -L_t`.
pub fn lemma1_term(reg: &Regularizer, m_t: f64, m_next: f64, prev_cum: &[f64], loss: &[f64]) -> Result<(f64, f64)> {
    let y = vecops::neg(prev_cum);
    let x: Vec<f64> = prev_cum.iter().zip(loss).map(|(a, b)| -(a + b)).collect();
    let conj_y = reg.scaled_conjugate(m_t, &y)?;
    let grad_y = reg.scaled_conjugate_grad(m_t, &y)?;
    let conj_x = reg.scaled_conjugate(m_t, &x)?;
    let conj_next_x = reg.scaled_conjugate(m_next, &x)?;
    // -<x - y, grad_y> = <l_t, grad_y>
    let linear = vecops::dot(loss, &grad_y);
    let bregman = if conj_x.is_finite() { conj_x - conj_y + linear } else { f64::INFINITY };
    // B - R_t*(x) collapses to -R_t*(y) + <l_t, grad_y>
    Ok((bregman, -conj_y + linear + conj_next_x))
}
