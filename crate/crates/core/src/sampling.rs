//! Random instances for verification suites, tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::adversaries::mix;
use crate::geometry::{DecisionSet, Norm, SetKind};
use crate::regularizers::{Regularizer, RegularizerKind};

pub type TrialRng = ChaCha8Rng;

/// Independent generator for trial `k` of stream `seed`.
pub fn trial_rng(seed: u64, k: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(mix(seed, k))
}

pub fn normal<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// `10^U(lo, hi)`.
pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo..hi))
}

pub fn gaussian_vec<R: Rng>(rng: &mut R, dim: usize, sigma: f64) -> Vec<f64> {
    (0..dim).map(|_| sigma * normal(rng)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    SimplexEntropy,
    SimplexQuadratic,
    BallQuadratic,
    BoxQuadratic,
    FullSpaceQuadratic,
}

impl Family {
    pub const BOUNDED: [Family; 4] =
        [Family::SimplexEntropy, Family::SimplexQuadratic, Family::BallQuadratic, Family::BoxQuadratic];
}

/// Unit-scale regularizer of the given family on a random set.
pub fn random_regularizer<R: Rng>(rng: &mut R, family: Family) -> Regularizer {
    let d = rng.gen_range(2..=5);
    let result = match family {
        Family::SimplexEntropy => Regularizer::entropy(d, 1.0),
        Family::SimplexQuadratic => {
            let set = DecisionSet::simplex(d).unwrap().with_norm(Norm::L2);
            let raw: Vec<f64> = (0..d).map(|_| Exp1.sample(rng)).collect();
            let s: f64 = raw.iter().sum();
            Regularizer::half_sq_dist(set, raw.iter().map(|x| x / s).collect(), 1.0)
        }
        Family::BallQuadratic => {
            let radius = log_uniform(rng, -0.5, 0.5);
            let center = gaussian_vec(rng, d, 1.0);
            let set = DecisionSet::l2_ball(center.clone(), radius).unwrap();
            // regularizer centered at a point of the ball
            let offset = gaussian_vec(rng, d, 0.3 * radius / (d as f64).sqrt());
            let z = set.project(&center.iter().zip(&offset).map(|(c, o)| c + o).collect::<Vec<_>>()).unwrap();
            Regularizer::half_sq_dist(set, z, 1.0)
        }
        Family::BoxQuadratic => {
            let lower = gaussian_vec(rng, d, 1.0);
            let upper: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(0.2..2.0)).collect();
            let z: Vec<f64> = lower.iter().zip(&upper).map(|(l, u)| rng.gen_range(*l..*u)).collect();
            let norm = if rng.gen_bool(0.5) { Norm::Linf } else { Norm::L2 };
            Regularizer::half_sq_dist(DecisionSet::boxed(lower, upper).unwrap().with_norm(norm), z, 1.0)
        }
        Family::FullSpaceQuadratic => {
            let z = gaussian_vec(rng, d, 1.0);
            Regularizer::half_sq_dist(DecisionSet::full_space(d).unwrap(), z, 1.0)
        }
    };
    result.expect("sampled parameters are valid")
}

/// A random point of `set`. Simplex samples include faces and vertices.
pub fn random_feasible<R: Rng>(rng: &mut R, set: &DecisionSet) -> Vec<f64> {
    match set.kind() {
        SetKind::Simplex { dim } => {
            let mut raw: Vec<f64> = (0..*dim).map(|_| Exp1.sample(rng)).collect();
            match rng.gen_range(0..10) {
                0 => {
                    let i = rng.gen_range(0..*dim);
                    raw.iter_mut().enumerate().for_each(|(j, x)| *x = if i == j { 1.0 } else { 0.0 });
                }
                1 if *dim > 1 => raw[rng.gen_range(0..*dim)] = 0.0,
                _ => {}
            }
            let s: f64 = raw.iter().sum();
            raw.into_iter().map(|x| x / s).collect()
        }
        SetKind::L2Ball { center, radius } => {
            let dir = gaussian_vec(rng, center.len(), 1.0);
            let n = crate::vecops::l2(&dir).max(1e-300);
            let r = radius * rng.gen::<f64>().sqrt();
            center.iter().zip(&dir).map(|(c, x)| c + r * x / n).collect()
        }
        SetKind::Box { lower, upper } => lower
            .iter()
            .zip(upper)
            .map(|(&l, &u)| match rng.gen_range(0..8) {
                0 => l,
                1 => u,
                _ => rng.gen_range(l..=u),
            })
            .collect(),
        SetKind::FullSpace { dim } => {
            let sigma = log_uniform(rng, -1.0, 1.0);
            gaussian_vec(rng, *dim, sigma)
        }
        SetKind::Product(fs) => fs.iter().flat_map(|f| random_feasible(rng, f)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossProfile {
    Gaussian,
    /// Each round's magnitude drawn log-uniformly over six decades, with
    /// occasional zero rounds.
    Mixed,
    /// Unit Gaussian rounds and a single round scaled by `10^6`.
    Spiky,
}

pub fn random_losses<R: Rng>(rng: &mut R, dim: usize, rounds: usize, profile: LossProfile) -> Vec<Vec<f64>> {
    let spike = if rounds > 0 { rng.gen_range(0..rounds) } else { 0 };
    (0..rounds)
        .map(|t| {
            let sigma = match profile {
                LossProfile::Gaussian => 1.0,
                LossProfile::Mixed => {
                    if rng.gen_range(0..20) == 0 {
                        0.0
                    } else {
                        log_uniform(rng, -3.0, 3.0)
                    }
                }
                LossProfile::Spiky => {
                    if t == spike {
                        1e6
                    } else {
                        1.0
                    }
                }
            };
            gaussian_vec(rng, dim, sigma)
        })
        .collect()
}

/// Center of a quadratic regularizer, if any.
pub fn quadratic_center(reg: &Regularizer) -> Option<&[f64]> {
    match reg.kind() {
        RegularizerKind::HalfSqDist { center } => Some(center),
        RegularizerKind::ShiftedNegEntropy => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_points_are_feasible() {
        let mut rng = trial_rng(1, 0);
        for k in 0..200 {
            for fam in [Family::SimplexEntropy, Family::SimplexQuadratic, Family::BallQuadratic, Family::BoxQuadratic] {
                let reg = random_regularizer(&mut rng, fam);
                let w = random_feasible(&mut rng, reg.set());
                assert!(reg.set().contains(&w), "{k} {fam:?} {w:?}");
                if let Some(z) = quadratic_center(&reg) {
                    assert!(reg.set().contains(z));
                }
            }
        }
    }

    #[test]
    fn trial_streams_are_reproducible() {
        let a: f64 = trial_rng(7, 3).gen();
        let b: f64 = trial_rng(7, 3).gen();
        let c: f64 = trial_rng(7, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
