//! Loss-sequence generators.
//!
//! All randomness is counter-based: the draw for round `t` (or trial `k`) is
//! a pure function of `(seed, t)`, so sequences are random-access and
//! parallel trials never share a stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{DecisionSet, Norm, SetKind};
use crate::par::{self, Execution};
use crate::vecops;

#[derive(Debug, Clone, PartialEq)]
pub enum AdversaryKind {
    Replay(Vec<Vec<f64>>),
    RandomGaussian { dim: usize, sigma: f64, rounds: usize },
    /// Standard Gaussian losses except one round scaled by `spike_magnitude`
    /// (`spike_round` is 1-based).
    RandomSpiky { dim: usize, rounds: usize, spike_magnitude: f64, spike_round: usize },
    /// `l_t = Z_t a_t l` with Rademacher `Z_t` and a unit-dual-norm direction
    /// `l` achieving the diameter.
    LowerBound { set: DecisionSet, norms: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdversarySpec {
    pub kind: AdversaryKind,
    pub seed: u64,
}

impl AdversarySpec {
    pub fn new(kind: AdversaryKind, seed: u64) -> Self {
        AdversarySpec { kind, seed }
    }
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream key for `(seed, counter)`.
pub fn mix(seed: u64, counter: u64) -> u64 {
    splitmix64(seed ^ splitmix64(counter.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// Rademacher sign for round `t` of stream `seed`.
pub fn rademacher(seed: u64, t: u64) -> f64 {
    if mix(seed, t) >> 63 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn round_rng(seed: u64, t: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, t))
}

fn gaussian_vec(seed: u64, t: u64, dim: usize, sigma: f64) -> Vec<f64> {
    let mut rng = round_rng(seed, t);
    (0..dim)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sigma * z
        })
        .collect()
}

/// A diameter-achieving pair `(x, y)` of a bounded set and a unit-dual-norm
/// direction with `<direction, x - y> = D`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiameterPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub direction: Vec<f64>,
}

pub fn diameter_pair(set: &DecisionSet) -> Result<DiameterPair> {
    let d = set.dim();
    let norm = set.norms().primal;
    let unit = |i: usize| {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        e
    };
    match set.kind() {
        SetKind::Simplex { .. } => {
            if d == 1 {
                return Ok(DiameterPair { x: unit(0), y: unit(0), direction: unit(0) });
            }
            let (x, y) = (unit(0), unit(1));
            let raw = vecops::sub(&x, &y);
            // e1 - e2 has Linf norm 1, L2 norm sqrt 2, L1 norm 2
            let direction = vecops::scaled(&raw, 1.0 / norm.dual().eval(&raw));
            Ok(DiameterPair { x, y, direction })
        }
        SetKind::L2Ball { center, radius } => {
            let axis = match norm {
                Norm::L1 => vec![1.0 / (d as f64).sqrt(); d],
                Norm::L2 | Norm::Linf => unit(0),
            };
            let x: Vec<f64> = center.iter().zip(&axis).map(|(c, a)| c + radius * a).collect();
            let y: Vec<f64> = center.iter().zip(&axis).map(|(c, a)| c - radius * a).collect();
            let direction = match norm {
                Norm::L1 => vec![1.0; d],
                Norm::L2 | Norm::Linf => unit(0),
            };
            Ok(DiameterPair { x, y, direction })
        }
        SetKind::Box { lower, upper } => {
            let width = vecops::sub(upper, lower);
            let direction = match norm {
                Norm::L1 => vec![1.0; d],
                Norm::L2 => {
                    let n = vecops::l2(&width);
                    if n > 0.0 {
                        vecops::scaled(&width, 1.0 / n)
                    } else {
                        unit(0)
                    }
                }
                Norm::Linf => {
                    let i = (0..d).fold(0, |b, i| if width[i] > width[b] { i } else { b });
                    unit(i)
                }
            };
            Ok(DiameterPair { x: upper.clone(), y: lower.clone(), direction })
        }
        SetKind::FullSpace { .. } => Err(Error::UnboundedSet),
        SetKind::Product(_) => {
            Err(Error::InvalidArgument("lower-bound adversary is not defined for product sets".into()))
        }
    }
}

pub fn generate(spec: &AdversarySpec) -> Result<Vec<Vec<f64>>> {
    let seed = spec.seed;
    match &spec.kind {
        AdversaryKind::Replay(losses) => Ok(losses.clone()),
        AdversaryKind::RandomGaussian { dim, sigma, rounds } => {
            if !(*sigma >= 0.0 && sigma.is_finite()) {
                return Err(Error::InvalidArgument(format!("sigma must be non-negative, got {sigma}")));
            }
            Ok((0..*rounds).map(|t| gaussian_vec(seed, t as u64, *dim, *sigma)).collect())
        }
        AdversaryKind::RandomSpiky { dim, rounds, spike_magnitude, spike_round } => {
            if !(spike_magnitude.is_finite() && *spike_magnitude > 0.0) {
                return Err(Error::InvalidArgument("spike magnitude must be positive".into()));
            }
            Ok((0..*rounds)
                .map(|t| {
                    let s = if t + 1 == *spike_round { *spike_magnitude } else { 1.0 };
                    gaussian_vec(seed, t as u64, *dim, s)
                })
                .collect())
        }
        AdversaryKind::LowerBound { set, norms } => {
            if norms.iter().any(|&a| !(a >= 0.0) || !a.is_finite()) {
                return Err(Error::InvalidArgument("lower-bound norms must be finite and non-negative".into()));
            }
            let pair = diameter_pair(set)?;
            Ok(norms
                .iter()
                .enumerate()
                .map(|(t, &a)| vecops::scaled(&pair.direction, rademacher(seed, t as u64) * a))
                .collect())
        }
    }
}

pub fn scale_losses(losses: &[Vec<f64>], c: f64) -> Result<Vec<Vec<f64>>> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale factor must be positive, got {c}")));
    }
    Ok(losses.iter().map(|l| vecops::scaled(l, c)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KhinchinEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub trials: usize,
}

/// Monte Carlo estimate of `E |sum_t Z_t a_t|` over Rademacher signs.
pub fn khinchin_monte_carlo(a: &[f64], trials: usize, seed: u64) -> Result<KhinchinEstimate> {
    khinchin_monte_carlo_with(a, trials, seed, Execution::default())
}

pub fn khinchin_monte_carlo_with(a: &[f64], trials: usize, seed: u64, exec: Execution) -> Result<KhinchinEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let samples = par::map_trials(trials, exec, |k| {
        let stream = mix(seed, k as u64);
        a.iter().enumerate().map(|(t, &at)| rademacher(stream, t as u64) * at).sum::<f64>().abs()
    });
    let n = trials as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if trials > 1 {
        samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(KhinchinEstimate { mean, std_err: (var / n).sqrt(), trials })
}
