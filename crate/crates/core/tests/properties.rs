//! Geometry invariants on random sets and points.

use proptest::prelude::*;
use scalefree::geometry::{DecisionSet, Norm};
use scalefree::sampling::{self, Family};
use scalefree::vecops;

fn families() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::SimplexEntropy),
        Just(Family::SimplexQuadratic),
        Just(Family::BallQuadratic),
        Just(Family::BoxQuadratic),
    ]
}

fn set_for(fam: Family, seed: u64) -> (DecisionSet, sampling::TrialRng) {
    let mut rng = sampling::trial_rng(seed, 0);
    let reg = sampling::random_regularizer(&mut rng, fam);
    (reg.set().clone(), rng)
}

proptest! {
    #[test]
    fn holder(w in prop::collection::vec(-1e3f64..1e3, 1..6), seed in any::<u64>()) {
        let mut rng = sampling::trial_rng(seed, 1);
        let l = sampling::gaussian_vec(&mut rng, w.len(), 10.0);
        for n in [Norm::L1, Norm::L2, Norm::Linf] {
            let lhs = vecops::dot(&l, &w).abs();
            let rhs = n.eval(&w) * n.dual().eval(&l);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn linear_minimizer_is_optimal(fam in families(), seed in any::<u64>()) {
        let (set, mut rng) = set_for(fam, seed);
        let l = sampling::gaussian_vec(&mut rng, set.dim(), 1.0);
        let u = set.linear_minimizer(&l).unwrap();
        prop_assert!(set.contains(&u));
        for _ in 0..20 {
            let w = sampling::random_feasible(&mut rng, &set);
            prop_assert!(vecops::dot(&l, &u) <= vecops::dot(&l, &w) + 1e-9);
        }
    }

    #[test]
    fn projection_is_feasible_idempotent_and_nonexpansive(fam in families(), seed in any::<u64>()) {
        let (set, mut rng) = set_for(fam, seed);
        let p = sampling::gaussian_vec(&mut rng, set.dim(), 3.0);
        let q = sampling::gaussian_vec(&mut rng, set.dim(), 3.0);
        let pp = set.project(&p).unwrap();
        let pq = set.project(&q).unwrap();
        prop_assert!(set.contains(&pp));
        let again = set.project(&pp).unwrap();
        prop_assert!(vecops::l2(&vecops::sub(&again, &pp)) <= 1e-12);
        prop_assert!(vecops::l2(&vecops::sub(&pp, &pq)) <= vecops::l2(&vecops::sub(&p, &q)) * (1.0 + 1e-12) + 1e-12);
        // variational inequality: <p - P(p), w - P(p)> <= 0 for w in K
        let w = sampling::random_feasible(&mut rng, &set);
        prop_assert!(vecops::dot(&vecops::sub(&p, &pp), &vecops::sub(&w, &pp)) <= 1e-9);
    }

    #[test]
    fn diameter_dominates_pairwise_distances(fam in families(), seed in any::<u64>()) {
        let (set, mut rng) = set_for(fam, seed);
        let d = set.diameter();
        for _ in 0..20 {
            let a = sampling::random_feasible(&mut rng, &set);
            let b = sampling::random_feasible(&mut rng, &set);
            prop_assert!(set.primal_norm(&vecops::sub(&a, &b)).unwrap() <= d * (1.0 + 1e-12));
        }
    }
}
