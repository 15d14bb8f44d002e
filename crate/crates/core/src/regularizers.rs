//! Strongly convex regularizers with closed-form Fenchel-conjugate machinery.
//!
//! A [`Regularizer`] is a base function `f` bound to a decision set, times a
//! positive multiplier `c`. All conjugate quantities refer to the deployed
//! function `c f` restricted to the set (so the conjugate is finite
//! everywhere). Learners never solve an optimization problem numerically:
//! the conjugate gradient is a softmax (entropy) or a Euclidean projection
//! (half squared distance).

use crate::error::{Error, Result};
use crate::geometry::{self, DecisionSet, Norm, SetKind, FEASIBILITY_TOL};
use crate::vecops;

#[derive(Debug, Clone, PartialEq)]
pub enum RegularizerKind {
    /// `f(w) = ln d + sum_i w_i ln w_i` on the probability simplex.
    ShiftedNegEntropy,
    /// `f(w) = 0.5 * ||w - center||_2^2` on any set.
    HalfSqDist { center: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Regularizer {
    kind: RegularizerKind,
    set: DecisionSet,
    scale: f64,
}

impl Regularizer {
    pub fn new(kind: RegularizerKind, set: DecisionSet, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidArgument(format!("regularizer scale must be positive, got {scale}")));
        }
        match (&kind, set.kind()) {
            (RegularizerKind::ShiftedNegEntropy, SetKind::Simplex { .. }) => {}
            (RegularizerKind::ShiftedNegEntropy, _) => {
                return Err(Error::InvalidArgument("entropy regularizer requires a simplex".into()))
            }
            (RegularizerKind::HalfSqDist { center }, _) => {
                vecops::check_dim(set.dim(), center)?;
                if !vecops::all_finite(center) {
                    return Err(Error::NonFinite("regularizer center"));
                }
            }
        }
        Ok(Regularizer { kind, set, scale })
    }

    /// Shifted negative entropy on `Simplex(dim)` with the L1 norm.
    pub fn entropy(dim: usize, scale: f64) -> Result<Self> {
        Self::new(RegularizerKind::ShiftedNegEntropy, DecisionSet::simplex(dim)?, scale)
    }

    pub fn half_sq_dist(set: DecisionSet, center: Vec<f64>, scale: f64) -> Result<Self> {
        Self::new(RegularizerKind::HalfSqDist { center }, set, scale)
    }

    pub fn kind(&self) -> &RegularizerKind {
        &self.kind
    }

    pub fn set(&self) -> &DecisionSet {
        &self.set
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    /// Same base function with a different multiplier.
    pub fn with_scale(&self, scale: f64) -> Result<Self> {
        Self::new(self.kind.clone(), self.set.clone(), scale)
    }

    /// Strong-convexity modulus of the unit-scale base function with respect
    /// to the set's primal norm.
    pub fn base_lambda(&self) -> f64 {
        match (&self.kind, self.set.norms().primal) {
            // Pinsker gives 1 w.r.t. L1, and L1 dominates L2 and Linf.
            (RegularizerKind::ShiftedNegEntropy, _) => 1.0,
            (RegularizerKind::HalfSqDist { .. }, Norm::L2 | Norm::Linf) => 1.0,
            (RegularizerKind::HalfSqDist { .. }, Norm::L1) => 1.0 / self.dim() as f64,
        }
    }

    /// Modulus of the deployed function `c f`.
    pub fn modulus(&self) -> f64 {
        self.scale * self.base_lambda()
    }

    pub fn value(&self, w: &[f64]) -> Result<f64> {
        let violation = self.set.violation(w)?;
        if violation > FEASIBILITY_TOL {
            return Err(Error::Infeasible { violation });
        }
        Ok(self.value_unchecked(w))
    }

    pub(crate) fn value_unchecked(&self, w: &[f64]) -> f64 {
        self.scale * self.base_value(w)
    }

    fn base_value(&self, w: &[f64]) -> f64 {
        match &self.kind {
            RegularizerKind::ShiftedNegEntropy => {
                let neg_ent: f64 = w.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum();
                (self.dim() as f64).ln() + neg_ent
            }
            RegularizerKind::HalfSqDist { center } => {
                let d = vecops::l2(&vecops::sub(w, center));
                0.5 * d * d
            }
        }
    }

    /// `sup_{v in K} c f(v)` in closed form.
    pub fn sup_value(&self) -> Result<f64> {
        if !self.set.is_bounded() {
            return Err(Error::UnboundedSet);
        }
        let base = match &self.kind {
            RegularizerKind::ShiftedNegEntropy => (self.dim() as f64).ln(),
            RegularizerKind::HalfSqDist { center } => 0.5 * max_sq_dist(&self.set, center),
        };
        Ok(self.scale * base)
    }

    /// `(c f)*(l) = sup_{w in K} <l, w> - c f(w)`.
    pub fn conjugate_value(&self, l: &[f64]) -> Result<f64> {
        vecops::check_dim(self.dim(), l)?;
        Ok(self.conjugate_unchecked(l))
    }

    fn conjugate_unchecked(&self, l: &[f64]) -> f64 {
        let c = self.scale;
        match &self.kind {
            RegularizerKind::ShiftedNegEntropy => c_log_mean_exp(l, c),
            RegularizerKind::HalfSqDist { .. } => {
                let p = self.grad_unchecked(l);
                vecops::dot(l, &p) - self.value_unchecked(&p)
            }
        }
    }

    /// `argmin_{w in K} c f(w) - <l, w>`.
    pub fn conjugate_grad(&self, l: &[f64]) -> Result<Vec<f64>> {
        vecops::check_dim(self.dim(), l)?;
        Ok(self.grad_unchecked(l))
    }

    fn grad_unchecked(&self, l: &[f64]) -> Vec<f64> {
        let c = self.scale;
        match &self.kind {
            RegularizerKind::ShiftedNegEntropy => softmax(l, c),
            RegularizerKind::HalfSqDist { center } => {
                let target: Vec<f64> = center.iter().zip(l).map(|(z, x)| z + x / c).collect();
                self.set.project_unchecked(&target)
            }
        }
    }

    /// Bregman divergence of the conjugate, `B(x, y) = f*(x) - f*(y) - <x - y, grad f*(y)>`.
    ///
    /// Evaluated as the Fenchel-Young gap at `grad f*(y)`; for entropy that is
    /// `c * KL(grad f*(y) || grad f*(x))`.
    pub fn bregman_conjugate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        vecops::check_dim(self.dim(), x)?;
        vecops::check_dim(self.dim(), y)?;
        Ok(self.bregman_unchecked(x, y))
    }

    fn bregman_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        if x == y {
            return 0.0;
        }
        let c = self.scale;
        let gap = match &self.kind {
            RegularizerKind::ShiftedNegEntropy => {
                let p = softmax(y, c);
                let cross: f64 = p
                    .iter()
                    .zip(x.iter().zip(y))
                    .filter(|(&pi, _)| pi > 0.0)
                    .map(|(pi, (xi, yi))| pi * (yi - xi))
                    .sum();
                c_log_mean_exp(x, c) - c_log_mean_exp(y, c) + cross
            }
            RegularizerKind::HalfSqDist { .. } => {
                let gy = self.grad_unchecked(y);
                self.conjugate_unchecked(x) + self.value_unchecked(&gy) - vecops::dot(x, &gy)
            }
        };
        gap.max(0.0)
    }

    /// Conjugate of the multiplied function `a R`; `a = 0` gives the support
    /// function of the set (`+inf` off the origin for unbounded sets).
    pub fn scaled_conjugate(&self, a: f64, l: &[f64]) -> Result<f64> {
        vecops::check_dim(self.dim(), l)?;
        if a > 0.0 {
            return Ok(self.with_scale(a * self.scale)?.conjugate_unchecked(l));
        }
        check_multiplier(a)?;
        if !self.set.is_bounded() && l.iter().any(|&x| x != 0.0) {
            return Ok(f64::INFINITY);
        }
        let u = geometry::tie_broken(&self.set, &self.kind, &vecops::neg(l))?;
        Ok(vecops::dot(l, &u))
    }

    /// Gradient of the conjugate of `a R`; at `a = 0` the tie-broken maximizer
    /// of `<l, w>`.
    pub fn scaled_conjugate_grad(&self, a: f64, l: &[f64]) -> Result<Vec<f64>> {
        vecops::check_dim(self.dim(), l)?;
        if a > 0.0 {
            return Ok(self.with_scale(a * self.scale)?.grad_unchecked(l));
        }
        check_multiplier(a)?;
        geometry::tie_broken(&self.set, &self.kind, &vecops::neg(l))
    }

    /// `a B_{R*}(x/a, y/a)`, extended continuously to `a = 0` by
    /// `<x, u - v>` where `u`, `v` are the tie-broken maximizers of `<x, .>`
    /// and `<y, .>` over the set.
    pub fn scaled_bregman(&self, a: f64, x: &[f64], y: &[f64]) -> Result<f64> {
        vecops::check_dim(self.dim(), x)?;
        vecops::check_dim(self.dim(), y)?;
        if a > 0.0 {
            // a B_{R*}(x/a, y/a) = B_{(aR)*}(x, y)
            return Ok(self.with_scale(a * self.scale)?.bregman_unchecked(x, y));
        }
        check_multiplier(a)?;
        if !self.set.is_bounded() {
            return Err(Error::UnboundedSet);
        }
        if x == y {
            return Ok(0.0);
        }
        let u = geometry::tie_broken(&self.set, &self.kind, &vecops::neg(x))?;
        let v = geometry::tie_broken(&self.set, &self.kind, &vecops::neg(y))?;
        Ok(vecops::dot(x, &vecops::sub(&u, &v)))
    }
}

fn check_multiplier(a: f64) -> Result<()> {
    if a == 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("multiplier must be >= 0, got {a}")))
    }
}

/// `c * ln((1/d) sum_i exp(l_i / c))`.
///
/// Near zero this is `c * ln1p(mean(expm1(l_i / c)))`, whose error scales with
/// `|l / c|` instead of `ln d`; elsewhere the max-shifted form keeps huge
/// dual vectors finite.
fn c_log_mean_exp(l: &[f64], c: f64) -> f64 {
    let d = l.len() as f64;
    let m = l.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m / c < 1.0 {
        let s = l.iter().map(|&x| (x / c).exp_m1()).sum::<f64>() / d;
        if s > -0.5 {
            return c * s.ln_1p();
        }
    }
    let s: f64 = l.iter().map(|&x| ((x - m) / c).exp()).sum();
    m + c * (s.ln() - d.ln())
}

fn softmax(l: &[f64], c: f64) -> Vec<f64> {
    let m = l.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = l.iter().map(|&x| ((x - m) / c).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// `sup_{v in K} ||v - z||_2^2` for bounded `K`.
fn max_sq_dist(set: &DecisionSet, z: &[f64]) -> f64 {
    match set.kind() {
        SetKind::Simplex { .. } => {
            let zz = vecops::dot(z, z);
            z.iter().map(|&zi| zz - 2.0 * zi + 1.0).fold(f64::NEG_INFINITY, f64::max)
        }
        SetKind::L2Ball { center, radius } => {
            let d = vecops::l2(&vecops::sub(z, center)) + radius;
            d * d
        }
        SetKind::Box { lower, upper } => z
            .iter()
            .zip(lower.iter().zip(upper))
            .map(|(&zi, (&lo, &hi))| ((zi - lo) * (zi - lo)).max((hi - zi) * (hi - zi)))
            .sum(),
        SetKind::FullSpace { .. } => f64::INFINITY,
        SetKind::Product(fs) => fs
            .iter()
            .zip(set.factor_ranges())
            .map(|(f, r)| max_sq_dist(f, &z[r]))
            .sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn ball() -> DecisionSet {
        DecisionSet::l2_ball(vec![0.0, 0.0], 1.0).unwrap()
    }

    #[test]
    fn value_examples() {
        let e = Regularizer::entropy(2, 1.0).unwrap();
        assert_abs_diff_eq!(e.value(&[0.5, 0.5]).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.value(&[1.0, 0.0]).unwrap(), 2f64.ln(), epsilon = 1e-15);
        let q = Regularizer::half_sq_dist(DecisionSet::full_space(2).unwrap(), vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(q.value(&[3.0, 4.0]).unwrap(), 12.5);
    }

    #[test]
    fn value_rejects_infeasible_points() {
        let e = Regularizer::entropy(2, 1.0).unwrap();
        assert!(matches!(e.value(&[0.7, 0.7]), Err(Error::Infeasible { .. })));
        // rounding-level violations pass
        assert!(e.value(&[0.5 + 1e-12, 0.5]).is_ok());
    }

    #[test]
    fn sup_value_examples() {
        assert_abs_diff_eq!(Regularizer::entropy(8, 1.0).unwrap().sup_value().unwrap(), 8f64.ln(), epsilon = 1e-15);
        let q = Regularizer::half_sq_dist(ball(), vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(q.sup_value().unwrap(), 0.5);
        let qs = Regularizer::half_sq_dist(DecisionSet::simplex(2).unwrap(), vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(qs.sup_value().unwrap(), 0.5);
        let qf = Regularizer::half_sq_dist(DecisionSet::full_space(2).unwrap(), vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(qf.sup_value(), Err(Error::UnboundedSet));
    }

    #[test]
    fn sup_value_of_box_matches_corner_enumeration() {
        let bx = DecisionSet::boxed(vec![-1.0, 0.0, 2.0], vec![1.0, 3.0, 2.5]).unwrap();
        let z = vec![0.3, 2.0, 0.0];
        let q = Regularizer::half_sq_dist(bx, z.clone(), 2.0).unwrap();
        let lo = [-1.0, 0.0, 2.0];
        let hi = [1.0, 3.0, 2.5];
        let mut best = 0.0_f64;
        for mask in 0..8 {
            let v: Vec<f64> = (0..3).map(|i| if mask & (1 << i) != 0 { hi[i] } else { lo[i] }).collect();
            best = best.max(q.value(&v).unwrap());
        }
        assert_abs_diff_eq!(q.sup_value().unwrap(), best, epsilon = 1e-12);
    }

    /// Brute-force `sup_w <l,w> - f(w)` over a grid of the 2-simplex.
    fn grid_conjugate_simplex2(r: &Regularizer, l: &[f64]) -> (f64, Vec<f64>) {
        let n = 1_000_000;
        let mut best = (f64::NEG_INFINITY, vec![0.0, 0.0]);
        for k in 0..=n {
            let w = vec![k as f64 / n as f64, 1.0 - k as f64 / n as f64];
            let v = vecops::dot(l, &w) - r.value(&w).unwrap();
            if v > best.0 {
                best = (v, w);
            }
        }
        best
    }

    #[test]
    fn conjugate_examples_match_grid_oracle() {
        let e = Regularizer::entropy(2, 1.0).unwrap();
        let (sup, argsup) = grid_conjugate_simplex2(&e, &[1.0, 0.0]);
        let f = e.conjugate_value(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(f, sup, epsilon = 1e-9);
        assert_abs_diff_eq!(f, 0.6201145069582775, epsilon = 1e-12);
        let g = e.conjugate_grad(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(g[0], argsup[0], epsilon = 1e-5);
        assert_abs_diff_eq!(g[0], 0.7310585786300049, epsilon = 1e-12);
        assert_abs_diff_eq!(g[1], 0.2689414213699951, epsilon = 1e-12);

        let q = Regularizer::half_sq_dist(ball(), vec![0.0, 0.0], 1.0).unwrap();
        assert_abs_diff_eq!(q.conjugate_value(&[3.0, 4.0]).unwrap(), 4.5, epsilon = 1e-12);
        assert_eq!(q.conjugate_value(&[0.0, 0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(e.conjugate_value(&[0.0, 0.0]).unwrap(), 0.0, epsilon = 1e-15);

        let e3 = Regularizer::entropy(3, 1.0).unwrap();
        for x in e3.conjugate_grad(&[0.0, 0.0, 0.0]).unwrap() {
            assert_abs_diff_eq!(x, 1.0 / 3.0, epsilon = 1e-15);
        }
        let qf = Regularizer::half_sq_dist(DecisionSet::full_space(2).unwrap(), vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(qf.conjugate_grad(&[2.0, -1.0]).unwrap(), vec![2.0, -1.0]);
    }

    #[test]
    fn bregman_examples() {
        let e = Regularizer::entropy(2, 1.0).unwrap();
        assert_eq!(e.bregman_conjugate(&[0.3, 0.1], &[0.3, 0.1]).unwrap(), 0.0);
        let expected = (1.0 + 1f64.exp()).ln() - 2f64.ln() - 0.5;
        assert_abs_diff_eq!(expected, 0.12011450695827752, epsilon = 1e-15);
        // definitional route from conjugate values and the gradient at y
        let direct = e.conjugate_value(&[1.0, 0.0]).unwrap() - e.conjugate_value(&[0.0, 0.0]).unwrap() - 0.5;
        assert_abs_diff_eq!(direct, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(e.bregman_conjugate(&[1.0, 0.0], &[0.0, 0.0]).unwrap(), expected, epsilon = 1e-15);

        let qf = Regularizer::half_sq_dist(DecisionSet::full_space(3).unwrap(), vec![1.0, 0.0, -2.0], 1.0).unwrap();
        let x = [0.5, -1.0, 2.0];
        let y = [-1.5, 0.25, 1.0];
        let half_sq = 0.5 * vecops::dot(&vecops::sub(&x, &y), &vecops::sub(&x, &y));
        assert_abs_diff_eq!(qf.bregman_conjugate(&x, &y).unwrap(), half_sq, epsilon = 1e-12);
    }

    #[test]
    fn scaled_bregman_examples() {
        let e = Regularizer::entropy(2, 1.0).unwrap();
        let x = [-1.0, 0.0];
        let y = [0.0, 0.0];
        assert_abs_diff_eq!(e.scaled_bregman(0.0, &x, &y).unwrap(), 0.5, epsilon = 1e-15);
        let near = e.scaled_bregman(1e-8, &x, &y).unwrap();
        assert!((near - 0.5).abs() < 1e-6);
        assert_eq!(e.scaled_bregman(1.0, &x, &y).unwrap(), e.bregman_conjugate(&x, &y).unwrap());
        assert_eq!(e.scaled_bregman(0.0, &x, &x).unwrap(), 0.0);

        let qf = Regularizer::half_sq_dist(DecisionSet::full_space(2).unwrap(), vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(qf.scaled_bregman(0.0, &x, &y), Err(Error::UnboundedSet));
        assert!(e.scaled_bregman(-1.0, &x, &y).is_err());
    }

    #[test]
    fn entropy_conjugate_survives_huge_duals() {
        let e = Regularizer::entropy(3, 1.0).unwrap();
        let l = [1e300, -1e300, 5e299];
        let v = e.conjugate_value(&l).unwrap();
        assert!(v.is_finite());
        assert_abs_diff_eq!(v / 1e300, 1.0, epsilon = 1e-12);
        let g = e.conjugate_grad(&l).unwrap();
        assert_eq!(g, vec![1.0, 0.0, 0.0]);
        let b = e.bregman_conjugate(&[-1e300, 1e300, 0.0], &l).unwrap();
        assert!(b.is_finite());
    }

    #[test]
    fn proposition1_examples() {
        // D <= sqrt(8 sup f / lambda) for unit-scale regularizers
        let e = Regularizer::entropy(2, 1.0).unwrap();
        let bound = (8.0 * e.sup_value().unwrap() / e.modulus()).sqrt();
        assert_abs_diff_eq!(bound, 2.3548200450309493, epsilon = 1e-12);
        assert!(e.set().diameter() <= bound);
    }

    #[test]
    fn construction_errors() {
        assert!(Regularizer::entropy(2, 0.0).is_err());
        assert!(Regularizer::entropy(2, -1.0).is_err());
        assert!(Regularizer::new(RegularizerKind::ShiftedNegEntropy, ball(), 1.0).is_err());
        assert!(Regularizer::half_sq_dist(ball(), vec![0.0], 1.0).is_err());
    }

    proptest! {
        #[test]
        fn fenchel_young_and_equality_case(
            l in prop::collection::vec(-20.0f64..20.0, 3),
            raw in prop::collection::vec(0.0f64..1.0, 3),
            c in 0.01f64..100.0,
        ) {
            let e = Regularizer::entropy(3, c).unwrap();
            let s: f64 = raw.iter().sum::<f64>() + 1e-12;
            let w: Vec<f64> = raw.iter().map(|x| x / s).collect();
            let fy = e.value(&w).unwrap() + e.conjugate_value(&l).unwrap() - vecops::dot(&l, &w);
            prop_assert!(fy >= -1e-9 * (1.0 + vecops::linf(&l)));
            let g = e.conjugate_grad(&l).unwrap();
            let eq = e.conjugate_value(&l).unwrap() + e.value(&g).unwrap() - vecops::dot(&l, &g);
            prop_assert!(eq.abs() <= 1e-9 * (1.0 + vecops::linf(&l)));
        }

        #[test]
        fn scaling_law(l in prop::collection::vec(-5.0f64..5.0, 2), c in 0.001f64..1000.0) {
            let q = Regularizer::half_sq_dist(ball(), vec![0.2, -0.1], 1.0).unwrap();
            let lhs = q.with_scale(c).unwrap().conjugate_value(&l).unwrap();
            let rhs = c * q.conjugate_value(&vecops::scaled(&l, 1.0 / c)).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1e-300) + 1e-300);
        }
    }
}
