//! Decision sets, norm pairs, linear-minimization oracles and Euclidean
//! projections.
//!
//! Every learner in the crate reduces its prediction step to one of two
//! primitives defined here: a projection onto the decision set (quadratic
//! regularizers) or a linear-minimization oracle (the zero-multiplier limit
//! of any regularizer).

use crate::error::{Error, Result};
use crate::regularizers::{Regularizer, RegularizerKind};
use crate::vecops;

/// Relative tolerance used to detect the argmin coordinate set of a linear
/// objective, measured against the largest absolute coefficient.
pub const ARGMIN_REL_TOL: f64 = 1e-12;

/// Feasibility tolerance for membership tests.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub fn dual(self) -> Norm {
        match self {
            Norm::L1 => Norm::Linf,
            Norm::L2 => Norm::L2,
            Norm::Linf => Norm::L1,
        }
    }

    pub fn eval(self, v: &[f64]) -> f64 {
        match self {
            Norm::L1 => vecops::l1(v),
            Norm::L2 => vecops::l2(v),
            Norm::Linf => vecops::linf(v),
        }
    }

    pub fn parse(s: &str) -> Option<Norm> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l1" => Some(Norm::L1),
            "l2" => Some(Norm::L2),
            "linf" | "l_inf" | "max" => Some(Norm::Linf),
            _ => None,
        }
    }
}

/// A primal norm together with its dual. Points of the decision set are
/// measured with the primal norm, loss vectors with the dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormPair {
    pub primal: Norm,
}

impl NormPair {
    pub fn new(primal: Norm) -> Self {
        NormPair { primal }
    }

    pub fn dual_pair(self) -> NormPair {
        NormPair { primal: self.primal.dual() }
    }

    pub fn primal_norm(&self, w: &[f64]) -> f64 {
        self.primal.eval(w)
    }

    pub fn dual_norm(&self, l: &[f64]) -> f64 {
        self.primal.dual().eval(l)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SetKind {
    Simplex { dim: usize },
    L2Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    FullSpace { dim: usize },
    Product(Vec<DecisionSet>),
}

/// A non-empty closed convex subset of R^d with its norm pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionSet {
    kind: SetKind,
    norms: NormPair,
}

impl DecisionSet {
    /// Probability simplex in R^dim with the L1 norm.
    pub fn simplex(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("simplex dimension must be >= 1".into()));
        }
        Ok(DecisionSet { kind: SetKind::Simplex { dim }, norms: NormPair::new(Norm::L1) })
    }

    pub fn l2_ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidArgument("ball dimension must be >= 1".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) || !vecops::all_finite(&center) {
            return Err(Error::InvalidArgument(format!("invalid ball radius {radius}")));
        }
        Ok(DecisionSet { kind: SetKind::L2Ball { center, radius }, norms: NormPair::new(Norm::L2) })
    }

    /// Axis-aligned box `lower <= w <= upper`, with the Linf norm.
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidArgument("box bounds must be non-empty and equal length".into()));
        }
        if !vecops::all_finite(&lower) || !vecops::all_finite(&upper) {
            return Err(Error::NonFinite("box bounds"));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::InvalidArgument("box requires lower <= upper".into()));
        }
        Ok(DecisionSet { kind: SetKind::Box { lower, upper }, norms: NormPair::new(Norm::Linf) })
    }

    pub fn full_space(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        Ok(DecisionSet { kind: SetKind::FullSpace { dim }, norms: NormPair::new(Norm::L2) })
    }

    /// Cartesian product; carries the L2 norm over concatenated coordinates.
    pub fn product(factors: Vec<DecisionSet>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("product needs at least one factor".into()));
        }
        Ok(DecisionSet { kind: SetKind::Product(factors), norms: NormPair::new(Norm::L2) })
    }

    pub fn with_norm(mut self, primal: Norm) -> Self {
        self.norms = NormPair::new(primal);
        self
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn norms(&self) -> NormPair {
        self.norms
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            SetKind::Simplex { dim } | SetKind::FullSpace { dim } => *dim,
            SetKind::L2Ball { center, .. } => center.len(),
            SetKind::Box { lower, .. } => lower.len(),
            SetKind::Product(fs) => fs.iter().map(DecisionSet::dim).sum(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        match &self.kind {
            SetKind::FullSpace { .. } => false,
            SetKind::Product(fs) => fs.iter().all(DecisionSet::is_bounded),
            _ => true,
        }
    }

    /// Coordinate ranges of the factors of a product set, in order.
    pub fn factor_ranges(&self) -> Vec<std::ops::Range<usize>> {
        match &self.kind {
            SetKind::Product(fs) => {
                let mut start = 0;
                fs.iter()
                    .map(|f| {
                        let r = start..start + f.dim();
                        start = r.end;
                        r
                    })
                    .collect()
            }
            _ => vec![0..self.dim()],
        }
    }

    pub fn primal_norm(&self, w: &[f64]) -> Result<f64> {
        vecops::check_dim(self.dim(), w)?;
        Ok(self.norms.primal_norm(w))
    }

    pub fn dual_norm(&self, l: &[f64]) -> Result<f64> {
        vecops::check_dim(self.dim(), l)?;
        Ok(self.norms.dual_norm(l))
    }

    /// Exact diameter in the set's primal norm; `+inf` when unbounded.
    pub fn diameter(&self) -> f64 {
        self.diameter_in(self.norms.primal)
    }

    fn diameter_in(&self, norm: Norm) -> f64 {
        match &self.kind {
            SetKind::Simplex { dim } => {
                if *dim == 1 {
                    0.0
                } else {
                    match norm {
                        Norm::L1 => 2.0,
                        Norm::L2 => std::f64::consts::SQRT_2,
                        Norm::Linf => 1.0,
                    }
                }
            }
            SetKind::L2Ball { center, radius } => match norm {
                Norm::L1 => 2.0 * radius * (center.len() as f64).sqrt(),
                Norm::L2 | Norm::Linf => 2.0 * radius,
            },
            SetKind::Box { lower, upper } => norm.eval(&vecops::sub(upper, lower)),
            SetKind::FullSpace { .. } => f64::INFINITY,
            // The sup separates over factors for all three norms.
            SetKind::Product(fs) => {
                let ds: Vec<f64> = fs.iter().map(|f| f.diameter_in(norm)).collect();
                norm.eval(&ds)
            }
        }
    }

    /// Largest constraint violation of `w` (0 when feasible).
    pub fn violation(&self, w: &[f64]) -> Result<f64> {
        vecops::check_dim(self.dim(), w)?;
        Ok(match &self.kind {
            SetKind::Simplex { .. } => {
                let neg = w.iter().fold(0.0_f64, |m, &x| m.max(-x));
                let sum: f64 = w.iter().sum();
                neg.max((sum - 1.0).abs())
            }
            SetKind::L2Ball { center, radius } => {
                (vecops::l2(&vecops::sub(w, center)) - radius).max(0.0)
            }
            SetKind::Box { lower, upper } => w
                .iter()
                .zip(lower.iter().zip(upper))
                .fold(0.0_f64, |m, (&x, (&l, &u))| m.max(l - x).max(x - u)),
            SetKind::FullSpace { .. } => {
                if vecops::all_finite(w) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            SetKind::Product(fs) => {
                let mut worst = 0.0_f64;
                for (f, r) in fs.iter().zip(self.factor_ranges()) {
                    worst = worst.max(f.violation(&w[r])?);
                }
                worst
            }
        })
    }

    pub fn contains(&self, w: &[f64]) -> bool {
        matches!(self.violation(w), Ok(v) if v <= FEASIBILITY_TOL)
    }

    /// A point attaining `min_{w in K} <l, w>`, with lowest-index tie breaking.
    pub fn linear_minimizer(&self, l: &[f64]) -> Result<Vec<f64>> {
        vecops::check_dim(self.dim(), l)?;
        match &self.kind {
            SetKind::Simplex { dim } => {
                let mut w = vec![0.0; *dim];
                w[vecops::argmin(l)] = 1.0;
                Ok(w)
            }
            SetKind::L2Ball { center, radius } => {
                let n = vecops::l2(l);
                if n == 0.0 {
                    return Ok(center.clone());
                }
                Ok(center.iter().zip(l).map(|(c, x)| c - radius * (x / n)).collect())
            }
            SetKind::Box { lower, upper } => Ok(l
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(&x, (&lo, &hi))| if x < 0.0 { hi } else { lo })
                .collect()),
            SetKind::FullSpace { dim } => {
                if l.iter().any(|&x| x != 0.0) {
                    Err(Error::UnboundedBelow)
                } else {
                    Ok(vec![0.0; *dim])
                }
            }
            SetKind::Product(fs) => {
                let mut w = Vec::with_capacity(self.dim());
                for (f, r) in fs.iter().zip(self.factor_ranges()) {
                    w.extend(f.linear_minimizer(&l[r])?);
                }
                Ok(w)
            }
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        vecops::check_dim(self.dim(), p)?;
        Ok(self.project_unchecked(p))
    }

    pub(crate) fn project_unchecked(&self, p: &[f64]) -> Vec<f64> {
        match &self.kind {
            SetKind::Simplex { .. } => project_simplex(p),
            SetKind::L2Ball { center, radius } => {
                let diff = vecops::sub(p, center);
                let n = vecops::l2(&diff);
                if n <= *radius {
                    p.to_vec()
                } else {
                    center.iter().zip(&diff).map(|(c, d)| c + d * (radius / n)).collect()
                }
            }
            SetKind::Box { lower, upper } => p
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(&x, (&lo, &hi))| x.clamp(lo, hi))
                .collect(),
            SetKind::FullSpace { .. } => p.to_vec(),
            SetKind::Product(fs) => {
                let mut w = Vec::with_capacity(p.len());
                for (f, r) in fs.iter().zip(self.factor_ranges()) {
                    w.extend(f.project_unchecked(&p[r]));
                }
                w
            }
        }
    }
}

/// Euclidean projection onto the probability simplex by sorting and
/// thresholding.
pub fn project_simplex(p: &[f64]) -> Vec<f64> {
    let mut sorted = p.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    p.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Mask of coordinates within the argmin tolerance of `min_i l_i`.
fn argmin_mask(l: &[f64]) -> Vec<bool> {
    let tol = ARGMIN_REL_TOL * vecops::linf(l);
    let m = l.iter().cloned().fold(f64::INFINITY, f64::min);
    l.iter().map(|&x| x <= m + tol).collect()
}

/// The minimizer of `<l, w>` over `set` whose regularizer value is smallest.
///
/// This is the limit of `argmin_w (<l, w> + a R(w))` as `a -> 0+`, and is what
/// zero-multiplier rounds predict.
pub fn tie_broken_linear_minimizer(set: &DecisionSet, reg: &Regularizer, l: &[f64]) -> Result<Vec<f64>> {
    vecops::check_dim(set.dim(), l)?;
    if set.dim() != reg.set().dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), got: reg.set().dim() });
    }
    tie_broken(set, reg.kind(), l)
}

pub(crate) fn tie_broken(set: &DecisionSet, kind: &RegularizerKind, l: &[f64]) -> Result<Vec<f64>> {
    match (&set.kind, kind) {
        (SetKind::Simplex { .. }, RegularizerKind::ShiftedNegEntropy) => {
            let mask = argmin_mask(l);
            let k = mask.iter().filter(|&&b| b).count() as f64;
            Ok(mask.iter().map(|&b| if b { 1.0 / k } else { 0.0 }).collect())
        }
        (SetKind::Simplex { .. }, RegularizerKind::HalfSqDist { center }) => {
            // Project the center onto the face spanned by the argmin vertices.
            let mask = argmin_mask(l);
            let face: Vec<f64> = center.iter().zip(&mask).filter(|(_, &b)| b).map(|(c, _)| *c).collect();
            let mut proj = project_simplex(&face).into_iter();
            Ok(mask.iter().map(|&b| if b { proj.next().unwrap_or(0.0) } else { 0.0 }).collect())
        }
        (SetKind::L2Ball { .. }, RegularizerKind::HalfSqDist { center }) => {
            if l.iter().all(|&x| x == 0.0) {
                Ok(set.project_unchecked(center))
            } else {
                set.linear_minimizer(l)
            }
        }
        (SetKind::Box { lower, upper }, RegularizerKind::HalfSqDist { center }) => {
            let tol = ARGMIN_REL_TOL * vecops::linf(l);
            Ok(l.iter()
                .enumerate()
                .map(|(i, &x)| {
                    if x > tol {
                        lower[i]
                    } else if x < -tol {
                        upper[i]
                    } else {
                        center[i].clamp(lower[i], upper[i])
                    }
                })
                .collect())
        }
        (SetKind::FullSpace { .. }, RegularizerKind::HalfSqDist { center }) => {
            if l.iter().any(|&x| x != 0.0) {
                Err(Error::UnboundedBelow)
            } else {
                Ok(center.clone())
            }
        }
        (SetKind::Product(fs), RegularizerKind::HalfSqDist { center }) => {
            let mut w = Vec::with_capacity(l.len());
            for (f, r) in fs.iter().zip(set.factor_ranges()) {
                let sub = RegularizerKind::HalfSqDist { center: center[r.clone()].to_vec() };
                w.extend(tie_broken(f, &sub, &l[r])?);
            }
            Ok(w)
        }
        _ => Err(Error::InvalidArgument("regularizer kind is not defined on this decision set".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularizers::Regularizer;
    use approx::assert_abs_diff_eq;

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn norms_and_duals() {
        let l1 = NormPair::new(Norm::L1);
        let l2 = NormPair::new(Norm::L2);
        let li = NormPair::new(Norm::Linf);
        assert_eq!(l1.primal_norm(&[0.5, 0.5]), 1.0);
        assert_eq!(l2.primal_norm(&[3.0, 4.0]), 5.0);
        assert_eq!(l1.primal_norm(&[0.0, 0.0]), 0.0);
        assert_eq!(l1.dual_norm(&[1.0, -1.0]), 1.0);
        assert_eq!(l2.dual_norm(&[3.0, 4.0]), 5.0);
        assert_eq!(li.dual_norm(&[1.0, -1.0]), 2.0);
        for n in [Norm::L1, Norm::L2, Norm::Linf] {
            assert_eq!(n.dual().dual(), n);
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = DecisionSet::simplex(3).unwrap();
        assert!(matches!(s.primal_norm(&[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(s.linear_minimizer(&[1.0, 2.0]).is_err());
        assert!(s.project(&[1.0]).is_err());
    }

    #[test]
    fn linear_minimizer_examples() {
        let s = DecisionSet::simplex(2).unwrap();
        assert_eq!(s.linear_minimizer(&[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
        // lowest index on ties
        assert_eq!(s.linear_minimizer(&[0.0, 0.0]).unwrap(), vec![1.0, 0.0]);

        let b = DecisionSet::l2_ball(vec![0.0, 0.0], 1.0).unwrap();
        close(&b.linear_minimizer(&[3.0, 4.0]).unwrap(), &[-0.6, -0.8], 1e-15);
        assert_eq!(b.linear_minimizer(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);

        let bx = DecisionSet::boxed(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(bx.linear_minimizer(&[2.0, -3.0]).unwrap(), vec![-1.0, 1.0]);

        let fs = DecisionSet::full_space(2).unwrap();
        assert_eq!(fs.linear_minimizer(&[1.0, 0.0]), Err(Error::UnboundedBelow));
    }

    #[test]
    fn ball_minimizer_matches_boundary_grid_search() {
        // oracle: scan the unit circle
        let l = [3.0, 4.0];
        let mut best = (f64::INFINITY, [0.0, 0.0]);
        let n = 200_000;
        for k in 0..n {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let w = [th.cos(), th.sin()];
            let v = l[0] * w[0] + l[1] * w[1];
            if v < best.0 {
                best = (v, w);
            }
        }
        let b = DecisionSet::l2_ball(vec![0.0, 0.0], 1.0).unwrap();
        close(&b.linear_minimizer(&l).unwrap(), &best.1, 1e-4);
    }

    #[test]
    fn projection_examples() {
        let s = DecisionSet::simplex(2).unwrap();
        close(&s.project(&[2.0, 0.0]).unwrap(), &[1.0, 0.0], 1e-15);
        let b = DecisionSet::l2_ball(vec![0.0, 0.0], 1.0).unwrap();
        close(&b.project(&[3.0, 4.0]).unwrap(), &[0.6, 0.8], 1e-15);
        let bx = DecisionSet::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(bx.project(&[0.5, 0.5]).unwrap(), vec![0.5, 0.5]);
        let fs = DecisionSet::full_space(2).unwrap();
        assert_eq!(fs.project(&[7.0, -1.0]).unwrap(), vec![7.0, -1.0]);
    }

    #[test]
    fn simplex_projection_matches_grid_search() {
        let cases: [[f64; 3]; 4] =
            [[2.0, 0.0, 0.0], [0.3, 0.9, -0.2], [0.1, 0.1, 0.1], [-1.0, 2.5, 2.4]];
        let n = 400;
        for p in cases {
            let mut best = (f64::INFINITY, [0.0; 3]);
            for i in 0..=n {
                for j in 0..=(n - i) {
                    let w = [i as f64 / n as f64, j as f64 / n as f64, (n - i - j) as f64 / n as f64];
                    let d: f64 = p.iter().zip(&w).map(|(a, b)| (a - b) * (a - b)).sum();
                    if d < best.0 {
                        best = (d, w);
                    }
                }
            }
            close(&project_simplex(&p), &best.1, 2.0 / n as f64);
        }
    }

    #[test]
    fn diameters() {
        assert_eq!(DecisionSet::simplex(5).unwrap().diameter(), 2.0);
        assert_eq!(DecisionSet::simplex(1).unwrap().diameter(), 0.0);
        assert_eq!(DecisionSet::l2_ball(vec![0.0; 3], 3.0).unwrap().diameter(), 6.0);
        assert_eq!(DecisionSet::full_space(4).unwrap().diameter(), f64::INFINITY);
        let bx = DecisionSet::boxed(vec![0.0, -1.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(bx.diameter(), 3.0);
        assert_eq!(bx.clone().with_norm(Norm::L1).diameter(), 4.0);
        let p = DecisionSet::product(vec![
            DecisionSet::l2_ball(vec![0.0], 1.0).unwrap(),
            DecisionSet::l2_ball(vec![0.0], 1.0).unwrap(),
        ])
        .unwrap();
        assert_abs_diff_eq!(p.diameter(), 8.0_f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn tie_broken_examples() {
        let s3 = DecisionSet::simplex(3).unwrap();
        let ent3 = Regularizer::entropy(3, 1.0).unwrap();
        close(&tie_broken_linear_minimizer(&s3, &ent3, &[1.0, 0.0, 0.0]).unwrap(), &[0.0, 0.5, 0.5], 0.0);

        let s2 = DecisionSet::simplex(2).unwrap();
        let ent2 = Regularizer::entropy(2, 1.0).unwrap();
        close(&tie_broken_linear_minimizer(&s2, &ent2, &[0.0, 0.0]).unwrap(), &[0.5, 0.5], 0.0);

        let b = DecisionSet::l2_ball(vec![0.0, 0.0], 1.0).unwrap();
        let q = Regularizer::half_sq_dist(b.clone(), vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(tie_broken_linear_minimizer(&b, &q, &[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn tie_broken_matches_small_multiplier_ftrl_step() {
        // argmin <L,w> + a R(w) with a = 1e-8 is softmax(-L/a) for entropy.
        let ent = Regularizer::entropy(3, 1.0).unwrap();
        let s = DecisionSet::simplex(3).unwrap();
        let l = [1.0, 0.0, 0.0];
        let a = 1e-8;
        let approx = ent.with_scale(a).unwrap().conjugate_grad(&vecops::neg(&l)).unwrap();
        close(&tie_broken_linear_minimizer(&s, &ent, &l).unwrap(), &approx, 1e-9);
    }

    #[test]
    fn tie_broken_box_and_simplex_quadratic() {
        let bx = DecisionSet::boxed(vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]).unwrap();
        let q = Regularizer::half_sq_dist(bx.clone(), vec![0.25, 0.25, 2.0], 1.0).unwrap();
        assert_eq!(tie_broken_linear_minimizer(&bx, &q, &[1.0, 0.0, -1.0]).unwrap(), vec![0.0, 0.25, 1.0]);

        let s = DecisionSet::simplex(3).unwrap();
        let q = Regularizer::half_sq_dist(s.clone(), vec![0.9, 0.3, 0.0], 1.0).unwrap();
        // face {1,2}: project (0.3, 0.0) onto the 2-simplex -> (0.65, 0.35)
        close(&tie_broken_linear_minimizer(&s, &q, &[1.0, 0.0, 0.0]).unwrap(), &[0.0, 0.65, 0.35], 1e-15);
    }

    #[test]
    fn tie_detection_is_scale_free() {
        let s = DecisionSet::simplex(3).unwrap();
        let ent = Regularizer::entropy(3, 1.0).unwrap();
        for c in [1e-200, 1e-6, 1.0, 1e6, 1e200] {
            let l = [c * 2.0, c * 1.0, c * 1.0];
            close(&tie_broken_linear_minimizer(&s, &ent, &l).unwrap(), &[0.0, 0.5, 0.5], 0.0);
        }
    }
}
