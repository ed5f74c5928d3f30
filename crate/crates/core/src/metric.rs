//! Metric spaces: the real line, Euclidean `R^n`, explicit finite distance
//! matrices, and binary products under the max metric.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::laws::report::{LawReport, Outcome};
use crate::scalar::Scalar;

/// Total order on points, consistent with the space's point equality.
///
/// Atoms are kept sorted under this order, which makes coalescing and
/// measure equality deterministic. Float points compare exactly: no
/// epsilon merging.
pub trait PointOrd {
    fn point_cmp(&self, other: &Self) -> Ordering;

    fn point_eq(&self, other: &Self) -> bool {
        self.point_cmp(other) == Ordering::Equal
    }
}

impl PointOrd for usize {
    fn point_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl PointOrd for Vec<f64> {
    fn point_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.iter().zip(other) {
            match a.point_cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.len().cmp(&other.len())
    }
}

impl<A: PointOrd, B: PointOrd> PointOrd for (A, B) {
    fn point_cmp(&self, other: &Self) -> Ordering {
        self.0
            .point_cmp(&other.0)
            .then_with(|| self.1.point_cmp(&other.1))
    }
}

pub trait MetricSpace<S: Scalar>: Debug + PartialEq + Send + Sync {
    type Point: PointOrd + Clone + Debug + Send + Sync;

    fn contains(&self, x: &Self::Point) -> bool;

    /// Distance between two points already known to be members.
    fn dist(&self, x: &Self::Point, y: &Self::Point) -> S;

    fn check_point(&self, x: &Self::Point) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::PointOutsideSpace(format!("{x:?}")))
        }
    }

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<S> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.dist(x, y))
    }
}

/// The real line with `d(x, y) = |x - y|`. Points are scalars of the
/// numeric mode, so the line is exact in rational mode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RealLine;

impl<S: Scalar> MetricSpace<S> for RealLine {
    type Point = S;

    fn contains(&self, x: &S) -> bool {
        x.is_finite()
    }

    fn dist(&self, x: &S, y: &S) -> S {
        (x.clone() - y.clone()).abs()
    }
}

/// `R^dim` with the Euclidean metric (float mode only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Euclidean {
    dim: usize,
}

impl Euclidean {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        Ok(Euclidean { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl MetricSpace<f64> for Euclidean {
    type Point = Vec<f64>;

    fn contains(&self, x: &Vec<f64>) -> bool {
        x.len() == self.dim && x.iter().all(|c| c.is_finite())
    }

    fn dist(&self, x: &Vec<f64>, y: &Vec<f64>) -> f64 {
        x.iter()
            .zip(y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Points `0..n` with an explicit distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric<S> {
    n: usize,
    entries: Vec<S>,
}

impl<S: Scalar> FiniteMetric<S> {
    /// Validates zero diagonal, symmetry, nonnegativity and, exhaustively,
    /// the triangle inequality.
    pub fn new(rows: Vec<Vec<S>>) -> Result<Self> {
        let space = Self::new_unchecked(rows)?;
        let tol = S::weight_tolerance();
        let n = space.n;
        for i in 0..n {
            if space.entry(i, i) != S::zero() {
                return Err(Error::InvalidMetric(format!("d({i},{i}) is not 0")));
            }
            for j in 0..i {
                if space.entry(i, j) != space.entry(j, i) {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) != d({j},{i})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let via = space.entry(i, j) + space.entry(j, k);
                    if space.entry(i, k) > via + tol.clone() {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})"
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                if space.entry(i, j) == S::zero() {
                    return Err(Error::InvalidMetric(format!(
                        "distinct points {i} and {j} at distance 0"
                    )));
                }
            }
        }
        Ok(space)
    }

    /// Only checks shape, finiteness and nonnegativity. Use
    /// [`check_metric_axioms`] to audit the result.
    pub fn new_unchecked(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMetric("empty distance matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for v in row {
                if !v.is_finite() {
                    return Err(Error::InvalidMetric("distances must be finite".into()));
                }
                if v < S::zero() {
                    return Err(Error::InvalidMetric(format!("negative distance {v}")));
                }
                entries.push(v);
            }
        }
        Ok(FiniteMetric { n, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn entry(&self, i: usize, j: usize) -> S {
        self.entries[i * self.n + j].clone()
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

impl<S: Scalar> MetricSpace<S> for FiniteMetric<S> {
    type Point = usize;

    fn contains(&self, x: &usize) -> bool {
        *x < self.n
    }

    fn dist(&self, x: &usize, y: &usize) -> S {
        self.entry(*x, *y)
    }
}

/// `A x B` with `d((a,b),(a',b')) = max(d_A(a,a'), d_B(b,b'))`.
#[derive(Debug)]
pub struct Product<A, B> {
    pub left: Arc<A>,
    pub right: Arc<B>,
}

impl<A, B> Product<A, B> {
    pub fn new(left: Arc<A>, right: Arc<B>) -> Self {
        Product { left, right }
    }
}

impl<A, B> Clone for Product<A, B> {
    fn clone(&self) -> Self {
        Product {
            left: self.left.clone(),
            right: self.right.clone(),
        }
    }
}

impl<A: PartialEq, B: PartialEq> PartialEq for Product<A, B> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.left, &other.left) || self.left == other.left)
            && (Arc::ptr_eq(&self.right, &other.right) || self.right == other.right)
    }
}

impl<S, A, B> MetricSpace<S> for Product<A, B>
where
    S: Scalar,
    A: MetricSpace<S>,
    B: MetricSpace<S>,
{
    type Point = (A::Point, B::Point);

    fn contains(&self, x: &Self::Point) -> bool {
        self.left.contains(&x.0) && self.right.contains(&x.1)
    }

    fn dist(&self, x: &Self::Point, y: &Self::Point) -> S {
        S::max_of(self.left.dist(&x.0, &y.0), self.right.dist(&x.1, &y.1))
    }
}

pub fn product_distance<S, A, B>(
    left: &A,
    right: &B,
    x: &(A::Point, B::Point),
    y: &(A::Point, B::Point),
) -> Result<S>
where
    S: Scalar,
    A: MetricSpace<S>,
    B: MetricSpace<S>,
{
    let da = left.distance(&x.0, &y.0)?;
    let db = right.distance(&x.1, &y.1)?;
    Ok(S::max_of(da, db))
}

/// Audits the metric axioms over every pair and triple of `sample`.
///
/// Slack per trial: `-d(x,x)` for identity, `-|d(x,y) - d(y,x)|` for
/// symmetry, `d(x,y) + d(y,z) - d(x,z)` for the triangle, and `-1` when
/// distinct points sit at distance zero.
pub fn check_metric_axioms<S, M>(space: &M, sample: &[M::Point]) -> Result<LawReport>
where
    S: Scalar,
    M: MetricSpace<S>,
{
    for x in sample {
        space.check_point(x)?;
    }
    let tol = S::weight_tolerance();
    let mut report = LawReport::new("metric-axioms", tol.to_f64());
    for x in sample {
        let d = space.dist(x, x);
        report.record(&Outcome::inequality(d, S::zero(), tol.clone()), || {
            format!("d({x:?},{x:?}) != 0")
        });
    }
    for (i, x) in sample.iter().enumerate() {
        for y in &sample[i + 1..] {
            let dxy = space.dist(x, y);
            let dyx = space.dist(y, x);
            report.record(
                &Outcome::inequality((dxy.clone() - dyx).abs(), S::zero(), tol.clone()),
                || format!("asymmetric at {x:?}, {y:?}"),
            );
            let separated = if dxy == S::zero() && !x.point_eq(y) {
                Outcome::inequality(S::one(), S::zero(), tol.clone())
            } else {
                Outcome::inequality(S::zero(), S::zero(), tol.clone())
            };
            report.record(&separated, || format!("distinct {x:?}, {y:?} at distance 0"));
        }
    }
    for x in sample {
        for y in sample {
            for z in sample {
                let lhs = space.dist(x, z);
                let rhs = space.dist(x, y) + space.dist(y, z);
                report.record(&Outcome::inequality(lhs, rhs, tol.clone()), || {
                    format!("triangle fails for {x:?}, {y:?}, {z:?}")
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn three_point(d01: f64, d02: f64, d12: f64) -> Vec<Vec<f64>> {
        vec![
            vec![0.0, d01, d02],
            vec![d01, 0.0, d12],
            vec![d02, d12, 0.0],
        ]
    }

    #[test]
    fn line_distance() {
        assert_eq!(RealLine.distance(&2.0, &5.0).unwrap(), 3.0);
        assert_eq!(RealLine.distance(&4.5, &4.5).unwrap(), 0.0);
        let a = Rational::from_ratio(1, 3);
        let b = Rational::from_ratio(-1, 6);
        assert_eq!(RealLine.distance(&a, &b).unwrap(), Rational::from_ratio(1, 2));
        assert!(RealLine.distance(&f64::NAN, &0.0).is_err());
    }

    #[test]
    fn matrix_lookup_and_range() {
        let m = FiniteMetric::new(three_point(1.0, 2.0, 1.0)).unwrap();
        assert_eq!(m.distance(&0, &2).unwrap(), 2.0);
        assert_eq!(m.distance(&1, &1).unwrap(), 0.0);
        assert!(matches!(m.distance(&0, &3), Err(Error::PointOutsideSpace(_))));
    }

    #[test]
    fn matrix_construction_rejects_bad_input() {
        assert!(FiniteMetric::new(three_point(5.0, 1.0, 1.0)).is_err());
        assert!(FiniteMetric::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(FiniteMetric::new(vec![vec![1.0]]).is_err());
        assert!(FiniteMetric::new(vec![vec![0.0, f64::INFINITY], vec![f64::INFINITY, 0.0]]).is_err());
        assert!(FiniteMetric::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
        assert!(FiniteMetric::<f64>::new(vec![]).is_err());
        assert!(FiniteMetric::new(vec![vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn product_uses_max() {
        let left = Arc::new(RealLine);
        let right = Arc::new(FiniteMetric::new(three_point(1.0, 2.0, 1.0)).unwrap());
        let d: f64 = product_distance(&*left, &*right, &(0.0, 0), &(3.0, 1)).unwrap();
        assert_eq!(d, 3.0);
        let d: f64 = product_distance(&*left, &*right, &(1.0, 2), &(1.0, 2)).unwrap();
        assert_eq!(d, 0.0);
        let d: f64 = product_distance(&*left, &*right, &(0.0, 0), &(2.0, 2)).unwrap();
        assert_eq!(d, 2.0);
        let prod = Product::new(left, right);
        assert_eq!(MetricSpace::<f64>::dist(&prod, &(0.0, 2), &(0.5, 0)), 2.0);
    }

    #[test]
    fn axiom_audit_passes_on_euclidean_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let plane = Euclidean::new(2).unwrap();
        let sample: Vec<Vec<f64>> = (0..50)
            .map(|_| vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)])
            .collect();
        let report = check_metric_axioms(&plane, &sample).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.worst_slack >= 0.0);
    }

    #[test]
    fn axiom_audit_flags_triangle_violation() {
        let bad = FiniteMetric::new_unchecked(three_point(5.0, 1.0, 1.0)).unwrap();
        let report = check_metric_axioms(&bad, &[0, 1, 2]).unwrap();
        assert!(!report.passed());
        assert_eq!(report.worst_slack, -3.0);
        assert!(report.witness.as_deref().unwrap().contains("triangle"));
    }

    #[test]
    fn axiom_audit_single_point() {
        let report = check_metric_axioms(&RealLine, &[Rational::from_ratio(1, 2)]).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn product_of_metrics_is_a_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let left = Arc::new(RealLine);
        let right = Arc::new(Euclidean::new(2).unwrap());
        let prod = Product::new(left, right);
        let sample: Vec<(f64, Vec<f64>)> = (0..15)
            .map(|_| {
                (
                    rng.gen_range(-1.0..1.0),
                    vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                )
            })
            .collect();
        assert!(check_metric_axioms(&prod, &sample).unwrap().passed());
    }
}
