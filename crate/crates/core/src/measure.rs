//! Finitely supported probability measures and their barycentric operations.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, PointOrd};
use crate::scalar::{Order, Scalar};

/// A probability measure with finite support.
///
/// Atoms are pairwise distinct and sorted by [`PointOrd`]; every weight is
/// strictly positive and the weights sum to one (exactly in exact mode).
/// Values are immutable: every operation returns a new measure.
pub struct Measure<S: Scalar, M: MetricSpace<S>> {
    space: Arc<M>,
    atoms: Vec<M::Point>,
    weights: Vec<S>,
}

impl<S: Scalar, M: MetricSpace<S>> Clone for Measure<S, M> {
    fn clone(&self) -> Self {
        Measure {
            space: self.space.clone(),
            atoms: self.atoms.clone(),
            weights: self.weights.clone(),
        }
    }
}

impl<S: Scalar, M: MetricSpace<S>> fmt::Debug for Measure<S, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, w)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a:?} ↦ {w}")?;
        }
        f.write_str("}")
    }
}

/// Exact equality of coalesced measures on equal spaces.
impl<S: Scalar, M: MetricSpace<S>> PartialEq for Measure<S, M> {
    fn eq(&self, other: &Self) -> bool {
        self.same_space(other)
            && self.atoms.len() == other.atoms.len()
            && self
                .atoms
                .iter()
                .zip(&other.atoms)
                .all(|(a, b)| a.point_eq(b))
            && self.weights == other.weights
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentValue<S, P> {
    pub p: Order,
    pub basepoint: P,
    pub value: S,
}

impl<S: Scalar, M: MetricSpace<S>> Measure<S, M> {
    /// Builds a measure from parallel atom and weight lists.
    ///
    /// Zero weights are pruned and repeated atoms coalesced. Exact mode
    /// requires the weights to sum to exactly one; float mode tolerates a
    /// drift of `1e-12` and renormalizes.
    pub fn new(space: Arc<M>, atoms: Vec<M::Point>, weights: Vec<S>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::LengthMismatch {
                atoms: atoms.len(),
                weights: weights.len(),
            });
        }
        for a in &atoms {
            space.check_point(a)?;
        }
        let mut total = S::zero();
        for w in &weights {
            if !w.is_finite() {
                return Err(Error::Parse(format!("non-finite weight {w}")));
            }
            if *w < S::zero() {
                return Err(Error::NegativeWeight(w.render()));
            }
            total = total + w.clone();
        }
        let drift = (total.clone() - S::one()).abs();
        if drift > S::weight_tolerance() {
            return Err(Error::Normalization(total.render()));
        }
        let weights = if total == S::one() {
            weights
        } else {
            weights.into_iter().map(|w| w / total.clone()).collect()
        };
        Self::from_parts(space, atoms, weights)
    }

    /// Sorts, coalesces and prunes without checking normalization.
    pub(crate) fn from_parts(space: Arc<M>, atoms: Vec<M::Point>, weights: Vec<S>) -> Result<Self> {
        let mut pairs: Vec<(M::Point, S)> = atoms
            .into_iter()
            .zip(weights)
            .filter(|(_, w)| *w > S::zero())
            .collect();
        if pairs.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        pairs.sort_by(|a, b| a.0.point_cmp(&b.0));
        let mut atoms: Vec<M::Point> = Vec::with_capacity(pairs.len());
        let mut weights: Vec<S> = Vec::with_capacity(pairs.len());
        for (a, w) in pairs {
            match atoms.last() {
                Some(last) if last.point_eq(&a) => {
                    let acc = weights.pop().unwrap_or_else(S::zero);
                    weights.push(acc + w);
                }
                _ => {
                    atoms.push(a);
                    weights.push(w);
                }
            }
        }
        Ok(Measure {
            space,
            atoms,
            weights,
        })
    }

    pub fn dirac(space: Arc<M>, x: M::Point) -> Result<Self> {
        space.check_point(&x)?;
        Ok(Measure {
            space,
            atoms: vec![x],
            weights: vec![S::one()],
        })
    }

    pub fn space(&self) -> &Arc<M> {
        &self.space
    }

    pub fn atoms(&self) -> &[M::Point] {
        &self.atoms
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&M::Point, &S)> {
        self.atoms.iter().zip(&self.weights)
    }

    /// The support is exactly the atom set.
    pub fn support(&self) -> &[M::Point] {
        &self.atoms
    }

    pub fn total_mass(&self) -> S {
        self.weights
            .iter()
            .fold(S::zero(), |acc, w| acc + w.clone())
    }

    /// Index of `x` among the atoms.
    pub fn position(&self, x: &M::Point) -> Option<usize> {
        self.atoms.binary_search_by(|a| a.point_cmp(x)).ok()
    }

    pub fn weight_of(&self, x: &M::Point) -> S {
        self.position(x)
            .map(|i| self.weights[i].clone())
            .unwrap_or_else(S::zero)
    }

    pub fn same_space(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || self.space == other.space
    }

    fn require_same_space(&self, other: &Self) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `r·self + (1-r)·other`.
    pub fn convex_sum(&self, other: &Self, r: &S) -> Result<Self> {
        self.require_same_space(other)?;
        check_unit(r)?;
        if *r == S::one() {
            return Ok(self.clone());
        }
        if *r == S::zero() {
            return Ok(other.clone());
        }
        let s = S::one() - r.clone();
        let mut atoms = Vec::with_capacity(self.len() + other.len());
        let mut weights = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() || j < other.len() {
            let ord = match (self.atoms.get(i), other.atoms.get(j)) {
                (Some(a), Some(b)) => a.point_cmp(b),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    atoms.push(self.atoms[i].clone());
                    weights.push(r.clone() * self.weights[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    atoms.push(other.atoms[j].clone());
                    weights.push(s.clone() * other.weights[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    atoms.push(self.atoms[i].clone());
                    weights.push(
                        r.clone() * self.weights[i].clone() + s.clone() * other.weights[j].clone(),
                    );
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Measure {
            space: self.space.clone(),
            atoms,
            weights,
        })
    }

    /// `Σ r_i μ_i` computed as a direct atom-wise mixture.
    pub fn finite_convex_sum(terms: &[(S, Measure<S, M>)]) -> Result<Self> {
        let first = terms.first().ok_or(Error::EmptyMeasure)?;
        check_convex_weights(terms.iter().map(|(r, _)| r))?;
        let mut atoms = Vec::new();
        let mut weights = Vec::new();
        for (r, mu) in terms {
            first.1.require_same_space(mu)?;
            for (a, w) in mu.iter() {
                atoms.push(a.clone());
                weights.push(r.clone() * w.clone());
            }
        }
        Self::from_parts(first.1.space.clone(), atoms, weights)
    }

    /// Image measure along `f`, coalescing colliding images.
    pub fn pushforward<T, F>(&self, target: Arc<T>, f: F) -> Result<Measure<S, T>>
    where
        T: MetricSpace<S>,
        F: Fn(&M::Point) -> T::Point,
    {
        let mut atoms = Vec::with_capacity(self.len());
        for a in &self.atoms {
            let b = f(a);
            target.check_point(&b)?;
            atoms.push(b);
        }
        Measure::from_parts(target, atoms, self.weights.clone())
    }

    /// `∫ d(x0, ·)^p dμ`.
    pub fn p_moment(&self, x0: &M::Point, p: Order) -> Result<MomentValue<S, M::Point>> {
        self.space.check_point(x0)?;
        let mut value = S::zero();
        for (a, w) in self.iter() {
            value = value + w.clone() * self.space.dist(x0, a).pow(p)?;
        }
        Ok(MomentValue {
            p,
            basepoint: x0.clone(),
            value,
        })
    }

    /// `max_x |μ(x) - ν(x)|` over the union of the supports.
    pub fn discrepancy(&self, other: &Self) -> Result<S> {
        self.require_same_space(other)?;
        let mut worst = S::zero();
        let (mut i, mut j) = (0, 0);
        while i < self.len() || j < other.len() {
            let ord = match (self.atoms.get(i), other.atoms.get(j)) {
                (Some(a), Some(b)) => a.point_cmp(b),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let diff = match ord {
                Ordering::Less => {
                    i += 1;
                    self.weights[i - 1].clone()
                }
                Ordering::Greater => {
                    j += 1;
                    other.weights[j - 1].clone()
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (self.weights[i - 1].clone() - other.weights[j - 1].clone()).abs()
                }
            };
            worst = S::max_of(worst, diff);
        }
        Ok(worst)
    }

    /// Equality up to the mode's weight tolerance (exact in exact mode).
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.discrepancy(other)
            .map(|d| d <= S::weight_tolerance())
            .unwrap_or(false)
    }
}

pub(crate) fn check_unit<S: Scalar>(r: &S) -> Result<()> {
    if *r < S::zero() || *r > S::one() || !r.is_finite() {
        Err(Error::WeightOutOfRange(r.render()))
    } else {
        Ok(())
    }
}

pub(crate) fn check_convex_weights<'a, S: Scalar>(weights: impl Iterator<Item = &'a S>) -> Result<()> {
    let mut total = S::zero();
    for r in weights {
        if *r < S::zero() || !r.is_finite() {
            return Err(Error::WeightOutOfRange(r.render()));
        }
        total = total + r.clone();
    }
    if (total.clone() - S::one()).abs() > S::weight_tolerance() {
        return Err(Error::Normalization(total.render()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{FiniteMetric, RealLine};
    use crate::scalar::Rational;

    type QLine = Measure<Rational, RealLine>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn line() -> Arc<RealLine> {
        Arc::new(RealLine)
    }

    fn qm(pairs: &[(i64, i64, i64)]) -> QLine {
        let atoms = pairs.iter().map(|&(a, _, _)| q(a, 1)).collect();
        let weights = pairs.iter().map(|&(_, n, d)| q(n, d)).collect();
        Measure::new(line(), atoms, weights).unwrap()
    }

    #[test]
    fn dirac_basics() {
        let d = QLine::dirac(line(), q(3, 1)).unwrap();
        assert_eq!(d.support(), &[q(3, 1)]);
        assert_eq!(d.weights(), &[q(1, 1)]);
        assert_eq!(d.p_moment(&q(3, 1), Order::TWO).unwrap().value, q(0, 1));
        assert!(Measure::<f64, _>::dirac(line(), f64::INFINITY).is_err());
    }

    #[test]
    fn construction_coalesces_and_prunes() {
        let m = Measure::new(
            line(),
            vec![q(2, 1), q(0, 1), q(2, 1), q(5, 1)],
            vec![q(1, 4), q(1, 2), q(1, 4), q(0, 1)],
        )
        .unwrap();
        assert_eq!(m.support(), &[q(0, 1), q(2, 1)]);
        assert_eq!(m.weights(), &[q(1, 2), q(1, 2)]);
    }

    #[test]
    fn construction_errors() {
        let l = line();
        assert!(matches!(
            Measure::new(l.clone(), vec![0.0, 1.0], vec![0.5, 0.4]),
            Err(Error::Normalization(_))
        ));
        assert!(matches!(
            Measure::new(l.clone(), vec![0.0, 1.0], vec![1.5, -0.5]),
            Err(Error::NegativeWeight(_))
        ));
        assert!(matches!(
            Measure::new(l.clone(), vec![0.0], vec![0.5, 0.5]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(Measure::<f64, _>::new(l.clone(), vec![], vec![]).is_err());
        // exact mode has no slack at all
        assert!(matches!(
            Measure::new(line(), vec![q(0, 1), q(1, 1)], vec![q(1, 3), q(2, 3) + q(1, 1_000_000_000)]),
            Err(Error::Normalization(_))
        ));
        let m = FiniteMetric::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            Measure::new(Arc::new(m), vec![2usize], vec![1.0]),
            Err(Error::PointOutsideSpace(_))
        ));
    }

    #[test]
    fn float_drift_is_renormalized() {
        let m = Measure::new(line(), vec![0.0, 1.0, 2.0], vec![0.1, 0.2, 0.7 + 5e-13]).unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn convex_sum_examples() {
        let a = QLine::dirac(line(), q(0, 1)).unwrap();
        let b = QLine::dirac(line(), q(1, 1)).unwrap();
        let mix = a.convex_sum(&b, &q(1, 2)).unwrap();
        assert_eq!(mix, qm(&[(0, 1, 2), (1, 1, 2)]));
        assert_eq!(mix.support(), &[q(0, 1), q(1, 1)]);
        let mu = qm(&[(0, 1, 3), (4, 2, 3)]);
        assert_eq!(mu.convex_sum(&mix, &q(1, 1)).unwrap(), mu);
        assert_eq!(mu.convex_sum(&mix, &q(0, 1)).unwrap(), mix);
        assert_eq!(mu.convex_sum(&mu, &q(2, 7)).unwrap(), mu);
        let both = mu.convex_sum(&mix, &q(1, 4)).unwrap();
        assert_eq!(both.support(), &[q(0, 1), q(1, 1), q(4, 1)]);
        assert_eq!(both.weight_of(&q(0, 1)), q(1, 12) + q(3, 8));
        assert!(matches!(mu.convex_sum(&mix, &q(3, 2)), Err(Error::WeightOutOfRange(_))));
    }

    #[test]
    fn convex_sum_rejects_mismatched_spaces() {
        let s1 = Arc::new(FiniteMetric::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());
        let s2 = Arc::new(FiniteMetric::new(vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap());
        let a = Measure::dirac(s1, 0).unwrap();
        let b = Measure::dirac(s2, 0).unwrap();
        assert!(matches!(a.convex_sum(&b, &0.5), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn finite_convex_sum_examples() {
        let mu = qm(&[(0, 1, 3), (4, 2, 3)]);
        assert_eq!(QLine::finite_convex_sum(&[(q(1, 1), mu.clone())]).unwrap(), mu);
        let d = |x| QLine::dirac(line(), q(x, 1)).unwrap();
        let mix = QLine::finite_convex_sum(&[(q(1, 2), d(0)), (q(1, 4), d(1)), (q(1, 4), d(2))]).unwrap();
        assert_eq!(mix, qm(&[(0, 1, 2), (1, 1, 4), (2, 1, 4)]));
        let proj = QLine::finite_convex_sum(&[(q(0, 1), d(0)), (q(1, 1), mu.clone()), (q(0, 1), d(7))])
            .unwrap();
        assert_eq!(proj, mu);
        assert!(matches!(QLine::finite_convex_sum(&[]), Err(Error::EmptyMeasure)));
        assert!(matches!(
            QLine::finite_convex_sum(&[(q(1, 2), d(0)), (q(1, 4), d(1))]),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn pushforward_examples() {
        let mu = qm(&[(0, 1, 2), (1, 1, 2)]);
        assert_eq!(mu.pushforward(line(), |x| x.clone()).unwrap(), mu);
        let collapsed = mu.pushforward(line(), |_| q(0, 1)).unwrap();
        assert_eq!(collapsed, QLine::dirac(line(), q(0, 1)).unwrap());
        assert_eq!(collapsed.total_mass(), q(1, 1));
        let fm = Arc::new(FiniteMetric::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());
        let m = Measure::new(line(), vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert!(m.pushforward(fm, |x| *x as usize + 1).is_err());
    }

    #[test]
    fn moments() {
        let mu = qm(&[(0, 1, 2), (2, 1, 2)]);
        assert_eq!(mu.p_moment(&q(0, 1), Order::TWO).unwrap().value, q(2, 1));
        assert!(Order::new(0.5).is_err());
        // basepoint change obeys d(x,y)^p <= 2^{p-1}(d(x,z)^p + d(z,y)^p)
        let p = Order::THREE;
        let m0 = mu.p_moment(&q(0, 1), p).unwrap().value;
        let m5 = mu.p_moment(&q(5, 1), p).unwrap().value;
        let shift = q(5, 1).powi(3);
        assert!(m5 <= q(4, 1) * (m0.clone() + shift.clone()));
        assert!(m0 <= q(4, 1) * (m5 + shift));
    }

    #[test]
    fn discrepancy_is_sup_norm() {
        let a = qm(&[(0, 1, 2), (1, 1, 2)]);
        let b = qm(&[(1, 1, 4), (2, 3, 4)]);
        assert_eq!(a.discrepancy(&b).unwrap(), q(3, 4));
        assert_eq!(a.discrepancy(&a).unwrap(), q(0, 1));
    }
}
