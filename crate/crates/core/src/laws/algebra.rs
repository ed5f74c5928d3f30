//! Barycentric algebras, their convex-space and midpoint views, and free
//! extension of maps along the Dirac embedding.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::measure::{check_convex_weights, check_unit, Measure};
use crate::metric::MetricSpace;
use crate::scalar::{Mode, Order, Scalar};
use crate::transport::optimal_coupling;

/// A set with binary convex combinations `x +_r y`, `r ∈ [0,1]`.
pub trait Barycentric<S: Scalar>: Clone + Debug + Send + Sync {
    /// `self +_r other`.
    fn mix(&self, other: &Self, r: &S) -> Result<Self>;

    /// Zero iff the two elements are equal.
    fn discrepancy(&self, other: &Self) -> Result<S>;
}

/// A barycentric algebra on a metric space satisfying
/// `d(x +_r y, x' +_r y')^p <= r d(x,x')^p + (1-r) d(y,y')^p`.
pub trait WassersteinAlgebra<S: Scalar>: Barycentric<S> {
    /// `d(self, other)^p`. Exact in exact mode.
    fn distance_pow(&self, other: &Self, p: Order) -> Result<S>;
}

impl<S: Scalar, M: MetricSpace<S>> Barycentric<S> for Measure<S, M> {
    fn mix(&self, other: &Self, r: &S) -> Result<Self> {
        self.convex_sum(other, r)
    }

    fn discrepancy(&self, other: &Self) -> Result<S> {
        Measure::discrepancy(self, other)
    }
}

impl<S: Scalar, M: MetricSpace<S>> WassersteinAlgebra<S> for Measure<S, M> {
    fn distance_pow(&self, other: &Self, p: Order) -> Result<S> {
        Ok(optimal_coupling(self, other, p)?.cost_p)
    }
}

/// The real line as a convex set: `x +_r y = r x + (1-r) y`, `d = |x - y|`.
/// A Wasserstein algebra of every order by convexity of `t ↦ |t|^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine<S>(pub S);

impl<S: Scalar> Barycentric<S> for Affine<S> {
    fn mix(&self, other: &Self, r: &S) -> Result<Self> {
        check_unit(r)?;
        if *r == S::one() {
            return Ok(self.clone());
        }
        if *r == S::zero() {
            return Ok(other.clone());
        }
        Ok(Affine(
            r.clone() * self.0.clone() + (S::one() - r.clone()) * other.0.clone(),
        ))
    }

    fn discrepancy(&self, other: &Self) -> Result<S> {
        Ok((self.0.clone() - other.0.clone()).abs())
    }
}

impl<S: Scalar> WassersteinAlgebra<S> for Affine<S> {
    fn distance_pow(&self, other: &Self, p: Order) -> Result<S> {
        (self.0.clone() - other.0.clone()).abs().pow(p)
    }
}

/// `Σ r_i x_i` by the inductive definition
/// `Σ r_i x_i = x_1 +_{r_1} Σ_{i>=2} (r_i / (1 - r_1)) x_i`.
pub fn convex_combination<S: Scalar, T: Barycentric<S>>(terms: &[(S, T)]) -> Result<T> {
    if terms.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    check_convex_weights(terms.iter().map(|(r, _)| r))?;
    fold_terms(terms)
}

fn fold_terms<S: Scalar, T: Barycentric<S>>(terms: &[(S, T)]) -> Result<T> {
    let (r1, x1) = &terms[0];
    if terms.len() == 1 {
        return Ok(x1.clone());
    }
    let rest_mass = S::one() - r1.clone();
    // r_1 = 1 up to rounding: the tail carries no mass
    if rest_mass <= S::weight_tolerance() * S::from_ratio(terms.len() as i64, 1) {
        return Ok(x1.clone());
    }
    let rest: Vec<(S, T)> = terms[1..]
        .iter()
        .map(|(r, x)| (r.clone() / rest_mass.clone(), x.clone()))
        .collect();
    let tail = fold_terms(&rest)?;
    let r1 = if *r1 > S::one() { S::one() } else { r1.clone() };
    x1.mix(&tail, &r1)
}

/// `x ⊕ y = x +_{1/2} y`.
pub fn midpoint<S: Scalar, T: Barycentric<S>>(x: &T, y: &T) -> Result<T> {
    x.mix(y, &S::half())
}

/// A commutative, idempotent, medial binary operation.
pub trait Midpoint: Sized {
    fn midpoint(&self, other: &Self) -> Result<Self>;
}

impl<S: Scalar, M: MetricSpace<S>> Midpoint for Measure<S, M> {
    fn midpoint(&self, other: &Self) -> Result<Self> {
        self.convex_sum(other, &S::half())
    }
}

impl<S: Scalar> Midpoint for Affine<S> {
    fn midpoint(&self, other: &Self) -> Result<Self> {
        self.mix(other, &S::half())
    }
}

/// `x +_{num/den} y` for dyadic `den`, using only midpoints:
/// `x +_r y = (x +_{2r} y) ⊕ y` for `r <= 1/2` and
/// `x +_r y = x ⊕ (x +_{2r-1} y)` otherwise.
pub fn dyadic_combination<T: Midpoint + Clone>(x: &T, y: &T, num: u64, den: u64) -> Result<T> {
    if den == 0 || !den.is_power_of_two() {
        return Err(Error::NotDyadic(den));
    }
    if num > den {
        return Err(Error::WeightOutOfRange(format!("{num}/{den}")));
    }
    if num == 0 {
        return Ok(y.clone());
    }
    if num == den {
        return Ok(x.clone());
    }
    let half = den / 2;
    if num <= half {
        dyadic_combination(x, y, num, half)?.midpoint(y)
    } else {
        x.midpoint(&dyadic_combination(x, y, num - half, half)?)
    }
}

/// `f̄(μ) = Σ_{s ∈ supp μ} μ(s) f(s)`, the affine extension of `f` along
/// the Dirac embedding.
pub fn free_extension<S, M, T, F>(f: F, mu: &Measure<S, M>) -> Result<T>
where
    S: Scalar,
    M: MetricSpace<S>,
    T: Barycentric<S>,
    F: Fn(&M::Point) -> Result<T>,
{
    let terms = mu
        .iter()
        .map(|(a, w)| Ok((w.clone(), f(a)?)))
        .collect::<Result<Vec<_>>>()?;
    // measure weights may carry float drift from earlier mixing
    match S::MODE {
        Mode::Exact => convex_combination(&terms),
        Mode::Float => fold_terms(&terms),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::RealLine;
    use crate::scalar::Rational;
    use std::sync::Arc;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn dirac(x: i64) -> Measure<Rational, RealLine> {
        Measure::dirac(Arc::new(RealLine), q(x, 1)).unwrap()
    }

    #[test]
    fn fold_matches_direct_mixture() {
        let terms = vec![(q(1, 2), dirac(0)), (q(1, 4), dirac(1)), (q(1, 4), dirac(2))];
        let folded = convex_combination(&terms).unwrap();
        assert_eq!(folded, Measure::finite_convex_sum(&terms).unwrap());
        let proj = vec![(q(0, 1), dirac(0)), (q(1, 1), dirac(1)), (q(0, 1), dirac(2))];
        assert_eq!(convex_combination(&proj).unwrap(), dirac(1));
        let first = vec![(q(1, 1), dirac(3)), (q(0, 1), dirac(1))];
        assert_eq!(convex_combination(&first).unwrap(), dirac(3));
    }

    #[test]
    fn convex_combination_errors() {
        assert!(convex_combination::<Rational, Affine<Rational>>(&[]).is_err());
        assert!(convex_combination(&[(q(1, 2), Affine(q(1, 1)))]).is_err());
        assert!(convex_combination(&[(q(3, 2), Affine(q(1, 1))), (q(-1, 2), Affine(q(0, 1)))]).is_err());
    }

    #[test]
    fn midpoint_examples() {
        let m = midpoint(&dirac(0), &dirac(1)).unwrap();
        let expected = Measure::new(Arc::new(RealLine), vec![q(0, 1), q(1, 1)], vec![q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(m, expected);
        assert_eq!(dirac(4).midpoint(&dirac(4)).unwrap(), dirac(4));
    }

    #[test]
    fn dyadic_examples() {
        let (x, y) = (dirac(0), dirac(5));
        assert_eq!(dyadic_combination(&x, &y, 1, 2).unwrap(), x.midpoint(&y).unwrap());
        let three_quarters = dyadic_combination(&x, &y, 3, 4).unwrap();
        assert_eq!(three_quarters, x.midpoint(&x.midpoint(&y).unwrap()).unwrap());
        assert_eq!(three_quarters, x.convex_sum(&y, &q(3, 4)).unwrap());
        assert_eq!(dyadic_combination(&x, &y, 64, 64).unwrap(), x);
        assert_eq!(dyadic_combination(&x, &y, 0, 8).unwrap(), y);
        assert!(matches!(dyadic_combination(&x, &y, 1, 3), Err(Error::NotDyadic(3))));
        assert!(dyadic_combination(&x, &y, 5, 4).is_err());
    }

    #[test]
    fn free_extension_basics() {
        let f = |x: &Rational| Ok(Affine(x.clone() * q(1, 2) + q(1, 1)));
        assert_eq!(free_extension(f, &dirac(4)).unwrap(), Affine(q(3, 1)));
        let mu = Measure::new(Arc::new(RealLine), vec![q(0, 1), q(2, 1)], vec![q(1, 4), q(3, 4)]).unwrap();
        // mean of the image points
        assert_eq!(free_extension(f, &mu).unwrap(), Affine(q(1, 4) + q(3, 4) * q(2, 1)));
        let line = Arc::new(RealLine);
        let id = free_extension(|x: &Rational| Measure::dirac(line.clone(), x.clone()), &mu).unwrap();
        assert_eq!(id, mu);
    }

    #[test]
    fn affine_carrier_distance() {
        assert_eq!(Affine(q(1, 1)).distance_pow(&Affine(q(4, 1)), Order::TWO).unwrap(), q(9, 1));
        assert_eq!(Affine(2.0).mix(&Affine(4.0), &0.25).unwrap(), Affine(3.5));
    }
}
