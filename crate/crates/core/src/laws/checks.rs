//! Single-instance law checks.
//!
//! Every check returns an [`Outcome`]: equality laws compare the
//! discrepancy of both sides against zero; inequality laws compare p-th
//! powers of distances so exact mode never takes a root.

use crate::error::{Error, Result};
use crate::laws::algebra::{convex_combination, dyadic_combination, Barycentric, Midpoint, WassersteinAlgebra};
use crate::laws::report::Outcome;
use crate::measure::check_unit;
use crate::scalar::{Order, Scalar};

fn equal<S: Scalar, T: Barycentric<S>>(lhs: &T, rhs: &T) -> Result<Outcome<S>> {
    Ok(Outcome::equality(lhs.discrepancy(rhs)?))
}

fn le<S: Scalar>(lhs: S, rhs: S) -> Outcome<S> {
    Outcome::inequality(lhs, rhs, S::law_tolerance())
}

/// B1: `x +_1 y = x`.
pub fn check_b1<S: Scalar, T: Barycentric<S>>(x: &T, y: &T) -> Result<Outcome<S>> {
    equal(&x.mix(y, &S::one())?, x)
}

/// B2: `x +_r x = x`.
pub fn check_b2<S: Scalar, T: Barycentric<S>>(x: &T, r: &S) -> Result<Outcome<S>> {
    equal(&x.mix(x, r)?, x)
}

/// SC: `x +_r y = y +_{1-r} x`.
pub fn check_sc<S: Scalar, T: Barycentric<S>>(x: &T, y: &T, r: &S) -> Result<Outcome<S>> {
    equal(&x.mix(y, r)?, &y.mix(x, &(S::one() - r.clone()))?)
}

/// Inner weight of skew associativity, `(r - pr)/(1 - pr)`.
///
/// At `pr = 1` the outer weight is 1 and the inner value is irrelevant, so
/// we return 1 there; float mode treats `1 - pr < 1e-15` the same way.
pub fn skew_inner_weight<S: Scalar>(p: &S, r: &S) -> S {
    let pr = p.clone() * r.clone();
    let denom = S::one() - pr.clone();
    let guard = S::from_f64(1e-15).filter(|_| S::MODE == crate::scalar::Mode::Float);
    let singular = match guard {
        Some(g) => denom <= g,
        None => denom == S::zero(),
    };
    if singular {
        return S::one();
    }
    let w = (r.clone() - pr) / denom;
    S::min_of(S::max_of(w, S::zero()), S::one())
}

/// SA: `(x +_p y) +_r z = x +_{pr} (y +_{(r-pr)/(1-pr)} z)`.
pub fn check_sa<S: Scalar, T: Barycentric<S>>(x: &T, y: &T, z: &T, p: &S, r: &S) -> Result<Outcome<S>> {
    check_unit(p)?;
    check_unit(r)?;
    let lhs = x.mix(y, p)?.mix(z, r)?;
    let inner = y.mix(z, &skew_inner_weight(p, r))?;
    let rhs = x.mix(&inner, &(p.clone() * r.clone()))?;
    equal(&lhs, &rhs)
}

/// Projection: `Σ_i δ_ik x_i = x_k`.
pub fn check_projection<S: Scalar, T: Barycentric<S>>(xs: &[T], k: usize) -> Result<Outcome<S>> {
    let xk = xs
        .get(k)
        .ok_or_else(|| Error::InvalidParameter(format!("index {k} out of range")))?;
    let terms: Vec<(S, T)> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| (if i == k { S::one() } else { S::zero() }, x.clone()))
        .collect();
    equal(&convex_combination(&terms)?, xk)
}

/// Barycentre: `Σ_i r_i (Σ_k s_ik x_k) = Σ_k (Σ_i r_i s_ik) x_k`.
pub fn check_barycentre<S: Scalar, T: Barycentric<S>>(r: &[S], s: &[Vec<S>], xs: &[T]) -> Result<Outcome<S>> {
    if r.len() != s.len() || s.iter().any(|row| row.len() != xs.len()) {
        return Err(Error::InvalidParameter("barycentre: shape mismatch".into()));
    }
    let inner = s
        .iter()
        .map(|row| {
            let terms: Vec<(S, T)> = row.iter().cloned().zip(xs.iter().cloned()).collect();
            convex_combination(&terms)
        })
        .collect::<Result<Vec<T>>>()?;
    let lhs_terms: Vec<(S, T)> = r.iter().cloned().zip(inner).collect();
    let lhs = convex_combination(&lhs_terms)?;
    let combined: Vec<(S, T)> = (0..xs.len())
        .map(|k| {
            let w = r
                .iter()
                .zip(s)
                .fold(S::zero(), |acc, (ri, row)| acc + ri.clone() * row[k].clone());
            (w, xs[k].clone())
        })
        .collect();
    let rhs = convex_combination(&combined)?;
    equal(&lhs, &rhs)
}

/// C: `x ⊕ y = y ⊕ x`.
pub fn check_midpoint_commutative<S: Scalar, T: Barycentric<S> + Midpoint>(x: &T, y: &T) -> Result<Outcome<S>> {
    equal(&x.midpoint(y)?, &y.midpoint(x)?)
}

/// I: `x ⊕ x = x`.
pub fn check_midpoint_idempotent<S: Scalar, T: Barycentric<S> + Midpoint>(x: &T) -> Result<Outcome<S>> {
    equal(&x.midpoint(x)?, x)
}

/// M: `(x ⊕ u) ⊕ (v ⊕ z) = (x ⊕ v) ⊕ (u ⊕ z)`.
pub fn check_midpoint_medial<S: Scalar, T: Barycentric<S> + Midpoint>(x: &T, u: &T, v: &T, z: &T) -> Result<Outcome<S>> {
    let lhs = x.midpoint(u)?.midpoint(&v.midpoint(z)?)?;
    let rhs = x.midpoint(v)?.midpoint(&u.midpoint(z)?)?;
    equal(&lhs, &rhs)
}

/// Iterated midpoints agree with `x +_{num/den} y`.
pub fn check_dyadic<S: Scalar, T: Barycentric<S> + Midpoint>(x: &T, y: &T, num: u64, den: u64) -> Result<Outcome<S>> {
    let via_midpoints = dyadic_combination(x, y, num, den)?;
    let r = S::from_ratio(num as i64, den as i64);
    equal(&via_midpoints, &x.mix(y, &r)?)
}

/// Dyadic truncation `r_k = floor(2^k r) / 2^k` approximates `+_r`:
/// `d(x +_{r_k} y, x +_r y)^p <= (r - r_k) d(x,y)^p`, so the iterated
/// midpoints converge to `x +_r y` as `k` grows.
pub fn check_dyadic_limit<S, T>(x: &T, y: &T, r: &S, level: u32, p: Order) -> Result<Outcome<S>>
where
    S: Scalar,
    T: WassersteinAlgebra<S> + Midpoint,
{
    check_unit(r)?;
    let den = 1u64 << level;
    let scaled = (r.clone() * S::from_ratio(den as i64, 1)).floor();
    let num = scaled.to_f64().round() as u64;
    let truncated = S::from_ratio(num as i64, den as i64);
    let lhs = dyadic_combination(x, y, num, den)?.distance_pow(&x.mix(y, r)?, p)?;
    Ok(le(lhs, (r.clone() - truncated) * x.distance_pow(y, p)?))
}

/// `d(x +_r y, x' +_r y')^p <= r d(x,x')^p + (1-r) d(y,y')^p`.
pub fn check_wasserstein_condition<S: Scalar, T: WassersteinAlgebra<S>>(
    x: &T,
    x2: &T,
    y: &T,
    y2: &T,
    r: &S,
    p: Order,
) -> Result<Outcome<S>> {
    let lhs = x.mix(y, r)?.distance_pow(&x2.mix(y2, r)?, p)?;
    let rhs = r.clone() * x.distance_pow(x2, p)?
        + (S::one() - r.clone()) * y.distance_pow(y2, p)?;
    Ok(le(lhs, rhs))
}

/// `+_r` is `r^{1/p}`-Lipschitz in its first argument and
/// `(1-r)^{1/p}`-Lipschitz in its second:
/// `d(x +_r y, x' +_r y)^p <= r d(x,x')^p` and
/// `d(y +_r x, y +_r x')^p <= (1-r) d(x,x')^p`.
pub fn check_lipschitz_in_args<S: Scalar, T: WassersteinAlgebra<S>>(
    x: &T,
    x2: &T,
    y: &T,
    r: &S,
    p: Order,
) -> Result<Outcome<S>> {
    let dxx = x.distance_pow(x2, p)?;
    let first = le(
        x.mix(y, r)?.distance_pow(&x2.mix(y, r)?, p)?,
        r.clone() * dxx.clone(),
    );
    let second = le(
        y.mix(x, r)?.distance_pow(&y.mix(x2, r)?, p)?,
        (S::one() - r.clone()) * dxx,
    );
    Ok(first.and(second))
}

/// `d(x +_r y, x +_s y)^p <= d(x,y)^p |r - s|`.
pub fn check_holder_in_r<S: Scalar, T: WassersteinAlgebra<S>>(
    x: &T,
    y: &T,
    r: &S,
    s: &S,
    p: Order,
) -> Result<Outcome<S>> {
    let lhs = x.mix(y, r)?.distance_pow(&x.mix(y, s)?, p)?;
    let rhs = x.distance_pow(y, p)? * (r.clone() - s.clone()).abs();
    Ok(le(lhs, rhs))
}

/// `d(Σ r_i x_i, Σ r_i x'_i)^p <= Σ r_i d(x_i, x'_i)^p`.
pub fn check_generalized_condition<S: Scalar, T: WassersteinAlgebra<S>>(
    pairs: &[(S, T, T)],
    p: Order,
) -> Result<Outcome<S>> {
    let left: Vec<(S, T)> = pairs.iter().map(|(r, x, _)| (r.clone(), x.clone())).collect();
    let right: Vec<(S, T)> = pairs.iter().map(|(r, _, x)| (r.clone(), x.clone())).collect();
    let lhs = convex_combination(&left)?.distance_pow(&convex_combination(&right)?, p)?;
    let mut rhs = S::zero();
    for (r, x, x2) in pairs {
        rhs = rhs + r.clone() * x.distance_pow(x2, p)?;
    }
    Ok(le(lhs, rhs))
}

/// `+_r` is nonexpansive for the max metric on the product:
/// `d(x +_r y, x' +_r y')^p <= max(d(x,x'), d(y,y'))^p`.
pub fn check_nonexpansive<S: Scalar, T: WassersteinAlgebra<S>>(
    x: &T,
    x2: &T,
    y: &T,
    y2: &T,
    r: &S,
    p: Order,
) -> Result<Outcome<S>> {
    let lhs = x.mix(y, r)?.distance_pow(&x2.mix(y2, r)?, p)?;
    let rhs = S::max_of(x.distance_pow(x2, p)?, y.distance_pow(y2, p)?);
    Ok(le(lhs, rhs))
}

/// Soundness of `x =_{q1} y, x' =_{q2} y' ⊢ x +_r x' =_e y +_r y'` for
/// `r q1^p + (1-r) q2^p <= e^p`.
///
/// Rejects instances violating the side condition; reports vacuous when
/// a premise fails on the given elements.
#[allow(clippy::too_many_arguments)]
pub fn check_quantitative_inference<S: Scalar, T: WassersteinAlgebra<S>>(
    x: &T,
    y: &T,
    x2: &T,
    y2: &T,
    r: &S,
    q1: &S,
    q2: &S,
    e: &S,
    p: Order,
) -> Result<Outcome<S>> {
    check_unit(r)?;
    for (name, v) in [("q1", q1), ("q2", q2), ("e", e)] {
        if *v < S::zero() || *v > S::one() {
            return Err(Error::IllFormedAxiom(format!("{name} = {} not in [0,1]", v.render())));
        }
    }
    let (q1p, q2p, ep) = (q1.pow(p)?, q2.pow(p)?, e.pow(p)?);
    let side = r.clone() * q1p.clone() + (S::one() - r.clone()) * q2p.clone();
    if side > ep {
        return Err(Error::IllFormedAxiom(format!(
            "r q1^p + (1-r) q2^p = {} exceeds e^p = {}",
            side.render(),
            ep.render()
        )));
    }
    if x.distance_pow(y, p)? > q1p || x2.distance_pow(y2, p)? > q2p {
        return Ok(Outcome::vacuous());
    }
    let lhs = x.mix(x2, r)?.distance_pow(&y.mix(y2, r)?, p)?;
    Ok(Outcome::inequality(lhs, ep, S::law_tolerance()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::algebra::Affine;
    use crate::measure::Measure;
    use crate::metric::RealLine;
    use crate::scalar::Rational;
    use std::sync::Arc;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn m(atoms: &[i64], weights: &[(i64, i64)]) -> Measure<Rational, RealLine> {
        Measure::new(
            Arc::new(RealLine),
            atoms.iter().map(|&a| q(a, 1)).collect(),
            weights.iter().map(|&(n, d)| q(n, d)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn dyadic_limit_is_tight_between_two_diracs() {
        // W_1 between r_k δ0 + (1-r_k) δ1 and r δ0 + (1-r) δ1 moves r - r_k mass by 1.
        let (x, y) = (m(&[0], &[(1, 1)]), m(&[1], &[(1, 1)]));
        for k in 1..=8u32 {
            let den = 1i64 << k;
            let o = check_dyadic_limit(&x, &y, &q(1, 3), k, Order::ONE).unwrap();
            assert_eq!(o.lhs, q(1, 3) - q(den / 3, den));
            assert_eq!(o.lhs, o.rhs);
        }
        let o = check_dyadic_limit(&x, &y, &q(5, 8), 3, Order::TWO).unwrap();
        assert_eq!((o.lhs, o.rhs), (q(0, 1), q(0, 1)));
    }

    #[test]
    fn sa_singular_corner() {
        assert_eq!(skew_inner_weight(&q(1, 1), &q(1, 1)), q(1, 1));
        assert_eq!(skew_inner_weight(&q(1, 2), &q(1, 2)), q(1, 3));
        let (x, y, z) = (m(&[0], &[(1, 1)]), m(&[1], &[(1, 1)]), m(&[2], &[(1, 1)]));
        for (p, r) in [(q(1, 1), q(1, 1)), (q(1, 1), q(1, 3)), (q(0, 1), q(1, 1)), (q(2, 5), q(3, 7))] {
            assert!(check_sa(&x, &y, &z, &p, &r).unwrap().holds());
        }
        let (a, b, c) = (Affine(0.0), Affine(1.0), Affine(2.0));
        assert!(check_sa(&a, &b, &c, &1.0f64, &(1.0 - 1e-16)).unwrap().holds());
    }

    #[test]
    fn wasserstein_condition_degenerate_cases() {
        let x = m(&[0, 3], &[(1, 2), (1, 2)]);
        let y = m(&[1], &[(1, 1)]);
        let o = check_wasserstein_condition(&x, &x, &y, &y, &q(1, 3), Order::TWO).unwrap();
        assert_eq!(o.lhs, q(0, 1));
        assert_eq!(o.slack(), q(0, 1));
        let x2 = m(&[5], &[(1, 1)]);
        let o = check_wasserstein_condition(&x, &x2, &y, &y, &q(1, 1), Order::TWO).unwrap();
        assert_eq!(o.slack(), q(0, 1));
    }

    #[test]
    fn lipschitz_r_zero_and_one() {
        let (a, b) = (m(&[0], &[(1, 1)]), m(&[4], &[(1, 1)]));
        let y = m(&[1, 2], &[(1, 2), (1, 2)]);
        let o = check_lipschitz_in_args(&a, &b, &y, &q(0, 1), Order::ONE).unwrap();
        assert!(o.holds());
        let o = check_lipschitz_in_args(&a, &b, &y, &q(1, 1), Order::ONE).unwrap();
        assert!(o.holds());
        assert_eq!(o.slack(), q(0, 1));
    }

    #[test]
    fn holder_examples() {
        let (x, y) = (m(&[0], &[(1, 1)]), m(&[1], &[(1, 1)]));
        let o = check_holder_in_r(&x, &y, &q(1, 3), &q(1, 3), Order::TWO).unwrap();
        assert_eq!((o.lhs.clone(), o.rhs.clone()), (q(0, 1), q(0, 1)));
        let o = check_holder_in_r(&x, &y, &q(1, 1), &q(0, 1), Order::TWO).unwrap();
        assert_eq!((o.lhs.clone(), o.rhs.clone()), (q(1, 1), q(1, 1)));
    }

    #[test]
    fn generalized_reduces_to_binary() {
        let (x, x2) = (m(&[0], &[(1, 1)]), m(&[2], &[(1, 1)]));
        let (y, y2) = (m(&[1, 3], &[(1, 2), (1, 2)]), m(&[3], &[(1, 1)]));
        let r = q(1, 4);
        let bin = check_wasserstein_condition(&x, &x2, &y, &y2, &r, Order::TWO).unwrap();
        let gen = check_generalized_condition(
            &[(r.clone(), x.clone(), x2.clone()), (q(3, 4), y.clone(), y2.clone())],
            Order::TWO,
        )
        .unwrap();
        assert_eq!(bin, gen);
        let same = check_generalized_condition(&[(q(1, 1), x.clone(), x.clone())], Order::TWO).unwrap();
        assert_eq!((same.lhs, same.rhs), (q(0, 1), q(0, 1)));
    }

    #[test]
    fn inference_side_condition_and_vacuity() {
        let (x, y) = (Affine(q(0, 1)), Affine(q(1, 4)));
        let (x2, y2) = (Affine(q(1, 2)), Affine(q(1, 2)));
        let r = q(1, 2);
        // q1 = q2 = 0 forces equality of the premises
        let o = check_quantitative_inference(&x, &x, &x2, &x2, &r, &q(0, 1), &q(0, 1), &q(0, 1), Order::TWO).unwrap();
        assert!(o.holds() && !o.vacuous);
        assert_eq!(o.lhs, q(0, 1));
        let err = check_quantitative_inference(&x, &y, &x2, &y2, &r, &q(1, 2), &q(1, 2), &q(1, 4), Order::TWO);
        assert!(matches!(err, Err(Error::IllFormedAxiom(_))));
        let vac = check_quantitative_inference(&x, &y, &x2, &y2, &r, &q(0, 1), &q(0, 1), &q(0, 1), Order::TWO).unwrap();
        assert!(vac.vacuous);
        // sound instance: d = 1/4, q1 = 1/4, q2 = 0, e^2 >= 1/32
        let o = check_quantitative_inference(&x, &y, &x2, &y2, &r, &q(1, 4), &q(0, 1), &q(1, 5), Order::TWO).unwrap();
        assert!(o.holds());
    }

    #[test]
    fn midpoint_laws_on_reals() {
        let (a, b, c, d) = (Affine(q(1, 3)), Affine(q(2, 1)), Affine(q(-5, 7)), Affine(q(9, 2)));
        assert!(check_midpoint_commutative(&a, &b).unwrap().holds());
        assert!(check_midpoint_idempotent::<Rational, _>(&a).unwrap().holds());
        assert!(check_midpoint_medial(&a, &b, &c, &d).unwrap().holds());
        assert!(check_dyadic(&a, &b, 5, 8).unwrap().holds());
    }

    /// A deliberately broken carrier: `x +_r y = r x + r y`.
    #[derive(Debug, Clone, PartialEq)]
    struct Broken(Rational);

    impl Barycentric<Rational> for Broken {
        fn mix(&self, other: &Self, r: &Rational) -> Result<Self> {
            Ok(Broken(r.clone() * (self.0.clone() + other.0.clone())))
        }
        fn discrepancy(&self, other: &Self) -> Result<Rational> {
            Ok((self.0.clone() - other.0.clone()).abs())
        }
    }

    #[test]
    fn checks_catch_a_broken_algebra() {
        let (x, y) = (Broken(q(1, 1)), Broken(q(3, 1)));
        assert!(!check_b1(&x, &y).unwrap().holds());
        assert!(!check_b2(&x, &q(1, 3)).unwrap().holds());
        assert!(!check_sc(&x, &y, &q(1, 3)).unwrap().holds());
    }
}
