//! Truncated power and Laurent series with exact coefficients.
//!
//! A [`TruncatedSeries`] stores the coefficients of `x^e` for
//! `lowest_exponent <= e < order`. Coefficients at or past `order` are unknown,
//! which is different from zero; every operation reports the order it can
//! actually guarantee. Laurent series in `1/z` are handled by working in the
//! variable `w = 1/z`, so a polynomial in `z` becomes a series with a negative
//! lowest exponent.

use crate::exact::{gen_binomial, ExactRational};
use crate::poly::RationalPolynomial;

/// Order of a series that is known exactly (a finite Laurent polynomial).
pub const EXACT: i64 = i64::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("inner series has nonzero constant term; composition does not converge")]
    NonNilpotentInner,
    #[error("outer series has negative exponents; composition needs a power series")]
    NotAPowerSeries,
    #[error("requested coefficient of x^{exponent} is past the known order {order}")]
    BeyondOrder { exponent: i64, order: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    lowest_exponent: i64,
    coeffs: Vec<ExactRational>,
    order: i64,
}

impl TruncatedSeries {
    /// Builds a series, dropping stored coefficients at or past `order`.
    pub fn new(lowest_exponent: i64, mut coeffs: Vec<ExactRational>, order: i64) -> Self {
        let known = order.saturating_sub(lowest_exponent).max(0);
        if (coeffs.len() as i64) > known {
            coeffs.truncate(known as usize);
        }
        Self {
            lowest_exponent,
            coeffs,
            order,
        }
    }

    /// A finite Laurent polynomial, known to every order.
    pub fn exact(lowest_exponent: i64, coeffs: Vec<ExactRational>) -> Self {
        Self::new(lowest_exponent, coeffs, EXACT)
    }

    pub fn from_polynomial(p: &RationalPolynomial, order: i64) -> Self {
        Self::new(0, p.coeffs().to_vec(), order)
    }

    /// `p(z)` rewritten in `w = 1/z`: the coefficient of `z^k` moves to `w^-k`.
    pub fn from_polynomial_in_inverse(p: &RationalPolynomial) -> Self {
        match p.degree().finite() {
            None => Self::exact(0, Vec::new()),
            Some(d) => {
                let coeffs = p.coeffs().iter().rev().cloned().collect();
                Self::exact(-(d as i64), coeffs)
            }
        }
    }

    pub fn lowest_exponent(&self) -> i64 {
        self.lowest_exponent
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order == EXACT
    }

    /// Stored coefficients, starting at `lowest_exponent`.
    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Coefficient of `x^exponent`, or an error when it lies past the known order.
    pub fn coeff(&self, exponent: i64) -> Result<ExactRational, SeriesError> {
        if exponent >= self.order {
            return Err(SeriesError::BeyondOrder {
                exponent,
                order: self.order,
            });
        }
        Ok(self.coeff_unchecked(exponent))
    }

    fn coeff_unchecked(&self, exponent: i64) -> ExactRational {
        let idx = exponent - self.lowest_exponent;
        if idx < 0 {
            return ExactRational::zero();
        }
        self.coeffs.get(idx as usize).cloned().unwrap_or_default()
    }

    /// Last exponent that has a stored (possibly zero) slot, plus one.
    fn stored_end(&self) -> i64 {
        self.lowest_exponent + self.coeffs.len() as i64
    }

    /// Re-truncates to a lower order.
    pub fn truncate(&self, order: i64) -> Self {
        Self::new(
            self.lowest_exponent,
            self.coeffs.clone(),
            order.min(self.order),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, true)
    }

    fn combine(&self, rhs: &Self, negate: bool) -> Self {
        let order = self.order.min(rhs.order);
        let lo = self.lowest_exponent.min(rhs.lowest_exponent);
        let hi = self.stored_end().max(rhs.stored_end()).min(order);
        let coeffs = (lo..hi.max(lo))
            .map(|e| {
                let b = rhs.coeff_unchecked(e);
                self.coeff_unchecked(e) + if negate { -b } else { b }
            })
            .collect();
        Self::new(lo, coeffs, order)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let lo = self.lowest_exponent + rhs.lowest_exponent;
        let shift = |order: i64, by: i64| if order == EXACT { EXACT } else { order + by };
        let order =
            shift(self.order, rhs.lowest_exponent).min(shift(rhs.order, self.lowest_exponent));
        let full = (self.coeffs.len() + rhs.coeffs.len()).saturating_sub(1);
        let keep = if order == EXACT {
            full
        } else {
            (order - lo).clamp(0, full as i64) as usize
        };
        let mut out = vec![ExactRational::zero(); keep];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= keep {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(keep - i) {
                out[i + j] += &(a * b);
            }
        }
        Self::new(lo, out, order)
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self::new(
            self.lowest_exponent,
            self.coeffs.iter().map(|a| a * c).collect(),
            self.order,
        )
    }

    /// `self(inner(x))` for a power series `self` and a polynomial `inner` with
    /// `inner(0) = 0`. The result is valid to the order of `self`.
    pub fn compose(&self, inner: &RationalPolynomial) -> Result<Self, SeriesError> {
        if !inner.coeff(0).is_zero() {
            return Err(SeriesError::NonNilpotentInner);
        }
        if self.lowest_exponent < 0 && self.coeffs.iter().any(|c| !c.is_zero()) {
            return Err(SeriesError::NotAPowerSeries);
        }
        let inner = TruncatedSeries::from_polynomial(inner, self.order);
        // Horner from the top stored coefficient down.
        let mut acc = TruncatedSeries::new(0, Vec::new(), self.order);
        for e in (0..self.stored_end().min(self.order)).rev() {
            acc = acc.mul(&inner).add(&TruncatedSeries::new(
                0,
                vec![self.coeff_unchecked(e)],
                self.order,
            ));
        }
        Ok(acc.truncate(self.order))
    }

    /// The exactly known part as a polynomial (only for power series).
    pub fn to_polynomial(&self) -> Option<RationalPolynomial> {
        if self.lowest_exponent < 0 && self.coeffs.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let end = self.stored_end().min(self.order).max(0);
        Some(RationalPolynomial::new(
            (0..end).map(|e| self.coeff_unchecked(e)).collect(),
        ))
    }

    /// Lowest exponent with a nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.lowest_exponent + i as i64)
    }
}

/// `(1 - x)^{1/3}` to the given order: coefficients `(-1)^k C(1/3, k)`.
pub fn series_binomial_third(order: i64) -> TruncatedSeries {
    assert!(order >= 1, "series order must be positive");
    let third = ExactRational::new(1, 3);
    let coeffs = (0..order as u32)
        .map(|k| {
            let c = gen_binomial(&third, k);
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    TruncatedSeries::new(0, coeffs, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use proptest::prelude::*;

    fn coeffs_to(s: &TruncatedSeries, order: i64) -> Vec<ExactRational> {
        (0..order).map(|e| s.coeff(e).unwrap()).collect()
    }

    #[test]
    fn binomial_third_examples() {
        assert_eq!(coeffs_to(&series_binomial_third(1), 1), vec![q(1, 1)]);
        assert_eq!(
            coeffs_to(&series_binomial_third(2), 2),
            vec![q(1, 1), q(-1, 3)]
        );
        assert_eq!(
            coeffs_to(&series_binomial_third(4), 4),
            vec![q(1, 1), q(-1, 3), q(-1, 9), q(-5, 81)]
        );
        assert!(matches!(
            series_binomial_third(4).coeff(4),
            Err(SeriesError::BeyondOrder {
                exponent: 4,
                order: 4
            })
        ));
    }

    #[test]
    fn cube_of_binomial_third_is_one_minus_x() {
        let g = series_binomial_third(12);
        let cube = g.mul(&g).mul(&g);
        assert_eq!(cube.order(), 12);
        let mut expect = vec![ExactRational::zero(); 12];
        expect[0] = q(1, 1);
        expect[1] = q(-1, 1);
        assert_eq!(coeffs_to(&cube, 12), expect);
    }

    #[test]
    fn compose_examples() {
        // g(3T - 3T^2 + T^3) = 1 - T exactly, to any order
        let inner = RationalPolynomial::from_integers(&[0, 3, -3, 1]);
        let c = series_binomial_third(8).compose(&inner).unwrap();
        assert_eq!(c.order(), 8);
        assert_eq!(
            c.to_polynomial().unwrap(),
            RationalPolynomial::one_minus_x()
        );

        let outer = TruncatedSeries::new(0, vec![q(1, 1), q(1, 1)], 6);
        let c = outer
            .compose(&RationalPolynomial::from_integers(&[0, 0, 1]))
            .unwrap();
        assert_eq!(
            c.to_polynomial().unwrap(),
            RationalPolynomial::from_integers(&[1, 0, 1])
        );

        let outer = TruncatedSeries::new(0, vec![q(1, 1), q(1, 2), q(1, 3)], 3);
        let c = outer
            .compose(&RationalPolynomial::from_integers(&[0, 2]))
            .unwrap();
        assert_eq!(coeffs_to(&c, 3), vec![q(1, 1), q(1, 1), q(4, 3)]);

        let bad = RationalPolynomial::from_integers(&[1, 1]);
        assert_eq!(outer.compose(&bad), Err(SeriesError::NonNilpotentInner));
    }

    #[test]
    fn order_bookkeeping_in_laurent_products() {
        // z^2 * (w + w^2 + ... to order 5) in w = 1/z
        let p = TruncatedSeries::from_polynomial_in_inverse(&RationalPolynomial::from_integers(&[
            0, 0, 1,
        ]));
        assert_eq!(p.lowest_exponent(), -2);
        let f = TruncatedSeries::new(1, vec![q(1, 1); 4], 5);
        let prod = p.mul(&f);
        assert_eq!(prod.lowest_exponent(), -1);
        assert_eq!(prod.order(), 3);
        assert!(prod.coeff(3).is_err());
        assert_eq!(prod.coeff(2).unwrap(), q(1, 1));

        let diff = prod.sub(&TruncatedSeries::exact(-1, vec![q(1, 1)]));
        assert_eq!(diff.order(), 3);
        assert_eq!(diff.valuation(), Some(0));
    }

    fn small_poly() -> impl Strategy<Value = RationalPolynomial> {
        proptest::collection::vec((-9i64..9, 1i64..5), 0..8)
            .prop_map(|c| RationalPolynomial::new(c.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn series_agrees_with_polynomials(a in small_poly(), b in small_poly(), order in 1i64..20) {
            let sa = TruncatedSeries::from_polynomial(&a, order);
            let sb = TruncatedSeries::from_polynomial(&b, order);
            let prod = sa.mul(&sb);
            let sum = sa.add(&sb);
            prop_assert_eq!(prod.order(), order);
            let want = TruncatedSeries::from_polynomial(&(&a * &b), order);
            prop_assert_eq!(prod.to_polynomial(), want.to_polynomial());
            let want = TruncatedSeries::from_polynomial(&(&a + &b), order);
            prop_assert_eq!(sum.to_polynomial(), want.to_polynomial());
        }

        #[test]
        fn compose_keeps_outer_order(a in small_poly(), order in 1i64..16, c1 in -3i64..3, c2 in -3i64..3) {
            let inner = RationalPolynomial::from_integers(&[0, c1, c2]);
            let s = TruncatedSeries::from_polynomial(&a, order);
            let out = s.compose(&inner).unwrap();
            prop_assert!(out.order() >= order);
            let want = TruncatedSeries::from_polynomial(&a.compose(&inner), order);
            prop_assert_eq!(out.to_polynomial(), want.to_polynomial());
        }
    }
}
