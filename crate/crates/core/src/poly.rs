//! Dense univariate polynomials over [`ExactRational`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::ExactRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("inexact division: remainder of degree {remainder_degree:?} is nonzero")]
    NonZeroRemainder { remainder_degree: Degree },
}

/// Degree of a polynomial; the zero polynomial has its own marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Coefficients in ascending degree order with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<ExactRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(ExactRational::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactRational::one())
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: ExactRational, k: usize) -> Self {
        let mut coeffs = vec![ExactRational::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(ExactRational::one(), 1)
    }

    /// `1 - x`, the reflection used throughout the approximant identities.
    pub fn one_minus_x() -> Self {
        Self::new(vec![ExactRational::one(), -ExactRational::one()])
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| ExactRational::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> ExactRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            l => Degree::Finite(l - 1),
        }
    }

    pub fn leading(&self) -> Option<&ExactRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.coeffs
            .iter()
            .rev()
            .fold(ExactRational::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * inner) + &Self::constant(c.clone())
        })
    }

    /// `self(x^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1, "substitute_power needs k >= 1");
        let mut out = vec![ExactRational::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self::new(out)
    }

    /// `x^k * self(1/x)` for `k >= deg`: coefficient list reversed into length `k + 1`.
    pub fn reversed(&self, k: usize) -> Self {
        assert!(
            self.coeffs.len() <= k + 1,
            "reversal length {k} below degree {}",
            self.degree()
        );
        let mut out = vec![ExactRational::zero(); k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[k - i] = c.clone();
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * ExactRational::from(i))
                .collect(),
        )
    }

    /// Euclidean division; returns `(quotient, remainder)`.
    pub fn div_rem(&self, den: &Self) -> Result<(Self, Self), PolyError> {
        let dl = den.leading().ok_or(PolyError::ZeroDivisor)?;
        let dd = den.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ExactRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / dl;
            if !c.is_zero() {
                for (j, d) in den.coeffs.iter().enumerate() {
                    rem[i + j] -= &(&c * d);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Quotient of an exact division; a nonzero remainder is an error.
    pub fn divide_exact(&self, den: &Self) -> Result<Self, PolyError> {
        let (quot, rem) = self.div_rem(den)?;
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(PolyError::NonZeroRemainder {
                remainder_degree: rem.degree(),
            })
        }
    }

    /// Scales to leading coefficient one. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip().expect("leading coefficient is nonzero")),
            None => Self::zero(),
        }
    }

    /// Primitive integer polynomial with positive leading coefficient, proportional to `self`.
    pub fn primitive_part(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        primitive(ints)
    }

    fn from_big_ints(ints: Vec<BigInt>) -> Self {
        Self::new(ints.into_iter().map(ExactRational::from).collect())
    }

    /// Monic greatest common divisor, via a primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = primitive(pseudo_remainder(&a, &b));
            a = b;
            b = r;
        }
        Self::from_big_ints(a).monic()
    }

    /// Square-free decomposition (Yun): monic factors `f_i` with
    /// `self = lead * prod f_i^i`. Entry `i - 1` holds `f_i`; constant factors are kept
    /// so that multiplicities line up with indices.
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        let Degree::Finite(d) = self.degree() else {
            return Vec::new();
        };
        if d == 0 {
            return Vec::new();
        }
        let p = self.monic();
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.divide_exact(&a0).expect("gcd divides");
        let c = dp.divide_exact(&a0).expect("gcd divides");
        let mut dpoly = &c - &b.derivative();
        let mut out = Vec::new();
        while b.degree() != Degree::Finite(0) {
            let a = b.gcd(&dpoly);
            b = b.divide_exact(&a).expect("gcd divides");
            let c = dpoly.divide_exact(&a).expect("gcd divides");
            dpoly = &c - &b.derivative();
            out.push(a);
        }
        out
    }

    /// Coefficients rounded to `f64`, ascending.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(ExactRational::to_f64).collect()
    }
}

fn primitive(mut ints: Vec<BigInt>) -> Vec<BigInt> {
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let Some(last) = ints.last() else {
        return ints;
    };
    let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if last.is_negative() {
        content = -content;
    }
    ints.iter().map(|c| c / &content).collect()
}

fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let top = r.len() - 1;
        let lr = r[top].clone();
        let shift = top - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![ExactRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        RationalPolynomial::new(out)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RationalPolynomial {
            type Output = RationalPolynomial;
            fn $f(self, rhs: RationalPolynomial) -> RationalPolynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use proptest::prelude::*;

    fn poly(c: &[(i64, i64)]) -> RationalPolynomial {
        RationalPolynomial::new(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn ring_examples() {
        let p = poly(&[(1, 3), (1, 1)]);
        assert_eq!(&p * &RationalPolynomial::one(), p);
        assert_eq!(p.eval(&ExactRational::zero()), q(1, 3));
        let sq = RationalPolynomial::one_minus_x().pow(2);
        assert_eq!(sq, RationalPolynomial::from_integers(&[1, -2, 1]));
        assert_eq!(
            p.scale(&q(3, 1)),
            RationalPolynomial::from_integers(&[1, 3])
        );
        assert_eq!(&p + &(-&p), RationalPolynomial::zero());
    }

    #[test]
    fn degree_marker() {
        assert_eq!(RationalPolynomial::zero().degree(), Degree::NegInfinity);
        assert_eq!(
            RationalPolynomial::from_integers(&[0, 0]).degree(),
            Degree::NegInfinity
        );
        assert_eq!(
            RationalPolynomial::from_integers(&[4, 0, 1, 0]).degree(),
            Degree::Finite(2)
        );
        assert!(Degree::NegInfinity < Degree::Finite(0));
    }

    #[test]
    fn exact_division_examples() {
        let one_minus = RationalPolynomial::one_minus_x();
        let sq = RationalPolynomial::from_integers(&[1, -2, 1]);
        assert_eq!(sq.divide_exact(&one_minus).unwrap(), one_minus);

        // 1 - (4/3)T + (1/3)T^4 over (1 - T)^2
        let v1 = poly(&[(1, 1), (-4, 3), (0, 1), (0, 1), (1, 3)]);
        let w = v1.divide_exact(&sq).unwrap();
        assert_eq!(w, poly(&[(1, 1), (2, 3), (1, 3)]));

        let num = RationalPolynomial::from_integers(&[1, 0, 1]);
        let den = RationalPolynomial::from_integers(&[-1, 1]);
        assert_eq!(
            num.divide_exact(&den),
            Err(PolyError::NonZeroRemainder {
                remainder_degree: Degree::Finite(0)
            })
        );
        assert_eq!(
            num.divide_exact(&RationalPolynomial::zero()),
            Err(PolyError::ZeroDivisor)
        );
    }

    #[test]
    fn composition_and_reversal() {
        // (1 + x)^2 at x = 1 - t
        let p = RationalPolynomial::from_integers(&[1, 2, 1]);
        let c = p.compose(&RationalPolynomial::one_minus_x());
        assert_eq!(c, RationalPolynomial::from_integers(&[4, -4, 1]));
        assert_eq!(
            RationalPolynomial::from_integers(&[1, 2]).substitute_power(3),
            RationalPolynomial::from_integers(&[1, 0, 0, 2])
        );
        assert_eq!(
            RationalPolynomial::from_integers(&[1, 2]).reversed(2),
            RationalPolynomial::from_integers(&[0, 2, 1])
        );
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = RationalPolynomial::from_integers(&[-1, 1]); // x - 1
        let b = RationalPolynomial::from_integers(&[2, 0, 1]); // x^2 + 2
        let p = &a.pow(5) * &b.pow(2);
        let g = p.gcd(&p.derivative());
        assert_eq!(g, (&a.pow(4) * &b).monic());
        let parts = p.scale(&q(-7, 2)).squarefree_decomposition();
        assert_eq!(parts.len(), 5);
        assert_eq!(parts[1], b.monic());
        assert_eq!(parts[4], a.monic());
        for i in [0, 2, 3] {
            assert_eq!(parts[i].degree(), Degree::Finite(0));
        }
    }

    fn small_poly(max_deg: usize) -> impl Strategy<Value = RationalPolynomial> {
        proptest::collection::vec((-40i64..40, 1i64..10), 0..=max_deg + 1)
            .prop_map(|c| RationalPolynomial::new(c.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn exact_division_inverts_multiplication(a in small_poly(20), b in small_poly(20)) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).divide_exact(&b).unwrap(), a);
        }

        #[test]
        fn evaluation_is_a_ring_map(a in small_poly(8), b in small_poly(8), x in (-20i64..20, 1i64..7)) {
            let x = q(x.0, x.1);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
            prop_assert_eq!(a.compose(&b).eval(&x), a.eval(&b.eval(&x)));
        }
    }
}
