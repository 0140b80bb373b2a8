//! Padé approximants of the cubic binomial function
//! `f(z) = (1/z)(1 - 1/z)^{1/3}` and the polynomials derived from them.
//!
//! For each `n` the pair `(P_{n,0}, P_{n,1})` satisfies
//! `P_{n,0} f - P_{n,1} = O(z^{-(n+1)})`. Reflecting through `z -> 1/z` and
//! `z -> 1 - z` gives `A_n`, `B_n`; then `V_n(T) = A_n(T^3) - T B_n(T^3)`,
//! which is divisible by `(1 - T)^{2n}` with quotient `W_n`.
//!
//! `A_n` and `B_n` are stored in the variable `u = 1 - z`, i.e. the stored
//! polynomial `A` satisfies `A(1 - z) = z^{n-1} P_{n,1}(1/z)`.

use serde::Serialize;

use crate::exact::{binomial, factorial, gen_binomial, pochhammer, q, ExactRational};
use crate::poly::{Degree, PolyError, RationalPolynomial};
use crate::series::{series_binomial_third, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadeError {
    #[error("identity violated for n = {n}: {what}")]
    IdentityViolation { n: u32, what: String },
    #[error("{what}")]
    RangeViolation { what: String },
    #[error("series order {order} too small; need at least {needed}")]
    OrderTooSmall { order: i64, needed: i64 },
}

/// All explicit polynomials attached to one approximation degree `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadePair {
    pub n: u32,
    /// `P_{n,0}(z)`, degree `n`.
    pub p0: RationalPolynomial,
    /// `P_{n,1}(z)`, degree `n - 1` (zero for `n = 0`).
    pub p1: RationalPolynomial,
    /// `A_n(u)`.
    pub a: RationalPolynomial,
    /// `B_n(u)`.
    pub b: RationalPolynomial,
    /// `V_n(T)`, degree `3n + 1`.
    pub v: RationalPolynomial,
    /// `W_n(T) = V_n(T) / (1 - T)^{2n}`, degree `n + 1`.
    pub w: RationalPolynomial,
}

fn nr(n: u32) -> ExactRational {
    ExactRational::from(n)
}

fn sign(e: u32) -> ExactRational {
    if e.is_multiple_of(2) {
        ExactRational::one()
    } else {
        -ExactRational::one()
    }
}

/// `P_{n,0}(z) = sum_k (-1)^{n-k} C(n+k-1, k) C(n-4/3, n-k) z^k`.
pub fn p_n0(n: u32) -> RationalPolynomial {
    let top = nr(n) - q(4, 3);
    RationalPolynomial::new(
        (0..=n)
            .map(|k| {
                let c1 = gen_binomial(&(nr(n + k) - ExactRational::one()), k);
                sign(n - k) * c1 * gen_binomial(&top, n - k)
            })
            .collect(),
    )
}

/// `P_{n,1}(z) = sum_k (-1)^{n-1-k} C(n+k, k) C(n+1/3, n-1-k) z^k`, zero for `n = 0`.
pub fn p_n1(n: u32) -> RationalPolynomial {
    if n == 0 {
        return RationalPolynomial::zero();
    }
    let top = nr(n) + q(1, 3);
    RationalPolynomial::new(
        (0..n)
            .map(|k| {
                sign(n - 1 - k)
                    * ExactRational::from(binomial(n + k, k))
                    * gen_binomial(&top, n - 1 - k)
            })
            .collect(),
    )
}

/// Closed form `A_n(u) = sum_l C(n+1/3, l) C(n-4/3, n-1-l) u^l`.
pub fn a_closed_form(n: u32) -> RationalPolynomial {
    if n == 0 {
        return RationalPolynomial::zero();
    }
    let plus = nr(n) + q(1, 3);
    let minus = nr(n) - q(4, 3);
    RationalPolynomial::new(
        (0..n)
            .map(|l| gen_binomial(&plus, l) * gen_binomial(&minus, n - 1 - l))
            .collect(),
    )
}

/// Closed form `B_n(u) = sum_l C(n-4/3, l) C(n+1/3, n-l) u^l`.
pub fn b_closed_form(n: u32) -> RationalPolynomial {
    let plus = nr(n) + q(1, 3);
    let minus = nr(n) - q(4, 3);
    RationalPolynomial::new(
        (0..=n)
            .map(|l| gen_binomial(&minus, l) * gen_binomial(&plus, n - l))
            .collect(),
    )
}

/// Reflection `z^k P(1/z)` followed by `z = 1 - u`.
fn reflect(p: &RationalPolynomial, k: usize) -> RationalPolynomial {
    p.reversed(k).compose(&RationalPolynomial::one_minus_x())
}

fn violation(n: u32, what: impl Into<String>) -> PadeError {
    PadeError::IdentityViolation {
        n,
        what: what.into(),
    }
}

fn expect_degree(
    n: u32,
    name: &str,
    p: &RationalPolynomial,
    want: Degree,
) -> Result<(), PadeError> {
    if p.degree() == want {
        Ok(())
    } else {
        Err(violation(
            n,
            format!("deg {name} = {}, expected {want}", p.degree()),
        ))
    }
}

/// Builds and cross-checks every polynomial for degree `n`.
///
/// `A_n` and `B_n` are computed twice, by reflecting the approximants and from
/// the binomial closed forms; any disagreement, a wrong degree, or an inexact
/// division by `(1 - T)^{2n}` is reported as an [`PadeError::IdentityViolation`].
pub fn build(n: u32) -> Result<PadePair, PadeError> {
    let p0 = p_n0(n);
    let p1 = p_n1(n);
    let nu = n as usize;

    let a = if n == 0 {
        RationalPolynomial::zero()
    } else {
        reflect(&p1, nu - 1)
    };
    let b = reflect(&p0, nu);
    if a != a_closed_form(n) {
        return Err(violation(
            n,
            "A_n from the approximant differs from its closed form",
        ));
    }
    if b != b_closed_form(n) {
        return Err(violation(
            n,
            "B_n from the approximant differs from its closed form",
        ));
    }

    let v = &a.substitute_power(3) - &(&RationalPolynomial::x() * &b.substitute_power(3));
    let cyclo = RationalPolynomial::one_minus_x().pow(2 * n);
    let w = v.divide_exact(&cyclo).map_err(|e| match e {
        PolyError::NonZeroRemainder { remainder_degree } => violation(
            n,
            format!("(1-T)^(2n) does not divide V_n (remainder degree {remainder_degree})"),
        ),
        PolyError::ZeroDivisor => unreachable!("(1-T)^(2n) is nonzero"),
    })?;

    expect_degree(n, "P_n0", &p0, Degree::Finite(nu))?;
    let one_less = if n == 0 {
        Degree::NegInfinity
    } else {
        Degree::Finite(nu - 1)
    };
    expect_degree(n, "P_n1", &p1, one_less)?;
    expect_degree(n, "A_n", &a, one_less)?;
    expect_degree(n, "B_n", &b, Degree::Finite(nu))?;
    expect_degree(n, "V_n", &v, Degree::Finite(3 * nu + 1))?;
    expect_degree(n, "W_n", &w, Degree::Finite(nu + 1))?;

    Ok(PadePair {
        n,
        p0,
        p1,
        a,
        b,
        v,
        w,
    })
}

/// `f(w) = w (1 - w)^{1/3}` as a series in `w = 1/z`, known below `order`.
pub fn cubic_binomial_laurent(order: i64) -> TruncatedSeries {
    let g = series_binomial_third((order - 1).max(1));
    let coeffs = g.coeffs().to_vec();
    TruncatedSeries::new(1, coeffs, order)
}

/// Closed-form coefficient of `w^{k+1}` in `R_n`:
/// `C(k, n) (-1/3)_k (4/3)_n / (n+k)!` for `k >= n`.
pub fn remainder_coefficient(n: u32, k: u32) -> ExactRational {
    if k < n {
        return ExactRational::zero();
    }
    ExactRational::from(binomial(k, n)) * pochhammer(&q(-1, 3), k) * pochhammer(&q(4, 3), n)
        / ExactRational::from(factorial(n + k))
}

/// `R_n` from its closed form, exponents `w^{n+1} .. w^{n+extra_terms}`.
pub fn remainder_series(n: u32, extra_terms: u32) -> TruncatedSeries {
    assert!(extra_terms >= 1, "need at least one remainder term");
    let coeffs = (n..n + extra_terms)
        .map(|k| remainder_coefficient(n, k))
        .collect();
    TruncatedSeries::new(n as i64 + 1, coeffs, (n + extra_terms) as i64 + 1)
}

/// Series guard order used by the exact verifiers.
pub fn guard_order(n: u32) -> i64 {
    4 * n as i64 + 16
}

/// Number of tail coefficients compared against the closed form.
pub const ORDER_TAIL_TERMS: u32 = 20;

/// Expands `P_{n,0} f - P_{n,1}` and checks that every coefficient of
/// `w^{-(n-1)} .. w^n` vanishes and that the tail matches the closed form for
/// at least [`ORDER_TAIL_TERMS`] terms.
pub fn verify_order_condition(n: u32) -> bool {
    verify_order_condition_with(n, ORDER_TAIL_TERMS)
}

pub fn verify_order_condition_with(n: u32, tail_terms: u32) -> bool {
    let pair = match build(n) {
        Ok(p) => p,
        Err(_) => return false,
    };
    order_condition_for(&pair, tail_terms)
}

pub(crate) fn order_condition_for(pair: &PadePair, tail_terms: u32) -> bool {
    let n = pair.n as i64;
    // P_{n,0} shifts f down by n, so f must be known through w^{2n + tail}.
    let order = guard_order(pair.n).max(2 * n + tail_terms as i64 + 1);
    let f = cubic_binomial_laurent(order);
    let r = TruncatedSeries::from_polynomial_in_inverse(&pair.p0)
        .mul(&f)
        .sub(&TruncatedSeries::from_polynomial_in_inverse(&pair.p1));
    let known_tail = (r.order() - n - 1) as u32;
    if known_tail < tail_terms {
        return false;
    }
    let vanishing =
        (r.lowest_exponent().min(-n)..=n).all(|e| r.coeff(e).map(|c| c.is_zero()).unwrap_or(false));
    let tail = (0..known_tail).all(|i| {
        let k = pair.n + i;
        r.coeff(k as i64 + 1).ok() == Some(remainder_coefficient(pair.n, k))
    });
    vanishing && tail
}

/// Which of the three combinatorial identities behind the closed forms to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CombinatorialIdentity {
    /// `sum_k (-1)^{n-l-k} C(n+k-1,k) C(n-w-l-1, n-k-l) = C(n+w, n-l)`, `l <= n`.
    I,
    /// `sum_k (-1)^{n-1-k-l} C(n+k,k) C(n+w-l, n-1-k-l) = C(n-1-w, n-l-1)`, `l <= n-1`.
    II,
    /// `sum_k C(n-1-w, k) C(n+w, n-k) = C(2n-1, n)` (Vandermonde).
    III,
}

/// Evaluates both sides exactly and reports whether they agree.
pub fn verify_combinatorial_identity(
    which: CombinatorialIdentity,
    n: u32,
    ell: u32,
    omega: &ExactRational,
) -> Result<bool, PadeError> {
    let one = ExactRational::one();
    let (lhs, rhs) = match which {
        CombinatorialIdentity::I => {
            if ell > n {
                return Err(PadeError::RangeViolation {
                    what: format!("identity (i) needs l <= n, got l = {ell}, n = {n}"),
                });
            }
            let top = nr(n) - omega - nr(ell) - &one;
            let lhs: ExactRational = (0..=n - ell)
                .map(|k| {
                    sign(n - ell - k)
                        * gen_binomial(&(nr(n + k) - &one), k)
                        * gen_binomial(&top, n - k - ell)
                })
                .sum();
            (lhs, gen_binomial(&(nr(n) + omega), n - ell))
        }
        CombinatorialIdentity::II => {
            if n == 0 || ell > n - 1 {
                return Err(PadeError::RangeViolation {
                    what: format!("identity (ii) needs l <= n - 1, got l = {ell}, n = {n}"),
                });
            }
            let top = nr(n) + omega - nr(ell);
            let lhs: ExactRational = (0..=n - 1 - ell)
                .map(|k| {
                    sign(n - 1 - k - ell)
                        * ExactRational::from(binomial(n + k, k))
                        * gen_binomial(&top, n - 1 - k - ell)
                })
                .sum();
            (lhs, gen_binomial(&(nr(n) - &one - omega), n - ell - 1))
        }
        CombinatorialIdentity::III => {
            let lower = nr(n) - &one - omega;
            let upper = nr(n) + omega;
            let lhs: ExactRational = (0..=n)
                .map(|k| gen_binomial(&lower, k) * gen_binomial(&upper, n - k))
                .sum();
            let rhs = if n == 0 {
                // C(-1, 0) = 1
                ExactRational::one()
            } else {
                ExactRational::from(binomial(2 * n - 1, n))
            };
            (lhs, rhs)
        }
    };
    Ok(lhs == rhs)
}

/// `(n+1)_{n+1} (-1/3)_n (4/3)_n / ((n+1)! (2n)!)`.
pub fn wronskian_constant(n: u32) -> ExactRational {
    pochhammer(&nr(n + 1), n + 1) * pochhammer(&q(-1, 3), n) * pochhammer(&q(4, 3), n)
        / ExactRational::from(factorial(n + 1) * factorial(2 * n))
}

/// `A_n B_{n+1} - A_{n+1} B_n` in the stored variable `u`.
pub fn wronskian_polynomial(lo: &PadePair, hi: &PadePair) -> RationalPolynomial {
    &(&lo.a * &hi.b) - &(&hi.a * &lo.b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WronskianCheck {
    /// Whether the determinant, rewritten in `z = 1 - u`, is `c z^{2n}` with
    /// `|c|` equal to the absolute value of [`wronskian_constant`].
    pub holds: bool,
    /// Signed constant `c` found by direct expansion.
    pub constant: ExactRational,
}

pub fn verify_wronskian(n: u32) -> Result<WronskianCheck, PadeError> {
    let lo = build(n)?;
    let hi = build(n + 1)?;
    Ok(wronskian_check(&lo, &hi))
}

pub(crate) fn wronskian_check(lo: &PadePair, hi: &PadePair) -> WronskianCheck {
    let n = lo.n as usize;
    let in_z = wronskian_polynomial(lo, hi).compose(&RationalPolynomial::one_minus_x());
    let constant = in_z.coeff(2 * n);
    let monomial = in_z.degree() == Degree::Finite(2 * n)
        && in_z.coeffs()[..2 * n].iter().all(ExactRational::is_zero);
    let holds = monomial && !constant.is_zero() && constant.abs() == wronskian_constant(lo.n).abs();
    WronskianCheck { holds, constant }
}

/// Checks `S_n(3T - 3T^2 + T^3) = V_n(1 - T)` coefficientwise below `order`,
/// where `S_n(z) = A_n(1 - z) - (1 - z)^{1/3} B_n(1 - z)`.
pub fn verify_cubic_substitution(n: u32, order: i64) -> Result<bool, PadeError> {
    let pair = build(n)?;
    cubic_substitution_for(&pair, order)
}

pub(crate) fn cubic_substitution_for(pair: &PadePair, order: i64) -> Result<bool, PadeError> {
    let needed = 3 * pair.n as i64 + 2;
    if order < needed {
        return Err(PadeError::OrderTooSmall { order, needed });
    }
    let reflect_u = RationalPolynomial::one_minus_x();
    let a_z = TruncatedSeries::from_polynomial(&pair.a.compose(&reflect_u), order);
    let b_z = TruncatedSeries::from_polynomial(&pair.b.compose(&reflect_u), order);
    let s = a_z.sub(&series_binomial_third(order).mul(&b_z));
    let inner = RationalPolynomial::from_integers(&[0, 3, -3, 1]);
    let composed = s
        .compose(&inner)
        .map_err(|e| violation(pair.n, e.to_string()))?;
    let target = pair.v.compose(&reflect_u);
    Ok(composed.order() >= order
        && (0..order).all(|e| composed.coeff(e).ok() == Some(target.coeff(e as usize))))
}

/// Number of leading zero coefficients of `V_n(1 - T)`: at least `2n`.
pub fn reflected_v_valuation(pair: &PadePair) -> Option<usize> {
    let r = pair.v.compose(&RationalPolynomial::one_minus_x());
    r.coeffs().iter().position(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn poly(c: &[(i64, i64)]) -> RationalPolynomial {
        RationalPolynomial::new(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn degree_zero() {
        let p = build(0).unwrap();
        assert_eq!(p.p0, RationalPolynomial::one());
        assert!(p.p1.is_zero());
        assert!(p.a.is_zero());
        assert_eq!(p.b, RationalPolynomial::one());
        assert_eq!(p.v, RationalPolynomial::from_integers(&[0, -1]));
        assert_eq!(p.w, p.v);
    }

    #[test]
    fn degree_one() {
        let p = build(1).unwrap();
        assert_eq!(p.p0, poly(&[(1, 3), (1, 1)]));
        assert_eq!(p.p1, RationalPolynomial::one());
        assert_eq!(p.a, RationalPolynomial::one());
        assert_eq!(p.b, poly(&[(4, 3), (-1, 3)]));
        assert_eq!(p.v, poly(&[(1, 1), (-4, 3), (0, 1), (0, 1), (1, 3)]));
        // Exact division gives the positive sign.
        assert_eq!(p.w, poly(&[(1, 1), (2, 3), (1, 3)]));
    }

    #[test]
    fn remainder_examples() {
        assert_eq!(remainder_series(1, 1).coeff(2).unwrap(), q(-2, 9));
        assert_eq!(remainder_series(0, 1).coeff(1).unwrap(), q(1, 1));
        assert_eq!(remainder_series(1, 2).coeff(3).unwrap(), q(-8, 81));
    }

    #[test]
    fn order_condition_small_cases() {
        assert!(verify_order_condition(0));
        assert!(verify_order_condition(1));
        assert!(verify_order_condition(25));
    }

    #[test]
    fn order_condition_detects_a_corrupted_approximant() {
        let mut p = build(3).unwrap();
        p.p1 = &p.p1 + &RationalPolynomial::constant(q(1, 1000));
        assert!(!order_condition_for(&p, ORDER_TAIL_TERMS));
    }

    #[test]
    fn combinatorial_identity_examples() {
        use CombinatorialIdentity::*;
        for w in [q(0, 1), q(1, 3), q(-7, 5)] {
            assert!(verify_combinatorial_identity(III, 1, 0, &w).unwrap());
        }
        assert!(verify_combinatorial_identity(I, 3, 1, &q(1, 3)).unwrap());
        assert!(verify_combinatorial_identity(II, 4, 0, &q(1, 3)).unwrap());
        assert!(matches!(
            verify_combinatorial_identity(I, 3, 4, &q(1, 3)),
            Err(PadeError::RangeViolation { .. })
        ));
        assert!(matches!(
            verify_combinatorial_identity(II, 3, 3, &q(1, 3)),
            Err(PadeError::RangeViolation { .. })
        ));
    }

    #[test]
    fn combinatorial_identities_sweep() {
        use CombinatorialIdentity::*;
        let omegas = [q(1, 3), q(-4, 3), q(3, 1), q(2, 7), q(-5, 2)];
        for n in 0..12u32 {
            for w in &omegas {
                assert!(
                    verify_combinatorial_identity(III, n, 0, w).unwrap(),
                    "iii n={n}"
                );
                for l in 0..=n {
                    assert!(
                        verify_combinatorial_identity(I, n, l, w).unwrap(),
                        "i n={n} l={l}"
                    );
                    if l < n {
                        assert!(
                            verify_combinatorial_identity(II, n, l, w).unwrap(),
                            "ii n={n} l={l}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn wronskian_small_cases() {
        let w0 = verify_wronskian(0).unwrap();
        assert!(w0.holds);
        assert_eq!(w0.constant, q(-1, 1));
        let w1 = verify_wronskian(1).unwrap();
        assert!(w1.holds);
        assert_eq!(w1.constant.abs(), q(2, 3));
        assert_eq!(wronskian_constant(1), q(-2, 3));
        assert!(verify_wronskian(10).unwrap().holds);
    }

    #[test]
    fn cubic_substitution_examples() {
        assert!(verify_cubic_substitution(1, 8).unwrap());
        assert!(verify_cubic_substitution(0, 4).unwrap());
        assert!(verify_cubic_substitution(6, 40).unwrap());
        assert!(matches!(
            verify_cubic_substitution(6, 10),
            Err(PadeError::OrderTooSmall { needed: 20, .. })
        ));
    }

    #[test]
    fn values_at_one() {
        for n in 1..=20u32 {
            let p = build(n).unwrap();
            assert_eq!(
                p.a.eval(&q(1, 1)),
                ExactRational::from(binomial(2 * n - 1, n - 1))
            );
            assert_eq!(
                p.b.eval(&q(1, 1)),
                ExactRational::from(binomial(2 * n - 1, n))
            );
            assert!(reflected_v_valuation(&p).unwrap() >= 2 * n as usize);
        }
    }
}
