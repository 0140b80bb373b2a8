//! Extended-precision evaluation of the S-unit solution-count bound.
//!
//! Given `B`, `r0`, `k`, `ln(2C)` and the step-4 integer `n`, the pipeline
//! computes the five height exponents `f1, f2, g1, g2, g3`, the constant parts
//! of the two height thresholds, the `a, b, c, d` system whose ratio bounds the
//! number of mid-height solutions `N`, and finally the two-term bound
//!
//! ```text
//! 5 n^s (2 (2C)^{3/n})^m + 3^s (N + k) R(B)^{s-1}
//!     = coeff_small * base_small^s + 5 * base_m^m * base_s^s
//! ```
//!
//! with `R(B) = (1-B)^{-1} B^{B/(B-1)}`. All reals are [`Real`] decimals at a
//! caller-chosen precision (at least [`Precision::MIN_DIGITS`] digits).

use std::fmt;
use std::str::FromStr;

use dashu::base::Abs;
use dashu::float::DBig;
use serde::{Serialize, Serializer};

/// Decimal arbitrary-precision real.
pub type Real = DBig;

/// Environment variable selecting the working precision in decimal digits.
pub const PRECISION_ENV: &str = "SUNIT_PRECISION_DIGITS";

/// Significant digits used when reals are serialized.
pub const SERIALIZED_DIGITS: usize = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("{what}")]
    Domain { what: String },
    #[error("precondition violated: {constraint} ({detail})")]
    PreconditionViolation {
        constraint: Constraint,
        detail: String,
    },
    #[error("coefficient {which} = {value} is not positive")]
    NonPositiveCoefficient { which: &'static str, value: String },
    #[error("the f-part does not dominate the g-part for all A >= 1; bound assembly needs it")]
    DominanceUnverified,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// The validity constraints on the parameter tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Constraint {
    BRange,
    R0Lower,
    KGrowth,
    CPositivity,
    PositiveIntegers,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::BRange => "5/6 < B < 1",
            Constraint::R0Lower => "r0 > (6+3B)/(3B(6B-5))",
            Constraint::KGrowth => "(3B-1)^(k+1) > 3r0+4",
            Constraint::CPositivity => "ln(2C) > ln 2 + ln(6*8^B)/(3B-2)",
            Constraint::PositiveIntegers => "n, m, s >= 1",
        })
    }
}

/// Working precision in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision(usize);

impl Precision {
    pub const MIN_DIGITS: usize = 30;
    pub const DEFAULT_DIGITS: usize = 40;

    pub fn new(digits: usize) -> Result<Self, PipelineError> {
        if digits < Self::MIN_DIGITS {
            return Err(PipelineError::InvalidArgument(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(Self(digits))
    }

    /// Reads [`PRECISION_ENV`], falling back to the default when unset.
    pub fn from_env() -> Result<Self, PipelineError> {
        match std::env::var(PRECISION_ENV) {
            Ok(v) => {
                let digits = v.trim().parse().map_err(|_| {
                    PipelineError::InvalidArgument(format!(
                        "{PRECISION_ENV}={v:?} is not an integer"
                    ))
                })?;
                Self::new(digits)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn digits(self) -> usize {
        self.0
    }

    pub fn int(self, v: i64) -> Real {
        Real::from(v).with_precision(self.0).value()
    }

    pub fn parse(self, s: &str) -> Result<Real, PipelineError> {
        Real::from_str(s.trim())
            .map(|x| x.with_precision(self.0).value())
            .map_err(|_| PipelineError::InvalidArgument(format!("not a decimal number: {s:?}")))
    }

    pub fn lift(self, x: &Real) -> Real {
        x.clone().with_precision(self.0).value()
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self(Self::DEFAULT_DIGITS)
    }
}

/// Rounds to [`SERIALIZED_DIGITS`] significant digits.
pub fn fmt_real(x: &Real) -> String {
    x.clone()
        .with_precision(SERIALIZED_DIGITS)
        .value()
        .to_string()
}

pub fn serialize_real<S: Serializer>(x: &Real, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_real(x))
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

fn domain(what: impl Into<String>) -> PipelineError {
    PipelineError::Domain { what: what.into() }
}

fn violated(constraint: Constraint, detail: String) -> PipelineError {
    PipelineError::PreconditionViolation { constraint, detail }
}

/// `R(B) = (1 - B)^{-1} B^{B/(B-1)}` for `1/2 <= B < 1`.
pub fn r_of_b(b: &Real, prec: Precision) -> Result<Real, PipelineError> {
    let b = prec.lift(b);
    let one = prec.int(1);
    if b < prec.parse("0.5")? || b >= one {
        return Err(domain(format!(
            "R(B) needs 1/2 <= B < 1, got B = {}",
            fmt_real(&b)
        )));
    }
    let exponent = &b / (&b - &one);
    Ok(b.powf(&exponent) / (&one - &b))
}

/// The five height exponents attached to `(B, r0, k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exponents {
    #[serde(serialize_with = "serialize_real")]
    pub f1: Real,
    #[serde(serialize_with = "serialize_real")]
    pub f2: Real,
    #[serde(serialize_with = "serialize_real")]
    pub g1: Real,
    #[serde(serialize_with = "serialize_real")]
    pub g2: Real,
    #[serde(serialize_with = "serialize_real")]
    pub g3: Real,
}

fn check_b(b: &Real, prec: Precision) -> Result<(), PipelineError> {
    let five_sixths = prec.int(5) / prec.int(6);
    if *b <= five_sixths || *b >= prec.int(1) {
        return Err(violated(Constraint::BRange, format!("B = {}", fmt_real(b))));
    }
    Ok(())
}

/// `(6 + 3B) / (3B(6B - 5))`, the strict lower bound on `r0`.
pub fn r0_threshold(b: &Real, prec: Precision) -> Real {
    let b = prec.lift(b);
    (prec.int(6) + prec.int(3) * &b) / (prec.int(3) * &b * (prec.int(6) * &b - prec.int(5)))
}

fn check_r0(b: &Real, r0: u64, prec: Precision) -> Result<(), PipelineError> {
    let t = r0_threshold(b, prec);
    if prec.int(r0 as i64) <= t {
        return Err(violated(
            Constraint::R0Lower,
            format!("r0 = {r0}, threshold {}", fmt_real(&t)),
        ));
    }
    Ok(())
}

fn growth(b: &Real, k: u64, prec: Precision) -> Real {
    let q = prec.int(3) * b - prec.int(1);
    q.powi((k + 1).into())
}

fn check_k(b: &Real, r0: u64, k: u64, prec: Precision) -> Result<(), PipelineError> {
    let lhs = growth(b, k, prec);
    let rhs = prec.int(3 * r0 as i64 + 4);
    if lhs <= rhs {
        return Err(violated(
            Constraint::KGrowth,
            format!(
                "(3B-1)^(k+1) = {} <= {} for k = {k}",
                fmt_real(&lhs),
                3 * r0 + 4
            ),
        ));
    }
    Ok(())
}

/// `ln(3r0 + 4) / ln(3B - 1) - 1`; admissible `k` are the integers above it.
pub fn k_threshold(b: &Real, r0: u64, prec: Precision) -> Real {
    let b = prec.lift(b);
    let q = prec.int(3) * &b - prec.int(1);
    prec.int(3 * r0 as i64 + 4).ln() / q.ln() - prec.int(1)
}

/// Smallest positive `k` with `(3B - 1)^{k+1} > 3r0 + 4`.
pub fn min_k(b: &Real, r0: u64, prec: Precision) -> Result<u64, PipelineError> {
    let b = prec.lift(b);
    check_b(&b, prec)?;
    let t = k_threshold(&b, r0, prec);
    let guess = t.floor().to_int().value();
    let mut k = u64::try_from(guess).unwrap_or(0).saturating_sub(1).max(1);
    while check_k(&b, r0, k, prec).is_err() {
        k += 1;
    }
    Ok(k)
}

/// Evaluates `f1, f2, g1, g2, g3` after checking the `B`, `r0` and `k` constraints.
pub fn exponents(b: &Real, r0: u64, k: u64, prec: Precision) -> Result<Exponents, PipelineError> {
    let b = prec.lift(b);
    check_b(&b, prec)?;
    check_r0(&b, r0, prec)?;
    check_k(&b, r0, k, prec)?;
    Ok(exponents_unchecked(&b, r0, k, prec))
}

fn exponents_unchecked(b: &Real, r0: u64, k: u64, prec: Precision) -> Exponents {
    let one = prec.int(1);
    let r = prec.int(r0 as i64);
    let q = prec.int(3) * b - &one;
    let f_den =
        prec.int(3) * &r * b * (prec.int(6) * b - prec.int(5)) - prec.int(6) - prec.int(3) * b;
    let f1 = (prec.int(2) * &r * b * &q + b) / &f_den;
    let f2 = (prec.int(3) * &r * b + prec.int(3)) / &f_den;
    let geom = &q * (q.powi(k.into()) - &one) / (prec.int(3) * b - prec.int(2));
    let g_den = q.powi((k + 1).into()) - prec.int(3) * &r - prec.int(4);
    let g1 = (b - (&one - b) * &geom) / &g_den;
    let g2 = (&r + &one + &geom) / &g_den;
    let g3 = &r / &g_den;
    Exponents { f1, f2, g1, g2, g3 }
}

/// Constant and `A`-exponent of the two height thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Parts {
    /// `ln(8^{f1} 24^{f2})`.
    #[serde(serialize_with = "serialize_real")]
    pub ln_fpart_const: Real,
    #[serde(serialize_with = "serialize_real")]
    pub fpart_a_exponent: Real,
    /// `ln(8^{g1} 48^{g2} 2^{-g3})`.
    #[serde(serialize_with = "serialize_real")]
    pub ln_gpart_const: Real,
    #[serde(serialize_with = "serialize_real")]
    pub gpart_a_exponent: Real,
    /// Both the constant and the exponent of the f-part are at least those of the
    /// g-part, so the f-part is the larger threshold for every `A >= 1`.
    pub fpart_dominates: bool,
}

pub fn parts_from(e: &Exponents, prec: Precision) -> Parts {
    let ln8 = prec.int(8).ln();
    let ln24 = prec.int(24).ln();
    let ln48 = prec.int(48).ln();
    let ln2 = prec.int(2).ln();
    let ln_fpart_const = &e.f1 * &ln8 + &e.f2 * &ln24;
    let ln_gpart_const = &e.g1 * &ln8 + &e.g2 * &ln48 - &e.g3 * &ln2;
    let fpart_dominates = ln_fpart_const >= ln_gpart_const && e.f1 >= e.g1;
    Parts {
        ln_fpart_const,
        fpart_a_exponent: e.f1.clone(),
        ln_gpart_const,
        gpart_a_exponent: e.g1.clone(),
        fpart_dominates,
    }
}

pub fn parts(b: &Real, r0: u64, k: u64, prec: Precision) -> Result<Parts, PipelineError> {
    Ok(parts_from(&exponents(b, r0, k, prec)?, prec))
}

/// `ln(f-part)` and `ln(g-part)` at a given `ln A >= 0`.
pub fn parts_at(parts: &Parts, log_a: &Real) -> (Real, Real) {
    (
        &parts.ln_fpart_const + &parts.fpart_a_exponent * log_a,
        &parts.ln_gpart_const + &parts.gpart_a_exponent * log_a,
    )
}

/// The `a, b, c, d` system and the resulting count bound `N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step2 {
    #[serde(serialize_with = "serialize_real")]
    pub a: Real,
    #[serde(serialize_with = "serialize_real")]
    pub b: Real,
    #[serde(serialize_with = "serialize_real")]
    pub c: Real,
    #[serde(serialize_with = "serialize_real")]
    pub d: Real,
    #[serde(rename = "N")]
    pub n_bound: u64,
}

/// `ln(2C)` at which `c` vanishes: `ln 2 + ln(6 * 8^B) / (3B - 2)`.
pub fn ln2c_threshold(b: &Real, prec: Precision) -> Real {
    let b = prec.lift(b);
    let six_eight_b = prec.int(6) * prec.int(8).powf(&b);
    prec.int(2).ln() + six_eight_b.ln() / (prec.int(3) * &b - prec.int(2))
}

pub fn step2_from(
    b: &Real,
    f1: &Real,
    ln_fpart_const: &Real,
    ln2c: &Real,
    prec: Precision,
) -> Result<Step2, PipelineError> {
    let b = prec.lift(b);
    let ln2c = prec.lift(ln2c);
    let one = prec.int(1);
    let three_b_minus_two = prec.int(3) * &b - prec.int(2);
    // ln((6 * 8^B)^{-1/(3B-2)})
    let shift = -(prec.int(6) * prec.int(8).powf(&b)).ln() / &three_b_minus_two;
    let d = (&one - &b) / &three_b_minus_two;
    let a = &shift + ln_fpart_const;
    let bb = &d + f1;
    let ln_c = &ln2c - prec.int(2).ln();
    let c = &ln_c + &shift;
    for (which, v) in [("a", &a), ("b", &bb), ("c", &c), ("d", &d)] {
        if *v <= prec.int(0) {
            return Err(PipelineError::NonPositiveCoefficient {
                which,
                value: fmt_real(v),
            });
        }
    }
    let ratio = if &a / &c >= &bb / &d {
        &a / &c
    } else {
        &bb / &d
    };
    let q = prec.int(3) * &b - &one;
    let t = &one + ratio.ln() / q.ln();
    let n_bound = u64::try_from(t.floor().to_int().value()).unwrap_or(0);
    Ok(Step2 {
        a,
        b: bb,
        c,
        d,
        n_bound,
    })
}

pub fn step2_n(
    b: &Real,
    r0: u64,
    k: u64,
    ln2c: &Real,
    prec: Precision,
) -> Result<Step2, PipelineError> {
    let e = exponents(b, r0, k, prec)?;
    let p = parts_from(&e, prec);
    step2_from(b, &e.f1, &p.ln_fpart_const, ln2c, prec)
}

/// The tunable parameter tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct EvertseParams {
    pub b: Real,
    pub r0: u64,
    pub k: u64,
    /// Natural log of `2C`.
    pub ln2c: Real,
    pub n_step4: u64,
    /// Degree of the number field.
    pub m: u64,
    /// Number of places in `S`.
    pub s: u64,
}

impl EvertseParams {
    /// Checks every validity constraint, in a fixed order.
    pub fn validate(&self, prec: Precision) -> Result<(), PipelineError> {
        if self.n_step4 == 0 || self.m == 0 || self.s == 0 {
            return Err(violated(
                Constraint::PositiveIntegers,
                format!("n = {}, m = {}, s = {}", self.n_step4, self.m, self.s),
            ));
        }
        let b = prec.lift(&self.b);
        check_b(&b, prec)?;
        check_r0(&b, self.r0, prec)?;
        check_k(&b, self.r0, self.k, prec)?;
        let t = ln2c_threshold(&b, prec);
        if prec.lift(&self.ln2c) <= t {
            return Err(violated(
                Constraint::CPositivity,
                format!(
                    "ln(2C) = {}, threshold {}",
                    fmt_real(&self.ln2c),
                    fmt_real(&t)
                ),
            ));
        }
        Ok(())
    }
}

/// Full derivation trace of one bound evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundBreakdown {
    #[serde(rename = "B", serialize_with = "serialize_real")]
    pub b: Real,
    pub r0: u64,
    pub k: u64,
    #[serde(rename = "ln2C", serialize_with = "serialize_real")]
    pub ln2c: Real,
    pub n_step4: u64,
    #[serde(serialize_with = "serialize_real")]
    pub f1: Real,
    #[serde(serialize_with = "serialize_real")]
    pub f2: Real,
    #[serde(serialize_with = "serialize_real")]
    pub g1: Real,
    #[serde(serialize_with = "serialize_real")]
    pub g2: Real,
    #[serde(serialize_with = "serialize_real")]
    pub g3: Real,
    #[serde(serialize_with = "serialize_real")]
    pub ln_fpart_const: Real,
    #[serde(serialize_with = "serialize_real")]
    pub ln_gpart_const: Real,
    #[serde(rename = "fpart_A_exponent", serialize_with = "serialize_real")]
    pub fpart_a_exponent: Real,
    #[serde(rename = "gpart_A_exponent", serialize_with = "serialize_real")]
    pub gpart_a_exponent: Real,
    pub fpart_dominates: bool,
    #[serde(serialize_with = "serialize_real")]
    pub a: Real,
    #[serde(serialize_with = "serialize_real")]
    pub b_coeff: Real,
    #[serde(serialize_with = "serialize_real")]
    pub c: Real,
    #[serde(serialize_with = "serialize_real")]
    pub d: Real,
    #[serde(rename = "N")]
    pub n_bound: u64,
    #[serde(rename = "R_B", serialize_with = "serialize_real")]
    pub r_b: Real,
    #[serde(serialize_with = "serialize_real")]
    pub coeff_small: Real,
    #[serde(serialize_with = "serialize_real")]
    pub base_small: Real,
    #[serde(serialize_with = "serialize_real")]
    pub base_m: Real,
    pub base_s: u64,
    #[serde(rename = "logA", serialize_with = "serialize_real")]
    pub log_a: Real,
    pub m: u64,
    pub s: u64,
    /// `ln(coeff_small base_small^s + 5 base_m^m base_s^s)` at the stored `(m, s)`.
    #[serde(serialize_with = "serialize_real")]
    pub ln_bound: Real,
}

/// Runs every step for one parameter tuple.
pub fn assemble_bound(
    params: &EvertseParams,
    prec: Precision,
) -> Result<BoundBreakdown, PipelineError> {
    params.validate(prec)?;
    let b = prec.lift(&params.b);
    let e = exponents_unchecked(&b, params.r0, params.k, prec);
    let p = parts_from(&e, prec);
    if !p.fpart_dominates {
        return Err(PipelineError::DominanceUnverified);
    }
    let s2 = step2_from(&b, &e.f1, &p.ln_fpart_const, &params.ln2c, prec)?;
    assemble_from(params, e, p, s2, prec)
}

/// Final step given precomputed exponents, parts and step-2 data.
fn assemble_from(
    params: &EvertseParams,
    e: Exponents,
    p: Parts,
    s2: Step2,
    prec: Precision,
) -> Result<BoundBreakdown, PipelineError> {
    let r_b = r_of_b(&params.b, prec)?;
    let base_small = prec.int(3) * &r_b;
    let coeff_small = prec.int((s2.n_bound + params.k) as i64) / &r_b;
    let ln2c = prec.lift(&params.ln2c);
    let base_m = prec.int(2) * (prec.int(3) * &ln2c / prec.int(params.n_step4 as i64)).exp();
    let mut bd = BoundBreakdown {
        b: prec.lift(&params.b),
        r0: params.r0,
        k: params.k,
        ln2c,
        n_step4: params.n_step4,
        f1: e.f1,
        f2: e.f2,
        g1: e.g1,
        g2: e.g2,
        g3: e.g3,
        ln_fpart_const: p.ln_fpart_const,
        ln_gpart_const: p.ln_gpart_const,
        fpart_a_exponent: p.fpart_a_exponent,
        gpart_a_exponent: p.gpart_a_exponent,
        fpart_dominates: p.fpart_dominates,
        a: s2.a,
        b_coeff: s2.b,
        c: s2.c,
        d: s2.d,
        n_bound: s2.n_bound,
        r_b,
        coeff_small,
        base_small,
        base_m,
        base_s: params.n_step4,
        log_a: prec.int(0),
        m: params.m,
        s: params.s,
        ln_bound: prec.int(0),
    };
    bd.ln_bound = evaluate_bound_log(&bd, params.m, params.s, prec)?;
    Ok(bd)
}

/// `ln(exp(x) + exp(y))` without overflow.
pub fn log_add_exp(x: &Real, y: &Real, prec: Precision) -> Real {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    hi + (prec.int(1) + (lo - hi).exp()).ln()
}

/// Logarithms of the four bound constants, for repeated evaluation over `(m, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogTerms {
    pub ln_coeff_small: Real,
    pub ln_base_small: Real,
    pub ln_five_base_m: Real,
    pub ln_base_m: Real,
    pub ln_base_s: Real,
}

impl LogTerms {
    pub fn new(bd: &BoundBreakdown, prec: Precision) -> Self {
        Self {
            ln_coeff_small: bd.coeff_small.ln(),
            ln_base_small: bd.base_small.ln(),
            ln_five_base_m: prec.int(5).ln(),
            ln_base_m: bd.base_m.ln(),
            ln_base_s: prec.int(bd.base_s as i64).ln(),
        }
    }

    /// Requires `m, s >= 1`; see [`evaluate_bound_log`].
    pub fn at(&self, m: u64, s: u64, prec: Precision) -> Real {
        let sf = prec.int(s as i64);
        let small = &self.ln_coeff_small + &sf * &self.ln_base_small;
        let large =
            &self.ln_five_base_m + prec.int(m as i64) * &self.ln_base_m + &sf * &self.ln_base_s;
        log_add_exp(&small, &large, prec)
    }
}

/// `ln(coeff_small * base_small^s + 5 * base_m^m * base_s^s)`.
pub fn evaluate_bound_log(
    bd: &BoundBreakdown,
    m: u64,
    s: u64,
    prec: Precision,
) -> Result<Real, PipelineError> {
    if m == 0 || s == 0 {
        return Err(PipelineError::InvalidArgument(format!(
            "m and s must be positive, got m = {m}, s = {s}"
        )));
    }
    Ok(LogTerms::new(bd, prec).at(m, s, prec))
}

/// The two hand-picked parameter tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Choice {
    I,
    II,
}

impl FromStr for Choice {
    type Err = PipelineError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "I" | "1" | "i" => Ok(Choice::I),
            "II" | "2" | "ii" => Ok(Choice::II),
            other => Err(PipelineError::InvalidArgument(format!(
                "unknown choice {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Choice::I => "I",
            Choice::II => "II",
        })
    }
}

impl Choice {
    pub fn params(self, m: u64, s: u64, prec: Precision) -> EvertseParams {
        let (b, r0, k, ln2c, n) = match self {
            Choice::I => ("0.834", 1600, 20, "7.8", 45),
            Choice::II => ("0.84", 100, 13, "7.5", 47),
        };
        EvertseParams {
            b: prec.parse(b).expect("literal"),
            r0,
            k,
            ln2c: prec.parse(ln2c).expect("literal"),
            n_step4: n,
            m,
            s,
        }
    }

    pub fn breakdown(self, m: u64, s: u64, prec: Precision) -> BoundBreakdown {
        assemble_bound(&self.params(m, s, prec), prec).expect("published parameters are admissible")
    }

    /// Published values: (name, printed decimal). Integers must match exactly.
    pub fn published(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Choice::I => &[
                ("k_threshold", "19.8389"),
                ("min_k", "20"),
                ("f1", "533.814"),
                ("f2", "533.391"),
                ("g1", "-5.20814"),
                ("g2", "36.3095"),
                ("g3", "4.91666"),
                ("ln_fpart_const", "2805.183"),
                ("fpart_A_exponent", "533.814"),
                ("ln_gpart_const", "126.323"),
                ("gpart_A_exponent", "-5.20814"),
                ("N", "26"),
                ("N_plus_k", "46"),
                ("coeff_small", "3.06759"),
                ("base_small", "44.9866"),
                ("base_m", "3.36406"),
                ("base_s", "45"),
            ],
            Choice::II => &[
                ("k_threshold", "12.6539"),
                ("min_k", "13"),
                ("f1", "164.230"),
                ("f2", "163.461"),
                ("g1", "-2.25320"),
                ("g2", "16.3237"),
                ("g3", "2.1093"),
                ("N", "31"),
                ("N_plus_k", "44"),
                ("coeff_small", "2.81864"),
                ("base_small", "46.8312"),
                ("base_m", "3.22803"),
                ("base_s", "47"),
            ],
        }
    }
}

/// Number of digits after the decimal point in a printed constant.
pub fn printed_places(printed: &str) -> u32 {
    printed
        .split_once('.')
        .map_or(0, |(_, frac)| frac.len() as u32)
}

/// `|computed - printed| <= 10^{-places}`, with `places` read off the printed string.
pub fn digit_match(computed: &Real, printed: &str, prec: Precision) -> Result<bool, PipelineError> {
    let target = prec.parse(printed)?;
    let tol = prec.int(1) / prec.int(10).powi(printed_places(printed).into());
    Ok((prec.lift(computed) - target).abs() <= tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantCheck {
    pub name: String,
    pub printed: String,
    pub computed: String,
    pub abs_diff: String,
    pub tolerance: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Reproduction {
    pub choice: Choice,
    pub breakdown: BoundBreakdown,
    pub checks: Vec<ConstantCheck>,
}

impl Reproduction {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.breakdown.fpart_dominates
    }
}

/// Recomputes one published parameter choice and digit-matches every printed constant.
pub fn reproduce(choice: Choice, prec: Precision) -> Result<Reproduction, PipelineError> {
    let params = choice.params(1, 1, prec);
    let bd = assemble_bound(&params, prec)?;
    let kmin = min_k(&params.b, params.r0, prec)?;
    let kth = k_threshold(&params.b, params.r0, prec);
    let mut checks = Vec::new();
    for &(name, printed) in choice.published() {
        let computed: Real = match name {
            "k_threshold" => kth.clone(),
            "min_k" => prec.int(kmin as i64),
            "f1" => bd.f1.clone(),
            "f2" => bd.f2.clone(),
            "g1" => bd.g1.clone(),
            "g2" => bd.g2.clone(),
            "g3" => bd.g3.clone(),
            "ln_fpart_const" => bd.ln_fpart_const.clone(),
            "fpart_A_exponent" => bd.fpart_a_exponent.clone(),
            "ln_gpart_const" => bd.ln_gpart_const.clone(),
            "gpart_A_exponent" => bd.gpart_a_exponent.clone(),
            "N" => prec.int(bd.n_bound as i64),
            "N_plus_k" => prec.int((bd.n_bound + bd.k) as i64),
            "coeff_small" => bd.coeff_small.clone(),
            "base_small" => bd.base_small.clone(),
            "base_m" => bd.base_m.clone(),
            "base_s" => prec.int(bd.base_s as i64),
            other => unreachable!("unknown published constant {other}"),
        };
        let target = prec.parse(printed)?;
        let tol = prec.int(1) / prec.int(10).powi(printed_places(printed).into());
        let diff = (&computed - &target).abs();
        let pass = if printed_places(printed) == 0 {
            diff == prec.int(0)
        } else {
            diff <= tol
        };
        checks.push(ConstantCheck {
            name: name.to_owned(),
            printed: printed.to_owned(),
            computed: fmt_real(&computed),
            abs_diff: fmt_real(&diff),
            tolerance: if printed_places(printed) == 0 {
                "0".into()
            } else {
                fmt_real(&tol)
            },
            pass,
        });
    }
    Ok(Reproduction {
        choice,
        breakdown: bd,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn r(s: &str) -> Real {
        p().parse(s).unwrap()
    }

    fn close(x: &Real, want: &str, tol: &str) -> bool {
        (x - r(want)).abs() <= r(tol)
    }

    #[test]
    fn r_of_b_examples() {
        assert!(close(&r_of_b(&r("0.5"), p()).unwrap(), "4", "1e-35"));
        let three_r = r_of_b(&r("0.834"), p()).unwrap() * p().int(3);
        assert!(digit_match(&three_r, "44.9866", p()).unwrap());
        assert!(r_of_b(&r("0.4"), p()).is_err());
        assert!(r_of_b(&r("1"), p()).is_err());
    }

    #[test]
    fn exponent_examples() {
        let e = exponents(&r("0.834"), 1600, 20, p()).unwrap();
        assert!(digit_match(&e.f1, "533.814", p()).unwrap());
        assert!(digit_match(&e.f2, "533.391", p()).unwrap());
        assert!(digit_match(&e.g1, "-5.20814", p()).unwrap());
        assert!(digit_match(&e.g2, "36.3095", p()).unwrap());
        assert!(digit_match(&e.g3, "4.91666", p()).unwrap());

        let e = exponents(&r("0.84"), 100, 13, p()).unwrap();
        assert!(digit_match(&e.f1, "164.230", p()).unwrap());
        assert!(digit_match(&e.g3, "2.1093", p()).unwrap());

        match exponents(&r("0.834"), 1600, 19, p()) {
            Err(PipelineError::PreconditionViolation { constraint, .. }) => {
                assert_eq!(constraint, Constraint::KGrowth);
                assert!(constraint.to_string().contains("(3B-1)^(k+1) > 3r0+4"));
            }
            other => panic!("expected k violation, got {other:?}"),
        }
        assert!(matches!(
            exponents(&r("0.83"), 1600, 20, p()),
            Err(PipelineError::PreconditionViolation {
                constraint: Constraint::BRange,
                ..
            })
        ));
        // r0 threshold at B = 0.834 is about 1.4
        assert!(matches!(
            exponents(&r("0.834"), 1, 20, p()),
            Err(PipelineError::PreconditionViolation {
                constraint: Constraint::R0Lower,
                ..
            })
        ));
    }

    #[test]
    fn min_k_examples() {
        assert_eq!(min_k(&r("0.834"), 1600, p()).unwrap(), 20);
        assert_eq!(min_k(&r("0.84"), 100, p()).unwrap(), 13);
        assert_eq!(min_k(&r("0.99"), 1, p()).unwrap(), 2);
        assert!(digit_match(&k_threshold(&r("0.834"), 1600, p()), "19.8389", p()).unwrap());
    }

    #[test]
    fn parts_examples() {
        let pt = parts(&r("0.834"), 1600, 20, p()).unwrap();
        assert!(digit_match(&pt.ln_fpart_const, "2805.183", p()).unwrap());
        assert!(digit_match(&pt.ln_gpart_const, "126.323", p()).unwrap());
        assert!(digit_match(&pt.gpart_a_exponent, "-5.20814", p()).unwrap());
        assert!(pt.fpart_dominates);

        let e = Exponents {
            f1: r("2"),
            f2: r("1"),
            g1: r("2"),
            g2: r("0"),
            g3: r("0"),
        };
        // Equal A-exponents and f-part constant larger: still dominant.
        assert!(parts_from(&e, p()).fpart_dominates);
        let e = Exponents { g2: r("10"), ..e };
        assert!(!parts_from(&e, p()).fpart_dominates);
    }

    #[test]
    fn step2_examples() {
        assert_eq!(
            step2_n(&r("0.834"), 1600, 20, &r("7.8"), p())
                .unwrap()
                .n_bound,
            26
        );
        assert_eq!(
            step2_n(&r("0.84"), 100, 13, &r("7.5"), p())
                .unwrap()
                .n_bound,
            31
        );

        let edge = ln2c_threshold(&r("0.834"), p());
        let near = step2_n(&r("0.834"), 1600, 20, &(&edge + r("1e-6")), p()).unwrap();
        assert!(near.c > p().int(0) && near.c < r("2e-6"));
        assert!(near.n_bound > 26);
        assert!(matches!(
            step2_n(&r("0.834"), 1600, 20, &(&edge - r("1e-6")), p()),
            Err(PipelineError::NonPositiveCoefficient { which: "c", .. })
        ));
    }

    #[test]
    fn assemble_examples() {
        let bd = Choice::I.breakdown(1, 1, p());
        assert!(digit_match(&bd.coeff_small, "3.06759", p()).unwrap());
        assert!(digit_match(&bd.base_small, "44.9866", p()).unwrap());
        assert!(digit_match(&bd.base_m, "3.36406", p()).unwrap());
        assert_eq!(bd.base_s, 45);
        // 2 e^{0.52}
        let want = p().int(2) * r("0.52").exp();
        assert!(close(&bd.base_m, &want.to_string(), "1e-35"));

        let bd = Choice::II.breakdown(1, 1, p());
        assert!(digit_match(&bd.coeff_small, "2.81864", p()).unwrap());
        assert!(digit_match(&bd.base_small, "46.8312", p()).unwrap());
        assert!(digit_match(&bd.base_m, "3.22803", p()).unwrap());
        assert_eq!(bd.base_s, 47);
    }

    #[test]
    fn bound_log_examples() {
        let prec = p();
        let bd = Choice::I.breakdown(1, 1, prec);
        let direct = (to_f64(&bd.coeff_small) * to_f64(&bd.base_small)
            + 5.0 * to_f64(&bd.base_m) * 45.0)
            .ln();
        let v = to_f64(&evaluate_bound_log(&bd, 1, 1, prec).unwrap());
        assert!((v - direct).abs() < 1e-12);
        assert!((v.exp() - 894.9124).abs() < 1e-3);

        let big = to_f64(&evaluate_bound_log(&bd, 100, 100, prec).unwrap());
        let dominant = 100.0 * to_f64(&bd.base_m).ln() + 100.0 * 45f64.ln() + 5f64.ln();
        assert!(big.is_finite() && (big - dominant).abs() < 1e-3);

        assert!(evaluate_bound_log(&bd, 0, 1, prec).is_err());
        assert!(evaluate_bound_log(&bd, 1, 0, prec).is_err());
    }

    #[test]
    fn f_exponents_decrease_in_r0_and_approach_their_limit() {
        let prec = p();
        for b in ["0.834", "0.84", "0.9", "0.97"] {
            let b = r(b);
            let k_for = |r0| min_k(&b, r0, prec).unwrap();
            let r_lo = (to_f64(&r0_threshold(&b, prec)).floor() as u64 + 1).max(1);
            let mut prev: Option<Exponents> = None;
            for r0 in (r_lo..r_lo + 400).step_by(37) {
                let e = exponents(&b, r0, k_for(r0), prec).unwrap();
                assert!(e.f1 > prec.int(0) && e.f2 > prec.int(0));
                if let Some(p) = &prev {
                    assert!(e.f1 < p.f1 && e.f2 < p.f2);
                }
                prev = Some(e);
            }
            let big = 1_000_000_000u64;
            let e = exponents_unchecked(&b, big, 1, prec);
            let limit = prec.int(2) * (prec.int(3) * &b - prec.int(1))
                / (prec.int(3) * (prec.int(6) * &b - prec.int(5)));
            assert!(limit > prec.int(4) / prec.int(3));
            assert!((&e.f1 - &limit).abs() < &limit * r("1e-5"));
        }
    }

    #[test]
    fn validation_cites_the_failed_inequality() {
        let prec = p();
        let mut params = Choice::I.params(1, 1, prec);
        params.ln2c = r("7.0");
        let err = params.validate(prec).unwrap_err();
        assert!(matches!(
            err,
            PipelineError::PreconditionViolation {
                constraint: Constraint::CPositivity,
                ..
            }
        ));
        params.ln2c = r("7.8");
        params.s = 0;
        assert!(params.validate(prec).is_err());
    }

    #[test]
    fn reproduction_passes_for_both_choices() {
        for c in [Choice::I, Choice::II] {
            let rep = reproduce(c, p()).unwrap();
            for chk in &rep.checks {
                assert!(chk.pass, "{c}: {chk:?}");
            }
        }
    }

    #[test]
    fn precision_bounds() {
        assert!(Precision::new(29).is_err());
        assert_eq!(Precision::new(50).unwrap().digits(), 50);
        assert_eq!(printed_places("2805.183"), 3);
        assert_eq!(printed_places("45"), 0);
    }
}
