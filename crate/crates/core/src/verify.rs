//! Verification suites over a range of degrees, as run by the command line.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{self, LengthReport, MahlerRow, SamplingReport};
use crate::exact::{q, ExactRational};
use crate::pade::{
    self, cubic_substitution_for, order_condition_for, wronskian_check, wronskian_polynomial,
    CombinatorialIdentity, PadePair, ORDER_TAIL_TERMS,
};
use crate::par::{self, Execution};
use crate::poly::{Degree, RationalPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Order,
    AbForms,
    Divisibility,
    Wronskian,
    Identities,
    Substitution,
    Lengths,
    Sampling,
    Mahler,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Order,
        Check::AbForms,
        Check::Divisibility,
        Check::Wronskian,
        Check::Identities,
        Check::Substitution,
        Check::Lengths,
        Check::Sampling,
        Check::Mahler,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Order => "order",
            Check::AbForms => "ab_forms",
            Check::Divisibility => "divisibility",
            Check::Wronskian => "wronskian",
            Check::Identities => "identities",
            Check::Substitution => "substitution",
            Check::Lengths => "lengths",
            Check::Sampling => "sampling",
            Check::Mahler => "mahler",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown check {0:?}; expected one of order, ab_forms, divisibility, wronskian, identities, substitution, lengths, sampling, mahler")]
pub struct UnknownCheck(pub String);

impl FromStr for Check {
    type Err = UnknownCheck;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| UnknownCheck(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_n: u32,
    /// Samples per degree for the sampled bounds.
    pub samples: usize,
    pub seed: u64,
    /// Number of random evaluation points for the determinant.
    pub beta_points: usize,
    pub exec: Execution,
}

impl VerifyOptions {
    pub fn new(max_n: u32) -> Self {
        Self {
            max_n,
            samples: 10_000,
            seed: 0x5eed,
            beta_points: 10,
            exec: Execution::default(),
        }
    }
}

/// Outcome for one degree (or one parameter combination) within a suite.
#[derive(Debug, Clone, Serialize)]
pub struct Case {
    pub n: u32,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Case {
    fn ok(n: u32) -> Self {
        Self {
            n,
            pass: true,
            detail: None,
        }
    }

    fn with(n: u32, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            n,
            pass,
            detail: Some(detail.into()),
        }
    }

    fn fail(n: u32, detail: impl Into<String>) -> Self {
        Self::with(n, false, detail)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum SuiteData {
    None,
    Lengths(LengthReport),
    Sampling(Vec<SamplingReport>),
    Mahler(Vec<MahlerRow>),
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub check: Check,
    pub passed: usize,
    pub failed: usize,
    pub notices: Vec<String>,
    pub cases: Vec<Case>,
    #[serde(skip_serializing_if = "SuiteData::is_none")]
    pub data: SuiteData,
}

impl SuiteData {
    fn is_none(&self) -> bool {
        matches!(self, SuiteData::None)
    }
}

impl SuiteReport {
    fn new(check: Check, cases: Vec<Case>, notices: Vec<String>, data: SuiteData) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        Self {
            check,
            passed,
            failed: cases.len() - passed,
            notices,
            cases,
            data,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

fn pairs(lo: u32, hi: u32, exec: Execution) -> Vec<Result<PadePair, String>> {
    par::map_range(exec, (hi + 1 - lo) as usize, |i| {
        pade::build(lo + i as u32).map_err(|e| e.to_string())
    })
}

fn reflect(p: &RationalPolynomial, k: usize) -> RationalPolynomial {
    p.reversed(k).compose(&RationalPolynomial::one_minus_x())
}

/// `A_n`, `B_n` recomputed from the approximants, independently of [`pade::build`].
fn raw_ab(n: u32) -> (RationalPolynomial, RationalPolynomial) {
    let a = if n == 0 {
        RationalPolynomial::zero()
    } else {
        reflect(&pade::p_n1(n), n as usize - 1)
    };
    (a, reflect(&pade::p_n0(n), n as usize))
}

fn suite_order(opts: &VerifyOptions) -> SuiteReport {
    let cases = pairs(0, opts.max_n, opts.exec)
        .into_iter()
        .enumerate()
        .map(|(n, p)| match p {
            Ok(pair) if order_condition_for(&pair, ORDER_TAIL_TERMS) => Case::ok(n as u32),
            Ok(_) => Case::fail(n as u32, "nonzero low coefficient or tail mismatch"),
            Err(e) => Case::fail(n as u32, e),
        })
        .collect();
    SuiteReport::new(
        Check::Order,
        cases,
        vec![format!("tail compared over {ORDER_TAIL_TERMS} terms")],
        SuiteData::None,
    )
}

fn suite_ab_forms(opts: &VerifyOptions) -> SuiteReport {
    let cases = par::map_range(opts.exec, opts.max_n as usize + 1, |i| {
        let n = i as u32;
        let (a, b) = raw_ab(n);
        let mut bad = Vec::new();
        if a != pade::a_closed_form(n) {
            bad.push("A_n");
        }
        if b != pade::b_closed_form(n) {
            bad.push("B_n");
        }
        let want_a = if n == 0 {
            Degree::NegInfinity
        } else {
            Degree::Finite(n as usize - 1)
        };
        if a.degree() != want_a || b.degree() != Degree::Finite(n as usize) {
            bad.push("degree");
        }
        if bad.is_empty() {
            Case::ok(n)
        } else {
            Case::fail(n, format!("mismatch: {}", bad.join(", ")))
        }
    });
    SuiteReport::new(Check::AbForms, cases, Vec::new(), SuiteData::None)
}

fn suite_divisibility(opts: &VerifyOptions) -> SuiteReport {
    let cases = par::map_range(opts.exec, opts.max_n as usize, |i| {
        let n = i as u32 + 1;
        let (a, b) = raw_ab(n);
        let v = &a.substitute_power(3) - &(&RationalPolynomial::x() * &b.substitute_power(3));
        let den = RationalPolynomial::one_minus_x().pow(2 * n);
        let (w, r) = v.div_rem(&den).expect("nonzero divisor");
        let valuation = v
            .compose(&RationalPolynomial::one_minus_x())
            .coeffs()
            .iter()
            .position(|c| !c.is_zero());
        let pass = r.is_zero() && w.degree() == Degree::Finite(n as usize + 1);
        let detail = match valuation {
            Some(k) => format!("multiplicity of T = 1 in V_n is {k}"),
            None => "V_n vanishes identically".to_owned(),
        };
        Case::with(n, pass, detail)
    });
    SuiteReport::new(Check::Divisibility, cases, Vec::new(), SuiteData::None)
}

/// Seeded rational points `p/q` with `|p| <= 50`, `1 <= q <= 50`, `p/q != 1`.
pub fn beta_points(count: usize, seed: u64) -> Vec<ExactRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let beta = q(rng.gen_range(-50..=50), rng.gen_range(1..=50));
        if !beta.is_one() {
            out.push(beta);
        }
    }
    out
}

fn suite_wronskian(opts: &VerifyOptions) -> SuiteReport {
    let built = pairs(0, opts.max_n + 1, opts.exec);
    let betas = beta_points(opts.beta_points, opts.seed);
    let cases = par::map_range(opts.exec, opts.max_n as usize + 1, |i| {
        let n = i as u32;
        let (lo, hi) = match (&built[i], &built[i + 1]) {
            (Ok(lo), Ok(hi)) => (lo, hi),
            (Err(e), _) | (_, Err(e)) => return Case::fail(n, e.clone()),
        };
        let chk = wronskian_check(lo, hi);
        if !chk.holds {
            return Case::fail(
                n,
                format!(
                    "not c z^(2n) with the expected |c|; found c = {}",
                    chk.constant
                ),
            );
        }
        // In the stored variable the determinant is c (1 - u)^{2n}.
        let det = wronskian_polynomial(lo, hi);
        let zero_at = betas.iter().find(|b| det.eval(b).is_zero());
        match zero_at {
            Some(b) => Case::fail(n, format!("determinant vanishes at u = {b}")),
            None => Case::with(n, true, format!("c = {}", chk.constant)),
        }
    });
    let notice = format!(
        "determinant evaluated at {} seeded rational points u != 1: {}",
        betas.len(),
        betas
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    SuiteReport::new(Check::Wronskian, cases, vec![notice], SuiteData::None)
}

/// The `omega` values used for the combinatorial identities.
pub fn identity_omegas() -> Vec<ExactRational> {
    vec![
        q(0, 1),
        q(1, 3),
        q(-1, 3),
        q(1, 2),
        q(2, 5),
        q(-7, 4),
        q(3, 1),
    ]
}

fn suite_identities(opts: &VerifyOptions) -> SuiteReport {
    let omegas = identity_omegas();
    let cases = par::map_range(opts.exec, opts.max_n as usize + 1, |i| {
        let n = i as u32;
        let mut bad = Vec::new();
        for w in &omegas {
            let mut run = |which: CombinatorialIdentity, ell: u32| {
                if pade::verify_combinatorial_identity(which, n, ell, w) != Ok(true) {
                    bad.push(format!("{which:?} at l = {ell}, w = {w}"));
                }
            };
            for ell in 0..=n {
                run(CombinatorialIdentity::I, ell);
            }
            for ell in 0..n {
                run(CombinatorialIdentity::II, ell);
            }
            run(CombinatorialIdentity::III, 0);
        }
        if bad.is_empty() {
            Case::ok(n)
        } else {
            Case::fail(n, bad.join("; "))
        }
    });
    let notice = format!(
        "omega in {{{}}}",
        omegas
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    SuiteReport::new(Check::Identities, cases, vec![notice], SuiteData::None)
}

fn suite_substitution(opts: &VerifyOptions) -> SuiteReport {
    let cases = pairs(0, opts.max_n, opts.exec)
        .into_iter()
        .enumerate()
        .map(|(n, p)| {
            let n = n as u32;
            let pair = match p {
                Ok(p) => p,
                Err(e) => return Case::fail(n, e),
            };
            let order = 3 * n as i64 + 8;
            match cubic_substitution_for(&pair, order) {
                Ok(true) => Case::ok(n),
                Ok(false) => Case::fail(n, format!("coefficients differ below T^{order}")),
                Err(e) => Case::fail(n, e.to_string()),
            }
        })
        .collect();
    SuiteReport::new(Check::Substitution, cases, Vec::new(), SuiteData::None)
}

fn suite_lengths(opts: &VerifyOptions) -> SuiteReport {
    match bounds::check_length_bounds_with(opts.max_n, opts.exec) {
        Ok(report) => {
            let cases = report.rows.iter().map(|r| Case::ok(r.n)).collect();
            let notices = report.notices.clone();
            SuiteReport::new(Check::Lengths, cases, notices, SuiteData::Lengths(report))
        }
        Err(e) => {
            let n = match &e {
                bounds::BoundsError::BoundViolation { n, .. } => *n,
                _ => 0,
            };
            SuiteReport::new(
                Check::Lengths,
                vec![Case::fail(n, e.to_string())],
                Vec::new(),
                SuiteData::None,
            )
        }
    }
}

fn suite_sampling(opts: &VerifyOptions) -> SuiteReport {
    let mut cases = Vec::new();
    let mut reports = Vec::new();
    for p in pairs(1, opts.max_n, opts.exec) {
        let pair = match p {
            Ok(p) => p,
            Err(e) => {
                cases.push(Case::fail(0, e));
                continue;
            }
        };
        match bounds::sample_pair(&pair, opts.samples, opts.seed, opts.exec) {
            Ok(r) => {
                cases.push(Case::with(
                    pair.n,
                    true,
                    format!("worst ratio {:.6}", bounds::worst_ratio(&r)),
                ));
                reports.push(r);
            }
            Err(e) => cases.push(Case::fail(pair.n, e.to_string())),
        }
    }
    let notice = format!(
        "{} samples per degree, seed {}, rounding cushion {}",
        opts.samples,
        opts.seed,
        bounds::ROUNDING_CUSHION
    );
    SuiteReport::new(
        Check::Sampling,
        cases,
        vec![notice],
        SuiteData::Sampling(reports),
    )
}

fn suite_mahler(opts: &VerifyOptions) -> SuiteReport {
    let rows = pairs(1, opts.max_n, opts.exec);
    let results = par::map(opts.exec, &rows, |p| match p {
        Ok(pair) => bounds::mahler_sandwich(pair).map_err(|e| (pair.n, e.to_string())),
        Err(e) => Err((0, e.clone())),
    });
    let mut cases = Vec::new();
    let mut data = Vec::new();
    for r in results {
        match r {
            Ok(row) => {
                let pass = row.lower_sandwich && row.upper_sandwich && row.cyclotomic_invariance;
                cases.push(Case::with(
                    row.n,
                    pass,
                    format!(
                        "M(W_n) = {:.9e}, L(W_n) = {:.9e}",
                        row.mahler_w, row.length_w
                    ),
                ));
                data.push(row);
            }
            Err((n, e)) => cases.push(Case::fail(n, e)),
        }
    }
    let notice = format!("relative slack {}", bounds::MAHLER_SLACK);
    SuiteReport::new(Check::Mahler, cases, vec![notice], SuiteData::Mahler(data))
}

pub fn run_suite(check: Check, opts: &VerifyOptions) -> SuiteReport {
    match check {
        Check::Order => suite_order(opts),
        Check::AbForms => suite_ab_forms(opts),
        Check::Divisibility => suite_divisibility(opts),
        Check::Wronskian => suite_wronskian(opts),
        Check::Identities => suite_identities(opts),
        Check::Substitution => suite_substitution(opts),
        Check::Lengths => suite_lengths(opts),
        Check::Sampling => suite_sampling(opts),
        Check::Mahler => suite_mahler(opts),
    }
}

/// Runs the selected suites in the given order.
pub fn run(checks: &[Check], opts: &VerifyOptions) -> Vec<SuiteReport> {
    checks.iter().map(|&c| run_suite(c, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyOptions {
        VerifyOptions {
            samples: 200,
            ..VerifyOptions::new(6)
        }
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("bogus".parse::<Check>().is_err());
    }

    #[test]
    fn every_suite_passes_on_small_degrees() {
        for report in run(&Check::ALL, &small()) {
            assert!(report.all_pass(), "{:?}", report);
            assert!(report.passed > 0);
        }
    }

    #[test]
    fn lengths_notice_at_n_one() {
        let r = run_suite(Check::Lengths, &VerifyOptions::new(1));
        assert!(r.all_pass());
        assert!(r.notices.iter().any(|s| s.contains("n = 1")));
    }

    #[test]
    fn beta_points_avoid_one() {
        let b = beta_points(200, 7);
        assert_eq!(b.len(), 200);
        assert!(b.iter().all(|x| !x.is_one()));
        assert_eq!(beta_points(10, 3), beta_points(10, 3));
    }

    #[test]
    fn divisibility_reports_multiplicity() {
        let r = run_suite(Check::Divisibility, &VerifyOptions::new(4));
        for c in &r.cases {
            let want = format!("multiplicity of T = 1 in V_n is {}", 2 * c.n);
            assert_eq!(c.detail.as_deref(), Some(want.as_str()));
        }
    }
}
