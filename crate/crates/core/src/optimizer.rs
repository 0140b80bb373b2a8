//! Grid search over `(B, r0, k, ln(2C), n)` and the comparison certificates
//! for the published bounds.
//!
//! Grid points are generated as exact decimals `lo + i * step`, so halving a
//! step produces a strict superset of the coarser grid and the best bound can
//! only improve under refinement.

use std::cmp::Ordering;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::par::{self, Execution};
use crate::pipeline::{
    self, fmt_real, log_add_exp, parts_from, serialize_real, step2_from, BoundBreakdown, Choice,
    EvertseParams, LogTerms, PipelineError, Precision, Real,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OptimizerError {
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error("no grid point satisfies the validity constraints")]
    EmptyFeasibleSet,
    #[error("comparison failed{}: {detail}", witness.map(|(m, s)| format!(" at m = {m}, s = {s}")).unwrap_or_default())]
    ComparisonFailure {
        witness: Option<(u64, u64)>,
        detail: String,
    },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

/// Inclusive decimal range `lo, lo + step, ..., <= hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecimalRange {
    pub lo: Real,
    pub hi: Real,
    pub step: Real,
}

impl DecimalRange {
    pub fn parse(lo: &str, hi: &str, step: &str, prec: Precision) -> Result<Self, OptimizerError> {
        Ok(Self {
            lo: prec.parse(lo)?,
            hi: prec.parse(hi)?,
            step: prec.parse(step)?,
        })
    }

    pub fn singleton(x: &str, prec: Precision) -> Result<Self, OptimizerError> {
        Self::parse(x, x, "1", prec)
    }

    fn validate(&self, name: &str) -> Result<(), OptimizerError> {
        if self.step <= Real::ZERO {
            return Err(OptimizerError::InvalidSpec(format!(
                "{name}: step must be positive"
            )));
        }
        if self.lo > self.hi {
            return Err(OptimizerError::InvalidSpec(format!(
                "{name}: empty range (lo > hi)"
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<Real> {
        let mut out = Vec::new();
        let mut i = 0i64;
        loop {
            let x = &self.lo + &self.step * Real::from(i);
            if x > self.hi {
                return out;
            }
            out.push(x);
            i += 1;
        }
    }
}

/// Inclusive integer range with a positive step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub lo: u64,
    pub hi: u64,
    pub step: u64,
}

impl IntRange {
    pub fn new(lo: u64, hi: u64, step: u64) -> Self {
        Self { lo, hi, step }
    }

    fn validate(&self, name: &str) -> Result<(), OptimizerError> {
        if self.step == 0 {
            return Err(OptimizerError::InvalidSpec(format!(
                "{name}: step must be positive"
            )));
        }
        if self.lo > self.hi {
            return Err(OptimizerError::InvalidSpec(format!(
                "{name}: empty range (lo > hi)"
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> impl Iterator<Item = u64> {
        (self.lo..=self.hi).step_by(self.step as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KPolicy {
    /// Smallest admissible `k` for each `(B, r0)`.
    Minimal,
    Explicit(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpec {
    pub b_range: DecimalRange,
    pub r0_range: IntRange,
    pub ln2c_range: DecimalRange,
    /// Step-4 integer `n`, scanned exhaustively.
    pub n_range: (u64, u64),
    pub k_policy: KPolicy,
    pub m: u64,
    pub s: u64,
    /// Number of ranked results to keep.
    pub top: usize,
}

impl SearchSpec {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        self.b_range.validate("B_range")?;
        self.r0_range.validate("r0_range")?;
        self.ln2c_range.validate("ln2C_range")?;
        if self.n_range.0 == 0 || self.n_range.0 > self.n_range.1 {
            return Err(OptimizerError::InvalidSpec(
                "n_range must satisfy 1 <= lo <= hi".into(),
            ));
        }
        if self.m == 0 || self.s == 0 {
            return Err(OptimizerError::InvalidSpec(
                "m and s must be positive".into(),
            ));
        }
        if self.k_policy == KPolicy::Explicit(0) {
            return Err(OptimizerError::InvalidSpec(
                "explicit k must be positive".into(),
            ));
        }
        if self.top == 0 {
            return Err(OptimizerError::InvalidSpec("top must be positive".into()));
        }
        Ok(())
    }

    /// Parses a flat TOML document whose keys mirror the field names.
    ///
    /// ```toml
    /// B_range = [0.830, 0.838, 0.001]
    /// r0_range = [1400, 1800, 50]
    /// ln2C_range = [7.6, 8.0, 0.05]
    /// n_range = [40, 50]
    /// k_policy = "minimal"   # or an integer
    /// m = 1
    /// s = 1
    /// top = 10
    /// ```
    ///
    /// Decimal entries may also be strings. Floats are re-read through their
    /// shortest decimal form, so `0.834` means exactly 834/1000.
    pub fn from_toml(text: &str, prec: Precision) -> Result<Self, OptimizerError> {
        let raw: RawSpec =
            toml::from_str(text).map_err(|e| OptimizerError::InvalidSpec(e.to_string()))?;
        raw.into_spec(prec)
    }

    pub fn from_file(path: &Path, prec: Precision) -> Result<Self, OptimizerError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            OptimizerError::InvalidSpec(format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_toml(&text, prec)
    }

    /// The spec with every decimal and integer step halved (integer steps of 1 stay 1).
    pub fn refined(&self, prec: Precision) -> Self {
        let half = |r: &DecimalRange| DecimalRange {
            lo: r.lo.clone(),
            hi: r.hi.clone(),
            step: prec.lift(&r.step) / prec.int(2),
        };
        let mut out = self.clone();
        out.b_range = half(&self.b_range);
        out.ln2c_range = half(&self.ln2c_range);
        if self.r0_range.step.is_multiple_of(2) {
            out.r0_range.step = self.r0_range.step / 2;
        }
        out
    }

    /// Echo of the spec with reals rendered as strings.
    pub fn echo(&self) -> SpecEcho {
        let dr = |r: &DecimalRange| [fmt_real(&r.lo), fmt_real(&r.hi), fmt_real(&r.step)];
        SpecEcho {
            b_range: dr(&self.b_range),
            r0_range: [self.r0_range.lo, self.r0_range.hi, self.r0_range.step],
            ln2c_range: dr(&self.ln2c_range),
            n_range: [self.n_range.0, self.n_range.1],
            k_policy: self.k_policy,
            m: self.m,
            s: self.s,
            top: self.top,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecEcho {
    #[serde(rename = "B_range")]
    pub b_range: [String; 3],
    pub r0_range: [u64; 3],
    #[serde(rename = "ln2C_range")]
    pub ln2c_range: [String; 3],
    pub n_range: [u64; 2],
    pub k_policy: KPolicy,
    pub m: u64,
    pub s: u64,
    pub top: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Int(i64),
    Float(f64),
    Text(String),
}

impl RawNumber {
    fn decimal_text(&self) -> String {
        match self {
            RawNumber::Int(i) => i.to_string(),
            RawNumber::Float(f) => format!("{f}"),
            RawNumber::Text(s) => s.clone(),
        }
    }

    fn integer(&self, name: &str) -> Result<u64, OptimizerError> {
        match self {
            RawNumber::Int(i) if *i >= 0 => Ok(*i as u64),
            RawNumber::Text(s) => s.trim().parse().map_err(|_| {
                OptimizerError::InvalidSpec(format!("{name}: {s:?} is not a nonnegative integer"))
            }),
            other => Err(OptimizerError::InvalidSpec(format!(
                "{name}: {} is not a nonnegative integer",
                other.decimal_text()
            ))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawKPolicy {
    Explicit(u64),
    Named(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(rename = "B_range")]
    b_range: Vec<RawNumber>,
    r0_range: Vec<RawNumber>,
    #[serde(rename = "ln2C_range")]
    ln2c_range: Vec<RawNumber>,
    n_range: Vec<RawNumber>,
    #[serde(default)]
    k_policy: Option<RawKPolicy>,
    m: u64,
    s: u64,
    #[serde(default = "default_top")]
    top: usize,
}

fn default_top() -> usize {
    10
}

fn triple<'a>(v: &'a [RawNumber], name: &str) -> Result<[&'a RawNumber; 3], OptimizerError> {
    match v {
        [a, b, c] => Ok([a, b, c]),
        [a] => Err(OptimizerError::InvalidSpec(format!(
            "{name}: expected [lo, hi, step], got a single value {}",
            a.decimal_text()
        ))),
        _ => Err(OptimizerError::InvalidSpec(format!(
            "{name}: expected [lo, hi, step]"
        ))),
    }
}

impl RawSpec {
    fn into_spec(self, prec: Precision) -> Result<SearchSpec, OptimizerError> {
        let dec = |v: &[RawNumber], name: &str| -> Result<DecimalRange, OptimizerError> {
            let [lo, hi, step] = triple(v, name)?;
            DecimalRange::parse(
                &lo.decimal_text(),
                &hi.decimal_text(),
                &step.decimal_text(),
                prec,
            )
        };
        let b_range = dec(&self.b_range, "B_range")?;
        let ln2c_range = dec(&self.ln2c_range, "ln2C_range")?;
        let [lo, hi, step] = triple(&self.r0_range, "r0_range")?;
        let r0_range = IntRange::new(
            lo.integer("r0_range")?,
            hi.integer("r0_range")?,
            step.integer("r0_range")?,
        );
        let n_range = match self.n_range.as_slice() {
            [lo, hi] => (lo.integer("n_range")?, hi.integer("n_range")?),
            _ => {
                return Err(OptimizerError::InvalidSpec(
                    "n_range: expected [lo, hi]".into(),
                ))
            }
        };
        let k_policy = match self.k_policy {
            None => KPolicy::Minimal,
            Some(RawKPolicy::Explicit(k)) => KPolicy::Explicit(k),
            Some(RawKPolicy::Named(s)) if s == "minimal" => KPolicy::Minimal,
            Some(RawKPolicy::Named(s)) => {
                return Err(OptimizerError::InvalidSpec(format!(
                    "k_policy: expected \"minimal\" or an integer, got {s:?}"
                )))
            }
        };
        let spec = SearchSpec {
            b_range,
            r0_range,
            ln2c_range,
            n_range,
            k_policy,
            m: self.m,
            s: self.s,
            top: self.top,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// One feasible `(B, r0, k, ln(2C), n)` with its objective.
#[derive(Debug, Clone)]
struct Scored {
    params: EvertseParams,
    objective: Real,
    tuple: [Real; 3],
}

fn cmp_scored(x: &Scored, y: &Scored) -> Ordering {
    x.objective
        .cmp(&y.objective)
        .then_with(|| x.params.b.cmp(&y.params.b))
        .then_with(|| x.params.r0.cmp(&y.params.r0))
        .then_with(|| x.params.ln2c.cmp(&y.params.ln2c))
        .then_with(|| x.params.n_step4.cmp(&y.params.n_step4))
}

/// All feasible `n` for one `(B, r0, ln(2C))`; empty when any constraint fails.
fn score_point(spec: &SearchSpec, b: &Real, r0: u64, ln2c: &Real, prec: Precision) -> Vec<Scored> {
    let k = match spec.k_policy {
        KPolicy::Minimal => match pipeline::min_k(b, r0, prec) {
            Ok(k) => k,
            Err(_) => return Vec::new(),
        },
        KPolicy::Explicit(k) => k,
    };
    let template = EvertseParams {
        b: b.clone(),
        r0,
        k,
        ln2c: ln2c.clone(),
        n_step4: spec.n_range.0,
        m: spec.m,
        s: spec.s,
    };
    if template.validate(prec).is_err() {
        return Vec::new();
    }
    let Ok(e) = pipeline::exponents(b, r0, k, prec) else {
        return Vec::new();
    };
    let p = parts_from(&e, prec);
    if !p.fpart_dominates {
        return Vec::new();
    }
    let Ok(s2) = step2_from(b, &e.f1, &p.ln_fpart_const, ln2c, prec) else {
        return Vec::new();
    };
    let Ok(r_b) = pipeline::r_of_b(b, prec) else {
        return Vec::new();
    };
    let base_small = prec.int(3) * &r_b;
    let coeff_small = prec.int((s2.n_bound + k) as i64) / &r_b;
    let sf = prec.int(spec.s as i64);
    let small = coeff_small.ln() + &sf * base_small.ln();
    let ln5 = prec.int(5).ln();
    (spec.n_range.0..=spec.n_range.1)
        .map(|n| {
            let base_m = prec.int(2) * (prec.int(3) * ln2c / prec.int(n as i64)).exp();
            let large =
                &ln5 + prec.int(spec.m as i64) * base_m.ln() + &sf * prec.int(n as i64).ln();
            Scored {
                params: EvertseParams {
                    n_step4: n,
                    ..template.clone()
                },
                objective: log_add_exp(&small, &large, prec),
                tuple: [coeff_small.clone(), base_small.clone(), base_m],
            }
        })
        .collect()
}

fn feasible(
    spec: &SearchSpec,
    prec: Precision,
    exec: Execution,
) -> Result<Vec<Vec<Scored>>, OptimizerError> {
    spec.validate()?;
    let bs = spec.b_range.points();
    let ls = spec.ln2c_range.points();
    let rs: Vec<u64> = spec.r0_range.points().collect();
    let mut grid = Vec::with_capacity(bs.len() * rs.len() * ls.len());
    for b in &bs {
        for &r0 in &rs {
            for l in &ls {
                grid.push((b, r0, l));
            }
        }
    }
    let scored = par::map(exec, &grid, |(b, r0, l)| score_point(spec, b, *r0, l, prec));
    if scored.iter().all(Vec::is_empty) {
        return Err(OptimizerError::EmptyFeasibleSet);
    }
    Ok(scored)
}

fn breakdown_of(sc: &Scored, prec: Precision) -> Result<BoundBreakdown, OptimizerError> {
    Ok(pipeline::assemble_bound(&sc.params, prec)?)
}

/// Ranked breakdowns, best first: per `(B, r0, ln(2C))` the best `n`, then the top `spec.top` overall.
pub fn grid_search(
    spec: &SearchSpec,
    prec: Precision,
) -> Result<Vec<BoundBreakdown>, OptimizerError> {
    grid_search_with(spec, prec, Execution::default())
}

pub fn grid_search_with(
    spec: &SearchSpec,
    prec: Precision,
    exec: Execution,
) -> Result<Vec<BoundBreakdown>, OptimizerError> {
    let scored = feasible(spec, prec, exec)?;
    let mut best: Vec<Scored> = scored
        .into_iter()
        .filter_map(|v| v.into_iter().min_by(cmp_scored))
        .collect();
    best.sort_by(cmp_scored);
    best.truncate(spec.top);
    best.iter().map(|sc| breakdown_of(sc, prec)).collect()
}

fn dominates(x: &Scored, y: &Scored) -> bool {
    let le =
        x.tuple.iter().zip(&y.tuple).all(|(a, b)| a <= b) && x.params.n_step4 <= y.params.n_step4;
    let lt =
        x.tuple.iter().zip(&y.tuple).any(|(a, b)| a < b) || x.params.n_step4 < y.params.n_step4;
    le && lt
}

/// Non-dominated coefficient tuples `(coeff_small, base_small, base_m, base_s)` over the grid,
/// ordered by the objective at the spec's `(m, s)`. Duplicated tuples keep their first representative.
pub fn pareto_front(
    spec: &SearchSpec,
    prec: Precision,
) -> Result<Vec<BoundBreakdown>, OptimizerError> {
    pareto_front_with(spec, prec, Execution::default())
}

pub fn pareto_front_with(
    spec: &SearchSpec,
    prec: Precision,
    exec: Execution,
) -> Result<Vec<BoundBreakdown>, OptimizerError> {
    let mut all: Vec<Scored> = feasible(spec, prec, exec)?.into_iter().flatten().collect();
    all.sort_by(cmp_scored);
    let keep = par::map_range(exec, all.len(), |i| {
        let x = &all[i];
        !all.iter().enumerate().any(|(j, y)| {
            dominates(y, x) || (j < i && y.tuple == x.tuple && y.params.n_step4 == x.params.n_step4)
        })
    });
    all.iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(sc, _)| breakdown_of(sc, prec))
        .collect()
}

/// The published constants of the competing bound `(2 + 5 a^m) b^s`.
pub const EVERTSE_BASE_M: &str = "3.26396";
pub const EVERTSE_BASE_S: u64 = 49;

#[derive(Debug, Clone, Serialize)]
pub struct CellMargin {
    pub m: u64,
    pub s: u64,
    pub winner: Choice,
    /// `ln(reference) - ln(min of the two choices)`.
    #[serde(serialize_with = "serialize_real")]
    pub log_margin: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub reference: String,
    pub m_max: u64,
    pub s_max: u64,
    pub cells: u64,
    pub passed_cells: u64,
    pub worst: CellMargin,
    pub first_failure: Option<CellMargin>,
    /// Present only for the theorem-form comparison.
    pub certificate: Option<Certificate>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none() && self.certificate.as_ref().is_none_or(|c| c.holds)
    }
}

fn choice_pair(prec: Precision) -> [(Choice, BoundBreakdown); 2] {
    [
        (Choice::I, Choice::I.breakdown(1, 1, prec)),
        (Choice::II, Choice::II.breakdown(1, 1, prec)),
    ]
}

fn min_choice(logs: &[(Choice, LogTerms); 2], m: u64, s: u64, prec: Precision) -> (Choice, Real) {
    let v1 = logs[0].1.at(m, s, prec);
    let v2 = logs[1].1.at(m, s, prec);
    if v1 <= v2 {
        (logs[0].0, v1)
    } else {
        (logs[1].0, v2)
    }
}

fn sweep(
    m_max: u64,
    s_max: u64,
    reference: String,
    strict: bool,
    rhs: impl Fn(u64, u64) -> Real + Sync,
    prec: Precision,
    exec: Execution,
) -> Result<ComparisonReport, OptimizerError> {
    if m_max == 0 || s_max == 0 {
        return Err(OptimizerError::InvalidSpec(
            "m_max and s_max must be positive".into(),
        ));
    }
    let logs = choice_pair(prec).map(|(c, bd)| (c, LogTerms::new(&bd, prec)));
    let cells: Vec<(u64, u64)> = (1..=m_max)
        .flat_map(|m| (1..=s_max).map(move |s| (m, s)))
        .collect();
    let margins = par::map(exec, &cells, |&(m, s)| {
        let (winner, ours) = min_choice(&logs, m, s, prec);
        CellMargin {
            m,
            s,
            winner,
            log_margin: rhs(m, s) - ours,
        }
    });
    let ok = |c: &CellMargin| {
        if strict {
            c.log_margin > Real::ZERO
        } else {
            c.log_margin >= Real::ZERO
        }
    };
    let passed_cells = margins.iter().filter(|c| ok(c)).count() as u64;
    let first_failure = margins.iter().find(|c| !ok(c)).cloned();
    let worst = margins
        .iter()
        .min_by(|a, b| a.log_margin.cmp(&b.log_margin))
        .cloned()
        .expect("at least one cell");
    Ok(ComparisonReport {
        reference,
        m_max,
        s_max,
        cells: cells.len() as u64,
        passed_cells,
        worst,
        first_failure,
        certificate: None,
    })
}

fn failure_error(report: &ComparisonReport) -> OptimizerError {
    match (&report.first_failure, &report.certificate) {
        (Some(c), _) => OptimizerError::ComparisonFailure {
            witness: Some((c.m, c.s)),
            detail: format!(
                "{} exceeds the reference by log margin {}",
                c.winner,
                fmt_real(&c.log_margin)
            ),
        },
        (None, Some(cert)) => OptimizerError::ComparisonFailure {
            witness: None,
            detail: format!("coefficientwise certificate fails: {}", cert.detail),
        },
        (None, None) => unreachable!("report passed"),
    }
}

/// Full table for `min(Choice I, Choice II) < (2 + 5 * 3.26396^m) * 49^s`.
pub fn compare_evertse_report(
    m_max: u64,
    s_max: u64,
    prec: Precision,
    exec: Execution,
) -> Result<ComparisonReport, OptimizerError> {
    let a = prec.parse(EVERTSE_BASE_M)?;
    let ln_a = a.ln();
    let ln2 = prec.int(2).ln();
    let ln5 = prec.int(5).ln();
    let ln_b = prec.int(EVERTSE_BASE_S as i64).ln();
    sweep(
        m_max,
        s_max,
        format!("(2 + 5*{EVERTSE_BASE_M}^m) * {EVERTSE_BASE_S}^s"),
        true,
        |m, s| {
            log_add_exp(&ln2, &(&ln5 + prec.int(m as i64) * &ln_a), prec)
                + prec.int(s as i64) * &ln_b
        },
        prec,
        exec,
    )
}

pub fn compare_evertse(
    m_max: u64,
    s_max: u64,
    prec: Precision,
) -> Result<ComparisonReport, OptimizerError> {
    let report = compare_evertse_report(m_max, s_max, prec, Execution::default())?;
    if report.passed() {
        Ok(report)
    } else {
        Err(failure_error(&report))
    }
}

/// Constants of the closed-form bound `(coeff + 5 base_m^m) base_s^s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremConstants {
    #[serde(serialize_with = "serialize_real")]
    pub coeff: Real,
    #[serde(serialize_with = "serialize_real")]
    pub base_m: Real,
    pub base_s: u64,
}

impl TheoremConstants {
    pub fn published(prec: Precision) -> Self {
        Self::parse("3.1", "3.4", 45, prec).expect("literal")
    }

    pub fn parse(
        coeff: &str,
        base_m: &str,
        base_s: u64,
        prec: Precision,
    ) -> Result<Self, OptimizerError> {
        Ok(Self {
            coeff: prec.parse(coeff)?,
            base_m: prec.parse(base_m)?,
            base_s,
        })
    }
}

/// Termwise domination of one choice's bound by the closed form, valid for every `m, s >= 1`:
/// `coeff_small <= coeff`, `base_small <= base_s`, `base_m <= base_m`, `n <= base_s`.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub holds: bool,
    pub dominating_choice: Option<Choice>,
    pub detail: String,
}

fn certificate(
    pair: &[(Choice, BoundBreakdown); 2],
    c: &TheoremConstants,
    prec: Precision,
) -> Certificate {
    let base_s = prec.int(c.base_s as i64);
    let mut reasons = Vec::new();
    for (choice, bd) in pair {
        let mut failed = Vec::new();
        if bd.coeff_small > c.coeff {
            failed.push(format!(
                "coeff_small {} > {}",
                fmt_real(&bd.coeff_small),
                fmt_real(&c.coeff)
            ));
        }
        if bd.base_small > base_s {
            failed.push(format!(
                "base_small {} > {}",
                fmt_real(&bd.base_small),
                c.base_s
            ));
        }
        if bd.base_m > c.base_m {
            failed.push(format!(
                "base_m {} > {}",
                fmt_real(&bd.base_m),
                fmt_real(&c.base_m)
            ));
        }
        if bd.base_s > c.base_s {
            failed.push(format!("base_s {} > {}", bd.base_s, c.base_s));
        }
        if failed.is_empty() {
            return Certificate {
                holds: true,
                dominating_choice: Some(*choice),
                detail: format!("choice {choice} is dominated termwise"),
            };
        }
        reasons.push(format!("choice {choice}: {}", failed.join(", ")));
    }
    Certificate {
        holds: false,
        dominating_choice: None,
        detail: reasons.join("; "),
    }
}

/// Checks `min(Choice I, Choice II) <= (coeff + 5 base_m^m) base_s^s` on the grid in the log
/// domain and attaches the termwise certificate; both must hold.
pub fn theorem_form_report(
    m_max: u64,
    s_max: u64,
    constants: &TheoremConstants,
    prec: Precision,
    exec: Execution,
) -> Result<ComparisonReport, OptimizerError> {
    let ln_c = constants.coeff.ln();
    let ln5 = prec.int(5).ln();
    let ln_a = constants.base_m.ln();
    let ln_b = prec.int(constants.base_s as i64).ln();
    let mut report = sweep(
        m_max,
        s_max,
        format!(
            "({} + 5*{}^m) * {}^s",
            fmt_real(&constants.coeff),
            fmt_real(&constants.base_m),
            constants.base_s
        ),
        false,
        |m, s| {
            log_add_exp(&ln_c, &(&ln5 + prec.int(m as i64) * &ln_a), prec)
                + prec.int(s as i64) * &ln_b
        },
        prec,
        exec,
    )?;
    report.certificate = Some(certificate(&choice_pair(prec), constants, prec));
    Ok(report)
}

pub fn theorem_form_check(
    m_max: u64,
    s_max: u64,
    constants: &TheoremConstants,
    prec: Precision,
) -> Result<ComparisonReport, OptimizerError> {
    let report = theorem_form_report(m_max, s_max, constants, prec, Execution::default())?;
    if report.passed() {
        Ok(report)
    } else {
        Err(failure_error(&report))
    }
}
