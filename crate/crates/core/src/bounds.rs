//! Lengths, Mahler measures and archimedean size bounds for `A_n`, `B_n`,
//! `V_n`, `W_n`.
//!
//! Length checks are exact. The Mahler measure is numeric: the polynomial is
//! split exactly into square-free factors first, so the `(1 - T)^{2n}` factor
//! of `V_n` never reaches the floating-point root finder.

use std::f64::consts::TAU;

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact::{binomial, gen_binomial, q, ExactRational};
use crate::pade::{build, PadeError, PadePair};
use crate::par::{self, Execution};
use crate::poly::RationalPolynomial;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("bound violated at n = {n}: {what}")]
    BoundViolation { n: u32, what: String },
    #[error("sampled bound violated at n = {n}: {check} at z = {witness:?}")]
    SampledViolation {
        n: u32,
        check: String,
        witness: ComplexSample,
    },
    #[error("root finding did not converge after {iterations} iterations (degree {degree})")]
    RootFindingFailure { degree: usize, iterations: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Pade(#[from] PadeError),
}

/// Sum of the absolute values of the coefficients.
pub fn length(p: &RationalPolynomial) -> ExactRational {
    p.coeffs().iter().map(ExactRational::abs).sum()
}

fn pow_int(base: u32, e: u32) -> ExactRational {
    ExactRational::from(BigUint::from(base).pow(e))
}

#[derive(Debug, Clone, Serialize)]
pub struct LengthRow {
    pub n: u32,
    pub length_a: String,
    pub length_b: String,
    pub length_v: String,
    pub length_w: String,
    /// `L(A_n) + L(B_n) <= 4^n / 2`; `None` at `n = 1`, where the bound is not claimed.
    pub combined_bound_holds: Option<bool>,
    /// `L(V_n) = L(A_n) + L(B_n)` (no cancellation between `A_n(T^3)` and `T B_n(T^3)`).
    pub v_length_is_sum: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LengthReport {
    pub n_max: u32,
    pub rows: Vec<LengthRow>,
    pub notices: Vec<String>,
}

/// Exact length identities and bounds for `1 <= n <= n_max`:
/// `L(A_n) = C(2n-1, n-1) <= 4^{n-1}`,
/// `L(B_n) = C(2n-1, n) - 2 C(n-4/3, n) <= 4^n`,
/// `L(A_n) + L(B_n) <= 4^n / 2` for `n >= 2`, and `L(W_n) <= 8^n`.
pub fn check_length_bounds(n_max: u32) -> Result<LengthReport, BoundsError> {
    check_length_bounds_with(n_max, Execution::default())
}

pub fn check_length_bounds_with(n_max: u32, exec: Execution) -> Result<LengthReport, BoundsError> {
    if n_max == 0 {
        return Err(BoundsError::InvalidArgument(
            "n_max must be at least 1".into(),
        ));
    }
    let ns: Vec<u32> = (1..=n_max).collect();
    let rows = par::map(exec, &ns, |&n| length_row(n))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let notices = vec![
        "combined bound L(A_n) + L(B_n) <= 4^n/2 is only claimed for n >= 2; skipped at n = 1"
            .into(),
    ];
    Ok(LengthReport {
        n_max,
        rows,
        notices,
    })
}

fn length_row(n: u32) -> Result<LengthRow, BoundsError> {
    let pair = build(n)?;
    let fail = |what: String| BoundsError::BoundViolation { n, what };
    let la = length(&pair.a);
    let lb = length(&pair.b);
    let lv = length(&pair.v);
    let lw = length(&pair.w);

    let a_closed = ExactRational::from(binomial(2 * n - 1, n - 1));
    if la != a_closed {
        return Err(fail(format!("L(A_n) = {la} but C(2n-1, n-1) = {a_closed}")));
    }
    if la > pow_int(4, n - 1) {
        return Err(fail(format!("L(A_n) = {la} exceeds 4^(n-1)")));
    }
    let b_closed = ExactRational::from(binomial(2 * n - 1, n))
        - ExactRational::from(2) * gen_binomial(&(ExactRational::from(n) - q(4, 3)), n);
    if lb != b_closed {
        return Err(fail(format!(
            "L(B_n) = {lb} but C(2n-1, n) - 2 C(n-4/3, n) = {b_closed}"
        )));
    }
    if lb > pow_int(4, n) {
        return Err(fail(format!("L(B_n) = {lb} exceeds 4^n")));
    }
    let combined_bound_holds =
        (n >= 2).then(|| &la + &lb <= pow_int(4, n) / ExactRational::from(2));
    if combined_bound_holds == Some(false) {
        return Err(fail(format!(
            "L(A_n) + L(B_n) = {} exceeds 4^n/2",
            &la + &lb
        )));
    }
    if lw > pow_int(8, n) {
        return Err(fail(format!("L(W_n) = {lw} exceeds 8^n")));
    }
    Ok(LengthRow {
        n,
        length_a: la.to_string(),
        length_b: lb.to_string(),
        length_v: lv.to_string(),
        length_w: lw.to_string(),
        combined_bound_holds,
        v_length_is_sum: lv == &la + &lb,
    })
}

/// Floating-point Horner evaluation.
pub fn eval_complex(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

const MAX_ABERTH_ITERATIONS: usize = 2000;

/// All complex roots of a polynomial with simple roots (Aberth–Ehrlich).
pub fn aberth_roots(coeffs: &[f64], tol: f64) -> Result<Vec<Complex64>, BoundsError> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[d];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    // Fujiwara-style radius for the initial circle.
    let radius = (0..d)
        .map(|i| monic[i].abs().powf(1.0 / (d - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..MAX_ABERTH_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step <= tol {
            return Ok(z);
        }
    }
    Err(BoundsError::RootFindingFailure {
        degree: d,
        iterations: MAX_ABERTH_ITERATIONS,
    })
}

/// Mahler measure `|lead| * prod max(1, |root|)`.
///
/// `tol` bounds the relative root correction at which iteration stops; the
/// measure itself is then accurate to roughly the same relative size for
/// well-conditioned roots.
pub fn mahler_numeric(p: &RationalPolynomial, tol: f64) -> Result<f64, BoundsError> {
    let Some(d) = p.degree().finite().filter(|&d| d >= 1) else {
        return Err(BoundsError::InvalidArgument(
            "Mahler measure needs degree >= 1".into(),
        ));
    };
    if tol.is_nan() || tol <= 0.0 {
        return Err(BoundsError::InvalidArgument(
            "tolerance must be positive".into(),
        ));
    }
    let lead = p.leading().expect("nonzero").abs().to_f64();
    let mut log_m = lead.ln();
    let factors = if d == 1 {
        vec![p.monic()]
    } else {
        p.squarefree_decomposition()
    };
    let root_tol = tol.min(1e-12);
    for (i, f) in factors.iter().enumerate() {
        let mult = (i + 1) as f64;
        let roots = aberth_roots(&f.to_f64_coeffs(), root_tol)?;
        log_m += mult * roots.iter().map(|r| r.norm().max(1.0).ln()).sum::<f64>();
    }
    Ok(log_m.exp())
}

#[derive(Debug, Clone, Serialize)]
pub struct MahlerRow {
    pub n: u32,
    pub mahler_v: f64,
    pub mahler_w: f64,
    pub length_v: f64,
    pub length_w: f64,
    /// `M(V_n) <= L(V_n)`.
    pub lower_sandwich: bool,
    /// `L(W_n) <= 2^{deg W_n} M(W_n) (1 + 1e-6)`.
    pub upper_sandwich: bool,
    /// `M(V_n) / M(W_n)` within `1 ± 1e-6`.
    pub cyclotomic_invariance: bool,
}

/// Relative slack for the numeric Mahler comparisons.
pub const MAHLER_SLACK: f64 = 1e-6;

/// Numeric `M(V_n)`, `M(W_n)` against the exact lengths.
pub fn mahler_sandwich(pair: &PadePair) -> Result<MahlerRow, BoundsError> {
    let mv = mahler_numeric(&pair.v, 1e-12)?;
    let mw = mahler_numeric(&pair.w, 1e-12)?;
    let lv = length(&pair.v).to_f64();
    let lw = length(&pair.w).to_f64();
    let deg_w = (pair.n + 1) as i32;
    Ok(MahlerRow {
        n: pair.n,
        mahler_v: mv,
        mahler_w: mw,
        length_v: lv,
        length_w: lw,
        lower_sandwich: mv <= lv * (1.0 + MAHLER_SLACK),
        upper_sandwich: lw <= 2f64.powi(deg_w) * mw * (1.0 + MAHLER_SLACK),
        cyclotomic_invariance: ((mv / mw) - 1.0).abs() <= MAHLER_SLACK,
    })
}

/// A pseudo-random evaluation point with the seed that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexSample {
    pub re: f64,
    pub im: f64,
    pub seed: u64,
}

impl ComplexSample {
    /// Modulus log-uniform in `[1e-3, 1e3]`, argument uniform.
    pub fn draw(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log_r: f64 = rng.gen_range(-3.0..=3.0);
        let arg: f64 = rng.gen_range(0.0..TAU);
        let z = Complex64::from_polar(10f64.powf(log_r), arg);
        Self {
            re: z.re,
            im: z.im,
            seed,
        }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Per-sample seed; a SplitMix64 step over `(seed, index)`.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    let mut x = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Multiplicative cushion on the bound side of every sampled inequality.
pub const ROUNDING_CUSHION: f64 = 1e-9;

/// `ln |P(z)|` and `ln sum |c_i| |z|^i`, evaluated through the reversed
/// polynomial when `|z| > 1` so large degrees do not overflow.
fn log_abs_eval(coeffs: &[f64], z: Complex64) -> (f64, f64) {
    let r = z.norm();
    if r <= 1.0 {
        let v = eval_complex(coeffs, z).norm().ln();
        let a = coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.abs())
            .ln();
        (v, a)
    } else {
        let d = coeffs.len() as f64 - 1.0;
        let rev: Vec<f64> = coeffs.iter().rev().copied().collect();
        let w = z.inv();
        let v = eval_complex(&rev, w).norm().ln() + d * r.ln();
        let a = rev
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * (1.0 / r) + c.abs())
            .ln()
            + d * r.ln();
        (v, a)
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// Names of the individual sampled inequalities.
pub const SAMPLED_CHECKS: [&str; 3] = ["A_n", "B_n", "W_n"];

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub check: String,
    /// Largest observed `|value| / bound`; at most `1 + cushion` when the check passes.
    pub max_value_over_bound: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SamplingReport {
    pub n: u32,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
}

/// Archimedean weights `s(v) = 1/m, 2/m` used for the local-height forms.
pub const LOCAL_WEIGHT_DEGREES: [u32; 3] = [1, 2, 5];

fn local_weights() -> Vec<(String, f64)> {
    LOCAL_WEIGHT_DEGREES
        .iter()
        .flat_map(|&m| {
            [
                (format!("1/{m}"), 1.0 / m as f64),
                (format!("2/{m}"), 2.0 / m as f64),
            ]
        })
        .collect()
}

/// Log-ratios `ln(value) - ln(allowed)` of every inequality at one point.
fn sample_log_ratios(
    n: u32,
    a: &[f64],
    b: &[f64],
    w: &[f64],
    v: &[f64],
    weights: &[(String, f64)],
    z: Complex64,
) -> Vec<f64> {
    let nf = n as f64;
    let cushion = ROUNDING_CUSHION.ln_1p();
    let log_max1 = |x: Complex64| x.norm().max(1.0).ln();
    let mut out = Vec::with_capacity(3 + 3 * weights.len());

    let ab_bound = nf * 4f64.ln() + nf * log_max1(z) + cushion;
    out.push(log_abs_eval(a, z).0 - ab_bound);
    out.push(log_abs_eval(b, z).0 - ab_bound);
    let w_bound = nf * 8f64.ln() + (nf + 1.0) * log_max1(z) + cushion;
    out.push(log_abs_eval(w, z).0 - w_bound);

    // Local-height forms at alpha = z: |A_n(alpha^3)|_v <= 4^{n s} H_v(alpha)^{3n} and
    // |V_n(alpha)|_v <= |1 - alpha|_v^{2n} 8^{n s} H_v(alpha)^{n+1}, with |x|_v = |x|^s.
    let cube = z * z * z;
    let la = log_abs_eval(a, cube).0;
    let lb = log_abs_eval(b, cube).0;
    let (lv, lv_abs) = log_abs_eval(v, z);
    // Horner rounding allowance for V_n, which cancels heavily near alpha = 1.
    let horner_err = ((8 * v.len() + 4) as f64 * f64::EPSILON).ln() + lv_abs;
    for (_, s) in weights {
        let hv = s * log_max1(z);
        let ab = nf * s * 4f64.ln() + 3.0 * nf * hv;
        out.push(s * la - (ab + cushion));
        out.push(s * lb - (ab + cushion));
        let v_bound = 2.0 * nf * s * (Complex64::new(1.0, 0.0) - z).norm().ln()
            + nf * s * 8f64.ln()
            + (nf + 1.0) * hv;
        out.push(s * lv - log_add(v_bound + cushion, s * horner_err));
    }
    out
}

fn check_names(weights: &[(String, f64)]) -> Vec<String> {
    let mut names: Vec<String> = SAMPLED_CHECKS.iter().map(|s| s.to_string()).collect();
    for (label, _) in weights {
        names.push(format!("A_n(alpha^3), s(v)={label}"));
        names.push(format!("B_n(alpha^3), s(v)={label}"));
        names.push(format!("V_n(alpha), s(v)={label}"));
    }
    names
}

/// Samples `|A_n|, |B_n| <= 4^n max(1,|z|)^n`, `|W_n| <= 8^n max(1,|z|)^{n+1}`
/// and their local-height forms at seeded complex points.
pub fn sample_archimedean_bounds(
    n: u32,
    samples: usize,
    seed: u64,
) -> Result<SamplingReport, BoundsError> {
    let pair = build(n)?;
    sample_pair(&pair, samples, seed, Execution::default())
}

pub fn sample_pair(
    pair: &PadePair,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<SamplingReport, BoundsError> {
    let n = pair.n;
    if n == 0 {
        return Err(BoundsError::InvalidArgument(
            "sampled bounds are stated for n >= 1".into(),
        ));
    }
    if samples == 0 {
        return Err(BoundsError::InvalidArgument(
            "need at least one sample".into(),
        ));
    }
    let a = pair.a.to_f64_coeffs();
    let b = pair.b.to_f64_coeffs();
    let w = pair.w.to_f64_coeffs();
    let v = pair.v.to_f64_coeffs();
    let weights = local_weights();
    let names = check_names(&weights);

    let rows = par::map_range(exec, samples, |i| {
        let sample = ComplexSample::draw(sample_seed(seed, i as u64));
        (
            sample,
            sample_log_ratios(n, &a, &b, &w, &v, &weights, sample.z()),
        )
    });

    let mut checks: Vec<CheckSummary> = names
        .iter()
        .map(|c| CheckSummary {
            check: c.clone(),
            max_value_over_bound: 0.0,
            violations: 0,
        })
        .collect();
    let mut first_violation = None;
    for (sample, ratios) in &rows {
        for (summary, &r) in checks.iter_mut().zip(ratios) {
            summary.max_value_over_bound = summary.max_value_over_bound.max(r.exp());
            if r > 0.0 || r.is_nan() {
                summary.violations += 1;
                first_violation.get_or_insert((summary.check.clone(), *sample));
            }
        }
    }
    if let Some((check, witness)) = first_violation {
        return Err(BoundsError::SampledViolation { n, check, witness });
    }
    Ok(SamplingReport {
        n,
        samples,
        seed,
        checks,
    })
}

/// Largest observed ratio across all checks of a report.
pub fn worst_ratio(report: &SamplingReport) -> f64 {
    report
        .checks
        .iter()
        .map(|c| c.max_value_over_bound)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn poly(c: &[(i64, i64)]) -> RationalPolynomial {
        RationalPolynomial::new(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn length_examples() {
        let p1 = build(1).unwrap();
        assert_eq!(length(&p1.a), q(1, 1));
        assert_eq!(length(&p1.b), q(5, 3));
        assert_eq!(length(&RationalPolynomial::zero()), q(0, 1));
    }

    #[test]
    fn length_bounds_small_and_exemption() {
        let r = check_length_bounds(2).unwrap();
        assert_eq!(r.rows[0].combined_bound_holds, None);
        assert_eq!(r.rows[1].combined_bound_holds, Some(true));
        // n = 1 alone: L(A_1) + L(B_1) = 8/3 > 2, which is why it is exempt.
        assert!(q(8, 3) > q(2, 1));
        assert!(check_length_bounds(1).is_ok());
        assert!(check_length_bounds(0).is_err());
    }

    #[test]
    fn mahler_examples() {
        let m = mahler_numeric(&RationalPolynomial::from_integers(&[-2, 1]), 1e-10).unwrap();
        assert!((m - 2.0).abs() < 1e-12);
        let m = mahler_numeric(&RationalPolynomial::from_integers(&[1, 0, 1]), 1e-10).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
        let m = mahler_numeric(&poly(&[(-3, 1), (0, 1), (2, 1)]), 1e-10).unwrap();
        // 2 (x^2 - 3/2): roots ±sqrt(3/2)
        assert!((m - 3.0).abs() < 1e-12);
        assert!(mahler_numeric(&RationalPolynomial::one(), 1e-10).is_err());
    }

    /// Jensen: `ln M(P) = (1/2π) ∫ ln|P(e^{iθ})| dθ`; the trapezoid rule converges
    /// geometrically when no root lies on the unit circle.
    fn mahler_by_quadrature(p: &RationalPolynomial, points: usize) -> f64 {
        let c = p.to_f64_coeffs();
        let s: f64 = (0..points)
            .map(|k| {
                let z = Complex64::from_polar(1.0, TAU * k as f64 / points as f64);
                eval_complex(&c, z).norm().ln()
            })
            .sum();
        (s / points as f64).exp()
    }

    #[test]
    fn mahler_of_w_matches_quadrature() {
        for n in [2u32, 5, 9] {
            let pair = build(n).unwrap();
            let m = mahler_numeric(&pair.w, 1e-12).unwrap();
            let oracle = mahler_by_quadrature(&pair.w, 1 << 14);
            assert!(
                ((m - oracle) / oracle).abs() < 1e-8,
                "n={n}: {m} vs {oracle}"
            );
            let lw = length(&pair.w).to_f64();
            assert!(m <= lw && lw <= 2f64.powi(n as i32 + 1) * m);
        }
    }

    #[test]
    fn mahler_sandwich_small() {
        for n in 1..=8 {
            let row = mahler_sandwich(&build(n).unwrap()).unwrap();
            assert!(
                row.lower_sandwich && row.upper_sandwich && row.cyclotomic_invariance,
                "{row:?}"
            );
        }
    }

    #[test]
    fn point_evaluations() {
        let p1 = build(1).unwrap();
        let z0 = Complex64::new(0.0, 0.0);
        assert_eq!(eval_complex(&p1.a.to_f64_coeffs(), z0).norm(), 1.0);
        assert!((eval_complex(&p1.b.to_f64_coeffs(), z0).norm() - 4.0 / 3.0).abs() < 1e-15);
        let z1 = Complex64::new(1.0, 0.0);
        assert!((eval_complex(&p1.w.to_f64_coeffs(), z1).norm() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic_and_mode_independent() {
        let pair = build(4).unwrap();
        let a = sample_pair(&pair, 500, 7, Execution::Sequential).unwrap();
        let b = sample_pair(&pair, 500, 7, Execution::Parallel).unwrap();
        for (x, y) in a.checks.iter().zip(&b.checks) {
            assert_eq!(x.max_value_over_bound, y.max_value_over_bound);
        }
        assert!(worst_ratio(&a) <= 1.0 + ROUNDING_CUSHION);
    }

    #[test]
    fn sampling_detects_an_inflated_polynomial() {
        let mut pair = build(3).unwrap();
        pair.w = pair.w.scale(&q(1000, 1));
        assert!(matches!(
            sample_pair(&pair, 200, 1, Execution::Sequential),
            Err(BoundsError::SampledViolation { check, .. }) if check == "W_n"
        ));
    }

    #[test]
    fn log_eval_matches_direct_eval() {
        let c = [1.0, -2.0, 0.5, 3.0];
        for z in [Complex64::new(0.3, 0.2), Complex64::new(40.0, -7.0)] {
            let (lv, _) = log_abs_eval(&c, z);
            assert!((lv - eval_complex(&c, z).norm().ln()).abs() < 1e-12);
        }
    }
}
