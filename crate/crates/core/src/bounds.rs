//! Evaluators for the explicit convergence-rate bounds, the scalar
//! recursion lemma behind them, and trace-versus-bound verification.
//!
//! Every evaluator validates the hypotheses of its theorem (nonincreasing
//! weakness sequence, admissible interpolation exponent) and errors
//! otherwise; the verification layer skips a bound, with a reason, when its
//! hypotheses do not apply to a trace.
use alloc::string::String;
use alloc::vec::Vec;
use crate::banach::{BanachGreedyTrace, DgaVariant};
use crate::error::{Error, Result};
use crate::hilbert::{GreedyTrace, HilbertKind};
use crate::projections::{ProjectionKind, ProjectionTrace};
use crate::weakness::WeaknessSequence;
/// Relative tolerance for per-step recursion identities.
pub const RECURSION_RTOL: f64 = 1e-9;
/// Absolute slack for the weak-selection floor.
pub const FLOOR_ATOL: f64 = 1e-10;
/// Tolerances for measured-versus-bound comparisons: a violation of
/// `measured <= bound + absolute + relative * |bound|` fails the report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
}
impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            absolute: 1e-9,
            relative: 1e-12,
        }
    }
}
impl Tolerance {
    fn allows(&self, measured: f64, bound: f64) -> bool {
        measured <= bound + self.absolute + self.relative * bound.abs()
    }
}
fn check_b_closed(b: f64) -> Result<()> {
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::InvalidParameter {
            what: "relaxation parameter b must lie in (0, 1]",
        });
    }
    Ok(())
}
fn nonincreasing_prefix(tau: &WeaknessSequence, m: usize) -> Result<Vec<f64>> {
    let values = tau.values(m)?;
    for (k, w) in values.windows(2).enumerate() {
        if w[1] > w[0] {
            return Err(Error::NonMonotoneWeakness { step: k + 2 });
        }
    }
    Ok(values)
}
/// Residual envelope for unit-`A1` inputs:
/// `e_m = (1 + b(2-b) sum_{k<=m} t_k^2)^(-(2-b) t_m / (2 (2 + (2-b) t_m)))`.
/// Requires a nonincreasing weakness sequence and `b` in `(0, 1]`.
pub fn e_m(tau: &WeaknessSequence, b: f64, m: usize) -> Result<f64> {
    Ok(e_m_all(tau, b, m)?[m - 1])
}
/// All of `e_1 ..= e_M` in one pass.
pub fn e_m_all(tau: &WeaknessSequence, b: f64, m_max: usize) -> Result<Vec<f64>> {
    if m_max == 0 {
        return Err(Error::InvalidParameter {
            what: "iteration index must be at least 1",
        });
    }
    check_b_closed(b)?;
    let values = nonincreasing_prefix(tau, m_max)?;
    let mut out = Vec::with_capacity(m_max);
    let mut sum_sq = 0.0;
    for t in values {
        sum_sq += t * t;
        let exponent = (2.0 - b) * t / (2.0 * (2.0 + (2.0 - b) * t));
        out.push((1.0 + b * (2.0 - b) * sum_sq).powf(-exponent));
    }
    Ok(out)
}
/// Largest admissible interpolation exponent at step `m`:
/// `(2-b) t_m / ((2-b) t_m + 2)`.
pub fn alpha_max_hilbert(tau: &WeaknessSequence, b: f64, m: usize) -> Result<f64> {
    check_b_closed(b)?;
    let t = tau.t_at(m)?;
    Ok((2.0 - b) * t / ((2.0 - b) * t + 2.0))
}
/// Product-norm bound
/// `(1 + b(2-b) sum_{k<=m} t_k^2)^(-alpha/2) * f_norm^(1-alpha) * a1_bound^alpha`,
/// valid for `alpha <= alpha_max_hilbert` and nonincreasing weakness.
pub fn product_bound_hilbert(
    tau: &WeaknessSequence,
    b: f64,
    m: usize,
    alpha: f64,
    f_norm: f64,
    a1_bound: f64,
) -> Result<f64> {
    let alpha_max = alpha_max_hilbert(tau, b, m)?;
    if alpha > alpha_max + 1e-12 {
        return Err(Error::InvalidParameter {
            what: "interpolation exponent exceeds its admissible maximum",
        });
    }
    check_norm_pair(f_norm, a1_bound)?;
    let values = nonincreasing_prefix(tau, m)?;
    let sum_sq: f64 = values.iter().map(|t| t * t).sum();
    Ok(product_value(
        1.0 + b * (2.0 - b) * sum_sq,
        2.0,
        alpha,
        f_norm,
        a1_bound,
    ))
}
fn product_value(base: f64, root: f64, alpha: f64, f_norm: f64, a1_bound: f64) -> f64 {
    base.powf(-alpha / root) * f_norm.powf(1.0 - alpha) * a1_bound.powf(alpha)
}
fn check_norm_pair(f_norm: f64, a1_bound: f64) -> Result<()> {
    if !(f_norm >= 0.0) || !(a1_bound >= 0.0) {
        return Err(Error::InvalidParameter {
            what: "norms must be nonnegative",
        });
    }
    if f_norm > a1_bound + 1e-10 {
        return Err(Error::InvalidParameter {
            what: "the norm never exceeds the A1 bound",
        });
    }
    Ok(())
}
/// Largest admissible exponent for the dual-greedy bound:
/// `t_m (1-b) / (1 + t_m (1-b))`.
pub fn alpha_max_banach(tau: &WeaknessSequence, b: f64, m: usize) -> Result<f64> {
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::InvalidParameter {
            what: "dual greedy requires b in (0, 1)",
        });
    }
    let t = tau.t_at(m)?;
    Ok(t * (1.0 - b) / (1.0 + t * (1.0 - b)))
}
/// Dual-greedy product bound
/// `(1 + c sum_{k<=m} t_k^p)^(-alpha/p) * f_norm^(1-alpha) * a1_bound^alpha`
/// with `p = q/(q-1)` and `c = (1-b)(b/(2 gamma))^(1/(q-1))`, valid for
/// `alpha <= alpha_max_banach`, smoothness power `q` in `(1, 2]`, and
/// nonincreasing weakness.
#[allow(clippy::too_many_arguments)]
pub fn banach_bound(
    tau: &WeaknessSequence,
    b: f64,
    gamma: f64,
    q: f64,
    m: usize,
    alpha: f64,
    f_norm: f64,
    a1_bound: f64,
) -> Result<f64> {
    let alpha_max = alpha_max_banach(tau, b, m)?;
    if alpha > alpha_max + 1e-12 {
        return Err(Error::InvalidParameter {
            what: "interpolation exponent exceeds its admissible maximum",
        });
    }
    if !(q > 1.0 && q <= 2.0) {
        return Err(Error::InvalidExponent { p: q });
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter {
            what: "majorant coefficient gamma must be positive",
        });
    }
    check_norm_pair(f_norm, a1_bound)?;
    let values = nonincreasing_prefix(tau, m)?;
    let p = q / (q - 1.0);
    let c = (1.0 - b) * (b / (2.0 * gamma)).powf(1.0 / (q - 1.0));
    let sum_p: f64 = values.iter().map(|t| t.powf(p)).sum();
    Ok(product_value(1.0 + c * sum_p, p, alpha, f_norm, a1_bound))
}
/// Closed-form envelope of the recursion lemma:
/// `(C1^-1 + sum_{k<=m} s_k)^-1`.
pub fn hl1_bound(c1: f64, s: &[f64], m: usize) -> f64 {
    let sum: f64 = s.iter().take(m).sum();
    1.0 / (1.0 / c1 + sum)
}
/// Outcome of checking a sequence against the recursion lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hl1Outcome {
    /// Premises hold and every term respects the closed-form bound.
    Holds,
    /// `x_0 > C1`, a negative term, or `x_{m+1} > x_m (1 - x_m s_{m+1})`.
    PremiseViolated { step: usize },
    /// Premises hold but `x_m` exceeds the bound (never happens for truly
    /// admissible data; comparisons carry `1e-12` slack for rounding).
    BoundViolated { step: usize },
}
/// Verifies the premises `x_0 <= C1`, `x_{m+1} <= x_m (1 - x_m s_{m+1})`,
/// `x_m >= 0`, and then the bound `x_m <= (C1^-1 + sum_{k<=m} s_k)^-1`.
pub fn hl1_check(x: &[f64], c1: f64, s: &[f64]) -> Hl1Outcome {
    if x.is_empty() || !(c1 > 0.0) || x[0] > c1 || x[0] < 0.0 {
        return Hl1Outcome::PremiseViolated { step: 0 };
    }
    for m in 0..x.len() - 1 {
        let s_next = match s.get(m) {
            Some(&v) if v >= 0.0 => v,
            _ => return Hl1Outcome::PremiseViolated { step: m + 1 },
        };
        if x[m + 1] < 0.0 || x[m + 1] > x[m] * (1.0 - x[m] * s_next) {
            return Hl1Outcome::PremiseViolated { step: m + 1 };
        }
    }
    let mut sum = 1.0 / c1;
    if x[0] > 1.0 / sum + 1e-12 {
        return Hl1Outcome::BoundViolated { step: 0 };
    }
    for m in 1..x.len() {
        sum += s[m - 1];
        if x[m] > 1.0 / sum + 1e-12 {
            return Hl1Outcome::BoundViolated { step: m };
        }
    }
    Hl1Outcome::Holds
}
/// One verified bound (or identity) over a trace: per-step measured/bound
/// pairs, the worst signed violation, and the pass flag. A report whose
/// hypotheses fail is marked skipped instead of failed.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: &'static str,
    /// Interpolation exponent, when the bound has a fixed one.
    pub alpha: Option<f64>,
    pub per_step: Vec<BoundSample>,
    /// `max_m (measured - allowed)`; negative when everything passes.
    pub max_violation: f64,
    pub pass: bool,
    pub skipped: Option<String>,
    pub tolerance: Tolerance,
}
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSample {
    pub m: usize,
    pub measured: f64,
    pub bound: f64,
}
impl BoundReport {
    /// Builds a report from measured/bound samples, computing the worst
    /// signed violation and the pass flag at the given tolerance.
    pub fn evaluate(name: &'static str, samples: Vec<BoundSample>, tol: Tolerance) -> Self {
        let mut max_violation = f64::NEG_INFINITY;
        let mut pass = true;
        for s in &samples {
            let allowed = s.bound + tol.absolute + tol.relative * s.bound.abs();
            max_violation = max_violation.max(s.measured - allowed);
            if s.measured > allowed {
                pass = false;
            }
        }
        if samples.is_empty() {
            max_violation = 0.0;
        }
        BoundReport {
            name,
            alpha: None,
            per_step: samples,
            max_violation,
            pass,
            skipped: None,
            tolerance: tol,
        }
    }
    /// Builds a placeholder for a bound whose hypotheses do not apply.
    pub fn skipped(name: &'static str, reason: String, tol: Tolerance) -> Self {
        BoundReport {
            name,
            alpha: None,
            per_step: Vec::new(),
            max_violation: 0.0,
            pass: true,
            skipped: Some(reason),
            tolerance: tol,
        }
    }
    /// First step index (1-based) whose sample violates the tolerance.
    pub fn first_violation(&self) -> Option<usize> {
        self.per_step.iter().find_map(|s| {
            if !self.tolerance.allows(s.measured, s.bound) {
                Some(s.m)
            } else {
                None
            }
        })
    }
}
/// All bound reports for one trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceVerification {
    pub reports: Vec<BoundReport>,
    pub pass: bool,
}
impl TraceVerification {
    pub fn new(reports: Vec<BoundReport>) -> Self {
        let pass = reports.iter().all(|r| r.pass);
        TraceVerification { reports, pass }
    }
}
/// Verifies a Hilbert greedy trace: the per-step recursion identities, the
/// selection floor, the scalar inequality on realized values, the residual
/// envelope and the product bounds (at the maximal admissible exponent and
/// at half of it). Orthogonal and free-relaxation traces are checked for
/// monotone residuals only; averaging algorithms have no applicable bound
/// here.
pub fn verify_hilbert_trace(
    trace: &GreedyTrace,
    tau: &WeaknessSequence,
    tol: Tolerance,
) -> Result<TraceVerification> {
    let b = match trace.kind {
        HilbertKind::Wga { b } | HilbertKind::Twga { b } => b,
        HilbertKind::Woga | HilbertKind::Wgafr => {
            return Ok(TraceVerification::new(alloc::vec![
                monotone_residual_report(trace, tol)
            ]));
        }
        HilbertKind::Rga | HilbertKind::Ia => {
            return Ok(TraceVerification::new(Vec::new()));
        }
    };
    let m_max = trace.steps.len();
    let mut reports = Vec::new();
    let t_values = tau.values(m_max)?;
    let monotone = t_values.windows(2).all(|w| w[1] <= w[0]);
    // Energy identity a_m = a_{m-1} - b(2-b) y_m^2.
    let mut samples = Vec::with_capacity(m_max);
    let mut a_prev = trace.f_norm * trace.f_norm;
    for (i, step) in trace.steps.iter().enumerate() {
        let predicted = a_prev - b * (2.0 - b) * step.y * step.y;
        samples.push(BoundSample {
            m: i + 1,
            measured: (step.a - predicted).abs(),
            bound: RECURSION_RTOL * a_prev.max(1e-12),
        });
        a_prev = step.a;
    }
    reports.push(BoundReport::evaluate("energy_identity", samples, tol));
    match trace.cert_bound {
        None => {
            for name in [
                "ledger_recursion",
                "selection_floor",
                "ratio_recursion",
                "scalar_inequality",
                "residual_envelope",
                "product_bound",
                "product_bound_half_alpha",
            ] {
                reports.push(BoundReport::skipped(
                    name,
                    String::from("no certificate bound supplied"),
                    tol,
                ));
            }
        }
        Some(b0) => {
            // Ledger recursion B_m = B_{m-1} + b y_m.
            let mut samples = Vec::with_capacity(m_max);
            let mut ledger = b0;
            for (i, step) in trace.steps.iter().enumerate() {
                ledger += b * step.y;
                let recorded = step.bound_ledger.unwrap_or(f64::NAN);
                samples.push(BoundSample {
                    m: i + 1,
                    measured: (recorded - ledger).abs(),
                    bound: 1e-12 * ledger.abs(),
                });
                ledger = recorded;
            }
            reports.push(BoundReport::evaluate("ledger_recursion", samples, tol));
            // Selection floor y_m >= t_m a_{m-1} / B_{m-1}.
            let mut samples = Vec::with_capacity(m_max);
            let mut a_prev = trace.f_norm * trace.f_norm;
            let mut b_prev = b0;
            for (i, step) in trace.steps.iter().enumerate() {
                let floor = t_values[i] * a_prev / b_prev;
                samples.push(BoundSample {
                    m: i + 1,
                    measured: floor - step.y,
                    bound: FLOOR_ATOL,
                });
                a_prev = step.a;
                b_prev = step.bound_ledger.unwrap_or(b_prev);
            }
            reports.push(BoundReport::evaluate("selection_floor", samples, tol));
            // Ratio recursion for x_m = a_m B_m^-2.
            let mut samples = Vec::with_capacity(m_max);
            let mut a_prev = trace.f_norm * trace.f_norm;
            let mut b_prev = b0;
            for (i, step) in trace.steps.iter().enumerate() {
                let b_m = step.bound_ledger.unwrap_or(b_prev);
                let x_prev = a_prev / (b_prev * b_prev);
                let lhs = step.a / (b_m * b_m);
                let rhs = x_prev * (1.0 - b * (2.0 - b) * t_values[i] * t_values[i] * x_prev);
                samples.push(BoundSample {
                    m: i + 1,
                    measured: lhs,
                    bound: rhs + RECURSION_RTOL * x_prev.max(1e-12),
                });
                a_prev = step.a;
                b_prev = b_m;
            }
            reports.push(BoundReport::evaluate("ratio_recursion", samples, tol));
            // Scalar inequality (1-x)(1+x/a)^a <= 1 on realized values.
            let mut samples = Vec::with_capacity(m_max);
            let mut b_prev = b0;
            for (i, step) in trace.steps.iter().enumerate() {
                let t = t_values[i];
                let a_exp = (2.0 - b) * t;
                let x = b * (2.0 - b) * t * step.y / b_prev;
                let measured = if a_exp > 0.0 && x < 1.0 {
                    (1.0 - x) * (1.0 + x / a_exp).powf(a_exp)
                } else {
                    // Zero exponent or x >= 1: the product degenerates to
                    // 1 - x <= 1.
                    1.0 - x
                };
                samples.push(BoundSample {
                    m: i + 1,
                    measured,
                    bound: 1.0,
                });
                b_prev = step.bound_ledger.unwrap_or(b_prev);
            }
            reports.push(BoundReport::evaluate("scalar_inequality", samples, tol));
            if !monotone {
                for name in ["residual_envelope", "product_bound", "product_bound_half_alpha"] {
                    reports.push(BoundReport::skipped(
                        name,
                        String::from("weakness sequence is not nonincreasing"),
                        tol,
                    ));
                }
            } else {
                let envelopes = e_m_all(tau, b, m_max)?;
                let samples = trace
                    .steps
                    .iter()
                    .enumerate()
                    .map(|(i, step)| BoundSample {
                        m: i + 1,
                        measured: step.residual_norm,
                        bound: envelopes[i] * b0,
                    })
                    .collect();
                reports.push(BoundReport::evaluate("residual_envelope", samples, tol));
                for (name, halve) in [
                    ("product_bound", false),
                    ("product_bound_half_alpha", true),
                ] {
                    let mut samples = Vec::with_capacity(m_max);
                    let mut sum_sq = 0.0;
                    for (i, step) in trace.steps.iter().enumerate() {
                        let t = t_values[i];
                        sum_sq += t * t;
                        let mut alpha = (2.0 - b) * t / ((2.0 - b) * t + 2.0);
                        if halve {
                            alpha /= 2.0;
                        }
                        let bound = product_value(
                            1.0 + b * (2.0 - b) * sum_sq,
                            2.0,
                            alpha,
                            trace.f_norm,
                            b0,
                        );
                        samples.push(BoundSample {
                            m: i + 1,
                            measured: step.residual_norm,
                            bound,
                        });
                    }
                    reports.push(BoundReport::evaluate(name, samples, tol));
                }
            }
        }
    }
    Ok(TraceVerification::new(reports))
}
fn monotone_residual_report(trace: &GreedyTrace, tol: Tolerance) -> BoundReport {
    let mut samples = Vec::with_capacity(trace.steps.len());
    let mut prev = trace.f_norm;
    for (i, step) in trace.steps.iter().enumerate() {
        samples.push(BoundSample {
            m: i + 1,
            measured: step.residual_norm,
            bound: prev,
        });
        prev = step.residual_norm;
    }
    BoundReport::evaluate("residual_nonincreasing", samples, tol)
}
/// Verifies a dual greedy trace: the step-size equation residual, the
/// norm-decrease inequality, the certificate floor on the dual pairing,
/// and the product bound at the maximal (and half-maximal) exponent.
pub fn verify_banach_trace(
    trace: &BanachGreedyTrace,
    tau: &WeaknessSequence,
    tol: Tolerance,
) -> Result<TraceVerification> {
    let b = trace.b;
    let m_max = trace.steps.len();
    let t_values = tau.values(m_max)?;
    let monotone = t_values.windows(2).all(|w| w[1] <= w[0]);
    let mut reports = Vec::new();
    // Step-size equation ||f_{m-1}|| mu(c_m / ||f_{m-1}||) = (K/2) c_m.
    let mut samples = Vec::with_capacity(m_max);
    let mut prev_norm = trace.f_norm;
    for (i, step) in trace.steps.iter().enumerate() {
        let lhs = prev_norm * trace.majorant.eval(step.coefficient / prev_norm);
        let k = match trace.variant {
            DgaVariant::Dga => t_values[i] * b * step.r_value,
            DgaVariant::DgaStar => b * step.functional_value,
        };
        let rhs = k / 2.0 * step.coefficient;
        samples.push(BoundSample {
            m: i + 1,
            measured: (lhs - rhs).abs(),
            bound: RECURSION_RTOL * rhs.abs().max(1e-12),
        });
        prev_norm = step.residual_norm;
    }
    reports.push(BoundReport::evaluate("step_size_equation", samples, tol));
    // Norm decrease ||f_m|| <= ||f_{m-1}|| - t_m (1-b) c_m r_m.
    let mut samples = Vec::with_capacity(m_max);
    let mut prev_norm = trace.f_norm;
    for (i, step) in trace.steps.iter().enumerate() {
        let rhs = prev_norm - t_values[i] * (1.0 - b) * step.coefficient * step.r_value;
        samples.push(BoundSample {
            m: i + 1,
            measured: step.residual_norm,
            bound: rhs,
        });
        prev_norm = step.residual_norm;
    }
    reports.push(BoundReport::evaluate("norm_decrease", samples, tol));
    match trace.cert_bound {
        None => {
            for name in ["dual_floor", "product_bound", "product_bound_half_alpha"] {
                reports.push(BoundReport::skipped(
                    name,
                    String::from("no certificate bound supplied"),
                    tol,
                ));
            }
        }
        Some(b0) => {
            // Dual floor r_m >= ||f_{m-1}|| / B_{m-1}.
            let mut samples = Vec::with_capacity(m_max);
            let mut prev_norm = trace.f_norm;
            let mut b_prev = b0;
            for (i, step) in trace.steps.iter().enumerate() {
                samples.push(BoundSample {
                    m: i + 1,
                    measured: prev_norm / b_prev - step.r_value,
                    bound: FLOOR_ATOL,
                });
                prev_norm = step.residual_norm;
                b_prev = step.bound_ledger.unwrap_or(b_prev);
            }
            reports.push(BoundReport::evaluate("dual_floor", samples, tol));
            if !monotone {
                for name in ["product_bound", "product_bound_half_alpha"] {
                    reports.push(BoundReport::skipped(
                        name,
                        String::from("weakness sequence is not nonincreasing"),
                        tol,
                    ));
                }
            } else {
                let q = trace.majorant.q();
                let gamma = trace.majorant.gamma();
                let p = trace.majorant.conjugate_exponent();
                let c = (1.0 - b) * (b / (2.0 * gamma)).powf(1.0 / (q - 1.0));
                for (name, halve) in [
                    ("product_bound", false),
                    ("product_bound_half_alpha", true),
                ] {
                    let mut samples = Vec::with_capacity(m_max);
                    let mut sum_p = 0.0;
                    for (i, step) in trace.steps.iter().enumerate() {
                        let t = t_values[i];
                        sum_p += t.powf(p);
                        let mut alpha = t * (1.0 - b) / (1.0 + t * (1.0 - b));
                        if halve {
                            alpha /= 2.0;
                        }
                        let bound =
                            product_value(1.0 + c * sum_p, p, alpha, trace.f_norm, b0);
                        samples.push(BoundSample {
                            m: i + 1,
                            measured: step.residual_norm,
                            bound,
                        });
                    }
                    reports.push(BoundReport::evaluate(name, samples, tol));
                }
            }
        }
    }
    Ok(TraceVerification::new(reports))
}
/// Verifies a remote-projections trace: the Pythagorean step identity and,
/// with a certificate and nonincreasing weakness, the product bound at
/// `alpha = t_m / (t_m + 2)`. Schedule-driven runs (averaged updates) have
/// no applicable identity here.
pub fn verify_projection_trace(
    trace: &ProjectionTrace,
    tau: &WeaknessSequence,
    tol: Tolerance,
) -> Result<TraceVerification> {
    if trace.kind != ProjectionKind::Wrpa {
        return Ok(TraceVerification::new(Vec::new()));
    }
    let m_max = trace.steps.len();
    let t_values = tau.values(m_max)?;
    let monotone = t_values.windows(2).all(|w| w[1] <= w[0]);
    let mut reports = Vec::new();
    let mut samples = Vec::with_capacity(m_max);
    let mut prev_sq = trace.x0_norm * trace.x0_norm;
    for (i, step) in trace.steps.iter().enumerate() {
        let predicted = prev_sq - step.dist * step.dist;
        let now_sq = step.residual_norm * step.residual_norm;
        samples.push(BoundSample {
            m: i + 1,
            measured: (now_sq - predicted).abs(),
            bound: RECURSION_RTOL * prev_sq.max(1e-12),
        });
        prev_sq = now_sq;
    }
    reports.push(BoundReport::evaluate("pythagorean_identity", samples, tol));
    match trace.cert_bound {
        None => reports.push(BoundReport::skipped(
            "product_bound",
            String::from("no certificate bound supplied"),
            tol,
        )),
        Some(_) if !monotone => reports.push(BoundReport::skipped(
            "product_bound",
            String::from("weakness sequence is not nonincreasing"),
            tol,
        )),
        Some(b0) => {
            let mut samples = Vec::with_capacity(m_max);
            let mut sum_sq = 0.0;
            for (i, step) in trace.steps.iter().enumerate() {
                let t = t_values[i];
                sum_sq += t * t;
                let alpha = t / (t + 2.0);
                let bound = product_value(1.0 + sum_sq, 2.0, alpha, trace.x0_norm, b0);
                samples.push(BoundSample {
                    m: i + 1,
                    measured: step.residual_norm,
                    bound,
                });
            }
            reports.push(BoundReport::evaluate("product_bound", samples, tol));
        }
    }
    Ok(TraceVerification::new(reports))
}
#[cfg(test)]
mod tests {
    use super::*;
    use crate::dict::Dictionary;
    use crate::hilbert::{run_wga, SelectionPolicy};
    use crate::space::Vector;
    use alloc::vec;
    fn tau_one() -> WeaknessSequence {
        WeaknessSequence::constant(1.0).unwrap()
    }
    #[test]
    fn envelope_examples() {
        let e1 = e_m(&tau_one(), 1.0, 1).unwrap();
        assert!((e1 - 2f64.powf(-1.0 / 6.0)).abs() <= 1e-15);
        assert!((e1 - 0.890899).abs() < 1e-6);
        let e3 = e_m(&tau_one(), 1.0, 3).unwrap();
        assert!((e3 - 4f64.powf(-1.0 / 6.0)).abs() <= 1e-15);
        assert!((e3 - 0.793701).abs() < 1e-6);
        // Vanishing weakness: exponent goes to zero, the bound to 1.
        let tiny = WeaknessSequence::constant(1e-12).unwrap();
        assert!((e_m(&tiny, 1.0, 5).unwrap() - 1.0).abs() <= 1e-9);
        // Non-monotone weakness is a hypothesis violation.
        let wiggle = WeaknessSequence::explicit(vec![0.5, 0.9]).unwrap();
        assert!(matches!(
            e_m(&wiggle, 1.0, 2),
            Err(Error::NonMonotoneWeakness { step: 2 })
        ));
    }
    #[test]
    fn alpha_max_examples() {
        assert!((alpha_max_hilbert(&tau_one(), 1.0, 1).unwrap() - 1.0 / 3.0).abs() <= 1e-15);
        let half = WeaknessSequence::constant(0.5).unwrap();
        assert!((alpha_max_hilbert(&half, 1.0, 1).unwrap() - 0.2).abs() <= 1e-15);
        let zero = WeaknessSequence::constant(0.0).unwrap();
        assert_eq!(alpha_max_hilbert(&zero, 1.0, 1).unwrap(), 0.0);
    }
    #[test]
    fn product_bound_examples() {
        // At alpha = alpha_max with both norms 1 the bound coincides with
        // the envelope.
        let b = 1.0;
        let alpha = alpha_max_hilbert(&tau_one(), b, 3).unwrap();
        let product = product_bound_hilbert(&tau_one(), b, 3, alpha, 1.0, 1.0).unwrap();
        assert!((product - e_m(&tau_one(), b, 3).unwrap()).abs() <= 1e-15);
        // alpha = 0 reduces to the trivial norm bound.
        let trivial = product_bound_hilbert(&tau_one(), 1.0, 4, 0.0, 0.7, 1.0).unwrap();
        assert_eq!(trivial, 0.7);
        let v = product_bound_hilbert(&tau_one(), 1.0, 1, 1.0 / 3.0, 0.5, 1.0).unwrap();
        let expected = 2f64.powf(-1.0 / 6.0) * 0.5f64.powf(2.0 / 3.0);
        assert!((v - expected).abs() <= 1e-15);
        assert!((v - 0.561231).abs() < 1e-6);
        // Exponent above the threshold is rejected.
        assert!(product_bound_hilbert(&tau_one(), 1.0, 1, 0.5, 1.0, 1.0).is_err());
    }
    #[test]
    fn banach_bound_examples() {
        let tau = tau_one();
        // c = (1-b)(b/(2 gamma))^(1/(q-1)) = 0.25 for b=1/2, gamma=1/2, q=2.
        let alpha = alpha_max_banach(&tau, 0.5, 4).unwrap();
        assert!((alpha - 1.0 / 3.0).abs() <= 1e-15);
        let v = banach_bound(&tau, 0.5, 0.5, 2.0, 4, alpha, 1.0, 1.0).unwrap();
        assert!((v - 2f64.powf(-1.0 / 6.0)).abs() <= 1e-14);
        let trivial = banach_bound(&tau, 0.5, 0.5, 2.0, 4, 0.0, 0.8, 1.0).unwrap();
        assert_eq!(trivial, 0.8);
        assert!(banach_bound(&tau, 1.0, 0.5, 2.0, 4, 0.1, 1.0, 1.0).is_err());
        assert!(banach_bound(&tau, 0.5, 0.5, 3.0, 4, 0.1, 1.0, 1.0).is_err());
    }
    #[test]
    fn hl1_equality_recursion_rollout() {
        // x_{m+1} = x_m (1 - x_m) with x_0 = 1 stays below 1/(1+m).
        let mut x = vec![1.0f64];
        for m in 0..10_000 {
            let last: f64 = x[m];
            x.push(last * (1.0 - last));
        }
        let s = vec![1.0; x.len()];
        assert_eq!(hl1_check(&x, 1.0, &s), Hl1Outcome::Holds);
        for (m, &xm) in x.iter().enumerate() {
            assert!(xm <= hl1_bound(1.0, &s, m) + 1e-12);
        }
    }
    #[test]
    fn hl1_zero_sequence_and_violations() {
        let x = vec![0.0; 32];
        let s = vec![0.5; 32];
        assert_eq!(hl1_check(&x, 2.0, &s), Hl1Outcome::Holds);
        // x_0 above C1.
        assert_eq!(
            hl1_check(&[2.0, 0.1], 1.0, &[1.0]),
            Hl1Outcome::PremiseViolated { step: 0 }
        );
        // Increment above the envelope.
        assert_eq!(
            hl1_check(&[1.0, 0.5], 1.0, &[1.0]),
            Hl1Outcome::PremiseViolated { step: 1 }
        );
    }
    #[test]
    fn verify_clean_and_corrupted_traces() {
        let d = Dictionary::standard_basis(4).unwrap();
        let (f, cert) = d
            .a1_certify(&[0, 1, 2, 3], &[0.4, -0.3, 0.2, -0.1])
            .unwrap();
        let trace = run_wga(
            &f,
            &d,
            &tau_one(),
            1.0,
            4,
            Some(cert.bound),
            &SelectionPolicy::greedy(),
        )
        .unwrap();
        let verification = verify_hilbert_trace(&trace, &tau_one(), Tolerance::default()).unwrap();
        assert!(verification.pass, "{:?}", verification.reports);
        // Inflate one residual by 1%: the harness locates the violation.
        let mut corrupted = trace.clone();
        corrupted.steps[1].residual_norm *= 1.01;
        corrupted.steps[1].a = corrupted.steps[1].residual_norm.powi(2);
        let verification =
            verify_hilbert_trace(&corrupted, &tau_one(), Tolerance::default()).unwrap();
        assert!(!verification.pass);
        let failing: Vec<&BoundReport> = verification
            .reports
            .iter()
            .filter(|r| !r.pass)
            .collect();
        assert!(!failing.is_empty());
        assert!(failing.iter().any(|r| r.first_violation() == Some(2)));
    }
    #[test]
    fn skipped_reports_do_not_fail() {
        let d = Dictionary::standard_basis(3).unwrap();
        let f = Vector::new(vec![0.4, 0.3, 0.2]).unwrap();
        // Sparse weakness is not monotone: product bounds are skipped.
        let tau = WeaknessSequence::sparse(
            crate::weakness::IndexSequence::geometric(2).unwrap(),
            0.5,
        )
        .unwrap();
        let trace = run_wga(&f, &d, &tau, 1.0, 6, Some(1.0), &SelectionPolicy::greedy()).unwrap();
        let verification = verify_hilbert_trace(&trace, &tau, Tolerance::default()).unwrap();
        assert!(verification.pass);
        assert!(verification
            .reports
            .iter()
            .any(|r| r.name == "product_bound" && r.skipped.is_some()));
    }
    #[test]
    fn batched_envelopes_match_single_calls() {
        let tau = WeaknessSequence::power(0.4).unwrap();
        let all = e_m_all(&tau, 0.7, 20).unwrap();
        for m in [1usize, 5, 20] {
            assert_eq!(all[m - 1], e_m(&tau, 0.7, m).unwrap());
        }
    }
}
