//! Hilbert-space greedy algorithms: WGA with relaxation parameter `b` (and
//! its thresholding variant), orthogonal and free-relaxation variants, the
//! relaxed greedy algorithm, and the incremental algorithm for convex hulls.
//! Every run produces a [`GreedyTrace`] with the per-iteration quantities the
//! bound harness consumes.

use alloc::vec::Vec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dict::{A1Certificate, Dictionary, WeakSup};
use crate::error::{Error, Result};
use crate::linalg;
use crate::space::Vector;
use crate::weakness::WeaknessSequence;

/// Residuals below this norm are treated as exactly zero.
pub const ZERO_RESIDUAL: f64 = 1e-14;
/// A positive-threshold step whose best pairing is below this stalls the run
/// (the residual is orthogonal to the whole dictionary).
pub const STALL_PAIRING: f64 = 1e-15;
/// Slack allowed when validating replayed selections against the weak
/// threshold.
pub const REPLAY_SLACK: f64 = 1e-12;

/// Which algorithm produced a trace (with its parameters where relevant).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HilbertKind {
    Wga { b: f64 },
    Twga { b: f64 },
    Woga,
    Wgafr,
    Rga,
    Ia,
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalStatus {
    /// The iteration budget was exhausted.
    MaxIters,
    /// The residual norm fell below [`ZERO_RESIDUAL`].
    ExactZero,
    /// A positive-threshold step found no usable pairing; the residual is
    /// orthogonal to the dictionary span.
    Stalled,
}

/// One executed iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyStep {
    /// Selected atom index (or subspace index for induced dictionaries).
    pub index: usize,
    /// Coefficient placed on the selected atom by this step's update; for
    /// WGA/TWGA this is `b * <f_{m-1}, phi_m>`, for WOGA the raw pairing, for
    /// WGAFR the weight on `phi_m`, for RGA/IA the mixing weight.
    pub coefficient: f64,
    /// `y_m = |<f_{m-1}, phi_m>|`.
    pub y: f64,
    /// `a_m = ||f_m||^2`.
    pub a: f64,
    /// `||f_m||`.
    pub residual_norm: f64,
    /// Certificate ledger `B_m = B_{m-1} + b y_m` (WGA/TWGA with a
    /// certificate; `None` otherwise).
    pub bound_ledger: Option<f64>,
}

/// Iteration ledger of one greedy run.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyTrace {
    pub kind: HilbertKind,
    /// `||f||` of the input.
    pub f_norm: f64,
    /// Certified `A1` bound of the input, when one was supplied.
    pub cert_bound: Option<f64>,
    pub steps: Vec<GreedyStep>,
    pub status: TerminalStatus,
    pub final_residual: Vector,
}

impl GreedyTrace {
    /// Residual norms `||f_1||, ..., ||f_M||`.
    pub fn residual_norms(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.residual_norm).collect()
    }

    /// Reconstructs the approximant `G_m` from the recorded selections by
    /// replaying the approximation rule of [`GreedyTrace::kind`]. Requires
    /// the original input and an explicit dictionary (for induced
    /// dictionaries re-run with a replay policy instead).
    pub fn approximant(&self, f: &Vector, dict: &Dictionary, m: usize) -> Result<Vector> {
        if m > self.steps.len() {
            return Err(Error::IndexOutOfRange {
                index: m,
                len: self.steps.len(),
            });
        }
        if !dict.is_explicit() {
            return Err(Error::NotExplicit);
        }
        let mut g = Vector::zeros(f.dim());
        match self.kind {
            HilbertKind::Wga { .. } | HilbertKind::Twga { .. } => {
                for step in &self.steps[..m] {
                    g.add_scaled(step.coefficient, dict.element(step.index)?);
                }
            }
            HilbertKind::Woga => {
                let mut basis: Vec<Vector> = Vec::new();
                for step in &self.steps[..m] {
                    let atom = dict.element(step.index)?;
                    if let Some(q) = linalg::orthonormal_remainder(&basis, atom, 1e-12) {
                        basis.push(q);
                    }
                }
                for q in &basis {
                    g.add_scaled(f.inner(q)?, q);
                }
            }
            HilbertKind::Wgafr => {
                for step in &self.steps[..m] {
                    let atom = dict.element(step.index)?;
                    g = project_pair(f, &g, atom)?.0;
                }
            }
            HilbertKind::Rga | HilbertKind::Ia => {
                for (j, step) in self.steps[..m].iter().enumerate() {
                    let atom = dict.element(step.index)?;
                    if j == 0 {
                        g = atom.scaled(step.coefficient);
                    } else {
                        let w = 1.0 / (j + 1) as f64;
                        g = g.scaled(1.0 - w);
                        g.add_scaled(w, atom);
                    }
                }
            }
        }
        Ok(g)
    }
}

/// How the greedy step resolves its freedom.
#[derive(Debug, Clone, PartialEq)]
pub enum SelectionMode {
    /// Take the maximizer (ties to the lowest index).
    GreedyMax,
    /// Follow a prescribed index list. With `enforce` set, each index is
    /// checked against the weak threshold for the executing run's own
    /// residual; disable to replay selections across algorithms.
    Replay { indices: Vec<usize>, enforce: bool },
}

/// Choice rule for steps whose threshold is vacuous (`t_m = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroStepRule {
    GreedyMax,
    Fixed(usize),
    /// Uniform over the dictionary, from a ChaCha8 stream with this seed.
    SeededRandom(u64),
}

/// Selection policy: the main mode plus the zero-threshold rule.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionPolicy {
    pub mode: SelectionMode,
    pub zero_step: ZeroStepRule,
}

impl SelectionPolicy {
    pub fn greedy() -> Self {
        SelectionPolicy {
            mode: SelectionMode::GreedyMax,
            zero_step: ZeroStepRule::GreedyMax,
        }
    }

    pub fn replay(indices: Vec<usize>) -> Self {
        SelectionPolicy {
            mode: SelectionMode::Replay {
                indices,
                enforce: true,
            },
            zero_step: ZeroStepRule::GreedyMax,
        }
    }

    /// Replay without threshold validation, for dominance comparisons that
    /// reuse another algorithm's selections.
    pub fn replay_unchecked(indices: Vec<usize>) -> Self {
        SelectionPolicy {
            mode: SelectionMode::Replay {
                indices,
                enforce: false,
            },
            zero_step: ZeroStepRule::GreedyMax,
        }
    }
}

impl Default for SelectionPolicy {
    fn default() -> Self {
        Self::greedy()
    }
}

struct Selector<'a> {
    policy: &'a SelectionPolicy,
    rng: Option<ChaCha8Rng>,
}

impl<'a> Selector<'a> {
    fn new(policy: &'a SelectionPolicy) -> Self {
        let rng = match policy.zero_step {
            ZeroStepRule::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Selector { policy, rng }
    }

    fn is_greedy(&self) -> bool {
        matches!(self.policy.mode, SelectionMode::GreedyMax)
    }

    /// Selection for the weak-supremum threshold `y >= t_m * sup`.
    fn weak(&mut self, dict: &Dictionary, residual: &Vector, t: f64, step: usize) -> Result<WeakSup> {
        match &self.policy.mode {
            SelectionMode::GreedyMax => {
                if t == 0.0 {
                    self.zero_step(dict, residual)
                } else {
                    dict.weak_sup(residual)
                }
            }
            SelectionMode::Replay { indices, enforce } => {
                let index = replay_index(indices, step)?;
                let sel = dict.evaluate(residual, index)?;
                if *enforce && t > 0.0 {
                    let required = t * dict.weak_sup(residual)?.value;
                    if sel.value < required - REPLAY_SLACK {
                        return Err(Error::WeaknessViolated {
                            step,
                            achieved: sel.value,
                            required,
                        });
                    }
                }
                Ok(sel)
            }
        }
    }

    fn zero_step(&mut self, dict: &Dictionary, residual: &Vector) -> Result<WeakSup> {
        match self.policy.zero_step {
            ZeroStepRule::GreedyMax => dict.weak_sup(residual),
            ZeroStepRule::Fixed(i) => dict.evaluate(residual, i),
            ZeroStepRule::SeededRandom(_) => {
                let i = self
                    .rng
                    .as_mut()
                    .expect("rng present for seeded rule")
                    .random_range(0..dict.len());
                dict.evaluate(residual, i)
            }
        }
    }
}

fn replay_index(indices: &[usize], step: usize) -> Result<usize> {
    indices.get(step - 1).copied().ok_or(Error::IndexOutOfRange {
        index: step - 1,
        len: indices.len(),
    })
}

fn check_hilbert_dictionary(f: &Vector, dict: &Dictionary) -> Result<()> {
    if f.dim() != dict.dim() {
        return Err(Error::DimensionMismatch {
            expected: dict.dim(),
            got: f.dim(),
        });
    }
    if dict.unit_p() != 2.0 {
        return Err(Error::InvalidParameter {
            what: "Hilbert algorithms require an l2-normalized dictionary",
        });
    }
    Ok(())
}

fn check_certificate(f_norm: f64, bound: Option<f64>) -> Result<()> {
    if let Some(b) = bound {
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::CertificateInvalid {
                reason: "certificate bound must be a finite nonnegative number",
            });
        }
        if f_norm > b + 1e-10 {
            return Err(Error::CertificateInvalid {
                reason: "input norm exceeds the certificate bound",
            });
        }
    }
    Ok(())
}

/// Weak greedy algorithm with relaxation parameter `b` in `(0, 1]`.
///
/// At step `m` an atom with `|<f_{m-1}, phi>| >= t_m sup_g |<f_{m-1}, g>|`
/// is selected (resolution of the freedom is governed by `policy`) and the
/// residual is updated by `f_m = f_{m-1} - b <f_{m-1}, phi> phi`. The
/// optional `a1_bound` is a certified upper bound on `||f||_{A1(D)}`; it
/// seeds the trace's `B` ledger.
pub fn run_wga(
    f: &Vector,
    dict: &Dictionary,
    tau: &WeaknessSequence,
    b: f64,
    max_iters: usize,
    a1_bound: Option<f64>,
    policy: &SelectionPolicy,
) -> Result<GreedyTrace> {
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::InvalidParameter {
            what: "relaxation parameter b must lie in (0, 1]",
        });
    }
    check_hilbert_dictionary(f, dict)?;
    let f_norm = f.norm_l2();
    check_certificate(f_norm, a1_bound)?;

    let kind = HilbertKind::Wga { b };
    let mut residual = f.clone();
    let mut ledger = a1_bound;
    let mut steps = Vec::new();
    let mut status = TerminalStatus::MaxIters;
    let mut selector = Selector::new(policy);

    if f_norm < ZERO_RESIDUAL {
        status = TerminalStatus::ExactZero;
    } else {
        for m in 1..=max_iters {
            let t = tau.t_at(m)?;
            let sel = selector.weak(dict, &residual, t, m)?;
            // Under greedy selection a vanishing pairing means the residual
            // is orthogonal to the whole dictionary; replayed selections may
            // legitimately be no-ops.
            if t > 0.0 && sel.value < STALL_PAIRING && selector.is_greedy() {
                status = TerminalStatus::Stalled;
                break;
            }
            residual.add_scaled(-b * sel.inner, &sel.witness);
            let norm = residual.norm_l2();
            ledger = ledger.map(|x| x + b * sel.value);
            steps.push(GreedyStep {
                index: sel.index,
                coefficient: b * sel.inner,
                y: sel.value,
                a: norm * norm,
                residual_norm: norm,
                bound_ledger: ledger,
            });
            if norm < ZERO_RESIDUAL {
                status = TerminalStatus::ExactZero;
                break;
            }
        }
    }

    Ok(GreedyTrace {
        kind,
        f_norm,
        cert_bound: a1_bound,
        steps,
        status,
        final_residual: residual,
    })
}

/// Thresholding variant of [`run_wga`]: the greedy step accepts the
/// lowest-index atom with `|<f_{m-1}, phi>| >= t_m a_{m-1} / B_{m-1}`,
/// where `B` is the certificate ledger. A certificate bound is required to
/// make the threshold meaningful.
pub fn run_twga(
    f: &Vector,
    dict: &Dictionary,
    tau: &WeaknessSequence,
    b: f64,
    max_iters: usize,
    a1_bound: f64,
    policy: &SelectionPolicy,
) -> Result<GreedyTrace> {
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::InvalidParameter {
            what: "relaxation parameter b must lie in (0, 1]",
        });
    }
    check_hilbert_dictionary(f, dict)?;
    let f_norm = f.norm_l2();
    check_certificate(f_norm, Some(a1_bound))?;
    if a1_bound <= 0.0 && f_norm >= ZERO_RESIDUAL {
        return Err(Error::CertificateInvalid {
            reason: "certificate bound must be positive for a nonzero input",
        });
    }

    let mut residual = f.clone();
    let mut ledger = a1_bound;
    let mut steps = Vec::new();
    let mut status = TerminalStatus::MaxIters;
    let mut selector = Selector::new(policy);

    if f_norm < ZERO_RESIDUAL {
        status = TerminalStatus::ExactZero;
    } else {
        for m in 1..=max_iters {
            let t = tau.t_at(m)?;
            let a_prev = {
                let n = residual.norm_l2();
                n * n
            };
            let threshold = t * a_prev / ledger;
            let sel = match &policy.mode {
                SelectionMode::Replay { indices, enforce } => {
                    let index = replay_index(indices, m)?;
                    let sel = dict.evaluate(&residual, index)?;
                    if *enforce && t > 0.0 && sel.value < threshold - REPLAY_SLACK {
                        return Err(Error::WeaknessViolated {
                            step: m,
                            achieved: sel.value,
                            required: threshold,
                        });
                    }
                    sel
                }
                SelectionMode::GreedyMax if t == 0.0 => selector.zero_step(dict, &residual)?,
                SelectionMode::GreedyMax => match first_above(dict, &residual, threshold)? {
                    Some(sel) => sel,
                    None => {
                        let best = dict.weak_sup(&residual)?.value;
                        return Err(Error::ThresholdUnmet {
                            step: m,
                            threshold,
                            best,
                        });
                    }
                },
            };
            if t > 0.0 && sel.value < STALL_PAIRING && selector.is_greedy() {
                status = TerminalStatus::Stalled;
                break;
            }
            residual.add_scaled(-b * sel.inner, &sel.witness);
            let norm = residual.norm_l2();
            ledger += b * sel.value;
            steps.push(GreedyStep {
                index: sel.index,
                coefficient: b * sel.inner,
                y: sel.value,
                a: norm * norm,
                residual_norm: norm,
                bound_ledger: Some(ledger),
            });
            if norm < ZERO_RESIDUAL {
                status = TerminalStatus::ExactZero;
                break;
            }
        }
    }

    Ok(GreedyTrace {
        kind: HilbertKind::Twga { b },
        f_norm,
        cert_bound: Some(a1_bound),
        steps,
        status,
        final_residual: residual,
    })
}

fn first_above(dict: &Dictionary, residual: &Vector, threshold: f64) -> Result<Option<WeakSup>> {
    for i in 0..dict.len() {
        let sel = dict.evaluate(residual, i)?;
        if sel.value >= threshold {
            return Ok(Some(sel));
        }
    }
    Ok(None)
}

/// Weak orthogonal greedy algorithm: the greedy step of [`run_wga`] with
/// `b = 1` thresholds, with the approximant replaced by the orthogonal
/// projection onto the span of all selected atoms. Re-selection of an atom
/// already in the span leaves the residual unchanged.
pub fn run_woga(
    f: &Vector,
    dict: &Dictionary,
    tau: &WeaknessSequence,
    max_iters: usize,
    a1_bound: Option<f64>,
    policy: &SelectionPolicy,
) -> Result<GreedyTrace> {
    check_hilbert_dictionary(f, dict)?;
    let f_norm = f.norm_l2();
    check_certificate(f_norm, a1_bound)?;

    let mut residual = f.clone();
    let mut basis: Vec<Vector> = Vec::new();
    let mut steps = Vec::new();
    let mut status = TerminalStatus::MaxIters;
    let mut selector = Selector::new(policy);

    if f_norm < ZERO_RESIDUAL {
        status = TerminalStatus::ExactZero;
    } else {
        for m in 1..=max_iters {
            let t = tau.t_at(m)?;
            let sel = selector.weak(dict, &residual, t, m)?;
            if t > 0.0 && sel.value < STALL_PAIRING && selector.is_greedy() {
                status = TerminalStatus::Stalled;
                break;
            }
            // The residual is already orthogonal to the current span, so
            // projecting onto the enlarged span subtracts one component.
            if let Some(q) = linalg::orthonormal_remainder(&basis, &sel.witness, 1e-12) {
                let c = residual.inner(&q)?;
                residual.add_scaled(-c, &q);
                basis.push(q);
            }
            let norm = residual.norm_l2();
            steps.push(GreedyStep {
                index: sel.index,
                coefficient: sel.inner,
                y: sel.value,
                a: norm * norm,
                residual_norm: norm,
                bound_ledger: None,
            });
            if norm < ZERO_RESIDUAL {
                status = TerminalStatus::ExactZero;
                break;
            }
        }
    }

    Ok(GreedyTrace {
        kind: HilbertKind::Woga,
        f_norm,
        cert_bound: a1_bound,
        steps,
        status,
        final_residual: residual,
    })
}

/// Projects `f` onto `span(g, atom)`; returns the projection and the weight
/// placed on `atom`.
fn project_pair(f: &Vector, g: &Vector, atom: &Vector) -> Result<(Vector, f64)> {
    let mut basis: Vec<Vector> = Vec::new();
    let g_norm = g.norm_l2();
    if g_norm > ZERO_RESIDUAL {
        basis.push(g.scaled(1.0 / g_norm));
    }
    let lambda;
    match linalg::orthonormal_remainder(&basis, atom, 1e-12) {
        Some(q) => {
            // atom = <atom, e1> e1 + r q with r > 0.
            let r = atom.inner(&q)?;
            lambda = f.inner(&q)? / r;
            basis.push(q);
        }
        None => {
            // Degenerate: span(g, atom) is the line through atom.
            basis.clear();
            let atom_norm = atom.norm_l2();
            if atom_norm > ZERO_RESIDUAL {
                basis.push(atom.scaled(1.0 / atom_norm));
            }
            lambda = if basis.is_empty() {
                0.0
            } else {
                f.inner(&basis[0])? / atom_norm
            };
        }
    }
    let mut projection = Vector::zeros(f.dim());
    for q in &basis {
        projection.add_scaled(f.inner(q)?, q);
    }
    Ok((projection, lambda))
}

/// Weak greedy algorithm with free relaxation: same greedy step as
/// [`run_woga`], approximant `G_m = Pr_{span(G_{m-1}, phi_m)}(f)`.
pub fn run_wgafr(
    f: &Vector,
    dict: &Dictionary,
    tau: &WeaknessSequence,
    max_iters: usize,
    a1_bound: Option<f64>,
    policy: &SelectionPolicy,
) -> Result<GreedyTrace> {
    check_hilbert_dictionary(f, dict)?;
    let f_norm = f.norm_l2();
    check_certificate(f_norm, a1_bound)?;

    let mut approximant = Vector::zeros(f.dim());
    let mut residual = f.clone();
    let mut steps = Vec::new();
    let mut status = TerminalStatus::MaxIters;
    let mut selector = Selector::new(policy);

    if f_norm < ZERO_RESIDUAL {
        status = TerminalStatus::ExactZero;
    } else {
        for m in 1..=max_iters {
            let t = tau.t_at(m)?;
            let sel = selector.weak(dict, &residual, t, m)?;
            if t > 0.0 && sel.value < STALL_PAIRING && selector.is_greedy() {
                status = TerminalStatus::Stalled;
                break;
            }
            let (projection, lambda) = project_pair(f, &approximant, &sel.witness)?;
            approximant = projection;
            residual = f.minus(&approximant)?;
            let norm = residual.norm_l2();
            steps.push(GreedyStep {
                index: sel.index,
                coefficient: lambda,
                y: sel.value,
                a: norm * norm,
                residual_norm: norm,
                bound_ledger: None,
            });
            if norm < ZERO_RESIDUAL {
                status = TerminalStatus::ExactZero;
                break;
            }
        }
    }

    Ok(GreedyTrace {
        kind: HilbertKind::Wgafr,
        f_norm,
        cert_bound: a1_bound,
        steps,
        status,
        final_residual: residual,
    })
}

/// Relaxed greedy algorithm: greedy step with weakness 1, approximant
/// `G_1 = <f, phi_1> phi_1` and `G_m = (1 - 1/m) G_{m-1} + phi_m / m` for
/// `m >= 2`. Residual norms are not monotone in general.
pub fn run_rga(f: &Vector, dict: &Dictionary, max_iters: usize) -> Result<GreedyTrace> {
    check_hilbert_dictionary(f, dict)?;
    let f_norm = f.norm_l2();

    let mut approximant = Vector::zeros(f.dim());
    let mut residual = f.clone();
    let mut steps = Vec::new();
    let mut status = TerminalStatus::MaxIters;

    if f_norm < ZERO_RESIDUAL {
        status = TerminalStatus::ExactZero;
    } else {
        for m in 1..=max_iters {
            let sel = dict.weak_sup(&residual)?;
            if sel.value < STALL_PAIRING {
                status = TerminalStatus::Stalled;
                break;
            }
            let coefficient;
            if m == 1 {
                coefficient = sel.inner;
                approximant = sel.witness.scaled(coefficient);
            } else {
                let w = 1.0 / m as f64;
                coefficient = w;
                approximant = approximant.scaled(1.0 - w);
                approximant.add_scaled(w, &sel.witness);
            }
            residual = f.minus(&approximant)?;
            let norm = residual.norm_l2();
            steps.push(GreedyStep {
                index: sel.index,
                coefficient,
                y: sel.value,
                a: norm * norm,
                residual_norm: norm,
                bound_ledger: None,
            });
            if norm < ZERO_RESIDUAL {
                status = TerminalStatus::ExactZero;
                break;
            }
        }
    }

    Ok(GreedyTrace {
        kind: HilbertKind::Rga,
        f_norm,
        cert_bound: None,
        steps,
        status,
        final_residual: residual,
    })
}

/// Incremental algorithm with schedule `eps` for inputs in the convex hull
/// of the (unsymmetrized) dictionary.
///
/// Step `m` takes the atom maximizing `<f_{m-1}, phi>` and asserts
/// `<f_{m-1}, phi - f> >= -eps_m ||f_{m-1}||`, then mixes
/// `G_m = (1 - 1/m) G_{m-1} + phi_m / m`. The assertion is guaranteed for
/// `f` in the hull; its failure reports that the input (or the schedule) is
/// inadmissible. An optional certificate (`nonnegative coefficients summing
/// to at most 1, synthesizing `f`) is validated up front.
pub fn run_ia(
    f: &Vector,
    dict: &Dictionary,
    eps: &[f64],
    max_iters: usize,
    cert: Option<&A1Certificate>,
) -> Result<GreedyTrace> {
    check_hilbert_dictionary(f, dict)?;
    if eps.len() < max_iters {
        return Err(Error::InvalidParameter {
            what: "epsilon schedule shorter than the iteration budget",
        });
    }
    if eps.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidParameter {
            what: "epsilon schedule entries must be positive and finite",
        });
    }
    let f_norm = f.norm_l2();
    if let Some(c) = cert {
        if !c.is_convex(1e-12) {
            return Err(Error::CertificateInvalid {
                reason: "convex-hull certificate needs nonnegative coefficients with sum <= 1",
            });
        }
        let synthesized = c.synthesize(dict)?;
        if synthesized.minus(f)?.norm_l2() > 1e-10 {
            return Err(Error::CertificateInvalid {
                reason: "certificate does not synthesize the input",
            });
        }
    }

    let mut approximant = Vector::zeros(f.dim());
    let mut residual = f.clone();
    let mut steps = Vec::new();
    let mut status = TerminalStatus::MaxIters;

    if f_norm < ZERO_RESIDUAL {
        status = TerminalStatus::ExactZero;
    } else {
        for m in 1..=max_iters {
            let sel = signed_sup(dict, &residual)?;
            let res_norm = residual.norm_l2();
            let lhs = sel.inner - residual.inner(f)?;
            let rhs = -eps[m - 1] * res_norm;
            if lhs < rhs {
                return Err(Error::IncrementConditionViolated { step: m, lhs, rhs });
            }
            let w = 1.0 / m as f64;
            approximant = approximant.scaled(1.0 - w);
            approximant.add_scaled(w, &sel.witness);
            residual = f.minus(&approximant)?;
            let norm = residual.norm_l2();
            steps.push(GreedyStep {
                index: sel.index,
                coefficient: w,
                y: sel.value,
                a: norm * norm,
                residual_norm: norm,
                bound_ledger: None,
            });
            if norm < ZERO_RESIDUAL {
                status = TerminalStatus::ExactZero;
                break;
            }
        }
    }

    Ok(GreedyTrace {
        kind: HilbertKind::Ia,
        f_norm,
        cert_bound: cert.map(|c| c.bound),
        steps,
        status,
        final_residual: residual,
    })
}

/// Maximizer of the signed pairing `<f, g>` (the convex-hull greedy step;
/// no absolute value).
fn signed_sup(dict: &Dictionary, f: &Vector) -> Result<WeakSup> {
    match dict.elements() {
        Some(elements) => {
            let mut best = 0usize;
            let mut best_ip = f64::NEG_INFINITY;
            for (i, g) in elements.iter().enumerate() {
                let ip = f.inner(g)?;
                if ip > best_ip {
                    best_ip = ip;
                    best = i;
                }
            }
            Ok(WeakSup {
                value: best_ip.abs(),
                index: best,
                inner: best_ip,
                witness: elements[best].clone(),
            })
        }
        // Induced witnesses pair nonnegatively, so the signed and absolute
        // suprema coincide.
        None => dict.weak_sup(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weakness::IndexSequence;
    use alloc::vec;

    fn vec2(a: f64, b: f64) -> Vector {
        Vector::new(vec![a, b]).unwrap()
    }

    fn tau_one() -> WeaknessSequence {
        WeaknessSequence::constant(1.0).unwrap()
    }

    #[test]
    fn wga_orthonormal_example() {
        let d = Dictionary::standard_basis(2).unwrap();
        let f = vec2(0.8, 0.6);
        let trace = run_wga(&f, &d, &tau_one(), 1.0, 2, None, &SelectionPolicy::greedy()).unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[0].index, 0);
        assert!((trace.steps[0].residual_norm - 0.6).abs() <= 1e-15);
        assert!(trace.steps[1].residual_norm <= 1e-15);
        assert_eq!(trace.status, TerminalStatus::ExactZero);
    }

    #[test]
    fn wga_zero_input() {
        let d = Dictionary::standard_basis(2).unwrap();
        let trace = run_wga(
            &Vector::zeros(2),
            &d,
            &tau_one(),
            1.0,
            5,
            None,
            &SelectionPolicy::greedy(),
        )
        .unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.status, TerminalStatus::ExactZero);
    }

    #[test]
    fn wga_two_atom_example() {
        let r = 1.0 / 2f64.sqrt();
        let d = Dictionary::explicit(vec![vec2(1.0, 0.0), vec2(r, r)], false).unwrap();
        let f = vec2(0.0, 1.0);
        let trace = run_wga(&f, &d, &tau_one(), 1.0, 1, None, &SelectionPolicy::greedy()).unwrap();
        let step = &trace.steps[0];
        assert_eq!(step.index, 1);
        assert!((step.y - r).abs() <= 1e-12);
        assert!((step.residual_norm - r).abs() <= 1e-12);
        assert!((trace.final_residual[0] + 0.5).abs() <= 1e-12);
        assert!((trace.final_residual[1] - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn wga_rejects_bad_b() {
        let d = Dictionary::standard_basis(2).unwrap();
        let f = vec2(1.0, 0.0);
        for b in [0.0, -0.5, 1.5] {
            assert!(run_wga(&f, &d, &tau_one(), b, 1, None, &SelectionPolicy::greedy()).is_err());
        }
    }

    #[test]
    fn wga_replay_enforcement() {
        let d = Dictionary::standard_basis(2).unwrap();
        let f = vec2(0.9, 0.1);
        // Selecting e2 first achieves 0.1 < 1.0 * 0.9.
        let err = run_wga(
            &f,
            &d,
            &tau_one(),
            1.0,
            1,
            None,
            &SelectionPolicy::replay(vec![1]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::WeaknessViolated { step: 1, .. }));
        // The unchecked variant accepts it.
        let trace = run_wga(
            &f,
            &d,
            &tau_one(),
            1.0,
            1,
            None,
            &SelectionPolicy::replay_unchecked(vec![1]),
        )
        .unwrap();
        assert_eq!(trace.steps[0].index, 1);
    }

    #[test]
    fn wga_energy_identity_random_dict() {
        let d = Dictionary::explicit(
            vec![
                vec2(1.0, 0.0),
                vec2(0.6, 0.8),
                vec2(-0.28, 0.96),
            ],
            false,
        )
        .unwrap();
        let f = vec2(0.3, 0.4);
        let b = 0.7;
        let trace = run_wga(&f, &d, &tau_one(), b, 30, Some(1.0), &SelectionPolicy::greedy())
            .unwrap();
        let mut a_prev = trace.f_norm * trace.f_norm;
        for step in &trace.steps {
            let predicted = a_prev - b * (2.0 - b) * step.y * step.y;
            assert!((step.a - predicted).abs() <= 1e-9 * a_prev.max(1e-12));
            a_prev = step.a;
        }
    }

    #[test]
    fn twga_scaled_example() {
        let d = Dictionary::standard_basis(2).unwrap();
        let (f, cert) = d.a1_certify(&[0, 1], &[0.6 / 1.4, 0.8 / 1.4]).unwrap();
        let trace = run_twga(
            &f,
            &d,
            &tau_one(),
            1.0,
            2,
            cert.bound,
            &SelectionPolicy::greedy(),
        )
        .unwrap();
        // Threshold t1 * a0 / B0 = ||f||^2 / 1 ~ 0.5102: coordinate 0 pays
        // only 0.4286, so the first qualifying index is 1.
        assert_eq!(trace.steps[0].index, 1);
        // Recompute the threshold check by brute force.
        let a0 = f.norm_l2() * f.norm_l2();
        assert!((f[1].abs()) >= a0 / cert.bound);
        assert!((f[0].abs()) < a0 / cert.bound);
    }

    #[test]
    fn twga_zero_threshold_uses_policy() {
        let d = Dictionary::standard_basis(2).unwrap();
        let tau = WeaknessSequence::sparse(IndexSequence::explicit(vec![2]).unwrap(), 1.0).unwrap();
        let f = vec2(0.5, 0.5);
        let policy = SelectionPolicy {
            mode: SelectionMode::GreedyMax,
            zero_step: ZeroStepRule::Fixed(1),
        };
        let trace = run_twga(&f, &d, &tau, 1.0, 1, 1.0, &policy).unwrap();
        assert_eq!(trace.steps[0].index, 1);
    }

    #[test]
    fn twga_zero_input() {
        let d = Dictionary::standard_basis(2).unwrap();
        let trace = run_twga(
            &Vector::zeros(2),
            &d,
            &tau_one(),
            1.0,
            4,
            1.0,
            &SelectionPolicy::greedy(),
        )
        .unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.status, TerminalStatus::ExactZero);
    }

    #[test]
    fn woga_matches_wga_on_orthonormal() {
        let d = Dictionary::standard_basis(3).unwrap();
        let f = Vector::new(vec![0.5, -0.3, 0.2]).unwrap();
        let wga = run_wga(&f, &d, &tau_one(), 1.0, 3, None, &SelectionPolicy::greedy()).unwrap();
        let woga = run_woga(&f, &d, &tau_one(), 3, None, &SelectionPolicy::greedy()).unwrap();
        assert_eq!(wga.steps.len(), woga.steps.len());
        for (a, b) in wga.steps.iter().zip(&woga.steps) {
            assert_eq!(a.index, b.index);
            assert_eq!(a.residual_norm, b.residual_norm);
        }
    }

    #[test]
    fn woga_exhausts_span() {
        let r = 1.0 / 2f64.sqrt();
        let d = Dictionary::explicit(vec![vec2(1.0, 0.0), vec2(r, r)], false).unwrap();
        let f = vec2(0.0, 1.0);
        let trace = run_woga(&f, &d, &tau_one(), 2, None, &SelectionPolicy::greedy()).unwrap();
        assert_eq!(trace.status, TerminalStatus::ExactZero);
        assert!(trace.steps.last().unwrap().residual_norm <= 1e-12);
        // Residual orthogonal to every selected atom along the way.
        for step in &trace.steps {
            let atom = d.element(step.index).unwrap();
            assert!(trace.final_residual.inner(atom).unwrap().abs() <= 1e-9);
        }
    }

    #[test]
    fn woga_duplicate_replay_is_harmless() {
        let d = Dictionary::standard_basis(2).unwrap();
        let f = vec2(0.8, 0.6);
        let trace = run_woga(
            &f,
            &d,
            &tau_one(),
            2,
            None,
            &SelectionPolicy::replay_unchecked(vec![0, 0]),
        )
        .unwrap();
        assert_eq!(trace.steps[0].residual_norm, trace.steps[1].residual_norm);
    }

    #[test]
    fn wgafr_first_step_is_projection() {
        let r = 1.0 / 2f64.sqrt();
        let d = Dictionary::explicit(vec![vec2(1.0, 0.0), vec2(r, r)], false).unwrap();
        let f = vec2(0.0, 1.0);
        let fr = run_wgafr(&f, &d, &tau_one(), 1, None, &SelectionPolicy::greedy()).unwrap();
        let wga = run_wga(&f, &d, &tau_one(), 1.0, 1, None, &SelectionPolicy::greedy()).unwrap();
        assert_eq!(fr.steps[0].index, wga.steps[0].index);
        assert!((fr.steps[0].residual_norm - wga.steps[0].residual_norm).abs() <= 1e-12);
    }

    #[test]
    fn wgafr_matches_woga_on_orthonormal() {
        let d = Dictionary::standard_basis(3).unwrap();
        let f = Vector::new(vec![0.5, -0.3, 0.2]).unwrap();
        let woga = run_woga(&f, &d, &tau_one(), 3, None, &SelectionPolicy::greedy()).unwrap();
        let fr = run_wgafr(&f, &d, &tau_one(), 3, None, &SelectionPolicy::greedy()).unwrap();
        for (a, b) in woga.steps.iter().zip(&fr.steps) {
            assert!((a.residual_norm - b.residual_norm).abs() <= 1e-12);
        }
    }

    #[test]
    fn wgafr_exact_when_input_in_span() {
        let r = 1.0 / 2f64.sqrt();
        let d = Dictionary::explicit(vec![vec2(1.0, 0.0), vec2(r, r)], false).unwrap();
        // f in span(phi_1, phi_2) = R^2, so two steps zero it out.
        let f = vec2(0.3, -0.9);
        let trace = run_wgafr(&f, &d, &tau_one(), 2, None, &SelectionPolicy::greedy()).unwrap();
        assert!(trace.steps.last().unwrap().residual_norm <= 1e-12);
    }

    #[test]
    fn rga_first_step_and_member_input() {
        let d = Dictionary::standard_basis(2).unwrap();
        let f = vec2(0.8, 0.6);
        let rga = run_rga(&f, &d, 1).unwrap();
        let wga = run_wga(&f, &d, &tau_one(), 1.0, 1, None, &SelectionPolicy::greedy()).unwrap();
        assert_eq!(rga.steps[0].index, wga.steps[0].index);
        assert!((rga.steps[0].residual_norm - wga.steps[0].residual_norm).abs() <= 1e-15);

        let g = vec2(0.0, 1.0);
        let trace = run_rga(&g, &d, 3).unwrap();
        assert_eq!(trace.status, TerminalStatus::ExactZero);
        assert_eq!(trace.steps.len(), 1);
    }

    #[test]
    fn ia_member_input_zeroes_immediately() {
        let d = Dictionary::standard_basis(2).unwrap();
        let g = vec2(1.0, 0.0);
        let eps = vec![0.5; 4];
        let trace = run_ia(&g, &d, &eps, 4, None).unwrap();
        assert_eq!(trace.status, TerminalStatus::ExactZero);
        assert_eq!(trace.steps.len(), 1);
    }

    #[test]
    fn ia_outside_hull_errors() {
        let d = Dictionary::explicit(vec![vec2(1.0, 0.0)], false).unwrap();
        let f = vec2(-1.0, 0.0);
        let eps = vec![0.5; 4];
        let err = run_ia(&f, &d, &eps, 4, None).unwrap_err();
        assert!(matches!(err, Error::IncrementConditionViolated { step: 1, .. }));
    }

    #[test]
    fn ia_certificate_validation() {
        let d = Dictionary::standard_basis(2).unwrap();
        let (f, cert) = d.a1_certify(&[0, 1], &[0.5, 0.5]).unwrap();
        let eps = vec![0.5; 8];
        assert!(run_ia(&f, &d, &eps, 8, Some(&cert)).is_ok());

        let (_, signed) = d.a1_certify(&[0, 1], &[0.7, -0.3]).unwrap();
        let g = signed.synthesize(&d).unwrap();
        let err = run_ia(&g, &d, &eps, 8, Some(&signed)).unwrap_err();
        assert!(matches!(err, Error::CertificateInvalid { .. }));
    }

    #[test]
    fn approximant_replay_matches_final_residual() {
        let r = 1.0 / 2f64.sqrt();
        let d = Dictionary::explicit(
            vec![vec2(1.0, 0.0), vec2(r, r), vec2(0.0, 1.0)],
            false,
        )
        .unwrap();
        let f = vec2(0.3, -0.9);
        for trace in [
            run_wga(&f, &d, &tau_one(), 0.8, 6, Some(1.5), &SelectionPolicy::greedy()).unwrap(),
            run_woga(&f, &d, &tau_one(), 4, None, &SelectionPolicy::greedy()).unwrap(),
            run_wgafr(&f, &d, &tau_one(), 4, None, &SelectionPolicy::greedy()).unwrap(),
            run_rga(&f, &d, 6).unwrap(),
        ] {
            let m = trace.steps.len();
            let g = trace.approximant(&f, &d, m).unwrap();
            let diff = f.minus(&g).unwrap().minus(&trace.final_residual).unwrap();
            assert!(
                diff.norm_l2() <= 1e-9,
                "{:?}: replayed approximant differs by {}",
                trace.kind,
                diff.norm_l2()
            );
        }
    }

    #[test]
    fn seeded_zero_step_is_reproducible() {
        let d = Dictionary::standard_basis(4).unwrap();
        let f = Vector::new(vec![0.5, 0.3, -0.2, 0.1]).unwrap();
        let tau = WeaknessSequence::sparse(IndexSequence::geometric(2).unwrap(), 1.0).unwrap();
        let policy = SelectionPolicy {
            mode: SelectionMode::GreedyMax,
            zero_step: ZeroStepRule::SeededRandom(7),
        };
        let t1 = run_wga(&f, &d, &tau, 1.0, 8, Some(1.1), &policy).unwrap();
        let t2 = run_wga(&f, &d, &tau, 1.0, 8, Some(1.1), &policy).unwrap();
        let idx1: Vec<usize> = t1.steps.iter().map(|s| s.index).collect();
        let idx2: Vec<usize> = t2.steps.iter().map(|s| s.index).collect();
        assert_eq!(idx1, idx2);
    }
}
