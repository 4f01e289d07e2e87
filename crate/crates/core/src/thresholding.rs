//! Thresholding greedy algorithms with respect to a basis, acting purely on
//! coefficient sequences, and the constructive counterexample showing that a
//! summable weakness sequence admits a non-convergent realization.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hilbert::{TerminalStatus, ZERO_RESIDUAL};
use crate::weakness::WeaknessSequence;

/// Basis regime: an orthonormal basis of a Hilbert space (all norms 1, the
/// residual `l2` norm is exact), or a general basis with norms bounded
/// between `c1` and `c2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMode {
    OrthonormalHilbert,
    NormedBanach,
}

/// Abstract basis: only the coefficient horizon and the basis norms enter
/// any thresholding quantity, so Hilbert and Banach modes share one engine.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisModel {
    mode: BasisMode,
    norms: Vec<f64>,
    c1: f64,
    c2: f64,
}

impl BasisModel {
    pub fn orthonormal(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(BasisModel {
            mode: BasisMode::OrthonormalHilbert,
            norms: vec![1.0; len],
            c1: 1.0,
            c2: 1.0,
        })
    }

    pub fn normed(norms: Vec<f64>) -> Result<Self> {
        if norms.is_empty() {
            return Err(Error::EmptyInput);
        }
        if norms.iter().any(|&n| !(n > 0.0) || !n.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "basis norms must be positive and finite",
            });
        }
        let c1 = norms.iter().cloned().fold(f64::INFINITY, f64::min);
        let c2 = norms.iter().cloned().fold(0.0, f64::max);
        Ok(BasisModel {
            mode: BasisMode::NormedBanach,
            norms,
            c1,
            c2,
        })
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn mode(&self) -> BasisMode {
        self.mode
    }

    pub fn norm(&self, k: usize) -> f64 {
        self.norms[k]
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }
}

/// Indices sorted by coefficient magnitude, nonincreasing, ties broken
/// towards the lowest index; the decreasing permutation of the expansion.
pub fn greedy_permutation(c: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&i, &j| c[j].abs().total_cmp(&c[i].abs()).then(i.cmp(&j)));
    order
}

/// Resolution of the thresholding step's freedom.
#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdPolicy {
    /// Largest remaining coefficient (lowest index on ties).
    GreedyMax,
    /// Smallest remaining coefficient still meeting the threshold; the
    /// adversarial realization used by the necessity tests.
    MinimalSatisfier,
    /// Prescribed index list, validated against the threshold.
    Replay(Vec<usize>),
}

/// One thresholding step; norms describe the residual after the removal.
#[derive(Debug, Clone, PartialEq)]
pub struct WtgaStep {
    pub index: usize,
    /// The removed coefficient `c_{k_m}` (of the original expansion).
    pub coefficient: f64,
    /// `t_m * max_k |c_k(f_{m-1})|` the selection had to meet.
    pub threshold: f64,
    pub residual_l2: f64,
    /// `sum |c_k| ||psi_k||` over the remaining indices.
    pub residual_weighted_l1: f64,
    pub max_remaining: f64,
    pub l1_remaining: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WtgaTrace {
    pub steps: Vec<WtgaStep>,
    pub status: TerminalStatus,
}

/// Weak thresholding greedy algorithm: step `m` removes an index whose
/// coefficient magnitude is at least `t_m` times the maximal remaining one.
/// Indices are never selected twice; removing an index zeroes it.
pub fn run_wtga(
    c: &[f64],
    model: &BasisModel,
    tau: &WeaknessSequence,
    max_iters: usize,
    policy: &ThresholdPolicy,
) -> Result<WtgaTrace> {
    if c.len() != model.len() {
        return Err(Error::DimensionMismatch {
            expected: model.len(),
            got: c.len(),
        });
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }

    let mut removed = vec![false; c.len()];
    let mut steps = Vec::new();
    let mut status = TerminalStatus::MaxIters;

    for m in 1..=max_iters {
        // Fresh per-step scan; incremental updates would accumulate
        // cancellation error over long runs.
        let stats = remaining_stats(c, &removed, &model.norms);
        let (max_val, max_idx) = match stats.max {
            Some(pair) => pair,
            None => {
                status = TerminalStatus::ExactZero;
                break;
            }
        };
        if stats.l2_sq.sqrt() < ZERO_RESIDUAL {
            status = TerminalStatus::ExactZero;
            break;
        }
        let t = tau.t_at(m)?;
        let threshold = t * max_val;
        let index = match policy {
            ThresholdPolicy::GreedyMax => max_idx,
            ThresholdPolicy::MinimalSatisfier => {
                let mut pick = max_idx;
                let mut pick_val = max_val;
                for (i, &x) in c.iter().enumerate() {
                    if !removed[i] && x.abs() >= threshold && x.abs() < pick_val {
                        pick = i;
                        pick_val = x.abs();
                    }
                }
                pick
            }
            ThresholdPolicy::Replay(indices) => {
                let index = *indices.get(m - 1).ok_or(Error::IndexOutOfRange {
                    index: m - 1,
                    len: indices.len(),
                })?;
                if index >= c.len() {
                    return Err(Error::IndexOutOfRange {
                        index,
                        len: c.len(),
                    });
                }
                if removed[index] {
                    return Err(Error::InvalidParameter {
                        what: "replay selects an already-removed index",
                    });
                }
                if c[index].abs() < threshold - 1e-12 {
                    return Err(Error::WeaknessViolated {
                        step: m,
                        achieved: c[index].abs(),
                        required: threshold,
                    });
                }
                index
            }
        };
        removed[index] = true;
        let post = remaining_stats(c, &removed, &model.norms);
        steps.push(WtgaStep {
            index,
            coefficient: c[index],
            threshold,
            residual_l2: post.l2_sq.sqrt(),
            residual_weighted_l1: post.weighted_l1,
            max_remaining: post.max.map_or(0.0, |(v, _)| v),
            l1_remaining: post.l1,
        });
        if post.l2_sq.sqrt() < ZERO_RESIDUAL {
            status = TerminalStatus::ExactZero;
            break;
        }
    }

    Ok(WtgaTrace { steps, status })
}

struct RemainingStats {
    l2_sq: f64,
    l1: f64,
    weighted_l1: f64,
    /// `(max |c_k|, argmax)` over the remaining indices, lowest index on
    /// ties; `None` when everything is removed.
    max: Option<(f64, usize)>,
}

fn remaining_stats(c: &[f64], removed: &[bool], norms: &[f64]) -> RemainingStats {
    let mut l2_sq = 0.0;
    let mut l1 = 0.0;
    let mut weighted_l1 = 0.0;
    let mut max: Option<(f64, usize)> = None;
    for (i, &x) in c.iter().enumerate() {
        if removed[i] {
            continue;
        }
        let a = x.abs();
        l2_sq += x * x;
        l1 += a;
        weighted_l1 += a * norms[i];
        if max.map_or(true, |(v, _)| a > v) {
            max = Some((a, i));
        }
    }
    RemainingStats {
        l2_sq,
        l1,
        weighted_l1,
        max,
    }
}

/// After every coefficient with index `< prefix` has been removed, the
/// weighted residual is at most `c2 * sum_{k >= prefix} |c_k|`.
pub fn tail_bound(model: &BasisModel, c: &[f64], prefix: usize) -> f64 {
    model.c2 * c.iter().skip(prefix).map(|x| x.abs()).sum::<f64>()
}

/// The coefficient sequence, adversarial schedule and residual floor of the
/// non-convergence construction for a summable weakness sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct NecessityCounterexample {
    /// `c*_1 = (1+S)^-1`, `c*_k = t_{k-1} (1+S)^-1` for `k >= 2`, where `S`
    /// is the truncated sum of the weakness sequence; `||c*||_1 = 1`.
    pub coefficients: Vec<f64>,
    /// 0-based removal order `1, 2, ..., horizon-1`: each selection meets
    /// its threshold with exact equality, never touching the first index.
    pub schedule: Vec<usize>,
    /// The residual `l2` norm never drops below this within the horizon.
    pub floor: f64,
    /// Truncated sum `S` of the weakness values entering the construction.
    pub truncated_sum: f64,
}

/// Builds the counterexample input for a summable weakness sequence: the
/// adversarial realization removes only the trailing coefficients, so the
/// leading one keeps the residual norm at or above `floor` forever.
/// Divergent-sum families are rejected (the construction is meaningless).
pub fn necessity_counterexample(
    tau: &WeaknessSequence,
    horizon: usize,
) -> Result<NecessityCounterexample> {
    if horizon < 2 {
        return Err(Error::InvalidParameter {
            what: "counterexample horizon must be at least 2",
        });
    }
    ensure_summable(tau)?;
    let tail = tau.values(horizon - 1)?;
    let truncated_sum: f64 = tail.iter().sum();
    let scale = 1.0 / (1.0 + truncated_sum);
    let mut coefficients = Vec::with_capacity(horizon);
    coefficients.push(scale);
    coefficients.extend(tail.iter().map(|t| t * scale));
    let schedule = (1..horizon).collect();
    Ok(NecessityCounterexample {
        coefficients,
        schedule,
        floor: scale,
        truncated_sum,
    })
}

/// Symbolic summability check: closed-form families are classified exactly;
/// explicit lists and finite-support sparse families are finite sums.
fn ensure_summable(tau: &WeaknessSequence) -> Result<()> {
    use crate::weakness::IndexSequence;
    let summable = match tau {
        WeaknessSequence::Constant { t } => *t == 0.0,
        WeaknessSequence::Power { theta } => *theta > 1.0,
        WeaknessSequence::Sparse { indices, .. } => {
            matches!(indices, IndexSequence::Explicit(_))
        }
        WeaknessSequence::Explicit { .. } => true,
    };
    if summable {
        Ok(())
    } else {
        Err(Error::DivergentWeakness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau_one() -> WeaknessSequence {
        WeaknessSequence::constant(1.0).unwrap()
    }

    #[test]
    fn permutation_examples() {
        assert_eq!(greedy_permutation(&[3.0, 1.0, 2.0]), vec![0, 2, 1]);
        assert_eq!(greedy_permutation(&[1.0, 1.0]), vec![0, 1]);
        assert_eq!(greedy_permutation(&[0.0, -5.0, 4.0]), vec![1, 2, 0]);
    }

    #[test]
    fn wtga_orthonormal_example() {
        let model = BasisModel::orthonormal(2).unwrap();
        let trace = run_wtga(
            &[0.8, 0.6],
            &model,
            &tau_one(),
            4,
            &ThresholdPolicy::GreedyMax,
        )
        .unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[0].index, 0);
        assert!((trace.steps[0].residual_l2 - 0.6).abs() <= 1e-15);
        assert_eq!(trace.steps[1].index, 1);
        assert!(trace.steps[1].residual_l2 <= 1e-15);
        assert_eq!(trace.status, TerminalStatus::ExactZero);
    }

    #[test]
    fn zero_threshold_adversary_removes_zero_coefficient() {
        let model = BasisModel::orthonormal(3).unwrap();
        let tau = WeaknessSequence::explicit(vec![0.0, 1.0, 1.0]).unwrap();
        let trace = run_wtga(
            &[0.8, 0.0, 0.6],
            &model,
            &tau,
            1,
            &ThresholdPolicy::MinimalSatisfier,
        )
        .unwrap();
        assert_eq!(trace.steps[0].index, 1);
        // Residual unchanged by removing a zero coefficient.
        assert!((trace.steps[0].residual_l2 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn step_inequality_l2_vs_linf_l1() {
        let model = BasisModel::orthonormal(6).unwrap();
        let c = [0.3, -0.25, 0.2, 0.1, -0.1, 0.05];
        let tau = WeaknessSequence::constant(0.5).unwrap();
        let trace = run_wtga(&c, &model, &tau, 6, &ThresholdPolicy::MinimalSatisfier).unwrap();
        for step in &trace.steps {
            let lhs = step.residual_l2 * step.residual_l2;
            assert!(lhs <= step.max_remaining * step.l1_remaining + 1e-12);
        }
    }

    #[test]
    fn geometric_counterexample() {
        let tau = WeaknessSequence::power(2.0).unwrap();
        let ce = necessity_counterexample(&tau, 64).unwrap();
        let l1: f64 = ce.coefficients.iter().map(|x| x.abs()).sum();
        assert!((l1 - 1.0).abs() <= 1e-12);
        assert!((ce.floor - 1.0 / (1.0 + ce.truncated_sum)).abs() <= 1e-15);

        let model = BasisModel::orthonormal(ce.coefficients.len()).unwrap();
        let trace = run_wtga(
            &ce.coefficients,
            &model,
            &tau,
            ce.schedule.len(),
            &ThresholdPolicy::Replay(ce.schedule.clone()),
        )
        .unwrap();
        assert_eq!(trace.steps.len(), ce.schedule.len());
        for step in &trace.steps {
            // Adversarial legality with exact equality.
            assert!((step.coefficient.abs() - step.threshold).abs() <= 1e-12);
            assert!(step.residual_l2 >= ce.floor - 1e-12);
        }
    }

    #[test]
    fn halving_weakness_floor_is_half() {
        // t_k = 2^-k as an explicit list.
        let values: Vec<f64> = (1..=60).map(|k| 2f64.powi(-k)).collect();
        let tau = WeaknessSequence::explicit(values).unwrap();
        let ce = necessity_counterexample(&tau, 61).unwrap();
        assert_eq!(ce.floor, 0.5);
    }

    #[test]
    fn divergent_family_rejected() {
        let harmonic = WeaknessSequence::power(1.0).unwrap();
        assert_eq!(
            necessity_counterexample(&harmonic, 32).unwrap_err(),
            Error::DivergentWeakness
        );
        let constant = WeaknessSequence::constant(0.5).unwrap();
        assert!(necessity_counterexample(&constant, 32).is_err());
    }

    #[test]
    fn banach_tail_bound() {
        let norms: Vec<f64> = (0..8).map(|k| 1.0 + 0.1 * k as f64).collect();
        let model = BasisModel::normed(norms).unwrap();
        assert_eq!(model.mode(), BasisMode::NormedBanach);
        let c = [0.5, -0.3, 0.2, 0.1, 0.05, -0.02, 0.01, 0.005];
        let tau = tau_one();
        let trace = run_wtga(&c, &model, &tau, 8, &ThresholdPolicy::GreedyMax).unwrap();
        // Greedy removal of |c| in decreasing order clears prefixes in this
        // monotone example; once indices < n are gone the weighted residual
        // obeys the tail bound.
        for n in 1..=c.len() {
            if let Some(m) = first_step_clearing_prefix(&trace, n) {
                let bound = tail_bound(&model, &c, n);
                assert!(trace.steps[m].residual_weighted_l1 <= bound + 1e-12);
            }
        }
    }

    fn first_step_clearing_prefix(trace: &WtgaTrace, prefix: usize) -> Option<usize> {
        let mut removed = vec![false; prefix];
        for (m, step) in trace.steps.iter().enumerate() {
            if step.index < prefix {
                removed[step.index] = true;
            }
            if removed.iter().all(|&r| r) {
                return Some(m);
            }
        }
        None
    }
}
