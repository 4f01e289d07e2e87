//! Remote consecutive projections: subspace collections stored through
//! orthonormal bases of their orthogonal complements, the weak remote
//! projections algorithm, its equivalence with the weak greedy algorithm
//! over the induced dictionary, and the schedule-driven variant for convex
//! hulls.

use alloc::vec::Vec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dict::Dictionary;
use crate::error::{Error, Result};
use crate::hilbert::{
    run_ia, run_wga, GreedyTrace, SelectionMode, SelectionPolicy, TerminalStatus, ZeroStepRule,
    STALL_PAIRING, ZERO_RESIDUAL,
};
use crate::linalg;
use crate::space::Vector;
use crate::weakness::WeaknessSequence;

const ORTHO_TOL: f64 = 1e-10;

/// Collection of closed subspaces `L`, each stored as an orthonormal basis
/// of its orthogonal complement (every algorithmic quantity lives there).
#[derive(Debug, Clone)]
pub struct SubspaceCollection {
    dim: usize,
    perp_bases: Vec<Vec<Vector>>,
}

impl SubspaceCollection {
    /// Wraps already-orthonormal complement bases; orthonormality is
    /// verified to `1e-10`.
    pub fn new(dim: usize, perp_bases: Vec<Vec<Vector>>) -> Result<Self> {
        if perp_bases.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (s, basis) in perp_bases.iter().enumerate() {
            if basis.is_empty() {
                return Err(Error::EmptyInput);
            }
            for u in basis {
                if u.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: u.dim(),
                    });
                }
            }
            for i in 0..basis.len() {
                for j in i..basis.len() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    let ip = basis[i].inner(&basis[j])?;
                    if (ip - expected).abs() > ORTHO_TOL {
                        return Err(Error::NotOrthonormal { subspace: s });
                    }
                }
            }
        }
        Ok(SubspaceCollection { dim, perp_bases })
    }

    /// Builds the collection from arbitrary spanning sets of the
    /// complements, orthonormalizing each.
    pub fn from_generators(dim: usize, generators: Vec<Vec<Vector>>) -> Result<Self> {
        let mut perp_bases = Vec::with_capacity(generators.len());
        for gens in generators {
            let basis = linalg::mgs_orthonormalize(&gens, 1e-12);
            if basis.is_empty() {
                return Err(Error::EmptyInput);
            }
            perp_bases.push(basis);
        }
        Self::new(dim, perp_bases)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.perp_bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perp_bases.is_empty()
    }

    pub fn perp_basis(&self, index: usize) -> Result<&[Vector]> {
        self.perp_bases
            .get(index)
            .map(|b| b.as_slice())
            .ok_or(Error::IndexOutOfRange {
                index,
                len: self.perp_bases.len(),
            })
    }

    /// `Pr_{L_perp}(x)` over the stored orthonormal basis.
    pub fn perp_projection(&self, x: &Vector, index: usize) -> Result<Vector> {
        let basis = self.perp_basis(index)?;
        let mut proj = Vector::zeros(self.dim);
        for u in basis {
            proj.add_scaled(x.inner(u)?, u);
        }
        Ok(proj)
    }

    /// `Pr_L(x) = x - Pr_{L_perp}(x)`.
    pub fn project_onto(&self, x: &Vector, index: usize) -> Result<Vector> {
        x.minus(&self.perp_projection(x, index)?)
    }

    /// `dist(x, L) = ||Pr_{L_perp}(x)||`, the minimum distance from `x`
    /// to the subspace.
    pub fn dist(&self, x: &Vector, index: usize) -> Result<f64> {
        Ok(self.perp_projection(x, index)?.norm_l2())
    }

    /// Maximal distance over the collection with its argmax (lowest index
    /// on ties).
    pub fn max_dist(&self, x: &Vector) -> Result<(usize, f64)> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let mut best = 0usize;
        let mut best_dist = f64::NEG_INFINITY;
        for i in 0..self.perp_bases.len() {
            let d = self.dist(x, i)?;
            if d > best_dist {
                best_dist = d;
                best = i;
            }
        }
        Ok((best, best_dist))
    }

    /// Rank of the union of all complement bases; equals the ambient
    /// dimension iff the subspaces intersect trivially.
    pub fn union_rank(&self) -> usize {
        let all: Vec<Vector> = self.perp_bases.iter().flatten().cloned().collect();
        linalg::span_rank(&all, ORTHO_TOL)
    }

    /// Whether the intersection of all subspaces is `{0}`; runs proceed
    /// regardless, but convergence guarantees presume this holds.
    pub fn has_trivial_intersection(&self) -> bool {
        self.union_rank() == self.dim
    }
}

/// Which projection algorithm produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionKind {
    Wrpa,
    RpSchedule,
}

/// One projection step: the chosen subspace, the achieved distance, and the
/// norm after projecting.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionStep {
    pub subspace: usize,
    pub dist: f64,
    pub residual_norm: f64,
}

/// Iteration ledger of a projection run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionTrace {
    pub kind: ProjectionKind,
    pub x0_norm: f64,
    pub cert_bound: Option<f64>,
    pub steps: Vec<ProjectionStep>,
    pub status: TerminalStatus,
    pub final_residual: Vector,
}

/// Weak remote projections: at step `m` pick a subspace with
/// `dist(x_{m-1}, L) >= t_m max_L dist(x_{m-1}, L)` (resolution governed by
/// `policy`) and project: `x_m = Pr_{L_m}(x_{m-1})`.
pub fn run_wrpa(
    x0: &Vector,
    coll: &SubspaceCollection,
    tau: &WeaknessSequence,
    max_iters: usize,
    cert_bound: Option<f64>,
    policy: &SelectionPolicy,
) -> Result<ProjectionTrace> {
    if x0.dim() != coll.dim() {
        return Err(Error::DimensionMismatch {
            expected: coll.dim(),
            got: x0.dim(),
        });
    }
    let x0_norm = x0.norm_l2();
    let mut rng = match policy.zero_step {
        ZeroStepRule::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };

    let mut x = x0.clone();
    let mut steps = Vec::new();
    let mut status = TerminalStatus::MaxIters;

    if x0_norm < ZERO_RESIDUAL {
        status = TerminalStatus::ExactZero;
    } else {
        for m in 1..=max_iters {
            let t = tau.t_at(m)?;
            let subspace = match &policy.mode {
                SelectionMode::GreedyMax => {
                    if t == 0.0 {
                        match policy.zero_step {
                            ZeroStepRule::GreedyMax => coll.max_dist(&x)?.0,
                            ZeroStepRule::Fixed(i) => i,
                            ZeroStepRule::SeededRandom(_) => rng
                                .as_mut()
                                .expect("rng present for seeded rule")
                                .random_range(0..coll.len()),
                        }
                    } else {
                        coll.max_dist(&x)?.0
                    }
                }
                SelectionMode::Replay { indices, enforce } => {
                    let index = *indices.get(m - 1).ok_or(Error::IndexOutOfRange {
                        index: m - 1,
                        len: indices.len(),
                    })?;
                    if *enforce && t > 0.0 {
                        let achieved = coll.dist(&x, index)?;
                        let required = t * coll.max_dist(&x)?.1;
                        if achieved < required - 1e-12 {
                            return Err(Error::WeaknessViolated {
                                step: m,
                                achieved,
                                required,
                            });
                        }
                    }
                    index
                }
            };
            let perp = coll.perp_projection(&x, subspace)?;
            let dist = perp.norm_l2();
            if t > 0.0
                && dist < STALL_PAIRING
                && matches!(policy.mode, SelectionMode::GreedyMax)
            {
                status = TerminalStatus::Stalled;
                break;
            }
            x = x.minus(&perp)?;
            let norm = x.norm_l2();
            steps.push(ProjectionStep {
                subspace,
                dist,
                residual_norm: norm,
            });
            if norm < ZERO_RESIDUAL {
                status = TerminalStatus::ExactZero;
                break;
            }
        }
    }

    Ok(ProjectionTrace {
        kind: ProjectionKind::Wrpa,
        x0_norm,
        cert_bound,
        steps,
        status,
        final_residual: x,
    })
}

/// Side-by-side run of WRPA and of WGA over the induced dictionary with
/// matched tie-breaking, plus the per-step rank-one identity
/// `Pr_L(x) = x - <x, g> g` with `g` the normalized complement projection.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub wrpa: ProjectionTrace,
    pub wga: GreedyTrace,
    /// Largest absolute gap between the two residual-norm sequences.
    pub max_norm_gap: f64,
    /// First step whose selected subspace differs or whose norms disagree
    /// beyond tolerance, if any.
    pub first_divergence: Option<usize>,
    /// Largest norm of `Pr_L(x) - (x - <x,g>g)` along the WRPA path.
    pub max_rank_one_error: f64,
    pub tolerance: f64,
    pub equivalent: bool,
}

/// Runs [`run_wrpa`] and [`run_wga`] (over the induced dictionary, `b = 1`)
/// with the same inputs and policy, and reports whether the residual-norm
/// sequences agree within `1e-12`.
pub fn wrpa_wga_equivalence(
    x0: &Vector,
    coll: &SubspaceCollection,
    tau: &WeaknessSequence,
    max_iters: usize,
    policy: &SelectionPolicy,
) -> Result<EquivalenceReport> {
    let tolerance = 1e-12;
    let wrpa = run_wrpa(x0, coll, tau, max_iters, None, policy)?;
    let dict = Dictionary::from_subspaces(coll.clone());
    let wga = run_wga(x0, &dict, tau, 1.0, max_iters, None, policy)?;

    let mut max_norm_gap: f64 = 0.0;
    let mut first_divergence = None;
    let len = wrpa.steps.len().max(wga.steps.len());
    for m in 0..len {
        match (wrpa.steps.get(m), wga.steps.get(m)) {
            (Some(p), Some(g)) => {
                let gap = (p.residual_norm - g.residual_norm).abs();
                max_norm_gap = max_norm_gap.max(gap);
                if (p.subspace != g.index || gap > tolerance) && first_divergence.is_none() {
                    first_divergence = Some(m + 1);
                }
            }
            _ => {
                if first_divergence.is_none() {
                    first_divergence = Some(m + 1);
                }
            }
        }
    }

    // Replay the WRPA path, comparing the projection update with the
    // rank-one greedy update at every step.
    let mut max_rank_one_error: f64 = 0.0;
    let mut x = x0.clone();
    for step in &wrpa.steps {
        let perp = coll.perp_projection(&x, step.subspace)?;
        let dist = perp.norm_l2();
        let projected = x.minus(&perp)?;
        if dist > 0.0 {
            let g = perp.scaled(1.0 / dist);
            let mut rank_one = x.clone();
            rank_one.add_scaled(-x.inner(&g)?, &g);
            max_rank_one_error = max_rank_one_error.max(projected.minus(&rank_one)?.norm_l2());
        }
        x = projected;
    }

    let equivalent = first_divergence.is_none() && max_norm_gap <= tolerance;
    Ok(EquivalenceReport {
        wrpa,
        wga,
        max_norm_gap,
        first_divergence,
        max_rank_one_error,
        tolerance,
        equivalent,
    })
}

/// Certificate that `x0` is a convex combination of explicitly listed unit
/// vectors, each lying in some complement of the collection.
#[derive(Debug, Clone)]
pub struct ConvexCombination {
    pub points: Vec<Vector>,
    pub weights: Vec<f64>,
}

impl ConvexCombination {
    fn validate(&self, x0: &Vector, coll: &SubspaceCollection) -> Result<()> {
        if self.points.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.points.len(),
                got: self.weights.len(),
            });
        }
        if self.weights.iter().any(|&w| w < 0.0) {
            return Err(Error::CertificateInvalid {
                reason: "convex weights must be nonnegative",
            });
        }
        if self.weights.iter().sum::<f64>() > 1.0 + 1e-12 {
            return Err(Error::CertificateInvalid {
                reason: "convex weights must sum to at most 1",
            });
        }
        let mut combo = Vector::zeros(x0.dim());
        for (p, &w) in self.points.iter().zip(&self.weights) {
            if (p.norm_l2() - 1.0).abs() > 1e-8 {
                return Err(Error::CertificateInvalid {
                    reason: "convex-hull witnesses must be unit vectors",
                });
            }
            let in_some_complement = (0..coll.len())
                .any(|i| matches!(coll.project_onto(p, i), Ok(pr) if pr.norm_l2() <= 1e-8));
            if !in_some_complement {
                return Err(Error::CertificateInvalid {
                    reason: "witness lies in no complement of the collection",
                });
            }
            combo.add_scaled(w, p);
        }
        if combo.minus(x0)?.norm_l2() > 1e-10 {
            return Err(Error::CertificateInvalid {
                reason: "certificate does not synthesize the input",
            });
        }
        Ok(())
    }
}

/// Remote projections with schedule `eps`: the incremental algorithm run
/// over the induced dictionary. Step `m` finds the subspace of maximal
/// distance, asserts the incremental condition, and mixes the witness into
/// the averaged approximant.
pub fn run_rp(
    x0: &Vector,
    coll: &SubspaceCollection,
    eps: &[f64],
    max_iters: usize,
    cert: Option<&ConvexCombination>,
) -> Result<ProjectionTrace> {
    if let Some(c) = cert {
        c.validate(x0, coll)?;
    }
    let dict = Dictionary::from_subspaces(coll.clone());
    let trace = run_ia(x0, &dict, eps, max_iters, None)?;
    let steps = trace
        .steps
        .iter()
        .map(|s| ProjectionStep {
            subspace: s.index,
            dist: s.y,
            residual_norm: s.residual_norm,
        })
        .collect();
    Ok(ProjectionTrace {
        kind: ProjectionKind::RpSchedule,
        x0_norm: trace.f_norm,
        cert_bound: cert.map(|c| c.weights.iter().sum()),
        steps,
        status: trace.status,
        final_residual: trace.final_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn vecn(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    /// `span(e_i)` subspaces of `R^dim`: the complement basis of subspace
    /// `i` is every basis vector except `e_i`.
    fn coordinate_lines(dim: usize) -> SubspaceCollection {
        let bases = (0..dim)
            .map(|i| {
                (0..dim)
                    .filter(|&j| j != i)
                    .map(|j| Vector::basis(dim, j).unwrap())
                    .collect()
            })
            .collect();
        SubspaceCollection::new(dim, bases).unwrap()
    }

    #[test]
    fn projection_examples() {
        // L = span(e1) in R^2, complement span(e2).
        let coll = SubspaceCollection::new(2, vec![vec![Vector::basis(2, 1).unwrap()]]).unwrap();
        let x = vecn(&[3.0, 4.0]);
        assert_eq!(coll.project_onto(&x, 0).unwrap().as_slice(), &[3.0, 0.0]);
        assert_eq!(coll.dist(&x, 0).unwrap(), 4.0);

        let inside = vecn(&[2.5, 0.0]);
        assert_eq!(coll.project_onto(&inside, 0).unwrap(), inside);
        assert_eq!(coll.dist(&inside, 0).unwrap(), 0.0);

        // Complement spanned by (1,1)/sqrt(2).
        let r = 1.0 / 2f64.sqrt();
        let coll = SubspaceCollection::new(2, vec![vec![vecn(&[r, r])]]).unwrap();
        let proj = coll.project_onto(&vecn(&[1.0, 0.0]), 0).unwrap();
        assert!((proj[0] - 0.5).abs() <= 1e-15 && (proj[1] + 0.5).abs() <= 1e-15);

        assert!(coll.project_onto(&vecn(&[1.0, 0.0]), 3).is_err());
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let err = SubspaceCollection::new(
            2,
            vec![vec![vecn(&[1.0, 0.0]), vecn(&[0.9, 0.1])]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotOrthonormal { subspace: 0 }));
        // from_generators accepts the same input.
        let coll = SubspaceCollection::from_generators(
            2,
            vec![vec![vecn(&[1.0, 0.0]), vecn(&[0.9, 0.1])]],
        )
        .unwrap();
        assert_eq!(coll.perp_basis(0).unwrap().len(), 2);
    }

    #[test]
    fn trivial_intersection_detection() {
        let coll = coordinate_lines(3);
        assert!(coll.has_trivial_intersection());
        // A single hyperplane's line complement cannot span R^3.
        let single =
            SubspaceCollection::new(3, vec![vec![Vector::basis(3, 0).unwrap()]]).unwrap();
        assert!(!single.has_trivial_intersection());
    }

    #[test]
    fn wrpa_hand_example() {
        let coll = coordinate_lines(2);
        let tau = WeaknessSequence::constant(1.0).unwrap();
        let trace = run_wrpa(
            &vecn(&[0.6, 0.8]),
            &coll,
            &tau,
            4,
            None,
            &SelectionPolicy::greedy(),
        )
        .unwrap();
        // dist to span(e1) is 0.8, to span(e2) is 0.6: pick subspace 0.
        assert_eq!(trace.steps[0].subspace, 0);
        assert!((trace.steps[0].dist - 0.8).abs() <= 1e-15);
        assert!((trace.steps[0].residual_norm - 0.6).abs() <= 1e-15);
        assert_eq!(trace.steps[1].residual_norm, 0.0);
        assert_eq!(trace.status, TerminalStatus::ExactZero);

        let empty = run_wrpa(
            &Vector::zeros(2),
            &coll,
            &tau,
            4,
            None,
            &SelectionPolicy::greedy(),
        )
        .unwrap();
        assert!(empty.steps.is_empty());
    }

    #[test]
    fn pythagorean_identity_along_trace() {
        let coll = SubspaceCollection::from_generators(
            4,
            vec![
                vec![vecn(&[1.0, 1.0, 0.0, 0.0]), vecn(&[0.0, 0.0, 1.0, -1.0])],
                vec![vecn(&[1.0, -1.0, 1.0, 0.0])],
                vec![vecn(&[0.0, 1.0, 1.0, 1.0]), vecn(&[1.0, 0.0, 0.0, 1.0])],
            ],
        )
        .unwrap();
        let tau = WeaknessSequence::constant(0.8).unwrap();
        let x0 = vecn(&[0.4, -0.2, 0.7, 0.1]);
        let trace = run_wrpa(&x0, &coll, &tau, 25, None, &SelectionPolicy::greedy()).unwrap();
        let mut prev = x0.norm_l2();
        for step in &trace.steps {
            let predicted = prev * prev - step.dist * step.dist;
            assert!((step.residual_norm * step.residual_norm - predicted).abs() <= 1e-9);
            prev = step.residual_norm;
        }
    }

    #[test]
    fn equivalence_on_hyperplanes() {
        let coll = SubspaceCollection::from_generators(
            3,
            vec![
                vec![vecn(&[1.0, 2.0, -1.0])],
                vec![vecn(&[0.5, -1.0, 1.5])],
                vec![vecn(&[2.0, 0.3, 0.4])],
            ],
        )
        .unwrap();
        let tau = WeaknessSequence::constant(1.0).unwrap();
        let report = wrpa_wga_equivalence(
            &vecn(&[0.3, 0.4, -0.2]),
            &coll,
            &tau,
            30,
            &SelectionPolicy::greedy(),
        )
        .unwrap();
        assert!(report.equivalent, "gap {}", report.max_norm_gap);
        assert!(report.max_rank_one_error <= 1e-12);
    }

    #[test]
    fn rp_single_witness() {
        let coll = coordinate_lines(2);
        // x0 = e2 is a unit vector of span(e1)'s complement.
        let x0 = Vector::basis(2, 1).unwrap();
        let eps = vec![0.5; 4];
        let trace = run_rp(&x0, &coll, &eps, 4, None).unwrap();
        assert_eq!(trace.status, TerminalStatus::ExactZero);
        assert_eq!(trace.steps.len(), 1);
    }

    #[test]
    fn rp_outside_hull_errors() {
        let coll = coordinate_lines(2);
        let x0 = vecn(&[1.2, 1.6]); // norm 2, outside the hull
        let eps = vec![0.25; 16];
        let err = run_rp(&x0, &coll, &eps, 16, None).unwrap_err();
        assert!(matches!(err, Error::IncrementConditionViolated { .. }));
    }

    #[test]
    fn rp_certificate_validation() {
        let coll = coordinate_lines(2);
        let x0 = vecn(&[0.3, 0.5]);
        // x0 = 0.3 * e1 + 0.5 * e2 with e1 in complement of span(e2), etc.
        let cert = ConvexCombination {
            points: vec![Vector::basis(2, 0).unwrap(), Vector::basis(2, 1).unwrap()],
            weights: vec![0.3, 0.5],
        };
        let eps = vec![0.5; 64];
        let trace = run_rp(&x0, &coll, &eps, 64, Some(&cert)).unwrap();
        assert!(trace.steps.last().unwrap().residual_norm < x0.norm_l2());

        let bad = ConvexCombination {
            points: vec![Vector::basis(2, 0).unwrap()],
            weights: vec![-0.3],
        };
        assert!(run_rp(&x0, &coll, &eps, 4, Some(&bad)).is_err());
    }
}
