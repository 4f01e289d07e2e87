//! Dual greedy algorithm on `lp^n` with power-type smoothness majorants.
//!
//! The greedy step works through the norming functional of the residual:
//! an atom with `F_{f_{m-1}}(phi) >= t_m r_D(f_{m-1})` is selected, the step
//! size `c_m` solves the majorant equation, and the residual is updated by
//! `f_m = f_{m-1} - c_m phi_m`.

use alloc::vec::Vec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dict::Dictionary;
use crate::error::{Error, Result};
use crate::hilbert::{TerminalStatus, STALL_PAIRING, ZERO_RESIDUAL};
use crate::space::{SmoothnessMajorant, Vector};
use crate::weakness::WeaknessSequence;

/// Which step-size equation the run solves: the weak form scales the
/// right-hand side by `t_m b/2 * r_D(f_{m-1})`, the starred form by
/// `b/2 * F_{f_{m-1}}(phi_m)` (the realized functional value, no explicit
/// weakness factor).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgaVariant {
    Dga,
    DgaStar,
}

/// Resolution of the greedy step's freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DgaPolicy {
    /// Argmax of the functional over the dictionary, lowest index on ties.
    GreedyMax,
    /// Uniformly random satisfier of the weak inequality, from a ChaCha8
    /// stream with this seed; probes the "any realization" claims.
    RandomSatisfier(u64),
}

/// One executed dual-greedy iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct BanachStep {
    pub index: usize,
    /// Step size `c_m > 0`.
    pub coefficient: f64,
    /// `||f_m||_p` after the update.
    pub residual_norm: f64,
    /// `r_D(f_{m-1}) = max_g F_{f_{m-1}}(g)`.
    pub r_value: f64,
    /// `F_{f_{m-1}}(phi_m)` of the selected atom.
    pub functional_value: f64,
    /// `B_m = B_{m-1} + c_m` when a certificate seeds the ledger.
    pub bound_ledger: Option<f64>,
}

/// Iteration ledger of a dual greedy run.
#[derive(Debug, Clone, PartialEq)]
pub struct BanachGreedyTrace {
    pub p: f64,
    pub majorant: SmoothnessMajorant,
    pub b: f64,
    pub variant: DgaVariant,
    /// `||f||_p` of the input.
    pub f_norm: f64,
    pub cert_bound: Option<f64>,
    pub steps: Vec<BanachStep>,
    pub status: TerminalStatus,
    pub final_residual: Vector,
}

impl BanachGreedyTrace {
    pub fn residual_norms(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.residual_norm).collect()
    }
}

/// `r_D(f) = max_g F_f(g)` over an explicit dictionary, with the argmax
/// index (lowest on ties). Nonnegative whenever the dictionary is
/// symmetric.
pub fn r_dict(f: &Vector, dict: &Dictionary, p: f64) -> Result<(f64, usize)> {
    let functional = f.norming_functional(p)?;
    r_of_functional(&functional, dict)
}

fn r_of_functional(functional: &Vector, dict: &Dictionary) -> Result<(f64, usize)> {
    let elements = dict.elements().ok_or(Error::NotExplicit)?;
    let mut best = 0usize;
    let mut best_val = f64::NEG_INFINITY;
    for (i, g) in elements.iter().enumerate() {
        let v = functional.inner(g)?;
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    Ok((best_val, best))
}

/// Positive root of the step-size equation for a power majorant
/// `mu(u) = gamma u^q`: with `K = t b r` (weak form) or `K = b F(phi)`
/// (starred form),
/// `c = (K / (2 gamma))^(1/(q-1)) * ||f_{m-1}||`.
pub fn solve_step_size(
    f_norm: f64,
    r_or_functional: f64,
    t: f64,
    b: f64,
    majorant: &SmoothnessMajorant,
    variant: DgaVariant,
) -> Result<f64> {
    if !(f_norm > 0.0) || !f_norm.is_finite() {
        return Err(Error::InvalidParameter {
            what: "step-size equation needs a positive residual norm",
        });
    }
    if !(r_or_functional > 0.0) || !r_or_functional.is_finite() {
        return Err(Error::InvalidParameter {
            what: "step-size equation needs a positive functional value",
        });
    }
    let k = match variant {
        DgaVariant::Dga => t * b * r_or_functional,
        DgaVariant::DgaStar => b * r_or_functional,
    };
    if !(k > 0.0) {
        return Err(Error::InvalidParameter {
            what: "step-size scale t*b*r must be positive",
        });
    }
    let exponent = 1.0 / (majorant.q() - 1.0);
    Ok((k / (2.0 * majorant.gamma())).powf(exponent) * f_norm)
}

/// Dual greedy algorithm with parameters `(tau, b, mu)` on `lp^n`,
/// `1 < p < inf`, `b` in `(0, 1)`, strictly positive weakness values, and
/// the majorant taken from [`SmoothnessMajorant::for_lp`]. The dictionary
/// must be explicit and unit-normalized in the same `p`.
#[allow(clippy::too_many_arguments)]
pub fn run_dga(
    f: &Vector,
    dict: &Dictionary,
    tau: &WeaknessSequence,
    b: f64,
    p: f64,
    max_iters: usize,
    a1_bound: Option<f64>,
    variant: DgaVariant,
    policy: DgaPolicy,
) -> Result<BanachGreedyTrace> {
    if !(p > 1.0 && p < f64::INFINITY) {
        return Err(Error::InvalidExponent { p });
    }
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::InvalidParameter {
            what: "dual greedy requires b in (0, 1)",
        });
    }
    if f.dim() != dict.dim() {
        return Err(Error::DimensionMismatch {
            expected: dict.dim(),
            got: f.dim(),
        });
    }
    if !dict.is_explicit() {
        return Err(Error::NotExplicit);
    }
    if dict.unit_p() != p {
        return Err(Error::InvalidParameter {
            what: "dictionary must be unit-normalized in the run's own norm",
        });
    }
    let majorant = SmoothnessMajorant::for_lp(p)?;
    let f_norm = f.norm_lp(p)?;
    if let Some(bound) = a1_bound {
        if !(bound.is_finite() && bound >= 0.0) {
            return Err(Error::CertificateInvalid {
                reason: "certificate bound must be a finite nonnegative number",
            });
        }
        if f_norm > bound + 1e-10 {
            return Err(Error::CertificateInvalid {
                reason: "input norm exceeds the certificate bound",
            });
        }
    }
    let mut rng = match policy {
        DgaPolicy::RandomSatisfier(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        DgaPolicy::GreedyMax => None,
    };

    let mut residual = f.clone();
    let mut residual_norm = f_norm;
    let mut ledger = a1_bound;
    let mut steps = Vec::new();
    let mut status = TerminalStatus::MaxIters;

    if f_norm < ZERO_RESIDUAL {
        status = TerminalStatus::ExactZero;
    } else {
        for m in 1..=max_iters {
            let t = tau.t_at(m)?;
            if !(t > 0.0) {
                return Err(Error::InvalidParameter {
                    what: "dual greedy requires strictly positive weakness values",
                });
            }
            let functional = residual.norming_functional(p)?;
            let (r_value, argmax) = r_of_functional(&functional, dict)?;
            if r_value < STALL_PAIRING {
                status = TerminalStatus::Stalled;
                break;
            }
            let index = match (&mut rng, policy) {
                (None, _) => argmax,
                (Some(rng), _) => {
                    let threshold = t * r_value;
                    let satisfiers: Vec<usize> = (0..dict.len())
                        .filter(|&i| {
                            functional
                                .inner(dict.element(i).expect("explicit atom"))
                                .expect("dimension checked")
                                >= threshold
                        })
                        .collect();
                    satisfiers[rng.random_range(0..satisfiers.len())]
                }
            };
            let atom = dict.element(index)?;
            let functional_value = functional.inner(atom)?;
            let scale = match variant {
                DgaVariant::Dga => r_value,
                DgaVariant::DgaStar => functional_value,
            };
            let coefficient = solve_step_size(residual_norm, scale, t, b, &majorant, variant)?;
            residual.add_scaled(-coefficient, atom);
            residual_norm = residual.norm_lp(p)?;
            ledger = ledger.map(|x| x + coefficient);
            steps.push(BanachStep {
                index,
                coefficient,
                residual_norm,
                r_value,
                functional_value,
                bound_ledger: ledger,
            });
            if residual_norm < ZERO_RESIDUAL {
                status = TerminalStatus::ExactZero;
                break;
            }
        }
    }

    Ok(BanachGreedyTrace {
        p,
        majorant,
        b,
        variant,
        f_norm,
        cert_bound: a1_bound,
        steps,
        status,
        final_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn vec2(a: f64, b: f64) -> Vector {
        Vector::new(vec![a, b]).unwrap()
    }

    /// Coordinate vectors are unit in every lp norm.
    fn signed_basis(dim: usize, p: f64) -> Dictionary {
        let mut atoms = Vec::new();
        for i in 0..dim {
            atoms.push(Vector::basis(dim, i).unwrap());
            atoms.push(Vector::basis(dim, i).unwrap().scaled(-1.0));
        }
        Dictionary::explicit_lp(atoms, p, false).unwrap()
    }

    #[test]
    fn r_dict_hilbert_case() {
        let d = signed_basis(2, 2.0);
        let f = vec2(0.3, -0.4);
        let (r, idx) = r_dict(&f, &d, 2.0).unwrap();
        let sup = d.weak_sup(&f).unwrap().value;
        assert!((r - sup / f.norm_l2()).abs() <= 1e-12);
        // Witness is -e2 (index 3): F_f aligns with f.
        assert_eq!(idx, 3);
        assert!(r >= 0.0);
    }

    #[test]
    fn r_dict_member_attains_one() {
        let d = signed_basis(2, 2.0);
        let f = vec2(0.0, 2.5); // f / ||f|| = e2, element of D
        let (r, idx) = r_dict(&f, &d, 2.0).unwrap();
        assert!((r - 1.0).abs() <= 1e-12);
        assert_eq!(idx, 2);
    }

    #[test]
    fn step_size_closed_form() {
        let m2 = SmoothnessMajorant::new(2.0, 0.5).unwrap();
        // q = 2, gamma = 1/2, t = 1, b = 1/2, r = 1, ||f|| = 1: the equation
        // gamma c^2 = (t b / 2) c r has the positive root c = t b r / (2 gamma).
        let c = solve_step_size(1.0, 1.0, 1.0, 0.5, &m2, DgaVariant::Dga).unwrap();
        assert!((c - 0.5).abs() <= 1e-15);
        let lhs = 1.0 * m2.eval(c / 1.0);
        let rhs = (1.0 * 0.5 / 2.0) * c * 1.0;
        assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1e-12));
        // q = 2 makes c linear in r.
        let c2 = solve_step_size(1.0, 2.0, 1.0, 0.5, &m2, DgaVariant::Dga).unwrap();
        assert!((c2 - 2.0 * c).abs() <= 1e-15);

        let m15 = SmoothnessMajorant::new(1.5, 2.0 / 3.0).unwrap();
        // K = t*b*r = 1/3, f_norm = 2: c = (K/(2 gamma))^2 * 2 = 0.125.
        let c = solve_step_size(2.0, 1.0 / 3.0, 1.0, 1.0, &m15, DgaVariant::DgaStar).unwrap();
        assert!((c - 0.125).abs() <= 1e-15);
        // Plug back into the defining equation.
        let lhs = 2.0 * m15.eval(c / 2.0);
        let rhs = (1.0 / 2.0) * c * (1.0 / 3.0);
        assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-12));

        assert!(solve_step_size(0.0, 1.0, 1.0, 0.5, &m2, DgaVariant::Dga).is_err());
        assert!(solve_step_size(1.0, 0.0, 1.0, 0.5, &m2, DgaVariant::Dga).is_err());
    }

    #[test]
    fn dga_selects_member_input() {
        let d = signed_basis(3, 2.0);
        let f = Vector::basis(3, 1).unwrap();
        let tau = WeaknessSequence::constant(1.0).unwrap();
        let trace = run_dga(
            &f,
            &d,
            &tau,
            0.5,
            2.0,
            1,
            Some(1.0),
            DgaVariant::Dga,
            DgaPolicy::GreedyMax,
        )
        .unwrap();
        assert_eq!(trace.steps[0].index, 2); // +e2 atom
        assert!((trace.steps[0].r_value - 1.0).abs() <= 1e-12);
        assert!(trace.steps[0].coefficient > 0.0);
    }

    #[test]
    fn dga_defining_equation_holds_along_trace() {
        for p in [1.5, 2.0, 4.0] {
            for variant in [DgaVariant::Dga, DgaVariant::DgaStar] {
                let d = signed_basis(3, p);
                let f = Vector::new(vec![0.4, -0.3, 0.2]).unwrap();
                let tau = WeaknessSequence::power(0.3).unwrap();
                let trace = run_dga(
                    &f,
                    &d,
                    &tau,
                    0.5,
                    p,
                    40,
                    Some(0.9),
                    variant,
                    DgaPolicy::GreedyMax,
                )
                .unwrap();
                assert!(!trace.steps.is_empty());
                let majorant = trace.majorant;
                let mut prev_norm = trace.f_norm;
                for (m, step) in trace.steps.iter().enumerate() {
                    let t = tau.t_at(m + 1).unwrap();
                    let lhs = prev_norm * majorant.eval(step.coefficient / prev_norm);
                    let scale = match variant {
                        DgaVariant::Dga => t * 0.5 / 2.0 * step.coefficient * step.r_value,
                        DgaVariant::DgaStar => 0.5 / 2.0 * step.coefficient * step.functional_value,
                    };
                    assert!(
                        (lhs - scale).abs() <= 1e-9 * scale.abs().max(1e-12),
                        "p={p} variant={variant:?} m={m}"
                    );
                    // Decrease inequality with the 1-b margin.
                    assert!(
                        step.residual_norm
                            <= prev_norm - t * 0.5 * step.coefficient * step.r_value + 1e-9
                    );
                    prev_norm = step.residual_norm;
                }
            }
        }
    }

    #[test]
    fn dga_rejects_bad_parameters() {
        let d = signed_basis(2, 2.0);
        let f = vec2(0.5, 0.2);
        let tau = WeaknessSequence::constant(1.0).unwrap();
        for b in [0.0, 1.0, 1.5] {
            assert!(run_dga(
                &f,
                &d,
                &tau,
                b,
                2.0,
                4,
                None,
                DgaVariant::Dga,
                DgaPolicy::GreedyMax
            )
            .is_err());
        }
        assert!(run_dga(
            &f,
            &d,
            &tau,
            0.5,
            1.0,
            4,
            None,
            DgaVariant::Dga,
            DgaPolicy::GreedyMax
        )
        .is_err());
        // Zero weakness values are rejected at the offending step.
        let sparse = WeaknessSequence::explicit(vec![1.0, 0.0]).unwrap();
        let err = run_dga(
            &f,
            &d,
            &sparse,
            0.5,
            2.0,
            2,
            None,
            DgaVariant::Dga,
            DgaPolicy::GreedyMax,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { .. }));
        // p-mismatch between space and dictionary.
        let d4 = signed_basis(2, 4.0);
        assert!(run_dga(
            &f,
            &d4,
            &tau,
            0.5,
            2.0,
            4,
            None,
            DgaVariant::Dga,
            DgaPolicy::GreedyMax
        )
        .is_err());
    }

    #[test]
    fn random_satisfier_is_reproducible_and_legal() {
        let d = signed_basis(4, 2.0);
        let f = Vector::new(vec![0.4, 0.3, -0.2, 0.1]).unwrap();
        let tau = WeaknessSequence::constant(0.25).unwrap();
        let policy = DgaPolicy::RandomSatisfier(11);
        let t1 = run_dga(&f, &d, &tau, 0.5, 2.0, 12, Some(1.0), DgaVariant::Dga, policy).unwrap();
        let t2 = run_dga(&f, &d, &tau, 0.5, 2.0, 12, Some(1.0), DgaVariant::Dga, policy).unwrap();
        let idx1: Vec<usize> = t1.steps.iter().map(|s| s.index).collect();
        let idx2: Vec<usize> = t2.steps.iter().map(|s| s.index).collect();
        assert_eq!(idx1, idx2);
        for step in &t1.steps {
            assert!(step.functional_value >= 0.25 * step.r_value - 1e-12);
        }
    }
}
