//! Command implementations: single runs, parameter sweeps, weakness
//! diagnostics, and re-verification of stored traces.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use greedylab_core::banach::{run_dga, DgaPolicy, DgaVariant};
use greedylab_core::bounds::{
    verify_banach_trace, verify_hilbert_trace, verify_projection_trace, BoundReport, BoundSample,
    Tolerance, TraceVerification,
};
use greedylab_core::dict::{A1Certificate, Dictionary};
use greedylab_core::hilbert::{
    run_ia, run_rga, run_twga, run_wga, run_wgafr, run_woga,
};
use greedylab_core::projections::{run_rp, run_wrpa, ConvexCombination, SubspaceCollection};
use greedylab_core::space::Vector;
use greedylab_core::thresholding::{
    necessity_counterexample, run_wtga, BasisModel, ThresholdPolicy, WtgaTrace,
};
use greedylab_core::weakness::WeaknessSequence;

use crate::config::{
    resolve, AlgorithmConfig, BasisConfig, DiagConfig, DictionaryConfig, DgaPolicyConfig,
    DgaVariantConfig, ExperimentConfig, InputConfig, SweepConfig, WeaknessConfig,
    WtgaPolicyConfig,
};
use crate::gen;
use crate::io::{
    self, BoundColumns, CounterexampleFile, DiagnosticsFile, ReportFile, TraceFile,
};

/// Result of one experiment run.
pub struct RunOutcome {
    /// All enabled verifications passed (trivially true when disabled or
    /// when no check applies).
    pub pass: bool,
    pub steps: usize,
    pub status: String,
    pub final_residual_norm: f64,
    /// Worst signed violation over the non-skipped reports.
    pub max_violation: f64,
    pub report: Option<ReportFile>,
}

enum BuiltDictionary {
    Explicit(Dictionary),
    Subspaces(SubspaceCollection),
}

fn build_dictionary(
    config: &ExperimentConfig,
    base_dir: &Path,
    quiet: bool,
) -> Result<BuiltDictionary> {
    let dim = config.space.dim;
    let p = config.space.p;
    let built = match &config.dictionary {
        DictionaryConfig::Orthonormal { symmetrize } => {
            let d = Dictionary::standard_basis(dim)?;
            BuiltDictionary::Explicit(if *symmetrize { d.symmetrize()? } else { d })
        }
        DictionaryConfig::RandomUnit {
            count,
            seed,
            symmetrize,
        } => BuiltDictionary::Explicit(gen::random_unit_dictionary(
            dim,
            *count,
            p,
            *seed,
            *symmetrize,
        )?),
        DictionaryConfig::File { path } => {
            BuiltDictionary::Explicit(io::load_dictionary(&resolve(base_dir, path), dim, p)?)
        }
        DictionaryConfig::SubspaceFile { path } => {
            BuiltDictionary::Subspaces(io::load_subspaces(&resolve(base_dir, path), dim)?)
        }
        DictionaryConfig::RandomSubspaces { count, codim, seed } => {
            BuiltDictionary::Subspaces(gen::random_subspace_collection(dim, *count, *codim, *seed)?)
        }
    };
    if !quiet {
        match &built {
            BuiltDictionary::Explicit(d) => {
                if !d.is_complete() {
                    eprintln!(
                        "warning: dictionary spans rank {} of {} dimensions",
                        d.span_rank(),
                        d.dim()
                    );
                }
            }
            BuiltDictionary::Subspaces(coll) => {
                if !coll.has_trivial_intersection() {
                    eprintln!(
                        "warning: subspace intersection is nontrivial (union rank {} < {})",
                        coll.union_rank(),
                        coll.dim()
                    );
                }
            }
        }
    }
    Ok(built)
}

/// Element input plus whatever certificate the source provides.
struct BuiltInput {
    f: Vector,
    cert: Option<A1Certificate>,
    bound: Option<f64>,
    hull_witnesses: Option<ConvexCombination>,
}

fn build_element_input(
    input: &InputConfig,
    built: &BuiltDictionary,
    dim: usize,
) -> Result<BuiltInput> {
    match (input, built) {
        (InputConfig::Coefficients { indices, values }, BuiltDictionary::Explicit(dict)) => {
            let (f, cert) = dict.a1_certify(indices, values)?;
            Ok(BuiltInput {
                f,
                bound: Some(cert.bound),
                cert: Some(cert),
                hull_witnesses: None,
            })
        }
        (InputConfig::Coefficients { .. }, BuiltDictionary::Subspaces(_)) => {
            bail!("input.kind: coefficient synthesis needs an explicit dictionary")
        }
        (InputConfig::RandomConvex { terms, seed }, BuiltDictionary::Explicit(dict)) => {
            let (f, cert) = gen::random_signed_convex(dict, *terms, *seed)?;
            Ok(BuiltInput {
                f,
                bound: Some(cert.bound),
                cert: Some(cert),
                hull_witnesses: None,
            })
        }
        (InputConfig::RandomConvexNonneg { terms, seed }, BuiltDictionary::Explicit(dict)) => {
            let (f, cert) = gen::random_nonneg_convex(dict, *terms, *seed)?;
            Ok(BuiltInput {
                f,
                bound: Some(cert.bound),
                cert: Some(cert),
                hull_witnesses: None,
            })
        }
        (InputConfig::RandomConvex { terms, seed }, BuiltDictionary::Subspaces(coll)) => {
            let (f, bound, combo) = gen::random_subspace_convex(coll, *terms, *seed, true)?;
            Ok(BuiltInput {
                f,
                cert: None,
                bound: Some(bound),
                hull_witnesses: Some(combo),
            })
        }
        (InputConfig::RandomConvexNonneg { terms, seed }, BuiltDictionary::Subspaces(coll)) => {
            let (f, bound, combo) = gen::random_subspace_convex(coll, *terms, *seed, false)?;
            Ok(BuiltInput {
                f,
                cert: None,
                bound: Some(bound),
                hull_witnesses: Some(combo),
            })
        }
        (InputConfig::Vector { coords }, _) => {
            if coords.len() != dim {
                bail!(
                    "input.coords: expected {dim} coordinates, got {}",
                    coords.len()
                );
            }
            Ok(BuiltInput {
                f: Vector::new(coords.clone())?,
                cert: None,
                bound: None,
                hull_witnesses: None,
            })
        }
        _ => bail!("input.kind: not an element input"),
    }
}

fn build_coefficients(input: &InputConfig, base_dir: &Path) -> Result<Vec<f64>> {
    Ok(match input {
        InputConfig::CoefficientList { values } => values.clone(),
        InputConfig::CoefficientCsv { path } => io::read_csv_column(&resolve(base_dir, path))?,
        InputConfig::RandomL1 { count, seed } => gen::random_l1_coefficients(*count, *seed),
        _ => bail!("input.kind: not a coefficient input"),
    })
}

/// Sufficiency-step and legality reports for a thresholding trace, plus the
/// residual-floor report for counterexample replays.
fn thresholding_verification(
    trace: &WtgaTrace,
    floor: Option<f64>,
    tol: Tolerance,
) -> TraceVerification {
    let mut reports = Vec::new();
    let step_samples = trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| BoundSample {
            m: i + 1,
            measured: s.residual_l2 * s.residual_l2,
            bound: s.max_remaining * s.l1_remaining,
        })
        .collect();
    reports.push(BoundReport::evaluate(
        "l2sq_le_linf_l1",
        step_samples,
        tol,
    ));
    let legality = trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| BoundSample {
            m: i + 1,
            measured: s.threshold,
            bound: s.coefficient.abs(),
        })
        .collect();
    reports.push(BoundReport::evaluate("threshold_legality", legality, tol));
    if let Some(floor) = floor {
        let samples = trace
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| BoundSample {
                m: i + 1,
                // floor <= residual, expressed as measured <= bound.
                measured: floor,
                bound: s.residual_l2,
            })
            .collect();
        reports.push(BoundReport::evaluate("residual_floor", samples, tol));
    }
    TraceVerification::new(reports)
}

fn max_violation(report: &ReportFile) -> f64 {
    report
        .reports
        .iter()
        .filter(|r| r.skipped.is_none())
        .map(|r| r.max_violation)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(f64::MIN)
}

/// Executes one experiment, writes its artifacts under `out_dir`, and
/// returns the outcome. `seed_override` replaces every generator seed.
pub fn run_experiment(
    config: &ExperimentConfig,
    base_dir: &Path,
    out_dir: &Path,
    seed_override: Option<u64>,
    quiet: bool,
) -> Result<RunOutcome> {
    let mut config = config.clone();
    if let Some(seed) = seed_override {
        config.override_seed(seed);
    }
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let tol = config.verify.tolerance();
    let tau_config = config.algorithm.tau().cloned();
    let tau = tau_config
        .as_ref()
        .map(|t| t.build(base_dir))
        .transpose()?;

    let built = build_dictionary(&config, base_dir, quiet)?;

    let (trace_file, verification, extra_status): (TraceFile, Option<TraceVerification>, String) =
        match &config.algorithm {
            AlgorithmConfig::Wga {
                b,
                iterations,
                policy,
                ..
            } => {
                let input = build_element_input(&config.input, &built, config.space.dim)?;
                let tau = tau.as_ref().expect("wga carries a weakness sequence");
                let dict = match &built {
                    BuiltDictionary::Explicit(d) => d.clone(),
                    BuiltDictionary::Subspaces(c) => Dictionary::from_subspaces(c.clone()),
                };
                let trace = run_wga(
                    &input.f,
                    &dict,
                    tau,
                    *b,
                    *iterations,
                    input.bound,
                    &policy.build(),
                )?;
                let verification = config
                    .verify
                    .enabled
                    .then(|| verify_hilbert_trace(&trace, tau, tol))
                    .transpose()?;
                let file = io::HilbertTraceFile::from_trace(&trace, tau_config.as_ref());
                write_hilbert_artifacts(&config, out_dir, &file, &trace, tau)?;
                (TraceFile::Hilbert(file), verification, status_of(&trace))
            }
            AlgorithmConfig::Twga {
                b,
                iterations,
                policy,
                ..
            } => {
                let input = build_element_input(&config.input, &built, config.space.dim)?;
                let bound = input
                    .bound
                    .ok_or_else(|| anyhow::anyhow!("thresholding WGA requires a certified input"))?;
                let tau = tau.as_ref().expect("twga carries a weakness sequence");
                let dict = match &built {
                    BuiltDictionary::Explicit(d) => d.clone(),
                    BuiltDictionary::Subspaces(c) => Dictionary::from_subspaces(c.clone()),
                };
                let trace = run_twga(
                    &input.f,
                    &dict,
                    tau,
                    *b,
                    *iterations,
                    bound,
                    &policy.build(),
                )?;
                let verification = config
                    .verify
                    .enabled
                    .then(|| verify_hilbert_trace(&trace, tau, tol))
                    .transpose()?;
                let file = io::HilbertTraceFile::from_trace(&trace, tau_config.as_ref());
                write_hilbert_artifacts(&config, out_dir, &file, &trace, tau)?;
                (TraceFile::Hilbert(file), verification, status_of(&trace))
            }
            AlgorithmConfig::Woga {
                iterations, policy, ..
            }
            | AlgorithmConfig::Wgafr {
                iterations, policy, ..
            } => {
                let input = build_element_input(&config.input, &built, config.space.dim)?;
                let tau = tau.as_ref().expect("algorithm carries a weakness sequence");
                let dict = match &built {
                    BuiltDictionary::Explicit(d) => d.clone(),
                    BuiltDictionary::Subspaces(c) => Dictionary::from_subspaces(c.clone()),
                };
                let runner = if matches!(config.algorithm, AlgorithmConfig::Woga { .. }) {
                    run_woga
                } else {
                    run_wgafr
                };
                let trace = runner(
                    &input.f,
                    &dict,
                    tau,
                    *iterations,
                    input.bound,
                    &policy.build(),
                )?;
                let verification = config
                    .verify
                    .enabled
                    .then(|| verify_hilbert_trace(&trace, tau, tol))
                    .transpose()?;
                let file = io::HilbertTraceFile::from_trace(&trace, tau_config.as_ref());
                write_hilbert_artifacts(&config, out_dir, &file, &trace, tau)?;
                (TraceFile::Hilbert(file), verification, status_of(&trace))
            }
            AlgorithmConfig::Rga { iterations } => {
                let input = build_element_input(&config.input, &built, config.space.dim)?;
                let dict = match &built {
                    BuiltDictionary::Explicit(d) => d.clone(),
                    BuiltDictionary::Subspaces(c) => Dictionary::from_subspaces(c.clone()),
                };
                let trace = run_rga(&input.f, &dict, *iterations)?;
                let file = io::HilbertTraceFile::from_trace(&trace, None);
                let one = WeaknessSequence::constant(1.0)?;
                write_hilbert_artifacts(&config, out_dir, &file, &trace, &one)?;
                (TraceFile::Hilbert(file), None, status_of(&trace))
            }
            AlgorithmConfig::Ia { eps, iterations } => {
                let input = build_element_input(&config.input, &built, config.space.dim)?;
                let dict = match &built {
                    BuiltDictionary::Explicit(d) => d.clone(),
                    BuiltDictionary::Subspaces(c) => Dictionary::from_subspaces(c.clone()),
                };
                let schedule = eps.build(*iterations)?;
                let trace = run_ia(&input.f, &dict, &schedule, *iterations, input.cert.as_ref())?;
                let file = io::HilbertTraceFile::from_trace(&trace, None);
                let one = WeaknessSequence::constant(1.0)?;
                write_hilbert_artifacts(&config, out_dir, &file, &trace, &one)?;
                (TraceFile::Hilbert(file), None, status_of(&trace))
            }
            AlgorithmConfig::Dga {
                b,
                iterations,
                variant,
                policy,
                ..
            } => {
                let dict = match &built {
                    BuiltDictionary::Explicit(d) => d.clone(),
                    BuiltDictionary::Subspaces(_) => {
                        bail!("dual greedy requires an explicit dictionary")
                    }
                };
                let input = build_element_input(&config.input, &built, config.space.dim)?;
                let tau = tau.as_ref().expect("dga carries a weakness sequence");
                let variant = match variant {
                    DgaVariantConfig::Dga => DgaVariant::Dga,
                    DgaVariantConfig::DgaStar => DgaVariant::DgaStar,
                };
                let policy = match policy {
                    DgaPolicyConfig::GreedyMax => DgaPolicy::GreedyMax,
                    DgaPolicyConfig::RandomSatisfier { seed } => DgaPolicy::RandomSatisfier(*seed),
                };
                let trace = run_dga(
                    &input.f,
                    &dict,
                    tau,
                    *b,
                    config.space.p,
                    *iterations,
                    input.bound,
                    variant,
                    policy,
                )?;
                let verification = config
                    .verify
                    .enabled
                    .then(|| verify_banach_trace(&trace, tau, tol))
                    .transpose()?;
                let file = io::BanachTraceFile::from_trace(
                    &trace,
                    tau_config.as_ref().expect("dga tau config"),
                );
                write_banach_artifacts(&config, out_dir, &file, &trace, tau)?;
                (TraceFile::Banach(file), verification, status_of_banach(&trace))
            }
            AlgorithmConfig::Wrpa {
                iterations, policy, ..
            } => {
                let coll = match &built {
                    BuiltDictionary::Subspaces(c) => c,
                    BuiltDictionary::Explicit(_) => unreachable!("validated in config"),
                };
                let input = build_element_input(&config.input, &built, config.space.dim)?;
                let tau = tau.as_ref().expect("wrpa carries a weakness sequence");
                let trace = run_wrpa(
                    &input.f,
                    coll,
                    tau,
                    *iterations,
                    input.bound,
                    &policy.build(),
                )?;
                let verification = config
                    .verify
                    .enabled
                    .then(|| verify_projection_trace(&trace, tau, tol))
                    .transpose()?;
                let file = io::ProjectionTraceFile::from_trace(&trace, tau_config.as_ref());
                write_projection_artifacts(&config, out_dir, &file, &trace, Some(tau))?;
                (
                    TraceFile::Projection(file),
                    verification,
                    format!("{}", trace.steps.len()),
                )
            }
            AlgorithmConfig::Rp { eps, iterations } => {
                let coll = match &built {
                    BuiltDictionary::Subspaces(c) => c,
                    BuiltDictionary::Explicit(_) => unreachable!("validated in config"),
                };
                let input = build_element_input(&config.input, &built, config.space.dim)?;
                let schedule = eps.build(*iterations)?;
                let trace = run_rp(
                    &input.f,
                    coll,
                    &schedule,
                    *iterations,
                    input.hull_witnesses.as_ref(),
                )?;
                let file = io::ProjectionTraceFile::from_trace(&trace, None);
                write_projection_artifacts(&config, out_dir, &file, &trace, None)?;
                (
                    TraceFile::Projection(file),
                    None,
                    format!("{}", trace.steps.len()),
                )
            }
            AlgorithmConfig::Wtga {
                iterations,
                policy,
                basis,
                ..
            } => {
                let tau = tau.as_ref().expect("wtga carries a weakness sequence");
                let (coefficients, schedule, floor) =
                    if matches!(config.input, InputConfig::Counterexample) {
                        let ce = necessity_counterexample(tau, iterations + 1)?;
                        if let Some(name) = &config.output.report_json {
                            let path = out_dir.join(format!("counterexample_{name}"));
                            io::write_json(&path, &CounterexampleFile::from_counterexample(&ce))?;
                        }
                        (ce.coefficients.clone(), Some(ce.schedule), Some(ce.floor))
                    } else {
                        (build_coefficients(&config.input, base_dir)?, None, None)
                    };
                let model = match basis {
                    BasisConfig::Orthonormal => BasisModel::orthonormal(coefficients.len())?,
                    BasisConfig::Normed { norms } => BasisModel::normed(norms.clone())?,
                };
                let threshold_policy = match (&schedule, policy) {
                    (Some(schedule), _) => ThresholdPolicy::Replay(schedule.clone()),
                    (None, WtgaPolicyConfig::GreedyMax) => ThresholdPolicy::GreedyMax,
                    (None, WtgaPolicyConfig::MinimalSatisfier) => {
                        ThresholdPolicy::MinimalSatisfier
                    }
                };
                let trace = run_wtga(
                    &coefficients,
                    &model,
                    tau,
                    *iterations,
                    &threshold_policy,
                )?;
                let verification = config
                    .verify
                    .enabled
                    .then(|| thresholding_verification(&trace, floor, tol));
                if let Some(floor) = floor {
                    if !quiet {
                        println!("counterexample residual floor: {}", io::fmt_float(floor));
                    }
                }
                let file = io::ThresholdingTraceFile::from_trace(
                    &trace,
                    tau_config.as_ref().expect("wtga tau config"),
                );
                if let Some(name) = &config.output.trace_csv {
                    io::write_thresholding_csv(&out_dir.join(name), &file)?;
                }
                let status = file.status.clone();
                (TraceFile::Thresholding(file), verification, status)
            }
        };

    if let Some(name) = &config.output.trace_json {
        io::write_json(&out_dir.join(name), &trace_file)?;
    }

    let report = verification.as_ref().map(ReportFile::from_verification);
    if let Some(report) = &report {
        if let Some(name) = &config.output.report_json {
            io::write_json(&out_dir.join(name), report)?;
        }
        if let Some(name) = &config.output.summary_csv {
            io::write_report_summary_csv(
                &out_dir.join(name),
                &[(config.algorithm.name().to_string(), ReportFile::from_verification(
                    verification.as_ref().expect("verification present"),
                ))],
            )?;
        }
    }

    let (steps, final_norm) = trace_shape(&trace_file);
    let pass = report.as_ref().map_or(true, |r| r.pass);
    let outcome = RunOutcome {
        pass,
        steps,
        status: extra_status,
        final_residual_norm: final_norm,
        max_violation: report.as_ref().map_or(0.0, max_violation),
        report,
    };
    if !quiet {
        println!(
            "run {}: steps={} status={} final_residual={} verify={}",
            config.algorithm.name(),
            outcome.steps,
            outcome.status,
            io::fmt_float(outcome.final_residual_norm),
            if outcome.pass { "PASS" } else { "FAIL" },
        );
    }
    Ok(outcome)
}

fn status_of(trace: &greedylab_core::hilbert::GreedyTrace) -> String {
    match trace.status {
        greedylab_core::hilbert::TerminalStatus::MaxIters => "max_iters".into(),
        greedylab_core::hilbert::TerminalStatus::ExactZero => "exact_zero".into(),
        greedylab_core::hilbert::TerminalStatus::Stalled => "stalled".into(),
    }
}

fn status_of_banach(trace: &greedylab_core::banach::BanachGreedyTrace) -> String {
    match trace.status {
        greedylab_core::hilbert::TerminalStatus::MaxIters => "max_iters".into(),
        greedylab_core::hilbert::TerminalStatus::ExactZero => "exact_zero".into(),
        greedylab_core::hilbert::TerminalStatus::Stalled => "stalled".into(),
    }
}

fn trace_shape(file: &TraceFile) -> (usize, f64) {
    match file {
        TraceFile::Hilbert(f) => (
            f.steps.len(),
            f.steps.last().map_or(f.f_norm, |s| s.residual_norm),
        ),
        TraceFile::Banach(f) => (
            f.steps.len(),
            f.steps.last().map_or(f.f_norm, |s| s.residual_norm),
        ),
        TraceFile::Projection(f) => (
            f.steps.len(),
            f.steps.last().map_or(f.x0_norm, |s| s.residual_norm),
        ),
        TraceFile::Thresholding(f) => (
            f.steps.len(),
            f.steps.last().map_or(f64::NAN, |s| s.residual_l2),
        ),
    }
}

fn write_hilbert_artifacts(
    config: &ExperimentConfig,
    out_dir: &Path,
    file: &io::HilbertTraceFile,
    trace: &greedylab_core::hilbert::GreedyTrace,
    tau: &WeaknessSequence,
) -> Result<()> {
    if let Some(name) = &config.output.trace_csv {
        let bounds = BoundColumns::for_hilbert(trace, tau)?;
        io::write_hilbert_csv(&out_dir.join(name), file, &bounds)?;
    }
    Ok(())
}

fn write_banach_artifacts(
    config: &ExperimentConfig,
    out_dir: &Path,
    file: &io::BanachTraceFile,
    trace: &greedylab_core::banach::BanachGreedyTrace,
    tau: &WeaknessSequence,
) -> Result<()> {
    if let Some(name) = &config.output.trace_csv {
        let m_max = trace.steps.len();
        let mut product = vec![None; m_max];
        if let Some(b0) = trace.cert_bound {
            if tau.is_nonincreasing(m_max)? {
                for (m, slot) in product.iter_mut().enumerate() {
                    let alpha =
                        greedylab_core::bounds::alpha_max_banach(tau, trace.b, m + 1)?;
                    *slot = Some(greedylab_core::bounds::banach_bound(
                        tau,
                        trace.b,
                        trace.majorant.gamma(),
                        trace.majorant.q(),
                        m + 1,
                        alpha,
                        trace.f_norm,
                        b0,
                    )?);
                }
            }
        }
        io::write_banach_csv(&out_dir.join(name), file, &product)?;
    }
    Ok(())
}

fn write_projection_artifacts(
    config: &ExperimentConfig,
    out_dir: &Path,
    file: &io::ProjectionTraceFile,
    trace: &greedylab_core::projections::ProjectionTrace,
    tau: Option<&WeaknessSequence>,
) -> Result<()> {
    if let Some(name) = &config.output.trace_csv {
        let m_max = trace.steps.len();
        let mut product = vec![None; m_max];
        if let (Some(b0), Some(tau)) = (trace.cert_bound, tau) {
            if tau.is_nonincreasing(m_max)? {
                let mut sum_sq = 0.0;
                for (m, slot) in product.iter_mut().enumerate() {
                    let t = tau.t_at(m + 1)?;
                    sum_sq += t * t;
                    let alpha = t / (t + 2.0);
                    *slot = Some(
                        (1.0 + sum_sq).powf(-alpha / 2.0)
                            * trace.x0_norm.powf(1.0 - alpha)
                            * b0.powf(alpha),
                    );
                }
            }
        }
        io::write_projection_csv(&out_dir.join(name), file, &product)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

#[derive(Debug, serde::Serialize)]
struct SweepRow {
    b: String,
    tau: String,
    seed: u64,
    pass: bool,
    max_violation: f64,
    final_residual: f64,
    status: String,
}

/// Runs the cartesian grid x seeds, aggregating pass rates and the worst
/// bound slack per cell. Individual failures are collected; the sweep keeps
/// going.
pub fn run_sweep(
    sweep: &SweepConfig,
    base_dir: &Path,
    out_dir: &Path,
    workers: Option<usize>,
) -> Result<bool> {
    std::fs::create_dir_all(out_dir)?;
    let b_axis: Vec<Option<f64>> = if sweep.grid.b.is_empty() {
        vec![None]
    } else {
        sweep.grid.b.iter().copied().map(Some).collect()
    };
    let tau_axis: Vec<Option<WeaknessConfig>> = if sweep.grid.tau.is_empty() {
        vec![None]
    } else {
        sweep.grid.tau.iter().cloned().map(Some).collect()
    };

    let mut jobs = Vec::new();
    for b in &b_axis {
        for tau in &tau_axis {
            for seed in 0..sweep.trials as u64 {
                jobs.push((b.clone(), tau.clone(), seed));
            }
        }
    }

    let workers = workers.or(sweep.workers);
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = workers {
            builder = builder.num_threads(n);
        }
        builder.build().context("building worker pool")?
    };

    let base_dir = base_dir.to_path_buf();
    let rows: Vec<SweepRow> = pool.install(|| {
        jobs.par_iter()
            .map(|(b, tau, seed)| {
                let mut config = sweep.base.clone();
                // Sweep runs keep no per-run artifacts.
                config.output = crate::config::OutputConfig {
                    trace_csv: None,
                    trace_json: None,
                    report_json: None,
                    summary_csv: None,
                };
                let outcome = (|| -> Result<RunOutcome> {
                    if let Some(b) = b {
                        config.algorithm.set_b(*b)?;
                    }
                    if let Some(tau) = tau {
                        config.algorithm.set_tau(tau.clone())?;
                    }
                    run_experiment(&config, &base_dir, Path::new("."), Some(*seed), true)
                })();
                let (pass, max_violation, final_residual, status) = match outcome {
                    Ok(outcome) => (
                        outcome.pass,
                        outcome.max_violation,
                        outcome.final_residual_norm,
                        outcome.status,
                    ),
                    Err(e) => (false, f64::NAN, f64::NAN, format!("error: {e:#}")),
                };
                SweepRow {
                    b: b.map(|x| x.to_string()).unwrap_or_default(),
                    tau: tau.as_ref().map(|t| t.label()).unwrap_or_default(),
                    seed: *seed,
                    pass,
                    max_violation,
                    final_residual,
                    status,
                }
            })
            .collect()
    });

    let summary_name = sweep
        .base
        .output
        .summary_csv
        .clone()
        .unwrap_or_else(|| "summary.csv".into());
    let mut w = csv::Writer::from_path(out_dir.join(&summary_name))?;
    w.write_record([
        "b",
        "tau",
        "seed",
        "pass",
        "max_violation",
        "final_residual",
        "status",
    ])?;
    for row in &rows {
        w.write_record([
            row.b.clone(),
            row.tau.clone(),
            row.seed.to_string(),
            row.pass.to_string(),
            io::fmt_float(row.max_violation),
            io::fmt_float(row.final_residual),
            row.status.clone(),
        ])?;
    }
    w.flush()?;

    // Cell aggregates.
    let mut cells_path = out_dir.join(&summary_name);
    cells_path.set_file_name(format!(
        "cells_{}",
        cells_path.file_name().unwrap().to_string_lossy()
    ));
    let mut w = csv::Writer::from_path(&cells_path)?;
    w.write_record(["b", "tau", "trials", "passes", "pass_rate", "max_violation"])?;
    let mut all_pass = true;
    for b in &b_axis {
        for tau in &tau_axis {
            let b_label = b.map(|x| x.to_string()).unwrap_or_default();
            let tau_label = tau.as_ref().map(|t| t.label()).unwrap_or_default();
            let cell: Vec<&SweepRow> = rows
                .iter()
                .filter(|r| r.b == b_label && r.tau == tau_label)
                .collect();
            let passes = cell.iter().filter(|r| r.pass).count();
            let worst = cell
                .iter()
                .map(|r| r.max_violation)
                .fold(f64::NEG_INFINITY, f64::max);
            all_pass &= passes == cell.len();
            println!(
                "cell b={} tau={}: {passes}/{} pass, worst violation {}",
                if b_label.is_empty() { "-" } else { &b_label },
                if tau_label.is_empty() { "-" } else { &tau_label },
                cell.len(),
                io::fmt_float(worst),
            );
            w.write_record([
                b_label,
                tau_label,
                cell.len().to_string(),
                passes.to_string(),
                format!("{:.4}", passes as f64 / cell.len().max(1) as f64),
                io::fmt_float(worst),
            ])?;
        }
    }
    w.flush()?;
    println!(
        "sweep: {} runs, summary {}",
        rows.len(),
        out_dir.join(&summary_name).display()
    );
    Ok(all_pass)
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

pub fn run_diag(
    config: &DiagConfig,
    base_dir: &Path,
    out_dir: &Path,
    horizon_override: Option<usize>,
) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let tau = config.tau.build(base_dir)?;
    let subsequence = config
        .subsequence
        .as_ref()
        .map(|ix| ix.build())
        .transpose()?;
    let horizon = horizon_override.unwrap_or(config.horizon);
    let report = tau.diagnose(subsequence.as_ref(), horizon)?;
    let file = DiagnosticsFile::from_report(&report);

    println!("weakness diagnostics for {} (horizon {})", config.tau.label(), report.horizon);
    println!("  monotone nonincreasing : {}", report.monotone);
    println!("  sum t_k                : {:<22} -> {}", report.sum_t, file.verdicts.sum_t);
    println!("  sum t_k^2              : {:<22} -> {}", report.sum_t_sq, file.verdicts.sum_t_squared);
    println!("  sum t_k / k            : {:<22} -> {}", report.sum_t_over_k, file.verdicts.sum_t_over_k);
    println!("  dyadic block sum       : {:<22} -> {}", report.block_sum, file.verdicts.dyadic_blocks);
    println!("  subsequence sum        : {:<22} -> {}", report.sparse_sum, file.verdicts.sparse_subsequence);
    if let Some(ratio) = report.ratio_bound {
        println!("  sup n_(k+1)/n_k        : {ratio}");
    }

    io::write_json(&out_dir.join("diagnostics.json"), &file)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Trace re-verification
// ---------------------------------------------------------------------------

pub fn run_verify_trace(
    trace_path: &Path,
    out_dir: Option<&Path>,
    tolerance: Option<f64>,
) -> Result<bool> {
    let base_dir = trace_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let file = io::load_trace(trace_path)?;
    let tol = Tolerance {
        absolute: tolerance.unwrap_or(1e-9),
        relative: 1e-12,
    };
    let verification = match &file {
        TraceFile::Hilbert(f) => {
            let trace = f.to_trace()?;
            let tau = match &f.tau {
                Some(t) => t.build(&base_dir)?,
                None => WeaknessSequence::constant(1.0)?,
            };
            verify_hilbert_trace(&trace, &tau, tol)?
        }
        TraceFile::Banach(f) => {
            let trace = f.to_trace()?;
            let tau = f.tau.build(&base_dir)?;
            verify_banach_trace(&trace, &tau, tol)?
        }
        TraceFile::Projection(f) => {
            let trace = f.to_trace()?;
            let tau = match &f.tau {
                Some(t) => t.build(&base_dir)?,
                None => WeaknessSequence::constant(1.0)?,
            };
            verify_projection_trace(&trace, &tau, tol)?
        }
        TraceFile::Thresholding(f) => {
            let trace = f.to_trace()?;
            thresholding_verification(&trace, None, tol)
        }
    };
    let report = ReportFile::from_verification(&verification);
    for row in &report.reports {
        match &row.skipped {
            Some(reason) => println!("  {:<26} SKIP ({reason})", row.name),
            None => println!(
                "  {:<26} {} (max violation {})",
                row.name,
                if row.pass { "PASS" } else { "FAIL" },
                io::fmt_float(row.max_violation),
            ),
        }
    }
    println!("verify-trace: {}", if report.pass { "PASS" } else { "FAIL" });
    if let Some(out_dir) = out_dir {
        std::fs::create_dir_all(out_dir)?;
        io::write_json(&out_dir.join("report.json"), &report)?;
    }
    Ok(report.pass)
}

/// Path of a run artifact for tests.
pub fn artifact(out_dir: &Path, name: &str) -> PathBuf {
    out_dir.join(name)
}
