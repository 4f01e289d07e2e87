//! File formats: dictionary and subspace-collection loaders, coefficient
//! CSVs, trace export (CSV and JSON), verification reports and diagnostics.
//! Floats are serialized with 17 significant digits so identical runs
//! produce byte-identical artifacts.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use greedylab_core::banach::{BanachGreedyTrace, BanachStep, DgaVariant};
use greedylab_core::bounds::{BoundReport, TraceVerification};
use greedylab_core::dict::Dictionary;
use greedylab_core::hilbert::{GreedyStep, GreedyTrace, HilbertKind, TerminalStatus};
use greedylab_core::projections::{ProjectionKind, ProjectionStep, ProjectionTrace, SubspaceCollection};
use greedylab_core::space::Vector;
use greedylab_core::thresholding::{NecessityCounterexample, WtgaStep, WtgaTrace};
use greedylab_core::weakness::{DiagnosticsReport, Verdict, WeaknessSequence};

use crate::config::WeaknessConfig;

/// 17 significant digits: round-trips every f64 exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// Dictionary and subspace files
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct DictionaryFile {
    dim: usize,
    elements: Vec<Vec<f64>>,
    symmetric: bool,
    #[serde(default = "default_p")]
    p: f64,
}

fn default_p() -> f64 {
    2.0
}

/// Loads an explicit dictionary from JSON (`{"dim", "elements",
/// "symmetric"}`) or CSV (one atom per row, exponent taken from the
/// caller); unit norms are validated either way.
pub fn load_dictionary(path: &Path, expected_dim: usize, space_p: f64) -> Result<Dictionary> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or_default();
    let dict = match ext {
        "json" => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading dictionary {}", path.display()))?;
            let file: DictionaryFile = serde_json::from_str(&text)
                .with_context(|| format!("parsing dictionary {}", path.display()))?;
            if file.dim != expected_dim {
                bail!(
                    "dictionary {} has dim {}, space has dim {expected_dim}",
                    path.display(),
                    file.dim
                );
            }
            let vectors: Result<Vec<Vector>, _> =
                file.elements.into_iter().map(Vector::new).collect();
            let dict = Dictionary::explicit_lp(vectors?, file.p, false)?;
            if dict.is_symmetric() != file.symmetric {
                bail!(
                    "dictionary {} declares symmetric = {} but its atoms say otherwise",
                    path.display(),
                    file.symmetric
                );
            }
            dict
        }
        "csv" => {
            let rows = read_csv_rows(path)?;
            let vectors: Result<Vec<Vector>, _> = rows.into_iter().map(Vector::new).collect();
            Dictionary::explicit_lp(vectors?, space_p, false)?
        }
        other => bail!("unsupported dictionary format .{other} (use .json or .csv)"),
    };
    if dict.dim() != expected_dim {
        bail!(
            "dictionary {} has dim {}, space has dim {expected_dim}",
            path.display(),
            dict.dim()
        );
    }
    Ok(dict)
}

#[derive(Debug, Serialize, Deserialize)]
struct SubspaceFile {
    dim: usize,
    subspaces: Vec<SubspaceEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SubspaceEntry {
    perp_basis: Vec<Vec<f64>>,
}

/// Loads a subspace collection (`{"dim", "subspaces": [{"perp_basis":
/// [[..]]}]}`); stored bases must already be orthonormal.
pub fn load_subspaces(path: &Path, expected_dim: usize) -> Result<SubspaceCollection> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading subspace collection {}", path.display()))?;
    let file: SubspaceFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing subspace collection {}", path.display()))?;
    if file.dim != expected_dim {
        bail!(
            "collection {} has dim {}, space has dim {expected_dim}",
            path.display(),
            file.dim
        );
    }
    let bases: Result<Vec<Vec<Vector>>, _> = file
        .subspaces
        .into_iter()
        .map(|s| s.perp_basis.into_iter().map(Vector::new).collect())
        .collect();
    Ok(SubspaceCollection::new(file.dim, bases?)?)
}

/// Writes a subspace collection in the loadable JSON format.
pub fn write_subspaces(path: &Path, coll: &SubspaceCollection) -> Result<()> {
    let file = SubspaceFile {
        dim: coll.dim(),
        subspaces: (0..coll.len())
            .map(|i| {
                Ok(SubspaceEntry {
                    perp_basis: coll
                        .perp_basis(i)?
                        .iter()
                        .map(|v| v.as_slice().to_vec())
                        .collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    write_json(path, &file)
}

fn read_csv_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row: Result<Vec<f64>, _> = record.iter().map(|s| s.trim().parse::<f64>()).collect();
        rows.push(row.with_context(|| format!("parsing numeric row in {}", path.display()))?);
    }
    if rows.is_empty() {
        bail!("{} contains no rows", path.display());
    }
    Ok(rows)
}

/// One value per row.
pub fn read_csv_column(path: &Path) -> Result<Vec<f64>> {
    let rows = read_csv_rows(path)?;
    rows.into_iter()
        .map(|row| match row.as_slice() {
            [x] => Ok(*x),
            other => bail!("expected one value per row, found {}", other.len()),
        })
        .collect()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Trace files
// ---------------------------------------------------------------------------

fn status_str(status: TerminalStatus) -> &'static str {
    match status {
        TerminalStatus::MaxIters => "max_iters",
        TerminalStatus::ExactZero => "exact_zero",
        TerminalStatus::Stalled => "stalled",
    }
}

fn status_from(s: &str) -> Result<TerminalStatus> {
    Ok(match s {
        "max_iters" => TerminalStatus::MaxIters,
        "exact_zero" => TerminalStatus::ExactZero,
        "stalled" => TerminalStatus::Stalled,
        other => bail!("unknown terminal status {other:?}"),
    })
}

/// Self-describing trace file: enough metadata to re-verify the run.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TraceFile {
    Hilbert(HilbertTraceFile),
    Banach(BanachTraceFile),
    Projection(ProjectionTraceFile),
    Thresholding(ThresholdingTraceFile),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HilbertTraceFile {
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<WeaknessConfig>,
    pub f_norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1_bound: Option<f64>,
    pub status: String,
    pub final_residual: Vec<f64>,
    pub steps: Vec<HilbertStepRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HilbertStepRow {
    pub m: usize,
    pub selected: usize,
    pub c_m: f64,
    pub y_m: f64,
    pub a_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_m: Option<f64>,
    pub residual_norm: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BanachTraceFile {
    pub algorithm: String,
    pub variant: String,
    pub p: f64,
    pub q: f64,
    pub gamma: f64,
    pub b: f64,
    pub tau: WeaknessConfig,
    pub f_norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1_bound: Option<f64>,
    pub status: String,
    pub final_residual: Vec<f64>,
    pub steps: Vec<BanachStepRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BanachStepRow {
    pub m: usize,
    pub selected: usize,
    pub c_m: f64,
    pub r_value: f64,
    pub f_phi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_m: Option<f64>,
    pub residual_norm: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProjectionTraceFile {
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<WeaknessConfig>,
    pub x0_norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1_bound: Option<f64>,
    pub status: String,
    pub final_residual: Vec<f64>,
    pub steps: Vec<ProjectionStepRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProjectionStepRow {
    pub m: usize,
    pub subspace: usize,
    pub dist: f64,
    pub residual_norm: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ThresholdingTraceFile {
    pub algorithm: String,
    pub tau: WeaknessConfig,
    pub status: String,
    pub steps: Vec<ThresholdingStepRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ThresholdingStepRow {
    pub m: usize,
    pub selected: usize,
    pub c_m: f64,
    pub threshold: f64,
    pub residual_l2: f64,
    pub weighted_l1: f64,
    pub max_remaining: f64,
    pub l1_remaining: f64,
}

fn hilbert_algorithm_name(kind: HilbertKind) -> &'static str {
    match kind {
        HilbertKind::Wga { .. } => "wga",
        HilbertKind::Twga { .. } => "twga",
        HilbertKind::Woga => "woga",
        HilbertKind::Wgafr => "wgafr",
        HilbertKind::Rga => "rga",
        HilbertKind::Ia => "ia",
    }
}

impl HilbertTraceFile {
    pub fn from_trace(trace: &GreedyTrace, tau: Option<&WeaknessConfig>) -> Self {
        let b = match trace.kind {
            HilbertKind::Wga { b } | HilbertKind::Twga { b } => Some(b),
            _ => None,
        };
        HilbertTraceFile {
            algorithm: hilbert_algorithm_name(trace.kind).to_string(),
            b,
            tau: tau.cloned(),
            f_norm: trace.f_norm,
            a1_bound: trace.cert_bound,
            status: status_str(trace.status).to_string(),
            final_residual: trace.final_residual.as_slice().to_vec(),
            steps: trace
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| HilbertStepRow {
                    m: i + 1,
                    selected: s.index,
                    c_m: s.coefficient,
                    y_m: s.y,
                    a_m: s.a,
                    b_m: s.bound_ledger,
                    residual_norm: s.residual_norm,
                })
                .collect(),
        }
    }

    pub fn to_trace(&self) -> Result<GreedyTrace> {
        let kind = match (self.algorithm.as_str(), self.b) {
            ("wga", Some(b)) => HilbertKind::Wga { b },
            ("twga", Some(b)) => HilbertKind::Twga { b },
            ("woga", _) => HilbertKind::Woga,
            ("wgafr", _) => HilbertKind::Wgafr,
            ("rga", _) => HilbertKind::Rga,
            ("ia", _) => HilbertKind::Ia,
            (other, b) => bail!("unknown algorithm {other:?} (b = {b:?})"),
        };
        Ok(GreedyTrace {
            kind,
            f_norm: self.f_norm,
            cert_bound: self.a1_bound,
            steps: self
                .steps
                .iter()
                .map(|row| GreedyStep {
                    index: row.selected,
                    coefficient: row.c_m,
                    y: row.y_m,
                    a: row.a_m,
                    residual_norm: row.residual_norm,
                    bound_ledger: row.b_m,
                })
                .collect(),
            status: status_from(&self.status)?,
            final_residual: Vector::new(self.final_residual.clone())?,
        })
    }
}

impl BanachTraceFile {
    pub fn from_trace(trace: &BanachGreedyTrace, tau: &WeaknessConfig) -> Self {
        BanachTraceFile {
            algorithm: "dga".to_string(),
            variant: match trace.variant {
                DgaVariant::Dga => "dga".to_string(),
                DgaVariant::DgaStar => "dga_star".to_string(),
            },
            p: trace.p,
            q: trace.majorant.q(),
            gamma: trace.majorant.gamma(),
            b: trace.b,
            tau: tau.clone(),
            f_norm: trace.f_norm,
            a1_bound: trace.cert_bound,
            status: status_str(trace.status).to_string(),
            final_residual: trace.final_residual.as_slice().to_vec(),
            steps: trace
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| BanachStepRow {
                    m: i + 1,
                    selected: s.index,
                    c_m: s.coefficient,
                    r_value: s.r_value,
                    f_phi: s.functional_value,
                    b_m: s.bound_ledger,
                    residual_norm: s.residual_norm,
                })
                .collect(),
        }
    }

    pub fn to_trace(&self) -> Result<BanachGreedyTrace> {
        let variant = match self.variant.as_str() {
            "dga" => DgaVariant::Dga,
            "dga_star" => DgaVariant::DgaStar,
            other => bail!("unknown dual greedy variant {other:?}"),
        };
        let majorant = greedylab_core::space::SmoothnessMajorant::new(self.q, self.gamma)?;
        Ok(BanachGreedyTrace {
            p: self.p,
            majorant,
            b: self.b,
            variant,
            f_norm: self.f_norm,
            cert_bound: self.a1_bound,
            steps: self
                .steps
                .iter()
                .map(|row| BanachStep {
                    index: row.selected,
                    coefficient: row.c_m,
                    residual_norm: row.residual_norm,
                    r_value: row.r_value,
                    functional_value: row.f_phi,
                    bound_ledger: row.b_m,
                })
                .collect(),
            status: status_from(&self.status)?,
            final_residual: Vector::new(self.final_residual.clone())?,
        })
    }
}

impl ProjectionTraceFile {
    pub fn from_trace(trace: &ProjectionTrace, tau: Option<&WeaknessConfig>) -> Self {
        ProjectionTraceFile {
            algorithm: match trace.kind {
                ProjectionKind::Wrpa => "wrpa".to_string(),
                ProjectionKind::RpSchedule => "rp".to_string(),
            },
            tau: tau.cloned(),
            x0_norm: trace.x0_norm,
            a1_bound: trace.cert_bound,
            status: status_str(trace.status).to_string(),
            final_residual: trace.final_residual.as_slice().to_vec(),
            steps: trace
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| ProjectionStepRow {
                    m: i + 1,
                    subspace: s.subspace,
                    dist: s.dist,
                    residual_norm: s.residual_norm,
                })
                .collect(),
        }
    }

    pub fn to_trace(&self) -> Result<ProjectionTrace> {
        let kind = match self.algorithm.as_str() {
            "wrpa" => ProjectionKind::Wrpa,
            "rp" => ProjectionKind::RpSchedule,
            other => bail!("unknown projection algorithm {other:?}"),
        };
        Ok(ProjectionTrace {
            kind,
            x0_norm: self.x0_norm,
            cert_bound: self.a1_bound,
            steps: self
                .steps
                .iter()
                .map(|row| ProjectionStep {
                    subspace: row.subspace,
                    dist: row.dist,
                    residual_norm: row.residual_norm,
                })
                .collect(),
            status: status_from(&self.status)?,
            final_residual: Vector::new(self.final_residual.clone())?,
        })
    }
}

impl ThresholdingTraceFile {
    pub fn from_trace(trace: &WtgaTrace, tau: &WeaknessConfig) -> Self {
        ThresholdingTraceFile {
            algorithm: "wtga".to_string(),
            tau: tau.clone(),
            status: status_str(trace.status).to_string(),
            steps: trace
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| ThresholdingStepRow {
                    m: i + 1,
                    selected: s.index,
                    c_m: s.coefficient,
                    threshold: s.threshold,
                    residual_l2: s.residual_l2,
                    weighted_l1: s.residual_weighted_l1,
                    max_remaining: s.max_remaining,
                    l1_remaining: s.l1_remaining,
                })
                .collect(),
        }
    }

    pub fn to_trace(&self) -> Result<WtgaTrace> {
        Ok(WtgaTrace {
            steps: self
                .steps
                .iter()
                .map(|row| WtgaStep {
                    index: row.selected,
                    coefficient: row.c_m,
                    threshold: row.threshold,
                    residual_l2: row.residual_l2,
                    residual_weighted_l1: row.weighted_l1,
                    max_remaining: row.max_remaining,
                    l1_remaining: row.l1_remaining,
                })
                .collect(),
            status: status_from(&self.status)?,
        })
    }
}

pub fn load_trace(path: &Path) -> Result<TraceFile> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading trace {}", path.display()))?;
    Ok(serde_json::from_str(&text).with_context(|| format!("parsing trace {}", path.display()))?)
}

// ---------------------------------------------------------------------------
// Trace CSV export
// ---------------------------------------------------------------------------

/// Per-step bound columns for the CSV export; entries are `None` where a
/// bound's hypotheses do not apply.
pub struct BoundColumns {
    pub envelope: Vec<Option<f64>>,
    pub product: Vec<Option<f64>>,
}

impl BoundColumns {
    pub fn empty(len: usize) -> Self {
        BoundColumns {
            envelope: vec![None; len],
            product: vec![None; len],
        }
    }

    /// Envelope and product columns for a WGA/TWGA trace with a certificate
    /// and a nonincreasing weakness sequence.
    pub fn for_hilbert(trace: &GreedyTrace, tau: &WeaknessSequence) -> Result<Self> {
        let m_max = trace.steps.len();
        let b = match trace.kind {
            HilbertKind::Wga { b } | HilbertKind::Twga { b } => b,
            _ => return Ok(Self::empty(m_max)),
        };
        let b0 = match trace.cert_bound {
            Some(b0) => b0,
            None => return Ok(Self::empty(m_max)),
        };
        if !tau.is_nonincreasing(m_max)? {
            return Ok(Self::empty(m_max));
        }
        let envelopes = greedylab_core::bounds::e_m_all(tau, b, m_max.max(1))?;
        let mut envelope = Vec::with_capacity(m_max);
        let mut product = Vec::with_capacity(m_max);
        for m in 1..=m_max {
            envelope.push(Some(envelopes[m - 1] * b0));
            let alpha = greedylab_core::bounds::alpha_max_hilbert(tau, b, m)?;
            product.push(Some(greedylab_core::bounds::product_bound_hilbert(
                tau,
                b,
                m,
                alpha,
                trace.f_norm,
                b0,
            )?));
        }
        Ok(BoundColumns { envelope, product })
    }
}

pub fn write_hilbert_csv(path: &Path, file: &HilbertTraceFile, bounds: &BoundColumns) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "m",
        "selected",
        "c_m",
        "y_m",
        "a_m",
        "B_m",
        "residual_norm",
        "bound_e_m",
        "bound_product",
    ])?;
    for (i, s) in file.steps.iter().enumerate() {
        w.write_record([
            s.m.to_string(),
            s.selected.to_string(),
            fmt_float(s.c_m),
            fmt_float(s.y_m),
            fmt_float(s.a_m),
            fmt_opt(s.b_m),
            fmt_float(s.residual_norm),
            fmt_opt(bounds.envelope.get(i).copied().flatten()),
            fmt_opt(bounds.product.get(i).copied().flatten()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_banach_csv(path: &Path, file: &BanachTraceFile, product: &[Option<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "m",
        "selected",
        "c_m",
        "r_value",
        "F_phi",
        "B_m",
        "residual_norm",
        "p",
        "q",
        "gamma",
        "bound_product",
    ])?;
    for (i, s) in file.steps.iter().enumerate() {
        w.write_record([
            s.m.to_string(),
            s.selected.to_string(),
            fmt_float(s.c_m),
            fmt_float(s.r_value),
            fmt_float(s.f_phi),
            fmt_opt(s.b_m),
            fmt_float(s.residual_norm),
            fmt_float(file.p),
            fmt_float(file.q),
            fmt_float(file.gamma),
            fmt_opt(product.get(i).copied().flatten()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_projection_csv(
    path: &Path,
    file: &ProjectionTraceFile,
    product: &[Option<f64>],
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["m", "subspace", "dist", "residual_norm", "bound_product"])?;
    for (i, s) in file.steps.iter().enumerate() {
        w.write_record([
            s.m.to_string(),
            s.subspace.to_string(),
            fmt_float(s.dist),
            fmt_float(s.residual_norm),
            fmt_opt(product.get(i).copied().flatten()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_thresholding_csv(path: &Path, file: &ThresholdingTraceFile) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "m",
        "selected",
        "c_m",
        "threshold",
        "residual_l2",
        "weighted_l1",
        "max_remaining",
        "l1_remaining",
    ])?;
    for s in &file.steps {
        w.write_record([
            s.m.to_string(),
            s.selected.to_string(),
            fmt_float(s.c_m),
            fmt_float(s.threshold),
            fmt_float(s.residual_l2),
            fmt_float(s.weighted_l1),
            fmt_float(s.max_remaining),
            fmt_float(s.l1_remaining),
        ])?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Verification reports and diagnostics
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub pass: bool,
    pub reports: Vec<BoundReportRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BoundReportRow {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub pass: bool,
    pub max_violation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub tolerance_absolute: f64,
    pub tolerance_relative: f64,
    pub per_step: Vec<BoundSampleRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BoundSampleRow {
    pub m: usize,
    pub measured: f64,
    pub bound: f64,
}

impl ReportFile {
    pub fn from_verification(v: &TraceVerification) -> Self {
        ReportFile {
            pass: v.pass,
            reports: v.reports.iter().map(BoundReportRow::from_report).collect(),
        }
    }
}

impl BoundReportRow {
    fn from_report(r: &BoundReport) -> Self {
        BoundReportRow {
            name: r.name.to_string(),
            alpha: r.alpha,
            pass: r.pass,
            max_violation: r.max_violation,
            skipped: r.skipped.clone(),
            tolerance_absolute: r.tolerance.absolute,
            tolerance_relative: r.tolerance.relative,
            per_step: r
                .per_step
                .iter()
                .map(|s| BoundSampleRow {
                    m: s.m,
                    measured: s.measured,
                    bound: s.bound,
                })
                .collect(),
        }
    }
}

/// One row per bound per run.
pub fn write_report_summary_csv(path: &Path, runs: &[(String, ReportFile)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["run", "bound", "pass", "max_violation", "skipped"])?;
    for (run, report) in runs {
        for row in &report.reports {
            w.write_record([
                run.clone(),
                row.name.clone(),
                row.pass.to_string(),
                fmt_float(row.max_violation),
                row.skipped.clone().unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DiagnosticsFile {
    pub horizon: usize,
    pub sum_t: f64,
    pub sum_t_sq: f64,
    pub sum_t_over_k: f64,
    pub block_sum: f64,
    pub sparse_sum: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_bound: Option<f64>,
    pub monotone: bool,
    pub verdicts: VerdictsFile,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerdictsFile {
    pub sum_t: String,
    pub sum_t_squared: String,
    pub sum_t_over_k: String,
    pub dyadic_blocks: String,
    pub sparse_subsequence: String,
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Diverges => "diverges",
        Verdict::Converges => "converges",
        Verdict::Inconclusive => "inconclusive",
    }
}

impl DiagnosticsFile {
    pub fn from_report(r: &DiagnosticsReport) -> Self {
        DiagnosticsFile {
            horizon: r.horizon,
            sum_t: r.sum_t,
            sum_t_sq: r.sum_t_sq,
            sum_t_over_k: r.sum_t_over_k,
            block_sum: r.block_sum,
            sparse_sum: r.sparse_sum,
            ratio_bound: r.ratio_bound,
            monotone: r.monotone,
            verdicts: VerdictsFile {
                sum_t: verdict_str(r.verdicts.sum_t).to_string(),
                sum_t_squared: verdict_str(r.verdicts.sum_t_squared).to_string(),
                sum_t_over_k: verdict_str(r.verdicts.sum_t_over_k).to_string(),
                dyadic_blocks: verdict_str(r.verdicts.dyadic_blocks).to_string(),
                sparse_subsequence: verdict_str(r.verdicts.sparse_subsequence).to_string(),
            },
        }
    }
}

/// Counterexample emitter: `(c*, schedule, floor)` plus the truncation sum.
#[derive(Debug, Serialize, Deserialize)]
pub struct CounterexampleFile {
    pub coefficients: Vec<f64>,
    pub schedule: Vec<usize>,
    pub floor: f64,
    pub truncated_sum: f64,
}

impl CounterexampleFile {
    pub fn from_counterexample(ce: &NecessityCounterexample) -> Self {
        CounterexampleFile {
            coefficients: ce.coefficients.clone(),
            schedule: ce.schedule.clone(),
            floor: ce.floor,
            truncated_sum: ce.truncated_sum,
        }
    }
}
