//! Experiment configuration: a single JSON document with explicit seeds
//! everywhere randomness enters, so every run is reproducible byte for byte.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use greedylab_core::weakness::{IndexSequence, WeaknessSequence};

/// Ambient space of a run: dimension and the norm exponent (2 = Hilbert).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceConfig {
    pub dim: usize,
    #[serde(default = "default_p")]
    pub p: f64,
}

fn default_p() -> f64 {
    2.0
}

/// Weakness sequence config fragment, e.g. `{"family":"power","theta":0.5}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeaknessConfig {
    Constant { t: f64 },
    Power { theta: f64 },
    Sparse { indices: IndexConfig, t: f64 },
    Explicit { values: Vec<f64> },
    /// Explicit list loaded from a one-value-per-row CSV file.
    Csv { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexConfig {
    Geometric { base: u64 },
    Polynomial { degree: u32 },
    Explicit { values: Vec<u64> },
}

impl IndexConfig {
    pub fn build(&self) -> Result<IndexSequence> {
        Ok(match self {
            IndexConfig::Geometric { base } => IndexSequence::geometric(*base)?,
            IndexConfig::Polynomial { degree } => IndexSequence::polynomial(*degree)?,
            IndexConfig::Explicit { values } => IndexSequence::explicit(values.clone())?,
        })
    }
}

impl WeaknessConfig {
    /// Builds the core sequence; `base_dir` anchors relative CSV paths.
    pub fn build(&self, base_dir: &Path) -> Result<WeaknessSequence> {
        Ok(match self {
            WeaknessConfig::Constant { t } => WeaknessSequence::constant(*t)?,
            WeaknessConfig::Power { theta } => WeaknessSequence::power(*theta)?,
            WeaknessConfig::Sparse { indices, t } => {
                WeaknessSequence::sparse(indices.build()?, *t)?
            }
            WeaknessConfig::Explicit { values } => WeaknessSequence::explicit(values.clone())?,
            WeaknessConfig::Csv { path } => {
                let resolved = resolve(base_dir, path);
                let values = crate::io::read_csv_column(&resolved)
                    .with_context(|| format!("weakness CSV {}", resolved.display()))?;
                WeaknessSequence::explicit(values)?
            }
        })
    }

    /// Compact human-readable label for summary rows.
    pub fn label(&self) -> String {
        match self {
            WeaknessConfig::Constant { t } => format!("constant({t})"),
            WeaknessConfig::Power { theta } => format!("power({theta})"),
            WeaknessConfig::Sparse { indices, t } => {
                let ix = match indices {
                    IndexConfig::Geometric { base } => format!("geometric({base})"),
                    IndexConfig::Polynomial { degree } => format!("k^{degree}"),
                    IndexConfig::Explicit { values } => format!("explicit(len={})", values.len()),
                };
                format!("sparse({ix},t={t})")
            }
            WeaknessConfig::Explicit { values } => format!("explicit(len={})", values.len()),
            WeaknessConfig::Csv { path } => format!("csv({})", path.display()),
        }
    }
}

/// Dictionary source.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DictionaryConfig {
    /// Standard coordinate basis of the space.
    Orthonormal {
        #[serde(default)]
        symmetrize: bool,
    },
    /// Seeded unit-norm atoms (normalized in the space's own `p`).
    RandomUnit {
        count: usize,
        seed: u64,
        #[serde(default)]
        symmetrize: bool,
    },
    /// JSON (`{"dim", "elements", "symmetric"}`) or CSV (one atom per row),
    /// by file extension.
    File { path: PathBuf },
    /// Subspace collection file
    /// (`{"dim", "subspaces": [{"perp_basis": [[..]]}]}`).
    SubspaceFile { path: PathBuf },
    /// Seeded random subspace collection with the given codimension.
    RandomSubspaces {
        count: usize,
        codim: usize,
        seed: u64,
    },
}

/// Input element source.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputConfig {
    /// Synthesized from dictionary atoms with an exact certificate.
    Coefficients { indices: Vec<usize>, values: Vec<f64> },
    /// Seeded signed convex combination over `terms` distinct atoms with
    /// `sum |c| = 1` (certificate bound 1).
    RandomConvex { terms: usize, seed: u64 },
    /// As above with nonnegative weights (inputs for the incremental
    /// algorithm and schedule-driven projections).
    RandomConvexNonneg { terms: usize, seed: u64 },
    /// Raw coordinates, no certificate.
    Vector { coords: Vec<f64> },
    /// Thresholding input: the coefficient sequence itself.
    CoefficientList { values: Vec<f64> },
    /// Thresholding input from a one-value-per-row CSV file.
    CoefficientCsv { path: PathBuf },
    /// Seeded coefficients with `||c||_1 = 1`.
    RandomL1 { count: usize, seed: u64 },
    /// The adversarial non-convergence construction for the run's weakness
    /// sequence (thresholding only).
    Counterexample,
}

/// Basis regime for thresholding runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BasisConfig {
    Orthonormal,
    Normed { norms: Vec<f64> },
}

impl Default for BasisConfig {
    fn default() -> Self {
        BasisConfig::Orthonormal
    }
}

/// Zero-threshold selection rule.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ZeroStepConfig {
    #[default]
    GreedyMax,
    Fixed {
        index: usize,
    },
    SeededRandom {
        seed: u64,
    },
}

/// Selection policy for the Hilbert-side algorithms.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PolicyConfig {
    /// Prescribed selection list; greedy argmax when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay: Option<Vec<usize>>,
    /// Validate replayed selections against the weak threshold.
    #[serde(default = "default_true")]
    pub enforce_replay: bool,
    #[serde(default)]
    pub zero_step: ZeroStepConfig,
}

fn default_true() -> bool {
    true
}

impl PolicyConfig {
    pub fn build(&self) -> greedylab_core::hilbert::SelectionPolicy {
        use greedylab_core::hilbert::{SelectionMode, SelectionPolicy, ZeroStepRule};
        let mode = match &self.replay {
            Some(indices) => SelectionMode::Replay {
                indices: indices.clone(),
                enforce: self.enforce_replay,
            },
            None => SelectionMode::GreedyMax,
        };
        let zero_step = match self.zero_step {
            ZeroStepConfig::GreedyMax => ZeroStepRule::GreedyMax,
            ZeroStepConfig::Fixed { index } => ZeroStepRule::Fixed(index),
            ZeroStepConfig::SeededRandom { seed } => ZeroStepRule::SeededRandom(seed),
        };
        SelectionPolicy { mode, zero_step }
    }
}

/// Epsilon schedule for the incremental algorithm and schedule-driven
/// projections.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EpsConfig {
    /// `eps_m = 1/m`.
    InverseM,
    Constant { value: f64 },
    Explicit { values: Vec<f64> },
}

impl EpsConfig {
    pub fn build(&self, iterations: usize) -> Result<Vec<f64>> {
        let values = match self {
            EpsConfig::InverseM => (1..=iterations).map(|m| 1.0 / m as f64).collect(),
            EpsConfig::Constant { value } => vec![*value; iterations],
            EpsConfig::Explicit { values } => values.clone(),
        };
        if values.len() < iterations {
            bail!(
                "epsilon schedule has {} entries for {} iterations",
                values.len(),
                iterations
            );
        }
        Ok(values)
    }
}

/// Thresholding selection policy.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WtgaPolicyConfig {
    #[default]
    GreedyMax,
    MinimalSatisfier,
}

/// Dual-greedy step-size variant.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DgaVariantConfig {
    #[default]
    Dga,
    DgaStar,
}

/// Dual-greedy selection policy.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum DgaPolicyConfig {
    #[default]
    GreedyMax,
    RandomSatisfier {
        seed: u64,
    },
}

/// Algorithm selection with its parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum AlgorithmConfig {
    Wga {
        tau: WeaknessConfig,
        b: f64,
        iterations: usize,
        #[serde(default)]
        policy: PolicyConfig,
    },
    Twga {
        tau: WeaknessConfig,
        b: f64,
        iterations: usize,
        #[serde(default)]
        policy: PolicyConfig,
    },
    Woga {
        tau: WeaknessConfig,
        iterations: usize,
        #[serde(default)]
        policy: PolicyConfig,
    },
    Wgafr {
        tau: WeaknessConfig,
        iterations: usize,
        #[serde(default)]
        policy: PolicyConfig,
    },
    Rga {
        iterations: usize,
    },
    Ia {
        eps: EpsConfig,
        iterations: usize,
    },
    Dga {
        tau: WeaknessConfig,
        b: f64,
        iterations: usize,
        #[serde(default)]
        variant: DgaVariantConfig,
        #[serde(default)]
        policy: DgaPolicyConfig,
    },
    Wtga {
        tau: WeaknessConfig,
        iterations: usize,
        #[serde(default)]
        policy: WtgaPolicyConfig,
        #[serde(default)]
        basis: BasisConfig,
    },
    Wrpa {
        tau: WeaknessConfig,
        iterations: usize,
        #[serde(default)]
        policy: PolicyConfig,
    },
    Rp {
        eps: EpsConfig,
        iterations: usize,
    },
}

impl AlgorithmConfig {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmConfig::Wga { .. } => "wga",
            AlgorithmConfig::Twga { .. } => "twga",
            AlgorithmConfig::Woga { .. } => "woga",
            AlgorithmConfig::Wgafr { .. } => "wgafr",
            AlgorithmConfig::Rga { .. } => "rga",
            AlgorithmConfig::Ia { .. } => "ia",
            AlgorithmConfig::Dga { .. } => "dga",
            AlgorithmConfig::Wtga { .. } => "wtga",
            AlgorithmConfig::Wrpa { .. } => "wrpa",
            AlgorithmConfig::Rp { .. } => "rp",
        }
    }

    pub fn tau(&self) -> Option<&WeaknessConfig> {
        match self {
            AlgorithmConfig::Wga { tau, .. }
            | AlgorithmConfig::Twga { tau, .. }
            | AlgorithmConfig::Woga { tau, .. }
            | AlgorithmConfig::Wgafr { tau, .. }
            | AlgorithmConfig::Dga { tau, .. }
            | AlgorithmConfig::Wtga { tau, .. }
            | AlgorithmConfig::Wrpa { tau, .. } => Some(tau),
            _ => None,
        }
    }

    pub fn set_tau(&mut self, new: WeaknessConfig) -> Result<()> {
        match self {
            AlgorithmConfig::Wga { tau, .. }
            | AlgorithmConfig::Twga { tau, .. }
            | AlgorithmConfig::Woga { tau, .. }
            | AlgorithmConfig::Wgafr { tau, .. }
            | AlgorithmConfig::Dga { tau, .. }
            | AlgorithmConfig::Wtga { tau, .. }
            | AlgorithmConfig::Wrpa { tau, .. } => {
                *tau = new;
                Ok(())
            }
            _ => bail!("algorithm {} has no weakness sequence", self.name()),
        }
    }

    pub fn set_b(&mut self, new: f64) -> Result<()> {
        match self {
            AlgorithmConfig::Wga { b, .. }
            | AlgorithmConfig::Twga { b, .. }
            | AlgorithmConfig::Dga { b, .. } => {
                *b = new;
                Ok(())
            }
            _ => bail!("algorithm {} has no relaxation parameter b", self.name()),
        }
    }
}

/// Verification toggles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyConfig {
    #[serde(default = "default_true")]
    pub enabled: bool,
    #[serde(default = "default_abs_tol")]
    pub tolerance_absolute: f64,
    #[serde(default = "default_rel_tol")]
    pub tolerance_relative: f64,
}

fn default_abs_tol() -> f64 {
    1e-9
}

fn default_rel_tol() -> f64 {
    1e-12
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            enabled: true,
            tolerance_absolute: default_abs_tol(),
            tolerance_relative: default_rel_tol(),
        }
    }
}

impl VerifyConfig {
    pub fn tolerance(&self) -> greedylab_core::bounds::Tolerance {
        greedylab_core::bounds::Tolerance {
            absolute: self.tolerance_absolute,
            relative: self.tolerance_relative,
        }
    }
}

/// Output file names, resolved against the `--out` directory. `None`
/// disables the artifact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputConfig {
    #[serde(default = "default_trace_csv")]
    pub trace_csv: Option<String>,
    #[serde(default = "default_trace_json")]
    pub trace_json: Option<String>,
    #[serde(default = "default_report_json")]
    pub report_json: Option<String>,
    #[serde(default = "default_summary_csv")]
    pub summary_csv: Option<String>,
}

fn default_trace_csv() -> Option<String> {
    Some("trace.csv".into())
}

fn default_trace_json() -> Option<String> {
    Some("trace.json".into())
}

fn default_report_json() -> Option<String> {
    Some("report.json".into())
}

fn default_summary_csv() -> Option<String> {
    Some("summary.csv".into())
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            trace_csv: default_trace_csv(),
            trace_json: default_trace_json(),
            report_json: default_report_json(),
            summary_csv: default_summary_csv(),
        }
    }
}

/// One experiment: space, dictionary, input, algorithm, verification and
/// outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub space: SpaceConfig,
    pub dictionary: DictionaryConfig,
    pub input: InputConfig,
    pub algorithm: AlgorithmConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        config.validate(path.parent().unwrap_or(Path::new(".")))?;
        Ok(config)
    }

    /// Structural validation beyond deserialization: referenced files must
    /// exist and the algorithm must be compatible with the dictionary and
    /// input kinds.
    pub fn validate(&self, base_dir: &Path) -> Result<()> {
        if self.space.dim == 0 {
            bail!("space.dim: must be positive");
        }
        for path in self.referenced_files() {
            let resolved = resolve(base_dir, &path);
            if !resolved.exists() {
                bail!("referenced file does not exist: {}", resolved.display());
            }
        }
        let wants_subspaces = matches!(
            self.algorithm,
            AlgorithmConfig::Wrpa { .. } | AlgorithmConfig::Rp { .. }
        );
        let has_subspaces = matches!(
            self.dictionary,
            DictionaryConfig::SubspaceFile { .. } | DictionaryConfig::RandomSubspaces { .. }
        );
        if wants_subspaces && !has_subspaces {
            bail!(
                "algorithm.name: {} requires a subspace dictionary (dictionary.kind = subspace_file | random_subspaces)",
                self.algorithm.name()
            );
        }
        let coefficient_input = matches!(
            self.input,
            InputConfig::CoefficientList { .. }
                | InputConfig::CoefficientCsv { .. }
                | InputConfig::RandomL1 { .. }
                | InputConfig::Counterexample
        );
        let is_wtga = matches!(self.algorithm, AlgorithmConfig::Wtga { .. });
        if is_wtga != coefficient_input {
            bail!(
                "input.kind: thresholding runs take coefficient inputs (coefficient_list | coefficient_csv | random_l1 | counterexample) and other algorithms take element inputs"
            );
        }
        if let AlgorithmConfig::Dga { b, .. } = self.algorithm {
            if !(b > 0.0 && b < 1.0) {
                bail!("algorithm.b: dual greedy requires b in (0, 1), got {b}");
            }
            if !(self.space.p > 1.0 && self.space.p < f64::INFINITY) {
                bail!(
                    "space.p: dual greedy requires 1 < p < infinity, got {}",
                    self.space.p
                );
            }
        }
        Ok(())
    }

    fn referenced_files(&self) -> Vec<PathBuf> {
        let mut files = Vec::new();
        match &self.dictionary {
            DictionaryConfig::File { path } | DictionaryConfig::SubspaceFile { path } => {
                files.push(path.clone())
            }
            _ => {}
        }
        if let InputConfig::CoefficientCsv { path } = &self.input {
            files.push(path.clone());
        }
        if let Some(WeaknessConfig::Csv { path }) = self.algorithm.tau() {
            files.push(path.clone());
        }
        files
    }

    /// Replaces every generator seed by `seed` (files and explicit inputs
    /// are unaffected).
    pub fn override_seed(&mut self, seed: u64) {
        match &mut self.dictionary {
            DictionaryConfig::RandomUnit { seed: s, .. }
            | DictionaryConfig::RandomSubspaces { seed: s, .. } => *s = seed,
            _ => {}
        }
        match &mut self.input {
            InputConfig::RandomConvex { seed: s, .. }
            | InputConfig::RandomConvexNonneg { seed: s, .. }
            | InputConfig::RandomL1 { seed: s, .. } => *s = seed,
            _ => {}
        }
    }
}

/// Parameter grid for sweeps: the cartesian product of the supplied axes,
/// each cell run for `trials` seeds (`0..trials`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub base: ExperimentConfig,
    #[serde(default)]
    pub grid: GridConfig,
    pub trials: usize,
    #[serde(default)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(default)]
    pub b: Vec<f64>,
    #[serde(default)]
    pub tau: Vec<WeaknessConfig>,
}

impl SweepConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading sweep config {}", path.display()))?;
        let config: SweepConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing sweep config {}", path.display()))?;
        if config.trials == 0 {
            bail!("trials: must be positive");
        }
        if config.grid.b.is_empty() && config.grid.tau.is_empty() {
            bail!("grid: at least one axis (b, tau) must be nonempty");
        }
        config
            .base
            .validate(path.parent().unwrap_or(Path::new(".")))?;
        Ok(config)
    }
}

/// Diagnostics request: a weakness fragment, an optional subsequence for
/// the sparse-subsequence criterion, and the horizon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagConfig {
    pub tau: WeaknessConfig,
    #[serde(default)]
    pub subsequence: Option<IndexConfig>,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
}

fn default_horizon() -> usize {
    10_000
}

impl DiagConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading diagnostics config {}", path.display()))?;
        Ok(serde_json::from_str(&text)
            .with_context(|| format!("parsing diagnostics config {}", path.display()))?)
    }
}

pub fn resolve(base_dir: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base_dir.join(path)
    }
}
