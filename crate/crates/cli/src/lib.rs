//! Library half of the `circumfeas` command: scenario runs, seeded sweeps
//! and SVG plots, each writing plain files into an output directory.

use std::path::{Path, PathBuf};

use circumfeas::{IterationTrace, Scenario, Termination};
use serde::{Deserialize, Serialize};

pub mod plot;
pub mod run;
pub mod sweep;

pub use plot::{cmd_plot, PlotStyle};
pub use run::{cmd_run, RunOptions};
pub use sweep::{cmd_sweep, SweepOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Crm,
    #[value(name = "crm_product", alias = "crm-product")]
    CrmProduct,
    Map,
    Dr,
    Srm,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Crm => "crm",
            Method::CrmProduct => "crm_product",
            Method::Map => "map",
            Method::Dr => "dr",
            Method::Srm => "srm",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] circumfeas::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Json { path: PathBuf, message: String },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "Io",
            CliError::Json { .. } => "Json",
        }
    }

    /// The machine-readable record printed on standard error.
    pub fn record(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// The run met its expectation (or was feasible when none was given).
    Ok,
    /// The run contradicted the scenario's expectation.
    ExpectationViolated,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::ExpectationViolated => 1,
        }
    }
}

pub const EXIT_ERROR: i32 = 2;

/// Contents of `trace.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    pub scenario: Scenario,
    pub method: Method,
    pub start_index: usize,
    pub trace: IterationTrace,
}

impl TraceFile {
    pub fn from_json(text: &str) -> circumfeas::Result<Self> {
        let t: TraceFile =
            serde_json::from_str(text).map_err(|e| circumfeas::Error::Trace(e.to_string()))?;
        t.trace.validate()?;
        if t.trace.final_point.dim() != t.scenario.dim {
            return Err(circumfeas::Error::DimensionMismatch {
                expected: t.scenario.dim,
                found: t.trace.final_point.dim(),
            });
        }
        if t.start_index >= t.scenario.initial_points.len() {
            return Err(circumfeas::Error::Trace(format!("start_index {} out of range", t.start_index)));
        }
        Ok(t)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = read(path)?;
        Self::from_json(&text).map_err(|e| CliError::Json { path: path.into(), message: e.to_string() })
    }
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: String,
    pub method: Method,
    pub start_index: usize,
    pub terminated: Termination,
    pub iterations_used: usize,
    pub final_point: circumfeas::Vector,
    pub final_dist_a: f64,
    pub final_dist_b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_zone: Option<bool>,
    pub expectation_met: bool,
}

pub(crate) fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

pub(crate) fn write(path: &Path, contents: impl AsRef<[u8]>) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.into(), source })
}

pub(crate) fn create_dir(path: &Path) -> CliResult<()> {
    std::fs::create_dir_all(path).map_err(|source| CliError::Io { path: path.into(), source })
}

/// Search path for named scenarios, from `CIRCUMFEAS_SCENARIO_DIR`.
pub fn scenario_dirs() -> Vec<PathBuf> {
    std::env::var_os("CIRCUMFEAS_SCENARIO_DIR").map(|v| std::env::split_paths(&v).collect()).unwrap_or_default()
}
