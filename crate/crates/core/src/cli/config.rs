//! Run settings from an optional JSON file, the environment and flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::ode::SolverConfig;

/// Environment variable that overrides the eigenvalue cache path.
pub const CACHE_ENV: &str = "MATHIEU_TRACE_CACHE";
pub const TOL_RANGE: (f64, f64) = (1e-14, 1e-6);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Relative tolerance of the ODE integrator.
    pub solver_tol: f64,
    /// Target error of the Liouville–Green seed quadrature.
    pub quad_tol: f64,
    pub format: Option<OutputFormat>,
    pub cache: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { solver_tol: 1e-11, quad_tol: 1e-10, format: None, cache: None, threads: 0 }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn validate(&self) -> Result<(), String> {
        let (lo, hi) = TOL_RANGE;
        for (name, v) in [("solver_tol", self.solver_tol), ("quad_tol", self.quad_tol)] {
            if !(lo..=hi).contains(&v) {
                return Err(format!("{name} = {v:e} outside [{lo:e}, {hi:e}]"));
            }
        }
        Ok(())
    }

    pub fn solver(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default().with_rtol(self.solver_tol);
        cfg.seed.max_error = self.quad_tol;
        cfg
    }

    /// Flag, then environment, then config file, then the temp directory.
    pub fn cache_path(&self, flag: Option<&Path>) -> PathBuf {
        if let Some(p) = flag {
            return p.to_path_buf();
        }
        if let Some(p) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
            return PathBuf::from(p);
        }
        self.cache.clone().unwrap_or_else(|| std::env::temp_dir().join("mathieu-trace-eigenvalues.json"))
    }

    /// Explicit choice, else `.json` output files give JSON, else CSV.
    pub fn output_format(&self, flag: Option<OutputFormat>, out: Option<&Path>) -> OutputFormat {
        flag.or(self.format).unwrap_or_else(|| match out.and_then(|p| p.extension()) {
            Some(ext) if ext == "json" => OutputFormat::Json,
            _ => OutputFormat::Csv,
        })
    }
}
