//! Run configuration: defaults, JSON config files and flag overrides.
//!
//! Precedence is flags over file over defaults, and the effective
//! configuration is echoed into every emitted report.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Gcp,
    DouglasPeucker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CanvasConfig {
    pub width: usize,
    pub height: usize,
    pub supersample: usize,
}

impl Default for CanvasConfig {
    fn default() -> Self {
        CanvasConfig { width: 512, height: 512, supersample: 1 }
    }
}

/// The knobs of every verb, with the published defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub lambda: f64,
    pub k_max: usize,
    pub step: f64,
    pub window: usize,
    pub l_max: usize,
    pub algorithm: Algorithm,
    pub dp_tolerance: f64,
    pub seed: u64,
    pub canvas: CanvasConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lambda: 2.0,
            k_max: 64,
            step: 4.0,
            window: 64,
            l_max: 512,
            algorithm: Algorithm::Gcp,
            dp_tolerance: 1.0,
            seed: 0,
            canvas: CanvasConfig::default(),
        }
    }
}

/// Shared command-line overrides; every unset flag falls back to the
/// config file, then to the defaults.
#[derive(Debug, Clone, Args)]
pub struct ConfigOverrides {
    /// Per-vertex regularization weight of the collinearity objective.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Maximum number of consecutive source points one simplified edge
    /// may span.
    #[arg(long = "kmax", global = true)]
    pub k_max: Option<usize>,
    /// Contour resampling step in pixels.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Sliding window size in points.
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Cap on resampled polyline length.
    #[arg(long = "lmax", global = true)]
    pub l_max: Option<usize>,
    /// Simplification algorithm for the `simplify` verb.
    #[arg(long, global = true, value_enum)]
    pub algorithm: Option<Algorithm>,
    /// Douglas-Peucker split tolerance in pixels.
    #[arg(long = "tolerance", global = true)]
    pub dp_tolerance: Option<f64>,
    /// Seed for every randomized harness.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON config file with `RunConfig` fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl ConfigOverrides {
    /// Resolve the effective configuration.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.lambda {
            cfg.lambda = v;
        }
        if let Some(v) = self.k_max {
            cfg.k_max = v;
        }
        if let Some(v) = self.step {
            cfg.step = v;
        }
        if let Some(v) = self.window {
            cfg.window = v;
        }
        if let Some(v) = self.l_max {
            cfg.l_max = v;
        }
        if let Some(v) = self.algorithm {
            cfg.algorithm = v;
        }
        if let Some(v) = self.dp_tolerance {
            cfg.dp_tolerance = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        validate(&cfg)?;
        Ok(cfg)
    }
}

fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("invalid config {}: {e}", path.display())))
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    if !cfg.lambda.is_finite() || cfg.lambda < 0.0 {
        return Err(CliError::Input(format!("lambda must be non-negative, got {}", cfg.lambda)));
    }
    if cfg.k_max < 2 {
        return Err(CliError::Input(format!("kmax must be at least 2, got {}", cfg.k_max)));
    }
    if !cfg.step.is_finite() || cfg.step <= 0.0 {
        return Err(CliError::Input(format!("step must be positive, got {}", cfg.step)));
    }
    if cfg.window < 2 {
        return Err(CliError::Input(format!("window must be at least 2, got {}", cfg.window)));
    }
    if cfg.l_max < 2 {
        return Err(CliError::Input(format!("lmax must be at least 2, got {}", cfg.l_max)));
    }
    if !cfg.dp_tolerance.is_finite() || cfg.dp_tolerance < 0.0 {
        return Err(CliError::Input(format!(
            "tolerance must be non-negative, got {}",
            cfg.dp_tolerance
        )));
    }
    if cfg.canvas.width == 0 || cfg.canvas.height == 0 || cfg.canvas.supersample == 0 {
        return Err(CliError::Input("canvas dimensions must be positive".into()));
    }
    Ok(())
}

/// The effective configuration as a JSON value for embedding into outputs.
pub fn config_value(cfg: &RunConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("RunConfig serializes")
}
