//! The TOML run configuration.
//!
//! One table per command, keyed by the command name. Every table is
//! optional and every key inside it has a default, so an empty file is a
//! valid configuration. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use syn2real::fit::{FitOptions, StabilizeOptions};
use syn2real::theory::{KernelSpec, TransferConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Output directory.
    pub out: Option<PathBuf>,
    pub fit: FitSection,
    #[serde(rename = "fit-full")]
    pub fit_full: FitFullSection,
    #[serde(rename = "stabilize-d")]
    pub stabilize_d: StabilizeSection,
    pub landscape: LandscapeSection,
    pub linearize: LinearizeSection,
    pub simulate: TransferConfig,
    pub spectrum: SpectrumSection,
    pub rates: RatesSection,
    pub complexity: ComplexitySection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitSection {
    pub input: Option<PathBuf>,
    /// Estimate `D` instead of holding it at `options.fixed_D`.
    #[serde(rename = "free_D")]
    pub free_d: bool,
    pub options: FitOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitFullSection {
    pub input: Option<PathBuf>,
    pub options: FitOptions,
}

impl Default for FitFullSection {
    fn default() -> Self {
        Self {
            input: None,
            options: FitOptions::free_d(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilizeSection {
    pub input: Option<PathBuf>,
    pub options: StabilizeOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LandscapeSection {
    pub input: Option<PathBuf>,
    pub alpha_range: (f64, f64),
    #[serde(rename = "D_range")]
    pub d_range: (f64, f64),
    pub n_alpha: usize,
    #[serde(rename = "n_D")]
    pub n_d: usize,
}

impl Default for LandscapeSection {
    fn default() -> Self {
        Self {
            input: None,
            alpha_range: (0.05, 1.5),
            d_range: (0.05, 2.0),
            n_alpha: 60,
            n_d: 60,
        }
    }
}

/// Parameters of the curve to linearize against. Missing values are taken
/// from a free fit of the same data.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearizeSection {
    pub input: Option<PathBuf>,
    pub alpha: Option<f64>,
    #[serde(rename = "D")]
    pub d: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSection {
    pub kernel: KernelSpec,
    #[serde(rename = "Q")]
    pub q: usize,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            kernel: KernelSpec::designed(2.0, 64),
            q: 256,
        }
    }
}

/// Inputs to the rate table. The bound terms are evaluated only when all of
/// `T1`, `lambda1` and `eta1` are present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RatesSection {
    pub r0: f64,
    pub r1: f64,
    pub xi: f64,
    pub zeta: f64,
    #[serde(rename = "T1")]
    pub t1: Option<f64>,
    pub lambda1: Option<f64>,
    pub eta1: Option<f64>,
    #[serde(rename = "R0")]
    pub r0_err: f64,
}

impl Default for RatesSection {
    fn default() -> Self {
        Self {
            r0: 0.5,
            r1: 0.5,
            xi: 2.0,
            zeta: 1.0 / 3.0,
            t1: None,
            lambda1: None,
            eta1: None,
            r0_err: 1.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ComplexitySection {
    pub input: Option<PathBuf>,
    /// Ridge added to the covariance diagonal; unset means `1e-6 · tr/d`.
    pub shrinkage: Option<f64>,
}

impl RunConfig {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config {
            path: origin.to_path_buf(),
            message: e.message().to_string(),
        })
    }

    /// Reads `path` and makes every relative input path relative to the
    /// directory holding it.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::parse(&text, path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for slot in [
            &mut cfg.out,
            &mut cfg.fit.input,
            &mut cfg.fit_full.input,
            &mut cfg.stabilize_d.input,
            &mut cfg.landscape.input,
            &mut cfg.linearize.input,
            &mut cfg.complexity.input,
        ] {
            if let Some(p) = slot.as_mut() {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(cfg)
    }
}
