//! Estimation of scaling-law parameters from learning-curve observations.
//!
//! All fits minimize the unweighted sum of squared log-residuals
//!
//! ```text
//! Σᵢ (ln L̂ᵢ − ln pred(nᵢ, sᵢ))²
//! ```
//!
//! with Levenberg–Marquardt in an unconstrained parameterization (`ln` for
//! rates and coefficients, inverse softplus for floors) and seeded multistart.
//! Besides the two fitters this module carries the tools used to diagnose
//! them: the α–D loss landscape, the median-based stabilization of a shared
//! `D`, Gauss–Newton standard errors, the linearized view of a fitted curve,
//! and a plain log-log regression.

mod estimate;
mod landscape;
mod linearize;
pub(crate) mod lm;
mod loglog;
mod model;
mod stabilize;
mod stderr;

pub use estimate::{fit_full, fit_simple};
pub use landscape::{landscape, LandscapeGrid, RidgePoint};
pub use linearize::{linearize, LinearPoint, Linearized};
pub use loglog::{fit_loglog_linear, LogLogFit};
pub use model::Param;
pub use stabilize::{stabilize_d, StabilizeOptions, StabilizeRound, Stabilized};
pub use stderr::{standard_errors, StdErrors};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::{FullLawParams, Observation, SimpleLawParams};

/// The `D` obtained by the median stabilization procedure on the original
/// experiments, used as the default fixed coefficient.
pub const DEFAULT_FIXED_D: f64 = 0.48;

/// Settings shared by [`fit_simple`] and [`fit_full`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitOptions {
    /// When set, `D` is held at this value (simple law only).
    #[serde(rename = "fixed_D")]
    pub fixed_d: Option<f64>,
    /// When set, `α` is held at this value (simple law only).
    pub fixed_alpha: Option<f64>,
    /// When set, `C` is held at this value (simple law only).
    #[serde(rename = "fixed_C")]
    pub fixed_c: Option<f64>,
    /// Hold `ℰ = 0` in full-law fits.
    pub fix_eps_zero: bool,
    /// Number of random restarts.
    pub multistart: usize,
    /// Relative objective decrease that ends a restart.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            fixed_d: Some(DEFAULT_FIXED_D),
            fixed_alpha: None,
            fixed_c: None,
            fix_eps_zero: true,
            multistart: 8,
            tol: 1e-10,
            max_iter: 500,
            seed: 0,
        }
    }
}

impl FitOptions {
    /// Defaults with `D` estimated rather than fixed.
    pub fn free_d() -> Self {
        Self {
            fixed_d: None,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.multistart < 1 {
            return Err(Error::param("multistart", "must be >= 1"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::param("tol", "must be > 0"));
        }
        if self.max_iter < 1 {
            return Err(Error::param("max_iter", "must be >= 1"));
        }
        if let Some(d) = self.fixed_d {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::param("fixed_D", "must be > 0"));
            }
        }
        if let Some(a) = self.fixed_alpha {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::param("fixed_alpha", "must be > 0"));
            }
        }
        if let Some(c) = self.fixed_c {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(Error::param("fixed_C", "must be >= 0"));
            }
        }
        Ok(())
    }
}

/// Parameters of whichever law was fitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum LawParams {
    Simple(SimpleLawParams),
    Full(FullLawParams),
}

impl LawParams {
    /// Predicted error; `s` is ignored by the simple law.
    pub fn eval(&self, n: f64, s: f64) -> Result<f64> {
        match self {
            LawParams::Simple(p) => p.eval(n),
            LawParams::Full(p) => p.eval(n, s),
        }
    }

    pub fn get(&self, param: Param) -> Option<f64> {
        match (self, param) {
            (LawParams::Simple(p), Param::Alpha) => Some(p.alpha()),
            (LawParams::Simple(p), Param::D) => Some(p.d()),
            (LawParams::Simple(p), Param::C) => Some(p.c()),
            (LawParams::Full(p), Param::Alpha) => Some(p.alpha()),
            (LawParams::Full(p), Param::Beta) => Some(p.beta()),
            (LawParams::Full(p), Param::Gamma) => Some(p.gamma()),
            (LawParams::Full(p), Param::Delta) => Some(p.delta()),
            (LawParams::Full(p), Param::EpsIrr) => Some(p.eps_irr()),
            _ => None,
        }
    }

    pub fn as_simple(&self) -> Option<&SimpleLawParams> {
        match self {
            LawParams::Simple(p) => Some(p),
            LawParams::Full(_) => None,
        }
    }

    pub fn as_full(&self) -> Option<&FullLawParams> {
        match self {
            LawParams::Full(p) => Some(p),
            LawParams::Simple(_) => None,
        }
    }
}

/// Result of a fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub params: LawParams,
    /// Parameters that were estimated, in the order of `stderr`.
    pub free: Vec<Param>,
    /// Gauss–Newton standard errors; `+∞` marks a non-identifiable direction.
    pub stderr: Vec<f64>,
    /// `ln L̂ᵢ − ln predᵢ`, in observation order.
    pub residuals: Vec<f64>,
    /// Sum of squared residuals.
    pub objective: f64,
    pub converged: bool,
    /// Iterations used by the winning restart.
    pub iterations: usize,
    /// Index of the winning restart.
    pub best_restart: usize,
    pub warnings: Vec<String>,
}

impl FitReport {
    /// Coefficient of determination of the fit in log space.
    pub fn log_r2(&self, obs: &[Observation]) -> f64 {
        let logs: Vec<f64> = obs.iter().map(|o| o.error.ln()).collect();
        let mean = logs.iter().sum::<f64>() / logs.len() as f64;
        let ss_tot: f64 = logs.iter().map(|l| (l - mean).powi(2)).sum();
        if ss_tot == 0.0 {
            return if self.objective == 0.0 { 1.0 } else { 0.0 };
        }
        1.0 - self.objective / ss_tot
    }

    pub fn stderr_of(&self, param: Param) -> Option<f64> {
        self.free.iter().position(|&p| p == param).map(|i| self.stderr[i])
    }
}

/// Sum of squared log-residuals of `pred` against the observations.
pub fn objective<F>(obs: &[Observation], pred: F) -> Result<f64>
where
    F: Fn(&Observation) -> f64,
{
    let mut total = 0.0;
    for (index, o) in obs.iter().enumerate() {
        if !(o.error > 0.0 && o.error.is_finite()) {
            return Err(Error::NonPositiveObservation { index, value: o.error });
        }
        let p = pred(o);
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::NonPositivePrediction { index, value: p });
        }
        total += (o.error.ln() - p.ln()).powi(2);
    }
    Ok(total)
}

/// Median with the lower-middle element for even counts.
pub(crate) fn lower_median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    Some(values[(values.len() - 1) / 2])
}
