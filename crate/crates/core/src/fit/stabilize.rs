use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fit_simple, lower_median, FitOptions};
use crate::error::{Error, Result};
use crate::law::Observation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilizeOptions {
    pub alpha_init: f64,
    #[serde(rename = "D_init")]
    pub d_init: f64,
    /// Both estimates must move by less than this to stop.
    pub tol: f64,
    pub max_rounds: usize,
    /// Settings for the per-group fits; its fixed values are ignored.
    pub fit: FitOptions,
}

impl Default for StabilizeOptions {
    fn default() -> Self {
        Self {
            alpha_init: 0.5,
            d_init: 0.5,
            tol: 1e-3,
            max_rounds: 50,
            fit: FitOptions::free_d(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizeRound {
    pub round: usize,
    /// Per-group `D` with `α` held at this round's `α̂`; `None` if the fit failed.
    pub d_estimates: Vec<Option<f64>>,
    /// Per-group `α` with `D` held at the previous `D̂`.
    pub alpha_estimates: Vec<Option<f64>>,
    #[serde(rename = "D_hat")]
    pub d_hat: f64,
    pub alpha_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stabilized {
    #[serde(rename = "D_hat")]
    pub d_hat: f64,
    pub alpha_hat: f64,
    pub converged: bool,
    pub history: Vec<StabilizeRound>,
    pub warnings: Vec<String>,
}

/// Alternating median estimation of a `D` shared across groups.
///
/// Starting from `α̂ = D̂ = 0.5` (configurable), every round fits each group
/// twice: with `D` fixed at `D̂` to estimate `α`, then with `α` fixed at the
/// updated `α̂` to estimate `D`. Each estimate is replaced by the (lower)
/// median over groups as soon as it is available. A group whose fit fails is
/// left out of that round's median.
///
/// A single group has nothing to take a median over, so its free fit is
/// returned as the only round.
pub fn stabilize_d(groups: &[Vec<Observation>], opts: &StabilizeOptions) -> Result<Stabilized> {
    if groups.is_empty() {
        return Err(Error::InsufficientData("no groups".into()));
    }
    if !(opts.alpha_init > 0.0 && opts.alpha_init.is_finite()) {
        return Err(Error::param("alpha_init", "must be > 0"));
    }
    if !(opts.d_init > 0.0 && opts.d_init.is_finite()) {
        return Err(Error::param("D_init", "must be > 0"));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::param("tol", "must be > 0"));
    }
    if opts.max_rounds < 1 {
        return Err(Error::param("max_rounds", "must be >= 1"));
    }
    let base = FitOptions {
        fixed_d: None,
        fixed_alpha: None,
        fixed_c: None,
        ..opts.fit.clone()
    };

    if groups.len() == 1 {
        let rep = fit_simple(&groups[0], &base)?;
        let p = rep.params.as_simple().expect("simple fit");
        return Ok(Stabilized {
            d_hat: p.d(),
            alpha_hat: p.alpha(),
            converged: true,
            history: vec![StabilizeRound {
                round: 1,
                d_estimates: vec![Some(p.d())],
                alpha_estimates: vec![Some(p.alpha())],
                d_hat: p.d(),
                alpha_hat: p.alpha(),
            }],
            warnings: rep.warnings,
        });
    }

    let mut alpha_hat = opts.alpha_init;
    let mut d_hat = opts.d_init;
    let mut history = Vec::new();
    let mut warnings = Vec::new();
    let mut converged = false;

    for round in 1..=opts.max_rounds {
        // alpha first against the current D, then D against the new alpha
        let (alpha_estimates, alpha_err) = per_group(groups, round, "alpha", &mut warnings, |g| {
            fit_simple(
                g,
                &FitOptions {
                    fixed_d: Some(d_hat),
                    ..base.clone()
                },
            )
            .map(|r| r.params.as_simple().expect("simple fit").alpha())
        });
        let mut alphas: Vec<f64> = alpha_estimates.iter().flatten().copied().collect();
        let Some(new_alpha) = lower_median(&mut alphas) else {
            return Err(alpha_err.expect("every fit failed, so an error was recorded"));
        };
        let (d_estimates, d_err) = per_group(groups, round, "D", &mut warnings, |g| {
            fit_simple(
                g,
                &FitOptions {
                    fixed_alpha: Some(new_alpha),
                    ..base.clone()
                },
            )
            .map(|r| r.params.as_simple().expect("simple fit").d())
        });
        let mut ds: Vec<f64> = d_estimates.iter().flatten().copied().collect();
        let Some(new_d) = lower_median(&mut ds) else {
            return Err(d_err.expect("every fit failed, so an error was recorded"));
        };

        let done = (new_d - d_hat).abs() < opts.tol && (new_alpha - alpha_hat).abs() < opts.tol;
        d_hat = new_d;
        alpha_hat = new_alpha;
        history.push(StabilizeRound {
            round,
            d_estimates,
            alpha_estimates,
            d_hat,
            alpha_hat,
        });
        if done {
            converged = true;
            break;
        }
    }
    if !converged {
        warnings.push(format!("not converged after {} rounds", opts.max_rounds));
    }
    Ok(Stabilized {
        d_hat,
        alpha_hat,
        converged,
        history,
        warnings,
    })
}

type GroupEstimates = (Vec<Option<f64>>, Option<Error>);

fn per_group<F>(groups: &[Vec<Observation>], round: usize, label: &str, warnings: &mut Vec<String>, fit: F) -> GroupEstimates
where
    F: Fn(&[Observation]) -> Result<f64> + Sync,
{
    let results: Vec<Result<f64>> = groups.par_iter().map(|g| fit(g)).collect();
    let mut first_error = None;
    let estimates = results
        .into_iter()
        .enumerate()
        .map(|(gi, r)| match r {
            Ok(v) => Some(v),
            Err(e) => {
                warnings.push(format!("round {round}: group {gi} {label} fit failed: {e}"));
                first_error.get_or_insert(e);
                None
            }
        })
        .collect();
    (estimates, first_error)
}
