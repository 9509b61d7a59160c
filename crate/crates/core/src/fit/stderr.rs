use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::model::LawKind;
use super::{FitReport, LawParams};
use crate::error::{Error, Result};
use crate::law::Observation;

/// Standard errors aligned with [`FitReport::free`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StdErrors {
    pub values: Vec<f64>,
    /// `false` when `JᵀJ` is singular; all values are then `+∞`.
    pub identifiable: bool,
}

// Reciprocal condition number below which JᵀJ counts as singular.
const RCOND_MIN: f64 = 1e-14;

/// Gauss–Newton standard errors of the free parameters.
///
/// `J` is the Jacobian of the log-predictions with respect to the natural
/// free parameters at the estimate. The residual variance is
/// `RSS / (m − p)`; with no degrees of freedom left it is zero for an exact
/// fit and infinite otherwise.
pub fn standard_errors(report: &FitReport, obs: &[Observation]) -> Result<StdErrors> {
    if !report.converged {
        return Err(Error::Domain("standard errors need a converged fit".into()));
    }
    let (kind, natural) = match &report.params {
        LawParams::Simple(p) => (LawKind::Simple, vec![p.alpha(), p.d(), p.c()]),
        LawParams::Full(p) => (
            LawKind::Full,
            vec![p.alpha(), p.beta(), p.gamma(), p.delta(), p.eps_irr()],
        ),
    };
    let names = kind.params();
    let free: Vec<usize> = report
        .free
        .iter()
        .map(|f| names.iter().position(|n| n == f))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidInput("free parameter does not belong to the fitted law".into()))?;

    let m = obs.len();
    let p = free.len();
    if p == 0 {
        return Ok(StdErrors {
            values: Vec::new(),
            identifiable: true,
        });
    }

    let mut jac = DMatrix::zeros(m, p);
    let mut grad = vec![0.0; natural.len()];
    let mut rss = 0.0;
    for (i, o) in obs.iter().enumerate() {
        let pred = kind.predict(&natural, o.n as f64, o.s as f64, Some(&mut grad));
        if !(pred > 0.0 && pred.is_finite()) {
            return Err(Error::NonPositivePrediction { index: i, value: pred });
        }
        rss += (o.error.ln() - pred.ln()).powi(2);
        for (k, &j) in free.iter().enumerate() {
            jac[(i, k)] = grad[j] / pred;
        }
    }

    let singular = StdErrors {
        values: vec![f64::INFINITY; p],
        identifiable: false,
    };
    if m < p {
        return Ok(singular);
    }
    let jtj = jac.tr_mul(&jac);
    let eig = jtj.clone().symmetric_eigen();
    let max_ev = eig.eigenvalues.amax();
    let min_ev = eig.eigenvalues.min();
    if !(max_ev > 0.0) || min_ev <= RCOND_MIN * max_ev {
        return Ok(singular);
    }
    let Some(inv) = jtj.try_inverse() else {
        return Ok(singular);
    };

    let dof = m - p;
    let sigma2 = if dof > 0 {
        rss / dof as f64
    } else if rss == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let values = (0..p).map(|k| (sigma2 * inv[(k, k)].max(0.0)).sqrt()).collect();
    Ok(StdErrors {
        values,
        identifiable: true,
    })
}
