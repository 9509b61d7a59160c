//! Log-residual least-squares problems for both laws.
//!
//! Natural parameters are mapped to unconstrained coordinates: rates and
//! coefficients through `ln`, floors through the inverse softplus. The
//! optimizer only ever sees the unconstrained vector.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::lm::LeastSquares;
use crate::law::decay;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Param {
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "D")]
    D,
    #[serde(rename = "C")]
    C,
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "delta")]
    Delta,
    #[serde(rename = "eps_irr")]
    EpsIrr,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::D => "D",
            Param::C => "C",
            Param::Beta => "beta",
            Param::Gamma => "gamma",
            Param::Delta => "delta",
            Param::EpsIrr => "eps_irr",
        }
    }

    pub(crate) fn is_floor(self) -> bool {
        matches!(self, Param::C | Param::Gamma | Param::EpsIrr)
    }

    pub(crate) fn to_free(self, value: f64) -> f64 {
        if self.is_floor() {
            inv_softplus(value)
        } else {
            value.ln()
        }
    }

    pub(crate) fn from_free(self, u: f64) -> f64 {
        if self.is_floor() {
            softplus(u)
        } else {
            u.exp()
        }
    }

    /// d(natural)/d(free) at free coordinate `u`.
    fn chain(self, u: f64) -> f64 {
        if self.is_floor() {
            sigmoid(u)
        } else {
            u.exp()
        }
    }
}

pub(crate) fn softplus(u: f64) -> f64 {
    if u > 30.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

pub(crate) fn inv_softplus(v: f64) -> f64 {
    let v = v.max(1e-300);
    if v > 30.0 {
        v + (-(-v).exp()).ln_1p()
    } else {
        v.exp_m1().ln()
    }
}

fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LawKind {
    Simple,
    Full,
}

impl LawKind {
    pub fn params(self) -> &'static [Param] {
        match self {
            LawKind::Simple => &[Param::Alpha, Param::D, Param::C],
            LawKind::Full => &[Param::Alpha, Param::Beta, Param::Gamma, Param::Delta, Param::EpsIrr],
        }
    }

    /// Prediction and its gradient in the natural parameters.
    pub fn predict(self, p: &[f64], n: f64, s: f64, grad: Option<&mut [f64]>) -> f64 {
        match self {
            LawKind::Simple => {
                let (alpha, d, c) = (p[0], p[1], p[2]);
                let pw = decay(n, alpha);
                if let Some(g) = grad {
                    g[0] = -d * pw * n.ln();
                    g[1] = pw;
                    g[2] = 1.0;
                }
                d * pw + c
            }
            LawKind::Full => {
                let (alpha, beta, gamma, delta, eps) = (p[0], p[1], p[2], p[3], p[4]);
                let pn = decay(n, alpha);
                let ps = decay(s, beta);
                if let Some(g) = grad {
                    g[0] = -delta * pn * n.ln() * ps;
                    g[1] = -delta * (pn + gamma) * ps * s.ln();
                    g[2] = delta * ps;
                    g[3] = (pn + gamma) * ps;
                    g[4] = 1.0;
                }
                delta * (pn + gamma) * ps + eps
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Point {
    pub n: f64,
    pub s: f64,
    pub log_error: f64,
}

/// Least-squares view of one law with some parameters held fixed.
pub(crate) struct LawProblem<'a> {
    pub kind: LawKind,
    pub points: &'a [Point],
    /// Natural-parameter template; free slots are overwritten per evaluation.
    pub template: Vec<f64>,
    /// Indices (into `kind.params()`) of the free parameters.
    pub free: Vec<usize>,
}

impl LawProblem<'_> {
    pub fn natural(&self, theta: &DVector<f64>) -> Vec<f64> {
        let mut p = self.template.clone();
        let names = self.kind.params();
        for (k, &i) in self.free.iter().enumerate() {
            p[i] = names[i].from_free(theta[k]);
        }
        p
    }

    pub fn free_coords(&self, natural: &[f64]) -> DVector<f64> {
        let names = self.kind.params();
        DVector::from_iterator(self.free.len(), self.free.iter().map(|&i| names[i].to_free(natural[i])))
    }
}

impl LeastSquares for LawProblem<'_> {
    fn n_params(&self) -> usize {
        self.free.len()
    }

    fn n_residuals(&self) -> usize {
        self.points.len()
    }

    fn residuals(&self, theta: &DVector<f64>, out: &mut DVector<f64>) -> bool {
        let p = self.natural(theta);
        for (i, pt) in self.points.iter().enumerate() {
            let pred = self.kind.predict(&p, pt.n, pt.s, None);
            if !(pred > 0.0 && pred.is_finite()) {
                return false;
            }
            out[i] = pt.log_error - pred.ln();
        }
        true
    }

    fn jacobian(&self, theta: &DVector<f64>, out: &mut DMatrix<f64>) {
        let p = self.natural(theta);
        let names = self.kind.params();
        let mut g = vec![0.0; p.len()];
        for (i, pt) in self.points.iter().enumerate() {
            let pred = self.kind.predict(&p, pt.n, pt.s, Some(&mut g));
            for (k, &j) in self.free.iter().enumerate() {
                out[(i, k)] = -g[j] * names[j].chain(theta[k]) / pred;
            }
        }
    }
}
