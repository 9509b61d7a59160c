//! Closed-form scaling laws for fine-tuning error.
//!
//! Two models are provided:
//!
//! * the *simple law* `L(n) = D·n^(-α) + C`, describing fine-tuning error as a
//!   function of the pre-training sample count `n` at a fixed fine-tuning size;
//! * the *full law* `L(n, s) = δ·(n^(-α) + γ)·s^(-β) + ℰ`, which couples the
//!   pre-training size `n` with the fine-tuning size `s`.
//!
//! Fixing `s` in the full law gives the simple law with `D = δ·s^(-β)` and
//! `C = δ·γ·s^(-β) + ℰ`; see [`FullLawParams::reduce_at`].
//!
//! Parameters are validated once at construction. Evaluation only checks the
//! sample counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One point of a learning curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    /// Pre-training sample count.
    pub n: u64,
    /// Fine-tuning sample count.
    pub s: u64,
    /// Observed test error; strictly positive so that its logarithm exists.
    pub error: f64,
    /// Free-form identity tag (dataset, task, model).
    #[serde(default)]
    pub group: String,
}

impl Observation {
    pub fn new(n: u64, s: u64, error: f64, group: impl Into<String>) -> Result<Self> {
        if n < 1 {
            return Err(Error::param("n", "pre-training size must be >= 1"));
        }
        if s < 1 {
            return Err(Error::param("s", "fine-tuning size must be >= 1"));
        }
        if !(error.is_finite() && error > 0.0) {
            return Err(Error::param(
                "error",
                format!("observed error must be finite and > 0, got {error}"),
            ));
        }
        Ok(Self {
            n,
            s,
            error,
            group: group.into(),
        })
    }
}

/// `x^(-rate)` evaluated as `exp(-rate·ln x)`.
#[inline]
pub(crate) fn decay(x: f64, rate: f64) -> f64 {
    (-rate * x.ln()).exp()
}

fn check_count(name: &'static str, x: f64) -> Result<()> {
    if x.is_nan() || x < 1.0 {
        return Err(Error::param(name, format!("sample count must be >= 1, got {x}")));
    }
    Ok(())
}

fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::param(name, format!("must be finite and >= 0, got {v}")));
    }
    Ok(())
}

fn check_pos(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::param(name, format!("must be finite and > 0, got {v}")));
    }
    Ok(())
}

/// Parameters of `L(n) = D·n^(-α) + C`.
///
/// `α = 0` is accepted as the degenerate constant curve; fitting always
/// returns `α > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleLawParams {
    alpha: f64,
    #[serde(rename = "D")]
    d: f64,
    #[serde(rename = "C")]
    c: f64,
}

impl SimpleLawParams {
    pub fn new(alpha: f64, d: f64, c: f64) -> Result<Self> {
        check_nonneg("alpha", alpha)?;
        check_pos("D", d)?;
        check_nonneg("C", c)?;
        Ok(Self { alpha, d, c })
    }

    /// Pre-training rate.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Coefficient of the power-law term.
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Transfer gap (asymptotic floor).
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn eval(&self, n: f64) -> Result<f64> {
        check_count("n", n)?;
        Ok(self.eval_unchecked(n))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, n: f64) -> f64 {
        self.d * decay(n, self.alpha) + self.c
    }
}

/// Parameters of `L(n, s) = δ·(n^(-α) + γ)·s^(-β) + ℰ`.
///
/// As with [`SimpleLawParams`], zero decay rates are accepted as degenerate
/// cases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullLawParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    eps_irr: f64,
}

impl FullLawParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, eps_irr: f64) -> Result<Self> {
        check_nonneg("alpha", alpha)?;
        check_nonneg("beta", beta)?;
        check_nonneg("gamma", gamma)?;
        check_pos("delta", delta)?;
        check_nonneg("eps_irr", eps_irr)?;
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
            eps_irr,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    /// Irreducible error `ℰ`.
    pub fn eps_irr(&self) -> f64 {
        self.eps_irr
    }

    pub fn eval(&self, n: f64, s: f64) -> Result<f64> {
        check_count("n", n)?;
        check_count("s", s)?;
        Ok(self.eval_unchecked(n, s))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, n: f64, s: f64) -> f64 {
        self.delta * (decay(n, self.alpha) + self.gamma) * decay(s, self.beta) + self.eps_irr
    }

    /// Reducible part `L(n, s) - ℰ`.
    pub fn reducible(&self, n: f64, s: f64) -> Result<f64> {
        Ok(self.eval(n, s)? - self.eps_irr)
    }

    /// Collapses the `s` dependence at a fixed fine-tuning size.
    pub fn reduce_at(&self, s: f64) -> Result<SimpleLawParams> {
        check_count("s", s)?;
        let scale = self.delta * decay(s, self.beta);
        SimpleLawParams::new(self.alpha, scale, scale * self.gamma + self.eps_irr)
    }
}
