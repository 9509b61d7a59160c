//! Negative entropy of a Gaussian fitted to feature activations.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `N × d` activations, one sample per row.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationMatrix {
    values: DMatrix<f64>,
}

impl ActivationMatrix {
    /// Builds from row-major data.
    pub fn new(n: usize, d: usize, data: &[f64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InsufficientData(format!("need at least 2 samples, got {n}")));
        }
        if d < 1 {
            return Err(Error::InvalidInput("need at least one feature column".into()));
        }
        if data.len() != n * d {
            return Err(Error::InvalidInput(format!("expected {} values for {n}x{d}, got {}", n * d, data.len())));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite activation at row {}, column {}", i / d, i % d)));
        }
        Ok(Self {
            values: DMatrix::from_row_slice(n, d, data),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != d) {
            return Err(Error::InvalidInput(format!("row {i} has {} columns, expected {d}", rows[i].len())));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), d, &flat)
    }

    pub fn samples(&self) -> usize {
        self.values.nrows()
    }

    pub fn features(&self) -> usize {
        self.values.ncols()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// `−(d/2)·ln(2πe) − ½·logdet`, in nats.
    pub neg_entropy: f64,
    /// `ln det(Σ̂ + εI)`; `−∞` when singular.
    pub logdet: f64,
    /// The `ε` that was added to the diagonal.
    pub shrinkage: f64,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    /// Set when the covariance was not positive definite.
    pub singular: bool,
}

/// Fits `N(μ̂, Σ̂ + εI)` with the unbiased covariance and returns its
/// negative entropy.
///
/// `shrinkage = None` uses `ε = 10⁻⁶ · tr(Σ̂)/d`.
pub fn gaussian_negative_entropy(a: &ActivationMatrix, shrinkage: Option<f64>) -> Result<EntropyReport> {
    let (n, d) = (a.samples(), a.features());
    let mean = a.values.row_mean();
    let mut centered = a.values.clone();
    for mut row in centered.row_iter_mut() {
        row -= &mean;
    }
    let mut cov = centered.tr_mul(&centered) / (n - 1) as f64;
    let eps = match shrinkage {
        Some(e) if !(e >= 0.0 && e.is_finite()) => return Err(Error::param("shrinkage", format!("must be >= 0, got {e}"))),
        Some(e) => e,
        None => 1e-6 * cov.trace() / d as f64,
    };
    for i in 0..d {
        cov[(i, i)] += eps;
    }
    let half_log_2pie = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
    // pivots at rounding level mean the matrix is singular in all but name
    let tiny = cov.diagonal().max() * d as f64 * f64::EPSILON;
    let pivots = cov.cholesky().map(|ch| ch.l_dirty().diagonal());
    let (logdet, singular) = match pivots {
        Some(p) if p.iter().all(|v| v * v > tiny) => (2.0 * p.iter().map(|v| v.ln()).sum::<f64>(), false),
        _ => (f64::NEG_INFINITY, true),
    };
    Ok(EntropyReport {
        neg_entropy: -(d as f64) * half_log_2pie - 0.5 * logdet,
        logdet,
        shrinkage: eps,
        d,
        n,
        singular,
    })
}
