use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::{decay, Observation};

/// Objective over an `(α, D)` grid with `C` profiled out in every cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeGrid {
    pub alpha_axis: Vec<f64>,
    #[serde(rename = "D_axis")]
    pub d_axis: Vec<f64>,
    /// `loss[i][j]` belongs to `alpha_axis[i]`, `d_axis[j]`.
    pub loss: Vec<Vec<f64>>,
    /// Profiled `C` for each cell.
    pub c_opt: Vec<Vec<f64>>,
    pub argmin: RidgePoint,
}

/// One cell of the grid together with its profiled floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RidgePoint {
    pub alpha: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub loss: f64,
}

impl LandscapeGrid {
    /// For every `α`, the `D` cell with the lowest loss.
    pub fn ridge(&self) -> Vec<RidgePoint> {
        self.alpha_axis
            .iter()
            .enumerate()
            .map(|(i, &alpha)| {
                let j = argmin(&self.loss[i]);
                RidgePoint {
                    alpha,
                    d: self.d_axis[j],
                    c: self.c_opt[i][j],
                    loss: self.loss[i][j],
                }
            })
            .collect()
    }
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[best] {
            best = i;
        }
    }
    best
}

fn axis(range: (f64, f64), count: usize, name: &'static str) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    if count == 0 {
        return Err(Error::param(name, "grid must have at least one point"));
    }
    if !(lo > 0.0 && hi.is_finite() && lo <= hi) {
        return Err(Error::param(name, format!("range must be positive and ascending, got [{lo}, {hi}]")));
    }
    if count > 1 && lo == hi {
        return Err(Error::param(name, "range is empty"));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count).map(|k| if k + 1 == count { hi } else { lo + step * k as f64 }).collect())
}

struct Profile<'a> {
    log_err: &'a [f64],
    power: Vec<f64>,
}

impl Profile<'_> {
    fn loss(&self, c: f64) -> f64 {
        self.log_err
            .iter()
            .zip(&self.power)
            .map(|(l, u)| (l - (u + c).ln()).powi(2))
            .sum()
    }

    /// Minimizes over `C ∈ [0, c_max]` with a coarse scan and golden-section refinement.
    fn minimize(&self, c_max: f64) -> (f64, f64) {
        const SCAN: usize = 64;
        let h = c_max / SCAN as f64;
        let mut best = (0.0, self.loss(0.0));
        let mut best_k = 0;
        for k in 1..=SCAN {
            let c = h * k as f64;
            let v = self.loss(c);
            if v < best.1 {
                best = (c, v);
                best_k = k;
            }
        }
        let mut a = h * best_k.saturating_sub(1) as f64;
        let mut b = (h * (best_k + 1) as f64).min(c_max);
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = self.loss(x1);
        let mut f2 = self.loss(x2);
        for _ in 0..80 {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = self.loss(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = self.loss(x2);
            }
            if b - a <= 1e-15 * c_max.max(1e-300) {
                break;
            }
        }
        for (c, v) in [(x1, f1), (x2, f2)] {
            if v < best.1 {
                best = (c, v);
            }
        }
        best
    }
}

/// Scans the simple-law objective over a linear `(α, D)` grid.
///
/// Each cell minimizes over `C` alone on `[0, max L̂]`; a larger floor would
/// push every prediction above every observation.
pub fn landscape(
    obs: &[Observation],
    alpha_range: (f64, f64),
    d_range: (f64, f64),
    n_alpha: usize,
    n_d: usize,
) -> Result<LandscapeGrid> {
    if obs.is_empty() {
        return Err(Error::InsufficientData("no observations".into()));
    }
    for (index, o) in obs.iter().enumerate() {
        if !(o.error > 0.0 && o.error.is_finite()) {
            return Err(Error::NonPositiveObservation { index, value: o.error });
        }
    }
    if obs.iter().any(|o| o.s != obs[0].s) {
        return Err(Error::InvalidInput(
            "landscape scans need every observation at one fine-tuning size s".into(),
        ));
    }
    let alpha_axis = axis(alpha_range, n_alpha, "alpha_range")?;
    let d_axis = axis(d_range, n_d, "D_range")?;
    let log_err: Vec<f64> = obs.iter().map(|o| o.error.ln()).collect();
    let c_max = obs.iter().map(|o| o.error).fold(0.0, f64::max);

    let cells: Vec<(f64, f64)> = (0..n_alpha * n_d)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n_d, k % n_d);
            let profile = Profile {
                log_err: &log_err,
                power: obs.iter().map(|o| d_axis[j] * decay(o.n as f64, alpha_axis[i])).collect(),
            };
            profile.minimize(c_max)
        })
        .collect();

    let mut loss = vec![vec![0.0; n_d]; n_alpha];
    let mut c_opt = vec![vec![0.0; n_d]; n_alpha];
    let mut best = 0;
    for (k, &(c, v)) in cells.iter().enumerate() {
        loss[k / n_d][k % n_d] = v;
        c_opt[k / n_d][k % n_d] = c;
        if v < cells[best].1 {
            best = k;
        }
    }
    let argmin = RidgePoint {
        alpha: alpha_axis[best / n_d],
        d: d_axis[best % n_d],
        c: cells[best].0,
        loss: cells[best].1,
    };
    Ok(LandscapeGrid {
        alpha_axis,
        d_axis,
        loss,
        c_opt,
        argmin,
    })
}
