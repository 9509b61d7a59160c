use serde::{Deserialize, Serialize};

use crate::law::{Observation, SimpleLawParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearPoint {
    pub n: u64,
    /// Observed error minus the fitted floor, `L̂ − C`.
    pub value: f64,
    /// `D·n^(-α)`, the straight line in log-log coordinates.
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Linearized {
    pub points: Vec<LinearPoint>,
    /// Observations dropped because `L̂ − C ≤ 0`.
    pub omitted: usize,
}

/// Subtracts the fitted floor `C` from each observation so the remaining
/// error can be compared with `D·n^(-α)` on log-log axes.
pub fn linearize(obs: &[Observation], p: &SimpleLawParams) -> Linearized {
    let mut points = Vec::with_capacity(obs.len());
    let mut omitted = 0;
    for o in obs {
        let value = o.error - p.c();
        if value > 0.0 {
            points.push(LinearPoint {
                n: o.n,
                value,
                predicted: p.eval_unchecked(o.n as f64) - p.c(),
            });
        } else {
            omitted += 1;
        }
    }
    Linearized { points, omitted }
}
