//! How closely a wide network follows the function-space recursion.
//!
//! The reference dynamics use the random-feature kernel `k_M` of the
//! network's own initialization. Writing `k_M(x, x') = ψ(x)ᵀψ(x')`, the
//! reference iterate is `g⁽ᵗ⁾ = ψ(·)ᵀw_t` with
//! `w_{t+1} = (1 − ηλ)w_t − η(g⁽ᵗ⁾(x_t) − y_t)ψ(x_t)`, which is driven by the
//! same samples as the parameter updates.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::function::FourierSeries;
use super::kernel::rf_features;
use super::network::{check_rate, dot, init_network};
use super::{circle_point, median, rng_for, Stream};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropConfig {
    /// Number of ASGD steps `T`.
    pub steps: usize,
    pub eta: f64,
    pub lambda: f64,
    /// Equispaced test angles on which the gap is measured.
    pub grid: usize,
    pub seeds: Vec<u64>,
    pub target: FourierSeries,
}

impl Default for PropConfig {
    fn default() -> Self {
        Self {
            steps: 200,
            eta: 0.1,
            lambda: 0.01,
            grid: 64,
            seeds: (0..8).collect(),
            target: FourierSeries {
                constant: 0.0,
                cos: vec![0.4, 0.0, 0.15],
                sin: vec![-0.25, 0.0, 0.05],
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropGap {
    #[serde(rename = "M")]
    pub m: usize,
    /// `max_{t ≤ T} max_grid |g⁽ᵗ⁾ − g_Θ⁽ᵗ⁾|`, one entry per seed.
    pub per_seed: Vec<f64>,
    pub median: f64,
}

/// Sup-norm gap between parameter ASGD and the reference recursion, for
/// each width in `widths`.
pub fn prop_a_gap(config: &PropConfig, widths: &[usize]) -> Result<Vec<PropGap>> {
    check_rate(config.eta, config.lambda)?;
    if config.grid == 0 {
        return Err(Error::param("grid", "need at least one test point"));
    }
    if config.seeds.is_empty() {
        return Err(Error::param("seeds", "need at least one seed"));
    }
    widths
        .iter()
        .map(|&m| {
            let per_seed = config
                .seeds
                .par_iter()
                .map(|&seed| single_gap(config, m, seed))
                .collect::<Result<Vec<f64>>>()?;
            let mut sorted = per_seed.clone();
            Ok(PropGap {
                m,
                median: median(&mut sorted).expect("seeds are non-empty"),
                per_seed,
            })
        })
        .collect()
}

fn single_gap(config: &PropConfig, m: usize, seed: u64) -> Result<f64> {
    let mut net = init_network(m, 2, seed)?;
    let dim = m * 3;
    let grid: Vec<[f64; 2]> = (0..config.grid)
        .map(|j| circle_point(std::f64::consts::TAU * j as f64 / config.grid as f64))
        .collect();
    let mut grid_features = vec![0.0; dim * grid.len()];
    for (x, out) in grid.iter().zip(grid_features.chunks_mut(dim)) {
        rf_features(&net, x, out);
    }
    let mut w = vec![0.0; dim];
    let mut psi = vec![0.0; dim];
    let rho = 1.0 - config.eta * config.lambda;
    let mut rng = rng_for(seed, Stream::PretrainData);
    let mut worst = 0.0f64;
    for _ in 0..config.steps {
        let th = rng.random::<f64>() * std::f64::consts::TAU;
        let x = circle_point(th);
        let y = config.target.eval(th);
        rf_features(&net, &x, &mut psi);
        let e_ref = dot(&w, &psi) - y;
        net.step_unchecked(&x, y, config.eta, config.lambda);
        let c = config.eta * e_ref;
        w.iter_mut().zip(&psi).for_each(|(wi, p)| *wi = rho * *wi - c * p);
        for (x, feat) in grid.iter().zip(grid_features.chunks(dim)) {
            worst = worst.max((dot(&w, feat) - net.eval_unchecked(x)).abs());
        }
    }
    Ok(worst)
}
