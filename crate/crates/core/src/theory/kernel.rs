//! Kernels on the unit sphere.
//!
//! * `k∞(x, x') = E_b[σ(bᵀx)σ(bᵀx')] + xᵀx'·E_b[σ'(bᵀx)σ'(bᵀx')]` with `b`
//!   uniform on the sphere, estimated by Monte Carlo;
//! * `k_M`, the same expression averaged over the `M` initial rows of a
//!   network instead of taking the expectation;
//! * a designed kernel on the circle, `Σ_{ℓ=1..L} scale·ℓ^(-ξ)·cos(ℓ(θ − θ'))`,
//!   whose integral operator has eigenvalues `scale·ℓ^(-ξ)/2` with
//!   eigenfunctions `√2·cos ℓθ` and `√2·sin ℓθ`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::network::{dot, init_network, Activation, NetworkState};
use super::{rng_for, Stream};
use crate::error::{Error, Result};

/// Which kernel to build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KernelSpec {
    /// `k∞` from `samples` directions drawn under `seed`.
    NtkMonteCarlo { samples: usize, seed: u64 },
    /// `k_M` from the initialization `init_network(width, 2, seed)`.
    RandomFeature { width: usize, seed: u64 },
    /// The designed stationary kernel on the circle.
    Designed { xi: f64, modes: usize, scale: f64 },
}

impl KernelSpec {
    pub fn designed(xi: f64, modes: usize) -> Self {
        KernelSpec::Designed { xi, modes, scale: 1.0 }
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub stderr: f64,
}

/// A kernel ready for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    Ntk { d: usize, draws: Vec<f64> },
    RandomFeature(NetworkState),
    Designed { xi: f64, modes: usize, scale: f64 },
}

fn check_designed(xi: f64, modes: usize, scale: f64) -> Result<()> {
    if !(xi > 1.0 && xi.is_finite()) {
        return Err(Error::param("xi", format!("decay exponent must be > 1, got {xi}")));
    }
    if modes < 1 {
        return Err(Error::param("modes", "need at least one mode"));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::param("scale", "must be > 0"));
    }
    Ok(())
}

fn draw_sphere(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    loop {
        for v in out.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let n = dot(out, out).sqrt();
        if n > 1e-12 {
            out.iter_mut().for_each(|v| *v /= n);
            return;
        }
    }
}

impl Kernel {
    /// Builds a kernel on the circle (`d = 2`).
    pub fn build(spec: &KernelSpec) -> Result<Self> {
        match *spec {
            KernelSpec::NtkMonteCarlo { samples, seed } => {
                if samples < 2 {
                    return Err(Error::param("samples", "need at least 2 Monte Carlo samples"));
                }
                let mut rng = rng_for(seed, Stream::MonteCarlo);
                let mut draws = vec![0.0; samples * 2];
                for chunk in draws.chunks_mut(2) {
                    draw_sphere(&mut rng, chunk);
                }
                Ok(Kernel::Ntk { d: 2, draws })
            }
            KernelSpec::RandomFeature { width, seed } => Ok(Kernel::RandomFeature(init_network(width, 2, seed)?)),
            KernelSpec::Designed { xi, modes, scale } => {
                check_designed(xi, modes, scale)?;
                Ok(Kernel::Designed { xi, modes, scale })
            }
        }
    }

    /// `k_M` of an existing network's snapshot.
    pub fn from_network(state: &NetworkState) -> Self {
        Kernel::RandomFeature(state.clone())
    }

    /// Evaluates at two unit vectors.
    pub fn eval(&self, x: &[f64], xp: &[f64]) -> f64 {
        match self {
            Kernel::Ntk { d, draws } => {
                let xx = dot(x, xp);
                let mut sum = 0.0;
                for b in draws.chunks(*d) {
                    sum += ntk_integrand(Activation::Tanh, b, x, xp, xx);
                }
                sum / (draws.len() / d) as f64
            }
            Kernel::RandomFeature(state) => rf_kernel_eval(state, x, xp),
            Kernel::Designed { xi, modes, scale } => {
                let th = x[1].atan2(x[0]);
                let thp = xp[1].atan2(xp[0]);
                scale * designed_sum(*xi, *modes, th - thp)
            }
        }
    }

    /// Evaluates at two angles on the circle.
    pub fn eval_angles(&self, theta: f64, thetap: f64) -> f64 {
        match self {
            Kernel::Designed { xi, modes, scale } => scale * designed_sum(*xi, *modes, theta - thetap),
            _ => self.eval(&super::circle_point(theta), &super::circle_point(thetap)),
        }
    }

    /// Whether the kernel depends on the angle difference only.
    pub fn is_stationary(&self) -> bool {
        !matches!(self, Kernel::RandomFeature(_))
    }
}

#[inline]
fn ntk_integrand(act: Activation, b: &[f64], x: &[f64], xp: &[f64], xx: f64) -> f64 {
    let (s, sp) = act.eval(dot(b, x));
    let (t, tp) = act.eval(dot(b, xp));
    s * t + xx * sp * tp
}

fn designed_sum(xi: f64, modes: usize, delta: f64) -> f64 {
    (1..=modes).map(|l| (l as f64).powf(-xi) * (l as f64 * delta).cos()).sum()
}

/// Monte Carlo estimate of `k∞(x, x')` with `tanh` units.
///
/// Directions are drawn uniformly from the sphere of dimension `x.len()`;
/// both arguments see the same draws, so the estimate is exactly symmetric.
pub fn ntk_eval(x: &[f64], xp: &[f64], mc_samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    if mc_samples < 2 {
        return Err(Error::param("mc_samples", "need at least 2 samples"));
    }
    check_unit(x)?;
    check_unit(xp)?;
    if x.len() != xp.len() {
        return Err(Error::InvalidInput("inputs differ in dimension".into()));
    }
    let mut rng = rng_for(seed, Stream::MonteCarlo);
    let mut b = vec![0.0; x.len()];
    let xx = dot(x, xp);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..mc_samples {
        draw_sphere(&mut rng, &mut b);
        let v = ntk_integrand(Activation::Tanh, &b, x, xp, xx);
        sum += v;
        sq += v * v;
    }
    Ok(summarize(sum, sq, mc_samples))
}

fn summarize(sum: f64, sq: f64, n: usize) -> MonteCarloEstimate {
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    MonteCarloEstimate {
        value: mean,
        stderr: (var / nf).sqrt(),
    }
}

fn check_unit(x: &[f64]) -> Result<()> {
    let n = dot(x, x).sqrt();
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidInput(format!("input norm {n} is not 1")));
    }
    Ok(())
}

const CHUNK: usize = 1 << 16;

/// High-sample `k∞` estimates for many pairs drawn from a shared pool of
/// points.
///
/// Each direction is evaluated once per pool point and reused by every
/// pair. Draws are split into fixed chunks with their own random streams and
/// summed in chunk order, so the result does not depend on thread count.
pub fn ntk_reference(points: &[Vec<f64>], pairs: &[(usize, usize)], samples: usize, seed: u64) -> Result<Vec<MonteCarloEstimate>> {
    if samples < 2 {
        return Err(Error::param("samples", "need at least 2 samples"));
    }
    let d = points.first().map(Vec::len).ok_or_else(|| Error::InvalidInput("no points".into()))?;
    for p in points {
        check_unit(p)?;
        if p.len() != d {
            return Err(Error::InvalidInput("points differ in dimension".into()));
        }
    }
    if pairs.iter().any(|&(i, j)| i >= points.len() || j >= points.len()) {
        return Err(Error::InvalidInput("pair index out of range".into()));
    }
    let dots: Vec<f64> = pairs.iter().map(|&(i, j)| dot(&points[i], &points[j])).collect();
    let n_chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(Vec<f64>, Vec<f64>)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((Stream::MonteCarlo as u64) << 40) | c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut b = vec![0.0; d];
            let mut s = vec![0.0; points.len()];
            let mut sp = vec![0.0; points.len()];
            let mut sum = vec![0.0; pairs.len()];
            let mut sq = vec![0.0; pairs.len()];
            for _ in 0..count {
                draw_sphere(&mut rng, &mut b);
                for (k, p) in points.iter().enumerate() {
                    let (v, dv) = Activation::Tanh.eval(dot(&b, p));
                    s[k] = v;
                    sp[k] = dv;
                }
                for (q, &(i, j)) in pairs.iter().enumerate() {
                    let v = s[i] * s[j] + dots[q] * sp[i] * sp[j];
                    sum[q] += v;
                    sq[q] += v * v;
                }
            }
            (sum, sq)
        })
        .collect();
    let mut sum = vec![0.0; pairs.len()];
    let mut sq = vec![0.0; pairs.len()];
    for (ps, pq) in &partial {
        for q in 0..pairs.len() {
            sum[q] += ps[q];
            sq[q] += pq[q];
        }
    }
    Ok((0..pairs.len()).map(|q| summarize(sum[q], sq[q], samples)).collect())
}

/// `k_M(x, x')` over the snapshot rows `b⁰` of `state0`.
pub fn rf_kernel_eval(state0: &NetworkState, x: &[f64], xp: &[f64]) -> f64 {
    let act = state0.activation();
    let xx = dot(x, xp);
    let m = state0.width();
    let (mut first, mut second) = (0.0, 0.0);
    for r in 0..m {
        let b = state0.b0_row(r);
        let (s, sp) = act.eval(dot(b, x));
        let (t, tp) = act.eval(dot(b, xp));
        first += s * t;
        second += sp * tp;
    }
    (first + xx * second) / m as f64
}

/// Feature map with `k_M(x, x') = ⟨ψ(x), ψ(x')⟩`: the entries are
/// `σ(b_rᵀx)/√M` followed by `σ'(b_rᵀx)·x/√M`.
pub(crate) fn rf_features(state0: &NetworkState, x: &[f64], out: &mut [f64]) {
    let m = state0.width();
    let d = state0.dim();
    let act = state0.activation();
    let inv = 1.0 / (m as f64).sqrt();
    for r in 0..m {
        let (s, sp) = act.eval(dot(state0.b0_row(r), x));
        out[r] = s * inv;
        for k in 0..d {
            out[m + r * d + k] = sp * x[k] * inv;
        }
    }
}

/// `Σ_{ℓ=1..L} ℓ^(-ξ)·cos(ℓ(θ − θ'))`.
pub fn designed_kernel_eval(xi: f64, modes: usize, theta: f64, thetap: f64) -> Result<f64> {
    check_designed(xi, modes, 1.0)?;
    Ok(designed_sum(xi, modes, theta - thetap))
}
