//! Pre-train on `φ₀`, fine-tune on `φ = φ₀ + φ₁`, and record the error
//! surface over `(T₀, T₁)`.
//!
//! Every `(T₀, T₁)` cell of one seed reuses the same input streams: the
//! first `T₀` pre-training draws and the first `T₁` fine-tuning draws. This
//! keeps the surface smooth across the grid.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::function::{l2_error, make_target, CoefficientProfile, FourierSeries, FunctionRep};
use super::kernel::{Kernel, KernelSpec};
use super::network::{init_network, run_asgd};
use super::rkhs::reference_asgd_on;
use super::spectrum::{spectrum, SpectrumReport};
use super::{circle_point, median, rng_for, Stream};
use crate::error::{Error, Result};
use crate::law::Observation;

/// `coef · T^(-exp)`, with `T` clamped to at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub coef: f64,
    pub exp: f64,
}

impl Schedule {
    pub fn constant(value: f64) -> Self {
        Self { coef: value, exp: 0.0 }
    }

    pub fn at(&self, t: usize) -> f64 {
        self.coef * (t.max(1) as f64).powf(-self.exp)
    }
}

/// What is trained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransferMode {
    /// Function-space recursion with the designed kernel.
    Rkhs,
    /// The two-layer network itself.
    Network,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TargetConfig {
    pub r0: f64,
    pub r1: f64,
    pub profile0: CoefficientProfile,
    pub profile1: CoefficientProfile,
    /// Sup-norms of `φ₀` and `φ₁`; their sum should not exceed 1.
    pub amplitude0: f64,
    pub amplitude1: f64,
    pub seed: u64,
}

impl Default for TargetConfig {
    fn default() -> Self {
        Self {
            r0: 1.0,
            r1: 0.5,
            profile0: CoefficientProfile::PowerLaw { exponent: 1.0 },
            profile1: CoefficientProfile::PowerLaw { exponent: 1.0 },
            amplitude0: 0.7,
            amplitude1: 0.3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransferConfig {
    #[serde(rename = "T0")]
    pub t0: Vec<usize>,
    #[serde(rename = "T1")]
    pub t1: Vec<usize>,
    pub eta0: Schedule,
    pub eta1: Schedule,
    pub lambda0: Schedule,
    pub lambda1: Schedule,
    /// Network width, used in network mode.
    #[serde(rename = "M")]
    pub width: usize,
    /// Input dimension; only the circle is supported.
    pub d: usize,
    pub kernel: KernelSpec,
    pub mode: TransferMode,
    pub targets: TargetConfig,
    pub seeds: Vec<u64>,
    /// Quadrature points for errors in network mode.
    pub eval: usize,
    /// Quadrature points for the kernel spectrum the targets are built on.
    pub spectrum_q: usize,
    /// Fail instead of warning when `4(6 + λ₁)η₁ > 1`.
    pub enforce_admissibility: bool,
}

impl Default for TransferConfig {
    fn default() -> Self {
        Self {
            t0: (7..=12).map(|k| 1 << k).collect(),
            t1: (6..=10).map(|k| 1 << k).collect(),
            eta0: Schedule::constant(0.5),
            eta1: Schedule::constant(0.04),
            lambda0: Schedule { coef: 1.0, exp: 0.4 },
            lambda1: Schedule { coef: 1.0, exp: 0.5 },
            width: 512,
            d: 2,
            kernel: KernelSpec::designed(2.0, 64),
            mode: TransferMode::Rkhs,
            targets: TargetConfig::default(),
            seeds: (0..8).collect(),
            eval: 256,
            spectrum_q: 256,
            enforce_admissibility: false,
        }
    }
}

impl TransferConfig {
    fn validate(&self) -> Result<()> {
        if self.t0.is_empty() || self.t1.is_empty() {
            return Err(Error::param("T0/T1", "need at least one value each"));
        }
        if self.seeds.is_empty() {
            return Err(Error::param("seeds", "need at least one seed"));
        }
        if self.d != 2 {
            return Err(Error::param("d", "only the circle (d = 2) is supported"));
        }
        if self.eval < 64 {
            return Err(Error::param("eval", "need at least 64 quadrature points"));
        }
        for (name, s) in [("eta0", self.eta0), ("eta1", self.eta1), ("lambda0", self.lambda0), ("lambda1", self.lambda1)] {
            if !(s.coef >= 0.0 && s.coef.is_finite() && s.exp.is_finite()) {
                return Err(Error::param(name, "schedule needs a finite coef >= 0 and a finite exp"));
            }
        }
        let t = &self.targets;
        if !(t.amplitude0 >= 0.0 && t.amplitude1 >= 0.0 && t.amplitude0 + t.amplitude1 <= 1.0) {
            return Err(Error::param("amplitude", "target amplitudes must be >= 0 and sum to at most 1"));
        }
        if self.mode == TransferMode::Rkhs && !matches!(self.kernel, KernelSpec::Designed { .. }) {
            return Err(Error::param("kernel", "rkhs mode needs the designed kernel"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferRow {
    #[serde(rename = "T0")]
    pub t0: usize,
    #[serde(rename = "T1")]
    pub t1: usize,
    pub seed: u64,
    /// `‖ĝ − φ‖²` after fine-tuning.
    pub error: f64,
    /// `‖φ̂₀ − φ₀‖²` after pre-training.
    pub pretrain_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferResult {
    pub rows: Vec<TransferRow>,
    pub warnings: Vec<String>,
}

impl TransferResult {
    /// One observation per row with `T₀, T₁ ≥ 1`, grouped by seed.
    pub fn observations(&self) -> Result<Vec<Observation>> {
        self.rows
            .iter()
            .filter(|r| r.t0 >= 1 && r.t1 >= 1)
            .map(|r| Observation::new(r.t0 as u64, r.t1 as u64, r.error, format!("seed-{}", r.seed)))
            .collect()
    }
}

/// The median error over seeds at each `(T₀, T₁)` with both at least 1.
pub fn median_observations(rows: &[TransferRow]) -> Result<Vec<Observation>> {
    let mut cells: Vec<((usize, usize), Vec<f64>)> = Vec::new();
    for r in rows.iter().filter(|r| r.t0 >= 1 && r.t1 >= 1) {
        match cells.iter_mut().find(|(k, _)| *k == (r.t0, r.t1)) {
            Some((_, v)) => v.push(r.error),
            None => cells.push(((r.t0, r.t1), vec![r.error])),
        }
    }
    cells
        .into_iter()
        .map(|((t0, t1), mut v)| Observation::new(t0 as u64, t1 as u64, median(&mut v).expect("non-empty cell"), "median"))
        .collect()
}

struct Targets {
    phi0: FourierSeries,
    phi: FourierSeries,
}

fn build_targets(cfg: &TransferConfig) -> Result<Targets> {
    let spec: SpectrumReport = match cfg.kernel {
        KernelSpec::Designed { xi, modes, scale } => SpectrumReport::designed(xi, modes, scale)?,
        KernelSpec::NtkMonteCarlo { .. } => spectrum(&cfg.kernel, cfg.spectrum_q)?,
        KernelSpec::RandomFeature { .. } => {
            return Err(Error::param("kernel", "targets need a stationary kernel (designed or ntk-montecarlo)"));
        }
    };
    let t = &cfg.targets;
    let part = |r: f64, profile: &CoefficientProfile, amp: f64, seed: u64| -> Result<FourierSeries> {
        let f = make_target(&spec, r, profile, seed)?;
        Ok(f.scaled(amp).as_fourier().expect("targets are Fourier series").clone())
    };
    let phi0 = part(t.r0, &t.profile0, t.amplitude0, t.seed)?;
    let phi1 = part(t.r1, &t.profile1, t.amplitude1, t.seed.wrapping_add(1))?;
    let phi = phi0.add(&phi1);
    Ok(Targets { phi0, phi })
}

fn draw_angles(seed: u64, stream: Stream, n: usize) -> Vec<f64> {
    let mut rng = rng_for(seed, stream);
    (0..n).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect()
}

/// Runs the pre-train / fine-tune grid for every seed.
pub fn transfer_experiment(cfg: &TransferConfig) -> Result<TransferResult> {
    cfg.validate()?;
    let mut warnings = Vec::new();
    for &t1 in &cfg.t1 {
        let (eta, lambda) = (cfg.eta1.at(t1), cfg.lambda1.at(t1));
        if 4.0 * (6.0 + lambda) * eta > 1.0 {
            let msg = format!("T1={t1}: 4(6+lambda1)eta1 = {:.3} exceeds 1", 4.0 * (6.0 + lambda) * eta);
            if cfg.enforce_admissibility {
                return Err(Error::param("eta1", msg));
            }
            warnings.push(msg);
        }
    }
    let targets = build_targets(cfg)?;
    let t0_max = cfg.t0.iter().copied().max().unwrap_or(0);
    let t1_max = cfg.t1.iter().copied().max().unwrap_or(0);

    let tasks: Vec<(u64, usize)> = cfg.seeds.iter().flat_map(|&s| cfg.t0.iter().map(move |&t0| (s, t0))).collect();
    let chunks = tasks
        .par_iter()
        .map(|&(seed, t0)| {
            let pre = draw_angles(seed, Stream::PretrainData, t0_max);
            let fine = draw_angles(seed, Stream::FinetuneData, t1_max);
            match cfg.mode {
                TransferMode::Rkhs => rkhs_cell(cfg, &targets, seed, t0, &pre, &fine),
                TransferMode::Network => network_cell(cfg, &targets, seed, t0, &pre, &fine),
            }
        })
        .collect::<Result<Vec<Vec<TransferRow>>>>()?;
    Ok(TransferResult {
        rows: chunks.into_iter().flatten().collect(),
        warnings,
    })
}

fn rkhs_cell(cfg: &TransferConfig, tg: &Targets, seed: u64, t0: usize, pre: &[f64], fine: &[f64]) -> Result<Vec<TransferRow>> {
    let kernel = Kernel::build(&cfg.kernel)?;
    let zero = FunctionRep::fourier(FourierSeries::zero(0));
    let phi0_hat = reference_asgd_on(&kernel, &tg.phi0, &pre[..t0], cfg.eta0.at(t0), cfg.lambda0.at(t0), &zero)?;
    let pretrain_error = phi0_hat.as_fourier().expect("fourier").distance_sq(&tg.phi0);
    cfg.t1
        .iter()
        .map(|&t1| {
            let g = reference_asgd_on(&kernel, &tg.phi, &fine[..t1], cfg.eta1.at(t1), cfg.lambda1.at(t1), &phi0_hat)?;
            Ok(TransferRow {
                t0,
                t1,
                seed,
                error: g.as_fourier().expect("fourier").distance_sq(&tg.phi),
                pretrain_error,
            })
        })
        .collect()
}

fn network_cell(cfg: &TransferConfig, tg: &Targets, seed: u64, t0: usize, pre: &[f64], fine: &[f64]) -> Result<Vec<TransferRow>> {
    let net = init_network(cfg.width, 2, seed)?;
    let sampler = |angles: &[f64], target: &FourierSeries| {
        let mut i = 0;
        let angles = angles.to_vec();
        let target = target.clone();
        move |x: &mut [f64]| {
            let th = angles[i];
            i += 1;
            x.copy_from_slice(&circle_point(th));
            target.eval(th)
        }
    };
    let (_, pre_avg) = run_asgd(&net, sampler(&pre[..t0], &tg.phi0), t0, cfg.eta0.at(t0), cfg.lambda0.at(t0))?;
    let pretrain_error = l2_error(&tg.phi0, &pre_avg, cfg.eval)?;
    let start = pre_avg.rebased();
    cfg.t1
        .iter()
        .map(|&t1| {
            let (_, avg) = run_asgd(&start, sampler(&fine[..t1], &tg.phi), t1, cfg.eta1.at(t1), cfg.lambda1.at(t1))?;
            Ok(TransferRow {
                t0,
                t1,
                seed,
                error: l2_error(&tg.phi, &avg, cfg.eval)?,
                pretrain_error,
            })
        })
        .collect()
}
