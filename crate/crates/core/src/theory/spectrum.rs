//! Eigenvalues of kernel integral operators under the uniform distribution
//! on the circle.
//!
//! A stationary kernel `k(θ, θ') = κ(θ − θ')` is diagonalized by the Fourier
//! basis: with `κ(Δ) = c₀ + Σ_ℓ c_ℓ cos(ℓΔ)` the eigenvalue of `√2·cos ℓθ`
//! and `√2·sin ℓθ` is `c_ℓ/2`, and that of the constant function is `c₀`.
//! These are read off a DFT of `κ` sampled on `Q` equispaced angles.
//! Kernels without this symmetry fall back to the Nyström method: the
//! eigenvalues of the Gram matrix on the same grid, divided by `Q`.

use nalgebra::DMatrix;
use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use super::kernel::{Kernel, KernelSpec};
use crate::error::{Error, Result};
use crate::fit::fit_loglog_linear;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    Fourier,
    /// Sample-based fallback for kernels that are not stationary.
    Nystrom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Positive eigenvalues, non-increasing. For the Fourier method there is
    /// one entry per frequency `ℓ ≥ 1`, each of multiplicity two.
    pub eigenvalues: Vec<f64>,
    /// Frequency of each entry of `eigenvalues` (Fourier method only).
    pub frequencies: Vec<usize>,
    /// Eigenvalue of the constant function (Fourier method only).
    pub constant: f64,
    /// `−slope` of `ln γ` against `ln rank` over `fit_range`; `None` with
    /// fewer than two usable eigenvalues.
    pub fitted_xi: Option<f64>,
    /// Half-open index window into `eigenvalues` used for the fit.
    pub fit_range: (usize, usize),
    pub method: SpectrumMethod,
}

impl SpectrumReport {
    /// The exact spectrum of the designed kernel, without quadrature.
    pub fn designed(xi: f64, modes: usize, scale: f64) -> Result<Self> {
        Kernel::build(&KernelSpec::Designed { xi, modes, scale })?;
        let eigenvalues: Vec<f64> = (1..=modes).map(|l| scale * (l as f64).powf(-xi) / 2.0).collect();
        let frequencies = (1..=modes).collect();
        Ok(finish(eigenvalues, frequencies, 0.0, SpectrumMethod::Fourier, 0.0))
    }

    /// Eigenvalue attached to frequency `ℓ` (0 when absent).
    pub fn at_frequency(&self, l: usize) -> f64 {
        if l == 0 {
            return self.constant;
        }
        self.frequencies
            .iter()
            .position(|&f| f == l)
            .map(|i| self.eigenvalues[i])
            .unwrap_or(0.0)
    }

    /// Highest frequency carrying a positive eigenvalue.
    pub fn max_frequency(&self) -> usize {
        self.frequencies.iter().copied().max().unwrap_or(0)
    }
}

fn finish(values: Vec<f64>, freqs: Vec<usize>, constant: f64, method: SpectrumMethod, noise: f64) -> SpectrumReport {
    // anything below this is rounding noise of the transform
    let zero = values.iter().fold(0.0f64, |m, v| m.max(*v)) * 1e-13;
    let mut idx: Vec<usize> = (0..values.len()).filter(|&i| values[i] > zero).collect();
    // descending, lower frequency first on ties
    idx.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then_with(|| freqs.get(i).cmp(&freqs.get(j))));
    let eigenvalues: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
    let frequencies: Vec<usize> = if freqs.is_empty() {
        Vec::new()
    } else {
        idx.iter().map(|&i| freqs[i]).collect()
    };

    let floor = eigenvalues.first().map_or(0.0, |m| (m * 1e-12).max(noise));
    let end = eigenvalues.iter().take_while(|&&v| v > floor).count();
    let fitted_xi = if end >= 2 {
        let ranks: Vec<f64> = (1..=end).map(|r| r as f64).collect();
        fit_loglog_linear(&ranks, &eigenvalues[..end]).ok().map(|f| -f.slope)
    } else {
        None
    };
    SpectrumReport {
        eigenvalues,
        frequencies,
        constant,
        fitted_xi,
        fit_range: (0, end),
        method,
    }
}

/// Eigenvalues of the integral operator of `kernel` on the circle.
///
/// `q` must be a power of two, at least 4 and, for the designed kernel, at
/// least four times its mode count.
pub fn spectrum(kernel: &KernelSpec, q: usize) -> Result<SpectrumReport> {
    if q < 4 || !q.is_power_of_two() {
        return Err(Error::param("Q", format!("quadrature size must be a power of two >= 4, got {q}")));
    }
    if let KernelSpec::Designed { modes, .. } = kernel {
        if q < 4 * modes {
            return Err(Error::param("Q", format!("need Q >= 4L = {}", 4 * modes)));
        }
    }
    let k = Kernel::build(kernel)?;
    let step = std::f64::consts::TAU / q as f64;
    if k.is_stationary() {
        let mut buf: Vec<Complex<f64>> = (0..q).map(|j| Complex::new(k.eval_angles(step * j as f64, 0.0), 0.0)).collect();
        FftPlanner::new().plan_fft_forward(q).process(&mut buf);
        let scale = 1.0 / q as f64;
        let vals: Vec<f64> = (1..q / 2).map(|l| buf[l].re * scale).collect();
        let freqs: Vec<usize> = (1..q / 2).collect();
        let noise = match kernel {
            // Monte Carlo profile: entries below a few standard errors are noise
            KernelSpec::NtkMonteCarlo { samples, .. } => {
                let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                4.0 * peak / (*samples as f64).sqrt()
            }
            _ => 0.0,
        };
        Ok(finish(vals, freqs, buf[0].re * scale, SpectrumMethod::Fourier, noise))
    } else {
        let gram = DMatrix::from_fn(q, q, |i, j| k.eval_angles(step * i as f64, step * j as f64) / q as f64);
        let vals: Vec<f64> = gram.symmetric_eigen().eigenvalues.iter().copied().collect();
        Ok(finish(vals, Vec::new(), 0.0, SpectrumMethod::Nystrom, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn designed_quadrature_matches_closed_form() {
        let rep = spectrum(&KernelSpec::designed(2.0, 32), 128).unwrap();
        assert_eq!(rep.method, SpectrumMethod::Fourier);
        assert_eq!(rep.eigenvalues.len(), 32);
        for (v, &l) in rep.eigenvalues.iter().zip(&rep.frequencies) {
            assert!((v - (l as f64).powf(-2.0) / 2.0).abs() < 1e-8);
        }
        assert!((rep.fitted_xi.unwrap() - 2.0).abs() < 1e-3);
        assert!(rep.constant.abs() < 1e-14);
        let exact = SpectrumReport::designed(2.0, 32, 1.0).unwrap();
        assert!((exact.fitted_xi.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn refinement_leaves_leading_eigenvalues() {
        for spec in [KernelSpec::designed(1.5, 16), KernelSpec::NtkMonteCarlo { samples: 4000, seed: 1 }] {
            let a = spectrum(&spec, 64).unwrap();
            let b = spectrum(&spec, 128).unwrap();
            for k in 0..10.min(a.eigenvalues.len()) {
                assert!((a.eigenvalues[k] - b.eigenvalues[k]).abs() < 1e-6, "{spec:?} {k}");
            }
        }
    }

    #[test]
    fn random_feature_uses_nystrom_and_sorts() {
        let rep = spectrum(&KernelSpec::RandomFeature { width: 32, seed: 3 }, 64).unwrap();
        assert_eq!(rep.method, SpectrumMethod::Nystrom);
        for w in rep.eigenvalues.windows(2) {
            assert!(w[0] >= w[1]);
        }
        assert!(rep.eigenvalues.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn tanh_ntk_has_odd_frequencies_only() {
        let rep = spectrum(&KernelSpec::NtkMonteCarlo { samples: 20000, seed: 2 }, 64).unwrap();
        let (lo, hi) = rep.fit_range;
        assert!(hi > lo);
        for &l in &rep.frequencies[..hi.min(4)] {
            assert_eq!(l % 2, 1, "{:?}", &rep.frequencies[..hi]);
        }
    }

    #[test]
    fn rejects_bad_quadrature() {
        assert!(spectrum(&KernelSpec::designed(2.0, 32), 100).is_err());
        assert!(spectrum(&KernelSpec::designed(2.0, 32), 64).is_err());
        assert!(spectrum(&KernelSpec::designed(0.5, 4), 64).is_err());
    }
}
