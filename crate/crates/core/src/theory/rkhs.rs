//! ASGD carried out directly on functions:
//! `g⁽ᵗ⁺¹⁾ = (1 − ηλ)·g⁽ᵗ⁾ − η·(g⁽ᵗ⁾(x_t) − y_t)·k(·, x_t)`,
//! returning the uniform average of `g⁽⁰⁾, …, g⁽ᵀ⁾`.
//!
//! With the designed kernel and a Fourier initialization the recursion acts
//! on a finite coefficient vector. Any other kernel uses a kernel expansion
//! that grows by one anchor per step, and whose average is formed in closed
//! form from geometric sums.

use rand::Rng;

use super::function::{Basis, CircleFunction, FourierSeries, FunctionRep, KernelExpansion};
use super::kernel::Kernel;
use super::network::check_rate;
use super::{rng_for, Stream};
use crate::error::{Error, Result};

/// Runs `t` steps on inputs drawn uniformly on the circle from `seed`.
pub fn reference_asgd<F: CircleFunction + ?Sized>(
    kernel: &Kernel,
    target: &F,
    t: usize,
    eta: f64,
    lambda: f64,
    init: &FunctionRep,
    seed: u64,
) -> Result<FunctionRep> {
    let mut rng = rng_for(seed, Stream::PretrainData);
    let angles: Vec<f64> = (0..t).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect();
    reference_asgd_on(kernel, target, &angles, eta, lambda, init)
}

/// Runs one step per angle in `angles`, labelled by `target`.
pub fn reference_asgd_on<F: CircleFunction + ?Sized>(
    kernel: &Kernel,
    target: &F,
    angles: &[f64],
    eta: f64,
    lambda: f64,
    init: &FunctionRep,
) -> Result<FunctionRep> {
    check_rate(eta, lambda)?;
    match (&init.basis, kernel) {
        (Basis::Fourier(f), Kernel::Designed { xi, modes, scale }) => {
            let gammas: Vec<f64> = (1..=*modes).map(|l| scale * (l as f64).powf(-xi) / 2.0).collect();
            Ok(FunctionRep::fourier(fourier_recursion(&gammas, target, angles, eta, lambda, f)))
        }
        (Basis::Fourier(_), _) => Err(Error::InvalidInput(
            "a Fourier initialization needs the designed kernel; use a kernel expansion".into(),
        )),
        (Basis::Kernel(e), _) if e.kernel != *kernel => {
            Err(Error::InvalidInput("initial expansion was built on a different kernel".into()))
        }
        (Basis::Kernel(e), _) => Ok(FunctionRep::expansion(expansion_recursion(target, angles, eta, lambda, e))),
    }
}

fn fourier_recursion<F: CircleFunction + ?Sized>(
    gammas: &[f64],
    target: &F,
    angles: &[f64],
    eta: f64,
    lambda: f64,
    init: &FourierSeries,
) -> FourierSeries {
    let modes = gammas.len().max(init.modes());
    let mut g = FourierSeries::zero(modes).add(init);
    let mut sum = g.clone();
    let rho = 1.0 - eta * lambda;
    let mut cs = vec![0.0; modes];
    let mut sn = vec![0.0; modes];
    let sqrt2 = std::f64::consts::SQRT_2;
    for &th in angles {
        let (s1, c1) = th.sin_cos();
        let (mut c, mut s) = (1.0, 0.0);
        let mut value = g.constant;
        for l in 0..modes {
            (c, s) = (c * c1 - s * s1, s * c1 + c * s1);
            cs[l] = c;
            sn[l] = s;
            value += sqrt2 * (g.cos[l] * c + g.sin[l] * s);
        }
        let step = eta * (value - target.at(th));
        g.constant *= rho;
        for l in 0..modes {
            // k(·, θ_t) has coefficient √2·γ_ℓ·cos ℓθ_t on √2·cos ℓθ
            let k = gammas.get(l).map_or(0.0, |gl| sqrt2 * gl);
            g.cos[l] = rho * g.cos[l] - step * k * cs[l];
            g.sin[l] = rho * g.sin[l] - step * k * sn[l];
        }
        sum.constant += g.constant;
        for l in 0..modes {
            sum.cos[l] += g.cos[l];
            sum.sin[l] += g.sin[l];
        }
    }
    sum.scaled(1.0 / (angles.len() + 1) as f64)
}

fn expansion_recursion<F: CircleFunction + ?Sized>(
    target: &F,
    angles: &[f64],
    eta: f64,
    lambda: f64,
    init: &KernelExpansion,
) -> KernelExpansion {
    let t = angles.len();
    let rho = 1.0 - eta * lambda;
    let kernel = &init.kernel;
    // g⁽ˢ⁾ = ρ^s·g⁽⁰⁾ + Σ_{j<s} u_j·k(·, θ_j)
    let mut u: Vec<f64> = Vec::with_capacity(t);
    let mut steps: Vec<f64> = Vec::with_capacity(t);
    let mut init_scale = 1.0;
    for &th in angles {
        let mut value = init_scale * init.eval(th);
        for (j, w) in u.iter().enumerate() {
            value += w * kernel.eval_angles(th, angles[j]);
        }
        let c = -eta * (value - target.at(th));
        u.iter_mut().for_each(|w| *w *= rho);
        u.push(c);
        steps.push(c);
        init_scale *= rho;
    }
    // geo[n] = Σ_{j<n} ρ^j
    let mut geo = vec![0.0; t + 2];
    let mut p = 1.0;
    for n in 1..t + 2 {
        geo[n] = geo[n - 1] + p;
        p *= rho;
    }
    let k = (t + 1) as f64;
    let mut anchors = init.anchors.clone();
    let mut weights: Vec<f64> = init.weights.iter().map(|w| w * geo[t + 1] / k).collect();
    for (s, &th) in angles.iter().enumerate() {
        anchors.push(th);
        weights.push(steps[s] * geo[t - s] / k);
    }
    KernelExpansion {
        kernel: kernel.clone(),
        anchors,
        weights,
    }
}
