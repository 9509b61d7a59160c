//! The two-layer network and its averaged-SGD training.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{rng_for, Stream};
use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Tanh,
}

impl Activation {
    /// `(σ(u), σ'(u))`.
    #[inline]
    pub fn eval(self, u: f64) -> (f64, f64) {
        match self {
            Activation::Tanh => {
                let t = u.tanh();
                (t, 1.0 - t * t)
            }
        }
    }
}

/// Parameters `Θ = (a, b)` of a width-`M` network together with the
/// snapshot `(a⁰, b⁰)` that the regularizer pulls towards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkState {
    m: usize,
    d: usize,
    a: Vec<f64>,
    /// Row-major `M × d`.
    b: Vec<f64>,
    a0: Vec<f64>,
    b0: Vec<f64>,
    activation: Activation,
}

/// Draws a network whose output is identically zero.
///
/// Rows come in pairs sharing one direction drawn uniformly from the unit
/// sphere, with output weights `+1` and `-1`.
pub fn init_network(m: usize, d: usize, seed: u64) -> Result<NetworkState> {
    if m == 0 || m % 2 != 0 {
        return Err(Error::param("M", format!("width must be even and positive, got {m}")));
    }
    if d == 0 {
        return Err(Error::param("d", "input dimension must be >= 1"));
    }
    let mut rng = rng_for(seed, Stream::NetworkInit);
    let mut b = Vec::with_capacity(m * d);
    let mut a = Vec::with_capacity(m);
    let mut row = vec![0.0; d];
    for _ in 0..m / 2 {
        loop {
            for v in row.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
            let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-12 {
                row.iter_mut().for_each(|v| *v /= norm);
                break;
            }
        }
        b.extend_from_slice(&row);
        b.extend_from_slice(&row);
        a.push(1.0);
        a.push(-1.0);
    }
    Ok(NetworkState {
        m,
        d,
        a0: a.clone(),
        b0: b.clone(),
        a,
        b,
        activation: Activation::Tanh,
    })
}

impl NetworkState {
    /// A network with explicit parameters; the snapshot equals them.
    pub fn from_parts(a: Vec<f64>, b: Vec<f64>, d: usize, activation: Activation) -> Result<Self> {
        let m = a.len();
        if m == 0 || d == 0 || b.len() != m * d {
            return Err(Error::InvalidInput(format!(
                "expected {m} x {d} input weights, got {} values",
                b.len()
            )));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("network parameters must be finite".into()));
        }
        Ok(Self {
            m,
            d,
            a0: a.clone(),
            b0: b.clone(),
            a,
            b,
            activation,
        })
    }

    pub fn width(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b_row(&self, r: usize) -> &[f64] {
        &self.b[r * self.d..(r + 1) * self.d]
    }

    pub fn a0(&self) -> &[f64] {
        &self.a0
    }

    pub fn b0_row(&self, r: usize) -> &[f64] {
        &self.b0[r * self.d..(r + 1) * self.d]
    }

    /// The same parameters with the snapshot moved to them, as used to
    /// start fine-tuning from a pre-trained average.
    pub fn rebased(&self) -> Self {
        Self {
            a0: self.a.clone(),
            b0: self.b.clone(),
            ..self.clone()
        }
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::InvalidInput(format!("input has dimension {}, expected {}", x.len(), self.d)));
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidInput(format!("input norm {norm} is not 1")));
        }
        Ok(())
    }

    /// `g_Θ(x)` for a unit vector `x`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let mut sum = 0.0;
        for r in 0..self.m {
            let u = dot(self.b_row(r), x);
            sum += self.a[r] * self.activation.eval(u).0;
        }
        sum / (self.m as f64).sqrt()
    }

    /// One ASGD update on the sample `(x, y)`.
    ///
    /// Both layers move by `-η` times the gradient of
    /// `½(g(x) − y)² + (λ/2)(‖a − a⁰‖² + Σ_r ‖b_r − b_r⁰‖²)`, with `g`
    /// evaluated before the step.
    pub fn asgd_step(&mut self, x: &[f64], y: f64, eta: f64, lambda: f64) -> Result<()> {
        self.check_input(x)?;
        check_rate(eta, lambda)?;
        if !y.is_finite() {
            return Err(Error::InvalidInput("target value must be finite".into()));
        }
        self.step_unchecked(x, y, eta, lambda);
        Ok(())
    }

    pub(crate) fn step_unchecked(&mut self, x: &[f64], y: f64, eta: f64, lambda: f64) {
        let e = self.eval_unchecked(x) - y;
        let shrink = 1.0 - eta * lambda;
        let g = eta * e / (self.m as f64).sqrt();
        let d = self.d;
        for r in 0..self.m {
            let (s, sp) = self.activation.eval(dot(&self.b[r * d..(r + 1) * d], x));
            let a_old = self.a[r];
            self.a[r] = self.a0[r] + shrink * (a_old - self.a0[r]) - g * s;
            let coef = g * a_old * sp;
            for k in 0..d {
                let i = r * d + k;
                self.b[i] = self.b0[i] + shrink * (self.b[i] - self.b0[i]) - coef * x[k];
            }
        }
    }

    fn accumulate(&self, a_sum: &mut [f64], b_sum: &mut [f64]) {
        a_sum.iter_mut().zip(&self.a).for_each(|(s, v)| *s += v);
        b_sum.iter_mut().zip(&self.b).for_each(|(s, v)| *s += v);
    }
}

#[inline]
pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub(crate) fn check_rate(eta: f64, lambda: f64) -> Result<()> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::param("eta", format!("learning rate must be >= 0, got {eta}")));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::param("lambda", format!("regularization must be >= 0, got {lambda}")));
    }
    Ok(())
}

/// Runs `t` ASGD steps and returns the final state and the uniform average
/// of `Θ⁽⁰⁾, …, Θ⁽ᵗ⁾`.
///
/// `sampler` writes a unit input into its argument and returns the label.
/// Both returned states keep the snapshot of `state`.
pub fn run_asgd<S>(state: &NetworkState, mut sampler: S, t: usize, eta: f64, lambda: f64) -> Result<(NetworkState, NetworkState)>
where
    S: FnMut(&mut [f64]) -> f64,
{
    check_rate(eta, lambda)?;
    let mut cur = state.clone();
    let mut a_sum = vec![0.0; cur.m];
    let mut b_sum = vec![0.0; cur.m * cur.d];
    cur.accumulate(&mut a_sum, &mut b_sum);
    let mut x = vec![0.0; cur.d];
    for _ in 0..t {
        let y = sampler(&mut x);
        cur.asgd_step(&x, y, eta, lambda)?;
        cur.accumulate(&mut a_sum, &mut b_sum);
    }
    let k = (t + 1) as f64;
    let avg = NetworkState {
        a: a_sum.into_iter().map(|v| v / k).collect(),
        b: b_sum.into_iter().map(|v| v / k).collect(),
        ..cur.clone()
    };
    Ok((cur, avg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::circle_point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fresh_network_is_zero() {
        for (m, d, seed) in [(2, 2, 0), (64, 2, 1), (10, 5, 2)] {
            let net = init_network(m, d, seed).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
            for _ in 0..100 {
                let mut x: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
                let n = dot(&x, &x).sqrt();
                x.iter_mut().for_each(|v| *v /= n);
                assert_eq!(net.eval(&x).unwrap(), 0.0);
            }
            for r in 0..m {
                assert!((dot(net.b0_row(r), net.b0_row(r)).sqrt() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn init_is_deterministic_and_rejects_odd_width() {
        assert_eq!(init_network(32, 3, 7).unwrap(), init_network(32, 3, 7).unwrap());
        assert_ne!(init_network(32, 3, 7).unwrap(), init_network(32, 3, 8).unwrap());
        assert!(init_network(3, 2, 0).is_err());
    }

    #[test]
    fn hand_evaluation() {
        let net = NetworkState::from_parts(vec![1.0, 1.0], vec![1.0, 0.0, 0.0, 1.0], 2, Activation::Tanh).unwrap();
        let v = net.eval(&[1.0, 0.0]).unwrap();
        assert!((v - (1f64.tanh() + 0.0) / 2f64.sqrt()).abs() < 1e-15);
        assert!((v - 0.5385).abs() < 1e-4);

        let net = NetworkState::from_parts(vec![1.0, -1.0], vec![0.6, 0.8, 0.6, 0.8], 2, Activation::Tanh).unwrap();
        assert_eq!(net.eval(&circle_point(1.234)).unwrap(), 0.0);
        assert!(net.eval(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn zero_rate_leaves_state() {
        let mut net = init_network(8, 2, 3).unwrap();
        let before = net.clone();
        net.asgd_step(&circle_point(0.3), 0.7, 0.0, 0.5).unwrap();
        assert_eq!(net, before);
    }

    #[test]
    fn first_step_moves_output_weights() {
        let mut net = init_network(16, 2, 4).unwrap();
        let x = circle_point(2.0);
        let (eta, y) = (0.3, 0.8);
        net.asgd_step(&x, y, eta, 0.1).unwrap();
        for r in 0..16 {
            let s = dot(net.b0_row(r), &x).tanh();
            let expected = net.a0()[r] + eta / 4.0 * y * s;
            assert!((net.a()[r] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_fit_contracts_towards_snapshot() {
        let mut net = init_network(8, 2, 5).unwrap();
        for k in 0..5 {
            net.asgd_step(&circle_point(k as f64), 0.5, 0.2, 0.0).unwrap();
        }
        let x = circle_point(0.9);
        let y = net.eval(&x).unwrap();
        let before = net.clone();
        let (eta, lambda) = (0.1, 0.5);
        net.asgd_step(&x, y, eta, lambda).unwrap();
        let f = 1.0 - eta * lambda;
        for r in 0..8 {
            let da = net.a()[r] - net.a0()[r];
            assert!((da - f * (before.a()[r] - before.a0()[r])).abs() < 1e-14);
            for k in 0..2 {
                let db = net.b_row(r)[k] - net.b0_row(r)[k];
                assert!((db - f * (before.b_row(r)[k] - before.b0_row(r)[k])).abs() < 1e-14);
            }
        }
    }

    fn risk(net: &NetworkState, x: &[f64], y: f64, lambda: f64) -> f64 {
        let e = net.eval_unchecked(x) - y;
        let mut reg = 0.0;
        for r in 0..net.m {
            reg += (net.a[r] - net.a0[r]).powi(2);
            for k in 0..net.d {
                reg += (net.b[r * net.d + k] - net.b0[r * net.d + k]).powi(2);
            }
        }
        0.5 * e * e + 0.5 * lambda * reg
    }

    #[test]
    fn step_is_gradient_descent_on_regularized_risk() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..10 {
            let mut net = init_network(6, 2, trial).unwrap();
            for _ in 0..3 {
                let th: f64 = rng.random_range(0.0..6.28);
                net.asgd_step(&circle_point(th), rng.random_range(-1.0..1.0), 0.5, 0.1).unwrap();
            }
            let x = circle_point(rng.random_range(0.0..6.28));
            let y: f64 = rng.random_range(-1.0..1.0);
            let (eta, lambda) = (0.05, 0.3);
            let mut stepped = net.clone();
            stepped.asgd_step(&x, y, eta, lambda).unwrap();
            let h = 1e-6;
            let n_params = net.m * (1 + net.d);
            for p in 0..n_params {
                let mut plus = net.clone();
                let mut minus = net.clone();
                let (after, before) = if p < net.m {
                    plus.a[p] += h;
                    minus.a[p] -= h;
                    (stepped.a[p], net.a[p])
                } else {
                    plus.b[p - net.m] += h;
                    minus.b[p - net.m] -= h;
                    (stepped.b[p - net.m], net.b[p - net.m])
                };
                let grad = (risk(&plus, &x, y, lambda) - risk(&minus, &x, y, lambda)) / (2.0 * h);
                let delta = after - before;
                let expected = -eta * grad;
                assert!(
                    (delta - expected).abs() <= 1e-6 * expected.abs().max(1e-9),
                    "trial {trial} param {p}: {delta} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn averaging_edge_cases() {
        let net = init_network(8, 2, 6).unwrap();
        let (_, avg) = run_asgd(&net, |_: &mut [f64]| 0.0, 0, 0.1, 0.0).unwrap();
        assert_eq!(avg, net);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sampler = |x: &mut [f64]| {
            let p = circle_point(rng.random_range(0.0..std::f64::consts::TAU));
            x.copy_from_slice(&p);
            0.0
        };
        let (fin, avg) = run_asgd(&net, sampler, 50, 0.1, 0.0).unwrap();
        assert_eq!(fin, net);
        for (u, v) in avg.a.iter().chain(&avg.b).zip(net.a.iter().chain(&net.b)) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn error_decreases_with_steps() {
        use crate::theory::function::l2_error;
        // odd frequencies only: the tanh kernel has no even ones
        let target = |th: f64| 0.5 * th.cos() + 0.3 * (3.0 * th).sin();
        let ts = [32usize, 64, 128, 256, 512, 1024];
        let mut medians = Vec::new();
        for &t in &ts {
            let mut errs: Vec<f64> = (0..8u64)
                .map(|seed| {
                    let net = init_network(128, 2, seed).unwrap();
                    let mut rng = crate::theory::rng_for(seed, Stream::PretrainData);
                    let sampler = |x: &mut [f64]| {
                        let th = rng.random_range(0.0..std::f64::consts::TAU);
                        x.copy_from_slice(&circle_point(th));
                        target(th)
                    };
                    let (_, avg) = run_asgd(&net, sampler, t, 0.5, 0.0).unwrap();
                    l2_error(&avg, &target, 256).unwrap()
                })
                .collect();
            errs.sort_by(f64::total_cmp);
            medians.push(errs[3]);
        }
        for w in medians.windows(2) {
            assert!(w[1] <= w[0], "{medians:?}");
        }
    }
}
