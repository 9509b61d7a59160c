//! Functions on the unit circle.
//!
//! Fourier series are stored in the orthonormal basis of `L²(uniform)`:
//! `1`, `√2·cos ℓθ`, `√2·sin ℓθ`. With that convention the squared `L²`
//! norm is the plain sum of squared coefficients.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::kernel::Kernel;
use super::network::NetworkState;
use super::spectrum::SpectrumReport;
use super::{circle_point, rng_for, Stream};
use crate::error::{Error, Result};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Anything that can be evaluated at an angle.
pub trait CircleFunction {
    fn at(&self, theta: f64) -> f64;
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FourierSeries {
    pub constant: f64,
    /// Coefficient of `√2·cos ℓθ` at index `ℓ − 1`.
    pub cos: Vec<f64>,
    /// Coefficient of `√2·sin ℓθ` at index `ℓ − 1`.
    pub sin: Vec<f64>,
}

impl FourierSeries {
    pub fn new(constant: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.len() != sin.len() {
            return Err(Error::InvalidInput(format!("{} cosine but {} sine coefficients", cos.len(), sin.len())));
        }
        if !constant.is_finite() || cos.iter().chain(&sin).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("coefficients must be finite".into()));
        }
        Ok(Self { constant, cos, sin })
    }

    pub fn zero(modes: usize) -> Self {
        Self {
            constant: 0.0,
            cos: vec![0.0; modes],
            sin: vec![0.0; modes],
        }
    }

    pub fn modes(&self) -> usize {
        self.cos.len()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let (s1, c1) = theta.sin_cos();
        let (mut c, mut s) = (1.0, 0.0);
        let mut sum = 0.0;
        for (a, b) in self.cos.iter().zip(&self.sin) {
            // rotate (cos ℓθ, sin ℓθ) by θ
            (c, s) = (c * c1 - s * s1, s * c1 + c * s1);
            sum += a * c + b * s;
        }
        self.constant + SQRT2 * sum
    }

    pub fn norm_sq(&self) -> f64 {
        self.constant * self.constant + self.cos.iter().chain(&self.sin).map(|v| v * v).sum::<f64>()
    }

    /// `‖self − other‖²` from the coefficients.
    pub fn distance_sq(&self, other: &Self) -> f64 {
        let n = self.modes().max(other.modes());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        let mut sum = (self.constant - other.constant).powi(2);
        for i in 0..n {
            sum += (get(&self.cos, i) - get(&other.cos, i)).powi(2) + (get(&self.sin, i) - get(&other.sin, i)).powi(2);
        }
        sum
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            constant: self.constant * k,
            cos: self.cos.iter().map(|v| v * k).collect(),
            sin: self.sin.iter().map(|v| v * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.modes().max(other.modes());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        Self {
            constant: self.constant + other.constant,
            cos: (0..n).map(|i| get(&self.cos, i) + get(&other.cos, i)).collect(),
            sin: (0..n).map(|i| get(&self.sin, i) + get(&other.sin, i)).collect(),
        }
    }
}

/// `Σ_i w_i k(·, x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelExpansion {
    pub kernel: Kernel,
    /// Anchor angles on the circle.
    pub anchors: Vec<f64>,
    pub weights: Vec<f64>,
}

impl KernelExpansion {
    pub fn new(kernel: Kernel, anchors: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if anchors.len() != weights.len() {
            return Err(Error::InvalidInput(format!("{} anchors but {} weights", anchors.len(), weights.len())));
        }
        Ok(Self { kernel, anchors, weights })
    }

    pub fn zero(kernel: Kernel) -> Self {
        Self {
            kernel,
            anchors: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.anchors
            .iter()
            .zip(&self.weights)
            .map(|(&a, w)| w * self.kernel.eval_angles(theta, a))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    Fourier(FourierSeries),
    Kernel(KernelExpansion),
}

/// The source condition `φ ∈ R(Σ^r)` a target was built under.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceCondition {
    pub r: f64,
    /// `‖Σ^(-r)φ‖`.
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionRep {
    pub basis: Basis,
    pub source: Option<SourceCondition>,
}

impl FunctionRep {
    pub fn fourier(series: FourierSeries) -> Self {
        Self {
            basis: Basis::Fourier(series),
            source: None,
        }
    }

    pub fn expansion(exp: KernelExpansion) -> Self {
        Self {
            basis: Basis::Kernel(exp),
            source: None,
        }
    }

    pub fn as_fourier(&self) -> Option<&FourierSeries> {
        match &self.basis {
            Basis::Fourier(f) => Some(f),
            Basis::Kernel(_) => None,
        }
    }

    pub fn as_expansion(&self) -> Option<&KernelExpansion> {
        match &self.basis {
            Basis::Kernel(k) => Some(k),
            Basis::Fourier(_) => None,
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match &self.basis {
            Basis::Fourier(f) => f.eval(theta),
            Basis::Kernel(k) => k.eval(theta),
        }
    }

    /// Multiplies the function, and its stored source norm, by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let basis = match &self.basis {
            Basis::Fourier(f) => Basis::Fourier(f.scaled(k)),
            Basis::Kernel(e) => Basis::Kernel(KernelExpansion {
                weights: e.weights.iter().map(|w| w * k).collect(),
                ..e.clone()
            }),
        };
        Self {
            basis,
            source: self.source.map(|s| SourceCondition { r: s.r, norm: s.norm * k.abs() }),
        }
    }

    /// Largest `|φ|` on a grid of `q` angles.
    pub fn sup_norm(&self, q: usize) -> f64 {
        let step = std::f64::consts::TAU / q as f64;
        (0..q).map(|j| self.eval(step * j as f64).abs()).fold(0.0, f64::max)
    }
}

impl<F: Fn(f64) -> f64> CircleFunction for F {
    fn at(&self, theta: f64) -> f64 {
        self(theta)
    }
}

impl CircleFunction for FunctionRep {
    fn at(&self, theta: f64) -> f64 {
        self.eval(theta)
    }
}

impl CircleFunction for FourierSeries {
    fn at(&self, theta: f64) -> f64 {
        self.eval(theta)
    }
}

/// Only meaningful for networks on the circle (`d = 2`).
impl CircleFunction for NetworkState {
    fn at(&self, theta: f64) -> f64 {
        self.eval_unchecked(&circle_point(theta))
    }
}

/// `‖f − g‖²` under the uniform distribution, by the trapezoid rule on `q`
/// equispaced angles. Exact for trigonometric polynomials of degree below
/// `q/2`.
pub fn l2_error<F: CircleFunction + ?Sized, G: CircleFunction + ?Sized>(f: &F, g: &G, q: usize) -> Result<f64> {
    if q < 64 {
        return Err(Error::param("Q", format!("quadrature needs at least 64 points, got {q}")));
    }
    let step = std::f64::consts::TAU / q as f64;
    let sum: f64 = (0..q)
        .map(|j| {
            let t = step * j as f64;
            (f.at(t) - g.at(t)).powi(2)
        })
        .sum();
    Ok(sum / q as f64)
}

/// Magnitudes `c_ℓ` of the coefficients a target is built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CoefficientProfile {
    /// `c_ℓ = ℓ^(-exponent)` on every available frequency.
    PowerLaw { exponent: f64 },
    /// `c_ℓ = 1` at one frequency, 0 elsewhere.
    SingleMode { mode: usize },
    /// `c_ℓ` listed from `ℓ = 1`.
    Explicit { values: Vec<f64> },
}

impl CoefficientProfile {
    fn at(&self, l: usize) -> f64 {
        match self {
            CoefficientProfile::PowerLaw { exponent } => (l as f64).powf(-exponent),
            CoefficientProfile::SingleMode { mode } => f64::from(u8::from(*mode == l)),
            CoefficientProfile::Explicit { values } => values.get(l - 1).copied().unwrap_or(0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            CoefficientProfile::PowerLaw { exponent } if !(*exponent > 0.5 && exponent.is_finite()) => {
                Err(Error::param("exponent", "profile exponent must be > 1/2 to be square-summable"))
            }
            CoefficientProfile::SingleMode { mode: 0 } => Err(Error::param("mode", "frequencies start at 1")),
            CoefficientProfile::Explicit { values } if values.iter().any(|v| !v.is_finite()) => {
                Err(Error::param("values", "profile entries must be finite"))
            }
            _ => Ok(()),
        }
    }
}

/// A target `φ` with `Σ^(-r)φ = c`, up to an overall scale.
///
/// Mode `ℓ` gets magnitude `γ_ℓ^r·c_ℓ` and a uniformly random phase split
/// between its cosine and sine. The result is rescaled so that its largest
/// absolute value on a fine grid is 1, and the stored source norm is scaled
/// alongside.
pub fn make_target(spec: &SpectrumReport, r: f64, profile: &CoefficientProfile, seed: u64) -> Result<FunctionRep> {
    if !(0.5..=1.0).contains(&r) {
        return Err(Error::param("r", format!("source exponent must lie in [1/2, 1], got {r}")));
    }
    profile.validate()?;
    let lmax = spec.max_frequency();
    if lmax == 0 {
        return Err(Error::InvalidInput("spectrum has no Fourier frequencies".into()));
    }
    let mut rng = rng_for(seed, Stream::Target);
    let mut series = FourierSeries::zero(lmax);
    let mut c_sq = 0.0;
    for l in 1..=lmax {
        let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let gamma = spec.at_frequency(l);
        let c = profile.at(l);
        if gamma <= 0.0 || c == 0.0 {
            continue;
        }
        let mag = gamma.powf(r) * c;
        series.cos[l - 1] = mag * phase.cos();
        series.sin[l - 1] = mag * phase.sin();
        c_sq += c * c;
    }
    if c_sq == 0.0 {
        return Err(Error::InvalidInput("profile has no weight on the spectrum's frequencies".into()));
    }
    let raw = FunctionRep {
        basis: Basis::Fourier(series),
        source: Some(SourceCondition { r, norm: c_sq.sqrt() }),
    };
    let sup = raw.sup_norm((16 * lmax).max(1024));
    Ok(raw.scaled(1.0 / sup))
}

/// `(Σ + λI)^(-1) Σ φ`: every mode is multiplied by `γ_ℓ/(γ_ℓ + λ)`.
pub fn regularized_target(spec: &SpectrumReport, target: &FunctionRep, lambda: f64) -> Result<FunctionRep> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::param("lambda", format!("must be > 0, got {lambda}")));
    }
    let f = target
        .as_fourier()
        .ok_or_else(|| Error::InvalidInput("regularized target needs a Fourier representation".into()))?;
    let shrink = |l: usize| {
        let g = spec.at_frequency(l);
        if g > 0.0 {
            g / (g + lambda)
        } else {
            0.0
        }
    };
    let out = FourierSeries {
        constant: f.constant * shrink(0),
        cos: f.cos.iter().enumerate().map(|(i, v)| v * shrink(i + 1)).collect(),
        sin: f.sin.iter().enumerate().map(|(i, v)| v * shrink(i + 1)).collect(),
    };
    let source = target.source.map(|s| SourceCondition {
        r: s.r,
        norm: source_norm(spec, &out, s.r),
    });
    Ok(FunctionRep {
        basis: Basis::Fourier(out),
        source,
    })
}

/// `‖Σ^(-r)f‖` computed mode by mode; modes outside the spectrum are skipped.
pub(crate) fn source_norm(spec: &SpectrumReport, f: &FourierSeries, r: f64) -> f64 {
    let mut sum = 0.0;
    for l in 1..=f.modes() {
        let g = spec.at_frequency(l);
        if g > 0.0 {
            let w = g.powf(-r);
            sum += (f.cos[l - 1] * w).powi(2) + (f.sin[l - 1] * w).powi(2);
        }
    }
    sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::init_network;

    fn designed(xi: f64, modes: usize) -> SpectrumReport {
        SpectrumReport::designed(xi, modes, 1.0).unwrap()
    }

    #[test]
    fn l2_of_cosine_is_half() {
        let f = FourierSeries::new(0.0, vec![1.0 / SQRT2], vec![0.0]).unwrap();
        assert!((f.eval(0.3) - 0.3f64.cos()).abs() < 1e-15);
        let e = l2_error(&f, &FourierSeries::zero(0), 64).unwrap();
        assert!((e - 0.5).abs() < 1e-15);
        assert_eq!(l2_error(&f, &f, 64).unwrap(), 0.0);
        assert!(l2_error(&f, &f, 32).is_err());
    }

    #[test]
    fn quadrature_matches_parseval() {
        let a = make_target(&designed(2.0, 20), 0.5, &CoefficientProfile::PowerLaw { exponent: 1.0 }, 1).unwrap();
        let b = make_target(&designed(1.5, 25), 1.0, &CoefficientProfile::PowerLaw { exponent: 0.8 }, 2).unwrap();
        let q = l2_error(&a, &b, 64).unwrap();
        let p = a.as_fourier().unwrap().distance_sq(b.as_fourier().unwrap());
        assert!((q - p).abs() < 1e-12, "{q} {p}");
    }

    #[test]
    fn network_error_against_zero_is_zero_at_init() {
        let net = init_network(16, 2, 4).unwrap();
        assert_eq!(l2_error(&FourierSeries::zero(3), &net, 64).unwrap(), 0.0);
    }

    #[test]
    fn single_mode_target() {
        let spec = designed(2.0, 8);
        let t = make_target(&spec, 0.5, &CoefficientProfile::SingleMode { mode: 1 }, 3).unwrap();
        let f = t.as_fourier().unwrap();
        let mag = (f.cos[0].powi(2) + f.sin[0].powi(2)).sqrt();
        // sup of √2·m·cos(θ − ψ) is √2·m, rescaled to 1
        assert!((mag - 1.0 / SQRT2).abs() < 1e-5, "{mag}");
        assert!(f.cos[1..].iter().chain(&f.sin[1..]).all(|&v| v == 0.0));
        let src = t.source.unwrap();
        let scale = mag / spec.at_frequency(1).sqrt();
        assert!((src.norm - scale).abs() < 1e-12);
        assert!((t.sup_norm(4096) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn stored_norm_matches_brute_force() {
        let spec = designed(2.0, 16);
        for (r, seed) in [(0.5, 1), (0.75, 2), (1.0, 3)] {
            let t = make_target(&spec, r, &CoefficientProfile::PowerLaw { exponent: 1.2 }, seed).unwrap();
            let f = t.as_fourier().unwrap();
            let mut sum = 0.0;
            for l in 1..=16 {
                let g = (l as f64).powf(-2.0) / 2.0;
                sum += (f.cos[l - 1] / g.powf(r)).powi(2) + (f.sin[l - 1] / g.powf(r)).powi(2);
            }
            assert!((t.source.unwrap().norm - sum.sqrt()).abs() < 1e-10 * sum.sqrt());
        }
    }

    #[test]
    fn smoother_source_has_smaller_unscaled_norm() {
        let spec = designed(2.0, 16);
        let p = CoefficientProfile::PowerLaw { exponent: 1.0 };
        let a = make_target(&spec, 0.5, &p, 7).unwrap();
        let b = make_target(&spec, 1.0, &p, 7).unwrap();
        // undo the sup-norm rescaling through the stored source norms
        let ua = a.as_fourier().unwrap().norm_sq() / a.source.unwrap().norm.powi(2);
        let ub = b.as_fourier().unwrap().norm_sq() / b.source.unwrap().norm.powi(2);
        assert!(ub < ua);
    }

    #[test]
    fn target_rejects_bad_inputs() {
        let spec = designed(2.0, 4);
        let p = CoefficientProfile::PowerLaw { exponent: 1.0 };
        assert!(make_target(&spec, 0.4, &p, 0).is_err());
        assert!(make_target(&spec, 1.1, &p, 0).is_err());
        assert!(make_target(&spec, 0.5, &CoefficientProfile::SingleMode { mode: 9 }, 0).is_err());
    }

    #[test]
    fn regularization_shrinks_coefficients() {
        let spec = designed(2.0, 16);
        let t = make_target(&spec, 0.5, &CoefficientProfile::PowerLaw { exponent: 1.0 }, 5).unwrap();
        let f = t.as_fourier().unwrap();

        let tiny = regularized_target(&spec, &t, 1e-14).unwrap();
        assert!(tiny.as_fourier().unwrap().distance_sq(f) < 1e-20);

        let g1 = spec.at_frequency(1);
        let half = regularized_target(&spec, &t, g1).unwrap();
        let h = half.as_fourier().unwrap();
        assert!((h.cos[0] - f.cos[0] / 2.0).abs() < 1e-15);
        for (a, b) in h.cos.iter().chain(&h.sin).zip(f.cos.iter().chain(&f.sin)) {
            assert!(a.abs() <= b.abs());
        }
        assert!(regularized_target(&spec, &t, 0.0).is_err());
    }

    #[test]
    fn regularization_bias_bound() {
        let spec = designed(2.0, 32);
        for r in [0.5, 0.75, 1.0] {
            let t = make_target(&spec, r, &CoefficientProfile::PowerLaw { exponent: 0.9 }, 11).unwrap();
            let norm = t.source.unwrap().norm;
            for lambda in [1e-4, 1e-3, 1e-2, 1e-1, 0.5] {
                let reg = regularized_target(&spec, &t, lambda).unwrap();
                let bias = reg.as_fourier().unwrap().distance_sq(t.as_fourier().unwrap());
                assert!(bias <= lambda.powf(2.0 * r) * norm * norm * (1.0 + 1e-12), "r={r} λ={lambda}");
            }
        }
    }

    #[test]
    fn kernel_expansion_evaluates_weighted_sum() {
        let k = Kernel::build(&crate::theory::KernelSpec::designed(2.0, 4)).unwrap();
        let e = KernelExpansion::new(k.clone(), vec![0.0, 1.0], vec![0.5, -2.0]).unwrap();
        let want = 0.5 * k.eval_angles(0.7, 0.0) - 2.0 * k.eval_angles(0.7, 1.0);
        assert!((e.eval(0.7) - want).abs() < 1e-15);
        assert!(KernelExpansion::new(k, vec![0.0], vec![]).is_err());
    }
}
