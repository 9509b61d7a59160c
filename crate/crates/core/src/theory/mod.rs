//! Simulation of transfer learning with a wide two-layer network.
//!
//! The setting is a scalar network `g(x) = M^(-1/2) Σ_r a_r σ(b_rᵀx)` with
//! `σ = tanh`, inputs on the unit sphere, trained by averaged SGD on a
//! regularized squared loss: first on a pre-training target `φ₀`, then,
//! starting from the averaged pre-trained parameters, on `φ = φ₀ + φ₁`.
//!
//! Around this sit the objects the analysis is phrased in:
//!
//! * [`kernel`]: the neural tangent kernel `k∞`, its random-feature
//!   approximation `k_M`, and a designed stationary kernel on the circle
//!   whose eigenvalues decay exactly as `ℓ^(-ξ)`;
//! * [`spectrum`]: eigenvalues of the kernel integral operator under the
//!   uniform distribution on the circle;
//! * [`function`]: Fourier-series and kernel-expansion functions, targets
//!   with a prescribed source condition, and the `L²` error;
//! * [`rkhs`]: the function-space ASGD recursion that the wide network
//!   follows, and [`prop`] for measuring how closely it does;
//! * [`experiment`]: the pre-train / fine-tune grid that produces an error
//!   surface over `(T₀, T₁)`;
//! * [`rates`]: the predicted exponents.
//!
//! Most geometry-dependent pieces assume the unit circle (`d = 2`) with
//! uniform inputs, where stationary kernels have an exact Fourier
//! eigensystem.

pub mod experiment;
pub mod function;
pub mod kernel;
pub mod network;
pub mod prop;
pub mod rates;
pub mod rkhs;
pub mod spectrum;

pub use experiment::{median_observations, transfer_experiment, Schedule, TargetConfig, TransferConfig, TransferMode, TransferResult, TransferRow};
pub use function::{l2_error, make_target, regularized_target, Basis, CircleFunction, CoefficientProfile, FourierSeries, FunctionRep, KernelExpansion, SourceCondition};
pub use kernel::{designed_kernel_eval, ntk_eval, ntk_reference, rf_kernel_eval, Kernel, KernelSpec, MonteCarloEstimate};
pub use network::{init_network, run_asgd, Activation, NetworkState};
pub use prop::{prop_a_gap, PropConfig, PropGap};
pub use rates::{bound_terms, case_boundary, optimal_lambda0, pretrain_rate, rate_predict, BoundTerms, CaseBoundary, LambdaRule, RateCase, RatePrediction};
pub use rkhs::{reference_asgd, reference_asgd_on};
pub use spectrum::{spectrum, SpectrumMethod, SpectrumReport};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random streams fanned out from one root seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    NetworkInit = 1,
    PretrainData = 2,
    FinetuneData = 3,
    MonteCarlo = 4,
    Target = 5,
    Probe = 6,
}

/// A generator for `stream` under `root`; streams never overlap.
pub fn rng_for(root: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root);
    rng.set_stream(stream as u64);
    rng
}

/// A point on the unit circle.
#[inline]
pub fn circle_point(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

/// Median, averaging the two middle values for even counts.
pub(crate) fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    })
}
