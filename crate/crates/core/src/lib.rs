//! Scaling laws for synthetic-to-real transfer, their estimation, and a
//! simulator of the two-stage training that produces them.
//!
//! * [`law`]: the simple and full laws and the [`Observation`] record.
//! * [`fit`]: least squares in log space, diagnostics, stabilization.
//! * [`theory`]: two-layer network, kernels, spectra, transfer runs, rates.
//! * [`complexity`]: Gaussian negative entropy of activation matrices.

pub mod complexity;
pub mod error;
pub mod fit;
pub mod law;
pub mod theory;

pub use error::{Error, Result};
pub use law::{FullLawParams, Observation, SimpleLawParams};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/laws.md")]
    mod laws {}
    #[doc = include_str!("../../../book/src/fitting.md")]
    mod fitting {}
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    mod diagnostics {}
    #[doc = include_str!("../../../book/src/network.md")]
    mod network {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/transfer.md")]
    mod transfer {}
    #[doc = include_str!("../../../book/src/rates.md")]
    mod rates {}
    #[doc = include_str!("../../../book/src/complexity.md")]
    mod complexity {}
}
