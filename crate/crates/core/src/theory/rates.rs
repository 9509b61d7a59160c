//! Predicted convergence exponents.
//!
//! Fine-tuning uses `η₁ = T₁^(-ζ)`. Four regimes are distinguished by the
//! ordering of the source exponents `r₀, r₁` and by whether the learning rate
//! is small (`T₁λ₁η₁² → 0`, case I) or large (case II). Each balances a bias
//! term against a variance or initialization term to choose `λ₁`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_r(name: &str, r: f64) -> Result<()> {
    if !(0.5..=1.0).contains(&r) {
        return Err(Error::Domain(format!("{name} must lie in [1/2, 1], got {r}")));
    }
    Ok(())
}

fn check_xi(xi: f64) -> Result<()> {
    if !(xi > 1.0) || xi.is_nan() {
        return Err(Error::Domain(format!("xi must be > 1, got {xi}")));
    }
    Ok(())
}

/// Exponent of the pre-training rate `T₀^(-2r₀ξ/(2r₀ξ+1))`.
pub fn pretrain_rate(r0: f64, xi: f64) -> Result<f64> {
    check_r("r0", r0)?;
    check_xi(xi)?;
    if xi.is_infinite() {
        return Ok(1.0);
    }
    Ok(2.0 * r0 * xi / (2.0 * r0 * xi + 1.0))
}

/// `λ₀ = T₀^(-ξ/(2r₀ξ+1))`.
pub fn optimal_lambda0(t0: f64, r0: f64, xi: f64) -> Result<f64> {
    if !(t0 >= 1.0) || !t0.is_finite() {
        return Err(Error::Domain(format!("T0 must be >= 1, got {t0}")));
    }
    check_r("r0", r0)?;
    check_xi(xi)?;
    let exp = if xi.is_infinite() { 1.0 / (2.0 * r0) } else { xi / (2.0 * r0 * xi + 1.0) };
    Ok(t0.powf(-exp))
}

/// Magnitudes of the candidate dominant terms of the fine-tuning bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTerms {
    /// `(label, magnitude)` in the order a0, a1, b, c, d, e, f, g, h.
    pub terms: Vec<(String, f64)>,
    /// Label of the largest term; the first one on ties.
    pub dominant: String,
}

impl BoundTerms {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.terms.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }
}

/// Evaluates the nine candidate terms at one configuration.
///
/// `r0_err` is the measured pre-training error `R₀`.
pub fn bound_terms(t1: f64, lambda1: f64, eta1: f64, xi: f64, r0: f64, r1: f64, r0_err: f64) -> Result<BoundTerms> {
    for (name, v) in [("T1", t1), ("lambda1", lambda1), ("eta1", eta1), ("R0", r0_err)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be > 0, got {v}")));
        }
    }
    check_r("r0", r0)?;
    check_r("r1", r1)?;
    check_xi(xi)?;
    let l = lambda1;
    let inv_t = 1.0 / t1;
    let inv_t2e2 = 1.0 / (t1 * t1 * eta1 * eta1);
    let values = [
        ("a0", l.powf(2.0 * r0)),
        ("a1", l.powf(2.0 * r1)),
        ("b", inv_t / l * r0_err),
        ("c", inv_t * l.powf(2.0 * r1 - 1.0)),
        ("d", inv_t),
        ("e", inv_t2e2 / (l * l) * r0_err),
        ("f", inv_t2e2 * l.powf(2.0 * r1 - 2.0)),
        ("g", inv_t2e2 / l),
        ("h", inv_t * l.powf(-1.0 / xi)),
    ];
    let mut best = 0;
    for (i, (_, v)) in values.iter().enumerate() {
        if *v > values[best].1 {
            best = i;
        }
    }
    Ok(BoundTerms {
        terms: values.iter().map(|(l, v)| (l.to_string(), *v)).collect(),
        dominant: values[best].0.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateCase {
    #[serde(rename = "I-A")]
    IA,
    #[serde(rename = "I-B")]
    IB,
    #[serde(rename = "II-A")]
    IIA,
    #[serde(rename = "II-B")]
    IIB,
}

impl std::fmt::Display for RateCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RateCase::IA => "I-A",
            RateCase::IB => "I-B",
            RateCase::IIA => "II-A",
            RateCase::IIB => "II-B",
        })
    }
}

/// `λ₁ = T₁^(-t1_exponent) · R₀^(r0_exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaRule {
    #[serde(rename = "T1_exponent")]
    pub t1_exponent: f64,
    #[serde(rename = "R0_exponent")]
    pub r0_exponent: f64,
}

impl LambdaRule {
    pub fn eval(&self, t1: f64, r0_err: f64) -> f64 {
        t1.powf(-self.t1_exponent) * r0_err.powf(self.r0_exponent)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePrediction {
    pub case: RateCase,
    pub condition_ok: bool,
    /// The inequality that fails when `condition_ok` is false.
    pub violated: Option<String>,
    pub lambda1_rule: LambdaRule,
    /// The bound decays as `T₁^(-T1_exponent)`.
    #[serde(rename = "T1_exponent")]
    pub t1_exponent: f64,
    /// The bound scales as `R₀^(R0_exponent)`.
    #[serde(rename = "R0_exponent")]
    pub r0_exponent: f64,
    /// Decay in `T₀` after substituting the pre-training rate for `R₀`.
    #[serde(rename = "T0_exponent")]
    pub t0_exponent: f64,
}

fn row(case: RateCase, r0: f64, r1: f64, xi: f64, zeta: f64) -> Result<RatePrediction> {
    let (lambda1_rule, t1_exponent, r0_exponent) = match case {
        RateCase::IA | RateCase::IB => {
            let r = if case == RateCase::IA { r1 } else { r0 };
            (
                LambdaRule {
                    t1_exponent: (1.0 - zeta) / (r + 1.0),
                    r0_exponent: 1.0 / (2.0 * r + 2.0),
                },
                2.0 * r * (1.0 - zeta) / (r + 1.0),
                r / (r + 1.0),
            )
        }
        RateCase::IIA | RateCase::IIB => {
            let r = if case == RateCase::IIA { r1 } else { r0 };
            let k = 1.0 / (2.0 * r + 1.0);
            (LambdaRule { t1_exponent: k, r0_exponent: k }, 2.0 * r * k, 2.0 * r * k)
        }
    };
    Ok(RatePrediction {
        case,
        condition_ok: true,
        violated: None,
        lambda1_rule,
        t1_exponent,
        r0_exponent,
        t0_exponent: pretrain_rate(r0, xi)? * r0_exponent,
    })
}

/// Lower bound on `ζ` for case I-B.
fn ib_threshold(r0: f64, r1: f64, xi: f64) -> f64 {
    let a = r0 / (2.0 * r0 + 1.0);
    if xi.is_infinite() {
        // limit of ((2r₁−r₀)ξ + 1 − ξ)/(2r₁ξ + 1)
        return a.max((2.0 * r1 - r0 - 1.0) / (2.0 * r1));
    }
    a.max(((2.0 * r1 - r0) * xi + 1.0 - xi) / (2.0 * r1 * xi + 1.0))
}

/// Selects the regime for `(r₀, r₁, ξ, ζ)` and returns its exponents.
///
/// When both a case-I and a case-II row apply (on the `ζ` threshold), case I
/// is reported. If no row applies, the nearest row is returned with
/// `condition_ok = false` and the failing inequality.
pub fn rate_predict(r0: f64, r1: f64, xi: f64, zeta: f64) -> Result<RatePrediction> {
    check_r("r0", r0)?;
    check_r("r1", r1)?;
    check_xi(xi)?;
    if !(0.0..1.0).contains(&zeta) {
        return Err(Error::Domain(format!("zeta must lie in [0, 1), got {zeta}")));
    }
    if r0 >= r1 {
        let case = if zeta >= r1 / (2.0 * r1 + 1.0) { RateCase::IA } else { RateCase::IIA };
        return row(case, r0, r1, xi, zeta);
    }
    let ib = ib_threshold(r0, r1, xi);
    if zeta >= ib {
        return row(RateCase::IB, r0, r1, xi, zeta);
    }
    let small = r0 / (2.0 * r0 + 1.0);
    let gap = if xi.is_infinite() { 0.5 } else { (xi - 1.0) / (2.0 * xi) };
    let mut out;
    if zeta <= small {
        out = row(RateCase::IIB, r0, r1, xi, zeta)?;
        if r1 > r0 + gap {
            out.condition_ok = false;
            out.violated = Some(format!("r1 <= r0 + (xi-1)/(2 xi): {r1} > {}", r0 + gap));
        }
    } else {
        out = row(RateCase::IB, r0, r1, xi, zeta)?;
        out.condition_ok = false;
        out.violated = Some(format!("zeta >= {ib} (case I-B lower bound): zeta = {zeta}"));
    }
    Ok(out)
}

/// Where the case-I and case-II rows meet on the `ζ` axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseBoundary {
    pub zeta: f64,
    pub small_rate: RateCase,
    pub large_rate: RateCase,
    pub t1_exponents: (f64, f64),
    pub r0_exponents: (f64, f64),
    pub t1_match: bool,
    pub r0_match: bool,
}

/// Compares the two rows adjacent to the `ζ` threshold at `(r₀, r₁, ξ)`.
///
/// The `T₁` exponents agree there because both rows balance the same bias
/// term. The `R₀` exponents generally do not, since one row balances it
/// against `λ₁⁻²` and the other against `λ₁⁻¹`; this is reported through
/// `r0_match`.
pub fn case_boundary(r0: f64, r1: f64, xi: f64) -> Result<CaseBoundary> {
    check_r("r0", r0)?;
    check_r("r1", r1)?;
    check_xi(xi)?;
    let (zeta, small, large) = if r0 >= r1 {
        (r1 / (2.0 * r1 + 1.0), RateCase::IA, RateCase::IIA)
    } else {
        (r0 / (2.0 * r0 + 1.0), RateCase::IB, RateCase::IIB)
    };
    let a = row(small, r0, r1, xi, zeta)?;
    let b = row(large, r0, r1, xi, zeta)?;
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
    Ok(CaseBoundary {
        zeta,
        small_rate: small,
        large_rate: large,
        t1_exponents: (a.t1_exponent, b.t1_exponent),
        r0_exponents: (a.r0_exponent, b.r0_exponent),
        t1_match: close(a.t1_exponent, b.t1_exponent),
        r0_match: close(a.r0_exponent, b.r0_exponent),
    })
}
