use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

const PRECEDENCE: &str = "\
Settings are resolved in this order, first match wins:
  1. command-line flags
  2. the TOML file given by --config (one table per command, e.g. [fit])
  3. built-in defaults

The output directory is --out, else `out` in the config file, else the
SYN2REAL_OUT environment variable, else ./out.";

#[derive(Debug, Parser)]
#[command(name = "syn2real", version, about = "Fit transfer scaling laws and run the transfer simulator", after_help = PRECEDENCE)]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Directory for reports, plot data and the manifest.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit L = D·n^-α + C to each group of an observation table.
    Fit(FitArgs),
    /// Fit L = δ(n^-α + γ)s^-β + ℰ jointly over all observations.
    FitFull(FitFullArgs),
    /// Estimate a shared D across groups by alternating median fits.
    StabilizeD(StabilizeArgs),
    /// Scan the α–D loss surface with C profiled out.
    Landscape(LandscapeArgs),
    /// Subtract the floor C and compare with D·n^-α.
    Linearize(LinearizeArgs),
    /// Run the pre-train / fine-tune simulation and write its error table.
    Simulate(SimulateArgs),
    /// Eigenvalues of a kernel integral operator on the circle.
    Spectrum(SpectrumArgs),
    /// Predicted exponents and bound terms for the fine-tuning error.
    Rates(RatesArgs),
    /// Negative entropy of a Gaussian fitted to an activation matrix.
    Complexity(ComplexityArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct FitFlags {
    #[arg(long)]
    pub multistart: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Observation CSV with columns n, s, error[, group].
    pub input: Option<PathBuf>,
    /// Estimate D instead of holding it fixed.
    #[arg(long, conflicts_with = "fixed_d")]
    pub free_d: bool,
    /// Hold D at this value (default 0.48).
    #[arg(long = "fixed-d", value_name = "D")]
    pub fixed_d: Option<f64>,
    #[command(flatten)]
    pub fit: FitFlags,
}

#[derive(Debug, Clone, Args)]
pub struct FitFullArgs {
    /// Observation CSV with columns n, s, error[, group].
    pub input: Option<PathBuf>,
    /// Estimate ℰ instead of holding it at zero.
    #[arg(long)]
    pub free_eps: bool,
    #[command(flatten)]
    pub fit: FitFlags,
}

#[derive(Debug, Clone, Args)]
pub struct StabilizeArgs {
    /// Observation CSV; the `group` column defines the groups.
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub max_rounds: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct LandscapeArgs {
    /// Observation CSV (a single curve).
    pub input: Option<PathBuf>,
    #[arg(long, value_parser = parse_range, value_name = "LO,HI")]
    pub alpha_range: Option<(f64, f64)>,
    #[arg(long = "d-range", value_parser = parse_range, value_name = "LO,HI")]
    pub d_range: Option<(f64, f64)>,
    #[arg(long)]
    pub n_alpha: Option<usize>,
    #[arg(long = "n-d")]
    pub n_d: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct LinearizeArgs {
    /// Observation CSV (a single curve).
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "d", value_name = "D")]
    pub d: Option<f64>,
    #[arg(long = "c", value_name = "C")]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Pre-training sample counts.
    #[arg(long = "t0", value_delimiter = ',', value_name = "T0,...")]
    pub t0: Option<Vec<usize>>,
    /// Fine-tuning sample counts.
    #[arg(long = "t1", value_delimiter = ',', value_name = "T1,...")]
    pub t1: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', value_name = "SEED,...")]
    pub seeds: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Quadrature size, a power of two.
    #[arg(long = "q", value_name = "Q")]
    pub q: Option<usize>,
    /// Use the designed kernel with this decay exponent.
    #[arg(long)]
    pub xi: Option<f64>,
    /// Use the designed kernel with this many modes.
    #[arg(long)]
    pub modes: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RatesArgs {
    /// Source exponent of the pre-training target (accepts a/b).
    #[arg(long, value_parser = parse_number)]
    pub r0: Option<f64>,
    /// Source exponent of the fine-tuning residual (accepts a/b).
    #[arg(long, value_parser = parse_number)]
    pub r1: Option<f64>,
    /// Eigenvalue decay exponent; `inf` allowed.
    #[arg(long, value_parser = parse_number)]
    pub xi: Option<f64>,
    /// Learning-rate exponent, η₁ = T₁^-ζ (accepts a/b).
    #[arg(long, value_parser = parse_number)]
    pub zeta: Option<f64>,
    #[arg(long = "t1")]
    pub t1: Option<f64>,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub eta1: Option<f64>,
    /// Pre-training error entering the bound.
    #[arg(long = "r0-err", value_name = "R0")]
    pub r0_err: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ComplexityArgs {
    /// Activation CSV, one sample per row; header optional.
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub shrinkage: Option<f64>,
}

/// A float or a fraction `a/b`.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            a / b
        }
        None => s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?,
    };
    if value.is_nan() {
        return Err(format!("not a number: {s:?}"));
    }
    Ok(value)
}

/// Two numbers separated by a comma.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected LO,HI, got {s:?}"))?;
    Ok((parse_number(a)?, parse_number(b)?))
}
