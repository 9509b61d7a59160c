//! One function per subcommand. Each resolves its settings, runs the
//! library, and returns the files to write; nothing here touches the disk
//! except to read inputs.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use syn2real::complexity::{gaussian_negative_entropy, ActivationMatrix};
use syn2real::fit::{fit_full, fit_loglog_linear, fit_simple, landscape, linearize, stabilize_d, FitOptions};
use syn2real::theory::{bound_terms, case_boundary, median_observations, rate_predict, spectrum, transfer_experiment, KernelSpec};
use syn2real::{Observation, SimpleLawParams};

use crate::args::*;
use crate::config::*;
use crate::error::{CliError, Result};
use crate::io;

/// Points on each dense plot curve.
const PLOT_POINTS: usize = 200;

/// What a command produced.
#[derive(Debug, Default)]
pub struct Artifacts {
    /// File name inside the output directory, and its contents.
    pub files: Vec<(String, Vec<u8>)>,
    /// The settings actually used.
    pub resolved: Value,
    pub seeds: Vec<u64>,
    /// Human-readable summary for stdout.
    pub summary: String,
}

impl Artifacts {
    fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }
}

fn resolved<T: Serialize>(value: &T) -> Result<Value> {
    serde_json::to_value(value).map_err(|e| CliError::Encode {
        what: "config".into(),
        message: e.to_string(),
    })
}

fn input(flag: &Option<PathBuf>, config: &Option<PathBuf>, section: &str) -> Result<PathBuf> {
    flag.clone()
        .or_else(|| config.clone())
        .ok_or_else(|| CliError::Usage(format!("no input file: pass a path or set `input` in [{section}]")))
}

fn apply_fit_flags(opts: &mut FitOptions, flags: &FitFlags) {
    if let Some(v) = flags.multistart {
        opts.multistart = v;
    }
    if let Some(v) = flags.seed {
        opts.seed = v;
    }
    if let Some(v) = flags.tol {
        opts.tol = v;
    }
    if let Some(v) = flags.max_iter {
        opts.max_iter = v;
    }
}

/// Splits observations by group, keeping first-appearance order.
fn by_group(obs: &[Observation]) -> Vec<(String, Vec<Observation>)> {
    let mut groups: Vec<(String, Vec<Observation>)> = Vec::new();
    for o in obs {
        match groups.iter_mut().find(|(g, _)| *g == o.group) {
            Some((_, v)) => v.push(o.clone()),
            None => groups.push((o.group.clone(), vec![o.clone()])),
        }
    }
    groups
}

fn in_group(group: &str) -> impl Fn(syn2real::Error) -> CliError + '_ {
    move |source| CliError::InGroup {
        group: group.to_string(),
        source,
    }
}

pub fn fit(args: &FitArgs, cfg: &RunConfig) -> Result<Artifacts> {
    let mut section = cfg.fit.clone();
    section.input = Some(input(&args.input, &section.input, "fit")?);
    if let Some(d) = args.fixed_d {
        section.free_d = false;
        section.options.fixed_d = Some(d);
    }
    if args.free_d {
        section.free_d = true;
    }
    if section.free_d {
        section.options.fixed_d = None;
    }
    apply_fit_flags(&mut section.options, &args.fit);
    let path = section.input.clone().unwrap();
    let obs = io::read_observations(&path)?;
    let groups = by_group(&obs);

    let mut out = Artifacts {
        resolved: resolved(&section)?,
        seeds: vec![section.options.seed],
        ..Artifacts::default()
    };
    let mut reports = Vec::new();
    for (name, rows) in &groups {
        let report = fit_simple(rows, &section.options).map_err(in_group(name))?;
        let p = *report.params.as_simple().expect("simple fit");
        let pts: Vec<(f64, f64)> = rows.iter().map(|o| (o.n as f64, o.error)).collect();
        let plot = io::plot_rows(&pts, PLOT_POINTS, |x| p.eval(x))?;
        let file = if groups.len() == 1 {
            "fit-plot.csv".to_string()
        } else {
            format!("fit-plot-{}.csv", io::file_stem(name))
        };
        out.add(file, io::plot_csv(&plot)?);
        out.summary += &format!(
            "{:<12} alpha={:.6} D={:.6} C={:.6} objective={:.3e}{}\n",
            if name.is_empty() { "-" } else { name },
            p.alpha(),
            p.d(),
            p.c(),
            report.objective,
            if report.warnings.is_empty() { "" } else { " (warnings)" }
        );
        reports.push(json!({
            "group": name,
            "observations": rows.len(),
            "log_r2": report.log_r2(rows),
            "fit": report,
        }));
    }
    out.files.insert(0, ("fit.json".into(), io::json("fit report", &json!({ "groups": reports }))?));
    Ok(out)
}

pub fn fit_full_cmd(args: &FitFullArgs, cfg: &RunConfig) -> Result<Artifacts> {
    let mut section = cfg.fit_full.clone();
    section.input = Some(input(&args.input, &section.input, "fit-full")?);
    if args.free_eps {
        section.options.fix_eps_zero = false;
    }
    apply_fit_flags(&mut section.options, &args.fit);
    let obs = io::read_observations(section.input.as_ref().unwrap())?;
    let report = fit_full(&obs, &section.options)?;
    let p = *report.params.as_full().expect("full fit");

    let mut out = Artifacts {
        resolved: resolved(&section)?,
        seeds: vec![section.options.seed],
        ..Artifacts::default()
    };
    out.add(
        "fit-full.json",
        io::json("fit report", &json!({ "observations": obs.len(), "log_r2": report.log_r2(&obs), "fit": report }))?,
    );
    let sizes: BTreeSet<u64> = obs.iter().map(|o| o.s).collect();
    for s in sizes {
        let pts: Vec<(f64, f64)> = obs.iter().filter(|o| o.s == s).map(|o| (o.n as f64, o.error)).collect();
        let plot = io::plot_rows(&pts, PLOT_POINTS, |x| p.eval(x, s as f64))?;
        out.add(format!("fit-full-plot-s{s}.csv"), io::plot_csv(&plot)?);
    }
    out.summary = format!(
        "alpha={:.6} beta={:.6} gamma={:.6} delta={:.6} eps={:.6} objective={:.3e}\n",
        p.alpha(),
        p.beta(),
        p.gamma(),
        p.delta(),
        p.eps_irr(),
        report.objective
    );
    Ok(out)
}

pub fn stabilize(args: &StabilizeArgs, cfg: &RunConfig) -> Result<Artifacts> {
    let mut section = cfg.stabilize_d.clone();
    section.input = Some(input(&args.input, &section.input, "stabilize-d")?);
    if let Some(v) = args.max_rounds {
        section.options.max_rounds = v;
    }
    if let Some(v) = args.tol {
        section.options.tol = v;
    }
    if let Some(v) = args.seed {
        section.options.fit.seed = v;
    }
    let obs = io::read_observations(section.input.as_ref().unwrap())?;
    let (names, groups): (Vec<String>, Vec<Vec<Observation>>) = by_group(&obs).into_iter().unzip();
    let result = stabilize_d(&groups, &section.options)?;

    let mut out = Artifacts {
        resolved: resolved(&section)?,
        seeds: vec![section.options.fit.seed],
        ..Artifacts::default()
    };
    out.summary = format!(
        "D_hat={:.6} alpha_hat={:.6} rounds={} converged={}\n",
        result.d_hat,
        result.alpha_hat,
        result.history.len(),
        result.converged
    );
    out.add("stabilize-d.json", io::json("stabilization", &json!({ "groups": names, "result": result }))?);
    Ok(out)
}

pub fn landscape_cmd(args: &LandscapeArgs, cfg: &RunConfig) -> Result<Artifacts> {
    let mut section = cfg.landscape.clone();
    section.input = Some(input(&args.input, &section.input, "landscape")?);
    section.alpha_range = args.alpha_range.unwrap_or(section.alpha_range);
    section.d_range = args.d_range.unwrap_or(section.d_range);
    section.n_alpha = args.n_alpha.unwrap_or(section.n_alpha);
    section.n_d = args.n_d.unwrap_or(section.n_d);
    let obs = io::read_observations(section.input.as_ref().unwrap())?;
    let grid = landscape(&obs, section.alpha_range, section.d_range, section.n_alpha, section.n_d)?;

    let mut out = Artifacts {
        resolved: resolved(&section)?,
        ..Artifacts::default()
    };
    let mut rows = Vec::with_capacity(grid.alpha_axis.len() * grid.d_axis.len());
    for (i, &a) in grid.alpha_axis.iter().enumerate() {
        for (j, &d) in grid.d_axis.iter().enumerate() {
            rows.push(vec![a, d, grid.loss[i][j], grid.c_opt[i][j]]);
        }
    }
    let m = grid.argmin;
    out.summary = format!("argmin alpha={:.6} D={:.6} C={:.6} loss={:.3e}\n", m.alpha, m.d, m.c, m.loss);
    out.add("landscape.json", io::json("landscape", &grid)?);
    out.add("landscape.csv", io::columns_csv(&["alpha", "D", "loss", "C"], rows)?);
    Ok(out)
}

pub fn linearize_cmd(args: &LinearizeArgs, cfg: &RunConfig) -> Result<Artifacts> {
    let mut section = cfg.linearize.clone();
    section.input = Some(input(&args.input, &section.input, "linearize")?);
    section.alpha = args.alpha.or(section.alpha);
    section.d = args.d.or(section.d);
    section.c = args.c.or(section.c);
    let obs = io::read_observations(section.input.as_ref().unwrap())?;

    let (params, source) = match (section.alpha, section.d, section.c) {
        (Some(a), Some(d), Some(c)) => (SimpleLawParams::new(a, d, c)?, "given"),
        (a, d, c) => {
            let opts = FitOptions {
                fixed_d: d,
                fixed_alpha: a,
                fixed_c: c,
                ..FitOptions::free_d()
            };
            let report = fit_simple(&obs, &opts)?;
            (*report.params.as_simple().expect("simple fit"), "fit")
        }
    };
    let lin = linearize(&obs, &params);
    let pts: Vec<(f64, f64)> = lin.points.iter().map(|p| (p.n as f64, p.value)).collect();
    let plot = io::plot_rows(&pts, PLOT_POINTS, |x| Ok(params.d() * x.powf(-params.alpha())))?;

    let mut out = Artifacts {
        resolved: resolved(&section)?,
        ..Artifacts::default()
    };
    out.summary = format!(
        "alpha={:.6} D={:.6} C={:.6} ({source}); {} points, {} omitted\n",
        params.alpha(),
        params.d(),
        params.c(),
        lin.points.len(),
        lin.omitted
    );
    out.add("linearize.json", io::json("linearization", &json!({ "params": params, "source": source, "linearized": lin }))?);
    out.add("linearize-plot.csv", io::plot_csv(&plot)?);
    Ok(out)
}

pub fn simulate(args: &SimulateArgs, cfg: &RunConfig) -> Result<Artifacts> {
    let mut sim = cfg.simulate.clone();
    if let Some(v) = &args.t0 {
        sim.t0 = v.clone();
    }
    if let Some(v) = &args.t1 {
        sim.t1 = v.clone();
    }
    if let Some(v) = &args.seeds {
        sim.seeds = v.clone();
    }
    let result = transfer_experiment(&sim)?;
    let obs = result.observations()?;
    let medians = median_observations(&result.rows)?;

    let mut seeds = sim.seeds.clone();
    seeds.push(sim.targets.seed);
    let mut out = Artifacts {
        resolved: resolved(&sim)?,
        seeds,
        ..Artifacts::default()
    };
    out.summary = format!(
        "{} rows over {} T0 x {} T1 x {} seeds; {} warnings\n",
        result.rows.len(),
        sim.t0.len(),
        sim.t1.len(),
        sim.seeds.len(),
        result.warnings.len()
    );
    for w in &result.warnings {
        out.summary += &format!("warning: {w}\n");
    }
    out.add("simulate.json", io::json("simulation", &result)?);
    out.add("observations.csv", io::observations_csv(&obs)?);
    out.add("observations-median.csv", io::observations_csv(&medians)?);
    Ok(out)
}

pub fn spectrum_cmd(args: &SpectrumArgs, cfg: &RunConfig) -> Result<Artifacts> {
    let mut section = cfg.spectrum.clone();
    section.q = args.q.unwrap_or(section.q);
    if args.xi.is_some() || args.modes.is_some() {
        let (xi0, modes0, scale) = match section.kernel {
            KernelSpec::Designed { xi, modes, scale } => (xi, modes, scale),
            _ => (2.0, 64, 1.0),
        };
        section.kernel = KernelSpec::Designed {
            xi: args.xi.unwrap_or(xi0),
            modes: args.modes.unwrap_or(modes0),
            scale,
        };
    }
    let report = spectrum(&section.kernel, section.q)?;
    let seeds = match section.kernel {
        KernelSpec::NtkMonteCarlo { seed, .. } | KernelSpec::RandomFeature { seed, .. } => vec![seed],
        KernelSpec::Designed { .. } => Vec::new(),
    };
    let mut out = Artifacts {
        resolved: resolved(&section)?,
        seeds,
        ..Artifacts::default()
    };
    let (lo, hi) = report.fit_range;
    if hi >= lo + 2 {
        let ranks: Vec<f64> = (lo..hi).map(|i| (i + 1) as f64).collect();
        let line = fit_loglog_linear(&ranks, &report.eigenvalues[lo..hi])?;
        let pts: Vec<(f64, f64)> = report.eigenvalues.iter().enumerate().map(|(i, &v)| ((i + 1) as f64, v)).collect();
        let plot = io::plot_rows(&pts, PLOT_POINTS, |x| Ok(line.predict(x)))?;
        out.add("spectrum-plot.csv", io::plot_csv(&plot)?);
    }
    out.summary = match report.fitted_xi {
        Some(xi) => format!("{} eigenvalues; fitted xi={xi:.4} over ranks {}..{}\n", report.eigenvalues.len(), lo + 1, hi),
        None => format!("{} eigenvalues; too few to fit a decay exponent\n", report.eigenvalues.len()),
    };
    out.files.insert(0, ("spectrum.json".into(), io::json("spectrum", &report)?));
    Ok(out)
}

/// `p/q` with `q ≤ 100` when `x` is that fraction to within `1e-12`.
pub fn fraction(x: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    (1..=100i64).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() <= 1e-12 * x.abs().max(1.0)).then_some((p as i64, q))
    })
}

fn show(x: f64) -> String {
    match fraction(x) {
        Some((p, 1)) => format!("{p}"),
        Some((p, q)) => format!("{p}/{q} ({x:.6})"),
        None => format!("{x:.6}"),
    }
}

pub fn rates(args: &RatesArgs, cfg: &RunConfig) -> Result<Artifacts> {
    let mut section = cfg.rates.clone();
    section.r0 = args.r0.unwrap_or(section.r0);
    section.r1 = args.r1.unwrap_or(section.r1);
    section.xi = args.xi.unwrap_or(section.xi);
    section.zeta = args.zeta.unwrap_or(section.zeta);
    section.t1 = args.t1.or(section.t1);
    section.lambda1 = args.lambda1.or(section.lambda1);
    section.eta1 = args.eta1.or(section.eta1);
    section.r0_err = args.r0_err.unwrap_or(section.r0_err);
    let s = &section;

    let pred = rate_predict(s.r0, s.r1, s.xi, s.zeta)?;
    let boundary = case_boundary(s.r0, s.r1, s.xi)?;
    let terms = match (s.t1, s.lambda1, s.eta1) {
        (Some(t1), Some(l), Some(e)) => Some(bound_terms(t1, l, e, s.xi, s.r0, s.r1, s.r0_err)?),
        _ => None,
    };

    let mut table = String::new();
    table += &format!("r0={} r1={} xi={} zeta={}\n\n", show(s.r0), show(s.r1), show(s.xi), show(s.zeta));
    table += &format!("{:<22}{}\n", "case", pred.case);
    table += &format!("{:<22}{}\n", "T1 exponent", show(pred.t1_exponent));
    table += &format!("{:<22}{}\n", "R0 exponent", show(pred.r0_exponent));
    table += &format!("{:<22}{}\n", "T0 exponent", show(pred.t0_exponent));
    table += &format!(
        "{:<22}T1^-{} * R0^{}\n",
        "lambda1",
        show(pred.lambda1_rule.t1_exponent),
        show(pred.lambda1_rule.r0_exponent)
    );
    table += &format!(
        "{:<22}{}\n",
        "condition",
        match &pred.violated {
            None => "ok".to_string(),
            Some(v) => format!("violated: {v}"),
        }
    );
    table += &format!(
        "{:<22}zeta={} between {} and {}\n",
        "case boundary",
        show(boundary.zeta),
        boundary.small_rate,
        boundary.large_rate
    );
    if let Some(t) = &terms {
        table += "\nbound terms\n";
        for (label, v) in &t.terms {
            table += &format!("  {label:<4}{v:.6e}\n");
        }
        table += &format!("  dominant: {}\n", t.dominant);
    }

    let mut out = Artifacts {
        resolved: resolved(&section)?,
        summary: table,
        ..Artifacts::default()
    };
    out.add(
        "rates.json",
        io::json("rates", &json!({ "prediction": pred, "boundary": boundary, "bound_terms": terms }))?,
    );
    Ok(out)
}

pub fn complexity(args: &ComplexityArgs, cfg: &RunConfig) -> Result<Artifacts> {
    let mut section = cfg.complexity.clone();
    section.input = Some(input(&args.input, &section.input, "complexity")?);
    section.shrinkage = args.shrinkage.or(section.shrinkage);
    let path: &Path = section.input.as_ref().unwrap();
    let rows = io::read_matrix(path)?;
    let matrix = ActivationMatrix::from_rows(&rows)?;
    let report = gaussian_negative_entropy(&matrix, section.shrinkage)?;

    let mut out = Artifacts {
        resolved: resolved(&section)?,
        ..Artifacts::default()
    };
    out.summary = format!(
        "neg_entropy={:.6} nats (N={}, d={}, shrinkage={:.3e}){}\n",
        report.neg_entropy,
        report.n,
        report.d,
        report.shrinkage,
        if report.singular { " singular covariance" } else { "" }
    );
    out.add("complexity.json", io::json("complexity", &report)?);
    Ok(out)
}
