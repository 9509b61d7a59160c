use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::lm::{self, LmConfig, LmOutcome};
use super::model::{LawKind, LawProblem, Param, Point};
use super::{standard_errors, FitOptions, FitReport, LawParams};
use crate::error::{Error, Result};
use crate::law::{FullLawParams, Observation, SimpleLawParams};

const STEP_TOL: f64 = 1e-12;
/// `D` reported for constant data, where the power-law term carries nothing.
const D_FLOOR: f64 = 1e-12;
/// `α` reported for constant data when `D` is held fixed.
const ALPHA_CEIL: f64 = 20.0;
/// Smallest floor a grid-scan start may carry, relative to the data.
const SCAN_FLOOR: f64 = 1e-4;

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..=hi.ln())).exp()
}

fn check_errors(obs: &[Observation]) -> Result<()> {
    if obs.is_empty() {
        return Err(Error::InsufficientData("no observations".into()));
    }
    for (index, o) in obs.iter().enumerate() {
        if !(o.error > 0.0 && o.error.is_finite()) {
            return Err(Error::NonPositiveObservation { index, value: o.error });
        }
        if o.n < 1 || o.s < 1 {
            return Err(Error::InvalidInput(format!("observation {index} has a zero sample count")));
        }
    }
    Ok(())
}

fn distinct(values: impl Iterator<Item = u64>) -> usize {
    let mut v: Vec<u64> = values.collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn points(obs: &[Observation]) -> Vec<Point> {
    obs.iter()
        .map(|o| Point {
            n: o.n as f64,
            s: o.s as f64,
            log_error: o.error.ln(),
        })
        .collect()
}

fn run_starts(problem: &LawProblem<'_>, starts: &[Vec<f64>], opts: &FitOptions) -> (LmOutcome, usize) {
    let cfg = LmConfig {
        tol: opts.tol,
        step_tol: STEP_TOL,
        max_iter: opts.max_iter,
    };
    let outcomes: Vec<LmOutcome> = starts
        .par_iter()
        .map(|start| lm::minimize(problem, problem.free_coords(start), cfg))
        .collect();
    // first strictly-best restart wins, so ties resolve by index
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.objective < outcomes[best].objective {
            best = i;
        }
    }
    (outcomes.into_iter().nth(best).expect("at least one restart"), best)
}

fn build_report(
    kind: LawKind,
    obs: &[Observation],
    natural: &[f64],
    free: &[usize],
    outcome: &LmOutcome,
    best_restart: usize,
    mut warnings: Vec<String>,
) -> Result<FitReport> {
    let names = kind.params();
    let mut natural = natural.to_vec();
    for &i in free {
        if !names[i].is_floor() && !(natural[i] > 0.0) {
            warnings.push(format!("{} collapsed to zero; the data do not support that term", names[i].name()));
            natural[i] = f64::MIN_POSITIVE;
        }
    }
    let natural = &natural[..];
    let params = match kind {
        LawKind::Simple => LawParams::Simple(SimpleLawParams::new(natural[0], natural[1], natural[2])?),
        LawKind::Full => LawParams::Full(FullLawParams::new(
            natural[0], natural[1], natural[2], natural[3], natural[4],
        )?),
    };
    let residuals: Vec<f64> = obs
        .iter()
        .map(|o| {
            let pred = kind.predict(natural, o.n as f64, o.s as f64, None);
            o.error.ln() - pred.ln()
        })
        .collect();
    let objective = residuals.iter().map(|r| r * r).sum();
    let free_params: Vec<Param> = free.iter().map(|&i| names[i]).collect();
    let mut report = FitReport {
        params,
        free: free_params.clone(),
        stderr: vec![f64::INFINITY; free.len()],
        residuals,
        objective,
        converged: outcome.converged,
        iterations: outcome.iterations,
        best_restart,
        warnings: Vec::new(),
    };
    if report.converged {
        let se = standard_errors(&report, obs)?;
        if !se.identifiable {
            warnings.push("non-identifiable: J^T J is singular at the estimate".into());
        }
        report.stderr = se.values;
    } else {
        warnings.push(format!("not converged after {} iterations", outcome.iterations));
    }
    report.warnings = warnings;
    Ok(report)
}

/// Linear least squares with non-negative coefficients, scored by the
/// log-residual objective. Columns flagged in `positive` must come out
/// strictly positive. Every support is tried, so only a handful of columns
/// is practical.
fn nonneg_linear(cols: &[Vec<f64>], positive: &[bool], offset: &[f64], pts: &[Point]) -> Option<(Vec<f64>, f64)> {
    let k = cols.len();
    let target: Vec<f64> = pts.iter().zip(offset).map(|(p, o)| p.log_error.exp() - o).collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for mask in 0u32..(1 << k) {
        if (0..k).any(|j| positive[j] && mask & (1 << j) == 0) {
            continue;
        }
        let support: Vec<usize> = (0..k).filter(|j| mask & (1 << j) != 0).collect();
        let mut coef = vec![0.0; k];
        if !support.is_empty() {
            let m = support.len();
            let ata = DMatrix::from_fn(m, m, |a, b| cols[support[a]].iter().zip(&cols[support[b]]).map(|(x, y)| x * y).sum());
            let atb = DVector::from_fn(m, |a, _| cols[support[a]].iter().zip(&target).map(|(x, y)| x * y).sum());
            let Some(sol) = ata.lu().solve(&atb) else { continue };
            for (a, &j) in support.iter().enumerate() {
                coef[j] = sol[a];
            }
        }
        if support.iter().any(|&j| !(coef[j] > 0.0 || (!positive[j] && coef[j] == 0.0))) {
            continue;
        }
        let mut obj = 0.0;
        for (i, p) in pts.iter().enumerate() {
            let pred = offset[i] + (0..k).map(|j| coef[j] * cols[j][i]).sum::<f64>();
            if !(pred > 0.0 && pred.is_finite()) {
                obj = f64::INFINITY;
                break;
            }
            obj += (p.log_error - pred.ln()).powi(2);
        }
        if obj.is_finite() && best.as_ref().is_none_or(|b| obj < b.1) {
            best = Some((coef, obj));
        }
    }
    best
}

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
}

/// Best simple-law start over a grid of `α` with the linear coefficients
/// solved exactly. Only used when `α` is free.
fn scan_simple(pts: &[Point], fixed_d: Option<f64>, fixed_c: Option<f64>, min_err: f64) -> Option<Vec<f64>> {
    let mut best: Option<(Vec<f64>, f64)> = None;
    for alpha in log_grid(0.01, 4.0, 64) {
        let xs: Vec<f64> = pts.iter().map(|p| crate::law::decay(p.n, alpha)).collect();
        let mut cols = Vec::new();
        let mut positive = Vec::new();
        let offset: Vec<f64> = xs.iter().map(|x| fixed_d.map_or(0.0, |d| d * x) + fixed_c.unwrap_or(0.0)).collect();
        if fixed_d.is_none() {
            cols.push(xs.clone());
            positive.push(true);
        }
        if fixed_c.is_none() {
            cols.push(vec![1.0; pts.len()]);
            positive.push(false);
        }
        let Some((coef, obj)) = nonneg_linear(&cols, &positive, &offset, pts) else { continue };
        if best.as_ref().is_none_or(|b| obj < b.1) {
            let mut it = coef.into_iter();
            let d = fixed_d.unwrap_or_else(|| it.next().expect("D column"));
            let c = fixed_c.unwrap_or_else(|| it.next().expect("C column").max(SCAN_FLOOR * min_err));
            best = Some((vec![alpha, d, c], obj));
        }
    }
    best.map(|b| b.0)
}

/// Full-law starts along the `α` ridge: for each `α` on a grid, the best `β`
/// on a grid with `δ`, `δγ` and `ℰ` solved exactly.
fn scan_full(pts: &[Point], eps_free: bool, min_err: f64) -> Vec<Vec<f64>> {
    let offset = vec![0.0; pts.len()];
    let mut starts = Vec::new();
    for alpha in log_grid(0.01, 4.0, 32) {
        let mut best: Option<(Vec<f64>, f64)> = None;
        for beta in log_grid(0.01, 4.0, 32) {
            let ps: Vec<f64> = pts.iter().map(|p| crate::law::decay(p.s, beta)).collect();
            let mut cols = vec![
                pts.iter().zip(&ps).map(|(p, s)| crate::law::decay(p.n, alpha) * s).collect(),
                ps,
            ];
            let mut positive = vec![true, false];
            if eps_free {
                cols.push(vec![1.0; pts.len()]);
                positive.push(false);
            }
            let Some((coef, obj)) = nonneg_linear(&cols, &positive, &offset, pts) else { continue };
            if best.as_ref().is_none_or(|b| obj < b.1) {
                // floors start off zero, where the softplus map has no slope
                let eps = coef.get(2).copied().unwrap_or(0.0).max(SCAN_FLOOR * min_err);
                let gamma = (coef[1] / coef[0]).max(SCAN_FLOOR);
                best = Some((vec![alpha, beta, gamma, coef[0], eps], obj));
            }
        }
        starts.extend(best.map(|b| b.0));
    }
    starts
}

/// Least-squares `D` and/or `C` in linear space for a given `α`, keeping the
/// drawn value wherever the solution is not admissible.
fn profile_linear(pts: &[Point], alpha: f64, draw: (f64, f64), free: (bool, bool), min_err: f64) -> (f64, f64) {
    let xs: Vec<f64> = pts.iter().map(|p| crate::law::decay(p.n, alpha)).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.log_error.exp()).collect();
    let k = xs.len() as f64;
    let (d, c) = match free {
        (true, true) => {
            let mx = xs.iter().sum::<f64>() / k;
            let my = ys.iter().sum::<f64>() / k;
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            if sxx <= 0.0 {
                return draw;
            }
            let d = sxy / sxx;
            (d, my - d * mx)
        }
        (true, false) => {
            let sxx: f64 = xs.iter().map(|x| x * x).sum();
            (xs.iter().zip(&ys).map(|(x, y)| x * (y - draw.1)).sum::<f64>() / sxx, draw.1)
        }
        (false, true) => (draw.0, ys.iter().zip(&xs).map(|(y, x)| y - draw.0 * x).sum::<f64>() / k),
        (false, false) => return draw,
    };
    let d = if d > 0.0 && d.is_finite() { d } else { draw.0 };
    // a floor at or above the smallest error leaves nothing for the power law
    let c = if c.is_finite() { c.clamp(1e-3 * min_err, 0.9 * min_err) } else { draw.1 };
    (d, if free.1 { c } else { draw.1 })
}

/// Fits `L(n) = D·n^(-α) + C` to observations sharing one fine-tuning size.
///
/// By default `D` is fixed at [`super::DEFAULT_FIXED_D`]; use
/// [`FitOptions::free_d`] to estimate it. Constant data cannot determine the
/// power-law term: the report then carries `C` equal to the observed value,
/// `D` at its floor (or `α` at its ceiling when `D` is fixed), and a
/// non-identifiability warning.
pub fn fit_simple(obs: &[Observation], opts: &FitOptions) -> Result<FitReport> {
    opts.validate()?;
    check_errors(obs)?;
    if distinct(obs.iter().map(|o| o.s)) != 1 {
        return Err(Error::InvalidInput(
            "simple-law fits need every observation at one fine-tuning size s".into(),
        ));
    }

    let fixed = [opts.fixed_alpha, opts.fixed_d, opts.fixed_c];
    let free: Vec<usize> = (0..3).filter(|&i| fixed[i].is_none()).collect();
    let distinct_n = distinct(obs.iter().map(|o| o.n));
    let needed = free.len().max(1);
    if distinct_n < needed {
        return Err(Error::InsufficientData(format!(
            "{} free parameters need at least {needed} distinct n, got {distinct_n}",
            free.len()
        )));
    }

    let pts = points(obs);
    let max_err = obs.iter().map(|o| o.error).fold(f64::MIN, f64::max);
    let min_err = obs.iter().map(|o| o.error).fold(f64::MAX, f64::min);
    let constant = max_err / min_err - 1.0 < 1e-12;

    if constant && opts.fixed_c.is_none() && !(opts.fixed_alpha.is_some() && opts.fixed_d.is_some()) {
        let n_min = obs.iter().map(|o| o.n).min().unwrap_or(1) as f64;
        let (alpha, d) = match (opts.fixed_alpha, opts.fixed_d) {
            (a, None) => (a.unwrap_or(0.5), D_FLOOR),
            (None, Some(d)) => (ALPHA_CEIL, d),
            (Some(_), Some(_)) => unreachable!(),
        };
        let c = (max_err - d * crate::law::decay(n_min, alpha)).max(0.0);
        let natural = vec![alpha, d, c];
        let outcome = LmOutcome {
            theta: DVector::zeros(0),
            objective: 0.0,
            iterations: 0,
            converged: true,
        };
        let mut report = build_report(
            LawKind::Simple,
            obs,
            &natural,
            &free,
            &outcome,
            0,
            vec!["non-identifiable: constant observations carry no power-law slope".into()],
        )?;
        report.stderr = vec![f64::INFINITY; free.len()];
        return Ok(report);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let c_hi = max_err.max(2e-4);
    let mut starts: Vec<Vec<f64>> = (0..opts.multistart)
        .map(|_| {
            let a = opts.fixed_alpha.unwrap_or_else(|| log_uniform(&mut rng, 0.05, 2.0));
            let d = opts.fixed_d.unwrap_or_else(|| log_uniform(&mut rng, 0.01, 10.0));
            let c = opts.fixed_c.unwrap_or_else(|| log_uniform(&mut rng, 1e-4, c_hi));
            let (d, c) = profile_linear(&pts, a, (d, c), (opts.fixed_d.is_none(), opts.fixed_c.is_none()), min_err);
            vec![a, d, c]
        })
        .collect();
    if opts.fixed_alpha.is_none() {
        starts.extend(scan_simple(&pts, opts.fixed_d, opts.fixed_c, min_err));
    }

    let problem = LawProblem {
        kind: LawKind::Simple,
        points: &pts,
        template: starts[0].clone(),
        free: free.clone(),
    };
    let (outcome, best) = run_starts(&problem, &starts, opts);
    let natural = problem.natural(&outcome.theta);
    let mut warnings = Vec::new();
    if constant {
        warnings.push("non-identifiable: constant observations carry no power-law slope".into());
    }
    build_report(LawKind::Simple, obs, &natural, &free, &outcome, best, warnings)
}

/// Jointly fits `L(n, s) = δ·(n^(-α) + γ)·s^(-β) + ℰ` over a grid of both
/// sample sizes. `ℰ` is held at zero when `fix_eps_zero` is set.
///
/// Restarts draw `α, β` log-uniformly from `[0.05, 2]`, `γ` from
/// `[1e-3, 10]` and (when free) `ℰ` below the smallest observation; `δ` is
/// then set to the log-space least-squares value given the other draws.
pub fn fit_full(obs: &[Observation], opts: &FitOptions) -> Result<FitReport> {
    opts.validate()?;
    check_errors(obs)?;
    if distinct(obs.iter().map(|o| o.n)) < 2 {
        return Err(Error::DegenerateCoverage { axis: "n" });
    }
    if distinct(obs.iter().map(|o| o.s)) < 2 {
        return Err(Error::DegenerateCoverage { axis: "s" });
    }
    let free: Vec<usize> = if opts.fix_eps_zero {
        vec![0, 1, 2, 3]
    } else {
        vec![0, 1, 2, 3, 4]
    };
    if obs.len() < free.len() {
        return Err(Error::InsufficientData(format!(
            "{} free parameters need at least as many observations, got {}",
            free.len(),
            obs.len()
        )));
    }

    let pts = points(obs);
    let min_err = obs.iter().map(|o| o.error).fold(f64::MAX, f64::min);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts: Vec<Vec<f64>> = (0..opts.multistart)
        .map(|_| {
            let alpha = log_uniform(&mut rng, 0.05, 2.0);
            let beta = log_uniform(&mut rng, 0.05, 2.0);
            let gamma = log_uniform(&mut rng, 1e-3, 10.0);
            let eps_draw = log_uniform(&mut rng, 1e-3 * min_err, 0.5 * min_err);
            let eps = if opts.fix_eps_zero { 0.0 } else { eps_draw };
            let log_delta = pts
                .iter()
                .map(|p| {
                    let shape = (crate::law::decay(p.n, alpha) + gamma) * crate::law::decay(p.s, beta);
                    (p.log_error.exp() - eps).ln() - shape.ln()
                })
                .sum::<f64>()
                / pts.len() as f64;
            vec![alpha, beta, gamma, log_delta.exp(), eps]
        })
        .collect();
    starts.extend(scan_full(&pts, !opts.fix_eps_zero, min_err));

    let problem = LawProblem {
        kind: LawKind::Full,
        points: &pts,
        template: starts[0].clone(),
        free: free.clone(),
    };
    let (outcome, best) = run_starts(&problem, &starts, opts);
    let mut natural = problem.natural(&outcome.theta);
    if opts.fix_eps_zero {
        natural[4] = 0.0;
    }
    build_report(LawKind::Full, obs, &natural, &free, &outcome, best, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubling_grid(p: &SimpleLawParams, s: u64) -> Vec<Observation> {
        (0..7)
            .map(|i| {
                let n = (1u64 << i) * 1000;
                Observation::new(n, s, p.eval(n as f64).unwrap(), "g").unwrap()
            })
            .collect()
    }

    #[test]
    fn free_fit_recovers_noiseless_params() {
        let truth = SimpleLawParams::new(0.5, 0.48, 0.1).unwrap();
        let obs = doubling_grid(&truth, 1);
        let rep = fit_simple(&obs, &FitOptions::free_d()).unwrap();
        let p = rep.params.as_simple().unwrap();
        assert!(rep.converged, "{rep:?}");
        assert!((p.alpha() - 0.5).abs() < 1e-4, "{p:?}");
        assert!((p.d() - 0.48).abs() < 1e-4, "{p:?}");
        assert!((p.c() - 0.1).abs() < 1e-4, "{p:?}");
        assert_eq!(rep.residuals.len(), obs.len());
    }

    #[test]
    fn fixed_d_fit_recovers_alpha_and_c() {
        let truth = SimpleLawParams::new(0.7, 0.48, 0.2).unwrap();
        let obs = doubling_grid(&truth, 1);
        let rep = fit_simple(&obs, &FitOptions::default()).unwrap();
        let p = rep.params.as_simple().unwrap();
        assert_eq!(p.d(), 0.48);
        assert_eq!(rep.free, vec![Param::Alpha, Param::C]);
        assert!((p.alpha() - 0.7).abs() < 1e-6);
        assert!((p.c() - 0.2).abs() < 1e-6);
    }

    #[test]
    fn constant_data_is_flagged() {
        let obs: Vec<Observation> = (0..7)
            .map(|i| Observation::new((1u64 << i) * 1000, 5, 0.3, "").unwrap())
            .collect();
        let rep = fit_simple(&obs, &FitOptions::free_d()).unwrap();
        let p = rep.params.as_simple().unwrap();
        assert!(rep.converged);
        assert!((p.c() - 0.3).abs() < 1e-9);
        assert!(p.d() <= 1e-9);
        assert!(rep.warnings.iter().any(|w| w.contains("non-identifiable")));
        assert!(rep.stderr.iter().all(|s| s.is_infinite()));

        let rep = fit_simple(&obs, &FitOptions::default()).unwrap();
        let p = rep.params.as_simple().unwrap();
        assert!((p.c() - 0.3).abs() < 1e-9);
        assert!(rep.warnings.iter().any(|w| w.contains("non-identifiable")));
    }

    #[test]
    fn too_few_distinct_n() {
        let obs = vec![
            Observation::new(1000, 1, 0.3, "").unwrap(),
            Observation::new(2000, 1, 0.25, "").unwrap(),
            Observation::new(2000, 1, 0.26, "").unwrap(),
        ];
        assert!(matches!(
            fit_simple(&obs, &FitOptions::free_d()),
            Err(Error::InsufficientData(_))
        ));
        // two distinct n suffice once D is fixed
        assert!(fit_simple(&obs, &FitOptions::default()).is_ok());
    }

    #[test]
    fn mixed_s_rejected() {
        let obs = vec![
            Observation::new(1000, 1, 0.3, "").unwrap(),
            Observation::new(2000, 2, 0.25, "").unwrap(),
            Observation::new(4000, 1, 0.2, "").unwrap(),
        ];
        assert!(matches!(fit_simple(&obs, &FitOptions::free_d()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn non_positive_error_rejected() {
        let mut obs = doubling_grid(&SimpleLawParams::new(0.5, 0.48, 0.1).unwrap(), 1);
        obs[3].error = 0.0;
        assert!(matches!(
            fit_simple(&obs, &FitOptions::free_d()),
            Err(Error::NonPositiveObservation { index: 3, .. })
        ));
    }

    #[test]
    fn refit_of_reduced_full_law() {
        let full = FullLawParams::new(0.544, 0.322, 0.478, 41.8, 0.0).unwrap();
        let reduced = full.reduce_at(12800.0).unwrap();
        let obs = doubling_grid(&reduced, 12800);
        let rep = fit_simple(&obs, &FitOptions::free_d()).unwrap();
        let p = rep.params.as_simple().unwrap();
        assert!((p.alpha() - 0.544).abs() < 1e-3, "{p:?}");
    }

    fn full_surface(p: &FullLawParams) -> Vec<Observation> {
        let mut obs = Vec::new();
        for i in 0..7 {
            for k in 1..=6 {
                let n = (1u64 << i) * 1000;
                let s = 12800u64 << k;
                obs.push(Observation::new(n, s, p.eval(n as f64, s as f64).unwrap(), "").unwrap());
            }
        }
        obs
    }

    #[test]
    fn full_fit_recovers_reference_params() {
        let truth = FullLawParams::new(0.544, 0.322, 0.478, 41.8, 0.0).unwrap();
        let obs = full_surface(&truth);
        let rep = fit_full(&obs, &FitOptions::default()).unwrap();
        let p = rep.params.as_full().unwrap();
        assert!((p.alpha() - 0.544).abs() < 1e-3, "{p:?}");
        assert!((p.beta() - 0.322).abs() < 1e-3, "{p:?}");
        assert!((p.gamma() - 0.478).abs() < 1e-3, "{p:?}");
        assert!((p.delta() - 41.8).abs() / 41.8 < 1e-3, "{p:?}");
        assert_eq!(p.eps_irr(), 0.0);
    }

    #[test]
    fn full_fit_without_floor() {
        let truth = FullLawParams::new(0.6, 0.4, 0.0, 3.0, 0.0).unwrap();
        let obs = full_surface(&truth);
        let rep = fit_full(&obs, &FitOptions::default()).unwrap();
        let p = rep.params.as_full().unwrap();
        assert!(p.gamma() < 1e-4, "{p:?}");
        assert!((p.alpha() - 0.6).abs() < 1e-3, "{p:?}");
    }

    #[test]
    fn full_fit_degenerate_axes() {
        let truth = FullLawParams::new(0.6, 0.4, 0.1, 3.0, 0.0).unwrap();
        let single_s: Vec<Observation> = full_surface(&truth).into_iter().filter(|o| o.s == 25600).collect();
        assert_eq!(
            fit_full(&single_s, &FitOptions::default()).unwrap_err(),
            Error::DegenerateCoverage { axis: "s" }
        );
        let single_n: Vec<Observation> = full_surface(&truth).into_iter().filter(|o| o.n == 1000).collect();
        assert_eq!(
            fit_full(&single_n, &FitOptions::default()).unwrap_err(),
            Error::DegenerateCoverage { axis: "n" }
        );
    }

    #[test]
    fn deterministic_given_seed() {
        let truth = FullLawParams::new(0.544, 0.322, 0.478, 41.8, 0.0).unwrap();
        let obs = full_surface(&truth);
        let a = fit_full(&obs, &FitOptions::default()).unwrap();
        let b = fit_full(&obs, &FitOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}
