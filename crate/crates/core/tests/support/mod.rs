//! Property checks shared by the invariant suite and the acceptance run.
//!
//! Every check takes the number of cases and returns the first failure, so
//! it can back a `#[test]` or be tallied in a report.

#![allow(dead_code)]

use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use syn2real::complexity::{gaussian_negative_entropy, ActivationMatrix};
use syn2real::fit::{fit_full, fit_simple, landscape, objective, stabilize_d, FitOptions, StabilizeOptions};
use syn2real::theory::{
    case_boundary, circle_point, init_network, l2_error, rate_predict, regularized_target, FourierSeries, FunctionRep, Kernel, KernelSpec,
    NetworkState, SpectrumReport,
};
use syn2real::{FullLawParams, Observation, SimpleLawParams};

pub type Check = fn(u32) -> Result<(), String>;

pub const LAW_FIT_CASES: u32 = 1000;

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

pub fn full_params() -> impl Strategy<Value = FullLawParams> {
    (0.05..2.0f64, 0.05..2.0f64, 0.0..2.0f64, 0.01..100.0f64, 0.0..1.0f64)
        .prop_map(|(a, b, g, d, e)| FullLawParams::new(a, b, g, d, e).unwrap())
}

fn sizes() -> impl Strategy<Value = u64> {
    prop_oneof![1u64..100, 100u64..1_000_000, 1_000_000u64..1_000_000_000_000]
}

pub fn simple_grid(p: &SimpleLawParams, s: u64) -> Vec<Observation> {
    (0..7)
        .map(|i| {
            let n = (1u64 << i) * 1000;
            Observation::new(n, s, p.eval(n as f64).unwrap(), "").unwrap()
        })
        .collect()
}

pub fn full_grid(p: &FullLawParams) -> Vec<Observation> {
    let mut out = Vec::new();
    for i in 0..7 {
        for k in 0..6 {
            let (n, s) = ((1u64 << i) * 1000, 100u64 << (2 * k));
            out.push(Observation::new(n, s, p.eval(n as f64, s as f64).unwrap(), "").unwrap());
        }
    }
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-12)
}

// ---- law ----

pub fn law_decomposition(cases: u32) -> Result<(), String> {
    run(cases, (full_params(), sizes(), sizes()), |(p, n, s)| {
        let v = p.eval(n as f64, s as f64).unwrap();
        prop_assert!(v - p.eps_irr() >= 0.0, "{v} < {}", p.eps_irr());
        Ok(())
    })
}

pub fn law_monotone(cases: u32) -> Result<(), String> {
    run(cases, (full_params(), sizes(), sizes(), 1u64..1000, 1u64..1000), |(p, n, s, dn, ds)| {
        let (n, s) = (n as f64, s as f64);
        let base = p.eval(n, s).unwrap();
        prop_assert!(p.eval(n + dn as f64, s).unwrap() <= base);
        prop_assert!(p.eval(n, s + ds as f64).unwrap() <= base);
        let simple = p.reduce_at(s).unwrap();
        prop_assert!(simple.eval(n + dn as f64).unwrap() <= simple.eval(n).unwrap());
        Ok(())
    })
}

pub fn law_strictly_monotone(cases: u32) -> Result<(), String> {
    // moderate sizes keep the step visible in double precision
    run(cases, (full_params(), 1u64..10_000, 1u64..10_000), |(p, n, s)| {
        let (n, s) = (n as f64, s as f64);
        let base = p.eval(n, s).unwrap();
        prop_assert!(p.eval(2.0 * n, s).unwrap() < base);
        prop_assert!(p.eval(n, 2.0 * s).unwrap() < base);
        Ok(())
    })
}

pub fn law_reduction_identity(cases: u32) -> Result<(), String> {
    run(cases, (full_params(), sizes(), sizes()), |(p, n, s)| {
        let full = p.eval(n as f64, s as f64).unwrap();
        let reduced = p.reduce_at(s as f64).unwrap().eval(n as f64).unwrap();
        prop_assert!((full - reduced).abs() <= 1e-13 * full.abs().max(1e-300), "{full} vs {reduced}");
        Ok(())
    })
}

pub fn law_limits(cases: u32) -> Result<(), String> {
    let params = (0.8..2.0f64, 0.8..2.0f64, 0.0..2.0f64, 0.01..10.0f64, 0.0..1.0f64)
        .prop_map(|(a, b, g, d, e)| FullLawParams::new(a, b, g, d, e).unwrap());
    run(cases, (params, 1u64..100_000), |(p, fixed)| {
        let x = fixed as f64;
        let far = p.eval(x, 1e12).unwrap();
        prop_assert!((far - p.eps_irr()).abs() < 1e-6, "s limit {far}");
        let floor = p.delta() * p.gamma() * x.powf(-p.beta()) + p.eps_irr();
        let far = p.eval(1e12, x).unwrap();
        prop_assert!((far - floor).abs() < 1e-6, "n limit {far} vs {floor}");
        Ok(())
    })
}

// ---- fit ----

fn simple_params() -> impl Strategy<Value = SimpleLawParams> {
    (0.2..1.2f64, 0.5..50.0f64, 0.0..0.5f64).prop_map(|(a, d, c)| SimpleLawParams::new(a, d, c).unwrap())
}

/// Full-law parameters whose `n^(-α)` term is visible next to `γ` on the
/// `n ≥ 1000` grid; a floor far above it leaves `α` without signal.
fn identifiable_full() -> impl Strategy<Value = FullLawParams> {
    (0.2..1.0f64, 0.1..0.8f64, 0.0..3.0f64, 1.0..100.0f64)
        .prop_map(|(a, b, g, d)| FullLawParams::new(a, b, g * 1000f64.powf(-a), d, 0.0).unwrap())
}

pub fn fit_simple_round_trip(cases: u32) -> Result<(), String> {
    run(cases, (simple_params(), any::<u64>()), |(p, seed)| {
        let obs = simple_grid(&p, 1);
        let rep = fit_simple(&obs, &FitOptions { seed, ..FitOptions::free_d() }).unwrap();
        let q = rep.params.as_simple().unwrap();
        prop_assert!(rel(q.alpha(), p.alpha()) < 1e-3, "{q:?} vs {p:?}");
        prop_assert!(rel(q.d(), p.d()) < 1e-3, "{q:?} vs {p:?}");
        prop_assert!((q.c() - p.c()).abs() < 1e-3, "{q:?} vs {p:?}");
        Ok(())
    })
}

pub fn fit_full_round_trip(cases: u32) -> Result<(), String> {
    run(cases, (identifiable_full(), any::<u64>()), |(p, seed)| {
        let obs = full_grid(&p);
        let rep = fit_full(&obs, &FitOptions { seed, ..FitOptions::default() }).unwrap();
        let q = rep.params.as_full().unwrap();
        prop_assert!(rel(q.alpha(), p.alpha()) < 1e-3, "{q:?} vs {p:?}");
        prop_assert!(rel(q.beta(), p.beta()) < 1e-3, "{q:?} vs {p:?}");
        prop_assert!((q.gamma() - p.gamma()).abs() < 1e-3 * p.gamma().max(1000f64.powf(-p.alpha())), "{q:?} vs {p:?}");
        prop_assert!(rel(q.delta(), p.delta()) < 1e-3, "{q:?} vs {p:?}");
        Ok(())
    })
}

pub fn fit_fixed_d_no_worse(cases: u32) -> Result<(), String> {
    run(cases, simple_params(), |p| {
        let obs = simple_grid(&p, 1);
        let free = fit_simple(&obs, &FitOptions::free_d()).unwrap();
        let fixed = fit_simple(
            &obs,
            &FitOptions {
                fixed_d: Some(p.d()),
                ..FitOptions::default()
            },
        )
        .unwrap();
        let err_free = (free.params.as_simple().unwrap().alpha() - p.alpha()).abs();
        let err_fixed = (fixed.params.as_simple().unwrap().alpha() - p.alpha()).abs();
        // both are at round-off on noiseless data; compare above that floor
        prop_assert!(err_fixed <= err_free.max(1e-9), "fixed {err_fixed} > free {err_free}");
        Ok(())
    })
}

pub fn fit_order_and_seed(cases: u32) -> Result<(), String> {
    let noisy = (simple_params(), prop::collection::vec(-0.05..0.05f64, 7), any::<u64>(), any::<u64>());
    run(cases, noisy, |(p, noise, seed, shuffle)| {
        let mut obs = simple_grid(&p, 1);
        for (o, e) in obs.iter_mut().zip(&noise) {
            o.error *= e.exp();
        }
        let mut shuffled = obs.clone();
        let k = (shuffle % 7) as usize;
        shuffled.rotate_left(k);
        shuffled.swap(0, 6);
        let pred = |o: &Observation| p.eval(o.n as f64).unwrap();
        let a = objective(&obs, pred).unwrap();
        let b = objective(&shuffled, pred).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * a.max(1e-300), "{a} vs {b}");
        let opts = FitOptions { seed, ..FitOptions::free_d() };
        let r1 = fit_simple(&obs, &opts).unwrap();
        let r2 = fit_simple(&obs, &opts).unwrap();
        prop_assert_eq!(r1, r2);
        Ok(())
    })
}

pub fn fit_report_shape(cases: u32) -> Result<(), String> {
    let noisy = (identifiable_full(), prop::collection::vec(-0.1..0.1f64, 42));
    run(cases, noisy, |(p, noise)| {
        let mut obs = full_grid(&p);
        for (o, e) in obs.iter_mut().zip(&noise) {
            o.error *= e.exp();
        }
        let rep = fit_full(&obs, &FitOptions::default()).unwrap();
        prop_assert!(rep.objective >= 0.0);
        prop_assert!(rep.stderr.iter().all(|s| *s >= 0.0), "{:?}", rep.stderr);
        prop_assert_eq!(rep.residuals.len(), obs.len());
        Ok(())
    })
}

pub fn stabilize_fixed_point(cases: u32) -> Result<(), String> {
    let groups = (0.1..5.0f64, prop::collection::vec((0.3..0.8f64, 0.0..0.3f64), 5));
    run(cases, groups, |(d, groups)| {
        let data: Vec<Vec<Observation>> = groups
            .iter()
            .map(|&(a, c)| simple_grid(&SimpleLawParams::new(a, d, c).unwrap(), 1))
            .collect();
        let opts = StabilizeOptions {
            d_init: d,
            max_rounds: 1,
            ..StabilizeOptions::default()
        };
        let out = stabilize_d(&data, &opts).unwrap();
        prop_assert!((out.d_hat - d).abs() < opts.tol, "D {d} moved to {}", out.d_hat);
        Ok(())
    })
}

pub fn landscape_vs_fit(cases: u32) -> Result<(), String> {
    let noisy = (simple_params(), prop::collection::vec(-0.05..0.05f64, 7));
    run(cases, noisy, |(p, noise)| {
        let mut obs = simple_grid(&p, 1);
        for (o, e) in obs.iter_mut().zip(&noise) {
            o.error *= e.exp();
        }
        let fit = fit_simple(&obs, &FitOptions::free_d()).unwrap();
        prop_assume!(fit.warnings.is_empty());
        let q = fit.params.as_simple().unwrap();
        let span = |v: f64| (0.5 * v, 1.5 * v);
        let grid = landscape(&obs, span(q.alpha()), span(q.d()), 21, 21).unwrap();
        prop_assert_eq!(grid.loss.len(), grid.alpha_axis.len());
        prop_assert!(grid.loss.iter().all(|row| row.len() == grid.d_axis.len()));
        prop_assert!(grid.loss.iter().flatten().all(|v| *v >= 0.0));
        // slack: the largest change between neighbouring cells
        let mut slack = 0.0f64;
        for i in 0..21 {
            for j in 0..21 {
                if i + 1 < 21 {
                    slack = slack.max((grid.loss[i + 1][j] - grid.loss[i][j]).abs());
                }
                if j + 1 < 21 {
                    slack = slack.max((grid.loss[i][j + 1] - grid.loss[i][j]).abs());
                }
            }
        }
        prop_assert!(grid.argmin.loss <= fit.objective + slack, "{} > {} + {slack}", grid.argmin.loss, fit.objective);
        Ok(())
    })
}

// ---- complexity ----

fn activations() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (1usize..6, 8usize..40).prop_flat_map(|(d, n)| (Just(d), Just(n), prop::collection::vec(-5.0..5.0f64, n * d)))
}

pub fn entropy_formula_and_shift(cases: u32) -> Result<(), String> {
    run(cases, (activations(), -100.0..100.0f64), |((d, n, data), shift)| {
        let a = ActivationMatrix::new(n, d, &data).unwrap();
        let rep = gaussian_negative_entropy(&a, None).unwrap();
        let formula = -(d as f64 / 2.0) * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln() - rep.logdet / 2.0;
        prop_assert_eq!(rep.neg_entropy, formula);
        let moved: Vec<f64> = data.iter().enumerate().map(|(i, v)| v + shift * (1.0 + (i % d) as f64)).collect();
        let other = gaussian_negative_entropy(&ActivationMatrix::new(n, d, &moved).unwrap(), Some(rep.shrinkage)).unwrap();
        prop_assert!((other.neg_entropy - rep.neg_entropy).abs() < 1e-6, "{} vs {}", other.neg_entropy, rep.neg_entropy);
        Ok(())
    })
}

pub fn entropy_monotone_in_shrinkage(cases: u32) -> Result<(), String> {
    run(cases, (activations(), 0.0..1.0f64, 0.0..1.0f64), |((d, n, data), e1, e2)| {
        let a = ActivationMatrix::new(n, d, &data).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let r_lo = gaussian_negative_entropy(&a, Some(lo)).unwrap();
        let r_hi = gaussian_negative_entropy(&a, Some(hi)).unwrap();
        prop_assert!(r_hi.neg_entropy <= r_lo.neg_entropy + 1e-9, "{r_lo:?} {r_hi:?}");
        Ok(())
    })
}

pub fn entropy_permutation(cases: u32) -> Result<(), String> {
    run(cases, (activations(), any::<u64>()), |((d, n, data), k)| {
        let a = ActivationMatrix::new(n, d, &data).unwrap();
        let base = gaussian_negative_entropy(&a, Some(1e-3)).unwrap();
        let rot_r = (k as usize) % n;
        let rot_c = (k as usize / 7) % d;
        let mut rows: Vec<Vec<f64>> = data.chunks(d).map(|r| r.to_vec()).collect();
        rows.rotate_left(rot_r);
        rows.swap(0, n - 1);
        for r in rows.iter_mut() {
            r.rotate_left(rot_c);
        }
        let other = gaussian_negative_entropy(&ActivationMatrix::from_rows(&rows).unwrap(), Some(1e-3)).unwrap();
        prop_assert!((other.neg_entropy - base.neg_entropy).abs() < 1e-9, "{} vs {}", other.neg_entropy, base.neg_entropy);
        Ok(())
    })
}

// ---- theory ----

pub fn network_init(cases: u32) -> Result<(), String> {
    run(cases, (1usize..32, 1usize..6, any::<u64>(), -10.0..10.0f64), |(half, d, seed, th)| {
        let net = init_network(2 * half, d, seed).unwrap();
        for r in 0..net.width() {
            let norm: f64 = net.b0_row(r).iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }
        let mut x = vec![0.0; d];
        if d == 1 {
            x[0] = if th >= 0.0 { 1.0 } else { -1.0 };
        } else {
            x[0] = th.cos();
            x[1] = th.sin();
        }
        prop_assert_eq!(net.eval(&x).unwrap(), 0.0);
        Ok(())
    })
}

pub fn asgd_fixed_when_fitted(cases: u32) -> Result<(), String> {
    run(cases, (1usize..16, any::<u64>(), 0.0..1.0f64, -10.0..10.0f64), |(half, seed, eta, th)| {
        let m = 2 * half;
        let net = init_network(m, 2, seed).unwrap();
        let mut moved = net.clone();
        // at init g ≡ 0, so a zero label is fitted exactly
        moved.asgd_step(&circle_point(th), 0.0, eta, 0.0).unwrap();
        prop_assert_eq!(moved.a(), net.a());
        for r in 0..m {
            prop_assert_eq!(moved.b_row(r), net.b_row(r));
        }
        Ok(())
    })
}

fn min_gram_eigenvalue(k: &Kernel, angles: &[f64]) -> f64 {
    let n = angles.len();
    let g = DMatrix::from_fn(n, n, |i, j| k.eval_angles(angles[i], angles[j]));
    let g = (&g + g.transpose()) * 0.5;
    g.symmetric_eigenvalues().min()
}

pub fn kernels_psd(cases: u32) -> Result<(), String> {
    let input = (prop::collection::vec(0.0..std::f64::consts::TAU, 2..24), 1usize..64, any::<u64>(), 1.1..4.0f64, 1usize..32);
    run(cases, input, |(angles, half, seed, xi, modes)| {
        let rf = Kernel::build(&KernelSpec::RandomFeature { width: 2 * half, seed }).unwrap();
        let designed = Kernel::build(&KernelSpec::designed(xi, modes)).unwrap();
        for (name, k) in [("random-feature", &rf), ("designed", &designed)] {
            let sym = (k.eval_angles(angles[0], angles[1]) - k.eval_angles(angles[1], angles[0])).abs();
            prop_assert!(sym < 1e-12, "{name} asymmetric by {sym}");
            let low = min_gram_eigenvalue(k, &angles);
            prop_assert!(low >= -1e-8, "{name} min eigenvalue {low}");
        }
        Ok(())
    })
}

fn series(max_modes: usize) -> impl Strategy<Value = FourierSeries> {
    (0usize..max_modes).prop_flat_map(|m| {
        (-1.0..1.0f64, prop::collection::vec(-1.0..1.0f64, m), prop::collection::vec(-1.0..1.0f64, m))
            .prop_map(|(c, cos, sin)| FourierSeries::new(c, cos, sin).unwrap())
    })
}

pub fn parseval(cases: u32) -> Result<(), String> {
    run(cases, (series(12), series(12)), |(f, g)| {
        let quad = l2_error(&f, &g, 128).unwrap();
        let coef = f.distance_sq(&g);
        prop_assert!((quad - coef).abs() < 1e-10, "{quad} vs {coef}");
        Ok(())
    })
}

pub fn regularized_contraction(cases: u32) -> Result<(), String> {
    run(cases, (series(16), 1.1..4.0f64, 1usize..16, 1e-6..10.0f64), |(f, xi, modes, lambda)| {
        let spec = SpectrumReport::designed(xi, modes, 1.0).unwrap();
        let out = regularized_target(&spec, &FunctionRep::fourier(f.clone()), lambda).unwrap();
        let g = out.as_fourier().unwrap();
        prop_assert!(g.constant.abs() <= f.constant.abs());
        for l in 0..f.modes() {
            prop_assert!(g.cos[l].abs() <= f.cos[l].abs());
            prop_assert!(g.sin[l].abs() <= f.sin[l].abs());
        }
        Ok(())
    })
}

pub fn rate_boundaries(cases: u32) -> Result<(), String> {
    run(cases, (0.5..1.0f64, 0.5..1.0f64, 1.1..10.0f64), |(r0, r1, xi)| {
        let b = case_boundary(r0, r1, xi).unwrap();
        prop_assert!(b.t1_match, "{b:?}");
        prop_assert!((b.t1_exponents.0 - b.t1_exponents.1).abs() < 1e-12);
        prop_assert_eq!(b.r0_match, (b.r0_exponents.0 - b.r0_exponents.1).abs() <= 1e-12 * b.r0_exponents.0.abs().max(1.0));
        // either side of the threshold lands in the adjacent rows
        let below = rate_predict(r0, r1, xi, b.zeta * (1.0 - 1e-9)).unwrap();
        let above = rate_predict(r0, r1, xi, b.zeta * (1.0 + 1e-9)).unwrap();
        prop_assert!((below.t1_exponent - above.t1_exponent).abs() < 1e-6);
        Ok(())
    })
}

pub fn asgd_gradient_check(cases: u32) -> Result<(), String> {
    let input = (1usize..6, any::<u64>(), prop::collection::vec(-10.0..10.0f64, 3), -1.0..1.0f64, 0.0..0.5f64);
    run(cases, input, |(half, seed, angles, y, lambda)| {
        let m = 2 * half;
        // move away from init so the regularizer and the error are both active
        let mut net = init_network(m, 2, seed).unwrap();
        net.asgd_step(&circle_point(angles[0]), 0.7, 0.5, 0.0).unwrap();
        net.asgd_step(&circle_point(angles[1]), -0.4, 0.5, 0.0).unwrap();
        let x = circle_point(angles[2]);
        let eta = 1e-3;
        let mut stepped = net.clone();
        stepped.asgd_step(&x, y, eta, lambda).unwrap();

        let a = net.a().to_vec();
        let b: Vec<f64> = (0..m).flat_map(|r| net.b_row(r).to_vec()).collect();
        let a0 = net.a0().to_vec();
        let b0: Vec<f64> = (0..m).flat_map(|r| net.b0_row(r).to_vec()).collect();
        // ½(g(x) − y)² + (λ/2)‖Θ − Θ⁰‖²
        let risk = |a: &[f64], b: &[f64]| {
            let s = NetworkState::from_parts(a.to_vec(), b.to_vec(), 2, net.activation()).unwrap();
            let e = s.eval(&x).unwrap() - y;
            let dist: f64 = a.iter().zip(&a0).chain(b.iter().zip(&b0)).map(|(v, v0)| (v - v0).powi(2)).sum();
            0.5 * e * e + 0.5 * lambda * dist
        };
        let h = 1e-6;
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..m {
            let (mut ap, mut am) = (a.clone(), a.clone());
            ap[i] += h;
            am[i] -= h;
            let grad = (risk(&ap, &b) - risk(&am, &b)) / (2.0 * h);
            let moved = stepped.a()[i] - a[i];
            worst = worst.max((moved + eta * grad).abs());
            scale = scale.max((eta * grad).abs());
        }
        for i in 0..2 * m {
            let (mut bp, mut bm) = (b.clone(), b.clone());
            bp[i] += h;
            bm[i] -= h;
            let grad = (risk(&a, &bp) - risk(&a, &bm)) / (2.0 * h);
            let moved = stepped.b_row(i / 2)[i % 2] - b[i];
            worst = worst.max((moved + eta * grad).abs());
            scale = scale.max((eta * grad).abs());
        }
        prop_assert!(worst <= 1e-6 * scale.max(1e-12) + 1e-12, "worst {worst} scale {scale}");
        Ok(())
    })
}

pub const THEORY_CASES: u32 = 256;

/// Every invariant with its case count.
pub fn suite() -> Vec<(&'static str, u32, Check)> {
    vec![
        ("law: decomposition is non-negative", LAW_FIT_CASES, law_decomposition),
        ("law: non-increasing in n and s", LAW_FIT_CASES, law_monotone),
        ("law: strictly decreasing with positive rates", LAW_FIT_CASES, law_strictly_monotone),
        ("law: reduction identity", LAW_FIT_CASES, law_reduction_identity),
        ("law: limits at 1e12", LAW_FIT_CASES, law_limits),
        ("fit: simple round trip", LAW_FIT_CASES, fit_simple_round_trip),
        ("fit: full round trip", LAW_FIT_CASES, fit_full_round_trip),
        ("fit: fixing D never hurts alpha", LAW_FIT_CASES, fit_fixed_d_no_worse),
        ("fit: order invariance and determinism", LAW_FIT_CASES, fit_order_and_seed),
        ("fit: report shape", LAW_FIT_CASES, fit_report_shape),
        ("fit: stabilization fixed point", LAW_FIT_CASES, stabilize_fixed_point),
        ("fit: landscape argmin vs fit", LAW_FIT_CASES, landscape_vs_fit),
        ("complexity: formula and mean shift", LAW_FIT_CASES, entropy_formula_and_shift),
        ("complexity: monotone in shrinkage", LAW_FIT_CASES, entropy_monotone_in_shrinkage),
        ("complexity: permutation", LAW_FIT_CASES, entropy_permutation),
        ("theory: network init", THEORY_CASES, network_init),
        ("theory: fitted sample leaves parameters fixed", THEORY_CASES, asgd_fixed_when_fitted),
        ("theory: kernels PSD", THEORY_CASES, kernels_psd),
        ("theory: Parseval", THEORY_CASES, parseval),
        ("theory: regularized target contracts", THEORY_CASES, regularized_contraction),
        ("theory: rate boundaries", THEORY_CASES, rate_boundaries),
        ("theory: ASGD gradient check", THEORY_CASES, asgd_gradient_check),
    ]
}
