//! A small dense Levenberg–Marquardt solver.
//!
//! Problems here have at most five parameters, so the damped normal equations
//! are solved directly with a Cholesky factorization. Damping follows
//! Nielsen's gain-ratio rule with Marquardt's diagonal scaling.

use nalgebra::{DMatrix, DVector};

pub(crate) trait LeastSquares {
    fn n_params(&self) -> usize;
    fn n_residuals(&self) -> usize;
    /// Writes the residual vector. Returns `false` when `theta` yields
    /// non-finite residuals; the step is then rejected.
    fn residuals(&self, theta: &DVector<f64>, out: &mut DVector<f64>) -> bool;
    fn jacobian(&self, theta: &DVector<f64>, out: &mut DMatrix<f64>);
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LmConfig {
    /// Relative objective decrease below which an accepted step terminates.
    pub tol: f64,
    /// Step norm below which the iteration terminates.
    pub step_tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct LmOutcome {
    pub theta: DVector<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

// Below this the residuals are at rounding level and no step can help.
const OBJECTIVE_FLOOR: f64 = 1e-28;

pub(crate) fn minimize<P: LeastSquares>(problem: &P, theta0: DVector<f64>, cfg: LmConfig) -> LmOutcome {
    let p = problem.n_params();
    let m = problem.n_residuals();
    let mut theta = theta0;
    let mut r = DVector::zeros(m);
    if !problem.residuals(&theta, &mut r) {
        return LmOutcome {
            theta,
            objective: f64::INFINITY,
            iterations: 0,
            converged: false,
        };
    }
    let mut f = r.norm_squared();
    if p == 0 {
        return LmOutcome {
            theta,
            objective: f,
            iterations: 0,
            converged: true,
        };
    }

    let mut jac = DMatrix::zeros(m, p);
    let mut r_trial = DVector::zeros(m);
    let mut mu = -1.0;
    let mut nu = 2.0;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        if f <= OBJECTIVE_FLOOR {
            return LmOutcome {
                theta,
                objective: f,
                iterations,
                converged: true,
            };
        }
        iterations += 1;
        problem.jacobian(&theta, &mut jac);
        let jtj = jac.tr_mul(&jac);
        let grad = jac.tr_mul(&r);
        if grad.amax() <= 1e-300 {
            return LmOutcome {
                theta,
                objective: f,
                iterations,
                converged: true,
            };
        }
        let max_diag = (0..p).map(|i| jtj[(i, i)]).fold(0.0f64, f64::max);
        let diag: Vec<f64> = (0..p)
            .map(|i| jtj[(i, i)].max(1e-12 * max_diag).max(1e-300))
            .collect();
        if mu < 0.0 {
            mu = 1e-3;
        }

        // Inner loop: raise damping until a step reduces the objective.
        loop {
            let mut a = jtj.clone();
            for i in 0..p {
                a[(i, i)] += mu * diag[i];
            }
            let step = match a.cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => {
                    mu *= nu;
                    nu *= 2.0;
                    if mu > 1e30 {
                        return LmOutcome {
                            theta,
                            objective: f,
                            iterations,
                            converged: false,
                        };
                    }
                    continue;
                }
            };
            let step_norm = step.norm();
            let trial = &theta + &step;
            let ok = problem.residuals(&trial, &mut r_trial);
            let f_trial = if ok { r_trial.norm_squared() } else { f64::INFINITY };

            if f_trial < f {
                // predicted reduction of the linear model
                let mut damp = 0.0;
                for i in 0..p {
                    damp += mu * diag[i] * step[i] * step[i];
                }
                let predicted = damp - step.dot(&grad);
                let rho = if predicted > 0.0 { (f - f_trial) / predicted } else { 1.0 };
                let rel_decrease = (f - f_trial) / f;
                theta = trial;
                std::mem::swap(&mut r, &mut r_trial);
                f = f_trial;
                mu *= f64::max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0).powi(3));
                nu = 2.0;
                if rel_decrease < cfg.tol || step_norm < cfg.step_tol {
                    return LmOutcome {
                        theta,
                        objective: f,
                        iterations,
                        converged: true,
                    };
                }
                break;
            }

            if step_norm < cfg.step_tol {
                // No representable step decreases the objective.
                return LmOutcome {
                    theta,
                    objective: f,
                    iterations,
                    converged: true,
                };
            }
            mu *= nu;
            nu *= 2.0;
            if mu > 1e30 {
                return LmOutcome {
                    theta,
                    objective: f,
                    iterations,
                    converged: false,
                };
            }
        }
    }

    LmOutcome {
        theta,
        objective: f,
        iterations,
        converged: false,
    }
}
