//! Positive equilibria of weakly reversible, deficiency zero networks.
//!
//! Stage 1 builds one complex-balanced equilibrium `x*`: the kernel of each
//! linkage class's rate-weighted Laplacian is given by its principal minors
//! (matrix-tree theorem), and `ln x*` solves `y_j · ln x* = ln κ_j + λ_L`.
//! Stage 2 minimizes the strictly convex
//! `h(x) = Σ ∫ (ρ_i(s) - ln x*_i) ds` over the class `c + S` by damped Newton
//! in reduced coordinates `x = c + B α`; its minimizer is the class
//! equilibrium.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::dense::{determinant, solve_consistent, solve_spd};
use super::kinetics::{KineticSystem, Kinetics};
use super::lyapunov::shifted_log_integral;
use super::DynamicsError;
use crate::network::ReactionNetwork;
use crate::structure::structure_report;

#[derive(Clone, Debug)]
pub struct EquilibriumOptions {
    pub max_iterations: usize,
    /// Convergence threshold on the reduced gradient's ∞-norm.
    pub gradient_tol: f64,
    /// Backtracking factor.
    pub shrink: f64,
    /// States are kept above this floor during line search.
    pub positivity_floor: f64,
    /// Accepted `max |f(x̄)|`, relative to `max(1, largest flux)`.
    pub residual_tol: f64,
}

impl Default for EquilibriumOptions {
    fn default() -> Self {
        EquilibriumOptions {
            max_iterations: 200,
            gradient_tol: 1e-10,
            shrink: 0.5,
            positivity_floor: 1e-12,
            residual_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumResult {
    pub x_bar: Vec<f64>,
    /// Complex-balanced equilibrium from stage 1 (mass-action rates).
    pub x_star: Vec<f64>,
    pub class_anchor: Vec<f64>,
    /// `max_i |f_i(x̄)|`.
    pub residual_rhs: f64,
    /// `max` over complexes of `|inflow - outflow| / max(inflow, outflow)`.
    pub complex_balance_residual: f64,
    pub newton_iterations: usize,
}

/// Relative complex-balance defect at `x`.
pub fn complex_balance_residual(net: &ReactionNetwork, kinetics: &Kinetics, x: &[f64]) -> Result<f64, DynamicsError> {
    let sys = KineticSystem::new(net, kinetics.clone())?;
    sys.validate_state(x)?;
    let flux = sys.fluxes(x);
    let (complexes, edges) = net.complex_index();
    let mut inflow = alloc::vec![0.0; complexes.len()];
    let mut outflow = alloc::vec![0.0; complexes.len()];
    for (&(s, p), v) in edges.iter().zip(&flux) {
        outflow[s] += v;
        inflow[p] += v;
    }
    Ok(inflow
        .iter()
        .zip(&outflow)
        .map(|(a, b)| {
            let scale = a.max(*b);
            if scale == 0.0 {
                0.0
            } else {
                (a - b).abs() / scale
            }
        })
        .fold(0.0, f64::max))
}

/// Stage 1: one complex-balanced equilibrium for the network's rate
/// constants under mass action.
pub fn complex_balanced_equilibrium(net: &ReactionNetwork) -> Result<Vec<f64>, DynamicsError> {
    let report = structure_report(net);
    check_hypotheses(&report)?;
    let m = net.species_count();
    let (complexes, edges) = net.complex_index();
    let n = complexes.len();
    let rates = net.rates();

    let mut log_kappa = alloc::vec![0.0; n];
    for class in &report.linkage_classes {
        let local = |c: usize| class.iter().position(|&x| x == c);
        let size = class.len();
        // Negated Laplacian: -L[i][i] = outflow rate sum, -L[j][i] = -k_{i->j}.
        let mut neg_lap = alloc::vec![alloc::vec![0.0; size]; size];
        for (&(s, p), &k) in edges.iter().zip(&rates) {
            if let (Some(i), Some(j)) = (local(s), local(p)) {
                neg_lap[i][i] += k;
                neg_lap[j][i] -= k;
            }
        }
        for (pos, &c) in class.iter().enumerate() {
            let minor: Vec<Vec<f64>> = (0..size)
                .filter(|&r| r != pos)
                .map(|r| (0..size).filter(|&col| col != pos).map(|col| neg_lap[r][col]).collect())
                .collect();
            let kappa = if minor.is_empty() { 1.0 } else { determinant(&minor) };
            if !(kappa > 0.0) {
                return Err(DynamicsError::Stage1Failed(format!("tree constant of complex {} is not positive", c)));
            }
            log_kappa[c] = kappa.ln();
        }
    }

    // Unknowns: ln x* (m), then one shift per linkage class.
    let l = report.linkage_classes.len();
    let mut class_of = alloc::vec![0; n];
    for (ci, class) in report.linkage_classes.iter().enumerate() {
        for &c in class {
            class_of[c] = ci;
        }
    }
    let a: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut row: Vec<f64> = complexes[j].to_dense(m).into_iter().map(|v| v as f64).collect();
            row.extend((0..l).map(|ci| if ci == class_of[j] { -1.0 } else { 0.0 }));
            row
        })
        .collect();
    let sol = solve_consistent(&a, &log_kappa, 1e-12)
        .ok_or_else(|| DynamicsError::Stage1Failed("log-linear system is inconsistent".into()))?;
    let x_star: Vec<f64> = sol[..m].iter().map(|v| v.exp()).collect();
    let cb = complex_balance_residual(net, &Kinetics::MassAction, &x_star)?;
    if !(cb <= 1e-9) {
        return Err(DynamicsError::Stage1Failed(format!("complex-balance residual {:e}", cb)));
    }
    Ok(x_star)
}

fn check_hypotheses(report: &crate::structure::StructureReport) -> Result<(), DynamicsError> {
    if !report.weakly_reversible {
        return Err(DynamicsError::HypothesesUnmet("network is not weakly reversible".into()));
    }
    if report.deficiency != 0 {
        return Err(DynamicsError::HypothesesUnmet(format!("deficiency is {}, not 0", report.deficiency)));
    }
    Ok(())
}

/// The unique positive equilibrium in the compatibility class of `c`.
pub fn find_equilibrium(
    net: &ReactionNetwork,
    kinetics: &Kinetics,
    c: &[f64],
    opts: &EquilibriumOptions,
) -> Result<EquilibriumResult, DynamicsError> {
    let m = net.species_count();
    kinetics.check_dimension(m)?;
    if c.len() != m {
        return Err(DynamicsError::DimensionMismatch { expected: m, got: c.len() });
    }
    if let Some(i) = c.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(DynamicsError::NonPositiveState(i));
    }
    let x_star = complex_balanced_equilibrium(net)?;
    let target: Vec<f64> = x_star.iter().map(|v| v.ln()).collect();
    let basis = structure_report(net).stoichiometric_basis.to_f64();
    let s = basis.len();

    let mut x = c.to_vec();
    let reduced_gradient = |x: &[f64]| -> Vec<f64> {
        let g: Vec<f64> = (0..m).map(|i| kinetics.log_activity(i, x[i]) - target[i]).collect();
        basis.iter().map(|b| b.iter().zip(&g).map(|(bi, gi)| bi * gi).sum()).collect()
    };
    let inf_norm = |v: &[f64]| v.iter().fold(0.0f64, |a, b| a.max(b.abs()));

    let mut iterations = 0;
    let mut grad = reduced_gradient(&x);
    while inf_norm(&grad) >= opts.gradient_tol {
        if iterations >= opts.max_iterations {
            return Err(DynamicsError::NewtonFailed { iterations, gradient_norm: inf_norm(&grad) });
        }
        iterations += 1;
        let d: Vec<f64> = (0..m).map(|i| kinetics.log_activity_derivative(i, x[i])).collect();
        let hess: Vec<Vec<f64>> = (0..s)
            .map(|a| (0..s).map(|b| (0..m).map(|i| basis[a][i] * d[i] * basis[b][i]).sum()).collect())
            .collect();
        let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
        let step = solve_spd(&hess, &neg).ok_or(DynamicsError::NewtonFailed {
            iterations,
            gradient_norm: inf_norm(&grad),
        })?;
        let dx: Vec<f64> = (0..m).map(|i| (0..s).map(|k| basis[k][i] * step[k]).sum()).collect();
        let slope: f64 = grad.iter().zip(&step).map(|(g, p)| g * p).sum();

        let mut t = 1.0;
        let old_norm = inf_norm(&grad);
        loop {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + t * b).collect();
            if trial.iter().all(|&v| v > opts.positivity_floor) {
                let decrease: f64 = (0..m)
                    .map(|i| shifted_log_integral(kinetics, i, x[i], trial[i], target[i]))
                    .sum();
                let trial_grad = reduced_gradient(&trial);
                // Near the optimum the objective change drowns in rounding,
                // so a smaller gradient is accepted as progress too.
                if decrease <= 1e-4 * t * slope || inf_norm(&trial_grad) < old_norm {
                    x = trial;
                    grad = trial_grad;
                    break;
                }
            }
            t *= opts.shrink;
            if t < 1e-20 {
                return Err(DynamicsError::NewtonFailed { iterations, gradient_norm: old_norm });
            }
        }
    }

    let sys = KineticSystem::new(net, kinetics.clone())?;
    let f = sys.rhs(&x)?;
    let residual_rhs = inf_norm(&f);
    let flux_scale = sys.fluxes(&x).into_iter().fold(1.0f64, f64::max);
    if !(residual_rhs <= opts.residual_tol * flux_scale) {
        return Err(DynamicsError::ResidualTooLarge { residual: residual_rhs });
    }
    let complex_balance_residual = complex_balance_residual(net, kinetics, &x)?;
    Ok(EquilibriumResult {
        x_bar: x,
        x_star,
        class_anchor: c.to_vec(),
        residual_rhs,
        complex_balance_residual,
        newton_iterations: iterations,
    })
}
