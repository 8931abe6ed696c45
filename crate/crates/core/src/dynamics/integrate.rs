//! Dormand-Prince 5(4) integration with positivity-preserving step
//! rejection.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::kinetics::{KineticSystem, Kinetics};
use super::lyapunov::lyapunov_with;
use super::DynamicsError;
use crate::network::ReactionNetwork;
use crate::structure::conservation_basis;

// The system is autonomous, so the node coefficients are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

// 5th order weights minus embedded 4th order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Clone, Debug)]
pub struct SimulationOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Smallest admissible step; going below it is an error.
    pub min_step: f64,
    pub max_step: Option<f64>,
    pub max_steps: usize,
    /// Equilibrium used as the Lyapunov reference, if known.
    pub reference: Option<Vec<f64>>,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            rtol: 1e-8,
            atol: 1e-10,
            min_step: 1e-14,
            max_step: None,
            max_steps: 10_000_000,
            reference: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `V(x(t))` against the reference equilibrium, when one was supplied.
    pub lyapunov: Option<Vec<f64>>,
    /// `max_w |⟨w, x(t) - x(0)⟩|` over the conservation basis.
    pub conservation_residual: Vec<f64>,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().map(|v| v.as_slice()).unwrap_or(&[])
    }
}

fn error_norm(err: &[f64], y0: &[f64], y1: &[f64], rtol: f64, atol: f64) -> f64 {
    let n = err.len().max(1) as f64;
    let sum: f64 = err
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(e, (a, b))| {
            let sc = atol + rtol * a.abs().max(b.abs());
            (e / sc) * (e / sc)
        })
        .sum();
    (sum / n).sqrt()
}

fn conservation_residual(laws: &[Vec<f64>], x0: &[f64], x: &[f64]) -> f64 {
    laws.iter()
        .map(|w| w.iter().zip(x.iter().zip(x0)).map(|(wi, (a, b))| wi * (a - b)).sum::<f64>().abs())
        .fold(0.0, f64::max)
}

/// Integrates `ẋ = f(x)` from `x0 > 0` over `[0, t_end]`, recording every
/// accepted step. A step whose proposed state has a nonpositive entry is
/// rejected and halved.
pub fn simulate(
    net: &ReactionNetwork,
    kinetics: &Kinetics,
    x0: &[f64],
    t_end: f64,
    opts: &SimulationOptions,
) -> Result<Trajectory, DynamicsError> {
    let sys = KineticSystem::new(net, kinetics.clone())?;
    let m = sys.species_count();
    if x0.len() != m {
        return Err(DynamicsError::DimensionMismatch { expected: m, got: x0.len() });
    }
    if let Some(i) = x0.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(DynamicsError::NonPositiveState(i));
    }
    if !(t_end.is_finite() && t_end > 0.0) || !(opts.rtol > 0.0) || !(opts.atol > 0.0) {
        return Err(DynamicsError::InvalidOptions);
    }
    if let Some(r) = &opts.reference {
        if r.len() != m {
            return Err(DynamicsError::DimensionMismatch { expected: m, got: r.len() });
        }
    }
    let laws = conservation_basis(net).to_f64();
    let lyap = |x: &[f64]| -> Result<Option<f64>, DynamicsError> {
        match &opts.reference {
            Some(r) => Ok(Some(lyapunov_with(kinetics, x, r)?.value)),
            None => Ok(None),
        }
    };

    let mut traj = Trajectory {
        times: alloc::vec![0.0],
        states: alloc::vec![x0.to_vec()],
        lyapunov: lyap(x0)?.map(|v| alloc::vec![v]),
        conservation_residual: alloc::vec![0.0],
        rejected_steps: 0,
    };

    let mut k: [Vec<f64>; 7] = core::array::from_fn(|_| alloc::vec![0.0; m]);
    let mut y = x0.to_vec();
    let mut stage = alloc::vec![0.0; m];
    let mut y_new = alloc::vec![0.0; m];
    let mut err = alloc::vec![0.0; m];
    let h_max = opts.max_step.unwrap_or(t_end);

    sys.rhs_into(&y, &mut k[0]);
    let mut h = {
        let d0 = error_norm(&y, &y, &y, opts.rtol, opts.atol);
        let d1 = error_norm(&k[0], &y, &y, opts.rtol, opts.atol);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0.min(h_max).min(t_end)
    };
    let mut t = 0.0;
    let mut steps = 0usize;

    while t < t_end {
        if steps >= opts.max_steps {
            return Err(DynamicsError::MaxSteps { t });
        }
        steps += 1;
        let last = t_end - (t + h) < opts.min_step;
        if last {
            h = t_end - t;
        }
        for s in 1..7 {
            let (done, todo) = k.split_at_mut(s);
            for i in 0..m {
                stage[i] = y[i] + h * done.iter().zip(&A[s]).map(|(kj, a)| a * kj[i]).sum::<f64>();
            }
            sys.rhs_into(&stage, &mut todo[0]);
        }
        // Stage 7 evaluates f at the 5th-order solution.
        y_new.copy_from_slice(&stage);
        for i in 0..m {
            err[i] = h * (0..7).map(|s| E[s] * k[s][i]).sum::<f64>();
        }

        if y_new.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::NonFinite { t });
        }
        if y_new.iter().any(|&v| v <= 0.0) {
            traj.rejected_steps += 1;
            h *= 0.5;
            if h < opts.min_step {
                return Err(DynamicsError::StepUnderflow { t, h });
            }
            continue;
        }
        let en = error_norm(&err, &y, &y_new, opts.rtol, opts.atol);
        if en <= 1.0 {
            t = if last { t_end } else { t + h };
            core::mem::swap(&mut y, &mut y_new);
            let (first, rest) = k.split_at_mut(1);
            first[0].copy_from_slice(&rest[5]);
            traj.times.push(t);
            traj.conservation_residual.push(conservation_residual(&laws, x0, &y));
            if let Some(v) = lyap(&y)? {
                traj.lyapunov.as_mut().unwrap().push(v);
            }
            traj.states.push(y.clone());
            let factor = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * factor).min(h_max);
        } else {
            traj.rejected_steps += 1;
            h *= (0.9 * en.powf(-0.2)).clamp(0.2, 1.0);
        }
        if h < opts.min_step && t < t_end {
            return Err(DynamicsError::StepUnderflow { t, h });
        }
    }
    Ok(traj)
}
