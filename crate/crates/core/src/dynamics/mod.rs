//! Floating-point dynamics: rate laws, Lyapunov function, integration,
//! equilibria and persistence diagnostics.

use alloc::string::String;

use thiserror::Error;

pub mod dense;
pub mod diagnostics;
pub mod equilibrium;
pub mod integrate;
pub mod kinetics;
pub mod lyapunov;
pub mod quadrature;

pub use diagnostics::{omega_limit_siphon_check, persistence_margin, OmegaDiagnostic};
pub use equilibrium::{complex_balanced_equilibrium, find_equilibrium, EquilibriumOptions, EquilibriumResult};
pub use integrate::{simulate, SimulationOptions, Trajectory};
pub use kinetics::{jacobian, rhs, Activity, Identity, KineticSystem, Kinetics, SaturatingLeak};
pub use lyapunov::{lyapunov, lyapunov_with, Lyapunov};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DynamicsError {
    #[error("vector has {got} entries, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state entry {0} is negative or not finite")]
    NegativeState(usize),
    #[error("state entry {0} must be strictly positive")]
    NonPositiveState(usize),
    #[error("invalid integration options")]
    InvalidOptions,
    #[error("step size underflow ({h:e}) at t = {t}")]
    StepUnderflow { t: f64, h: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("step limit reached at t = {t}")]
    MaxSteps { t: f64 },
    #[error("activity for species {species} is inadmissible: {reason}")]
    InvalidActivity { species: usize, reason: &'static str },
    #[error("hypotheses unmet: {0}")]
    HypothesesUnmet(String),
    #[error("complex-balanced equilibrium construction failed: {0}")]
    Stage1Failed(String),
    #[error("Newton iteration did not converge after {iterations} iterations (gradient norm {gradient_norm:e})")]
    NewtonFailed { iterations: usize, gradient_norm: f64 },
    #[error("equilibrium residual {residual:e} exceeds tolerance")]
    ResidualTooLarge { residual: f64 },
}
