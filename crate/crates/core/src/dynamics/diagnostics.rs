use super::integrate::Trajectory;
use crate::network::ReactionNetwork;
use crate::siphon::{is_semi_locking, SpeciesSet};

/// Default threshold below which a final concentration counts as zero.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-6;

/// Smallest concentration over the trailing half of the trajectory's time
/// span. Zero for an empty trajectory.
pub fn persistence_margin(traj: &Trajectory) -> f64 {
    let (Some(&t0), Some(&t1)) = (traj.times.first(), traj.times.last()) else {
        return 0.0;
    };
    let half = t0 + 0.5 * (t1 - t0);
    traj.times
        .iter()
        .zip(&traj.states)
        .filter(|(&t, _)| t >= half)
        .flat_map(|(_, x)| x.iter().copied())
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaDiagnostic {
    /// Species below the threshold at the final time.
    pub zero_set: SpeciesSet,
    /// Whether the zero set is semi-locking (vacuously true when empty).
    pub semi_locking: bool,
}

impl OmegaDiagnostic {
    /// A nonempty, non-semi-locking zero set cannot be the support pattern of
    /// an ω-limit point: either the run is still transient or the integrator
    /// misbehaved.
    pub fn consistent(&self) -> bool {
        self.semi_locking
    }
}

pub fn omega_limit_siphon_check(net: &ReactionNetwork, traj: &Trajectory, threshold: f64) -> OmegaDiagnostic {
    let x = traj.final_state();
    let zero_set = SpeciesSet::from_indices((0..x.len()).filter(|&i| x[i] < threshold));
    let semi_locking = zero_set.is_empty() || is_semi_locking(net, zero_set);
    OmegaDiagnostic { zero_set, semi_locking }
}
