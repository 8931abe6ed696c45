use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use super::DynamicsError;
use crate::network::ReactionNetwork;

/// A per-species monotone response `θ` used by generalized kinetics, where
/// a reaction with source `y` fires at `k θ(x_1)^{y_1} ⋯ θ(x_m)^{y_m}`.
///
/// Admissible functions are locally Lipschitz, vanish at zero, are strictly
/// increasing and onto `[0, ∞)` on the nonnegative axis, and have `ln θ`
/// integrable near zero. Only the first properties are spot-checked; the
/// integrability condition is the caller's responsibility.
pub trait Activity: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;

    fn log_value(&self, x: f64) -> f64 {
        self.value(x).ln()
    }

    /// `d/dx ln θ(x)`.
    fn log_derivative(&self, x: f64) -> f64 {
        self.derivative(x) / self.value(x)
    }

    /// Solves `θ(x) = y` for `x >= 0` by bracketing and bisection.
    fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        while self.value(hi) < y {
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.value(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// `θ(x) = |x|`, which recovers mass action.
#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl Activity for Identity {
    fn value(&self, x: f64) -> f64 {
        x.abs()
    }
    fn derivative(&self, x: f64) -> f64 {
        if x < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
    fn log_value(&self, x: f64) -> f64 {
        x.abs().ln()
    }
    fn log_derivative(&self, x: f64) -> f64 {
        1.0 / x
    }
    fn inverse(&self, y: f64) -> f64 {
        y.max(0.0)
    }
}

/// `θ(x) = x / (1 + x) + leak · x`: a saturating response plus a linear
/// term that makes it onto `[0, ∞)`.
#[derive(Clone, Copy, Debug)]
pub struct SaturatingLeak {
    pub leak: f64,
}

impl Activity for SaturatingLeak {
    fn value(&self, x: f64) -> f64 {
        let x = x.abs();
        x / (1.0 + x) + self.leak * x
    }
    fn derivative(&self, x: f64) -> f64 {
        let a = 1.0 + x.abs();
        let d = 1.0 / (a * a) + self.leak;
        if x < 0.0 {
            -d
        } else {
            d
        }
    }
}

/// Rate law selection.
#[derive(Clone)]
pub enum Kinetics {
    MassAction,
    /// One activity per species, in species order.
    Generalized(Vec<Arc<dyn Activity>>),
}

impl fmt::Debug for Kinetics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kinetics::MassAction => f.write_str("MassAction"),
            Kinetics::Generalized(t) => write!(f, "Generalized({} species)", t.len()),
        }
    }
}

const SPOT_GRID: [f64; 12] = [0.0, 1e-9, 1e-6, 1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0, 1e4];

impl Kinetics {
    /// Generalized kinetics with runtime spot checks: `θ(0) = 0`, `θ` strictly
    /// increasing with positive values on a sample grid.
    pub fn generalized(activities: Vec<Arc<dyn Activity>>) -> Result<Self, DynamicsError> {
        for (i, a) in activities.iter().enumerate() {
            if a.value(0.0) != 0.0 {
                return Err(DynamicsError::InvalidActivity { species: i, reason: "θ(0) is not 0" });
            }
            for w in SPOT_GRID.windows(2) {
                let (lo, hi) = (a.value(w[0]), a.value(w[1]));
                if !(hi > lo) || !hi.is_finite() {
                    return Err(DynamicsError::InvalidActivity { species: i, reason: "θ is not strictly increasing" });
                }
            }
            if !a.derivative(1.0).is_finite() {
                return Err(DynamicsError::InvalidActivity { species: i, reason: "θ' is not finite" });
            }
        }
        Ok(Kinetics::Generalized(activities))
    }

    /// The same activity for each of `m` species.
    pub fn uniform(activity: Arc<dyn Activity>, m: usize) -> Result<Self, DynamicsError> {
        Self::generalized((0..m).map(|_| activity.clone()).collect())
    }

    pub(crate) fn check_dimension(&self, m: usize) -> Result<(), DynamicsError> {
        match self {
            Kinetics::Generalized(a) if a.len() != m => {
                Err(DynamicsError::DimensionMismatch { expected: m, got: a.len() })
            }
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn activity(&self, i: usize, x: f64) -> f64 {
        match self {
            Kinetics::MassAction => x,
            Kinetics::Generalized(a) => a[i].value(x),
        }
    }

    #[inline]
    pub fn activity_derivative(&self, i: usize, x: f64) -> f64 {
        match self {
            Kinetics::MassAction => 1.0,
            Kinetics::Generalized(a) => a[i].derivative(x),
        }
    }

    /// `ρ_i(x) = ln θ_i(x)`.
    #[inline]
    pub fn log_activity(&self, i: usize, x: f64) -> f64 {
        match self {
            Kinetics::MassAction => x.ln(),
            Kinetics::Generalized(a) => a[i].log_value(x),
        }
    }

    #[inline]
    pub fn log_activity_derivative(&self, i: usize, x: f64) -> f64 {
        match self {
            Kinetics::MassAction => 1.0 / x,
            Kinetics::Generalized(a) => a[i].log_derivative(x),
        }
    }

    pub fn inverse_activity(&self, i: usize, y: f64) -> f64 {
        match self {
            Kinetics::MassAction => y,
            Kinetics::Generalized(a) => a[i].inverse(y),
        }
    }
}

/// A network compiled for repeated right-hand-side evaluation.
#[derive(Clone, Debug)]
pub struct KineticSystem {
    m: usize,
    rates: Vec<f64>,
    sources: Vec<Vec<(usize, u32)>>,
    /// Sparse reaction vectors `y' - y`.
    changes: Vec<Vec<(usize, f64)>>,
    kinetics: Kinetics,
}

impl KineticSystem {
    pub fn new(net: &ReactionNetwork, kinetics: Kinetics) -> Result<Self, DynamicsError> {
        let m = net.species_count();
        kinetics.check_dimension(m)?;
        let sources = net.reactions().iter().map(|r| r.source.terms().to_vec()).collect();
        let changes = (0..net.reactions().len())
            .map(|r| {
                net.reaction_vector(r)
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, v)| v != 0)
                    .map(|(i, v)| (i, v as f64))
                    .collect()
            })
            .collect();
        Ok(KineticSystem { m, rates: net.rates(), sources, changes, kinetics })
    }

    pub fn species_count(&self) -> usize {
        self.m
    }

    pub fn kinetics(&self) -> &Kinetics {
        &self.kinetics
    }

    pub(crate) fn validate_state(&self, x: &[f64]) -> Result<(), DynamicsError> {
        if x.len() != self.m {
            return Err(DynamicsError::DimensionMismatch { expected: self.m, got: x.len() });
        }
        match x.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            Some(i) => Err(DynamicsError::NegativeState(i)),
            None => Ok(()),
        }
    }

    /// Rate of every reaction at `x`. Species absent from a source
    /// contribute a factor 1.
    pub fn fluxes_into(&self, x: &[f64], out: &mut [f64]) {
        for (r, src) in self.sources.iter().enumerate() {
            let mut v = self.rates[r];
            for &(i, c) in src {
                v *= self.kinetics.activity(i, x[i]).powi(c as i32);
            }
            out[r] = v;
        }
    }

    pub fn fluxes(&self, x: &[f64]) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.rates.len()];
        self.fluxes_into(x, &mut out);
        out
    }

    /// `f(x) = Σ_r rate_r(x) (y' - y)`, without input validation.
    pub fn rhs_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (r, src) in self.sources.iter().enumerate() {
            let mut v = self.rates[r];
            for &(i, c) in src {
                v *= self.kinetics.activity(i, x[i]).powi(c as i32);
            }
            if v != 0.0 {
                for &(i, d) in &self.changes[r] {
                    out[i] += v * d;
                }
            }
        }
    }

    pub fn rhs(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        self.validate_state(x)?;
        let mut out = alloc::vec![0.0; self.m];
        self.rhs_into(x, &mut out);
        Ok(out)
    }

    /// Analytic Jacobian `∂f_i/∂x_j`, valid on the closed orthant.
    pub fn jacobian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>, DynamicsError> {
        self.validate_state(x)?;
        let mut jac = alloc::vec![alloc::vec![0.0; self.m]; self.m];
        for (r, src) in self.sources.iter().enumerate() {
            let theta: Vec<f64> = src.iter().map(|&(i, _)| self.kinetics.activity(i, x[i])).collect();
            for (pos, &(j, c)) in src.iter().enumerate() {
                let mut d = self.rates[r]
                    * c as f64
                    * theta[pos].powi(c as i32 - 1)
                    * self.kinetics.activity_derivative(j, x[j]);
                for (other, &(_, c2)) in src.iter().enumerate() {
                    if other != pos {
                        d *= theta[other].powi(c2 as i32);
                    }
                }
                if d != 0.0 {
                    for &(i, v) in &self.changes[r] {
                        jac[i][j] += v * d;
                    }
                }
            }
        }
        Ok(jac)
    }
}

pub fn rhs(net: &ReactionNetwork, kinetics: &Kinetics, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
    KineticSystem::new(net, kinetics.clone())?.rhs(x)
}

pub fn jacobian(net: &ReactionNetwork, kinetics: &Kinetics, x: &[f64]) -> Result<Vec<Vec<f64>>, DynamicsError> {
    KineticSystem::new(net, kinetics.clone())?.jacobian(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_network;
    use alloc::vec;

    #[test]
    fn reversible_pair_balances() {
        let net = parse_network("A <-> B ; kf=1, kr=2").unwrap();
        let f = rhs(&net, &Kinetics::MassAction, &[2.0, 1.0]).unwrap();
        assert_eq!(f, vec![0.0, 0.0]);
        let j = jacobian(&net, &Kinetics::MassAction, &[5.0, 0.3]).unwrap();
        assert_eq!(j, vec![vec![-1.0, 2.0], vec![1.0, -2.0]]);
    }

    #[test]
    fn unit_fluxes_cancel() {
        let net = parse_network("2A <-> A + B ; kf=1, kr=1\nA + B <-> B + C ; kf=1, kr=1").unwrap();
        assert_eq!(rhs(&net, &Kinetics::MassAction, &[1.0, 1.0, 1.0]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn locking_set_at_zero_freezes() {
        let net = parse_network("2A <-> A + B ; kf=1, kr=1\n2B <-> A + C ; kf=1, kr=1").unwrap();
        assert_eq!(rhs(&net, &Kinetics::MassAction, &[0.0, 0.0, 3.0]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn rejects_bad_states() {
        let net = parse_network("A -> B ; k=1").unwrap();
        assert_eq!(
            rhs(&net, &Kinetics::MassAction, &[1.0, -1.0]),
            Err(DynamicsError::NegativeState(1))
        );
        assert!(matches!(
            rhs(&net, &Kinetics::MassAction, &[1.0]),
            Err(DynamicsError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn empty_source_is_constant_inflow() {
        let net = parse_network("0 -> A ; k=3\nA -> 0 ; k=1").unwrap();
        assert_eq!(rhs(&net, &Kinetics::MassAction, &[0.0]).unwrap(), vec![3.0]);
    }

    #[test]
    fn activity_validation() {
        struct Shifted;
        impl Activity for Shifted {
            fn value(&self, x: f64) -> f64 {
                x + 1.0
            }
            fn derivative(&self, _: f64) -> f64 {
                1.0
            }
        }
        assert!(Kinetics::uniform(Arc::new(Shifted), 2).is_err());
        assert!(Kinetics::uniform(Arc::new(SaturatingLeak { leak: 0.1 }), 2).is_ok());
        let inv = SaturatingLeak { leak: 0.1 }.inverse(0.7);
        assert!((SaturatingLeak { leak: 0.1 }.value(inv) - 0.7).abs() < 1e-14);
    }
}
