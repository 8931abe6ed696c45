use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::kinetics::Kinetics;
use super::quadrature::adaptive_simpson;
use super::DynamicsError;

/// Absolute tolerance of the quadrature used for generalized kinetics.
pub const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Lyapunov {
    pub value: f64,
    pub gradient: Vec<f64>,
}

fn check(x: &[f64], x_bar: &[f64]) -> Result<(), DynamicsError> {
    if x.len() != x_bar.len() {
        return Err(DynamicsError::DimensionMismatch { expected: x_bar.len(), got: x.len() });
    }
    if let Some(i) = x.iter().chain(x_bar).position(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(DynamicsError::NonPositiveState(i % x.len().max(1)));
    }
    Ok(())
}

/// `V(x) = Σ x_i (ln x_i - ln x̄_i - 1) + x̄_i` with gradient
/// `ln x_i - ln x̄_i`.
pub fn lyapunov(x: &[f64], x_bar: &[f64]) -> Result<Lyapunov, DynamicsError> {
    check(x, x_bar)?;
    let mut value = 0.0;
    let mut gradient = Vec::with_capacity(x.len());
    for (&xi, &bi) in x.iter().zip(x_bar) {
        let g = xi.ln() - bi.ln();
        value += xi * (g - 1.0) + bi;
        gradient.push(g);
    }
    Ok(Lyapunov { value, gradient })
}

/// `V(x) = Σ ∫_{x̄_i}^{x_i} (ρ_i(s) - ρ_i(x̄_i)) ds` with `ρ_i = ln θ_i`.
///
/// Mass-action kinetics uses the closed form of [`lyapunov`]; generalized
/// kinetics integrates numerically.
pub fn lyapunov_with(kinetics: &Kinetics, x: &[f64], x_bar: &[f64]) -> Result<Lyapunov, DynamicsError> {
    match kinetics {
        Kinetics::MassAction => lyapunov(x, x_bar),
        Kinetics::Generalized(_) => {
            check(x, x_bar)?;
            kinetics.check_dimension(x.len())?;
            let mut value = 0.0;
            let mut gradient = Vec::with_capacity(x.len());
            for (i, (&xi, &bi)) in x.iter().zip(x_bar).enumerate() {
                let rho_bar = kinetics.log_activity(i, bi);
                value += adaptive_simpson(|s| kinetics.log_activity(i, s) - rho_bar, bi, xi, QUADRATURE_TOL);
                gradient.push(kinetics.log_activity(i, xi) - rho_bar);
            }
            Ok(Lyapunov { value, gradient })
        }
    }
}

/// `∫_a^b (ρ_i(s) - r) ds` for positive `a`, `b`.
pub(crate) fn shifted_log_integral(kinetics: &Kinetics, i: usize, a: f64, b: f64, r: f64) -> f64 {
    match kinetics {
        Kinetics::MassAction => {
            let anti = |s: f64| s * s.ln() - s - r * s;
            anti(b) - anti(a)
        }
        Kinetics::Generalized(_) => adaptive_simpson(|s| kinetics.log_activity(i, s) - r, a, b, QUADRATURE_TOL),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::kinetics::Identity;
    use alloc::sync::Arc;
    use alloc::vec;

    #[test]
    fn zero_at_reference() {
        let l = lyapunov(&[0.3, 2.0], &[0.3, 2.0]).unwrap();
        assert_eq!(l.value, 0.0);
        assert_eq!(l.gradient, vec![0.0, 0.0]);
    }

    #[test]
    fn hand_value() {
        let e = core::f64::consts::E;
        let l = lyapunov(&[e, 1.0], &[1.0, 1.0]).unwrap();
        assert!((l.value - 1.0).abs() < 1e-15);
        assert!((l.gradient[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_activity_matches_closed_form() {
        let k = Kinetics::uniform(Arc::new(Identity), 2).unwrap();
        let xb = [0.7, 1.9];
        for &x in &[[0.2, 3.0], [1.5, 0.4], [0.7, 1.9]] {
            let a = lyapunov(&x, &xb).unwrap();
            let b = lyapunov_with(&k, &x, &xb).unwrap();
            assert!((a.value - b.value).abs() < 1e-12, "{} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn rejects_boundary() {
        assert_eq!(lyapunov(&[0.0, 1.0], &[1.0, 1.0]), Err(DynamicsError::NonPositiveState(0)));
    }
}
