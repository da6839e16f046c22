//! Damped driven oscillator `m·x'' + c·x' + k·x = F(t)` in first-order form.
//!
//! The parameter vector layout is `[m, c, k]`; the forcing is part of the
//! model structure, not of θ, so likelihood scans can vary θ freely.

use crate::error::{Error, Result};
use crate::ode::{OdeSystem, ParamVector};
use crate::{real, Real};

/// Mass, damping coefficient, spring constant.
#[derive(Debug, Clone, Copy)]
pub struct OscillatorParams<R: Real> {
    pub m: R,
    pub c: R,
    pub k: R,
}

impl<R: Real> OscillatorParams<R> {
    pub fn new(m: R, c: R, k: R) -> Result<Self> {
        if !(m.is_finite() && m > R::zero()) {
            return Err(Error::Invalid("mass must be positive".into()));
        }
        if !(c.is_finite() && c >= R::zero()) {
            return Err(Error::Invalid("damping must be nonnegative".into()));
        }
        if !(k.is_finite() && k > R::zero()) {
            return Err(Error::Invalid("spring constant must be positive".into()));
        }
        Ok(Self { m, c, k })
    }

    pub fn theta(&self) -> ParamVector<R> {
        ParamVector::new(vec![self.m, self.c, self.k]).expect("finite params")
    }

    pub fn from_theta(theta: &ParamVector<R>) -> Result<Self> {
        if theta.len() < 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: theta.len() });
        }
        Self::new(theta[0], theta[1], theta[2])
    }
}

/// Forcing function F(t).
#[derive(Debug, Clone, Copy)]
pub enum ForcingSpec<R: Real> {
    Constant(R),
    /// 1 for t < t_change, f1 from t_change on.
    Step { f1: R, t_change: R },
    /// Smooth approximation of the step with ramp width a.
    TanhSmooth { f1: R, t_change: R, a: R },
}

impl<R: Real> ForcingSpec<R> {
    pub fn value(&self, t: R) -> R {
        match *self {
            ForcingSpec::Constant(v) => v,
            ForcingSpec::Step { f1, t_change } => {
                if t < t_change {
                    R::one()
                } else {
                    f1
                }
            }
            ForcingSpec::TanhSmooth { f1, t_change, a } => smooth_forcing_value(f1, t_change, a, t),
        }
    }
}

/// Affine-tanh ramp `(1+f1)/2 − ((1−f1)/2)·tanh((t − t_change)/a)`.
///
/// Interpolates the step endpoints exactly: 1 as t → −∞, f1 as t → +∞.
/// For f1 = −1 this reduces to `−tanh((t − t_change)/a)`.
pub fn smooth_forcing_value<R: Real>(f1: R, t_change: R, a: R, t: R) -> R {
    let half = real::<R>(0.5);
    let one = R::one();
    half * (one + f1) - half * (one - f1) * ((t - t_change) / a).tanh()
}

/// Builds the two-state system `d(x, ẋ)/dt = (ẋ, F(t)/m − (c/m)ẋ − (k/m)x)`
/// starting from rest at the origin.
pub fn oscillator_system<R: Real>(forcing: ForcingSpec<R>) -> OdeSystem<R> {
    oscillator_system_with_x0(forcing, [R::zero(), R::zero()])
}

pub fn oscillator_system_with_x0<R: Real>(forcing: ForcingSpec<R>, x0: [R; 2]) -> OdeSystem<R> {
    OdeSystem::new(
        2,
        R::zero(),
        x0.to_vec(),
        Box::new(move |t, x, theta, out| {
            let m = theta[0];
            let c = theta[1];
            let k = theta[2];
            out[0] = x[1];
            out[1] = (forcing.value(t) - c * x[1] - k * x[0]) / m;
        }),
    )
    .expect("two-state system with finite defaults")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_hand_checked_points() {
        let sys = oscillator_system(ForcingSpec::Constant(1.0f64));
        let theta = OscillatorParams::new(1.0, 0.2, 1.0).unwrap().theta();
        assert_eq!(sys.eval_rhs(0.0, &[0.0, 0.0], &theta).unwrap(), vec![0.0, 1.0]);
        let d = sys.eval_rhs(0.0, &[1.0, 1.0], &theta).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-15);
        assert!((d[1] - (1.0 - 0.2 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn steady_state_has_zero_rhs() {
        let sys = oscillator_system(ForcingSpec::Constant(1.0f64));
        let theta = OscillatorParams::new(1.0, 0.2, 1.0).unwrap().theta();
        let d = sys.eval_rhs(3.0, &[1.0, 0.0], &theta).unwrap();
        assert_eq!(d, vec![0.0, 0.0]);
    }

    #[test]
    fn step_forcing_boundary_is_right_inclusive() {
        let f = ForcingSpec::Step { f1: -1.0, t_change: 2.5 };
        assert_eq!(f.value(2.4999), 1.0);
        assert_eq!(f.value(2.5), -1.0);
        assert_eq!(f.value(3.0), -1.0);
    }

    #[test]
    fn smooth_forcing_midpoint_and_tails() {
        assert_eq!(smooth_forcing_value(-1.0f64, 2.5, 0.1, 2.5), 0.0);
        // (t - t_change)/a = 3 -> -tanh(3)
        let v = smooth_forcing_value(-1.0f64, 2.5, 0.1, 2.8);
        assert!((v - (-0.9950547536867305)).abs() < 1e-12, "{v}");
        // Far tails approach the step endpoints.
        assert!((smooth_forcing_value(-1.0f64, 2.5, 0.1, -10.0) - 1.0).abs() < 1e-10);
        assert!((smooth_forcing_value(-1.0f64, 2.5, 0.1, 20.0) + 1.0).abs() < 1e-10);
    }

    #[test]
    fn smooth_forcing_degenerates_for_f1_one() {
        for t in [-5.0, 0.0, 2.5, 7.0] {
            assert_eq!(smooth_forcing_value(1.0f64, 2.5, 0.05, t), 1.0);
        }
    }

    #[test]
    fn param_validation() {
        assert!(OscillatorParams::new(0.0, 0.2, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, -0.1, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, 0.2, 0.0).is_err());
    }
}
