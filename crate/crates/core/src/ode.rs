//! The forward problem: parameterized ODE systems, solver trajectories with
//! dense output, and sampling of solutions at observation times.

use crate::error::{Error, Result};
use crate::{as_f64, real, Real};

/// Ordered vector of model parameters θ.
///
/// The length must match the owning model's declared parameter count; model
/// constructors enforce this when they read from the vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector<R: Real>(Vec<R>);

impl<R: Real> ParamVector<R> {
    pub fn new(values: Vec<R>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("parameter vector has non-finite entries".into()));
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[R] {
        &self.0
    }

    /// Copy of this vector with entry `index` replaced, for surface scans.
    pub fn with_value(&self, index: usize, value: R) -> Result<Self> {
        if index >= self.0.len() {
            return Err(Error::Invalid(format!(
                "parameter index {index} out of bounds for vector of length {}",
                self.0.len()
            )));
        }
        if !value.is_finite() {
            return Err(Error::Invalid("replacement parameter is non-finite".into()));
        }
        let mut values = self.0.clone();
        values[index] = value;
        Ok(Self(values))
    }
}

impl<R: Real> std::ops::Index<usize> for ParamVector<R> {
    type Output = R;
    fn index(&self, index: usize) -> &R {
        &self.0[index]
    }
}

/// Right-hand side signature: `rhs(t, x, θ, dx_out)`.
///
/// θ is passed explicitly on every call so that parameter scans can vary it
/// without rebuilding the system. Evaluators must be reentrant.
pub type RhsFn<R> = dyn Fn(R, &[R], &ParamVector<R>, &mut [R]) + Send + Sync;

/// An initial value problem `dx/dt = h(t, x, θ)`, `x(t0) = x0`.
pub struct OdeSystem<R: Real> {
    dim: usize,
    t0: R,
    x0: Vec<R>,
    rhs: Box<RhsFn<R>>,
}

impl<R: Real> OdeSystem<R> {
    pub fn new(
        dim: usize,
        t0: R,
        x0: Vec<R>,
        rhs: Box<RhsFn<R>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("state dimension must be positive".into()));
        }
        if x0.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: x0.len() });
        }
        if !t0.is_finite() || x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("initial condition must be finite".into()));
        }
        Ok(Self { dim, t0, x0, rhs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t0(&self) -> R {
        self.t0
    }

    pub fn x0(&self) -> &[R] {
        &self.x0
    }

    #[inline]
    pub(crate) fn rhs_into(&self, t: R, x: &[R], theta: &ParamVector<R>, out: &mut [R]) {
        (self.rhs)(t, x, theta, out);
    }

    /// Evaluates `h(t, x, θ)`. Pure and deterministic.
    ///
    /// Non-finite output is not an error here; solvers detect and report it,
    /// since adaptive solvers may probe extreme states transiently.
    pub fn eval_rhs(&self, t: R, x: &[R], theta: &ParamVector<R>) -> Result<Vec<R>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let mut out = vec![R::zero(); self.dim];
        self.rhs_into(t, x, theta, &mut out);
        Ok(out)
    }
}

impl<R: Real> std::fmt::Debug for OdeSystem<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OdeSystem")
            .field("dim", &self.dim)
            .field("t0", &self.t0)
            .field("x0", &self.x0)
            .finish_non_exhaustive()
    }
}

/// Interpolating polynomial for one accepted solver step.
///
/// `coeffs[j]` is the state-space coefficient vector of θ^(j+1), already
/// scaled by the step length, so `x(θ) = x_left + Σ_j coeffs[j] θ^(j+1)`
/// with θ = (t − t_left)/h ∈ [0, 1].
#[derive(Debug, Clone)]
pub struct StepPoly<R: Real> {
    pub(crate) coeffs: Vec<Vec<R>>,
}

impl<R: Real> StepPoly<R> {
    pub(crate) fn eval_into(&self, x_left: &[R], theta: R, out: &mut [R]) {
        out.copy_from_slice(x_left);
        let mut power = theta;
        for coeff in &self.coeffs {
            for (o, c) in out.iter_mut().zip(coeff) {
                *o = *o + *c * power;
            }
            power = power * theta;
        }
    }
}

/// Dense-output evaluator attached to a trajectory.
#[derive(Debug, Clone)]
pub enum DenseOutput<R: Real> {
    /// Linear interpolation between grid states (fixed-step solvers).
    PiecewiseLinear,
    /// One interpolating polynomial per accepted step (adaptive solvers).
    PerStepPoly(Vec<StepPoly<R>>),
}

/// Numerical solution on a solver grid with dense output and step accounting.
#[derive(Debug, Clone)]
pub struct Trajectory<R: Real> {
    times: Vec<R>,
    states: Vec<Vec<R>>,
    dense: DenseOutput<R>,
    n_steps: u64,
    n_rejected: u64,
}

impl<R: Real> Trajectory<R> {
    pub(crate) fn new(
        times: Vec<R>,
        states: Vec<Vec<R>>,
        dense: DenseOutput<R>,
        n_rejected: u64,
    ) -> Self {
        debug_assert_eq!(times.len(), states.len());
        debug_assert!(times.windows(2).all(|w| w[0] < w[1]));
        if let DenseOutput::PerStepPoly(polys) = &dense {
            debug_assert_eq!(polys.len() + 1, times.len());
        }
        let n_steps = (times.len() - 1) as u64;
        Self { times, states, dense, n_steps, n_rejected }
    }

    pub fn times(&self) -> &[R] {
        &self.times
    }

    pub fn states(&self) -> &[Vec<R>] {
        &self.states
    }

    pub fn t0(&self) -> R {
        self.times[0]
    }

    pub fn t_end(&self) -> R {
        *self.times.last().expect("trajectory has at least one grid point")
    }

    /// Accepted steps (grid length − 1).
    pub fn n_steps(&self) -> u64 {
        self.n_steps
    }

    /// Rejected step attempts; 0 for fixed-step solvers.
    pub fn n_rejected(&self) -> u64 {
        self.n_rejected
    }

    /// Evaluates the dense output at `t`. Exact at solver grid points.
    pub fn sample(&self, t: R) -> Result<Vec<R>> {
        if !(t >= self.t0() && t <= self.t_end()) {
            return Err(Error::OutOfRange {
                t: as_f64(t),
                lo: as_f64(self.t0()),
                hi: as_f64(self.t_end()),
            });
        }
        // First segment whose right endpoint is >= t.
        let idx = self.times.partition_point(|&tau| tau < t);
        if self.times[idx] == t {
            return Ok(self.states[idx].clone());
        }
        let seg = idx - 1;
        let t_left = self.times[seg];
        let h = self.times[seg + 1] - t_left;
        let theta = (t - t_left) / h;
        let mut out = vec![R::zero(); self.states[seg].len()];
        match &self.dense {
            DenseOutput::PiecewiseLinear => {
                let one = real::<R>(1.0);
                for ((o, &a), &b) in out.iter_mut().zip(&self.states[seg]).zip(&self.states[seg + 1]) {
                    *o = (one - theta) * a + theta * b;
                }
            }
            DenseOutput::PerStepPoly(polys) => {
                polys[seg].eval_into(&self.states[seg], theta, &mut out);
            }
        }
        Ok(out)
    }
}

/// Samples a trajectory's dense output at each query time.
pub fn sample_trajectory<R: Real>(traj: &Trajectory<R>, times: &[R]) -> Result<Vec<Vec<R>>> {
    times.iter().map(|&t| traj.sample(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay_system() -> OdeSystem<f64> {
        OdeSystem::new(
            1,
            0.0,
            vec![1.0],
            Box::new(|_t, x, _theta, out| out[0] = -x[0]),
        )
        .unwrap()
    }

    #[test]
    fn eval_rhs_linear_decay() {
        let sys = decay_system();
        let theta = ParamVector::new(vec![]).unwrap();
        assert_eq!(sys.eval_rhs(0.0, &[1.0], &theta).unwrap(), vec![-1.0]);
    }

    #[test]
    fn eval_rhs_is_pure() {
        let sys = decay_system();
        let theta = ParamVector::new(vec![]).unwrap();
        let a = sys.eval_rhs(0.3, &[2.5], &theta).unwrap();
        let b = sys.eval_rhs(0.3, &[2.5], &theta).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn eval_rhs_dimension_mismatch() {
        let sys = decay_system();
        let theta = ParamVector::new(vec![]).unwrap();
        assert!(matches!(
            sys.eval_rhs(0.0, &[1.0, 2.0], &theta),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn sample_exact_at_grid_points() {
        let traj = Trajectory::<f64>::new(
            vec![0.0, 0.5, 1.0],
            vec![vec![1.0], vec![2.0], vec![4.0]],
            DenseOutput::PiecewiseLinear,
            0,
        );
        assert_eq!(traj.sample(0.5).unwrap(), vec![2.0]);
        assert_eq!(traj.sample(0.0).unwrap(), vec![1.0]);
        assert_eq!(traj.sample(1.0).unwrap(), vec![4.0]);
    }

    #[test]
    fn sample_linear_midpoint() {
        let traj = Trajectory::<f64>::new(
            vec![0.0, 1.0],
            vec![vec![0.0], vec![2.0]],
            DenseOutput::PiecewiseLinear,
            0,
        );
        assert!((traj.sample(0.25).unwrap()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sample_out_of_range() {
        let traj = Trajectory::<f64>::new(
            vec![0.0, 1.0],
            vec![vec![0.0], vec![2.0]],
            DenseOutput::PiecewiseLinear,
            0,
        );
        assert!(matches!(traj.sample(1.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(traj.sample(-0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn with_value_substitutes_single_entry() {
        let theta = ParamVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        let replaced = theta.with_value(1, 9.0).unwrap();
        assert_eq!(replaced.as_slice(), &[1.0, 9.0, 3.0]);
        assert_eq!(theta.as_slice(), &[1.0, 2.0, 3.0]);
        assert!(theta.with_value(3, 0.0).is_err());
    }
}
