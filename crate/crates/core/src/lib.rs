//! ODE forward solvers, likelihoods, MCMC inference, and likelihood-surface
//! diagnostics for parameter estimation in ODE models.
//!
//! The crate is organised around the forward/inverse problem split:
//!
//! * [`ode`] — the forward problem abstraction: systems, parameter vectors,
//!   trajectories with dense output, and observation-time sampling.
//! * [`euler`] — fixed-step Forward Euler integration.
//! * [`rk`] — embedded Runge-Kutta pairs RK5(4) and RK3(2) with adaptive
//!   step control and per-step interpolation.
//! * [`likelihood`] — Gaussian IID and scaled Student-t log-likelihoods,
//!   plus the solver-error bound and error-distribution formulas.
//! * [`models`] — the damped driven oscillator, the SIR changepoint model,
//!   and a five-store rainfall-runoff model.
//! * [`inference`] — priors, adaptive-covariance Metropolis MCMC, and the
//!   split-chain R-hat convergence diagnostic.
//! * [`surface`] — 1-D likelihood-surface scans and jaggedness diagnostics.
//!
//! All numerical code is generic over the scalar type through [`Real`];
//! concrete `f64` aliases for the main types are exported at the crate root.

pub mod error;
pub mod euler;
pub mod experiment;
pub mod inference;
pub mod likelihood;
pub mod models;
pub mod ode;
pub mod rk;
pub mod special;
pub mod surface;

pub use error::{Error, Result};

/// Scalar type for all numerical routines: `f32`, `f64`, or any other
/// IEEE-like float that implements the `num-traits` float interface.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + std::fmt::Debug
    + std::fmt::Display
    + std::iter::Sum
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: num_traits::Float
        + num_traits::FromPrimitive
        + std::fmt::Debug
        + std::fmt::Display
        + std::iter::Sum
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant into the working scalar type.
#[inline]
pub fn real<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("f64 constant must be representable in the scalar type")
}

/// Lossy view of a scalar as `f64`, used for error payloads and reports.
#[inline]
pub fn as_f64<R: Real>(x: R) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub type ParamVector64 = ode::ParamVector<f64>;
pub type OdeSystem64 = ode::OdeSystem<f64>;
pub type Trajectory64 = ode::Trajectory<f64>;
pub type Dataset64 = likelihood::Dataset<f64>;
pub type Tolerances64 = rk::Tolerances<f64>;
pub type ChainSet64 = inference::ChainSet<f64>;
pub type LikelihoodSurface64 = surface::LikelihoodSurface<f64>;
