//! Log-likelihoods for ODE time-series data, the solver-error bound on the
//! log-likelihood, and the distribution of the log-likelihood error.
//!
//! For IID Gaussian noise the log-likelihood of residuals r_i with standard
//! deviation σ is `−(N/2)·log(2π) − (N/2)·log(σ²) − Σ r_i²/(2σ²)`, where N
//! counts scalar residuals (observation times × observation components).
//!
//! When the ODE solution is replaced by a numerical approximation with
//! per-time state error `|e(t_i)|` and the observation operator is
//! K-Lipschitz, the log-likelihood error obeys
//!
//! `|L − L'| ≤ Σ_i ( K²|e(t_i)|²/(2σ²) + K|e(t_i)|·|y_i − g(x(t_i))|/σ² )`,
//!
//! and when the data are drawn from the model at the same parameters,
//! `L − L' ~ N( Σa_i²/(2σ²), √(Σa_i²)/σ )` with a_i the observation-space
//! errors — the numerical approximation underestimates the true
//! log-likelihood on average.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::special::LN_STUDENT_T4_NORM;
use crate::{real, Real};

/// IID additive Gaussian noise with standard deviation σ.
#[derive(Debug, Clone, Copy)]
pub struct GaussianIidNoise<R: Real> {
    pub sigma: R,
}

impl<R: Real> GaussianIidNoise<R> {
    pub fn new(sigma: R) -> Result<Self> {
        if !(sigma.is_finite() && sigma > R::zero()) {
            return Err(Error::Invalid("sigma must be finite and positive".into()));
        }
        Ok(Self { sigma })
    }
}

/// Student-t noise with ν degrees of freedom and multiplicative scale
/// `σ·√(prediction)`, as used for daily case counts.
#[derive(Debug, Clone, Copy)]
pub struct StudentTScaledNoise<R: Real> {
    pub sigma: R,
    pub nu: R,
}

/// Floor applied to predictions before the square root in the Student-t
/// scale; early-epidemic predictions can touch zero.
pub const STUDENT_T_SCALE_FLOOR: f64 = 1e-8;

impl<R: Real> StudentTScaledNoise<R> {
    /// Four degrees of freedom, the value used throughout the case-count model.
    pub fn new(sigma: R) -> Result<Self> {
        Self::with_nu(sigma, real(4.0))
    }

    pub fn with_nu(sigma: R, nu: R) -> Result<Self> {
        if !(sigma.is_finite() && sigma > R::zero()) {
            return Err(Error::Invalid("sigma must be finite and positive".into()));
        }
        if !(nu.is_finite() && nu > R::zero()) {
            return Err(Error::Invalid("nu must be finite and positive".into()));
        }
        Ok(Self { sigma, nu })
    }
}

/// Observation operator g mapping a state vector to observation space.
#[derive(Clone)]
pub enum ObservationOperator<R: Real> {
    /// Observe the full state.
    Identity,
    /// Observe a single state component.
    Component(usize),
    /// Arbitrary map; a Lipschitz constant must be declared to use the
    /// log-likelihood error bound.
    Custom {
        f: Arc<dyn Fn(&[R]) -> Vec<R> + Send + Sync>,
        lipschitz: R,
    },
}

impl<R: Real> ObservationOperator<R> {
    pub fn apply(&self, state: &[R]) -> Vec<R> {
        match self {
            ObservationOperator::Identity => state.to_vec(),
            ObservationOperator::Component(i) => vec![state[*i]],
            ObservationOperator::Custom { f, .. } => f(state),
        }
    }

    pub fn obs_dim(&self, state_dim: usize) -> usize {
        match self {
            ObservationOperator::Identity => state_dim,
            ObservationOperator::Component(_) => 1,
            ObservationOperator::Custom { f, .. } => f(&vec![R::zero(); state_dim]).len(),
        }
    }

    /// Lipschitz constant K: 1 for identity and component extraction.
    pub fn lipschitz(&self) -> R {
        match self {
            ObservationOperator::Identity | ObservationOperator::Component(_) => R::one(),
            ObservationOperator::Custom { lipschitz, .. } => *lipschitz,
        }
    }
}

impl<R: Real> std::fmt::Debug for ObservationOperator<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ObservationOperator::Identity => write!(f, "Identity"),
            ObservationOperator::Component(i) => write!(f, "Component({i})"),
            ObservationOperator::Custom { lipschitz, .. } => write!(f, "Custom(K={lipschitz})"),
        }
    }
}

/// Observed time series: strictly increasing times with one observation row
/// (of `obs_dim` components) per time.
#[derive(Debug, Clone)]
pub struct Dataset<R: Real> {
    times: Vec<R>,
    observations: Vec<Vec<R>>,
    obs_dim: usize,
}

impl<R: Real> Dataset<R> {
    pub fn new(times: Vec<R>, observations: Vec<Vec<R>>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::Invalid("dataset must contain at least one time".into()));
        }
        if observations.len() != times.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), got: observations.len() });
        }
        if !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid("observation times must be strictly increasing".into()));
        }
        let obs_dim = observations[0].len();
        if obs_dim == 0 || observations.iter().any(|o| o.len() != obs_dim) {
            return Err(Error::Invalid("observation rows must share a positive width".into()));
        }
        if times.iter().any(|t| !t.is_finite())
            || observations.iter().flatten().any(|y| !y.is_finite())
        {
            return Err(Error::Invalid("dataset entries must be finite".into()));
        }
        Ok(Self { times, observations, obs_dim })
    }

    pub fn times(&self) -> &[R] {
        &self.times
    }

    pub fn observations(&self) -> &[Vec<R>] {
        &self.observations
    }

    pub fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Draws a dataset from clean predicted observations plus IID Gaussian noise.
pub fn synth_gaussian_dataset<R: Real>(
    times: &[R],
    clean: &[Vec<R>],
    sigma: R,
    seed: u64,
) -> Result<Dataset<R>> {
    let noise = GaussianIidNoise::new(sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let observations = clean
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| {
                    let eps: f64 = StandardNormal.sample(&mut rng);
                    v + noise.sigma * real(eps)
                })
                .collect()
        })
        .collect();
    Dataset::new(times.to_vec(), observations)
}

/// IID Gaussian log-likelihood of `predicted` against the dataset.
///
/// Residuals are summed over every scalar component; N in the normalisation
/// counts scalar residuals.
pub fn log_likelihood_gaussian<R: Real>(
    data: &Dataset<R>,
    predicted: &[Vec<R>],
    noise: &GaussianIidNoise<R>,
) -> Result<R> {
    if !(noise.sigma > R::zero()) {
        return Err(Error::Invalid("sigma must be positive".into()));
    }
    if predicted.len() != data.len() {
        return Err(Error::DimensionMismatch { expected: data.len(), got: predicted.len() });
    }
    let mut ssq = R::zero();
    let mut n_scalar = 0usize;
    for (obs, pred) in data.observations().iter().zip(predicted) {
        if pred.len() != obs.len() {
            return Err(Error::DimensionMismatch { expected: obs.len(), got: pred.len() });
        }
        for (&y, &p) in obs.iter().zip(pred) {
            let r = y - p;
            ssq = ssq + r * r;
            n_scalar += 1;
        }
    }
    let n = R::from_usize(n_scalar).expect("count fits scalar");
    let two = real::<R>(2.0);
    let ln_2pi = real::<R>(std::f64::consts::TAU.ln());
    Ok(-(n / two) * ln_2pi - n * noise.sigma.ln() - ssq / (two * noise.sigma * noise.sigma))
}

/// Student-t log-likelihood for observed counts with location `C_t` and
/// scale `σ·√(max(C_t, floor))`.
pub fn log_likelihood_student_t<R: Real>(
    data: &Dataset<R>,
    predicted_cases: &[R],
    noise: &StudentTScaledNoise<R>,
) -> Result<R> {
    if data.obs_dim() != 1 {
        return Err(Error::Invalid("student-t likelihood expects scalar observations".into()));
    }
    if predicted_cases.len() != data.len() {
        return Err(Error::DimensionMismatch { expected: data.len(), got: predicted_cases.len() });
    }
    if let Some(bad) = predicted_cases.iter().position(|p| !p.is_finite()) {
        return Err(Error::Invalid(format!("non-finite prediction at index {bad}")));
    }
    let floor = real::<R>(STUDENT_T_SCALE_FLOOR);
    let nu = noise.nu;
    let half = real::<R>(0.5);
    let one = R::one();
    // Normalisation ln Γ((ν+1)/2) − ln Γ(ν/2) − ln √(νπ); precomputed for ν=4.
    let ln_norm = if noise.nu == real(4.0) {
        real::<R>(LN_STUDENT_T4_NORM)
    } else {
        crate::special::ln_gamma((nu + one) * half)
            - crate::special::ln_gamma(nu * half)
            - half * (nu * real(std::f64::consts::PI)).ln()
    };
    let mut total = R::zero();
    for (obs, &c) in data.observations().iter().zip(predicted_cases) {
        let scale = noise.sigma * c.max(floor).sqrt();
        let u = (obs[0] - c) / scale;
        total = total + ln_norm - scale.ln() - half * (nu + one) * (one + u * u / nu).ln();
    }
    Ok(total)
}

/// Bound on `|L − L'|` from per-time state-error magnitudes, residual
/// magnitudes, the observation Lipschitz constant K, and σ.
pub fn ll_error_bound<R: Real>(errors_e: &[R], residuals: &[R], k: R, sigma: R) -> Result<R> {
    if errors_e.len() != residuals.len() {
        return Err(Error::DimensionMismatch { expected: errors_e.len(), got: residuals.len() });
    }
    if !(k > R::zero()) || !(sigma > R::zero()) {
        return Err(Error::Invalid("K and sigma must be positive".into()));
    }
    if errors_e.iter().chain(residuals).any(|v| *v < R::zero() || !v.is_finite()) {
        return Err(Error::Invalid("error and residual magnitudes must be nonnegative".into()));
    }
    let two = real::<R>(2.0);
    let s2 = sigma * sigma;
    let mut total = R::zero();
    for (&e, &r) in errors_e.iter().zip(residuals) {
        total = total + (k * k * e * e) / (two * s2) + (k * e * r) / s2;
    }
    Ok(total)
}

/// Mean and standard deviation of `L − L'` when the data are generated at
/// the evaluation parameters: `N(Σa²/(2σ²), √(Σa²)/σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LLErrorShift<R: Real> {
    /// `Σa²/(2σ²)`; nonnegative, so the approximation underestimates L on average.
    pub mean_shift: R,
    /// `√(Σa²)/σ`.
    pub std: R,
}

/// Distribution of the log-likelihood error from observation-space errors
/// `a_i = g_i − ĝ_i`.
pub fn ll_error_distribution<R: Real>(a: &[R], sigma: R) -> Result<LLErrorShift<R>> {
    if !(sigma > R::zero()) {
        return Err(Error::Invalid("sigma must be positive".into()));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("observation-space errors must be finite".into()));
    }
    let ssq: R = a.iter().map(|&x| x * x).sum();
    Ok(LLErrorShift {
        mean_shift: ssq / (real::<R>(2.0) * sigma * sigma),
        std: ssq.sqrt() / sigma,
    })
}

/// Combined report: the deterministic bound together with the error
/// distribution parameters.
#[derive(Debug, Clone, Copy)]
pub struct LLErrorReport<R: Real> {
    pub bound: R,
    pub mean_shift: R,
    pub std: R,
}

/// Assembles an [`LLErrorReport`] from state-space error magnitudes,
/// residual magnitudes, observation-space errors, K, and σ.
pub fn ll_error_report<R: Real>(
    errors_e: &[R],
    residuals: &[R],
    a: &[R],
    k: R,
    sigma: R,
) -> Result<LLErrorReport<R>> {
    let bound = ll_error_bound(errors_e, residuals, k, sigma)?;
    let shift = ll_error_distribution(a, sigma)?;
    Ok(LLErrorReport { bound, mean_shift: shift.mean_shift, std: shift.std })
}
