//! Adaptive-covariance Metropolis MCMC.
//!
//! Gaussian random-walk proposals whose covariance is learned from the chain
//! history: a global scalar is log-adapted toward a 0.23 acceptance rate
//! from the first iteration, and from `adaptation_start` on the proposal
//! covariance tracks a decaying-weight running estimate of the sample
//! covariance (with a small regularisation ridge). Chains are independent
//! and deterministic given the seed; chain i draws from a generator seeded
//! with `seed + i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inference::prior::Prior;
use crate::ode::ParamVector;
use crate::{real, Real};

/// Default target acceptance rate for the scalar adaptation; the optimal
/// rate is higher for low-dimensional targets (≈0.44 in 1-D).
const TARGET_ACCEPTANCE: f64 = 0.23;
/// Decay exponent of the scalar adaptation weights γ_t = t^(−1/2).
const ADAPT_DECAY: f64 = 0.5;
/// Floor on the scalar learning rate during the adaptation window. The
/// global scale keeps tracking the acceptance rate at this constant
/// Robbins-Monro rate, which lets the proposal shrink quickly while chains
/// descend toward the mode.
const SCALAR_RATE_FLOOR: f64 = 0.2;
/// Regularisation ridge added to the proposal covariance.
const RIDGE: f64 = 1e-10;
/// Initialisation attempts when drawing starting points from the prior.
const MAX_INIT_TRIES: usize = 100;

#[derive(Debug, Clone, Copy)]
pub struct McmcConfig {
    pub n_chains: usize,
    pub n_iters: usize,
    /// Iterations discarded by the diagnostics; defaults to n_iters/3.
    pub burn_in: usize,
    pub seed: u64,
    /// Iteration at which covariance adaptation begins.
    pub adaptation_start: usize,
    /// Acceptance rate the global proposal scale is steered toward.
    pub target_acceptance: f64,
}

impl McmcConfig {
    pub fn new(n_chains: usize, n_iters: usize, seed: u64) -> Self {
        Self {
            n_chains,
            n_iters,
            burn_in: n_iters / 3,
            seed,
            adaptation_start: 100,
            target_acceptance: TARGET_ACCEPTANCE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_chains == 0 || self.n_iters == 0 {
            return Err(Error::Invalid("need at least one chain and one iteration".into()));
        }
        if self.burn_in >= self.n_iters {
            return Err(Error::Invalid("burn-in must be smaller than the iteration count".into()));
        }
        if self.adaptation_start == 0 {
            return Err(Error::Invalid("adaptation start must be positive".into()));
        }
        if !(self.target_acceptance > 0.0 && self.target_acceptance < 1.0) {
            return Err(Error::Invalid("target acceptance must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Starting points: drawn from the prior (re-drawn until the posterior is
/// finite) or supplied explicitly, one per chain.
#[derive(Debug, Clone)]
pub enum ChainInit<R: Real> {
    FromPrior,
    Explicit(Vec<Vec<R>>),
}

/// One chain's history.
#[derive(Debug, Clone)]
pub struct Chain<R: Real> {
    /// One parameter vector per iteration.
    pub samples: Vec<Vec<R>>,
    /// Log posterior per iteration.
    pub log_posts: Vec<R>,
    /// Accepted proposals.
    pub accepted: u64,
    /// Global proposal-scale multiplier per iteration.
    pub scale_trace: Vec<R>,
}

impl<R: Real> Chain<R> {
    pub fn accept_rate(&self) -> R {
        real::<R>(self.accepted as f64 / self.samples.len() as f64)
    }
}

/// A set of chains plus the settings needed to interpret them.
#[derive(Debug, Clone)]
pub struct ChainSet<R: Real> {
    pub chains: Vec<Chain<R>>,
    pub n_params: usize,
    pub burn_in: usize,
}

impl<R: Real> ChainSet<R> {
    /// Post-burn-in draws of one parameter in one chain.
    pub fn param_series(&self, chain: usize, param: usize) -> Vec<R> {
        self.chains[chain].samples[self.burn_in..]
            .iter()
            .map(|s| s[param])
            .collect()
    }

    /// Post-burn-in draws of one parameter pooled over chains.
    pub fn pooled(&self, param: usize) -> Vec<R> {
        let mut out = Vec::new();
        for c in 0..self.chains.len() {
            out.extend(self.param_series(c, param));
        }
        out
    }

    /// Split-chain potential scale reduction for one parameter.
    pub fn r_hat(&self, param: usize) -> Result<R> {
        let series: Vec<Vec<R>> =
            (0..self.chains.len()).map(|c| self.param_series(c, param)).collect();
        crate::inference::diagnostics::r_hat(&series)
    }
}

/// `min(1, exp(log_post_prop − log_post_old))`; a −∞ proposal has zero
/// acceptance probability, and two −∞ inputs are rejected as undefined.
pub fn metropolis_accept_prob<R: Real>(log_post_prop: R, log_post_old: R) -> Result<R> {
    if log_post_prop.is_nan() || log_post_old.is_nan() {
        return Err(Error::Invalid("acceptance ratio needs non-NaN log posteriors".into()));
    }
    if log_post_prop == R::neg_infinity() && log_post_old == R::neg_infinity() {
        return Err(Error::Invalid("acceptance ratio undefined for two -inf posteriors".into()));
    }
    if log_post_prop == R::neg_infinity() {
        return Ok(R::zero());
    }
    let diff = log_post_prop - log_post_old;
    if diff >= R::zero() {
        Ok(R::one())
    } else {
        Ok(diff.exp())
    }
}

/// Lower-triangular Cholesky factor of a symmetric matrix, escalating the
/// diagonal ridge until the factorisation succeeds.
fn cholesky_with_ridge<R: Real>(matrix: &[Vec<R>]) -> Vec<Vec<R>> {
    let m = matrix.len();
    let mut ridge = real::<R>(RIDGE);
    'attempt: loop {
        let mut l = vec![vec![R::zero(); m]; m];
        for i in 0..m {
            for j in 0..=i {
                let mut sum = matrix[i][j];
                if i == j {
                    sum = sum + ridge;
                }
                for k in 0..j {
                    sum = sum - l[i][k] * l[j][k];
                }
                if i == j {
                    if sum <= R::zero() {
                        ridge = ridge * real(100.0);
                        continue 'attempt;
                    }
                    l[i][j] = sum.sqrt();
                } else {
                    l[i][j] = sum / l[j][j];
                }
            }
        }
        return l;
    }
}

/// Coordinate scale on which the random walk proposes one parameter.
///
/// `Log` removes the funnel geometry of positive scale-like parameters
/// (noise scales, rates): proposals act on ln(x) with the usual Jacobian
/// correction, while samples and posteriors stay in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProposalScale {
    Linear,
    Log,
}

struct ChainRunner<'a, R: Real> {
    log_likelihood: &'a (dyn Fn(&ParamVector<R>) -> R + Sync),
    priors: &'a [Prior<R>],
    scales: &'a [ProposalScale],
}

impl<R: Real> ChainRunner<'_, R> {
    fn log_prior(&self, theta: &[R]) -> R {
        let mut total = R::zero();
        for (prior, &v) in self.priors.iter().zip(theta) {
            let ld = prior.log_density(v);
            if ld == R::neg_infinity() {
                return R::neg_infinity();
            }
            total = total + ld;
        }
        total
    }

    /// Posterior in natural units.
    fn log_posterior(&self, theta: &[R]) -> R {
        let lp = self.log_prior(theta);
        if lp == R::neg_infinity() {
            return R::neg_infinity();
        }
        let theta_vec = ParamVector::new(theta.to_vec()).expect("finite chain state");
        let ll = (self.log_likelihood)(&theta_vec);
        if ll.is_nan() {
            R::neg_infinity()
        } else {
            lp + ll
        }
    }

    fn to_natural(&self, internal: &[R], out: &mut [R]) -> bool {
        for ((o, &y), &s) in out.iter_mut().zip(internal).zip(self.scales) {
            *o = match s {
                ProposalScale::Linear => y,
                ProposalScale::Log => y.exp(),
            };
            if !o.is_finite() {
                return false;
            }
        }
        true
    }

    fn to_internal(&self, natural: &[R]) -> Option<Vec<R>> {
        natural
            .iter()
            .zip(self.scales)
            .map(|(&x, &s)| match s {
                ProposalScale::Linear => Some(x),
                ProposalScale::Log => (x > R::zero()).then(|| x.ln()),
            })
            .collect()
    }

    /// log|dx/dy| for the internal coordinates: Σ y_i over log-scaled axes.
    fn log_jacobian(&self, internal: &[R]) -> R {
        internal
            .iter()
            .zip(self.scales)
            .filter(|(_, &s)| s == ProposalScale::Log)
            .map(|(&y, _)| y)
            .sum()
    }

    fn run_chain(&self, cfg: &McmcConfig, init: Option<&[R]>, chain_index: u64) -> Result<Chain<R>> {
        let m = self.priors.len();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(chain_index));

        // Chain state lives in internal (possibly log) coordinates; the
        // tracked posterior is the natural-units one, with the Jacobian
        // applied only inside the acceptance ratio.
        let (mut state, mut post) = match init {
            Some(start) => {
                let post = self.log_posterior(start);
                let internal = self.to_internal(start);
                match (post.is_finite(), internal) {
                    (true, Some(y)) => (y, post),
                    _ => return Err(Error::InitFailed { tries: 1 }),
                }
            }
            None => {
                let mut found = None;
                for _ in 0..MAX_INIT_TRIES {
                    let draw: Vec<R> = self.priors.iter().map(|p| p.sample(&mut rng)).collect();
                    let post = self.log_posterior(&draw);
                    if !post.is_finite() {
                        continue;
                    }
                    if let Some(y) = self.to_internal(&draw) {
                        found = Some((y, post));
                        break;
                    }
                }
                found.ok_or(Error::InitFailed { tries: MAX_INIT_TRIES })?
            }
        };

        // Proposal state: running mean/covariance and the global log scale.
        let mut mu = state.clone();
        let mut sigma = vec![vec![R::zero(); m]; m];
        for (i, p) in self.priors.iter().enumerate() {
            let s = match self.scales[i] {
                ProposalScale::Linear => p.proposal_scale(),
                ProposalScale::Log => real(0.5),
            };
            sigma[i][i] = s * s;
        }
        let base_scale = real::<R>(2.38 * 2.38) / real(m as f64);
        let mut log_lambda = R::zero();

        let mut samples = Vec::with_capacity(cfg.n_iters);
        let mut log_posts = Vec::with_capacity(cfg.n_iters);
        let mut scale_trace = Vec::with_capacity(cfg.n_iters);
        let mut accepted: u64 = 0;
        let mut proposal = vec![R::zero(); m];
        let mut natural = vec![R::zero(); m];
        let mut z = vec![R::zero(); m];

        for iter in 1..=cfg.n_iters {
            let lambda = base_scale * log_lambda.exp();
            let scaled: Vec<Vec<R>> = sigma
                .iter()
                .map(|row| row.iter().map(|&v| v * lambda).collect())
                .collect();
            let chol = cholesky_with_ridge(&scaled);

            for zi in z.iter_mut() {
                let draw: f64 = StandardNormal.sample(&mut rng);
                *zi = real(draw);
            }
            for i in 0..m {
                let mut step = R::zero();
                for j in 0..=i {
                    step = step + chol[i][j] * z[j];
                }
                proposal[i] = state[i] + step;
            }

            let post_prop = if self.to_natural(&proposal, &mut natural) {
                self.log_posterior(&natural)
            } else {
                R::neg_infinity()
            };
            let u: f64 = rng.gen();
            let ratio_prop = post_prop + self.log_jacobian(&proposal);
            let ratio_old = post + self.log_jacobian(&state);
            let alpha = metropolis_accept_prob(ratio_prop, ratio_old)?;
            let accept = real::<R>(u) < alpha;
            if accept {
                state.copy_from_slice(&proposal);
                post = post_prop;
                accepted += 1;
            }

            // The scalar rate is floored during burn-in so the proposal can
            // track the shrinking mode while chains descend; afterwards it
            // decays, letting the kernel settle.
            let raw_rate = (iter as f64).powf(-ADAPT_DECAY);
            let gamma_scale = if iter <= cfg.burn_in {
                real::<R>(raw_rate.max(SCALAR_RATE_FLOOR))
            } else {
                real::<R>(raw_rate)
            };
            let indicator = if accept { R::one() } else { R::zero() };
            log_lambda = log_lambda + gamma_scale * (indicator - real(cfg.target_acceptance));

            if iter >= cfg.adaptation_start {
                // Equal-weight running covariance over every post-start
                // sample, i.e. the plain sample covariance in recursive form.
                let gamma = real::<R>(1.0 / ((iter - cfg.adaptation_start + 1) as f64));
                for (mi, &si) in mu.iter_mut().zip(&state) {
                    *mi = (R::one() - gamma) * *mi + gamma * si;
                }
                for i in 0..m {
                    let di = state[i] - mu[i];
                    for j in 0..m {
                        let dj = state[j] - mu[j];
                        sigma[i][j] = (R::one() - gamma) * sigma[i][j] + gamma * di * dj;
                    }
                }
            }

            let ok = self.to_natural(&state, &mut natural);
            debug_assert!(ok, "accepted state must map back to natural units");
            samples.push(natural.clone());
            log_posts.push(post);
            scale_trace.push(log_lambda.exp());
        }

        Ok(Chain { samples, log_posts, accepted, scale_trace })
    }
}

/// Runs `cfg.n_chains` adaptive Metropolis chains against
/// `log_likelihood(θ) + Σ log prior(θ_i)`. Proposals outside the prior
/// support are rejected without evaluating the likelihood.
pub fn run_adaptive_metropolis<R: Real>(
    log_likelihood: &(dyn Fn(&ParamVector<R>) -> R + Sync),
    priors: &[Prior<R>],
    cfg: &McmcConfig,
    init: &ChainInit<R>,
) -> Result<ChainSet<R>> {
    let scales = vec![ProposalScale::Linear; priors.len()];
    run_adaptive_metropolis_scaled(log_likelihood, priors, &scales, cfg, init)
}

/// [`run_adaptive_metropolis`] with a per-parameter proposal scale; samples
/// and log posteriors are reported in natural units either way.
pub fn run_adaptive_metropolis_scaled<R: Real>(
    log_likelihood: &(dyn Fn(&ParamVector<R>) -> R + Sync),
    priors: &[Prior<R>],
    scales: &[ProposalScale],
    cfg: &McmcConfig,
    init: &ChainInit<R>,
) -> Result<ChainSet<R>> {
    cfg.validate()?;
    if priors.is_empty() {
        return Err(Error::Invalid("at least one prior is required".into()));
    }
    if scales.len() != priors.len() {
        return Err(Error::DimensionMismatch { expected: priors.len(), got: scales.len() });
    }
    if let ChainInit::Explicit(points) = init {
        if points.len() != cfg.n_chains {
            return Err(Error::DimensionMismatch { expected: cfg.n_chains, got: points.len() });
        }
        if points.iter().any(|p| p.len() != priors.len()) {
            return Err(Error::Invalid("initial points must match the prior dimension".into()));
        }
    }

    let runner = ChainRunner { log_likelihood, priors, scales };
    let chains: Result<Vec<Chain<R>>> = (0..cfg.n_chains)
        .into_par_iter()
        .map(|c| {
            let start = match init {
                ChainInit::FromPrior => None,
                ChainInit::Explicit(points) => Some(points[c].as_slice()),
            };
            runner.run_chain(cfg, start, c as u64)
        })
        .collect();

    Ok(ChainSet { chains: chains?, n_params: priors.len(), burn_in: cfg.burn_in })
}
