//! Per-parameter prior distributions: log-densities and sampling.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta as BetaDist, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::special::{ln_gamma, ln_i0};
use crate::{as_f64, real, Real};

/// A univariate prior. Construct through the checked constructors; the
/// log-density assumes a well-formed distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prior<R: Real> {
    Uniform { lo: R, hi: R },
    Normal { mean: R, sd: R },
    /// Log-normal parameterised by the mean and sd of log(x).
    LogNormal { log_mean: R, sd: R },
    /// Half-Cauchy on [0, ∞).
    HalfCauchy { scale: R },
    Beta { alpha: R, beta: R },
    /// Von Mises on [mean − π, mean + π).
    VonMises { mean: R, kappa: R },
}

impl<R: Real> Prior<R> {
    pub fn uniform(lo: R, hi: R) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Invalid("uniform prior needs lo < hi".into()));
        }
        Ok(Prior::Uniform { lo, hi })
    }

    pub fn normal(mean: R, sd: R) -> Result<Self> {
        if !(mean.is_finite() && sd.is_finite() && sd > R::zero()) {
            return Err(Error::Invalid("normal prior needs positive sd".into()));
        }
        Ok(Prior::Normal { mean, sd })
    }

    pub fn log_normal(log_mean: R, sd: R) -> Result<Self> {
        if !(log_mean.is_finite() && sd.is_finite() && sd > R::zero()) {
            return Err(Error::Invalid("log-normal prior needs positive sd".into()));
        }
        Ok(Prior::LogNormal { log_mean, sd })
    }

    pub fn half_cauchy(scale: R) -> Result<Self> {
        if !(scale.is_finite() && scale > R::zero()) {
            return Err(Error::Invalid("half-Cauchy prior needs positive scale".into()));
        }
        Ok(Prior::HalfCauchy { scale })
    }

    pub fn beta(alpha: R, beta: R) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha > R::zero() && beta > R::zero()) {
            return Err(Error::Invalid("beta prior needs positive shape parameters".into()));
        }
        Ok(Prior::Beta { alpha, beta })
    }

    pub fn von_mises(mean: R, kappa: R) -> Result<Self> {
        if !(mean.is_finite() && kappa.is_finite() && kappa >= R::zero()) {
            return Err(Error::Invalid("von Mises prior needs nonnegative concentration".into()));
        }
        Ok(Prior::VonMises { mean, kappa })
    }

    /// Log density at `value`; −∞ outside the support.
    pub fn log_density(&self, value: R) -> R {
        let neg_inf = R::neg_infinity();
        if !value.is_finite() {
            return neg_inf;
        }
        let half = real::<R>(0.5);
        let ln_2pi = real::<R>(std::f64::consts::TAU.ln());
        match *self {
            Prior::Uniform { lo, hi } => {
                if value < lo || value > hi {
                    neg_inf
                } else {
                    -(hi - lo).ln()
                }
            }
            Prior::Normal { mean, sd } => {
                let z = (value - mean) / sd;
                -half * z * z - sd.ln() - half * ln_2pi
            }
            Prior::LogNormal { log_mean, sd } => {
                if value <= R::zero() {
                    return neg_inf;
                }
                let z = (value.ln() - log_mean) / sd;
                -half * z * z - sd.ln() - half * ln_2pi - value.ln()
            }
            Prior::HalfCauchy { scale } => {
                if value < R::zero() {
                    return neg_inf;
                }
                let z = value / scale;
                real::<R>((2.0f64 / std::f64::consts::PI).ln()) - scale.ln() - (R::one() + z * z).ln()
            }
            Prior::Beta { alpha, beta } => {
                if value <= R::zero() || value >= R::one() {
                    return neg_inf;
                }
                let ln_b = ln_gamma(alpha) + ln_gamma(beta) - ln_gamma(alpha + beta);
                (alpha - R::one()) * value.ln() + (beta - R::one()) * (R::one() - value).ln() - ln_b
            }
            Prior::VonMises { mean, kappa } => {
                let pi = real::<R>(std::f64::consts::PI);
                if value < mean - pi || value >= mean + pi {
                    return neg_inf;
                }
                kappa * (value - mean).cos() - ln_2pi - ln_i0(kappa)
            }
        }
    }

    /// Draws one value. Randomness is consumed in `f64` precision so the
    /// stream layout does not depend on the scalar type.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> R {
        match *self {
            Prior::Uniform { lo, hi } => {
                let u: f64 = rng.gen();
                lo + (hi - lo) * real(u)
            }
            Prior::Normal { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * real(z)
            }
            Prior::LogNormal { log_mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                (log_mean + sd * real(z)).exp()
            }
            Prior::HalfCauchy { scale } => {
                let u: f64 = rng.gen();
                scale * real((std::f64::consts::FRAC_PI_2 * u).tan())
            }
            Prior::Beta { alpha, beta } => {
                let dist = BetaDist::new(as_f64(alpha), as_f64(beta))
                    .expect("construction-validated shapes");
                // Shapes below one concentrate mass at the edges and the f64
                // draw can round onto them; nudge back inside the support.
                let draw = dist.sample(rng).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
                real(draw)
            }
            Prior::VonMises { mean, kappa } => mean + real(sample_von_mises(as_f64(kappa), rng)),
        }
    }

    /// Rough scale used to seed the proposal covariance before adaptation.
    pub fn proposal_scale(&self) -> R {
        match *self {
            Prior::Uniform { lo, hi } => (hi - lo) / real(50.0),
            Prior::Normal { sd, .. } => sd / real(2.0),
            Prior::LogNormal { log_mean, sd } => log_mean.exp() * sd / real(2.0),
            Prior::HalfCauchy { scale } => scale / real(2.0),
            Prior::Beta { alpha, beta } => {
                let ab = alpha + beta;
                (alpha * beta / (ab * ab * (ab + R::one()))).sqrt() / real(2.0)
            }
            Prior::VonMises { kappa, .. } => {
                if kappa < real(0.1) {
                    real(std::f64::consts::FRAC_PI_4)
                } else {
                    (R::one() / kappa.sqrt()).min(real(std::f64::consts::FRAC_PI_4))
                }
            }
        }
    }
}

/// Free-function form of the log density.
pub fn prior_log_density<R: Real>(prior: &Prior<R>, value: R) -> R {
    prior.log_density(value)
}

/// Best-Fisher rejection sampler for the von Mises distribution centred at 0.
fn sample_von_mises(kappa: f64, rng: &mut ChaCha8Rng) -> f64 {
    if kappa < 1e-8 {
        return std::f64::consts::PI * (2.0 * rng.gen::<f64>() - 1.0);
    }
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let u1: f64 = rng.gen();
        let u2: f64 = rng.gen();
        let z = (std::f64::consts::PI * u1).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let u3: f64 = rng.gen();
            let angle = f.clamp(-1.0, 1.0).acos();
            return if u3 > 0.5 { angle } else { -angle };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn uniform_log_density() {
        let p = Prior::uniform(0.0f64, 1.0).unwrap();
        assert_eq!(p.log_density(0.5), 0.0);
        assert_eq!(p.log_density(2.0), f64::NEG_INFINITY);
        assert_eq!(p.log_density(-0.1), f64::NEG_INFINITY);
    }

    #[test]
    fn log_normal_at_median() {
        // Density of N(log 0.4, 0.5) at log 0.4, minus the log|Jacobian|.
        let p = Prior::log_normal(0.4f64.ln(), 0.5).unwrap();
        let expect = -(0.5 * (std::f64::consts::TAU).sqrt()).ln() - 0.4f64.ln();
        assert!((p.log_density(0.4) - expect).abs() < 1e-12);
        assert_eq!(p.log_density(0.0), f64::NEG_INFINITY);
        assert_eq!(p.log_density(-1.0), f64::NEG_INFINITY);
    }

    #[test]
    fn half_cauchy_density_integrates_to_one() {
        let p = Prior::half_cauchy(2.0f64).unwrap();
        // Trapezoid quadrature over a long truncation plus the analytic tail
        // 1 − (2/π) atan(x/s).
        let n = 200_000;
        let hi = 2000.0;
        let h = hi / n as f64;
        let mut total = 0.0;
        for i in 0..n {
            let a = (i as f64) * h;
            let b = a + h;
            total += 0.5 * (p.log_density(a).exp() + p.log_density(b).exp()) * h;
        }
        let tail = 1.0 - 2.0 / std::f64::consts::PI * (hi / 2.0).atan();
        assert!((total + tail - 1.0).abs() < 1e-6, "{}", total + tail);
        assert_eq!(p.log_density(-0.5), f64::NEG_INFINITY);
    }

    #[test]
    fn beta_density_known_value() {
        // Beta(2, 3) at 0.4: 12 * 0.4 * 0.36 = 1.728
        let p = Prior::beta(2.0f64, 3.0).unwrap();
        assert!((p.log_density(0.4) - 1.728f64.ln()).abs() < 1e-12);
        assert_eq!(p.log_density(0.0), f64::NEG_INFINITY);
        assert_eq!(p.log_density(1.0), f64::NEG_INFINITY);
    }

    #[test]
    fn von_mises_is_circularly_normalised() {
        let p = Prior::von_mises(0.0f64, 0.01).unwrap();
        let n = 100_000;
        let h = std::f64::consts::TAU / n as f64;
        let total: f64 = (0..n)
            .map(|i| {
                let x = -std::f64::consts::PI + (i as f64 + 0.5) * h;
                p.log_density(x).exp() * h
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-6, "{total}");
        assert_eq!(p.log_density(4.0), f64::NEG_INFINITY);
    }

    #[test]
    fn sampling_matches_density_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 40_000;

        let p = Prior::log_normal(0.4f64.ln(), 0.5).unwrap();
        let mean: f64 = (0..n).map(|_| p.sample(&mut rng)).sum::<f64>() / n as f64;
        let expect = 0.4 * (0.5f64 * 0.5 * 0.5).exp(); // e^{μ + s²/2}
        assert!((mean - expect).abs() < 0.01, "{mean} vs {expect}");

        let p = Prior::beta(0.7f64, 0.17).unwrap();
        let mean: f64 = (0..n).map(|_| p.sample(&mut rng)).sum::<f64>() / n as f64;
        let expect = 0.7 / (0.7 + 0.17);
        assert!((mean - expect).abs() < 0.01, "{mean} vs {expect}");

        let p = Prior::von_mises(0.3f64, 2.0).unwrap();
        let (mut s, mut c) = (0.0f64, 0.0f64);
        for _ in 0..n {
            let x = p.sample(&mut rng);
            s += (x - 0.3).sin();
            c += (x - 0.3).cos();
        }
        // Circular mean at the location parameter, resultant length I1/I0.
        assert!((s / n as f64).abs() < 0.02);
        assert!(c / n as f64 > 0.5);
    }

    #[test]
    fn samples_respect_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let priors: Vec<Prior<f64>> = vec![
            Prior::uniform(0.1, 1.5).unwrap(),
            Prior::half_cauchy(100.0).unwrap(),
            Prior::beta(0.7, 0.17).unwrap(),
            Prior::von_mises(0.0, 0.01).unwrap(),
        ];
        for p in &priors {
            for _ in 0..2000 {
                let x = p.sample(&mut rng);
                assert!(p.log_density(x) > f64::NEG_INFINITY, "{p:?} sampled {x} outside support");
            }
        }
    }
}
