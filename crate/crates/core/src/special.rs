//! Small special-function helpers needed by the likelihoods and priors.

use crate::{real, Real};

/// `ln( Γ(2.5) / (Γ(2) √(4π)) )`, the ν=4 Student-t normalisation constant.
pub const LN_STUDENT_T4_NORM: f64 = -0.9808292530117262;

/// Lanczos coefficients (g = 7, n = 9).
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Natural log of the gamma function for positive arguments.
pub fn ln_gamma<R: Real>(z: R) -> R {
    let half = real::<R>(0.5);
    let pi = real::<R>(std::f64::consts::PI);
    if z < half {
        // Reflection: Γ(z)Γ(1−z) = π / sin(πz).
        return pi.ln() - (pi * z).sin().ln() - ln_gamma(R::one() - z);
    }
    let z = z - R::one();
    let mut acc = real::<R>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + real::<R>(c) / (z + R::from_usize(i).expect("index fits scalar"));
    }
    let t = z + real::<R>(7.5);
    real::<R>(0.5 * std::f64::consts::TAU.ln()) + (z + half) * t.ln() - t + acc.ln()
}

/// Natural log of the modified Bessel function I0, used by the von Mises
/// prior density. The power series is exact to rounding until I0 itself
/// nears f64 overflow; the asymptotic form covers the remainder.
pub fn ln_i0<R: Real>(x: R) -> R {
    let x = x.abs();
    if x < real(700.0) {
        let q = x * x / real(4.0);
        let mut term = R::one();
        let mut sum = R::one();
        let mut k = R::one();
        loop {
            term = term * q / (k * k);
            sum = sum + term;
            if term < sum * real(1e-17) {
                break;
            }
            k = k + R::one();
        }
        sum.ln()
    } else {
        let inv = R::one() / (real::<R>(8.0) * x);
        let series =
            R::one() + inv + real::<R>(4.5) * inv * inv + real::<R>(37.5) * inv * inv * inv;
        x - (real::<R>(std::f64::consts::TAU) * x).sqrt().ln() + series.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0f64)).abs() < 1e-13);
        assert!((ln_gamma(2.0f64)).abs() < 1e-13);
        assert!((ln_gamma(5.0f64) - 24.0f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5f64) - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-12);
        // Γ(2.5) = 1.3293403881791372
        assert!((ln_gamma(2.5f64) - 1.3293403881791372f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn student_t4_norm_constant_matches_ln_gamma() {
        let expect = ln_gamma(2.5f64) - ln_gamma(2.0f64) - 0.5 * (4.0 * std::f64::consts::PI).ln();
        assert!((LN_STUDENT_T4_NORM - expect).abs() < 1e-13, "{expect}");
    }

    #[test]
    fn ln_i0_small_and_large() {
        // I0(0) = 1; I0(0.01) ≈ 1.000025000156...
        assert_eq!(ln_i0(0.0f64), 0.0);
        assert!((ln_i0(0.01f64) - (1.0000250001562503f64).ln()).abs() < 1e-14);
        // I0(1) = 1.2660658777520082
        assert!((ln_i0(1.0f64) - 1.2660658777520082f64.ln()).abs() < 1e-12);
        // Continuity at the series/asymptotic switch.
        let below = ln_i0(699.0f64);
        let above = ln_i0(701.0f64);
        assert!((above - below - 2.0).abs() < 1e-2); // ln I0 grows ~linearly here
        // I0(20) = 4.355828255955353e7
        assert!((ln_i0(20.0f64) - 17.589610428244274).abs() < 1e-12);
    }
}
