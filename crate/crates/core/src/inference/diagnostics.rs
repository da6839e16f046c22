//! Split-chain potential scale reduction (R-hat).

use crate::error::{Error, Result};
use crate::{real, Real};

/// Split-chain R-hat over per-chain draws of one parameter.
///
/// Each chain is halved, the between- and within-sequence variances are
/// compared, and `√(((n−1)/n·W + B/n) / W)` is returned. Values near 1
/// indicate mixing; `> 1.05` is the usual failure threshold. Chains of
/// unequal length are trimmed from the back to the shortest.
pub fn r_hat<R: Real>(chains: &[Vec<R>]) -> Result<R> {
    if chains.len() < 2 {
        return Err(Error::Invalid("r-hat needs at least two chains".into()));
    }
    let shortest = chains.iter().map(|c| c.len()).min().unwrap_or(0);
    if shortest < 4 {
        return Err(Error::Invalid("r-hat needs at least four draws per chain".into()));
    }
    let half = shortest / 2;
    let mut sequences: Vec<&[R]> = Vec::with_capacity(chains.len() * 2);
    for chain in chains {
        sequences.push(&chain[..half]);
        sequences.push(&chain[shortest - half..shortest]);
    }

    let n = real::<R>(half as f64);
    let m = real::<R>(sequences.len() as f64);
    let means: Vec<R> = sequences.iter().map(|s| mean(s)).collect();
    let variances: Vec<R> = sequences
        .iter()
        .zip(&means)
        .map(|(s, &mu)| {
            let ssq: R = s.iter().map(|&x| (x - mu) * (x - mu)).sum();
            ssq / (n - R::one())
        })
        .collect();

    let w = mean(&variances);
    if w <= R::zero() {
        return Err(Error::DegenerateChains);
    }
    let grand = mean(&means);
    let b_over_n: R = means.iter().map(|&mu| (mu - grand) * (mu - grand)).sum::<R>()
        / (m - R::one());
    let var_plus = (n - R::one()) / n * w + b_over_n;
    Ok((var_plus / w).sqrt())
}

fn mean<R: Real>(xs: &[R]) -> R {
    let n = real::<R>(xs.len() as f64);
    xs.iter().copied().sum::<R>() / n
}
