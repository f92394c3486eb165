//! Bootstrap resampling for figure-of-merit uncertainties.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Mean and spread of a bootstrapped estimator.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BootstrapEstimate {
    pub mean: f64,
    pub std: f64,
    pub n_resamples: usize,
    pub seed: u64,
}

/// Resample-with-replacement distribution of `estimator` over `samples`.
///
/// Each resample draws its own generator from (seed, resample index), so the
/// result is deterministic under a fixed seed and independent of the rayon
/// scheduling order. Fails when the estimator errors on more than 5% of
/// resamples.
pub fn bootstrap(
    samples: &[f64],
    estimator: impl Fn(&[f64]) -> Result<f64> + Sync,
    n_resamples: usize,
    seed: u64,
) -> Result<BootstrapEstimate> {
    if n_resamples < 100 {
        return Err(Error::InvalidParameter(format!(
            "need >= 100 resamples, got {n_resamples}"
        )));
    }
    if samples.is_empty() {
        return Err(Error::InvalidParameter("empty sample set".into()));
    }
    let n = samples.len();
    let estimates: Vec<Option<f64>> = (0..n_resamples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E3779B97F4A7C15));
            let resample: Vec<f64> =
                (0..n).map(|_| samples[rng.gen_range(0..n)]).collect();
            estimator(&resample).ok()
        })
        .collect();

    let ok: Vec<f64> = estimates.iter().filter_map(|e| *e).collect();
    let failures = n_resamples - ok.len();
    if failures as f64 > 0.05 * n_resamples as f64 {
        return Err(Error::FitFailure(format!(
            "estimator failed on {failures}/{n_resamples} resamples"
        )));
    }
    let mean = ok.iter().sum::<f64>() / ok.len() as f64;
    let var = if ok.len() > 1 {
        ok.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (ok.len() - 1) as f64
    } else {
        0.0
    };
    Ok(BootstrapEstimate { mean, std: var.sqrt(), n_resamples, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_estimator(xs: &[f64]) -> Result<f64> {
        Ok(xs.iter().sum::<f64>() / xs.len() as f64)
    }

    #[test]
    fn constant_data_has_zero_std() {
        let data = vec![0.7; 200];
        let est = bootstrap(&data, mean_estimator, 200, 1).unwrap();
        assert_eq!(est.std, 0.0);
        assert!((est.mean - 0.7).abs() < 1e-12);
    }

    #[test]
    fn bernoulli_mean_std_matches_binomial() {
        // Bernoulli(0.5), n = 1000: std of the mean ~ sqrt(0.25/1000) = 0.0158.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let data: Vec<f64> = (0..1000).map(|_| if rng.gen::<f64>() < 0.5 { 1.0 } else { 0.0 }).collect();
        let est = bootstrap(&data, mean_estimator, 600, 3).unwrap();
        let expect = 0.0158;
        assert!(
            (est.std - expect).abs() / expect < 0.20,
            "std = {:.4}, expected ~{expect}",
            est.std
        );
    }

    #[test]
    fn deterministic_under_seed() {
        let data: Vec<f64> = (0..300).map(|k| (k % 7) as f64).collect();
        let a = bootstrap(&data, mean_estimator, 250, 5).unwrap();
        let b = bootstrap(&data, mean_estimator, 250, 5).unwrap();
        assert_eq!(a, b);
        let c = bootstrap(&data, mean_estimator, 250, 6).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn std_scales_inverse_sqrt_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let big: Vec<f64> = (0..4000).map(|_| rng.gen::<f64>()).collect();
        let small = &big[..1000];
        let e_big = bootstrap(&big, mean_estimator, 800, 21).unwrap();
        let e_small = bootstrap(small, mean_estimator, 800, 22).unwrap();
        let ratio = e_small.std / e_big.std;
        assert!((ratio - 2.0).abs() / 2.0 < 0.15, "ratio = {ratio:.3}");
    }

    #[test]
    fn estimator_failures_propagate() {
        let data = vec![1.0; 50];
        let res = bootstrap(
            &data,
            |_| Err(Error::FitFailure("always fails".into())),
            150,
            0,
        );
        assert!(res.is_err());
    }

    #[test]
    fn resample_count_floor() {
        let data = vec![1.0; 50];
        assert!(bootstrap(&data, mean_estimator, 50, 0).is_err());
    }
}
