//! Shared-width Gaussian mixtures for single-shot histograms.
//!
//! Readout blobs from one quadrature share their width (the noise is the
//! chain's, not the state's), so the mixture model is K means, K weights
//! and a single sigma, fitted by plain expectation-maximization. Means
//! are initialized at evenly spaced sample quantiles, which is enough for
//! the well-separated blobs this is meant for; components are returned
//! sorted by mean so labels are deterministic.

use serde::Serialize;

use super::CqedError;

const MAX_COMPONENTS: usize = 4;
const MAX_ITERATIONS: usize = 500;

/// A fitted one-dimensional mixture with shared width.
#[derive(Debug, Clone, Serialize)]
pub struct GaussianMixture {
    /// Component weights, summing to one, ordered by mean.
    pub weights: Vec<f64>,
    /// Component means, ascending.
    pub means: Vec<f64>,
    /// Shared standard deviation.
    pub sigma: f64,
    /// Final log-likelihood of the data.
    pub log_likelihood: f64,
    /// EM iterations performed.
    pub iterations: usize,
    /// Whether the log-likelihood plateaued before the iteration cap.
    pub converged: bool,
}

/// Fits a `components`-part shared-width Gaussian mixture by EM.
///
/// The component count is the caller's choice (at most four); nothing is
/// estimated about it. Needs at least four samples per component and a
/// non-degenerate spread.
pub fn fit_gaussian_mixture(
    samples: &[f64],
    components: usize,
) -> Result<GaussianMixture, CqedError> {
    if components == 0 || components > MAX_COMPONENTS {
        return Err(CqedError::TooManyComponents { requested: components, max: MAX_COMPONENTS });
    }
    let n = samples.len();
    if n < 4 * components {
        return Err(CqedError::InsufficientData { points: n, needed: 4 * components });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let spread = sorted[n - 1] - sorted[0];
    if !(spread > 0.0) {
        return Err(CqedError::DegenerateSamples);
    }

    // quantile initialization
    let mut means: Vec<f64> = (0..components)
        .map(|k| sorted[((2 * k + 1) * (n - 1)) / (2 * components)])
        .collect();
    let mut weights = vec![1.0 / components as f64; components];
    let mean_all = samples.iter().sum::<f64>() / n as f64;
    let var_all = samples.iter().map(|x| (x - mean_all) * (x - mean_all)).sum::<f64>() / n as f64;
    let sigma_floor = 1e-9 * spread;
    let mut sigma = (var_all.sqrt() / components as f64).max(sigma_floor);

    let mut resp = vec![0.0f64; n * components];
    let mut log_likelihood = f64::NEG_INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        // E step with log-sum-exp per sample
        let mut ll = 0.0;
        let log_norm = -(2.0 * std::f64::consts::PI).ln() / 2.0 - sigma.ln();
        for (i, &x) in samples.iter().enumerate() {
            let row = &mut resp[i * components..(i + 1) * components];
            let mut top = f64::NEG_INFINITY;
            for k in 0..components {
                let z = (x - means[k]) / sigma;
                row[k] = weights[k].max(1e-300).ln() + log_norm - 0.5 * z * z;
                top = top.max(row[k]);
            }
            let sum_exp: f64 = row.iter().map(|&l| (l - top).exp()).sum();
            ll += top + sum_exp.ln();
            for l in row.iter_mut() {
                *l = (*l - top).exp() / sum_exp;
            }
        }
        // M step: weights, means, shared variance
        let mut var_acc = 0.0;
        for k in 0..components {
            let nk: f64 = (0..n).map(|i| resp[i * components + k]).sum();
            weights[k] = nk / n as f64;
            if nk > 0.0 {
                means[k] =
                    (0..n).map(|i| resp[i * components + k] * samples[i]).sum::<f64>() / nk;
            }
            var_acc += (0..n)
                .map(|i| {
                    let d = samples[i] - means[k];
                    resp[i * components + k] * d * d
                })
                .sum::<f64>();
        }
        sigma = (var_acc / n as f64).sqrt().max(sigma_floor);

        if (ll - log_likelihood).abs() < 1e-12 * ll.abs().max(1.0) {
            log_likelihood = ll;
            converged = true;
            break;
        }
        log_likelihood = ll;
    }

    // canonical component order
    let mut order: Vec<usize> = (0..components).collect();
    order.sort_by(|&a, &b| means[a].total_cmp(&means[b]));
    Ok(GaussianMixture {
        weights: order.iter().map(|&k| weights[k]).collect(),
        means: order.iter().map(|&k| means[k]).collect(),
        sigma,
        log_likelihood,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_blob_samples() -> Vec<f64> {
        // deterministic pseudo-Gaussian pair at 0 and 5, sigma 0.7
        let mut out = Vec::new();
        for i in 0..400 {
            let u = (i as f64 + 0.5) / 400.0;
            let g = crate::synth::probit(u) * 0.7;
            out.push(if i % 3 == 0 { 5.0 + g } else { g });
        }
        out
    }

    #[test]
    fn two_blobs_are_recovered() {
        let samples = two_blob_samples();
        let m = fit_gaussian_mixture(&samples, 2).unwrap();
        assert!(m.converged);
        assert!((m.means[0] - 0.0).abs() < 0.1);
        assert!((m.means[1] - 5.0).abs() < 0.1);
        assert!((m.sigma - 0.7).abs() < 0.1);
        assert!((m.weights[0] - 2.0 / 3.0).abs() < 0.05);
        assert!((m.weights[0] + m.weights[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn component_count_is_validated() {
        let samples = two_blob_samples();
        assert!(matches!(
            fit_gaussian_mixture(&samples, 5),
            Err(CqedError::TooManyComponents { .. })
        ));
        assert!(matches!(
            fit_gaussian_mixture(&samples[..6], 2),
            Err(CqedError::InsufficientData { .. })
        ));
        assert!(matches!(
            fit_gaussian_mixture(&[1.0; 32], 2),
            Err(CqedError::DegenerateSamples)
        ));
    }
}
