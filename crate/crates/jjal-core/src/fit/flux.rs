//! Flux modulation of a mode frequency.
//!
//! Threading flux through the SQUID loops raises the junction inductance
//! and pulls every mode down. With the stray lead inductance in series
//! only a fraction gamma_L = L_J / (L_J + L_s) of the cell inductance
//! participates in the tuning, which flattens the arches:
//!
//! ```text
//! f(I) = f_max / sqrt(1 - gamma_L + gamma_L / |cos(pi l_b (I + I_off))|)
//! ```
//!
//! with the coil current I mapped to flux quanta by the lever arm l_b and
//! shifted by the offset I_off of the zero-flux point. At I = -I_off the
//! model returns exactly f_max regardless of gamma_L, which pins the top
//! of the arch independently of the participation ratio.

use serde::Serialize;

use super::{least_squares_fit, spectral_peaks, FitError, FitOptions, FitResult, FitWarning};

/// Parameters of the flux modulation curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FluxFitParams {
    /// Mode frequency at zero flux (Hz).
    pub f_max_hz: f64,
    /// Junction participation ratio L_J / (L_J + L_s), in (0, 1].
    pub gamma_l: f64,
    /// Flux quanta threaded per ampere of coil current (1/A).
    pub lever_arm_per_a: f64,
    /// Coil current at which the loop flux vanishes, negated (A).
    pub current_offset_a: f64,
}

/// Modulation curve at one bias current (Hz).
pub fn flux_modulation_model(p: &FluxFitParams, bias_a: f64) -> f64 {
    let c = (std::f64::consts::PI * p.lever_arm_per_a * (bias_a + p.current_offset_a))
        .cos()
        .abs()
        .max(1e-12);
    p.f_max_hz / (1.0 - p.gamma_l + p.gamma_l / c).sqrt()
}

/// Fits the modulation curve to a measured flux map.
///
/// The lever arm is seeded from the dominant spectral component of the
/// map, the offset from the location of the frequency maximum, and the
/// participation ratio from a small multi-start set, keeping the best
/// finisher. Maps spanning less than half a modulation period get a
/// [`FitWarning::WeakFluxModulation`] attached.
pub fn fit_flux_map(
    bias_a: &[f64],
    freq_hz: &[f64],
) -> Result<(FluxFitParams, FitResult), FitError> {
    if bias_a.len() != freq_hz.len() {
        return Err(FitError::LengthMismatch { left: bias_a.len(), right: freq_hz.len() });
    }
    if bias_a.is_empty() {
        return Err(FitError::EmptyInput);
    }

    let mut order: Vec<usize> = (0..bias_a.len()).collect();
    order.sort_by(|&i, &j| bias_a[i].total_cmp(&bias_a[j]));
    let bias: Vec<f64> = order.iter().map(|&i| bias_a[i]).collect();
    let freq: Vec<f64> = order.iter().map(|&i| freq_hz[i]).collect();
    let span = bias[bias.len() - 1] - bias[0];
    if !(span > 0.0) {
        return Err(FitError::InsufficientData { points: 1, parameters: 4 });
    }

    let (i_top, &f_top) = freq
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let offset_seed = -bias[i_top];
    let lever_seed = spectral_peaks(&bias, &freq, 1)
        .first()
        .map(|p| p.freq)
        .filter(|lb| *lb > 0.0)
        .unwrap_or(0.5 / span);

    let model = |p: &[f64]| -> Vec<f64> {
        let params = FluxFitParams {
            f_max_hz: p[0],
            gamma_l: p[1],
            lever_arm_per_a: p[2],
            current_offset_a: p[3],
        };
        bias.iter()
            .zip(&freq)
            .map(|(&b, &f)| flux_modulation_model(&params, b) - f)
            .collect()
    };
    let names = ["f_max_hz", "gamma_l", "lever_arm_per_a", "current_offset_a"];
    let period = 1.0 / lever_seed;
    let opts = FitOptions {
        bounds: Some(vec![
            (0.5 * f_top, 1.5 * f_top),
            (1e-6, 1.0),
            (0.2 * lever_seed, 5.0 * lever_seed),
            (offset_seed - period, offset_seed + period),
        ]),
        scales: Some(vec![f_top, 1.0, lever_seed, period]),
        ..Default::default()
    };

    // gamma_L trades off against the lever arm on shallow maps; start from
    // several depths and keep the best finisher
    let mut best: Option<FitResult> = None;
    for gamma0 in [0.5, 0.7, 0.8, 0.9, 0.97] {
        let Ok(fit) = least_squares_fit(model, &[f_top, gamma0, lever_seed, offset_seed], &names, &opts)
        else {
            continue;
        };
        let better = match &best {
            None => true,
            Some(b) => {
                (fit.converged && !b.converged)
                    || (fit.converged == b.converged && fit.residual_rms < b.residual_rms)
            }
        };
        if better {
            best = Some(fit);
        }
    }
    let mut fit = best.ok_or(FitError::SingularJacobian)?;

    let params = FluxFitParams {
        f_max_hz: fit.parameters[0],
        gamma_l: fit.parameters[1],
        lever_arm_per_a: fit.parameters[2],
        current_offset_a: fit.parameters[3],
    };
    let cycles_spanned = params.lever_arm_per_a * span;
    if cycles_spanned < 0.5 {
        fit.warnings.push(FitWarning::WeakFluxModulation { cycles_spanned });
    }
    Ok((params, fit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_of_arch_is_f_max_for_any_participation() {
        for gamma in [0.3, 0.81, 1.0] {
            let p = FluxFitParams {
                f_max_hz: 6.5e9,
                gamma_l: gamma,
                lever_arm_per_a: 400.0,
                current_offset_a: -1.3e-3,
            };
            let f = flux_modulation_model(&p, 1.3e-3);
            assert!((f - p.f_max_hz).abs() < 1e-9 * p.f_max_hz);
        }
    }

    #[test]
    fn noiseless_map_roundtrips() {
        let truth = FluxFitParams {
            f_max_hz: 6.5e9,
            gamma_l: 0.81,
            lever_arm_per_a: 320.0,
            current_offset_a: 0.4e-3,
        };
        let bias: Vec<f64> = (0..161).map(|i| -4e-3 + i as f64 * 0.05e-3).collect();
        let freq: Vec<f64> = bias.iter().map(|&b| flux_modulation_model(&truth, b)).collect();
        let (fitted, fit) = fit_flux_map(&bias, &freq).unwrap();
        assert!(fit.converged);
        assert!((fitted.f_max_hz - truth.f_max_hz).abs() / truth.f_max_hz < 1e-6);
        assert!((fitted.gamma_l - truth.gamma_l).abs() < 1e-4);
        assert!((fitted.lever_arm_per_a - truth.lever_arm_per_a).abs() / truth.lever_arm_per_a < 1e-4);
    }

    #[test]
    fn shallow_map_raises_weak_modulation() {
        let truth = FluxFitParams {
            f_max_hz: 6.5e9,
            gamma_l: 0.85,
            lever_arm_per_a: 320.0,
            current_offset_a: 0.0,
        };
        // a twentieth of a period around the top of the arch
        let bias: Vec<f64> = (0..33).map(|i| -8e-5 + i as f64 * 5e-6).collect();
        let freq: Vec<f64> = bias.iter().map(|&b| flux_modulation_model(&truth, b)).collect();
        let (_, fit) = fit_flux_map(&bias, &freq).unwrap();
        assert!(fit
            .warnings
            .iter()
            .any(|w| matches!(w, FitWarning::WeakFluxModulation { .. })));
    }
}
