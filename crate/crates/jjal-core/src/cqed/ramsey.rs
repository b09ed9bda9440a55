//! Ramsey fringe fits.
//!
//! A detuned Ramsey record decays as a damped cosine,
//!
//! ```text
//! y(t) = a exp(-t / T2) cos(2 pi f t + phi) + c
//! ```
//!
//! and a qubit whose frequency hops between two values (a strongly
//! coupled two-level fluctuator, or a readout photon number that is
//! sometimes one) shows two tones under a shared envelope:
//!
//! ```text
//! y(t) = exp(-t / T2) [a1 cos(2 pi f1 t + p1) + a2 cos(2 pi f2 t + p2)] + c
//! ```
//!
//! Zero detuning is a legitimate fit (pure decay); what must be flagged
//! is an amplitude that the data cannot distinguish from zero, since T2
//! and phase mean nothing for an absent tone.

use serde::Serialize;

use crate::fit::{least_squares_fit, spectral_peaks, FitError, FitOptions, FitResult, FitWarning};

/// One fitted fringe component.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RamseyTone {
    /// Fringe amplitude, in the units of the record.
    pub amplitude: f64,
    /// Fringe (detuning) frequency (Hz); zero is allowed.
    pub freq_hz: f64,
    /// Phase at zero delay (rad).
    pub phase_rad: f64,
}

/// A fitted Ramsey record.
#[derive(Debug, Clone, Serialize)]
pub struct RamseyFit {
    /// Shared coherence time (s).
    pub t2_s: f64,
    /// Record offset, in the units of the record.
    pub offset: f64,
    /// Fringe components, sorted by frequency.
    pub tones: Vec<RamseyTone>,
}

impl RamseyFit {
    /// Evaluates the fitted model at one delay.
    pub fn eval(&self, delay_s: f64) -> f64 {
        let env = (-delay_s / self.t2_s).exp();
        let osc: f64 = self
            .tones
            .iter()
            .map(|t| {
                t.amplitude
                    * (2.0 * std::f64::consts::PI * t.freq_hz * delay_s + t.phase_rad).cos()
            })
            .sum();
        self.offset + env * osc
    }
}

fn validate(delay_s: &[f64], signal: &[f64], params: usize) -> Result<(), FitError> {
    if delay_s.len() != signal.len() {
        return Err(FitError::LengthMismatch { left: delay_s.len(), right: signal.len() });
    }
    if delay_s.len() < 2 * params {
        return Err(FitError::InsufficientData { points: delay_s.len(), parameters: params });
    }
    Ok(())
}

fn push_amplitude_warnings(fit: &mut FitResult, amp_indices: &[usize]) {
    for (component, &idx) in amp_indices.iter().enumerate() {
        let amp = fit.parameters[idx].abs();
        let se = fit.standard_errors[idx];
        // a degenerate covariance (zero-detuning records pin f and phi)
        // leaves no standard error; fall back to the per-point residual
        // scale, which upper-bounds any amplitude error
        let significant =
            if se.is_finite() { amp > 2.0 * se } else { amp > 2.0 * fit.residual_rms };
        if !significant {
            fit.warnings.push(FitWarning::AmplitudeUnresolved { component });
        }
    }
}

/// Fits a single damped cosine to a Ramsey record.
pub fn fit_ramsey(delay_s: &[f64], signal: &[f64]) -> Result<(RamseyFit, FitResult), FitError> {
    validate(delay_s, signal, 5)?;
    let n = delay_s.len();
    let span = delay_s[n - 1] - delay_s[0];
    let offset0 = signal.iter().sum::<f64>() / n as f64;
    let peak = spectral_peaks(delay_s, signal, 1).into_iter().next();
    let (f0, a0, p0) = match peak {
        Some(p) => (p.freq, p.amplitude, p.phase - 2.0 * std::f64::consts::PI * p.freq * delay_s[0]),
        None => (0.0, signal.iter().map(|y| (y - offset0).abs()).fold(0.0, f64::max), 0.0),
    };
    let nyquist = 0.5 * (n - 1) as f64 / span;

    let model = |p: &[f64]| -> Vec<f64> {
        let (a, t2, f, phi, c) = (p[0], p[1], p[2], p[3], p[4]);
        delay_s
            .iter()
            .zip(signal)
            .map(|(&t, &y)| {
                a * (-t / t2).exp() * (2.0 * std::f64::consts::PI * f * t + phi).cos() + c - y
            })
            .collect()
    };
    let names = ["amplitude", "t2_s", "freq_hz", "phase_rad", "offset"];
    let opts = FitOptions {
        bounds: Some(vec![
            (0.0, f64::INFINITY),
            (span / 100.0, 100.0 * span),
            (0.0, nyquist),
            (-2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI),
            (f64::NEG_INFINITY, f64::INFINITY),
        ]),
        scales: Some(vec![a0.max(1e-3), span, 1.0 / span, 1.0, a0.max(1e-3)]),
        ..Default::default()
    };
    // two starts: the spectral seed, and a pure-decay seed at f = 0 (a
    // fringe-free record is a legitimate range member and the spectral
    // seed cannot reach it without crossing a barrier in f)
    let a_dec = signal[0] - offset0;
    let decay_phase = if a_dec < 0.0 { std::f64::consts::PI } else { 0.0 };
    let spectral = least_squares_fit(&model, &[a0, span / 2.0, f0, p0, offset0], &names, &opts)?;
    let decay = least_squares_fit(
        &model,
        &[a_dec.abs(), span / 2.0, 0.0, decay_phase, offset0],
        &names,
        &opts,
    )?;
    // prefer a converged fit, then the lower residual
    let spectral_key = (!spectral.converged, spectral.residual_rms);
    let decay_key = (!decay.converged, decay.residual_rms);
    let mut fit = if decay_key < spectral_key { decay } else { spectral };
    push_amplitude_warnings(&mut fit, &[0]);

    let out = RamseyFit {
        t2_s: fit.parameters[1],
        offset: fit.parameters[4],
        tones: vec![RamseyTone {
            amplitude: fit.parameters[0],
            freq_hz: fit.parameters[2],
            phase_rad: fit.parameters[3],
        }],
    };
    Ok((out, fit))
}

/// Fits two tones under a shared decay envelope to a Ramsey record.
///
/// Tones are returned sorted by frequency; each amplitude is separately
/// checked against its standard error.
pub fn fit_ramsey_double(
    delay_s: &[f64],
    signal: &[f64],
) -> Result<(RamseyFit, FitResult), FitError> {
    validate(delay_s, signal, 8)?;
    let n = delay_s.len();
    let span = delay_s[n - 1] - delay_s[0];
    let offset0 = signal.iter().sum::<f64>() / n as f64;
    let peaks = spectral_peaks(delay_s, signal, 2);
    let seed_tone = |i: usize| -> (f64, f64, f64) {
        match peaks.get(i) {
            Some(p) => {
                (p.freq, p.amplitude, p.phase - 2.0 * std::f64::consts::PI * p.freq * delay_s[0])
            }
            None => ((i + 1) as f64 / span, 0.1, 0.0),
        }
    };
    let (f1, a1, p1) = seed_tone(0);
    let (f2, a2, p2) = seed_tone(1);
    let nyquist = 0.5 * (n - 1) as f64 / span;

    let model = |p: &[f64]| -> Vec<f64> {
        let (a1, f1, p1, a2, f2, p2, t2, c) =
            (p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7]);
        delay_s
            .iter()
            .zip(signal)
            .map(|(&t, &y)| {
                let env = (-t / t2).exp();
                env * (a1 * (2.0 * std::f64::consts::PI * f1 * t + p1).cos()
                    + a2 * (2.0 * std::f64::consts::PI * f2 * t + p2).cos())
                    + c
                    - y
            })
            .collect()
    };
    let names = [
        "amplitude_1",
        "freq_hz_1",
        "phase_rad_1",
        "amplitude_2",
        "freq_hz_2",
        "phase_rad_2",
        "t2_s",
        "offset",
    ];
    let two_pi = 2.0 * std::f64::consts::PI;
    let amp_scale = (a1.abs() + a2.abs()).max(1e-3);
    let opts = FitOptions {
        bounds: Some(vec![
            (0.0, f64::INFINITY),
            (0.0, nyquist),
            (-two_pi, two_pi),
            (0.0, f64::INFINITY),
            (0.0, nyquist),
            (-two_pi, two_pi),
            (span / 100.0, 100.0 * span),
            (f64::NEG_INFINITY, f64::INFINITY),
        ]),
        scales: Some(vec![
            amp_scale,
            1.0 / span,
            1.0,
            amp_scale,
            1.0 / span,
            1.0,
            span,
            amp_scale,
        ]),
        ..Default::default()
    };
    let seed = [a1, f1, p1, a2, f2, p2, span / 2.0, offset0];
    let mut fit = least_squares_fit(model, &seed, &names, &opts)?;

    // canonical tone order by frequency
    if fit.parameters[1] > fit.parameters[4] {
        for pair in [(0, 3), (1, 4), (2, 5)] {
            fit.parameters.swap(pair.0, pair.1);
            fit.standard_errors.swap(pair.0, pair.1);
        }
    }
    push_amplitude_warnings(&mut fit, &[0, 3]);

    let out = RamseyFit {
        t2_s: fit.parameters[6],
        offset: fit.parameters[7],
        tones: vec![
            RamseyTone {
                amplitude: fit.parameters[0],
                freq_hz: fit.parameters[1],
                phase_rad: fit.parameters[2],
            },
            RamseyTone {
                amplitude: fit.parameters[3],
                freq_hz: fit.parameters[4],
                phase_rad: fit.parameters[5],
            },
        ],
    };
    Ok((out, fit))
}
