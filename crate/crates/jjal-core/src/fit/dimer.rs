//! Reflection fit of a hybridized mode pair and the conversion between
//! dressed (measured) and bare (circuit) dimer parameters.
//!
//! Near an operating pair the reflection is the product of two unit-circle
//! factors, one per dressed mode, with a global phase from the cabling:
//!
//! ```text
//! S11(f) = exp(i phi0) G+(f) G-(f)
//! G(f) = -1 + [k (k + g) / 2 + i k (f - f0)] / [(f - f0)^2 + (k + g)^2 / 4]
//! ```
//!
//! where k is the external linewidth and g the internal loss of a mode.
//! With g = 0 each factor has unit magnitude at every frequency, so any
//! dip in |S11| measures internal loss directly. The factors are written
//! in the rotation where the phase rises through each resonance; conjugate
//! a falling-phase record before fitting.
//!
//! The dressed pair maps onto two bare resonators, only the first coupled
//! to the line, detuned by delta and coupled to each other at rate J:
//!
//! ```text
//! f_pm = mid +/- sqrt(delta^2 + 4 J^2) / 2
//! k_pm = (k +/- delta k / sqrt(delta^2 + 4 J^2)) / 2
//! ```
//!
//! Inverting gives the detuning (the dimerization asymmetry) from the
//! measured linewidth imbalance; the map is exact and involutive, which
//! the tests pin down.

use serde::Serialize;

use crate::scattering::ComplexTrace;
use crate::C64;

use super::{least_squares_fit, FitError, FitOptions, FitResult};

/// Dressed-basis parameters of one operating pair, as fitted.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DimerFitParams {
    /// Upper dressed mode frequency (Hz).
    pub f_plus_hz: f64,
    /// Lower dressed mode frequency (Hz).
    pub f_minus_hz: f64,
    /// External linewidth of the upper mode (Hz).
    pub kappa_plus_hz: f64,
    /// External linewidth of the lower mode (Hz).
    pub kappa_minus_hz: f64,
    /// Internal loss rate of the upper mode (Hz).
    pub gamma_plus_hz: f64,
    /// Internal loss rate of the lower mode (Hz).
    pub gamma_minus_hz: f64,
    /// Global phase offset from the line (rad).
    pub phase_offset_rad: f64,
}

/// Single-mode reflection factor.
pub fn reflection_factor(f_hz: f64, f0_hz: f64, kappa_hz: f64, gamma_hz: f64) -> C64 {
    let detune = f_hz - f0_hz;
    let half_total = 0.5 * (kappa_hz + gamma_hz);
    let den = detune * detune + half_total * half_total;
    let num = C64::new(kappa_hz * half_total, kappa_hz * detune);
    C64::new(-1.0, 0.0) + num / den
}

/// Two-mode reflection model at one frequency.
pub fn dimer_reflection_model(p: &DimerFitParams, f_hz: f64) -> C64 {
    let rot = C64::new(0.0, p.phase_offset_rad).exp();
    rot * reflection_factor(f_hz, p.f_plus_hz, p.kappa_plus_hz, p.gamma_plus_hz)
        * reflection_factor(f_hz, p.f_minus_hz, p.kappa_minus_hz, p.gamma_minus_hz)
}

fn params_from_slice(p: &[f64]) -> DimerFitParams {
    DimerFitParams {
        f_plus_hz: p[0],
        f_minus_hz: p[1],
        kappa_plus_hz: p[2],
        kappa_minus_hz: p[3],
        gamma_plus_hz: p[4],
        gamma_minus_hz: p[5],
        phase_offset_rad: p[6],
    }
}

/// Fits the two-mode reflection model to a complex trace.
///
/// Residuals are the stacked real and imaginary parts of model minus
/// data. Seeds come from the two strongest phase-slope peaks; the global
/// phase is seeded from the far-detuned endpoints where the model tends
/// to exp(i phi0). The returned parameters always satisfy
/// `f_plus_hz > f_minus_hz`.
pub fn fit_dimer_reflection(trace: &ComplexTrace) -> Result<(DimerFitParams, FitResult), FitError> {
    let n = trace.len();
    if n < 16 {
        return Err(FitError::InsufficientData { points: n, parameters: 7 });
    }
    let phase = crate::scattering::unwrap_phase(&trace.values);
    // phase rises through each resonance in this rotation, at 4/kappa per Hz
    let mut slope = vec![0.0f64; n];
    for i in 1..n - 1 {
        slope[i] = (phase[i + 1] - phase[i - 1]) / (trace.freq_hz[i + 1] - trace.freq_hz[i - 1]);
    }
    // boxcar the slope so a noisy sample cannot pose as a resonance top
    let w = 2usize;
    let slope: Vec<f64> = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(w);
            let hi = (i + w).min(n - 1);
            slope[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect();
    let span = trace.freq_hz[n - 1] - trace.freq_hz[0];
    let mut candidates: Vec<(usize, f64)> = (1..n - 1)
        .filter(|&i| slope[i] > slope[i - 1] && slope[i] >= slope[i + 1] && slope[i] > 0.0)
        .map(|i| (i, slope[i]))
        .collect();
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1));
    // the two seeds must sit on distinct resonances, not twice on the
    // strongest one, so suppress runners-up inside a twentieth of the span
    let mut peaks: Vec<(usize, f64)> = Vec::new();
    for (i, s) in candidates {
        let apart = peaks
            .iter()
            .all(|&(j, _)| (trace.freq_hz[i] - trace.freq_hz[j]).abs() > span / 20.0);
        if apart {
            peaks.push((i, s));
            if peaks.len() == 2 {
                break;
            }
        }
    }
    peaks.sort_by_key(|&(i, _)| i);

    let (seed_minus, seed_plus) = match peaks.as_slice() {
        [(i_lo, s_lo), (i_hi, s_hi)] => (
            (trace.freq_hz[*i_lo], 4.0 / s_lo),
            (trace.freq_hz[*i_hi], 4.0 / s_hi),
        ),
        [(i, s)] => {
            // single blended peak: split it by a linewidth
            let k = 4.0 / s;
            ((trace.freq_hz[*i] - k, k), (trace.freq_hz[*i] + k, k))
        }
        _ => {
            let mid = trace.freq_hz[n / 2];
            ((mid - span / 4.0, span / 10.0), (mid + span / 4.0, span / 10.0))
        }
    };
    let phi0_seed = {
        let edge = (trace.values[0] + trace.values[n - 1]) * 0.5;
        edge.im.atan2(edge.re)
    };

    let model = |p: &[f64]| -> Vec<f64> {
        let params = params_from_slice(p);
        let mut r = Vec::with_capacity(2 * n);
        for (f, v) in trace.freq_hz.iter().zip(&trace.values) {
            let m = dimer_reflection_model(&params, *f);
            r.push(m.re - v.re);
            r.push(m.im - v.im);
        }
        r
    };
    let names = [
        "f_plus_hz",
        "f_minus_hz",
        "kappa_plus_hz",
        "kappa_minus_hz",
        "gamma_plus_hz",
        "gamma_minus_hz",
        "phase_offset_rad",
    ];
    let kappa_scale = 0.5 * (seed_minus.1 + seed_plus.1);
    let (f_lo, f_hi) = (trace.freq_hz[0], trace.freq_hz[n - 1]);
    let opts = FitOptions {
        bounds: Some(vec![
            (f_lo, f_hi),
            (f_lo, f_hi),
            (0.0, 10.0 * span),
            (0.0, 10.0 * span),
            (0.0, 10.0 * span),
            (0.0, 10.0 * span),
            (-2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI),
        ]),
        scales: Some(vec![
            kappa_scale,
            kappa_scale,
            kappa_scale,
            kappa_scale,
            kappa_scale,
            kappa_scale,
            1.0,
        ]),
        ..Default::default()
    };
    let seed = [
        seed_plus.0,
        seed_minus.0,
        seed_plus.1,
        seed_minus.1,
        0.05 * seed_plus.1,
        0.05 * seed_minus.1,
        phi0_seed,
    ];
    let mut fit = least_squares_fit(model, &seed, &names, &opts)?;

    // canonical ordering: the plus mode is the upper one
    if fit.parameters[0] < fit.parameters[1] {
        for pair in [(0, 1), (2, 3), (4, 5)] {
            fit.parameters.swap(pair.0, pair.1);
            fit.standard_errors.swap(pair.0, pair.1);
        }
    }
    Ok((params_from_slice(&fit.parameters), fit))
}

/// Dressed pair as measured: two frequencies and two external linewidths.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DressedDimer {
    pub f_plus_hz: f64,
    pub f_minus_hz: f64,
    pub kappa_plus_hz: f64,
    pub kappa_minus_hz: f64,
}

impl From<&DimerFitParams> for DressedDimer {
    fn from(p: &DimerFitParams) -> Self {
        DressedDimer {
            f_plus_hz: p.f_plus_hz,
            f_minus_hz: p.f_minus_hz,
            kappa_plus_hz: p.kappa_plus_hz,
            kappa_minus_hz: p.kappa_minus_hz,
        }
    }
}

/// Bare circuit picture behind a dressed pair: a bright resonator holding
/// all the external coupling, a dark one, their detuning and coupling.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BareDimer {
    /// Frequency of the line-coupled resonator (Hz).
    pub f_bright_hz: f64,
    /// Frequency of the uncoupled resonator (Hz).
    pub f_dark_hz: f64,
    /// Mode coupling rate J (Hz).
    pub coupling_hz: f64,
    /// Total external linewidth, all on the bright resonator (Hz).
    pub kappa_hz: f64,
}

impl BareDimer {
    /// Detuning asymmetry sqrt(A) = |f_bright - f_dark| (Hz).
    pub fn asymmetry_hz(&self) -> f64 {
        (self.f_bright_hz - self.f_dark_hz).abs()
    }
}

/// Recovers the bare dimer from the measured dressed pair.
///
/// The linewidth imbalance fixes the bare detuning through
/// sqrt(A) = |k+ - k-| (f+ - f-) / (k+ + k-), and the splitting in excess
/// of A is the coupling, 2J = sqrt((f+ - f-)^2 - A). The dressed mode
/// with the larger linewidth lies on the bright resonator's side, which
/// fixes the sign of the detuning.
pub fn dimer_asymmetry(d: &DressedDimer) -> BareDimer {
    let split = d.f_plus_hz - d.f_minus_hz;
    let kappa = d.kappa_plus_hz + d.kappa_minus_hz;
    let imbalance = d.kappa_plus_hz - d.kappa_minus_hz;
    let sqrt_a = (imbalance * split / kappa).abs();
    let j = (split * split - sqrt_a * sqrt_a).max(0.0).sqrt() / 2.0;
    let mid = 0.5 * (d.f_plus_hz + d.f_minus_hz);
    let half_delta = 0.5 * imbalance.signum() * sqrt_a;
    BareDimer {
        f_bright_hz: mid + half_delta,
        f_dark_hz: mid - half_delta,
        coupling_hz: j,
        kappa_hz: kappa,
    }
}

/// Dresses a bare dimer: the exact forward map inverted by
/// [`dimer_asymmetry`].
pub fn dimer_from_bare(b: &BareDimer) -> DressedDimer {
    let delta = b.f_bright_hz - b.f_dark_hz;
    let split = (delta * delta + 4.0 * b.coupling_hz * b.coupling_hz).sqrt();
    let mid = 0.5 * (b.f_bright_hz + b.f_dark_hz);
    let dk = if split > 0.0 { delta * b.kappa_hz / split } else { 0.0 };
    DressedDimer {
        f_plus_hz: mid + 0.5 * split,
        f_minus_hz: mid - 0.5 * split,
        kappa_plus_hz: 0.5 * (b.kappa_hz + dk),
        kappa_minus_hz: 0.5 * (b.kappa_hz - dk),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lossless_factor_stays_on_the_unit_circle() {
        for detune in [-5.0e6, -0.3e6, 0.0, 0.7e6, 9.0e6] {
            let g = reflection_factor(6.0e9 + detune, 6.0e9, 2.5e6, 0.0);
            assert!((g.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn internal_loss_dips_below_the_circle() {
        let on = reflection_factor(6.0e9, 6.0e9, 2.5e6, 0.3e6);
        assert!(on.norm() < 1.0 - 1e-3);
    }

    #[test]
    fn bare_dressed_roundtrip_is_exact() {
        let bare = BareDimer {
            f_bright_hz: 6.010e9,
            f_dark_hz: 5.989e9,
            coupling_hz: 334.8e6,
            kappa_hz: 287.0e6,
        };
        let dressed = dimer_from_bare(&bare);
        assert!(dressed.f_plus_hz > dressed.f_minus_hz);
        assert!(dressed.kappa_plus_hz > dressed.kappa_minus_hz);
        let back = dimer_asymmetry(&dressed);
        assert!((back.f_bright_hz - bare.f_bright_hz).abs() < 1e-3);
        assert!((back.f_dark_hz - bare.f_dark_hz).abs() < 1e-3);
        assert!((back.coupling_hz - bare.coupling_hz).abs() < 1e-3);
        assert!((back.kappa_hz - bare.kappa_hz).abs() < 1e-6);
    }

    #[test]
    fn noiseless_trace_roundtrips() {
        let truth = DimerFitParams {
            f_plus_hz: 6.10e9,
            f_minus_hz: 5.90e9,
            kappa_plus_hz: 60.0e6,
            kappa_minus_hz: 45.0e6,
            gamma_plus_hz: 1.0e6,
            gamma_minus_hz: 0.8e6,
            phase_offset_rad: 0.4,
        };
        let grid: Vec<f64> = (0..801).map(|i| 5.6e9 + i as f64 * 1e6).collect();
        let values: Vec<C64> = grid.iter().map(|&f| dimer_reflection_model(&truth, f)).collect();
        let trace = ComplexTrace::new(grid, values).unwrap();
        let (fitted, fit) = fit_dimer_reflection(&trace).unwrap();
        assert!(fit.converged);
        assert!((fitted.f_plus_hz - truth.f_plus_hz).abs() < 1e3);
        assert!((fitted.f_minus_hz - truth.f_minus_hz).abs() < 1e3);
        assert!((fitted.kappa_plus_hz - truth.kappa_plus_hz).abs() / truth.kappa_plus_hz < 1e-3);
        assert!((fitted.kappa_minus_hz - truth.kappa_minus_hz).abs() / truth.kappa_minus_hz < 1e-3);
        assert!((fitted.phase_offset_rad - truth.phase_offset_rad).abs() < 1e-3);
    }
}
