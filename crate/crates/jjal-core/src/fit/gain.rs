//! Gain profile fits.
//!
//! Pumped near a dimer the amplifier shows one Lorentzian gain lobe per
//! dressed mode. The power gain is modeled as
//!
//! ```text
//! G(f) = 1 + sum_i a_i / (1 + 4 (f - f_i)^2 / b_i^2)
//! ```
//!
//! so each lobe has peak gain 1 + a_i, full width b_i at half the lobe
//! height, and amplitude gain-bandwidth product sqrt(1 + a_i) b_i. The
//! fit runs on the dB record (residuals in dB weight the lobe tops and
//! the unity-gain floor evenly), and lobes are seeded from contiguous
//! regions above 3 dB.

use serde::Serialize;

use super::{least_squares_fit, FitError, FitOptions, FitResult};

/// Detection threshold for a gain lobe (dB).
const LOBE_THRESHOLD_DB: f64 = 3.0;

/// One fitted gain lobe.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GainLobe {
    /// Lobe center (Hz).
    pub center_hz: f64,
    /// Peak power gain, 10 log10(1 + a) (dB).
    pub peak_gain_db: f64,
    /// Full width of the Lorentzian (Hz).
    pub width_hz: f64,
    /// Amplitude gain-bandwidth product sqrt(1 + a) b (Hz).
    pub gain_bandwidth_hz: f64,
}

fn model_db(p: &[f64], f: f64) -> f64 {
    let mut g = 1.0;
    for lobe in p.chunks_exact(3) {
        let (center, amp, width) = (lobe[0], lobe[1], lobe[2]);
        let detune = 2.0 * (f - center) / width;
        g += amp / (1.0 + detune * detune);
    }
    10.0 * g.log10()
}

/// Evaluates the multi-lobe model (dB) at one frequency from fitted lobes.
pub fn gain_model_db(lobes: &[GainLobe], f_hz: f64) -> f64 {
    let mut g = 1.0;
    for lobe in lobes {
        let a = 10f64.powf(lobe.peak_gain_db / 10.0) - 1.0;
        let detune = 2.0 * (f_hz - lobe.center_hz) / lobe.width_hz;
        g += a / (1.0 + detune * detune);
    }
    10.0 * g.log10()
}

/// Fits the multi-lobe gain model to a dB gain record.
///
/// Lobes are found as contiguous runs above 3 dB; each seeds one
/// Lorentzian at the run maximum. Errors with [`FitError::NoLobeFound`]
/// when the record never crosses the threshold. Returned lobes are sorted
/// by center frequency.
pub fn fit_gain_profile(
    freq_hz: &[f64],
    gain_db: &[f64],
) -> Result<(Vec<GainLobe>, FitResult), FitError> {
    if freq_hz.len() != gain_db.len() {
        return Err(FitError::LengthMismatch { left: freq_hz.len(), right: gain_db.len() });
    }
    let n = freq_hz.len();
    if n < 8 {
        return Err(FitError::InsufficientData { points: n, parameters: 3 });
    }

    // local maxima above threshold seed the lobes; shoulders of the same
    // lobe are merged when the valley between two candidates is shallower
    // than 1 dB, so overlapping lobes that never dip below threshold still
    // seed separately
    let mut candidates: Vec<usize> = (1..n - 1)
        .filter(|&i| {
            gain_db[i] > LOBE_THRESHOLD_DB
                && gain_db[i] > gain_db[i - 1]
                && gain_db[i] >= gain_db[i + 1]
        })
        .collect();
    let mut i = 0;
    while i + 1 < candidates.len() {
        let (a, b) = (candidates[i], candidates[i + 1]);
        let valley = gain_db[a..=b].iter().cloned().fold(f64::MAX, f64::min);
        if valley > gain_db[a].min(gain_db[b]) - 1.0 {
            candidates.remove(if gain_db[a] >= gain_db[b] { i + 1 } else { i });
        } else {
            i += 1;
        }
    }
    if candidates.is_empty() {
        return Err(FitError::NoLobeFound { threshold_db: LOBE_THRESHOLD_DB });
    }
    let seeds: Vec<(f64, f64, f64)> = candidates
        .iter()
        .map(|&peak| {
            let half = gain_db[peak] - 3.0;
            let mut lo = peak;
            while lo > 0 && gain_db[lo - 1] > half && gain_db[lo - 1] <= gain_db[lo] {
                lo -= 1;
            }
            let mut hi = peak;
            while hi + 1 < n && gain_db[hi + 1] > half && gain_db[hi + 1] <= gain_db[hi] {
                hi += 1;
            }
            let width = (freq_hz[hi] - freq_hz[lo])
                .max(2.0 * (freq_hz[n - 1] - freq_hz[0]) / n as f64);
            (freq_hz[peak], 10f64.powf(gain_db[peak] / 10.0) - 1.0, width)
        })
        .collect();

    let residual = |p: &[f64]| -> Vec<f64> {
        freq_hz.iter().zip(gain_db).map(|(&f, &g)| model_db(p, f) - g).collect()
    };
    let mut p0 = Vec::with_capacity(3 * seeds.len());
    let mut name_store = Vec::with_capacity(3 * seeds.len());
    let mut bounds = Vec::with_capacity(3 * seeds.len());
    let mut scales = Vec::with_capacity(3 * seeds.len());
    let span = freq_hz[n - 1] - freq_hz[0];
    for (i, (center, amp, width)) in seeds.iter().enumerate() {
        p0.extend_from_slice(&[*center, *amp, *width]);
        name_store.push(format!("center_hz_{i}"));
        name_store.push(format!("amp_{i}"));
        name_store.push(format!("width_hz_{i}"));
        bounds.push((freq_hz[0], freq_hz[n - 1]));
        bounds.push((0.0, 1e12));
        bounds.push((span / n as f64, span));
        scales.push(*width);
        scales.push(amp.max(1.0));
        scales.push(*width);
    }
    let names: Vec<&str> = name_store.iter().map(String::as_str).collect();
    let opts = FitOptions { bounds: Some(bounds), scales: Some(scales), ..Default::default() };
    let fit = least_squares_fit(residual, &p0, &names, &opts)?;

    let mut lobes: Vec<GainLobe> = fit
        .parameters
        .chunks_exact(3)
        .map(|lobe| GainLobe {
            center_hz: lobe[0],
            peak_gain_db: 10.0 * (1.0 + lobe[1]).log10(),
            width_hz: lobe[2],
            gain_bandwidth_hz: (1.0 + lobe[1]).sqrt() * lobe[2],
        })
        .collect();
    lobes.sort_by(|a, b| a.center_hz.total_cmp(&b.center_hz));
    Ok((lobes, fit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_db_lobe_roundtrips() {
        // 20 dB peak, 13.29 MHz wide: gain-bandwidth 132.9 MHz
        let truth = [6.0e9, 99.0, 13.29e6];
        let freq: Vec<f64> = (0..801).map(|i| 5.8e9 + i as f64 * 0.5e6).collect();
        let gain: Vec<f64> = freq.iter().map(|&f| model_db(&truth, f)).collect();
        let (lobes, fit) = fit_gain_profile(&freq, &gain).unwrap();
        assert!(fit.converged);
        assert_eq!(lobes.len(), 1);
        let lobe = lobes[0];
        assert!((lobe.center_hz - 6.0e9).abs() < 1e4);
        assert!((lobe.peak_gain_db - 20.0).abs() < 1e-6);
        assert!((lobe.gain_bandwidth_hz - 132.9e6).abs() / 132.9e6 < 1e-6);
    }

    #[test]
    fn two_lobes_are_separated() {
        let truth = [5.95e9, 99.0, 10.0e6, 6.05e9, 60.0, 14.0e6];
        let freq: Vec<f64> = (0..1201).map(|i| 5.85e9 + i as f64 * 0.25e6).collect();
        let gain: Vec<f64> = freq.iter().map(|&f| model_db(&truth, f)).collect();
        let (lobes, _) = fit_gain_profile(&freq, &gain).unwrap();
        assert_eq!(lobes.len(), 2);
        assert!((lobes[0].center_hz - 5.95e9).abs() < 1e5);
        assert!((lobes[1].center_hz - 6.05e9).abs() < 1e5);
    }

    #[test]
    fn flat_record_has_no_lobe() {
        let freq: Vec<f64> = (0..64).map(|i| 5.9e9 + i as f64 * 1e6).collect();
        let gain = vec![0.3; 64];
        assert!(matches!(
            fit_gain_profile(&freq, &gain),
            Err(FitError::NoLobeFound { .. })
        ));
    }
}
