//! Noise visibility between pump-on and pump-off spectra.
//!
//! The added-noise benchmark compares two power spectral densities taken
//! on the same analyzer grid. The visibility is their pointwise
//! difference in dB; its maximum locates the frequency where the
//! amplifier lifts the system noise furthest above the background floor.

use serde::Serialize;

use super::FitError;

/// Pointwise visibility of one spectrum over another.
#[derive(Debug, Clone, Serialize)]
pub struct NoiseVisibility {
    /// Pump-on minus pump-off, per grid point (dB).
    pub delta_db: Vec<f64>,
    /// Largest visibility (dB).
    pub max_delta_db: f64,
    /// Frequency of the largest visibility (Hz).
    pub f_max_hz: f64,
}

/// Subtracts the pump-off spectrum from the pump-on spectrum.
///
/// The two records must share the frequency grid exactly; re-gridding
/// measured spectra silently is how noise figures get miscounted, so any
/// mismatch is an error naming the first differing point.
pub fn noise_visibility(
    freq_on_hz: &[f64],
    psd_on_db: &[f64],
    freq_off_hz: &[f64],
    psd_off_db: &[f64],
) -> Result<NoiseVisibility, FitError> {
    if freq_on_hz.len() != psd_on_db.len() {
        return Err(FitError::LengthMismatch { left: freq_on_hz.len(), right: psd_on_db.len() });
    }
    if freq_off_hz.len() != psd_off_db.len() {
        return Err(FitError::LengthMismatch { left: freq_off_hz.len(), right: psd_off_db.len() });
    }
    if freq_on_hz.len() != freq_off_hz.len() {
        return Err(FitError::LengthMismatch { left: freq_on_hz.len(), right: freq_off_hz.len() });
    }
    if freq_on_hz.is_empty() {
        return Err(FitError::EmptyInput);
    }
    if let Some(index) = (0..freq_on_hz.len()).find(|&i| freq_on_hz[i] != freq_off_hz[i]) {
        return Err(FitError::GridMismatch { index });
    }

    let delta_db: Vec<f64> = psd_on_db.iter().zip(psd_off_db).map(|(on, off)| on - off).collect();
    let (i_max, &max_delta_db) = delta_db
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    Ok(NoiseVisibility { delta_db, max_delta_db, f_max_hz: freq_on_hz[i_max] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visibility_peak_is_located() {
        let freq: Vec<f64> = (0..101).map(|i| 5.9e9 + i as f64 * 1e6).collect();
        let off = vec![-90.0; 101];
        let on: Vec<f64> = freq
            .iter()
            .map(|&f| -90.0 + 14.2 / (1.0 + ((f - 5.95e9) / 8e6).powi(2)))
            .collect();
        let vis = noise_visibility(&freq, &on, &freq, &off).unwrap();
        assert!((vis.max_delta_db - 14.2).abs() < 1e-9);
        assert!((vis.f_max_hz - 5.95e9).abs() < 0.6e6);
    }

    #[test]
    fn grids_must_match_exactly() {
        let f1 = vec![1.0e9, 2.0e9, 3.0e9];
        let mut f2 = f1.clone();
        f2[1] += 1e-3;
        let p = vec![0.0; 3];
        assert!(matches!(
            noise_visibility(&f1, &p, &f2, &p),
            Err(FitError::GridMismatch { index: 1 })
        ));
    }
}
