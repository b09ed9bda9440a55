//! Photon budgets and figures of merit of a dispersive measurement.

use crate::consts;

use super::CqedError;

/// Information-carrying photons collected during a measurement pulse,
/// n_bar (kappa + gamma)^2 T / (4 kappa) with the rates taken as angular
/// frequencies.
///
/// With no internal loss this reduces to n_bar kappa T / 4; a resonator
/// losing as fast as it leaks (gamma = kappa) quadruples it to
/// n_bar kappa T because every photon entering the resonator is counted
/// whether it reaches the amplifier or not.
pub fn measurement_photons(
    n_bar: f64,
    kappa_hz: f64,
    gamma_hz: f64,
    t_meas_s: f64,
) -> Result<f64, CqedError> {
    if !(kappa_hz > 0.0) {
        return Err(CqedError::NonPositive { name: "kappa_hz", value: kappa_hz });
    }
    if !(n_bar >= 0.0) {
        return Err(CqedError::NonPositive { name: "n_bar", value: n_bar });
    }
    if !(gamma_hz >= 0.0) {
        return Err(CqedError::NonPositive { name: "gamma_hz", value: gamma_hz });
    }
    if !(t_meas_s >= 0.0) {
        return Err(CqedError::NonPositive { name: "t_meas_s", value: t_meas_s });
    }
    let total = kappa_hz + gamma_hz;
    Ok(n_bar * 2.0 * std::f64::consts::PI * total * total * t_meas_s / (4.0 * kappa_hz))
}

/// Photon flux (photons per second) carried by a tone of the given power
/// at the given frequency.
pub fn photon_flux_per_second(power_dbm: f64, f_hz: f64) -> Result<f64, CqedError> {
    if !(f_hz > 0.0) {
        return Err(CqedError::NonPositive { name: "f_hz", value: f_hz });
    }
    let watts = 10f64.powf((power_dbm - 30.0) / 10.0);
    Ok(watts / (consts::PLANCK * f_hz))
}

/// Quantum efficiency inferred from the separation-normalized blob width
/// of a single-shot histogram, 1 / (2 sigma^2).
///
/// `sigma` is the common width of the two Gaussian blobs divided by their
/// separation; an ideal phase-preserving chain reaches sigma = 1/sqrt(2)
/// and efficiency one.
pub fn efficiency_from_separation(sigma: f64) -> Result<f64, CqedError> {
    if !(sigma > 0.0) {
        return Err(CqedError::NonPositive { name: "sigma", value: sigma });
    }
    Ok(0.5 / (sigma * sigma))
}

/// Steady-state angle between the two pointer coherent states,
/// 4 atan(chi / kappa) (rad).
///
/// Grows linearly at small shift and saturates at pi when chi = kappa,
/// where the pointer states sit on opposite sides of the origin.
pub fn pointer_angle_rad(chi_hz: f64, kappa_hz: f64) -> Result<f64, CqedError> {
    if !(chi_hz >= 0.0) {
        return Err(CqedError::NonPositive { name: "chi_hz", value: chi_hz });
    }
    if !(kappa_hz > 0.0) {
        return Err(CqedError::NonPositive { name: "kappa_hz", value: kappa_hz });
    }
    Ok(4.0 * (chi_hz / kappa_hz).atan())
}

/// Assignment fidelity of two labeled single-shot records, thresholded at
/// the midpoint of the sample means: the mean of the two correct-label
/// fractions.
pub fn assignment_fidelity(ground: &[f64], excited: &[f64]) -> Result<f64, CqedError> {
    if ground.is_empty() || excited.is_empty() {
        return Err(CqedError::InsufficientData { points: 0, needed: 1 });
    }
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let (mg, me) = (mean(ground), mean(excited));
    let threshold = 0.5 * (mg + me);
    let frac_on_side = |xs: &[f64], own_mean: f64| {
        let correct = xs
            .iter()
            .filter(|&&x| (x - threshold).signum() == (own_mean - threshold).signum())
            .count();
        correct as f64 / xs.len() as f64
    };
    Ok(0.5 * (frac_on_side(ground, mg) + frac_on_side(excited, me)))
}

/// Photon-number calibration from the ac Stark shift of the resonator.
#[derive(Debug, Clone, Copy)]
pub struct StarkCalibration {
    /// Intracavity photons per unit of drive power (the abscissa unit).
    pub photons_per_unit: f64,
    /// Uncentered R^2 of the through-origin photon-number fit.
    pub r_squared: f64,
    /// Reference (lowest-power) resonator frequency (Hz).
    pub f_r0_hz: f64,
    /// Whether the record is linear enough to trust (R^2 >= 0.98); a
    /// false value usually means the power range reaches the nonlinear
    /// backbending of the array.
    pub linear: bool,
}

/// Calibrates photons per drive-power unit from resonator frequencies
/// recorded at increasing drive power.
///
/// The lowest-power point anchors the unshifted frequency; every other
/// point converts to a photon number through the dispersive shift,
/// n = |f_r - f_r0| / chi, and a through-origin straight line over drive
/// power fits the slope. Needs the reference plus at least two shifted
/// points. With an independently known unshifted frequency use
/// [`stark_photon_calibration_with_reference`], which keeps every point
/// in the fit.
pub fn stark_photon_calibration(
    drive_power: &[f64],
    f_r_hz: &[f64],
    chi_hz: f64,
) -> Result<StarkCalibration, CqedError> {
    if drive_power.len() != f_r_hz.len() {
        return Err(CqedError::LengthMismatch { left: drive_power.len(), right: f_r_hz.len() });
    }
    if drive_power.len() < 3 {
        return Err(CqedError::InsufficientData { points: drive_power.len(), needed: 3 });
    }
    let mut order: Vec<usize> = (0..drive_power.len()).collect();
    order.sort_by(|&i, &j| drive_power[i].total_cmp(&drive_power[j]));
    let f_r0 = f_r_hz[order[0]];

    let rest: Vec<usize> = order[1..].to_vec();
    let power: Vec<f64> = rest.iter().map(|&i| drive_power[i]).collect();
    let freq: Vec<f64> = rest.iter().map(|&i| f_r_hz[i]).collect();
    stark_photon_calibration_with_reference(&power, &freq, chi_hz, f_r0)
}

/// The same through-origin photon-number fit against a caller-supplied
/// unshifted frequency; every point participates.
pub fn stark_photon_calibration_with_reference(
    drive_power: &[f64],
    f_r_hz: &[f64],
    chi_hz: f64,
    f_r0_hz: f64,
) -> Result<StarkCalibration, CqedError> {
    if drive_power.len() != f_r_hz.len() {
        return Err(CqedError::LengthMismatch { left: drive_power.len(), right: f_r_hz.len() });
    }
    if drive_power.len() < 2 {
        return Err(CqedError::InsufficientData { points: drive_power.len(), needed: 2 });
    }
    if !(chi_hz > 0.0) {
        return Err(CqedError::NonPositive { name: "chi_hz", value: chi_hz });
    }

    let mut sxx = 0.0;
    let mut sxn = 0.0;
    for (&x, &f) in drive_power.iter().zip(f_r_hz) {
        let n = (f - f_r0_hz).abs() / chi_hz;
        sxx += x * x;
        sxn += x * n;
    }
    if !(sxx > 0.0) {
        return Err(CqedError::NonPositive { name: "drive power spread", value: sxx });
    }
    let slope = sxn / sxx;

    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&x, &f) in drive_power.iter().zip(f_r_hz) {
        let n = (f - f_r0_hz).abs() / chi_hz;
        let fit = slope * x;
        ss_res += (n - fit) * (n - fit);
        ss_tot += n * n;
    }
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };

    Ok(StarkCalibration {
        photons_per_unit: slope,
        r_squared,
        f_r0_hz,
        linear: r_squared >= 0.98,
    })
}
