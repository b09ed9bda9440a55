//! Thermometry from excited-state populations.
//!
//! For a thermal occupation the Boltzmann ratios of the level counts are
//! set by one number, log(N_0 / N_k) = E_k / (k_B T). With one excited
//! state that inverts directly; with several, the inverse temperature is
//! the through-origin regression of the measured log ratios against the
//! level energies, which reduces exactly to the direct inversion when
//! only one excited state is counted.

use crate::consts;

use super::CqedError;

/// Effective temperature (K) from populations of the ground state and one
/// excited state separated by `f_ge_hz`.
///
/// A vanishing excited count gives T = 0 naturally through the diverging
/// log ratio.
pub fn two_state_temperature(f_ge_hz: f64, n_ground: f64, n_excited: f64) -> Result<f64, CqedError> {
    population_temperature(&[f_ge_hz], &[n_ground, n_excited])
}

/// Effective temperature (K) from populations of several levels.
///
/// `transition_hz[k]` is the transition frequency from the ground state
/// to excited state k+1; `counts[0]` is the ground-state population and
/// `counts[k+1]` the corresponding excited population. Populations at or
/// above the ground-state count are not thermal and error as inverted.
pub fn population_temperature(transition_hz: &[f64], counts: &[f64]) -> Result<f64, CqedError> {
    if counts.len() != transition_hz.len() + 1 {
        return Err(CqedError::LengthMismatch { left: counts.len(), right: transition_hz.len() + 1 });
    }
    if transition_hz.is_empty() {
        return Err(CqedError::InsufficientData { points: counts.len(), needed: 2 });
    }
    let n0 = counts[0];
    if !(n0 > 0.0) {
        return Err(CqedError::NonPositive { name: "ground-state count", value: n0 });
    }
    for (k, &f) in transition_hz.iter().enumerate() {
        if !(f > 0.0) {
            return Err(CqedError::NonPositive { name: "transition frequency", value: f });
        }
        if !(counts[k + 1] >= 0.0) {
            return Err(CqedError::NonPositive { name: "excited count", value: counts[k + 1] });
        }
    }

    // through-origin regression of log(N0/Nk) on E_k / k_B
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (k, &f) in transition_hz.iter().enumerate() {
        let x = consts::PLANCK * f / consts::BOLTZMANN;
        let y = (n0 / counts[k + 1]).ln();
        sxx += x * x;
        sxy += x * y;
    }
    let beta = sxy / sxx; // 1/K
    if !(beta > 0.0) {
        return Err(CqedError::InvertedPopulation);
    }
    Ok(1.0 / beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_number_for_a_readout_qubit() {
        // 4.505 GHz qubit with a 12:1 population ratio sits near 87 mK
        let t = two_state_temperature(4.505e9, 12.0, 1.0).unwrap();
        assert!((t - 0.087).abs() < 0.5e-3);
    }

    #[test]
    fn two_state_case_equals_the_closed_form() {
        // the single-point regression must reduce to T = h f / (k_B ln r)
        let regressed = population_temperature(&[4.505e9], &[12.0, 1.0]).unwrap();
        let closed = consts::PLANCK * 4.505e9 / (consts::BOLTZMANN * 12f64.ln());
        assert!((regressed - closed).abs() / closed < 1e-14);
    }

    #[test]
    fn consistent_multi_state_counts_reproduce_the_temperature() {
        // counts drawn from an exact Boltzmann distribution at 87 mK
        let t_true = 0.087;
        let freqs = [4.505e9, 8.8e9]; // ge and gf
        let counts = [
            1000.0,
            1000.0 * (-consts::PLANCK * freqs[0] / (consts::BOLTZMANN * t_true)).exp(),
            1000.0 * (-consts::PLANCK * freqs[1] / (consts::BOLTZMANN * t_true)).exp(),
        ];
        let t = population_temperature(&freqs, &counts).unwrap();
        assert!((t - t_true).abs() / t_true < 1e-9);
    }

    #[test]
    fn vanishing_excited_count_freezes_out() {
        let t = two_state_temperature(4.505e9, 12.0, 0.0).unwrap();
        assert_eq!(t, 0.0);
    }

    #[test]
    fn inverted_population_is_rejected() {
        assert!(matches!(
            two_state_temperature(4.505e9, 1.0, 12.0),
            Err(CqedError::InvertedPopulation)
        ));
        // equal counts mean infinite temperature, also not thermal
        assert!(matches!(
            two_state_temperature(4.505e9, 5.0, 5.0),
            Err(CqedError::InvertedPopulation)
        ));
    }
}
