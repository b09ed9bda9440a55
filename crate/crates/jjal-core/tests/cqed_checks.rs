//! Readout-chain desk checks: transmon spectra against the asymptotic
//! series, the dispersive shift against its perturbative estimate, the
//! photon bookkeeping anchors, and the jump filter on seeded telegraph
//! records with known ground truth.

use jjal_core::cqed::dispersive::dispersive_shift;
use jjal_core::cqed::jumps::filter_jumps;
use jjal_core::cqed::readout::{
    assignment_fidelity, efficiency_from_separation, measurement_photons,
    photon_flux_per_second, pointer_angle_rad, stark_photon_calibration,
};
use jjal_core::cqed::thermal::{population_temperature, two_state_temperature};
use jjal_core::cqed::transmon::{asymptotic_level_ghz, solve_transmon};
use jjal_core::synth;

#[test]
fn exact_and_asymptotic_transitions_agree_across_the_transmon_regime() {
    let ec = 0.225;
    for ratio in [50.0, 60.0, 70.0, 80.0, 90.0, 100.0] {
        let ej = ratio * ec;
        let spectrum = solve_transmon(ej, ec, 0.0, 4).unwrap();
        let f_ge = spectrum.f_ge_ghz();
        let f_ge_asym = asymptotic_level_ghz(ej, ec, 1) - asymptotic_level_ghz(ej, ec, 0);
        assert!(
            (f_ge - f_ge_asym).abs() / f_ge < 0.02,
            "ratio {ratio}: exact {f_ge} vs asymptotic {f_ge_asym}"
        );
        // the quartic series underestimates the anharmonicity
        assert!(
            spectrum.anharmonicity_ghz().abs() > ec,
            "ratio {ratio}: anharmonicity {}",
            spectrum.anharmonicity_ghz()
        );
    }
}

#[test]
fn readout_qubit_transition_lands_near_the_asymptotic_value() {
    let spectrum = solve_transmon(12.5, 0.225, 0.0, 3).unwrap();
    assert!((spectrum.f_ge_ghz() - 4.518).abs() / 4.518 < 0.02, "f_ge {}", spectrum.f_ge_ghz());

    let asym = asymptotic_level_ghz(12.5, 0.225, 1) - asymptotic_level_ghz(12.5, 0.225, 0);
    assert!((asym - 4.5184).abs() < 5e-4, "asymptotic f_ge {asym}");

    // in the quartic series consecutive transitions differ by exactly E_c
    let f01 = asym;
    let f12 = asymptotic_level_ghz(12.5, 0.225, 2) - asymptotic_level_ghz(12.5, 0.225, 1);
    assert!((f12 - f01 + 0.225).abs() < 1e-12);
}

#[test]
fn zero_josephson_energy_leaves_the_charging_parabola() {
    let ec = 0.225;
    let spectrum = solve_transmon(0.0, ec, 0.0, 5).unwrap();
    // levels 4 E_c n^2 for n = 0, +/-1, +/-2: 0, 4Ec, 4Ec, 16Ec, 16Ec
    let expect = [0.0, 4.0 * ec, 4.0 * ec, 16.0 * ec, 16.0 * ec];
    for (k, &e) in expect.iter().enumerate() {
        let got = spectrum.levels_ghz[k] - spectrum.levels_ghz[0];
        assert!((got - e).abs() < 1e-9, "level {k}: {got} vs {e}");
    }
}

#[test]
fn dispersive_shift_sits_between_one_and_two_perturbative_estimates() {
    let shift = dispersive_shift(12.5, 0.225, 0.0, 5.8224, 0.039, 6, 10).unwrap();

    // the perturbative value with the same numbers is 279 kHz
    assert!((shift.chi_perturbative_hz - 279.3e3).abs() < 1.0e3);
    let ratio = shift.chi_hz / shift.chi_perturbative_hz;
    assert!((1.0..2.0).contains(&ratio), "chi {} Hz, ratio {ratio}", shift.chi_hz);

    // reported dispersive shift of this readout chain: 480 kHz, wide band
    assert!((shift.chi_hz - 480.0e3).abs() / 480.0e3 < 0.40, "chi {}", shift.chi_hz);
}

#[test]
fn decoupled_resonator_has_zero_shift() {
    let shift = dispersive_shift(12.5, 0.225, 0.0, 5.8224, 0.0, 4, 6).unwrap();
    assert_eq!(shift.chi_hz, 0.0);
}

#[test]
fn photon_bookkeeping_desk_numbers() {
    // 150 photons at kappa/2pi = 2.7 MHz for 500 ns: 318 collected
    let n = measurement_photons(150.0, 2.7e6, 0.0, 500e-9).unwrap();
    assert!((n - 318.0).abs() < 1.0, "n_meas {n}");

    // -118 dBm at the readout frequency, against the rounded 420/us
    let flux_per_us = photon_flux_per_second(-118.0, 5.8224e9).unwrap() / 1e6;
    assert!((flux_per_us - 420.0).abs() / 420.0 < 0.05, "flux {flux_per_us}/us");
    let half = photon_flux_per_second(-118.0, 2.0 * 5.8224e9).unwrap() / 1e6;
    assert!((half - 0.5 * flux_per_us).abs() < 1e-9);

    // blob width sigma = 2.0 in separation units
    let eta = efficiency_from_separation(2.0).unwrap();
    assert_eq!(eta, 0.125);

    // pointer rotation 4 atan(chi/kappa) at the operating point
    let angle_deg = pointer_angle_rad(480.0e3, 2.7e6).unwrap().to_degrees();
    assert!((angle_deg - 40.3).abs() < 0.5, "pointer angle {angle_deg} deg");
    let saturated = pointer_angle_rad(2.7e6, 2.7e6).unwrap();
    assert!((saturated - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn stark_calibration_recovers_a_synthetic_slope() {
    let chi = 480.0e3;
    let f_r0 = 5.8224e9;
    let truth = 31.25; // photons per drive-power unit
    let power: Vec<f64> = (0..12).map(|i| 0.1 * i as f64).collect();
    let f_r: Vec<f64> = power.iter().map(|&p| f_r0 - truth * p * chi).collect();

    let cal = stark_photon_calibration(&power, &f_r, chi).unwrap();
    assert!((cal.photons_per_unit - truth).abs() / truth < 1e-3, "slope {}", cal.photons_per_unit);
    assert!(cal.linear, "r^2 {}", cal.r_squared);
    assert_eq!(cal.f_r0_hz, f_r0);

    // one dispersive shift of detuning is one photon
    let one = stark_photon_calibration(&[0.0, 1.0, 2.0], &[f_r0, f_r0 - chi, f_r0 - 2.0 * chi], chi)
        .unwrap();
    assert!((one.photons_per_unit - 1.0).abs() < 1e-12);
}

#[test]
fn saturating_stark_record_is_flagged_nonlinear() {
    let chi = 480.0e3;
    let f_r0 = 5.8224e9;
    let power: Vec<f64> = (0..12).map(|i| 0.1 * i as f64).collect();
    // photon number saturates instead of growing linearly
    let f_r: Vec<f64> =
        power.iter().map(|&p| f_r0 - 20.0 * (1.0 - (-2.0 * p).exp()) * chi).collect();
    let cal = stark_photon_calibration(&power, &f_r, chi).unwrap();
    assert!(!cal.linear, "r^2 {} should fall below 0.98", cal.r_squared);
}

#[test]
fn telegraph_labels_err_less_than_a_part_per_thousand_at_wide_separation() {
    // means eight noise widths apart, bands one width wide
    let sigma = 1.0;
    let data = synth::telegraph(21, &[0.0, 8.0 * sigma], 2.0e-3, 1.0e-6, 200_000, sigma);
    let trace = filter_jumps(&data.value, &[0.0, 8.0 * sigma], sigma).unwrap();

    let errors = trace
        .labels
        .iter()
        .zip(&data.true_state)
        .filter(|(a, b)| a != b)
        .count();
    let rate = errors as f64 / data.true_state.len() as f64;
    assert!(rate < 1e-3, "label error rate {rate} ({errors} samples)");
    assert!(!trace.events.is_empty(), "record must actually jump");
}

#[test]
fn jump_filter_is_label_permutation_covariant() {
    let sigma = 0.5;
    let data = synth::telegraph(5, &[0.0, 4.0, -4.0], 5.0e-4, 1.0e-6, 20_000, sigma);

    let fwd = filter_jumps(&data.value, &[0.0, 4.0, -4.0], sigma).unwrap();
    let rev = filter_jumps(&data.value, &[-4.0, 4.0, 0.0], sigma).unwrap();
    // means swapped 0 <-> 2, so labels must swap the same way
    let map = [2usize, 1, 0];
    assert!(fwd
        .labels
        .iter()
        .zip(&rev.labels)
        .all(|(&a, &b)| map[a] == b));
    assert_eq!(fwd.events.len(), rev.events.len());
}

#[test]
fn fidelity_calibrated_blobs_discriminate_in_the_target_band() {
    let sigma = 2.0;
    let separation = synth::separation_for_fidelity(0.90, sigma);
    let blobs = synth::fidelity_blobs(33, separation, sigma, 20_000);
    let fidelity = assignment_fidelity(&blobs.ground_q, &blobs.excited_q).unwrap();
    assert!(
        (0.85..=0.95).contains(&fidelity),
        "fidelity {fidelity} outside the discrimination band"
    );
}

#[test]
fn qubit_temperature_from_population_ratio() {
    // 4.505 GHz qubit, 12:1 ground-to-excited counts
    let t = two_state_temperature(4.505e9, 12.0, 1.0).unwrap();
    assert!((t - 0.087).abs() < 0.5e-3, "T {t} K");

    // the multi-state regression reduces exactly to the two-state inversion
    let t_multi = population_temperature(&[4.505e9], &[12.0, 1.0]).unwrap();
    assert!((t - t_multi).abs() / t < 1e-9);

    // consistent three-level Boltzmann data pins the same temperature
    let f2 = 2.0 * 4.505e9 - 0.225e9; // parabola minus one anharmonicity
    let boltz = |f: f64| (-jjal_core::consts::PLANCK * f / (jjal_core::consts::BOLTZMANN * t)).exp();
    let t3 = population_temperature(&[4.505e9, f2], &[1.0, boltz(4.505e9), boltz(f2)]).unwrap();
    assert!((t3 - t).abs() / t < 1e-9, "three-level T {t3} K");
}
