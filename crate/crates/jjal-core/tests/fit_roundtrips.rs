//! Fit-family roundtrips: every fitter runs against its own synthetic
//! generator with known truth, plus the desk-value anchors for the dimer
//! asymmetry and the gain-bandwidth product.

use jjal_core::fit::dimer::{
    dimer_asymmetry, fit_dimer_reflection, DimerFitParams, DressedDimer,
};
use jjal_core::fit::flux::{fit_flux_map, FluxFitParams};
use jjal_core::fit::gain::fit_gain_profile;
use jjal_core::fit::noise::noise_visibility;
use jjal_core::cqed::ramsey::{fit_ramsey, fit_ramsey_double, RamseyTone};
use jjal_core::scattering::linear_grid;
use jjal_core::{least_squares_fit, synth, FitError, FitOptions, FitWarning};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Calibration of the engine's standard errors: on a Lorentzian with 1%
/// Gaussian noise the truth must land within 3 standard errors nearly
/// always, otherwise the covariance scaling is off.
#[test]
fn monte_carlo_lorentzian_errors_are_calibrated() {
    let truth = [1.0, 6.0e9, 40.0e6]; // amplitude, center (Hz), fwhm (Hz)
    let freq: Vec<f64> = (0..201).map(|i| 5.8e9 + 2e6 * i as f64).collect();

    let mut covered = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, 0.01).unwrap();
        let data: Vec<f64> = freq
            .iter()
            .map(|&f| {
                let detune = 2.0 * (f - truth[1]) / truth[2];
                truth[0] / (1.0 + detune * detune) + noise.sample(&mut rng)
            })
            .collect();

        let model = |p: &[f64]| -> Vec<f64> {
            freq.iter()
                .zip(&data)
                .map(|(&f, &y)| {
                    let detune = 2.0 * (f - p[1]) / p[2];
                    p[0] / (1.0 + detune * detune) - y
                })
                .collect()
        };
        let init = [0.8, 6.02e9, 60.0e6];
        let opts = FitOptions {
            scales: Some(vec![1.0, 1e8, 1e7]),
            ..Default::default()
        };
        let fit = least_squares_fit(model, &init, &["amp", "center_hz", "fwhm_hz"], &opts)
            .expect("fit runs");
        assert!(fit.converged, "seed {seed} did not converge");

        let hit = (0..3).all(|k| {
            (fit.parameters[k] - truth[k]).abs() <= 3.0 * fit.standard_errors[k]
        });
        if hit {
            covered += 1;
        }
    }
    assert!(covered >= 95, "only {covered}/100 trials within 3 standard errors");
}

#[test]
fn flux_map_roundtrips_noiseless_to_a_tenth_percent() {
    let truth = FluxFitParams {
        f_max_hz: 7.0e9,
        gamma_l: 0.9,
        lever_arm_per_a: 0.5,
        current_offset_a: 1.0e-3,
    };
    let map = synth::flux_map(0, &truth, -0.9, 0.9, 200, 0.0);
    let (params, fit) = fit_flux_map(&map.bias_a, &map.freq_hz).expect("flux fit runs");

    assert!(fit.converged);
    assert!(rel(params.f_max_hz, truth.f_max_hz) < 1e-3, "f_max {}", params.f_max_hz);
    assert!(rel(params.gamma_l, truth.gamma_l) < 1e-3, "gamma_l {}", params.gamma_l);
    assert!(
        rel(params.lever_arm_per_a, truth.lever_arm_per_a) < 1e-3,
        "lever arm {}",
        params.lever_arm_per_a
    );
    assert!(
        (params.current_offset_a - truth.current_offset_a).abs() < 1e-3 * 2.0e-3,
        "offset {}",
        params.current_offset_a
    );
    assert!(
        !fit.warnings.iter().any(|w| matches!(w, FitWarning::WeakFluxModulation { .. })),
        "map spans most of a period, no weak-modulation warning expected"
    );
}

#[test]
fn shallow_flux_map_warns_about_weak_modulation() {
    let truth = FluxFitParams {
        f_max_hz: 7.0e9,
        gamma_l: 0.9,
        lever_arm_per_a: 0.5,
        current_offset_a: 0.0,
    };
    // 0.2 A at 0.5 flux quanta per ampere is a tenth of a period
    let map = synth::flux_map(1, &truth, -0.1, 0.1, 60, 0.0);
    let (_, fit) = fit_flux_map(&map.bias_a, &map.freq_hz).expect("flux fit runs");
    assert!(
        fit.warnings.iter().any(|w| matches!(w, FitWarning::WeakFluxModulation { .. })),
        "a tenth of a period must be flagged"
    );
}

#[test]
fn dimer_trace_roundtrips_to_half_a_percent() {
    let center = 5.8e9;
    let truth = DimerFitParams {
        f_plus_hz: center + 335.0e6,
        f_minus_hz: center - 335.0e6,
        kappa_plus_hz: 148.0e6,
        kappa_minus_hz: 139.0e6,
        gamma_plus_hz: 0.0,
        gamma_minus_hz: 0.0,
        phase_offset_rad: 0.3,
    };
    let grid = linear_grid(center - 1.2e9, center + 1.2e9, 1.0e6);
    let trace = synth::dimer_trace(0, &truth, &grid, 0.0);
    let (params, fit) = fit_dimer_reflection(&trace).expect("dimer fit runs");

    assert!(fit.converged);
    assert!(rel(params.f_plus_hz, truth.f_plus_hz) < 5e-3);
    assert!(rel(params.f_minus_hz, truth.f_minus_hz) < 5e-3);
    assert!(rel(params.kappa_plus_hz, truth.kappa_plus_hz) < 5e-3);
    assert!(rel(params.kappa_minus_hz, truth.kappa_minus_hz) < 5e-3);

    // linewidth imbalance puts the bare resonators 21 MHz apart
    let bare = dimer_asymmetry(&DressedDimer::from(&params));
    let detuning = bare.asymmetry_hz();
    assert!(
        (detuning - 21.0e6).abs() < 1.0e6,
        "bare detuning {:.2} MHz, expected 21 MHz",
        detuning / 1e6
    );
    assert!((bare.coupling_hz - 334.8e6).abs() < 2.0e6, "J {:.1} MHz", bare.coupling_hz / 1e6);
}

/// The same numbers straight from the asymmetry equations, no fit in the
/// loop: a 670 MHz splitting with 148/139 MHz linewidths hides a 21 MHz
/// bare detuning.
#[test]
fn measured_linewidth_imbalance_gives_21_mhz_detuning() {
    let dressed = DressedDimer {
        f_plus_hz: 6.135e9,
        f_minus_hz: 6.135e9 - 670.0e6,
        kappa_plus_hz: 148.0e6,
        kappa_minus_hz: 139.0e6,
    };
    let bare = dimer_asymmetry(&dressed);
    assert!((bare.asymmetry_hz() - 21.0e6).abs() < 1.0e6);
    assert!((bare.coupling_hz - 334.8e6).abs() < 1.0e6);
}

#[test]
fn noisy_dimer_estimates_stay_within_three_standard_errors() {
    let truth = DimerFitParams {
        f_plus_hz: 6.135e9,
        f_minus_hz: 5.465e9,
        kappa_plus_hz: 148.0e6,
        kappa_minus_hz: 139.0e6,
        gamma_plus_hz: 0.0,
        gamma_minus_hz: 0.0,
        phase_offset_rad: -0.1,
    };
    let grid = linear_grid(4.6e9, 7.0e9, 2.0e6);
    let trace = synth::dimer_trace(7, &truth, &grid, 0.01);
    let (params, fit) = fit_dimer_reflection(&trace).expect("dimer fit runs");

    assert!(fit.converged);
    for (name, got, want) in [
        ("f_plus_hz", params.f_plus_hz, truth.f_plus_hz),
        ("f_minus_hz", params.f_minus_hz, truth.f_minus_hz),
        ("kappa_plus_hz", params.kappa_plus_hz, truth.kappa_plus_hz),
        ("kappa_minus_hz", params.kappa_minus_hz, truth.kappa_minus_hz),
    ] {
        let se = fit.std_err(name).expect("named parameter");
        assert!(
            (got - want).abs() <= 3.0 * se.max(1e-7 * want.abs()),
            "{name}: got {got}, want {want}, se {se}"
        );
    }
}

#[test]
fn gain_fit_reproduces_the_desk_gain_bandwidth() {
    let (g0_db, width) = (23.2, 9.2e6);
    let center = 5.8e9;
    let grid = linear_grid(center - 8.0 * width, center + 8.0 * width, 0.2e6);
    let data = synth::gain_profile(0, &[(center, g0_db, width)], &grid, 0.0);
    let (lobes, fit) = fit_gain_profile(&data.freq_hz, &data.gain_db).expect("gain fit runs");

    assert!(fit.converged);
    assert_eq!(lobes.len(), 1);
    let lobe = &lobes[0];
    assert!((lobe.peak_gain_db - g0_db).abs() < 0.02, "peak {}", lobe.peak_gain_db);
    assert!(rel(lobe.width_hz, width) < 1e-3, "width {}", lobe.width_hz);

    let expected = 10f64.powf(g0_db / 20.0) * width;
    assert!(
        rel(lobe.gain_bandwidth_hz, expected) < 1e-3,
        "gain-bandwidth {:.2} MHz, expected {:.2} MHz",
        lobe.gain_bandwidth_hz / 1e6,
        expected / 1e6
    );
}

#[test]
fn gain_bandwidth_is_constant_across_a_constant_product_family() {
    let product = 170.0e6;
    let gains: Vec<f64> = vec![15.0, 17.0, 19.0, 21.0, 23.0, 25.0];
    let family = synth::gain_family(11, 5.8e9, product, &gains, 400, 0.05);

    for (member, data) in family.iter().enumerate() {
        let (lobes, _) = fit_gain_profile(&data.freq_hz, &data.gain_db).expect("gain fit runs");
        assert_eq!(lobes.len(), 1, "member {member}");
        let got = lobes[0].gain_bandwidth_hz;
        assert!(
            rel(got, product) < 0.02,
            "member {member}: product {:.2} MHz departs from {:.0} MHz",
            got / 1e6,
            product / 1e6
        );
    }
}

#[test]
fn flat_trace_has_no_lobe() {
    let grid = linear_grid(5.0e9, 6.0e9, 10.0e6);
    let flat = vec![0.0; grid.len()];
    match fit_gain_profile(&grid, &flat) {
        Err(FitError::NoLobeFound { .. }) => {}
        other => panic!("expected NoLobeFound, got {other:?}"),
    }
}

#[test]
fn noise_visibility_error_is_bounded_by_the_ripple() {
    let grid = linear_grid(5.9e9, 6.1e9, 0.5e6);
    let ripple = 0.1;
    let pair = synth::psd_pair(3, &grid, -90.0, 14.2, 6.0e9, 20.0e6, ripple);
    let vis = noise_visibility(&pair.freq_hz, &pair.on_db, &pair.freq_hz, &pair.off_db)
        .expect("matching grids");

    // the on-record carries its own ripple draw, so the peak estimate sits
    // within a few ripple widths of the clean 14.2 dB bump
    assert!((vis.max_delta_db - 14.2).abs() < 4.0 * ripple, "max {}", vis.max_delta_db);
    assert!((vis.f_max_hz - 6.0e9).abs() < 20.0e6, "peak at {}", vis.f_max_hz);
}

#[test]
fn ramsey_single_tone_roundtrips_to_a_percent() {
    let tone = RamseyTone { amplitude: 0.4, freq_hz: 1.0e6, phase_rad: 0.0 };
    let data = synth::ramsey(5, 6.5e-6, &[tone], 0.5, 0.1e-6, 120, 0.002);
    let (out, fit) = fit_ramsey(&data.delay_s, &data.signal).expect("ramsey fit runs");

    assert!(fit.converged);
    assert!(rel(out.t2_s, 6.5e-6) < 0.01, "t2 {}", out.t2_s);
    assert!(rel(out.tones[0].freq_hz, 1.0e6) < 0.01, "freq {}", out.tones[0].freq_hz);
    assert!(rel(out.tones[0].amplitude, 0.4) < 0.01, "amp {}", out.tones[0].amplitude);
    assert!(rel(out.offset, 0.5) < 0.01, "offset {}", out.offset);
}

#[test]
fn ramsey_doublet_roundtrips_to_two_percent() {
    let tones = [
        RamseyTone { amplitude: 0.25, freq_hz: 0.8e6, phase_rad: 0.2 },
        RamseyTone { amplitude: 0.25, freq_hz: 1.2e6, phase_rad: -0.1 },
    ];
    let data = synth::ramsey(9, 6.5e-6, &tones, 0.5, 0.1e-6, 160, 0.001);
    let (out, fit) = fit_ramsey_double(&data.delay_s, &data.signal).expect("double fit runs");

    assert!(fit.converged);
    assert!(rel(out.t2_s, 6.5e-6) < 0.02, "t2 {}", out.t2_s);
    assert_eq!(out.tones.len(), 2);
    assert!(rel(out.tones[0].freq_hz, 0.8e6) < 0.02, "low tone {}", out.tones[0].freq_hz);
    assert!(rel(out.tones[1].freq_hz, 1.2e6) < 0.02, "high tone {}", out.tones[1].freq_hz);
    for tone in &out.tones {
        assert!(rel(tone.amplitude, 0.25) < 0.05, "amp {}", tone.amplitude);
    }
}

/// Determinism contract for the whole family: the same inputs give the
/// same bytes back, fit engines included.
#[test]
fn fits_are_bitwise_deterministic() {
    let truth = FluxFitParams {
        f_max_hz: 7.0e9,
        gamma_l: 0.85,
        lever_arm_per_a: 0.5,
        current_offset_a: 1.0e-3,
    };
    let map = synth::flux_map(17, &truth, -0.9, 0.9, 150, 2.0e6);
    let (a, fit_a) = fit_flux_map(&map.bias_a, &map.freq_hz).unwrap();
    let (b, fit_b) = fit_flux_map(&map.bias_a, &map.freq_hz).unwrap();
    assert_eq!(a.f_max_hz.to_bits(), b.f_max_hz.to_bits());
    assert_eq!(a.gamma_l.to_bits(), b.gamma_l.to_bits());
    assert_eq!(a.lever_arm_per_a.to_bits(), b.lever_arm_per_a.to_bits());
    assert_eq!(a.current_offset_a.to_bits(), b.current_offset_a.to_bits());
    assert_eq!(fit_a.residual_rms.to_bits(), fit_b.residual_rms.to_bits());
}
