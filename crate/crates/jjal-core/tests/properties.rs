//! Randomized invariants: flux periodicity of the SQUID inductance,
//! idempotent mode symmetrization, exactness of the dimer basis change,
//! permutation covariance of the jump filter, and lossless table I/O.

use proptest::prelude::*;

use jjal_core::cqed::jumps::filter_jumps;
use jjal_core::fit::dimer::{dimer_asymmetry, dimer_from_bare, BareDimer};
use jjal_core::io;
use jjal_core::{build_ladder_matrices, solve_modes, symmetrize_modes, squid_inductance};
use jjal_core::{ArrayDesign, FluxBias};

fn toy_design(n: usize) -> ArrayDesign {
    ArrayDesign {
        n_squids: n,
        critical_current: 3.0e-6,
        josephson_capacitance: 1.0e-12,
        island_capacitance: 0.4e-15,
        center_capacitance: 35.0e-15,
        center_ground_capacitance: 33.0e-15,
        stray_inductance_per_cell: 12.6e-12,
        port_impedance: 50.0,
    }
}

fn scratch(name: &str, case: u64) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("jjal-prop-{}-{name}-{case}.csv", std::process::id()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// One flux quantum is a full period and the arch is even in the
    /// bias; both must hold bitwise on dyadic fluxes where the cosine
    /// argument reduction is exact.
    #[test]
    fn squid_inductance_is_periodic_and_even(
        numer in -64i32..=64,
        l0 in 20.0e-12..200.0e-12f64,
    ) {
        let phi = numer as f64 / 32.0;
        prop_assume!((phi.abs() - 0.5).abs() > 1e-9 && (phi.abs() - 1.5).abs() > 1e-9);
        let here = squid_inductance(l0, FluxBias(phi)).unwrap();
        let mirrored = squid_inductance(l0, FluxBias(-phi)).unwrap();
        let shifted = squid_inductance(l0, FluxBias(phi + 1.0)).unwrap();
        prop_assert_eq!(here.to_bits(), mirrored.to_bits());
        prop_assert_eq!(here.to_bits(), shifted.to_bits());
        prop_assert!(here >= l0);
    }

    /// Symmetrizing twice is the same as symmetrizing once, and it never
    /// moves the eigenfrequencies.
    #[test]
    fn symmetrization_is_idempotent(n_half in 2usize..8, flux_n in 0i32..15) {
        let design = toy_design(2 * n_half);
        let flux = FluxBias(flux_n as f64 / 40.0);
        let ladder = build_ladder_matrices(&design, flux).unwrap();
        let raw = solve_modes(&ladder).unwrap();

        let mut once = raw.clone();
        symmetrize_modes(&mut once);
        let mut twice = once.clone();
        symmetrize_modes(&mut twice);

        for m in 0..raw.len() {
            prop_assert_eq!(raw.omegas[m].to_bits(), once.omegas[m].to_bits());
            for j in 0..raw.len() {
                prop_assert_eq!(
                    once.node_flux[[j, m]].to_bits(),
                    twice.node_flux[[j, m]].to_bits()
                );
            }
        }
    }

    /// The bare-to-dressed map of a coupled pair inverts exactly: going
    /// around the loop reproduces the inputs to within rounding.
    #[test]
    fn dimer_basis_change_roundtrips(
        f_mid in 2.0e9..12.0e9f64,
        delta in -0.3e9..0.3e9f64,
        j in 0.05e9..0.5e9f64,
        kappa in 10.0e6..400.0e6f64,
    ) {
        let bare = BareDimer {
            f_bright_hz: f_mid + 0.5 * delta,
            f_dark_hz: f_mid - 0.5 * delta,
            coupling_hz: j,
            kappa_hz: kappa,
        };
        let back = dimer_asymmetry(&dimer_from_bare(&bare));
        let scale = f_mid.max(kappa);
        prop_assert!((back.f_bright_hz - bare.f_bright_hz).abs() < 1e-10 * scale);
        prop_assert!((back.f_dark_hz - bare.f_dark_hz).abs() < 1e-10 * scale);
        prop_assert!((back.coupling_hz - bare.coupling_hz).abs() < 1e-10 * scale);
        prop_assert!((back.kappa_hz - bare.kappa_hz).abs() < 1e-10 * scale);
    }

    /// Relabeling the filter's state means permutes the output labels and
    /// nothing else.
    #[test]
    fn jump_labels_are_permutation_covariant(
        seed in any::<u64>(),
        swap in any::<bool>(),
    ) {
        let data = jjal_core::synth::telegraph(seed, &[0.0, 6.0], 2.0e-4, 1.0e-6, 2_000, 1.0);
        let means = if swap { [6.0, 0.0] } else { [0.0, 6.0] };
        let base = filter_jumps(&data.value, &[0.0, 6.0], 1.0).unwrap();
        let perm = filter_jumps(&data.value, &means, 1.0).unwrap();
        for (a, b) in base.labels.iter().zip(&perm.labels) {
            let expect = if swap { 1 - *a } else { *a };
            prop_assert_eq!(expect, *b);
        }
        prop_assert_eq!(base.events.len(), perm.events.len());
    }

    /// Tables survive the trip to disk and back with every bit intact.
    #[test]
    fn csv_float_roundtrip_is_lossless(
        case in any::<u64>(),
        rows in prop::collection::vec((any::<f64>(), any::<f64>()), 1..40),
    ) {
        let finite: Vec<(f64, f64)> = rows
            .into_iter()
            .map(|(a, b)| {
                (
                    if a.is_finite() { a } else { 0.0 },
                    if b.is_finite() { b } else { 0.0 },
                )
            })
            .collect();
        let (bias, freq): (Vec<f64>, Vec<f64>) = finite.into_iter().unzip();
        let path = scratch("fluxmap", case);
        io::write_flux_map(&path, &bias, &freq).unwrap();
        let (bias_back, freq_back) = io::read_flux_map(&path).unwrap();
        let _ = std::fs::remove_file(&path);
        prop_assert_eq!(bias.len(), bias_back.len());
        for i in 0..bias.len() {
            prop_assert_eq!(bias[i].to_bits(), bias_back[i].to_bits());
            prop_assert_eq!(freq[i].to_bits(), freq_back[i].to_bits());
        }
    }
}
