//! Design-driven commands: eigenmode dispersion, Kerr tables and the
//! one-port reflection sweep.

use std::path::Path;

use serde_json::json;

use jjal_core::io::{self, DimerSummaryRow, DispersionRow, KerrRow};
use jjal_core::par::par_map_indexed;
use jjal_core::{
    build_ladder_matrices, kerr_tensor, plasma_frequency, s11_sweep, scan_resonances,
    solve_modes, squid_inductance, symmetrize_modes, FluxBias,
};

use super::{num, RunContext};
use crate::args::{DispersionArgs, KerrArgs, S11Args};
use crate::error::CliError;

fn check_retained(retained: usize, n_modes: usize) -> Result<(), CliError> {
    if retained == 0 || retained > n_modes {
        return Err(CliError::BadFlag(format!(
            "--retained must be in 1..={n_modes} for this design, got {retained}"
        )));
    }
    Ok(())
}

/// Solves the ladder at each flux point and tabulates the retained mode
/// frequencies plus the dimer pairing at the first point.
pub fn dispersion(
    ctx: &mut RunContext,
    args: &DispersionArgs,
    design_path: Option<&Path>,
) -> Result<(), CliError> {
    let design = ctx.load_design(design_path)?;
    check_retained(args.retained, design.n_squids)?;

    let fluxes: Vec<f64> = if args.flux_steps <= 1 {
        vec![args.flux]
    } else {
        let to = args.flux_to.ok_or_else(|| {
            CliError::BadFlag("--flux-steps > 1 needs --flux-to".to_string())
        })?;
        let step = (to - args.flux) / (args.flux_steps - 1) as f64;
        (0..args.flux_steps).map(|i| args.flux + step * i as f64).collect()
    };

    // one eigensolve per flux point, independent across points
    let solved: Vec<Result<Vec<f64>, CliError>> = par_map_indexed(fluxes.len(), |i| {
        let ladder = build_ladder_matrices(&design, FluxBias(fluxes[i]))?;
        let mut spectrum = solve_modes(&ladder)?;
        symmetrize_modes(&mut spectrum);
        Ok(spectrum.frequencies_hz().into_iter().take(args.retained).collect())
    });
    let mut freqs_per_flux = Vec::with_capacity(fluxes.len());
    for r in solved {
        freqs_per_flux.push(r?);
    }

    let mut rows = Vec::with_capacity(fluxes.len() * args.retained);
    for (flux, freqs) in fluxes.iter().zip(&freqs_per_flux) {
        for (m, &f_hz) in freqs.iter().enumerate() {
            rows.push(DispersionRow { flux_phi0: *flux, mode_index: m, freq_ghz: f_hz / 1e9 });
        }
    }
    ctx.emit(
        "dispersion",
        "flux_phi0,mode_index,freq_ghz",
        || rows.iter().map(|r| vec![r.flux_phi0, r.mode_index as f64, r.freq_ghz]).collect(),
        |p| io::write_dispersion_table(p, &rows),
    )?;

    // dimer summary at the first flux point
    let first = &freqs_per_flux[0];
    let dimers: Vec<DimerSummaryRow> = (0..first.len() / 2)
        .map(|p| DimerSummaryRow {
            dimer_index: p,
            f_minus_ghz: first[2 * p] / 1e9,
            f_plus_ghz: first[2 * p + 1] / 1e9,
            two_j_mhz: (first[2 * p + 1] - first[2 * p]) / 1e6,
        })
        .collect();
    ctx.emit(
        "dimers",
        "dimer_index,f_minus_ghz,f_plus_ghz,two_j_mhz",
        || {
            dimers
                .iter()
                .map(|d| vec![d.dimer_index as f64, d.f_minus_ghz, d.f_plus_ghz, d.two_j_mhz])
                .collect()
        },
        |p| io::write_dimer_summary(p, &dimers),
    )?;

    for d in &dimers {
        println!(
            "dimer {}: {:.3} / {:.3} GHz, 2J = {:.1} MHz",
            d.dimer_index, d.f_minus_ghz, d.f_plus_ghz, d.two_j_mhz
        );
    }

    let l_j = squid_inductance(design.junction_inductance(), FluxBias(fluxes[0]))?;
    ctx.finish(
        "dispersion",
        json!({
            "n_squids": design.n_squids,
            "retained": args.retained,
            "flux_phi0": fluxes,
            "plasma_frequency_ghz": plasma_frequency(l_j, design.josephson_capacitance) / 1e9,
            "dimers": dimers.iter().map(|d| json!({
                "dimer_index": d.dimer_index,
                "f_minus_ghz": d.f_minus_ghz,
                "f_plus_ghz": d.f_plus_ghz,
                "two_j_mhz": d.two_j_mhz,
            })).collect::<Vec<_>>(),
        }),
    )
}

/// Tabulates self-Kerr and nearest-neighbor cross-Kerr coefficients of the
/// retained modes.
pub fn kerr(ctx: &mut RunContext, args: &KerrArgs, design_path: Option<&Path>) -> Result<(), CliError> {
    let design = ctx.load_design(design_path)?;
    check_retained(args.retained, design.n_squids)?;

    let ladder = build_ladder_matrices(&design, FluxBias(args.flux))?;
    let mut spectrum = solve_modes(&ladder)?;
    symmetrize_modes(&mut spectrum);
    let tensor = kerr_tensor(&design, &spectrum, args.retained)?;

    let mut rows = Vec::with_capacity(2 * args.retained);
    for m in 0..args.retained {
        rows.push(KerrRow {
            mode_m: m,
            mode_k: m,
            eta: tensor.eta[[m, m]],
            k_mk_khz: tensor.self_kerr_hz[m] / 1e3,
        });
    }
    for m in 0..args.retained.saturating_sub(1) {
        rows.push(KerrRow {
            mode_m: m,
            mode_k: m + 1,
            eta: tensor.eta[[m, m + 1]],
            k_mk_khz: tensor.cross_kerr_hz[[m, m + 1]] / 1e3,
        });
    }
    ctx.emit(
        "kerr",
        "mode_m,mode_k,eta,k_mk_khz,diagonal",
        || {
            rows.iter()
                .map(|r| {
                    vec![
                        r.mode_m as f64,
                        r.mode_k as f64,
                        r.eta,
                        r.k_mk_khz,
                        f64::from(u8::from(r.mode_m == r.mode_k)),
                    ]
                })
                .collect()
        },
        |p| io::write_kerr_table(p, &rows),
    )?;

    for m in 0..args.retained {
        println!(
            "mode {m}: {:.3} GHz, K/2pi = {:.1} kHz",
            spectrum.frequency_hz(m) / 1e9,
            tensor.self_kerr_hz[m] / 1e3
        );
    }

    ctx.finish(
        "kerr",
        json!({
            "retained": args.retained,
            "flux_phi0": args.flux,
            "freq_ghz": (0..args.retained).map(|m| spectrum.frequency_hz(m) / 1e9).collect::<Vec<_>>(),
            "self_kerr_khz": tensor.self_kerr_hz.iter().take(args.retained).map(|k| k / 1e3).collect::<Vec<_>>(),
        }),
    )
}

/// Sweeps the one-port reflection and optionally extracts every resonance
/// in the band.
pub fn s11(ctx: &mut RunContext, args: &S11Args, design_path: Option<&Path>) -> Result<(), CliError> {
    let design = ctx.load_design(design_path)?;
    if !(args.f_hi_ghz > args.f_lo_ghz) || !(args.step_mhz > 0.0) {
        return Err(CliError::BadFlag(format!(
            "need --f-hi-ghz > --f-lo-ghz and --step-mhz > 0, got [{}, {}] at {}",
            args.f_lo_ghz, args.f_hi_ghz, args.step_mhz
        )));
    }
    let f_lo = args.f_lo_ghz * 1e9;
    let f_hi = args.f_hi_ghz * 1e9;
    let grid = jjal_core::scattering::linear_grid(f_lo, f_hi, args.step_mhz * 1e6);
    let trace = s11_sweep(&design, FluxBias(args.flux), &grid)?;

    ctx.emit(
        "trace",
        "freq_hz,re,im",
        || {
            trace
                .freq_hz
                .iter()
                .zip(&trace.values)
                .map(|(&f, v)| vec![f, v.re, v.im])
                .collect()
        },
        |p| io::write_complex_trace(p, &trace),
    )?;

    let mut payload = json!({
        "flux_phi0": args.flux,
        "band_ghz": [args.f_lo_ghz, args.f_hi_ghz],
        "points": trace.freq_hz.len(),
    });
    if args.scan {
        let found = scan_resonances(&design, FluxBias(args.flux), f_lo, f_hi)?;
        let f0_ghz: Vec<f64> = found.iter().map(|r| r.f0_hz / 1e9).collect();
        let kappa_mhz: Vec<f64> = found.iter().map(|r| r.kappa_hz / 1e6).collect();
        ctx.emit(
            "resonances",
            "f0_ghz,kappa_mhz",
            || f0_ghz.iter().zip(&kappa_mhz).map(|(&f, &k)| vec![f, k]).collect(),
            |p| io::write_resonance_summary(p, &f0_ghz, &kappa_mhz),
        )?;
        for r in &found {
            println!(
                "resonance at {:.4} GHz, kappa/2pi = {:.2} MHz",
                r.f0_hz / 1e9,
                r.kappa_hz / 1e6
            );
        }
        payload["resonances"] = json!(found
            .iter()
            .map(|r| json!({
                "f0_ghz": r.f0_hz / 1e9,
                "kappa_mhz": r.kappa_hz / 1e6,
                "phase_excursion_rad": num(r.phase_excursion_rad),
                "refined": r.refined,
            }))
            .collect::<Vec<_>>());
    }
    ctx.finish("s11", payload)
}
