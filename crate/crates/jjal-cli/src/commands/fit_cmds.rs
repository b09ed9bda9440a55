//! Fit commands over measured records: flux maps, dimer reflection,
//! gain profiles and noise visibility.

use serde_json::json;

use jjal_core::fit::dimer::{dimer_asymmetry, dimer_reflection_model, DressedDimer};
use jjal_core::fit::flux::flux_modulation_model;
use jjal_core::fit::gain::gain_model_db;
use jjal_core::fit::noise::noise_visibility;
use jjal_core::io;

use super::{fit_stats, num, RunContext};
use crate::args::{InputArgs, NoiseVisArgs};
use crate::error::CliError;

/// Fits the flux-modulation curve and writes the model evaluated on the
/// measured bias grid next to the parameters.
pub fn fit_fluxmap(ctx: &mut RunContext, args: &InputArgs) -> Result<(), CliError> {
    ctx.stamp(&args.input)?;
    let (bias_a, freq_hz) = io::read_flux_map(&args.input)?;
    let (params, fit) = jjal_core::fit::flux::fit_flux_map(&bias_a, &freq_hz)?;

    let model_hz: Vec<f64> = bias_a.iter().map(|&b| flux_modulation_model(&params, b)).collect();
    ctx.emit(
        "fluxmap_fit",
        "bias_current_a,freq_hz",
        || bias_a.iter().zip(&model_hz).map(|(&b, &f)| vec![b, f]).collect(),
        |p| io::write_flux_map(p, &bias_a, &model_hz),
    )?;

    println!(
        "f_max = {:.4} GHz, gamma_L = {:.3}, lever arm = {:.4e} Phi0/A",
        params.f_max_hz / 1e9,
        params.gamma_l,
        params.lever_arm_per_a
    );
    for w in &fit.warnings {
        println!("warning: {w}");
    }

    ctx.finish(
        "fit_fluxmap",
        json!({
            "f_max_hz": params.f_max_hz,
            "gamma_l": params.gamma_l,
            "lever_arm_per_a": params.lever_arm_per_a,
            "current_offset_a": params.current_offset_a,
            "fit": fit_stats(&fit),
        }),
    )
}

/// Fits the two-mode reflection model and reports the bare-basis
/// decomposition (detuning, coupling) alongside the dressed parameters.
pub fn fit_dimer(ctx: &mut RunContext, args: &InputArgs) -> Result<(), CliError> {
    ctx.stamp(&args.input)?;
    let trace = io::read_complex_trace(&args.input)?;
    let (params, fit) = jjal_core::fit::dimer::fit_dimer_reflection(&trace)?;

    let model: Vec<jjal_core::C64> =
        trace.freq_hz.iter().map(|&f| dimer_reflection_model(&params, f)).collect();
    let model_trace = jjal_core::ComplexTrace::new(trace.freq_hz.clone(), model)
        .expect("grid already validated");
    ctx.emit(
        "dimer_fit",
        "freq_hz,re,im",
        || {
            model_trace
                .freq_hz
                .iter()
                .zip(&model_trace.values)
                .map(|(&f, v)| vec![f, v.re, v.im])
                .collect()
        },
        |p| io::write_complex_trace(p, &model_trace),
    )?;

    let dressed = DressedDimer::from(&params);
    let bare = dimer_asymmetry(&dressed);
    let split_hz = params.f_plus_hz - params.f_minus_hz;
    println!(
        "f- = {:.4} GHz (kappa {:.1} MHz), f+ = {:.4} GHz (kappa {:.1} MHz)",
        params.f_minus_hz / 1e9,
        params.kappa_minus_hz / 1e6,
        params.f_plus_hz / 1e9,
        params.kappa_plus_hz / 1e6
    );
    println!(
        "splitting 2J' = {:.1} MHz, bare detuning {:.1} MHz, J = {:.1} MHz",
        split_hz / 1e6,
        (bare.f_bright_hz - bare.f_dark_hz).abs() / 1e6,
        bare.coupling_hz / 1e6
    );
    for w in &fit.warnings {
        println!("warning: {w}");
    }

    ctx.finish(
        "fit_dimer",
        json!({
            "f_minus_hz": params.f_minus_hz,
            "f_plus_hz": params.f_plus_hz,
            "kappa_minus_hz": params.kappa_minus_hz,
            "kappa_plus_hz": params.kappa_plus_hz,
            "gamma_minus_hz": params.gamma_minus_hz,
            "gamma_plus_hz": params.gamma_plus_hz,
            "phase_offset_rad": params.phase_offset_rad,
            "splitting_hz": split_hz,
            "bare_detuning_hz": (bare.f_bright_hz - bare.f_dark_hz).abs(),
            "coupling_hz": bare.coupling_hz,
            "fit": fit_stats(&fit),
        }),
    )
}

/// Fits every gain lobe in the record and reports the gain-bandwidth
/// product of each.
pub fn fit_gain(ctx: &mut RunContext, args: &InputArgs) -> Result<(), CliError> {
    ctx.stamp(&args.input)?;
    let (freq_hz, gain_db) = io::read_gain_profile(&args.input)?;
    let (lobes, fit) = jjal_core::fit::gain::fit_gain_profile(&freq_hz, &gain_db)?;

    let model_db: Vec<f64> = freq_hz.iter().map(|&f| gain_model_db(&lobes, f)).collect();
    ctx.emit(
        "gain_fit",
        "freq_hz,gain_db",
        || freq_hz.iter().zip(&model_db).map(|(&f, &g)| vec![f, g]).collect(),
        |p| io::write_gain_profile(p, &freq_hz, &model_db),
    )?;

    for (i, lobe) in lobes.iter().enumerate() {
        println!(
            "lobe {i}: {:.4} GHz, {:.1} dB, width {:.2} MHz, sqrt(G)B = {:.1} MHz",
            lobe.center_hz / 1e9,
            lobe.peak_gain_db,
            lobe.width_hz / 1e6,
            lobe.gain_bandwidth_hz / 1e6
        );
    }
    for w in &fit.warnings {
        println!("warning: {w}");
    }

    ctx.finish(
        "fit_gain",
        json!({
            "lobes": lobes.iter().map(|l| json!({
                "center_hz": l.center_hz,
                "peak_gain_db": l.peak_gain_db,
                "width_hz": l.width_hz,
                "gain_bandwidth_hz": l.gain_bandwidth_hz,
            })).collect::<Vec<_>>(),
            "fit": fit_stats(&fit),
        }),
    )
}

/// Pointwise pump-on minus pump-off visibility of a noise spectrum pair.
pub fn noise_vis(ctx: &mut RunContext, args: &NoiseVisArgs) -> Result<(), CliError> {
    ctx.stamp(&args.on)?;
    ctx.stamp(&args.off)?;
    let (freq_on, psd_on) = io::read_psd(&args.on)?;
    let (freq_off, psd_off) = io::read_psd(&args.off)?;
    let vis = noise_visibility(&freq_on, &psd_on, &freq_off, &psd_off)?;

    ctx.emit(
        "visibility",
        "freq_hz,delta_db",
        || freq_on.iter().zip(&vis.delta_db).map(|(&f, &d)| vec![f, d]).collect(),
        |p| io::write_visibility(p, &freq_on, &vis.delta_db),
    )?;

    println!(
        "peak visibility {:.2} dB at {:.4} GHz",
        vis.max_delta_db,
        vis.f_max_hz / 1e9
    );

    ctx.finish(
        "noise_vis",
        json!({
            "max_delta_db": num(vis.max_delta_db),
            "f_max_hz": vis.f_max_hz,
            "points": vis.delta_db.len(),
        }),
    )
}
