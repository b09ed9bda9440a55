//! Readout-chain and qubit calibration verbs.
//!
//! Each verb turns one measured record or a handful of desk numbers into
//! a calibration report. The amplifier-referred efficiency in `jumps`
//! follows the conservative split eta = eta_L * eta_DJJAA: the line
//! transmission eta_L is an upper-bound bookkeeping number the operator
//! supplies (at most 0.5 for a chain whose loss budget is dominated by
//! the isolators), so the reported eta_DJJAA is a lower bound on the
//! amplifier's own efficiency.

use serde_json::json;

use jjal_core::cqed::dispersive::dispersive_shift;
use jjal_core::cqed::jumps::filter_jumps;
use jjal_core::cqed::mixture::fit_gaussian_mixture;
use jjal_core::cqed::readout::{
    efficiency_from_separation, measurement_photons, photon_flux_per_second, pointer_angle_rad,
    stark_photon_calibration, stark_photon_calibration_with_reference,
};
use jjal_core::cqed::thermal::population_temperature;
use jjal_core::cqed::transmon::solve_transmon;
use jjal_core::io;

use super::{fit_stats, num, RunContext};
use crate::args::CalibrateVerb;
use crate::error::CliError;

pub fn dispatch(ctx: &mut RunContext, verb: &CalibrateVerb) -> Result<(), CliError> {
    match verb {
        CalibrateVerb::Transmon { ej_ghz, ec_ghz, ng, levels } => {
            transmon(ctx, *ej_ghz, *ec_ghz, *ng, *levels)
        }
        CalibrateVerb::Chi { ej_ghz, ec_ghz, ng, fr_ghz, g_mhz, levels, fock, kappa_mhz } => {
            chi(ctx, *ej_ghz, *ec_ghz, *ng, *fr_ghz, *g_mhz, *levels, *fock, *kappa_mhz)
        }
        CalibrateVerb::Nmeas { nbar, kappa_mhz, gamma_mhz, tm_ns } => {
            nmeas(ctx, *nbar, *kappa_mhz, *gamma_mhz, *tm_ns)
        }
        CalibrateVerb::Flux { power_dbm, freq_ghz } => flux(ctx, *power_dbm, *freq_ghz),
        CalibrateVerb::Stark { input, chi_khz, f_r0_ghz } => {
            stark(ctx, input, *chi_khz, *f_r0_ghz)
        }
        CalibrateVerb::Ramsey { input, double } => ramsey(ctx, input, *double),
        CalibrateVerb::Jumps { input, means, band, eta_line } => {
            jumps(ctx, input, means, *band, *eta_line)
        }
        CalibrateVerb::Temp { input } => temp(ctx, input),
    }
}

fn transmon(
    ctx: &mut RunContext,
    ej_ghz: f64,
    ec_ghz: f64,
    ng: f64,
    levels: usize,
) -> Result<(), CliError> {
    let spectrum = solve_transmon(ej_ghz, ec_ghz, ng, levels)?;
    let ground = spectrum.levels_ghz[0];
    let energies: Vec<f64> = spectrum.levels_ghz.iter().map(|e| e - ground).collect();

    ctx.emit(
        "levels",
        "level,energy_ghz",
        || energies.iter().enumerate().map(|(k, &e)| vec![k as f64, e]).collect(),
        |p| io::write_level_table(p, &energies),
    )?;

    let f_ge = energies.get(1).copied().unwrap_or(0.0);
    let alpha = if energies.len() >= 3 { energies[2] - 2.0 * energies[1] } else { 0.0 };
    println!("f_ge = {:.4} GHz, anharmonicity = {:.4} GHz", f_ge, alpha);

    ctx.finish(
        "calibrate_transmon",
        json!({
            "ej_ghz": ej_ghz,
            "ec_ghz": ec_ghz,
            "ng": ng,
            "levels_ghz": energies,
            "f_ge_ghz": f_ge,
            "anharmonicity_ghz": alpha,
            "charge_cutoff": spectrum.n_cut,
        }),
    )
}

#[allow(clippy::too_many_arguments)]
fn chi(
    ctx: &mut RunContext,
    ej_ghz: f64,
    ec_ghz: f64,
    ng: f64,
    fr_ghz: f64,
    g_mhz: f64,
    levels: usize,
    fock: usize,
    kappa_mhz: Option<f64>,
) -> Result<(), CliError> {
    let shift = dispersive_shift(ej_ghz, ec_ghz, ng, fr_ghz, g_mhz / 1e3, levels, fock)?;
    println!(
        "chi/2pi = {:.1} kHz (perturbative {:.1} kHz), f_ge = {:.4} GHz, alpha = {:.4} GHz",
        shift.chi_hz / 1e3,
        shift.chi_perturbative_hz / 1e3,
        shift.f_ge_ghz,
        shift.anharmonicity_ghz
    );

    let mut payload = json!({
        "chi_hz": shift.chi_hz,
        "chi_perturbative_hz": shift.chi_perturbative_hz,
        "f_ge_ghz": shift.f_ge_ghz,
        "anharmonicity_ghz": shift.anharmonicity_ghz,
    });
    if let Some(kappa) = kappa_mhz {
        let angle = pointer_angle_rad(shift.chi_hz, kappa * 1e6)?;
        println!("pointer angle = {:.1} deg at kappa/2pi = {kappa} MHz", angle.to_degrees());
        payload["pointer_angle_deg"] = json!(angle.to_degrees());
        payload["kappa_mhz"] = json!(kappa);
    }
    ctx.finish("calibrate_chi", payload)
}

fn nmeas(
    ctx: &mut RunContext,
    nbar: f64,
    kappa_mhz: f64,
    gamma_mhz: f64,
    tm_ns: f64,
) -> Result<(), CliError> {
    let n = measurement_photons(nbar, kappa_mhz * 1e6, gamma_mhz * 1e6, tm_ns * 1e-9)?;
    println!("n_meas = {:.2} photons", n);
    ctx.finish(
        "calibrate_nmeas",
        json!({
            "nbar": nbar,
            "kappa_mhz": kappa_mhz,
            "gamma_mhz": gamma_mhz,
            "tm_ns": tm_ns,
            "n_meas": n,
        }),
    )
}

fn flux(ctx: &mut RunContext, power_dbm: f64, freq_ghz: f64) -> Result<(), CliError> {
    let per_s = photon_flux_per_second(power_dbm, freq_ghz * 1e9)?;
    println!("photon flux = {:.1} per microsecond", per_s / 1e6);
    ctx.finish(
        "calibrate_flux",
        json!({
            "power_dbm": power_dbm,
            "freq_ghz": freq_ghz,
            "photons_per_second": per_s,
            "photons_per_microsecond": per_s / 1e6,
        }),
    )
}

fn stark(
    ctx: &mut RunContext,
    input: &std::path::Path,
    chi_khz: f64,
    f_r0_ghz: Option<f64>,
) -> Result<(), CliError> {
    ctx.stamp(input)?;
    let (amp2, f_r_hz) = io::read_stark(input)?;
    let chi_hz = chi_khz * 1e3;
    let cal = match f_r0_ghz {
        Some(f0) => stark_photon_calibration_with_reference(&amp2, &f_r_hz, chi_hz, f0 * 1e9)?,
        None => stark_photon_calibration(&amp2, &f_r_hz, chi_hz)?,
    };

    let n_photons: Vec<f64> =
        f_r_hz.iter().map(|&f| (f - cal.f_r0_hz).abs() / chi_hz).collect();
    ctx.emit(
        "stark_photons",
        "amp2,n_photons",
        || amp2.iter().zip(&n_photons).map(|(&a, &n)| vec![a, n]).collect(),
        |p| io::write_stark_photons(p, &amp2, &n_photons),
    )?;

    println!(
        "{:.3} photons per drive-power unit, R^2 = {:.4}{}",
        cal.photons_per_unit,
        cal.r_squared,
        if cal.linear { "" } else { " (nonlinear record, calibration unreliable)" }
    );

    ctx.finish(
        "calibrate_stark",
        json!({
            "chi_khz": chi_khz,
            "photons_per_unit": cal.photons_per_unit,
            "r_squared": cal.r_squared,
            "f_r0_hz": cal.f_r0_hz,
            "linear": cal.linear,
        }),
    )
}

fn ramsey(ctx: &mut RunContext, input: &std::path::Path, double: bool) -> Result<(), CliError> {
    ctx.stamp(input)?;
    let (delay_s, signal) = io::read_ramsey(input)?;
    let (model, fit) = if double {
        jjal_core::cqed::ramsey::fit_ramsey_double(&delay_s, &signal)?
    } else {
        jjal_core::cqed::ramsey::fit_ramsey(&delay_s, &signal)?
    };

    let model_signal: Vec<f64> = delay_s.iter().map(|&t| model.eval(t)).collect();
    ctx.emit(
        "ramsey_fit",
        "delay_s,signal",
        || delay_s.iter().zip(&model_signal).map(|(&t, &s)| vec![t, s]).collect(),
        |p| io::write_ramsey(p, &delay_s, &model_signal),
    )?;

    println!("T2* = {:.2} us", model.t2_s * 1e6);
    for (i, tone) in model.tones.iter().enumerate() {
        println!(
            "tone {i}: {:.4} MHz, amplitude {:.3}",
            tone.freq_hz / 1e6,
            tone.amplitude
        );
    }
    for w in &fit.warnings {
        println!("warning: {w}");
    }

    ctx.finish(
        "calibrate_ramsey",
        json!({
            "t2_s": model.t2_s,
            "offset": model.offset,
            "tones": model.tones.iter().map(|t| json!({
                "freq_hz": t.freq_hz,
                "amplitude": t.amplitude,
                "phase_rad": t.phase_rad,
            })).collect::<Vec<_>>(),
            "fit": fit_stats(&fit),
        }),
    )
}

fn jumps(
    ctx: &mut RunContext,
    input: &std::path::Path,
    means: &[f64],
    band: f64,
    eta_line: Option<f64>,
) -> Result<(), CliError> {
    ctx.stamp(input)?;
    let (t_s, q) = io::read_jumps(input)?;
    let trace = filter_jumps(&q, means, band)?;
    let dwell = trace.dwell_counts(means.len());

    ctx.emit(
        "state_labels",
        "t_s,state_index",
        || t_s.iter().zip(&trace.labels).map(|(&t, &l)| vec![t, l as f64]).collect(),
        |p| io::write_state_labels(p, &t_s, &trace.labels),
    )?;

    // blob geometry from the histogram itself, not the supplied means
    let mixture = fit_gaussian_mixture(&q, means.len())?;
    let separation = mixture
        .means
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let eta = if separation.is_finite() && separation > 0.0 {
        Some(efficiency_from_separation(mixture.sigma / separation)?)
    } else {
        None
    };

    println!(
        "{} jumps over {} samples, dwell counts {:?}",
        trace.events.len(),
        q.len(),
        dwell
    );
    if let Some(eta) = eta {
        println!("measurement efficiency eta = {:.3}", eta);
    }

    let mut payload = json!({
        "n_samples": q.len(),
        "n_events": trace.events.len(),
        "dwell_counts": dwell,
        "mixture": {
            "weights": mixture.weights,
            "means": mixture.means,
            "sigma": mixture.sigma,
            "converged": mixture.converged,
        },
        "eta": eta.map(num),
    });
    if let Some(eta_l) = eta_line {
        if !(eta_l > 0.0 && eta_l <= 0.5) {
            return Err(CliError::BadFlag(format!(
                "--eta-line must be in (0, 0.5], got {eta_l}"
            )));
        }
        let eta_djjaa = eta.map(|e| e / eta_l);
        if let Some(e) = eta_djjaa {
            println!("eta_DJJAA >= {:.3} at eta_L = {}", e, eta_l);
        }
        payload["eta_line"] = json!(eta_l);
        payload["eta_djjaa"] = json!(eta_djjaa.map(num));
    }
    ctx.finish("calibrate_jumps", payload)
}

fn temp(ctx: &mut RunContext, input: &std::path::Path) -> Result<(), CliError> {
    ctx.stamp(input)?;
    let doc = io::read_populations(input)?;
    let t_k = population_temperature(&doc.transition_hz, &doc.counts)?;
    println!("effective temperature = {:.1} mK", t_k * 1e3);
    ctx.finish(
        "calibrate_temp",
        json!({
            "transition_hz": doc.transition_hz,
            "counts": doc.counts,
            "temperature_k": t_k,
            "temperature_mk": t_k * 1e3,
        }),
    )
}
