//! Seeded synthetic-record generators.
//!
//! Every generator writes the same schema its fitting counterpart reads,
//! so `synth X | fit X` pipelines roundtrip, and records the ground-truth
//! parameters in the result document for auditing. The global `--seed`
//! drives all randomness; identical invocations are byte-identical.

use serde_json::json;

use jjal_core::cqed::ramsey::RamseyTone;
use jjal_core::cqed::readout::assignment_fidelity;
use jjal_core::fit::dimer::DimerFitParams;
use jjal_core::fit::flux::FluxFitParams;
use jjal_core::io;
use jjal_core::scattering::linear_grid;
use jjal_core::synth;

use super::RunContext;
use crate::args::SynthGenerator;
use crate::error::CliError;

fn require(ok: bool, message: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::BadFlag(message.to_string()))
    }
}

pub fn dispatch(ctx: &mut RunContext, generator: &SynthGenerator) -> Result<(), CliError> {
    match generator {
        SynthGenerator::FluxMap {
            f_max_ghz,
            gamma_l,
            lever_per_a,
            offset_a,
            bias_lo_a,
            bias_hi_a,
            points,
            noise_mhz,
        } => {
            require(*points >= 2, "--points must be at least 2")?;
            require(bias_hi_a > bias_lo_a, "--bias-hi-a must exceed --bias-lo-a")?;
            require(*noise_mhz >= 0.0, "--noise-mhz must be non-negative")?;
            require(*gamma_l > 0.0 && *gamma_l <= 1.0, "--gamma-l must be in (0, 1]")?;
            let truth = FluxFitParams {
                f_max_hz: f_max_ghz * 1e9,
                gamma_l: *gamma_l,
                lever_arm_per_a: *lever_per_a,
                current_offset_a: *offset_a,
            };
            let data = synth::flux_map(
                ctx.seed,
                &truth,
                *bias_lo_a,
                *bias_hi_a,
                *points,
                noise_mhz * 1e6,
            );
            ctx.emit(
                "fluxmap",
                "bias_current_a,freq_hz",
                || data.bias_a.iter().zip(&data.freq_hz).map(|(&b, &f)| vec![b, f]).collect(),
                |p| io::write_flux_map(p, &data.bias_a, &data.freq_hz),
            )?;
            println!("{} bias points in [{}, {}] A", data.bias_a.len(), bias_lo_a, bias_hi_a);
            ctx.finish(
                "synth_fluxmap",
                json!({
                    "truth": {
                        "f_max_hz": truth.f_max_hz,
                        "gamma_l": truth.gamma_l,
                        "lever_arm_per_a": truth.lever_arm_per_a,
                        "current_offset_a": truth.current_offset_a,
                    },
                    "points": points,
                    "noise_mhz": noise_mhz,
                }),
            )
        }

        SynthGenerator::Resonance { f0_ghz, kappa_mhz, f_lo_ghz, f_hi_ghz, step_mhz, noise } => {
            require(*kappa_mhz > 0.0, "--kappa-mhz must be positive")?;
            require(f_hi_ghz > f_lo_ghz, "--f-hi-ghz must exceed --f-lo-ghz")?;
            require(*step_mhz > 0.0, "--step-mhz must be positive")?;
            require(*noise >= 0.0, "--noise must be non-negative")?;
            let grid = linear_grid(f_lo_ghz * 1e9, f_hi_ghz * 1e9, step_mhz * 1e6);
            let trace = synth::resonance_trace(ctx.seed, f0_ghz * 1e9, kappa_mhz * 1e6, &grid, *noise);
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
            println!("{} points around {:.4} GHz", trace.freq_hz.len(), f0_ghz);
            ctx.finish(
                "synth_resonance",
                json!({
                    "truth": { "f0_hz": f0_ghz * 1e9, "kappa_hz": kappa_mhz * 1e6 },
                    "points": trace.freq_hz.len(),
                    "noise": noise,
                }),
            )
        }

        SynthGenerator::Dimer {
            f_minus_ghz,
            f_plus_ghz,
            kappa_minus_mhz,
            kappa_plus_mhz,
            gamma_minus_mhz,
            gamma_plus_mhz,
            phase_rad,
            f_lo_ghz,
            f_hi_ghz,
            step_mhz,
            noise,
        } => {
            require(*kappa_minus_mhz > 0.0 && *kappa_plus_mhz > 0.0, "linewidths must be positive")?;
            require(*gamma_minus_mhz >= 0.0 && *gamma_plus_mhz >= 0.0, "losses must be non-negative")?;
            require(f_hi_ghz > f_lo_ghz, "--f-hi-ghz must exceed --f-lo-ghz")?;
            require(*step_mhz > 0.0, "--step-mhz must be positive")?;
            require(*noise >= 0.0, "--noise must be non-negative")?;
            let truth = DimerFitParams {
                f_plus_hz: f_plus_ghz * 1e9,
                f_minus_hz: f_minus_ghz * 1e9,
                kappa_plus_hz: kappa_plus_mhz * 1e6,
                kappa_minus_hz: kappa_minus_mhz * 1e6,
                gamma_plus_hz: gamma_plus_mhz * 1e6,
                gamma_minus_hz: gamma_minus_mhz * 1e6,
                phase_offset_rad: *phase_rad,
            };
            let grid = linear_grid(f_lo_ghz * 1e9, f_hi_ghz * 1e9, step_mhz * 1e6);
            let trace = synth::dimer_trace(ctx.seed, &truth, &grid, *noise);
            ctx.emit(
                "dimer",
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
            println!(
                "dimer at {:.4} / {:.4} GHz over {} points",
                f_minus_ghz,
                f_plus_ghz,
                trace.freq_hz.len()
            );
            ctx.finish(
                "synth_dimer",
                json!({
                    "truth": {
                        "f_minus_hz": truth.f_minus_hz,
                        "f_plus_hz": truth.f_plus_hz,
                        "kappa_minus_hz": truth.kappa_minus_hz,
                        "kappa_plus_hz": truth.kappa_plus_hz,
                        "gamma_minus_hz": truth.gamma_minus_hz,
                        "gamma_plus_hz": truth.gamma_plus_hz,
                        "phase_offset_rad": truth.phase_offset_rad,
                    },
                    "points": trace.freq_hz.len(),
                    "noise": noise,
                }),
            )
        }

        SynthGenerator::Gain { center_ghz, gain_db, width_mhz, span_widths, points, noise_db } => {
            require(*width_mhz > 0.0, "--width-mhz must be positive")?;
            require(*span_widths > 0.0, "--span-widths must be positive")?;
            require(*points >= 8, "--points must be at least 8")?;
            require(*noise_db >= 0.0, "--noise-db must be non-negative")?;
            let center = center_ghz * 1e9;
            let width = width_mhz * 1e6;
            let half_span = span_widths * width;
            let step = 2.0 * half_span / (*points - 1) as f64;
            let grid: Vec<f64> =
                (0..*points).map(|k| center - half_span + step * k as f64).collect();
            let data = synth::gain_profile(ctx.seed, &[(center, *gain_db, width)], &grid, *noise_db);
            ctx.emit(
                "gain",
                "freq_hz,gain_db",
                || data.freq_hz.iter().zip(&data.gain_db).map(|(&f, &g)| vec![f, g]).collect(),
                |p| io::write_gain_profile(p, &data.freq_hz, &data.gain_db),
            )?;
            println!("{:.1} dB lobe, width {:.2} MHz, {} points", gain_db, width_mhz, points);
            ctx.finish(
                "synth_gain",
                json!({
                    "truth": { "center_hz": center, "peak_gain_db": gain_db, "width_hz": width },
                    "points": points,
                    "noise_db": noise_db,
                }),
            )
        }

        SynthGenerator::GainFamily { center_ghz, product_mhz, gains_db, points, noise_db } => {
            require(*product_mhz > 0.0, "--product-mhz must be positive")?;
            require(*points >= 8, "--points must be at least 8")?;
            require(!gains_db.is_empty(), "--gains-db must list at least one gain")?;
            require(*noise_db >= 0.0, "--noise-db must be non-negative")?;
            let family = synth::gain_family(
                ctx.seed,
                center_ghz * 1e9,
                product_mhz * 1e6,
                gains_db,
                *points,
                *noise_db,
            );
            for (i, member) in family.iter().enumerate() {
                ctx.emit(
                    &format!("gain_member_{i}"),
                    "freq_hz,gain_db",
                    || {
                        member
                            .freq_hz
                            .iter()
                            .zip(&member.gain_db)
                            .map(|(&f, &g)| vec![f, g])
                            .collect()
                    },
                    |p| io::write_gain_profile(p, &member.freq_hz, &member.gain_db),
                )?;
            }
            println!(
                "{} members sharing sqrt(G)B = {:.1} MHz",
                family.len(),
                product_mhz
            );
            ctx.finish(
                "synth_gain_family",
                json!({
                    "truth": { "center_hz": center_ghz * 1e9, "product_hz": product_mhz * 1e6 },
                    "gains_db": gains_db,
                    "points": points,
                    "noise_db": noise_db,
                }),
            )
        }

        SynthGenerator::Ramsey {
            t2_us,
            freq_mhz,
            amplitude,
            freq2_mhz,
            amplitude2,
            offset,
            dt_ns,
            points,
            noise,
        } => {
            require(*t2_us > 0.0, "--t2-us must be positive")?;
            require(*dt_ns > 0.0, "--dt-ns must be positive")?;
            require(*points >= 2, "--points must be at least 2")?;
            require(*noise >= 0.0, "--noise must be non-negative")?;
            let mut tones =
                vec![RamseyTone { amplitude: *amplitude, freq_hz: freq_mhz * 1e6, phase_rad: 0.0 }];
            if let Some(f2) = freq2_mhz {
                tones.push(RamseyTone {
                    amplitude: *amplitude2,
                    freq_hz: f2 * 1e6,
                    phase_rad: 0.0,
                });
            }
            let data = synth::ramsey(
                ctx.seed,
                t2_us * 1e-6,
                &tones,
                *offset,
                dt_ns * 1e-9,
                *points,
                *noise,
            );
            ctx.emit(
                "ramsey",
                "delay_s,signal",
                || data.delay_s.iter().zip(&data.signal).map(|(&t, &s)| vec![t, s]).collect(),
                |p| io::write_ramsey(p, &data.delay_s, &data.signal),
            )?;
            println!("{} samples, T2* = {} us", data.delay_s.len(), t2_us);
            ctx.finish(
                "synth_ramsey",
                json!({
                    "truth": {
                        "t2_s": t2_us * 1e-6,
                        "offset": offset,
                        "tones": tones.iter().map(|t| json!({
                            "freq_hz": t.freq_hz,
                            "amplitude": t.amplitude,
                            "phase_rad": t.phase_rad,
                        })).collect::<Vec<_>>(),
                    },
                    "points": points,
                    "noise": noise,
                }),
            )
        }

        SynthGenerator::Telegraph { means, dwell_us, dt_us, points, sigma } => {
            require(means.len() >= 2, "--means must list at least two states")?;
            require(*dwell_us > 0.0, "--dwell-us must be positive")?;
            require(*dt_us > 0.0, "--dt-us must be positive")?;
            require(*points >= 2, "--points must be at least 2")?;
            require(*sigma >= 0.0, "--sigma must be non-negative")?;
            let data =
                synth::telegraph(ctx.seed, means, dwell_us * 1e-6, dt_us * 1e-6, *points, *sigma);
            ctx.emit(
                "jumps",
                "t_s,q",
                || data.t_s.iter().zip(&data.value).map(|(&t, &v)| vec![t, v]).collect(),
                |p| io::write_jumps(p, &data.t_s, &data.value),
            )?;
            ctx.emit(
                "telegraph_truth",
                "t_s,state_index",
                || {
                    data.t_s
                        .iter()
                        .zip(&data.true_state)
                        .map(|(&t, &s)| vec![t, s as f64])
                        .collect()
                },
                |p| io::write_state_labels(p, &data.t_s, &data.true_state),
            )?;
            let n_jumps = data.true_state.windows(2).filter(|w| w[0] != w[1]).count();
            println!("{} samples, {} true state changes", data.t_s.len(), n_jumps);
            ctx.finish(
                "synth_telegraph",
                json!({
                    "truth": { "means": means, "dwell_s": dwell_us * 1e-6, "sigma": sigma },
                    "points": points,
                    "true_state_changes": n_jumps,
                }),
            )
        }

        SynthGenerator::Blobs { fidelity, sigma, separation, shots } => {
            require(*sigma > 0.0, "--sigma must be positive")?;
            require(*shots >= 1, "--shots must be at least 1")?;
            let sep = match separation {
                Some(d) => {
                    require(*d > 0.0, "--separation must be positive")?;
                    *d
                }
                None => {
                    require(
                        *fidelity > 0.0 && *fidelity < 1.0,
                        "--fidelity must be strictly between 0 and 1",
                    )?;
                    synth::separation_for_fidelity(*fidelity, *sigma)
                }
            };
            let data = synth::fidelity_blobs(ctx.seed, sep, *sigma, *shots);
            ctx.emit(
                "blobs",
                "ground_q,excited_q",
                || {
                    data.ground_q
                        .iter()
                        .zip(&data.excited_q)
                        .map(|(&g, &e)| vec![g, e])
                        .collect()
                },
                |p| io::write_blobs(p, &data.ground_q, &data.excited_q),
            )?;
            let measured = assignment_fidelity(&data.ground_q, &data.excited_q)?;
            println!(
                "separation {:.3}, measured assignment fidelity {:.4}",
                sep, measured
            );
            ctx.finish(
                "synth_blobs",
                json!({
                    "truth": { "separation": sep, "sigma": sigma },
                    "shots": shots,
                    "measured_fidelity": measured,
                }),
            )
        }

        SynthGenerator::PsdPair {
            f_lo_ghz,
            f_hi_ghz,
            step_mhz,
            floor_db,
            visibility_db,
            center_ghz,
            width_mhz,
            ripple_db,
        } => {
            require(f_hi_ghz > f_lo_ghz, "--f-hi-ghz must exceed --f-lo-ghz")?;
            require(*step_mhz > 0.0, "--step-mhz must be positive")?;
            require(*width_mhz > 0.0, "--width-mhz must be positive")?;
            require(*ripple_db >= 0.0, "--ripple-db must be non-negative")?;
            let grid = linear_grid(f_lo_ghz * 1e9, f_hi_ghz * 1e9, step_mhz * 1e6);
            let pair = synth::psd_pair(
                ctx.seed,
                &grid,
                *floor_db,
                *visibility_db,
                center_ghz * 1e9,
                width_mhz * 1e6,
                *ripple_db,
            );
            ctx.emit(
                "psd_off",
                "freq_hz,psd_db",
                || pair.freq_hz.iter().zip(&pair.off_db).map(|(&f, &p)| vec![f, p]).collect(),
                |p| io::write_psd(p, &pair.freq_hz, &pair.off_db),
            )?;
            ctx.emit(
                "psd_on",
                "freq_hz,psd_db",
                || pair.freq_hz.iter().zip(&pair.on_db).map(|(&f, &p)| vec![f, p]).collect(),
                |p| io::write_psd(p, &pair.freq_hz, &pair.on_db),
            )?;
            println!(
                "{} points, {:.1} dB bump at {:.4} GHz",
                pair.freq_hz.len(),
                visibility_db,
                center_ghz
            );
            ctx.finish(
                "synth_psd_pair",
                json!({
                    "truth": {
                        "floor_db": floor_db,
                        "visibility_db": visibility_db,
                        "center_hz": center_ghz * 1e9,
                        "width_hz": width_mhz * 1e6,
                        "ripple_db": ripple_db,
                    },
                    "points": pair.freq_hz.len(),
                }),
            )
        }
    }
}
