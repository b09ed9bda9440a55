//! Seeded generators for synthetic measurement records.
//!
//! Every fit family in this crate is exercised against records whose ground
//! truth is known exactly, so the generators here are part of the testable
//! surface rather than test scaffolding: the CLI exposes them behind a
//! `synth` verb and the acceptance suite replays them end to end. Each
//! generator takes an explicit `seed` and draws from a counter-based stream
//! cipher, so identical arguments produce bit-identical records on every
//! platform. Noise amplitudes of zero are valid and produce clean model
//! evaluations.
//!
//! Reflection traces come in both phase conventions. [`resonance_trace`]
//! follows the scattering convention (phase falls through resonance, matching
//! [`crate::s11_sweep`]), while [`dimer_trace`] follows the fit convention
//! (phase rises, matching [`crate::fit::dimer`]). Conjugate one to get the
//! other.

use num_complex::Complex64 as C64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp, Normal};

use crate::fit::dimer::{dimer_reflection_model, DimerFitParams};
use crate::fit::flux::{flux_modulation_model, FluxFitParams};
use crate::cqed::ramsey::RamseyTone;

/// Flux-modulation record: paired bias currents and resonance frequencies.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FluxMapData {
    /// Coil bias current (A).
    pub bias_a: Vec<f64>,
    /// Resonance frequency at each bias (Hz).
    pub freq_hz: Vec<f64>,
}

/// Gain record: paired frequencies and power gains.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GainProfileData {
    /// Probe frequency (Hz).
    pub freq_hz: Vec<f64>,
    /// Power gain (dB).
    pub gain_db: Vec<f64>,
}

/// Ramsey record: paired delays and demodulated signal values.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RamseyData {
    /// Free-evolution delay (s).
    pub delay_s: Vec<f64>,
    /// Demodulated signal (arbitrary units).
    pub signal: Vec<f64>,
}

/// Telegraph record: a sampled quadrature plus the hidden state sequence.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TelegraphData {
    /// Sample times (s).
    pub t_s: Vec<f64>,
    /// Noisy quadrature samples (signal units).
    pub value: Vec<f64>,
    /// Ground-truth state index per sample, for error-rate audits.
    pub true_state: Vec<usize>,
}

/// Single-shot readout record: one quadrature sample per preparation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BlobData {
    /// Shots prepared in the ground state (signal units).
    pub ground_q: Vec<f64>,
    /// Shots prepared in the excited state (signal units).
    pub excited_q: Vec<f64>,
}

/// Paired noise spectra with the amplifier off and on.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PsdPairData {
    /// Analysis frequency (Hz).
    pub freq_hz: Vec<f64>,
    /// Power spectral density, pump off (dB).
    pub off_db: Vec<f64>,
    /// Power spectral density, pump on (dB).
    pub on_db: Vec<f64>,
}

/// Inverse of the standard normal CDF.
///
/// Rational approximation with relative error below 1.2e-9 over (0, 1),
/// which is far tighter than any tolerance in this crate. Used to place
/// readout blobs at a separation that yields a prescribed assignment
/// fidelity, and wherever a test needs deterministic Gaussian quantiles.
///
/// Panics when `p` is outside (0, 1).
pub fn probit(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "probit requires 0 < p < 1, got {p}");

    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -probit(1.0 - p)
    }
}

/// Blob separation that makes a two-state midpoint discriminator hit
/// `fidelity` per shot at noise width `sigma`.
///
/// The geometry is calibrated from the fidelity it should produce, not
/// measured: with Gaussian blobs of common width separated by d, a midpoint
/// threshold assigns each shot correctly with probability Phi(d / 2 sigma),
/// so d = 2 sigma probit(fidelity).
pub fn separation_for_fidelity(fidelity: f64, sigma: f64) -> f64 {
    assert!(sigma > 0.0, "sigma must be positive");
    2.0 * sigma * probit(fidelity)
}

/// Flux-modulation map sampled on a uniform bias grid with Gaussian
/// frequency noise of width `noise_hz`.
pub fn flux_map(
    seed: u64,
    truth: &FluxFitParams,
    bias_lo_a: f64,
    bias_hi_a: f64,
    points: usize,
    noise_hz: f64,
) -> FluxMapData {
    assert!(points >= 2, "need at least two bias points");
    assert!(bias_hi_a > bias_lo_a, "bias range must be increasing");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, noise_hz).expect("noise width must be finite and non-negative");

    let step = (bias_hi_a - bias_lo_a) / (points - 1) as f64;
    let bias_a: Vec<f64> = (0..points).map(|i| bias_lo_a + step * i as f64).collect();
    let freq_hz = bias_a
        .iter()
        .map(|&b| flux_modulation_model(truth, b) + noise.sample(&mut rng))
        .collect();
    FluxMapData { bias_a, freq_hz }
}

/// Ideal over-coupled single resonance in the scattering phase convention,
/// with complex Gaussian noise of RMS `noise` per quadrature.
///
/// The clean record has |value| = 1 everywhere and a phase that falls by 2 pi
/// through resonance, exactly the profile [`crate::extract_resonances`] is
/// built to invert.
pub fn resonance_trace(
    seed: u64,
    f0_hz: f64,
    kappa_hz: f64,
    grid_hz: &[f64],
    noise: f64,
) -> crate::ComplexTrace {
    assert!(kappa_hz > 0.0, "linewidth must be positive");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, noise).expect("noise width must be finite and non-negative");

    let values = grid_hz
        .iter()
        .map(|&f| {
            let clean = crate::fit::dimer::reflection_factor(f, f0_hz, kappa_hz, 0.0).conj();
            clean + C64::new(dist.sample(&mut rng), dist.sample(&mut rng))
        })
        .collect();
    crate::ComplexTrace::new(grid_hz.to_vec(), values).expect("grid validated by caller")
}

/// Two-winding reflection record in the fit phase convention, with complex
/// Gaussian noise of RMS `noise` per quadrature.
pub fn dimer_trace(
    seed: u64,
    truth: &DimerFitParams,
    grid_hz: &[f64],
    noise: f64,
) -> crate::ComplexTrace {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, noise).expect("noise width must be finite and non-negative");

    let values = grid_hz
        .iter()
        .map(|&f| {
            dimer_reflection_model(truth, f) + C64::new(dist.sample(&mut rng), dist.sample(&mut rng))
        })
        .collect();
    crate::ComplexTrace::new(grid_hz.to_vec(), values).expect("grid validated by caller")
}

/// Sum-of-Lorentzians gain profile. Lobes are given as
/// `(center_hz, peak_gain_db, fwhm_hz)`; the clean linear-power model is
/// 1 + sum a_i / (1 + 4 (f - c_i)^2 / b_i^2) with a_i = 10^(g_i/10) - 1, and
/// `noise_db` adds Gaussian noise in dB after conversion.
pub fn gain_profile(
    seed: u64,
    lobes: &[(f64, f64, f64)],
    grid_hz: &[f64],
    noise_db: f64,
) -> GainProfileData {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, noise_db).expect("noise width must be finite and non-negative");

    let gain_db = grid_hz
        .iter()
        .map(|&f| {
            let mut lin = 1.0;
            for &(c, g_db, b) in lobes {
                assert!(b > 0.0, "lobe width must be positive");
                let a = 10f64.powf(g_db / 10.0) - 1.0;
                lin += a / (1.0 + 4.0 * (f - c).powi(2) / (b * b));
            }
            10.0 * lin.log10() + dist.sample(&mut rng)
        })
        .collect();
    GainProfileData { freq_hz: grid_hz.to_vec(), gain_db }
}

/// Family of single-lobe profiles sharing one gain-bandwidth product.
///
/// For each requested peak gain the lobe width is set to
/// `product_hz / sqrt(G_lin)`, so every member has the same
/// sqrt(G0) B product; each member gets its own grid spanning four widths
/// either side of `center_hz` and an independent noise stream.
pub fn gain_family(
    seed: u64,
    center_hz: f64,
    product_hz: f64,
    gains_db: &[f64],
    points: usize,
    noise_db: f64,
) -> Vec<GainProfileData> {
    assert!(points >= 8, "need a resolvable grid");
    assert!(product_hz > 0.0, "gain-bandwidth product must be positive");
    gains_db
        .iter()
        .enumerate()
        .map(|(i, &g_db)| {
            let g_lin = 10f64.powf(g_db / 10.0);
            let width = product_hz / g_lin.sqrt();
            let half_span = 4.0 * width;
            let step = 2.0 * half_span / (points - 1) as f64;
            let grid: Vec<f64> = (0..points)
                .map(|k| center_hz - half_span + step * k as f64)
                .collect();
            gain_profile(seed.wrapping_add(i as u64), &[(center_hz, g_db, width)], &grid, noise_db)
        })
        .collect()
}

/// Damped multi-cosine Ramsey record on a uniform delay grid.
pub fn ramsey(
    seed: u64,
    t2_s: f64,
    tones: &[RamseyTone],
    offset: f64,
    dt_s: f64,
    points: usize,
    noise: f64,
) -> RamseyData {
    assert!(t2_s > 0.0, "coherence time must be positive");
    assert!(dt_s > 0.0, "sample spacing must be positive");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, noise).expect("noise width must be finite and non-negative");

    let delay_s: Vec<f64> = (0..points).map(|i| dt_s * i as f64).collect();
    let signal = delay_s
        .iter()
        .map(|&t| {
            let env = (-t / t2_s).exp();
            let osc: f64 = tones
                .iter()
                .map(|tone| {
                    tone.amplitude
                        * (2.0 * std::f64::consts::PI * tone.freq_hz * t + tone.phase_rad).cos()
                })
                .sum();
            offset + env * osc + dist.sample(&mut rng)
        })
        .collect();
    RamseyData { delay_s, signal }
}

/// Continuous-time telegraph process sampled at `dt_s` with Gaussian readout
/// noise of width `sigma`.
///
/// The hidden state dwells for an exponentially distributed holding time of
/// mean `dwell_s`, then jumps to one of the other states with equal
/// probability. Dwell times are drawn in continuous time and quantized to
/// the sample grid, so short dwells can straddle a sample boundary exactly
/// as they would in hardware.
pub fn telegraph(
    seed: u64,
    means: &[f64],
    dwell_s: f64,
    dt_s: f64,
    points: usize,
    sigma: f64,
) -> TelegraphData {
    assert!(means.len() >= 2, "need at least two states");
    assert!(dwell_s > 0.0 && dt_s > 0.0, "time scales must be positive");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma).expect("noise width must be finite and non-negative");
    let holding = Exp::new(1.0 / dwell_s).expect("dwell time must be positive");

    let mut state = 0usize;
    let mut next_jump = holding.sample(&mut rng);
    let mut t_s = Vec::with_capacity(points);
    let mut value = Vec::with_capacity(points);
    let mut true_state = Vec::with_capacity(points);
    for i in 0..points {
        let t = dt_s * i as f64;
        while t >= next_jump {
            // uniform choice among the other states via a rejected self-draw
            let mut pick = (rng.next_u64() % means.len() as u64) as usize;
            while pick == state {
                pick = (rng.next_u64() % means.len() as u64) as usize;
            }
            state = pick;
            next_jump += holding.sample(&mut rng);
        }
        t_s.push(t);
        value.push(means[state] + noise.sample(&mut rng));
        true_state.push(state);
    }
    TelegraphData { t_s, value, true_state }
}

/// Single-shot readout blobs centered at -separation/2 and +separation/2
/// with common Gaussian width `sigma`, `shots` samples each.
pub fn fidelity_blobs(seed: u64, separation: f64, sigma: f64, shots: usize) -> BlobData {
    assert!(shots > 0, "need at least one shot");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma).expect("noise width must be finite and non-negative");

    let half = separation / 2.0;
    let ground_q = (0..shots).map(|_| -half + noise.sample(&mut rng)).collect();
    let excited_q = (0..shots).map(|_| half + noise.sample(&mut rng)).collect();
    BlobData { ground_q, excited_q }
}

/// Paired off/on noise spectra: a flat floor with seeded Gaussian ripple,
/// plus a Lorentzian visibility bump (in dB) added to the on-spectrum.
///
/// The pointwise on-minus-off difference of the clean pair is exactly
/// `visibility_db / (1 + 4 (f - c)^2 / w^2)`, peaking at the lobe center.
pub fn psd_pair(
    seed: u64,
    grid_hz: &[f64],
    floor_db: f64,
    visibility_db: f64,
    lobe_center_hz: f64,
    lobe_width_hz: f64,
    ripple_db: f64,
) -> PsdPairData {
    assert!(lobe_width_hz > 0.0, "lobe width must be positive");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let ripple = Normal::new(0.0, ripple_db).expect("ripple width must be finite and non-negative");

    let mut off_db = Vec::with_capacity(grid_hz.len());
    let mut on_db = Vec::with_capacity(grid_hz.len());
    for &f in grid_hz {
        let base = floor_db + ripple.sample(&mut rng);
        let bump = visibility_db
            / (1.0 + 4.0 * (f - lobe_center_hz).powi(2) / (lobe_width_hz * lobe_width_hz));
        off_db.push(base);
        on_db.push(base + bump + ripple.sample(&mut rng));
    }
    PsdPairData { freq_hz: grid_hz.to_vec(), off_db, on_db }
}
