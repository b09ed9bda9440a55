//! Reflection response of the loaded array and resonance extraction.
//!
//! The chain is modeled as a cascade of ABCD (transmission) matrices: one
//! L-section per unit cell (series squid branch with its stray inductance
//! and junction capacitance, shunt ground capacitance), a modified center
//! section (shunt island capacitors around the series coupling capacitor),
//! and the same half-chain again. Terminated in a short at the far port,
//! the input reflection is read off the input impedance B/D. With every
//! element lossless the response is unimodular: |S11| = 1 at all
//! frequencies, and resonances appear only in the phase.
//!
//! Sign conventions follow the engineering time dependence exp(+j omega t):
//! series inductors contribute +j omega L, capacitors 1/(j omega C), and
//! the reflection phase falls through each resonance, so the group delay
//! -d(phase)/d(omega) peaks there. A mode of linewidth kappa produces an
//! ideal phase profile
//!
//! ```text
//! phase(omega) = c - 2 atan(2 (omega - omega_0) / kappa)
//! ```
//!
//! whose group-delay maximum is 4/kappa. Extraction inverts that: find
//! group-delay peaks, then refine (f0, kappa) by least squares on the
//! unwrapped phase in a window around each peak.

use crate::design::{ArrayDesign, FluxBias};
use crate::fit::{least_squares_fit, FitOptions};
use crate::ladder::{plasma_frequency, squid_inductance, LadderError};
use crate::par::par_map_indexed;
use crate::C64;
use thiserror::Error;

/// 2x2 transmission (ABCD) matrix of a two-port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcdMatrix {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl AbcdMatrix {
    pub const IDENTITY: AbcdMatrix = AbcdMatrix {
        a: C64::new(1.0, 0.0),
        b: C64::new(0.0, 0.0),
        c: C64::new(0.0, 0.0),
        d: C64::new(1.0, 0.0),
    };

    /// Series impedance element.
    pub fn series(z: C64) -> Self {
        AbcdMatrix { a: C64::new(1.0, 0.0), b: z, c: C64::new(0.0, 0.0), d: C64::new(1.0, 0.0) }
    }

    /// Shunt admittance element.
    pub fn shunt(y: C64) -> Self {
        AbcdMatrix { a: C64::new(1.0, 0.0), b: C64::new(0.0, 0.0), c: y, d: C64::new(1.0, 0.0) }
    }

    /// Cascade: self feeding into `rhs`.
    pub fn mul(&self, rhs: &AbcdMatrix) -> Self {
        AbcdMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// Determinant; 1 for any reciprocal cascade.
    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    /// Matrix power by repeated squaring.
    pub fn powi(&self, mut n: u32) -> Self {
        let mut base = *self;
        let mut acc = AbcdMatrix::IDENTITY;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }
}

/// A sampled complex response over a strictly increasing frequency grid.
#[derive(Debug, Clone)]
pub struct ComplexTrace {
    /// Sample frequencies (Hz), strictly increasing.
    pub freq_hz: Vec<f64>,
    /// Complex response at each frequency, exp(+j omega t) convention.
    pub values: Vec<C64>,
}

impl ComplexTrace {
    pub fn new(freq_hz: Vec<f64>, values: Vec<C64>) -> Result<Self, ScatteringError> {
        if freq_hz.is_empty() {
            return Err(ScatteringError::EmptyGrid);
        }
        if freq_hz.len() != values.len() {
            return Err(ScatteringError::LengthMismatch {
                grid: freq_hz.len(),
                values: values.len(),
            });
        }
        for (i, w) in freq_hz.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(ScatteringError::NonMonotonicGrid { index: i + 1 });
            }
        }
        if let Some(i) = freq_hz.iter().position(|f| !(f.is_finite() && *f > 0.0)) {
            return Err(ScatteringError::NonPositiveFrequency { index: i });
        }
        Ok(ComplexTrace { freq_hz, values })
    }

    pub fn len(&self) -> usize {
        self.freq_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq_hz.is_empty()
    }
}

/// One extracted resonance.
#[derive(Debug, Clone, Copy)]
pub struct ResonanceEstimate {
    /// Resonance frequency (Hz).
    pub f0_hz: f64,
    /// Full linewidth (Hz).
    pub kappa_hz: f64,
    /// Unwrapped phase swing across the fit window (rad); a clean isolated
    /// mode sweeps close to 2 pi.
    pub phase_excursion_rad: f64,
    /// Whether the least-squares refinement converged; if not, the values
    /// are the raw group-delay estimates.
    pub refined: bool,
}

#[derive(Debug, Error)]
pub enum ScatteringError {
    #[error("empty frequency grid")]
    EmptyGrid,
    #[error("frequency grid not strictly increasing at index {index}")]
    NonMonotonicGrid { index: usize },
    #[error("non-positive or non-finite frequency at index {index}")]
    NonPositiveFrequency { index: usize },
    #[error("grid length {grid} does not match value count {values}")]
    LengthMismatch { grid: usize, values: usize },
    #[error("grid reaches {max_ghz:.3} GHz, beyond the {limit_ghz:.3} GHz validity edge")]
    GridBeyondPlasma { max_ghz: f64, limit_ghz: f64 },
    #[error("no resonance found in the trace")]
    NoResonanceFound,
    #[error(transparent)]
    Ladder(#[from] LadderError),
}

/// Uniform grid from `f_lo_hz` to `f_hi_hz` inclusive at spacing near
/// `step_hz` (the step is rounded so the endpoints land exactly).
pub fn linear_grid(f_lo_hz: f64, f_hi_hz: f64, step_hz: f64) -> Vec<f64> {
    assert!(f_hi_hz > f_lo_hz && step_hz > 0.0, "degenerate grid request");
    let n = ((f_hi_hz - f_lo_hz) / step_hz).round().max(1.0) as usize;
    (0..=n)
        .map(|i| f_lo_hz + (f_hi_hz - f_lo_hz) * i as f64 / n as f64)
        .collect()
}

/// Input reflection coefficient of the array over a frequency grid.
///
/// The far port is shorted (the physical chip grounds the last island), so
/// S11 = (B - D Z0)/(B + D Z0) from the total cascade. The grid must stay
/// below 1.2 times the flux-tuned plasma frequency; beyond the stopband
/// edge the lumped cascade no longer represents the device.
pub fn s11_sweep(
    design: &ArrayDesign,
    flux: FluxBias,
    freq_hz: &[f64],
) -> Result<ComplexTrace, ScatteringError> {
    let lj = squid_inductance(design.junction_inductance(), flux)?;
    let f_plasma = plasma_frequency(lj, design.josephson_capacitance);
    let trace = ComplexTrace::new(freq_hz.to_vec(), vec![C64::new(0.0, 0.0); freq_hz.len()])?;
    let f_max = *freq_hz.last().unwrap();
    if f_max > 1.2 * f_plasma {
        return Err(ScatteringError::GridBeyondPlasma {
            max_ghz: f_max / 1e9,
            limit_ghz: 1.2 * f_plasma / 1e9,
        });
    }

    let half_cells = (design.n_squids / 2) as u32;
    let z0 = C64::new(design.port_impedance, 0.0);
    let values = par_map_indexed(freq_hz.len(), |i| {
        let omega = 2.0 * std::f64::consts::PI * freq_hz[i];
        let jw = C64::new(0.0, omega);
        // series branch of one cell: stray inductance in series with the
        // junction inductance resonated by its own capacitance
        let z_squid = (1.0 / (jw * lj) + jw * design.josephson_capacitance).finv();
        let z_cell = jw * design.stray_inductance_per_cell + z_squid;
        let cell =
            AbcdMatrix::series(z_cell).mul(&AbcdMatrix::shunt(jw * design.island_capacitance));
        let half = cell.powi(half_cells);
        let island = AbcdMatrix::shunt(jw * design.center_ground_capacitance);
        let center = island
            .mul(&AbcdMatrix::series((jw * design.center_capacitance).finv()))
            .mul(&island);
        let t = half.mul(&center).mul(&half);
        (t.b - t.d * z0) / (t.b + t.d * z0)
    });

    Ok(ComplexTrace { values, ..trace })
}

/// Reflection a cascade would show if the far port were terminated in a
/// matched load instead of the short.
///
/// For the identity cascade (no network at all) this is zero.
pub fn matched_reflection(t: &AbcdMatrix, z0_ohm: f64) -> C64 {
    let z0 = C64::new(z0_ohm, 0.0);
    let num = t.a + t.b / z0 - t.c * z0 - t.d;
    let den = t.a + t.b / z0 + t.c * z0 + t.d;
    num / den
}

/// Unwrapped phase of the trace values (rad).
pub(crate) fn unwrap_phase(values: &[C64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut prev = 0.0f64;
    let mut offset = 0.0f64;
    for (i, v) in values.iter().enumerate() {
        let raw = v.im.atan2(v.re);
        if i > 0 {
            let mut d = raw + offset - prev;
            while d > std::f64::consts::PI {
                offset -= 2.0 * std::f64::consts::PI;
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                offset += 2.0 * std::f64::consts::PI;
                d += 2.0 * std::f64::consts::PI;
            }
        }
        prev = raw + offset;
        out.push(prev);
    }
    out
}

/// Group delay -d(phase)/d(omega) by central differences (s).
pub(crate) fn group_delay(freq_hz: &[f64], phase: &[f64]) -> Vec<f64> {
    let n = freq_hz.len();
    let mut gd = vec![0.0f64; n];
    if n < 3 {
        return gd;
    }
    let w = |i: usize| 2.0 * std::f64::consts::PI * freq_hz[i];
    for i in 1..n - 1 {
        gd[i] = -(phase[i + 1] - phase[i - 1]) / (w(i + 1) - w(i - 1));
    }
    gd[0] = gd[1];
    gd[n - 1] = gd[n - 2];
    gd
}

/// Minimum unwrapped phase swing for a group-delay peak to count as a
/// resonance; a clean mode sweeps 2 pi, leakage between dense neighbors
/// still clears 4 rad.
const MIN_EXCURSION_RAD: f64 = 4.0;

/// Finds resonances in a reflection trace from its phase.
///
/// Group-delay peaks seed (f0, kappa = 4 / delay); each seed is refined by
/// a least-squares fit of c - 2 s atan(2 (f - f0) / kappa) to the
/// unwrapped phase on a window of about three linewidths, trying both
/// signs s. Peaks whose phase swing stays under 4 rad are discarded as
/// ripple. Errors with [`ScatteringError::NoResonanceFound`] when nothing
/// survives.
pub fn extract_resonances(trace: &ComplexTrace) -> Result<Vec<ResonanceEstimate>, ScatteringError> {
    let n = trace.len();
    if n < 8 {
        return Err(ScatteringError::NoResonanceFound);
    }
    let phase = unwrap_phase(&trace.values);
    let gd = group_delay(&trace.freq_hz, &phase);
    let gd_max = gd.iter().cloned().fold(0.0f64, f64::max);
    if gd_max <= 0.0 {
        return Err(ScatteringError::NoResonanceFound);
    }

    // all peaks first: each refinement window is capped at the midpoint to
    // its neighbors, otherwise the single-pole fit of a dimer member gets
    // pulled toward its partner (production dimers sit about two
    // linewidths apart)
    let peaks: Vec<usize> = (1..n - 1)
        .filter(|&i| gd[i] > gd[i - 1] && gd[i] >= gd[i + 1] && gd[i] > 1e-3 * gd_max)
        .collect();

    let mut found: Vec<ResonanceEstimate> = Vec::new();
    for (j, &i) in peaks.iter().enumerate() {
        let f0_seed = trace.freq_hz[i];
        let kappa_seed = 4.0 / (2.0 * std::f64::consts::PI * gd[i]);

        // window of three linewidths each side, at least three points each,
        // never crossing a neighboring peak's midpoint
        let mut lo_f = f0_seed - 3.0 * kappa_seed;
        let mut hi_f = f0_seed + 3.0 * kappa_seed;
        if j > 0 {
            lo_f = lo_f.max(0.5 * (f0_seed + trace.freq_hz[peaks[j - 1]]));
        }
        if j + 1 < peaks.len() {
            hi_f = hi_f.min(0.5 * (f0_seed + trace.freq_hz[peaks[j + 1]]));
        }
        let lo = trace.freq_hz.partition_point(|&f| f < lo_f).min(i.saturating_sub(3));
        let hi = trace.freq_hz.partition_point(|&f| f <= hi_f).max((i + 4).min(n));
        let wf = &trace.freq_hz[lo..hi];
        let wp = &phase[lo..hi];
        let excursion = wp.iter().cloned().fold(f64::MIN, f64::max)
            - wp.iter().cloned().fold(f64::MAX, f64::min);
        if excursion < MIN_EXCURSION_RAD {
            continue;
        }

        let mut best: Option<(f64, ResonanceEstimate)> = None;
        for sign in [-1.0f64, 1.0] {
            let model = |p: &[f64]| -> Vec<f64> {
                let (f0, kappa, c0) = (p[0], p[1], p[2]);
                wf.iter()
                    .zip(wp)
                    .map(|(&f, &ph)| c0 - sign * 2.0 * (2.0 * (f - f0) / kappa).atan() - ph)
                    .collect()
            };
            let opts = FitOptions {
                bounds: Some(vec![
                    (wf[0], wf[wf.len() - 1]),
                    (1e-3 * kappa_seed, 1e3 * kappa_seed),
                    (f64::NEG_INFINITY, f64::INFINITY),
                ]),
                scales: Some(vec![kappa_seed, kappa_seed, 1.0]),
                ..Default::default()
            };
            let c0_seed = wp[wp.len() / 2];
            let Ok(fit) = least_squares_fit(
                model,
                &[f0_seed, kappa_seed, c0_seed],
                &["f0_hz", "kappa_hz", "phase_ref_rad"],
                &opts,
            ) else {
                continue;
            };
            let cost = fit.residual_rms;
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((
                    cost,
                    ResonanceEstimate {
                        f0_hz: fit.parameters[0],
                        kappa_hz: fit.parameters[1],
                        phase_excursion_rad: excursion,
                        refined: fit.converged,
                    },
                ));
            }
        }
        found.push(best.map(|(_, e)| e).unwrap_or(ResonanceEstimate {
            f0_hz: f0_seed,
            kappa_hz: kappa_seed,
            phase_excursion_rad: excursion,
            refined: false,
        }));
    }

    // merge duplicates from shoulders of the same peak
    found.sort_by(|a, b| a.f0_hz.total_cmp(&b.f0_hz));
    let mut merged: Vec<ResonanceEstimate> = Vec::new();
    for est in found {
        match merged.last() {
            Some(prev)
                if (est.f0_hz - prev.f0_hz).abs()
                    < 0.5 * est.kappa_hz.max(prev.kappa_hz) =>
            {
                if est.phase_excursion_rad > prev.phase_excursion_rad {
                    *merged.last_mut().unwrap() = est;
                }
            }
            _ => merged.push(est),
        }
    }
    if merged.is_empty() {
        return Err(ScatteringError::NoResonanceFound);
    }
    Ok(merged)
}

/// Sweeps the band and extracts every resonance, refining each candidate
/// on a dense local grid.
///
/// A coarse 1 MHz pass locates group-delay peaks; each is then re-swept at
/// 10 kHz over a few seed linewidths so narrow modes are resolved. Modes
/// too close to the band edges to fit a full window are reported from the
/// fine pass as-is.
pub fn scan_resonances(
    design: &ArrayDesign,
    flux: FluxBias,
    f_lo_hz: f64,
    f_hi_hz: f64,
) -> Result<Vec<ResonanceEstimate>, ScatteringError> {
    const COARSE_STEP: f64 = 1e6;
    const FINE_STEP: f64 = 1e4;

    let coarse = s11_sweep(design, flux, &linear_grid(f_lo_hz, f_hi_hz, COARSE_STEP))?;
    let phase = unwrap_phase(&coarse.values);
    let gd = group_delay(&coarse.freq_hz, &phase);
    let gd_max = gd.iter().cloned().fold(0.0f64, f64::max);
    if gd_max <= 0.0 {
        return Err(ScatteringError::NoResonanceFound);
    }

    let peaks: Vec<usize> = (1..coarse.len() - 1)
        .filter(|&i| gd[i] > gd[i - 1] && gd[i] >= gd[i + 1] && gd[i] > 1e-3 * gd_max)
        .collect();

    let mut out: Vec<ResonanceEstimate> = Vec::new();
    for (j, &i) in peaks.iter().enumerate() {
        let f0 = coarse.freq_hz[i];
        let kappa = 4.0 / (2.0 * std::f64::consts::PI * gd[i]);
        // window wide enough for the refinement even when the coarse kappa
        // is an underestimate from straddling the peak, but never reaching
        // a neighboring peak's midpoint: a dimer partner two linewidths
        // away would otherwise drag the fit off both modes
        let mut half_window = (5.0 * kappa).max(3.0 * COARSE_STEP);
        if j > 0 {
            half_window = half_window.min(0.5 * (f0 - coarse.freq_hz[peaks[j - 1]]));
        }
        if j + 1 < peaks.len() {
            half_window = half_window.min(0.5 * (coarse.freq_hz[peaks[j + 1]] - f0));
        }
        let lo = (f0 - half_window).max(f_lo_hz);
        let hi = (f0 + half_window).min(f_hi_hz);
        let refined = if hi - lo < 4.0 * FINE_STEP {
            None
        } else {
            let fine = s11_sweep(design, flux, &linear_grid(lo, hi, FINE_STEP))?;
            // keep only the mode this window targeted
            extract_resonances(&fine).ok().and_then(|found| {
                found
                    .into_iter()
                    .min_by(|a, b| (a.f0_hz - f0).abs().total_cmp(&(b.f0_hz - f0).abs()))
            })
        };
        out.push(refined.unwrap_or(ResonanceEstimate {
            f0_hz: f0,
            kappa_hz: kappa,
            phase_excursion_rad: 0.0,
            refined: false,
        }));
    }

    out.sort_by(|a, b| a.f0_hz.total_cmp(&b.f0_hz));
    let mut merged: Vec<ResonanceEstimate> = Vec::new();
    for est in out {
        match merged.last() {
            Some(prev)
                if (est.f0_hz - prev.f0_hz).abs()
                    < 0.5 * est.kappa_hz.max(prev.kappa_hz) =>
            {
                if est.phase_excursion_rad > prev.phase_excursion_rad {
                    *merged.last_mut().unwrap() = est;
                }
            }
            _ => merged.push(est),
        }
    }
    if merged.is_empty() {
        return Err(ScatteringError::NoResonanceFound);
    }
    Ok(merged)
}
