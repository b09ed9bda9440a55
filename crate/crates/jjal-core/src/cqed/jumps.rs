//! Latching filter for quantum-jump records.
//!
//! A continuously monitored qubit spends its time near one of a few
//! quasi-steady pointer levels and hops between them. The filter assigns
//! each sample to the last state whose acceptance band it entered: noise
//! excursions that leave a band without reaching another one do not
//! change the state, so brief outliers cannot register as jumps. This is
//! deliberately a hysteresis device, not a maximum-likelihood smoother;
//! its entire tuning is the band half-width.

use serde::Serialize;

use super::CqedError;

/// One state change in a filtered record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JumpEvent {
    /// Sample index at which the new state's band was entered.
    pub index: usize,
    pub from: usize,
    pub to: usize,
}

/// A filtered jump record.
#[derive(Debug, Clone, Serialize)]
pub struct JumpTrace {
    /// State label per sample, indices into the state means.
    pub labels: Vec<usize>,
    /// State changes in order of occurrence.
    pub events: Vec<JumpEvent>,
}

impl JumpTrace {
    /// Number of samples spent in each state.
    pub fn dwell_counts(&self, n_states: usize) -> Vec<usize> {
        let mut counts = vec![0usize; n_states];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }
}

/// Filters a sampled record into latched state labels.
///
/// Bands are `state_means[s] +/- band_halfwidth` and must be pairwise
/// disjoint (means more than two half-widths apart), otherwise a sample
/// could enter two states at once. Samples before the first in-band
/// sample inherit its state; a record that never enters any band cannot
/// be labeled at all and is an error.
pub fn filter_jumps(
    samples: &[f64],
    state_means: &[f64],
    band_halfwidth: f64,
) -> Result<JumpTrace, CqedError> {
    if samples.is_empty() || state_means.is_empty() {
        return Err(CqedError::InsufficientData { points: 0, needed: 1 });
    }
    if !(band_halfwidth > 0.0) {
        return Err(CqedError::NonPositive { name: "band_halfwidth", value: band_halfwidth });
    }
    for i in 0..state_means.len() {
        for j in i + 1..state_means.len() {
            if (state_means[i] - state_means[j]).abs() <= 2.0 * band_halfwidth {
                return Err(CqedError::OverlappingBands { i, j });
            }
        }
    }

    let in_band = |x: f64| -> Option<usize> {
        state_means.iter().position(|&m| (x - m).abs() <= band_halfwidth)
    };

    let first = samples
        .iter()
        .find_map(|&x| in_band(x))
        .ok_or(CqedError::NoInBandSample)?;

    let mut labels = Vec::with_capacity(samples.len());
    let mut events = Vec::new();
    let mut state = first;
    for (i, &x) in samples.iter().enumerate() {
        if let Some(s) = in_band(x) {
            if s != state {
                events.push(JumpEvent { index: i, from: state, to: s });
                state = s;
            }
        }
        labels.push(state);
    }
    Ok(JumpTrace { labels, events })
}
