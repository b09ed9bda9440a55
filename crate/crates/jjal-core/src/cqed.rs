//! Qubit-side physics of the readout chain the amplifier serves.
//!
//! Everything here supports calibrating a dispersive readout through the
//! amplifier: transmon spectra and charge matrix elements, the exact and
//! perturbative dispersive shift, photon budgets of a measurement pulse,
//! Ramsey coherence fits, quantum-jump filtering, state-population
//! thermometry and Gaussian-mixture blob analysis.
//!
//! Energies are in GHz where a Hamiltonian is diagonalized (numerically
//! friendly for transmon scales) and converted to SI at the interfaces;
//! rates and frequencies cross module boundaries in ordinary Hz.

pub mod dispersive;
pub mod jumps;
pub mod mixture;
pub mod ramsey;
pub mod readout;
pub mod thermal;
pub mod transmon;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CqedError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("charge cutoff {n_cut} leaves the top level shifted by {max_shift:.2e} (relative) when doubled")]
    CutoffTooSmall { n_cut: usize, max_shift: f64 },
    #[error("{n_levels} levels need a charge cutoff of at least {min_cut}, got {n_cut}")]
    TooFewBasisStates { n_levels: usize, n_cut: usize, min_cut: usize },
    #[error("charge cutoff search did not converge by n_cut = {n_cut}")]
    CutoffSearchFailed { n_cut: usize },
    #[error("need at least {needed} data points, got {points}")]
    InsufficientData { points: usize, needed: usize },
    #[error("state bands {i} and {j} overlap; means must differ by more than twice the half-width")]
    OverlappingBands { i: usize, j: usize },
    #[error("no sample falls inside any state band")]
    NoInBandSample,
    #[error("populations are not thermal (inverted or infinite temperature)")]
    InvertedPopulation,
    #[error("at most {max} mixture components supported, got {requested}")]
    TooManyComponents { requested: usize, max: usize },
    #[error("samples have zero spread; cannot fit a mixture")]
    DegenerateSamples,
    #[error("input arrays have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
}
