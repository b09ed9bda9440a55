//! Circuit models and measurement analysis for dimerized Josephson-junction
//! array parametric amplifiers.
//!
//! The modeled device is a ladder of N flux-tunable SQUIDs, galvanically
//! grounded at both ends, with a series coupling capacitor inserted at the
//! midpoint. The capacitor hybridizes the standing-wave modes of the two
//! array halves into pairs (dimers) whose splitting 2J sets the usable
//! bandwidth when the device is pumped between a pair for non-degenerate
//! amplification.
//!
//! What lives where:
//! - [`design`], [`ladder`]: device parameters, flux-tuned SQUID inductance
//!   and the capacitance / inverse-inductance matrices of the ladder.
//! - [`modes`]: normal-mode decomposition of the ladder and the mirror
//!   (anti)symmetry bookkeeping needed before nonlinear calculations.
//! - [`kerr`]: self- and cross-Kerr coefficients from the quartic expansion
//!   of the junction cosine potentials.
//! - [`scattering`]: one-port input reflection via cascaded ABCD matrices
//!   and resonance extraction from swept traces.
//! - [`fit`]: a small Levenberg-Marquardt engine plus the fit families used
//!   on measured data (flux maps, dimer reflection, gain profiles, noise
//!   visibility).
//! - [`cqed`]: transmon diagonalization, dispersive-shift and readout
//!   calibration numbers, Ramsey fits, quantum-jump filtering.
//! - [`synth`]: seeded synthetic-data generators mirroring each fit family.
//! - [`io`]: strict CSV ingestion and emission for the CLI.
//!
//! Conventions used throughout:
//! - SI units at every interface. Fields and arguments named `*_hz` are
//!   ordinary frequencies; rates without a suffix (kappa, gamma, chi, g and
//!   the mode frequencies `omegas`) are angular, in rad/s.
//! - Complex scattering amplitudes follow the electrical-engineering time
//!   convention exp(+j omega t): an inductor contributes impedance
//!   j*omega*L, and the reflection phase falls through a resonance.
//! - Every random generator takes an explicit `u64` seed; identical seeds
//!   give identical data on every platform.

pub mod consts;
pub mod cqed;
pub mod design;
pub mod fit;
pub mod io;
pub mod kerr;
pub mod ladder;
pub mod modes;
pub mod par;
pub mod scattering;
pub mod synth;

/// Complex double, engineering convention (see crate docs).
pub type C64 = num_complex::Complex64;

pub use consts::PhysicalConstants;
pub use cqed::CqedError;
pub use design::{ArrayDesign, DesignError, FluxBias};
pub use fit::{least_squares_fit, FitError, FitOptions, FitResult, FitWarning};
pub use io::IoError;
pub use kerr::{kerr_tensor, KerrTensor};
pub use ladder::{build_ladder_matrices, plasma_frequency, squid_inductance, LadderMatrices};
pub use modes::{solve_modes, symmetrize_modes, MirrorClass, ModeSpectrum};
pub use scattering::{
    extract_resonances, s11_sweep, scan_resonances, ComplexTrace, ResonanceEstimate,
    ScatteringError,
};
