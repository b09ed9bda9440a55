//! Normal modes of the ladder.
//!
//! The generalized eigenproblem C Phidd = -Linv Phi is symmetrized with
//! the inverse square root of the capacitance matrix: with
//! M = C^{-1/2} Linv C^{-1/2}, the substitution Psi = C^{1/2} Phi turns it
//! into the ordinary symmetric problem M Psi = omega^2 Psi. Eigenvalues
//! come out ascending; the node-flux profiles Phi = C^{-1/2} Psi are kept
//! alongside the orthonormal eigenvectors because the nonlinearity
//! calculation needs flux differences across bonds.
//!
//! Mirror bookkeeping: the circuit is symmetric under reflection about the
//! center capacitor, so every eigenvector is either even or odd under
//! index reversal. Odd (antisymmetric) modes carry a sign jump across the
//! center bond. The quartic-order expansion is only well behaved when that
//! jump is gauged away by flipping the sign of one half of the profile,
//! which leaves all junction flux drops unchanged and zeroes the drop
//! across the center bond; [`symmetrize_modes`] applies exactly that flip
//! to both the eigenvector and the node-flux columns.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use serde::Serialize;
use thiserror::Error;

use crate::ladder::LadderMatrices;

/// Parity of a mode profile under reflection about the array center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MirrorClass {
    Symmetric,
    Antisymmetric,
}

/// Result of the normal-mode decomposition.
#[derive(Debug, Clone)]
pub struct ModeSpectrum {
    /// Angular mode frequencies (rad/s), ascending.
    pub omegas: Array1<f64>,
    /// Orthonormal eigenvectors Psi of the symmetrized problem, one mode
    /// per column, same order as `omegas`.
    pub eigenvectors: Array2<f64>,
    /// Node-flux profiles Phi = C^{-1/2} Psi, one mode per column
    /// (F^{-1/2}; only ratios and differences are used downstream).
    pub node_flux: Array2<f64>,
    /// Mirror parity of each mode, classified before any symmetrization.
    pub mirror: Vec<MirrorClass>,
    /// Whether the antisymmetric columns have had their sign jump gauged
    /// away. Starts false; set by [`symmetrize_modes`].
    pub symmetrized: bool,
}

impl ModeSpectrum {
    /// Number of modes (= number of islands).
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Mode frequency omega_m / 2 pi (Hz).
    pub fn frequency_hz(&self, m: usize) -> f64 {
        self.omegas[m] / (2.0 * std::f64::consts::PI)
    }

    /// All mode frequencies (Hz), ascending.
    pub fn frequencies_hz(&self) -> Vec<f64> {
        self.omegas
            .iter()
            .map(|w| w / (2.0 * std::f64::consts::PI))
            .collect()
    }
}

/// Symmetric inverse square root of a positive definite matrix.
///
/// Diagonalizes A = V diag(a) V^T and returns V diag(1/sqrt(a)) V^T.
pub fn inverse_sqrt_spd(a: &Array2<f64>) -> Result<Array2<f64>, ModeError> {
    let (vals, vecs) = a.eigh(UPLO::Lower)?;
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(ModeError::NotPositiveDefinite { min_eigenvalue: min });
    }
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let s = 1.0 / v.sqrt();
        scaled.column_mut(j).mapv_inplace(|x| x * s);
    }
    Ok(scaled.dot(&vecs.t()))
}

/// Solves the ladder eigenproblem.
///
/// Output modes are ascending in frequency. Each column is gauged so its
/// largest-magnitude eigenvector entry is positive (first such entry on
/// ties), applied in tandem to the node-flux column, which keeps
/// C^{1/2} Phi = Psi exact. The mirror parity is classified by the sign of
/// the overlap between a profile and its index-reversed self.
pub fn solve_modes(ladder: &LadderMatrices) -> Result<ModeSpectrum, ModeError> {
    let n = ladder.n();
    let cap_inv_sqrt = inverse_sqrt_spd(&ladder.capacitance)?;
    let m = cap_inv_sqrt.dot(&ladder.inductance_inv).dot(&cap_inv_sqrt);
    let m = 0.5 * (&m + &m.t()); // scrub rounding asymmetry before eigh
    let (lambda, mut psi) = m.eigh(UPLO::Lower)?;
    // the ladder is positive definite; tiny negative lambdas are rounding
    let omegas = lambda.mapv(|x| x.max(0.0).sqrt());
    let mut node_flux = cap_inv_sqrt.dot(&psi);

    let mut mirror = Vec::with_capacity(n);
    for j in 0..n {
        let col = psi.column(j);
        let (mut arg, mut max) = (0usize, 0.0f64);
        for (i, &v) in col.iter().enumerate() {
            if v.abs() > max {
                max = v.abs();
                arg = i;
            }
        }
        if col[arg] < 0.0 {
            psi.column_mut(j).mapv_inplace(|x| -x);
            node_flux.column_mut(j).mapv_inplace(|x| -x);
        }
        let overlap: f64 = (0..n).map(|i| psi[[i, j]] * psi[[n - 1 - i, j]]).sum();
        mirror.push(if overlap >= 0.0 {
            MirrorClass::Symmetric
        } else {
            MirrorClass::Antisymmetric
        });
    }

    Ok(ModeSpectrum {
        omegas,
        eigenvectors: psi,
        node_flux,
        mirror,
        symmetrized: false,
    })
}

/// Gauges away the center sign jump of every antisymmetric mode by
/// negating the lower half (rows N/2..N) of its eigenvector and node-flux
/// columns. Idempotent: a second call is a no-op.
///
/// Note this is a gauge choice in the profile representation, not a
/// similarity transform; after it, C^{1/2} Phi = Psi continues to hold
/// column-wise because both representations are flipped in tandem, but
/// the flipped columns are no longer eigenvectors of the center-coupled
/// problem. They are only consumed by bond-difference sums, where the
/// flip is exactly what removes the unphysical center discontinuity.
pub fn symmetrize_modes(spectrum: &mut ModeSpectrum) {
    if spectrum.symmetrized {
        return;
    }
    let n = spectrum.len();
    let half = n / 2;
    for j in 0..n {
        if spectrum.mirror[j] == MirrorClass::Antisymmetric {
            for i in half..n {
                spectrum.eigenvectors[[i, j]] = -spectrum.eigenvectors[[i, j]];
                spectrum.node_flux[[i, j]] = -spectrum.node_flux[[i, j]];
            }
        }
    }
    spectrum.symmetrized = true;
}

/// One hybridized mode pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DimerPair {
    /// Index of the lower mode of the pair.
    pub lower: usize,
    /// Index of the upper mode of the pair.
    pub upper: usize,
    /// Lower mode frequency (Hz).
    pub f_lower_hz: f64,
    /// Upper mode frequency (Hz).
    pub f_upper_hz: f64,
    /// Hybridization splitting f_upper - f_lower (Hz).
    pub splitting_hz: f64,
}

/// Groups the spectrum into consecutive mode pairs (0,1), (2,3), ...
///
/// The center capacitor splits each standing wave of the uncoupled halves
/// into one symmetric and one antisymmetric combination, so the spectrum
/// pairs up from the bottom. A trailing unpaired mode (odd count of
/// retained modes) is dropped.
pub fn dimer_pairs(spectrum: &ModeSpectrum, retained: usize) -> Vec<DimerPair> {
    let take = retained.min(spectrum.len());
    (0..take / 2)
        .map(|p| {
            let (lo, hi) = (2 * p, 2 * p + 1);
            DimerPair {
                lower: lo,
                upper: hi,
                f_lower_hz: spectrum.frequency_hz(lo),
                f_upper_hz: spectrum.frequency_hz(hi),
                splitting_hz: spectrum.frequency_hz(hi) - spectrum.frequency_hz(lo),
            }
        })
        .collect()
}

#[derive(Debug, Error)]
pub enum ModeError {
    #[error("capacitance matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("eigensolver failed: {0}")]
    Backend(#[from] ndarray_linalg::error::LinalgError),
}
