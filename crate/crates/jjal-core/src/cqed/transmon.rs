//! Transmon spectrum in the charge basis.
//!
//! The qubit Hamiltonian 4 E_C (n - n_g)^2 - E_J cos(phi) is diagonalized
//! in the charge eigenbasis truncated at |n| <= n_cut, where the cosine
//! couples neighboring charge states with amplitude -E_J/2. Eigenvalues
//! carry the -E_J well depth, so they approach the oscillator expansion
//!
//! ```text
//! E_k = -E_J + sqrt(8 E_J E_C) (k + 1/2) - E_C (6 k^2 + 6 k + 3) / 12
//! ```
//!
//! from below as E_J/E_C grows. The cutoff is validated by doubling: a
//! trustworthy spectrum moves by less than 1e-10 (relative) when the
//! basis doubles.

use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};

use super::CqedError;

/// Relative transition shift under cutoff doubling that counts as
/// converged for the automatic search.
const AUTO_TOL: f64 = 1e-10;
/// Largest tolerable shift for a caller-fixed cutoff.
const FIXED_TOL: f64 = 1e-8;

/// Eigenlevels and charge matrix elements of one transmon.
#[derive(Debug, Clone)]
pub struct TransmonSpectrum {
    /// Lowest eigenvalues, ascending (GHz, absolute including the well
    /// depth).
    pub levels_ghz: Vec<f64>,
    /// Charge operator in the retained eigenbasis, <i|n|j>.
    pub charge_matrix: Array2<f64>,
    /// Charge cutoff the spectrum was computed at.
    pub n_cut: usize,
}

impl TransmonSpectrum {
    /// Ground-to-first-excited transition (GHz). Needs two levels.
    pub fn f_ge_ghz(&self) -> f64 {
        self.levels_ghz[1] - self.levels_ghz[0]
    }

    /// Anharmonicity f_ef - f_ge (GHz), negative for a transmon. Needs
    /// three levels.
    pub fn anharmonicity_ghz(&self) -> f64 {
        self.levels_ghz[2] - 2.0 * self.levels_ghz[1] + self.levels_ghz[0]
    }
}

/// Oscillator-expansion level (GHz), the large E_J/E_C asymptote.
pub fn asymptotic_level_ghz(ej_ghz: f64, ec_ghz: f64, k: usize) -> f64 {
    let k = k as f64;
    -ej_ghz + (8.0 * ej_ghz * ec_ghz).sqrt() * (k + 0.5)
        - ec_ghz * (6.0 * k * k + 6.0 * k + 3.0) / 12.0
}

fn check_inputs(ej_ghz: f64, ec_ghz: f64, n_levels: usize) -> Result<(), CqedError> {
    // E_J = 0 is legal: a bare charging parabola 4 E_c (n - n_g)^2
    if !(ej_ghz >= 0.0) {
        return Err(CqedError::NonPositive { name: "ej_ghz", value: ej_ghz });
    }
    if !(ec_ghz > 0.0) {
        return Err(CqedError::NonPositive { name: "ec_ghz", value: ec_ghz });
    }
    if n_levels == 0 {
        return Err(CqedError::NonPositive { name: "n_levels", value: 0.0 });
    }
    Ok(())
}

/// Diagonalizes at one cutoff; returns (levels, charge matrix).
fn solve_at_cutoff(
    ej_ghz: f64,
    ec_ghz: f64,
    ng: f64,
    n_levels: usize,
    n_cut: usize,
) -> (Vec<f64>, Array2<f64>) {
    let dim = 2 * n_cut + 1;
    let mut h = Array2::<f64>::zeros((dim, dim));
    for i in 0..dim {
        let n = i as f64 - n_cut as f64;
        h[[i, i]] = 4.0 * ec_ghz * (n - ng) * (n - ng);
        if i + 1 < dim {
            h[[i, i + 1]] = -0.5 * ej_ghz;
            h[[i + 1, i]] = -0.5 * ej_ghz;
        }
    }
    let (w, mut v) = h.eigh(UPLO::Lower).expect("real symmetric tridiagonal");
    // fix the sign gauge so charge matrix elements are reproducible
    for mut col in v.columns_mut() {
        let lead = col.iter().cloned().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap();
        if lead < 0.0 {
            col.mapv_inplace(|x| -x);
        }
    }
    let levels: Vec<f64> = w.iter().take(n_levels).cloned().collect();
    let mut charge = Array2::<f64>::zeros((n_levels, n_levels));
    for i in 0..n_levels {
        for j in 0..n_levels {
            let mut s = 0.0;
            for (row, q) in (0..dim).zip(-(n_cut as isize)..) {
                s += v[[row, i]] * q as f64 * v[[row, j]];
            }
            charge[[i, j]] = s;
        }
    }
    (levels, charge)
}

/// Worst relative transition shift between two spectra of equal length.
fn transition_shift(small: &[f64], big: &[f64]) -> f64 {
    if small.len() == 1 {
        return (big[0] - small[0]).abs() / big[0].abs().max(f64::MIN_POSITIVE);
    }
    small
        .iter()
        .zip(big)
        .skip(1)
        .map(|(s, b)| {
            let ts = s - small[0];
            let tb = b - big[0];
            (tb - ts).abs() / tb.abs().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

/// Solves the transmon with an automatically chosen charge cutoff.
///
/// The cutoff doubles until the retained transitions move by less than
/// 1e-10 relative, then the larger basis is kept.
pub fn solve_transmon(
    ej_ghz: f64,
    ec_ghz: f64,
    ng: f64,
    n_levels: usize,
) -> Result<TransmonSpectrum, CqedError> {
    check_inputs(ej_ghz, ec_ghz, n_levels)?;
    let mut n_cut = (n_levels + 6).max(10);
    let (mut levels, _) = solve_at_cutoff(ej_ghz, ec_ghz, ng, n_levels, n_cut);
    loop {
        let doubled = 2 * n_cut;
        let (levels_big, charge_big) = solve_at_cutoff(ej_ghz, ec_ghz, ng, n_levels, doubled);
        if transition_shift(&levels, &levels_big) < AUTO_TOL {
            return Ok(TransmonSpectrum {
                levels_ghz: levels_big,
                charge_matrix: charge_big,
                n_cut: doubled,
            });
        }
        n_cut = doubled;
        levels = levels_big;
        if n_cut > 4096 {
            return Err(CqedError::CutoffSearchFailed { n_cut });
        }
    }
}

/// Solves the transmon at a caller-fixed charge cutoff.
///
/// The basis must hold the requested levels with two charge states to
/// spare, and doubling the cutoff must move no retained transition by
/// more than 1e-8 relative; otherwise the cutoff is rejected as too
/// small.
pub fn solve_transmon_with_cutoff(
    ej_ghz: f64,
    ec_ghz: f64,
    ng: f64,
    n_levels: usize,
    n_cut: usize,
) -> Result<TransmonSpectrum, CqedError> {
    check_inputs(ej_ghz, ec_ghz, n_levels)?;
    let min_cut = (n_levels + 2).div_ceil(2);
    if 2 * n_cut + 1 < n_levels + 2 {
        return Err(CqedError::TooFewBasisStates { n_levels, n_cut, min_cut });
    }
    let (levels, charge) = solve_at_cutoff(ej_ghz, ec_ghz, ng, n_levels, n_cut);
    let (levels_big, _) = solve_at_cutoff(ej_ghz, ec_ghz, ng, n_levels, 2 * n_cut);
    let max_shift = transition_shift(&levels, &levels_big);
    if max_shift > FIXED_TOL {
        return Err(CqedError::CutoffTooSmall { n_cut, max_shift });
    }
    Ok(TransmonSpectrum { levels_ghz: levels, charge_matrix: charge, n_cut })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deep_transmon_matches_the_oscillator_expansion() {
        // 12.5 / 0.225 GHz: f_ge asymptote 4.5184, exact 4.5061 (0.26% off)
        let s = solve_transmon(12.5, 0.225, 0.0, 3).unwrap();
        let f_ge = s.f_ge_ghz();
        let asym = asymptotic_level_ghz(12.5, 0.225, 1) - asymptotic_level_ghz(12.5, 0.225, 0);
        assert!((f_ge - 4.5061).abs() < 5e-4);
        assert!((asym - 4.5184).abs() < 5e-4);
        assert!((f_ge - asym).abs() / f_ge < 0.005);
        // exact anharmonicity overshoots -E_C
        let alpha = s.anharmonicity_ghz();
        assert!((alpha + 0.2562).abs() < 5e-4);
        assert!(alpha < -0.225);
    }

    #[test]
    fn fixed_cutoff_is_validated_by_doubling() {
        assert!(solve_transmon_with_cutoff(12.5, 0.225, 0.0, 3, 30).is_ok());
        let err = solve_transmon_with_cutoff(12.5, 0.225, 0.0, 3, 3);
        assert!(matches!(err, Err(CqedError::CutoffTooSmall { .. })));
        let err = solve_transmon_with_cutoff(12.5, 0.225, 0.0, 8, 4);
        assert!(matches!(err, Err(CqedError::TooFewBasisStates { .. })));
    }

    #[test]
    fn charge_matrix_couples_neighbors_most() {
        let s = solve_transmon(12.5, 0.225, 0.0, 4).unwrap();
        let n01 = s.charge_matrix[[0, 1]].abs();
        let n02 = s.charge_matrix[[0, 2]].abs();
        assert!(n01 > 0.5); // of order (E_J / 8 E_C)^(1/4)
        assert!(n02 < 0.05 * n01); // parity-suppressed
        // symmetric operator
        assert!((s.charge_matrix[[1, 0]] - s.charge_matrix[[0, 1]]).abs() < 1e-12);
    }

    #[test]
    fn charge_dispersion_is_tiny_in_the_transmon_limit() {
        let a = solve_transmon(12.5, 0.225, 0.0, 2).unwrap();
        let b = solve_transmon(12.5, 0.225, 0.5, 2).unwrap();
        assert!((a.f_ge_ghz() - b.f_ge_ghz()).abs() / a.f_ge_ghz() < 1e-4);
    }
}
