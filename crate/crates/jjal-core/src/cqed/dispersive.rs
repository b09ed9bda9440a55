//! Dispersive shift of a readout resonator coupled to a transmon.
//!
//! The exact shift comes from diagonalizing the Rabi-type Hamiltonian
//!
//! ```text
//! H = sum_k w_k |k><k| + f_r a'a + g N (a + a')
//! ```
//!
//! in GHz units, with N the transmon charge operator normalized so its
//! ge element is one (g is then the usual vacuum coupling rate). Dressed
//! levels are identified with bare product states by largest overlap, and
//! the shift is how much the resonator transition differs between the
//! qubit ground and excited manifolds:
//!
//! ```text
//! chi = (E(g,1) - E(g,0)) - (E(e,1) - E(e,0))
//! ```
//!
//! The familiar two-level estimate g^2 alpha / (Delta (Delta - alpha))
//! underestimates the straddling-regime shift here by roughly half, which
//! is why both values are reported; their ratio is a useful sanity check
//! on any measured shift.

use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};

use super::transmon::solve_transmon;
use super::CqedError;

/// Exact and perturbative dispersive shift, with the transmon numbers
/// they were computed from.
#[derive(Debug, Clone, Copy)]
pub struct DispersiveShift {
    /// Magnitude of the qubit-state pull of the resonator (Hz).
    pub chi_hz: f64,
    /// Magnitude of the two-level estimate g^2 a / (D (D - a)) (Hz).
    pub chi_perturbative_hz: f64,
    /// Exact qubit transition (GHz).
    pub f_ge_ghz: f64,
    /// Exact anharmonicity, negative (GHz).
    pub anharmonicity_ghz: f64,
}

fn kron(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::<f64>::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            if a[[i, j]] == 0.0 {
                continue;
            }
            for p in 0..rb {
                for q in 0..cb {
                    out[[i * rb + p, j * cb + q]] = a[[i, j]] * b[[p, q]];
                }
            }
        }
    }
    out
}

/// Computes the dispersive shift of a resonator at `f_r_ghz` coupled with
/// vacuum rate `g_ghz` to a transmon, keeping `n_transmon` qubit levels
/// and `n_fock` resonator states in the joint diagonalization.
///
/// Six transmon levels and ten photons are enough for readout-style
/// parameters; the result is stable against enlarging either.
pub fn dispersive_shift(
    ej_ghz: f64,
    ec_ghz: f64,
    ng: f64,
    f_r_ghz: f64,
    g_ghz: f64,
    n_transmon: usize,
    n_fock: usize,
) -> Result<DispersiveShift, CqedError> {
    if !(f_r_ghz > 0.0) {
        return Err(CqedError::NonPositive { name: "f_r_ghz", value: f_r_ghz });
    }
    // g = 0 decouples the two systems and must give exactly chi = 0
    if !(g_ghz >= 0.0) {
        return Err(CqedError::NonPositive { name: "g_ghz", value: g_ghz });
    }
    if n_transmon < 2 {
        return Err(CqedError::NonPositive { name: "n_transmon", value: n_transmon as f64 });
    }
    if n_fock < 2 {
        return Err(CqedError::NonPositive { name: "n_fock", value: n_fock as f64 });
    }

    let spectrum = solve_transmon(ej_ghz, ec_ghz, ng, n_transmon)?;
    let f_ge = spectrum.f_ge_ghz();
    let alpha = if n_transmon >= 3 { spectrum.anharmonicity_ghz() } else { -ec_ghz };

    let n01 = spectrum.charge_matrix[[0, 1]].abs();
    if n01 < 1e-12 {
        return Err(CqedError::NonPositive { name: "charge matrix element n01", value: n01 });
    }
    let n_op = spectrum.charge_matrix.mapv(|x| x / n01);

    let mut h_q = Array2::<f64>::zeros((n_transmon, n_transmon));
    for k in 0..n_transmon {
        h_q[[k, k]] = spectrum.levels_ghz[k] - spectrum.levels_ghz[0];
    }
    let mut h_r = Array2::<f64>::zeros((n_fock, n_fock));
    let mut x_r = Array2::<f64>::zeros((n_fock, n_fock)); // a + a'
    for m in 0..n_fock {
        h_r[[m, m]] = f_r_ghz * m as f64;
        if m + 1 < n_fock {
            let amp = ((m + 1) as f64).sqrt();
            x_r[[m, m + 1]] = amp;
            x_r[[m + 1, m]] = amp;
        }
    }
    let eye_q = Array2::<f64>::eye(n_transmon);
    let eye_r = Array2::<f64>::eye(n_fock);
    let h = kron(&h_q, &eye_r) + kron(&eye_q, &h_r) + kron(&n_op, &x_r).mapv(|x| g_ghz * x);

    let (ev, evec) = h.eigh(UPLO::Lower).expect("real symmetric");
    let dressed = |k: usize, m: usize| -> f64 {
        let bare = k * n_fock + m;
        let col = (0..ev.len())
            .max_by(|&a, &b| evec[[bare, a]].abs().total_cmp(&evec[[bare, b]].abs()))
            .expect("non-empty spectrum");
        ev[col]
    };
    let chi_ghz = (dressed(0, 1) - dressed(0, 0)) - (dressed(1, 1) - dressed(1, 0));

    let delta = f_ge - f_r_ghz;
    let chi_pert_ghz = g_ghz * g_ghz * alpha / (delta * (delta - alpha));

    Ok(DispersiveShift {
        chi_hz: chi_ghz.abs() * 1e9,
        chi_perturbative_hz: chi_pert_ghz.abs() * 1e9,
        f_ge_ghz: f_ge,
        anharmonicity_ghz: alpha,
    })
}
