//! Lumped-element ladder matrices of the dimerized SQUID array.
//!
//! With node fluxes Phi_1..Phi_N on the islands and grounded boundaries
//! Phi_0 = Phi_{N+1} = 0, the linearized equations of motion read
//!
//! ```text
//! C  d^2/dt^2 Phi = -Linv Phi
//! ```
//!
//! where C is the capacitance matrix and Linv the inverse inductance
//! matrix. Both are symmetric tridiagonal apart from the center bond:
//! the two center islands carry the coupling capacitance C_c between each
//! other and the plate capacitance C_0' to ground instead of a junction,
//! so their inductive coupling across the midpoint is zero and their
//! inductive diagonal drops from 2/L_J to 1/L_J.
//!
//! The SQUID inductance entering Linv is the flux-tuned value
//! L_J(Phi) = L_J(0)/|cos(pi Phi/Phi0)|. The stray lead inductance is not
//! part of this model; it only enters the scattering cascade, where it
//! produces small frequency offsets relative to these eigenmodes.

use ndarray::Array2;
use thiserror::Error;

use crate::design::{ArrayDesign, DesignError, FluxBias};

/// Capacitance and inverse-inductance matrices of the ladder.
#[derive(Debug, Clone)]
pub struct LadderMatrices {
    /// Capacitance matrix (F), N x N, symmetric positive definite.
    pub capacitance: Array2<f64>,
    /// Inverse inductance matrix (1/H), N x N, symmetric positive definite.
    pub inductance_inv: Array2<f64>,
}

impl LadderMatrices {
    /// Number of islands N.
    pub fn n(&self) -> usize {
        self.capacitance.nrows()
    }

    /// Row indices of the two islands flanking the center capacitor.
    pub fn center_rows(&self) -> (usize, usize) {
        let h = self.n() / 2;
        (h - 1, h)
    }
}

/// Flux-tuned inductance of a symmetric SQUID (H).
///
/// L(Phi) = L_J0 / |cos(pi Phi/Phi0)|, with the flux given in units of
/// Phi0. The argument is reduced to its distance from the nearest integer
/// before the cosine, which makes the periodicity L(phi + 1) = L(phi) and
/// the evenness L(-phi) = L(phi) exact in floating point, not just up to
/// rounding of a large trig argument.
pub fn squid_inductance(l_j0: f64, flux: FluxBias) -> Result<f64, LadderError> {
    let r = (flux.0 - flux.0.round()).abs(); // in [0, 0.5]
    let c = (std::f64::consts::PI * r).cos(); // in [0, 1], so |cos| = cos
    if c <= 1e-9 {
        return Err(LadderError::FrustrationSingularity { flux: flux.0 });
    }
    Ok(l_j0 / c)
}

/// Single-junction plasma frequency 1/(2 pi sqrt(L_J C_J)) (Hz).
///
/// This is where the array dispersion relation saturates; modes cannot
/// exist above it.
pub fn plasma_frequency(l_j: f64, c_j: f64) -> f64 {
    1.0 / (2.0 * std::f64::consts::PI * (l_j * c_j).sqrt())
}

/// Builds the ladder matrices for a design at the given flux bias.
///
/// Row i maps to island i+1 in the grounded-boundary numbering. For N = 2
/// the two rows are simultaneously boundary and center rows and the
/// matrices reduce to
///
/// ```text
/// C    = [[C_J + C_c + C_0', -C_c], [-C_c, C_J + C_c + C_0']]
/// Linv = [[1/L_J, 0], [0, 1/L_J]]
/// ```
pub fn build_ladder_matrices(
    design: &ArrayDesign,
    flux: FluxBias,
) -> Result<LadderMatrices, LadderError> {
    design.validate()?;
    let n = design.n_squids;
    let cj = design.josephson_capacitance;
    let c0 = design.island_capacitance;
    let cc = design.center_capacitance;
    let c0g = design.center_ground_capacitance;
    let l_j = squid_inductance(design.junction_inductance(), flux)?;
    let li = 1.0 / l_j;

    let mut cap = Array2::<f64>::zeros((n, n));
    let mut ind = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        cap[[i, i]] = 2.0 * cj + c0;
        ind[[i, i]] = 2.0 * li;
    }
    for i in 0..n - 1 {
        cap[[i, i + 1]] = -cj;
        cap[[i + 1, i]] = -cj;
        ind[[i, i + 1]] = -li;
        ind[[i + 1, i]] = -li;
    }
    // center bond: capacitive coupling only
    let (a, b) = (n / 2 - 1, n / 2);
    cap[[a, a]] = cj + cc + c0g;
    cap[[b, b]] = cj + cc + c0g;
    cap[[a, b]] = -cc;
    cap[[b, a]] = -cc;
    ind[[a, a]] = li;
    ind[[b, b]] = li;
    ind[[a, b]] = 0.0;
    ind[[b, a]] = 0.0;

    Ok(LadderMatrices {
        capacitance: cap,
        inductance_inv: ind,
    })
}

#[derive(Debug, Error)]
pub enum LadderError {
    #[error("SQUID inductance diverges at flux {flux} (half-integer frustration)")]
    FrustrationSingularity { flux: f64 },
    #[error(transparent)]
    Design(#[from] DesignError),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(n: usize) -> ArrayDesign {
        ArrayDesign {
            n_squids: n,
            critical_current: 5.9837e-6,
            josephson_capacitance: 1080e-15,
            island_capacitance: 0.39e-15,
            center_capacitance: 30e-15,
            center_ground_capacitance: 33e-15,
            stray_inductance_per_cell: 12.6e-12,
            port_impedance: 50.0,
        }
    }

    #[test]
    fn squid_inductance_periodicity_is_bitwise() {
        let l0 = 55e-12;
        // evenness holds bitwise for any argument
        for phi in [0.0, 0.13, 0.31, 0.499, 2.77] {
            let a = squid_inductance(l0, FluxBias(phi)).unwrap();
            let c = squid_inductance(l0, FluxBias(-phi)).unwrap();
            assert_eq!(a.to_bits(), c.to_bits());
        }
        // periodicity holds bitwise whenever phi + 1 is exactly
        // representable, e.g. on the dyadic grid
        for phi in [0.0, 0.125, 0.25, 0.3125, 0.4375, -0.375] {
            let a = squid_inductance(l0, FluxBias(phi)).unwrap();
            let b = squid_inductance(l0, FluxBias(phi + 1.0)).unwrap();
            let c = squid_inductance(l0, FluxBias(phi - 2.0)).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
            assert_eq!(a.to_bits(), c.to_bits());
        }
        assert_eq!(squid_inductance(l0, FluxBias(0.0)).unwrap(), l0);
        assert!(matches!(
            squid_inductance(l0, FluxBias(0.5)),
            Err(LadderError::FrustrationSingularity { .. })
        ));
    }

    #[test]
    fn n2_matrices_match_closed_form() {
        let d = design(2);
        let m = build_ladder_matrices(&d, FluxBias::ZERO).unwrap();
        let cj = d.josephson_capacitance;
        let cc = d.center_capacitance;
        let c0g = d.center_ground_capacitance;
        assert_eq!(m.capacitance[[0, 0]], cj + cc + c0g);
        assert_eq!(m.capacitance[[1, 1]], cj + cc + c0g);
        assert_eq!(m.capacitance[[0, 1]], -cc);
        let li = 1.0 / d.junction_inductance();
        assert!((m.inductance_inv[[0, 0]] - li).abs() / li < 1e-15);
        assert_eq!(m.inductance_inv[[0, 1]], 0.0);
    }

    #[test]
    fn row_sums_reflect_ground_couplings() {
        let d = design(8);
        let m = build_ladder_matrices(&d, FluxBias::ZERO).unwrap();
        let (a, b) = m.center_rows();
        let li = 1.0 / d.junction_inductance();
        for i in 0..8 {
            let crow: f64 = m.capacitance.row(i).sum();
            let lrow: f64 = m.inductance_inv.row(i).sum();
            let cexp = if i == a || i == b {
                d.center_ground_capacitance
            } else if i == 0 || i == 7 {
                // boundary islands couple one junction to ground
                d.josephson_capacitance + d.island_capacitance
            } else {
                d.island_capacitance
            };
            let lexp = if i == 0 || i == 7 { li } else { 0.0 };
            // tolerances are a few ulps of the cancelled diagonal terms
            assert!((crow - cexp).abs() < 1e-13 * d.josephson_capacitance, "cap row {i}");
            assert!((lrow - lexp).abs() < 1e-12 * li, "ind row {i}");
        }
    }

    #[test]
    fn plasma_frequencies_of_known_devices() {
        // (L_J pH, C_J fF, f_pl GHz)
        for (lj, cj, f) in [(55.0, 1080.0, 20.65), (110.0, 1050.0, 14.81), (143.0, 1050.0, 13.0)] {
            let got = plasma_frequency(lj * 1e-12, cj * 1e-15) / 1e9;
            assert!((got - f).abs() / f < 1e-3, "L_J={lj} pH: {got} vs {f}");
        }
    }
}
