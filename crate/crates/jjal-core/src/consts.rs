//! Physical constants, SI 2019 exact values.

use serde::Serialize;

/// Planck constant (J s).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant (J s).
pub const REDUCED_PLANCK: f64 = PLANCK / (2.0 * std::f64::consts::PI);

/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Magnetic flux quantum h/2e (Wb).
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * ELEMENTARY_CHARGE);

/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// The constants above as a value, for result documents and call sites
/// that want to carry them around explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Magnetic flux quantum (Wb).
    pub flux_quantum: f64,
    /// Planck constant (J s).
    pub planck: f64,
    /// Reduced Planck constant (J s).
    pub reduced_planck: f64,
    /// Boltzmann constant (J/K).
    pub boltzmann: f64,
    /// Elementary charge (C).
    pub electron_charge: f64,
}

impl PhysicalConstants {
    /// SI values.
    pub const SI: Self = Self {
        flux_quantum: FLUX_QUANTUM,
        planck: PLANCK,
        reduced_planck: REDUCED_PLANCK,
        boltzmann: BOLTZMANN,
        electron_charge: ELEMENTARY_CHARGE,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_quantum_is_h_over_2e() {
        let c = PhysicalConstants::SI;
        let phi0 = c.planck / (2.0 * c.electron_charge);
        assert!((c.flux_quantum - phi0).abs() / phi0 < 1e-12);
        // sanity: 2.068e-15 Wb
        assert!((c.flux_quantum - 2.067_833_848e-15).abs() < 1e-24);
    }
}
