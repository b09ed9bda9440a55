//! Device parameter set for a dimerized SQUID-array amplifier.
//!
//! A design is the list of lumped-element values that fully determines the
//! linear circuit: N identical SQUIDs in series, each junction shunted by
//! its own capacitance, every island capacitively loaded to ground, and a
//! series coupling capacitor (with its own plate-to-ground capacitance)
//! splitting the array into two equal halves. The stray lead inductance
//! per cell is carried along for the scattering model; the eigenmode
//! ladder deliberately omits it (see [`crate::ladder`]).

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::consts;

/// External flux threading each SQUID loop, in units of the flux quantum.
///
/// The SQUIDs are assumed identical and symmetric, so a single number
/// tunes the whole array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxBias(pub f64);

impl FluxBias {
    /// Zero applied flux, the usual operating point for design sweeps.
    pub const ZERO: Self = FluxBias(0.0);
}

/// Lumped-element parameters of one device.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrayDesign {
    /// Number of SQUIDs in the array; even, split equally by the center
    /// capacitor.
    pub n_squids: usize,
    /// Critical current of a single SQUID at zero flux (A).
    pub critical_current: f64,
    /// Junction capacitance of a single SQUID (F).
    pub josephson_capacitance: f64,
    /// Capacitance to ground of each island between SQUIDs (F).
    pub island_capacitance: f64,
    /// Series coupling capacitance at the array midpoint (F).
    pub center_capacitance: f64,
    /// Capacitance to ground of each center-capacitor plate (F).
    pub center_ground_capacitance: f64,
    /// Stray series inductance of the leads, per cell (H).
    pub stray_inductance_per_cell: f64,
    /// Characteristic impedance of the input line (ohm).
    pub port_impedance: f64,
}

impl ArrayDesign {
    /// Josephson energy of one SQUID at zero flux (J), Phi0*Ic/(2*pi).
    pub fn josephson_energy(&self) -> f64 {
        consts::FLUX_QUANTUM * self.critical_current / (2.0 * std::f64::consts::PI)
    }

    /// Josephson inductance of one SQUID at zero flux (H), Phi0/(2*pi*Ic).
    pub fn junction_inductance(&self) -> f64 {
        consts::FLUX_QUANTUM / (2.0 * std::f64::consts::PI * self.critical_current)
    }

    /// Checks the structural and positivity constraints listed on the
    /// fields. Called by every constructor path that ingests user data.
    pub fn validate(&self) -> Result<(), DesignError> {
        if self.n_squids < 2 {
            return Err(DesignError::TooFewSquids { n: self.n_squids });
        }
        if self.n_squids % 2 != 0 {
            return Err(DesignError::OddSquidCount { n: self.n_squids });
        }
        let positive = [
            ("critical_current", self.critical_current),
            ("josephson_capacitance", self.josephson_capacitance),
            ("center_capacitance", self.center_capacitance),
            ("port_impedance", self.port_impedance),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(DesignError::NonPositiveParameter { name, value });
            }
        }
        let non_negative = [
            ("island_capacitance", self.island_capacitance),
            ("center_ground_capacitance", self.center_ground_capacitance),
            ("stray_inductance_per_cell", self.stray_inductance_per_cell),
        ];
        for (name, value) in non_negative {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(DesignError::NegativeParameter { name, value });
            }
        }
        Ok(())
    }

    /// Loads a design from a TOML file, see [`ArrayDesign::from_toml_str`].
    pub fn load(path: &Path) -> Result<Self, DesignError> {
        let text = std::fs::read_to_string(path).map_err(|source| DesignError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Parses a design from TOML text.
    ///
    /// The file uses fabrication-friendly units and rejects unknown keys:
    ///
    /// ```toml
    /// n = 1200        # SQUIDs
    /// ic_ua = 5.9837  # critical current (uA)
    /// cj_ff = 1080.0  # junction capacitance (fF)
    /// c0_ff = 0.39    # island capacitance to ground (fF)
    /// cc_ff = 30.0    # center coupling capacitance (fF)
    /// c0g_ff = 33.0   # center plate capacitance to ground (fF)
    /// ls_ph = 12.6    # stray inductance per cell (pH)
    /// z0_ohm = 50.0   # port impedance (optional, defaults to 50)
    /// ```
    pub fn from_toml_str(text: &str) -> Result<Self, DesignError> {
        let file: DesignFile = toml::from_str(text)?;
        let design = ArrayDesign {
            n_squids: file.n,
            critical_current: file.ic_ua * 1e-6,
            josephson_capacitance: file.cj_ff * 1e-15,
            island_capacitance: file.c0_ff * 1e-15,
            center_capacitance: file.cc_ff * 1e-15,
            center_ground_capacitance: file.c0g_ff * 1e-15,
            stray_inductance_per_cell: file.ls_ph * 1e-12,
            port_impedance: file.z0_ohm,
        };
        design.validate()?;
        Ok(design)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignFile {
    n: usize,
    ic_ua: f64,
    cj_ff: f64,
    c0_ff: f64,
    cc_ff: f64,
    c0g_ff: f64,
    ls_ph: f64,
    #[serde(default = "default_port_impedance")]
    z0_ohm: f64,
}

fn default_port_impedance() -> f64 {
    50.0
}

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("array needs at least 2 SQUIDs, got {n}")]
    TooFewSquids { n: usize },
    #[error("SQUID count must be even to place the center capacitor, got {n}")]
    OddSquidCount { n: usize },
    #[error("{name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("{name} must be non-negative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },
    #[error("cannot read design file {path}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("design file is not valid TOML: {0}")]
    Parse(#[from] toml::de::Error),
}
