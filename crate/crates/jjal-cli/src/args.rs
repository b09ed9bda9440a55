//! Command-line surface.
//!
//! One batch verb per run. Global flags: `--design` points at a device
//! TOML, `--out` is the output directory, `--seed` feeds every synthetic
//! generator and is recorded in each result document, `--format` picks
//! the data-table file format (the result document is always JSON).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "jjal", version, about = "Design and data analysis for dimerized junction-array amplifiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Device design TOML file
    #[arg(long, global = true)]
    pub design: Option<PathBuf>,

    /// Output directory (created if missing)
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    /// Seed for synthetic generators; recorded in every result document
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Data table file format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenmode dispersion and dimer pairing of a device
    Dispersion(DispersionArgs),
    /// Self- and cross-Kerr coefficients of the retained modes
    Kerr(KerrArgs),
    /// One-port reflection sweep, optionally with resonance extraction
    S11(S11Args),
    /// Fit the flux-modulation curve to a measured flux map
    FitFluxmap(InputArgs),
    /// Fit the two-mode reflection model to a complex trace
    FitDimer(InputArgs),
    /// Fit Lorentzian gain lobes to a gain record
    FitGain(InputArgs),
    /// Pointwise pump-on minus pump-off noise visibility
    NoiseVis(NoiseVisArgs),
    /// Readout-chain and qubit calibration reports
    Calibrate {
        #[command(subcommand)]
        verb: CalibrateVerb,
    },
    /// Seeded synthetic data generators
    Synth {
        #[command(subcommand)]
        generator: SynthGenerator,
    },
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    /// Flux bias (flux quanta)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub flux: f64,
    /// Sweep end point (flux quanta); with --flux-steps > 1 the bias runs
    /// from --flux to this value inclusive
    #[arg(long, allow_negative_numbers = true)]
    pub flux_to: Option<f64>,
    /// Number of sweep points
    #[arg(long, default_value_t = 1)]
    pub flux_steps: usize,
    /// Modes kept in the tables
    #[arg(long, default_value_t = 12)]
    pub retained: usize,
}

#[derive(Debug, Args)]
pub struct KerrArgs {
    /// Flux bias (flux quanta)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub flux: f64,
    /// Modes kept in the Kerr tensor
    #[arg(long, default_value_t = 12)]
    pub retained: usize,
}

#[derive(Debug, Args)]
pub struct S11Args {
    /// Flux bias (flux quanta)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub flux: f64,
    /// Sweep start (GHz)
    #[arg(long, default_value_t = 1.0)]
    pub f_lo_ghz: f64,
    /// Sweep end (GHz)
    #[arg(long, default_value_t = 10.0)]
    pub f_hi_ghz: f64,
    /// Grid step (MHz)
    #[arg(long, default_value_t = 1.0)]
    pub step_mhz: f64,
    /// Also extract resonances from the sweep band
    #[arg(long)]
    pub scan: bool,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input data file
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct NoiseVisArgs {
    /// Pump-on spectrum CSV (freq_hz,psd_db)
    #[arg(long)]
    pub on: PathBuf,
    /// Pump-off spectrum CSV (freq_hz,psd_db)
    #[arg(long)]
    pub off: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum CalibrateVerb {
    /// Transmon level table from the charge-basis Hamiltonian
    Transmon {
        /// Josephson energy (GHz)
        #[arg(long)]
        ej_ghz: f64,
        /// Charging energy (GHz)
        #[arg(long)]
        ec_ghz: f64,
        /// Gate charge offset
        #[arg(long, default_value_t = 0.0)]
        ng: f64,
        /// Levels reported
        #[arg(long, default_value_t = 5)]
        levels: usize,
    },
    /// Dispersive shift and anharmonicity of a coupled transmon-resonator pair
    Chi {
        /// Josephson energy (GHz)
        #[arg(long)]
        ej_ghz: f64,
        /// Charging energy (GHz)
        #[arg(long)]
        ec_ghz: f64,
        /// Gate charge offset
        #[arg(long, default_value_t = 0.0)]
        ng: f64,
        /// Bare resonator frequency (GHz)
        #[arg(long)]
        fr_ghz: f64,
        /// Vacuum coupling rate (MHz)
        #[arg(long)]
        g_mhz: f64,
        /// Transmon levels kept in the joint diagonalization
        #[arg(long, default_value_t = 6)]
        levels: usize,
        /// Fock states kept in the joint diagonalization
        #[arg(long, default_value_t = 10)]
        fock: usize,
        /// Resonator linewidth (MHz); adds the pointer angle to the report
        #[arg(long)]
        kappa_mhz: Option<f64>,
    },
    /// Measurement photon number collected in an integration window
    Nmeas {
        /// Steady-state intracavity photons
        #[arg(long)]
        nbar: f64,
        /// External linewidth (MHz)
        #[arg(long)]
        kappa_mhz: f64,
        /// Internal loss rate (MHz)
        #[arg(long, default_value_t = 0.0)]
        gamma_mhz: f64,
        /// Integration window (ns)
        #[arg(long)]
        tm_ns: f64,
    },
    /// Photon flux carried by a tone
    Flux {
        /// Tone power (dBm)
        #[arg(long, allow_negative_numbers = true)]
        power_dbm: f64,
        /// Tone frequency (GHz)
        #[arg(long)]
        freq_ghz: f64,
    },
    /// Photon-number calibration from an ac-Stark record (amp2,f_r_hz)
    Stark {
        /// Input CSV
        #[arg(long)]
        input: PathBuf,
        /// Dispersive shift (kHz)
        #[arg(long, allow_negative_numbers = true)]
        chi_khz: f64,
        /// Unshifted resonator frequency (GHz); defaults to the
        /// lowest-power point of the record
        #[arg(long)]
        f_r0_ghz: Option<f64>,
    },
    /// Damped-cosine fit of a Ramsey record (delay_s,signal)
    Ramsey {
        /// Input CSV
        #[arg(long)]
        input: PathBuf,
        /// Fit two tones under a shared envelope
        #[arg(long)]
        double: bool,
    },
    /// Latching state filter over a quadrature record (t_s,q)
    Jumps {
        /// Input CSV
        #[arg(long)]
        input: PathBuf,
        /// State means (signal units), comma separated
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        means: Vec<f64>,
        /// Acceptance band half-width (signal units)
        #[arg(long)]
        band: f64,
        /// Line transmission bound eta_L in (0, 0.5]; adds the
        /// amplifier-referred efficiency eta / eta_L to the report
        #[arg(long)]
        eta_line: Option<f64>,
    },
    /// Qubit temperature from level populations (JSON document)
    Temp {
        /// Populations JSON with transition_hz and counts
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum SynthGenerator {
    /// Flux-modulation map (bias_current_a,freq_hz)
    FluxMap {
        /// Zero-flux mode frequency (GHz)
        #[arg(long, default_value_t = 7.0)]
        f_max_ghz: f64,
        /// Junction participation ratio
        #[arg(long, default_value_t = 0.9)]
        gamma_l: f64,
        /// Flux quanta per ampere
        #[arg(long, default_value_t = 0.5)]
        lever_per_a: f64,
        /// Zero-flux coil current, negated (A)
        #[arg(long, default_value_t = 1.0e-3, allow_negative_numbers = true)]
        offset_a: f64,
        /// Bias sweep start (A)
        #[arg(long, default_value_t = -0.9, allow_negative_numbers = true)]
        bias_lo_a: f64,
        /// Bias sweep end (A)
        #[arg(long, default_value_t = 0.9, allow_negative_numbers = true)]
        bias_hi_a: f64,
        /// Points on the bias grid
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Gaussian frequency noise (MHz)
        #[arg(long, default_value_t = 0.0)]
        noise_mhz: f64,
    },
    /// Ideal single over-coupled resonance trace (freq_hz,re,im)
    Resonance {
        /// Resonance frequency (GHz)
        #[arg(long, default_value_t = 6.0)]
        f0_ghz: f64,
        /// Full linewidth (MHz)
        #[arg(long, default_value_t = 150.0)]
        kappa_mhz: f64,
        /// Grid start (GHz)
        #[arg(long, default_value_t = 4.5)]
        f_lo_ghz: f64,
        /// Grid end (GHz)
        #[arg(long, default_value_t = 7.5)]
        f_hi_ghz: f64,
        /// Grid step (MHz)
        #[arg(long, default_value_t = 1.0)]
        step_mhz: f64,
        /// Complex noise RMS per quadrature
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
    /// Two-winding dimer reflection trace (freq_hz,re,im)
    Dimer {
        /// Lower dressed mode (GHz)
        #[arg(long, default_value_t = 5.465)]
        f_minus_ghz: f64,
        /// Upper dressed mode (GHz)
        #[arg(long, default_value_t = 6.135)]
        f_plus_ghz: f64,
        /// Lower mode external linewidth (MHz)
        #[arg(long, default_value_t = 139.0)]
        kappa_minus_mhz: f64,
        /// Upper mode external linewidth (MHz)
        #[arg(long, default_value_t = 148.0)]
        kappa_plus_mhz: f64,
        /// Lower mode internal loss (MHz)
        #[arg(long, default_value_t = 0.0)]
        gamma_minus_mhz: f64,
        /// Upper mode internal loss (MHz)
        #[arg(long, default_value_t = 0.0)]
        gamma_plus_mhz: f64,
        /// Global phase offset (rad)
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phase_rad: f64,
        /// Grid start (GHz)
        #[arg(long, default_value_t = 4.6)]
        f_lo_ghz: f64,
        /// Grid end (GHz)
        #[arg(long, default_value_t = 7.0)]
        f_hi_ghz: f64,
        /// Grid step (MHz)
        #[arg(long, default_value_t = 2.0)]
        step_mhz: f64,
        /// Complex noise RMS per quadrature
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
    /// Single-lobe gain profile (freq_hz,gain_db)
    Gain {
        /// Lobe center (GHz)
        #[arg(long, default_value_t = 5.8)]
        center_ghz: f64,
        /// Peak gain (dB)
        #[arg(long, default_value_t = 23.2)]
        gain_db: f64,
        /// Lobe full width (MHz)
        #[arg(long, default_value_t = 9.2)]
        width_mhz: f64,
        /// Grid half-span in lobe widths
        #[arg(long, default_value_t = 8.0)]
        span_widths: f64,
        /// Points on the grid
        #[arg(long, default_value_t = 400)]
        points: usize,
        /// Gaussian noise (dB)
        #[arg(long, default_value_t = 0.0)]
        noise_db: f64,
    },
    /// Family of profiles sharing one gain-bandwidth product, one file per member
    GainFamily {
        /// Lobe center (GHz)
        #[arg(long, default_value_t = 5.8)]
        center_ghz: f64,
        /// Amplitude gain-bandwidth product (MHz)
        #[arg(long, default_value_t = 170.0)]
        product_mhz: f64,
        /// Peak gains (dB), comma separated
        #[arg(long, value_delimiter = ',', default_values_t = vec![15.0, 17.0, 19.0, 21.0, 23.0, 25.0])]
        gains_db: Vec<f64>,
        /// Points per member grid
        #[arg(long, default_value_t = 400)]
        points: usize,
        /// Gaussian noise (dB)
        #[arg(long, default_value_t = 0.05)]
        noise_db: f64,
    },
    /// Damped-cosine Ramsey record (delay_s,signal)
    Ramsey {
        /// Coherence time (us)
        #[arg(long, default_value_t = 6.5)]
        t2_us: f64,
        /// Fringe frequency (MHz)
        #[arg(long, default_value_t = 1.0)]
        freq_mhz: f64,
        /// Fringe amplitude
        #[arg(long, default_value_t = 0.4, allow_negative_numbers = true)]
        amplitude: f64,
        /// Second fringe frequency (MHz); makes the record a doublet
        #[arg(long)]
        freq2_mhz: Option<f64>,
        /// Second fringe amplitude
        #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
        amplitude2: f64,
        /// Record offset
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        offset: f64,
        /// Sample spacing (ns)
        #[arg(long, default_value_t = 100.0)]
        dt_ns: f64,
        /// Samples
        #[arg(long, default_value_t = 120)]
        points: usize,
        /// Gaussian noise, record units
        #[arg(long, default_value_t = 0.002)]
        noise: f64,
    },
    /// Telegraph quadrature record (t_s,q) plus true labels
    Telegraph {
        /// State means (signal units), comma separated
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 8.0], allow_hyphen_values = true)]
        means: Vec<f64>,
        /// Mean dwell time (us)
        #[arg(long, default_value_t = 2000.0)]
        dwell_us: f64,
        /// Sample spacing (us)
        #[arg(long, default_value_t = 1.0)]
        dt_us: f64,
        /// Samples
        #[arg(long, default_value_t = 20000)]
        points: usize,
        /// Gaussian readout noise (signal units)
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
    },
    /// Single-shot readout blobs (ground_q,excited_q)
    Blobs {
        /// Target assignment fidelity setting the blob separation
        #[arg(long, default_value_t = 0.90)]
        fidelity: f64,
        /// Blob width (signal units)
        #[arg(long, default_value_t = 2.0)]
        sigma: f64,
        /// Explicit separation (signal units), overrides --fidelity
        #[arg(long)]
        separation: Option<f64>,
        /// Shots per preparation
        #[arg(long, default_value_t = 20000)]
        shots: usize,
    },
    /// Pump-off and pump-on noise spectra (freq_hz,psd_db), two files
    PsdPair {
        /// Grid start (GHz)
        #[arg(long, default_value_t = 5.9)]
        f_lo_ghz: f64,
        /// Grid end (GHz)
        #[arg(long, default_value_t = 6.1)]
        f_hi_ghz: f64,
        /// Grid step (MHz)
        #[arg(long, default_value_t = 0.5)]
        step_mhz: f64,
        /// Noise floor (dB)
        #[arg(long, default_value_t = -90.0, allow_negative_numbers = true)]
        floor_db: f64,
        /// Peak visibility bump (dB)
        #[arg(long, default_value_t = 14.2)]
        visibility_db: f64,
        /// Bump center (GHz)
        #[arg(long, default_value_t = 6.0)]
        center_ghz: f64,
        /// Bump full width (MHz)
        #[arg(long, default_value_t = 20.0)]
        width_mhz: f64,
        /// Floor ripple (dB)
        #[arg(long, default_value_t = 0.1)]
        ripple_db: f64,
    },
}
