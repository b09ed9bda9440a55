//! Strict readers and writers for the on-disk table formats.
//!
//! Every table is plain UTF-8 CSV with a `.` decimal separator, one header
//! line whose column names carry the unit (`freq_hz`, `kappa_mhz`, ...), and
//! one row per record. Readers reject rather than guess: a header that does
//! not match the expected schema byte for byte is a [`IoError::SchemaMismatch`]
//! naming the offending header, a short row is a column-count error with its
//! line number, and an unparsable token is reported verbatim. Writers emit
//! the same schemas with Rust's shortest round-trip float formatting, so a
//! deterministic computation produces byte-identical files on every run.
//!
//! Level populations travel as a small JSON document instead of CSV because
//! the record is two parallel lists of different lengths (K - 1 transition
//! frequencies, K counts); see [`PopulationsDoc`].

use std::fmt::Write as _;
use std::path::Path;

use crate::ComplexTrace;
use num_complex::Complex64 as C64;
use sha2::{Digest, Sha256};

/// File-format errors. Line numbers are 1-based and count the header.
#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{path}: file is empty")]
    EmptyFile { path: String },
    #[error("{path}: expected header `{expected}`, found `{found}`")]
    SchemaMismatch { path: String, expected: &'static str, found: String },
    #[error("{path}:{line}: expected {expected} columns, found {found}")]
    WrongColumnCount { path: String, line: usize, expected: usize, found: usize },
    #[error("{path}:{line}: cannot parse `{token}` as a number")]
    BadNumber { path: String, line: usize, token: String },
    #[error("{path}: {detail}")]
    BadDocument { path: String, detail: String },
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Reads a CSV table, enforcing the exact header and a fixed column count.
/// Returns one Vec per column; a header-only file yields empty columns.
fn read_table(path: &Path, header: &'static str) -> Result<Vec<Vec<f64>>, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path_str(path), source })?;
    let mut lines = text.lines().enumerate();

    let (_, first) = lines
        .next()
        .ok_or_else(|| IoError::EmptyFile { path: path_str(path) })?;
    let found = first.trim_end_matches('\r');
    if found != header {
        return Err(IoError::SchemaMismatch {
            path: path_str(path),
            expected: header,
            found: found.to_string(),
        });
    }

    let n_cols = header.split(',').count();
    let mut columns = vec![Vec::new(); n_cols];
    for (idx, raw) in lines {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let mut count = 0;
        for (j, token) in line.split(',').enumerate() {
            count += 1;
            if j >= n_cols {
                continue;
            }
            let value: f64 = token.trim().parse().map_err(|_| IoError::BadNumber {
                path: path_str(path),
                line: idx + 1,
                token: token.to_string(),
            })?;
            columns[j].push(value);
        }
        if count != n_cols {
            return Err(IoError::WrongColumnCount {
                path: path_str(path),
                line: idx + 1,
                expected: n_cols,
                found: count,
            });
        }
    }
    Ok(columns)
}

fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Write { path: path_str(path), source })
}

/// Writes a CSV table of equal-length f64 columns under the given header.
fn write_table(path: &Path, header: &str, columns: &[&[f64]]) -> Result<(), IoError> {
    let rows = columns.first().map_or(0, |c| c.len());
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    let mut text = String::with_capacity(24 * rows * columns.len());
    text.push_str(header);
    text.push('\n');
    for i in 0..rows {
        for (j, col) in columns.iter().enumerate() {
            if j > 0 {
                text.push(',');
            }
            let _ = write!(text, "{}", col[i]);
        }
        text.push('\n');
    }
    write_text(path, &text)
}

/// Reads a complex reflection trace (`freq_hz,re,im`).
pub fn read_complex_trace(path: &Path) -> Result<ComplexTrace, IoError> {
    let cols = read_table(path, "freq_hz,re,im")?;
    let values = cols[1]
        .iter()
        .zip(&cols[2])
        .map(|(&re, &im)| C64::new(re, im))
        .collect();
    ComplexTrace::new(cols[0].clone(), values)
        .map_err(|e| IoError::BadDocument { path: path_str(path), detail: e.to_string() })
}

/// Writes a complex reflection trace (`freq_hz,re,im`).
pub fn write_complex_trace(path: &Path, trace: &ComplexTrace) -> Result<(), IoError> {
    let re: Vec<f64> = trace.values.iter().map(|v| v.re).collect();
    let im: Vec<f64> = trace.values.iter().map(|v| v.im).collect();
    write_table(path, "freq_hz,re,im", &[&trace.freq_hz, &re, &im])
}

/// Reads a flux map (`bias_current_a,freq_hz`); returns (bias, frequency).
pub fn read_flux_map(path: &Path) -> Result<(Vec<f64>, Vec<f64>), IoError> {
    let mut cols = read_table(path, "bias_current_a,freq_hz")?;
    let freq = cols.pop().unwrap();
    Ok((cols.pop().unwrap(), freq))
}

/// Writes a flux map (`bias_current_a,freq_hz`).
pub fn write_flux_map(path: &Path, bias_a: &[f64], freq_hz: &[f64]) -> Result<(), IoError> {
    write_table(path, "bias_current_a,freq_hz", &[bias_a, freq_hz])
}

/// Reads a gain profile (`freq_hz,gain_db`); returns (frequency, gain).
pub fn read_gain_profile(path: &Path) -> Result<(Vec<f64>, Vec<f64>), IoError> {
    let mut cols = read_table(path, "freq_hz,gain_db")?;
    let gain = cols.pop().unwrap();
    Ok((cols.pop().unwrap(), gain))
}

/// Writes a gain profile (`freq_hz,gain_db`).
pub fn write_gain_profile(path: &Path, freq_hz: &[f64], gain_db: &[f64]) -> Result<(), IoError> {
    write_table(path, "freq_hz,gain_db", &[freq_hz, gain_db])
}

/// Reads an AC-Stark calibration table (`amp2,f_r_hz`); returns
/// (squared drive amplitude, Ramsey frequency).
pub fn read_stark(path: &Path) -> Result<(Vec<f64>, Vec<f64>), IoError> {
    let mut cols = read_table(path, "amp2,f_r_hz")?;
    let f_r = cols.pop().unwrap();
    Ok((cols.pop().unwrap(), f_r))
}

/// Reads a Ramsey record (`delay_s,signal`); returns (delay, signal).
pub fn read_ramsey(path: &Path) -> Result<(Vec<f64>, Vec<f64>), IoError> {
    let mut cols = read_table(path, "delay_s,signal")?;
    let signal = cols.pop().unwrap();
    Ok((cols.pop().unwrap(), signal))
}

/// Writes a Ramsey record (`delay_s,signal`).
pub fn write_ramsey(path: &Path, delay_s: &[f64], signal: &[f64]) -> Result<(), IoError> {
    write_table(path, "delay_s,signal", &[delay_s, signal])
}

/// Reads a single-quadrature jump record (`t_s,q`); returns (time, signal).
pub fn read_jumps(path: &Path) -> Result<(Vec<f64>, Vec<f64>), IoError> {
    let mut cols = read_table(path, "t_s,q")?;
    let q = cols.pop().unwrap();
    Ok((cols.pop().unwrap(), q))
}

/// Writes a single-quadrature jump record (`t_s,q`).
pub fn write_jumps(path: &Path, t_s: &[f64], q: &[f64]) -> Result<(), IoError> {
    write_table(path, "t_s,q", &[t_s, q])
}

/// Reads an IQ time series (`t_s,i,q`); returns (time, I, Q).
pub fn read_iq(path: &Path) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>), IoError> {
    let mut cols = read_table(path, "t_s,i,q")?;
    let q = cols.pop().unwrap();
    let i = cols.pop().unwrap();
    Ok((cols.pop().unwrap(), i, q))
}

/// Writes an IQ time series (`t_s,i,q`).
pub fn write_iq(path: &Path, t_s: &[f64], i: &[f64], q: &[f64]) -> Result<(), IoError> {
    write_table(path, "t_s,i,q", &[t_s, i, q])
}

/// Reads a noise power spectrum (`freq_hz,psd_db`); returns (frequency, PSD).
pub fn read_psd(path: &Path) -> Result<(Vec<f64>, Vec<f64>), IoError> {
    let mut cols = read_table(path, "freq_hz,psd_db")?;
    let psd = cols.pop().unwrap();
    Ok((cols.pop().unwrap(), psd))
}

/// Writes a noise power spectrum (`freq_hz,psd_db`).
pub fn write_psd(path: &Path, freq_hz: &[f64], psd_db: &[f64]) -> Result<(), IoError> {
    write_table(path, "freq_hz,psd_db", &[freq_hz, psd_db])
}

/// One row of the mode-frequency table (`flux_phi0,mode_index,freq_ghz`).
#[derive(Debug, Clone, Copy)]
pub struct DispersionRow {
    pub flux_phi0: f64,
    pub mode_index: usize,
    pub freq_ghz: f64,
}

/// Writes a mode-frequency table (`flux_phi0,mode_index,freq_ghz`).
pub fn write_dispersion_table(path: &Path, rows: &[DispersionRow]) -> Result<(), IoError> {
    let mut text = String::from("flux_phi0,mode_index,freq_ghz\n");
    for r in rows {
        let _ = writeln!(text, "{},{},{}", r.flux_phi0, r.mode_index, r.freq_ghz);
    }
    write_text(path, &text)
}

/// One row of the dimer summary (`dimer_index,f_minus_ghz,f_plus_ghz,two_j_mhz`).
#[derive(Debug, Clone, Copy)]
pub struct DimerSummaryRow {
    pub dimer_index: usize,
    pub f_minus_ghz: f64,
    pub f_plus_ghz: f64,
    pub two_j_mhz: f64,
}

/// Writes a dimer summary (`dimer_index,f_minus_ghz,f_plus_ghz,two_j_mhz`).
pub fn write_dimer_summary(path: &Path, rows: &[DimerSummaryRow]) -> Result<(), IoError> {
    let mut text = String::from("dimer_index,f_minus_ghz,f_plus_ghz,two_j_mhz\n");
    for r in rows {
        let _ = writeln!(
            text,
            "{},{},{},{}",
            r.dimer_index, r.f_minus_ghz, r.f_plus_ghz, r.two_j_mhz
        );
    }
    write_text(path, &text)
}

/// One row of the Kerr table (`mode_m,mode_k,eta,k_mk_khz,diagonal`).
#[derive(Debug, Clone, Copy)]
pub struct KerrRow {
    pub mode_m: usize,
    pub mode_k: usize,
    pub eta: f64,
    pub k_mk_khz: f64,
}

/// Writes a Kerr table (`mode_m,mode_k,eta,k_mk_khz,diagonal`); the
/// `diagonal` flag is 1 on self-Kerr rows and 0 on cross-Kerr rows.
pub fn write_kerr_table(path: &Path, rows: &[KerrRow]) -> Result<(), IoError> {
    let mut text = String::from("mode_m,mode_k,eta,k_mk_khz,diagonal\n");
    for r in rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{}",
            r.mode_m,
            r.mode_k,
            r.eta,
            r.k_mk_khz,
            u8::from(r.mode_m == r.mode_k)
        );
    }
    write_text(path, &text)
}

/// Writes a resonance summary (`f0_ghz,kappa_mhz`).
pub fn write_resonance_summary(
    path: &Path,
    f0_ghz: &[f64],
    kappa_mhz: &[f64],
) -> Result<(), IoError> {
    write_table(path, "f0_ghz,kappa_mhz", &[f0_ghz, kappa_mhz])
}

/// Writes a noise-visibility record (`freq_hz,delta_db`).
pub fn write_visibility(path: &Path, freq_hz: &[f64], delta_db: &[f64]) -> Result<(), IoError> {
    write_table(path, "freq_hz,delta_db", &[freq_hz, delta_db])
}

/// Writes a photon-number calibration record (`amp2,n_photons`).
pub fn write_stark_photons(path: &Path, amp2: &[f64], n_photons: &[f64]) -> Result<(), IoError> {
    write_table(path, "amp2,n_photons", &[amp2, n_photons])
}

/// Writes a labeled state record (`t_s,state_index`).
pub fn write_state_labels(path: &Path, t_s: &[f64], labels: &[usize]) -> Result<(), IoError> {
    let as_f64: Vec<f64> = labels.iter().map(|&l| l as f64).collect();
    write_table(path, "t_s,state_index", &[t_s, &as_f64])
}

/// Writes a transmon level table (`level,energy_ghz`), energies relative
/// to the ground state.
pub fn write_level_table(path: &Path, energies_ghz: &[f64]) -> Result<(), IoError> {
    let levels: Vec<f64> = (0..energies_ghz.len()).map(|k| k as f64).collect();
    write_table(path, "level,energy_ghz", &[&levels, energies_ghz])
}

/// Reads single-shot readout blobs (`ground_q,excited_q`), one shot of
/// each preparation per row.
pub fn read_blobs(path: &Path) -> Result<(Vec<f64>, Vec<f64>), IoError> {
    let mut cols = read_table(path, "ground_q,excited_q")?;
    let excited = cols.pop().unwrap();
    Ok((cols.pop().unwrap(), excited))
}

/// Writes single-shot readout blobs (`ground_q,excited_q`).
pub fn write_blobs(path: &Path, ground_q: &[f64], excited_q: &[f64]) -> Result<(), IoError> {
    write_table(path, "ground_q,excited_q", &[ground_q, excited_q])
}

/// Level populations for a temperature estimate.
///
/// `transition_hz[k]` is the transition frequency from the ground state to
/// level k+1, so there is one fewer transition than counts.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PopulationsDoc {
    /// Ground-to-level-k transition frequencies (Hz), ascending.
    pub transition_hz: Vec<f64>,
    /// Observed counts or fractions per level, ground first.
    pub counts: Vec<f64>,
}

/// Reads a level-population JSON document.
pub fn read_populations(path: &Path) -> Result<PopulationsDoc, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path_str(path), source })?;
    serde_json::from_str(&text)
        .map_err(|e| IoError::BadDocument { path: path_str(path), detail: e.to_string() })
}

/// SHA-256 of a file's bytes as lowercase hex, for provenance records.
pub fn sha256_hex(path: &Path) -> Result<String, IoError> {
    let bytes =
        std::fs::read(path).map_err(|source| IoError::Read { path: path_str(path), source })?;
    let digest = Sha256::digest(&bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;
    use std::sync::atomic::{AtomicU32, Ordering};

    static COUNTER: AtomicU32 = AtomicU32::new(0);

    fn scratch(name: &str) -> PathBuf {
        let n = COUNTER.fetch_add(1, Ordering::Relaxed);
        std::env::temp_dir().join(format!("jjal-io-{}-{n}-{name}", std::process::id()))
    }

    #[test]
    fn complex_trace_roundtrips_exactly() {
        let path = scratch("trace.csv");
        let trace = ComplexTrace::new(
            vec![1.0e9, 2.0e9, 3.0e9],
            vec![C64::new(0.5, -0.25), C64::new(-1.0, 0.0), C64::new(0.125, 1.0)],
        )
        .unwrap();
        write_complex_trace(&path, &trace).unwrap();
        let back = read_complex_trace(&path).unwrap();
        assert_eq!(back.freq_hz, trace.freq_hz);
        assert_eq!(back.values, trace.values);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn writers_are_byte_identical_across_runs() {
        let a = scratch("a.csv");
        let b = scratch("b.csv");
        let bias = [1.0e-3, 2.0e-3, 3.333333333e-3];
        let freq = [7.0e9, 6.9e9, 6.51234e9];
        write_flux_map(&a, &bias, &freq).unwrap();
        write_flux_map(&b, &bias, &freq).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        std::fs::remove_file(&a).unwrap();
        std::fs::remove_file(&b).unwrap();
    }

    #[test]
    fn wrong_header_names_the_offender() {
        let path = scratch("bad_header.csv");
        std::fs::write(&path, "freq,re,im\n1,2,3\n").unwrap();
        let err = read_complex_trace(&path).unwrap_err();
        match err {
            IoError::SchemaMismatch { expected, found, .. } => {
                assert_eq!(expected, "freq_hz,re,im");
                assert_eq!(found, "freq,re,im");
            }
            other => panic!("unexpected error {other:?}"),
        }
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn short_row_reports_its_line() {
        let path = scratch("short_row.csv");
        std::fs::write(&path, "t_s,q\n0.0,1.0\n0.1\n").unwrap();
        match read_jumps(&path).unwrap_err() {
            IoError::WrongColumnCount { line, expected, found, .. } => {
                assert_eq!((line, expected, found), (3, 2, 1));
            }
            other => panic!("unexpected error {other:?}"),
        }
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn bad_token_is_quoted_verbatim() {
        let path = scratch("bad_num.csv");
        std::fs::write(&path, "delay_s,signal\n0.0,0.5\n1e-6,oops\n").unwrap();
        match read_ramsey(&path).unwrap_err() {
            IoError::BadNumber { line, token, .. } => {
                assert_eq!(line, 3);
                assert_eq!(token, "oops");
            }
            other => panic!("unexpected error {other:?}"),
        }
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn header_only_file_yields_empty_columns() {
        let path = scratch("header_only.csv");
        std::fs::write(&path, "freq_hz,gain_db\n").unwrap();
        let (f, g) = read_gain_profile(&path).unwrap();
        assert!(f.is_empty() && g.is_empty());
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn empty_file_is_rejected() {
        let path = scratch("empty.csv");
        std::fs::write(&path, "").unwrap();
        assert!(matches!(read_psd(&path).unwrap_err(), IoError::EmptyFile { .. }));
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn crlf_records_parse() {
        let path = scratch("crlf.csv");
        std::fs::write(&path, "amp2,f_r_hz\r\n0.1,1.0e6\r\n0.2,2.0e6\r\n").unwrap();
        let (amp2, f_r) = read_stark(&path).unwrap();
        assert_eq!(amp2, vec![0.1, 0.2]);
        assert_eq!(f_r, vec![1.0e6, 2.0e6]);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn kerr_table_flags_the_diagonal() {
        let path = scratch("kerr.csv");
        let rows = [
            KerrRow { mode_m: 0, mode_k: 0, eta: 0.5, k_mk_khz: 1.1 },
            KerrRow { mode_m: 0, mode_k: 1, eta: 0.25, k_mk_khz: 2.8 },
        ];
        write_kerr_table(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "mode_m,mode_k,eta,k_mk_khz,diagonal\n0,0,0.5,1.1,1\n0,1,0.25,2.8,0\n"
        );
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn populations_doc_roundtrips() {
        let path = scratch("pop.json");
        let doc = PopulationsDoc { transition_hz: vec![4.505e9], counts: vec![12.0, 1.0] };
        std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
        let back = read_populations(&path).unwrap();
        assert_eq!(back.transition_hz, doc.transition_hz);
        assert_eq!(back.counts, doc.counts);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn sha256_matches_known_vector() {
        let path = scratch("abc.txt");
        std::fs::write(&path, "abc").unwrap();
        assert_eq!(
            sha256_hex(&path).unwrap(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        std::fs::remove_file(&path).unwrap();
    }
}
