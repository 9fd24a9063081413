//! Plot-ready serialization: CSV readers/writers for photon traces and
//! sampled curves, 9-significant-digit number formatting, and atomic file
//! writes so failed runs never leave partial output behind.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::readout::{JumpState, PhotonTrace};
use crate::resonator::ResonanceCurve;
use crate::{Error, Result};

/// Header of a photon trace CSV.
pub const TRACE_HEADER: &str = "bin_index,counts";
/// Header of the ground-truth sidecar CSV.
pub const TRUTH_HEADER: &str = "bin_index,state";
/// Header of a resonance curve CSV.
pub const CURVE_HEADER: &str = "frequency_hz,response";

/// Render with exactly 9 significant digits (scientific notation).
pub fn format_sig9(value: f64) -> String {
    format!("{value:.8e}")
}

/// Round to 9 significant digits; reports round values through this so
/// serialized numbers are reproducible digit-for-digit.
pub fn round_sig9(value: f64) -> f64 {
    if !value.is_finite() {
        return value;
    }
    format!("{value:.8e}").parse().expect("sig9 text is a valid float")
}

/// Write `contents` to `path` via a uniquely named temporary file in the
/// same directory plus an atomic rename; on any error the temporary is
/// removed and the destination left untouched.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn csv_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Lines of a CSV file after checking the exact expected header; yields
/// (1-based line number, line).
fn data_lines<'a>(
    path: &Path,
    text: &'a str,
    expected_header: &str,
) -> Result<Vec<(usize, &'a str)>> {
    let mut lines = Vec::new();
    let mut saw_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if i == 0 {
            if line != expected_header {
                return Err(csv_error(
                    path,
                    1,
                    format!("expected header '{expected_header}', got '{line}'"),
                ));
            }
            saw_header = true;
            continue;
        }
        if line.is_empty() {
            return Err(csv_error(path, i + 1, "empty line"));
        }
        lines.push((i + 1, line));
    }
    if !saw_header {
        return Err(csv_error(path, 1, format!("missing header '{expected_header}'")));
    }
    Ok(lines)
}

fn two_fields<'a>(path: &Path, line_no: usize, line: &'a str) -> Result<(&'a str, &'a str)> {
    let mut parts = line.split(',');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(csv_error(path, line_no, "expected exactly two fields")),
    }
}

fn parse_index(path: &Path, line_no: usize, text: &str, expected: usize) -> Result<()> {
    let index: usize = text
        .parse()
        .map_err(|_| csv_error(path, line_no, format!("bad bin index '{text}'")))?;
    if index != expected {
        return Err(csv_error(
            path,
            line_no,
            format!("bin index {index} out of order, expected {expected}"),
        ));
    }
    Ok(())
}

/// Write a photon trace as `bin_index,counts` rows.
pub fn write_photon_trace(path: &Path, trace: &PhotonTrace) -> Result<()> {
    let mut out = String::with_capacity(16 * trace.n_bins() + 32);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (i, c) in trace.counts.iter().enumerate() {
        writeln!(out, "{i},{c}").expect("string writes cannot fail");
    }
    write_atomic(path, &out)
}

/// Read a photon trace; `bin_duration` is not stored in the CSV and must be
/// supplied by the caller.
pub fn read_photon_trace(path: &Path, bin_duration: f64) -> Result<PhotonTrace> {
    let text = fs::read_to_string(path)?;
    let mut counts = Vec::new();
    for (line_no, line) in data_lines(path, &text, TRACE_HEADER)? {
        let (index, count) = two_fields(path, line_no, line)?;
        parse_index(path, line_no, index, counts.len())?;
        let count: u64 = count
            .parse()
            .map_err(|_| csv_error(path, line_no, format!("bad count '{count}'")))?;
        counts.push(count);
    }
    if counts.is_empty() {
        return Err(csv_error(path, 1, "no data rows"));
    }
    PhotonTrace::new(counts, bin_duration)
}

/// Write the ground-truth state sequence as `bin_index,state` rows.
pub fn write_truth_states(path: &Path, states: &[JumpState]) -> Result<()> {
    let mut out = String::with_capacity(8 * states.len() + 32);
    out.push_str(TRUTH_HEADER);
    out.push('\n');
    for (i, s) in states.iter().enumerate() {
        writeln!(out, "{i},{s}").expect("string writes cannot fail");
    }
    write_atomic(path, &out)
}

pub fn read_truth_states(path: &Path) -> Result<Vec<JumpState>> {
    let text = fs::read_to_string(path)?;
    let mut states = Vec::new();
    for (line_no, line) in data_lines(path, &text, TRUTH_HEADER)? {
        let (index, state) = two_fields(path, line_no, line)?;
        parse_index(path, line_no, index, states.len())?;
        let state = match state {
            "high" => JumpState::High,
            "low" => JumpState::Low,
            other => {
                return Err(csv_error(path, line_no, format!("bad state '{other}'")));
            }
        };
        states.push(state);
    }
    Ok(states)
}

/// Write two sampled columns with the given header, both rendered at 9
/// significant digits.
pub fn write_xy_csv(path: &Path, header: &str, xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::invalid("column length mismatch"));
    }
    let mut out = String::with_capacity(32 * xs.len() + 32);
    out.push_str(header);
    out.push('\n');
    for (x, y) in xs.iter().zip(ys) {
        writeln!(out, "{},{}", format_sig9(*x), format_sig9(*y))
            .expect("string writes cannot fail");
    }
    write_atomic(path, &out)
}

/// Read two float columns back, checking the exact header.
pub fn read_xy_csv(path: &Path, header: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = fs::read_to_string(path)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (line_no, line) in data_lines(path, &text, header)? {
        let (x, y) = two_fields(path, line_no, line)?;
        let x: f64 = x
            .parse()
            .map_err(|_| csv_error(path, line_no, format!("bad number '{x}'")))?;
        let y: f64 = y
            .parse()
            .map_err(|_| csv_error(path, line_no, format!("bad number '{y}'")))?;
        xs.push(x);
        ys.push(y);
    }
    Ok((xs, ys))
}

/// Write a resonance curve with the `frequency_hz,response` header.
pub fn write_resonance_curve(path: &Path, curve: &ResonanceCurve) -> Result<()> {
    write_xy_csv(path, CURVE_HEADER, &curve.frequencies, &curve.responses)
}

/// Read a resonance curve; fails if the sig9-rounded frequencies are no
/// longer strictly ascending.
pub fn read_resonance_curve(path: &Path) -> Result<ResonanceCurve> {
    let (frequencies, responses) = read_xy_csv(path, CURVE_HEADER)?;
    ResonanceCurve::new(frequencies, responses)
}
