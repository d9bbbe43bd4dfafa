//! Binary spectrum cache.
//!
//! Layout, all integers and floats little-endian:
//!
//! | offset | size  | field |
//! |--------|-------|-------|
//! | 0      | 8     | magic `MLTSPEC1` |
//! | 8      | 32    | SHA-256 of the run configuration |
//! | 40     | 8     | realization index, u64 |
//! | 48     | 8     | J/Δ0, f64 |
//! | 56     | 8     | dimension N, u64 |
//! | 64     | 8N    | eigenvalues, ascending |
//! | 64+8N  | 8N²   | eigenvectors, column-major (column k is eigenvector k) |

use std::fs;
use std::path::Path;

use meltdown_core::eigen::Spectrum;

use crate::error::LabError;

pub const MAGIC: [u8; 8] = *b"MLTSPEC1";
const HEADER: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct DumpHeader {
    pub config_hash: [u8; 32],
    pub realization: u64,
    pub j_over_delta0: f64,
}

pub fn encode(header: &DumpHeader, spectrum: &Spectrum) -> Vec<u8> {
    let n = spectrum.dim();
    let mut out = Vec::with_capacity(HEADER + 8 * n * (n + 1));
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&header.config_hash);
    out.extend_from_slice(&header.realization.to_le_bytes());
    out.extend_from_slice(&header.j_over_delta0.to_le_bytes());
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for x in spectrum.eigenvalues().iter().chain(spectrum.eigenvectors_column_major()) {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

fn bad(path: &Path, message: impl Into<String>) -> LabError {
    LabError::Format { path: path.to_path_buf(), message: message.into() }
}

fn word(bytes: &[u8], at: usize) -> [u8; 8] {
    bytes[at..at + 8].try_into().expect("8-byte slice")
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<(DumpHeader, Spectrum), LabError> {
    if bytes.len() < HEADER || bytes[..8] != MAGIC {
        return Err(bad(path, "not a spectrum dump (bad magic or truncated header)"));
    }
    let config_hash: [u8; 32] = bytes[8..40].try_into().expect("32-byte slice");
    let realization = u64::from_le_bytes(word(bytes, 40));
    let j_over_delta0 = f64::from_le_bytes(word(bytes, 48));
    let n = u64::from_le_bytes(word(bytes, 56));
    let want = n
        .checked_add(1)
        .and_then(|m| m.checked_mul(n))
        .and_then(|m| m.checked_mul(8))
        .and_then(|m| m.checked_add(HEADER as u64));
    if want != Some(bytes.len() as u64) {
        return Err(bad(path, format!("dimension {n} does not match file size {}", bytes.len())));
    }
    let n = n as usize;
    let floats: Vec<f64> = bytes[HEADER..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    let (values, vectors) = floats.split_at(n);
    let spectrum = Spectrum::from_parts(n, values.to_vec(), vectors.to_vec()).map_err(|e| bad(path, e.to_string()))?;
    Ok((DumpHeader { config_hash, realization, j_over_delta0 }, spectrum))
}

pub fn write_dump(path: &Path, header: &DumpHeader, spectrum: &Spectrum) -> Result<(), LabError> {
    fs::write(path, encode(header, spectrum)).map_err(|e| LabError::io(path, e))
}

pub fn read_dump(path: &Path) -> Result<(DumpHeader, Spectrum), LabError> {
    let bytes = fs::read(path).map_err(|e| LabError::io(path, e))?;
    decode(&bytes, path)
}
