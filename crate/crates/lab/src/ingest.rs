//! Reaction data files.
//!
//! Spectrum file:
//!
//! ```text
//! # angle_deg: 60
//! # beam_MeV: 18
//! # Zp: 1
//! # Zt: 78
//! # At: 194
//! # label: p + Pt
//! E_MeV,yield,yield_err
//! 2,0.0013,0.00007
//! ```
//!
//! Angular file: metadata `E_min_MeV`, `E_max_MeV` (and optional `label`),
//! columns `theta_deg,dsdo_mb_sr,err`. Metadata lines may appear anywhere;
//! other `#` lines without a `key: value` shape are comments.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use meltdown_core::reaction::{AngularDistribution, AngularPoint, ParticleSpectrum, ReactionError, SpectrumMeta, SpectrumSample};

use crate::error::LabError;

pub const SPECTRUM_COLUMNS: [&str; 3] = ["E_MeV", "yield", "yield_err"];
pub const ANGULAR_COLUMNS: [&str; 3] = ["theta_deg", "dsdo_mb_sr", "err"];

#[derive(Clone, Debug, PartialEq)]
pub enum Ingested {
    Spectrum(ParticleSpectrum),
    Angular(AngularDistribution),
}

struct Table {
    meta: BTreeMap<String, (String, u64)>,
    header: Vec<String>,
    header_line: u64,
    rows: Vec<(u64, [f64; 3])>,
}

fn ingest_error(path: &Path, line: u64, message: impl Into<String>) -> LabError {
    LabError::Ingest { path: path.to_path_buf(), line, message: message.into() }
}

fn read_table(path: &Path) -> Result<Table, LabError> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    let mut meta = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(rest) = line.trim_start().strip_prefix('#') {
            if let Some((k, v)) = rest.split_once(':') {
                let key = k.trim();
                if !key.is_empty() && !key.contains(char::is_whitespace) {
                    meta.insert(key.to_string(), (v.trim().to_string(), i as u64 + 1));
                }
            }
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| ingest_error(path, e.position().map_or(0, |p| p.line()), e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let header_line = reader.headers().ok().and_then(|h| h.position().map(|p| p.line())).unwrap_or(1);
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| ingest_error(path, e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != header.len() {
            return Err(ingest_error(path, line, format!("expected {} fields, found {}", header.len(), rec.len())));
        }
        let mut vals = [0.0; 3];
        for (slot, (field, name)) in vals.iter_mut().zip(rec.iter().zip(&header)) {
            *slot = field
                .parse::<f64>()
                .map_err(|_| ingest_error(path, line, format!("{name}: {field:?} is not a number")))?;
        }
        rows.push((line, vals));
    }
    Ok(Table { meta, header, header_line, rows })
}

fn check_header(path: &Path, t: &Table, want: [&str; 3]) -> Result<(), LabError> {
    if t.header.iter().map(String::as_str).ne(want) {
        return Err(ingest_error(path, t.header_line, format!("expected columns {}, found {}", want.join(","), t.header.join(","))));
    }
    Ok(())
}

fn meta_f64(path: &Path, t: &Table, key: &str) -> Result<f64, LabError> {
    let (v, line) = t
        .meta
        .get(key)
        .ok_or_else(|| ingest_error(path, t.header_line, format!("missing metadata `# {key}: <value>`")))?;
    v.parse().map_err(|_| ingest_error(path, *line, format!("metadata {key}: {v:?} is not a number")))
}

fn reaction_error(path: &Path, t: &Table, e: ReactionError) -> LabError {
    let line = match e {
        ReactionError::NotIncreasing { index } | ReactionError::BadValue { index } | ReactionError::AngleOutOfRange { index, .. } => {
            t.rows.get(index).map_or(t.header_line, |r| r.0)
        }
        _ => t.header_line,
    };
    ingest_error(path, line, e.to_string())
}

pub fn ingest_spectrum(path: &Path) -> Result<ParticleSpectrum, LabError> {
    let t = read_table(path)?;
    check_header(path, &t, SPECTRUM_COLUMNS)?;
    let meta = SpectrumMeta {
        angle_deg: meta_f64(path, &t, "angle_deg")?,
        beam_mev: Some(meta_f64(path, &t, "beam_MeV")?),
        zp: Some(meta_f64(path, &t, "Zp")?),
        zt: Some(meta_f64(path, &t, "Zt")?),
        at: Some(meta_f64(path, &t, "At")?),
        label: t.meta.get("label").map(|v| v.0.clone()).unwrap_or_default(),
    };
    let samples = t.rows.iter().map(|(_, v)| SpectrumSample { energy: v[0], value: v[1], error: v[2] }).collect();
    ParticleSpectrum::new(meta, samples).map_err(|e| reaction_error(path, &t, e))
}

pub fn ingest_angular(path: &Path) -> Result<AngularDistribution, LabError> {
    let t = read_table(path)?;
    check_header(path, &t, ANGULAR_COLUMNS)?;
    let e_min = meta_f64(path, &t, "E_min_MeV")?;
    let e_max = meta_f64(path, &t, "E_max_MeV")?;
    let label = t.meta.get("label").map(|v| v.0.clone()).unwrap_or_default();
    let points = t.rows.iter().map(|(_, v)| AngularPoint { theta_deg: v[0], value: v[1], error: v[2] }).collect();
    AngularDistribution::new(points, e_min, e_max, label).map_err(|e| reaction_error(path, &t, e))
}

/// Reads either kind, chosen by the column header.
pub fn ingest(path: &Path) -> Result<Ingested, LabError> {
    let t = read_table(path)?;
    match t.header.first().map(String::as_str) {
        Some("E_MeV") => ingest_spectrum(path).map(Ingested::Spectrum),
        Some("theta_deg") => ingest_angular(path).map(Ingested::Angular),
        _ => Err(ingest_error(
            path,
            t.header_line,
            format!("unrecognized columns {} (expected {} or {})", t.header.join(","), SPECTRUM_COLUMNS.join(","), ANGULAR_COLUMNS.join(",")),
        )),
    }
}

fn write_rows(path: &Path, meta: &[(&str, String)], columns: [&str; 3], rows: impl Iterator<Item = [f64; 3]>) -> Result<(), LabError> {
    let mut buf = Vec::new();
    for (k, v) in meta {
        writeln!(buf, "# {k}: {}", v.replace(['\n', '\r'], " ")).expect("write to memory");
    }
    let mut w = csv::Writer::from_writer(buf);
    let io = |e: csv::Error| LabError::Format { path: PathBuf::from(path), message: e.to_string() };
    w.write_record(columns).map_err(io)?;
    for r in rows {
        w.write_record(r.iter().map(|x| x.to_string())).map_err(io)?;
    }
    let buf = w.into_inner().map_err(|e| LabError::Format { path: path.to_path_buf(), message: e.to_string() })?;
    fs::write(path, buf).map_err(|e| LabError::io(path, e))
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), |x| x.to_string())
}

/// Writes a spectrum in the format [`ingest_spectrum`] reads. Numbers use
/// the shortest representation that parses back to the same `f64`.
pub fn write_spectrum(path: &Path, spec: &ParticleSpectrum) -> Result<(), LabError> {
    let m = &spec.meta;
    let meta = [
        ("angle_deg", m.angle_deg.to_string()),
        ("beam_MeV", opt(m.beam_mev)),
        ("Zp", opt(m.zp)),
        ("Zt", opt(m.zt)),
        ("At", opt(m.at)),
        ("label", m.label.clone()),
    ];
    write_rows(path, &meta, SPECTRUM_COLUMNS, spec.samples.iter().map(|s| [s.energy, s.value, s.error]))
}

pub fn write_angular(path: &Path, dist: &AngularDistribution) -> Result<(), LabError> {
    let meta = [("E_min_MeV", dist.e_min.to_string()), ("E_max_MeV", dist.e_max.to_string()), ("label", dist.label.clone())];
    write_rows(path, &meta, ANGULAR_COLUMNS, dist.points.iter().map(|p| [p.theta_deg, p.value, p.error]))
}
