//! Result records and their provenance.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use meltdown_core::mixing::WidthMethod;
use meltdown_core::reaction::{
    AsymmetryReport, LegendreFit, PhaseTimeProxy, ScaledSpectrum, SynthParams, TemperatureFit, TimescaleReport,
};
use meltdown_core::scan::{RealizationStats, ScanResult};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::LabError;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    /// Input path as written in the configuration → SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    pub tool_version: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn hash_file(path: &Path) -> Result<String, LabError> {
    let bytes = fs::read(path).map_err(|e| LabError::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

/// Re-hashes every input named in `prov`, resolving relative paths against
/// `base_dir`, and reports the first mismatch.
pub fn verify_provenance(prov: &Provenance, base_dir: &Path) -> Result<(), LabError> {
    for (name, recorded) in &prov.inputs {
        let p = Path::new(name);
        let path = if p.is_absolute() { p.to_path_buf() } else { base_dir.join(p) };
        let found = hash_file(&path)?;
        if &found != recorded {
            return Err(LabError::Provenance { path: name.clone(), recorded: recorded.clone(), found });
        }
    }
    Ok(())
}

/// Eigensolver contract measurements for one realization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// max_k ‖H v_k − λ_k v_k‖ / ‖H‖_F.
    pub max_residual: f64,
    /// max |VᵀV − I|.
    pub orthonormality_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizationRecord {
    pub j_over_delta0: f64,
    pub n: usize,
    pub stats: RealizationStats,
    pub diagnostics: Option<Diagnostics>,
}

/// W_i = |⟨Ψ_i|φ_k⟩|² against the register energies E_i.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub j_over_delta0: f64,
    pub realization: u64,
    pub eigenstate: usize,
    pub eigenvalue: f64,
    pub participation_ratio: f64,
    pub gamma_down: f64,
    pub width_method: WidthMethod,
    pub energies: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Strength function of register state i over the eigenvalues λ_k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LdosRecord {
    pub j_over_delta0: f64,
    pub realization: u64,
    pub register_index: usize,
    pub register_energy: f64,
    pub participation_ratio: f64,
    pub gamma_down: f64,
    pub width_method: WidthMethod,
    /// |Σ_k w_k λ_k − H_ii| / max_k |λ_k|.
    pub first_moment_error: f64,
    /// |Σ_k w_k λ_k² − Σ_j H_ij²| / max_k λ_k².
    pub second_moment_error: f64,
    pub energies: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledRecord {
    pub source: String,
    pub spectrum: ScaledSpectrum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemperatureRecord {
    pub source: String,
    pub angle_deg: f64,
    pub fit: TemperatureFit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegendreRecord {
    pub source: String,
    pub e_min: f64,
    pub e_max: f64,
    pub fit: LegendreFit,
    pub asymmetry: AsymmetryReport,
    pub phase_proxy: PhaseTimeProxy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthRecord {
    pub params: SynthParams,
    /// Written data files, relative to the output directory.
    pub files: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum Payload {
    Scan(ScanResult),
    Realization(RealizationRecord),
    Profile(ProfileRecord),
    Ldos(LdosRecord),
    ScaledSpectrum(ScaledRecord),
    Temperature(TemperatureRecord),
    Legendre(LegendreRecord),
    Timescale(TimescaleReport),
    Synth(SynthRecord),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Scan(_) => "scan",
            Payload::Realization(_) => "realization",
            Payload::Profile(_) => "profile",
            Payload::Ldos(_) => "ldos",
            Payload::ScaledSpectrum(_) => "scaled-spectrum",
            Payload::Temperature(_) => "temperature",
            Payload::Legendre(_) => "legendre",
            Payload::Timescale(_) => "timescale",
            Payload::Synth(_) => "synth",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    #[serde(flatten)]
    pub payload: Payload,
    pub provenance: Provenance,
}

impl ResultRecord {
    pub fn kind(&self) -> &'static str {
        self.payload.kind()
    }
}
