//! Reaction-data protocol: Coulomb-penetrability scaling of emission
//! spectra, nuclear-temperature fits, Legendre fits of angular distributions,
//! and spreading-width / decay-width time-scale estimates.
//!
//! Units: energies in MeV, lengths in fm, angles in degrees, Γ_cn in keV.

use alloc::string::String;

use thiserror::Error;

mod barrier;
mod legendre;
mod spectrum;
mod synth;
mod timescale;

pub use barrier::{coulomb_penetrability, CoulombBarrier, DEFAULT_R0, PENETRABILITY_MODEL, UNDERFLOW_FLOOR};
pub use legendre::{
    asymmetry_report, fit_legendre, legendre_p, phase_time_proxy, AngularDistribution, AngularPoint, AsymmetryReport,
    LegendreFit, PhaseTimeProxy,
};
pub use spectrum::{
    default_fit_window, fit_temperature, scale_spectrum, ParticleSpectrum, ScaledSpectrum, SpectrumMeta, SpectrumSample,
    TemperatureFit,
};
pub use synth::{synthesize_angular, synthesize_spectrum, SynthOutput, SynthParams};
pub use timescale::{
    bethe_log_density, qubit_equivalent, timescale_report, LevelDensity, TimescaleReport, DEFAULT_SEPARATION_MEV,
};

/// e²/(4πε0) in MeV·fm.
pub const COULOMB_E2: f64 = 1.439_964_547_8;
/// ħc in MeV·fm.
pub const HBAR_C: f64 = 197.326_980_4;
/// ħ in MeV·s.
pub const HBAR_MEV_S: f64 = 6.582_119_569e-22;
/// Atomic mass unit in MeV/c².
pub const AMU_MEV: f64 = 931.494_102_42;
/// Proton mass in MeV/c².
pub const PROTON_MASS_MEV: f64 = 938.272_088_16;

/// How fit residuals were weighted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    /// 1/σ² from the supplied uncertainties; covariance taken as is.
    InverseVariance,
    /// Uncertainties absent: unit weights, covariance scaled by χ²/dof.
    Unit,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ReactionError {
    #[error("energy must be positive (got {0} MeV)")]
    NonPositiveEnergy(f64),
    #[error("radius parameter r0 must be positive (got {0} fm)")]
    NonPositiveRadius(f64),
    #[error("invalid nucleus: {0}")]
    InvalidNucleus(&'static str),
    #[error("missing metadata: {0}")]
    MissingMetadata(&'static str),
    #[error("energies must be strictly increasing (sample {index})")]
    NotIncreasing { index: usize },
    #[error("negative or non-finite value at sample {index}")]
    BadValue { index: usize },
    #[error("angle {theta} deg at point {index} outside (0, 180)")]
    AngleOutOfRange { index: usize, theta: f64 },
    #[error("need at least {needed} usable points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("no evaporation regime in window: log-slope {slope} is not negative")]
    NoEvaporationRegime { slope: f64 },
    #[error("underdetermined fit: {points} points for {params} parameters")]
    Underdetermined { points: usize, params: usize },
    #[error("all fit weights are zero")]
    AllZeroWeights,
    #[error("a0 must be positive (got {0})")]
    NonPositiveA0(f64),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("degenerate level density: {0}")]
    DegenerateLevelDensity(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
