use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::barrier::{CoulombBarrier, PENETRABILITY_MODEL, UNDERFLOW_FLOOR};
use super::{ReactionError, Weighting};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub angle_deg: f64,
    pub beam_mev: Option<f64>,
    pub zp: Option<f64>,
    pub zt: Option<f64>,
    pub at: Option<f64>,
    pub label: String,
}

/// One energy bin: value and its uncertainty (0 when unknown).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub energy: f64,
    pub value: f64,
    pub error: f64,
}

/// Emission spectrum at a fixed angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleSpectrum {
    pub meta: SpectrumMeta,
    pub samples: Vec<SpectrumSample>,
}

impl ParticleSpectrum {
    /// Checks energies strictly increasing and yields/errors finite and ≥ 0.
    pub fn new(meta: SpectrumMeta, samples: Vec<SpectrumSample>) -> Result<Self, ReactionError> {
        check_samples(&samples)?;
        Ok(ParticleSpectrum { meta, samples })
    }

    pub fn barrier(&self, r0: f64) -> Result<CoulombBarrier, ReactionError> {
        let zp = self.meta.zp.ok_or(ReactionError::MissingMetadata("Zp"))?;
        let zt = self.meta.zt.ok_or(ReactionError::MissingMetadata("Zt"))?;
        let at = self.meta.at.ok_or(ReactionError::MissingMetadata("At"))?;
        let ap = if zp == 1.0 { 1.0 } else { 2.0 * zp };
        let b = CoulombBarrier { zp, ap, zt, at, r0 };
        b.validate()?;
        Ok(b)
    }
}

fn check_samples(samples: &[SpectrumSample]) -> Result<(), ReactionError> {
    for (index, s) in samples.iter().enumerate() {
        if !(s.energy.is_finite() && s.value.is_finite() && s.value >= 0.0 && s.error >= 0.0) || s.error.is_nan() {
            return Err(ReactionError::BadValue { index });
        }
        if index > 0 && s.energy <= samples[index - 1].energy {
            return Err(ReactionError::NotIncreasing { index });
        }
    }
    Ok(())
}

/// I(E) = yield / (E · P(E)).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledSpectrum {
    pub angle_deg: f64,
    pub samples: Vec<SpectrumSample>,
    pub r0: f64,
    pub model: String,
    /// Samples dropped because P(E) underflowed.
    pub dropped: usize,
}

pub fn scale_spectrum(spec: &ParticleSpectrum, r0: f64) -> Result<ScaledSpectrum, ReactionError> {
    let barrier = spec.barrier(r0)?;
    check_samples(&spec.samples)?;
    let mut samples = Vec::with_capacity(spec.samples.len());
    let mut dropped = 0;
    for s in &spec.samples {
        let p = barrier.penetrability(s.energy)?;
        if p < UNDERFLOW_FLOOR {
            dropped += 1;
            continue;
        }
        let factor = s.energy * p;
        samples.push(SpectrumSample { energy: s.energy, value: s.value / factor, error: s.error / factor });
    }
    Ok(ScaledSpectrum { angle_deg: spec.meta.angle_deg, samples, r0, model: PENETRABILITY_MODEL.into(), dropped })
}

/// Lowest third of the sampled energy range.
pub fn default_fit_window(scaled: &ScaledSpectrum) -> Option<(f64, f64)> {
    let lo = scaled.samples.first()?.energy;
    let hi = scaled.samples.last()?.energy;
    Some((lo, lo + (hi - lo) / 3.0))
}

/// Exponential-slope temperature from ln I = c − E/T.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemperatureFit {
    pub temperature: f64,
    pub temperature_err: f64,
    pub chi2_dof: f64,
    pub slope: f64,
    pub intercept: f64,
    pub window: (f64, f64),
    pub points: usize,
    pub weighting: Weighting,
}

/// Weighted least squares of ln I against E over `window` (inclusive).
///
/// Samples with I ≤ 0 are skipped. Weights are (I/σ_I)² when every used
/// sample carries a positive error; otherwise unit weights with the slope
/// variance estimated from the residuals.
pub fn fit_temperature(scaled: &ScaledSpectrum, window: (f64, f64)) -> Result<TemperatureFit, ReactionError> {
    let used: Vec<&SpectrumSample> = scaled
        .samples
        .iter()
        .filter(|s| s.energy >= window.0 && s.energy <= window.1 && s.value > 0.0)
        .collect();
    if used.len() < 3 {
        return Err(ReactionError::TooFewPoints { needed: 3, got: used.len() });
    }
    let weighting = if used.iter().all(|s| s.error > 0.0) { Weighting::InverseVariance } else { Weighting::Unit };
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for s in &used {
        let w = match weighting {
            Weighting::InverseVariance => {
                let rel = s.error / s.value;
                1.0 / (rel * rel)
            }
            Weighting::Unit => 1.0,
        };
        let y = s.value.ln();
        sw += w;
        sx += w * s.energy;
        sy += w * y;
        sxx += w * s.energy * s.energy;
        sxy += w * s.energy * y;
    }
    let det = sw * sxx - sx * sx;
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    if !(slope < 0.0) {
        return Err(ReactionError::NoEvaporationRegime { slope });
    }
    let dof = (used.len() - 2) as f64;
    let chi2: f64 = used
        .iter()
        .map(|s| {
            let r = s.value.ln() - (intercept + slope * s.energy);
            match weighting {
                Weighting::InverseVariance => r * r * (s.value / s.error).powi(2),
                Weighting::Unit => r * r,
            }
        })
        .sum();
    let chi2_dof = chi2 / dof;
    let mut slope_var = sw / det;
    if weighting == Weighting::Unit {
        slope_var *= chi2_dof;
    }
    let temperature = -1.0 / slope;
    Ok(TemperatureFit {
        temperature,
        temperature_err: slope_var.sqrt() / (slope * slope),
        chi2_dof,
        slope,
        intercept,
        window,
        points: used.len(),
        weighting,
    })
}
