//! Synthetic reaction data with known ground truth.
//!
//! yield(E, θ) = amplitude · E · P(E) · exp(−E/T) · (1 + f · P₁(cos θ)) · (1 + rel · z),
//! z ~ N(0, 1) independently per sample. The reported error is rel times
//! the noiseless value. Angular distributions average the noiseless energy
//! dependence over `angular_window`, then apply the angular factor and noise.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::barrier::CoulombBarrier;
use super::legendre::{legendre_p, AngularDistribution, AngularPoint};
use super::spectrum::{ParticleSpectrum, SpectrumMeta, SpectrumSample};
use super::ReactionError;
use crate::rng::synth_stream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub temperature: f64,
    /// Highest emission energy (Q).
    pub endpoint_mev: f64,
    pub e_min: f64,
    pub e_step: f64,
    pub barrier: CoulombBarrier,
    pub direct_fraction: f64,
    pub angles_deg: Vec<f64>,
    pub rel_noise: f64,
    pub amplitude: f64,
    pub angular_window: (f64, f64),
    pub beam_mev: f64,
    pub seed: u64,
}

impl SynthParams {
    /// p + ¹⁹⁴Pt-like defaults: T = 0.7 MeV, 18 MeV beam, spectra at 60° and 150°.
    pub fn platinum_like(seed: u64) -> Self {
        SynthParams {
            temperature: 0.7,
            endpoint_mev: 16.0,
            e_min: 2.0,
            e_step: 0.25,
            barrier: CoulombBarrier::proton(78.0, 194.0, super::DEFAULT_R0),
            direct_fraction: 0.3,
            angles_deg: alloc::vec![60.0, 150.0],
            rel_noise: 0.05,
            amplitude: 1.0e3,
            angular_window: (4.0, 8.0),
            beam_mev: 18.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ReactionError> {
        self.barrier.validate()?;
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(ReactionError::NonPositive("temperature"));
        }
        if !(self.direct_fraction >= 0.0 && self.direct_fraction < 1.0) {
            return Err(ReactionError::InvalidParameter("direct fraction must lie in [0, 1)"));
        }
        if !(self.e_min > 0.0 && self.e_step > 0.0 && self.endpoint_mev > self.e_min) {
            return Err(ReactionError::InvalidParameter("need 0 < e_min < endpoint and e_step > 0"));
        }
        if !(self.rel_noise >= 0.0 && self.rel_noise.is_finite()) {
            return Err(ReactionError::InvalidParameter("relative noise must be finite and non-negative"));
        }
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(ReactionError::NonPositive("amplitude"));
        }
        let (lo, hi) = self.angular_window;
        if !(lo > 0.0 && hi > lo) {
            return Err(ReactionError::InvalidParameter("angular window must satisfy 0 < lo < hi"));
        }
        if self.angles_deg.is_empty() {
            return Err(ReactionError::InvalidParameter("no angles"));
        }
        for (index, &theta) in self.angles_deg.iter().enumerate() {
            if !(theta > 0.0 && theta < 180.0) {
                return Err(ReactionError::AngleOutOfRange { index, theta });
            }
        }
        Ok(())
    }

    pub fn energies(&self) -> Vec<f64> {
        let count = ((self.endpoint_mev - self.e_min) / self.e_step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.e_min + self.e_step * i as f64).collect()
    }

    /// Noiseless angle-independent part amplitude · E · P(E) · exp(−E/T).
    pub fn energy_shape(&self, e: f64) -> Result<f64, ReactionError> {
        Ok(self.amplitude * e * self.barrier.penetrability(e)? * (-e / self.temperature).exp())
    }

    pub fn angular_factor(&self, theta_deg: f64) -> f64 {
        1.0 + self.direct_fraction * theta_deg.to_radians().cos()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthOutput {
    pub spectra: Vec<ParticleSpectrum>,
    pub angular: AngularDistribution,
}

fn noisy(value: f64, rel: f64, rng: &mut impl rand::Rng) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    (value * (1.0 + rel * z)).max(0.0)
}

/// Spectra at every angle in `params.angles_deg` plus one angular
/// distribution over 10°..170° in 10° steps.
pub fn synthesize_spectrum(params: &SynthParams) -> Result<SynthOutput, ReactionError> {
    params.validate()?;
    let energies = params.energies();
    let mut spectra = Vec::with_capacity(params.angles_deg.len());
    for (idx, &theta) in params.angles_deg.iter().enumerate() {
        let mut rng = synth_stream(params.seed, idx as u64);
        let factor = params.angular_factor(theta);
        let mut samples = Vec::with_capacity(energies.len());
        for &e in &energies {
            let clean = params.energy_shape(e)? * factor;
            samples.push(SpectrumSample { energy: e, value: noisy(clean, params.rel_noise, &mut rng), error: params.rel_noise * clean });
        }
        let meta = SpectrumMeta {
            angle_deg: theta,
            beam_mev: Some(params.beam_mev),
            zp: Some(params.barrier.zp),
            zt: Some(params.barrier.zt),
            at: Some(params.barrier.at),
            label: format!("synthetic T={} f={} theta={}", params.temperature, params.direct_fraction, theta),
        };
        spectra.push(ParticleSpectrum::new(meta, samples)?);
    }

    let (lo, hi) = params.angular_window;
    let window: Vec<f64> = energies.iter().copied().filter(|&e| e >= lo && e <= hi).collect();
    if window.is_empty() {
        return Err(ReactionError::InvalidParameter("angular window contains no energies"));
    }
    let mut mean = 0.0;
    for &e in &window {
        mean += params.energy_shape(e)?;
    }
    mean /= window.len() as f64;
    let mut rng = synth_stream(params.seed, params.angles_deg.len() as u64);
    let points = (1..18)
        .map(|i| {
            let theta = 10.0 * i as f64;
            let clean = mean * params.angular_factor(theta);
            AngularPoint { theta_deg: theta, value: noisy(clean, params.rel_noise, &mut rng), error: params.rel_noise * clean }
        })
        .collect();
    let label = format!("synthetic f={} E=[{lo},{hi}]", params.direct_fraction);
    let angular = AngularDistribution::new(points, lo, hi, label)?;
    Ok(SynthOutput { spectra, angular })
}

/// dσ/dΩ = Σ a_k P_k(cos θ) with relative Gaussian noise at the given angles.
pub fn synthesize_angular(
    coefficients: &[f64],
    angles_deg: &[f64],
    rel_noise: f64,
    seed: u64,
    window: (f64, f64),
    label: String,
) -> Result<AngularDistribution, ReactionError> {
    if !(rel_noise >= 0.0 && rel_noise.is_finite()) {
        return Err(ReactionError::InvalidParameter("relative noise must be finite and non-negative"));
    }
    let mut rng = synth_stream(seed, 0);
    let mut points = Vec::with_capacity(angles_deg.len());
    for (index, &theta) in angles_deg.iter().enumerate() {
        if !(theta > 0.0 && theta < 180.0) {
            return Err(ReactionError::AngleOutOfRange { index, theta });
        }
        let x = theta.to_radians().cos();
        let clean: f64 = coefficients.iter().enumerate().map(|(k, a)| a * legendre_p(k, x)).sum();
        if !(clean >= 0.0) {
            return Err(ReactionError::BadValue { index });
        }
        points.push(AngularPoint { theta_deg: theta, value: noisy(clean, rel_noise, &mut rng), error: rel_noise * clean });
    }
    AngularDistribution::new(points, window.0, window.1, label)
}
