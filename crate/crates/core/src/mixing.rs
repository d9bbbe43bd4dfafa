//! Mixing observables of one diagonalized realization.
//!
//! With |Ψ_i⟩ the register states and |φ_k⟩ the eigenstates, the squared
//! overlaps W_ik = |⟨Ψ_i|φ_k⟩|² form a doubly stochastic matrix. Read along an
//! eigenstate (fixed k) they give the [`MixingProfile`] over register energies
//! E_i; read along a register state (fixed i) they give the
//! [`StrengthFunction`] (local density of states) over eigenvalues λ_k.

use alloc::borrow::Cow;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eigen::Spectrum;
use crate::model::RegisterBasis;

/// 2√(2 ln 2): FWHM of a Gaussian in units of its standard deviation.
pub const GAUSSIAN_FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

/// Eigenvalues closer than this (relative to the spectral scale) are merged
/// when a strength function is read as a distribution over energy.
pub const DEGENERACY_RTOL: f64 = 1e-10;

/// Support points whose neighbourhood is searched for the smoothed peak.
const PEAK_CANDIDATES: usize = 8;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum MixingError {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("spectrum dimension {spectrum} does not match register basis dimension {basis}")]
    DimensionMismatch { spectrum: usize, basis: usize },
    #[error("spacing statistics need at least 3 levels, got {0}")]
    TooFewLevels(usize),
    #[error("histogram bandwidth must be positive and finite (got {0})")]
    BadBandwidth(f64),
    #[error("profile is empty or has zero total weight")]
    EmptyProfile,
}

/// A normalized weight distribution over energies.
pub trait WeightProfile {
    fn energies(&self) -> &[f64];
    fn weights(&self) -> &[f64];

    /// Weights over distinguishable outcomes, as used by the participation
    /// ratio. Defaults to [`WeightProfile::weights`].
    fn participation_weights(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(self.weights())
    }
}

/// W_i = |⟨Ψ_i|φ_k⟩|² for one eigenstate k over all register states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingProfile {
    pub eigenstate: usize,
    pub eigenvalue: f64,
    /// E_i, indexed by register state.
    pub energies: Vec<f64>,
    /// W_i, indexed by register state.
    pub weights: Vec<f64>,
}

impl WeightProfile for MixingProfile {
    fn energies(&self) -> &[f64] {
        &self.energies
    }
    fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// |⟨Ψ_i|φ_k⟩|² for one register state i over all eigenstates (the LDOS).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrengthFunction {
    pub register_index: usize,
    pub register_energy: f64,
    /// λ_k, ascending.
    pub energies: Vec<f64>,
    pub weights: Vec<f64>,
}

impl WeightProfile for StrengthFunction {
    fn energies(&self) -> &[f64] {
        &self.energies
    }
    fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weights of (numerically) degenerate eigenvalues are summed, so the
    /// result does not depend on the basis chosen inside a degenerate cluster.
    fn participation_weights(&self) -> Cow<'_, [f64]> {
        Cow::Owned(merge_degenerate(&self.energies, &self.weights))
    }
}

fn merge_degenerate(energies: &[f64], weights: &[f64]) -> Vec<f64> {
    let scale = energies.iter().fold(1.0f64, |m, e| m.max(e.abs()));
    let tol = DEGENERACY_RTOL * scale;
    let mut merged: Vec<f64> = Vec::with_capacity(weights.len());
    let mut last = f64::NEG_INFINITY;
    for (&e, &w) in energies.iter().zip(weights) {
        match merged.last_mut() {
            Some(acc) if e - last <= tol => *acc += w,
            _ => merged.push(w),
        }
        last = e;
    }
    merged
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum WidthMethod {
    /// 2√(2 ln 2) times the standard deviation of the weight distribution.
    #[default]
    GaussianEquivalent,
    /// FWHM of the weight distribution smoothed with a Gaussian kernel of the
    /// given standard deviation, with the kernel width removed in quadrature.
    HistogramFwhm { bandwidth: f64 },
}

/// Spreading width Γ↓ in model energy units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthEstimate {
    pub gamma_down: f64,
    pub method: WidthMethod,
    pub centroid: f64,
}

fn check_dims(spectrum: &Spectrum, basis: &RegisterBasis) -> Result<usize, MixingError> {
    let dim = spectrum.dim();
    if basis.dim() != dim {
        return Err(MixingError::DimensionMismatch { spectrum: dim, basis: basis.dim() });
    }
    Ok(dim)
}

pub fn mixing_weights(spectrum: &Spectrum, basis: &RegisterBasis, k: usize) -> Result<MixingProfile, MixingError> {
    let dim = check_dims(spectrum, basis)?;
    if k >= dim {
        return Err(MixingError::IndexOutOfRange { index: k, dim });
    }
    Ok(MixingProfile {
        eigenstate: k,
        eigenvalue: spectrum.eigenvalues()[k],
        energies: basis.energies.clone(),
        weights: spectrum.eigenvector(k).iter().map(|c| c * c).collect(),
    })
}

pub fn ldos(spectrum: &Spectrum, basis: &RegisterBasis, i: usize) -> Result<StrengthFunction, MixingError> {
    let dim = check_dims(spectrum, basis)?;
    if i >= dim {
        return Err(MixingError::IndexOutOfRange { index: i, dim });
    }
    Ok(StrengthFunction {
        register_index: i,
        register_energy: basis.energies[i],
        energies: spectrum.eigenvalues().to_vec(),
        weights: (0..dim)
            .map(|k| {
                let c = spectrum.component(i, k);
                c * c
            })
            .collect(),
    })
}

/// Weighted centroid and variance of `energies` under `weights`.
pub fn weighted_moments(energies: &[f64], weights: &[f64]) -> Result<(f64, f64), MixingError> {
    let total: f64 = weights.iter().sum();
    if energies.is_empty() || total <= 0.0 || !total.is_finite() {
        return Err(MixingError::EmptyProfile);
    }
    let centroid = energies.iter().zip(weights).map(|(e, w)| e * w).sum::<f64>() / total;
    let var = energies
        .iter()
        .zip(weights)
        .map(|(e, w)| {
            let d = e - centroid;
            w * d * d
        })
        .sum::<f64>()
        / total;
    Ok((centroid, var))
}

pub fn spreading_width<P: WeightProfile + ?Sized>(profile: &P, method: WidthMethod) -> Result<WidthEstimate, MixingError> {
    let (energies, weights) = (profile.energies(), profile.weights());
    let (centroid, var) = weighted_moments(energies, weights)?;
    let gamma_down = match method {
        WidthMethod::GaussianEquivalent => GAUSSIAN_FWHM_PER_SIGMA * var.max(0.0).sqrt(),
        WidthMethod::HistogramFwhm { bandwidth } => {
            if !(bandwidth > 0.0 && bandwidth.is_finite()) {
                return Err(MixingError::BadBandwidth(bandwidth));
            }
            smoothed_fwhm(energies, weights, bandwidth)
        }
    };
    Ok(WidthEstimate { gamma_down, method, centroid })
}

fn smoothed_fwhm(energies: &[f64], weights: &[f64], h: f64) -> f64 {
    let support: Vec<(f64, f64)> = energies
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&e, &w)| (e, w))
        .collect();
    let lo = support.iter().fold(f64::INFINITY, |m, p| m.min(p.0));
    let hi = support.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.0));
    if support.len() <= 1 || hi - lo == 0.0 {
        return 0.0;
    }
    let mut support = support;
    support.sort_by(|a, b| a.0.total_cmp(&b.0));
    let inv2h2 = 1.0 / (2.0 * h * h);
    let reach = 8.0 * h;
    let density = |x: f64| -> f64 {
        let a = support.partition_point(|p| p.0 < x - reach);
        let b = support.partition_point(|p| p.0 <= x + reach);
        support[a..b]
            .iter()
            .map(|&(e, w)| {
                let d = x - e;
                w * (-d * d * inv2h2).exp()
            })
            .sum()
    };

    // the peak: best support point by smoothed density, refined on a local grid
    let mut candidates: Vec<(f64, f64)> = support.iter().map(|p| (density(p.0), p.0)).collect();
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)));
    let (mut peak, mut x_peak) = candidates[0];
    for &(_, e) in candidates.iter().take(PEAK_CANDIDATES) {
        for g in 0..=80 {
            let x = e - 2.0 * h + g as f64 * (h / 20.0);
            let v = density(x);
            if v > peak {
                peak = v;
                x_peak = x;
            }
        }
    }
    let half = 0.5 * peak;

    // walk outward in steps of h/10 to the first point below half maximum,
    // then bisect between it and the last point above
    let step = h / 10.0;
    let crossing = |dir: f64| -> f64 {
        let mut inside = x_peak;
        loop {
            let next = inside + dir * step;
            if density(next) < half {
                let mut outside = next;
                for _ in 0..60 {
                    let mid = 0.5 * (inside + outside);
                    if density(mid) >= half {
                        inside = mid;
                    } else {
                        outside = mid;
                    }
                }
                return 0.5 * (inside + outside);
            }
            inside = next;
        }
    };
    let (x_left, x_right) = (crossing(-1.0), crossing(1.0));
    let raw = x_right - x_left;
    let kernel = GAUSSIAN_FWHM_PER_SIGMA * h;
    (raw * raw - kernel * kernel).max(0.0).sqrt()
}

/// 1 / Σ W², between 1 and the number of outcomes for a normalized profile.
pub fn participation_ratio<P: WeightProfile + ?Sized>(profile: &P) -> f64 {
    participation_ratio_of(&profile.participation_weights())
}

pub fn participation_ratio_of(weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    let sq: f64 = weights.iter().map(|w| w * w).sum();
    total * total / sq
}

/// Consecutive-gap ratio statistics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacingStats {
    pub mean_ratio: f64,
    pub ratios: usize,
    pub zero_gaps: usize,
}

/// Gaps no larger than this (relative to the spectral scale) count as zero.
pub const ZERO_GAP_RTOL: f64 = 1e-12;

/// ⟨r⟩ with r_k = min(s_k, s_{k+1}) / max(s_k, s_{k+1}) over consecutive
/// gaps of ascending `eigenvalues`. Zero gaps are removed before forming
/// ratios and counted.
pub fn spacing_ratio_stats(eigenvalues: &[f64]) -> Result<SpacingStats, MixingError> {
    let mut acc = RatioAccumulator::default();
    acc.push_sequence(eigenvalues)?;
    acc.finish()
}

/// Pools spacing ratios over several independent level sequences (symmetry
/// sectors, realizations) without forming ratios across sequence borders.
#[derive(Clone, Debug, Default)]
pub struct RatioAccumulator {
    sum: f64,
    ratios: usize,
    zero_gaps: usize,
}

impl RatioAccumulator {
    pub fn push_sequence(&mut self, levels: &[f64]) -> Result<(), MixingError> {
        if levels.len() < 3 {
            return Err(MixingError::TooFewLevels(levels.len()));
        }
        let scale = levels.iter().fold(1.0f64, |m, e| m.max(e.abs()));
        let tol = ZERO_GAP_RTOL * scale;
        let mut prev: Option<f64> = None;
        for w in levels.windows(2) {
            let gap = w[1] - w[0];
            if gap <= tol {
                self.zero_gaps += 1;
                continue;
            }
            if let Some(p) = prev {
                self.sum += p.min(gap) / p.max(gap);
                self.ratios += 1;
            }
            prev = Some(gap);
        }
        Ok(())
    }

    pub fn finish(&self) -> Result<SpacingStats, MixingError> {
        if self.ratios == 0 {
            return Err(MixingError::TooFewLevels(self.ratios));
        }
        Ok(SpacingStats {
            mean_ratio: self.sum / self.ratios as f64,
            ratios: self.ratios,
            zero_gaps: self.zero_gaps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn profile(energies: Vec<f64>, weights: Vec<f64>) -> MixingProfile {
        MixingProfile { eigenstate: 0, eigenvalue: 0.0, energies, weights }
    }

    #[test]
    fn unit_vector_profile() {
        let p = profile(vec![-1.0, 0.0, 2.0], vec![0.0, 1.0, 0.0]);
        assert_eq!(spreading_width(&p, WidthMethod::GaussianEquivalent).unwrap().gamma_down, 0.0);
        let fwhm = spreading_width(&p, WidthMethod::HistogramFwhm { bandwidth: 0.1 }).unwrap();
        assert_eq!(fwhm.gamma_down, 0.0);
        assert_eq!(participation_ratio(&p), 1.0);
    }

    #[test]
    fn two_point_profile() {
        let p = profile(vec![-1.0, 1.0], vec![0.5, 0.5]);
        let w = spreading_width(&p, WidthMethod::GaussianEquivalent).unwrap();
        assert!((w.gamma_down - 2.354_820_045_030_949).abs() < 1e-14);
        assert_eq!(w.centroid, 0.0);
        assert_eq!(participation_ratio(&p), 2.0);
    }

    #[test]
    fn uniform_profile_pr_is_n() {
        let n = 37;
        let p = profile((0..n).map(|i| i as f64).collect(), vec![1.0 / n as f64; n]);
        assert!((participation_ratio(&p) - n as f64).abs() < 1e-10);
    }

    #[test]
    fn fwhm_of_dense_gaussian_profile() {
        // finely sampled Gaussian of σ = 1: smoothed FWHM minus kernel ≈ 2.3548
        let energies: Vec<f64> = (0..4001).map(|i| -10.0 + i as f64 * 0.005).collect();
        let mut weights: Vec<f64> = energies.iter().map(|e| (-e * e / 2.0).exp()).collect();
        let s: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= s);
        let p = profile(energies, weights);
        let w = spreading_width(&p, WidthMethod::HistogramFwhm { bandwidth: 0.2 }).unwrap();
        assert!((w.gamma_down - GAUSSIAN_FWHM_PER_SIGMA).abs() < 1e-3, "{}", w.gamma_down);
    }

    #[test]
    fn bad_bandwidth() {
        let p = profile(vec![0.0, 1.0], vec![0.5, 0.5]);
        assert_eq!(
            spreading_width(&p, WidthMethod::HistogramFwhm { bandwidth: 0.0 }),
            Err(MixingError::BadBandwidth(0.0))
        );
    }

    #[test]
    fn ladder_ratio_is_one() {
        let levels: Vec<f64> = (0..50).map(|i| 0.3 * i as f64).collect();
        let s = spacing_ratio_stats(&levels).unwrap();
        assert!((s.mean_ratio - 1.0).abs() < 1e-12);
        assert_eq!(s.ratios, 48);
    }

    #[test]
    fn zero_gaps_removed_and_counted() {
        let s = spacing_ratio_stats(&[0.0, 1.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.zero_gaps, 1);
        assert_eq!(s.ratios, 2);
        assert_eq!(s.mean_ratio, 1.0);
    }

    #[test]
    fn too_few_levels() {
        assert_eq!(spacing_ratio_stats(&[0.0, 1.0]), Err(MixingError::TooFewLevels(2)));
    }

    #[test]
    fn degenerate_merge() {
        let sf = StrengthFunction {
            register_index: 0,
            register_energy: 0.0,
            energies: vec![-1.0, 0.5, 0.5, 2.0],
            weights: vec![0.25, 0.2, 0.3, 0.25],
        };
        assert_eq!(&*sf.participation_weights(), &[0.25, 0.5, 0.25]);
    }
}
