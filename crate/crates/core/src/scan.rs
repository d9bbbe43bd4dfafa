//! Ensemble averages of the mixing observables across a grid of J/Δ0.
//!
//! Each (grid point, realization) pair is an independent unit of work:
//! [`realization_stats`] builds, diagonalizes and reduces one realization, and
//! [`aggregate_point`] reduces a point's realizations in realization order.
//! [`chaos_scan`] runs the whole grid sequentially; `meltdown-lab` schedules
//! the same units on a thread pool and gets bit-identical results.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::eigen::{diagonalize, EigenError, Spectrum, DEFAULT_TOL};
use crate::mixing::{
    participation_ratio_of, spreading_width, weighted_moments, MixingError, MixingProfile, RatioAccumulator, WidthMethod,
    GAUSSIAN_FWHM_PER_SIGMA,
};
use crate::model::{
    build_hamiltonian, draw_couplings, register_basis, CouplingDraw, HamiltonianMatrix, ModelConfig, ModelError,
    RegisterBasis,
};

pub const DEFAULT_WINDOW_FRACTION: f64 = 0.25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSettings {
    /// Coupling grid in units of Δ0.
    pub grid: Vec<f64>,
    pub realizations: u64,
    /// Fraction of eigenstates, centred on the middle of the spectrum, that
    /// enter the averages.
    pub window_fraction: f64,
    pub width_method: WidthMethod,
}

impl ScanSettings {
    pub fn new(grid: Vec<f64>, realizations: u64) -> Self {
        ScanSettings {
            grid,
            realizations,
            window_fraction: DEFAULT_WINDOW_FRACTION,
            width_method: WidthMethod::GaussianEquivalent,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScanFailure {
    Model(ModelError),
    Eigen(EigenError),
    Mixing(MixingError),
    Settings(&'static str),
}

impl fmt::Display for ScanFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanFailure::Model(e) => write!(f, "model: {e}"),
            ScanFailure::Eigen(e) => write!(f, "eigensolver: {e}"),
            ScanFailure::Mixing(e) => write!(f, "mixing statistics: {e}"),
            ScanFailure::Settings(s) => write!(f, "settings: {s}"),
        }
    }
}

/// A failure with the grid point and realization it happened in.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanError {
    pub grid_index: usize,
    pub j_over_delta0: f64,
    pub realization: u64,
    pub failure: ScanFailure,
}

impl fmt::Display for ScanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "grid point {} (J/Δ0 = {}), realization {}: {}",
            self.grid_index, self.j_over_delta0, self.realization, self.failure
        )
    }
}

impl core::error::Error for ScanError {}

/// Window-averaged observables of one realization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizationStats {
    pub realization: u64,
    pub gamma_down: f64,
    pub participation_ratio: f64,
    /// `None` when no symmetry sector has three levels in the window.
    pub spacing_ratio: Option<f64>,
    pub ratios: usize,
    pub zero_gaps: usize,
    pub states: usize,
}

/// Grid-point summary over realizations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub j_over_delta0: f64,
    pub realizations: usize,
    pub gamma_down_mean: f64,
    pub gamma_down_std: f64,
    pub gamma_down_stderr: f64,
    pub pr_mean: f64,
    pub pr_std: f64,
    pub pr_stderr: f64,
    pub r_mean: Option<f64>,
    pub r_stderr: Option<f64>,
    pub zero_gaps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub n: usize,
    pub window_fraction: f64,
    pub width_method: WidthMethod,
    pub points: Vec<ScanPoint>,
}

/// Index range of the central `fraction` of `len` states (at least one).
pub fn central_window(len: usize, fraction: f64) -> core::ops::Range<usize> {
    let width = ((fraction * len as f64).round() as usize).clamp(1, len.max(1));
    let start = (len - width) / 2;
    start..start + width
}

fn validate(settings: &ScanSettings) -> Result<(), &'static str> {
    if settings.grid.is_empty() {
        return Err("coupling grid is empty");
    }
    if settings.grid.iter().any(|j| !(j.is_finite() && *j >= 0.0)) {
        return Err("coupling grid values must be finite and >= 0");
    }
    if settings.realizations == 0 {
        return Err("at least one realization is required");
    }
    if !(settings.window_fraction > 0.0 && settings.window_fraction <= 1.0) {
        return Err("window fraction must lie in (0, 1]");
    }
    Ok(())
}

/// One built and diagonalized disorder realization.
#[derive(Clone, Debug)]
pub struct Realization {
    pub config: ModelConfig,
    pub draw: CouplingDraw,
    pub hamiltonian: HamiltonianMatrix,
    pub basis: RegisterBasis,
    pub spectrum: Spectrum,
}

/// Builds and diagonalizes realization `realization` of `template` with
/// J = `j_over_delta0` · Δ0.
pub fn build_realization(template: &ModelConfig, j_over_delta0: f64, realization: u64) -> Result<Realization, ScanFailure> {
    let mut config = template.clone();
    config.j_bound = j_over_delta0 * template.delta0;
    config.validate().map_err(ScanFailure::Model)?;
    let draw = draw_couplings(&config, realization);
    let hamiltonian = build_hamiltonian(&draw, &config).map_err(ScanFailure::Model)?;
    let basis = register_basis(&draw, config.coupling_op);
    let spectrum = diagonalize(&hamiltonian.matrix, DEFAULT_TOL).map_err(ScanFailure::Eigen)?;
    Ok(Realization { config, draw, hamiltonian, basis, spectrum })
}

/// Builds, diagonalizes and reduces realization `realization` at grid point
/// `grid_index`.
pub fn realization_stats(
    template: &ModelConfig,
    settings: &ScanSettings,
    grid_index: usize,
    realization: u64,
) -> Result<RealizationStats, ScanError> {
    let j_ratio = settings.grid[grid_index];
    let wrap = |failure| ScanError { grid_index, j_over_delta0: j_ratio, realization, failure };
    validate(settings).map_err(|s| wrap(ScanFailure::Settings(s)))?;
    let real = build_realization(template, j_ratio, realization).map_err(wrap)?;
    window_stats(&real, settings.window_fraction, settings.width_method).map_err(wrap)
}

/// Γ↓ and PR averaged over the central `window_fraction` of eigenstates, and
/// ⟨r⟩ over the central fraction of each symmetry sector.
pub fn window_stats(real: &Realization, window_fraction: f64, width_method: WidthMethod) -> Result<RealizationStats, ScanFailure> {
    let (spectrum, basis) = (&real.spectrum, &real.basis);
    let dim = spectrum.dim();
    let window = central_window(dim, window_fraction);
    let states = window.len();
    let mut gamma_sum = 0.0;
    let mut pr_sum = 0.0;
    let mut weights = Vec::with_capacity(dim);
    for k in window.clone() {
        weights.clear();
        weights.extend(spectrum.eigenvector(k).iter().map(|c| c * c));
        let gamma = match width_method {
            WidthMethod::GaussianEquivalent => {
                let (_, var) = weighted_moments(&basis.energies, &weights).map_err(ScanFailure::Mixing)?;
                GAUSSIAN_FWHM_PER_SIGMA * var.max(0.0).sqrt()
            }
            method => {
                let p = MixingProfile {
                    eigenstate: k,
                    eigenvalue: spectrum.eigenvalues()[k],
                    energies: basis.energies.clone(),
                    weights: weights.clone(),
                };
                spreading_width(&p, method).map_err(ScanFailure::Mixing)?.gamma_down
            }
        };
        gamma_sum += gamma;
        pr_sum += participation_ratio_of(&weights);
    }

    // level statistics per conserved sector
    let mut sectors: Vec<(u32, Vec<f64>)> = Vec::new();
    for k in 0..dim {
        let v = spectrum.eigenvector(k);
        let dominant = v
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (i, c)| if c.abs() > acc.1 { (i, c.abs()) } else { acc })
            .0;
        let label = real.config.coupling_op.sector_of(dominant);
        match sectors.iter_mut().find(|(l, _)| *l == label) {
            Some((_, levels)) => levels.push(spectrum.eigenvalues()[k]),
            None => sectors.push((label, alloc::vec![spectrum.eigenvalues()[k]])),
        }
    }
    sectors.sort_by_key(|(l, _)| *l);
    let mut acc = RatioAccumulator::default();
    for (_, levels) in &sectors {
        let w = central_window(levels.len(), window_fraction);
        // a sector too small for a ratio simply contributes nothing
        let _ = acc.push_sequence(&levels[w]);
    }
    let (spacing_ratio, ratios, zero_gaps) = match acc.finish() {
        Ok(s) => (Some(s.mean_ratio), s.ratios, s.zero_gaps),
        Err(_) => (None, 0, 0),
    };

    Ok(RealizationStats {
        realization: real.draw.realization_index,
        gamma_down: gamma_sum / states as f64,
        participation_ratio: pr_sum / states as f64,
        spacing_ratio,
        ratios,
        zero_gaps,
        states,
    })
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Reduces one grid point's realizations, taken in the order given.
pub fn aggregate_point(j_over_delta0: f64, stats: &[RealizationStats]) -> ScanPoint {
    let r = stats.len();
    let gammas: Vec<f64> = stats.iter().map(|s| s.gamma_down).collect();
    let prs: Vec<f64> = stats.iter().map(|s| s.participation_ratio).collect();
    let rs: Vec<f64> = stats.iter().filter_map(|s| s.spacing_ratio).collect();
    let (gamma_down_mean, gamma_down_std) = mean_std(&gammas);
    let (pr_mean, pr_std) = mean_std(&prs);
    let sqrt_r = (r as f64).sqrt();
    let (r_mean, r_stderr) = if rs.is_empty() {
        (None, None)
    } else {
        let (m, s) = mean_std(&rs);
        (Some(m), Some(s / (rs.len() as f64).sqrt()))
    };
    ScanPoint {
        j_over_delta0,
        realizations: r,
        gamma_down_mean,
        gamma_down_std,
        gamma_down_stderr: gamma_down_std / sqrt_r,
        pr_mean,
        pr_std,
        pr_stderr: pr_std / sqrt_r,
        r_mean,
        r_stderr,
        zero_gaps: stats.iter().map(|s| s.zero_gaps).sum(),
    }
}

/// Sequential scan over the grid; deterministic given `template.master_seed`.
pub fn chaos_scan(template: &ModelConfig, settings: &ScanSettings) -> Result<ScanResult, ScanError> {
    validate(settings).map_err(|s| ScanError {
        grid_index: 0,
        j_over_delta0: settings.grid.first().copied().unwrap_or(f64::NAN),
        realization: 0,
        failure: ScanFailure::Settings(s),
    })?;
    let mut points = Vec::with_capacity(settings.grid.len());
    for (g, &j) in settings.grid.iter().enumerate() {
        let stats = (0..settings.realizations)
            .map(|r| realization_stats(template, settings, g, r))
            .collect::<Result<Vec<_>, _>>()?;
        points.push(aggregate_point(j, &stats));
    }
    Ok(ScanResult {
        n: template.n,
        window_fraction: settings.window_fraction,
        width_method: settings.width_method,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn window_bounds() {
        assert_eq!(central_window(16, 0.25), 6..10);
        assert_eq!(central_window(4, 0.01), 1..2);
        assert_eq!(central_window(5, 1.0), 0..5);
    }

    #[test]
    fn zero_coupling_is_unmixed() {
        let cfg = ModelConfig::new(5).with_seed(9);
        let res = chaos_scan(&cfg, &ScanSettings::new(vec![0.0], 3)).unwrap();
        let p = &res.points[0];
        assert_eq!(p.realizations, 3);
        assert!((p.pr_mean - 1.0).abs() < 1e-12);
        assert_eq!(p.gamma_down_mean, 0.0);
    }

    #[test]
    fn empty_grid_rejected() {
        let cfg = ModelConfig::new(3);
        let err = chaos_scan(&cfg, &ScanSettings::new(vec![], 1)).unwrap_err();
        assert_eq!(err.failure, ScanFailure::Settings("coupling grid is empty"));
    }

    #[test]
    fn model_errors_carry_context() {
        let mut cfg = ModelConfig::new(3);
        cfg.delta = 5.0;
        let err = chaos_scan(&cfg, &ScanSettings::new(vec![0.1, 0.2], 2)).unwrap_err();
        assert_eq!(err.grid_index, 0);
        assert!(matches!(err.failure, ScanFailure::Model(ModelError::NonPositiveSplitting { .. })));
    }
}
