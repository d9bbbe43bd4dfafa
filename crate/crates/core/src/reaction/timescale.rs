use alloc::format;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{ReactionError, HBAR_MEV_S};

/// Nucleon separation energy used when U is derived from beam energy.
pub const DEFAULT_SEPARATION_MEV: f64 = 8.0;

/// Bethe level-density inputs: a in MeV⁻¹, excitation U in MeV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDensity {
    pub a: f64,
    pub u: f64,
}

impl LevelDensity {
    /// a = A/8, U = beam + separation − emission.
    pub fn from_reaction(mass_number: f64, beam_mev: f64, separation_mev: f64, emission_mev: f64) -> Self {
        LevelDensity { a: mass_number / 8.0, u: beam_mev + separation_mev - emission_mev }
    }

    pub fn log_density(&self) -> Result<f64, ReactionError> {
        bethe_log_density(self.a, self.u)
    }
}

/// ln ρ(U) for ρ(U) = (√π/12) exp(2√(aU)) / (a^{1/4} U^{5/4}), ρ per MeV.
pub fn bethe_log_density(a: f64, u: f64) -> Result<f64, ReactionError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(ReactionError::DegenerateLevelDensity(format!("a = {a} MeV^-1")));
    }
    if !(u > 0.0 && u.is_finite()) {
        return Err(ReactionError::DegenerateLevelDensity(format!("U = {u} MeV")));
    }
    let pi = core::f64::consts::PI;
    Ok((pi.sqrt() / 12.0).ln() + 2.0 * (a * u).sqrt() - 0.25 * a.ln() - 1.25 * u.ln())
}

/// Smallest q with 2^(q−1) < N ≤ 2^q.
pub fn qubit_equivalent(n: f64) -> Result<i32, ReactionError> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(ReactionError::NonPositive("N_eff"));
    }
    Ok(qubits_from_log2(n.log2(), Some(n)))
}

fn qubits_from_log2(log2_n: f64, n: Option<f64>) -> i32 {
    let mut q = log2_n.ceil() as i32;
    if let Some(n) = n {
        // log2 can be off by an ulp near exact powers of two
        while q > -1022 && n <= 2f64.powi(q - 1) {
            q -= 1;
        }
        while n > 2f64.powi(q) {
            q += 1;
        }
    }
    q
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimescaleReport {
    pub gamma_down_mev: f64,
    pub gamma_cn_kev: f64,
    /// τ_process / τ_relax = Γ↓ / Γ_cn.
    pub time_ratio: f64,
    /// ħ/Γ↓ in seconds.
    pub tau_relax_s: f64,
    /// ħ/Γ_cn in seconds.
    pub tau_process_s: f64,
    /// ρ(U)·Γ↓. Infinite if it overflows f64; `log10_n_eff` stays exact.
    pub n_eff: f64,
    pub log10_n_eff: f64,
    pub log2_n_eff: f64,
    pub qubit_equiv: i32,
    pub level_density: LevelDensity,
}

pub fn timescale_report(gamma_down_mev: f64, gamma_cn_kev: f64, level_density: LevelDensity) -> Result<TimescaleReport, ReactionError> {
    if !(gamma_down_mev > 0.0 && gamma_down_mev.is_finite()) {
        return Err(ReactionError::NonPositive("gamma_down"));
    }
    if !(gamma_cn_kev > 0.0 && gamma_cn_kev.is_finite()) {
        return Err(ReactionError::NonPositive("gamma_cn"));
    }
    let ln_n = level_density.log_density()? + gamma_down_mev.ln();
    let log2_n_eff = ln_n / core::f64::consts::LN_2;
    let n_eff = ln_n.exp();
    let qubit_equiv = if n_eff.is_finite() && n_eff > 0.0 {
        qubits_from_log2(log2_n_eff, Some(n_eff))
    } else {
        qubits_from_log2(log2_n_eff, None)
    };
    Ok(TimescaleReport {
        gamma_down_mev,
        gamma_cn_kev,
        time_ratio: gamma_down_mev * 1000.0 / gamma_cn_kev,
        tau_relax_s: HBAR_MEV_S / gamma_down_mev,
        tau_process_s: HBAR_MEV_S / (gamma_cn_kev * 1e-3),
        n_eff,
        log10_n_eff: ln_n / core::f64::consts::LN_10,
        log2_n_eff,
        qubit_equiv,
        level_density,
    })
}
