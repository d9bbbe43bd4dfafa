#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{ReactionError, AMU_MEV, COULOMB_E2, HBAR_C, PROTON_MASS_MEV};

pub const DEFAULT_R0: f64 = 1.4;
/// Identifier recorded with every scaled spectrum.
pub const PENETRABILITY_MODEL: &str = "s-wave-wkb";
/// Penetrabilities below this are treated as underflow.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// Point-charge Coulomb barrier of radius R = r0·A_t^{1/3}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoulombBarrier {
    /// Charge of the light particle.
    pub zp: f64,
    /// Mass number of the light particle (1 selects the proton mass).
    pub ap: f64,
    pub zt: f64,
    pub at: f64,
    pub r0: f64,
}

impl CoulombBarrier {
    pub fn proton(zt: f64, at: f64, r0: f64) -> Self {
        CoulombBarrier { zp: 1.0, ap: 1.0, zt, at, r0 }
    }

    pub fn validate(&self) -> Result<(), ReactionError> {
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(ReactionError::NonPositiveRadius(self.r0));
        }
        if !(self.at > 0.0 && self.at.is_finite()) {
            return Err(ReactionError::InvalidNucleus("target mass number must be positive"));
        }
        if !(self.ap > 0.0 && self.ap.is_finite()) {
            return Err(ReactionError::InvalidNucleus("projectile mass number must be positive"));
        }
        if !(self.zp >= 0.0 && self.zt >= 0.0) {
            return Err(ReactionError::InvalidNucleus("charges must be non-negative"));
        }
        Ok(())
    }

    /// R in fm.
    pub fn radius(&self) -> f64 {
        self.r0 * self.at.cbrt()
    }

    /// Z_p Z_t e² in MeV·fm.
    pub fn coulomb_strength(&self) -> f64 {
        self.zp * self.zt * COULOMB_E2
    }

    /// B = Z_p Z_t e² / R in MeV.
    pub fn height(&self) -> f64 {
        self.coulomb_strength() / self.radius()
    }

    /// Reduced mass μc² in MeV.
    pub fn reduced_mass(&self) -> f64 {
        let mp = if self.ap == 1.0 { PROTON_MASS_MEV } else { self.ap * AMU_MEV };
        let mt = self.at * AMU_MEV;
        mp * mt / (mp + mt)
    }

    /// WKB exponent G = (1/ħ)∫_R^{r_c} √(2μ(V − E)) dr in closed form,
    /// √(2μc²)/(ħc) · (Z_pZ_te²/√E) · (arccos√x − √(x(1 − x))), x = E/B.
    /// Zero at and above the barrier.
    pub fn gamow_exponent(&self, e: f64) -> Result<f64, ReactionError> {
        self.validate()?;
        if !(e > 0.0 && e.is_finite()) {
            return Err(ReactionError::NonPositiveEnergy(e));
        }
        let b = self.height();
        if e >= b {
            return Ok(0.0);
        }
        let x = e / b;
        let shape = x.sqrt().acos() - (x * (1.0 - x)).sqrt();
        Ok((2.0 * self.reduced_mass()).sqrt() / HBAR_C * self.coulomb_strength() / e.sqrt() * shape)
    }

    /// s-wave transmission P = exp(−2G); exactly 1 for E ≥ B.
    pub fn penetrability(&self, e: f64) -> Result<f64, ReactionError> {
        Ok((-2.0 * self.gamow_exponent(e)?).exp())
    }
}

/// Penetrability of a light particle of charge `zp` through the barrier of a
/// target (Z_t, A_t). Z_p = 1 is a proton; heavier ions take A_p = 2 Z_p.
/// Use [`CoulombBarrier`] directly for other masses.
pub fn coulomb_penetrability(e: f64, zp: f64, zt: f64, at: f64, r0: f64) -> Result<f64, ReactionError> {
    CoulombBarrier { zp, ap: if zp == 1.0 { 1.0 } else { 2.0 * zp }, zt, at, r0 }.penetrability(e)
}
