use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{ReactionError, Weighting};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularPoint {
    pub theta_deg: f64,
    /// dσ/dΩ in mb/sr.
    pub value: f64,
    pub error: f64,
}

/// Cross section against angle for emission energies in `[e_min, e_max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularDistribution {
    pub points: Vec<AngularPoint>,
    pub e_min: f64,
    pub e_max: f64,
    pub label: String,
}

impl AngularDistribution {
    pub fn new(points: Vec<AngularPoint>, e_min: f64, e_max: f64, label: String) -> Result<Self, ReactionError> {
        for (index, p) in points.iter().enumerate() {
            if !(p.theta_deg > 0.0 && p.theta_deg < 180.0) {
                return Err(ReactionError::AngleOutOfRange { index, theta: p.theta_deg });
            }
            if !(p.value.is_finite() && p.value >= 0.0) || p.error.is_nan() || p.error < 0.0 {
                return Err(ReactionError::BadValue { index });
            }
        }
        Ok(AngularDistribution { points, e_min, e_max, label })
    }

    /// The same distribution with every cross section and error times `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for p in &mut out.points {
            p.value *= factor;
            p.error *= factor;
        }
        out
    }
}

/// P_k(x) by the three-term recurrence.
pub fn legendre_p(k: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    match k {
        0 => p0,
        1 => p1,
        _ => {
            for l in 1..k {
                let lf = l as f64;
                let p2 = ((2.0 * lf + 1.0) * x * p1 - lf * p0) / (lf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            p1
        }
    }
}

/// dσ/dΩ(θ) = Σ_k a_k P_k(cos θ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegendreFit {
    pub max_order: usize,
    pub coefficients: Vec<f64>,
    /// Row-major (max_order + 1)².
    pub covariance: Vec<f64>,
    /// `None` when the fit has no degrees of freedom.
    pub chi2_dof: Option<f64>,
    pub points: usize,
    pub weighting: Weighting,
}

impl LegendreFit {
    pub fn coefficient(&self, k: usize) -> f64 {
        self.coefficients.get(k).copied().unwrap_or(0.0)
    }

    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        let p = self.max_order + 1;
        if i < p && j < p {
            self.covariance[i * p + j]
        } else {
            0.0
        }
    }

    pub fn sigma(&self, k: usize) -> f64 {
        self.covariance(k, k).sqrt()
    }

    pub fn eval_cos(&self, x: f64) -> f64 {
        self.coefficients.iter().enumerate().map(|(k, a)| a * legendre_p(k, x)).sum()
    }

    pub fn eval_deg(&self, theta_deg: f64) -> f64 {
        self.eval_cos(theta_deg.to_radians().cos())
    }
}

/// Weighted linear least squares in the Legendre basis, solved by Householder
/// QR of the whitened design matrix; covariance (RᵀR)⁻¹.
///
/// Weights are 1/σ² when every point has a positive error (an infinite error
/// gives weight 0); with any error missing, unit weights are used and the
/// covariance is scaled by χ²/dof.
pub fn fit_legendre(dist: &AngularDistribution, max_order: usize) -> Result<LegendreFit, ReactionError> {
    let params = max_order + 1;
    let weighting = if dist.points.iter().all(|p| p.error > 0.0) { Weighting::InverseVariance } else { Weighting::Unit };
    let weights: Vec<f64> = dist
        .points
        .iter()
        .map(|p| match weighting {
            Weighting::InverseVariance => 1.0 / (p.error * p.error),
            Weighting::Unit => 1.0,
        })
        .collect();
    if !dist.points.is_empty() && weights.iter().all(|&w| w == 0.0) {
        return Err(ReactionError::AllZeroWeights);
    }
    let rows: Vec<usize> = (0..dist.points.len()).filter(|&i| weights[i] > 0.0).collect();
    let m = rows.len();
    if m < params {
        return Err(ReactionError::Underdetermined { points: m, params });
    }

    // whitened design, column-major: a[c * m + r]
    let mut a = vec![0.0; params * m];
    let mut b = vec![0.0; m];
    for (r, &i) in rows.iter().enumerate() {
        let sw = weights[i].sqrt();
        let x = dist.points[i].theta_deg.to_radians().cos();
        for c in 0..params {
            a[c * m + r] = sw * legendre_p(c, x);
        }
        b[r] = sw * dist.points[i].value;
    }
    let r_mat = householder_qr_solve(&mut a, &mut b, m, params)?;
    let coefficients = back_substitute(&r_mat, &b[..params], params);

    let chi2: f64 = rows
        .iter()
        .map(|&i| {
            let p = &dist.points[i];
            let x = p.theta_deg.to_radians().cos();
            let model: f64 = coefficients.iter().enumerate().map(|(k, c)| c * legendre_p(k, x)).sum();
            weights[i] * (p.value - model) * (p.value - model)
        })
        .sum();
    let dof = m - params;
    let chi2_dof = (dof > 0).then(|| chi2 / dof as f64);

    // (RᵀR)⁻¹ = R⁻¹ R⁻ᵀ
    let mut rinv = vec![0.0; params * params];
    for col in 0..params {
        let mut e = vec![0.0; params];
        e[col] = 1.0;
        let x = back_substitute(&r_mat, &e, params);
        for row in 0..params {
            rinv[row * params + col] = x[row];
        }
    }
    let mut covariance = vec![0.0; params * params];
    for i in 0..params {
        for j in 0..params {
            covariance[i * params + j] = (0..params).map(|k| rinv[i * params + k] * rinv[j * params + k]).sum();
        }
    }
    if weighting == Weighting::Unit {
        if let Some(s2) = chi2_dof {
            covariance.iter_mut().for_each(|c| *c *= s2);
        }
    }
    Ok(LegendreFit { max_order, coefficients, covariance, chi2_dof, points: m, weighting })
}

/// In-place Householder QR of the column-major m×p matrix `a`, applying the
/// reflections to `b`. Returns R row-major (p×p).
fn householder_qr_solve(a: &mut [f64], b: &mut [f64], m: usize, p: usize) -> Result<Vec<f64>, ReactionError> {
    let mut r = vec![0.0; p * p];
    for k in 0..p {
        let norm = a[k * m + k..(k + 1) * m].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(ReactionError::Underdetermined { points: m, params: p });
        }
        let alpha = if a[k * m + k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k * m + k..(k + 1) * m].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for c in k..p {
                let col = &mut a[c * m + k..(c + 1) * m];
                let s = 2.0 * col.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>() / vnorm2;
                col.iter_mut().zip(&v).for_each(|(x, y)| *x -= s * y);
            }
            let s = 2.0 * b[k..].iter().zip(&v).map(|(x, y)| x * y).sum::<f64>() / vnorm2;
            b[k..].iter_mut().zip(&v).for_each(|(x, y)| *x -= s * y);
        }
        for c in k..p {
            r[k * p + c] = a[c * m + k];
        }
    }
    let scale = (0..p).fold(0.0f64, |acc, k| acc.max(r[k * p + k].abs()));
    if (0..p).any(|k| r[k * p + k].abs() <= 1e-14 * scale) {
        return Err(ReactionError::Underdetermined { points: m, params: p });
    }
    Ok(r)
}

fn back_substitute(r: &[f64], b: &[f64], p: usize) -> Vec<f64> {
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = ((i + 1)..p).map(|j| r[i * p + j] * x[j]).sum();
        x[i] = (b[i] - s) / r[i * p + i];
    }
    x
}

/// Odd-term asymmetry of a Legendre fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryReport {
    pub a1_over_a0: f64,
    pub a1_over_a0_err: f64,
    /// (a1/a0) / σ.
    pub significance: f64,
    /// dσ/dΩ(0°) / dσ/dΩ(180°) from the fitted polynomial; `None` if the
    /// backward value is not positive.
    pub forward_backward: Option<f64>,
    pub forward_backward_err: Option<f64>,
    /// a1/a0 > 0 at three standard deviations or more.
    pub direction_memory: bool,
}

fn ratio_with_error(fit: &LegendreFit) -> Result<(f64, f64), ReactionError> {
    let a0 = fit.coefficient(0);
    if !(a0 > 0.0) {
        return Err(ReactionError::NonPositiveA0(a0));
    }
    let a1 = fit.coefficient(1);
    let ratio = a1 / a0;
    // gradient of a1/a0 w.r.t. (a0, a1) is (−a1/a0², 1/a0)
    let g0 = -a1 / (a0 * a0);
    let g1 = 1.0 / a0;
    let var = g0 * g0 * fit.covariance(0, 0) + g1 * g1 * fit.covariance(1, 1) + 2.0 * g0 * g1 * fit.covariance(0, 1);
    Ok((ratio, var.max(0.0).sqrt()))
}

pub fn asymmetry_report(fit: &LegendreFit) -> Result<AsymmetryReport, ReactionError> {
    let (ratio, err) = ratio_with_error(fit)?;
    let p = fit.max_order + 1;
    let forward: f64 = fit.coefficients.iter().sum();
    let backward: f64 = fit.coefficients.iter().enumerate().map(|(k, a)| if k % 2 == 0 { *a } else { -a }).sum();
    let (fb, fb_err) = if backward > 0.0 {
        let fb = forward / backward;
        // ∂(F/B)/∂a_k = (1 − (−1)^k F/B) / B
        let grad: Vec<f64> = (0..p).map(|k| (1.0 - if k % 2 == 0 { fb } else { -fb }) / backward).collect();
        let mut var = 0.0;
        for i in 0..p {
            for j in 0..p {
                var += grad[i] * grad[j] * fit.covariance(i, j);
            }
        }
        (Some(fb), Some(var.max(0.0).sqrt()))
    } else {
        (None, None)
    };
    let significance = if err > 0.0 { ratio / err } else if ratio == 0.0 { 0.0 } else { ratio.signum() * f64::INFINITY };
    Ok(AsymmetryReport {
        a1_over_a0: ratio,
        a1_over_a0_err: err,
        significance,
        forward_backward: fb,
        forward_backward_err: fb_err,
        direction_memory: ratio > 0.0 && significance >= 3.0,
    })
}

/// a1/a0 reported as a proxy for τ_decay/τ_phase. No functional mapping to
/// the time ratio is implied; 0 corresponds to full phase relaxation before
/// decay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimeProxy {
    pub value: f64,
    pub error: f64,
    pub definition: String,
}

pub fn phase_time_proxy(fit: &LegendreFit) -> Result<PhaseTimeProxy, ReactionError> {
    let (value, error) = ratio_with_error(fit)?;
    Ok(PhaseTimeProxy { value, error, definition: "a1/a0 (model-dependent proxy for tau_decay/tau_phase)".into() })
}
