use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Sorted independent uniform levels on [0, 1): the Poisson reference.
pub fn poisson_levels<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// GOE matrix, row-major: off-diagonal N(0, 1/2), diagonal N(0, 1).
pub fn goe_matrix<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        let d: f64 = StandardNormal.sample(rng);
        a[i * n + i] = d;
        for j in (i + 1)..n {
            let x: f64 = StandardNormal.sample(rng);
            let x = x * std::f64::consts::FRAC_1_SQRT_2;
            a[i * n + j] = x;
            a[j * n + i] = x;
        }
    }
    a
}

/// Uniform random symmetric matrix with entries in [-1, 1].
pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let x = rng.random_range(-1.0..1.0);
            a[i * n + j] = x;
            a[j * n + i] = x;
        }
    }
    a
}

/// Reference ⟨r⟩ computed directly from a level sequence.
pub fn mean_spacing_ratio(levels: &[f64]) -> (f64, usize) {
    let gaps: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).filter(|&g| g > 0.0).collect();
    let rs: Vec<f64> = gaps
        .windows(2)
        .map(|w| w[0].min(w[1]) / w[0].max(w[1]))
        .collect();
    (rs.iter().sum::<f64>() / rs.len() as f64, rs.len())
}
