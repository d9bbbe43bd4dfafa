/// Weighted linear least squares via the normal equations (XᵀWX) c = XᵀWy,
/// solved and inverted by Gauss-Jordan elimination with partial pivoting.
///
/// Returns the coefficients and the covariance (XᵀWX)⁻¹.
pub fn normal_equations(design: &[Vec<f64>], y: &[f64], w: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let p = design[0].len();
    let mut ata = vec![vec![0.0; p]; p];
    let mut aty = vec![0.0; p];
    for ((row, &yi), &wi) in design.iter().zip(y).zip(w) {
        for r in 0..p {
            aty[r] += wi * row[r] * yi;
            for c in 0..p {
                ata[r][c] += wi * row[r] * row[c];
            }
        }
    }
    let inv = invert(&ata);
    let coef = (0..p)
        .map(|r| (0..p).map(|c| inv[r][c] * aty[c]).sum())
        .collect();
    (coef, inv)
}

pub fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, piv);
        let d = a[col][col];
        assert!(d != 0.0, "singular matrix");
        for v in a[col].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                        *x -= f * p;
                    }
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Legendre polynomial P_k(x) from the explicit low-order formulas, k ≤ 4.
pub fn legendre_explicit(k: usize, x: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => x,
        2 => 0.5 * (3.0 * x * x - 1.0),
        3 => 0.5 * (5.0 * x * x * x - 3.0 * x),
        4 => (35.0 * x.powi(4) - 30.0 * x * x + 3.0) / 8.0,
        _ => panic!("explicit Legendre table stops at order 4"),
    }
}
