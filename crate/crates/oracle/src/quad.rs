/// Adaptive Simpson quadrature with Richardson correction; `rel_tol` is
/// relative to a coarse estimate of the integral.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let coarse: f64 = (0..=64).map(|i| f(a + (b - a) * i as f64 / 64.0).abs()).sum::<f64>() * (b - a) / 65.0;
    recurse(f, a, b, fa, fm, fb, whole, rel_tol * coarse.max(f64::MIN_POSITIVE), 40)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// WKB barrier exponent G = (1/ħc) ∫ √(2μc² (V(r) − E)) dr between `r_in` and
/// the turning point `r_out`, by quadrature. The substitution r = r_out − t²
/// removes the square-root endpoint singularity.
pub fn wkb_exponent<V: Fn(f64) -> f64>(v: &V, e: f64, mu_c2: f64, hbar_c: f64, r_in: f64, r_out: f64) -> f64 {
    let tmax = (r_out - r_in).sqrt();
    let integrand = |t: f64| {
        let r = r_out - t * t;
        let k = 2.0 * mu_c2 * (v(r) - e);
        2.0 * t * k.max(0.0).sqrt()
    };
    adaptive_simpson(&integrand, 0.0, tmax, 1e-12) / hbar_c
}
