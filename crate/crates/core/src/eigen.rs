//! Dense real symmetric eigensolver.
//!
//! Householder reduction to tridiagonal form followed by implicit-shift QL
//! with accumulated transformations (the tred2/tql2 scheme). The reduction
//! works on the lower triangle in one fused pass per step for the
//! matrix-vector product. The accumulated basis is kept transposed so a plane
//! rotation touches two rows; QL rotations are logged and replayed onto narrow
//! column panels that stay in cache across many sweeps.
//!
//! [`diagonalize`] first splits the matrix into the connected components of
//! its nonzero pattern and solves each block separately. Model Hamiltonians
//! with a conserved parity fall apart into two half-size blocks this way.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{axpy, dot, SymmetricMatrix};

/// Default accuracy tolerance for the a-posteriori identities.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Relative asymmetry accepted on input.
pub const SYMMETRY_RTOL: f64 = 1e-12;
/// QL iterations allowed per eigenvalue.
pub const MAX_QL_ITERATIONS: usize = 50;

/// Basis columns per panel when replaying QL rotations.
const ROTATION_PANEL: usize = 64;
/// Rotations buffered before they are replayed onto the basis.
const ROTATION_LOG_CAPACITY: usize = 1 << 18;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix is empty")]
    Empty,
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not symmetric: max |a_ij - a_ji| = {max_asymmetry:e} exceeds {limit:e}")]
    Asymmetric { max_asymmetry: f64, limit: f64 },
    #[error("QL iteration did not converge for eigenvalue at index {index} after {iterations} iterations")]
    NonConvergence { index: usize, iterations: usize },
    #[error("accuracy check failed: {identity} off by {deviation:e} (allowed {allowed:e})")]
    AccuracyCheck { identity: &'static str, deviation: f64, allowed: f64 },
    #[error("spectrum buffers inconsistent with dimension {dim}")]
    Shape { dim: usize },
}

/// Eigenvalues (ascending) and orthonormal eigenvectors.
///
/// Eigenvectors are stored column-major: eigenvector `k` is the contiguous
/// slice `[k * dim, (k + 1) * dim)`. Each eigenvector's largest-magnitude
/// component is positive (first such index on ties).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    dim: usize,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<f64>,
}

impl Spectrum {
    pub fn from_parts(dim: usize, eigenvalues: Vec<f64>, eigenvectors: Vec<f64>) -> Result<Self, EigenError> {
        if eigenvalues.len() != dim || eigenvectors.len() != dim * dim {
            return Err(EigenError::Shape { dim });
        }
        Ok(Spectrum { dim, eigenvalues, eigenvectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[f64] {
        &self.eigenvectors[k * self.dim..(k + 1) * self.dim]
    }

    /// ⟨i|φ_k⟩.
    #[inline]
    pub fn component(&self, i: usize, k: usize) -> f64 {
        self.eigenvectors[k * self.dim + i]
    }

    pub fn eigenvectors_column_major(&self) -> &[f64] {
        &self.eigenvectors
    }

    /// max_k ‖H v_k − λ_k v_k‖₂. H is compressed to its nonzeros first.
    pub fn max_residual(&self, h: &SymmetricMatrix) -> f64 {
        let n = self.dim;
        let mut starts = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        starts.push(0);
        for i in 0..n {
            for (j, &x) in h.row(i).iter().enumerate() {
                if x != 0.0 {
                    cols.push(j);
                    vals.push(x);
                }
            }
            starts.push(cols.len());
        }
        let mut worst = 0.0f64;
        for k in 0..n {
            let v = self.eigenvector(k);
            let lam = self.eigenvalues[k];
            let mut sq = 0.0;
            for i in 0..n {
                let range = starts[i]..starts[i + 1];
                let hv: f64 = cols[range.clone()].iter().zip(&vals[range]).map(|(&j, &x)| x * v[j]).sum();
                let r = hv - lam * v[i];
                sq += r * r;
            }
            worst = worst.max(sq.sqrt());
        }
        worst
    }

    /// ‖VᵀV − I‖_max, computed in tiles of vectors × components.
    pub fn orthonormality_error(&self) -> f64 {
        const VECS: usize = 32;
        const ROWS: usize = 512;
        let n = self.dim;
        let mut worst = 0.0f64;
        let mut acc = [[0.0f64; VECS]; VECS];
        for a0 in (0..n).step_by(VECS) {
            let a1 = (a0 + VECS).min(n);
            for b0 in (a0..n).step_by(VECS) {
                let b1 = (b0 + VECS).min(n);
                acc.iter_mut().for_each(|row| row.fill(0.0));
                for r0 in (0..n).step_by(ROWS) {
                    let r1 = (r0 + ROWS).min(n);
                    for a in a0..a1 {
                        let va = &self.eigenvectors[a * n + r0..a * n + r1];
                        for b in b0.max(a)..b1 {
                            acc[a - a0][b - b0] += dot(va, &self.eigenvectors[b * n + r0..b * n + r1]);
                        }
                    }
                }
                for a in a0..a1 {
                    for b in b0.max(a)..b1 {
                        let target = if a == b { 1.0 } else { 0.0 };
                        worst = worst.max((acc[a - a0][b - b0] - target).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Eigendecomposition of a symmetric matrix, solving each connected block of
/// the nonzero pattern independently.
///
/// `tol` bounds the a-posteriori checks Σλ = tr H (relative to ‖H‖_F) and
/// Σλ² = ‖H‖_F² (relative to ‖H‖_F²).
pub fn diagonalize(h: &SymmetricMatrix, tol: f64) -> Result<Spectrum, EigenError> {
    check_input(h)?;
    let n = h.dim();
    let blocks = connected_blocks(h);

    // (eigenvalue, block, position within block)
    let mut entries: Vec<(f64, usize, usize)> = Vec::with_capacity(n);
    let mut block_vecs: Vec<Vec<f64>> = Vec::with_capacity(blocks.len());
    for (b, members) in blocks.iter().enumerate() {
        let m = members.len();
        let (vals, vecs) = if m == 1 {
            (vec![h.get(members[0], members[0])], vec![1.0])
        } else {
            let mut sub = vec![0.0; m * m];
            for (r, &i) in members.iter().enumerate() {
                let row = h.row(i);
                for (c, &j) in members.iter().enumerate() {
                    sub[r * m + c] = row[j];
                }
            }
            dense_eigh(sub, m).map_err(|local| match local {
                EigenError::NonConvergence { index, iterations } => {
                    EigenError::NonConvergence { index: members[index], iterations }
                }
                other => other,
            })?
        };
        entries.extend(vals.iter().enumerate().map(|(pos, &v)| (v, b, pos)));
        block_vecs.push(vecs);
    }
    entries.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = vec![0.0; n * n];
    for (k, &(val, b, pos)) in entries.iter().enumerate() {
        eigenvalues.push(val);
        let members = &blocks[b];
        let m = members.len();
        let local = &block_vecs[b][pos * m..(pos + 1) * m];
        let col = &mut eigenvectors[k * n..(k + 1) * n];
        for (&i, &x) in members.iter().zip(local) {
            col[i] = x;
        }
        fix_sign(col);
    }
    let spectrum = Spectrum { dim: n, eigenvalues, eigenvectors };
    check_identities(h, &spectrum, tol)?;
    Ok(spectrum)
}

/// Eigendecomposition treating the whole matrix as one dense block.
pub fn diagonalize_dense(h: &SymmetricMatrix, tol: f64) -> Result<Spectrum, EigenError> {
    check_input(h)?;
    let n = h.dim();
    let (eigenvalues, mut eigenvectors) = dense_eigh(h.as_slice().to_vec(), n)?;
    for col in eigenvectors.chunks_exact_mut(n) {
        fix_sign(col);
    }
    let spectrum = Spectrum { dim: n, eigenvalues, eigenvectors };
    check_identities(h, &spectrum, tol)?;
    Ok(spectrum)
}

fn check_input(h: &SymmetricMatrix) -> Result<(), EigenError> {
    if h.dim() == 0 {
        return Err(EigenError::Empty);
    }
    if h.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(EigenError::NonFinite);
    }
    let limit = SYMMETRY_RTOL * h.max_abs();
    let max_asymmetry = h.max_asymmetry();
    if max_asymmetry > limit {
        return Err(EigenError::Asymmetric { max_asymmetry, limit });
    }
    Ok(())
}

fn check_identities(h: &SymmetricMatrix, s: &Spectrum, tol: f64) -> Result<(), EigenError> {
    let fro_sq = h.frobenius_norm_sq();
    let fro = fro_sq.sqrt();
    let trace_dev = (s.eigenvalues.iter().sum::<f64>() - h.trace()).abs();
    let allowed = tol * fro.max(f64::MIN_POSITIVE);
    if trace_dev > allowed {
        return Err(EigenError::AccuracyCheck { identity: "trace", deviation: trace_dev, allowed });
    }
    let sq_dev = (s.eigenvalues.iter().map(|x| x * x).sum::<f64>() - fro_sq).abs();
    let allowed = tol * fro_sq.max(f64::MIN_POSITIVE);
    if sq_dev > allowed {
        return Err(EigenError::AccuracyCheck { identity: "frobenius", deviation: sq_dev, allowed });
    }
    Ok(())
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Connected components of the graph with an edge wherever a_ij ≠ 0, each
/// listed in ascending index order; components ordered by smallest member.
fn connected_blocks(h: &SymmetricMatrix) -> Vec<Vec<usize>> {
    let n = h.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        let row = h.row(i);
        for (j, &x) in row.iter().enumerate().skip(i + 1) {
            if x != 0.0 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
                    parent[hi] = lo;
                }
            }
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    blocks
}

/// Full eigendecomposition of a dense symmetric row-major matrix.
///
/// Returns ascending eigenvalues and eigenvectors, eigenvector `k` stored
/// contiguously at `[k * n, (k + 1) * n)`. Signs are not normalized.
pub(crate) fn dense_eigh(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>), EigenError> {
    debug_assert_eq!(a.len(), n * n);
    if n == 1 {
        return Ok((vec![a[0]], vec![1.0]));
    }
    let (mut d, mut e, mut basis) = tridiagonalize(&mut a, n);
    drop(a);
    // off[i] couples i and i+1
    e.rotate_left(1);
    e[n - 1] = 0.0;
    tridiagonal_ql(&mut d, &mut e, &mut basis, n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]).then(x.cmp(&y)));
    let vals = order.iter().map(|&k| d[k]).collect();
    let mut vecs = vec![0.0; n * n];
    for (dst, &k) in order.iter().enumerate() {
        vecs[dst * n..(dst + 1) * n].copy_from_slice(&basis[k * n..(k + 1) * n]);
    }
    Ok((vals, vecs))
}

/// Householder reduction A = Q T Qᵀ.
///
/// Returns the diagonal `d`, the subdiagonal `e` (e[i] = T[i][i−1], e[0] = 0)
/// and Qᵀ row-major, i.e. row c holds column c of Q. `a` is overwritten with
/// the Householder vectors.
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut hs = vec![0.0; n];
    let mut p = vec![0.0; n];

    for i in (1..n).rev() {
        let (top, bottom) = a.split_at_mut(i * n);
        let u = &mut bottom[..i];
        if i == 1 {
            e[1] = u[0];
            continue;
        }
        let scale: f64 = u.iter().map(|x| x.abs()).sum();
        if scale == 0.0 {
            e[i] = 0.0;
            continue;
        }
        let mut h = 0.0;
        for x in u.iter_mut() {
            *x /= scale;
            h += *x * *x;
        }
        let f = u[i - 1];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        u[i - 1] = f - g;
        hs[i] = h;

        // p = B u / h from the lower triangle of the active block B = a[0..i][0..i]
        p[..i].iter_mut().for_each(|x| *x = 0.0);
        for j in 0..i {
            let row = &top[j * n..j * n + j];
            let uj = u[j];
            let s = dot_axpy(row, &u[..j], uj, &mut p[..j]);
            p[j] += s + top[j * n + j] * uj;
        }
        let hinv = 1.0 / h;
        p[..i].iter_mut().for_each(|x| *x *= hinv);
        let k = dot(u, &p[..i]) / (2.0 * h);
        for j in 0..i {
            p[j] -= k * u[j];
        }
        // B -= u qᵀ + q uᵀ, lower triangle
        for j in 0..i {
            let row = &mut top[j * n..j * n + j + 1];
            axpy(-u[j], &p[..=j], row);
            axpy(-p[j], &u[..=j], row);
        }
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }

    // Qᵀ = P_2 P_3 ⋯ P_{n−1}, built left to right; P_i only touches the
    // leading i×i block.
    let mut qt = vec![0.0; n * n];
    for i in 0..n {
        qt[i * n + i] = 1.0;
    }
    for i in 2..n {
        let h = hs[i];
        if h == 0.0 {
            continue;
        }
        let u = &a[i * n..i * n + i];
        for r in 0..i {
            let row = &mut qt[r * n..r * n + i];
            let s = dot(row, u) / h;
            axpy(-s, u, row);
        }
    }
    (d, e, qt)
}

/// Returns x·y and adds alpha·x to z in the same pass.
#[inline]
fn dot_axpy(x: &[f64], y: &[f64], alpha: f64, z: &mut [f64]) -> f64 {
    let len = x.len().min(y.len()).min(z.len());
    let (x, y, z) = (&x[..len], &y[..len], &mut z[..len]);
    let mut acc = [0.0f64; 4];
    let mut xc = x.chunks_exact(4);
    let mut yc = y.chunks_exact(4);
    let mut zc = z.chunks_exact_mut(4);
    for ((xs, ys), zs) in (&mut xc).zip(&mut yc).zip(&mut zc) {
        for t in 0..4 {
            acc[t] += xs[t] * ys[t];
            zs[t] += alpha * xs[t];
        }
    }
    let mut tail = 0.0;
    for ((a, b), c) in xc.remainder().iter().zip(yc.remainder()).zip(zc.into_remainder()) {
        tail += a * b;
        *c += alpha * a;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Implicit-shift QL on the symmetric tridiagonal (d, off), rotating the rows
/// of `z` alongside. On return `d` holds the eigenvalues (unsorted) and row k
/// of `z` the eigenvector for d[k].
fn tridiagonal_ql(d: &mut [f64], off: &mut [f64], z: &mut [f64], n: usize) -> Result<(), EigenError> {
    let eps = f64::EPSILON;
    let mut shift_total = 0.0;
    let mut tst1: f64 = 0.0;
    let mut rotations = RotationLog::new(n);

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + off[l].abs());
        let mut m = l;
        while m < n - 1 && off[m].abs() > eps * tst1 {
            m += 1;
        }
        let mut iterations = 0;
        while m > l && iterations <= MAX_QL_ITERATIONS {
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(EigenError::NonConvergence { index: l, iterations: MAX_QL_ITERATIONS });
            }

            let g = d[l];
            let mut p = (d[l + 1] - g) / (2.0 * off[l]);
            let mut r = p.hypot(1.0);
            if p < 0.0 {
                r = -r;
            }
            d[l] = off[l] / (p + r);
            d[l + 1] = off[l] * (p + r);
            let dl1 = d[l + 1];
            let mut h = g - d[l];
            for x in d.iter_mut().skip(l + 2) {
                *x -= h;
            }
            shift_total += h;

            p = d[m];
            let mut c = 1.0;
            let mut c2 = c;
            let mut c3 = c;
            let el1 = off[l + 1];
            let mut s = 0.0;
            let mut s2 = 0.0;
            rotations.begin_sweep(l);
            for i in (l..m).rev() {
                c3 = c2;
                c2 = c;
                s2 = s;
                let g = c * off[i];
                h = c * p;
                r = p.hypot(off[i]);
                off[i + 1] = s * r;
                s = off[i] / r;
                c = p / r;
                p = c * d[i] - s * g;
                d[i + 1] = h + s * (c * g + s * d[i]);
                rotations.push(c, s);
            }
            p = -s * s2 * c3 * el1 * off[l] / dl1;
            off[l] = s * p;
            d[l] = c * p;

            if rotations.is_full() {
                rotations.flush(z);
            }
            if off[l].abs() <= eps * tst1 {
                break;
            }
        }
        d[l] += shift_total;
        off[l] = 0.0;
    }
    rotations.flush(z);
    Ok(())
}

/// Rotations of consecutive QL sweeps, replayed onto the basis in column
/// panels so each panel stays in cache across many sweeps.
struct RotationLog {
    n: usize,
    /// (l, offset into cs/sn) per sweep; a sweep of length k rotates rows
    /// (l + k − 1, l + k), ..., (l, l + 1) in that order.
    sweeps: Vec<(usize, usize)>,
    cs: Vec<f64>,
    sn: Vec<f64>,
    panel: Vec<f64>,
}

impl RotationLog {
    fn new(n: usize) -> Self {
        RotationLog { n, sweeps: Vec::new(), cs: Vec::new(), sn: Vec::new(), panel: vec![0.0; n * ROTATION_PANEL] }
    }

    fn begin_sweep(&mut self, l: usize) {
        self.sweeps.push((l, self.cs.len()));
    }

    #[inline]
    fn push(&mut self, c: f64, s: f64) {
        self.cs.push(c);
        self.sn.push(s);
    }

    fn is_full(&self) -> bool {
        self.cs.len() >= ROTATION_LOG_CAPACITY
    }

    fn flush(&mut self, z: &mut [f64]) {
        if self.cs.is_empty() {
            return;
        }
        let n = self.n;
        let mut start = 0;
        while start < n {
            let w = ROTATION_PANEL.min(n - start);
            let panel = &mut self.panel[..n * w];
            for r in 0..n {
                panel[r * w..(r + 1) * w].copy_from_slice(&z[r * n + start..r * n + start + w]);
            }
            for (s_idx, &(l, off)) in self.sweeps.iter().enumerate() {
                let end = self.sweeps.get(s_idx + 1).map_or(self.cs.len(), |x| x.1);
                let len = end - off;
                for (k, (&c, &s)) in self.cs[off..end].iter().zip(&self.sn[off..end]).enumerate() {
                    let i = l + len - 1 - k;
                    let (lo, hi) = panel.split_at_mut((i + 1) * w);
                    for (a, b) in lo[i * w..].iter_mut().zip(hi[..w].iter_mut()) {
                        let h = *b;
                        *b = s * *a + c * h;
                        *a = c * *a - s * h;
                    }
                }
            }
            for r in 0..n {
                z[r * n + start..r * n + start + w].copy_from_slice(&panel[r * w..(r + 1) * w]);
            }
            start += w;
        }
        self.sweeps.clear();
        self.cs.clear();
        self.sn.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_closed_form() {
        let (a, b) = (0.3, 1.7);
        let h = SymmetricMatrix::from_row_major(2, vec![a, b, b, a]);
        let s = diagonalize(&h, DEFAULT_TOL).unwrap();
        assert!((s.eigenvalues()[0] - (a - b)).abs() < 1e-15);
        assert!((s.eigenvalues()[1] - (a + b)).abs() < 1e-15);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let v0 = s.eigenvector(0);
        assert!((v0[0].abs() - r).abs() < 1e-15 && (v0[0] + v0[1]).abs() < 1e-15);
        let v1 = s.eigenvector(1);
        assert!((v1[0] - r).abs() < 1e-15 && (v1[1] - r).abs() < 1e-15);
    }

    #[test]
    fn diagonal_is_sorted_permuted_identity() {
        let d = [3.0, -1.0, 2.0, -1.0];
        let s = diagonalize(&SymmetricMatrix::from_diagonal(&d), DEFAULT_TOL).unwrap();
        assert_eq!(s.eigenvalues(), &[-1.0, -1.0, 2.0, 3.0]);
        assert_eq!(s.eigenvector(0), &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(s.eigenvector(1), &[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(s.eigenvector(2), &[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(s.eigenvector(3), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_asymmetric() {
        let h = SymmetricMatrix::from_row_major(2, vec![1.0, 0.5, 0.4, 1.0]);
        match diagonalize(&h, DEFAULT_TOL) {
            Err(EigenError::Asymmetric { max_asymmetry, .. }) => assert!((max_asymmetry - 0.1).abs() < 1e-12),
            other => panic!("expected asymmetry error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_and_nan() {
        assert_eq!(diagonalize(&SymmetricMatrix::zeros(0), DEFAULT_TOL), Err(EigenError::Empty));
        let h = SymmetricMatrix::from_row_major(1, vec![f64::NAN]);
        assert_eq!(diagonalize(&h, DEFAULT_TOL), Err(EigenError::NonFinite));
    }

    #[test]
    fn blocks_found() {
        let mut h = SymmetricMatrix::zeros(5);
        h.set_sym(0, 3, 1.0);
        h.set_sym(3, 4, 1.0);
        h.set_sym(1, 2, 1.0);
        let b = connected_blocks(&h);
        assert_eq!(b, vec![vec![0, 3, 4], vec![1, 2]]);
    }

    #[test]
    fn block_and_dense_paths_agree() {
        let mut h = SymmetricMatrix::zeros(6);
        let vals = [0.5, -1.0, 2.0, 0.25, 1.5, -0.75];
        for (i, v) in vals.iter().enumerate() {
            h.set(i, i, *v);
        }
        h.set_sym(0, 2, 0.3);
        h.set_sym(2, 4, -0.2);
        h.set_sym(1, 3, 0.7);
        h.set_sym(3, 5, 0.1);
        let a = diagonalize(&h, DEFAULT_TOL).unwrap();
        let b = diagonalize_dense(&h, DEFAULT_TOL).unwrap();
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            assert!((x - y).abs() < 1e-13);
        }
        for k in 0..6 {
            for i in 0..6 {
                assert!((a.component(i, k) - b.component(i, k)).abs() < 1e-12);
            }
        }
    }
}
