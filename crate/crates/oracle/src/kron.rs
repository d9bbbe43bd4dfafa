/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Dense { n, a: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            a.extend_from_slice(r);
        }
        Dense { n, a }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn kron(&self, other: &Dense) -> Dense {
        let n = self.n * other.n;
        let mut out = Dense::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..other.n {
                    for l in 0..other.n {
                        out.a[(i * other.n + k) * n + j * other.n + l] =
                            self.get(i, j) * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Dense, s: f64) {
        assert_eq!(self.n, other.n);
        for (x, y) in self.a.iter_mut().zip(&other.a) {
            *x += s * y;
        }
    }
}

pub fn sigma_z() -> Dense {
    Dense::from_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

pub fn sigma_x() -> Dense {
    Dense::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

/// `op` acting on qubit `k` of `n`, qubit 0 being the leftmost Kronecker factor.
pub fn embed(op: &Dense, k: usize, n: usize) -> Dense {
    let mut out = Dense::identity(1);
    for q in 0..n {
        let f = if q == k { op.clone() } else { Dense::identity(2) };
        out = out.kron(&f);
    }
    out
}

/// Σ_i L_i σ^z_i + Σ J_ij P_i P_j with P = σ^x (`transverse`) or σ^z.
pub fn two_body_hamiltonian(l: &[f64], couplings: &[(usize, usize, f64)], transverse: bool) -> Dense {
    let n = l.len();
    let mut h = Dense::zeros(1 << n);
    for (k, &lk) in l.iter().enumerate() {
        h.add_scaled(&embed(&sigma_z(), k, n), lk);
    }
    let p = if transverse { sigma_x() } else { sigma_z() };
    for &(i, j, jij) in couplings {
        let mut term = Dense::identity(1);
        for q in 0..n {
            let f = if q == i || q == j { p.clone() } else { Dense::identity(2) };
            term = term.kron(&f);
        }
        h.add_scaled(&term, jij);
    }
    h
}

/// Register energies by explicit enumeration over sign patterns; qubit 0 is the
/// most significant bit, bit value 0 means σ^z = +1.
pub fn register_energies_bruteforce(l: &[f64]) -> Vec<f64> {
    let n = l.len();
    (0..(1usize << n))
        .map(|a| {
            (0..n)
                .map(|k| {
                    let bit = (a >> (n - 1 - k)) & 1;
                    if bit == 0 {
                        l[k]
                    } else {
                        -l[k]
                    }
                })
                .sum()
        })
        .collect()
}
