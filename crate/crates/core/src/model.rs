//! Disorder realizations of the two-body random qubit Hamiltonian
//!
//! ```text
//! H = Σ_i L_i σ^z_i + Σ_{(i,j) coupled} J_ij P_i P_j,   P = σ^x (default) or σ^z
//! ```
//!
//! with L_i uniform in [Δ0 − δ/2, Δ0 + δ/2] and J_ij uniform in [−J, J].
//! Register states are bitstrings; qubit 0 is the most significant bit and a
//! 0 bit is the σ^z = +1 state, matching the Kronecker ordering
//! σ_0 ⊗ σ_1 ⊗ … ⊗ σ_{n−1}.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::SymmetricMatrix;
use crate::rng::realization_stream;

/// Largest qubit count accepted by [`build_hamiltonian`] (dense 2^14 × 2^14).
pub const MAX_QUBITS: usize = 14;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    /// Nearest-neighbour open chain: pairs (0,1), (1,2), …
    Chain,
    AllPairs,
    /// Nearest neighbours on an open rows × cols rectangle filled row by row,
    /// with cols the smallest divisor of n that is at least √n (n = 12 gives
    /// 3 × 4; a prime n degenerates to the chain).
    #[default]
    Lattice,
}

impl Topology {
    /// (rows, cols) of the [`Topology::Lattice`] layout for `n` qubits.
    pub fn lattice_shape(n: usize) -> (usize, usize) {
        let cols = (1..=n).find(|&c| n % c == 0 && c * c >= n).unwrap_or(n.max(1));
        (n / cols.max(1), cols)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingOp {
    /// J_ij σ^x_i σ^x_j: flips two bits, mixes register states.
    #[default]
    TransverseXx,
    /// J_ij σ^z_i σ^z_j: diagonal, never mixes register states.
    DiagonalZz,
}

impl CouplingOp {
    /// Label of the symmetry sector that contains register state `index`.
    ///
    /// σ^x_i σ^x_j flips bits pairwise, so the bit parity is conserved; the zz
    /// coupling conserves every bitstring and is treated as one sector.
    pub fn sector_of(self, index: usize) -> u32 {
        match self {
            CouplingOp::TransverseXx => index.count_ones() & 1,
            CouplingOp::DiagonalZz => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ModelError {
    #[error("n must be at least 1 (got {0})")]
    NoQubits(usize),
    #[error("splitting spread delta must be >= 0 (got {0})")]
    NegativeSpread(f64),
    #[error("coupling bound j_bound must be >= 0 (got {0})")]
    NegativeCoupling(f64),
    #[error("delta/2 = {half_spread} must be below delta0 = {delta0} so every splitting is positive")]
    NonPositiveSplitting { delta0: f64, half_spread: f64 },
    #[error("{field} is not finite")]
    NonFinite { field: &'static str },
    #[error("n = {n} exceeds the dense limit of {max} qubits (dimension 2^{n})")]
    DimensionOverflow { n: usize, max: usize },
    #[error("coupling draw has {got} splittings but the model has {expected} qubits")]
    DrawMismatch { expected: usize, got: usize },
    #[error("coupling draw contains pair ({0}, {1}) which the topology does not couple")]
    UnexpectedPair(usize, usize),
}

/// Ensemble specification. Energies are in model units (Δ0 = 1 by default).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub n: usize,
    pub delta0: f64,
    pub delta: f64,
    pub j_bound: f64,
    pub topology: Topology,
    pub coupling_op: CouplingOp,
    pub master_seed: u64,
}

impl ModelConfig {
    /// Defaults: Δ0 = 1, δ = 1, J = 0, lattice, transverse-xx, seed 0.
    pub fn new(n: usize) -> Self {
        ModelConfig {
            n,
            delta0: 1.0,
            delta: 1.0,
            j_bound: 0.0,
            topology: Topology::Lattice,
            coupling_op: CouplingOp::TransverseXx,
            master_seed: 0,
        }
    }

    pub fn with_coupling(mut self, j_bound: f64) -> Self {
        self.j_bound = j_bound;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for (field, v) in [("delta0", self.delta0), ("delta", self.delta), ("j_bound", self.j_bound)] {
            if !v.is_finite() {
                return Err(ModelError::NonFinite { field });
            }
        }
        if self.n == 0 {
            return Err(ModelError::NoQubits(self.n));
        }
        if self.delta < 0.0 {
            return Err(ModelError::NegativeSpread(self.delta));
        }
        if self.j_bound < 0.0 {
            return Err(ModelError::NegativeCoupling(self.j_bound));
        }
        if self.delta / 2.0 >= self.delta0 {
            return Err(ModelError::NonPositiveSplitting {
                delta0: self.delta0,
                half_spread: self.delta / 2.0,
            });
        }
        Ok(())
    }

    /// Hilbert-space dimension 2^n.
    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    /// Coupled pairs (i < j) in draw order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        match self.topology {
            Topology::Chain => (1..self.n).map(|j| (j - 1, j)).collect(),
            Topology::AllPairs => (0..self.n)
                .flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j)))
                .collect(),
            Topology::Lattice => {
                let (rows, cols) = Topology::lattice_shape(self.n);
                let mut pairs = Vec::new();
                for q in 0..rows * cols {
                    let (r, c) = (q / cols, q % cols);
                    if c + 1 < cols {
                        pairs.push((q, q + 1));
                    }
                    if r + 1 < rows {
                        pairs.push((q, q + cols));
                    }
                }
                pairs
            }
        }
    }
}

/// One disorder realization: splittings L_i and couplings J_ij.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingDraw {
    pub splittings: Vec<f64>,
    pub couplings: BTreeMap<(usize, usize), f64>,
    pub realization_index: u64,
}

impl CouplingDraw {
    pub fn n(&self) -> usize {
        self.splittings.len()
    }

    /// Σ|L_i| + Σ|J_ij|, an upper bound on the spectral radius.
    pub fn spectral_bound(&self) -> f64 {
        self.splittings.iter().map(|l| l.abs()).sum::<f64>()
            + self.couplings.values().map(|j| j.abs()).sum::<f64>()
    }
}

/// Draws L_i then J_ij (in [`ModelConfig::pairs`] order) from the
/// realization's own stream. Couplings are J·u with u uniform in [−1, 1), so
/// realizations at different J share their disorder pattern.
pub fn draw_couplings(config: &ModelConfig, realization_index: u64) -> CouplingDraw {
    let mut rng = realization_stream(config.master_seed, realization_index);
    let splittings = (0..config.n)
        .map(|_| config.delta0 + config.delta * (rng.random::<f64>() - 0.5))
        .collect();
    let couplings = config
        .pairs()
        .into_iter()
        .map(|p| (p, config.j_bound * (2.0 * rng.random::<f64>() - 1.0)))
        .collect();
    CouplingDraw { splittings, couplings, realization_index }
}

#[inline]
fn qubit_mask(n: usize, k: usize) -> usize {
    1usize << (n - 1 - k)
}

#[inline]
fn spin(a: usize, mask: usize) -> f64 {
    if a & mask == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Σ_k s_k L_k for every bitstring.
fn splitting_energies(l: &[f64]) -> Vec<f64> {
    let n = l.len();
    let masks: Vec<usize> = (0..n).map(|k| qubit_mask(n, k)).collect();
    (0..(1usize << n))
        .map(|a| l.iter().zip(&masks).map(|(lk, &m)| spin(a, m) * lk).sum())
        .collect()
}

fn zz_energy(a: usize, n: usize, couplings: &BTreeMap<(usize, usize), f64>) -> f64 {
    couplings
        .iter()
        .map(|(&(i, j), &jij)| jij * spin(a, qubit_mask(n, i)) * spin(a, qubit_mask(n, j)))
        .sum()
}

/// The non-interacting register basis: bitstring states and their energies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegisterBasis {
    pub n: usize,
    /// E_i indexed by bitstring.
    pub energies: Vec<f64>,
    /// Bitstring indices ordered by ascending energy (stable).
    pub sorted: Vec<usize>,
}

impl RegisterBasis {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Register state at the middle of the unperturbed spectrum.
    pub fn mid_state(&self) -> usize {
        self.sorted[self.sorted.len() / 2]
    }
}

/// Unperturbed register energies: Σ s_k L_k, plus the zz pair terms when the
/// coupling is diagonal-zz (then E_i is the exact eigenvalue).
pub fn register_basis(draw: &CouplingDraw, coupling_op: CouplingOp) -> RegisterBasis {
    let n = draw.n();
    let mut energies = splitting_energies(&draw.splittings);
    if coupling_op == CouplingOp::DiagonalZz {
        for (a, e) in energies.iter_mut().enumerate() {
            *e += zz_energy(a, n, &draw.couplings);
        }
    }
    let mut sorted: Vec<usize> = (0..energies.len()).collect();
    sorted.sort_by(|&x, &y| energies[x].total_cmp(&energies[y]));
    RegisterBasis { n, energies, sorted }
}

/// Dense Hamiltonian of one realization together with its register energies.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianMatrix {
    pub n: usize,
    pub coupling_op: CouplingOp,
    pub matrix: SymmetricMatrix,
    /// Non-interacting energies E_i (the matrix diagonal for both couplings).
    pub register_energies: Vec<f64>,
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

pub fn build_hamiltonian(draw: &CouplingDraw, config: &ModelConfig) -> Result<HamiltonianMatrix, ModelError> {
    let n = config.n;
    if n > MAX_QUBITS {
        return Err(ModelError::DimensionOverflow { n, max: MAX_QUBITS });
    }
    if draw.n() != n {
        return Err(ModelError::DrawMismatch { expected: n, got: draw.n() });
    }
    let allowed = config.pairs();
    if let Some(&(i, j)) = draw.couplings.keys().find(|p| !allowed.contains(p)) {
        return Err(ModelError::UnexpectedPair(i, j));
    }

    let basis = register_basis(draw, config.coupling_op);
    let dim = 1usize << n;
    let mut matrix = SymmetricMatrix::zeros(dim);
    for (a, &e) in basis.energies.iter().enumerate() {
        matrix.set(a, a, e);
    }
    if config.coupling_op == CouplingOp::TransverseXx {
        for (&(i, j), &jij) in &draw.couplings {
            let flip = qubit_mask(n, i) | qubit_mask(n, j);
            for a in 0..dim {
                let b = a ^ flip;
                // each unordered (a, b) is visited twice, once per row
                let v = matrix.get(a, b) + jij;
                matrix.set(a, b, v);
            }
        }
    }
    Ok(HamiltonianMatrix {
        n,
        coupling_op: config.coupling_op,
        matrix,
        register_energies: basis.energies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_qubit_has_no_pairs() {
        let cfg = ModelConfig::new(1).with_coupling(0.7).with_seed(3);
        let d = draw_couplings(&cfg, 0);
        assert!(d.couplings.is_empty());
        assert_eq!(d.splittings.len(), 1);
        let l = d.splittings[0];
        assert!((0.5..=1.5).contains(&l));
    }

    #[test]
    fn chain_keys() {
        let mut cfg = ModelConfig::new(3).with_coupling(0.1);
        cfg.topology = Topology::Chain;
        let d = draw_couplings(&cfg, 5);
        let keys: Vec<_> = d.couplings.keys().copied().collect();
        assert_eq!(keys, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn lattice_layout() {
        assert_eq!(Topology::lattice_shape(12), (3, 4));
        assert_eq!(Topology::lattice_shape(9), (3, 3));
        assert_eq!(Topology::lattice_shape(7), (1, 7));
        assert_eq!(Topology::lattice_shape(1), (1, 1));
        let cfg = ModelConfig::new(6);
        // 2 × 3:  0 1 2 / 3 4 5
        assert_eq!(cfg.pairs(), vec![(0, 1), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (4, 5)]);
        assert_eq!(ModelConfig::new(12).pairs().len(), 17);
    }

    #[test]
    fn zero_spread_all_pairs() {
        let mut cfg = ModelConfig::new(4).with_coupling(0.3);
        cfg.delta = 0.0;
        cfg.topology = Topology::AllPairs;
        let d = draw_couplings(&cfg, 1);
        assert!(d.splittings.iter().all(|&l| l == 1.0));
        assert_eq!(d.couplings.len(), 6);
        assert!(d.couplings.values().all(|j| j.abs() <= 0.3));
    }

    #[test]
    fn one_qubit_matrix() {
        let cfg = ModelConfig::new(1);
        let draw = CouplingDraw { splittings: vec![1.0], couplings: BTreeMap::new(), realization_index: 0 };
        let h = build_hamiltonian(&draw, &cfg).unwrap();
        assert_eq!(h.matrix.as_slice(), &[1.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn two_qubit_register_energies() {
        let draw = CouplingDraw { splittings: vec![1.0, 0.5], couplings: BTreeMap::new(), realization_index: 0 };
        let b = register_basis(&draw, CouplingOp::TransverseXx);
        assert_eq!(b.energies, vec![1.5, 0.5, -0.5, -1.5]);
        assert_eq!(b.sorted, vec![3, 2, 1, 0]);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(ModelConfig::new(0).validate(), Err(ModelError::NoQubits(0)));
        let mut c = ModelConfig::new(2);
        c.delta = 2.0;
        assert!(matches!(c.validate(), Err(ModelError::NonPositiveSplitting { .. })));
        let c = ModelConfig::new(2).with_coupling(-0.1);
        assert_eq!(c.validate(), Err(ModelError::NegativeCoupling(-0.1)));
    }

    #[test]
    fn overflow_reported() {
        let cfg = ModelConfig::new(MAX_QUBITS + 1);
        let draw = CouplingDraw { splittings: vec![1.0; MAX_QUBITS + 1], couplings: BTreeMap::new(), realization_index: 0 };
        assert_eq!(
            build_hamiltonian(&draw, &cfg),
            Err(ModelError::DimensionOverflow { n: MAX_QUBITS + 1, max: MAX_QUBITS })
        );
    }

    #[test]
    fn parity_sectors() {
        assert_eq!(CouplingOp::TransverseXx.sector_of(0b1011), 1);
        assert_eq!(CouplingOp::TransverseXx.sector_of(0b1001), 0);
        assert_eq!(CouplingOp::DiagonalZz.sector_of(0b1), 0);
    }
}
