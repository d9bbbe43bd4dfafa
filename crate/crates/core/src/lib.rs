//! Core numerics for studying eigenstate mixing in random two-body qubit
//! Hamiltonians and for analysing compound-nucleus reaction data.
//!
//! The crate is `no_std` (it needs `alloc`) and does no IO. File formats,
//! configuration, parallel execution and the command line live in
//! `meltdown-lab`.
//!
//! * [`model`]: disorder realizations of H = Σ L_i σ^z_i + Σ J_ij P_i P_j and
//!   the non-interacting register basis.
//! * [`eigen`]: dense symmetric eigensolver (Householder + implicit QL).
//! * [`mixing`]: mixing weights, strength functions, spreading widths,
//!   participation ratios and spacing ratios.
//! * [`scan`]: ensemble averages of the mixing observables over a coupling grid.
//! * [`reaction`]: Coulomb penetrability, spectrum scaling, temperature and
//!   Legendre fits, time-scale and effective-dimension estimates.
//!
//! Float math goes through `num_traits::Float` (backed by libm). Those imports
//! are marked `allow(unused_imports)` because std's inherent float methods
//! take precedence whenever std is in the build graph, as it is under test.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod eigen;
pub mod linalg;
pub mod mixing;
pub mod model;
pub mod reaction;
pub mod rng;
pub mod scan;

pub use eigen::{diagonalize, EigenError, Spectrum};
pub use linalg::SymmetricMatrix;
pub use model::{
    build_hamiltonian, draw_couplings, register_basis, CouplingDraw, CouplingOp, HamiltonianMatrix,
    ModelConfig, ModelError, RegisterBasis, Topology,
};
