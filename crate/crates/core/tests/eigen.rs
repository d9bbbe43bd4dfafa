use meltdown_core::eigen::{diagonalize, diagonalize_dense, EigenError, DEFAULT_TOL};
use meltdown_core::model::{build_hamiltonian, draw_couplings, CouplingOp, ModelConfig, Topology};
use meltdown_core::SymmetricMatrix;
use meltdown_oracle::jacobi::{jacobi_eigenvalues, jacobi_eigh};
use meltdown_oracle::sample::random_symmetric;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_contract(h: &SymmetricMatrix) {
    let s = diagonalize(h, DEFAULT_TOL).unwrap();
    let fro = h.frobenius_norm_sq().sqrt();
    assert!(s.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    assert!(s.orthonormality_error() <= 1e-10, "orthonormality {}", s.orthonormality_error());
    assert!(s.max_residual(h) <= 1e-10 * fro.max(1.0), "residual {}", s.max_residual(h));
}

#[test]
fn random_8x8_matches_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let a = random_symmetric(&mut rng, 8);
        let want = jacobi_eigenvalues(&a, 8);
        let s = diagonalize(&SymmetricMatrix::from_row_major(8, a), DEFAULT_TOL).unwrap();
        for (x, y) in s.eigenvalues().iter().zip(&want) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn eigenvectors_match_jacobi_up_to_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 12;
    let a = random_symmetric(&mut rng, n);
    let (_, vecs) = jacobi_eigh(&a, n);
    let s = diagonalize(&SymmetricMatrix::from_row_major(n, a), DEFAULT_TOL).unwrap();
    for k in 0..n {
        let ours = s.eigenvector(k);
        let theirs = &vecs[k * n..(k + 1) * n];
        let overlap: f64 = ours.iter().zip(theirs).map(|(x, y)| x * y).sum();
        assert!((overlap.abs() - 1.0).abs() < 1e-9, "vector {k}: overlap {overlap}");
    }
}

#[test]
fn sign_convention() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = random_symmetric(&mut rng, 20);
    let s = diagonalize(&SymmetricMatrix::from_row_major(20, a), DEFAULT_TOL).unwrap();
    for k in 0..20 {
        let v = s.eigenvector(k);
        let big = v.iter().fold(0.0f64, |m, x| if x.abs() > m.abs() { *x } else { m });
        assert!(big > 0.0);
    }
}

#[test]
fn degenerate_eigenspace_is_orthonormal() {
    // 1 ⊕ (J_3 all-ones) has eigenvalues {0, 0, 1, 3}
    let mut h = SymmetricMatrix::zeros(4);
    h.set(0, 0, 1.0);
    for i in 1..4 {
        for j in 1..4 {
            h.set(i, j, 1.0);
        }
    }
    let s = diagonalize(&h, DEFAULT_TOL).unwrap();
    let vals = s.eigenvalues();
    assert!(vals[0].abs() < 1e-14 && vals[1].abs() < 1e-14);
    assert!((vals[2] - 1.0).abs() < 1e-14 && (vals[3] - 3.0).abs() < 1e-14);
    assert!(s.orthonormality_error() < 1e-14);
    assert!(s.max_residual(&h) < 1e-14);
}

#[test]
fn model_hamiltonians_meet_contract() {
    for n in 1..=9 {
        for (topology, op) in [
            (Topology::Chain, CouplingOp::TransverseXx),
            (Topology::AllPairs, CouplingOp::TransverseXx),
            (Topology::Chain, CouplingOp::DiagonalZz),
            (Topology::Lattice, CouplingOp::TransverseXx),
        ] {
            for j in [0.0, 0.02, 0.48, 2.0] {
                let mut config = ModelConfig::new(n).with_coupling(j).with_seed(n as u64);
                config.topology = topology;
                config.coupling_op = op;
                let d = draw_couplings(&config, 0);
                check_contract(&build_hamiltonian(&d, &config).unwrap().matrix);
            }
        }
    }
}

#[test]
fn non_convergence_and_errors_are_explicit() {
    let err = EigenError::NonConvergence { index: 7, iterations: 50 };
    assert!(err.to_string().contains("index 7"));
    let h = SymmetricMatrix::from_row_major(2, vec![0.0, 1.0, 1.0 + 1e-6, 0.0]);
    assert!(matches!(diagonalize(&h, DEFAULT_TOL), Err(EigenError::Asymmetric { .. })));
    let h = SymmetricMatrix::from_row_major(2, vec![0.0, 1.0, 1.0 + 1e-13, 0.0]);
    assert!(diagonalize(&h, DEFAULT_TOL).is_ok());
}

#[test]
fn output_is_deterministic() {
    let config = ModelConfig::new(8).with_coupling(0.5).with_seed(42);
    let h = build_hamiltonian(&draw_couplings(&config, 1), &config).unwrap();
    assert_eq!(diagonalize(&h.matrix, DEFAULT_TOL).unwrap(), diagonalize(&h.matrix, DEFAULT_TOL).unwrap());
}

fn matrix_strategy() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1usize..=64, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (n, random_symmetric(&mut rng, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigenvalues_match_jacobi((n, a) in matrix_strategy()) {
        let want = jacobi_eigenvalues(&a, n);
        let h = SymmetricMatrix::from_row_major(n, a);
        let s = diagonalize(&h, DEFAULT_TOL).unwrap();
        for (x, y) in s.eigenvalues().iter().zip(&want) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let fro_sq = h.frobenius_norm_sq();
        let fro = fro_sq.sqrt();
        prop_assert!((s.eigenvalues().iter().sum::<f64>() - h.trace()).abs() <= 1e-9 * fro);
        prop_assert!((s.eigenvalues().iter().map(|x| x * x).sum::<f64>() - fro_sq).abs() <= 1e-9 * fro_sq);
        prop_assert!(s.orthonormality_error() <= 1e-10);
        prop_assert!(s.max_residual(&h) <= 1e-10 * fro.max(1.0));
    }

    #[test]
    fn shift_moves_eigenvalues_only((n, a) in matrix_strategy(), eps in -3.0f64..3.0) {
        let h = SymmetricMatrix::from_row_major(n, a.clone());
        let mut shifted = a;
        for i in 0..n {
            shifted[i * n + i] += eps;
        }
        let s0 = diagonalize(&h, DEFAULT_TOL).unwrap();
        let s1 = diagonalize(&SymmetricMatrix::from_row_major(n, shifted), DEFAULT_TOL).unwrap();
        for (x, y) in s0.eigenvalues().iter().zip(s1.eigenvalues()) {
            prop_assert!((y - x - eps).abs() < 1e-9);
        }
        // compare eigenvectors only where the eigenvalue is well separated
        let vals = s0.eigenvalues();
        for k in 0..n {
            let gap = [k.checked_sub(1).map(|p| vals[k] - vals[p]), vals.get(k + 1).map(|v| v - vals[k])]
                .into_iter()
                .flatten()
                .fold(f64::INFINITY, f64::min);
            if gap > 1e-3 {
                let overlap: f64 = s0.eigenvector(k).iter().zip(s1.eigenvector(k)).map(|(x, y)| x * y).sum();
                prop_assert!((overlap.abs() - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn block_split_matches_dense((n, a) in matrix_strategy(), keep in 0.0f64..1.0) {
        // sparsify so the nonzero pattern falls apart into several blocks
        let mut b = a;
        for i in 0..n {
            for j in (i + 1)..n {
                if ((i * 31 + j * 17) % 100) as f64 >= keep * 20.0 {
                    b[i * n + j] = 0.0;
                    b[j * n + i] = 0.0;
                }
            }
        }
        let h = SymmetricMatrix::from_row_major(n, b);
        let split = diagonalize(&h, DEFAULT_TOL).unwrap();
        let dense = diagonalize_dense(&h, DEFAULT_TOL).unwrap();
        for (x, y) in split.eigenvalues().iter().zip(dense.eigenvalues()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert!(split.max_residual(&h) <= 1e-10 * h.frobenius_norm_sq().sqrt().max(1.0));
        prop_assert!(split.orthonormality_error() <= 1e-10);
    }
}
