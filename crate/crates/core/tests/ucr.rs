use progcirc::circuit::{circuit_matrix, count_gates, rotation_block};
use progcirc::numerics::DenseMatrix;
use progcirc::ucr::{decompose_ucr, solve_angles, MMatrix};
use progcirc::{Axis, Circuit, Gate, QubitRange, UniformRotation};
use proptest::prelude::*;

/// Block-diagonal reference with the target as least significant qubit.
fn block_diagonal(axis: Axis, angles: &[f64]) -> DenseMatrix {
    let dim = 2 * angles.len();
    let mut m = DenseMatrix::zeros(dim);
    for (x, &a) in angles.iter().enumerate() {
        let b = rotation_block(axis, a);
        for (r, row) in b.iter().enumerate() {
            for (col, z) in row.iter().enumerate() {
                m.set(2 * x + r, 2 * x + col, *z);
            }
        }
    }
    m
}

fn flat_matrix(k: usize, gates: Vec<Gate>) -> DenseMatrix {
    let mut circ = Circuit::new(k + 1, QubitRange::new(0, k + 1), QubitRange::new(0, 0)).unwrap();
    circ.extend(gates).unwrap();
    circuit_matrix(&circ).unwrap()
}

#[test]
fn m_matrix_is_orthogonal_up_to_scale() {
    for k in 1..=4 {
        let m = MMatrix::new(k).materialize().unwrap();
        let dim = m.len();
        for i in 0..dim {
            for j in 0..dim {
                let dot: i32 = (0..dim).map(|r| i32::from(m[r][i]) * i32::from(m[r][j])).sum();
                assert_eq!(dot, if i == j { dim as i32 } else { 0 });
            }
        }
    }
}

#[test]
fn solve_inverts_m() {
    let phi = [0.3, -1.2, 0.7, 2.0, 0.0, -0.4, 1.1, 0.9];
    let theta = solve_angles(&phi).unwrap();
    let m = MMatrix::new(3);
    for (i, p) in phi.iter().enumerate() {
        let back: f64 = (0..8).map(|j| f64::from(m.entry(i, j)) * theta[j]).sum();
        assert!((back - p).abs() < 1e-12);
    }
}

#[test]
fn zero_controls_is_a_single_rotation() {
    let g = UniformRotation::new(Axis::Y, 0, vec![], vec![0.4]).unwrap();
    let gates = decompose_ucr(&g).unwrap();
    assert_eq!(gates, vec![Gate::ry(0, 0.4)]);
}

proptest! {
    #[test]
    fn decomposition_matches_block_diagonal(
        k in 1usize..=4,
        pool in proptest::collection::vec(-3.0f64..3.0, 16),
        z in any::<bool>(),
    ) {
        let axis = if z { Axis::Z } else { Axis::Y };
        let angles = pool[..1 << k].to_vec();
        let g = UniformRotation::new(axis, k, (0..k).collect(), angles.clone()).unwrap();
        let gates = decompose_ucr(&g).unwrap();
        let mut circ = Circuit::new(k + 1, QubitRange::new(0, k + 1), QubitRange::new(0, 0)).unwrap();
        circ.extend(gates.clone()).unwrap();
        let counts = count_gates(&circ);
        prop_assert_eq!((counts.cnot, counts.single_rotation), (1 << k, 1 << k));
        let got = flat_matrix(k, gates);
        prop_assert!(got.max_abs_diff(&block_diagonal(axis, &angles)) < 1e-12);
    }
}
