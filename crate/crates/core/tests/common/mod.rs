#![allow(dead_code)]

use progcirc::numerics::{c, StateVector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(qubits: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps = (0..1usize << qubits)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(amps).unwrap()
}

pub fn random_real_state(qubits: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps: Vec<f64> = (0..1usize << qubits).map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm = amps.iter().map(|x| x * x).sum::<f64>().sqrt();
    StateVector::from_real(&amps.iter().map(|x| x / norm).collect::<Vec<_>>()).unwrap()
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Plain triple-loop product, independent of the library's matvec.
pub fn apply_matrix(u: &progcirc::DenseMatrix, v: &[C64]) -> Vec<C64> {
    (0..u.dim())
        .map(|i| (0..u.dim()).map(|j| u.get(i, j) * v[j]).sum())
        .collect()
}
