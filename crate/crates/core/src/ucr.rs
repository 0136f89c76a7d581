//! Decomposition of multiplexed rotations into CNOTs and single rotations.
//!
//! A rotation multiplexed over `k` controls becomes `2^k` rotations, each
//! followed by a CNOT from the control whose bit flips between consecutive
//! gray codes. For control value `x` the target then sees the angle
//! `Σ_j (-1)^{x·g_j} θ_j`, so the rotation angles solve `M θ = φ` with
//! `M[x][j] = (-1)^{x·g_j}`. `M` is a column permutation of the Sylvester
//! Hadamard matrix, hence `θ = 2^{-k} Mᵀ φ`, which is one fast Walsh–Hadamard
//! transform followed by a gather in gray-code order.

use crate::circuit::{Circuit, Gate, UniformRotation};
use crate::error::{Error, Result};
use crate::numerics::{binary_dot, fwht_counted, gray_code, log2_exact, GrayCodeTable};

/// Implicit `2^k x 2^k` sign matrix linking network angles to decomposed angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MMatrix {
    k: usize,
}

impl MMatrix {
    pub fn new(k: usize) -> Self {
        Self { k }
    }

    pub fn dim(&self) -> usize {
        1 << self.k
    }

    /// `(-1)^{b_i · g_j}`.
    pub fn entry(&self, i: usize, j: usize) -> i8 {
        if binary_dot(i as u64, gray_code(j as u64)) == 0 {
            1
        } else {
            -1
        }
    }

    /// Dense form, refused above `k = 12`.
    pub fn materialize(&self) -> Result<Vec<Vec<i8>>> {
        if self.k > 12 {
            return Err(Error::TooWide(self.k, 12));
        }
        let n = self.dim();
        Ok((0..n).map(|i| (0..n).map(|j| self.entry(i, j)).collect()).collect())
    }
}

/// Solves `M^k θ = φ` for a binary-indexed angle table of length `2^k`.
pub fn solve_angles(phi: &[f64]) -> Result<Vec<f64>> {
    let mut ops = 0;
    solve_angles_counted(phi, &mut ops)
}

/// [`solve_angles`] that also tallies its floating-point additions,
/// subtractions and multiplications into `ops`.
pub fn solve_angles_counted(phi: &[f64], ops: &mut u64) -> Result<Vec<f64>> {
    let k = log2_exact(phi.len()).ok_or(Error::BadLength(phi.len()))?;
    let mut spectrum = phi.to_vec();
    fwht_counted(&mut spectrum, ops)?;
    let scale = 1.0 / phi.len() as f64;
    let theta: Vec<f64> = (0..1u64 << k)
        .map(|j| spectrum[gray_code(j) as usize] * scale)
        .collect();
    *ops += theta.len() as u64;
    Ok(theta)
}

/// CNOT + rotation sequence equivalent to the multiplexed rotation.
///
/// With `k >= 1` controls the output alternates rotation, CNOT, rotation,
/// CNOT, ... for exactly `2^k` of each; the final CNOT closes the gray cycle
/// on `controls[0]`. With no controls the gate is a single bare rotation.
pub fn decompose_ucr(gate: &UniformRotation) -> Result<Vec<Gate>> {
    let k = gate.num_controls();
    let expected = 1usize << k;
    if gate.angles.len() != expected {
        return Err(Error::MalformedGate(format!(
            "angle table has {} entries, expected {expected}",
            gate.angles.len()
        )));
    }
    let rotation = |angle: f64| Gate::Rotation {
        axis: gate.axis,
        target: gate.target,
        angle,
        controls: Vec::new(),
    };
    if k == 0 {
        return Ok(vec![rotation(gate.angles[0])]);
    }
    let theta = solve_angles(&gate.angles)?;
    let table = GrayCodeTable::new(k);
    let mut out = Vec::with_capacity(2 * expected);
    for (i, &t) in theta.iter().enumerate() {
        out.push(rotation(t));
        let bit = table.flip_bit(i);
        out.push(Gate::Cnot {
            control: gate.controls[k - 1 - bit],
            target: gate.target,
        });
    }
    Ok(out)
}

/// Replaces every multiplexed rotation by its decomposition, leaving all
/// other gates and their order untouched.
pub fn decompose_circuit(circuit: &Circuit) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(circuit.gates().len());
    for g in circuit.gates() {
        match g {
            Gate::UniformRotation(u) => gates.extend(decompose_ucr(u)?),
            other => gates.push(other.clone()),
        }
    }
    circuit.with_gates(gates)
}
