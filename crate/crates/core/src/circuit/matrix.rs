//! Dense operator realization of gates and circuits.
//!
//! Each gate is first written as a small matrix over the qubits it touches
//! and then embedded into the full register entry by entry. This path shares
//! no code with the statevector kernels in [`crate::simulator`], so the two
//! can be used to check one another.

use super::{rotation_block, Circuit, Gate};
use crate::error::{Error, Result};
use crate::numerics::{c, DenseMatrix, C64};

/// Widest register [`circuit_matrix`] will realize densely.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Matrix over the gate's own qubits, `qubits[0]` being the most significant
/// bit of the local index.
fn local_operator(gate: &Gate) -> (Vec<usize>, DenseMatrix) {
    let qubits = gate.qubits();
    let dim = 1usize << qubits.len();
    let mut m = DenseMatrix::zeros(dim);
    let one = c(1.0, 0.0);
    match gate {
        Gate::Hadamard { .. } => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            m = DenseMatrix::from_real(2, &[h, h, h, -h]).expect("2x2");
        }
        Gate::PauliX { .. } => {
            m = DenseMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2");
        }
        Gate::Cnot { .. } => {
            for (row, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
                m.set(row, col, one);
            }
        }
        Gate::Swap { .. } => {
            for (row, col) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                m.set(row, col, one);
            }
        }
        Gate::Rotation { axis, angle, controls, .. } => {
            let active = controls
                .iter()
                .fold(0usize, |acc, ctl| (acc << 1) | usize::from(ctl.polarity));
            let block = rotation_block(*axis, *angle);
            for x in 0..dim / 2 {
                if x == active {
                    place_block(&mut m, x, &block);
                } else {
                    m.set(2 * x, 2 * x, one);
                    m.set(2 * x + 1, 2 * x + 1, one);
                }
            }
        }
        Gate::MultiControlledX { controls, .. } => {
            let active = controls
                .iter()
                .fold(0usize, |acc, ctl| (acc << 1) | usize::from(ctl.polarity));
            for x in 0..dim / 2 {
                if x == active {
                    m.set(2 * x, 2 * x + 1, one);
                    m.set(2 * x + 1, 2 * x, one);
                } else {
                    m.set(2 * x, 2 * x, one);
                    m.set(2 * x + 1, 2 * x + 1, one);
                }
            }
        }
        Gate::UniformRotation(u) => {
            for (x, &angle) in u.angles.iter().enumerate() {
                place_block(&mut m, x, &rotation_block(u.axis, angle));
            }
        }
    }
    (qubits, m)
}

fn place_block(m: &mut DenseMatrix, x: usize, block: &[[C64; 2]; 2]) {
    for (r, row) in block.iter().enumerate() {
        for (col, v) in row.iter().enumerate() {
            m.set(2 * x + r, 2 * x + col, *v);
        }
    }
}

/// Row-sparse embedding of a gate into `width` qubits.
struct SparseOperator {
    rows: Vec<Vec<(usize, C64)>>,
}

impl SparseOperator {
    fn from_gate(gate: &Gate, width: usize) -> Result<Self> {
        gate.validate(width)?;
        let (qubits, local) = local_operator(gate);
        let k = qubits.len();
        let shifts: Vec<usize> = qubits.iter().map(|&q| width - 1 - q).collect();
        let touched: usize = shifts.iter().map(|s| 1usize << s).sum();
        let local_rows: Vec<Vec<(usize, C64)>> = (0..1usize << k)
            .map(|r| {
                local
                    .row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.norm_sqr() != 0.0)
                    .map(|(col, v)| (col, *v))
                    .collect()
            })
            .collect();
        let scatter = |local_index: usize| -> usize {
            (0..k).fold(0, |acc, pos| {
                let bit = (local_index >> (k - 1 - pos)) & 1;
                acc | (bit << shifts[pos])
            })
        };
        let gather = |global: usize| -> usize {
            (0..k).fold(0, |acc, pos| (acc << 1) | ((global >> shifts[pos]) & 1))
        };
        let rows = (0..1usize << width)
            .map(|i| {
                let rest = i & !touched;
                local_rows[gather(i)]
                    .iter()
                    .map(|&(lc, v)| (rest | scatter(lc), v))
                    .collect()
            })
            .collect();
        Ok(Self { rows })
    }

    fn to_dense(&self) -> DenseMatrix {
        let dim = self.rows.len();
        let mut m = DenseMatrix::zeros(dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m.set(i, j, v);
            }
        }
        m
    }

    /// `self * m`.
    fn left_multiply(&self, m: &DenseMatrix) -> DenseMatrix {
        let dim = m.dim();
        let mut out = DenseMatrix::zeros(dim);
        for (i, row) in self.rows.iter().enumerate() {
            for j in 0..dim {
                let v: C64 = row.iter().map(|&(k, g)| g * m.get(k, j)).sum();
                out.set(i, j, v);
            }
        }
        out
    }
}

/// The `2^width` operator of a single gate, qubit 0 most significant.
pub fn gate_matrix(gate: &Gate, width: usize) -> Result<DenseMatrix> {
    if width > MAX_DENSE_QUBITS {
        return Err(Error::TooWide(width, MAX_DENSE_QUBITS));
    }
    Ok(SparseOperator::from_gate(gate, width)?.to_dense())
}

/// Ordered product of the gate operators, first gate applied first.
pub fn circuit_matrix(circuit: &Circuit) -> Result<DenseMatrix> {
    let width = circuit.num_qubits();
    if width > MAX_DENSE_QUBITS {
        return Err(Error::TooWide(width, MAX_DENSE_QUBITS));
    }
    circuit.gates().iter().try_fold(DenseMatrix::identity(1 << width), |acc, g| {
        Ok(SparseOperator::from_gate(g, width)?.left_multiply(&acc))
    })
}
