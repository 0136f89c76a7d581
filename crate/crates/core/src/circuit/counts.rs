use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::{Circuit, Design, Gate};

/// Per-variant gate tallies.
///
/// `single_rotation` counts only uncontrolled rotations; controlled
/// rotations, multiplexed rotations and multi-controlled X gates are kept
/// apart since the closed-form complexity counts assume none remain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub cnot: usize,
    pub single_rotation: usize,
    pub hadamard: usize,
    pub swap: usize,
    pub pauli_x: usize,
    pub multi_controlled_x: usize,
    pub controlled_rotation: usize,
    pub uniform_rotation: usize,
}

impl Add for GateCounts {
    type Output = GateCounts;

    fn add(self, o: GateCounts) -> GateCounts {
        GateCounts {
            cnot: self.cnot + o.cnot,
            single_rotation: self.single_rotation + o.single_rotation,
            hadamard: self.hadamard + o.hadamard,
            swap: self.swap + o.swap,
            pauli_x: self.pauli_x + o.pauli_x,
            multi_controlled_x: self.multi_controlled_x + o.multi_controlled_x,
            controlled_rotation: self.controlled_rotation + o.controlled_rotation,
            uniform_rotation: self.uniform_rotation + o.uniform_rotation,
        }
    }
}

impl fmt::Display for GateCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cnot {} rotation {} h {} swap {} x {} mcx {} crot {} ucr {}",
            self.cnot,
            self.single_rotation,
            self.hadamard,
            self.swap,
            self.pauli_x,
            self.multi_controlled_x,
            self.controlled_rotation,
            self.uniform_rotation
        )
    }
}

pub fn count_gates(circuit: &Circuit) -> GateCounts {
    let mut n = GateCounts::default();
    for g in circuit.gates() {
        match g {
            Gate::Hadamard { .. } => n.hadamard += 1,
            Gate::PauliX { .. } => n.pauli_x += 1,
            Gate::Cnot { .. } => n.cnot += 1,
            Gate::Swap { .. } => n.swap += 1,
            Gate::Rotation { controls, .. } if controls.is_empty() => n.single_rotation += 1,
            Gate::Rotation { .. } => n.controlled_rotation += 1,
            Gate::UniformRotation(_) => n.uniform_rotation += 1,
            Gate::MultiControlledX { .. } => n.multi_controlled_x += 1,
        }
    }
    n
}

/// Closed-form counts of the fully decomposed circuit for a design.
///
/// Scheme 1 uses one multiplexed network with `2n` controls (two when the
/// matrix is complex), `2n` Hadamards and `n` swaps. Scheme 2 uses
/// `(m + 1) 2^{2n-c} - 2^n + Φ` CNOTs with `m = 1, Φ = 0` for two-element
/// blocks and `m = 3, Φ = 2` for four-element blocks. Banded circuits have no
/// closed form here.
pub fn predicted_counts(design: Design) -> Option<GateCounts> {
    match design {
        Design::Scheme1 { n, complex } => {
            let networks = if complex { 2 } else { 1 };
            let per = 1usize << (2 * n);
            Some(GateCounts {
                cnot: networks * per,
                single_rotation: networks * per,
                hadamard: 2 * n,
                swap: n,
                ..GateCounts::default()
            })
        }
        Design::Scheme2 { n, block } => {
            let (m, phi) = match block {
                1 => (1, 0),
                2 => (3, 2),
                _ => return None,
            };
            if n < block {
                return None;
            }
            let formation = m << (2 * n - block);
            let combination = (1usize << (2 * n - block)) - (1usize << n);
            Some(GateCounts {
                cnot: formation + combination + phi,
                single_rotation: formation + combination,
                hadamard: n,
                ..GateCounts::default()
            })
        }
        Design::Banded { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::QubitRange;

    #[test]
    fn empty_circuit_counts_zero() {
        let c = Circuit::new(2, QubitRange::new(0, 2), QubitRange::new(2, 2)).unwrap();
        assert_eq!(count_gates(&c), GateCounts::default());
    }

    #[test]
    fn closed_forms() {
        let s1 = predicted_counts(Design::Scheme1 { n: 2, complex: false }).unwrap();
        assert_eq!((s1.cnot, s1.single_rotation, s1.hadamard, s1.swap), (16, 16, 4, 2));
        assert_eq!(predicted_counts(Design::Scheme2 { n: 2, block: 1 }).unwrap().cnot, 12);
        assert_eq!(predicted_counts(Design::Scheme2 { n: 2, block: 2 }).unwrap().cnot, 14);
        assert_eq!(predicted_counts(Design::Scheme2 { n: 3, block: 2 }).unwrap().cnot, 64 - 8 + 2);
        assert_eq!(predicted_counts(Design::Scheme2 { n: 1, block: 2 }), None);
    }

    #[test]
    fn counts_add_over_concatenation() {
        let mut a = Circuit::new(2, QubitRange::new(0, 2), QubitRange::new(2, 2)).unwrap();
        a.push(Gate::Hadamard { target: 0 }).unwrap();
        a.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        let mut b = a.clone();
        b.push(Gate::ry(1, 0.2)).unwrap();
        b.push(Gate::Swap { a: 0, b: 1 }).unwrap();
        let joined = a.concat(&b).unwrap();
        assert_eq!(count_gates(&joined), count_gates(&a) + count_gates(&b));
    }
}
