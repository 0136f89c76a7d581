//! Programmable circuit schemes that emulate an arbitrary `2^n x 2^n` matrix
//! by post-selecting a set of chosen basis states.
//!
//! * [`scheme1`]: one rotation per matrix element on `2n + 1` qubits.
//! * [`scheme2`]: ratio-preserving row blocks merged by multiplexed rotations
//!   on `2n` qubits.
//! * [`banded`]: a reduced-ancilla variant for matrices with at most two
//!   adjacent nonzeros per row, and the bundled hydrogen propagator in [`h2`].
//!
//! Circuits are built from [`circuit::Gate`]s, executed by [`simulator`] and
//! lowered to CNOTs and single rotations by [`ucr`].

pub mod banded;
pub mod circuit;
pub mod error;
pub mod h2;
pub mod numerics;
pub mod sample;
pub mod scheme1;
pub mod scheme2;
pub mod simulator;
pub mod ucr;

pub use circuit::{Axis, Circuit, Design, Gate, GateCounts, QubitRange, UniformRotation};
pub use error::{Error, Result};
pub use numerics::{c, DenseMatrix, StateVector, C64};

/// Gate index ranges of the three construction stages of a synthesized circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stages {
    pub input: std::ops::Range<usize>,
    pub formation: std::ops::Range<usize>,
    pub combination: std::ops::Range<usize>,
}
