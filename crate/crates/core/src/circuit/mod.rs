//! Gate-level circuit representation.
//!
//! Rotations use the full-angle convention: the Y rotation by `θ` is
//! `[[cos θ, sin θ], [-sin θ, cos θ]]` and the Z rotation is
//! `diag(e^{iθ}, e^{-iθ})`. Exporters translate to the standard half-angle
//! gates (parameter `-2θ`).

mod counts;
mod matrix;
mod serial;

use std::collections::HashSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c, C64};

pub use counts::{count_gates, predicted_counts, GateCounts};
pub use matrix::{circuit_matrix, gate_matrix, MAX_DENSE_QUBITS};
pub use serial::{deserialize, serialize, to_qasm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    Y,
    Z,
}

/// 2x2 block of a rotation about `axis` by the full angle `angle`.
pub fn rotation_block(axis: Axis, angle: f64) -> [[C64; 2]; 2] {
    match axis {
        Axis::Y => {
            let (s, co) = angle.sin_cos();
            [[c(co, 0.0), c(s, 0.0)], [c(-s, 0.0), c(co, 0.0)]]
        }
        Axis::Z => [
            [C64::from_polar(1.0, angle), c(0.0, 0.0)],
            [c(0.0, 0.0), C64::from_polar(1.0, -angle)],
        ],
    }
}

/// A control wire; `polarity == true` fires on |1>.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub polarity: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, polarity: true }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, polarity: false }
    }
}

/// A multiplexed rotation: `angles[x]` is applied to `target` when the
/// controls, read with `controls[0]` as the most significant bit, hold `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformRotation {
    pub axis: Axis,
    pub target: usize,
    pub controls: Vec<usize>,
    pub angles: Vec<f64>,
}

impl UniformRotation {
    pub fn new(axis: Axis, target: usize, controls: Vec<usize>, angles: Vec<f64>) -> Result<Self> {
        let g = Self { axis, target, controls, angles };
        g.check()?;
        Ok(g)
    }

    pub fn num_controls(&self) -> usize {
        self.controls.len()
    }

    fn check(&self) -> Result<()> {
        if self.controls.len() >= usize::BITS as usize - 1 {
            return Err(Error::MalformedGate(format!("{} controls", self.controls.len())));
        }
        let expected = 1usize << self.controls.len();
        if self.angles.len() != expected {
            return Err(Error::MalformedGate(format!(
                "angle table has {} entries, expected 2^{} = {expected}",
                self.angles.len(),
                self.controls.len()
            )));
        }
        if let Some(a) = self.angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::MalformedGate(format!("non-finite angle {a}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Hadamard { target: usize },
    PauliX { target: usize },
    Cnot { control: usize, target: usize },
    Swap { a: usize, b: usize },
    Rotation { axis: Axis, target: usize, angle: f64, controls: Vec<Control> },
    UniformRotation(UniformRotation),
    /// X on `target` when every control matches its polarity. Only used for
    /// basis permutations, never decomposed further.
    MultiControlledX { target: usize, controls: Vec<Control> },
}

impl Gate {
    pub fn ry(target: usize, angle: f64) -> Self {
        Gate::Rotation { axis: Axis::Y, target, angle, controls: Vec::new() }
    }

    pub fn rz(target: usize, angle: f64) -> Self {
        Gate::Rotation { axis: Axis::Z, target, angle, controls: Vec::new() }
    }

    /// Every qubit the gate touches, controls first, target(s) last.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Hadamard { target } | Gate::PauliX { target } => vec![*target],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Swap { a, b } => vec![*a, *b],
            Gate::Rotation { target, controls, .. } | Gate::MultiControlledX { target, controls } => {
                controls.iter().map(|c| c.qubit).chain([*target]).collect()
            }
            Gate::UniformRotation(u) => u.controls.iter().copied().chain([u.target]).collect(),
        }
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let qubits = self.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= width) {
            return Err(Error::QubitOutOfRange { qubit: q, width });
        }
        let distinct: HashSet<_> = qubits.iter().collect();
        if distinct.len() != qubits.len() {
            return Err(Error::MalformedGate(format!("repeated qubit in {qubits:?}")));
        }
        match self {
            Gate::UniformRotation(u) => u.check(),
            Gate::Rotation { angle, .. } if !angle.is_finite() => {
                Err(Error::MalformedGate(format!("non-finite angle {angle}")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_uniform_rotation(&self) -> bool {
        matches!(self, Gate::UniformRotation(_))
    }
}

impl From<UniformRotation> for Gate {
    fn from(u: UniformRotation) -> Self {
        Gate::UniformRotation(u)
    }
}

/// Half-open range of qubit indices `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitRange {
    pub start: usize,
    pub end: usize,
}

impl QubitRange {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, q: usize) -> bool {
        (self.start..self.end).contains(&q)
    }
}

/// Which construction produced a circuit; drives the predicted gate counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Design {
    Scheme1 { n: usize, complex: bool },
    Scheme2 { n: usize, block: usize },
    Banded { n: usize, complex: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    main: QubitRange,
    ancilla: QubitRange,
    gates: Vec<Gate>,
    chosen: Vec<usize>,
    scale: f64,
    row_norms: Option<Vec<f64>>,
    design: Option<Design>,
}

impl Circuit {
    /// An empty circuit; `main` and `ancilla` must partition `[0, num_qubits)`.
    pub fn new(num_qubits: usize, main: QubitRange, ancilla: QubitRange) -> Result<Self> {
        let partitions = main.len() + ancilla.len() == num_qubits
            && main.end <= num_qubits
            && ancilla.end <= num_qubits
            && main.start <= main.end
            && ancilla.start <= ancilla.end
            && (ancilla.is_empty()
                || main.is_empty()
                || main.end == ancilla.start
                || ancilla.end == main.start);
        if !partitions {
            return Err(Error::InvalidCircuit(format!(
                "main {main:?} and ancilla {ancilla:?} do not partition {num_qubits} qubits"
            )));
        }
        Ok(Self {
            num_qubits,
            main,
            ancilla,
            gates: Vec::new(),
            chosen: Vec::new(),
            scale: 1.0,
            row_norms: None,
            design: None,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn main(&self) -> QubitRange {
        self.main
    }

    pub fn ancilla(&self) -> QubitRange {
        self.ancilla
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn chosen_states(&self) -> &[usize] {
        &self.chosen
    }

    /// Known attenuation of the extracted amplitudes relative to `U ψ`.
    pub fn scale_factor(&self) -> f64 {
        self.scale
    }

    /// Per-row norms divided out during synthesis, when the rows of the
    /// source matrix were not unit vectors.
    pub fn row_norms(&self) -> Option<&[f64]> {
        self.row_norms.as_deref()
    }

    pub fn design(&self) -> Option<Design> {
        self.design
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    pub fn set_chosen_states(&mut self, chosen: Vec<usize>) -> Result<()> {
        if chosen.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCircuit("chosen states must be strictly increasing".into()));
        }
        if let Some(&s) = chosen.iter().find(|&&s| self.num_qubits < usize::BITS as usize && s >> self.num_qubits != 0) {
            return Err(Error::InvalidCircuit(format!(
                "chosen state {s} out of range for {} qubits",
                self.num_qubits
            )));
        }
        self.chosen = chosen;
        Ok(())
    }

    pub fn set_scale_factor(&mut self, scale: f64) -> Result<()> {
        if !scale.is_finite() {
            return Err(Error::InvalidCircuit(format!("scale factor {scale}")));
        }
        self.scale = scale;
        Ok(())
    }

    pub fn set_row_norms(&mut self, norms: Option<Vec<f64>>) -> Result<()> {
        if let Some(n) = &norms {
            if n.len() != self.chosen.len() {
                return Err(Error::InvalidCircuit(format!(
                    "{} row norms for {} chosen states",
                    n.len(),
                    self.chosen.len()
                )));
            }
            if n.iter().any(|x| !x.is_finite() || *x <= 0.0) {
                return Err(Error::InvalidCircuit("row norms must be positive".into()));
            }
        }
        self.row_norms = norms;
        Ok(())
    }

    pub fn set_design(&mut self, design: Option<Design>) {
        self.design = design;
    }

    /// Same layout and metadata, keeping only the gates in `range`.
    pub fn slice(&self, range: Range<usize>) -> Circuit {
        Circuit {
            gates: self.gates[range].to_vec(),
            ..self.clone()
        }
    }

    /// Same layout and metadata with a replacement gate list.
    pub fn with_gates(&self, gates: Vec<Gate>) -> Result<Circuit> {
        let mut out = Circuit { gates: Vec::new(), ..self.clone() };
        out.extend(gates)?;
        Ok(out)
    }

    /// Appends the gates of `other`, which must share this circuit's width.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::InvalidCircuit(format!(
                "cannot concatenate widths {} and {}",
                self.num_qubits, other.num_qubits
            )));
        }
        let mut out = self.clone();
        out.gates.extend(other.gates.iter().cloned());
        Ok(out)
    }

    pub fn has_uniform_rotations(&self) -> bool {
        self.gates.iter().any(Gate::is_uniform_rotation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_must_partition() {
        assert!(Circuit::new(3, QubitRange::new(1, 3), QubitRange::new(0, 1)).is_ok());
        assert!(Circuit::new(3, QubitRange::new(0, 3), QubitRange::new(3, 3)).is_ok());
        assert!(Circuit::new(3, QubitRange::new(1, 3), QubitRange::new(0, 2)).is_err());
        assert!(Circuit::new(4, QubitRange::new(2, 4), QubitRange::new(0, 1)).is_err());
    }

    #[test]
    fn gate_validation() {
        let mut c = Circuit::new(2, QubitRange::new(0, 2), QubitRange::new(2, 2)).unwrap();
        assert!(matches!(
            c.push(Gate::Hadamard { target: 2 }),
            Err(Error::QubitOutOfRange { qubit: 2, width: 2 })
        ));
        assert!(c.push(Gate::Cnot { control: 1, target: 1 }).is_err());
        assert!(UniformRotation::new(Axis::Y, 1, vec![0], vec![0.0; 3]).is_err());
        let u = UniformRotation::new(Axis::Y, 1, vec![0], vec![0.1, 0.2]).unwrap();
        assert!(c.push(u.into()).is_ok());
    }

    #[test]
    fn chosen_states_checked() {
        let mut c = Circuit::new(2, QubitRange::new(0, 2), QubitRange::new(2, 2)).unwrap();
        assert!(c.set_chosen_states(vec![0, 2]).is_ok());
        assert!(c.set_chosen_states(vec![2, 0]).is_err());
        assert!(c.set_chosen_states(vec![0, 4]).is_err());
    }
}
