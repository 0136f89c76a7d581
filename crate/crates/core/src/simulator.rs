//! Dense statevector execution with post-selection on the chosen states.
//!
//! Gates act directly on the amplitude array (pair updates over a stride
//! given by the target bit); no gate matrix is ever built here.

use serde::Serialize;

use crate::circuit::{count_gates, predicted_counts, rotation_block, Circuit, Control, Gate, GateCounts};
use crate::error::{Error, Result};
use crate::numerics::{c, fidelity, DenseMatrix, StateVector, C64};
use crate::ucr::decompose_circuit;

fn bit_of(width: usize, qubit: usize) -> usize {
    1usize << (width - 1 - qubit)
}

fn control_mask(width: usize, controls: &[Control]) -> (usize, usize) {
    controls.iter().fold((0, 0), |(mask, value), ctl| {
        let b = bit_of(width, ctl.qubit);
        (mask | b, if ctl.polarity { value | b } else { value })
    })
}

/// Applies a 2x2 block to `target` on every amplitude pair whose control
/// bits match `(mask, value)`.
fn apply_block(amps: &mut [C64], tbit: usize, mask: usize, value: usize, m: &[[C64; 2]; 2]) {
    for i in 0..amps.len() {
        if i & tbit != 0 || i & mask != value {
            continue;
        }
        let j = i | tbit;
        let (a0, a1) = (amps[i], amps[j]);
        amps[i] = m[0][0] * a0 + m[0][1] * a1;
        amps[j] = m[1][0] * a0 + m[1][1] * a1;
    }
}

fn apply_gate(amps: &mut [C64], width: usize, gate: &Gate) {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let x_block = [[zero, one], [one, zero]];
    match gate {
        Gate::Hadamard { target } => {
            let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            apply_block(amps, bit_of(width, *target), 0, 0, &[[h, h], [h, -h]]);
        }
        Gate::PauliX { target } => apply_block(amps, bit_of(width, *target), 0, 0, &x_block),
        Gate::Cnot { control, target } => {
            let cb = bit_of(width, *control);
            apply_block(amps, bit_of(width, *target), cb, cb, &x_block);
        }
        Gate::Swap { a, b } => {
            let (ba, bb) = (bit_of(width, *a), bit_of(width, *b));
            for i in 0..amps.len() {
                if i & ba != 0 && i & bb == 0 {
                    amps.swap(i, i ^ ba ^ bb);
                }
            }
        }
        Gate::Rotation { axis, target, angle, controls } => {
            let (mask, value) = control_mask(width, controls);
            apply_block(amps, bit_of(width, *target), mask, value, &rotation_block(*axis, *angle));
        }
        Gate::MultiControlledX { target, controls } => {
            let (mask, value) = control_mask(width, controls);
            apply_block(amps, bit_of(width, *target), mask, value, &x_block);
        }
        Gate::UniformRotation(u) => {
            let tbit = bit_of(width, u.target);
            let cbits: Vec<usize> = u.controls.iter().map(|&q| bit_of(width, q)).collect();
            let blocks: Vec<[[C64; 2]; 2]> = u.angles.iter().map(|&a| rotation_block(u.axis, a)).collect();
            for i in 0..amps.len() {
                if i & tbit != 0 {
                    continue;
                }
                let x = cbits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(i & b != 0));
                let m = &blocks[x];
                let j = i | tbit;
                let (a0, a1) = (amps[i], amps[j]);
                amps[i] = m[0][0] * a0 + m[0][1] * a1;
                amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }
}

/// Runs the circuit on an arbitrary full-width state.
pub fn run(circuit: &Circuit, state: StateVector) -> Result<StateVector> {
    if state.num_qubits() != circuit.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "state has {} qubits, circuit has {}",
            state.num_qubits(),
            circuit.num_qubits()
        )));
    }
    let width = circuit.num_qubits();
    let mut amps = state.into_amplitudes();
    for g in circuit.gates() {
        apply_gate(&mut amps, width, g);
    }
    StateVector::new(amps)
}

/// `|0…0>_ancilla ⊗ ψ` laid out on the circuit's register.
pub fn embed(circuit: &Circuit, psi_main: &StateVector) -> Result<StateVector> {
    let main = circuit.main();
    if psi_main.num_qubits() != main.len() {
        return Err(Error::DimensionMismatch(format!(
            "input has {} qubits, main register has {}",
            psi_main.num_qubits(),
            main.len()
        )));
    }
    let width = circuit.num_qubits();
    let shift = width - main.end;
    let mut amps = vec![c(0.0, 0.0); 1 << width];
    for (j, a) in psi_main.amplitudes().iter().enumerate() {
        amps[j << shift] = *a;
    }
    StateVector::new(amps)
}

/// Final state after running the circuit on `|0…0>_ancilla ⊗ ψ`.
pub fn apply(circuit: &Circuit, psi_main: &StateVector) -> Result<StateVector> {
    run(circuit, embed(circuit, psi_main)?)
}

/// Post-selected amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    /// Amplitudes at the chosen states, in order.
    pub raw: Vec<C64>,
    /// `raw / |raw|`; `None` when nothing survives post-selection.
    pub normalized: Option<StateVector>,
    pub success_probability: f64,
}

pub fn extract(circuit: &Circuit, final_state: &StateVector) -> Result<Extraction> {
    if final_state.num_qubits() != circuit.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "state has {} qubits, circuit has {}",
            final_state.num_qubits(),
            circuit.num_qubits()
        )));
    }
    let amps = final_state.amplitudes();
    let raw: Vec<C64> = circuit.chosen_states().iter().map(|&s| amps[s]).collect();
    let success_probability: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
    let normalized = if success_probability > 0.0 {
        StateVector::normalized(raw.clone()).ok()
    } else {
        None
    };
    Ok(Extraction { raw, normalized, success_probability })
}

/// Outcome of checking a circuit against direct application of `U`.
#[derive(Clone, Debug, Serialize)]
pub struct SynthesisReport {
    /// `|<extracted, Uψ>|^2` after undoing any recorded row normalization.
    pub fidelity: f64,
    pub success_probability: f64,
    /// Largest `|raw_i · rownorm_i / scale - (Uψ)_i|`.
    pub max_amplitude_error: f64,
    pub counts: GateCounts,
    /// Counts after decomposing the multiplexed rotations.
    pub decomposed_counts: GateCounts,
    pub predicted_counts: Option<GateCounts>,
}

impl SynthesisReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.fidelity >= 1.0 - tol
    }
}

/// Output of `U` as read back from the chosen states, in the coordinates of
/// `U ψ`: raw amplitudes times recorded row norms, divided by the scale.
pub fn reconstruct_output(circuit: &Circuit, extraction: &Extraction) -> Vec<C64> {
    let scale = circuit.scale_factor();
    extraction
        .raw
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let norm = circuit.row_norms().map_or(1.0, |n| n[i]);
            z * norm / scale
        })
        .collect()
}

pub fn verify(u: &DenseMatrix, circuit: &Circuit, psi: &StateVector) -> Result<SynthesisReport> {
    if u.dim() != circuit.chosen_states().len() || u.dim() != 1 << circuit.main().len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix of dimension {} against a circuit with {} main qubits and {} chosen states",
            u.dim(),
            circuit.main().len(),
            circuit.chosen_states().len()
        )));
    }
    let expected = u.matvec(psi.amplitudes())?;
    let extraction = extract(circuit, &apply(circuit, psi)?)?;
    let recovered = reconstruct_output(circuit, &extraction);
    let max_amplitude_error = recovered
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let counts = count_gates(circuit);
    let decomposed_counts = if circuit.has_uniform_rotations() {
        count_gates(&decompose_circuit(circuit)?)
    } else {
        counts
    };
    Ok(SynthesisReport {
        fidelity: fidelity(&recovered, &expected),
        success_probability: extraction.success_probability,
        max_amplitude_error,
        counts,
        decomposed_counts,
        predicted_counts: circuit.design().and_then(predicted_counts),
    })
}
