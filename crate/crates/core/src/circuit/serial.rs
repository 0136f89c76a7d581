//! Canonical JSON form of a circuit and a plain-text listing for humans.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Axis, Circuit, Control, Design, Gate, QubitRange, UniformRotation};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct CircuitDoc {
    qubits: usize,
    main: [usize; 2],
    ancilla: [usize; 2],
    chosen: Vec<usize>,
    scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    row_norms: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    design: Option<Design>,
    gates: Vec<GateDoc>,
}

#[derive(Serialize, Deserialize)]
struct GateDoc {
    op: String,
    targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    controls: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    polarity: Vec<u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    angles: Vec<f64>,
}

impl GateDoc {
    fn bare(op: &str, targets: Vec<usize>) -> Self {
        Self {
            op: op.into(),
            targets,
            controls: Vec::new(),
            polarity: Vec::new(),
            angles: Vec::new(),
        }
    }
}

fn split_controls(controls: &[Control]) -> (Vec<usize>, Vec<u8>) {
    controls.iter().map(|c| (c.qubit, u8::from(c.polarity))).unzip()
}

impl From<&Gate> for GateDoc {
    fn from(g: &Gate) -> Self {
        match g {
            Gate::Hadamard { target } => GateDoc::bare("h", vec![*target]),
            Gate::PauliX { target } => GateDoc::bare("x", vec![*target]),
            Gate::Cnot { control, target } => GateDoc {
                controls: vec![*control],
                ..GateDoc::bare("cnot", vec![*target])
            },
            Gate::Swap { a, b } => GateDoc::bare("swap", vec![*a, *b]),
            Gate::Rotation { axis, target, angle, controls } => {
                let (controls, polarity) = split_controls(controls);
                let op = match axis {
                    Axis::Y => "ry",
                    Axis::Z => "rz",
                };
                GateDoc { controls, polarity, angles: vec![*angle], ..GateDoc::bare(op, vec![*target]) }
            }
            Gate::UniformRotation(u) => {
                let op = match u.axis {
                    Axis::Y => "ucry",
                    Axis::Z => "ucrz",
                };
                GateDoc {
                    controls: u.controls.clone(),
                    angles: u.angles.clone(),
                    ..GateDoc::bare(op, vec![u.target])
                }
            }
            Gate::MultiControlledX { target, controls } => {
                let (controls, polarity) = split_controls(controls);
                GateDoc { controls, polarity, ..GateDoc::bare("mcx", vec![*target]) }
            }
        }
    }
}

impl GateDoc {
    fn into_gate(self) -> std::result::Result<Gate, String> {
        let single_target = |targets: &[usize]| match targets {
            [t] => Ok(*t),
            _ => Err(format!("expected 1 target, found {}", targets.len())),
        };
        let no_angles = |angles: &[f64]| {
            if angles.is_empty() {
                Ok(())
            } else {
                Err("unexpected angles".to_string())
            }
        };
        let with_polarity = |controls: Vec<usize>, polarity: Vec<u8>| -> std::result::Result<Vec<Control>, String> {
            if polarity.is_empty() {
                return Ok(controls.into_iter().map(Control::on).collect());
            }
            if polarity.len() != controls.len() {
                return Err(format!("{} polarities for {} controls", polarity.len(), controls.len()));
            }
            controls
                .into_iter()
                .zip(polarity)
                .map(|(q, p)| match p {
                    0 => Ok(Control::off(q)),
                    1 => Ok(Control::on(q)),
                    other => Err(format!("polarity {other} is not 0 or 1")),
                })
                .collect()
        };
        match self.op.as_str() {
            "h" | "x" => {
                no_angles(&self.angles)?;
                if !self.controls.is_empty() {
                    return Err("unexpected controls".into());
                }
                let target = single_target(&self.targets)?;
                Ok(if self.op == "h" { Gate::Hadamard { target } } else { Gate::PauliX { target } })
            }
            "cnot" => {
                no_angles(&self.angles)?;
                let target = single_target(&self.targets)?;
                match self.controls.as_slice() {
                    [control] => Ok(Gate::Cnot { control: *control, target }),
                    other => Err(format!("cnot needs 1 control, found {}", other.len())),
                }
            }
            "swap" => {
                no_angles(&self.angles)?;
                match self.targets.as_slice() {
                    [a, b] => Ok(Gate::Swap { a: *a, b: *b }),
                    other => Err(format!("swap needs 2 targets, found {}", other.len())),
                }
            }
            "ry" | "rz" => {
                let target = single_target(&self.targets)?;
                let angle = match self.angles.as_slice() {
                    [a] => *a,
                    other => return Err(format!("rotation needs 1 angle, found {}", other.len())),
                };
                let axis = if self.op == "ry" { Axis::Y } else { Axis::Z };
                let controls = with_polarity(self.controls, self.polarity)?;
                Ok(Gate::Rotation { axis, target, angle, controls })
            }
            "ucry" | "ucrz" => {
                let target = single_target(&self.targets)?;
                if !self.polarity.is_empty() {
                    return Err("uniform rotations take no polarity".into());
                }
                let axis = if self.op == "ucry" { Axis::Y } else { Axis::Z };
                UniformRotation::new(axis, target, self.controls, self.angles)
                    .map(Gate::from)
                    .map_err(|e| e.to_string())
            }
            "mcx" => {
                no_angles(&self.angles)?;
                let target = single_target(&self.targets)?;
                let controls = with_polarity(self.controls, self.polarity)?;
                Ok(Gate::MultiControlledX { target, controls })
            }
            other => Err(format!("unknown op {other:?}")),
        }
    }
}

/// Canonical JSON document for a circuit.
pub fn serialize(circuit: &Circuit) -> String {
    let doc = CircuitDoc {
        qubits: circuit.num_qubits(),
        main: [circuit.main().start, circuit.main().end],
        ancilla: [circuit.ancilla().start, circuit.ancilla().end],
        chosen: circuit.chosen_states().to_vec(),
        scale: circuit.scale_factor(),
        row_norms: circuit.row_norms().map(<[f64]>::to_vec),
        design: circuit.design(),
        gates: circuit.gates().iter().map(GateDoc::from).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("circuit serializes")
}

pub fn deserialize(text: &str) -> Result<Circuit> {
    let doc: CircuitDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let range = |r: [usize; 2], name: &str| {
        if r[0] > r[1] {
            Err(Error::Schema(format!("{name}: range [{}, {}] is reversed", r[0], r[1])))
        } else {
            Ok(QubitRange::new(r[0], r[1]))
        }
    };
    let schema = |what: String, e: Error| Error::Schema(format!("{what}: {e}"));
    let mut circuit = Circuit::new(doc.qubits, range(doc.main, "main")?, range(doc.ancilla, "ancilla")?)
        .map_err(|e| schema("layout".into(), e))?;
    circuit.set_chosen_states(doc.chosen).map_err(|e| schema("chosen".into(), e))?;
    circuit.set_scale_factor(doc.scale).map_err(|e| schema("scale".into(), e))?;
    circuit.set_row_norms(doc.row_norms).map_err(|e| schema("row_norms".into(), e))?;
    circuit.set_design(doc.design);
    for (i, g) in doc.gates.into_iter().enumerate() {
        let gate = g.into_gate().map_err(|e| Error::Schema(format!("gates[{i}]: {e}")))?;
        circuit.push(gate).map_err(|e| schema(format!("gates[{i}]"), e))?;
    }
    Ok(circuit)
}

/// One gate per line, angles given as standard half-angle parameters.
pub fn to_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "// {} qubits; main q[{}..{}), ancilla q[{}..{}); scale {}",
        circuit.num_qubits(),
        circuit.main().start,
        circuit.main().end,
        circuit.ancilla().start,
        circuit.ancilla().end,
        circuit.scale_factor()
    );
    let _ = writeln!(out, "// chosen {:?}", circuit.chosen_states());
    let _ = writeln!(out, "qreg q[{}];", circuit.num_qubits());
    let ctl = |c: &Control| if c.polarity { format!("q[{}]", c.qubit) } else { format!("!q[{}]", c.qubit) };
    let axis_name = |a: Axis| match a {
        Axis::Y => "y",
        Axis::Z => "z",
    };
    for g in circuit.gates() {
        let line = match g {
            Gate::Hadamard { target } => format!("h q[{target}];"),
            Gate::PauliX { target } => format!("x q[{target}];"),
            Gate::Cnot { control, target } => format!("cx q[{control}], q[{target}];"),
            Gate::Swap { a, b } => format!("swap q[{a}], q[{b}];"),
            Gate::Rotation { axis, target, angle, controls } if controls.is_empty() => {
                format!("r{}({}) q[{target}];", axis_name(*axis), -2.0 * angle)
            }
            Gate::Rotation { axis, target, angle, controls } => format!(
                "cr{}({}) {} -> q[{target}];",
                axis_name(*axis),
                -2.0 * angle,
                controls.iter().map(ctl).collect::<Vec<_>>().join(", ")
            ),
            Gate::UniformRotation(u) => format!(
                "ucr{}({}) {} -> q[{}];",
                axis_name(u.axis),
                u.angles.iter().map(|a| (-2.0 * a).to_string()).collect::<Vec<_>>().join(", "),
                u.controls.iter().map(|q| format!("q[{q}]")).collect::<Vec<_>>().join(", "),
                u.target
            ),
            Gate::MultiControlledX { target, controls } => format!(
                "mcx {} -> q[{target}];",
                controls.iter().map(ctl).collect::<Vec<_>>().join(", ")
            ),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}
