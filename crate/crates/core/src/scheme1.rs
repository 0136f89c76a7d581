//! First design: every matrix element gets its own rotation.
//!
//! Layout on `2n + 1` qubits: ancilla `0..=n`, main `n+1..=2n`. Hadamards on
//! qubits `0..n` and the swap chain `(n, n+1), …, (2n-1, 2n)` spread the input
//! into `2^{-n/2} Σ_a |a>|j>|0> α_j`. A rotation multiplexed over qubits
//! `0..2n` then writes `u_{aj}` into the leading entry of block `(a, j)`, and
//! Hadamards on qubits `n..2n` sum each row. Row `a` of `2^{-n} U ψ` is read
//! at basis state `a · 2^{n+1}`.

use crate::circuit::{Axis, Circuit, Design, Gate, QubitRange, UniformRotation, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::numerics::{c, log2_exact, DenseMatrix, C64, MODULUS_SLACK};
use crate::Stages;

/// `(θ_y, φ_z)` with `e^{iφ_z} cos θ_y = u`, `θ_y = arccos |u|`, `φ_z = arg u`.
pub fn element_angles(u: C64) -> Result<(f64, f64)> {
    element_angles_within(u, MODULUS_SLACK)
}

/// [`element_angles`] accepting moduli up to `1 + tol`, for rounded data.
pub fn element_angles_within(u: C64, tol: f64) -> Result<(f64, f64)> {
    let m = u.norm();
    if m > 1.0 + tol {
        return Err(Error::ModulusViolation { row: 0, col: 0, modulus: m });
    }
    let phase = if m == 0.0 { 0.0 } else { u.arg() };
    Ok((m.min(1.0).acos(), phase))
}

/// Angle tables for the formation stage.
#[derive(Clone, Debug, PartialEq)]
pub struct Scheme1Plan {
    pub n: usize,
    /// One `(θ_y, φ_z)` per element, row-major. For real matrices `θ_y` is
    /// `arccos u` (sign carried by the angle) and `φ_z = 0`.
    pub element_angles: Vec<(f64, f64)>,
    pub complex: bool,
}

impl Scheme1Plan {
    pub fn new(u: &DenseMatrix) -> Result<Self> {
        let n = log2_exact(u.dim()).ok_or(Error::NotPowerOfTwo(u.dim()))?;
        let complex = !u.is_real();
        let dim = u.dim();
        let mut element_angles = Vec::with_capacity(dim * dim);
        for (idx, &z) in u.entries().iter().enumerate() {
            let (row, col) = (idx / dim, idx % dim);
            let m = z.norm();
            if m > 1.0 + MODULUS_SLACK {
                return Err(Error::ModulusViolation { row, col, modulus: m });
            }
            if complex {
                element_angles.push(self::element_angles(z)?);
            } else {
                element_angles.push((z.re.clamp(-1.0, 1.0).acos(), 0.0));
            }
        }
        Ok(Self { n, element_angles, complex })
    }

    pub fn y_angles(&self) -> Vec<f64> {
        self.element_angles.iter().map(|a| a.0).collect()
    }

    pub fn z_angles(&self) -> Vec<f64> {
        self.element_angles.iter().map(|a| a.1).collect()
    }

    pub fn chosen_states(&self) -> Vec<usize> {
        (0..1usize << self.n).map(|i| i << (self.n + 1)).collect()
    }

    pub fn scale_factor(&self) -> f64 {
        (-(self.n as f64)).exp2()
    }
}

/// Gate ranges of the stages in a circuit from [`synth_scheme1`].
pub fn stages(n: usize, complex: bool) -> Stages {
    let formation_end = 2 * n + if complex { 2 } else { 1 };
    Stages {
        input: 0..2 * n,
        formation: 2 * n..formation_end,
        combination: formation_end..formation_end + n,
    }
}

pub fn synth_scheme1(u: &DenseMatrix) -> Result<Circuit> {
    let plan = Scheme1Plan::new(u)?;
    let n = plan.n;
    let width = 2 * n + 1;
    let mut circ = Circuit::new(width, QubitRange::new(n + 1, width), QubitRange::new(0, n + 1))?;
    for q in 0..n {
        circ.push(Gate::Hadamard { target: q })?;
    }
    for q in n..2 * n {
        circ.push(Gate::Swap { a: q, b: q + 1 })?;
    }
    let controls: Vec<usize> = (0..2 * n).collect();
    circ.push(UniformRotation::new(Axis::Y, 2 * n, controls.clone(), plan.y_angles())?.into())?;
    if plan.complex {
        circ.push(UniformRotation::new(Axis::Z, 2 * n, controls, plan.z_angles())?.into())?;
    }
    for q in n..2 * n {
        circ.push(Gate::Hadamard { target: q })?;
    }
    circ.set_chosen_states(plan.chosen_states())?;
    circ.set_scale_factor(plan.scale_factor())?;
    circ.set_design(Some(Design::Scheme1 { n, complex: plan.complex }));
    Ok(circ)
}

/// Stage operators written out entry by entry.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceOperators {
    pub formation: DenseMatrix,
    pub combination: DenseMatrix,
    pub input: DenseMatrix,
}

/// Builds `V_f`, `V_c` and `V_m` directly from their closed forms, with no
/// use of gates.
///
/// `V_f` is block diagonal with block `(a, j)` equal to
/// `[[u, e^{iφ} s], [-e^{-iφ} s, ū]]`, `s = sqrt(1 - |u|^2)` (for real `U`,
/// `[[u, s], [-s, u]]`). `V_c` is `I ⊗ H^{⊗n} ⊗ I`. `V_m` sends
/// `|a, t, b>` to `2^{-n/2} Σ_{a'} (-1)^{a·a'} |a', b, t>`.
pub fn reference_operators(u: &DenseMatrix) -> Result<ReferenceOperators> {
    let n = log2_exact(u.dim()).ok_or(Error::NotPowerOfTwo(u.dim()))?;
    let width = 2 * n + 1;
    if width > MAX_DENSE_QUBITS {
        return Err(Error::TooWide(width, MAX_DENSE_QUBITS));
    }
    let dim = 1usize << width;
    let big_n = 1usize << n;
    let complex = !u.is_real();
    let norm = (-(n as f64) / 2.0).exp2();
    let sign = |x: usize, y: usize| if (x & y).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };

    let mut vf = DenseMatrix::zeros(dim);
    for (x, &z) in u.entries().iter().enumerate() {
        let m = z.norm();
        if m > 1.0 + MODULUS_SLACK {
            return Err(Error::ModulusViolation { row: x / big_n, col: x % big_n, modulus: m });
        }
        let s = (1.0 - m.min(1.0).powi(2)).sqrt();
        let phase = if complex && m > 0.0 { C64::from_polar(1.0, z.arg()) } else { c(1.0, 0.0) };
        let lead = if complex { z } else { c(z.re, 0.0) };
        vf.set(2 * x, 2 * x, lead);
        vf.set(2 * x, 2 * x + 1, phase * s);
        vf.set(2 * x + 1, 2 * x, -phase.conj() * s);
        vf.set(2 * x + 1, 2 * x + 1, lead.conj());
    }

    let mut vc = DenseMatrix::zeros(dim);
    for a in 0..big_n {
        for x in 0..big_n {
            for y in 0..big_n {
                for t in 0..2 {
                    let row = (((a << n) | x) << 1) | t;
                    let col = (((a << n) | y) << 1) | t;
                    vc.set(row, col, c(norm * sign(x, y), 0.0));
                }
            }
        }
    }

    let mut vm = DenseMatrix::zeros(dim);
    for a in 0..big_n {
        for b in 0..big_n {
            for t in 0..2 {
                let col = (((a << 1) | t) << n) | b;
                for a2 in 0..big_n {
                    let row = (((a2 << n) | b) << 1) | t;
                    vm.set(row, col, c(norm * sign(a, a2), 0.0));
                }
            }
        }
    }
    Ok(ReferenceOperators { formation: vf, combination: vc, input: vm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_matrix, count_gates};
    use crate::numerics::{StateVector, ROUNDED_DATA_TOL};
    use crate::simulator::{apply, extract};
    use crate::ucr::decompose_circuit;

    #[test]
    fn element_angle_examples() {
        assert_eq!(element_angles(c(1.0, 0.0)).unwrap(), (0.0, 0.0));
        // Four-decimal data; the modulus is 1 + 2e-5.
        assert!(element_angles(c(0.9788, -0.2049)).is_err());
        let (ty, pz) = element_angles_within(c(0.9788, -0.2049), ROUNDED_DATA_TOL).unwrap();
        assert!((2.0 * ty).abs() < 1e-3 && (2.0 * pz + 0.4127).abs() < 1e-3);
        let (ty, pz) = element_angles(c(-0.2607, 0.9517)).unwrap();
        assert!((2.0 * ty - 0.3253).abs() < 1e-3 && (2.0 * pz - 3.6763).abs() < 1e-3);
        assert_eq!(element_angles(c(0.0, 0.0)).unwrap(), (std::f64::consts::FRAC_PI_2, 0.0));
        assert!(element_angles(c(1.0, 0.1)).is_err());
    }

    #[test]
    fn plan_reconstructs_elements() {
        let u = DenseMatrix::from_entries(
            2,
            vec![c(0.3, -0.4), c(-0.5, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
        )
        .unwrap();
        let plan = Scheme1Plan::new(&u).unwrap();
        for ((ty, pz), z) in plan.element_angles.iter().zip(u.entries()) {
            assert!((0.0..=std::f64::consts::PI).contains(ty));
            assert!((C64::from_polar(ty.cos(), *pz) - z).norm() < 1e-12);
        }
    }

    #[test]
    fn modulus_violation_names_entry() {
        let mut u = DenseMatrix::identity(4);
        u.set(2, 1, c(1.2, 0.0));
        match synth_scheme1(&u) {
            Err(Error::ModulusViolation { row: 2, col: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            synth_scheme1(&DenseMatrix::zeros(3)),
            Err(Error::NotPowerOfTwo(3))
        ));
    }

    #[test]
    fn identity_n1_reads_half_input() {
        let circ = synth_scheme1(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(circ.num_qubits(), 3);
        assert_eq!(circ.chosen_states(), &[0, 4]);
        let psi = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let ex = extract(&circ, &apply(&circ, &psi).unwrap()).unwrap();
        assert!((ex.raw[0] - c(0.3, 0.0)).norm() < 1e-12);
        assert!((ex.raw[1] - c(0.4, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn stage_operators_match_reference_for_complex_matrix() {
        let u = DenseMatrix::from_entries(
            4,
            (0..16).map(|k| C64::from_polar(0.2 + 0.04 * k as f64, 0.37 * k as f64)).collect(),
        )
        .unwrap();
        let circ = synth_scheme1(&u).unwrap();
        let st = stages(2, true);
        let reference = reference_operators(&u).unwrap();
        for (range, want) in [
            (st.input, &reference.input),
            (st.formation, &reference.formation),
            (st.combination, &reference.combination),
        ] {
            let got = circuit_matrix(&circ.slice(range.clone())).unwrap();
            assert!(got.max_abs_diff(want) < 1e-12, "{range:?}");
        }
    }

    #[test]
    fn real_counts_are_exact() {
        for n in 1..=3 {
            let u = DenseMatrix::identity(1 << n);
            let d = decompose_circuit(&synth_scheme1(&u).unwrap()).unwrap();
            let k = count_gates(&d);
            assert_eq!((k.cnot, k.single_rotation, k.hadamard, k.swap), (1 << (2 * n), 1 << (2 * n), 2 * n, n));
        }
    }
}
