//! Second design: rows are built from ratio-preserving blocks.
//!
//! Layout on `2n` qubits: ancilla `0..n`, main `n..2n`. Hadamards on the
//! ancilla give `2^{-n/2} Σ_a |a>|j> α_j`. The formation stage plants, for
//! every row `a` and column group of `2^c` elements, a block whose leading row
//! is that group divided by its norm. Each combination stage merges
//! neighbouring groups with a rotation on the qubit just above them, weighting
//! by the group norms, until block `a` leads with row `a` of `U / ‖u_a‖`.
//! Row `a` is read at basis state `a · 2^n`.

use crate::circuit::{Axis, Circuit, Design, Gate, QubitRange, UniformRotation};
use crate::error::{Error, Result};
use crate::numerics::{log2_exact, DenseMatrix};
use crate::Stages;

/// Rows whose norm differs from one by more than this are recorded.
const ROW_NORM_TOL: f64 = 1e-12;

/// Angle whose rotation's leading row is proportional to `(left, right)`.
pub fn pair_angle(left: f64, right: f64) -> f64 {
    if left == 0.0 && right == 0.0 {
        0.0
    } else {
        right.atan2(left)
    }
}

/// Merge angle for two groups with norms `left` and `right`: afterwards both
/// groups share the constant `1 / sqrt(left^2 + right^2)`.
pub fn combine_angle(left: f64, right: f64) -> f64 {
    pair_angle(left, right)
}

/// Leading row of the two-qubit block
/// `CNOT · (R(θ_a) ⊗ I) · CNOT · (I ⊗ R(-θ_2)) · (R(-θ_1) ⊗ I)`.
pub fn schmidt_leading_row(theta_a: f64, theta_1: f64, theta_2: f64) -> [f64; 4] {
    let (sa, ca) = theta_a.sin_cos();
    let (s1, c1) = theta_1.sin_cos();
    let (s2, c2) = theta_2.sin_cos();
    let p = [[c1, -s1], [s1, c1]];
    let q = [[c2, -s2], [s2, c2]];
    let mut out = [0.0; 4];
    for i in 0..2 {
        for j in 0..2 {
            out[2 * i + j] = ca * p[0][i] * q[0][j] + sa * p[1][i] * q[1][j];
        }
    }
    out
}

fn row_error(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `(θ_a, θ_1, θ_2)` such that [`schmidt_leading_row`] returns `v`.
///
/// `v` reshaped to `M[i][j] = v[2i + j]` is `R(θ_1) diag(cos θ_a, sin θ_a)
/// R(θ_2)ᵀ`, so the angles come from the closed-form 2x2 singular value
/// decomposition. If rounding spoils the reconstruction, the sign variants
/// `θ_1 + {0, π}`, `θ_2 + {0, π}`, `{θ_a, θ_a + π, -θ_a, π - θ_a}` are tried in
/// that nesting order and the first within `1e-10` wins.
pub fn schmidt_angles(v: [f64; 4]) -> Result<(f64, f64, f64)> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit(norm));
    }
    let (m00, m01, m10, m11) = (v[0], v[1], v[2], v[3]);
    let e = (m00 + m11) / 2.0;
    let f = (m00 - m11) / 2.0;
    let g = (m10 + m01) / 2.0;
    let h = (m10 - m01) / 2.0;
    let q = e.hypot(h);
    let r = f.hypot(g);
    let (sx, sy) = (q + r, q - r);
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let theta = (a2 - a1) / 2.0;
    let phi = (a2 + a1) / 2.0;
    let best = (sy.atan2(sx), -phi, theta);
    if row_error(&schmidt_leading_row(best.0, best.1, best.2), &v) <= 1e-10 {
        return Ok(best);
    }
    let pi = std::f64::consts::PI;
    let mut fallback = (f64::INFINITY, best);
    for d1 in [0.0, pi] {
        for d2 in [0.0, pi] {
            for ta in [best.0, best.0 + pi, -best.0, pi - best.0] {
                let cand = (ta, best.1 + d1, best.2 + d2);
                let err = row_error(&schmidt_leading_row(cand.0, cand.1, cand.2), &v);
                if err <= 1e-10 {
                    return Ok(cand);
                }
                if err < fallback.0 {
                    fallback = (err, cand);
                }
            }
        }
    }
    Ok(fallback.1)
}

/// Each row scaled to unit norm, with the original norms.
pub fn row_normalized(u: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>)> {
    let norms = u.row_norms();
    if let Some(i) = norms.iter().position(|&x| x == 0.0) {
        return Err(Error::ZeroRow(i));
    }
    let dim = u.dim();
    let mut out = u.clone();
    for (i, &nrm) in norms.iter().enumerate() {
        for j in 0..dim {
            out.set(i, j, u.get(i, j) / nrm);
        }
    }
    Ok((out, norms))
}

/// Block shape and partial norms driving a Scheme 2 synthesis.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPlan {
    pub n: usize,
    /// Qubits per initial block.
    pub c: usize,
    /// Multiplexed rotation roles per block.
    pub m: usize,
    /// Block gates shared by every control value.
    pub phi: usize,
    /// `norms[row][level][group]`: norm of the `group`-th run of `2^{c+level}`
    /// consecutive elements of `row`.
    pub norms: Vec<Vec<Vec<f64>>>,
    rows: Vec<Vec<f64>>,
}

impl BlockPlan {
    pub fn new(u: &DenseMatrix, c: usize) -> Result<Self> {
        let n = log2_exact(u.dim()).ok_or(Error::NotPowerOfTwo(u.dim()))?;
        let (m, phi) = match c {
            1 => (1, 0),
            2 => (3, 2),
            _ => return Err(Error::BadBlockSize(c)),
        };
        if n < c {
            return Err(Error::BadBlockSize(c));
        }
        let dim = u.dim();
        for i in 0..dim {
            for j in 0..dim {
                if u.get(i, j).im != 0.0 {
                    return Err(Error::ComplexUnsupported(i, j));
                }
            }
        }
        let rows: Vec<Vec<f64>> = (0..dim).map(|i| u.row(i).iter().map(|z| z.re).collect()).collect();
        let mut norms = Vec::with_capacity(dim);
        for (i, row) in rows.iter().enumerate() {
            let mut levels = Vec::with_capacity(n - c + 1);
            let mut level: Vec<f64> = row
                .chunks(1 << c)
                .map(|g| g.iter().map(|x| x * x).sum::<f64>().sqrt())
                .collect();
            while level.len() > 1 {
                let next = level.chunks(2).map(|p| p[0].hypot(p[1])).collect();
                levels.push(std::mem::replace(&mut level, next));
            }
            levels.push(level);
            if levels.last().expect("at least one level")[0] == 0.0 {
                return Err(Error::ZeroRow(i));
            }
            norms.push(levels);
        }
        Ok(Self { n, c, m, phi, norms, rows })
    }

    pub fn row_norms(&self) -> Vec<f64> {
        self.norms.iter().map(|levels| levels.last().expect("root level")[0]).collect()
    }

    /// `true` when some row is not a unit vector.
    pub fn needs_row_norms(&self) -> bool {
        self.row_norms().iter().any(|x| (x - 1.0).abs() > ROW_NORM_TOL)
    }

    /// Pair angles for `c = 1`, indexed by `(row, pair)`.
    pub fn pair_angles(&self) -> Vec<f64> {
        self.rows
            .iter()
            .flat_map(|row| row.chunks(2).map(|p| pair_angle(p[0], p[1])))
            .collect()
    }

    /// `(θ_a, θ_1, θ_2)` tables for `c = 2`, indexed by `(row, quad)`.
    pub fn schmidt_tables(&self) -> Result<[Vec<f64>; 3]> {
        let mut out: [Vec<f64>; 3] = Default::default();
        for (row, levels) in self.rows.iter().zip(&self.norms) {
            for (quad, &nrm) in row.chunks(4).zip(&levels[0]) {
                let angles = if nrm == 0.0 {
                    (0.0, 0.0, 0.0)
                } else {
                    schmidt_angles([quad[0] / nrm, quad[1] / nrm, quad[2] / nrm, quad[3] / nrm])?
                };
                out[0].push(angles.0);
                out[1].push(angles.1);
                out[2].push(angles.2);
            }
        }
        Ok(out)
    }

    /// Merge angles for the combination on `target`, indexed by
    /// `(row, surviving group)`.
    pub fn combine_angles(&self, target: usize) -> Vec<f64> {
        let level = 2 * self.n - self.c - 1 - target;
        self.norms
            .iter()
            .flat_map(|levels| levels[level].chunks(2).map(|p| combine_angle(p[0], p[1])))
            .collect()
    }
}

/// Gate ranges of the stages in a circuit from [`synth_scheme2`].
pub fn stages(n: usize, c: usize) -> Stages {
    let formation_end = n + if c == 2 { 5 } else { 1 };
    Stages {
        input: 0..n,
        formation: n..formation_end,
        combination: formation_end..formation_end + n.saturating_sub(c),
    }
}

pub fn synth_scheme2(u: &DenseMatrix, c: usize) -> Result<Circuit> {
    let plan = BlockPlan::new(u, c)?;
    let n = plan.n;
    let width = 2 * n;
    let mut circ = Circuit::new(width, QubitRange::new(n, width), QubitRange::new(0, n))?;
    for q in 0..n {
        circ.push(Gate::Hadamard { target: q })?;
    }
    let ucr = |target: usize, angles: Vec<f64>| -> Result<Gate> {
        Ok(UniformRotation::new(Axis::Y, target, (0..target.min(width - c)).collect(), angles)?.into())
    };
    if c == 1 {
        circ.push(ucr(width - 1, plan.pair_angles())?)?;
    } else {
        let (a, b) = (width - 2, width - 1);
        let [ta, t1, t2] = plan.schmidt_tables()?;
        circ.push(ucr(a, t1.iter().map(|t| -t).collect())?)?;
        circ.push(ucr(b, t2.iter().map(|t| -t).collect())?)?;
        circ.push(Gate::Cnot { control: a, target: b })?;
        circ.push(ucr(a, ta)?)?;
        circ.push(Gate::Cnot { control: a, target: b })?;
    }
    for target in (n..width - c).rev() {
        circ.push(ucr(target, plan.combine_angles(target))?)?;
    }
    circ.set_chosen_states((0..1usize << n).map(|i| i << n).collect())?;
    circ.set_scale_factor((-(n as f64) / 2.0).exp2())?;
    if plan.needs_row_norms() {
        circ.set_row_norms(Some(plan.row_norms()))?;
    }
    circ.set_design(Some(Design::Scheme2 { n, block: c }));
    Ok(circ)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_matrix, count_gates, gate_matrix};
    use crate::numerics::c;
    use crate::ucr::decompose_circuit;

    #[test]
    fn pair_angle_examples() {
        assert_eq!(pair_angle(1.0, 0.0), 0.0);
        assert!((pair_angle(1.0, 1.0) - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(pair_angle(0.0, 0.0), 0.0);
        let t = pair_angle(0.6, -0.8);
        assert!((t.cos() - 0.6).abs() < 1e-15 && (t.sin() + 0.8).abs() < 1e-15);
    }

    #[test]
    fn combine_angle_examples() {
        let t = combine_angle(3.0, 4.0);
        assert!((t - 0.92730).abs() < 1e-5);
        assert!((t.cos() / 3.0 - 0.2).abs() < 1e-15 && (t.sin() / 4.0 - 0.2).abs() < 1e-15);
        assert_eq!(combine_angle(1.0, 0.0), 0.0);
    }

    #[test]
    fn schmidt_examples() {
        assert_eq!(schmidt_angles([1.0, 0.0, 0.0, 0.0]).unwrap(), (0.0, 0.0, 0.0));
        let (ta, t1, t2) = schmidt_angles([0.5; 4]).unwrap();
        assert!(ta.abs() < 1e-15);
        assert!((t1 - t2).abs() < 1e-15);
        assert!((t1.cos().abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(row_error(&schmidt_leading_row(ta, t1, t2), &[0.5; 4]) < 1e-15);
        assert!(matches!(schmidt_angles([1.0, 1.0, 0.0, 0.0]), Err(Error::NotUnit(_))));
    }

    #[test]
    fn schmidt_block_operator_leads_with_vector() {
        let v = [0.1, -0.7, 0.5, 0.5];
        let nrm = v.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        let v = v.map(|x| x / nrm);
        let (ta, t1, t2) = schmidt_angles(v).unwrap();
        let mut circ = Circuit::new(2, QubitRange::new(0, 2), QubitRange::new(2, 2)).unwrap();
        circ.extend([
            Gate::ry(0, -t1),
            Gate::ry(1, -t2),
            Gate::Cnot { control: 0, target: 1 },
            Gate::ry(0, ta),
            Gate::Cnot { control: 0, target: 1 },
        ])
        .unwrap();
        let m = circuit_matrix(&circ).unwrap();
        for (j, x) in v.iter().enumerate() {
            assert!((m.get(0, j) - c(*x, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn row_normalization() {
        let (m, norms) = row_normalized(&DenseMatrix::from_real(2, &[2.0, 0.0, 0.0, 2.0]).unwrap()).unwrap();
        assert_eq!(m, DenseMatrix::identity(2));
        assert_eq!(norms, vec![2.0, 2.0]);
        assert!(matches!(
            row_normalized(&DenseMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap()),
            Err(Error::ZeroRow(1))
        ));
    }

    #[test]
    fn rejects_bad_input() {
        let u = DenseMatrix::identity(4);
        assert!(matches!(synth_scheme2(&u, 3), Err(Error::BadBlockSize(3))));
        assert!(matches!(synth_scheme2(&DenseMatrix::identity(2), 2), Err(Error::BadBlockSize(2))));
        let mut z = u.clone();
        z.set(1, 2, c(0.0, 0.5));
        assert!(matches!(synth_scheme2(&z, 1), Err(Error::ComplexUnsupported(1, 2))));
        let mut zero = u;
        zero.set(3, 3, c(0.0, 0.0));
        assert!(matches!(synth_scheme2(&zero, 1), Err(Error::ZeroRow(3))));
    }

    #[test]
    fn merge_identity_holds_at_every_node() {
        let u = DenseMatrix::from_real_rows(&[
            vec![0.1, 0.2, -0.3, 0.4, 0.5, 0.0, 0.0, 0.7],
            vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -2.0],
            vec![0.3; 8],
            vec![0.5, -0.5, 0.5, -0.5, 0.1, 0.1, 0.1, 0.1],
            vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0],
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
            vec![-1.0; 8],
        ])
        .unwrap();
        let plan = BlockPlan::new(&u, 1).unwrap();
        for levels in &plan.norms {
            for w in levels.windows(2) {
                for (pair, parent) in w[0].chunks(2).zip(&w[1]) {
                    if *parent == 0.0 {
                        continue;
                    }
                    let t = combine_angle(pair[0], pair[1]);
                    // cos θ · k1 = sin θ · k2 with k = 1 / norm
                    if pair[0] > 0.0 && pair[1] > 0.0 {
                        assert!((t.cos() / pair[0] - t.sin() / pair[1]).abs() < 1e-12);
                    }
                    assert!((pair[0].hypot(pair[1]) - parent).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn formation_blocks_lead_with_scaled_pairs() {
        let u = DenseMatrix::from_real_rows(&[
            vec![0.5, 0.5, 0.5, 0.5],
            vec![0.5, -0.5, 0.5, -0.5],
            vec![0.5, 0.5, -0.5, -0.5],
            vec![0.5, -0.5, -0.5, 0.5],
        ])
        .unwrap();
        let circ = synth_scheme2(&u, 1).unwrap();
        let st = stages(2, 1);
        assert_eq!(circ.gates().len(), st.combination.end);
        let vf = gate_matrix(&circ.gates()[st.formation.start], 4).unwrap();
        let k = std::f64::consts::FRAC_1_SQRT_2 / 0.5;
        for x in 0..8 {
            let (a, p) = (x / 2, x % 2);
            assert!((vf.get(2 * x, 2 * x) - c(k * u.get(a, 2 * p).re, 0.0)).norm() < 1e-12);
            assert!((vf.get(2 * x, 2 * x + 1) - c(k * u.get(a, 2 * p + 1).re, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn decomposed_cnot_counts() {
        for n in 1..=4 {
            let u = DenseMatrix::identity(1 << n);
            for c in 1..=2.min(n) {
                let k = count_gates(&decompose_circuit(&synth_scheme2(&u, c).unwrap()).unwrap());
                let phi = if c == 2 { 2 } else { 0 };
                assert_eq!(k.cnot, (1 << (2 * n)) - (1 << n) + phi, "n={n} c={c}");
                assert_eq!(k.hadamard, n);
            }
        }
    }
}
