//! Reduced-ancilla emulation of matrices with at most two adjacent nonzeros
//! per row.
//!
//! For `N = 2^n` the circuit has `n + 2` qubits: the row register on qubits
//! `0..n`, an offset qubit `n` and a rotation target `n + 1`. A Hadamard on
//! the offset qubit makes two copies of the input; a basis permutation on
//! qubits `0..=n` then routes `ψ_{s_r + e}` into slot `(r, e)`, where
//! `s_r` is the first column of row `r`'s window. One multiplexed rotation
//! (two when complex) writes `u_{r, s_r + e}` into each slot and a final
//! Hadamard on the offset qubit adds the pair. Row `r` of `U ψ / 2` is read
//! at basis state `4r`.

use crate::circuit::{Axis, Circuit, Control, Design, Gate, QubitRange, UniformRotation};
use crate::error::{Error, Result};
use crate::numerics::{log2_exact, DenseMatrix, StateVector, C64, MODULUS_SLACK};
use crate::Stages;

/// Magnitudes at or below this count as structural zeros.
pub const ZERO_TOL: f64 = 1e-12;

/// A bijection of `0..len`; `map[i]` is the source index placed at `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &m in &map {
            if m >= map.len() || std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidPermutation(format!("{map:?} is not a bijection")));
            }
        }
        Ok(Self(map))
    }

    pub fn identity(len: usize) -> Self {
        Self((0..len).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &m) in self.0.iter().enumerate() {
            inv[m] = i;
        }
        Self(inv)
    }

    /// `out[i] = v[map[i]]`.
    pub fn gather<T: Copy>(&self, v: &[T]) -> Vec<T> {
        self.0.iter().map(|&m| v[m]).collect()
    }

    /// `out[map[i]] = v[i]`, undoing [`Permutation::gather`].
    pub fn scatter<T: Copy + Default>(&self, v: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); v.len()];
        for (i, &m) in self.0.iter().enumerate() {
            out[m] = v[i];
        }
        out
    }
}

/// A matrix together with the permutations that make it banded.
///
/// The permuted matrix is `Ũ[i][j] = U[row_perm[i]][col_perm[j]]` and row
/// `i` of `Ũ` is zero outside columns `{s_i, s_i + 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    base: DenseMatrix,
    permuted: DenseMatrix,
    row_perm: Permutation,
    col_perm: Permutation,
    windows: Vec<usize>,
}

impl BandedMatrix {
    /// Checks that every row of the permuted matrix fits the given window.
    pub fn with_windows(u: &DenseMatrix, row_perm: Permutation, col_perm: Permutation, windows: Vec<usize>) -> Result<Self> {
        let permuted = permute(u, &row_perm, &col_perm)?;
        let dim = u.dim();
        if windows.len() != dim {
            return Err(Error::DimensionMismatch(format!("{} windows for {dim} rows", windows.len())));
        }
        for (row, &s) in windows.iter().enumerate() {
            if s + 1 >= dim {
                return Err(Error::NotBanded { row, reason: format!("window start {s} leaves no room for two columns") });
            }
            if let Some(col) = (0..dim).find(|&j| (j < s || j > s + 1) && permuted.get(row, j).norm() > ZERO_TOL) {
                return Err(Error::NotBanded { row, reason: format!("nonzero at column {col} outside window [{s}, {}]", s + 1) });
            }
        }
        Ok(Self { base: u.clone(), permuted, row_perm, col_perm, windows })
    }

    pub fn base(&self) -> &DenseMatrix {
        &self.base
    }

    pub fn permuted(&self) -> &DenseMatrix {
        &self.permuted
    }

    pub fn row_perm(&self) -> &Permutation {
        &self.row_perm
    }

    pub fn col_perm(&self) -> &Permutation {
        &self.col_perm
    }

    pub fn windows(&self) -> &[usize] {
        &self.windows
    }
}

fn permute(u: &DenseMatrix, rows: &Permutation, cols: &Permutation) -> Result<DenseMatrix> {
    let dim = u.dim();
    if log2_exact(dim).is_none_or(|n| n == 0) {
        return Err(Error::NotPowerOfTwo(dim));
    }
    if rows.len() != dim || cols.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "permutations of length {} and {} for dimension {dim}",
            rows.len(),
            cols.len()
        )));
    }
    let mut out = DenseMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            out.set(i, j, u.get(rows.as_slice()[i], cols.as_slice()[j]));
        }
    }
    Ok(out)
}

/// Applies the permutations and finds each row's window.
///
/// Two adjacent nonzeros start the window at the left one. A single nonzero
/// at `c` starts it at `c` (at `c - 1` in the last column). An empty row uses
/// `min(i, N - 2)`. Any other pattern is reported for the first offending row.
pub fn detect_band(u: &DenseMatrix, row_perm: Permutation, col_perm: Permutation) -> Result<BandedMatrix> {
    let permuted = permute(u, &row_perm, &col_perm)?;
    let dim = u.dim();
    let mut windows = Vec::with_capacity(dim);
    for row in 0..dim {
        let nz: Vec<usize> = (0..dim).filter(|&j| permuted.get(row, j).norm() > ZERO_TOL).collect();
        let s = match nz.as_slice() {
            [] => row.min(dim - 2),
            [c] => (*c).min(dim - 2),
            [a, b] if b - a == 1 => *a,
            [a, b] => {
                return Err(Error::NotBanded { row, reason: format!("nonzeros at columns {a} and {b} are not adjacent") })
            }
            more => return Err(Error::NotBanded { row, reason: format!("{} nonzeros", more.len()) }),
        };
        windows.push(s);
    }
    BandedMatrix::with_windows(u, row_perm, col_perm, windows)
}

/// Transpositions turning the identity arrangement of `2N` slots into one
/// where slot `(r, e)` holds a copy of `ψ_{s_r + e}` whenever that element is
/// nonzero. Slot `(j, e)` initially holds `ψ_j`.
fn routing(bm: &BandedMatrix) -> Result<Vec<(usize, usize)>> {
    let dim = bm.permuted.dim();
    let slots = 2 * dim;
    let mut source: Vec<Option<usize>> = vec![None; slots];
    let mut used = vec![false; slots];
    let demands: Vec<(usize, usize)> = (0..slots)
        .filter_map(|d| {
            let (r, e) = (d >> 1, d & 1);
            let col = bm.windows[r] + e;
            (bm.permuted.get(r, col).norm() > ZERO_TOL).then_some((d, col))
        })
        .collect();
    for &(d, col) in &demands {
        if d >> 1 == col {
            source[d] = Some(d);
            used[d] = true;
        }
    }
    for &(d, col) in &demands {
        if source[d].is_some() {
            continue;
        }
        let free = [col << 1, (col << 1) | 1].into_iter().find(|&s| !used[s]);
        let s = free.ok_or_else(|| Error::NotBanded {
            row: d >> 1,
            reason: format!("column {col} is needed by more than two slots"),
        })?;
        source[d] = Some(s);
        used[s] = true;
    }
    for d in 0..slots {
        if source[d].is_none() && !used[d] {
            source[d] = Some(d);
            used[d] = true;
        }
    }
    let mut leftovers = (0..slots).filter(|&s| !used[s]);
    let source: Vec<usize> = source
        .into_iter()
        .map(|s| s.unwrap_or_else(|| leftovers.next().expect("counts match")))
        .collect();

    // Selection sort on the arrangement; `content[slot]` is the source now there.
    let mut content: Vec<usize> = (0..slots).collect();
    let mut position: Vec<usize> = (0..slots).collect();
    let mut swaps = Vec::new();
    for d in 0..slots {
        let want = source[d];
        if content[d] != want {
            let from = position[want];
            swaps.push((d, from));
            let displaced = content[d];
            content.swap(d, from);
            position[want] = d;
            position[displaced] = from;
        }
    }
    Ok(swaps)
}

/// Gates exchanging the register basis states `a` and `b` on qubits `0..=n`.
///
/// With a pivot bit `p` where they differ, the CNOTs from `p` (firing on
/// `b`'s value of `p`) to the other differing bits map `b` to `a ^ p`; the
/// multi-controlled X on `p` then swaps `a` and `a ^ p`, and the CNOTs are
/// undone.
fn transposition(a: usize, b: usize, n: usize) -> Vec<Gate> {
    let qubit = |bit: usize| n - bit;
    let diff = a ^ b;
    let p = diff.trailing_zeros() as usize;
    let polarity = (b >> p) & 1 == 1;
    let fan: Vec<Gate> = (0..=n)
        .filter(|&bit| bit != p && (diff >> bit) & 1 == 1)
        .map(|bit| {
            if polarity {
                Gate::Cnot { control: qubit(p), target: qubit(bit) }
            } else {
                Gate::MultiControlledX { target: qubit(bit), controls: vec![Control::off(qubit(p))] }
            }
        })
        .collect();
    let controls = (0..=n)
        .rev()
        .filter(|&bit| bit != p)
        .map(|bit| Control { qubit: qubit(bit), polarity: (a >> bit) & 1 == 1 })
        .collect();
    let mut out = fan.clone();
    out.push(Gate::MultiControlledX { target: qubit(p), controls });
    out.extend(fan);
    out
}

/// A banded circuit plus what is needed to translate in and out of the
/// permuted coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedCircuit {
    pub circuit: Circuit,
    pub row_perm: Permutation,
    pub col_perm: Permutation,
    pub stages: Stages,
}

impl BandedCircuit {
    /// `ψ̃_j = ψ_{col_perm[j]}`, the input the circuit expects.
    pub fn permute_input(&self, psi: &StateVector) -> Result<StateVector> {
        StateVector::new(self.col_perm.gather(psi.amplitudes()))
    }

    /// Maps outputs indexed by rows of `Ũ` back to rows of `U`.
    pub fn unpermute_output(&self, out: &[C64]) -> Vec<C64> {
        self.row_perm.scatter(out)
    }
}

pub fn synth_banded(bm: &BandedMatrix) -> Result<BandedCircuit> {
    synth_banded_within(bm, MODULUS_SLACK)
}

/// [`synth_banded`] accepting element moduli up to `1 + tol`; larger moduli
/// are treated as 1.
pub fn synth_banded_within(bm: &BandedMatrix, tol: f64) -> Result<BandedCircuit> {
    let u = &bm.permuted;
    let dim = u.dim();
    let n = log2_exact(dim).ok_or(Error::NotPowerOfTwo(dim))?;
    let complex = !u.is_real();
    let mut y = Vec::with_capacity(2 * dim);
    let mut z = Vec::with_capacity(2 * dim);
    for (r, &s) in bm.windows.iter().enumerate() {
        for col in [s, s + 1] {
            let v = u.get(r, col);
            let m = v.norm();
            if m > 1.0 + tol {
                return Err(Error::ModulusViolation { row: r, col, modulus: m });
            }
            if complex {
                y.push(m.min(1.0).acos());
                z.push(if m > 0.0 { v.arg() } else { 0.0 });
            } else {
                y.push(v.re.clamp(-1.0, 1.0).acos());
            }
        }
    }
    let width = n + 2;
    let mut circ = Circuit::new(width, QubitRange::new(0, n), QubitRange::new(n, width))?;
    circ.push(Gate::Hadamard { target: n })?;
    for (a, b) in routing(bm)? {
        circ.extend(transposition(a, b, n))?;
    }
    let input = 0..circ.gates().len();
    let controls: Vec<usize> = (0..=n).collect();
    circ.push(UniformRotation::new(Axis::Y, n + 1, controls.clone(), y)?.into())?;
    if complex {
        circ.push(UniformRotation::new(Axis::Z, n + 1, controls, z)?.into())?;
    }
    let formation = input.end..circ.gates().len();
    circ.push(Gate::Hadamard { target: n })?;
    let combination = formation.end..circ.gates().len();
    circ.set_chosen_states((0..dim).map(|r| r << 2).collect())?;
    circ.set_scale_factor(0.5)?;
    circ.set_design(Some(Design::Banded { n, complex }));
    Ok(BandedCircuit {
        circuit: circ,
        row_perm: bm.row_perm.clone(),
        col_perm: bm.col_perm.clone(),
        stages: Stages { input, formation, combination },
    })
}
