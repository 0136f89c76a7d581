//! Dense complex linear algebra, statevectors, gray/binary codes and the
//! fast Walsh–Hadamard transform.
//!
//! Matrices are stored row-major: entry `(i, j)` lives at `i * dim + j`.
//! Qubit 0 is the most significant bit of a basis index throughout the crate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Structural tolerance used for identities that hold exactly in real arithmetic.
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Tolerance for data that was rounded to four decimals before publication.
pub const ROUNDED_DATA_TOL: f64 = 5e-3;
/// Slack allowed above modulus 1 before a synthesis input is rejected.
pub const MODULUS_SLACK: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `Some(k)` when `n == 2^k`.
pub fn log2_exact(n: usize) -> Option<usize> {
    if n.is_power_of_two() {
        Some(n.trailing_zeros() as usize)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_entries(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {dim}x{dim} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!("entry ({}, {})", pos / dim, pos % dim)));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_entries(dim, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_real(dim, &flat)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits the matrix acts on, if its dimension is a power of two.
    pub fn num_qubits(&self) -> Option<usize> {
        log2_exact(self.dim)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {0}x{0} by {1}x{1}",
                self.dim, other.dim
            )));
        }
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against a {1}x{1} matrix",
                v.len(),
                self.dim
            )));
        }
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    /// `max |A A^† - I|` over all entries.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self
            .matmul(&self.adjoint())
            .expect("a square matrix always multiplies its adjoint");
        prod.max_abs_diff(&DenseMatrix::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dimensions");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Euclidean norm of each row.
    pub fn row_norms(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let (n, m) = (self.dim, other.dim);
        let mut out = DenseMatrix::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&MatrixFile::from(self)).expect("matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// A matrix element as stored on disk: a bare number for real values or an
/// `[re, im]` pair.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Entry> for C64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

/// On-disk matrix document: `{"dim": int, "entries": [...]}`, row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<Entry>,
}

impl From<&DenseMatrix> for MatrixFile {
    fn from(m: &DenseMatrix) -> Self {
        let real = m.is_real();
        let entries = m
            .entries()
            .iter()
            .map(|z| {
                if real {
                    Entry::Real(z.re)
                } else {
                    Entry::Complex([z.re, z.im])
                }
            })
            .collect();
        MatrixFile { dim: m.dim(), entries }
    }
}

impl TryFrom<MatrixFile> for DenseMatrix {
    type Error = Error;

    fn try_from(f: MatrixFile) -> Result<Self> {
        DenseMatrix::from_entries(f.dim, f.entries.into_iter().map(C64::from).collect())
    }
}

/// Amplitudes over `num_qubits` qubits, qubit 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes without renormalizing them.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let num_qubits = log2_exact(amps.len()).ok_or(Error::BadLength(amps.len()))?;
        if let Some(pos) = amps.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!("amplitude {pos}")));
        }
        Ok(Self { num_qubits, amps })
    }

    /// Wraps and rescales to unit norm; the zero vector is rejected.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let mut s = Self::new(amps)?;
        let norm = s.norm();
        if norm == 0.0 {
            return Err(Error::NotUnit(0.0));
        }
        s.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(s)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    pub fn uniform(num_qubits: usize) -> Self {
        let len = 1usize << num_qubits;
        let a = 1.0 / (len as f64).sqrt();
        Self {
            num_qubits,
            amps: vec![C64::new(a, 0.0); len],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        inner(&self.amps, &other.amps)
    }
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `|<a|b>|^2 / (|a|^2 |b|^2)`; zero when either vector vanishes.
pub fn fidelity(a: &[C64], b: &[C64]) -> f64 {
    let na: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    inner(a, b).norm_sqr() / (na * nb)
}

/// Unnormalized Walsh–Hadamard transform in natural (Hadamard) order.
///
/// Applying it twice multiplies the input by its length.
pub fn fwht(v: &[f64]) -> Result<Vec<f64>> {
    let mut out = v.to_vec();
    fwht_in_place(&mut out)?;
    Ok(out)
}

pub fn fwht_in_place(v: &mut [f64]) -> Result<()> {
    let mut ops = 0;
    fwht_counted(v, &mut ops)
}

/// FWHT that also adds its additions and subtractions to `ops`.
pub fn fwht_counted(v: &mut [f64], ops: &mut u64) -> Result<()> {
    let n = v.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::BadLength(n));
    }
    let mut h = 1;
    while h < n {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        *ops += n as u64;
        h *= 2;
    }
    Ok(())
}

/// Reflected binary gray code of `i`.
pub fn gray_code(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Parity of the bitwise AND of `x` and `y`: the mod-2 dot product of their
/// binary expansions.
pub fn binary_dot(x: u64, y: u64) -> u64 {
    u64::from((x & y).count_ones() & 1)
}

/// The `2^k` gray codes in sequence order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayCodeTable {
    k: usize,
    codes: Vec<u64>,
}

impl GrayCodeTable {
    pub fn new(k: usize) -> Self {
        let codes = (0..1u64 << k).map(gray_code).collect();
        Self { k, codes }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    /// Bit position that changes between code `i` and code `i + 1`,
    /// wrapping from the last code back to the first.
    pub fn flip_bit(&self, i: usize) -> usize {
        let next = self.codes[(i + 1) % self.codes.len()];
        (self.codes[i] ^ next).trailing_zeros() as usize
    }
}
