//! Bundled hydrogen-molecule propagator in banded form.
//!
//! Each record gives the 5-bit control state of one slot of the banded
//! circuit (four row bits, then the offset bit), the matrix element planted
//! there, and the Z and Y rotation angles in half-angle form, all rounded to
//! four decimals. The `row`/`col` fields fix the element's position.

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::banded::{BandedMatrix, Permutation};
use crate::error::{Error, Result};
use crate::numerics::{c, DenseMatrix, C64};

pub const H2_DATASET: &str = include_str!("../data/h2_table.json");

const RECORDS: usize = 20;
const DIM: usize = 16;

#[derive(Deserialize)]
struct RecordDoc {
    control: String,
    row: usize,
    col: usize,
    element: [f64; 2],
    rz: f64,
    ry: f64,
}

#[derive(Deserialize)]
struct TableDoc {
    dim: usize,
    records: Vec<RecordDoc>,
    sha256: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct H2Record {
    pub control: String,
    pub row: usize,
    pub col: usize,
    pub element: C64,
    pub rz_half_angle: f64,
    pub ry_half_angle: f64,
}

impl H2Record {
    /// Offset bit of the control state.
    pub fn offset(&self) -> usize {
        usize::from(self.control.ends_with('1'))
    }

    /// `e^{i rz/2} cos(ry/2)`, the element implied by the angles.
    pub fn element_from_angles(&self) -> C64 {
        C64::from_polar((self.ry_half_angle / 2.0).cos(), self.rz_half_angle / 2.0)
    }

    pub fn consistency_error(&self) -> f64 {
        (self.element_from_angles() - self.element).norm()
    }

    fn canonical_line(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}|{}|{}\n",
            self.control, self.row, self.col, self.element.re, self.element.im, self.rz_half_angle, self.ry_half_angle
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct H2Table {
    pub records: Vec<H2Record>,
}

pub fn load_h2() -> Result<H2Table> {
    parse_h2(H2_DATASET)
}

/// Parses a dataset in the bundled format, checking record count, checksum
/// and that each position agrees with its control state.
pub fn parse_h2(text: &str) -> Result<H2Table> {
    let doc: TableDoc = serde_json::from_str(text)?;
    if doc.dim != DIM || doc.records.len() != RECORDS {
        return Err(Error::Dataset(format!(
            "expected {RECORDS} records of a {DIM}x{DIM} matrix, found {} of {}x{}",
            doc.records.len(),
            doc.dim,
            doc.dim
        )));
    }
    let records: Vec<H2Record> = doc
        .records
        .into_iter()
        .map(|r| H2Record {
            control: r.control,
            row: r.row,
            col: r.col,
            element: c(r.element[0], r.element[1]),
            rz_half_angle: r.rz,
            ry_half_angle: r.ry,
        })
        .collect();
    let mut hasher = Sha256::new();
    for r in &records {
        hasher.update(r.canonical_line().as_bytes());
    }
    let digest = hex::encode(hasher.finalize());
    if digest != doc.sha256 {
        return Err(Error::Dataset(format!("checksum mismatch: {digest} != {}", doc.sha256)));
    }
    for r in &records {
        let bits = usize::from_str_radix(&r.control, 2)
            .ok()
            .filter(|_| r.control.len() == 5)
            .ok_or_else(|| Error::Dataset(format!("bad control state {:?}", r.control)))?;
        if bits >> 1 != r.row || r.col >= DIM || r.col < r.offset() {
            return Err(Error::Dataset(format!(
                "control {} does not match position ({}, {})",
                r.control, r.row, r.col
            )));
        }
    }
    let table = H2Table { records };
    table.windows()?;
    Ok(table)
}

impl H2Table {
    /// Window start per row, `col - offset` of its records.
    pub fn windows(&self) -> Result<Vec<usize>> {
        let mut windows: Vec<Option<usize>> = vec![None; DIM];
        for r in &self.records {
            let s = r.col - r.offset();
            match windows[r.row] {
                Some(prev) if prev != s => {
                    return Err(Error::Dataset(format!("row {} has windows {prev} and {s}", r.row)))
                }
                _ => windows[r.row] = Some(s),
            }
        }
        Ok(windows
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.unwrap_or(i.min(DIM - 2)))
            .collect())
    }

    /// Records whose rotation angles are not both zero.
    pub fn rotation_bearing(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.rz_half_angle != 0.0 || r.ry_half_angle != 0.0)
            .count()
    }

    /// Per-record distance between the listed element and the one implied
    /// by the listed angles.
    pub fn consistency_errors(&self) -> Vec<f64> {
        self.records.iter().map(H2Record::consistency_error).collect()
    }

    pub fn banded(&self) -> Result<BandedMatrix> {
        BandedMatrix::with_windows(
            &reconstruct_h2(self),
            Permutation::identity(DIM),
            Permutation::identity(DIM),
            self.windows()?,
        )
    }
}

/// The 16x16 matrix with every listed element at its position.
pub fn reconstruct_h2(table: &H2Table) -> DenseMatrix {
    let mut u = DenseMatrix::zeros(DIM);
    for r in &table.records {
        u.set(r.row, r.col, r.element);
    }
    u
}

/// `(total, diagonal)` counts of entries differing from the identity by
/// more than `tol`.
pub fn nontrivial_entries(u: &DenseMatrix, tol: f64) -> (usize, usize) {
    let mut total = 0;
    let mut diagonal = 0;
    for i in 0..u.dim() {
        for j in 0..u.dim() {
            let delta = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
            if (u.get(i, j) - delta).norm() > tol {
                total += 1;
                diagonal += usize::from(i == j);
            }
        }
    }
    (total, diagonal)
}
