//! Seeded random test matrices.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::numerics::{c, DenseMatrix};

/// Haar-distributed real orthogonal matrix of dimension `dim`: QR of a
/// Gaussian matrix with the signs of `R`'s diagonal moved into `Q`.
pub fn random_orthogonal<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseMatrix {
    let g = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    let mut out = DenseMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            out.set(i, j, c(q[(i, j)], 0.0));
        }
    }
    out
}

/// Entries uniform in `[-1, 1]`.
pub fn random_nonunitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            out.set(i, j, c(rng.random_range(-1.0..=1.0), 0.0));
        }
    }
    out
}

/// Orthogonal matrix made of random 2x2 rotations on adjacent indices and
/// `±1` singletons along the diagonal, so every row has at most two adjacent
/// nonzeros.
pub fn random_banded<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(dim);
    let mut i = 0;
    while i < dim {
        if i + 1 < dim && rng.random_bool(0.6) {
            let (s, co) = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI).sin_cos();
            out.set(i, i, c(co, 0.0));
            out.set(i, i + 1, c(s, 0.0));
            out.set(i + 1, i, c(-s, 0.0));
            out.set(i + 1, i + 1, c(co, 0.0));
            i += 2;
        } else {
            out.set(i, i, c(if rng.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0));
            i += 1;
        }
    }
    out
}
