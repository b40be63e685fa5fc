//! Seeded random states and local group elements for sampling-based checks.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{c, CMatrix, C64};
use crate::tensor_state::{DensityMatrix, PureState, QuditSystem};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state (normalized complex Gaussian vector).
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, system: &QuditSystem) -> PureState {
    let amps = (0..system.total_dim()).map(|_| gaussian(rng)).collect();
    PureState::new(system.clone(), amps).expect("gaussian vector is nonzero")
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix,
/// with the phases of R's diagonal absorbed.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let qr = ginibre(rng, d, d).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..d {
        let z = r[(k, k)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Random element of SL(d, C): a Ginibre matrix rescaled to unit determinant.
pub fn special_linear<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    loop {
        let g = ginibre(rng, d, d);
        let det = g.determinant();
        if det.norm() > 1e-3 {
            return g / det.powf(1.0 / d as f64);
        }
    }
}

/// Random density matrix `A A† / tr(A A†)` with `A` a D×rank Ginibre matrix.
pub fn density<R: Rng + ?Sized>(rng: &mut R, system: &QuditSystem, rank: usize) -> Result<DensityMatrix> {
    let n = system.total_dim();
    let a = ginibre(rng, n, rank.max(1));
    let m = &a * a.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    DensityMatrix::new(system.clone(), m / c(tr, 0.0))
}
