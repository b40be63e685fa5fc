//! Small dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Largest entrywise deviation `|m_ij - conj(m_ji)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm_sqr(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `<a|b>`, conjugate-linear in the first argument.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Traceless part `m - tr(m)/d * I`.
pub fn traceless(m: &CMatrix) -> CMatrix {
    let d = m.nrows();
    let shift = trace(m) / d as f64;
    let mut out = m.clone();
    for i in 0..d {
        out[(i, i)] -= shift;
    }
    out
}

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are returned in
/// descending order; column `k` of the second value is the eigenvector
/// belonging to eigenvalue `k`.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// `exp(t * h)` for Hermitian `h`, through its eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let (values, u) = eigh(h);
    let mut scaled = u.clone();
    for (k, lambda) in values.iter().enumerate() {
        let f = (t * lambda).exp();
        scaled.column_mut(k).scale_mut(f);
    }
    scaled * u.adjoint()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Dense embedding `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` acting on party `party`
/// (zero-based) of a system with local dimensions `dims`.
pub fn embed_local(dims: &[usize], party: usize, op: &CMatrix) -> CMatrix {
    dims.iter().enumerate().fold(CMatrix::identity(1, 1), |acc, (j, &d)| {
        if j == party {
            kron(&acc, op)
        } else {
            kron(&acc, &identity(d))
        }
    })
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && frobenius(&(m.adjoint() * m - identity(m.nrows()))) <= tol
}
