//! Pure states as coefficient tensors and mixed states as density matrices.
//!
//! Amplitudes are stored in row-major order of the multi-index
//! `(l_1, …, l_N)`: party 0 is the slowest-varying index. Parties are
//! addressed zero-based throughout the API.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ZERO};

/// Largest total dimension accepted for any system.
pub const MAX_TOTAL_DIM: usize = 4096;

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues below this are dropped during purification.
pub const PURIFY_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuditSystem {
    dims: Vec<usize>,
}

impl QuditSystem {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Dimension("a system needs at least one party".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Dimension(format!("local dimension {d} < 2")));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&t| t <= MAX_TOTAL_DIM)
            .ok_or_else(|| Error::Dimension(format!("total dimension exceeds {MAX_TOTAL_DIM}")))?;
        debug_assert!(total >= 2);
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, party: usize) -> usize {
        self.dims[party]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// The system concatenated with a copy of itself.
    pub fn doubled(&self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&self.dims);
        Self::new(dims)
    }

    pub(crate) fn check_party(&self, party: usize) -> Result<()> {
        if party >= self.parties() {
            return Err(Error::Dimension(format!(
                "party {party} out of range for a {}-party system",
                self.parties()
            )));
        }
        Ok(())
    }

    /// (outer count, local dim, inner stride) for the given party.
    pub(crate) fn split(&self, party: usize) -> (usize, usize, usize) {
        let outer = self.dims[..party].iter().product();
        let inner = self.dims[party + 1..].iter().product();
        (outer, self.dims[party], inner)
    }

    /// Row-major flat index of a multi-index.
    pub fn flat_index(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.parties() {
            return Err(Error::Dimension(format!(
                "multi-index of length {} for a {}-party system",
                levels.len(),
                self.parties()
            )));
        }
        levels.iter().zip(&self.dims).try_fold(0usize, |acc, (&l, &d)| {
            if l >= d {
                Err(Error::Dimension(format!("level {l} out of range for dimension {d}")))
            } else {
                Ok(acc * d + l)
            }
        })
    }
}

/// Selects every amplitude whose index on `party` equals `level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SliceIndex {
    pub party: usize,
    pub level: usize,
}

impl SliceIndex {
    pub fn new(party: usize, level: usize) -> Self {
        Self { party, level }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    system: QuditSystem,
    amplitudes: CVector,
    normalized: bool,
    scale: f64,
}

impl PureState {
    /// Builds a unit vector from arbitrary nonzero amplitudes.
    pub fn new(system: QuditSystem, amplitudes: Vec<C64>) -> Result<Self> {
        let amps = Self::checked(&system, amplitudes)?;
        let n2 = linalg::norm_sqr(&amps);
        if !n2.is_finite() {
            return Err(Error::Numerical("non-finite amplitudes".into()));
        }
        if n2 == 0.0 {
            return Err(Error::ZeroVector);
        }
        let scale = 1.0 / n2.sqrt();
        Ok(Self {
            system,
            amplitudes: amps * C64::new(scale, 0.0),
            normalized: true,
            scale,
        })
    }

    /// Wraps a working vector without rescaling it; flagged unnormalized.
    pub fn unnormalized(system: QuditSystem, amplitudes: Vec<C64>) -> Result<Self> {
        let amplitudes = Self::checked(&system, amplitudes)?;
        Ok(Self {
            system,
            amplitudes,
            normalized: false,
            scale: 1.0,
        })
    }

    fn checked(system: &QuditSystem, amplitudes: Vec<C64>) -> Result<CVector> {
        if amplitudes.len() != system.total_dim() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for total dimension {}",
                amplitudes.len(),
                system.total_dim()
            )));
        }
        Ok(CVector::from_vec(amplitudes))
    }

    pub fn system(&self) -> &QuditSystem {
        &self.system
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amplitudes.as_slice()
    }

    pub(crate) fn vector(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Factor applied to the input amplitudes at construction.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::norm_sqr(&self.amplitudes)
    }

    pub fn amplitude(&self, levels: &[usize]) -> Result<C64> {
        Ok(self.amplitudes[self.system.flat_index(levels)?])
    }

    /// Unit vector in the same direction, flagged normalized.
    pub fn normalize(&self) -> Result<Self> {
        Self::new(self.system.clone(), self.amplitudes.as_slice().to_vec())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.system != other.system {
            return Err(Error::Dimension("inner product across different systems".into()));
        }
        Ok(linalg::inner(self.amplitudes(), other.amplitudes()))
    }

    pub fn slice(&self, idx: SliceIndex) -> Result<Vec<C64>> {
        self.system.check_party(idx.party)?;
        let (outer, d, inner) = self.system.split(idx.party);
        if idx.level >= d {
            return Err(Error::Dimension(format!(
                "level {} out of range for party {} of dimension {d}",
                idx.level, idx.party
            )));
        }
        let mut out = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            let base = o * d * inner + idx.level * inner;
            out.extend_from_slice(&self.amplitudes.as_slice()[base..base + inner]);
        }
        Ok(out)
    }

    /// `(I ⊗ … ⊗ op ⊗ … ⊗ I) ψ`. The result stays flagged normalized only
    /// when the input was and `op` is unitary.
    pub fn apply_local(&self, party: usize, op: &CMatrix) -> Result<Self> {
        self.system.check_party(party)?;
        let (outer, d, inner) = self.system.split(party);
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::Dimension(format!(
                "{}x{} operator on party {party} of dimension {d}",
                op.nrows(),
                op.ncols()
            )));
        }
        let src = self.amplitudes.as_slice();
        let mut out = vec![ZERO; src.len()];
        for o in 0..outer {
            let block = o * d * inner;
            for a in 0..d {
                for b in 0..d {
                    let w = op[(a, b)];
                    if w == ZERO {
                        continue;
                    }
                    let (dst, from) = (block + a * inner, block + b * inner);
                    for i in 0..inner {
                        out[dst + i] += w * src[from + i];
                    }
                }
            }
        }
        Ok(Self {
            system: self.system.clone(),
            amplitudes: CVector::from_vec(out),
            normalized: self.normalized && linalg::is_unitary(op, NORM_TOL),
            scale: self.scale,
        })
    }

    /// Single-party marginal: `(ρ_j)_{ab} = <slice(j,b), slice(j,a)>`.
    /// Its trace is the squared norm of the state.
    pub fn reduced_density(&self, party: usize) -> Result<CMatrix> {
        self.system.check_party(party)?;
        let d = self.system.dim(party);
        let slices = (0..d)
            .map(|l| self.slice(SliceIndex::new(party, l)))
            .collect::<Result<Vec<_>>>()?;
        let mut rho = CMatrix::zeros(d, d);
        for a in 0..d {
            for b in a..d {
                let v = linalg::inner(&slices[b], &slices[a]);
                rho[(a, b)] = v;
                rho[(b, a)] = v.conj();
            }
        }
        Ok(rho)
    }

    /// `|ψ><ψ|` as a density matrix.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let v = &self.amplitudes;
        DensityMatrix::new(self.system.clone(), v * v.adjoint())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    system: QuditSystem,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity. The stored matrix
    /// is the Hermitian part of the input.
    pub fn new(system: QuditSystem, matrix: CMatrix) -> Result<Self> {
        let n = system.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for total dimension {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensity("non-finite entries".into()));
        }
        let dev = linalg::hermitian_deviation(&matrix);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = linalg::trace(&matrix);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let matrix = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        let (values, _) = linalg::eigh(&matrix);
        if let Some(&min) = values.last() {
            if min < -PSD_TOL {
                return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(Self { system, matrix })
    }

    pub fn system(&self) -> &QuditSystem {
        &self.system
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `p ρ1 + (1 - p) ρ2`.
    pub fn mix(p: f64, a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidInput(format!("mixing weight {p} outside [0, 1]")));
        }
        if a.system != b.system {
            return Err(Error::Dimension("mixing states of different systems".into()));
        }
        let m = &a.matrix * C64::new(p, 0.0) + &b.matrix * C64::new(1.0 - p, 0.0);
        Self::new(a.system.clone(), m)
    }

    /// Traces out every party not listed in `keep` (zero-based, ascending).
    /// Returns the matrix on the kept parties in their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<CMatrix> {
        let dims = self.system.dims();
        for w in keep.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidInput("kept parties must be strictly ascending".into()));
            }
        }
        for &p in keep {
            self.system.check_party(p)?;
        }
        let kept_dim: usize = keep.iter().map(|&p| dims[p]).product();
        let traced_dim = self.system.total_dim() / kept_dim;
        // Split every flat index into (kept, traced) coordinates.
        let n = self.system.total_dim();
        let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_dim];
        let mut levels = vec![0usize; dims.len()];
        for flat in 0..n {
            let (mut k, mut t) = (0, 0);
            for (j, &d) in dims.iter().enumerate() {
                if keep.contains(&j) {
                    k = k * d + levels[j];
                } else {
                    t = t * d + levels[j];
                }
            }
            groups[t].push((flat, k));
            for j in (0..dims.len()).rev() {
                levels[j] += 1;
                if levels[j] < dims[j] {
                    break;
                }
                levels[j] = 0;
            }
        }
        let mut out = CMatrix::zeros(kept_dim, kept_dim);
        for group in &groups {
            for &(i, ki) in group {
                for &(j, kj) in group {
                    out[(ki, kj)] += self.matrix[(i, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn reduced_density(&self, party: usize) -> Result<CMatrix> {
        self.partial_trace(&[party])
    }

    /// Pure state on the doubled system whose marginal on the first copy
    /// reproduces this density matrix. The largest eigenvalue is paired
    /// with mirror level 0, the next with level 1 and so on.
    pub fn purify(&self) -> Result<PureState> {
        let doubled = self.system.doubled()?;
        let n = self.system.total_dim();
        let (values, vectors) = linalg::eigh(&self.matrix);
        let mut amps = vec![ZERO; n * n];
        for (k, &lambda) in values.iter().enumerate() {
            if lambda < PURIFY_CUTOFF {
                continue;
            }
            let w = lambda.sqrt();
            for i in 0..n {
                amps[i * n + k] += vectors[(i, k)] * w;
            }
        }
        PureState::new(doubled, amps)
    }
}

/// Either kind of state, for operations defined on both.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

impl<'a> StateRef<'a> {
    pub fn system(&self) -> &'a QuditSystem {
        match self {
            StateRef::Pure(s) => s.system(),
            StateRef::Mixed(r) => r.system(),
        }
    }

    pub fn as_pure(&self) -> Option<&'a PureState> {
        match self {
            StateRef::Pure(s) => Some(s),
            StateRef::Mixed(_) => None,
        }
    }
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(s: &'a PureState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(r: &'a DensityMatrix) -> Self {
        StateRef::Mixed(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, frobenius, ONE};
    use crate::states;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn new_pure_normalizes() {
        let ghz = PureState::new(
            QuditSystem::qubits(3).unwrap(),
            vec![ONE, ZERO, ZERO, ZERO, ZERO, ZERO, ZERO, ONE],
        )
        .unwrap();
        assert!((ghz.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((ghz.scale() - S).abs() < 1e-15);
        assert!((ghz.amplitudes()[7].re - S).abs() < 1e-15);

        let bell = states::bell();
        assert!((bell.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn new_pure_rejects_bad_input() {
        let q1 = QuditSystem::qubits(1).unwrap();
        assert!(matches!(PureState::new(q1.clone(), vec![ZERO, ZERO]), Err(Error::ZeroVector)));
        assert!(matches!(PureState::new(q1, vec![ONE]), Err(Error::Dimension(_))));
        assert!(QuditSystem::new(vec![2, 1]).is_err());
        assert!(QuditSystem::new(vec![]).is_err());
        assert!(QuditSystem::new(vec![2; 13]).is_err());
    }

    #[test]
    fn slices() {
        let bell = states::bell();
        assert!(close(&bell.slice(SliceIndex::new(0, 0)).unwrap(), &[c(S, 0.0), ZERO], 1e-15));

        let ghz = states::ghz(3);
        assert!(close(&ghz.slice(SliceIndex::new(2, 1)).unwrap(), &[ZERO, ZERO, ZERO, c(S, 0.0)], 1e-15));

        let t = 1.0 / 3f64.sqrt();
        let w = states::w(3);
        assert!(close(&w.slice(SliceIndex::new(0, 0)).unwrap(), &[ZERO, c(t, 0.0), c(t, 0.0), ZERO], 1e-15));

        assert!(w.slice(SliceIndex::new(3, 0)).is_err());
        assert!(w.slice(SliceIndex::new(0, 2)).is_err());
    }

    #[test]
    fn local_application() {
        let zero = states::basis(&[2], &[0]);
        let flipped = zero.apply_local(0, &crate::measurements::pauli(1)).unwrap();
        assert!(close(flipped.amplitudes(), &[ZERO, ONE], 0.0));
        assert!(flipped.is_normalized());

        let ghz = states::ghz(3);
        assert_eq!(ghz.apply_local(2, &linalg::identity(2)).unwrap().amplitudes(), ghz.amplitudes());

        let squeeze = CMatrix::from_diagonal(&CVector::from_vec(vec![c(2.0, 0.0), c(0.5, 0.0)]));
        let out = states::bell().apply_local(1, &squeeze).unwrap();
        assert!(!out.is_normalized());
        assert!(close(out.amplitudes(), &[c(2.0 * S, 0.0), ZERO, ZERO, c(0.5 * S, 0.0)], 1e-15));

        assert!(ghz.apply_local(0, &linalg::identity(3)).is_err());
    }

    #[test]
    fn reduced_densities() {
        let half = linalg::identity(2) * c(0.5, 0.0);
        assert!(frobenius(&(states::bell().reduced_density(0).unwrap() - half)) < 1e-15);

        let r = states::basis(&[2, 2], &[0, 0]).reduced_density(1).unwrap();
        assert_eq!(r[(0, 0)], ONE);
        assert_eq!(r[(1, 1)], ZERO);

        let rw = states::w(3).reduced_density(0).unwrap();
        let want = CMatrix::from_diagonal(&CVector::from_vec(vec![c(2.0 / 3.0, 0.0), c(1.0 / 3.0, 0.0)]));
        assert!(frobenius(&(rw - want)) < 1e-15);

        assert!(states::bell().reduced_density(2).is_err());
    }

    #[test]
    fn purification_examples() {
        let q1 = QuditSystem::qubits(1).unwrap();
        let pure0 = DensityMatrix::new(q1.clone(), CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, ZERO]))).unwrap();
        let psi = pure0.purify().unwrap();
        assert_eq!(psi.system().dims(), &[2, 2]);
        assert!((psi.amplitudes()[0].norm() - 1.0).abs() < 1e-14);

        let mixed = DensityMatrix::new(
            q1.clone(),
            CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.5, 0.0), c(0.5, 0.0)])),
        )
        .unwrap();
        let psi = mixed.purify().unwrap();
        // Maximally entangled: both marginals maximally mixed.
        let half = linalg::identity(2) * c(0.5, 0.0);
        assert!(frobenius(&(psi.reduced_density(0).unwrap() - &half)) < 1e-12);
        assert!(frobenius(&(psi.reduced_density(1).unwrap() - &half)) < 1e-12);

        let rho = CMatrix::from_diagonal(&CVector::from_vec(vec![c(2.0 / 3.0, 0.0), c(1.0 / 3.0, 0.0)]));
        let psi = DensityMatrix::new(q1, rho.clone()).unwrap().purify().unwrap();
        let mags: Vec<f64> = psi.amplitudes().iter().map(|z| z.norm()).collect();
        assert!((mags[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((mags[3] - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(mags[1] < 1e-12 && mags[2] < 1e-12);
        let back = psi.to_density().unwrap().partial_trace(&[0]).unwrap();
        assert!(frobenius(&(back - rho)) < 1e-10);
    }

    #[test]
    fn density_validation() {
        let q1 = QuditSystem::qubits(1).unwrap();
        let not_herm = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), ONE, ZERO, c(0.5, 0.0)]);
        assert!(matches!(DensityMatrix::new(q1.clone(), not_herm), Err(Error::NotHermitian(_))));
        let bad_trace = linalg::identity(2);
        assert!(matches!(DensityMatrix::new(q1.clone(), bad_trace), Err(Error::InvalidDensity(_))));
        let negative = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(DensityMatrix::new(q1, negative), Err(Error::InvalidDensity(_))));
    }

    #[test]
    fn flat_index_is_row_major() {
        let s = QuditSystem::new(vec![2, 3, 2]).unwrap();
        assert_eq!(s.flat_index(&[1, 2, 1]).unwrap(), 6 + 4 + 1);
        assert!(s.flat_index(&[0, 3, 0]).is_err());
    }
}
