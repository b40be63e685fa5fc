//! Single-mode oscillator in a truncated Fock space with the quadrature
//! pair `q = (a + a†)/2`, `p = −i(a − a†)/2` as the measurement set.

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, I, ONE, ZERO};
use crate::measurements::{self, MeasurementSet, Observable, SetKind, VarianceReport};
use crate::tensor_state::{PureState, QuditSystem};

/// Largest weight allowed on the two topmost Fock levels.
pub const TAIL_GUARD: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct FockSpace {
    n_max: usize,
    a: CMatrix,
    q: CMatrix,
    p: CMatrix,
}

impl FockSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::InvalidInput(format!("truncation n_max = {n_max} is below 2")));
        }
        let d = n_max + 1;
        let mut a = CMatrix::zeros(d, d);
        for n in 1..d {
            a[(n - 1, n)] = c((n as f64).sqrt(), 0.0);
        }
        let adag = a.adjoint();
        let q = (&a + &adag) * c(0.5, 0.0);
        let p = (&a - &adag) * (-I * 0.5);
        Ok(Self { n_max, a, q, p })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn lowering(&self) -> &CMatrix {
        &self.a
    }

    pub fn raising(&self) -> CMatrix {
        self.a.adjoint()
    }

    pub fn q(&self) -> &CMatrix {
        &self.q
    }

    pub fn p(&self) -> &CMatrix {
        &self.p
    }

    pub fn system(&self) -> QuditSystem {
        QuditSystem::new(vec![self.dim()]).expect("n_max >= 2 gives a valid system")
    }

    pub fn quadrature_set(&self) -> Result<MeasurementSet> {
        MeasurementSet::with_kind(
            self.system(),
            SetKind::Quadrature,
            vec![
                Observable::local("q", 0, self.q.clone())?,
                Observable::local("p", 0, self.p.clone())?,
            ],
        )
    }
}

/// Weight on the levels above `n_max − 2`.
fn tail_weight(state: &PureState) -> f64 {
    let amps = state.amplitudes();
    let cut = amps.len().saturating_sub(2);
    amps[cut..].iter().map(|z| z.norm_sqr()).sum::<f64>() / state.norm_sqr()
}

fn guard(state: &PureState) -> Result<()> {
    let weight = tail_weight(state);
    if weight > TAIL_GUARD {
        return Err(Error::Truncation {
            weight,
            level: state.system().dim(0).saturating_sub(3),
        });
    }
    Ok(())
}

pub fn fock_state(n: usize, n_max: usize) -> Result<PureState> {
    let space = FockSpace::new(n_max)?;
    if n > n_max {
        return Err(Error::InvalidInput(format!("Fock level {n} above truncation {n_max}")));
    }
    let mut amps = vec![ZERO; space.dim()];
    amps[n] = ONE;
    PureState::new(space.system(), amps)
}

/// `exp(r(a² − a†²)/2)|0>` by dense matrix exponential in the truncated space.
pub fn squeezed_vacuum(r: f64, n_max: usize) -> Result<PureState> {
    if !r.is_finite() {
        return Err(Error::InvalidInput(format!("squeezing parameter {r}")));
    }
    let space = FockSpace::new(n_max)?;
    // The generator has real entries; exponentiate it as a real matrix.
    let a = space.lowering().map(|z| z.re);
    let adag = a.transpose();
    let generator = (&a * &a - &adag * &adag) * (0.5 * r);
    let squeeze = generator.exp();
    let state = PureState::new(space.system(), squeeze.column(0).iter().map(|&v| c(v, 0.0)).collect())?;
    guard(&state)?;
    Ok(state)
}

/// Smallest truncation whose exact squeezed-vacuum tail keeps well inside the
/// guard, from the photon-pair distribution
/// `P(2k) = tanh(r)^{2k} (2k)! / (4^k (k!)² cosh r)`.
pub fn required_nmax(r: f64) -> usize {
    let t2 = r.tanh().powi(2);
    let mut pk = 1.0 / r.cosh();
    let mut cumulative = pk;
    let mut k = 0usize;
    while 1.0 - cumulative > 1e-12 && k < 2000 {
        pk *= t2 * (2 * k + 1) as f64 / (2 * k + 2) as f64;
        cumulative += pk;
        k += 1;
    }
    (2 * k + 6).max(10)
}

/// `V(q) + V(p)` through the measurements module, after the truncation guard.
pub fn quadrature_total_variance(state: &PureState) -> Result<VarianceReport> {
    if state.system().parties() != 1 {
        return Err(Error::Dimension("oscillator states have a single party".into()));
    }
    guard(state)?;
    let space = FockSpace::new(state.system().dim(0) - 1)?;
    measurements::total_variance(state, &space.quadrature_set()?)
}

/// `(2n + 1)/2`.
pub fn fock_total_formula(n: usize) -> f64 {
    (2 * n + 1) as f64 / 2.0
}

/// Closed form `cosh(2r)/2` for the convention used by [`squeezed_vacuum`].
pub fn squeezed_total_closed_form(r: f64) -> f64 {
    (2.0 * r).cosh() / 2.0
}

/// The alternative expression `(2 cosh r − 1)/2` quoted in the literature.
/// It agrees with [`squeezed_total_closed_form`] only at `r = 0`.
pub fn squeezed_total_published(r: f64) -> f64 {
    (2.0 * r.cosh() - 1.0) / 2.0
}
