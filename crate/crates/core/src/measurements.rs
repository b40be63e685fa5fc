//! Measurement sets, expectations, variances and the total variance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, C64, I, ONE, ZERO};
use crate::tensor_state::{QuditSystem, StateRef};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const IMAG_TOL: f64 = 1e-12;
pub const VARIANCE_CLAMP: f64 = 1e-12;
pub const CASIMIR_TOL: f64 = 1e-10;

/// Pauli matrix `σ_alpha`, `alpha ∈ {1, 2, 3}`.
pub fn pauli(alpha: usize) -> CMatrix {
    match alpha {
        1 => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => panic!("Pauli index must be 1, 2 or 3, got {alpha}"),
    }
}

/// Generalized Gell-Mann matrices for dimension `d`, normalized to
/// `tr(T_a T_b) = 2 δ_ab`. Ordered so that `d = 2` yields σ1, σ2, σ3 and
/// `d = 3` yields the conventional λ1 … λ8.
pub fn gell_mann(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    for k in 1..d {
        for j in 0..k {
            let mut sym = CMatrix::zeros(d, d);
            sym[(j, k)] = ONE;
            sym[(k, j)] = ONE;
            out.push(sym);
            let mut anti = CMatrix::zeros(d, d);
            anti[(j, k)] = -I;
            anti[(k, j)] = I;
            out.push(anti);
        }
        let l = k as f64;
        let w = (2.0 / (l * (l + 1.0))).sqrt();
        let mut diag = CMatrix::zeros(d, d);
        for m in 0..k {
            diag[(m, m)] = c(w, 0.0);
        }
        diag[(k, k)] = c(-l * w, 0.0);
        out.push(diag);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scope {
    Local { party: usize, matrix: CMatrix },
    Global { matrix: CMatrix },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    label: String,
    scope: Scope,
}

impl Observable {
    fn checked(label: String, scope: Scope) -> Result<Self> {
        let m = match &scope {
            Scope::Local { matrix, .. } | Scope::Global { matrix } => matrix,
        };
        if !m.is_square() {
            return Err(Error::Dimension(format!("observable {label} is not square")));
        }
        let dev = linalg::hermitian_deviation(m);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { label, scope })
    }

    pub fn local(label: impl Into<String>, party: usize, matrix: CMatrix) -> Result<Self> {
        Self::checked(label.into(), Scope::Local { party, matrix })
    }

    pub fn global(label: impl Into<String>, matrix: CMatrix) -> Result<Self> {
        Self::checked(label.into(), Scope::Global { matrix })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    fn fits(&self, system: &QuditSystem) -> Result<()> {
        match &self.scope {
            Scope::Local { party, matrix } => {
                system.check_party(*party)?;
                if matrix.nrows() != system.dim(*party) {
                    return Err(Error::Dimension(format!(
                        "observable {} has dimension {} but party {party} has {}",
                        self.label,
                        matrix.nrows(),
                        system.dim(*party)
                    )));
                }
            }
            Scope::Global { matrix } => {
                if matrix.nrows() != system.total_dim() {
                    return Err(Error::Dimension(format!(
                        "observable {} has dimension {} but the system has {}",
                        self.label,
                        matrix.nrows(),
                        system.total_dim()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Which construction produced a set; qubit-specific checks key off it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    Pauli,
    SuD,
    Quadrature,
    Custom,
}

#[derive(Debug, Clone)]
pub struct MeasurementSet {
    system: QuditSystem,
    kind: SetKind,
    observables: Vec<Observable>,
    casimir: Option<f64>,
}

impl MeasurementSet {
    /// Custom set; the Casimir constant is attached when `Σ M_i²` is
    /// proportional to the identity.
    pub fn new(system: QuditSystem, observables: Vec<Observable>) -> Result<Self> {
        Self::with_kind(system, SetKind::Custom, observables)
    }

    pub(crate) fn with_kind(system: QuditSystem, kind: SetKind, observables: Vec<Observable>) -> Result<Self> {
        for obs in &observables {
            obs.fits(&system)?;
        }
        let mut set = Self {
            system,
            kind,
            observables,
            casimir: None,
        };
        set.casimir = verify_casimir(&set);
        Ok(set)
    }

    pub fn system(&self) -> &QuditSystem {
        &self.system
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn casimir(&self) -> Option<f64> {
        self.casimir
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }
}

/// The 3N local Pauli observables `σ_alpha@j`; Casimir 3N.
pub fn pauli_set(system: &QuditSystem) -> Result<MeasurementSet> {
    if !system.is_qubits() {
        return Err(Error::Dimension(format!(
            "Pauli set requires qubits, got dims {:?}",
            system.dims()
        )));
    }
    let observables = (0..system.parties())
        .flat_map(|j| (1..=3).map(move |a| (j, a)))
        .map(|(j, a)| Observable::local(format!("sigma{a}@{}", j + 1), j, pauli(a)))
        .collect::<Result<Vec<_>>>()?;
    MeasurementSet::with_kind(system.clone(), SetKind::Pauli, observables)
}

/// Per party, the `d² − 1` generalized Gell-Mann generators.
pub fn su_d_set(system: &QuditSystem) -> Result<MeasurementSet> {
    let mut observables = Vec::new();
    for (j, &d) in system.dims().iter().enumerate() {
        let prefix = if d == 2 { "sigma" } else { "lambda" };
        for (a, m) in gell_mann(d).into_iter().enumerate() {
            observables.push(Observable::local(format!("{prefix}{}@{}", a + 1, j + 1), j, m)?);
        }
    }
    MeasurementSet::with_kind(system.clone(), SetKind::SuD, observables)
}

/// `(⟨M⟩, ⟨M²⟩)` for the ray through `state`.
fn moments(state: StateRef<'_>, obs: &Observable) -> Result<(C64, C64)> {
    obs.fits(state.system())?;
    let (mean, second) = match (state, obs.scope()) {
        (StateRef::Pure(psi), Scope::Local { party, matrix }) => {
            let n2 = psi.norm_sqr();
            let phi = psi.apply_local(*party, matrix)?;
            let mean = linalg::inner(psi.amplitudes(), phi.amplitudes()) / n2;
            (mean, c(phi.norm_sqr() / n2, 0.0))
        }
        (StateRef::Pure(psi), Scope::Global { matrix }) => {
            let v = psi.vector();
            let n2 = psi.norm_sqr();
            let mv = matrix * v;
            (v.dotc(&mv) / n2, c(linalg::norm_sqr(&mv) / n2, 0.0))
        }
        (StateRef::Mixed(rho), Scope::Local { party, matrix }) => {
            let r = rho.reduced_density(*party)?;
            (linalg::trace(&(&r * matrix)), linalg::trace(&(&r * matrix * matrix)))
        }
        (StateRef::Mixed(rho), Scope::Global { matrix }) => {
            let r = rho.matrix();
            (linalg::trace(&(r * matrix)), linalg::trace(&(r * matrix * matrix)))
        }
    };
    for z in [mean, second] {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Numerical(format!("non-finite moment for {}", obs.label())));
        }
        if z.im.abs() > IMAG_TOL {
            return Err(Error::Numerical(format!(
                "imaginary expectation {:e} for {} (non-Hermitian observable?)",
                z.im,
                obs.label()
            )));
        }
    }
    Ok((mean, second))
}

fn variance_from(mean: f64, second: f64, label: &str) -> Result<f64> {
    let v = second - mean * mean;
    if v >= 0.0 {
        Ok(v)
    } else if v >= -VARIANCE_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::Numerical(format!("negative variance {v:e} for {label}")))
    }
}

/// `⟨ψ|M|ψ⟩` (per unit norm) or `Tr(ρM)`.
pub fn expectation<'a>(state: impl Into<StateRef<'a>>, obs: &Observable) -> Result<f64> {
    Ok(moments(state.into(), obs)?.0.re)
}

/// `⟨M²⟩ − ⟨M⟩²`, clamped to zero inside the rounding band.
pub fn variance<'a>(state: impl Into<StateRef<'a>>, obs: &Observable) -> Result<f64> {
    let (mean, second) = moments(state.into(), obs)?;
    variance_from(mean.re, second.re, obs.label())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    pub labels: Vec<String>,
    pub expectations: Vec<f64>,
    pub variances: Vec<f64>,
    pub total: f64,
    pub casimir: Option<f64>,
}

impl VarianceReport {
    pub fn sum_sq_expectations(&self) -> f64 {
        self.expectations.iter().map(|m| m * m).sum()
    }
}

/// Per-observable expectations and variances plus their total. When the set
/// has a Casimir constant `C`, the identity `total = C − Σ⟨M_i⟩²` is checked.
pub fn total_variance<'a>(state: impl Into<StateRef<'a>>, set: &MeasurementSet) -> Result<VarianceReport> {
    let state = state.into();
    if state.system() != set.system() {
        return Err(Error::Dimension(format!(
            "state dims {:?} vs measurement set dims {:?}",
            state.system().dims(),
            set.system().dims()
        )));
    }
    let mut report = VarianceReport {
        labels: Vec::with_capacity(set.len()),
        expectations: Vec::with_capacity(set.len()),
        variances: Vec::with_capacity(set.len()),
        total: 0.0,
        casimir: set.casimir(),
    };
    for obs in set.observables() {
        let (mean, second) = moments(state, obs)?;
        let v = variance_from(mean.re, second.re, obs.label())?;
        report.labels.push(obs.label().to_string());
        report.expectations.push(mean.re);
        report.variances.push(v);
    }
    report.total = report.variances.iter().sum();
    if let Some(cas) = report.casimir {
        let gap = (report.total - (cas - report.sum_sq_expectations())).abs();
        if gap > CASIMIR_TOL {
            return Err(Error::Numerical(format!(
                "Casimir identity violated by {gap:e}"
            )));
        }
    }
    Ok(report)
}

/// Returns `C` when `Σ_i M_i² = C·I` within the Casimir tolerance
/// (Frobenius norm over the full space), otherwise `None`.
///
/// Sets made only of local observables are checked party by party: the
/// traceless remainders of different parties are Hilbert–Schmidt
/// orthogonal once embedded, so the full-space deviation is
/// `sqrt(Σ_j D/d_j ‖S_j − c_j I‖²)`. Sets with global observables are
/// summed densely.
pub fn verify_casimir(set: &MeasurementSet) -> Option<f64> {
    let system = set.system();
    let dims = system.dims();
    let total_dim = system.total_dim();
    let mut per_party: Vec<CMatrix> = dims.iter().map(|&d| CMatrix::zeros(d, d)).collect();
    let mut global: Option<CMatrix> = None;
    for obs in set.observables() {
        match obs.scope() {
            Scope::Local { party, matrix } => per_party[*party] += matrix * matrix,
            Scope::Global { matrix } => {
                let sq = matrix * matrix;
                match global.as_mut() {
                    Some(g) => *g += sq,
                    None => global = Some(sq),
                }
            }
        }
    }
    let (constant, deviation) = match global {
        None => {
            let mut constant = 0.0;
            let mut dev2 = 0.0;
            for (j, s) in per_party.iter().enumerate() {
                let d = dims[j];
                let cj = linalg::trace(s).re / d as f64;
                constant += cj;
                let rem = s - linalg::identity(d) * c(cj, 0.0);
                dev2 += (total_dim / d) as f64 * linalg::frobenius(&rem).powi(2);
            }
            (constant, dev2.sqrt())
        }
        Some(mut dense) => {
            for (j, s) in per_party.iter().enumerate() {
                dense += linalg::embed_local(dims, j, s);
            }
            let constant = linalg::trace(&dense).re / total_dim as f64;
            let rem = dense - linalg::identity(total_dim) * c(constant, 0.0);
            (constant, linalg::frobenius(&rem))
        }
    };
    (deviation <= CASIMIR_TOL).then_some(constant)
}
