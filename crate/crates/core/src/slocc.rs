//! Minimal vectors in complexified local-group orbits.
//!
//! `μ(ψ) = min_{g ∈ Π_j SL(d_j, C)} ‖gψ‖²` is computed by descending the
//! log-norm along the moment map: the gradient of `log ‖gφ‖²` with respect
//! to a Hermitian traceless generator on party `j` is twice the traceless
//! part of the normalized marginal `ρ_j(φ)/‖φ‖²`. The objective is convex
//! along one-parameter subgroups `exp(tX)`, so any critical point is the
//! global minimum and a vanishing moment map certifies a minimal vector.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, C64};
use crate::random;
use crate::tensor_state::{PureState, QuditSystem, NORM_TOL};

/// Armijo constant for the sufficient-decrease test.
const ARMIJO: f64 = 1e-4;
/// Accepted steps in a row before the step size is doubled.
const GROW_AFTER: usize = 5;
/// Maximum number of random local-unitary restarts after a failed line search.
const MAX_RESTARTS: usize = 8;
/// Window (accepted iterations) for the stagnation test.
const STAGNATION_WINDOW: usize = 100;
const STAGNATION_REL: f64 = 1e-3;
const STAGNATION_NORM: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SloccOptions {
    /// Initial step size.
    pub step: f64,
    /// Convergence threshold on `Σ_j ‖m_j‖²_F` of the normalized moment map.
    pub tol: f64,
    pub max_iters: usize,
    /// Squared norm below which the state is declared to lie in the null cone.
    pub null_floor: f64,
    /// Seed for random local-unitary restarts.
    pub seed: u64,
}

impl Default for SloccOptions {
    fn default() -> Self {
        Self {
            step: 0.5,
            tol: 1e-14,
            max_iters: 10_000,
            null_floor: 1e-12,
            seed: 0,
        }
    }
}

impl SloccOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.step) || !positive(self.tol) || !positive(self.null_floor) || self.max_iters < 1 {
            return Err(Error::InvalidInput(format!("invalid SLOCC options {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SloccResult {
    pub mu: f64,
    /// One SL(d_j) factor per party; `minimal_vector ≈ (⊗_j g_j) ψ`.
    pub group_element: Vec<CMatrix>,
    pub minimal_vector: PureState,
    pub moment_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub null_cone: bool,
    pub restarts: usize,
    /// Squared norm after each accepted step, starting with the input's.
    pub norm_history: Vec<f64>,
}

/// The fields reported by the command line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SloccSummary {
    pub mu: f64,
    pub converged: bool,
    pub null_cone: bool,
    pub iterations: usize,
    pub moment_residual: f64,
}

impl SloccResult {
    pub fn summary(&self) -> SloccSummary {
        SloccSummary {
            mu: self.mu,
            converged: self.converged,
            null_cone: self.null_cone,
            iterations: self.iterations,
            moment_residual: self.moment_residual,
        }
    }
}

/// Traceless parts of the normalized single-party marginals, and the sum of
/// their squared Frobenius norms.
pub fn moment_map(phi: &PureState) -> Result<(Vec<CMatrix>, f64)> {
    let n2 = phi.norm_sqr();
    let mut residual = 0.0;
    let mut parts = Vec::with_capacity(phi.system().parties());
    for j in 0..phi.system().parties() {
        let rho = phi.reduced_density(j)? / c(n2, 0.0);
        let m = linalg::traceless(&rho);
        residual += linalg::frobenius(&m).powi(2);
        parts.push(m);
    }
    Ok((parts, residual))
}

fn apply_all(state: &PureState, factors: &[CMatrix]) -> Result<PureState> {
    factors
        .iter()
        .enumerate()
        .try_fold(state.clone(), |s, (j, h)| s.apply_local(j, h))
}

fn unit_determinant(g: &CMatrix) -> CMatrix {
    let d = g.nrows();
    let det: C64 = g.determinant();
    g / det.powf(1.0 / d as f64)
}

pub fn minimize_orbit(state: &PureState, opts: &SloccOptions) -> Result<SloccResult> {
    opts.validate()?;
    let n0 = state.norm_sqr();
    if !state.is_normalized() || (n0 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n0));
    }
    let system: &QuditSystem = state.system();
    let parties = system.parties();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut phi = PureState::unnormalized(system.clone(), state.amplitudes().to_vec())?;
    let mut n2 = phi.norm_sqr();
    let mut group: Vec<CMatrix> = system.dims().iter().map(|&d| linalg::identity(d)).collect();
    let mut eta = opts.step;
    let mut streak = 0usize;
    let mut restarts = 0usize;
    let mut iterations = 0usize;
    let mut history = vec![n2];
    let mut window_start: Option<(f64, f64)> = None;
    let (mut converged, mut null_cone) = (false, false);
    let mut residual;

    loop {
        let (moments, r) = moment_map(&phi)?;
        residual = r;
        if !residual.is_finite() || !n2.is_finite() {
            return Err(Error::Numerical("non-finite value during orbit descent".into()));
        }
        if residual <= opts.tol {
            converged = true;
            break;
        }
        if n2 <= opts.null_floor {
            null_cone = true;
            break;
        }
        if iterations.is_multiple_of(STAGNATION_WINDOW) {
            if let Some((r_prev, n_prev)) = window_start {
                let stagnant = (residual - r_prev).abs() <= STAGNATION_REL * r_prev;
                if stagnant && n2 < STAGNATION_NORM && n2 < n_prev {
                    null_cone = true;
                    break;
                }
            }
            window_start = Some((residual, n2));
        }
        if iterations >= opts.max_iters {
            break;
        }

        let accepted = loop {
            let factors: Vec<CMatrix> = moments.iter().map(|m| linalg::expm_hermitian(m, -eta)).collect();
            let cand = apply_all(&phi, &factors)?;
            let cn2 = cand.norm_sqr();
            if cn2.is_finite() && cn2 <= n2 * (-2.0 * ARMIJO * eta * residual).exp() {
                break Some((cand, cn2, factors));
            }
            eta *= 0.5;
            if eta < 1e-14 * opts.step {
                break None;
            }
        };

        match accepted {
            Some((cand, cn2, factors)) => {
                phi = cand;
                n2 = cn2;
                for (g, h) in group.iter_mut().zip(&factors) {
                    *g = unit_determinant(&(h * &*g));
                }
                history.push(n2);
                iterations += 1;
                streak += 1;
                if streak >= GROW_AFTER {
                    eta *= 2.0;
                    streak = 0;
                }
            }
            None => {
                if restarts >= MAX_RESTARTS {
                    break;
                }
                restarts += 1;
                let rotations: Vec<CMatrix> = (0..parties)
                    .map(|j| unit_determinant(&random::unitary(&mut rng, system.dim(j))))
                    .collect();
                phi = apply_all(&phi, &rotations)?;
                for (g, u) in group.iter_mut().zip(&rotations) {
                    *g = unit_determinant(&(u * &*g));
                }
                eta = opts.step;
                streak = 0;
            }
        }
    }

    Ok(SloccResult {
        mu: if null_cone { 0.0 } else { n2 },
        group_element: group,
        minimal_vector: phi,
        moment_residual: residual,
        iterations,
        converged,
        null_cone,
        restarts,
        norm_history: history,
    })
}

pub fn mu_measure(state: &PureState, opts: &SloccOptions) -> Result<f64> {
    Ok(minimize_orbit(state, opts)?.mu)
}

fn require_dims(state: &PureState, dims: &[usize]) -> Result<()> {
    if state.system().dims() != dims {
        return Err(Error::Dimension(format!(
            "expected dims {dims:?}, got {:?}",
            state.system().dims()
        )));
    }
    Ok(())
}

/// `2 |ψ_00 ψ_11 − ψ_01 ψ_10|` for a two-qubit state.
pub fn concurrence(state: &PureState) -> Result<f64> {
    require_dims(state, &[2, 2])?;
    let a = state.amplitudes();
    Ok(2.0 * (a[0] * a[3] - a[1] * a[2]).norm())
}

/// Cayley's hyperdeterminant of a 2×2×2 tensor given in row-major order.
pub fn hyperdeterminant(a: &[C64]) -> C64 {
    assert_eq!(a.len(), 8, "hyperdeterminant needs 8 entries");
    let [a000, a001, a010, a011, a100, a101, a110, a111] = [a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]];
    let squares = a000 * a000 * a111 * a111
        + a001 * a001 * a110 * a110
        + a010 * a010 * a101 * a101
        + a100 * a100 * a011 * a011;
    let pairs = a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001;
    let quads = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;
    squares - pairs * 2.0 + quads * 4.0
}

/// `4 |Det ψ|` for a three-qubit state.
pub fn three_tangle(state: &PureState) -> Result<f64> {
    require_dims(state, &[2, 2, 2])?;
    Ok(4.0 * hyperdeterminant(state.amplitudes()).norm())
}
