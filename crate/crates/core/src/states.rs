//! Reference states used throughout: computational basis, Bell, GHZ, W.

use crate::linalg::{c, C64, ONE, ZERO};
use crate::tensor_state::{PureState, QuditSystem};

/// Computational basis state `|l_1 … l_N>`.
///
/// Panics on invalid dimensions or levels; meant for fixed test anchors.
pub fn basis(dims: &[usize], levels: &[usize]) -> PureState {
    let system = QuditSystem::new(dims.to_vec()).expect("valid dims");
    let idx = system.flat_index(levels).expect("valid levels");
    let mut amps = vec![ZERO; system.total_dim()];
    amps[idx] = ONE;
    PureState::new(system, amps).expect("basis state")
}

/// `(|00> + |11>)/√2`.
pub fn bell() -> PureState {
    ghz(2)
}

/// `(|0…0> + |1…1>)/√2` on `n ≥ 1` qubits.
pub fn ghz(n: usize) -> PureState {
    let system = QuditSystem::qubits(n).expect("n >= 1");
    let d = system.total_dim();
    let mut amps = vec![ZERO; d];
    amps[0] = ONE;
    amps[d - 1] = ONE;
    PureState::new(system, amps).expect("ghz")
}

/// Equal superposition of all single-excitation basis states on `n ≥ 2` qubits.
pub fn w(n: usize) -> PureState {
    let system = QuditSystem::qubits(n).expect("n >= 1");
    let mut amps = vec![ZERO; system.total_dim()];
    for k in 0..n {
        amps[1 << k] = ONE;
    }
    PureState::new(system, amps).expect("w")
}

/// `a|00> + b|11>` with real, nonnegative Schmidt weights `a² + b² = 1`.
pub fn schmidt_pair(p0: f64) -> PureState {
    let system = QuditSystem::qubits(2).expect("two qubits");
    let amps: Vec<C64> = vec![c(p0.sqrt(), 0.0), ZERO, ZERO, c((1.0 - p0).sqrt(), 0.0)];
    PureState::new(system, amps).expect("schmidt pair")
}
