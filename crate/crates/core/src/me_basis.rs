//! Generic maximally entangled states and ME bases built with local
//! cyclic permutations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, ONE, ZERO};
use crate::tensor_state::{PureState, QuditSystem};

/// The local cyclic shift `|0><1| + |1><2| + … + |d−1><0|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicOp {
    d: usize,
    matrix: CMatrix,
}

impl CyclicOp {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("cyclic operator needs d >= 2, got {d}")));
        }
        let mut matrix = CMatrix::zeros(d, d);
        for k in 0..d {
            matrix[(k, (k + 1) % d)] = ONE;
        }
        Ok(Self { d, matrix })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn pow(&self, k: usize) -> CMatrix {
        (0..k % self.d).fold(CMatrix::identity(self.d, self.d), |acc, _| &acc * &self.matrix)
    }
}

pub fn cyclic_op(d: usize) -> Result<CyclicOp> {
    CyclicOp::new(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// `(|0…0> ± |1…1>)/√2` on `n` qubits.
pub fn generic_me(n: usize, sign: Sign) -> Result<PureState> {
    if n < 1 {
        return Err(Error::InvalidInput("generic ME state needs at least one qubit".into()));
    }
    let system = QuditSystem::qubits(n)?;
    let d = system.total_dim();
    let mut amps = vec![ZERO; d];
    amps[0] = ONE;
    amps[d - 1] = c(sign.value(), 0.0);
    PureState::new(system, amps)
}

/// `Σ_l |l…l> / √d` on `n` qudits of dimension `d`.
pub fn generic_me_qudit(n: usize, d: usize) -> Result<PureState> {
    if n < 1 {
        return Err(Error::InvalidInput("generic ME state needs at least one party".into()));
    }
    let system = QuditSystem::new(vec![d; n])?;
    let mut amps = vec![ZERO; system.total_dim()];
    for l in 0..d {
        amps[system.flat_index(&vec![l; n])?] = ONE;
    }
    PureState::new(system, amps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisElement {
    /// Parties (zero-based) that received the cyclic operator.
    pub flipped: Vec<usize>,
    pub sign: Sign,
    pub state: PureState,
}

impl BasisElement {
    /// Human-readable tag such as `"+{2,3}"` with one-based parties.
    pub fn label(&self) -> String {
        let parties: Vec<String> = self.flipped.iter().map(|p| (p + 1).to_string()).collect();
        format!("{}{{{}}}", self.sign.symbol(), parties.join(","))
    }
}

/// The 2^n-element ME basis: `C_2` applied to every subset of parties
/// `1..n` (party 0 fixed) of both generic states. Ordered by sign, then
/// by subset bitmask with party 1 as the lowest bit.
pub fn me_basis(n: usize) -> Result<Vec<BasisElement>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("ME basis needs at least two qubits, got {n}")));
    }
    let flip = cyclic_op(2)?;
    let mut out = Vec::with_capacity(1 << n);
    for sign in [Sign::Plus, Sign::Minus] {
        let generic = generic_me(n, sign)?;
        for mask in 0..(1usize << (n - 1)) {
            let flipped: Vec<usize> = (1..n).filter(|p| mask >> (p - 1) & 1 == 1).collect();
            let state = flipped
                .iter()
                .try_fold(generic.clone(), |s, &p| s.apply_local(p, flip.matrix()))?;
            out.push(BasisElement { flipped, sign, state });
        }
    }
    Ok(out)
}
