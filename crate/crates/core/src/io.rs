//! JSON state files: `{ "dims": [d1, …], "amplitudes": [[re, im], …] }`,
//! amplitudes in row-major order with the first party slowest.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::c;
use crate::tensor_state::{PureState, QuditSystem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &PureState, label: Option<String>) -> Self {
        Self {
            label,
            dims: state.system().dims().to_vec(),
            amplitudes: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_state(&self) -> Result<PureState> {
        let system = QuditSystem::new(self.dims.clone())?;
        if self.amplitudes.len() != system.total_dim() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for dims {:?} (total dimension {})",
                self.amplitudes.len(),
                self.dims,
                system.total_dim()
            )));
        }
        if self.amplitudes.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite amplitude".into()));
        }
        PureState::new(system, self.amplitudes.iter().map(|&[re, im]| c(re, im)).collect())
    }
}

pub fn parse_state(json: &str) -> Result<PureState> {
    let file: StateFile = serde_json::from_str(json)?;
    file.to_state()
}

pub fn state_to_json(state: &PureState) -> Result<String> {
    Ok(serde_json::to_string(&StateFile::from_state(state, None))?)
}
