//! Entanglement of finite-dimensional multi-party states through quantum
//! fluctuations: total variances of measurement sets, certification of
//! maximal entanglement, ME bases, and the minimal-vector measure over
//! complexified local-group orbits.

pub mod error;
pub mod io;
pub mod linalg;
pub mod me_analysis;
pub mod me_basis;
pub mod measurements;
pub mod oscillator;
pub mod random;
pub mod slocc;
pub mod states;
pub mod tensor_state;

pub use error::{Error, Result};
pub use me_analysis::{check_me, dof_report, equivalence_witness, family_scan, family_state, slice_conditions, DofReport, FamilyScan, MEVerdict};
pub use me_basis::{cyclic_op, generic_me, me_basis, BasisElement, CyclicOp, Sign};
pub use measurements::{expectation, pauli_set, su_d_set, total_variance, variance, verify_casimir, MeasurementSet, Observable, VarianceReport};
pub use slocc::{concurrence, minimize_orbit, mu_measure, three_tangle, SloccOptions, SloccResult};
pub use tensor_state::{DensityMatrix, PureState, QuditSystem, SliceIndex, StateRef};
