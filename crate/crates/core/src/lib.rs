//! Doubled Fock space for a single photon mode with both polarization
//! branches, its Susskind-Glogower phase operator, phase distributions, and
//! identity checks against the truncated operator algebra.

pub mod baselines;
pub mod error;
pub mod fockspace;
pub mod operators;
pub mod phase;
pub mod verify;

pub use error::{Error, Result};
pub use fockspace::{
    coherent_state, fock_state, vacuum_symmetric, BasisIndex, Boundary, Polarization,
    SingleModeWindow, Space, StateSpec, StateVector, Window,
};
pub use operators::{build_named, build_susskind_glogower, NumberKind, OperatorMatrix};
pub use phase::{
    eigen_decompose_sg, phase_distribution, phase_state, PhaseDistribution, PhaseGrid,
};
pub use verify::{run_checks, CheckId, CheckReport, ToleranceProfile};
