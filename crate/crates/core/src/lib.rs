//! Entanglement dynamics of two optical cavities coupled through a chiral
//! mirror, modelled by a non-Hermitian two-mode Hamiltonian.

pub mod error;
pub mod evolution;
pub mod fockspace;
pub mod numerics;
pub mod observables;
pub mod states;

pub use error::{Error, Result};
pub use evolution::{
    closed_form_propagate, integrate, integrate_observed, Backend, EvolutionConfig, ExactStepper, TrajectoryState,
};
pub use fockspace::{build_operators, HamiltonianSpec, TwoModeOperators};
pub use numerics::{ComplexMatrix, C64};
pub use observables::{
    estimate_period, log_negativity, observe, partial_transpose, schmidt_logneg, spin_stats, ObservableRecord, Observer,
    PeriodEstimate,
};
pub use states::{PureState, StateSpec};
