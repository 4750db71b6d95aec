//! Inputs shared by the benchmarks.

use chiralcav::evolution::normalize;
use chiralcav::numerics::{ComplexMatrix, C64};
use chiralcav::{closed_form_propagate, HamiltonianSpec, StateSpec, TrajectoryState, TwoModeOperators};

pub const SQUEEZED: StateSpec = StateSpec::Squeezed { alpha: C64::new(1.0, 0.0), epsilon: C64::new(0.1, 0.0) };

pub fn operators(dim: usize) -> TwoModeOperators {
    chiralcav::build_operators(&HamiltonianSpec::new(1.0, 0.1, 2.0, dim).expect("valid spec")).expect("operators")
}

/// Dense deterministic matrix with entries of order one.
pub fn dense_matrix(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| C64::new(((i * 7 + j * 3) as f64).sin(), ((i + 5 * j) as f64).cos()))
}

/// Normalized squeezed state after `t` of non-reciprocal evolution.
pub fn evolved_state(ops: &TwoModeOperators, t: f64) -> ComplexMatrix {
    let rho0 = SQUEEZED.initial_density(ops.dim()).expect("state fits");
    let raw = closed_form_propagate(&rho0, t, ops).expect("propagation");
    let trace_raw = raw.trace().expect("square");
    normalize(&TrajectoryState { t, step: 0, rho_raw: raw, trace_raw }).expect("positive trace")
}
