//! Shared fixtures for the criterion benches.

use std::sync::Arc;

use phasefluct_core::{coherent_pump_state, interaction_hamiltonian, ModeOperator, ProcessKind, ProcessSpec, StateVector};

/// Coherent input state and interaction Hamiltonian at default cutoffs.
pub fn fixture(kind: ProcessKind, alpha_sq: f64) -> (ProcessSpec, StateVector, ModeOperator) {
    let spec = ProcessSpec::from_mean_photons(kind, 1.0, alpha_sq, 0.0, 0.0).expect("valid spec");
    let space = Arc::new(kind.space(&kind.default_cutoffs(alpha_sq)).expect("default cutoffs fit the budget"));
    let psi = coherent_pump_state(space.clone(), spec.pump, 1e-8).expect("default pump cutoff suffices");
    let h = interaction_hamiltonian(&spec, &space).expect("roles match");
    (spec, psi, h)
}
