//! Quantum phase fluctuations of a coherent pump in four-wave mixing,
//! six-wave mixing and second-harmonic generation.
//!
//! Two independent routes are provided for every quantity:
//!
//! * closed-form second-order expressions ([`process::closed_form`]), and
//! * exact unitary evolution on a truncated Fock space followed by direct
//!   evaluation of the phase-operator moments ([`pipeline::exact_evaluation`]).
//!
//! [`analysis`] turns moments into the Carruthers–Nieto parameters `U`, `S`,
//! `Q`, the total phase fluctuation `T` and the antibunching witness `d`.

pub mod analysis;
pub mod error;
pub mod evolution;
pub mod fock;
pub mod operator;
pub mod param;
pub mod phase;
pub mod pipeline;
pub mod process;

pub use analysis::{cn_parameters, compare, convergence_slope, CnResult, ComparisonReport, ExactEvaluation, SlopeEstimate};
pub use error::{Error, Result};
pub use evolution::{evolve, heisenberg_taylor, leakage, EvolutionSettings, TaylorExpansion};
pub use fock::{coherent_pump_state, ModeRole, ModeSpace, PumpAmplitude, StateVector};
pub use operator::{expectation, ladder, number_op, variance, Ladder, ModeOperator};
pub use param::Param;
pub use phase::{bp_operators, moments, sg_operators, MomentSet, PhaseFormalism, PhaseOperatorSet};
pub use pipeline::{
    evaluate_state, evolved_state, evolved_state_adaptive, exact_evaluation, process_leakage, FormalismChoice,
};
pub use process::{
    closed_form, closed_form_with, heisenberg_reference_operator, interaction_hamiltonian, ClosedFormCoefficients,
    ClosedFormResult, ProcessKind, ProcessSpec,
};
