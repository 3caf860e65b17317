//! Automated second-order Heisenberg expansion against the literal operators.

use std::sync::Arc;

use phasefluct_core::{
    heisenberg_reference_operator, heisenberg_taylor, interaction_hamiltonian, ladder, Ladder, ProcessKind,
    ProcessSpec,
};

pub const TAYLOR_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorReport {
    pub process: ProcessKind,
    pub cutoffs: Vec<usize>,
    /// Basis states kept by the interior mask.
    pub interior_states: usize,
    pub max_diff: f64,
    pub threshold: f64,
}

impl TaylorReport {
    pub fn passed(&self) -> bool {
        self.max_diff <= self.threshold
    }
}

/// Cutoffs leaving a non-trivial interior once the order-2 margins are removed.
pub fn check_cutoffs(kind: ProcessKind) -> Vec<usize> {
    match kind {
        ProcessKind::Fwm => vec![12, 6, 6],
        ProcessKind::Swm => vec![12, 12, 5],
        ProcessKind::Shg => vec![14, 8],
    }
}

pub fn taylor_check(kind: ProcessKind) -> phasefluct_core::Result<TaylorReport> {
    let cutoffs = check_cutoffs(kind);
    let space = Arc::new(kind.space(&cutoffs)?);
    let spec = ProcessSpec::from_mean_photons(kind, 1.0, 1.0, 0.0, 0.05)?;
    let h = interaction_hamiltonian(&spec, &space)?;
    let a = ladder(&space, space.pump_mode(), Ladder::Lower)?;
    let auto = heisenberg_taylor(&h, &a, 2)?.evaluate(spec.t)?;
    let literal = heisenberg_reference_operator(&spec, &space)?;
    let interior = space.interior_mask(&kind.interior_margins(2));
    Ok(TaylorReport {
        process: kind,
        interior_states: interior.iter().filter(|&&b| b).count(),
        max_diff: auto.max_abs_diff(&literal, Some(&interior))?,
        cutoffs,
        threshold: TAYLOR_THRESHOLD,
    })
}
