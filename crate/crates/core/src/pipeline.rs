//! Exact pipeline: coherent input, unitary evolution, phase moments.

use std::sync::Arc;

use crate::analysis::{cn_parameters, ExactEvaluation};
use crate::error::{Error, Result};
use crate::evolution::{evolve, EvolutionSettings};
use crate::fock::{coherent_pump_state, StateVector};
use crate::operator::{expectation, number_op};
use crate::phase::{moments, phase_operators, PhaseFormalism};
use crate::process::{interaction_hamiltonian, ProcessKind, ProcessSpec};

/// Which phase formalism to evaluate; the Barnett–Pegg scale is taken
/// from the evolved state's own mean photon number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormalismChoice {
    Sg,
    Bp,
}

impl FormalismChoice {
    pub fn name(self) -> &'static str {
        match self {
            FormalismChoice::Sg => "sg",
            FormalismChoice::Bp => "bp",
        }
    }
}

impl std::str::FromStr for FormalismChoice {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sg" => Ok(FormalismChoice::Sg),
            "bp" => Ok(FormalismChoice::Bp),
            other => Err(crate::Error::InvalidParameter(format!("unknown formalism {other:?}"))),
        }
    }
}

/// Boundary mass seen by the process Hamiltonian: states from which one
/// emission or absorption event would step past a cutoff.
///
/// Stricter than [`StateVector::leakage`] when a mode moves in steps of
/// more than one quantum (the SWM stokes mode moves by three and can skip
/// its cutoff level entirely).
pub fn process_leakage(kind: ProcessKind, state: &StateVector) -> f64 {
    state.boundary_mass(kind.ladder_powers())
}

fn evolve_unchecked(spec: &ProcessSpec, cutoffs: &[usize], settings: &EvolutionSettings) -> Result<StateVector> {
    let space = Arc::new(spec.kind.space(cutoffs)?);
    let psi0 = coherent_pump_state(space.clone(), spec.pump, settings.leakage_threshold)?;
    let h = interaction_hamiltonian(spec, &space)?;
    evolve(&psi0, &h, spec.t, &EvolutionSettings { leakage_threshold: f64::INFINITY, ..*settings })
}

/// Evolved state of a coherently pumped process at fixed cutoffs.
///
/// Fails with [`Error::LeakageExceeded`] when [`process_leakage`] of the
/// result is above the threshold.
pub fn evolved_state(spec: &ProcessSpec, cutoffs: &[usize], settings: &EvolutionSettings) -> Result<StateVector> {
    let psi = evolve_unchecked(spec, cutoffs, settings)?;
    let leaked = process_leakage(spec.kind, &psi);
    if leaked > settings.leakage_threshold {
        return Err(Error::LeakageExceeded { leakage: leaked, threshold: settings.leakage_threshold });
    }
    Ok(psi)
}

/// Like [`evolved_state`], starting from the default cutoffs and widening
/// every mode whose boundary carries more than its share of the leakage
/// budget until the result is converged or the dimension budget runs out.
pub fn evolved_state_adaptive(spec: &ProcessSpec, settings: &EvolutionSettings) -> Result<(StateVector, Vec<usize>)> {
    let kind = spec.kind;
    let powers = kind.ladder_powers();
    let mut cutoffs = kind.default_cutoffs(spec.pump.mean_photons());
    loop {
        let psi = evolve_unchecked(spec, &cutoffs, settings)?;
        let leaked = process_leakage(kind, &psi);
        if leaked <= settings.leakage_threshold {
            return Ok((psi, cutoffs));
        }
        let share = settings.leakage_threshold / powers.len() as f64;
        let mut grown = cutoffs.clone();
        for (mode, &p) in powers.iter().enumerate() {
            let mut margins = vec![0; powers.len()];
            margins[mode] = p;
            if psi.boundary_mass(&margins) > share {
                grown[mode] += 2 * p;
            }
        }
        match kind.space(&grown) {
            Ok(_) if grown != cutoffs => cutoffs = grown,
            _ => return Err(Error::LeakageExceeded { leakage: leaked, threshold: settings.leakage_threshold }),
        }
    }
}

/// Moments and Carruthers–Nieto parameters of an already evolved state.
pub fn evaluate_state(spec: &ProcessSpec, state: &StateVector, formalism: FormalismChoice) -> Result<ExactEvaluation> {
    let space = state.space();
    let pump = space.pump_mode();
    let formalism = match formalism {
        FormalismChoice::Sg => PhaseFormalism::SusskindGlogower,
        FormalismChoice::Bp => {
            let n = expectation(state, &number_op(space, pump)?)?.re;
            PhaseFormalism::BarnettPegg { mean_photons: n.max(0.0) }
        }
    };
    let set = phase_operators(space, pump, formalism)?;
    let m = moments(state, &set)?;
    Ok(ExactEvaluation { spec: *spec, moments: m, cn: cn_parameters(&m, formalism) })
}

/// Full exact pipeline for one spec.
pub fn exact_evaluation(
    spec: &ProcessSpec,
    formalism: FormalismChoice,
    cutoffs: &[usize],
    settings: &EvolutionSettings,
) -> Result<(ExactEvaluation, StateVector)> {
    let state = evolved_state(spec, cutoffs, settings)?;
    Ok((evaluate_state(spec, &state, formalism)?, state))
}
