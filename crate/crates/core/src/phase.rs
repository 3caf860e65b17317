//! Susskind–Glogower and Barnett–Pegg cosine/sine operators of the pump
//! mode, and the moment set that feeds the Carruthers–Nieto parameters.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{ModeSpace, StateVector};
use crate::operator::{expectation, lower, number_op, variance, ModeOperator};

/// Largest imaginary part tolerated in the expectation of a hermitian operator.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseFormalism {
    /// Susskind–Glogower: ladder operators rescaled by `(N+1)^{-1/2}`.
    SusskindGlogower,
    /// Barnett–Pegg: annihilator rescaled by the scalar `(N̄ + ½)^{-1/2}`.
    BarnettPegg { mean_photons: f64 },
}

impl PhaseFormalism {
    pub fn name(&self) -> &'static str {
        match self {
            PhaseFormalism::SusskindGlogower => "sg",
            PhaseFormalism::BarnettPegg { .. } => "bp",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PhaseOperatorSet {
    pub formalism: PhaseFormalism,
    pub pump_mode: usize,
    pub cos: ModeOperator,
    pub sin: ModeOperator,
    /// Exponential phase operator; Barnett–Pegg only.
    pub exp: Option<ModeOperator>,
    /// Projector onto the pump vacuum.
    pub vacuum_projector: ModeOperator,
}

fn cos_sin(e: &ModeOperator) -> Result<(ModeOperator, ModeOperator)> {
    let ed = e.adjoint();
    let cos = e.add(&ed)?.scale_real(0.5).into_hermitian()?;
    let sin = e.sub(&ed)?.scale(Complex64::new(0.0, -0.5)).into_hermitian()?;
    Ok((cos, sin))
}

fn vacuum_projector(space: &Arc<ModeSpace>, pump_mode: usize) -> Result<ModeOperator> {
    ModeOperator::mode_function(space.clone(), pump_mode, |n| if n == 0 { 1.0 } else { 0.0 })
}

/// `C = ½[(N+1)^{-1/2} a + a† (N+1)^{-1/2}]`, `S = (1/2i)[(N+1)^{-1/2} a - a† (N+1)^{-1/2}]`.
pub fn sg_operators(space: &Arc<ModeSpace>, pump_mode: usize) -> Result<PhaseOperatorSet> {
    space.check_mode(pump_mode)?;
    let inv_sqrt = ModeOperator::mode_function(space.clone(), pump_mode, |n| 1.0 / ((n + 1) as f64).sqrt())?;
    let e = inv_sqrt.multiply(&lower(space, pump_mode)?)?;
    let (cos, sin) = cos_sin(&e)?;
    Ok(PhaseOperatorSet {
        formalism: PhaseFormalism::SusskindGlogower,
        pump_mode,
        cos,
        sin,
        exp: None,
        vacuum_projector: vacuum_projector(space, pump_mode)?,
    })
}

/// `E = (N̄ + ½)^{-1/2} a`, `C = (E + E†)/2`, `S = -i(E - E†)/2`.
pub fn bp_operators(space: &Arc<ModeSpace>, pump_mode: usize, mean_photons: f64) -> Result<PhaseOperatorSet> {
    space.check_mode(pump_mode)?;
    if !(mean_photons >= 0.0) {
        return Err(Error::NegativeMeanPhoton(mean_photons));
    }
    let e = lower(space, pump_mode)?.scale_real((mean_photons + 0.5).powf(-0.5));
    let (cos, sin) = cos_sin(&e)?;
    Ok(PhaseOperatorSet {
        formalism: PhaseFormalism::BarnettPegg { mean_photons },
        pump_mode,
        cos,
        sin,
        exp: Some(e),
        vacuum_projector: vacuum_projector(space, pump_mode)?,
    })
}

/// Builds the operator set for `formalism`.
pub fn phase_operators(space: &Arc<ModeSpace>, pump_mode: usize, formalism: PhaseFormalism) -> Result<PhaseOperatorSet> {
    match formalism {
        PhaseFormalism::SusskindGlogower => sg_operators(space, pump_mode),
        PhaseFormalism::BarnettPegg { mean_photons } => bp_operators(space, pump_mode, mean_photons),
    }
}

/// Pump-mode expectation values entering the phase-fluctuation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub mean_n: f64,
    pub mean_n2: f64,
    pub var_n: f64,
    pub mean_c: f64,
    pub mean_s: f64,
    pub mean_c2: f64,
    pub mean_s2: f64,
    pub var_c: f64,
    pub var_s: f64,
    pub vacuum_prob: f64,
}

fn real_part(z: Complex64, quantity: &'static str) -> Result<f64> {
    if z.im.abs() > IMAGINARY_RESIDUE_TOL {
        Err(Error::ImaginaryResidue { quantity, residue: z.im.abs() })
    } else {
        Ok(z.re)
    }
}

/// `<M^2>` for hermitian `M`, as `||M psi||^2`.
fn second_moment(state: &StateVector, op: &ModeOperator) -> Result<f64> {
    Ok(op.apply(state)?.iter().map(|z| z.norm_sqr()).sum())
}

pub fn moments(state: &StateVector, set: &PhaseOperatorSet) -> Result<MomentSet> {
    let space = state.space();
    if **set.cos.space() != **space {
        return Err(Error::SpaceMismatch);
    }
    let n = number_op(space, set.pump_mode)?;
    Ok(MomentSet {
        mean_n: real_part(expectation(state, &n)?, "N")?,
        mean_n2: second_moment(state, &n)?,
        var_n: variance(state, &n)?,
        mean_c: real_part(expectation(state, &set.cos)?, "C")?,
        mean_s: real_part(expectation(state, &set.sin)?, "S")?,
        mean_c2: second_moment(state, &set.cos)?,
        mean_s2: second_moment(state, &set.sin)?,
        var_c: variance(state, &set.cos)?,
        var_s: variance(state, &set.sin)?,
        vacuum_prob: real_part(expectation(state, &set.vacuum_projector)?, "P0")?.clamp(0.0, 1.0),
    })
}
