//! Exact unitary evolution on the truncated space and short-time
//! Heisenberg expansions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{norm_sqr, StateVector};
use crate::operator::ModeOperator;

/// Largest expansion order accepted by [`heisenberg_taylor`].
pub const MAX_TAYLOR_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionSettings {
    /// Target global error on amplitudes; also the tolerated norm drift.
    pub accuracy: f64,
    /// Largest acceptable probability at the truncation boundary after evolving.
    pub leakage_threshold: f64,
    pub max_steps: usize,
}

impl Default for EvolutionSettings {
    fn default() -> Self {
        Self { accuracy: 1e-10, leakage_threshold: 1e-8, max_steps: 1_000_000 }
    }
}

impl EvolutionSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.accuracy > 0.0) {
            return Err(Error::InvalidParameter(format!("accuracy target {}", self.accuracy)));
        }
        if !(self.leakage_threshold >= 0.0) {
            return Err(Error::InvalidParameter(format!("leakage threshold {}", self.leakage_threshold)));
        }
        Ok(())
    }
}

/// Probability mass on basis states with any mode at its cutoff.
pub fn leakage(state: &StateVector) -> f64 {
    state.leakage()
}

/// `exp(-i H t) psi`.
///
/// The interval is cut into steps with `||H|| dt <= 1` (row-sum bound) and
/// each step sums the Taylor series of the propagator until the next term
/// drops below double-precision resolution. The sequence of floating-point
/// operations depends only on the inputs, so results are bit-reproducible.
pub fn evolve(state: &StateVector, h: &ModeOperator, t: f64, settings: &EvolutionSettings) -> Result<StateVector> {
    settings.validate()?;
    if !h.is_hermitian() {
        return Err(Error::NonHermitianGenerator);
    }
    if **h.space() != **state.space() {
        return Err(Error::SpaceMismatch);
    }
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 || h.nnz() == 0 {
        return Ok(state.clone());
    }

    let scale = h.norm_bound() * t;
    let steps = scale.ceil().max(1.0);
    if steps > settings.max_steps as f64 {
        return Err(Error::StepLimitExceeded { needed: steps as usize, limit: settings.max_steps });
    }
    let steps = steps as usize;
    let dt = t / steps as f64;
    let factor = Complex64::new(0.0, -dt);

    let dim = state.amplitudes().len();
    let mut v = state.amplitudes().to_vec();
    let mut term = vec![Complex64::new(0.0, 0.0); dim];
    let mut next = vec![Complex64::new(0.0, 0.0); dim];
    for _ in 0..steps {
        term.copy_from_slice(&v);
        for k in 1..=60 {
            h.apply_raw(&term, &mut next);
            let c = factor / k as f64;
            for (x, y) in next.iter_mut().zip(v.iter_mut()) {
                *x *= c;
                *y += *x;
            }
            std::mem::swap(&mut term, &mut next);
            if norm_sqr(&term) <= 1e-36 * norm_sqr(&v) {
                break;
            }
        }
    }

    let drift = (norm_sqr(&v).sqrt() - state.norm_sqr().sqrt()).abs();
    if drift > settings.accuracy {
        return Err(Error::AccuracyNotMet { drift, target: settings.accuracy });
    }
    let out = StateVector::from_raw(state.space().clone(), v);
    let leaked = out.leakage();
    if leaked > settings.leakage_threshold {
        return Err(Error::LeakageExceeded { leakage: leaked, threshold: settings.leakage_threshold });
    }
    Ok(out)
}

/// Truncated Taylor series `A(t) ~ sum_n t^n/n! M_n` of a Heisenberg-picture operator.
#[derive(Debug, Clone)]
pub struct TaylorExpansion {
    coefficients: Vec<ModeOperator>,
}

impl TaylorExpansion {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn base(&self) -> &ModeOperator {
        &self.coefficients[0]
    }

    /// `M_0 .. M_order`.
    pub fn coefficients(&self) -> &[ModeOperator] {
        &self.coefficients
    }

    pub fn evaluate(&self, t: f64) -> Result<ModeOperator> {
        let mut weight = 1.0;
        let mut out = self.coefficients[0].clone();
        for (n, m) in self.coefficients.iter().enumerate().skip(1) {
            weight *= t / n as f64;
            out = out.add(&m.scale_real(weight))?;
        }
        Ok(out)
    }
}

/// Nested-commutator coefficients `M_n = (i ad_H)^n (op)` from `dA/dt = i[H, A]`.
pub fn heisenberg_taylor(h: &ModeOperator, op: &ModeOperator, order: usize) -> Result<TaylorExpansion> {
    if order > MAX_TAYLOR_ORDER {
        return Err(Error::OrderTooHigh(order));
    }
    if **h.space() != **op.space() {
        return Err(Error::SpaceMismatch);
    }
    let i = Complex64::new(0.0, 1.0);
    let mut coefficients = vec![op.clone()];
    for _ in 0..order {
        let last = coefficients.last().unwrap();
        coefficients.push(h.commutator(last)?.scale(i));
    }
    Ok(TaylorExpansion { coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_pump_state, ModeSpace};
    use crate::operator::{expectation, lower, number_op, raise};
    use crate::process::{heisenberg_reference_operator, interaction_hamiltonian, ProcessKind, ProcessSpec};
    use std::sync::Arc;

    fn fwm_setup(alpha_sq: f64, g: f64) -> (Arc<ModeSpace>, StateVector, ModeOperator, ProcessSpec) {
        let space = Arc::new(ProcessKind::Fwm.space(&[23, 7, 7]).unwrap());
        let spec = ProcessSpec::from_mean_photons(ProcessKind::Fwm, g, alpha_sq, 0.0, 0.0).unwrap();
        let psi = coherent_pump_state(space.clone(), spec.pump, 1e-8).unwrap();
        let h = interaction_hamiltonian(&spec, &space).unwrap();
        (space, psi, h, spec)
    }

    fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
        a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_time_is_identity() {
        let (_, psi, h, _) = fwm_setup(1.0, 1.0);
        assert_eq!(evolve(&psi, &h, 0.0, &EvolutionSettings::default()).unwrap(), psi);
    }

    #[test]
    fn semigroup() {
        let (_, psi, h, _) = fwm_setup(1.0, 1.0);
        let s = EvolutionSettings::default();
        let once = evolve(&psi, &h, 0.04, &s).unwrap();
        let twice = evolve(&evolve(&psi, &h, 0.02, &s).unwrap(), &h, 0.02, &s).unwrap();
        assert!(max_diff(&once, &twice) <= 2.0 * s.accuracy);
    }

    #[test]
    fn two_level_rabi_oscillation() {
        // H = g (a2† a1² + h.c.) restricted to |2,0>,|0,1> is g sqrt2 sigma_x.
        let space = Arc::new(ProcessKind::Shg.space(&[2, 1]).unwrap());
        let spec = ProcessSpec::from_mean_photons(ProcessKind::Shg, 0.5, 0.0, 0.0, 0.0).unwrap();
        let h = interaction_hamiltonian(&spec, &space).unwrap();
        let psi = StateVector::basis(space.clone(), &[2, 0]).unwrap();
        let t = 0.9;
        let s = EvolutionSettings { leakage_threshold: 1.0, ..Default::default() };
        let out = evolve(&psi, &h, t, &s).unwrap();
        let omega = 0.5 * 2f64.sqrt();
        let i0 = space.index_of(&[2, 0]).unwrap();
        let i1 = space.index_of(&[0, 1]).unwrap();
        assert!((out.amplitudes()[i0] - Complex64::new((omega * t).cos(), 0.0)).norm() < 1e-13);
        assert!((out.amplitudes()[i1] - Complex64::new(0.0, -(omega * t).sin())).norm() < 1e-13);
    }

    #[test]
    fn unitarity_and_energy() {
        let (_, psi, h, _) = fwm_setup(2.0, 1.0);
        let s = EvolutionSettings { leakage_threshold: 1e-6, ..Default::default() };
        let e0 = expectation(&psi, &h).unwrap().re;
        let out = evolve(&psi, &h, 0.05, &s).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() <= 1e-10);
        assert!((expectation(&out, &h).unwrap().re - e0).abs() <= 1e-10 * h.norm_bound().max(1.0));
    }

    #[test]
    fn pump_depletion_matches_second_order() {
        let (space, psi, h, _) = fwm_setup(1.0, 1.0);
        let out = evolve(&psi, &h, 0.01, &EvolutionSettings::default()).unwrap();
        let n = expectation(&out, &number_op(&space, 0).unwrap()).unwrap().re;
        assert!((n - (1.0 - 2e-4)).abs() <= 1e-6, "{n}");
    }

    #[test]
    fn rejects_bad_generators() {
        let (space, psi, _, _) = fwm_setup(1.0, 1.0);
        let a = lower(&space, 0).unwrap();
        assert_eq!(evolve(&psi, &a, 0.1, &EvolutionSettings::default()).unwrap_err(), Error::NonHermitianGenerator);
        let n = number_op(&space, 1).unwrap();
        assert_eq!(evolve(&psi, &n, -1.0, &EvolutionSettings::default()).unwrap_err(), Error::NegativeTime(-1.0));
    }

    #[test]
    fn leakage_is_reported() {
        // Tiny stokes/signal cutoffs fill the boundary quickly.
        let space = Arc::new(ProcessKind::Fwm.space(&[23, 1, 1]).unwrap());
        let spec = ProcessSpec::from_mean_photons(ProcessKind::Fwm, 1.0, 4.0, 0.0, 0.0).unwrap();
        let psi = coherent_pump_state(space.clone(), spec.pump, 1e-8).unwrap();
        let h = interaction_hamiltonian(&spec, &space).unwrap();
        assert!(matches!(
            evolve(&psi, &h, 0.2, &EvolutionSettings::default()),
            Err(Error::LeakageExceeded { .. })
        ));
    }

    #[test]
    fn taylor_order_zero_and_one() {
        let (space, _, h, spec) = fwm_setup(1.0, 0.3);
        let a = lower(&space, 0).unwrap();
        let e0 = heisenberg_taylor(&h, &a, 0).unwrap();
        assert_eq!(e0.order(), 0);
        assert_eq!(e0.evaluate(0.7).unwrap(), a);

        let e1 = heisenberg_taylor(&h, &a, 1).unwrap();
        let adbc = &(&raise(&space, 0).unwrap() * &lower(&space, 1).unwrap()) * &lower(&space, 2).unwrap();
        let expected = adbc.scale(Complex64::new(0.0, -2.0 * spec.g));
        let interior = space.interior_mask(&[2, 2, 2]);
        assert!(e1.coefficients()[1].max_abs_diff(&expected, Some(&interior)).unwrap() <= 1e-12);
        assert_eq!(heisenberg_taylor(&h, &a, 5).unwrap_err(), Error::OrderTooHigh(5));
    }

    #[test]
    fn taylor_order_two_matches_reference() {
        let space = Arc::new(ProcessKind::Fwm.space(&[12, 6, 6]).unwrap());
        let spec = ProcessSpec::from_mean_photons(ProcessKind::Fwm, 0.1, 1.0, 0.0, 0.1).unwrap();
        let h = interaction_hamiltonian(&spec, &space).unwrap();
        let a = lower(&space, 0).unwrap();
        let auto = heisenberg_taylor(&h, &a, 2).unwrap().evaluate(spec.t).unwrap();
        let literal = heisenberg_reference_operator(&spec, &space).unwrap();
        let interior = space.interior_mask(&[5, 3, 3]);
        assert!(auto.max_abs_diff(&literal, Some(&interior)).unwrap() <= 1e-9);
    }
}
