//! Multi-mode truncated Fock basis and state vectors.
//!
//! Basis states are stored row-major over the mode list: the last mode
//! varies fastest. A mode with cutoff `c` spans occupations `0..=c`.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default ceiling on the tensor-product dimension.
pub const DEFAULT_DIM_BUDGET: usize = 1_000_000;
/// Default tolerance on `| ||psi||^2 - 1 |`.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeRole {
    Pump,
    Stokes,
    Signal,
    Harmonic,
}

impl fmt::Display for ModeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModeRole::Pump => "pump",
            ModeRole::Stokes => "stokes",
            ModeRole::Signal => "signal",
            ModeRole::Harmonic => "harmonic",
        };
        f.write_str(s)
    }
}

/// Descriptor of a truncated tensor-product Fock basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeSpace {
    roles: Vec<ModeRole>,
    cutoffs: Vec<usize>,
    strides: Vec<usize>,
    total_dim: usize,
    pump: usize,
}

impl ModeSpace {
    pub fn new(roles: &[ModeRole], cutoffs: &[usize]) -> Result<Self> {
        Self::with_budget(roles, cutoffs, DEFAULT_DIM_BUDGET)
    }

    pub fn with_budget(roles: &[ModeRole], cutoffs: &[usize], budget: usize) -> Result<Self> {
        if roles.is_empty() {
            return Err(Error::EmptyModeList);
        }
        if roles.len() != cutoffs.len() {
            return Err(Error::LengthMismatch { roles: roles.len(), cutoffs: cutoffs.len() });
        }
        let mut pumps = roles.iter().enumerate().filter(|(_, r)| **r == ModeRole::Pump);
        let pump = match (pumps.next(), pumps.next()) {
            (Some((i, _)), None) => i,
            (Some(_), Some(_)) => return Err(Error::DuplicatePumpRole),
            (None, _) => return Err(Error::MissingPumpRole),
        };
        if let Some(mode) = cutoffs.iter().position(|&c| c == 0) {
            return Err(Error::ZeroCutoff { mode });
        }

        let mut total: usize = 1;
        for &c in cutoffs {
            total = total
                .checked_mul(c + 1)
                .filter(|&d| d <= budget)
                .ok_or(Error::DimensionBudgetExceeded {
                    dim: cutoffs.iter().fold(1usize, |acc, &c| acc.saturating_mul(c + 1)),
                    budget,
                })?;
        }

        let mut strides = vec![1; cutoffs.len()];
        for i in (0..cutoffs.len() - 1).rev() {
            strides[i] = strides[i + 1] * (cutoffs[i + 1] + 1);
        }

        Ok(Self { roles: roles.to_vec(), cutoffs: cutoffs.to_vec(), strides, total_dim: total, pump })
    }

    pub fn roles(&self) -> &[ModeRole] {
        &self.roles
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn num_modes(&self) -> usize {
        self.roles.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Index of the unique pump mode.
    pub fn pump_mode(&self) -> usize {
        self.pump
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.roles.len() {
            Ok(())
        } else {
            Err(Error::InvalidModeIndex { mode, modes: self.roles.len() })
        }
    }

    /// Occupation of `mode` in basis state `index`.
    #[inline]
    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.strides[mode]) % (self.cutoffs[mode] + 1)
    }

    #[inline]
    pub fn stride(&self, mode: usize) -> usize {
        self.strides[mode]
    }

    /// Basis index of a multi-index, or `None` if any occupation exceeds its cutoff.
    pub fn index_of(&self, occupations: &[usize]) -> Option<usize> {
        if occupations.len() != self.cutoffs.len() {
            return None;
        }
        occupations
            .iter()
            .zip(&self.cutoffs)
            .zip(&self.strides)
            .try_fold(0, |acc, ((&n, &c), &s)| (n <= c).then_some(acc + n * s))
    }

    pub fn occupations(&self, index: usize) -> Vec<usize> {
        (0..self.num_modes()).map(|m| self.occupation(index, m)).collect()
    }

    /// True when some mode sits at its cutoff.
    pub fn at_boundary(&self, index: usize) -> bool {
        (0..self.num_modes()).any(|m| self.occupation(index, m) == self.cutoffs[m])
    }

    /// Mask of basis states with every mode at least `margins[m]` below its cutoff.
    ///
    /// A margin of 1 on every mode is the plain interior (no support at a cutoff).
    pub fn interior_mask(&self, margins: &[usize]) -> Vec<bool> {
        (0..self.total_dim)
            .map(|i| {
                (0..self.num_modes()).all(|m| {
                    let margin = margins.get(m).copied().unwrap_or(1);
                    self.occupation(i, m) + margin <= self.cutoffs[m]
                })
            })
            .collect()
    }
}

/// Complex pump amplitude `alpha = |alpha| e^{i theta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpAmplitude {
    magnitude: f64,
    mean_photons: f64,
    phase: f64,
}

impl PumpAmplitude {
    pub fn new(magnitude: f64, phase: f64) -> Result<Self> {
        if !(magnitude >= 0.0 && magnitude.is_finite()) || !phase.is_finite() {
            return Err(Error::InvalidParameter(format!("pump amplitude |alpha|={magnitude}, theta={phase}")));
        }
        Ok(Self { magnitude, mean_photons: magnitude * magnitude, phase: phase.rem_euclid(TAU) })
    }

    /// Builds the amplitude from the mean photon number `|alpha|^2`.
    pub fn from_mean_photons(alpha_sq: f64, phase: f64) -> Result<Self> {
        if !(alpha_sq >= 0.0) {
            return Err(Error::InvalidParameter(format!("|alpha|^2 = {alpha_sq}")));
        }
        let mut amp = Self::new(alpha_sq.sqrt(), phase)?;
        amp.mean_photons = alpha_sq;
        Ok(amp)
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    /// Phase reduced to `[0, 2pi)`.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn mean_photons(&self) -> f64 {
        self.mean_photons
    }

    pub fn complex(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }
}

/// Normalized amplitude vector over a [`ModeSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: Arc<ModeSpace>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps an amplitude vector, rejecting it unless it is normalized.
    pub fn new(space: Arc<ModeSpace>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::DimensionMismatch { expected: space.total_dim(), got: amplitudes.len() });
        }
        let norm_sq = norm_sqr(&amplitudes);
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { space, amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(space: Arc<ModeSpace>, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::DimensionMismatch { expected: space.total_dim(), got: amplitudes.len() });
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm_sq: norm * norm });
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { space, amplitudes })
    }

    /// Basis state with the given occupations.
    pub fn basis(space: Arc<ModeSpace>, occupations: &[usize]) -> Result<Self> {
        let index = space.index_of(occupations).ok_or_else(|| {
            Error::InvalidParameter(format!("occupations {occupations:?} outside the truncated basis"))
        })?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); space.total_dim()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { space, amplitudes })
    }

    pub fn vacuum(space: Arc<ModeSpace>) -> Self {
        let zeros = vec![0; space.num_modes()];
        Self::basis(space, &zeros).expect("vacuum is always representable")
    }

    pub(crate) fn from_raw(space: Arc<ModeSpace>, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), space.total_dim());
        Self { space, amplitudes }
    }

    pub fn space(&self) -> &Arc<ModeSpace> {
        &self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Probability mass on basis states with any mode at its cutoff.
    pub fn leakage(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| self.space.at_boundary(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Probability mass outside [`ModeSpace::interior_mask`]: states with
    /// `occupation + margin > cutoff` in some mode. Margins of 1 reproduce
    /// [`StateVector::leakage`].
    pub fn boundary_mass(&self, margins: &[usize]) -> f64 {
        self.space
            .interior_mask(margins)
            .iter()
            .zip(&self.amplitudes)
            .filter(|(inside, _)| !**inside)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// Truncated coherent state on the pump mode, vacuum elsewhere.
///
/// The pump amplitudes `alpha^n / sqrt(n!)` are renormalized after
/// truncation. Fails if the discarded Poisson tail plus the weight on the
/// cutoff level exceeds `leakage_threshold`.
pub fn coherent_pump_state(
    space: Arc<ModeSpace>,
    alpha: PumpAmplitude,
    leakage_threshold: f64,
) -> Result<StateVector> {
    let pump = space.pump_mode();
    let cutoff = space.cutoffs()[pump];
    let a = alpha.complex();

    // alpha^n / sqrt(n!) built recursively; the Gaussian factor is dropped
    // because the vector is renormalized anyway.
    let mut coeffs = Vec::with_capacity(cutoff + 1);
    let mut c = Complex64::new(1.0, 0.0);
    coeffs.push(c);
    for n in 1..=cutoff {
        c = c * a / (n as f64).sqrt();
        coeffs.push(c);
    }
    let kept: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let untruncated = alpha.mean_photons().exp();
    // Poisson mass at or beyond the cutoff level, relative to the full state.
    let tail = ((untruncated - kept) + coeffs[cutoff].norm_sqr()).max(0.0) / untruncated;
    if tail > leakage_threshold {
        return Err(Error::InsufficientCutoff { leakage: tail, threshold: leakage_threshold });
    }

    let norm = kept.sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); space.total_dim()];
    let stride = space.stride(pump);
    for (n, c) in coeffs.into_iter().enumerate() {
        amplitudes[n * stride] = c / norm;
    }
    Ok(StateVector::from_raw(space, amplitudes))
}
