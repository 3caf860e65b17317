//! Four-wave mixing, six-wave mixing and second-harmonic generation.
//!
//! Everything here lives in the interaction picture with `hbar = 1`: the
//! free-field terms are rotated away and only the coupling term generates
//! dynamics, so the pump phase `theta` is the interaction-picture phase.
//!
//! Mode layouts:
//!
//! | process | modes                   | interaction term                      |
//! |---------|-------------------------|---------------------------------------|
//! | FWM     | pump A, stokes B, signal C | `g (A†² B C + A² B† C†)`           |
//! | SWM     | pump A, stokes B, signal C | `g (A†² B³ C + A² B†³ C†)`         |
//! | SHG     | pump a1, harmonic a2    | `g (a2† a1² + a1†² a2)`               |

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{ModeRole, ModeSpace, PumpAmplitude};
use crate::operator::{lower, raise, ModeOperator};
use crate::param::Param;

/// Above this value of the largest `g^2 t^2 |alpha|^2` coefficient the
/// second-order formulas are flagged as outside their validity region.
pub const VALIDITY_THRESHOLD: f64 = 0.1;

const FWM_ROLES: [ModeRole; 3] = [ModeRole::Pump, ModeRole::Stokes, ModeRole::Signal];
const SHG_ROLES: [ModeRole; 2] = [ModeRole::Pump, ModeRole::Harmonic];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProcessKind {
    Fwm,
    Swm,
    Shg,
}

impl ProcessKind {
    pub const ALL: [ProcessKind; 3] = [ProcessKind::Fwm, ProcessKind::Swm, ProcessKind::Shg];

    pub fn name(self) -> &'static str {
        match self {
            ProcessKind::Fwm => "fwm",
            ProcessKind::Swm => "swm",
            ProcessKind::Shg => "shg",
        }
    }

    pub fn roles(self) -> &'static [ModeRole] {
        match self {
            ProcessKind::Fwm | ProcessKind::Swm => &FWM_ROLES,
            ProcessKind::Shg => &SHG_ROLES,
        }
    }

    /// Cutoffs of the non-pump modes, in mode order.
    pub fn default_aux_cutoffs(self) -> &'static [usize] {
        match self {
            ProcessKind::Fwm => &[7, 7],
            ProcessKind::Swm => &[13, 5],
            ProcessKind::Shg => &[7],
        }
    }

    /// Default cutoffs for a pump with mean photon number `alpha_sq`.
    ///
    /// Pump: `max(23, ceil(|alpha|^2 + 8|alpha| + 10))`.
    pub fn default_cutoffs(self, alpha_sq: f64) -> Vec<usize> {
        let mut cutoffs = vec![default_pump_cutoff(alpha_sq)];
        cutoffs.extend_from_slice(self.default_aux_cutoffs());
        cutoffs
    }

    /// Highest power of each mode's ladder operators in the interaction term.
    pub fn ladder_powers(self) -> &'static [usize] {
        match self {
            ProcessKind::Fwm => &[2, 1, 1],
            ProcessKind::Swm => &[2, 3, 1],
            ProcessKind::Shg => &[2, 1],
        }
    }

    /// Per-mode distance from the cutoff within which an order-`order`
    /// nested commutator of the pump annihilator is free of truncation
    /// artifacts.
    pub fn interior_margins(self, order: usize) -> Vec<usize> {
        self.ladder_powers()
            .iter()
            .enumerate()
            .map(|(m, p)| order * p + usize::from(m == 0))
            .map(|m| m.max(1))
            .collect()
    }

    pub fn space(self, cutoffs: &[usize]) -> Result<ModeSpace> {
        ModeSpace::new(self.roles(), cutoffs)
    }

    fn check_space(self, space: &ModeSpace) -> Result<()> {
        if space.roles() == self.roles() {
            Ok(())
        } else {
            Err(Error::RoleMismatch { process: self.name(), found: space.roles().to_vec() })
        }
    }
}

pub fn default_pump_cutoff(alpha_sq: f64) -> usize {
    let a = alpha_sq.max(0.0);
    let rule = (a + 8.0 * a.sqrt() + 10.0).ceil() as usize;
    rule.max(23)
}

impl fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProcessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fwm" => Ok(ProcessKind::Fwm),
            "swm" => Ok(ProcessKind::Swm),
            "shg" => Ok(ProcessKind::Shg),
            other => Err(Error::InvalidParameter(format!("unknown process {other:?}"))),
        }
    }
}

/// One coherently pumped mixing scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessSpec {
    pub kind: ProcessKind,
    /// Coupling constant, inverse time.
    pub g: f64,
    pub pump: PumpAmplitude,
    /// Interaction time.
    pub t: f64,
    /// Free-field frequencies. Documentation only; the interaction picture ignores them.
    pub frequencies: [f64; 3],
}

impl ProcessSpec {
    pub fn new(kind: ProcessKind, g: f64, pump: PumpAmplitude, t: f64) -> Result<Self> {
        if !(g >= 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling g = {g}")));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("interaction time t = {t}")));
        }
        Ok(Self { kind, g, pump, t, frequencies: [0.0; 3] })
    }

    pub fn from_mean_photons(kind: ProcessKind, g: f64, alpha_sq: f64, theta: f64, t: f64) -> Result<Self> {
        Self::new(kind, g, PumpAmplitude::from_mean_photons(alpha_sq, theta)?, t)
    }

    pub fn with_frequencies(mut self, frequencies: [f64; 3]) -> Self {
        self.frequencies = frequencies;
        self
    }

    pub fn with_time(mut self, t: f64) -> Result<Self> {
        Self::new(self.kind, self.g, self.pump, t).map(|s| {
            self.t = s.t;
            self
        })
    }

    pub fn gt(&self) -> f64 {
        self.g * self.t
    }

    /// Largest second-order coefficient, e.g. `12 g^2 t^2 |alpha|^2` for FWM.
    pub fn smallness(&self) -> f64 {
        ClosedFormCoefficients::printed(self.kind).u_numerator * self.gt().powi(2) * self.pump.mean_photons()
    }

    pub fn validity_warning(&self) -> bool {
        self.smallness() > VALIDITY_THRESHOLD
    }
}

/// Ladder operators of a process space, built once.
struct Ladders {
    a: ModeOperator,
    ad: ModeOperator,
    b: ModeOperator,
    bd: ModeOperator,
    c: Option<(ModeOperator, ModeOperator)>,
}

impl Ladders {
    fn new(space: &Arc<ModeSpace>) -> Result<Self> {
        let c = if space.num_modes() > 2 { Some((lower(space, 2)?, raise(space, 2)?)) } else { None };
        Ok(Self { a: lower(space, 0)?, ad: raise(space, 0)?, b: lower(space, 1)?, bd: raise(space, 1)?, c })
    }

    fn c(&self) -> &ModeOperator {
        &self.c.as_ref().expect("three-mode process").0
    }

    fn cd(&self) -> &ModeOperator {
        &self.c.as_ref().expect("three-mode process").1
    }
}

fn product(factors: &[&ModeOperator]) -> Result<ModeOperator> {
    let (first, rest) = factors.split_first().expect("non-empty product");
    rest.iter().try_fold((*first).clone(), |acc, f| acc.multiply(f))
}

fn linear_combination(space: &Arc<ModeSpace>, terms: &[(Complex64, ModeOperator)]) -> Result<ModeOperator> {
    terms.iter().try_fold(ModeOperator::zero(space.clone()), |acc, (c, op)| acc.add(&op.scale(*c)))
}

/// Interaction term of the process Hamiltonian as a hermitian operator.
pub fn interaction_hamiltonian(spec: &ProcessSpec, space: &Arc<ModeSpace>) -> Result<ModeOperator> {
    spec.kind.check_space(space)?;
    let l = Ladders::new(space)?;
    // Emission term: pump pair absorbed, product modes raised.
    let emission = match spec.kind {
        ProcessKind::Fwm => product(&[&l.a, &l.a, &l.bd, &l.cd()])?,
        ProcessKind::Swm => product(&[&l.a, &l.a, &l.bd, &l.bd, &l.bd, &l.cd()])?,
        ProcessKind::Shg => product(&[&l.bd, &l.a, &l.a])?,
    };
    emission.add(&emission.adjoint())?.scale_real(spec.g).into_hermitian()
}

/// Second-order short-time Heisenberg solution for the pump annihilator,
/// assembled term by term from ladder matrices.
pub fn heisenberg_reference_operator(spec: &ProcessSpec, space: &Arc<ModeSpace>) -> Result<ModeOperator> {
    spec.kind.check_space(space)?;
    let l = Ladders::new(space)?;
    let (g, t) = (spec.g, spec.t);
    let first = Complex64::new(0.0, -2.0 * g * t);
    let re = |x: f64| Complex64::new(x, 0.0);
    let gt2 = g * g * t * t;

    let terms = match spec.kind {
        ProcessKind::Fwm => {
            let (c, cd) = (l.c(), l.cd());
            let nb = product(&[&l.bd, &l.b])?;
            let nc = product(&[cd, c])?;
            let ad_a2 = product(&[&l.ad, &l.a, &l.a])?;
            vec![
                (re(1.0), l.a.clone()),
                (first, product(&[&l.ad, &l.b, c])?),
                (re(gt2 / 2.0 * 4.0), product(&[&l.a, &nb, &nc])?),
                (re(gt2 / 2.0 * -2.0), product(&[&ad_a2, &nb])?),
                (re(gt2 / 2.0 * -2.0), product(&[&ad_a2, &nc])?),
                (re(gt2 / 2.0 * -2.0), ad_a2),
            ]
        }
        ProcessKind::Swm => {
            let (c, cd) = (l.c(), l.cd());
            let nb1 = product(&[&l.bd, &l.b])?;
            let nb2 = product(&[&l.bd, &l.bd, &l.b, &l.b])?;
            let nb3 = product(&[&l.bd, &l.bd, &l.bd, &l.b, &l.b, &l.b])?;
            let nc = product(&[cd, c])?;
            let ad_a2 = product(&[&l.ad, &l.a, &l.a])?;
            vec![
                (re(1.0), l.a.clone()),
                (first, product(&[&l.ad, &l.b, &l.b, &l.b, c])?),
                (re(2.0 * gt2), product(&[&l.a, &nb3, &nc])?),
                (re(-9.0 * gt2), product(&[&ad_a2, &nb2, &nc])?),
                (re(-18.0 * gt2), product(&[&ad_a2, &nb1, &nc])?),
                (re(-gt2), product(&[&ad_a2, &nb3])?),
                (re(-9.0 * gt2), product(&[&ad_a2, &nb2])?),
                (re(-18.0 * gt2), product(&[&ad_a2, &nb1])?),
                (re(-6.0 * gt2), product(&[&ad_a2, &nc])?),
                (re(-6.0 * gt2), ad_a2),
            ]
        }
        ProcessKind::Shg => vec![
            (re(1.0), l.a.clone()),
            (first, product(&[&l.ad, &l.b])?),
            (re(2.0 * gt2), product(&[&l.bd, &l.b, &l.a])?),
            (re(2.0 * gt2 * -0.5), product(&[&l.ad, &l.a, &l.a])?),
        ],
    };
    linear_combination(space, &terms)
}

/// Numeric coefficients of the second-order closed forms.
///
/// With `m = |alpha|^2`, `k = g^2 t^2`, `c = cos 2 theta`:
///
/// ```text
/// N̄ = m - depletion k m²
/// d = -witness k m²,      (ΔN)² = N̄ + d
/// U = ½ (1 - u_numerator k m) / (1 - u_denominator k m)
/// S = ¼ (N̄ + ½)⁻¹ [m + s_weight m² k (c - s_offset)]
/// Q = (1 + q_weight m k (c - q_offset)) / (2 (c + 1) (1 - q_denominator m k))
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCoefficients {
    pub depletion: f64,
    pub witness: f64,
    pub u_numerator: f64,
    pub u_denominator: f64,
    pub s_weight: f64,
    pub s_offset: f64,
    pub q_weight: f64,
    pub q_offset: f64,
    pub q_denominator: f64,
}

impl ClosedFormCoefficients {
    /// The published second-order coefficients for each process.
    pub const fn printed(kind: ProcessKind) -> Self {
        match kind {
            ProcessKind::Fwm => Self {
                depletion: 2.0,
                witness: 6.0,
                u_numerator: 12.0,
                u_denominator: 2.0,
                s_weight: 2.0,
                s_offset: 6.0,
                q_weight: 2.0,
                q_offset: 6.0,
                q_denominator: 2.0,
            },
            ProcessKind::Swm => Self {
                depletion: 12.0,
                witness: 12.0,
                u_numerator: 72.0,
                u_denominator: 12.0,
                s_weight: 12.0,
                s_offset: 6.0,
                q_weight: 12.0,
                q_offset: 6.0,
                q_denominator: 12.0,
            },
            ProcessKind::Shg => Self {
                depletion: 2.0,
                witness: 2.0,
                u_numerator: 4.0,
                u_denominator: 2.0,
                s_weight: 2.0,
                s_offset: 2.0,
                q_weight: 2.0,
                q_offset: 2.0,
                q_denominator: 2.0,
            },
        }
    }
}

/// Second-order phase-operator moments for four-wave mixing (BP formalism).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwmIntermediates {
    pub mean_c_sq: f64,
    pub mean_s_sq: f64,
    pub mean_c2: f64,
    pub mean_s2: f64,
    pub var_c: f64,
    pub var_s: f64,
}

/// Closed-form pump statistics and phase-fluctuation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormResult {
    pub spec: ProcessSpec,
    pub coefficients: ClosedFormCoefficients,
    pub n_bar: f64,
    pub var_n: f64,
    pub d: f64,
    pub u: f64,
    pub s_param: f64,
    pub q: Param,
    pub fwm: Option<FwmIntermediates>,
    pub validity_warning: bool,
}

/// Evaluates the published closed forms for `spec`.
pub fn closed_form(spec: &ProcessSpec) -> ClosedFormResult {
    closed_form_with(spec, &ClosedFormCoefficients::printed(spec.kind))
}

/// Evaluates the closed forms with caller-supplied coefficients.
pub fn closed_form_with(spec: &ProcessSpec, k: &ClosedFormCoefficients) -> ClosedFormResult {
    let m = spec.pump.mean_photons();
    let gt2 = spec.gt().powi(2);
    let cos2 = (2.0 * spec.pump.phase()).cos();

    let n_bar = m - k.depletion * gt2 * m * m;
    let d = -k.witness * gt2 * m * m;
    let var_n = n_bar + d;
    let u = 0.5 * (1.0 - k.u_numerator * gt2 * m) / (1.0 - k.u_denominator * gt2 * m);
    let s_param = 0.25 / (n_bar + 0.5) * (m + k.s_weight * m * m * gt2 * (cos2 - k.s_offset));
    let q = if m == 0.0 || (cos2 + 1.0).abs() < 1e-12 {
        Param::Undefined
    } else {
        Param::Value(
            (1.0 + k.q_weight * m * gt2 * (cos2 - k.q_offset))
                / (2.0 * (cos2 + 1.0) * (1.0 - k.q_denominator * m * gt2)),
        )
    };

    let fwm = (spec.kind == ProcessKind::Fwm).then(|| {
        let pre = 0.25 / (n_bar + 0.5);
        let two_re_alpha_sq = 2.0 * m * cos2; // alpha² + alpha*²
        FwmIntermediates {
            mean_c_sq: pre * (two_re_alpha_sq + 2.0 * m - gt2 * (2.0 * m * two_re_alpha_sq + 4.0 * m * m)),
            mean_s_sq: -pre * (two_re_alpha_sq - 2.0 * m - gt2 * (2.0 * m * two_re_alpha_sq - 4.0 * m * m)),
            mean_c2: pre
                * (two_re_alpha_sq + 2.0 * m + 1.0
                    - gt2 * (two_re_alpha_sq + 2.0 * m * two_re_alpha_sq + 4.0 * m * m + 4.0 * m)),
            mean_s2: -pre
                * (two_re_alpha_sq - 2.0 * m - 1.0
                    - gt2 * (two_re_alpha_sq + 2.0 * m * two_re_alpha_sq - 4.0 * m * m - 4.0 * m)),
            var_c: pre * (1.0 - gt2 * (two_re_alpha_sq + 4.0 * m)),
            var_s: -pre * (-1.0 - gt2 * (two_re_alpha_sq - 4.0 * m)),
        }
    });

    ClosedFormResult {
        spec: *spec,
        coefficients: *k,
        n_bar,
        var_n,
        d,
        u,
        s_param,
        q,
        fwm,
        validity_warning: k.u_numerator * gt2 * m > VALIDITY_THRESHOLD,
    }
}
