//! Carruthers–Nieto parameters, antibunching witness, exact-vs-formula
//! comparison and log-log convergence fits.

use crate::error::{Error, Result};
use crate::param::Param;
use crate::phase::{MomentSet, PhaseFormalism};
use crate::process::{ClosedFormResult, ProcessSpec};

/// Denominators below this magnitude yield [`Param::Undefined`].
pub const DENOMINATOR_FLOOR: f64 = 1e-14;
/// Reference magnitude below which comparisons switch to absolute differences.
pub const RELATIVE_FLOOR: f64 = 1e-12;
/// Smallest error accepted by [`convergence_slope`].
pub const ERROR_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnResult {
    pub u: Param,
    pub s_param: f64,
    pub q: Param,
    /// Total phase fluctuation `varC + varS`.
    pub t: f64,
    /// Antibunching witness `varN - <N>`.
    pub d: f64,
    pub b_ratio: Param,
    /// `U >= 1/4`; only meaningful for Susskind–Glogower.
    pub bound_ok: Option<bool>,
    pub provenance: Provenance,
}

pub fn cn_parameters(m: &MomentSet, formalism: PhaseFormalism) -> CnResult {
    let t = m.var_c + m.var_s;
    let s_param = m.var_n * m.var_s;
    let u = Param::ratio(m.var_n * t, m.mean_s * m.mean_s + m.mean_c * m.mean_c, DENOMINATOR_FLOOR);
    let q = Param::ratio(s_param, m.mean_c * m.mean_c, DENOMINATOR_FLOOR);
    let (b_ratio, bound_ok) = match formalism {
        PhaseFormalism::SusskindGlogower => {
            let b = Param::ratio(t, 1.0 - 0.5 * m.vacuum_prob - t, DENOMINATOR_FLOOR);
            (b, Some(u.value().map_or(false, |u| u >= 0.25 - 1e-10)))
        }
        PhaseFormalism::BarnettPegg { .. } => (Param::ratio(t, 1.0 - t, DENOMINATOR_FLOOR), None),
    };
    CnResult { u, s_param, q, t, d: m.var_n - m.mean_n, b_ratio, bound_ok, provenance: Provenance::Exact }
}

/// Everything the exact pipeline produces for one spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactEvaluation {
    pub spec: ProcessSpec,
    pub moments: MomentSet,
    pub cn: CnResult,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldDifference {
    pub name: &'static str,
    pub absolute: f64,
    /// Relative to the formula value, or absolute when that value is tiny.
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub fields: Vec<FieldDifference>,
    pub worst_relative: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ComparisonReport {
    pub fn field(&self, name: &str) -> Option<&FieldDifference> {
        self.fields.iter().find(|f| f.name == name)
    }
}

fn difference(name: &'static str, exact: Param, formula: Param) -> FieldDifference {
    match (exact, formula) {
        (Param::Value(e), Param::Value(f)) => {
            let absolute = (e - f).abs();
            let relative = if f.abs() < RELATIVE_FLOOR { absolute } else { absolute / f.abs() };
            FieldDifference { name, absolute, relative }
        }
        (Param::Undefined, Param::Undefined) => FieldDifference { name, absolute: 0.0, relative: 0.0 },
        _ => FieldDifference { name, absolute: f64::INFINITY, relative: f64::INFINITY },
    }
}

pub fn compare(exact: &ExactEvaluation, formula: &ClosedFormResult, tol: f64) -> Result<ComparisonReport> {
    if exact.spec != formula.spec {
        return Err(Error::SpecMismatch);
    }
    let fields = vec![
        difference("U", exact.cn.u, formula.u.into()),
        difference("S", exact.cn.s_param.into(), formula.s_param.into()),
        difference("Q", exact.cn.q, formula.q),
        difference("N_bar", exact.moments.mean_n.into(), formula.n_bar.into()),
        difference("var_N", exact.moments.var_n.into(), formula.var_n.into()),
        difference("d", exact.cn.d.into(), formula.d.into()),
    ];
    let worst_relative = fields.iter().map(|f| f.relative).fold(0.0, f64::max);
    Ok(ComparisonReport { fields, worst_relative, tolerance: tol, pass: worst_relative <= tol })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeEstimate {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in natural-log units.
    pub residual: f64,
    pub points: Vec<(f64, f64)>,
}

/// Least-squares slope of `ln(error)` against `ln(gt)`.
pub fn convergence_slope(points: &[(f64, f64)]) -> Result<SlopeEstimate> {
    if points.len() < 3 {
        return Err(Error::InsufficientPoints(points.len()));
    }
    if let Some(&(_, e)) = points.iter().find(|(_, e)| !(e.abs() > ERROR_FLOOR)) {
        return Err(Error::ErrorBelowFloor(e));
    }
    if let Some(&(x, _)) = points.iter().find(|(x, _)| !(*x > 0.0)) {
        return Err(Error::InvalidParameter(format!("non-positive abscissa {x}")));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, e)| (x.ln(), e.abs().ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (logs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(SlopeEstimate { slope, intercept, residual, points: points.to_vec() })
}
