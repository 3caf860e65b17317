//! Single-point evaluation and parameter sweeps.

use std::collections::BTreeMap;

use phasefluct_core::{
    closed_form_with, compare, evaluate_state, evolved_state, evolved_state_adaptive, process_leakage,
    ClosedFormCoefficients, EvolutionSettings, FormalismChoice, Param, ProcessKind, ProcessSpec,
};
use rayon::prelude::*;

use crate::config::{ConfigError, SweepConfig};
use crate::record::{ExactColumns, FormulaColumns, SweepRecord};

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "PHASEFLUCT_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct PointSettings {
    pub evolution: EvolutionSettings,
    pub comparison_tol: f64,
    /// Explicit cutoffs; `None` starts from the per-|α|² defaults and widens
    /// them until the boundary mass is below the leakage threshold.
    pub cutoffs: Option<Vec<usize>>,
    pub coefficients: BTreeMap<ProcessKind, ClosedFormCoefficients>,
}

impl Default for PointSettings {
    fn default() -> Self {
        Self { evolution: EvolutionSettings::default(), comparison_tol: 1e-3, cutoffs: None, coefficients: BTreeMap::new() }
    }
}

impl PointSettings {
    pub fn from_config(c: &SweepConfig) -> Self {
        Self {
            evolution: c.tolerances.evolution(),
            comparison_tol: c.tolerances.comparison,
            cutoffs: c.cutoffs.clone(),
            coefficients: c.coefficients.clone(),
        }
    }

    fn coefficients_for(&self, kind: ProcessKind) -> ClosedFormCoefficients {
        self.coefficients.get(&kind).copied().unwrap_or_else(|| ClosedFormCoefficients::printed(kind))
    }
}

/// One point of a scenario as the user specified it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointInput {
    pub kind: ProcessKind,
    pub alpha_sq: f64,
    pub theta: f64,
    pub g: f64,
    pub t: f64,
}

impl PointInput {
    pub fn spec(&self) -> phasefluct_core::Result<ProcessSpec> {
        ProcessSpec::from_mean_photons(self.kind, self.g, self.alpha_sq, self.theta, self.t)
    }
}

fn formula_columns(spec: &ProcessSpec, k: &ClosedFormCoefficients) -> (FormulaColumns, phasefluct_core::ClosedFormResult) {
    let f = closed_form_with(spec, k);
    (FormulaColumns { u: f.u, s_param: f.s_param, q: f.q, d: f.d }, f)
}

/// Exact pipeline, closed form and their comparison for one point.
pub fn run_point(
    input: &PointInput,
    formalism: FormalismChoice,
    settings: &PointSettings,
) -> phasefluct_core::Result<SweepRecord> {
    let spec = input.spec()?;
    let state = match &settings.cutoffs {
        Some(c) => evolved_state(&spec, c, &settings.evolution)?,
        None => evolved_state_adaptive(&spec, &settings.evolution)?.0,
    };
    let ex = evaluate_state(&spec, &state, formalism)?;
    let (formula, f) = formula_columns(&spec, &settings.coefficients_for(input.kind));
    let report = compare(&ex, &f, settings.comparison_tol)?;
    let m = ex.moments;
    Ok(SweepRecord {
        process: input.kind,
        formalism,
        alpha_sq: input.alpha_sq,
        theta: input.theta,
        g: input.g,
        t: input.t,
        exact: Some(ExactColumns {
            n_bar: m.mean_n,
            var_n: m.var_n,
            d: ex.cn.d,
            mean_c: m.mean_c,
            mean_s: m.mean_s,
            mean_c2: m.mean_c2,
            mean_s2: m.mean_s2,
            var_c: m.var_c,
            var_s: m.var_s,
            t_total: ex.cn.t,
            u: ex.cn.u,
            s_param: ex.cn.s_param,
            q: ex.cn.q,
            leakage: process_leakage(input.kind, &state),
        }),
        formula,
        rel_err_u: report.field("U").map_or(Param::Undefined, |d| Param::from(d.relative)),
        validity_flag: f.validity_warning,
        error: None,
    })
}

/// Row for a point whose exact pipeline failed; formula columns are still filled.
fn failed_record(input: &PointInput, formalism: FormalismChoice, settings: &PointSettings, err: String) -> SweepRecord {
    let spec = input.spec().ok();
    let (formula, warn) = match &spec {
        Some(s) => {
            let (cols, f) = formula_columns(s, &settings.coefficients_for(input.kind));
            (cols, f.validity_warning)
        }
        None => (FormulaColumns { u: f64::NAN, s_param: f64::NAN, q: Param::Undefined, d: f64::NAN }, false),
    };
    SweepRecord {
        process: input.kind,
        formalism,
        alpha_sq: input.alpha_sq,
        theta: input.theta,
        g: input.g,
        t: input.t,
        exact: None,
        formula,
        rel_err_u: Param::Undefined,
        validity_flag: warn,
        error: Some(err),
    }
}

/// Grid points of a sweep in lexicographic `(alpha_sq, theta, t)` order.
pub fn sweep_points(config: &SweepConfig) -> Vec<PointInput> {
    let times = config.t.points();
    let mut pts = Vec::with_capacity(config.alpha_sq.len() * config.theta.len() * times.len());
    for &alpha_sq in &config.alpha_sq {
        for &theta in &config.theta {
            for &t in &times {
                pts.push(PointInput { kind: config.process, alpha_sq, theta, g: config.g, t });
            }
        }
    }
    pts.sort_by(|a, b| {
        a.alpha_sq.total_cmp(&b.alpha_sq).then(a.theta.total_cmp(&b.theta)).then(a.t.total_cmp(&b.t))
    });
    pts
}

/// Worker pool honouring [`THREADS_ENV`].
pub fn thread_pool() -> Result<rayon::ThreadPool, ConfigError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| ConfigError::invalid(THREADS_ENV, format!("expected a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| ConfigError::invalid(THREADS_ENV, e.to_string()))
}

/// Evaluates every grid point; failed points become rows with the error column set.
pub fn run_sweep(config: &SweepConfig, pool: &rayon::ThreadPool) -> Vec<SweepRecord> {
    let settings = PointSettings::from_config(config);
    let points = sweep_points(config);
    pool.install(|| {
        points
            .par_iter()
            .map(|p| {
                run_point(p, config.formalism, &settings)
                    .unwrap_or_else(|e| failed_record(p, config.formalism, &settings, e.to_string()))
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{TimeGrid, Tolerances};

    fn config() -> SweepConfig {
        SweepConfig {
            process: ProcessKind::Shg,
            formalism: FormalismChoice::Bp,
            alpha_sq: vec![2.0, 1.0],
            theta: vec![0.5, 0.0],
            g: 1.0,
            t: TimeGrid::Values(vec![0.02, 0.0]),
            cutoffs: None,
            tolerances: Tolerances::default(),
            output: None,
            coefficients: BTreeMap::new(),
        }
    }

    #[test]
    fn points_are_sorted() {
        let pts = sweep_points(&config());
        assert_eq!(pts.len(), 8);
        let keys: Vec<_> = pts.iter().map(|p| (p.alpha_sq, p.theta, p.t)).collect();
        assert_eq!(keys[0], (1.0, 0.0, 0.0));
        assert_eq!(keys[1], (1.0, 0.0, 0.02));
        assert_eq!(keys[2], (1.0, 0.5, 0.0));
        assert_eq!(keys[7], (2.0, 0.5, 0.02));
    }

    #[test]
    fn zero_time_point() {
        let input = PointInput { kind: ProcessKind::Fwm, alpha_sq: 1.0, theta: 0.0, g: 1.0, t: 0.0 };
        let r = run_point(&input, FormalismChoice::Bp, &PointSettings::default()).unwrap();
        let e = r.exact.unwrap();
        assert!((e.u.value().unwrap() - 0.5).abs() <= 1e-9);
        assert!(e.d.abs() <= 1e-9);
        assert!(r.rel_err_u.value().unwrap() <= 1e-9);
        assert!(r.error.is_none());
    }

    #[test]
    fn failures_become_rows() {
        let mut c = config();
        c.cutoffs = Some(vec![3, 2]);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
        let rows = run_sweep(&c, &pool);
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.error.is_some() && r.exact.is_none()));
        assert!(rows[0].formula.u == 0.5);
    }
}
