//! Scenario configuration: TOML file, command-line overrides, validation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use phasefluct_core::{ClosedFormCoefficients, EvolutionSettings, FormalismChoice, ProcessKind};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl ConfigError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Validation { field: field.into(), message: message.into() }
    }

    /// Name of the offending field for validation errors.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Validation { field, .. } => Some(field),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeScale {
    Lin,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimeGrid {
    Values(Vec<f64>),
    Range { min: f64, max: f64, count: usize, scale: TimeScale },
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            TimeGrid::Values(ref v) => v.clone(),
            TimeGrid::Range { min, count: 1, .. } => vec![min],
            TimeGrid::Range { min, max, count, scale } => {
                let last = (count - 1) as f64;
                (0..count)
                    .map(|i| {
                        // endpoints exactly as given
                        if i == 0 {
                            return min;
                        }
                        if i + 1 == count {
                            return max;
                        }
                        let f = i as f64 / last;
                        match scale {
                            TimeScale::Lin => min + (max - min) * f,
                            TimeScale::Log => (min.ln() + (max.ln() - min.ln()) * f).exp(),
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Exact-evolution accuracy target.
    pub accuracy: f64,
    /// Largest acceptable boundary probability.
    pub leakage: f64,
    /// Relative tolerance for exact-vs-formula comparisons.
    pub comparison: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let e = EvolutionSettings::default();
        Self { accuracy: e.accuracy, leakage: e.leakage_threshold, comparison: 1e-3 }
    }
}

impl Tolerances {
    pub fn evolution(&self) -> EvolutionSettings {
        EvolutionSettings { accuracy: self.accuracy, leakage_threshold: self.leakage, ..EvolutionSettings::default() }
    }
}

/// Validated sweep scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub process: ProcessKind,
    pub formalism: FormalismChoice,
    pub alpha_sq: Vec<f64>,
    pub theta: Vec<f64>,
    pub g: f64,
    pub t: TimeGrid,
    /// Explicit cutoffs; `None` picks the per-|α|² defaults.
    pub cutoffs: Option<Vec<usize>>,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub coefficients: BTreeMap<ProcessKind, ClosedFormCoefficients>,
}

impl SweepConfig {
    pub fn cutoffs_for(&self, alpha_sq: f64) -> Vec<usize> {
        self.cutoffs.clone().unwrap_or_else(|| self.process.default_cutoffs(alpha_sq))
    }

    pub fn coefficients_for(&self, kind: ProcessKind) -> ClosedFormCoefficients {
        self.coefficients.get(&kind).copied().unwrap_or_else(|| ClosedFormCoefficients::printed(kind))
    }
}

/// Settings for the `verify` and `taylor-check` subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Processes to check; all of them when no process was given.
    pub processes: Vec<ProcessKind>,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub coefficients: BTreeMap<ProcessKind, ClosedFormCoefficients>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum RawTime {
    #[default]
    Missing,
    Scalar(f64),
    List(Vec<f64>),
    Grid(RawGrid),
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub values: Option<Vec<f64>>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<i64>,
    pub scale: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTolerances {
    pub accuracy: Option<f64>,
    pub leakage: Option<f64>,
    pub comparison: Option<f64>,
}

/// Partial coefficient set; missing entries keep the published values.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCoefficients {
    pub depletion: Option<f64>,
    pub witness: Option<f64>,
    pub u_numerator: Option<f64>,
    pub u_denominator: Option<f64>,
    pub s_weight: Option<f64>,
    pub s_offset: Option<f64>,
    pub q_weight: Option<f64>,
    pub q_offset: Option<f64>,
    pub q_denominator: Option<f64>,
}

impl RawCoefficients {
    fn apply(&self, mut k: ClosedFormCoefficients) -> ClosedFormCoefficients {
        let fields = [
            (&mut k.depletion, self.depletion),
            (&mut k.witness, self.witness),
            (&mut k.u_numerator, self.u_numerator),
            (&mut k.u_denominator, self.u_denominator),
            (&mut k.s_weight, self.s_weight),
            (&mut k.s_offset, self.s_offset),
            (&mut k.q_weight, self.q_weight),
            (&mut k.q_offset, self.q_offset),
            (&mut k.q_denominator, self.q_denominator),
        ];
        for (slot, v) in fields {
            if let Some(v) = v {
                *slot = v;
            }
        }
        k
    }
}

/// Unvalidated configuration as read from a file or assembled from flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub process: Option<String>,
    pub formalism: Option<String>,
    pub alpha_sq: Option<Vec<f64>>,
    pub theta: Option<Vec<f64>>,
    pub g: Option<f64>,
    #[serde(default)]
    pub t: RawTime,
    pub cutoffs: Option<Vec<usize>>,
    pub tolerances: Option<RawTolerances>,
    pub output: Option<PathBuf>,
    pub coefficients: Option<BTreeMap<String, RawCoefficients>>,
}

/// Values given on the command line; each one replaces the file's value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub process: Option<String>,
    pub formalism: Option<String>,
    pub alpha_sq: Option<Vec<f64>>,
    pub theta: Option<Vec<f64>>,
    pub g: Option<f64>,
    pub t: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_count: Option<i64>,
    pub t_scale: Option<String>,
    pub cutoffs: Option<Vec<usize>>,
    pub tol: Option<f64>,
    pub output: Option<PathBuf>,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

impl RawConfig {
    pub fn from_toml_str(src: &str) -> Result<Self, ConfigError> {
        toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(src, s.start));
            ConfigError::Parse { line, column, message: e.message().trim().to_string() }
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_toml_str(&src)
    }

    pub fn merge(mut self, o: Overrides) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if o.$f.is_some() { self.$f = o.$f; } )* };
        }
        take!(process, formalism, alpha_sq, theta, g, cutoffs, output);
        if let Some(t) = o.t {
            self.t = RawTime::Scalar(t);
        }
        if o.t_min.is_some() || o.t_max.is_some() || o.t_count.is_some() || o.t_scale.is_some() {
            let mut grid = match std::mem::take(&mut self.t) {
                RawTime::Grid(g) if g.values.is_none() => g,
                _ => RawGrid::default(),
            };
            grid.min = o.t_min.or(grid.min);
            grid.max = o.t_max.or(grid.max);
            grid.count = o.t_count.or(grid.count);
            grid.scale = o.t_scale.or(grid.scale);
            self.t = RawTime::Grid(grid);
        }
        if let Some(tol) = o.tol {
            self.tolerances.get_or_insert_with(Default::default).accuracy = Some(tol);
        }
        self
    }

    fn tolerances(&self) -> Result<Tolerances, ConfigError> {
        let mut tol = Tolerances::default();
        if let Some(raw) = &self.tolerances {
            for (name, value, slot) in [
                ("tolerances.accuracy", raw.accuracy, &mut tol.accuracy),
                ("tolerances.leakage", raw.leakage, &mut tol.leakage),
                ("tolerances.comparison", raw.comparison, &mut tol.comparison),
            ] {
                if let Some(v) = value {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(ConfigError::invalid(name, format!("must be positive and finite, got {v}")));
                    }
                    *slot = v;
                }
            }
        }
        Ok(tol)
    }

    fn coefficients(&self) -> Result<BTreeMap<ProcessKind, ClosedFormCoefficients>, ConfigError> {
        let mut out = BTreeMap::new();
        for (name, raw) in self.coefficients.iter().flatten() {
            let kind: ProcessKind =
                name.parse().map_err(|_| ConfigError::invalid(format!("coefficients.{name}"), "unknown process"))?;
            out.insert(kind, raw.apply(ClosedFormCoefficients::printed(kind)));
        }
        Ok(out)
    }

    fn process(&self) -> Result<Option<ProcessKind>, ConfigError> {
        self.process
            .as_deref()
            .map(|p| p.parse().map_err(|_| ConfigError::invalid("process", format!("unknown process {p:?}; expected fwm, swm or shg"))))
            .transpose()
    }

    fn time_grid(&self) -> Result<TimeGrid, ConfigError> {
        let check_time = |field: &str, t: f64| {
            if t >= 0.0 && t.is_finite() {
                Ok(t)
            } else {
                Err(ConfigError::invalid(field, format!("times must be finite and non-negative, got {t}")))
            }
        };
        let values = |v: &[f64]| -> Result<TimeGrid, ConfigError> {
            if v.is_empty() {
                return Err(ConfigError::invalid("t", "empty time list"));
            }
            v.iter().map(|&t| check_time("t", t)).collect::<Result<_, _>>().map(TimeGrid::Values)
        };
        match &self.t {
            RawTime::Missing => Err(ConfigError::invalid("t", "no time or time grid given")),
            RawTime::Scalar(t) => values(&[*t]),
            RawTime::List(v) => values(v),
            RawTime::Grid(g) if g.values.is_some() => {
                if g.min.is_some() || g.max.is_some() || g.count.is_some() || g.scale.is_some() {
                    return Err(ConfigError::invalid("t.values", "explicit values exclude min/max/count/scale"));
                }
                values(g.values.as_deref().unwrap_or_default())
            }
            RawTime::Grid(g) => {
                let min = check_time("t.min", g.min.ok_or_else(|| ConfigError::invalid("t.min", "missing"))?)?;
                let max = check_time("t.max", g.max.unwrap_or(min))?;
                if min > max {
                    return Err(ConfigError::invalid("t.max", format!("max {max} is below min {min}")));
                }
                let count = match g.count {
                    Some(c) if c < 1 => return Err(ConfigError::invalid("t.count", format!("must be at least 1, got {c}"))),
                    Some(c) => c as usize,
                    None if min == max => 1,
                    None => return Err(ConfigError::invalid("t.count", "missing")),
                };
                let scale = match g.scale.as_deref().map(str::to_ascii_lowercase).as_deref() {
                    None | Some("lin") => TimeScale::Lin,
                    Some("log") => TimeScale::Log,
                    Some(s) => return Err(ConfigError::invalid("t.scale", format!("expected lin or log, got {s:?}"))),
                };
                if scale == TimeScale::Log && min <= 0.0 {
                    return Err(ConfigError::invalid("t.min", "log grids need a positive minimum"));
                }
                Ok(TimeGrid::Range { min, max, count, scale })
            }
        }
    }

    pub fn into_sweep_config(self) -> Result<SweepConfig, ConfigError> {
        let process = self.process()?.ok_or_else(|| ConfigError::invalid("process", "missing"))?;
        let formalism = match self.formalism.as_deref() {
            None => FormalismChoice::Bp,
            Some(f) => f.parse().map_err(|_| ConfigError::invalid("formalism", format!("expected sg or bp, got {f:?}")))?,
        };
        let list = |field: &str, v: &Option<Vec<f64>>, default: f64, nonneg: bool| {
            let v = v.clone().unwrap_or_else(|| vec![default]);
            if v.is_empty() {
                return Err(ConfigError::invalid(field, "empty list"));
            }
            match v.iter().find(|x| !x.is_finite() || (nonneg && **x < 0.0)) {
                Some(x) => Err(ConfigError::invalid(field, format!("bad entry {x}"))),
                None => Ok(v),
            }
        };
        let alpha_sq = list("alpha_sq", &self.alpha_sq, 1.0, true)?;
        let theta = list("theta", &self.theta, 0.0, false)?;
        let g = self.g.unwrap_or(1.0);
        if !(g >= 0.0 && g.is_finite()) {
            return Err(ConfigError::invalid("g", format!("must be finite and non-negative, got {g}")));
        }
        let t = self.time_grid()?;
        if let Some(c) = &self.cutoffs {
            process.space(c).map_err(|e| ConfigError::invalid("cutoffs", e.to_string()))?;
        }
        Ok(SweepConfig {
            process,
            formalism,
            alpha_sq,
            theta,
            g,
            t,
            cutoffs: self.cutoffs.clone(),
            tolerances: self.tolerances()?,
            output: self.output.clone(),
            coefficients: self.coefficients()?,
        })
    }

    pub fn into_verify_config(self) -> Result<VerifyConfig, ConfigError> {
        let processes = match self.process()? {
            Some(p) => vec![p],
            None => ProcessKind::ALL.to_vec(),
        };
        Ok(VerifyConfig {
            processes,
            tolerances: self.tolerances()?,
            output: self.output.clone(),
            coefficients: self.coefficients()?,
        })
    }
}
