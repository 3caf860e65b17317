//! Output rows and their CSV encoding.

use std::io::Write;

use phasefluct_core::{FormalismChoice, Param, ProcessKind};

/// Column order of every CSV written by `point` and `sweep`.
pub const COLUMNS: [&str; 28] = [
    "process",
    "formalism",
    "alpha_sq",
    "theta",
    "g",
    "t",
    "gt",
    "N_bar",
    "var_N",
    "d",
    "mean_C",
    "mean_S",
    "mean_C2",
    "mean_S2",
    "var_C",
    "var_S",
    "T",
    "U",
    "S_param",
    "Q",
    "U_formula",
    "S_formula",
    "Q_formula",
    "d_formula",
    "rel_err_U",
    "validity_flag",
    "leakage",
    "error",
];

pub const UNDEF: &str = "undef";

/// Fixed 17-significant-digit rendering; non-finite values become `undef`.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        UNDEF.to_string()
    }
}

pub fn format_param(p: Param) -> String {
    p.value().map_or_else(|| UNDEF.to_string(), format_number)
}

/// Exact-pipeline quantities of one row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactColumns {
    pub n_bar: f64,
    pub var_n: f64,
    pub d: f64,
    pub mean_c: f64,
    pub mean_s: f64,
    pub mean_c2: f64,
    pub mean_s2: f64,
    pub var_c: f64,
    pub var_s: f64,
    pub t_total: f64,
    pub u: Param,
    pub s_param: f64,
    pub q: Param,
    pub leakage: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormulaColumns {
    pub u: f64,
    pub s_param: f64,
    pub q: Param,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub process: ProcessKind,
    pub formalism: FormalismChoice,
    pub alpha_sq: f64,
    pub theta: f64,
    pub g: f64,
    pub t: f64,
    pub exact: Option<ExactColumns>,
    pub formula: FormulaColumns,
    pub rel_err_u: Param,
    pub validity_flag: bool,
    /// Set when the exact pipeline failed for this point.
    pub error: Option<String>,
}

impl SweepRecord {
    pub fn gt(&self) -> f64 {
        self.g * self.t
    }

    pub fn cells(&self) -> Vec<String> {
        let n = format_number;
        let mut row = vec![
            self.process.name().to_string(),
            self.formalism.name().to_string(),
            n(self.alpha_sq),
            n(self.theta),
            n(self.g),
            n(self.t),
            n(self.gt()),
        ];
        match &self.exact {
            Some(e) => row.extend([
                n(e.n_bar),
                n(e.var_n),
                n(e.d),
                n(e.mean_c),
                n(e.mean_s),
                n(e.mean_c2),
                n(e.mean_s2),
                n(e.var_c),
                n(e.var_s),
                n(e.t_total),
                format_param(e.u),
                n(e.s_param),
                format_param(e.q),
            ]),
            None => row.extend(std::iter::repeat(UNDEF.to_string()).take(13)),
        }
        row.extend([
            n(self.formula.u),
            n(self.formula.s_param),
            format_param(self.formula.q),
            n(self.formula.d),
            format_param(self.rel_err_u),
            u8::from(self.validity_flag).to_string(),
            self.exact.map_or_else(|| UNDEF.to_string(), |e| n(e.leakage)),
            self.error.clone().unwrap_or_default(),
        ]);
        row
    }
}

/// Header plus one line per record, comma separated, LF terminated.
pub fn write_csv<W: Write>(out: W, records: &[SweepRecord]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(COLUMNS)?;
    for r in records {
        w.write_record(r.cells())?;
    }
    w.flush()?;
    Ok(())
}
