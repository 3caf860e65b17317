use std::fmt;

/// A real-valued result that may be undefined (zero denominator).
///
/// Undefined values propagate: arithmetic helpers never coerce them to a
/// number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Value(f64),
    Undefined,
}

impl Param {
    /// `num / den`, undefined when `|den| < floor`.
    pub fn ratio(num: f64, den: f64, floor: f64) -> Self {
        if den.abs() < floor || !den.is_finite() {
            Param::Undefined
        } else {
            Param::Value(num / den)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Param::Value(v) => Some(v),
            Param::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, Param::Value(_))
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            Param::Value(v) => Param::Value(f(v)),
            Param::Undefined => Param::Undefined,
        }
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Value(v)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Value(v) => write!(f, "{v}"),
            Param::Undefined => f.write_str("undef"),
        }
    }
}
