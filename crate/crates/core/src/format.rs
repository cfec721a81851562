//! Deterministic number formatting for reports: 17 significant digits in
//! JSON, 12 in CSV, always scientific so output never depends on magnitude
//! heuristics.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub const JSON_DIGITS: usize = 17;
pub const CSV_DIGITS: usize = 12;

/// Scientific notation with `digits` significant digits; `NaN`/`inf` spelled out.
pub fn sci(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
}

pub fn csv_num(x: f64) -> String {
    sci(x, CSV_DIGITS)
}

/// A float serialized as a JSON number with 17 significant digits (or `null`
/// when not finite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(sci(self.0, JSON_DIGITS)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl From<f64> for Sig17 {
    fn from(x: f64) -> Self {
        Sig17(x)
    }
}

pub fn sig17_vec(xs: &[f64]) -> Vec<Sig17> {
    xs.iter().copied().map(Sig17).collect()
}

/// `serialize_with` helpers so report structs can keep plain `f64` fields.
pub mod ser {
    use super::Sig17;
    use serde::{Serialize, Serializer};

    pub fn f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        Sig17(*x).serialize(s)
    }

    pub fn opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        x.map(Sig17).serialize(s)
    }

    pub fn vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        super::sig17_vec(xs).serialize(s)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
