//! Floats written with 17 significant digits, which is enough for every
//! `f64` to read back bit for bit.

use serde::de::{Deserialize, Deserializer};
use serde::ser::{Error as _, Serialize, Serializer};
use serde_json::value::RawValue;

/// `x` in scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// An `f64` that serializes through [`fmt17`]; non-finite values become
/// `null` and read back as NaN.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt17(self.0)).map_err(S::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for F17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(F17(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN)))
    }
}

impl From<f64> for F17 {
    fn from(x: f64) -> Self {
        F17(x)
    }
}

/// A point as `[x, y]`.
pub type Pair = [F17; 2];

pub fn pair(x: f64, y: f64) -> Pair {
    [F17(x), F17(y)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        let values = [
            0.1,
            1.0 / 3.0,
            std::f64::consts::PI,
            -2.5e-300,
            f64::MIN_POSITIVE,
            f64::MAX,
            5e-324,
            0.0,
            -0.0,
            0.288_788_095_086_602_4,
        ];
        for x in values {
            let s = fmt17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
            let json = serde_json::to_string(&F17(x)).unwrap();
            assert_eq!(json, s);
            let parsed: F17 = serde_json::from_str(&json).unwrap();
            assert_eq!(parsed.0.to_bits(), x.to_bits(), "{json}");
        }
        assert_eq!(fmt17(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn non_finite_values() {
        assert_eq!(serde_json::to_string(&F17(f64::INFINITY)).unwrap(), "null");
        let back: F17 = serde_json::from_str("null").unwrap();
        assert!(back.0.is_nan());
        assert_eq!(fmt17(f64::NEG_INFINITY), "-inf");
    }
}
