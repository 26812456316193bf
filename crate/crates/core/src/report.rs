//! Serialization helpers shared by every report type.

use std::fmt::Display;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

/// Version tag carried at the top of every JSON document.
pub const SCHEMA_VERSION: &str = "1";

/// A report wrapped with the schema version.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: &'static str,
    pub command: &'a str,
    #[serde(flatten)]
    pub body: &'a T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'a str, body: &'a T) -> Self {
        Self { schema: SCHEMA_VERSION, command, body }
    }
}

/// Any `Display` value as a JSON string (big integers).
pub fn display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// A rational as `{"num": "...", "den": "..."}`.
pub fn rational<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    RationalRepr(v).serialize(s)
}

pub fn option_rational<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => RationalRepr(r).serialize(s),
        None => s.serialize_none(),
    }
}

pub fn rationals<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&RationalRepr(r))?;
    }
    seq.end()
}

/// Wrapper serializing a rational in the `{num, den}` form.
pub struct RationalRepr<'a>(pub &'a BigRational);

impl Serialize for RationalRepr<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("num", &self.0.numer().to_string())?;
        map.serialize_entry("den", &self.0.denom().to_string())?;
        map.end()
    }
}

/// Finite floats as numbers, infinities and NaN as strings.
pub fn real<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// `(prime, exponent)` lists with the prime as a decimal string.
pub fn prime_powers<S: Serializer>(v: &[(BigUint, u32)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (q, e) in v {
        seq.serialize_element(&(q.to_string(), e))?;
    }
    seq.end()
}

pub fn bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[derive(Serialize)]
    struct Sample {
        #[serde(serialize_with = "rational")]
        r: BigRational,
        #[serde(serialize_with = "real")]
        x: f64,
        #[serde(serialize_with = "real")]
        y: f64,
    }

    #[test]
    fn rationals_and_infinities() {
        let v = Sample { r: BigRational::new(5.into(), 6.into()), x: f64::INFINITY, y: 0.5 };
        let text = serde_json::to_string(&Envelope::new("t", &v)).unwrap();
        assert_eq!(text, r#"{"schema":"1","command":"t","r":{"num":"5","den":"6"},"x":"inf","y":0.5}"#);
        let big = BigRational::from_i64(-3).unwrap() / BigRational::from_i64(9).unwrap();
        assert_eq!(serde_json::to_string(&RationalRepr(&big)).unwrap(), r#"{"num":"-1","den":"3"}"#);
    }
}
