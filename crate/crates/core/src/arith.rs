//! Integer and rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(v: &Int) -> Rat {
    BigRational::from_integer(v.clone())
}

/// Ceiling of an exact rational.
pub fn ceil(q: &Rat) -> Int {
    q.numer().div_ceil(q.denom())
}

/// `n choose k` for small arguments.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// Parses `"p/q"`, `"p"` or a decimal integer into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().map_err(|_| bad())?;
            let q: Int = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Integers within +-(2^53 - 1) serialize as JSON numbers, larger ones as
/// decimal strings.
pub mod json_int {
    use super::*;

    const SAFE: i64 = (1 << 53) - 1;

    pub fn to_value(v: &Int) -> serde_json::Value {
        match v.to_i64() {
            Some(x) if x.abs() <= SAFE => serde_json::Value::from(x),
            _ => serde_json::Value::from(v.to_string()),
        }
    }

    pub fn from_value(v: &serde_json::Value) -> Result<Int> {
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Int::from)
                .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
            serde_json::Value::String(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
            other => Err(Error::Parse(format!("not an integer: {other}"))),
        }
    }

    pub fn serialize<S: Serializer>(v: &Int, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) if x.abs() <= SAFE => s.serialize_i64(x),
            _ => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Int, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Int;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Int, E> {
                Ok(Int::from(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Int, E> {
                Ok(Int::from(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Int, E> {
                v.trim().parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_handles_signs() {
        assert_eq!(ceil(&rat(1, 2)), int(1));
        assert_eq!(ceil(&rat(-1, 2)), int(0));
        assert_eq!(ceil(&rat(-3, 2)), int(-1));
        assert_eq!(ceil(&rat(4, 2)), int(2));
    }

    #[test]
    fn rationals_parse_and_print() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-7").unwrap(), rat(-7, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&rat(-2, 4)), "-1/2");
        assert_eq!(format_rat(&rat(6, 3)), "2");
    }

    #[test]
    fn large_integers_become_strings() {
        let big: Int = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(json_int::to_value(&big), serde_json::json!("123456789012345678901234567890"));
        assert_eq!(json_int::to_value(&int(-5)), serde_json::json!(-5));
        assert_eq!(json_int::from_value(&json_int::to_value(&big)).unwrap(), big);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 3), int(35));
        assert_eq!(binomial(4, 5), int(0));
    }
}
