//! JSON-friendly forms of exact numbers: integers become numbers when they
//! fit in `i64` and decimal strings otherwise; rationals become `"p/q"`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        int(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;
        impl Visitor<'_> for IntVisitor {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                BigInt::from_str(v.trim()).map(Int).map_err(|_| E::custom(format!("{v:?} is not an integer")))
            }
        }
        d.deserialize_any(IntVisitor)
    }
}

pub fn int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(small) => s.serialize_i64(small),
        None => s.serialize_str(&v.to_string()),
    }
}

pub fn int_pair<S: Serializer>(v: &(BigInt, BigInt), s: S) -> Result<S::Ok, S::Error> {
    (Int(v.0.clone()), Int(v.1.clone())).serialize(s)
}

pub fn rational<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        None => BigInt::from_str(text).ok().map(BigRational::from_integer),
        Some((p, q)) => {
            let (p, q) = (BigInt::from_str(p.trim()).ok()?, BigInt::from_str(q.trim()).ok()?);
            (q != BigInt::from(0)).then(|| BigRational::new(p, q))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let small: Int = serde_json::from_str("-7").unwrap();
        assert_eq!(small.0, BigInt::from(-7));
        let big: Int = serde_json::from_str("\"123456789012345678901234567890\"").unwrap();
        assert_eq!(serde_json::to_string(&big).unwrap(), "\"123456789012345678901234567890\"");
        assert_eq!(serde_json::to_string(&small).unwrap(), "-7");
        assert!(serde_json::from_str::<Int>("\"x\"").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/-6").unwrap().to_string(), "-1/2");
        assert_eq!(parse_rational("4").unwrap().to_string(), "4");
        assert!(parse_rational("1/0").is_none());
    }
}
