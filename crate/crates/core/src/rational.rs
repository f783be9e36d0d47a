//! Exact rationals and their string encoding (`"p/q"`, `"p"`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serializer};

use crate::error::Error;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

pub fn half() -> Q {
    qr(1, 2)
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"`.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let t = s.trim();
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidRational(s.to_string()));
        }
        let neg = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let num = BigInt::from_str(&digits).map_err(|_| Error::InvalidRational(s.to_string()))?;
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        let v = Q::new(num, den);
        return Ok(if neg { -v } else { v });
    }
    Q::from_str(t).map_err(|_| Error::InvalidRational(s.to_string()))
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // very large numerator/denominator: fall back to a scaled quotient
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact binary rational nearest below `x` with denominator `2^bits`.
pub fn from_f64_floor(x: f64, bits: u32) -> Q {
    let scale = 2f64.powi(bits as i32);
    let n = (x * scale).floor();
    Q::new(BigInt::from(n as i64), BigInt::from(1i64 << bits))
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// Equality by components. Values are always kept reduced, so this agrees
/// with `==`; `Ratio`'s own `Eq` and `Hash` walk the continued fraction
/// recursively, which is slow and can exhaust the stack on large entries.
pub fn q_eq(a: &Q, b: &Q) -> bool {
    a.numer() == b.numer() && a.denom() == b.denom()
}

pub fn slice_eq(a: &[Q], b: &[Q]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| q_eq(x, y))
}

pub fn hash_slice<H: std::hash::Hasher>(v: &[Q], h: &mut H) {
    use std::hash::Hash;
    v.len().hash(h);
    for x in v {
        x.numer().hash(h);
        x.denom().hash(h);
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Serde adapter for a single rational: written as `"p/q"`, read from a
/// string or a JSON integer.
pub mod q_serde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_q(&s).map_err(de::Error::custom),
            Raw::Int(i) => Ok(q(i)),
        }
    }
}

pub mod vec_serde {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&fmt_q(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "super::q_serde")] Q);
        let raw: Vec<W> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|w| w.0).collect())
    }
}

pub mod mat_serde {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.len()))?;
        for row in m {
            let strs: Vec<String> = row.iter().map(fmt_q).collect();
            seq.serialize_element(&strs)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        #[derive(Deserialize)]
        struct Row(#[serde(with = "super::vec_serde")] Vec<Q>);
        let raw: Vec<Row> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|r| r.0).collect())
    }
}
