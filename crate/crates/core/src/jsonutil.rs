//! Serde helpers: integers serialize as JSON numbers when they fit in i64,
//! otherwise as decimal strings. Deserialization accepts both.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::str::FromStr;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    pub fn from_bigint(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Big(x.to_string()),
        }
    }

    pub fn to_bigint(&self) -> Result<BigInt, String> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(t) => BigInt::from_str(t.trim()).map_err(|e| e.to_string()),
        }
    }

    pub fn from_ratio(x: &BigRational) -> Self {
        if x.is_integer() {
            IntRepr::from_bigint(x.numer())
        } else {
            IntRepr::Big(format!("{}/{}", x.numer(), x.denom()))
        }
    }

    pub fn to_ratio(&self) -> Result<BigRational, String> {
        match self {
            IntRepr::Small(v) => Ok(BigRational::from_integer(BigInt::from(*v))),
            IntRepr::Big(t) => {
                let t = t.trim();
                match t.split_once('/') {
                    Some((p, q)) => {
                        let p = BigInt::from_str(p.trim()).map_err(|e| e.to_string())?;
                        let q = BigInt::from_str(q.trim()).map_err(|e| e.to_string())?;
                        if q == BigInt::from(0) {
                            return Err("zero denominator".into());
                        }
                        Ok(BigRational::new(p, q))
                    }
                    None => Ok(BigRational::from_integer(
                        BigInt::from_str(t).map_err(|e| e.to_string())?,
                    )),
                }
            }
        }
    }
}

pub fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => IntRepr::Small(v).serialize(s),
        None => IntRepr::Big(x.to_string()).serialize(s),
    }
}

pub fn de_bigint<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    match IntRepr::deserialize(d)? {
        IntRepr::Small(v) => Ok(BigInt::from(v)),
        IntRepr::Big(t) => BigInt::from_str(t.trim()).map_err(DeError::custom),
    }
}

/// Rationals serialize as `"p/q"` strings (or a bare integer when q = 1).
pub fn ser_ratio<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    if x.is_integer() {
        ser_bigint(x.numer(), s)
    } else {
        format!("{}/{}", x.numer(), x.denom()).serialize(s)
    }
}

pub fn de_ratio<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    match IntRepr::deserialize(d)? {
        IntRepr::Small(v) => Ok(BigRational::from_integer(BigInt::from(v))),
        IntRepr::Big(t) => {
            let t = t.trim();
            match t.split_once('/') {
                Some((p, q)) => {
                    let p = BigInt::from_str(p.trim()).map_err(DeError::custom)?;
                    let q = BigInt::from_str(q.trim()).map_err(DeError::custom)?;
                    if q == BigInt::from(0) {
                        return Err(DeError::custom("zero denominator"));
                    }
                    Ok(BigRational::new(p, q))
                }
                None => Ok(BigRational::from_integer(
                    BigInt::from_str(t).map_err(DeError::custom)?,
                )),
            }
        }
    }
}

pub mod bigint {
    pub use super::{de_bigint as deserialize, ser_bigint as serialize};
}

pub mod ratio {
    pub use super::{de_ratio as deserialize, ser_ratio as serialize};
}

pub mod bigint_vec {
    use super::*;
    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<IntRepr> = v
            .iter()
            .map(|x| match x.to_i64() {
                Some(n) => IntRepr::Small(n),
                None => IntRepr::Big(x.to_string()),
            })
            .collect();
        reprs.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let reprs: Vec<IntRepr> = Vec::deserialize(d)?;
        reprs
            .into_iter()
            .map(|r| match r {
                IntRepr::Small(v) => Ok(BigInt::from(v)),
                IntRepr::Big(t) => BigInt::from_str(t.trim()).map_err(DeError::custom),
            })
            .collect()
    }
}

pub mod bigint_mat {
    use super::*;
    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<Vec<IntRepr>> = v
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| match x.to_i64() {
                        Some(n) => IntRepr::Small(n),
                        None => IntRepr::Big(x.to_string()),
                    })
                    .collect()
            })
            .collect();
        reprs.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let reprs: Vec<Vec<IntRepr>> = Vec::deserialize(d)?;
        reprs
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|r| match r {
                        IntRepr::Small(v) => Ok(BigInt::from(v)),
                        IntRepr::Big(t) => BigInt::from_str(t.trim()).map_err(DeError::custom),
                    })
                    .collect()
            })
            .collect()
    }
}

pub mod bigint_pairs {
    use super::*;
    pub fn serialize<S: Serializer>(v: &[(BigInt, BigInt)], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<BigInt>> = v.iter().map(|(a, b)| vec![a.clone(), b.clone()]).collect();
        super::bigint_mat::serialize(&rows, s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigInt, BigInt)>, D::Error> {
        let rows = super::bigint_mat::deserialize(d)?;
        rows.into_iter()
            .map(|row| {
                if row.len() != 2 {
                    Err(DeError::custom("expected [lo, hi] pair"))
                } else {
                    let mut it = row.into_iter();
                    Ok((it.next().unwrap(), it.next().unwrap()))
                }
            })
            .collect()
    }
}
