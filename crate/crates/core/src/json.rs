//! Serialization helpers for arbitrary-precision naturals.
//!
//! Products and exponents go out as decimal strings. Primes go out as JSON
//! integer literals of unbounded length.

use num_bigint::BigUint;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serializer};

fn number(n: &BigUint) -> serde_json::Number {
    serde_json::Number::from_string_unchecked(n.to_string())
}

pub(crate) mod prime {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&number(n), s)
    }
}

pub(crate) mod primes {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for n in v {
            seq.serialize_element(&number(n))?;
        }
        seq.end()
    }
}

pub(crate) mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

pub(crate) mod decimal_opt {
    use super::*;

    pub fn serialize<S: Serializer>(n: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match n {
            Some(n) => s.collect_str(n),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub(crate) mod decimals {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for n in v {
            seq.serialize_element(&n.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}
