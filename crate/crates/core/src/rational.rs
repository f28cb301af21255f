//! Exact sample points of the open unit interval.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced rational `num/den` with `0 < num < den`.
///
/// Written `A/B` everywhere it crosses a text boundary (command line and JSON).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rat {
    num: BigUint,
    den: BigUint,
}

impl Rat {
    /// Builds and reduces `num/den`, rejecting values outside `(0, 1)`.
    pub fn new(num: BigUint, den: BigUint) -> Result<Self> {
        if num.is_zero() || den.is_zero() || num >= den {
            return Err(Error::domain(format!(
                "t = {num}/{den} is not in the open interval (0,1)"
            )));
        }
        let g = num.gcd(&den);
        Ok(Rat {
            num: num / &g,
            den: den / g,
        })
    }

    pub fn from_u64(num: u64, den: u64) -> Result<Self> {
        Rat::new(BigUint::from(num), BigUint::from(den))
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    /// True when the denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        let d = &self.den;
        (d & (d - BigUint::one())).is_zero()
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::domain(format!("expected A/B, got {s:?}")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<BigUint>()
                .map_err(|_| Error::domain(format!("bad integer {x:?} in {s:?}")))
        };
        Rat::new(parse(a)?, parse(b)?)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
