//! Nonnegative dyadic rationals held as finite binary expansions.
//!
//! A value is the sum of `2^-e` over a set of distinct exponents `e`, so
//! coefficients such as `2^-546` or `2^-(f_9 - 1)` are never materialized.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Exponents whose magnitude exceeds this are not expanded by [`Dyadic::to_rational`].
const RATIONAL_EXPONENT_LIMIT: i64 = 1 << 20;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Dyadic {
    // distinct exponents; ascending order = descending term size
    exps: BTreeSet<BigInt>,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic::default()
    }

    /// `2^-e`.
    pub fn pow2_neg(e: impl Into<BigInt>) -> Self {
        let mut d = Dyadic::zero();
        d.add_pow2_neg(e.into());
        d
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    /// Adds `2^-e`, carrying so exponents stay distinct.
    pub fn add_pow2_neg(&mut self, mut e: BigInt) {
        while self.exps.remove(&e) {
            e -= 1;
        }
        self.exps.insert(e);
    }

    pub fn sum<'a>(exponents: impl IntoIterator<Item = &'a BigUint>) -> Self {
        let mut d = Dyadic::zero();
        for e in exponents {
            d.add_pow2_neg(BigInt::from(e.clone()));
        }
        d
    }

    /// The exponents of the canonical expansion, largest term first.
    pub fn exponents(&self) -> impl Iterator<Item = &BigInt> {
        self.exps.iter()
    }

    /// Exact rational value, when every exponent is small enough to expand.
    pub fn to_rational(&self) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for e in &self.exps {
            let e = e.to_i64().filter(|e| e.abs() <= RATIONAL_EXPONENT_LIMIT)?;
            let pow = BigRational::from_integer(BigInt::one() << e.unsigned_abs() as usize);
            acc += if e >= 0 { pow.recip() } else { pow };
        }
        Some(acc)
    }
}

impl std::ops::Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let mut out = self.clone();
        for e in &rhs.exps {
            out.add_pow2_neg(e.clone());
        }
        out
    }
}

impl Ord for Dyadic {
    /// Canonical expansions compare lexicographically: at the first differing
    /// term, the side holding the larger power of two is larger.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.exps.iter();
        let mut b = other.exps.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    // smaller exponent = bigger term
                    ord => return ord.reverse(),
                },
            }
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.exps.iter().map(|e| e.to_string()))
    }
}
