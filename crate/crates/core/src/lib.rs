//! Prime-indexed almost-disjoint families of natural numbers and the dyadic
//! embedding they induce.
//!
//! For a rational `t` in `(0, 1)` the family picks `e_j(t)`, the largest
//! prime not exceeding `t^-j` (or 2 when `t^-j < 2`), and collects the
//! partial products `f_j(t) = e_1(t) ... e_j(t)` into the infinite set
//! `N_t`. Two distinct parameters share only finitely many products, and
//! [`family::intersection_certificate`] computes that finite intersection
//! exactly. Mapping `t` to `x_t = sum over n in N_t of 2^-n e_n` in a
//! coordinate sequence space gives an injective embedding whose image is
//! linearly independent; [`measure`] samples it to exercise the induced
//! pushforward measure.
//!
//! Everything is exact: big naturals for products, exponent sets for dyadic
//! coefficients, and cross-multiplied integer comparisons instead of floats.

pub mod cli;
pub mod dyadic;
pub mod embedding;
pub mod error;
pub mod family;
mod json;
pub mod measure;
pub mod primes;
pub mod rational;
pub mod verify;

pub use dyadic::Dyadic;
pub use embedding::{DyadicVector, IndependenceWitness, LimitKind};
pub use error::{Error, Result};
pub use family::{AlgebraicPoint, FamilyPrefix, IntersectionCertificate};
pub use primes::{GapStats, PrimeOracle};
pub use rational::Rat;

/// Default maximum family depth and certificate search depth.
pub const DEFAULT_DEPTH_CAP: usize = 64;
/// Default maximum bit length of any product `f_j`.
pub const DEFAULT_BIT_CEILING: u64 = 1 << 20;

/// Resource caps applied by every operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub depth_cap: usize,
    pub bit_ceiling: u64,
    pub sieve_ceiling: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            depth_cap: DEFAULT_DEPTH_CAP,
            bit_ceiling: DEFAULT_BIT_CEILING,
            sieve_ceiling: primes::DEFAULT_SIEVE_CEILING,
        }
    }
}

/// A prime oracle plus the caps it was configured with.
///
/// Cheap to share by reference across threads; all operations take `&Context`.
#[derive(Debug)]
pub struct Context {
    oracle: PrimeOracle,
    limits: Limits,
}

impl Default for Context {
    fn default() -> Self {
        Context::new(Limits::default())
    }
}

impl Context {
    pub fn new(limits: Limits) -> Self {
        Context {
            oracle: PrimeOracle::new(limits.sieve_ceiling),
            limits,
        }
    }

    pub fn oracle(&self) -> &PrimeOracle {
        &self.oracle
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }
}
