//! Brute-force reference computations, written without touching the fast
//! paths in `primes`, `family` or `embedding`.
//!
//! Primality is trial division up to 2^40 and an external BPSW test above;
//! powers of `t` go through `BigRational`; binary digits come from repeated
//! doubling.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rat;

const TRIAL_LIMIT: u64 = 1 << 40;

pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(n) if n < TRIAL_LIMIT => {
            if n < 2 {
                return false;
            }
            let mut d = 2u64;
            while d * d <= n {
                if n % d == 0 {
                    return false;
                }
                d += if d == 2 { 1 } else { 2 };
            }
            true
        }
        _ => num_prime::nt_funcs::is_prime(n, None).probably(),
    }
}

/// Largest prime `<= n` by downward scan; `n >= 2`.
pub fn prev_prime(n: &BigUint) -> BigUint {
    let mut c = n.clone();
    while !is_prime(&c) {
        c -= 1u32;
    }
    c
}

/// Smallest prime `> p` by upward scan.
pub fn succ_prime(p: &BigUint) -> BigUint {
    let mut c = p + 1u32;
    while !is_prime(&c) {
        c += 1u32;
    }
    c
}

pub fn to_rational(t: &Rat) -> BigRational {
    BigRational::new(BigInt::from(t.num().clone()), BigInt::from(t.den().clone()))
}

/// `e_j(t)` from `floor((1/t)^j)`; the floor is exact, so `t^-j = p` keeps `p`.
pub fn e_of(t: &Rat, j: u32) -> BigUint {
    let power = num_traits::pow(to_rational(t).recip(), j as usize);
    let floor = power.floor().to_integer();
    if floor < BigInt::from(2) {
        return BigUint::from(2u32);
    }
    prev_prime(&floor.to_biguint().expect("positive"))
}

/// `(e_1..e_depth, f_1..f_depth)` computed term by term.
pub fn family(t: &Rat, depth: u32) -> (Vec<BigUint>, Vec<BigUint>) {
    let e: Vec<BigUint> = (1..=depth).map(|j| e_of(t, j)).collect();
    let f = e
        .iter()
        .scan(BigUint::one(), |acc, p| {
            *acc *= p;
            Some(acc.clone())
        })
        .collect();
    (e, f)
}

/// All coincidences `f_u(t) = f_v(t')` within the given prefixes, as `(u, v, value)`.
pub fn collisions(f: &[BigUint], g: &[BigUint]) -> Vec<(usize, usize, BigUint)> {
    let mut out = Vec::new();
    for (u, a) in f.iter().enumerate() {
        for (v, b) in g.iter().enumerate() {
            if a == b {
                out.push((u + 1, v + 1, a.clone()));
            }
        }
    }
    out
}

pub fn intersection(f: &[BigUint], g: &[BigUint]) -> BTreeSet<BigUint> {
    collisions(f, g).into_iter().map(|(_, _, x)| x).collect()
}

/// Positions `n <= depth` of the 1 digits of `t` in base 2, by doubling.
pub fn binary_ones(t: &Rat, depth: usize) -> Vec<usize> {
    let mut x = to_rational(t);
    let one = BigRational::one();
    let mut out = Vec::new();
    for n in 1..=depth {
        x = &x + &x;
        if x >= one {
            out.push(n);
            x -= &one;
        }
    }
    out
}

/// `sum 2^-e` as a rational, with each exponent clamped to at most `cap`.
///
/// Clamping only increases the value, so a clamped sum below a bound proves
/// the true sum is below it.
pub fn clamped_dyadic_sum<'a>(exponents: impl IntoIterator<Item = &'a BigInt>, cap: u32) -> BigRational {
    let mut acc = BigRational::zero();
    for e in exponents {
        assert!(!e.is_negative(), "negative exponent");
        let e = e.to_u32().map_or(cap, |e| e.min(cap));
        acc += BigRational::new(BigInt::one(), BigInt::one() << e as usize);
    }
    acc
}

/// Exhaustive maximum of `(succ(p) - p) / p` over primes in `[lo, hi]`.
pub fn gap_max(lo: u64, hi: u64) -> Option<(BigRational, u64)> {
    let mut best: Option<(BigRational, u64)> = None;
    for p in lo..=hi {
        let pb = BigUint::from(p);
        if !is_prime(&pb) {
            continue;
        }
        let gap = succ_prime(&pb) - &pb;
        let ratio = BigRational::new(BigInt::from(gap), BigInt::from(p));
        if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
            best = Some((ratio, p));
        }
    }
    best
}
