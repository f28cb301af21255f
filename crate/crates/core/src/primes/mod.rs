//! Prime predecessor / successor queries and prime-gap statistics.
//!
//! [`PrimeOracle`] keeps a sieved table that grows on demand by doubling.
//! Queries above the materialized table but below the sieve ceiling are
//! answered by sieving a local window; above the ceiling we scan with
//! [`is_prime_big`].

mod primality;
mod sieve;

use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use primality::{is_prime_big, is_prime_u64};
use primality::SMALL_PRIMES;

/// Default ceiling below which answers always come from a sieve.
pub const DEFAULT_SIEVE_CEILING: u64 = 1 << 32;

/// Largest table the oracle materializes; beyond it we sieve windows.
const TABLE_MAX: u64 = 1 << 26;
const MAX_SIEVE_CEILING: u64 = 1 << 52;
const INITIAL_LIMIT: u64 = 1 << 16;
const WINDOW: u64 = 1 << 15;

struct Table {
    limit: u64,
    primes: Vec<u32>,
}

impl Table {
    fn build(limit: u64) -> Self {
        Table {
            limit,
            primes: sieve::primes_up_to(limit),
        }
    }

    /// Largest prime `<= n`; `n` must lie within the table.
    fn prev(&self, n: u64) -> Option<u64> {
        debug_assert!(n <= self.limit);
        let idx = self.primes.partition_point(|&p| p as u64 <= n);
        idx.checked_sub(1).map(|i| self.primes[i] as u64)
    }

    /// Smallest prime `> n`, if the table holds one.
    fn next(&self, n: u64) -> Option<u64> {
        let idx = self.primes.partition_point(|&p| p as u64 <= n);
        self.primes.get(idx).map(|&p| p as u64)
    }
}

/// Shared, growable source of prime answers.
///
/// Reads never block on each other; growth builds the new table off-lock and
/// swaps it in, so a reader sees either the old table or the new one.
pub struct PrimeOracle {
    ceiling: u64,
    table: RwLock<Arc<Table>>,
}

impl Default for PrimeOracle {
    fn default() -> Self {
        PrimeOracle::new(DEFAULT_SIEVE_CEILING)
    }
}

impl std::fmt::Debug for PrimeOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimeOracle")
            .field("ceiling", &self.ceiling)
            .field("sieve_limit", &self.sieve_limit())
            .finish()
    }
}

impl PrimeOracle {
    /// `sieve_ceiling` is clamped to `[2, 2^52]` so that windowed sieving
    /// never needs base primes beyond the largest materialized table.
    pub fn new(sieve_ceiling: u64) -> Self {
        let ceiling = sieve_ceiling.clamp(2, MAX_SIEVE_CEILING);
        let initial = INITIAL_LIMIT.min(ceiling);
        PrimeOracle {
            ceiling,
            table: RwLock::new(Arc::new(Table::build(initial))),
        }
    }

    pub fn sieve_ceiling(&self) -> u64 {
        self.ceiling
    }

    /// Largest integer currently covered by the materialized table.
    pub fn sieve_limit(&self) -> u64 {
        self.snapshot().limit
    }

    fn table_max(&self) -> u64 {
        TABLE_MAX.min(self.ceiling)
    }

    fn snapshot(&self) -> Arc<Table> {
        Arc::clone(&self.table.read().expect("prime table lock poisoned"))
    }

    /// Table covering at least `n` (`n <= table_max`).
    fn table_covering(&self, n: u64) -> Arc<Table> {
        let current = self.snapshot();
        if current.limit >= n {
            return current;
        }
        let mut limit = current.limit.max(1);
        while limit < n {
            limit = limit.saturating_mul(2);
        }
        let grown = Arc::new(Table::build(limit.min(self.table_max())));
        let mut guard = self.table.write().expect("prime table lock poisoned");
        if guard.limit < grown.limit {
            *guard = Arc::clone(&grown);
        }
        Arc::clone(&guard)
    }

    /// All primes in `[lo, hi]` with `hi <= sieve_ceiling`.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Result<Vec<u64>> {
        if hi > self.ceiling {
            return Err(Error::resource(format!(
                "range end {hi} exceeds the sieve ceiling {}",
                self.ceiling
            )));
        }
        if hi <= self.table_max() {
            let table = self.table_covering(hi);
            let start = table.primes.partition_point(|&p| (p as u64) < lo);
            return Ok(table.primes[start..]
                .iter()
                .map(|&p| p as u64)
                .take_while(|&p| p <= hi)
                .collect());
        }
        let base = self.table_covering(hi.isqrt() + 1);
        let mut out = Vec::new();
        let mut start = lo;
        while start <= hi {
            let end = start.saturating_add(WINDOW - 1).min(hi);
            out.extend(sieve::primes_in_window(start, end, &base.primes));
            if end == hi {
                break;
            }
            start = end + 1;
        }
        Ok(out)
    }

    fn prev_prime_sieved(&self, n: u64) -> u64 {
        if n <= self.table_max() {
            return self
                .table_covering(n)
                .prev(n)
                .expect("n >= 2 always has a prime below it");
        }
        let base = self.table_covering(n.isqrt() + 1);
        let mut hi = n;
        loop {
            let lo = hi.saturating_sub(WINDOW - 1);
            if let Some(&p) = sieve::primes_in_window(lo, hi, &base.primes).last() {
                return p;
            }
            hi = lo - 1;
        }
    }

    /// Smallest prime `> n` found by sieving, or `None` if it lies past the ceiling.
    fn succ_prime_sieved(&self, n: u64) -> Option<u64> {
        if n < self.table_max() {
            // Bertrand: a prime lies in (n, 2n]
            let table = self.table_covering((2 * n + 2).min(self.table_max()));
            if let Some(p) = table.next(n) {
                return Some(p);
            }
        }
        let base = self.table_covering(self.ceiling.isqrt() + 1);
        let mut lo = n + 1;
        while lo <= self.ceiling {
            let hi = lo.saturating_add(WINDOW - 1).min(self.ceiling);
            if let Some(&p) = sieve::primes_in_window(lo, hi, &base.primes).first() {
                return Some(p);
            }
            if hi == self.ceiling {
                break;
            }
            lo = hi + 1;
        }
        None
    }

    /// Largest prime `<= n`.
    pub fn prev_prime(&self, n: &BigUint) -> Result<BigUint> {
        match n.to_u64() {
            Some(small) if small < 2 => Err(Error::domain(format!(
                "prev_prime requires n >= 2, got {small}"
            ))),
            Some(small) if small <= self.ceiling => Ok(BigUint::from(self.prev_prime_sieved(small))),
            _ => Ok(scan_down(n, self.ceiling, |c| self.prev_prime_sieved(c))),
        }
    }

    /// Smallest prime strictly greater than `p`.
    pub fn succ_prime(&self, p: &BigUint) -> Result<BigUint> {
        if let Some(small) = p.to_u64() {
            if small < 2 {
                return Err(Error::domain(format!(
                    "succ_prime requires p >= 2, got {small}"
                )));
            }
            if small < self.ceiling {
                if let Some(q) = self.succ_prime_sieved(small) {
                    return Ok(BigUint::from(q));
                }
            }
        }
        Ok(scan_up(p))
    }

    pub fn prev_prime_u64(&self, n: u64) -> Result<u64> {
        self.prev_prime(&BigUint::from(n))
            .map(|p| p.to_u64().expect("prev_prime(n) <= n"))
    }

    pub fn succ_prime_u64(&self, p: u64) -> Result<BigUint> {
        self.succ_prime(&BigUint::from(p))
    }

    pub fn is_prime(&self, n: &BigUint) -> bool {
        match n.to_u64() {
            Some(small) if small <= self.sieve_limit() => {
                small >= 2 && self.snapshot().prev(small) == Some(small)
            }
            _ => is_prime_big(n),
        }
    }

    /// Maximum of `(succ(p) - p) / p` over primes `p` in `[lo, hi]`.
    ///
    /// Ties resolve to the smallest `p`.
    pub fn gap_stats(&self, lo: u64, hi: u64) -> Result<GapStats> {
        if lo < 2 || lo >= hi {
            return Err(Error::domain(format!(
                "gap_stats requires 2 <= lo < hi, got [{lo}, {hi}]"
            )));
        }
        let primes = self.primes_in(lo, hi)?;
        let Some(&last) = primes.last() else {
            return Err(Error::domain(format!("no primes in [{lo}, {hi}]")));
        };
        let after = self
            .succ_prime_u64(last)?
            .to_u64()
            .ok_or_else(|| Error::resource("successor prime exceeds u64"))?;
        let mut best: Option<(Ratio<u64>, u64)> = None;
        for (i, &p) in primes.iter().enumerate() {
            let next = primes.get(i + 1).copied().unwrap_or(after);
            let ratio = Ratio::new(next - p, p);
            if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
                best = Some((ratio, p));
            }
        }
        let (max_ratio, argmax_p) = best.expect("non-empty");
        Ok(GapStats {
            range_lo: lo,
            range_hi: hi,
            max_ratio,
            argmax_p,
        })
    }
}

/// Result of [`PrimeOracle::gap_stats`]; `max_ratio` is stored reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapStats {
    pub range_lo: u64,
    pub range_hi: u64,
    pub max_ratio: Ratio<u64>,
    pub argmax_p: u64,
}

impl Serialize for GapStats {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("GapStats", 5)?;
        s.serialize_field("lo", &self.range_lo)?;
        s.serialize_field("hi", &self.range_hi)?;
        s.serialize_field("max_ratio_num", self.max_ratio.numer())?;
        s.serialize_field("max_ratio_den", self.max_ratio.denom())?;
        s.serialize_field("argmax_p", &self.argmax_p)?;
        s.end()
    }
}

/// Residues of `n` modulo the small trial primes, used to skip obvious composites.
struct Residues {
    moduli: &'static [u32],
    rems: Vec<u32>,
}

impl Residues {
    fn of(n: &BigUint) -> Self {
        Residues {
            moduli: &SMALL_PRIMES,
            rems: SMALL_PRIMES
                .iter()
                .map(|&q| (n % q).to_u32().expect("remainder fits"))
                .collect(),
        }
    }

    /// Whether `n + offset` (offset may be negative) has a small factor.
    fn has_small_factor(&self, offset: i64) -> bool {
        self.moduli.iter().zip(&self.rems).any(|(&q, &r)| {
            let q = q as i64;
            (r as i64 + offset).rem_euclid(q) == 0
        })
    }
}

fn scan_down(n: &BigUint, ceiling: u64, sieved: impl Fn(u64) -> u64) -> BigUint {
    let residues = Residues::of(n);
    let mut candidate = n.clone();
    let mut offset = 0i64;
    if !candidate.bit(0) && candidate != BigUint::from(2u32) {
        candidate -= 1u32;
        offset -= 1;
    }
    loop {
        if let Some(small) = candidate.to_u64() {
            if small <= ceiling {
                return BigUint::from(sieved(small));
            }
        }
        let tiny = candidate.to_u32().is_some_and(|c| c <= 283);
        if (tiny || !residues.has_small_factor(offset)) && is_prime_big(&candidate) {
            return candidate;
        }
        candidate -= 2u32;
        offset -= 2;
    }
}

fn scan_up(p: &BigUint) -> BigUint {
    let residues = Residues::of(p);
    let mut candidate = p + BigUint::one();
    let mut offset = 1i64;
    if !candidate.bit(0) {
        candidate += 1u32;
        offset += 1;
    }
    loop {
        let tiny = candidate.to_u32().is_some_and(|c| c <= 283);
        if (tiny || !residues.has_small_factor(offset)) && is_prime_big(&candidate) {
            return candidate;
        }
        candidate += 2u32;
        offset += 2;
    }
}
