//! Named, seedable property suites binding every invariant of the crate to
//! a brute-force check. Each suite is pure given `(seed, scale)`.

pub mod oracle;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::embedding::{
    coordinate_pairing, embed, independence_witness, l1_norm_bounds, limit_point,
    powers_of_two_run, LimitKind,
};
use crate::error::{Error, Result};
use crate::family::{self, e_at_algebraic, e_of, family_prefix, AlgebraicPoint};
use crate::measure::{self, SamplerConfig};
use crate::rational::Rat;
use crate::{Context, Limits};

pub const SUITES: [&str; 8] = [
    "family-oracle",
    "intersection",
    "monotonicity",
    "witness",
    "norms",
    "limits",
    "gap",
    "measure",
];

/// Largest `(succ(p) - p) / p` over primes in `[10^3, 10^6]`, from an
/// independent sieve run: the gap 1327 -> 1361.
pub const GAP_MAX_1E3_1E6: (u64, u64, u64) = (34, 1327, 1327);

/// Search depth for witness sets, whose points may crowd near 1.
pub const WITNESS_DEPTH_CAP: usize = 4096;

/// Basis for the annihilation experiment: five non-dyadic rationals.
pub const NON_DYADIC_BASIS: [&str; 5] = ["1/3", "2/5", "3/7", "5/9", "7/11"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Small,
    Full,
}

impl Scale {
    fn factor(self) -> usize {
        match self {
            Scale::Small => 1,
            Scale::Full => 5,
        }
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Scale::Small),
            "full" => Ok(Scale::Full),
            _ => Err(Error::domain(format!("unknown scale {s:?} (small|full)"))),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Small => "small",
            Scale::Full => "full",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite_name: String,
    pub seed: u64,
    pub scale: Scale,
    pub cases_run: usize,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Failure collector shared by the suites.
#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<Failure>,
}

impl Tally {
    fn check(&mut self, ok: bool, case: &str, inputs: impl FnOnce() -> String, expected: impl fmt::Display, got: impl fmt::Display) {
        self.cases += 1;
        if !ok {
            self.failures.push(Failure {
                case: case.to_string(),
                inputs: inputs(),
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    }

    fn error(&mut self, case: &str, inputs: String, err: &Error) {
        self.cases += 1;
        self.failures.push(Failure {
            case: case.to_string(),
            inputs,
            expected: "success".into(),
            got: err.to_string(),
        });
    }

    fn absorb(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }
}

/// Uniform denominator in `[2, max_den]`, then uniform numerator.
pub fn random_rat(rng: &mut impl Rng, max_den: u64) -> Rat {
    let den = rng.random_range(2..=max_den);
    let num = rng.random_range(1..den);
    Rat::from_u64(num, den).expect("0 < num < den")
}

/// A pair `t < t'` of distinct random rationals.
pub fn random_pair(rng: &mut impl Rng, max_den: u64) -> (Rat, Rat) {
    loop {
        let a = random_rat(rng, max_den);
        let b = random_rat(rng, max_den);
        if a < b {
            return (a, b);
        }
        if b < a {
            return (b, a);
        }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn join(v: &[BigUint]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Runs one named suite.
pub fn run_suite(name: &str, seed: u64, scale: Scale) -> Result<SuiteResult> {
    let start = Instant::now();
    let tally = match name {
        "family-oracle" => suite_family_oracle(seed, scale),
        "intersection" => suite_intersection(seed, scale),
        "monotonicity" => suite_monotonicity(seed, scale),
        "witness" => suite_witness(seed, scale),
        "norms" => suite_norms(seed, scale),
        "limits" => suite_limits(scale),
        "gap" => suite_gap(scale),
        "measure" => suite_measure(seed, scale),
        _ => {
            return Err(Error::domain(format!(
                "unknown suite {name:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteResult {
        suite_name: name.to_string(),
        seed,
        scale,
        cases_run: tally.cases,
        failures: tally.failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// `e_of` against the rational-floor oracle for random `t` and `j <= 10`,
/// plus agreement with the symbolic evaluation at the points `1/p`.
fn suite_family_oracle(seed: u64, scale: Scale) -> Tally {
    let ctx = Context::default();
    let mut r = rng(seed, 1);
    let points: Vec<Rat> = (0..200 * scale.factor()).map(|_| random_rat(&mut r, 10_000)).collect();
    let rows: Vec<Tally> = points
        .par_iter()
        .map(|t| {
            let mut tally = Tally::default();
            let prefix = family_prefix(&ctx, t, 10);
            for j in 1..=10u32 {
                let want = oracle::e_of(t, j);
                match e_of(&ctx, t, j as usize) {
                    Ok(got) => {
                        let from_prefix = prefix.as_ref().map(|p| p.e()[j as usize - 1].clone()).ok();
                        tally.check(
                            got == want && from_prefix.as_ref() == Some(&want),
                            "e_of matches oracle",
                            || format!("t={t} j={j}"),
                            &want,
                            &got,
                        );
                    }
                    Err(e) => tally.error("e_of", format!("t={t} j={j}"), &e),
                }
            }
            tally
        })
        .collect();
    let mut tally = Tally::default();
    rows.into_iter().for_each(|t| tally.absorb(t));

    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let t = Rat::from_u64(1, p as u64).unwrap();
        let point = AlgebraicPoint::new(BigUint::from(p), 1).unwrap();
        tally.check(
            family::in_s(&t).as_ref() == Some(&point),
            "1/p lies in S",
            || format!("p={p}"),
            "present",
            "absent",
        );
        for j in 1..=20 {
            let a = e_of(&ctx, &t, j);
            let b = e_at_algebraic(&ctx, &point, j);
            tally.check(
                a.is_ok() && a == b,
                "e_of(1/p) equals symbolic e at p^-1",
                || format!("p={p} j={j}"),
                format!("{b:?}"),
                format!("{a:?}"),
            );
        }
    }
    tally
}

fn suite_intersection(seed: u64, scale: Scale) -> Tally {
    let ctx = Context::default();
    let mut r = rng(seed, 2);
    let pairs: Vec<(Rat, Rat)> = (0..500 * scale.factor()).map(|_| random_pair(&mut r, 10_000)).collect();
    let rows: Vec<Tally> = pairs
        .par_iter()
        .map(|(t, tp)| {
            let mut tally = Tally::default();
            let inputs = || format!("t={t} t'={tp}");
            let cert = match family::intersection_certificate(&ctx, t, tp, 64) {
                Ok(c) => c,
                Err(e) => {
                    tally.error("certificate within depth 64", inputs(), &e);
                    return tally;
                }
            };
            let depth = cert.v_star as u32 + 5;
            let (_, f) = oracle::family(t, depth);
            let (_, g) = oracle::family(tp, depth);
            let brute = oracle::intersection(&f, &g);
            let common: std::collections::BTreeSet<BigUint> = cert.common.iter().cloned().collect();
            tally.check(
                brute == common && common.len() == cert.common.len(),
                "common equals brute-force intersection",
                inputs,
                format!("{brute:?}"),
                join(&cert.common),
            );
            for v in cert.v_star..=cert.v_star + 5 {
                tally.check(
                    f[v - 1] > g[v - 1],
                    "f_v(t) > f_v(t') past v*",
                    || format!("t={t} t'={tp} v={v}"),
                    ">",
                    format!("{} vs {}", f[v - 1], g[v - 1]),
                );
            }
            for (u, v, x) in oracle::collisions(&f, &g) {
                tally.check(u == v, "count lemma u = v", inputs, "u == v", format!("u={u} v={v} value={x}"));
            }
            tally
        })
        .collect();
    let mut tally = Tally::default();
    rows.into_iter().for_each(|t| tally.absorb(t));
    tally
}

fn suite_monotonicity(seed: u64, scale: Scale) -> Tally {
    let ctx = Context::default();
    let mut r = rng(seed, 3);
    let pairs: Vec<(Rat, Rat)> = (0..200 * scale.factor()).map(|_| random_pair(&mut r, 10_000)).collect();
    let rows: Vec<Tally> = pairs
        .par_iter()
        .map(|(t, tp)| {
            let mut tally = Tally::default();
            let (a, b) = match (family_prefix(&ctx, t, 20), family_prefix(&ctx, tp, 20)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    tally.error("family prefix", format!("t={t} t'={tp}"), &e);
                    return tally;
                }
            };
            for j in 0..20 {
                tally.check(
                    a.e()[j] >= b.e()[j] && a.f()[j] >= b.f()[j],
                    "nonincreasing in t",
                    || format!("t={t} t'={tp} j={}", j + 1),
                    ">=",
                    format!("e: {} vs {}, f: {} vs {}", a.e()[j], b.e()[j], a.f()[j], b.f()[j]),
                );
                for p in [&a, &b] {
                    if j > 0 {
                        tally.check(
                            p.e()[j] >= p.e()[j - 1]
                                && p.f()[j] > p.f()[j - 1]
                                && p.f()[j] >= &p.f()[j - 1] * 2u32,
                            "e nondecreasing, f_{j+1} >= 2 f_j",
                            || format!("t={} j={}", p.t(), j + 1),
                            "monotone",
                            format!("f_j={} f_j+1={}", p.f()[j - 1], p.f()[j]),
                        );
                    }
                }
            }
            tally
        })
        .collect();
    let mut tally = Tally::default();
    rows.into_iter().for_each(|t| tally.absorb(t));
    tally
}

fn suite_witness(seed: u64, scale: Scale) -> Tally {
    let ctx = Context::new(Limits {
        depth_cap: WITNESS_DEPTH_CAP,
        ..Limits::default()
    });
    let mut r = rng(seed, 4);
    let sets: Vec<Vec<Rat>> = (0..50 * scale.factor())
        .map(|_| {
            let mut pts: Vec<Rat> = Vec::new();
            while pts.len() < 10 {
                let t = random_rat(&mut r, 10_000);
                if !pts.contains(&t) {
                    pts.push(t);
                }
            }
            pts
        })
        .collect();
    let rows: Vec<Tally> = sets
        .par_iter()
        .map(|pts| {
            let mut tally = Tally::default();
            let names: Vec<String> = pts.iter().map(|t| t.to_string()).collect();
            let inputs = || names.join(",");
            let w = match independence_witness(&ctx, pts, WITNESS_DEPTH_CAP) {
                Ok(w) => w,
                Err(e) => {
                    tally.error("independence witness", inputs(), &e);
                    return tally;
                }
            };
            for (j, t) in pts.iter().enumerate() {
                let v = match embed(&ctx, t, w.depth_used) {
                    Ok(v) => v,
                    Err(e) => {
                        tally.error("embed", t.to_string(), &e);
                        continue;
                    }
                };
                for (i, wi) in w.witness_indices.iter().enumerate() {
                    let got = coordinate_pairing(&v, wi);
                    let want = if i == j { Dyadic::pow2_neg(wi.clone()) } else { Dyadic::zero() };
                    tally.check(
                        got == want,
                        "pairing matrix is diagonal",
                        || format!("{} row={j} col={i}", inputs()),
                        if i == j { format!("2^-{wi}") } else { "0".into() },
                        if got.is_zero() { "0".to_string() } else { "nonzero".into() },
                    );
                }
            }
            tally
        })
        .collect();
    let mut tally = Tally::default();
    rows.into_iter().for_each(|t| tally.absorb(t));
    tally
}

fn suite_norms(seed: u64, scale: Scale) -> Tally {
    let ctx = Context::default();
    let mut r = rng(seed, 5);
    let points: Vec<Rat> = (0..100 * scale.factor()).map(|_| random_rat(&mut r, 10_000)).collect();
    let rows: Vec<Tally> = points
        .par_iter()
        .map(|t| {
            let mut tally = Tally::default();
            let prefix = match family_prefix(&ctx, t, 16) {
                Ok(p) => p,
                Err(e) => {
                    tally.error("family prefix", t.to_string(), &e);
                    return tally;
                }
            };
            let f1 = prefix.f()[0].clone();
            let bound_exp = BigInt::from(&f1 - 1u32);
            let v = embed(&ctx, t, 8).expect("prefix to 16 succeeded");
            let (_, upper) = l1_norm_bounds(&v);
            tally.check(
                upper <= Dyadic::pow2_neg(bound_exp.clone()),
                "upper l1 bound <= 2^-(f_1 - 1)",
                || t.to_string(),
                format!("<= 2^-{bound_exp}"),
                format!("{:?}", upper.exponents().take(3).collect::<Vec<_>>()),
            );
            // independent route: shift by 2^(f_1 - 1), clamp, compare with 1
            let shifted: Vec<BigInt> = upper.exponents().map(|e| e - &bound_exp).collect();
            let clamped = oracle::clamped_dyadic_sum(&shifted, 4096);
            tally.check(
                clamped <= BigRational::one(),
                "clamped rational oracle agrees with bound",
                || t.to_string(),
                "<= 1",
                &clamped,
            );
            for k in 1..=10usize {
                let tail = embed(&ctx, t, k).expect("k <= 8 < 16");
                let partial = Dyadic::sum(&prefix.f()[k..k + 5]);
                let bound = Dyadic::pow2_neg(tail.tail_bound_exp().cloned().unwrap());
                tally.check(
                    partial <= bound,
                    "partial tail sum within certified tail bound",
                    || format!("t={t} k={k}"),
                    "<=",
                    ">",
                );
            }
            tally
        })
        .collect();
    let mut tally = Tally::default();
    rows.into_iter().for_each(|t| tally.absorb(t));
    tally
}

fn entries_u64(v: &crate::DyadicVector) -> Vec<String> {
    v.entries().iter().map(|e| e.to_string()).collect()
}

/// `t + 2^-m` as a rational, if it stays inside `(0, 1)`.
fn shifted(t: &Rat, m: usize, up: bool) -> Option<Rat> {
    let den = t.den() << m;
    let num = t.num() << m;
    let num = if up { num + 1u32 } else { num - 1u32 };
    Rat::new(num, den).ok()
}

fn suite_limits(scale: Scale) -> Tally {
    let ctx = Context::default();
    let deep = Context::new(Limits {
        depth_cap: WITNESS_DEPTH_CAP,
        ..Limits::default()
    });
    let mut tally = Tally::default();

    let one = limit_point(&ctx, &LimitKind::AtOne, 5).unwrap();
    tally.check(
        entries_u64(&one) == ["2", "4", "8", "16", "32"],
        "AtOne prefix is powers of two",
        || "depth=5".into(),
        "[2,4,8,16,32]",
        format!("{:?}", entries_u64(&one)),
    );
    let zero = limit_point(&ctx, &LimitKind::AtZero, 5).unwrap();
    tally.check(zero.entries().is_empty(), "AtZero is the zero vector", || "".into(), "[]", format!("{:?}", entries_u64(&zero)));
    let right3 = limit_point(&ctx, &"right:3,1".parse().unwrap(), 3).unwrap();
    tally.check(
        entries_u64(&right3) == ["2", "14", "322"],
        "RightAt(3,1) prefix",
        || "depth=3".into(),
        "[2,14,322]",
        format!("{:?}", entries_u64(&right3)),
    );

    // near 1: leading powers of two, over a run that grows with m
    let mut previous = 0;
    let max_m = 10 + 2 * (scale.factor() - 1);
    for m in 2..=max_m {
        let den = 1u64 << m;
        let t = Rat::from_u64(den - 1, den).unwrap();
        match powers_of_two_run(&deep, &t, WITNESS_DEPTH_CAP * 4) {
            Ok(run) => {
                let (_, f) = oracle::family(&t, run as u32 + 1);
                let pow_ok = f[..run].iter().enumerate().all(|(u, x)| *x == BigUint::one() << (u + 1))
                    && f[run] != BigUint::one() << (run + 1);
                tally.check(pow_ok, "prefix equals 2^u exactly up to U(m)", || format!("m={m}"), "powers of two", format!("U={run}"));
                tally.check(run >= previous, "U(m) nondecreasing", || format!("m={m}"), format!(">= {previous}"), run);
                previous = run;
            }
            Err(e) => tally.error("powers_of_two_run", format!("m={m}"), &e),
        }
    }

    for p in (2u64..=50).filter(|&p| oracle::is_prime(&BigUint::from(p))) {
        let star = Rat::from_u64(1, p).unwrap();
        let point = AlgebraicPoint::new(BigUint::from(p), 1).unwrap();
        let right = limit_point(&ctx, &LimitKind::RightAt(point), 5).unwrap();
        let left = limit_point(&ctx, &LimitKind::left_at(star.clone()).unwrap(), 5).unwrap();
        tally.check(
            left == embed(&ctx, &star, 5).unwrap(),
            "LeftAt(1/p) equals embed(1/p)",
            || format!("p={p}"),
            "equal",
            "different",
        );
        for (up, limit, label) in [(true, &right, "right"), (false, &left, "left")] {
            let series: Vec<(usize, crate::DyadicVector)> = (1..=64)
                .filter_map(|m| shifted(&star, m, up).map(|t| (m, embed(&ctx, &t, 5).unwrap())))
                .collect();
            let last = &series.last().unwrap().1;
            let settled = series.iter().rev().take_while(|(_, v)| v == last).last().map(|(m, _)| *m);
            tally.check(
                last.entries() == limit.entries(),
                "one-sided limit matches stabilized embedding",
                || format!("p={p} side={label}"),
                format!("{:?}", entries_u64(limit)),
                format!("{:?} (stable from m={settled:?})", entries_u64(last)),
            );
        }
    }
    tally
}

fn suite_gap(scale: Scale) -> Tally {
    let ctx = Context::default();
    let oracle_prime = ctx.oracle();
    let mut tally = Tally::default();
    let (num, den, argmax) = GAP_MAX_1E3_1E6;
    match oracle_prime.gap_stats(1_000, 1_000_000) {
        Ok(g) => {
            tally.check(
                g.max_ratio == Ratio::new(num, den) && g.argmax_p == argmax,
                "max gap ratio on [10^3, 10^6] equals the recorded value",
                || "[1000, 1000000]".into(),
                format!("{num}/{den} at {argmax}"),
                format!("{} at {}", g.max_ratio, g.argmax_p),
            );
            tally.check(g.max_ratio < Ratio::new(1, 20), "max gap ratio below 1/20", || "[1000, 1000000]".into(), "< 1/20", g.max_ratio);
        }
        Err(e) => tally.error("gap_stats", "[1000, 1000000]".into(), &e),
    }
    let first_k = if scale == Scale::Full { 4 } else { 10 };
    let mut previous: Option<Ratio<u64>> = None;
    for k in first_k..=19u32 {
        let (lo, hi) = (1u64 << k, 1u64 << (k + 1));
        match oracle_prime.gap_stats(lo, hi) {
            Ok(g) => {
                if let Some(prev) = previous {
                    tally.check(g.max_ratio <= prev, "dyadic block maxima nonincreasing", || format!("k={k}"), format!("<= {prev}"), g.max_ratio);
                }
                previous = Some(g.max_ratio);
            }
            Err(e) => tally.error("gap_stats", format!("k={k}"), &e),
        }
    }
    for (lo, hi) in [(2u64, 10u64), (100, 200), (2, 3), (1000, 5000), (7919, 8200)] {
        let got = oracle_prime.gap_stats(lo, hi);
        let want = oracle::gap_max(lo, hi);
        let same = match (&got, &want) {
            (Ok(g), Some((r, p))) => {
                BigRational::new(BigInt::from(*g.max_ratio.numer()), BigInt::from(*g.max_ratio.denom())) == *r
                    && g.argmax_p == *p
            }
            _ => false,
        };
        tally.check(same, "gap_stats matches exhaustive scan", || format!("[{lo}, {hi}]"), format!("{want:?}"), format!("{got:?}"));
    }
    tally
}

/// Annihilation against a non-dyadic basis, hit frequency on a coarse grid,
/// atomlessness over distinct samples, and thread-count determinism.
fn suite_measure(seed: u64, scale: Scale) -> Tally {
    let ctx = Context::default();
    let mut tally = Tally::default();
    let basis: Vec<Rat> = NON_DYADIC_BASIS.iter().map(|s| s.parse().unwrap()).collect();
    let n = 10_000 * scale.factor();

    let cfg = SamplerConfig { bits: 64, seed, depth: 8, n_samples: n };
    match measure::annihilation_experiment(&ctx, &cfg, &basis, 64) {
        Ok(report) => {
            tally.check(report.hits == 0, "no hits against a non-dyadic basis", || format!("bits=64 n={n}"), 0, report.hits);
            tally.check(report.errors.is_empty(), "no per-sample errors", || format!("bits=64 n={n}"), 0, report.errors.len());
            tally.check(
                report.witnesses.len() == n - report.hits - report.errors.len(),
                "every non-hit carries a witness",
                || format!("bits=64 n={n}"),
                n,
                report.witnesses.len(),
            );
            let bad: Vec<String> = report
                .witnesses
                .par_iter()
                .filter(|w| !matches!(measure::verify_escape(&ctx, &w.t, &basis, &w.escape), Ok(true)))
                .map(|w| format!("{}:{}", w.index, w.t))
                .collect();
            tally.check(bad.is_empty(), "escaping indices verified by recomputation", || format!("bits=64 n={n}"), "all verified", bad.join(" "));
        }
        Err(e) => tally.error("annihilation", format!("bits=64 n={n}"), &e),
    }

    let coarse = SamplerConfig { bits: 3, seed, depth: 8, n_samples: n };
    let five_eighths: Rat = "5/8".parse().unwrap();
    match measure::annihilation_experiment(&ctx, &coarse, std::slice::from_ref(&five_eighths), 64) {
        Ok(report) => {
            let p = 1.0 / 7.0;
            let rate = report.hits as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            tally.check(
                (rate - p).abs() <= 3.0 * se,
                "hit rate within 3 standard errors of 1/7",
                || format!("bits=3 n={n} basis=[5/8]"),
                format!("{p:.5} +- {:.5}", 3.0 * se),
                format!("{rate:.5}"),
            );
        }
        Err(e) => tally.error("annihilation", format!("bits=3 n={n}"), &e),
    }

    let atoms_cfg = SamplerConfig { bits: 64, seed, depth: 8, n_samples: 1_000 * scale.factor() };
    match measure::atomlessness_experiment(&ctx, &atoms_cfg, 64) {
        Ok(report) => {
            tally.check(
                report.failures.is_empty() && report.errors.is_empty() && report.certified == report.pairs,
                "every distinct pair certified within depth 64",
                || format!("bits=64 n={}", atoms_cfg.n_samples),
                format!("{} pairs", report.pairs),
                format!("{} certified, {} uncertified, {} errors", report.certified, report.failures.len(), report.errors.len()),
            );
        }
        Err(e) => tally.error("atomlessness", format!("bits=64 n={}", atoms_cfg.n_samples), &e),
    }

    let small = SamplerConfig { bits: 64, seed, depth: 8, n_samples: 500 };
    let run = |threads: usize| -> Result<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::resource(e.to_string()))?;
        pool.install(|| {
            let hits = measure::annihilation_experiment(&ctx, &small, &basis, 64)?;
            let atoms = measure::atomlessness_experiment(&ctx, &small, 64)?;
            Ok(format!(
                "{}\n{}",
                serde_json::to_string(&hits).expect("serializable"),
                serde_json::to_string(&atoms).expect("serializable")
            ))
        })
    };
    match (run(1), run(8)) {
        (Ok(a), Ok(b)) => tally.check(a == b, "reports identical across thread counts", || "threads 1 vs 8".into(), "identical", "differ"),
        (Err(e), _) | (_, Err(e)) => tally.error("determinism", "threads 1 vs 8".into(), &e),
    }
    tally
}
