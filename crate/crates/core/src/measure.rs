//! Sampling `t` from a dyadic discretization of the uniform measure and
//! certifying, sample by sample, that the pushforward measure gives no mass
//! to finite-dimensional subspaces and has no atoms on the range.
//!
//! Samples are always drawn sequentially from a ChaCha stream before any
//! parallel work, and results are assembled by sample index, so reports are
//! byte-identical regardless of thread count.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{e_of, FamilyPrefix};
use crate::rational::Rat;
use crate::{json, Context};

/// Parameters of a sampling run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub bits: u32,
    pub seed: u64,
    pub depth: usize,
    pub n_samples: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            bits: 64,
            seed: 0,
            depth: 8,
            n_samples: 1,
        }
    }
}

impl SamplerConfig {
    fn validate(&self) -> Result<()> {
        if self.bits == 0 {
            return Err(Error::domain("bits must be >= 1"));
        }
        if self.n_samples == 0 {
            return Err(Error::domain("n_samples must be >= 1"));
        }
        Ok(())
    }
}

/// The deterministic random stream behind every experiment.
pub fn rng_for_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw from `{m / 2^bits : 1 <= m < 2^bits}`, reduced.
///
/// With `bits = 1` the only value is `1/2`.
pub fn sample_t(rng: &mut impl RngCore, bits: u32) -> Result<Rat> {
    if bits == 0 {
        return Err(Error::domain("bits must be >= 1"));
    }
    let words = bits.div_ceil(32) as usize;
    let mask = (BigUint::one() << bits) - 1u32;
    loop {
        let digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        let m = BigUint::from_slice(&digits) & &mask;
        if !m.is_zero() {
            return Rat::new(m, BigUint::one() << bits);
        }
    }
}

/// The full sample list for a configuration.
pub fn draw_samples(cfg: &SamplerConfig) -> Result<Vec<Rat>> {
    cfg.validate()?;
    let mut rng = rng_for_seed(cfg.seed);
    (0..cfg.n_samples)
        .map(|_| sample_t(&mut rng, cfg.bits))
        .collect()
}

/// Outcome of testing one `x_t` against `span{x_{t_1}, ..., x_{t_k}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HitOutcome {
    pub member: bool,
    /// An index in `N_t` outside every basis `N_{t_i}`, present iff not a member.
    #[serde(with = "json::decimal_opt")]
    pub witness: Option<BigUint>,
}

fn check_distinct(basis: &[Rat]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for b in basis {
        if !seen.insert(b) {
            return Err(Error::domain(format!("basis point {b} repeated")));
        }
    }
    Ok(())
}

/// Prime `e_v` of a shared, read-only prefix, computed directly past its depth.
fn e_shared(ctx: &Context, prefix: &FamilyPrefix, v: usize) -> Result<BigUint> {
    match prefix.e().get(v - 1) {
        Some(e) => Ok(e.clone()),
        None => e_of(ctx, prefix.t(), v),
    }
}

fn hit_test_with(
    ctx: &Context,
    t: &Rat,
    basis: &[FamilyPrefix],
    depth_cap: usize,
) -> Result<HitOutcome> {
    if basis.iter().any(|b| b.t() == t) {
        return Ok(HitOutcome {
            member: true,
            witness: None,
        });
    }
    let mut own = FamilyPrefix::empty(t.clone());
    let mut escape_depth = 1;
    for b in basis {
        let mut v_star = None;
        for v in 1..=depth_cap {
            own.extend_to(ctx, v)?;
            if own.e()[v - 1] != e_shared(ctx, b, v)? {
                v_star = Some(v);
                break;
            }
        }
        let v = v_star.ok_or_else(|| {
            Error::resource(format!(
                "no certificate for the pair ({t}, {}) within depth cap {depth_cap}",
                b.t()
            ))
        })?;
        escape_depth = escape_depth.max(v);
    }
    own.extend_to(ctx, escape_depth)?;
    Ok(HitOutcome {
        member: false,
        witness: Some(own.f()[escape_depth - 1].clone()),
    })
}

fn basis_prefixes(ctx: &Context, basis: &[Rat], depth_cap: usize) -> Result<Vec<FamilyPrefix>> {
    basis
        .iter()
        .map(|b| {
            let mut p = FamilyPrefix::empty(b.clone());
            p.extend_to(ctx, depth_cap.min(16))?;
            Ok(p)
        })
        .collect()
}

/// Decides whether `x_t` lies in the span of the basis embeddings.
///
/// Membership would need `N_t` inside the union of the basis sets, but each
/// intersection `N_t ∩ N_{t_i}` is finite, so `x_t` is a member exactly when
/// `t` is a basis point. Otherwise the witness is `f_V(t)` with `V` the
/// largest first-mismatch index against the basis, which lies in no `N_{t_i}`.
pub fn subspace_hit_test(
    ctx: &Context,
    t: &Rat,
    basis: &[Rat],
    depth_cap: usize,
) -> Result<HitOutcome> {
    check_distinct(basis)?;
    let prefixes = basis_prefixes(ctx, basis, depth_cap)?;
    hit_test_with(ctx, t, &prefixes, depth_cap)
}

/// Recomputes membership of `index` in `N_t` and in each `N_{t_i}` by walking
/// the families until the products pass it, without appealing to factorization.
pub fn verify_escape(ctx: &Context, t: &Rat, basis: &[Rat], index: &BigUint) -> Result<bool> {
    let member_of = |s: &Rat| -> Result<bool> {
        let mut p = FamilyPrefix::empty(s.clone());
        let mut u = 0;
        loop {
            u += 1;
            p.extend_to(ctx, u)?;
            let f = &p.f()[u - 1];
            if f >= index {
                return Ok(f == index);
            }
        }
    };
    if !member_of(t)? {
        return Ok(false);
    }
    for b in basis {
        if member_of(b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One escaping sample: `escape` lies in `N_t` and in no basis set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscapeWitness {
    pub index: usize,
    pub t: Rat,
    #[serde(with = "json::decimal")]
    pub escape: BigUint,
}

/// A sample whose test could not be completed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleError {
    pub index: usize,
    pub t: Rat,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HitReport {
    pub n_samples: usize,
    pub hits: usize,
    pub hit_indices: Vec<usize>,
    pub witnesses: Vec<EscapeWitness>,
    pub errors: Vec<SampleError>,
    pub basis: Vec<Rat>,
}

/// Draws `cfg.n_samples` points and hit-tests each against `span(basis)`.
///
/// Only exact coincidence with a dyadic basis point can hit, so the expected
/// number of hits is `n * (#dyadic basis points with denominator <= 2^bits) / (2^bits - 1)`.
/// Per-sample failures land in `errors` without aborting the batch.
pub fn annihilation_experiment(
    ctx: &Context,
    cfg: &SamplerConfig,
    basis: &[Rat],
    depth_cap: usize,
) -> Result<HitReport> {
    check_distinct(basis)?;
    let samples = draw_samples(cfg)?;
    let prefixes = basis_prefixes(ctx, basis, depth_cap)?;
    let outcomes: Vec<Result<HitOutcome>> = samples
        .par_iter()
        .map(|t| hit_test_with(ctx, t, &prefixes, depth_cap))
        .collect();

    let mut report = HitReport {
        n_samples: samples.len(),
        hits: 0,
        hit_indices: Vec::new(),
        witnesses: Vec::new(),
        errors: Vec::new(),
        basis: basis.to_vec(),
    };
    for (index, (t, outcome)) in samples.into_iter().zip(outcomes).enumerate() {
        match outcome {
            Ok(HitOutcome { member: true, .. }) => {
                report.hits += 1;
                report.hit_indices.push(index);
            }
            Ok(HitOutcome {
                witness: Some(escape),
                ..
            }) => report.witnesses.push(EscapeWitness { index, t, escape }),
            Ok(HitOutcome { .. }) => unreachable!("non-member without witness"),
            Err(e) => report.errors.push(SampleError {
                index,
                t,
                error: e.to_string(),
            }),
        }
    }
    Ok(report)
}

/// A pair of distinct samples with no certificate inside the depth cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairFailure {
    pub t: Rat,
    pub t_prime: Rat,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomReport {
    pub n_samples: usize,
    pub distinct: usize,
    pub duplicate_draws: usize,
    pub pairs: usize,
    pub certified: usize,
    pub max_v_star: usize,
    pub failures: Vec<PairFailure>,
    pub errors: Vec<SampleError>,
}

/// Certifies that the embeddings of all distinct samples are pairwise distinct.
///
/// Equal draws are merged first (at finite `bits` they happen at rate about
/// `n^2 / 2^(bits+1)`). For sorted samples, `e_j` agrees on a pair iff it
/// agrees on every adjacent pair between them, so each prefix only needs the
/// depth its two neighbours demand; every pair is then certified by direct
/// comparison of the stored prime sequences.
pub fn atomlessness_experiment(
    ctx: &Context,
    cfg: &SamplerConfig,
    depth_cap: usize,
) -> Result<AtomReport> {
    let samples = draw_samples(cfg)?;
    let distinct: Vec<Rat> = samples
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = distinct.len();
    let mut prefixes: Vec<FamilyPrefix> =
        distinct.iter().map(|t| FamilyPrefix::empty(t.clone())).collect();
    let mut broken: Vec<Option<String>> = vec![None; n];

    // adjacent first-mismatch indices, resolved by doubling depth
    let mut adjacent: Vec<Option<usize>> = vec![None; n.saturating_sub(1)];
    let mut depth = 1usize;
    loop {
        let target = depth.min(depth_cap);
        let needs: Vec<bool> = (0..n)
            .map(|k| {
                broken[k].is_none()
                    && ((k > 0 && adjacent[k - 1].is_none())
                        || (k + 1 < n && adjacent[k].is_none()))
            })
            .collect();
        prefixes
            .par_iter_mut()
            .zip(broken.par_iter_mut())
            .zip(needs.par_iter())
            .for_each(|((p, err), &need)| {
                if need {
                    if let Err(e) = p.extend_to(ctx, target) {
                        *err = Some(e.to_string());
                    }
                }
            });
        for k in 0..n.saturating_sub(1) {
            if adjacent[k].is_none() {
                adjacent[k] = mismatch_within(&prefixes[k], &prefixes[k + 1], target);
            }
        }
        let unresolved = (0..n.saturating_sub(1))
            .any(|k| adjacent[k].is_none() && broken[k].is_none() && broken[k + 1].is_none());
        if !unresolved || target >= depth_cap {
            break;
        }
        depth *= 2;
    }

    let rows: Vec<(usize, usize, Vec<PairFailure>)> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut certified = 0;
            let mut max_v = 0;
            let mut failures = Vec::new();
            for b in a + 1..n {
                if broken[a].is_some() || broken[b].is_some() {
                    continue;
                }
                let limit = prefixes[a].depth().min(prefixes[b].depth()).min(depth_cap);
                match mismatch_within(&prefixes[a], &prefixes[b], limit) {
                    Some(v) => {
                        certified += 1;
                        max_v = max_v.max(v);
                    }
                    None => failures.push(PairFailure {
                        t: distinct[a].clone(),
                        t_prime: distinct[b].clone(),
                        reason: format!("prime sequences agree through depth cap {depth_cap}"),
                    }),
                }
            }
            (certified, max_v, failures)
        })
        .collect();

    let mut report = AtomReport {
        n_samples: samples.len(),
        distinct: n,
        duplicate_draws: samples.len() - n,
        pairs: n * n.saturating_sub(1) / 2,
        certified: 0,
        max_v_star: 0,
        failures: Vec::new(),
        errors: Vec::new(),
    };
    for (certified, max_v, failures) in rows {
        report.certified += certified;
        report.max_v_star = report.max_v_star.max(max_v);
        report.failures.extend(failures);
    }
    for (k, err) in broken.into_iter().enumerate() {
        if let Some(error) = err {
            let index = samples.iter().position(|s| *s == distinct[k]).unwrap_or(0);
            report.errors.push(SampleError {
                index,
                t: distinct[k].clone(),
                error,
            });
        }
    }
    Ok(report)
}

fn mismatch_within(a: &FamilyPrefix, b: &FamilyPrefix, limit: usize) -> Option<usize> {
    let limit = limit.min(a.depth()).min(b.depth());
    (0..limit).find(|&i| a.e()[i] != b.e()[i]).map(|i| i + 1)
}
