//! The map `t -> x_t` into the coordinate sequence space.
//!
//! The target space is realized with unit coordinate vectors `x_j` and
//! coordinate functionals `x_j*`, so `x_j*(x_k)` is 1 when `j = k` and 0
//! otherwise. A truncated `x_t` is a [`DyadicVector`]: the coordinate indices
//! carrying a nonzero coefficient, where index `e` always carries `2^-e`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::family::{e_right_limit, first_mismatch, in_s, AlgebraicPoint, FamilyPrefix};
use crate::rational::Rat;
use crate::{json, Context};

/// Sparse exact vector: coefficient `2^-e` at coordinate `e` for each entry.
///
/// `tail_bound_exp = Some(T)` certifies that the omitted coordinates carry
/// total ℓ¹ mass at most `2^-T`; `None` means the vector is exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicVector {
    #[serde(with = "json::decimals")]
    entries: Vec<BigUint>,
    #[serde(with = "json::decimal_opt")]
    tail_bound_exp: Option<BigUint>,
}

impl DyadicVector {
    /// Entries must be strictly increasing.
    pub fn new(entries: Vec<BigUint>, tail_bound_exp: Option<BigUint>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("dyadic vector entries must be strictly increasing"));
        }
        Ok(DyadicVector {
            entries,
            tail_bound_exp,
        })
    }

    pub fn zero() -> Self {
        DyadicVector {
            entries: Vec::new(),
            tail_bound_exp: None,
        }
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    pub fn tail_bound_exp(&self) -> Option<&BigUint> {
        self.tail_bound_exp.as_ref()
    }

    pub fn contains(&self, index: &BigUint) -> bool {
        self.entries.binary_search(index).is_ok()
    }

    /// Truncation of `x_t` from a prefix holding at least `depth + 1` products.
    fn from_prefix(f: &[BigUint], depth: usize) -> Self {
        DyadicVector {
            entries: f[..depth].to_vec(),
            tail_bound_exp: Some(&f[depth] - 1u32),
        }
    }
}

fn check_depth(ctx: &Context, depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(Error::domain("depth must be >= 1"));
    }
    let cap = ctx.limits().depth_cap;
    if depth > cap {
        return Err(Error::resource(format!(
            "depth {depth} exceeds the depth cap {cap}"
        )));
    }
    Ok(())
}

/// `x_t` truncated to `f_1(t), ..., f_depth(t)`.
///
/// Since `f_{u+1} >= 2 f_u`, the omitted mass is at most `2^-(f_{depth+1} - 1)`.
pub fn embed(ctx: &Context, t: &Rat, depth: usize) -> Result<DyadicVector> {
    check_depth(ctx, depth)?;
    let mut prefix = FamilyPrefix::empty(t.clone());
    prefix.extend_to(ctx, depth + 1)?;
    Ok(DyadicVector::from_prefix(prefix.f(), depth))
}

/// Binary-digit embedding: coordinate `n` is present iff the `n`-th binary
/// digit of `t` is 1. Dyadic `t` uses its terminating expansion.
pub fn baseline_embed(t: &Rat, depth: usize) -> Result<DyadicVector> {
    if depth == 0 {
        return Err(Error::domain("depth must be >= 1"));
    }
    // digit n = floor(num * 2^n / den) mod 2
    let entries = (1..=depth)
        .filter(|&n| ((t.num() << n) / t.den()).is_odd())
        .map(BigUint::from)
        .collect();
    Ok(DyadicVector {
        entries,
        tail_bound_exp: Some(BigUint::from(depth)),
    })
}

/// Exact lower and upper bounds on the ℓ¹ norm of the untruncated vector.
pub fn l1_norm_bounds(v: &DyadicVector) -> (Dyadic, Dyadic) {
    let lower = Dyadic::sum(&v.entries);
    let upper = match &v.tail_bound_exp {
        Some(t) => &lower + &Dyadic::pow2_neg(t.clone()),
        None => lower.clone(),
    };
    (lower, upper)
}

/// `x_j*(v)`: the coefficient `2^-j` if coordinate `j` is present, else 0.
pub fn coordinate_pairing(v: &DyadicVector, j: &BigUint) -> Dyadic {
    if v.contains(j) {
        Dyadic::pow2_neg(j.clone())
    } else {
        Dyadic::zero()
    }
}

/// Diagonal witness of linear independence for finitely many `x_t`.
///
/// `witness_indices[i]` lies in `N_{points[i]}` and in no other `N_{points[j]}`,
/// so pairing each `x_{points[j]}` against the coordinate functionals at the
/// witness indices yields a diagonal matrix with entries `2^-w_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceWitness {
    pub points: Vec<Rat>,
    #[serde(with = "json::decimals")]
    pub witness_indices: Vec<BigUint>,
    pub depth_used: usize,
}

impl IndependenceWitness {
    /// Checks the diagonal pairing against the supplied truncations, one per
    /// point, each holding at least `depth_used` products.
    pub fn check_against(&self, vectors: &[DyadicVector]) -> Result<()> {
        if vectors.len() != self.points.len() || self.witness_indices.len() != self.points.len() {
            return Err(Error::Verification(
                "witness, point and vector counts differ".into(),
            ));
        }
        for (j, v) in vectors.iter().enumerate() {
            for (i, w) in self.witness_indices.iter().enumerate() {
                let got = coordinate_pairing(v, w);
                let want = if i == j {
                    Dyadic::pow2_neg(w.clone())
                } else {
                    Dyadic::zero()
                };
                if got != want {
                    return Err(Error::Verification(format!(
                        "pairing of x_{} against index {w} is not diagonal",
                        self.points[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Recomputes the embeddings at `depth_used` and checks the diagonal.
    pub fn verify(&self, ctx: &Context) -> Result<()> {
        let vectors = self
            .points
            .iter()
            .map(|t| {
                let mut p = FamilyPrefix::empty(t.clone());
                p.extend_to(ctx, self.depth_used + 1)?;
                Ok(DyadicVector::from_prefix(p.f(), self.depth_used))
            })
            .collect::<Result<Vec<_>>>()?;
        self.check_against(&vectors)
    }
}

/// Builds and verifies an independence witness for distinct points.
///
/// `e_j` is nonincreasing in `t`, so for sorted points two of them agree at
/// index `j` iff every adjacent pair between them does. The largest pairwise
/// first-mismatch index is therefore the largest adjacent one, and only
/// adjacent pairs need certificates.
pub fn independence_witness(
    ctx: &Context,
    points: &[Rat],
    depth_cap: usize,
) -> Result<IndependenceWitness> {
    if points.len() < 2 {
        return Err(Error::domain("independence witness needs at least two points"));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]));
    if let Some(w) = order.windows(2).find(|w| points[w[0]] == points[w[1]]) {
        return Err(Error::domain(format!("duplicate point {}", points[w[0]])));
    }
    let mut prefixes: Vec<FamilyPrefix> = points
        .iter()
        .map(|t| FamilyPrefix::empty(t.clone()))
        .collect();
    let mut depth = 1;
    for w in order.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (a, b) = pair_mut(&mut prefixes, lo, hi);
        let v = first_mismatch(ctx, a, b, depth_cap)?.ok_or_else(|| {
            Error::resource(format!(
                "no certificate for the pair ({}, {}) within depth cap {depth_cap}",
                points[lo], points[hi]
            ))
        })?;
        depth = depth.max(v);
    }
    for p in prefixes.iter_mut() {
        p.extend_to(ctx, depth + 1)?;
    }
    let witness = IndependenceWitness {
        points: points.to_vec(),
        witness_indices: prefixes.iter().map(|p| p.f()[depth - 1].clone()).collect(),
        depth_used: depth,
    };
    let vectors: Vec<DyadicVector> = prefixes
        .iter()
        .map(|p| DyadicVector::from_prefix(p.f(), depth))
        .collect();
    witness.check_against(&vectors)?;
    Ok(witness)
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (l, r) = v.split_at_mut(b);
        (&mut l[a], &mut r[0])
    } else {
        let (l, r) = v.split_at_mut(a);
        (&mut r[0], &mut l[b])
    }
}

/// Where a one-sided limit of `x_t` is taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitKind {
    /// `t -> 0+`.
    AtZero,
    /// `t -> 1-`.
    AtOne,
    /// `t -> t*-` at a rational point `t* = 1/p` of the exceptional set.
    LeftAt(Rat),
    /// `t -> (p^(-1/i))+`.
    RightAt(AlgebraicPoint),
}

impl LimitKind {
    pub fn left_at(t: Rat) -> Result<Self> {
        if in_s(&t).is_none() {
            return Err(Error::domain(format!(
                "{t} is not a point of the exceptional set (expected 1/p, p prime)"
            )));
        }
        Ok(LimitKind::LeftAt(t))
    }
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitKind::AtZero => f.write_str("zero"),
            LimitKind::AtOne => f.write_str("one"),
            LimitKind::LeftAt(t) => write!(f, "left:{t}"),
            LimitKind::RightAt(pt) => write!(f, "right:{},{}", pt.p(), pt.i()),
        }
    }
}

impl FromStr for LimitKind {
    type Err = Error;

    /// `zero`, `one`, `left:A/B` or `right:p,i`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "zero" => return Ok(LimitKind::AtZero),
            "one" => return Ok(LimitKind::AtOne),
            _ => {}
        }
        if let Some(rest) = s.trim().strip_prefix("left:") {
            return LimitKind::left_at(rest.parse()?);
        }
        if let Some(rest) = s.trim().strip_prefix("right:") {
            let (p, i) = rest
                .split_once(',')
                .ok_or_else(|| Error::domain(format!("expected right:p,i, got {s:?}")))?;
            let p: BigUint = p
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad prime {p:?}")))?;
            let i: u32 = i
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad root index {i:?}")))?;
            return Ok(LimitKind::RightAt(AlgebraicPoint::new(p, i)?));
        }
        Err(Error::domain(format!(
            "unknown limit kind {s:?} (expected zero, one, left:A/B or right:p,i)"
        )))
    }
}

/// Truncation of the one-sided limit of `x_t`.
pub fn limit_point(ctx: &Context, kind: &LimitKind, depth: usize) -> Result<DyadicVector> {
    check_depth(ctx, depth)?;
    match kind {
        LimitKind::AtZero => Ok(DyadicVector::zero()),
        LimitKind::AtOne => {
            // f_u(t) = 2^u near 1
            let f: Vec<BigUint> = (1..=depth + 1).map(|u| BigUint::one() << u).collect();
            Ok(DyadicVector::from_prefix(&f, depth))
        }
        LimitKind::LeftAt(t) => embed(ctx, t, depth),
        LimitKind::RightAt(pt) => {
            let mut f: Vec<BigUint> = Vec::with_capacity(depth + 1);
            let mut acc = BigUint::one();
            for j in 1..=depth + 1 {
                acc *= e_right_limit(ctx, pt, j)?;
                f.push(acc.clone());
            }
            Ok(DyadicVector::from_prefix(&f, depth))
        }
    }
}

/// Number of leading products of `t`'s family that equal `2^u`, searched up to `cap`.
pub fn powers_of_two_run(ctx: &Context, t: &Rat, cap: usize) -> Result<usize> {
    let mut prefix = FamilyPrefix::empty(t.clone());
    for u in 1..=cap {
        prefix.extend_to(ctx, u)?;
        if prefix.e()[u - 1] != BigUint::from(2u32) {
            return Ok(u - 1);
        }
    }
    Ok(cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn nums(v: &DyadicVector) -> Vec<u64> {
        v.entries().iter().map(|x| x.try_into().unwrap()).collect()
    }

    fn tail(v: &DyadicVector) -> u64 {
        v.tail_bound_exp().unwrap().try_into().unwrap()
    }

    #[test]
    fn embed_examples() {
        let ctx = Context::default();
        let v = embed(&ctx, &r("1/2"), 3).unwrap();
        assert_eq!((nums(&v), tail(&v)), (vec![2, 6, 42], 545));
        let v = embed(&ctx, &r("1/3"), 2).unwrap();
        assert_eq!((nums(&v), tail(&v)), (vec![3, 21], 482));
        let v = embed(&ctx, &r("9/10"), 2).unwrap();
        assert_eq!((nums(&v), tail(&v)), (vec![2, 4], 7));
        // depth == cap still works although it looks one product ahead
        assert_eq!(embed(&ctx, &r("1/2"), 64).unwrap().entries().len(), 64);
        assert!(matches!(embed(&ctx, &r("1/2"), 65), Err(Error::Resource(_))));
    }

    #[test]
    fn baseline_examples() {
        let v = baseline_embed(&r("1/2"), 8).unwrap();
        assert_eq!((nums(&v), tail(&v)), (vec![1], 8));
        assert_eq!(nums(&baseline_embed(&r("3/4"), 8).unwrap()), vec![1, 2]);
        assert_eq!(nums(&baseline_embed(&r("1/3"), 6).unwrap()), vec![2, 4, 6]);
    }

    #[test]
    fn norm_bound_examples() {
        let ctx = Context::default();
        let (lo, hi) = l1_norm_bounds(&embed(&ctx, &r("1/2"), 3).unwrap());
        let want_lo = Dyadic::sum(&[2u32, 6, 42].map(BigUint::from));
        assert_eq!(lo, want_lo);
        assert_eq!(hi, &want_lo + &Dyadic::pow2_neg(545));
        assert!(hi <= Dyadic::pow2_neg(1));

        let (lo, hi) = l1_norm_bounds(&DyadicVector::zero());
        assert!(lo.is_zero() && hi.is_zero());

        let (lo, hi) = l1_norm_bounds(&baseline_embed(&r("3/4"), 8).unwrap());
        let three_quarters = &Dyadic::pow2_neg(1) + &Dyadic::pow2_neg(2);
        assert_eq!(lo, three_quarters);
        assert_eq!(hi, &three_quarters + &Dyadic::pow2_neg(8));
    }

    #[test]
    fn pairing_examples() {
        let ctx = Context::default();
        let v = embed(&ctx, &r("1/2"), 3).unwrap();
        assert_eq!(coordinate_pairing(&v, &BigUint::from(6u32)), Dyadic::pow2_neg(6));
        assert!(coordinate_pairing(&v, &BigUint::from(5u32)).is_zero());
        let v = embed(&ctx, &r("1/3"), 2).unwrap();
        assert_eq!(coordinate_pairing(&v, &BigUint::from(3u32)), Dyadic::pow2_neg(3));
    }

    #[test]
    fn witness_examples() {
        let ctx = Context::default();
        let w = independence_witness(&ctx, &[r("1/3"), r("1/2")], 64).unwrap();
        assert_eq!(w.depth_used, 1);
        assert_eq!(w.witness_indices, vec![BigUint::from(3u32), BigUint::from(2u32)]);
        let w = independence_witness(&ctx, &[r("2/5"), r("1/2")], 64).unwrap();
        assert_eq!(w.depth_used, 2);
        assert_eq!(w.witness_indices, vec![BigUint::from(10u32), BigUint::from(6u32)]);
        w.verify(&ctx).unwrap();
        assert!(matches!(independence_witness(&ctx, &[r("1/2")], 64), Err(Error::Domain(_))));
        assert!(matches!(
            independence_witness(&ctx, &[r("1/2"), r("2/4")], 64),
            Err(Error::Domain(_))
        ));
        let err = independence_witness(&ctx, &[r("995/1000"), r("1/3"), r("996/1000")], 64)
            .unwrap_err();
        assert!(matches!(&err, Error::Resource(m) if m.contains("199/200")), "{err}");
    }

    #[test]
    fn tampered_witness_fails_verification() {
        let ctx = Context::default();
        let mut w = independence_witness(&ctx, &[r("2/5"), r("1/2")], 64).unwrap();
        w.witness_indices[0] = BigUint::from(2u32);
        assert!(matches!(w.verify(&ctx), Err(Error::Verification(_))));
    }

    #[test]
    fn limit_examples() {
        let ctx = Context::default();
        assert!(limit_point(&ctx, &LimitKind::AtZero, 3).unwrap().entries().is_empty());
        assert_eq!(nums(&limit_point(&ctx, &LimitKind::AtOne, 4).unwrap()), vec![2, 4, 8, 16]);
        let right: LimitKind = "right:3,1".parse().unwrap();
        assert_eq!(nums(&limit_point(&ctx, &right, 3).unwrap()), vec![2, 14, 322]);
        let left: LimitKind = "left:1/3".parse().unwrap();
        assert_eq!(nums(&limit_point(&ctx, &left, 3).unwrap()), vec![3, 21, 483]);
    }

    #[test]
    fn limit_kind_parsing() {
        assert_eq!("zero".parse::<LimitKind>().unwrap(), LimitKind::AtZero);
        assert_eq!("one".parse::<LimitKind>().unwrap().to_string(), "one");
        assert_eq!("right:3,2".parse::<LimitKind>().unwrap().to_string(), "right:3,2");
        for bad in ["left:1/4", "left:2/5", "right:4,1", "right:3,0", "right:3", "middle"] {
            assert!(bad.parse::<LimitKind>().is_err(), "{bad}");
        }
    }

    #[test]
    fn powers_of_two_near_one() {
        let ctx = Context::default();
        // (4/3)^j < 3 for j <= 3
        assert_eq!(powers_of_two_run(&ctx, &r("3/4"), 100).unwrap(), 3);
        assert_eq!(powers_of_two_run(&ctx, &r("1/2"), 100).unwrap(), 1);
        assert_eq!(powers_of_two_run(&ctx, &r("1/3"), 100).unwrap(), 0);
    }
}
