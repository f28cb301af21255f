//! The prime families `e_j(t)`, their partial products `f_j(t)`, the
//! exceptional points `p^(-1/i)`, and exact certificates for the finite
//! intersections `N_t ∩ N_t'`.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::is_prime_big;
use crate::rational::Rat;
use crate::{json, Context};

/// The largest prime `<= n`, or 2 when `n < 2`.
fn prime_floor(ctx: &Context, n: &BigUint) -> Result<BigUint> {
    if *n < BigUint::from(2u32) {
        Ok(BigUint::from(2u32))
    } else {
        ctx.oracle().prev_prime(n)
    }
}

/// `e_j(t)`: the largest prime `p` with `p * num^j <= den^j`, or 2 if `t^-j < 2`.
///
/// Primes are integers, so `p <= t^-j` iff `p <= floor(den^j / num^j)`; the
/// boundary `t^-j = p` is inclusive.
pub fn e_of(ctx: &Context, t: &Rat, j: usize) -> Result<BigUint> {
    if j == 0 {
        return Err(Error::domain("index j must be >= 1"));
    }
    let exp = j as u32;
    let floor = t.den().pow(exp) / t.num().pow(exp);
    prime_floor(ctx, &floor)
}

/// A point `p^(-1/i)` of the exceptional set, with `p` prime and `i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraicPoint {
    #[serde(with = "json::decimal")]
    p: BigUint,
    i: u32,
}

impl AlgebraicPoint {
    pub fn new(p: BigUint, i: u32) -> Result<Self> {
        if i == 0 {
            return Err(Error::domain("root index i must be >= 1"));
        }
        if !is_prime_big(&p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        Ok(AlgebraicPoint { p, i })
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    /// The rational `1/p` when `i == 1`.
    pub fn as_rat(&self) -> Option<Rat> {
        (self.i == 1).then(|| Rat::new(BigUint::one(), self.p.clone()).expect("p >= 2"))
    }
}

impl std::fmt::Display for AlgebraicPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^(-1/{})", self.p, self.i)
    }
}

/// Membership of a rational in the exceptional set.
///
/// `(a/b)^-i = b^i / a^i` is a prime only when `a = 1`, `i = 1` and `b` is
/// prime, so the rational members are exactly the `1/p`.
pub fn in_s(t: &Rat) -> Option<AlgebraicPoint> {
    (t.num().is_one() && is_prime_big(t.den())).then(|| AlgebraicPoint {
        p: t.den().clone(),
        i: 1,
    })
}

/// `e_j` evaluated at `p^(-1/i)`: the largest prime `q` with `q^i <= p^j`, or 2.
pub fn e_at_algebraic(ctx: &Context, pt: &AlgebraicPoint, j: usize) -> Result<BigUint> {
    if j == 0 {
        return Err(Error::domain("index j must be >= 1"));
    }
    let root = pt.p.pow(j as u32).nth_root(pt.i);
    prime_floor(ctx, &root)
}

/// Limit of `e_j(t)` as `t` decreases to `p^(-1/i)`: the largest prime `q`
/// with `q^i < p^j` strictly, or 2.
pub fn e_right_limit(ctx: &Context, pt: &AlgebraicPoint, j: usize) -> Result<BigUint> {
    if j == 0 {
        return Err(Error::domain("index j must be >= 1"));
    }
    let power = pt.p.pow(j as u32);
    let root = power.nth_root(pt.i);
    let bound = if root.pow(pt.i) == power {
        root - 1u32
    } else {
        root
    };
    prime_floor(ctx, &bound)
}

/// The first `depth` primes `e_j(t)` and products `f_j(t)`.
///
/// Extending a prefix reuses the running powers of `t`'s numerator and
/// denominator, so growing one step costs one multiplication each.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyPrefix {
    t: Rat,
    #[serde(serialize_with = "json::primes::serialize")]
    e: Vec<BigUint>,
    #[serde(with = "json::decimals")]
    f: Vec<BigUint>,
    #[serde(skip)]
    num_pow: BigUint,
    #[serde(skip)]
    den_pow: BigUint,
}

impl FamilyPrefix {
    /// An empty prefix for `t`, to be grown with [`FamilyPrefix::extend_to`].
    pub fn empty(t: Rat) -> Self {
        FamilyPrefix {
            t,
            e: Vec::new(),
            f: Vec::new(),
            num_pow: BigUint::one(),
            den_pow: BigUint::one(),
        }
    }

    pub fn t(&self) -> &Rat {
        &self.t
    }

    pub fn depth(&self) -> usize {
        self.e.len()
    }

    pub fn e(&self) -> &[BigUint] {
        &self.e
    }

    pub fn f(&self) -> &[BigUint] {
        &self.f
    }

    /// Grows the prefix to at least `depth` terms.
    ///
    /// Only the bit ceiling is enforced here; depth caps belong to callers.
    pub fn extend_to(&mut self, ctx: &Context, depth: usize) -> Result<()> {
        while self.e.len() < depth {
            self.num_pow *= self.t.num();
            self.den_pow *= self.t.den();
            let e = prime_floor(ctx, &(&self.den_pow / &self.num_pow))?;
            let f = match self.f.last() {
                Some(prev) => prev * &e,
                None => e.clone(),
            };
            if f.bits() > ctx.limits().bit_ceiling {
                return Err(Error::resource(format!(
                    "f_{}({}) has {} bits, above the bit ceiling {}",
                    self.e.len() + 1,
                    self.t,
                    f.bits(),
                    ctx.limits().bit_ceiling
                )));
            }
            self.e.push(e);
            self.f.push(f);
        }
        Ok(())
    }

    /// Index `u` (1-based) with `f_u = n`, if `n` is among the computed products.
    pub fn position(&self, n: &BigUint) -> Option<usize> {
        self.f.binary_search(n).ok().map(|i| i + 1)
    }
}

/// `e_1..e_depth` and `f_1..f_depth` for `t`, refusing depths above the cap.
pub fn family_prefix(ctx: &Context, t: &Rat, depth: usize) -> Result<FamilyPrefix> {
    if depth == 0 {
        return Err(Error::domain("depth must be >= 1"));
    }
    let cap = ctx.limits().depth_cap;
    if depth > cap {
        return Err(Error::resource(format!(
            "depth {depth} exceeds the depth cap {cap}"
        )));
    }
    let mut prefix = FamilyPrefix::empty(t.clone());
    prefix.extend_to(ctx, depth)?;
    Ok(prefix)
}

/// Proof that `N_t ∩ N_t'` is exactly `common`.
///
/// `v_star` is the first index where the prime sequences differ. Since
/// `e_v` is nonincreasing in `t`, `f_v(t) > f_v(t')` from there on, and an
/// equality `f_u(t) = f_v(t')` forces `u = v` by unique factorization, so
/// no coincidence can happen past `v_star`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionCertificate {
    pub t: Rat,
    pub t_prime: Rat,
    pub v_star: usize,
    #[serde(with = "json::decimals")]
    pub common: Vec<BigUint>,
}

/// Finds the first mismatch between two prefixes, extending both lazily.
///
/// Returns `None` when the first `cap` terms agree.
pub fn first_mismatch(
    ctx: &Context,
    a: &mut FamilyPrefix,
    b: &mut FamilyPrefix,
    cap: usize,
) -> Result<Option<usize>> {
    for v in 1..=cap {
        a.extend_to(ctx, v)?;
        b.extend_to(ctx, v)?;
        if a.e[v - 1] != b.e[v - 1] {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

fn certificate_cap_error(t: &Rat, t_prime: &Rat, cap: usize, matched: &FamilyPrefix) -> Error {
    let shown: Vec<String> = matched.e.iter().take(cap).map(|p| p.to_string()).collect();
    Error::resource(format!(
        "no mismatch between t = {t} and t' = {t_prime} within depth cap {cap}; \
         matched prefix e = [{}]",
        shown.join(",")
    ))
}

/// Certificate built from already-owned prefixes (`a.t() < b.t()`).
pub fn certify_prefixes(
    ctx: &Context,
    a: &mut FamilyPrefix,
    b: &mut FamilyPrefix,
    cap: usize,
) -> Result<IntersectionCertificate> {
    if a.t() >= b.t() {
        return Err(Error::domain(format!(
            "certificate requires t < t', got t = {} and t' = {}",
            a.t(),
            b.t()
        )));
    }
    let v_star = first_mismatch(ctx, a, b, cap)?
        .ok_or_else(|| certificate_cap_error(a.t(), b.t(), cap, a))?;
    debug_assert!(a.e[v_star - 1] > b.e[v_star - 1]);
    Ok(IntersectionCertificate {
        t: a.t().clone(),
        t_prime: b.t().clone(),
        v_star,
        common: a.f[..v_star - 1].to_vec(),
    })
}

/// Exact intersection certificate for `t < t'`, searching at most `depth_cap` terms.
pub fn intersection_certificate(
    ctx: &Context,
    t: &Rat,
    t_prime: &Rat,
    depth_cap: usize,
) -> Result<IntersectionCertificate> {
    let mut a = FamilyPrefix::empty(t.clone());
    let mut b = FamilyPrefix::empty(t_prime.clone());
    certify_prefixes(ctx, &mut a, &mut b, depth_cap)
}

/// Decides `(t'/t)^v - 1 > t'^v * (succ(e_v(t')) - e_v(t'))` exactly.
///
/// With `t = a/b` and `t' = c/d` both sides are scaled by `(d a)^v d^v`, giving
/// `((c b)^v - (d a)^v) d^v > gap * c^v (d a)^v`. When it holds,
/// `e_v(t) > e_v(t')` follows.
pub fn gap_inequality_check(ctx: &Context, t: &Rat, t_prime: &Rat, v: usize) -> Result<bool> {
    if t >= t_prime {
        return Err(Error::domain(format!(
            "gap inequality requires t < t', got t = {t} and t' = {t_prime}"
        )));
    }
    if v == 0 {
        return Err(Error::domain("index v must be >= 1"));
    }
    let e = e_of(ctx, t_prime, v)?;
    let gap = ctx.oracle().succ_prime(&e)? - &e;
    let exp = v as u32;
    let (a, b) = (t.num(), t.den());
    let (c, d) = (t_prime.num(), t_prime.den());
    let cb = BigInt::from((c * b).pow(exp));
    let da = BigInt::from((d * a).pow(exp));
    let lhs = (&cb - &da) * BigInt::from(d.pow(exp));
    let rhs = BigInt::from(gap * c.pow(exp)) * da;
    Ok(lhs > rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn nums(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|x| x.try_into().unwrap()).collect()
    }

    fn pt(p: u32, i: u32) -> AlgebraicPoint {
        AlgebraicPoint::new(BigUint::from(p), i).unwrap()
    }

    #[test]
    fn e_of_examples() {
        let ctx = Context::default();
        assert_eq!(e_of(&ctx, &r("1/2"), 3).unwrap(), BigUint::from(7u32));
        assert_eq!(e_of(&ctx, &r("9/10"), 1).unwrap(), BigUint::from(2u32));
        assert_eq!(e_of(&ctx, &r("1/3"), 2).unwrap(), BigUint::from(7u32));
        assert!(e_of(&ctx, &r("1/3"), 0).is_err());
    }

    #[test]
    fn boundary_is_inclusive() {
        let ctx = Context::default();
        // t^-1 = 5 exactly
        assert_eq!(e_of(&ctx, &r("1/5"), 1).unwrap(), BigUint::from(5u32));
        // (2/7)^-1 = 3.5
        assert_eq!(e_of(&ctx, &r("2/7"), 1).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn family_prefix_examples() {
        let ctx = Context::default();
        let p = family_prefix(&ctx, &r("1/2"), 4).unwrap();
        assert_eq!(nums(p.e()), vec![2, 3, 7, 13]);
        assert_eq!(nums(p.f()), vec![2, 6, 42, 546]);
        let p = family_prefix(&ctx, &r("1/3"), 3).unwrap();
        assert_eq!(nums(p.e()), vec![3, 7, 23]);
        assert_eq!(nums(p.f()), vec![3, 21, 483]);
        let p = family_prefix(&ctx, &r("9/10"), 3).unwrap();
        assert_eq!(nums(p.e()), vec![2, 2, 2]);
        assert_eq!(nums(p.f()), vec![2, 4, 8]);
        assert_eq!(p.position(&BigUint::from(4u32)), Some(2));
        assert_eq!(p.position(&BigUint::from(5u32)), None);
    }

    #[test]
    fn family_prefix_caps() {
        let ctx = Context::default();
        assert!(matches!(family_prefix(&ctx, &r("1/2"), 65), Err(Error::Resource(m)) if m.contains("64")));
        assert!(matches!(family_prefix(&ctx, &r("1/2"), 0), Err(Error::Domain(_))));
        let tight = Context::new(crate::Limits {
            bit_ceiling: 100,
            ..Default::default()
        });
        assert!(matches!(family_prefix(&tight, &r("1/1000"), 10), Err(Error::Resource(_))));
    }

    #[test]
    fn in_s_examples() {
        assert_eq!(in_s(&r("1/3")), Some(pt(3, 1)));
        assert_eq!(in_s(&r("1/4")), None);
        assert_eq!(in_s(&r("2/5")), None);
    }

    #[test]
    fn algebraic_point_validation() {
        assert!(AlgebraicPoint::new(BigUint::from(4u32), 1).is_err());
        assert!(AlgebraicPoint::new(BigUint::from(3u32), 0).is_err());
        assert_eq!(pt(7, 1).as_rat(), Some(r("1/7")));
        assert_eq!(pt(7, 2).as_rat(), None);
    }

    #[test]
    fn e_at_algebraic_examples() {
        let ctx = Context::default();
        assert_eq!(e_at_algebraic(&ctx, &pt(3, 2), 1).unwrap(), BigUint::from(2u32));
        assert_eq!(e_at_algebraic(&ctx, &pt(3, 2), 2).unwrap(), BigUint::from(3u32));
        assert_eq!(e_at_algebraic(&ctx, &pt(3, 2), 3).unwrap(), BigUint::from(5u32));
    }

    #[test]
    fn e_right_limit_examples() {
        let ctx = Context::default();
        assert_eq!(e_right_limit(&ctx, &pt(3, 1), 1).unwrap(), BigUint::from(2u32));
        assert_eq!(e_right_limit(&ctx, &pt(3, 1), 2).unwrap(), BigUint::from(7u32));
        assert_eq!(e_right_limit(&ctx, &pt(5, 1), 1).unwrap(), BigUint::from(3u32));
        // 2^(-1/1) from the right: nothing prime below 2
        assert_eq!(e_right_limit(&ctx, &pt(2, 1), 1).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn right_limit_differs_only_when_j_equals_i() {
        let ctx = Context::default();
        for (p, i) in [(2, 1), (3, 1), (3, 2), (5, 3), (7, 2), (11, 1)] {
            let point = pt(p, i);
            for j in 1..=12usize {
                let two_sided = e_at_algebraic(&ctx, &point, j).unwrap();
                let right = e_right_limit(&ctx, &point, j).unwrap();
                // p = 2, j = i is the one place where both clamp to 2
                let expect_diff = j == i as usize && p != 2;
                assert_eq!(two_sided != right, expect_diff, "p={p} i={i} j={j}");
            }
        }
    }

    #[test]
    fn rational_points_of_s_agree_with_symbolic() {
        let ctx = Context::default();
        for p in [2u32, 3, 5, 7, 11, 13, 47] {
            let t = Rat::from_u64(1, p as u64).unwrap();
            for j in 1..=20 {
                assert_eq!(
                    e_of(&ctx, &t, j).unwrap(),
                    e_at_algebraic(&ctx, &pt(p, 1), j).unwrap()
                );
            }
        }
    }

    #[test]
    fn certificate_examples() {
        let ctx = Context::default();
        let c = intersection_certificate(&ctx, &r("1/3"), &r("1/2"), 64).unwrap();
        assert_eq!(c.v_star, 1);
        assert!(c.common.is_empty());
        let c = intersection_certificate(&ctx, &r("2/5"), &r("1/2"), 64).unwrap();
        assert_eq!(c.v_star, 2);
        assert_eq!(nums(&c.common), vec![2]);
        assert!(matches!(
            intersection_certificate(&ctx, &r("1/2"), &r("1/2"), 64),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            intersection_certificate(&ctx, &r("1/2"), &r("1/3"), 64),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn certificate_cap_is_an_error() {
        let ctx = Context::default();
        // both stay below 2 for the first 64 powers
        let err = intersection_certificate(&ctx, &r("995/1000"), &r("996/1000"), 64).unwrap_err();
        match err {
            Error::Resource(msg) => {
                assert!(msg.contains("depth cap 64"), "{msg}");
                assert!(msg.contains("matched prefix e = [2,2,"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gap_inequality_examples() {
        let ctx = Context::default();
        // 1/2 > 1/2 * 1 is false
        assert!(!gap_inequality_check(&ctx, &r("1/3"), &r("1/2"), 1).unwrap());
        assert!(gap_inequality_check(&ctx, &r("2/5"), &r("1/2"), 8).unwrap());
        // 1/2 > 3/4 is false
        assert!(!gap_inequality_check(&ctx, &r("1/2"), &r("3/4"), 1).unwrap());
        assert!(gap_inequality_check(&ctx, &r("1/2"), &r("1/3"), 1).is_err());
    }

    #[test]
    fn gap_inequality_implies_strict_order() {
        let ctx = Context::default();
        let pairs = [("1/3", "1/2"), ("2/5", "1/2"), ("1/2", "3/4"), ("7/10", "5/7")];
        for (a, b) in pairs {
            let (t, tp) = (r(a), r(b));
            let mut first_true = None;
            for v in 1..=40 {
                if gap_inequality_check(&ctx, &t, &tp, v).unwrap() {
                    first_true.get_or_insert(v);
                    assert!(e_of(&ctx, &t, v).unwrap() > e_of(&ctx, &tp, v).unwrap());
                }
            }
            assert!(first_true.is_some(), "{a} {b}");
        }
    }
}
