//! Deterministic primality testing for values beyond the sieve.
//!
//! Below 3.3e24 Miller-Rabin with the first thirteen prime bases is exact.
//! Above that we run Baillie-PSW (strong base-2 Miller-Rabin plus a strong
//! Lucas test with Selfridge parameters), which has no known counterexample.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Odd primes used for trial division before any modular exponentiation.
pub(crate) const SMALL_PRIMES: [u32; 60] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283,
];

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

// 3317044064679887385961981: smallest strong pseudoprime to all of MR_BASES.
const MR_EXACT_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact primality for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    for &q in SMALL_PRIMES.iter() {
        let q = q as u64;
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in MR_BASES[..12].iter() {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let mut x = base.modpow(&d, n);
    if x == one || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a/n) for odd positive n.
fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let mut a = a.mod_floor(&BigInt::from_biguint(Sign::Plus, n.clone()))
        .to_biguint()
        .expect("non-negative after mod_floor");
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap();
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigUint::from(3u32) && (&n % 4u32) == BigUint::from(3u32) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    let x = if x.is_odd() { x + n } else { x };
    (x >> 1usize).mod_floor(n)
}

/// Strong Lucas probable-prime test with Selfridge's method A parameters.
fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 => {
                // gcd(d, n) > 1; n is composite unless it equals |d|.
                return d.magnitude() == n;
            }
            _ => {}
        }
        d = if d.sign() == Sign::Plus { -(d + 2i32) } else { -d + 2i32 };
    }
    let ni = BigInt::from_biguint(Sign::Plus, n.clone());
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / 4;
    let n_plus_one = n + 1u32;
    let s = n_plus_one.trailing_zeros().unwrap_or(0);
    let k = &n_plus_one >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(&ni);
    let q_mod = qk.clone();
    for bit in (0..k.bits() - 1).rev() {
        u = (&u * &v).mod_floor(&ni);
        v = (&v * &v - &qk * 2i32).mod_floor(&ni);
        qk = (&qk * &qk).mod_floor(&ni);
        if k.bit(bit) {
            let nu = half_mod(&p * &u + &v, &ni);
            let nv = half_mod(&d * &u + &p * &v, &ni);
            u = nu;
            v = nv;
            qk = (&qk * &q_mod).mod_floor(&ni);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk * 2i32).mod_floor(&ni);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&ni);
    }
    false
}

/// Primality of an arbitrary-precision natural.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    for &q in SMALL_PRIMES.iter() {
        if (n % q).is_zero() {
            return false;
        }
    }
    if n.to_u128().is_some_and(|v| v < MR_EXACT_BOUND) {
        return MR_BASES
            .iter()
            .all(|&a| strong_probable_prime(n, &BigUint::from(a)));
    }
    strong_probable_prime(n, &BigUint::from(2u32)) && strong_lucas_probable_prime(n)
}
