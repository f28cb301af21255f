use std::sync::OnceLock;

use num_bigint::BigUint;
use proptest::prelude::*;

use primefam::family::{e_of, family_prefix, intersection_certificate};
use primefam::verify::oracle;
use primefam::{Context, Rat};

fn ctx() -> &'static Context {
    static CTX: OnceLock<Context> = OnceLock::new();
    CTX.get_or_init(Context::default)
}

fn rat() -> impl Strategy<Value = Rat> {
    (2u64..5_000).prop_flat_map(|den| (1..den).prop_map(move |num| Rat::from_u64(num, den).unwrap()))
}

fn ordered_pair() -> impl Strategy<Value = (Rat, Rat)> {
    (rat(), rat()).prop_filter_map("distinct", |(a, b)| match a.cmp(&b) {
        std::cmp::Ordering::Less => Some((a, b)),
        std::cmp::Ordering::Greater => Some((b, a)),
        std::cmp::Ordering::Equal => None,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn prev_prime_matches_trial_division(n in 2u64..2_000_000) {
        let ctx = ctx();
        let got = ctx.oracle().prev_prime(&BigUint::from(n)).unwrap();
        prop_assert_eq!(got, oracle::prev_prime(&BigUint::from(n)));
    }

    #[test]
    fn e_matches_oracle(t in rat(), j in 1u32..8) {
        let ctx = ctx();
        prop_assert_eq!(e_of(ctx, &t, j as usize).unwrap(), oracle::e_of(&t, j));
    }

    #[test]
    fn family_is_monotone((t, tp) in ordered_pair()) {
        let ctx = ctx();
        let a = family_prefix(ctx, &t, 12).unwrap();
        let b = family_prefix(ctx, &tp, 12).unwrap();
        for j in 0..12 {
            prop_assert!(a.e()[j] >= b.e()[j]);
            if j > 0 {
                prop_assert!(a.f()[j] >= (&a.f()[j - 1] * 2u32));
            }
        }
    }

    #[test]
    fn certificate_is_sound((t, tp) in ordered_pair().prop_filter("below 9/10", |(_, tp)| {
        tp.num() * 10u32 <= tp.den() * 9u32
    })) {
        let ctx = ctx();
        let cert = intersection_certificate(ctx, &t, &tp, 64).unwrap();
        let depth = cert.v_star as u32 + 4;
        let (_, f) = oracle::family(&t, depth);
        let (_, g) = oracle::family(&tp, depth);
        let expected: Vec<BigUint> = oracle::intersection(&f, &g).into_iter().collect();
        prop_assert_eq!(cert.common, expected);
    }
}
