mod support;

use proptest::prelude::*;
use support::*;

use fibpow::realnum::EvalContext;

#[test]
fn recurrence_to_500() {
    for n in 2..=500 {
        check_recurrence(n).unwrap();
    }
}

#[test]
fn fast_doubling_matches_recurrence() {
    let (f, l) = recurrence_table(500);
    for n in 0..=500u64 {
        assert_eq!(fibpow::sequences::fib_u(n), f[n as usize]);
        assert_eq!(fibpow::sequences::lucas_u(n), l[n as usize]);
    }
}

#[test]
fn binet_brackets_to_300() {
    let ctx = EvalContext::default();
    for n in 1..=300 {
        check_binet(n, &ctx).unwrap();
    }
}

#[test]
fn growth_bound_to_300() {
    let ctx = EvalContext::default();
    for n in 1..=300 {
        check_growth(n, &ctx).unwrap();
    }
}

#[test]
fn lucas_identity_to_300() {
    for l in 1..=300 {
        check_lucas_identity(l).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn difference_factorization((n, m) in (2u64..=400).prop_flat_map(|n| (Just(n), 1..=n / 2)).prop_map(|(n, g)| (n, n - 2 * g))) {
        let table = recurrence_table(400);
        prop_assert!(check_factorization(n, m, &table).is_ok(), "{:?}", check_factorization(n, m, &table));
    }

    #[test]
    fn prime_power_exponent_roundtrip(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 97]), a in 0u32..60, k in 2u64..50) {
        use fibpow::sequences::prime_power_exponent;
        let x = num_traits::pow(num_bigint::BigInt::from(p), a as usize);
        prop_assert_eq!(prime_power_exponent(&x, p).unwrap(), Some(a));
        // a cofactor prime to p rules it out
        let k = if k % p == 0 { k + 1 } else { k };
        prop_assert_eq!(prime_power_exponent(&(x * k), p).unwrap(), None);
    }
}
