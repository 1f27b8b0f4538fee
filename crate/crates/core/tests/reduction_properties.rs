mod support;

use fibpow::realnum::{constants, EvalContext, Expr};
use fibpow::reduction::{cf_expand, gamma_for, sweep_mu_family, SweepParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn convergent_laws(seed in 0u64..100_000, digits in 5u32..40) {
        let ctx = EvalContext::default();
        let x = ctx.eval(&irrational(seed)).unwrap();
        let cf = cf_expand(&x, &BigInt::from(10).pow(digits), 2, &ctx).unwrap();
        prop_assert!(check_determinant(&cf).is_ok(), "{:?}", check_determinant(&cf));
        let r = check_best_approximation(&cf, &ctx);
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduction_is_sound(k in 2i64..200, j in 2i64..60, a in 1i64..20, m_max in 10u64..=1000, use_alpha in any::<bool>()) {
        let r = (k as f64).sqrt() as i64;
        prop_assume!(r * r != k);
        let gamma = Expr::int(k).sqrt();
        let mu = Expr::int(j).ln() / Expr::int(3);
        let b = if use_alpha { constants::alpha() } else { Expr::int(2) };
        let ctx = EvalContext::default();
        match check_reduction_soundness(gamma, mu, a, b, m_max, &ctx) {
            Ok(_) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn soundness_covers_known_instance() {
    // gamma = log 13 / log alpha, mu = log sqrt5 / log alpha, as in the real proof
    let ctx = EvalContext::default();
    let out = check_reduction_soundness(gamma_for(13), fibpow::reduction::mu_sqrt5(), 13, constants::alpha(), 1000, &ctx).unwrap();
    assert!(matches!(out, Soundness::Verified { .. }));
}

#[test]
fn sweep_is_deterministic() {
    let ctx = EvalContext::default();
    let params = SweepParams {
        p: 13,
        d_range: 3..=60,
        m: BigInt::from(10u64.pow(9)),
        a: BigRational::from_integer(13.into()),
        min_epsilon: SweepParams::default_min_epsilon(),
    };
    let g = ctx.eval(&gamma_for(13)).unwrap();
    let cf = cf_expand(&g, &(&params.m * 6), 12, &ctx).unwrap();
    let any = |_: &std::collections::BTreeSet<u64>| true;
    let a = sweep_mu_family(&params, &cf, &any, &ctx).unwrap();
    let b = sweep_mu_family(&params, &cf, &any, &ctx).unwrap();
    assert_eq!(a.exceptions(), b.exceptions());
    assert_eq!(a.omega_cap, b.omega_cap);
    assert_eq!(a.chosen.q, b.chosen.q);
    let eps = |s: &fibpow::reduction::SweepResult| s.chosen.rows.iter().map(|r| r.epsilon.as_ref().map(|e| (e.lo().clone(), e.hi().clone()))).collect::<Vec<_>>();
    assert_eq!(eps(&a), eps(&b));
    // d = 4 is the identity alpha^-2 = 1 - alpha^-1 in disguise
    assert!(a.exceptions().contains(&4));
}

#[test]
fn synthetic_instances_mostly_certify() {
    let ctx = EvalContext::default();
    let mut verified = 0;
    let mut pairs = 0;
    let ks = [2i64, 3, 5, 6, 7, 10, 11, 13, 17, 19, 23, 29];
    for (i, k) in ks.iter().enumerate() {
        let mu = Expr::int(i as i64 + 2).ln() / Expr::int(3);
        if let Soundness::Verified { pairs: n, .. } =
            check_reduction_soundness(Expr::int(*k).sqrt(), mu, 5, constants::alpha(), 1000, &ctx).unwrap()
        {
            verified += 1;
            pairs += n;
        }
    }
    assert!(verified * 4 >= ks.len() * 3, "only {verified} of {} certified", ks.len());
    assert!(pairs > 1_000_000);
}
