use fibpow::matveev::{
    cap_predicate, derive_eta3_inequality, derive_nm_inequality, solve_self_referential, APolicy, CapKind,
    MatveevInstance, MatveevTerm, NonvanishingWitness, QuadraticLogBound,
};
use fibpow::realnum::{parse_decimal, EvalContext, Expr};
use num_bigint::BigInt;
use proptest::prelude::*;

fn term(a: (i64, i64)) -> MatveevTerm {
    let a = Expr::ratio(a.0, a.1);
    MatveevTerm {
        label: "x".into(),
        height: a.clone() / Expr::int(4),
        abs_log: a.clone() / Expr::int(2),
        a,
    }
}

fn instance(a: &[(i64, i64)], b: u64, ctx: &EvalContext) -> MatveevInstance {
    MatveevInstance::new(a.iter().copied().map(term).collect(), 2, BigInt::from(b), NonvanishingWitness::AlphaPowerIrrational, ctx)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn bound_increases_in_each_a_and_b(
        a in prop::collection::vec((16i64..1000, Just(100i64)), 2..5),
        bump in 1i64..100,
        which in 0usize..5,
        b in 3u64..1_000_000,
    ) {
        let ctx = EvalContext::default();
        let base = instance(&a, b, &ctx).matveev_log_bound(&ctx).unwrap();
        let mut bigger = a.clone();
        let i = which % a.len();
        bigger[i].0 += bump;
        let up_a = instance(&bigger, b, &ctx).matveev_log_bound(&ctx).unwrap();
        prop_assert!(base.hi() < up_a.lo());
        let up_b = instance(&a, b + 1, &ctx).matveev_log_bound(&ctx).unwrap();
        prop_assert!(base.hi() < up_b.lo());
    }

    #[test]
    fn caps_are_least(mantissa in 1000u64..9999, exp in 2u32..20, log_squared in any::<bool>()) {
        let ctx = EvalContext::default();
        let k = ctx.eval(&(Expr::int(mantissa) * Expr::int(BigInt::from(10).pow(exp)))).unwrap();
        let kind = if log_squared { CapKind::LogSquared } else { CapKind::OnePlusLog };
        let n = solve_self_referential(kind, &k, &ctx).unwrap();
        prop_assert!(cap_predicate(kind, k.source(), &n, &ctx));
        prop_assert!(!cap_predicate(kind, k.source(), &(&n - 1), &ctx));
    }
}

#[test]
fn reference_cap_examples() {
    let ctx = EvalContext::default();
    for (k, kind, lead) in [
        ("1.55331e26", CapKind::LogSquared, "734589"),
        ("1.46212e26", CapKind::LogSquared, "690211"),
        ("3.16222e14", CapKind::OnePlusLog, "120245"),
    ] {
        let k = ctx.eval(&Expr::rational(parse_decimal(k).unwrap())).unwrap();
        let n = solve_self_referential(kind, &k, &ctx).unwrap();
        assert!(n.to_string().starts_with(lead), "{n}");
    }
}

#[test]
fn quadratic_coefficients_p7() {
    let ctx = EvalContext::default();
    let nm = derive_nm_inequality(7, APolicy::Rounded, &ctx).unwrap();
    let eta3 = derive_eta3_inequality(7, APolicy::Rounded, &ctx).unwrap();
    let q = QuadraticLogBound::from_coefficients(&nm.chain.coefficient, &eta3.per_unit, &ctx).unwrap();

    // the displayed figures come from K_1 = 3.12014e12, K_2 = 1.89099e12 and
    // log alpha rounded to 0.4812, truncated to six digits
    let (k1, k2, la) = (3.12014e12_f64, 1.89099e12_f64, 0.4812_f64);
    let six = |x: f64| (x / 10f64.powi(x.log10().floor() as i32 - 5)).trunc() as u64;
    assert_eq!(six(nm.chain.coefficient.to_f64()), 312014);
    assert_eq!(six(eta3.per_unit.to_f64()), 189099);
    assert_eq!(six(k1 * k2 / la), 122613);
    assert_eq!(six((2.0 * k1 * k2 + k2 * 80f64.ln()) / la), 245226);

    // rescaling the certified values to log alpha = 0.4812 lands within 1e-5
    let rescale = constants_ln_alpha(&ctx) / 0.4812;
    assert!((q.c2.to_f64() * rescale / 1.22613e25 - 1.0).abs() < 1e-5);
    assert!((q.c1.to_f64() * rescale / 2.45226e25 - 1.0).abs() < 1e-5);

    // with the certified log alpha the coefficient sits 1.8e-5 lower
    let gap = q.c2.to_f64() / 1.22613e25 - 1.0;
    assert!((-2e-5..-1.5e-5).contains(&gap), "{gap:e}");
}

fn constants_ln_alpha(ctx: &EvalContext) -> f64 {
    ctx.eval(&fibpow::realnum::constants::ln_alpha()).unwrap().to_f64()
}
