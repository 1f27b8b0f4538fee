mod support;

use fibpow::realnum::{EvalContext, Expr};
use proptest::prelude::*;
use support::*;

fn leaf() -> impl Strategy<Value = (i64, i64)> {
    (-1000i64..1000, 1i64..1000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn containment(leaves in prop::collection::vec(leaf(), 1..6), ops in prop::collection::vec(0u8..6, 0..8)) {
        let e = build_rational_expr(&leaves, &ops);
        let ctx = EvalContext::default();
        prop_assert!(check_containment(&e, &ctx).is_ok(), "{:?}", check_containment(&e, &ctx));
    }

    #[test]
    fn directed_rounding(
        a in ((-10_000i64..10_000, -20i64..20), (-10_000i64..10_000, -20i64..20)),
        b in ((-10_000i64..10_000, -20i64..20), (-10_000i64..10_000, -20i64..20)),
        prec in 2u32..24,
    ) {
        let r = check_directed_rounding(a, b, prec);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn refinement_is_monotone(seed in 0u64..10_000) {
        let ctx = EvalContext::default();
        prop_assert!(check_refinement(&irrational(seed), &ctx).is_ok());
    }

    #[test]
    fn distance_symmetry(seed in 0u64..10_000, scale in 1i64..10_000) {
        let ctx = EvalContext::default();
        let x = irrational(seed) * Expr::int(scale);
        let r = check_distance_symmetry(&x, &ctx);
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

#[test]
fn transcendental_containment() {
    // exp(log r) = r and (sqrt r)^2 = r exactly, so the enclosures must hold r
    let ctx = EvalContext::default();
    for (n, d) in [(2, 1), (355, 113), (1, 7), (10_000_001, 3)] {
        let r = rat(n, d);
        for e in [Expr::ratio(n, d).ln().exp(), Expr::ratio(n, d).sqrt().powi(2)] {
            assert!(ctx.eval(&e).unwrap().contains(&r), "{e}");
        }
    }
}
