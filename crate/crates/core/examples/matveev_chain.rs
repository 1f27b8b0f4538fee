//! The chain of Matveev bounds for one prime: the `n - m` inequality, the
//! quadratic in `log n`, its relaxation, and the absolute cap on `n`.
//!
//! ```text
//! cargo run --release --example matveev_chain -- 13
//! ```

use fibpow::matveev::{
    derive_eta3_inequality, derive_nm_inequality, reduced_coefficient, reference_log_squared_coefficient,
    relax_quadratic, solve_self_referential, APolicy, CapKind, QuadraticLogBound,
};
use fibpow::realnum::EvalContext;
use num_bigint::BigInt;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let ctx = EvalContext::default();

    let nm = derive_nm_inequality(p, APolicy::default(), &ctx)?;
    for t in nm.instance.terms() {
        let a = t.a.rational_value().map(|r| r.to_string()).unwrap_or_else(|| t.a.to_string());
        println!("A({}) = {a}", t.label);
    }
    println!("{}", nm.chain);

    let eta3 = derive_eta3_inequality(p, APolicy::default(), &ctx)?;
    println!("per unit of A3: K2 = {}", eta3.per_unit.decimal(8));

    let q = QuadraticLogBound::from_coefficients(&nm.chain.coefficient, &eta3.per_unit, &ctx)?;
    println!("n < {} + {} log n + {} (log n)^2", q.c0.decimal(6), q.c1.decimal(6), q.c2.decimal(6));

    let reference = reference_log_squared_coefficient(p);
    let relax = relax_quadratic(&q, &BigInt::from(201), reference.as_ref(), &ctx)?;
    println!("relaxed ({}): n < {} (log n)^2", relax.source.name(), relax.coefficient.decimal(6));
    let cap = solve_self_referential(CapKind::LogSquared, &relax.coefficient, &ctx)?;
    println!("so n < {cap}");

    // what a first reduction with n - m <= 160 would buy
    let k3 = ctx.eval(&reduced_coefficient(&eta3.per_unit, 160))?;
    let cap = solve_self_referential(CapKind::OnePlusLog, &k3, &ctx)?;
    println!("with n - m <= 160: n < {} (1 + log n), so n < {cap}", k3.decimal(8));
    Ok(())
}
