//! Certified continued fractions and one Baker-Davenport reduction step.
//!
//! ```text
//! cargo run --release --example continued_fraction
//! ```

use fibpow::realnum::EvalContext;
use fibpow::reduction::{cf_expand, dujella_petho_step, gamma_for, mu_sqrt5, ReductionParams, StepOutcome};
use fibpow::realnum::constants;
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = EvalContext::default();
    let gamma = ctx.eval(&gamma_for(13))?;
    let m = BigInt::from(10u64.pow(12));
    let cf = cf_expand(&gamma, &(&m * 6), 3, &ctx)?;

    println!("log 13 / log alpha = [{}]", cf.terms().iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", "));
    for (k, (p, q)) in cf.convergents().iter().enumerate().skip(cf.convergents().len().saturating_sub(4)) {
        println!("  p_{k}/q_{k} = {p}/{q}");
    }

    // |m gamma - n + mu| < 13 alpha^-w with m <= 10^12
    let params = ReductionParams { gamma: gamma_for(13), mu: mu_sqrt5(), a: BigRational::from_integer(13.into()), b: constants::alpha(), m };
    let start = cf.first_index_above(&params.six_m()).expect("expanded past 6M");
    for k in start..=cf.certified_through() {
        match dujella_petho_step(&params, &cf, k, &ctx)? {
            StepOutcome::Certified(inst) => {
                println!(
                    "q = {}: eps = {}, so w < {} (w <= {})",
                    inst.q,
                    inst.epsilon.decimal(8),
                    inst.threshold.decimal(10),
                    inst.omega_cap.as_ref().map(|c| c - 1u32).unwrap()
                );
                break;
            }
            StepOutcome::Retry { q, reason, .. } => println!("q = {q}: {reason:?}, trying the next convergent"),
        }
    }
    Ok(())
}
