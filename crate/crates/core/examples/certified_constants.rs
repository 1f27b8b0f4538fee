//! Certified evaluation: enclosures with exact dyadic endpoints, refinement
//! on a precision ladder, comparisons, and distances to the nearest integer.
//!
//! ```text
//! cargo run --example certified_constants
//! ```

use fibpow::realnum::{constants, nearest_int_distance, width_bits, EvalContext, Expr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = EvalContext::default();

    for (name, e) in [
        ("alpha", constants::alpha()),
        ("sqrt5", constants::sqrt5()),
        ("log alpha", constants::ln_alpha()),
        ("log 13 / log alpha", Expr::int(13).ln() / constants::ln_alpha()),
    ] {
        let x = ctx.eval(&e)?;
        println!("{name:>20} = {}  (radius {:e}, {} bits)", x.decimal(30), x.radius().to_f64(), x.precision());
    }

    // tighter enclosures come from re-evaluating the same expression
    let x = ctx.eval(&constants::ln_alpha())?;
    let tight = x.refine(&width_bits(1000), &ctx.ladder)?;
    println!("refined to {} bits: {}", tight.precision(), tight.decimal(60));

    println!("sqrt5 < 3 certified: {}", ctx.less(&constants::sqrt5(), &Expr::int(3)));
    let a20 = ctx.eval(&constants::alpha().powi(20))?;
    let d = nearest_int_distance(&a20, &width_bits(100), &ctx.ladder)?;
    println!("alpha^20 is {} from {} (= L_20)", d.value.decimal(10), d.nearest);
    Ok(())
}
