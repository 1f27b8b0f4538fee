//! Logarithmic heights in Q(sqrt 5) and the bound used for the third term of
//! the second linear form.
//!
//! ```text
//! cargo run --example heights
//! ```

use fibpow::heights::{eta3_exact, height_eta3_bound, height_quadratic, height_rational, QuadraticNumber};
use fibpow::realnum::EvalContext;
use num_rational::BigRational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = EvalContext::default();

    let r = BigRational::new((-22).into(), 7.into());
    println!("h(-22/7) = {}", height_rational(&r, &ctx)?.value.decimal(12));

    for x in [QuadraticNumber::alpha(), QuadraticNumber::sqrt5(), QuadraticNumber::from_ints(3, 1)] {
        let h = height_quadratic(&x, &ctx)?;
        println!("h({x}) = {} [{:?}], minimal polynomial {:?}", h.value.decimal(12), h.kind, x.minimal_polynomial()?);
    }

    println!("   d   h(eta3) exact   bound");
    for d in [1, 2, 3, 4, 10, 50] {
        let exact = height_quadratic(&eta3_exact(d)?, &ctx)?;
        let bound = height_eta3_bound(d, &ctx)?;
        println!("{d:>4}   {:>13}   {}", exact.value.decimal(8), bound.height.value.decimal(8));
    }
    Ok(())
}
