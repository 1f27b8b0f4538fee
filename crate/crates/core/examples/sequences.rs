//! Fibonacci and Lucas numbers, the difference factorization, and exact
//! prime-power detection.
//!
//! ```text
//! cargo run --example sequences
//! ```

use fibpow::sequences::{diff_factorization, fib, fib_u, lucas, lucas_u, perfect_power_facts, prime_power_exponent, SeqIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [-6, -5, 0, 10, 100] {
        let k = SeqIndex::new(n)?;
        println!("F_{n} = {}, L_{n} = {}", fib(k), lucas(k));
    }

    // both branches of the identity, checked against the direct difference
    for (n, m) in [(14, 9), (20, 8), (22, 8), (9, 3)] {
        if (n - m) % 2 != 0 {
            println!("F_{n} - F_{m}: indices differ in parity, no factorization");
            continue;
        }
        let f = diff_factorization(SeqIndex::new(n)?, SeqIndex::new(m)?)?;
        let direct = fib_u(n as u64) - fib_u(m as u64);
        println!(
            "F_{n} - F_{m} = {direct} = F_{} * L_{} ({:?}), agrees: {}",
            f.fib_index,
            f.lucas_index,
            f.rule,
            f.product() == direct
        );
    }

    let x = fib_u(14) - fib_u(9);
    if let Some(a) = prime_power_exponent(&x, 7)? {
        println!("F_14 - F_9 = {x} = 7^{a}");
    }
    println!("L_33 = {} is a power of 13: {}", lucas_u(33), prime_power_exponent(&lucas_u(33), 13)?.is_some());

    let facts = perfect_power_facts();
    println!("perfect powers: F {:?}, L {:?}", facts.fibonacci_values(), facts.lucas_values());
    Ok(())
}
