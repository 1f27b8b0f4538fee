//! Run the whole argument for one prime and print a stage summary.
//!
//! ```text
//! cargo run --release --example full_proof -- 13
//! ```

use fibpow::pipeline::{run_full_proof, PipelineConfig};

fn main() {
    let p: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let cert = run_full_proof(&PipelineConfig::new(p));

    for chain in cert.bound_chain() {
        println!("{chain}");
    }
    if let Some(r1) = &cert.round1 {
        let i = &r1.instance;
        println!(
            "round 1: q = {} (convergent {}), eps = {}, threshold = {}, n - m <= {}",
            i.q,
            i.convergent_index,
            i.epsilon.decimal(8),
            i.threshold.decimal(10),
            r1.d_max
        );
    }
    if let Some(sw) = &cert.sweep {
        let c = &sw.chosen;
        let (dmin, emin) = c.eps_min.as_ref().unwrap();
        let (dmax, emax) = c.eps_max.as_ref().unwrap();
        println!(
            "round 2: q = {} (convergent {}), exceptions {:?}, eps in [{} (d={dmin}), {} (d={dmax})], threshold = {}",
            c.q,
            c.convergent_index,
            c.exceptions,
            emin.decimal(6),
            emax.decimal(6),
            sw.threshold.decimal(10)
        );
        for (attempt, why) in &sw.rejected {
            println!("  passed over convergent {}: {why}", attempt.convergent_index);
        }
    }
    for r in cert.residual_cases.iter().flatten() {
        println!("d = {}: {} with witness {}", r.d, r.rule.name(), r.witness_value);
    }
    match (cert.verdict(), &cert.failure) {
        (Some(v), _) => {
            let list: Vec<String> = v.iter().map(|s| s.to_string()).collect();
            println!("verdict for p = {p}: {}", list.join(" "));
        }
        (None, Some(f)) => println!("failed at {}: {} ({})", f.stage.name(), f.message, f.kind.name()),
        (None, None) => unreachable!("a certificate without a verdict names its failure"),
    }
}
