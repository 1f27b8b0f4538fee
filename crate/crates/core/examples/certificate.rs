//! Emit a proof certificate, read it back, and re-check it without running
//! the pipeline again.
//!
//! ```text
//! cargo run --release --example certificate -- 13 cert.json
//! ```

use fibpow::cli::{check_document, emit_certificate, exit_code, parse_certificate};
use fibpow::pipeline::{run_full_proof, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let p: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(13);
    let path = args.next().unwrap_or_else(|| format!("fibpow-{p}.json"));

    let cert = run_full_proof(&PipelineConfig::new(p));
    emit_certificate(&cert, path.as_ref())?;

    let doc = parse_certificate(&std::fs::read_to_string(&path)?)?;
    println!("wrote {path}: {} stages, {} claims", doc.stages.len(), doc.claims.len());
    for s in &doc.stages {
        println!("  {:<18} {} outputs", s.name, s.outputs.len());
    }
    match check_document(&doc) {
        Ok(()) => println!("document checks out, verdict {:?}", doc.verdict),
        Err(e) => println!("document rejected: {e}"),
    }
    std::process::exit(exit_code(&cert));
}
