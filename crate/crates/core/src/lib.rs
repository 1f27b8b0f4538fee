//! Certified resolution of the exponential Diophantine equation
//! `F_n - F_m = p^a` in Fibonacci numbers.
//!
//! The crate carries out the whole argument mechanically: an exhaustive search
//! over small indices, Matveev-type lower bounds for linear forms in three
//! logarithms, two rounds of Baker–Davenport reduction driven by certified
//! continued fractions, and elimination of the few residual gaps through
//! Fibonacci/Lucas factorization identities. Every numeric step is backed by
//! interval arithmetic with exact dyadic endpoints and recorded in a
//! [`pipeline::ProofCertificate`].
//!
//! ```no_run
//! use fibpow::pipeline::{run_full_proof, PipelineConfig};
//!
//! let cert = run_full_proof(&PipelineConfig::new(7));
//! println!("{:?}", cert.verdict());
//! ```

pub mod realnum;
pub mod sequences;
pub mod heights;
pub mod matveev;
pub mod reduction;
pub mod pipeline;
pub mod cli;
