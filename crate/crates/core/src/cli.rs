//! Command-line front end and certificate serialization.
//!
//! The certificate is a JSON document with sorted keys. Every certified
//! number carries a decimal rendering, an interval radius, the exact dyadic
//! endpoints and the expression it encloses, so a checker can re-verify it
//! without re-deriving anything.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Parser;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::matveev::BoundChain;
use crate::pipeline::{run_full_proof, FailureKind, PipelineConfig, ProofCertificate};
use crate::realnum::{decimal_string, CertifiedReal, Dyadic, PrecisionLadder, Round};
use crate::reduction::{ReductionInstance, SweepAttempt};
use crate::sequences::{fib_u, is_prime, SolutionTriple};

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_STAGE_FAILURE: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;

pub const FORMAT: &str = "fibpow-certificate";

#[derive(Parser, Debug)]
#[command(name = "fibpow", version, about = "Certify all solutions of F_n - F_m = p^a")]
struct Args {
    /// The prime p.
    #[arg(long)]
    prime: u64,
    /// Exhaustive search covers n up to this value.
    #[arg(long, default_value_t = 200)]
    search_cap: u64,
    /// Starting working precision in bits.
    #[arg(long, default_value_t = 128)]
    precision_start: u32,
    /// Hard precision cap in bits.
    #[arg(long, default_value_t = 16384)]
    precision_max: u32,
    /// Write the certificate to this path.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// 0 silent, 1 stage summary, 2 full trace.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=2))]
    verbose: u8,
}

/// A validated command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliInvocation {
    pub prime: u64,
    pub search_cap: u64,
    pub precision_start_bits: u32,
    pub precision_max_bits: u32,
    pub output_path: Option<PathBuf>,
    pub verbosity: u8,
}

impl CliInvocation {
    pub fn config(&self) -> PipelineConfig {
        let mut c = PipelineConfig::new(self.prime);
        c.search_cap = self.search_cap;
        c.ladder = PrecisionLadder::new(self.precision_start_bits, self.precision_max_bits);
        c.emit_path = self.output_path.clone();
        c
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Help or version output; not an error for the exit code.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write certificate: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed certificate: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Parse and validate `argv`, including the program name.
pub fn parse_args<I, T>(argv: I) -> Result<CliInvocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    if !is_prime(args.prime) {
        return Err(CliError::Usage(format!("--prime {} is not prime", args.prime)));
    }
    if args.search_cap < 10 {
        return Err(CliError::Usage(format!("--search-cap must be at least 10, got {}", args.search_cap)));
    }
    if args.precision_start < 16 || args.precision_max < args.precision_start {
        return Err(CliError::Usage(format!(
            "need 16 <= --precision-start <= --precision-max, got {} and {}",
            args.precision_start, args.precision_max
        )));
    }
    Ok(CliInvocation {
        prime: args.prime,
        search_cap: args.search_cap,
        precision_start_bits: args.precision_start,
        precision_max_bits: args.precision_max,
        output_path: args.emit,
        verbosity: args.verbose,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicDoc {
    pub mantissa: String,
    pub exponent: i64,
}

impl DyadicDoc {
    fn from_dyadic(d: &Dyadic) -> Self {
        DyadicDoc { mantissa: d.mantissa().to_string(), exponent: d.exponent() }
    }

    pub fn to_dyadic(&self) -> Option<Dyadic> {
        Some(Dyadic::new(self.mantissa.parse::<BigInt>().ok()?, self.exponent))
    }
}

/// A certified number: the true value of `source` lies in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberDoc {
    pub decimal: String,
    pub radius: String,
    pub lo: DyadicDoc,
    pub hi: DyadicDoc,
    pub source: String,
}

impl NumberDoc {
    pub fn from_real(x: &CertifiedReal) -> Self {
        NumberDoc {
            decimal: x.decimal(15),
            radius: decimal_string(&x.radius().to_rational(), 3, Round::Up),
            lo: DyadicDoc::from_dyadic(x.lo()),
            hi: DyadicDoc::from_dyadic(x.hi()),
            source: x.source().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageDoc {
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimDoc {
    pub name: String,
    pub lhs: NumberDoc,
    pub rhs: NumberDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureDoc {
    pub stage: String,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub format: String,
    pub version: String,
    pub prime: u64,
    pub config: BTreeMap<String, Value>,
    pub stages: Vec<StageDoc>,
    pub claims: Vec<ClaimDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Vec<[u64; 3]>>,
}

fn num(x: &CertifiedReal) -> Value {
    serde_json::to_value(NumberDoc::from_real(x)).expect("plain data")
}

fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn triples(v: &[SolutionTriple]) -> Value {
    json!(v.iter().map(|s| [s.n, s.m, u64::from(s.a)]).collect::<Vec<_>>())
}

fn map(pairs: Vec<(&str, Value)>) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn chain_doc(c: &BoundChain) -> Value {
    let mut m = map(vec![("stage", json!(c.stage.name())), ("coefficient", num(&c.coefficient))]);
    if let Some(cap) = &c.resulting_cap {
        m.insert("cap".into(), int(cap));
    }
    json!(m)
}

fn reduction_doc(i: &ReductionInstance) -> (BTreeMap<String, Value>, BTreeMap<String, Value>) {
    let inputs = map(vec![
        ("gamma", num(&i.gamma)),
        ("mu", num(&i.mu)),
        ("A", json!(i.a.to_string())),
        ("B", num(&i.b)),
        ("M", int(&i.m)),
    ]);
    let mut outputs = map(vec![
        ("q", int(&i.q)),
        ("convergent_index", json!(i.convergent_index)),
        ("mu_q_distance", num(&i.mu_distance)),
        ("gamma_q_distance", num(&i.gamma_distance)),
        ("epsilon", num(&i.epsilon)),
        ("threshold", num(&i.threshold)),
    ]);
    if let Some(cap) = &i.omega_cap {
        outputs.insert("omega_cap".into(), int(cap));
    }
    (inputs, outputs)
}

fn attempt_summary(a: &SweepAttempt) -> BTreeMap<String, Value> {
    let mut m = map(vec![
        ("q", int(&a.q)),
        ("convergent_index", json!(a.convergent_index)),
        ("exceptions", json!(a.exceptions)),
    ]);
    if let Some((d, e)) = &a.eps_min {
        m.insert("eps_min".into(), json!({"d": d, "value": num(e)}));
    }
    if let Some((d, e)) = &a.eps_max {
        m.insert("eps_max".into(), json!({"d": d, "value": num(e)}));
    }
    m
}

/// Build the structured document for a certificate.
pub fn certificate_document(cert: &ProofCertificate) -> CertificateDocument {
    let c = &cert.config;
    let config = map(vec![
        ("search_cap", json!(c.search_cap)),
        ("precision_start_bits", json!(c.ladder.start_bits)),
        ("precision_max_bits", json!(c.ladder.max_bits)),
        ("a_policy", json!(c.a_policy.name())),
        ("min_epsilon", json!(c.min_epsilon.to_string())),
    ]);
    let mut stages = Vec::new();
    if let Some(s) = &cert.search_solutions {
        stages.push(StageDoc {
            name: "search".into(),
            inputs: map(vec![("range", json!(format!("0 <= m < n <= {}", c.search_cap)))]),
            outputs: map(vec![("solutions", triples(s))]),
        });
    }
    if let Some(entries) = &cert.small_cases {
        let outputs = entries
            .iter()
            .map(|e| {
                (e.rule.name().to_string(), json!({"candidates": e.candidates, "solutions": triples(&e.solutions)}))
            })
            .collect();
        stages.push(StageDoc { name: "small_cases".into(), inputs: BTreeMap::new(), outputs });
    }
    if let Some(m) = &cert.matveev {
        let instance = |inst: &crate::matveev::MatveevInstance| {
            json!({
                "t": inst.t(),
                "D": inst.degree(),
                "witness": inst.witness().name(),
                "A": inst.terms().iter().map(|t| json!({"eta": t.label, "A": t.a.to_string()})).collect::<Vec<_>>(),
            })
        };
        let inputs = map(vec![
            ("first_instance", instance(&m.nm.instance)),
            ("second_instance", instance(&m.eta3.instance)),
        ]);
        let outputs = map(vec![
            ("nm_bound", chain_doc(&m.nm.chain)),
            ("per_unit_coefficient", num(&m.eta3.per_unit)),
            ("c0", num(&m.quadratic.c0)),
            ("c1", num(&m.quadratic.c1)),
            ("c2", num(&m.quadratic.c2)),
            ("relaxation_source", json!(m.relaxation.source.name())),
            ("relaxation_log_threshold", num(&m.relaxation.threshold)),
            ("n_absolute", chain_doc(&m.absolute)),
        ]);
        stages.push(StageDoc { name: "matveev".into(), inputs, outputs });
    }
    if let Some(r) = &cert.round1 {
        let (inputs, mut outputs) = reduction_doc(&r.instance);
        outputs.insert("d_max".into(), json!(r.d_max));
        stages.push(StageDoc { name: "reduction_round1".into(), inputs, outputs });
    }
    if let Some(r) = &cert.reduced {
        let inputs = cert.round1.as_ref().map(|r1| map(vec![("d_max", json!(r1.d_max))])).unwrap_or_default();
        stages.push(StageDoc { name: "reduced_cap".into(), inputs, outputs: map(vec![("n_after_reduction", chain_doc(r))]) });
    }
    if let Some(sw) = &cert.sweep {
        let first = sw.chosen.rows.first().map(|r| r.d).unwrap_or(0);
        let last = sw.chosen.rows.last().map(|r| r.d).unwrap_or(0);
        let inputs = map(vec![
            ("d_range", json!([first, last])),
            ("M", int(&sw.m)),
            ("A", json!(sw.a.to_string())),
        ]);
        let rows: Vec<Value> = sw
            .chosen
            .rows
            .iter()
            .map(|r| {
                let mut row = map(vec![("d", json!(r.d)), ("status", json!(r.status.name()))]);
                if let Some(e) = &r.epsilon {
                    row.insert("epsilon".into(), num(e));
                }
                json!(row)
            })
            .collect();
        let rejected: Vec<Value> = sw
            .rejected
            .iter()
            .map(|(a, why)| {
                let mut m = attempt_summary(a);
                m.insert("reason".into(), json!(why));
                json!(m)
            })
            .collect();
        let mut outputs = attempt_summary(&sw.chosen);
        outputs.insert("threshold".into(), num(&sw.threshold));
        outputs.insert("omega_cap".into(), int(&sw.omega_cap));
        outputs.insert("rows".into(), json!(rows));
        outputs.insert("passed_over".into(), json!(rejected));
        stages.push(StageDoc { name: "reduction_round2".into(), inputs, outputs });
    }
    if let Some(res) = &cert.residual_cases {
        let cases: Vec<Value> = res
            .iter()
            .map(|r| {
                json!({
                    "d": r.d,
                    "rule": r.rule.name(),
                    "witness_index": r.witness_index,
                    "witness_value": int(&r.witness_value),
                })
            })
            .collect();
        stages.push(StageDoc {
            name: "residuals".into(),
            inputs: BTreeMap::new(),
            outputs: map(vec![("cases", json!(cases))]),
        });
    }
    if let Some(v) = cert.verdict() {
        let by_a = |pred: fn(u32) -> bool| {
            let picked: Vec<SolutionTriple> = v.iter().filter(|s| pred(s.a)).copied().collect();
            triples(&picked)
        };
        stages.push(StageDoc {
            name: "verdict".into(),
            inputs: BTreeMap::new(),
            outputs: map(vec![
                ("trivial_a0", by_a(|a| a == 0)),
                ("a1", by_a(|a| a == 1)),
                ("a_ge_2", by_a(|a| a >= 2)),
            ]),
        });
    }
    let claims = cert
        .claims
        .iter()
        .map(|c| ClaimDoc {
            name: c.name.to_string(),
            lhs: NumberDoc::from_real(&c.lhs),
            rhs: NumberDoc::from_real(&c.rhs),
            note: c.slack_note.map(str::to_string),
        })
        .collect();
    CertificateDocument {
        format: FORMAT.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        prime: cert.prime,
        config,
        stages,
        claims,
        failure: cert.failure.as_ref().map(|f| FailureDoc {
            stage: f.stage.name().into(),
            kind: f.kind.name().into(),
            message: f.message.clone(),
        }),
        verdict: cert.verdict().map(|v| v.iter().map(|s| [s.n, s.m, u64::from(s.a)]).collect()),
    }
}

/// Serialize to the canonical text form.
pub fn render_certificate(cert: &ProofCertificate) -> String {
    let mut s = serde_json::to_string_pretty(&certificate_document(cert)).expect("plain data");
    s.push('\n');
    s
}

/// Write the certificate to `path`.
pub fn emit_certificate(cert: &ProofCertificate, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, render_certificate(cert))?;
    Ok(())
}

pub fn parse_certificate(text: &str) -> Result<CertificateDocument, CliError> {
    Ok(serde_json::from_str(text)?)
}

/// Re-check what a document asserts without re-running the pipeline: every
/// verdict triple satisfies the equation exactly, every interval is ordered,
/// and every claim's intervals are separated.
pub fn check_document(doc: &CertificateDocument) -> Result<(), String> {
    if doc.format != FORMAT {
        return Err(format!("unknown format {}", doc.format));
    }
    for [n, m, a] in doc.verdict.iter().flatten() {
        let lhs = fib_u(*n) - fib_u(*m);
        let rhs = num_traits::pow(BigInt::from(doc.prime), *a as usize);
        if n <= m || lhs != rhs {
            return Err(format!("({n},{m},{a}) does not satisfy the equation"));
        }
    }
    let interval = |x: &NumberDoc| -> Result<(Dyadic, Dyadic), String> {
        let lo = x.lo.to_dyadic().ok_or("bad mantissa")?;
        let hi = x.hi.to_dyadic().ok_or("bad mantissa")?;
        if lo > hi {
            return Err(format!("empty interval for {}", x.source));
        }
        Ok((lo, hi))
    };
    for c in &doc.claims {
        let (_, lhs_hi) = interval(&c.lhs)?;
        let (rhs_lo, _) = interval(&c.rhs)?;
        if lhs_hi >= rhs_lo {
            return Err(format!("claim {} is not separated", c.name));
        }
    }
    Ok(())
}

/// Exit code for a finished run.
pub fn exit_code(cert: &ProofCertificate) -> i32 {
    match (&cert.verdict(), &cert.failure) {
        (Some(_), _) => EXIT_CERTIFIED,
        (None, Some(f)) if f.kind == FailureKind::PrecisionExhausted => EXIT_PRECISION,
        _ => EXIT_STAGE_FAILURE,
    }
}

/// Human-readable stage summary; level 2 adds one line per swept `d`.
pub fn summary(cert: &ProofCertificate, verbosity: u8) -> String {
    let mut out = String::new();
    if verbosity == 0 {
        return out;
    }
    let _ = writeln!(out, "p = {}", cert.prime);
    if let Some(s) = &cert.search_solutions {
        let _ = writeln!(out, "search: {} solutions with n <= {}", s.len(), cert.config.search_cap);
    }
    for chain in cert.bound_chain() {
        let _ = writeln!(out, "{chain}");
    }
    if let Some(r) = &cert.round1 {
        let i = &r.instance;
        let _ = writeln!(
            out,
            "reduction 1: q = {}, eps = {}, threshold = {}, so n - m <= {}",
            i.q,
            i.epsilon.decimal(8),
            i.threshold.decimal(10),
            r.d_max
        );
    }
    if let Some(sw) = &cert.sweep {
        let c = &sw.chosen;
        let _ = writeln!(
            out,
            "reduction 2: q = {}, exceptions {:?}, threshold = {}",
            c.q,
            c.exceptions,
            sw.threshold.decimal(10)
        );
        if verbosity >= 2 {
            for row in &c.rows {
                let eps = row.epsilon.as_ref().map(|e| e.decimal(8)).unwrap_or_else(|| "-".into());
                let _ = writeln!(out, "  d = {:>4}  eps = {eps:>16}  {}", row.d, row.status.name());
            }
        }
    }
    for r in cert.residual_cases.iter().flatten() {
        let _ = writeln!(out, "residual d = {}: {} ({})", r.d, r.rule.name(), r.witness_value);
    }
    match (cert.verdict(), &cert.failure) {
        (Some(v), _) => {
            let list: Vec<String> = v.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "verdict: {}", list.join(" "));
        }
        (None, Some(f)) => {
            let _ = writeln!(out, "failed at {} ({}): {}", f.stage.name(), f.kind.name(), f.message);
        }
        (None, None) => {}
    }
    out
}

/// Entry point shared by the binary and tests; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let inv = match parse_args(argv) {
        Ok(inv) => inv,
        Err(CliError::Info(text)) => {
            print!("{text}");
            return EXIT_CERTIFIED;
        }
        Err(e) => {
            eprintln!("{e}");
            return EXIT_USAGE;
        }
    };
    let cert = run_full_proof(&inv.config());
    print!("{}", summary(&cert, inv.verbosity));
    if let Some(path) = &inv.output_path {
        if let Err(e) = emit_certificate(&cert, path) {
            eprintln!("{e}");
            return EXIT_STAGE_FAILURE;
        }
    }
    exit_code(&cert)
}
