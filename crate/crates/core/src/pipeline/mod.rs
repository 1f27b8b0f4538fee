//! The complete argument for one prime, as an ordered list of certified
//! stages.
//!
//! 1. exhaustive search for `n <= search_cap`;
//! 2. the shapes `n - m = 1`, `n - m = 2`, `m = 0`, for every `n`;
//! 3. two Matveev bounds, combined into an absolute cap on `n`;
//! 4. a reduction that bounds `n - m`;
//! 5. a smaller cap on `n` from that bound;
//! 6. a reduction sweep over `mu_d` that pushes `n` below the search cap;
//! 7. elimination of the `d` values the sweep could not handle.
//!
//! Any stage that cannot certify stops the run; the certificate then names
//! the stage and carries no verdict.

pub mod cases;

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub use cases::{
    brute_force_search, eliminate_residual, small_case_split, ResidualElimination, ResidualRule, SmallCaseEntry,
    SmallCaseRule,
};

use crate::matveev::{
    derive_eta3_inequality, derive_nm_inequality, reduced_coefficient, reference_log_squared_coefficient,
    relax_quadratic, solve_self_referential, APolicy, BoundChain, BoundStage, CapKind, Eta3Inequality, MatveevError,
    NmInequality, QuadraticLogBound, Relaxation,
};
use crate::realnum::{constants, CertifiedReal, EvalContext, Expr, PrecisionLadder, RealError};
use crate::reduction::{
    cf_expand, gamma_for, mu_sqrt5, reduce, sweep_mu_family, ContinuedFraction, ReductionError, ReductionInstance,
    ReductionParams, SweepParams, SweepResult, MAX_ATTEMPTS,
};
use crate::sequences::{is_prime, SolutionTriple};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("search cap must be at least 10, got {0}")]
    SearchCapTooSmall(u64),
    #[error("no implemented rule eliminates n - m = {0}")]
    UnhandledResidual(u64),
    #[error("side condition failed: {0}")]
    SideCondition(String),
    #[error("caps out of order: {0}")]
    StageOrdering(String),
    #[error("reduction leaves n < {cap}, above the search range")]
    ReductionInsufficient { cap: BigInt },
    #[error("solution {0} does not satisfy the equation")]
    BadSolution(SolutionTriple),
    #[error(transparent)]
    Matveev(#[from] MatveevError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Real(#[from] RealError),
}

impl PipelineError {
    pub fn kind(&self) -> FailureKind {
        match self {
            PipelineError::Real(_)
            | PipelineError::Matveev(MatveevError::Real(_))
            | PipelineError::Reduction(ReductionError::Real(_)) => FailureKind::PrecisionExhausted,
            PipelineError::UnhandledResidual(_) => FailureKind::UnhandledResidual,
            PipelineError::Reduction(ReductionError::AttemptsExhausted { .. }) => FailureKind::SweepNontermination,
            PipelineError::StageOrdering(_) => FailureKind::StageOrdering,
            _ => FailureKind::StageFailure,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    PrecisionExhausted,
    UnhandledResidual,
    SweepNontermination,
    StageOrdering,
    StageFailure,
}

impl FailureKind {
    pub fn name(self) -> &'static str {
        match self {
            FailureKind::PrecisionExhausted => "precision_exhausted",
            FailureKind::UnhandledResidual => "unhandled_residual",
            FailureKind::SweepNontermination => "sweep_nontermination",
            FailureKind::StageOrdering => "stage_ordering",
            FailureKind::StageFailure => "stage_failure",
        }
    }
}

/// Stages in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Config,
    Search,
    SmallCases,
    Matveev,
    ReductionRound1,
    ReducedCap,
    ReductionRound2,
    Residuals,
    Verdict,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Config,
        Stage::Search,
        Stage::SmallCases,
        Stage::Matveev,
        Stage::ReductionRound1,
        Stage::ReducedCap,
        Stage::ReductionRound2,
        Stage::Residuals,
        Stage::Verdict,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Search => "search",
            Stage::SmallCases => "small_cases",
            Stage::Matveev => "matveev",
            Stage::ReductionRound1 => "reduction_round1",
            Stage::ReducedCap => "reduced_cap",
            Stage::ReductionRound2 => "reduction_round2",
            Stage::Residuals => "residuals",
            Stage::Verdict => "verdict",
        }
    }
}

/// How the `(log n)^2` coefficient is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RelaxationMode {
    /// The reference coefficient when one exists, else the tight one.
    #[default]
    PreferReference,
    Tight,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub prime: u64,
    pub search_cap: u64,
    pub ladder: PrecisionLadder,
    pub a_policy: APolicy,
    pub relaxation: RelaxationMode,
    pub min_epsilon: BigRational,
    pub emit_path: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn new(prime: u64) -> Self {
        PipelineConfig {
            prime,
            search_cap: 200,
            ladder: PrecisionLadder::default(),
            a_policy: APolicy::default(),
            relaxation: RelaxationMode::default(),
            min_epsilon: SweepParams::default_min_epsilon(),
            emit_path: None,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if !is_prime(self.prime) {
            return Err(PipelineError::NotPrime(self.prime));
        }
        if self.search_cap < 10 {
            return Err(PipelineError::SearchCapTooSmall(self.search_cap));
        }
        Ok(())
    }
}

/// A certified inequality `lhs < rhs` used as a side condition.
#[derive(Clone, Debug)]
pub struct Claim {
    pub name: &'static str,
    pub lhs: CertifiedReal,
    pub rhs: CertifiedReal,
    /// Set on inequalities that hold with visible slack and could be
    /// tightened.
    pub slack_note: Option<&'static str>,
}

/// Output of the Matveev stage.
#[derive(Clone, Debug)]
pub struct MatveevStage {
    pub nm: NmInequality,
    pub eta3: Eta3Inequality,
    pub quadratic: QuadraticLogBound,
    pub relaxation: Relaxation,
    pub absolute: BoundChain,
}

#[derive(Clone, Debug)]
pub struct RoundOne {
    pub instance: ReductionInstance,
    /// Largest `n - m` left: `omega_cap - 1`.
    pub d_max: u64,
}

#[derive(Clone, Debug)]
pub struct StageFailure {
    pub stage: Stage,
    pub kind: FailureKind,
    pub message: String,
}

/// Everything one run established, in stage order.
#[derive(Clone, Debug)]
pub struct ProofCertificate {
    pub prime: u64,
    pub config: PipelineConfig,
    pub search_solutions: Option<Vec<SolutionTriple>>,
    pub small_cases: Option<Vec<SmallCaseEntry>>,
    pub matveev: Option<MatveevStage>,
    pub round1: Option<RoundOne>,
    pub reduced: Option<BoundChain>,
    pub sweep: Option<SweepResult>,
    pub residual_cases: Option<Vec<ResidualElimination>>,
    pub claims: Vec<Claim>,
    pub failure: Option<StageFailure>,
    verdict: Option<Vec<SolutionTriple>>,
}

impl ProofCertificate {
    fn empty(config: &PipelineConfig) -> Self {
        ProofCertificate {
            prime: config.prime,
            config: config.clone(),
            search_solutions: None,
            small_cases: None,
            matveev: None,
            round1: None,
            reduced: None,
            sweep: None,
            residual_cases: None,
            claims: Vec::new(),
            failure: None,
            verdict: None,
        }
    }

    /// The certified solution set, or `None` if some stage failed.
    pub fn verdict(&self) -> Option<&[SolutionTriple]> {
        self.verdict.as_deref()
    }

    /// All bound chains in stage order.
    pub fn bound_chain(&self) -> Vec<&BoundChain> {
        let mut out = Vec::new();
        if let Some(m) = &self.matveev {
            out.push(&m.nm.chain);
            out.push(&m.absolute);
        }
        if let Some(r) = &self.reduced {
            out.push(r);
        }
        out
    }

    /// Stages that completed.
    pub fn completed_stages(&self) -> Vec<Stage> {
        let config_ok = self.failure.as_ref().is_none_or(|f| f.stage != Stage::Config);
        let done = [
            (Stage::Config, config_ok),
            (Stage::Search, self.search_solutions.is_some()),
            (Stage::SmallCases, self.small_cases.is_some()),
            (Stage::Matveev, self.matveev.is_some()),
            (Stage::ReductionRound1, self.round1.is_some()),
            (Stage::ReducedCap, self.reduced.is_some()),
            (Stage::ReductionRound2, self.sweep.is_some()),
            (Stage::Residuals, self.residual_cases.is_some()),
            (Stage::Verdict, self.verdict.is_some()),
        ];
        done.into_iter().filter(|(_, ok)| *ok).map(|(s, _)| s).collect()
    }

    /// Solutions with `a = 0`, reported but trivial.
    pub fn trivial_solutions(&self) -> Vec<SolutionTriple> {
        self.verdict().unwrap_or_default().iter().filter(|s| s.a == 0).copied().collect()
    }
}

fn claim(
    name: &'static str,
    lhs: Expr,
    rhs: Expr,
    slack_note: Option<&'static str>,
    ctx: &EvalContext,
) -> Result<Claim, PipelineError> {
    if !ctx.less(&lhs, &rhs) {
        return Err(PipelineError::SideCondition(format!("{name}: {lhs} < {rhs}")));
    }
    Ok(Claim { name, lhs: ctx.eval(&lhs)?, rhs: ctx.eval(&rhs)?, slack_note })
}

/// The inequalities the argument relies on besides the two theorems, with
/// `n > cap`, `m >= 1` and `n - m >= 3`.
fn side_conditions(cap: u64, ctx: &EvalContext) -> Result<Vec<Claim>, PipelineError> {
    let alpha = constants::alpha();
    let beta_abs = (Expr::int(1) - alpha.clone()).abs();
    let la = constants::ln_alpha();
    let n0 = cap as i64 + 1;
    Ok(vec![
        claim(
            "sqrt5_times_one_plus_half_inverse_alpha_below_4",
            constants::sqrt5() * (Expr::int(1) + Expr::int(1) / (Expr::int(2) * alpha.clone())),
            Expr::int(4),
            None,
            ctx,
        )?,
        claim("four_over_alpha_cubed_below_19_20", Expr::int(4) / alpha.powi(3), Expr::ratio(19, 20), None, ctx)?,
        claim(
            "beta_powers_below_two_thirds",
            beta_abs.clone() + beta_abs.powi(n0),
            Expr::ratio(2, 3),
            None,
            ctx,
        )?,
        claim("inverse_alpha_below_two_thirds", Expr::int(1) / alpha.clone(), Expr::ratio(2, 3), None, ctx)?,
        claim(
            "sqrt5_below_3",
            constants::sqrt5(),
            Expr::int(3),
            Some("the chain may keep sqrt5 in place of 3"),
            ctx,
        )?,
        claim("three_over_alpha_power_below_half", Expr::int(3) / alpha.powi(n0), Expr::ratio(1, 2), None, ctx)?,
        claim("eighty_over_log_alpha_at_most_166_3", Expr::int(80) / la.clone(), Expr::decimal("166.3"), None, ctx)?,
        claim("six_over_log_alpha_at_most_13", Expr::int(6) / la, Expr::int(13), None, ctx)?,
    ])
}

/// Run every stage for `config.prime`.
pub fn run_full_proof(config: &PipelineConfig) -> ProofCertificate {
    let mut cert = ProofCertificate::empty(config);
    let mut stage = Stage::Config;
    if let Err(e) = run_stages(config, &mut cert, &mut stage) {
        cert.failure = Some(StageFailure { stage, kind: e.kind(), message: e.to_string() });
        cert.verdict = None;
    }
    cert
}

fn run_stages(config: &PipelineConfig, cert: &mut ProofCertificate, stage: &mut Stage) -> Result<(), PipelineError> {
    config.validate()?;
    let p = config.prime;
    let cap = config.search_cap;
    let ctx = EvalContext::new(config.ladder);

    *stage = Stage::Search;
    let search = brute_force_search(p, cap);
    for s in &search {
        if !s.holds_for(p) || (s.n >= 2 && u64::from(s.a) >= s.n) {
            return Err(PipelineError::BadSolution(*s));
        }
    }
    cert.search_solutions = Some(search);

    *stage = Stage::SmallCases;
    cert.small_cases = Some(small_case_split(p));

    *stage = Stage::Matveev;
    cert.claims = side_conditions(cap, &ctx)?;
    let nm = derive_nm_inequality(p, config.a_policy, &ctx)?;
    let eta3 = derive_eta3_inequality(p, config.a_policy, &ctx)?;
    let quadratic = QuadraticLogBound::from_coefficients(&nm.chain.coefficient, &eta3.per_unit, &ctx)?;
    let reference = match config.relaxation {
        RelaxationMode::PreferReference => reference_log_squared_coefficient(p),
        RelaxationMode::Tight => None,
    };
    let relaxation = relax_quadratic(&quadratic, &BigInt::from(cap + 1), reference.as_ref(), &ctx)?;
    let n1 = solve_self_referential(CapKind::LogSquared, &relaxation.coefficient, &ctx)?;
    let absolute = BoundChain {
        stage: BoundStage::NAbsolute,
        coefficient: relaxation.coefficient.clone(),
        resulting_cap: Some(n1.clone()),
    };
    cert.matveev = Some(MatveevStage { nm, eta3: eta3.clone(), quadratic, relaxation, absolute });

    *stage = Stage::ReductionRound1;
    let gamma = gamma_for(p);
    let gamma_value = ctx.eval(&gamma)?;
    let cf = cf_expand(&gamma_value, &(&n1 * 6), MAX_ATTEMPTS, &ctx)?;
    let params = ReductionParams {
        gamma: gamma.clone(),
        mu: mu_sqrt5(),
        a: crate::realnum::parse_decimal("166.3").expect("literal"),
        b: constants::alpha(),
        m: n1.clone(),
    };
    let instance = reduce(&params, &cf, &ctx)?;
    let omega = instance.omega_cap.clone().expect("certified instances carry a cap");
    let d_max = (omega - 1u32).to_u64().ok_or_else(|| PipelineError::StageOrdering("n - m cap overflows".into()))?;
    if d_max < 3 {
        return Err(PipelineError::StageOrdering(format!("n - m <= {d_max} leaves nothing to sweep")));
    }
    cert.round1 = Some(RoundOne { instance, d_max });

    *stage = Stage::ReducedCap;
    let k3 = ctx.eval(&reduced_coefficient(&eta3.per_unit, d_max))?;
    let n2 = solve_self_referential(CapKind::OnePlusLog, &k3, &ctx)?;
    if n2 > n1 {
        return Err(PipelineError::StageOrdering(format!("reduced cap {n2} exceeds absolute cap {n1}")));
    }
    cert.reduced = Some(BoundChain { stage: BoundStage::NAfterReduction, coefficient: k3, resulting_cap: Some(n2.clone()) });

    *stage = Stage::ReductionRound2;
    let sweep = round_two(p, d_max, &n2, &cf, config, &ctx)?;
    if sweep.omega_cap > n2 {
        return Err(PipelineError::StageOrdering(format!("sweep cap {} exceeds reduced cap {n2}", sweep.omega_cap)));
    }
    // no solution with n >= omega_cap, and every remaining one has n > cap
    if sweep.omega_cap > BigInt::from(cap + 1) {
        return Err(PipelineError::ReductionInsufficient { cap: sweep.omega_cap.clone() });
    }
    let exceptions = sweep.exceptions().clone();
    cert.sweep = Some(sweep);

    *stage = Stage::Residuals;
    let residuals = exceptions.iter().map(|&d| eliminate_residual(p, d, cap)).collect::<Result<Vec<_>, _>>()?;
    let handled: BTreeSet<u64> = residuals.iter().map(|r| r.d).collect();
    if handled != exceptions {
        return Err(PipelineError::StageOrdering("residual coverage differs from sweep exceptions".into()));
    }
    cert.residual_cases = Some(residuals);

    *stage = Stage::Verdict;
    let mut verdict: BTreeSet<SolutionTriple> = cert.search_solutions.iter().flatten().copied().collect();
    for entry in cert.small_cases.iter().flatten() {
        verdict.extend(entry.solutions.iter().copied());
    }
    for s in &verdict {
        if !s.holds_for(p) {
            return Err(PipelineError::BadSolution(*s));
        }
    }
    cert.verdict = Some(verdict.into_iter().collect());
    Ok(())
}

fn round_two(
    p: u64,
    d_max: u64,
    n2: &BigInt,
    cf: &ContinuedFraction,
    config: &PipelineConfig,
    ctx: &EvalContext,
) -> Result<SweepResult, PipelineError> {
    let params = SweepParams {
        p,
        d_range: 3..=d_max,
        m: n2.clone(),
        a: BigRational::from_integer(13.into()),
        min_epsilon: config.min_epsilon.clone(),
    };
    let cap = config.search_cap;
    let admissible = |ex: &BTreeSet<u64>| ex.iter().all(|&d| eliminate_residual(p, d, cap).is_ok());
    Ok(sweep_mu_family(&params, cf, &admissible, ctx)?)
}
