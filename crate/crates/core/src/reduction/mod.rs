//! Continued fractions and the Dujella–Pethő reduction.
//!
//! For `gamma` irrational, `M` a bound on `m`, and a convergent denominator
//! `q > 6M`, put `eps = ||mu q|| - M ||gamma q||`. When `eps > 0` the
//! inequality `0 < |m gamma - n + mu| < A B^-w` has no solution with
//! `m <= M` and `w >= log(A q / eps) / log B`.

mod cf;

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use cf::{cf_expand, ContinuedFraction};

use crate::realnum::{constants, nearest_int_distance, width_bits, CertifiedReal, Dyadic, EvalContext, Expr, RealError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("{0} is rational; its continued fraction terminates")]
    NotIrrational(String),
    #[error("convergent denominator {q} is not above 6M = {six_m}")]
    DenominatorTooSmall { q: BigInt, six_m: BigInt },
    #[error("no convergent certified a positive epsilon in {attempts} attempts")]
    AttemptsExhausted { attempts: usize },
    #[error("continued fraction ends before index {0}")]
    ShortExpansion(usize),
    #[error("A must be positive and B greater than 1")]
    BadParameters,
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Convergents tried after the first `q > 6M` before giving up.
pub const MAX_ATTEMPTS: usize = 10;

/// The fixed data of one reduction: `|m gamma - n + mu| < A B^-w`, `m <= M`.
#[derive(Clone, Debug)]
pub struct ReductionParams {
    pub gamma: Expr,
    pub mu: Expr,
    pub a: BigRational,
    pub b: Expr,
    pub m: BigInt,
}

impl ReductionParams {
    pub fn six_m(&self) -> BigInt {
        &self.m * 6
    }
}

/// One certified application of the lemma.
#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub gamma: CertifiedReal,
    pub mu: CertifiedReal,
    pub a: BigRational,
    pub b: CertifiedReal,
    pub m: BigInt,
    pub convergent_index: usize,
    pub q: BigInt,
    pub mu_distance: CertifiedReal,
    pub gamma_distance: CertifiedReal,
    pub epsilon: CertifiedReal,
    /// `log(A q / eps_lo) / log B`.
    pub threshold: CertifiedReal,
    /// `ceil` of the threshold's upper endpoint; no solution has `w >=
    /// omega_cap`.
    pub omega_cap: Option<BigInt>,
}

/// Why a convergent did not certify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RetryReason {
    NonPositive,
    Unresolved,
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum StepOutcome {
    Certified(ReductionInstance),
    Retry { q: BigInt, reason: RetryReason, epsilon: Option<CertifiedReal> },
}

/// Width for `eps`: fine enough that positive values are certified well
/// before they are reported.
fn epsilon_width() -> BigRational {
    width_bits(64)
}

/// `||x q||` with `nearest`, accurate to `2^-bits`.
fn distance(x: &Expr, q: &BigInt, bits: u32, ctx: &EvalContext) -> Result<(CertifiedReal, BigInt), RealError> {
    let w = width_bits(bits);
    let xq = crate::realnum::eval_with(&(x.clone() * Expr::int(q.clone())), &w, &ctx.ladder)?;
    let d = nearest_int_distance(&xq, &w, &ctx.ladder)?;
    Ok((d.value, d.nearest))
}

/// `eps = ||mu q|| - M ||gamma q||` as a certified real, together with the
/// two distances.
fn epsilon(params: &ReductionParams, q: &BigInt, ctx: &EvalContext) -> Result<[CertifiedReal; 3], RealError> {
    let (dm, _) = distance(&params.mu, q, 80, ctx)?;
    let (dg, _) = distance(&params.gamma, q, 80 + params.m.bits() as u32, ctx)?;
    let expr = dm.source().clone() - Expr::int(params.m.clone()) * dg.source().clone();
    let eps = crate::realnum::eval_with(&expr, &epsilon_width(), &ctx.ladder)?;
    Ok([dm, dg, eps])
}

fn threshold_expr(a: &BigRational, q: &BigInt, eps_lo: &Dyadic, b: &Expr) -> Expr {
    (Expr::rational(a.clone()) * Expr::int(q.clone()) / Expr::dyadic(eps_lo.clone())).ln() / b.ln()
}

/// One application of the lemma at the convergent `k` of `cf`.
pub fn dujella_petho_step(
    params: &ReductionParams,
    cf: &ContinuedFraction,
    k: usize,
    ctx: &EvalContext,
) -> Result<StepOutcome, ReductionError> {
    let q = cf.denominator(k).ok_or(ReductionError::ShortExpansion(k))?.clone();
    if q <= params.six_m() {
        return Err(ReductionError::DenominatorTooSmall { q, six_m: params.six_m() });
    }
    let b = ctx.eval(&params.b)?;
    if params.a <= BigRational::from_integer(0.into()) || !b.lo().gt(&Dyadic::one()) {
        return Err(ReductionError::BadParameters);
    }
    let [mu_distance, gamma_distance, eps] = match epsilon(params, &q, ctx) {
        Ok(v) => v,
        Err(_) => return Ok(StepOutcome::Retry { q, reason: RetryReason::Unresolved, epsilon: None }),
    };
    if !eps.is_positive() {
        let reason = if eps.is_negative() || eps.hi().is_zero() { RetryReason::NonPositive } else { RetryReason::Unresolved };
        return Ok(StepOutcome::Retry { q, reason, epsilon: Some(eps) });
    }
    let threshold = ctx.eval(&threshold_expr(&params.a, &q, eps.lo(), &params.b))?;
    let omega_cap = Some(threshold.hi().ceil());
    Ok(StepOutcome::Certified(ReductionInstance {
        gamma: ctx.eval(&params.gamma)?,
        mu: ctx.eval(&params.mu)?,
        a: params.a.clone(),
        b,
        m: params.m.clone(),
        convergent_index: k,
        q,
        mu_distance,
        gamma_distance,
        epsilon: eps,
        threshold,
        omega_cap,
    }))
}

/// Try the first convergent with `q > 6M` and up to `MAX_ATTEMPTS - 1` after
/// it, returning the first that certifies.
pub fn reduce(params: &ReductionParams, cf: &ContinuedFraction, ctx: &EvalContext) -> Result<ReductionInstance, ReductionError> {
    let start = cf.first_index_above(&params.six_m()).ok_or(ReductionError::ShortExpansion(cf.terms().len()))?;
    for k in start..start + MAX_ATTEMPTS {
        if cf.denominator(k).is_none() {
            return Err(ReductionError::ShortExpansion(k));
        }
        if let StepOutcome::Certified(inst) = dujella_petho_step(params, cf, k, ctx)? {
            return Ok(inst);
        }
    }
    Err(ReductionError::AttemptsExhausted { attempts: MAX_ATTEMPTS })
}

/// `mu_d = log(sqrt5 / (1 - alpha^-d)) / log alpha`.
pub fn mu_family(d: u64) -> Expr {
    let alpha = constants::alpha();
    let inner = constants::sqrt5() / (Expr::int(1) - Expr::int(1) / alpha.powi(d as i64));
    inner.ln() / constants::ln_alpha()
}

/// `mu = log(sqrt5) / log alpha`, the `d -> infinity` limit of the family.
pub fn mu_sqrt5() -> Expr {
    constants::sqrt5().ln() / constants::ln_alpha()
}

/// `gamma = log p / log alpha`.
pub fn gamma_for(p: u64) -> Expr {
    Expr::int(p).ln() / constants::ln_alpha()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Positive,
    NonPositive,
    Unresolved,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Positive => "positive",
            RowStatus::NonPositive => "non_positive",
            RowStatus::Unresolved => "unresolved",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub d: u64,
    pub epsilon: Option<CertifiedReal>,
    pub status: RowStatus,
}

/// The sweep at one fixed convergent.
#[derive(Clone, Debug)]
pub struct SweepAttempt {
    pub convergent_index: usize,
    pub q: BigInt,
    pub rows: Vec<SweepRow>,
    pub exceptions: BTreeSet<u64>,
    /// Smallest positive `eps` and its `d`.
    pub eps_min: Option<(u64, CertifiedReal)>,
    /// Largest positive `eps` and its `d`.
    pub eps_max: Option<(u64, CertifiedReal)>,
}

impl SweepAttempt {
    /// Why this attempt was passed over, if it was.
    pub fn rejection(&self, min_epsilon: &BigRational, admissible: &dyn Fn(&BTreeSet<u64>) -> bool) -> Option<&'static str> {
        if !admissible(&self.exceptions) {
            return Some("exceptions not admissible");
        }
        match &self.eps_min {
            None => Some("no positive epsilon"),
            Some((_, e)) if &e.lo().to_rational() < min_epsilon => Some("epsilon below floor"),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepParams {
    pub p: u64,
    pub d_range: RangeInclusive<u64>,
    pub m: BigInt,
    pub a: BigRational,
    /// Smallest acceptable `eps` lower endpoint at the chosen convergent.
    pub min_epsilon: BigRational,
}

impl SweepParams {
    /// Floor of `1/250` on `eps`; convergents with smaller values are passed
    /// over for the next one.
    pub fn default_min_epsilon() -> BigRational {
        BigRational::new(1.into(), 250.into())
    }
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub chosen: SweepAttempt,
    /// Earlier attempts, each with the reason it was passed over.
    pub rejected: Vec<(SweepAttempt, &'static str)>,
    pub a: BigRational,
    pub m: BigInt,
    /// `log(A q / eps_min_lo) / log alpha`.
    pub threshold: CertifiedReal,
    pub omega_cap: BigInt,
}

impl SweepResult {
    pub fn exceptions(&self) -> &BTreeSet<u64> {
        &self.chosen.exceptions
    }
}

/// `eps(mu_d)` for every `d` against the single denominator `q`.
pub fn sweep_at(params: &SweepParams, cf: &ContinuedFraction, k: usize, ctx: &EvalContext) -> Result<SweepAttempt, ReductionError> {
    let q = cf.denominator(k).ok_or(ReductionError::ShortExpansion(k))?.clone();
    let gamma = gamma_for(params.p);
    let mut rows = Vec::new();
    for d in params.d_range.clone() {
        let rp = ReductionParams {
            gamma: gamma.clone(),
            mu: mu_family(d),
            a: params.a.clone(),
            b: constants::alpha(),
            m: params.m.clone(),
        };
        let row = match epsilon(&rp, &q, ctx) {
            Ok([_, _, eps]) => {
                let status = if eps.is_positive() {
                    RowStatus::Positive
                } else if eps.is_negative() {
                    RowStatus::NonPositive
                } else {
                    RowStatus::Unresolved
                };
                SweepRow { d, epsilon: Some(eps), status }
            }
            Err(_) => SweepRow { d, epsilon: None, status: RowStatus::Unresolved },
        };
        rows.push(row);
    }
    let exceptions = rows.iter().filter(|r| r.status != RowStatus::Positive).map(|r| r.d).collect();
    let positive = || rows.iter().filter(|r| r.status == RowStatus::Positive).map(|r| (r.d, r.epsilon.clone().unwrap()));
    let eps_min = positive().min_by(|a, b| a.1.lo().cmp(b.1.lo()));
    let eps_max = positive().max_by(|a, b| a.1.hi().cmp(b.1.hi()));
    Ok(SweepAttempt { convergent_index: k, q, rows, exceptions, eps_min, eps_max })
}

/// Sweep `mu_d` over `d_range`, walking convergents from the first `q > 6M`
/// until one gives admissible exceptions and `eps_min >= min_epsilon`.
pub fn sweep_mu_family(
    params: &SweepParams,
    cf: &ContinuedFraction,
    admissible: &dyn Fn(&BTreeSet<u64>) -> bool,
    ctx: &EvalContext,
) -> Result<SweepResult, ReductionError> {
    let six_m = &params.m * 6;
    let start = cf.first_index_above(&six_m).ok_or(ReductionError::ShortExpansion(cf.terms().len()))?;
    let mut rejected = Vec::new();
    for k in start..start + MAX_ATTEMPTS {
        let attempt = sweep_at(params, cf, k, ctx)?;
        if let Some(reason) = attempt.rejection(&params.min_epsilon, admissible) {
            rejected.push((attempt, reason));
            continue;
        }
        let (_, eps) = attempt.eps_min.clone().expect("checked by rejection");
        let threshold = ctx.eval(&threshold_expr(&params.a, &attempt.q, eps.lo(), &constants::alpha()))?;
        let omega_cap = threshold.hi().ceil();
        return Ok(SweepResult { chosen: attempt, rejected, a: params.a.clone(), m: params.m.clone(), threshold, omega_cap });
    }
    Err(ReductionError::AttemptsExhausted { attempts: MAX_ATTEMPTS })
}
