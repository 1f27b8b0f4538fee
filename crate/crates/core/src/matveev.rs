//! Evaluation of Matveev's lower bound for linear forms in logarithms, and the
//! chain of explicit inequalities that turns it into integer caps on `n - m`
//! and `n`.
//!
//! The theorem itself is an axiom here. This module only evaluates
//!
//! ```text
//! 1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + log D) * (1 + log B) * A_1 ... A_t
//! ```
//!
//! for concrete instances, checks the hypotheses on the `A_i`, and solves the
//! resulting self-referential inequalities with certified bisection.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::heights::{eta3_abs_log_expr, eta3_height_expr};
use crate::realnum::{constants, sign_of, CertifiedReal, Comparison, EvalContext, Expr, RealError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MatveevError {
    #[error("an instance needs at least two logarithms, got {0}")]
    TooFewTerms(usize),
    #[error("field degree must be positive")]
    ZeroDegree,
    #[error("B must be at least 3, got {0}")]
    BTooSmall(BigInt),
    #[error("A_{index} = {value} violates {rule}")]
    ConstantTooSmall { index: usize, value: String, rule: &'static str },
    #[error("coefficient must be positive")]
    NonPositiveCoefficient,
    #[error("relaxation coefficient {0} does not dominate the quadratic bound")]
    RelaxationFails(String),
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Why the linear form is known to be nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonvanishingWitness {
    /// `Gamma = 0` would force `alpha^(2n)` to be rational.
    AlphaPowerIrrational,
    /// `Gamma = 0` would force `beta^n = beta^m` with `n > m`.
    BetaPowerCollision,
}

impl NonvanishingWitness {
    pub fn name(self) -> &'static str {
        match self {
            NonvanishingWitness::AlphaPowerIrrational => "alpha_power_irrational",
            NonvanishingWitness::BetaPowerCollision => "beta_power_collision",
        }
    }
}

/// One `eta_i` of the linear form with its constant `A_i`.
#[derive(Clone, Debug)]
pub struct MatveevTerm {
    pub label: String,
    pub a: Expr,
    /// An upper bound for `h(eta_i)`.
    pub height: Expr,
    /// An upper bound for `|log eta_i|`.
    pub abs_log: Expr,
}

#[derive(Clone, Debug)]
pub struct MatveevInstance {
    terms: Vec<MatveevTerm>,
    degree: u32,
    b_bound: BigInt,
    witness: NonvanishingWitness,
}

/// `1.4 * 30^(t+3) * t^4.5 * D^2`.
pub fn matveev_constant(t: u32, degree: u32) -> Expr {
    let thirty = num_traits::pow(BigInt::from(30), t as usize + 3);
    let t4 = num_traits::pow(BigInt::from(t), 4);
    Expr::ratio(7, 5)
        * Expr::int(thirty)
        * Expr::int(t4)
        * Expr::int(t).sqrt()
        * Expr::int(u64::from(degree) * u64::from(degree))
}

impl MatveevInstance {
    /// Build an instance, checking `A_i >= max(D h(eta_i), |log eta_i|, 0.16)`
    /// with certified comparisons.
    pub fn new(
        terms: Vec<MatveevTerm>,
        degree: u32,
        b_bound: BigInt,
        witness: NonvanishingWitness,
        ctx: &EvalContext,
    ) -> Result<Self, MatveevError> {
        if terms.len() < 2 {
            return Err(MatveevError::TooFewTerms(terms.len()));
        }
        if degree == 0 {
            return Err(MatveevError::ZeroDegree);
        }
        if b_bound < BigInt::from(3) {
            return Err(MatveevError::BTooSmall(b_bound));
        }
        for (i, term) in terms.iter().enumerate() {
            let checks = [
                (Expr::ratio(4, 25), "A_i >= 0.16"),
                (Expr::int(degree) * term.height.clone(), "A_i >= D h(eta_i)"),
                (term.abs_log.clone(), "A_i >= |log eta_i|"),
            ];
            for (lower, rule) in checks {
                if !at_least(&term.a, &lower, ctx)? {
                    return Err(MatveevError::ConstantTooSmall { index: i + 1, value: term.a.to_string(), rule });
                }
            }
        }
        Ok(MatveevInstance { terms, degree, b_bound, witness })
    }

    pub fn t(&self) -> u32 {
        self.terms.len() as u32
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn b_bound(&self) -> &BigInt {
        &self.b_bound
    }

    pub fn witness(&self) -> NonvanishingWitness {
        self.witness
    }

    pub fn terms(&self) -> &[MatveevTerm] {
        &self.terms
    }

    /// `C (1 + log D) A_1 ... A_t`, the factor multiplying `1 + log B`.
    pub fn coefficient(&self) -> Expr {
        self.partial_coefficient(None)
    }

    /// The coefficient with one `A_i` left out, for bounds that keep that
    /// constant symbolic.
    pub fn coefficient_without(&self, index: usize) -> Expr {
        self.partial_coefficient(Some(index))
    }

    fn partial_coefficient(&self, skip: Option<usize>) -> Expr {
        let d = Expr::int(self.degree);
        let mut acc = matveev_constant(self.t(), self.degree) * (Expr::int(1) + d.ln());
        for (i, term) in self.terms.iter().enumerate() {
            if Some(i) != skip {
                acc = acc * term.a.clone();
            }
        }
        acc
    }

    /// The exponent `C (1 + log D)(1 + log B) A_1 ... A_t`; the linear form
    /// is at least `exp` of minus this value.
    pub fn matveev_log_bound(&self, ctx: &EvalContext) -> Result<CertifiedReal, MatveevError> {
        let expr = self.coefficient() * (Expr::int(1) + Expr::int(self.b_bound.clone()).ln());
        Ok(ctx.eval(&expr)?)
    }
}

/// Certified `x >= y`. Equal values are accepted only when both sides are
/// the same expression.
fn at_least(x: &Expr, y: &Expr, ctx: &EvalContext) -> Result<bool, MatveevError> {
    let cx = ctx.eval(x)?;
    let cy = ctx.eval(y)?;
    Ok(match ctx.compare(&cx, &cy) {
        Comparison::Greater => true,
        Comparison::Less => false,
        Comparison::Unresolved { identical_source } => identical_source,
    })
}

/// How the constants `A_i` are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum APolicy {
    /// `max(D h, |log eta|, 0.16)` rounded up to a multiple of 0.05.
    #[default]
    Rounded,
    /// `max(D h, |log eta|, 0.16)` itself.
    Exact,
}

impl APolicy {
    pub fn name(self) -> &'static str {
        match self {
            APolicy::Rounded => "rounded",
            APolicy::Exact => "exact",
        }
    }
}

/// Degree of `Q(sqrt 5)`.
pub const DEGREE: u32 = 2;

fn choose_a(height: &Expr, abs_log: &Expr, policy: APolicy, ctx: &EvalContext) -> Result<Expr, MatveevError> {
    let dh = Expr::int(DEGREE) * height.clone();
    let mut best = dh;
    for cand in [abs_log.clone(), Expr::ratio(4, 25)] {
        if !at_least(&best, &cand, ctx)? {
            best = cand;
        }
    }
    Ok(match policy {
        APolicy::Exact => best,
        APolicy::Rounded => {
            let hi = ctx.eval(&best)?.hi().to_rational();
            let step = BigRational::new(1.into(), 20.into());
            Expr::rational((hi / &step).ceil() * step)
        }
    })
}

fn prime_term(p: u64, policy: APolicy, ctx: &EvalContext) -> Result<MatveevTerm, MatveevError> {
    let log_p = Expr::int(p).ln();
    let a = choose_a(&log_p, &log_p, policy, ctx)?;
    Ok(MatveevTerm { label: p.to_string(), a, height: log_p.clone(), abs_log: log_p })
}

fn alpha_term(policy: APolicy, ctx: &EvalContext) -> Result<MatveevTerm, MatveevError> {
    let height = constants::ln_alpha() / Expr::int(2);
    // written as D h so the two equal bounds compare as identical
    let abs_log = Expr::int(DEGREE) * height.clone();
    let a = choose_a(&height, &abs_log, policy, ctx)?;
    Ok(MatveevTerm { label: "alpha".into(), a, height, abs_log })
}

fn sqrt5_term(policy: APolicy, ctx: &EvalContext) -> Result<MatveevTerm, MatveevError> {
    let l = Expr::int(5).ln() / Expr::int(2);
    let a = choose_a(&l, &l, policy, ctx)?;
    Ok(MatveevTerm { label: "sqrt5".into(), a, height: l.clone(), abs_log: l })
}

/// The term `sqrt5 (1 - alpha^-d)^-1` with `A_3 = log 20 + d log alpha`.
pub fn eta3_term(d: u64) -> MatveevTerm {
    let height = eta3_height_expr(d);
    MatveevTerm {
        label: format!("sqrt5/(1-alpha^-{d})"),
        a: Expr::int(DEGREE) * height.clone(),
        height,
        abs_log: eta3_abs_log_expr(d),
    }
}

/// Which inequality a [`BoundChain`] records.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStage {
    /// `(n - m) log alpha - log 4 < K (1 + log n)`.
    NmBound,
    /// `n < K (log n)^2`.
    NAbsolute,
    /// `n < K (1 + log n)` once `n - m` is bounded.
    NAfterReduction,
}

impl BoundStage {
    pub fn name(self) -> &'static str {
        match self {
            BoundStage::NmBound => "nm_bound",
            BoundStage::NAbsolute => "n_absolute",
            BoundStage::NAfterReduction => "n_after_reduction",
        }
    }
}

/// Shape of `f` in `n < K f(log n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapKind {
    LogSquared,
    OnePlusLog,
}

impl CapKind {
    fn f(self, l: Expr) -> Expr {
        match self {
            CapKind::LogSquared => l.powi(2),
            CapKind::OnePlusLog => Expr::int(1) + l,
        }
    }

    fn f_prime(self, l: Expr) -> Expr {
        match self {
            CapKind::LogSquared => Expr::int(2) * l,
            CapKind::OnePlusLog => Expr::int(1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundChain {
    pub stage: BoundStage,
    pub coefficient: CertifiedReal,
    /// Every solution has `n < resulting_cap`. `None` for the `n - m` stage,
    /// which only supplies a coefficient.
    pub resulting_cap: Option<BigInt>,
}

/// First Matveev application, to `p^a alpha^-n sqrt5 - 1`.
#[derive(Clone, Debug)]
pub struct NmInequality {
    pub instance: MatveevInstance,
    pub chain: BoundChain,
}

/// `(n - m) log alpha - log 4 < K_1 (1 + log n)`.
pub fn derive_nm_inequality(p: u64, policy: APolicy, ctx: &EvalContext) -> Result<NmInequality, MatveevError> {
    let terms = vec![prime_term(p, policy, ctx)?, alpha_term(policy, ctx)?, sqrt5_term(policy, ctx)?];
    // B = n is symbolic; 3 is the smallest value the hypotheses allow
    let instance = MatveevInstance::new(terms, DEGREE, BigInt::from(3), NonvanishingWitness::AlphaPowerIrrational, ctx)?;
    let coefficient = ctx.eval(&instance.coefficient())?;
    Ok(NmInequality { instance, chain: BoundChain { stage: BoundStage::NmBound, coefficient, resulting_cap: None } })
}

/// Second Matveev application, to `p^a alpha^-n sqrt5 (1 - alpha^(m-n))^-1 - 1`.
#[derive(Clone, Debug)]
pub struct Eta3Inequality {
    /// The instance at `d = 1`. The slack in each hypothesis on `A_3` does
    /// not decrease with `d`, so this validates every `d >= 1`.
    pub instance: MatveevInstance,
    /// `K_2` in `log(alpha^n / 3) < K_2 (1 + log n)(log 20 + d log alpha)`.
    pub per_unit: CertifiedReal,
}

pub fn derive_eta3_inequality(p: u64, policy: APolicy, ctx: &EvalContext) -> Result<Eta3Inequality, MatveevError> {
    let terms = vec![prime_term(p, policy, ctx)?, alpha_term(policy, ctx)?, eta3_term(1)];
    let instance = MatveevInstance::new(terms, DEGREE, BigInt::from(3), NonvanishingWitness::BetaPowerCollision, ctx)?;
    let per_unit = ctx.eval(&instance.coefficient_without(2))?;
    Ok(Eta3Inequality { instance, per_unit })
}

/// `n < c0 + c1 log n + c2 (log n)^2`, from substituting the `n - m` bound
/// into the second Matveev inequality.
#[derive(Clone, Debug)]
pub struct QuadraticLogBound {
    pub c0: CertifiedReal,
    pub c1: CertifiedReal,
    pub c2: CertifiedReal,
}

impl QuadraticLogBound {
    pub fn from_coefficients(k1: &CertifiedReal, k2: &CertifiedReal, ctx: &EvalContext) -> Result<Self, MatveevError> {
        let (k1, k2) = (k1.source().clone(), k2.source().clone());
        let la = constants::ln_alpha();
        let log80 = Expr::int(80).ln();
        let k1k2 = k1 * k2.clone();
        let c2 = k1k2.clone() / la.clone();
        let c1 = (Expr::int(2) * k1k2.clone() + k2.clone() * log80.clone()) / la.clone();
        let c0 = (k1k2 + k2 * log80 + Expr::int(3).ln()) / la;
        Ok(QuadraticLogBound { c0: ctx.eval(&c0)?, c1: ctx.eval(&c1)?, c2: ctx.eval(&c2)? })
    }

    /// `c2 + c1/x + c0/x^2`, the least `K` with the quadratic below
    /// `K (log n)^2` once `log n >= x`.
    pub fn min_log_squared_coefficient(&self, x: &Expr) -> Expr {
        self.c2.source().clone()
            + self.c1.source().clone() / x.clone()
            + self.c0.source().clone() / x.powi(2)
    }
}

/// Where the `(log n)^2` coefficient came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelaxationSource {
    Reference,
    Tight,
}

impl RelaxationSource {
    pub fn name(self) -> &'static str {
        match self {
            RelaxationSource::Reference => "reference",
            RelaxationSource::Tight => "tight",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Relaxation {
    pub coefficient: CertifiedReal,
    pub source: RelaxationSource,
    /// The bound holds for `log n >= threshold`.
    pub threshold: CertifiedReal,
}

/// Reference `(log n)^2` coefficients for the two primes with known answers.
/// They are looser than necessary; the pipeline uses them only after
/// certifying that they dominate the quadratic bound.
pub fn reference_log_squared_coefficient(p: u64) -> Option<BigRational> {
    let digits = match p {
        7 => "1.46212e26",
        13 => "1.55331e26",
        _ => return None,
    };
    crate::realnum::parse_decimal(digits).ok()
}

/// Replace `c0 + c1 L + c2 L^2` by `K L^2` for `L >= log(n_min)`.
///
/// With a reference coefficient the domination `K >= c2 + c1/L + c0/L^2` is
/// certified at `L = log(n_min)`, which suffices since the right side
/// decreases in `L`. Without one, the right side itself is used.
pub fn relax_quadratic(
    q: &QuadraticLogBound,
    n_min: &BigInt,
    reference: Option<&BigRational>,
    ctx: &EvalContext,
) -> Result<Relaxation, MatveevError> {
    let x0 = Expr::int(n_min.clone()).ln();
    let threshold = ctx.eval(&x0)?;
    let kmin = q.min_log_squared_coefficient(&x0);
    match reference {
        Some(k) => {
            let kexpr = Expr::rational(k.clone());
            if !ctx.less(&kmin, &kexpr) {
                return Err(MatveevError::RelaxationFails(k.to_string()));
            }
            Ok(Relaxation { coefficient: ctx.eval(&kexpr)?, source: RelaxationSource::Reference, threshold })
        }
        None => Ok(Relaxation { coefficient: ctx.eval(&kmin)?, source: RelaxationSource::Tight, threshold }),
    }
}

/// `K_3 = K_2 (log 20 + d_max log alpha)/log alpha + log 3/log alpha`, so
/// that `n < K_3 (1 + log n)` whenever `n - m <= d_max`.
pub fn reduced_coefficient(per_unit: &CertifiedReal, d_max: u64) -> Expr {
    let la = constants::ln_alpha();
    per_unit.source().clone() * eta3_term(d_max).a / la.clone() + Expr::int(3).ln() / la
}

/// Least integer `N >= 3` with `x >= K f(log x)` certified at `x = N` and
/// `x - K f(log x)` certified nondecreasing from `N` on. Every `n` with
/// `n < K f(log n)` and `n >= 3` then satisfies `n < N`.
///
/// Points where the comparison cannot be separated count as failures, so the
/// result can only err upward.
pub fn solve_self_referential(kind: CapKind, k: &CertifiedReal, ctx: &EvalContext) -> Result<BigInt, MatveevError> {
    if !k.is_positive() {
        return Err(MatveevError::NonPositiveCoefficient);
    }
    let holds = |x: &BigInt| cap_predicate(kind, k.source(), x, ctx);
    let mut lo = BigInt::from(3);
    if holds(&lo) {
        return Ok(lo);
    }
    let mut hi = BigInt::from(256);
    while !holds(&hi) {
        lo = hi.clone();
        hi <<= 1;
        if hi.bits() > u64::from(ctx.ladder.max_bits) {
            return Err(RealError::PrecisionExhausted { bits: ctx.ladder.max_bits, what: format!("cap for {k:?}") }.into());
        }
    }
    // invariant: !holds(lo), holds(hi)
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if holds(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `x > K f(log x)` and `x > K f'(log x)`, both certified.
pub fn cap_predicate(kind: CapKind, k: &Expr, x: &BigInt, ctx: &EvalContext) -> bool {
    let l = Expr::int(x.clone()).ln();
    let xe = Expr::int(x.clone());
    let start = ctx.ladder.start_bits.max(x.bits() as u32 + 64);
    let positive = |e: Expr| sign_of(&e, &ctx.ladder, start) == Some(Ordering::Greater);
    positive(xe.clone() - k.clone() * kind.f(l.clone())) && positive(xe - k.clone() * kind.f_prime(l))
}

impl fmt::Display for BoundChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: K = {}", self.stage.name(), self.coefficient.decimal(8))?;
        if let Some(cap) = &self.resulting_cap {
            write!(f, ", n < {cap}")?;
        }
        Ok(())
    }
}

/// Relative distance `|x - y| / |y|` as an `f64`, for reporting.
pub fn relative_gap(x: &CertifiedReal, y: &BigRational) -> f64 {
    let mid = x.midpoint().to_rational();
    if y.is_zero() {
        return mid.abs().to_f64().unwrap_or(f64::INFINITY);
    }
    ((mid - y) / y).abs().to_f64().unwrap_or(f64::INFINITY)
}
