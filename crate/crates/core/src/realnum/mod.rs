//! Certified real arithmetic.
//!
//! Every constant is a [`CertifiedReal`]: an interval with exact dyadic
//! endpoints that is guaranteed to contain the value of its source
//! [`Expr`]. Evaluation walks a precision ladder (doubling the working
//! precision) until the requested width is reached, and the source is kept so
//! any consumer can ask for more digits later.

mod dyadic;
mod expr;
mod interval;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub use dyadic::{decimal_string, Dyadic, Round};
pub use expr::{parse_decimal, Expr, ParseDecimalError};
pub use interval::{exp_point, ln2, ln_point, Interval, IntervalError};

/// Default starting precision in bits.
pub const DEFAULT_START_BITS: u32 = 128;
/// Default hard precision cap in bits.
pub const DEFAULT_MAX_BITS: u32 = 16384;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RealError {
    #[error("precision exhausted at {bits} bits while evaluating {what}")]
    PrecisionExhausted { bits: u32, what: String },
}

/// Working-precision schedule: start, double, stop at the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionLadder {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionLadder {
    fn default() -> Self {
        PrecisionLadder { start_bits: DEFAULT_START_BITS, max_bits: DEFAULT_MAX_BITS }
    }
}

impl PrecisionLadder {
    pub fn new(start_bits: u32, max_bits: u32) -> Self {
        let start_bits = start_bits.max(16);
        PrecisionLadder { start_bits, max_bits: max_bits.max(start_bits) }
    }

    /// Rungs starting at `from` (clamped to the ladder).
    pub fn rungs_from(&self, from: u32) -> impl Iterator<Item = u32> {
        let max = self.max_bits;
        let mut next = Some(from.clamp(self.start_bits, max));
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= max { None } else { Some(cur.saturating_mul(2).min(max)) };
            Some(cur)
        })
    }
}

/// `2^-bits` as a rational width.
pub fn width_bits(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// Precision ladder plus the default enclosure width requested from it.
#[derive(Clone, Debug)]
pub struct EvalContext {
    pub ladder: PrecisionLadder,
    pub width: BigRational,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext::new(PrecisionLadder::default())
    }
}

impl EvalContext {
    /// Width `2^-100`, enough for every decimal the certificate prints.
    pub fn new(ladder: PrecisionLadder) -> Self {
        EvalContext { ladder, width: width_bits(100) }
    }

    pub fn eval(&self, expr: &Expr) -> Result<CertifiedReal, RealError> {
        eval_with(expr, &self.width, &self.ladder)
    }

    pub fn compare(&self, x: &CertifiedReal, y: &CertifiedReal) -> Comparison {
        compare(x, y, &self.ladder)
    }

    /// Certified `lhs < rhs`.
    pub fn less(&self, lhs: &Expr, rhs: &Expr) -> bool {
        certify_less(lhs, rhs, &self.ladder)
    }
}

/// An interval with exact endpoints certified to contain the value of `source`.
#[derive(Clone, Debug)]
pub struct CertifiedReal {
    lo: Dyadic,
    hi: Dyadic,
    source: Expr,
    precision: u32,
}

/// Evaluate `expr` until its enclosure is no wider than `target_width`,
/// using the default precision ladder.
pub fn eval(expr: &Expr, target_width: &BigRational) -> Result<CertifiedReal, RealError> {
    eval_with(expr, target_width, &PrecisionLadder::default())
}

pub fn eval_with(
    expr: &Expr,
    target_width: &BigRational,
    ladder: &PrecisionLadder,
) -> Result<CertifiedReal, RealError> {
    eval_from(expr, target_width, ladder, ladder.start_bits)
}

fn eval_from(
    expr: &Expr,
    target_width: &BigRational,
    ladder: &PrecisionLadder,
    from: u32,
) -> Result<CertifiedReal, RealError> {
    let mut last = from;
    for prec in ladder.rungs_from(from) {
        last = prec;
        if let Ok(iv) = expr.eval_at(prec) {
            if &iv.width().to_rational() <= target_width {
                return Ok(CertifiedReal::from_interval(iv, expr.clone(), prec));
            }
        }
    }
    Err(RealError::PrecisionExhausted { bits: last, what: expr.to_string() })
}

impl CertifiedReal {
    fn from_interval(iv: Interval, source: Expr, precision: u32) -> Self {
        CertifiedReal { lo: iv.lo().clone(), hi: iv.hi().clone(), source, precision }
    }

    /// An exact value (zero-width interval).
    pub fn exact(value: BigRational) -> Self {
        let d = Dyadic::from_rational(&value, 64, Round::Down);
        if d.to_rational() == value {
            CertifiedReal { lo: d.clone(), hi: d, source: Expr::rational(value), precision: 0 }
        } else {
            let iv = Interval::from_rational(&value, DEFAULT_START_BITS);
            CertifiedReal::from_interval(iv, Expr::rational(value), DEFAULT_START_BITS)
        }
    }

    /// A fixed interval with no refinement recipe beyond itself.
    pub fn enclosure(lo: Dyadic, hi: Dyadic) -> Self {
        let iv = Interval::new(lo, hi);
        CertifiedReal::from_interval(iv.clone(), Expr::enclosure(iv), 0)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn source(&self) -> &Expr {
        &self.source
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Half the width.
    pub fn radius(&self) -> Dyadic {
        self.width().shl(-1)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).shl(-1)
    }

    pub fn contains(&self, value: &BigRational) -> bool {
        self.interval().contains_rational(value)
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Lossy midpoint for display and diagnostics.
    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    /// Midpoint rendered with `digits` significant digits.
    pub fn decimal(&self, digits: usize) -> String {
        decimal_string(&self.midpoint().to_rational(), digits, Round::Down)
    }

    /// Re-evaluate the source to at most `target_width`. The result never
    /// widens: it is intersected with the current enclosure.
    pub fn refine(&self, target_width: &BigRational, ladder: &PrecisionLadder) -> Result<CertifiedReal, RealError> {
        if &self.width().to_rational() <= target_width {
            return Ok(self.clone());
        }
        let fresh = eval_from(&self.source, target_width, ladder, self.precision.max(ladder.start_bits))?;
        Ok(self.intersect(fresh))
    }

    fn intersect(&self, other: CertifiedReal) -> CertifiedReal {
        let lo = self.lo.clone().max(other.lo);
        let hi = self.hi.clone().min(other.hi);
        CertifiedReal { lo, hi, source: other.source, precision: other.precision }
    }

    /// Evaluate at one fixed precision.
    pub fn at_precision(expr: &Expr, prec: u32) -> Result<CertifiedReal, IntervalError> {
        Ok(CertifiedReal::from_interval(expr.eval_at(prec)?, expr.clone(), prec))
    }
}

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    /// Not separated at the precision cap. `identical_source` flags the case
    /// where both sides are the same expression (hence equal).
    Unresolved { identical_source: bool },
}

impl Comparison {
    pub fn ordering(self) -> Option<Ordering> {
        match self {
            Comparison::Less => Some(Ordering::Less),
            Comparison::Greater => Some(Ordering::Greater),
            Comparison::Unresolved { .. } => None,
        }
    }
}

/// Compare two certified reals, refining until the enclosures separate.
pub fn compare(x: &CertifiedReal, y: &CertifiedReal, ladder: &PrecisionLadder) -> Comparison {
    if x.source == y.source {
        return Comparison::Unresolved { identical_source: true };
    }
    if x.hi < y.lo {
        return Comparison::Less;
    }
    if x.lo > y.hi {
        return Comparison::Greater;
    }
    match sign_of(&(x.source() - y.source()), ladder, x.precision.max(y.precision)) {
        Some(Ordering::Less) => Comparison::Less,
        Some(Ordering::Greater) => Comparison::Greater,
        _ => Comparison::Unresolved { identical_source: false },
    }
}

/// Certified sign of an expression, or `None` if it cannot be separated from
/// zero at the precision cap.
pub fn sign_of(expr: &Expr, ladder: &PrecisionLadder, from: u32) -> Option<Ordering> {
    for prec in ladder.rungs_from(from) {
        if let Ok(iv) = expr.eval_at(prec) {
            if iv.is_positive() {
                return Some(Ordering::Greater);
            }
            if iv.is_negative() {
                return Some(Ordering::Less);
            }
            if iv.lo().is_zero() && iv.hi().is_zero() {
                return Some(Ordering::Equal);
            }
        }
    }
    None
}

/// Certified `lhs < rhs` for expressions.
pub fn certify_less(lhs: &Expr, rhs: &Expr, ladder: &PrecisionLadder) -> bool {
    sign_of(&(lhs - rhs), ladder, ladder.start_bits) == Some(Ordering::Less)
}

/// `‖x‖`, the distance from `x` to the nearest integer, together with that
/// integer.
#[derive(Clone, Debug)]
pub struct SignedDistance {
    pub value: CertifiedReal,
    pub nearest: BigInt,
}

/// Compute `‖x‖` to width at most `target_width`, refining until the nearest
/// integer is unambiguous.
pub fn nearest_int_distance(
    x: &CertifiedReal,
    target_width: &BigRational,
    ladder: &PrecisionLadder,
) -> Result<SignedDistance, RealError> {
    let half = Dyadic::pow2(-1);
    let mut last = x.precision;
    let start = x.precision.max(ladder.start_bits);
    let candidates = std::iter::once(None).chain(ladder.rungs_from(start).map(Some));
    for rung in candidates {
        let iv = match rung {
            None => x.interval(),
            Some(prec) => {
                last = prec;
                match x.source.eval_at(prec) {
                    Ok(iv) => iv,
                    Err(_) => continue,
                }
            }
        };
        let n_lo = iv.lo().add(&half).floor();
        let n_hi = iv.hi().add(&half).floor();
        if n_lo != n_hi {
            continue;
        }
        let n = Dyadic::from_int(n_lo.clone());
        // exclude the tie x = n - 1/2
        if iv.lo() <= &n.sub(&half) {
            continue;
        }
        let d = iv.sub(&Interval::point(n), u32::MAX).abs();
        if &d.width().to_rational() > target_width {
            continue;
        }
        let source = (x.source() - Expr::int(n_lo.clone())).abs();
        let precision = rung.unwrap_or(x.precision);
        return Ok(SignedDistance {
            value: CertifiedReal { lo: d.lo().clone(), hi: d.hi().clone(), source, precision },
            nearest: n_lo,
        });
    }
    Err(RealError::PrecisionExhausted { bits: last, what: format!("nearest integer to {}", x.source) })
}

/// Frequently used constants of `Q(sqrt 5)`.
pub mod constants {
    use super::Expr;

    pub fn sqrt5() -> Expr {
        Expr::int(5).sqrt()
    }

    /// The golden ratio `(1 + sqrt 5)/2`.
    pub fn alpha() -> Expr {
        (Expr::int(1) + sqrt5()) / Expr::int(2)
    }

    /// The conjugate `(1 - sqrt 5)/2`.
    pub fn beta() -> Expr {
        (Expr::int(1) - sqrt5()) / Expr::int(2)
    }

    pub fn ln_alpha() -> Expr {
        alpha().ln()
    }
}
