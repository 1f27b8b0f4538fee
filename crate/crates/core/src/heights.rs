//! Absolute logarithmic heights of rationals and of elements of `Q(sqrt 5)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::realnum::{
    compare, constants, eval_with, CertifiedReal, Comparison, EvalContext, Expr, RealError,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HeightError {
    #[error("{0} is rational; use height_rational")]
    RationalInput(String),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("difference index must be at least 1")]
    ZeroDifference,
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Whether a height value is exact or only an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeightKind {
    Exact,
    UpperBound,
}

#[derive(Clone, Debug)]
pub struct HeightBound {
    pub value: CertifiedReal,
    pub kind: HeightKind,
}

/// `a + b sqrt 5` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadraticNumber {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadraticNumber { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadraticNumber::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn rational(r: BigRational) -> Self {
        QuadraticNumber::new(r, BigRational::zero())
    }

    pub fn one() -> Self {
        QuadraticNumber::from_ints(1, 0)
    }

    pub fn sqrt5() -> Self {
        QuadraticNumber::from_ints(0, 1)
    }

    /// The golden ratio `(1 + sqrt 5)/2`.
    pub fn alpha() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        QuadraticNumber::new(half.clone(), half)
    }

    pub fn conjugate(&self) -> Self {
        QuadraticNumber::new(self.a.clone(), -&self.b)
    }

    /// `a^2 - 5 b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(5.into()) * &self.b * &self.b
    }

    pub fn trace(&self) -> BigRational {
        &self.a * BigRational::from_integer(2.into())
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn inverse(&self) -> Result<Self, HeightError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(HeightError::ZeroInverse);
        }
        Ok(QuadraticNumber::new(&self.a / &n, -&self.b / &n))
    }

    pub fn pow(&self, k: i64) -> Result<Self, HeightError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut result = QuadraticNumber::one();
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(result)
    }

    pub fn to_expr(&self) -> Expr {
        Expr::rational(self.a.clone()) + Expr::rational(self.b.clone()) * constants::sqrt5()
    }

    /// Primitive integer minimal polynomial `(a0, a1, a2)` of
    /// `a0 X^2 + a1 X + a2` with `a0 > 0`. Only for irrational numbers.
    pub fn minimal_polynomial(&self) -> Result<[BigInt; 3], HeightError> {
        if self.is_rational() {
            return Err(HeightError::RationalInput(self.to_string()));
        }
        // X^2 - trace X + norm
        let coeffs = [BigRational::one(), -self.trace(), self.norm()];
        let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        Ok([&ints[0] / &g, &ints[1] / &g, &ints[2] / &g])
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt(5)", self.a, self.b)
    }
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, o: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, o: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, o: &QuadraticNumber) -> QuadraticNumber {
        let five = BigRational::from_integer(5.into());
        QuadraticNumber::new(&self.a * &o.a + five * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a)
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber::new(-&self.a, -&self.b)
    }
}

/// `h(p/q) = log max(|p|, q)`, exact.
pub fn height_rational(r: &BigRational, ctx: &EvalContext) -> Result<HeightBound, HeightError> {
    let m = r.numer().abs().max(r.denom().abs()).max(BigInt::one());
    let value = eval_with(&Expr::int(m).ln(), &ctx.width, &ctx.ladder)?;
    Ok(HeightBound { value, kind: HeightKind::Exact })
}

/// `log max(|x|, 1)` for a real expression, choosing the branch by a
/// certified comparison.
fn log_plus(x: &Expr, ctx: &EvalContext) -> Result<Expr, HeightError> {
    let ax = eval_with(&x.abs(), &ctx.width, &ctx.ladder)?;
    let one = CertifiedReal::exact(BigRational::one());
    match compare(&ax, &one, &ctx.ladder) {
        Comparison::Greater => Ok(x.abs().ln()),
        Comparison::Less => Ok(Expr::int(0)),
        Comparison::Unresolved { .. } => Err(HeightError::Real(RealError::PrecisionExhausted {
            bits: ctx.ladder.max_bits,
            what: format!("|{x}| against 1"),
        })),
    }
}

/// Height of an irrational element of `Q(sqrt 5)` through its minimal
/// polynomial: `(log a0 + log max(|x|,1) + log max(|x'|,1)) / 2`.
pub fn height_quadratic(x: &QuadraticNumber, ctx: &EvalContext) -> Result<HeightBound, HeightError> {
    let [a0, _, _] = x.minimal_polynomial()?;
    let expr = (Expr::int(a0).ln() + log_plus(&x.to_expr(), ctx)? + log_plus(&x.conjugate().to_expr(), ctx)?)
        / Expr::int(2);
    let value = eval_with(&expr, &ctx.width, &ctx.ladder)?;
    Ok(HeightBound { value, kind: HeightKind::Exact })
}

/// Bounds for `eta_3 = sqrt5 (1 - alpha^{-d})^{-1}`.
#[derive(Clone, Debug)]
pub struct Eta3Bounds {
    /// `h(eta_3) <= (log 20 + d log alpha) / 2`.
    pub height: HeightBound,
    /// `|log eta_3| < log 5 + d log alpha`.
    pub abs_log: CertifiedReal,
}

pub fn eta3_height_expr(d: u64) -> Expr {
    (Expr::int(20).ln() + Expr::int(d as i64) * constants::ln_alpha()) / Expr::int(2)
}

pub fn eta3_abs_log_expr(d: u64) -> Expr {
    Expr::int(5).ln() + Expr::int(d as i64) * constants::ln_alpha()
}

/// The closed-form upper bounds used for the third logarithm.
pub fn height_eta3_bound(d: u64, ctx: &EvalContext) -> Result<Eta3Bounds, HeightError> {
    if d == 0 {
        return Err(HeightError::ZeroDifference);
    }
    let height = HeightBound { value: eval_with(&eta3_height_expr(d), &ctx.width, &ctx.ladder)?, kind: HeightKind::UpperBound };
    let abs_log = eval_with(&eta3_abs_log_expr(d), &ctx.width, &ctx.ladder)?;
    Ok(Eta3Bounds { height, abs_log })
}

/// `eta_3 = sqrt5 / (1 - alpha^{-d})` as an exact element of `Q(sqrt 5)`.
pub fn eta3_exact(d: u64) -> Result<QuadraticNumber, HeightError> {
    if d == 0 {
        return Err(HeightError::ZeroDifference);
    }
    let denom = &QuadraticNumber::one() - &QuadraticNumber::alpha().pow(-(d as i64))?;
    Ok(&QuadraticNumber::sqrt5() * &denom.inverse()?)
}
