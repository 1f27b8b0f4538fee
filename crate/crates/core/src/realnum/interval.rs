//! Outward-rounded intervals over [`Dyadic`] endpoints, including the
//! elementary functions the proof needs (square root, logarithm, exponential).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::dyadic::{Dyadic, Round};

/// Operations that cannot decide a sign at the current precision.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("divisor interval contains zero")]
    DivisorStraddlesZero,
    #[error("square-root argument is not provably non-negative")]
    SqrtArgumentNotNonNegative,
    #[error("logarithm argument is not provably positive")]
    LogArgumentNotPositive,
    #[error("exponential argument too large to represent")]
    ExpOverflow,
}

/// A closed interval `[lo, hi]` with exact dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Interval::point(Dyadic::from_int(v))
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        Interval { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up) }
    }

    pub fn neg(&self) -> Self {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = self.lo.abs().max(self.hi.clone());
            Interval { lo: Dyadic::zero(), hi: m }
        }
    }

    pub fn add(&self, other: &Interval, prec: u32) -> Self {
        Interval::rounded(self.lo.add(&other.lo), self.hi.add(&other.hi), prec)
    }

    pub fn sub(&self, other: &Interval, prec: u32) -> Self {
        Interval::rounded(self.lo.sub(&other.hi), self.hi.sub(&other.lo), prec)
    }

    pub fn mul(&self, other: &Interval, prec: u32) -> Self {
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        Interval::rounded(lo, hi, prec)
    }

    /// Multiply by `2^k` exactly.
    pub fn shl(&self, k: i64) -> Self {
        Interval { lo: self.lo.shl(k), hi: self.hi.shl(k) }
    }

    pub fn recip(&self, prec: u32) -> Result<Self, IntervalError> {
        if self.contains_zero() {
            return Err(IntervalError::DivisorStraddlesZero);
        }
        Ok(Interval {
            lo: Dyadic::one().div(&self.hi, prec, Round::Down),
            hi: Dyadic::one().div(&self.lo, prec, Round::Up),
        })
    }

    pub fn div(&self, other: &Interval, prec: u32) -> Result<Self, IntervalError> {
        if other.contains_zero() {
            return Err(IntervalError::DivisorStraddlesZero);
        }
        let q = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = q.iter().map(|(a, b)| a.div(b, prec, Round::Down)).min().unwrap();
        let hi = q.iter().map(|(a, b)| a.div(b, prec, Round::Up)).max().unwrap();
        Ok(Interval { lo, hi })
    }

    pub fn div_int(&self, k: &BigInt, prec: u32) -> Self {
        let d = Dyadic::from_int(k.clone());
        let (a, b) = if k.is_negative() { (&self.hi, &self.lo) } else { (&self.lo, &self.hi) };
        Interval { lo: a.div(&d, prec, Round::Down), hi: b.div(&d, prec, Round::Up) }
    }

    /// Integer power. Negative exponents go through the reciprocal.
    pub fn powi(&self, k: i64, prec: u32) -> Result<Self, IntervalError> {
        if k < 0 {
            return self.powi(-k, prec)?.recip(prec);
        }
        if k == 0 {
            return Ok(Interval::point(Dyadic::one()));
        }
        // even powers of sign-changing or negative intervals go through |x|
        let (base, negate) = if k % 2 == 0 {
            (self.abs(), false)
        } else if self.hi.is_negative() {
            (self.neg(), true)
        } else {
            (self.clone(), false)
        };
        let r = if !base.lo.is_negative() {
            Interval {
                lo: pow_dir(&base.lo, k as u64, prec, Round::Down),
                hi: pow_dir(&base.hi, k as u64, prec, Round::Up),
            }
        } else {
            // odd power of a sign-changing interval is monotone
            Interval {
                lo: pow_dir(&base.lo.neg(), k as u64, prec, Round::Up).neg(),
                hi: pow_dir(&base.hi, k as u64, prec, Round::Up),
            }
        };
        Ok(if negate { r.neg() } else { r })
    }

    pub fn sqrt(&self, prec: u32) -> Result<Self, IntervalError> {
        if self.lo.is_negative() {
            return Err(IntervalError::SqrtArgumentNotNonNegative);
        }
        Ok(Interval { lo: self.lo.sqrt(prec, Round::Down), hi: self.hi.sqrt(prec, Round::Up) })
    }

    pub fn ln(&self, prec: u32) -> Result<Self, IntervalError> {
        if !self.lo.is_positive() {
            return Err(IntervalError::LogArgumentNotPositive);
        }
        let lo = ln_point(&self.lo, prec).lo;
        let hi = ln_point(&self.hi, prec).hi;
        Ok(Interval { lo, hi })
    }

    pub fn exp(&self, prec: u32) -> Result<Self, IntervalError> {
        let lo = exp_point(&self.lo, prec)?.lo;
        let hi = exp_point(&self.hi, prec)?.hi;
        Ok(Interval { lo, hi })
    }
}

/// `x^k` for non-negative `x`, rounded in `dir`.
fn pow_dir(x: &Dyadic, k: u64, prec: u32, dir: Round) -> Dyadic {
    let mut result = Dyadic::one();
    let mut base = x.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = result.mul(&base).round(prec, dir);
        }
        k >>= 1;
        if k > 0 {
            base = base.mul(&base).round(prec, dir);
        }
    }
    result
}

/// `atanh(z)` series for an interval `z` in `[0, 1/2]`:
/// `sum z^(2j+1)/(2j+1)` plus a rigorous remainder bound.
fn atanh_series(z: &Interval, prec: u32) -> Interval {
    let z2 = z.mul(z, prec);
    let mut power = z.clone();
    let mut sum = z.clone();
    let target = Dyadic::pow2(-(prec as i64) - 4);
    let mut j: i64 = 1;
    loop {
        power = power.mul(&z2, prec);
        let term = power.div_int(&BigInt::from(2 * j + 1), prec);
        sum = sum.add(&term, prec);
        j += 1;
        // remainder <= z^(2j+1) / ((2j+1)(1 - z^2)) <= 2 z^(2j+1) / (2j+1) for z <= 1/2
        let next = power.mul(&z2, prec);
        if next.hi() < &target {
            let bound = next.hi().shl(1).div(&Dyadic::from_int(2 * j + 1), prec, Round::Up);
            return Interval { lo: sum.lo.clone(), hi: sum.hi.add(&bound).round(prec, Round::Up) };
        }
    }
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn ln2(prec: u32) -> Interval {
    let w = prec + 16;
    let third = Interval::from_rational(&BigRational::new(1.into(), 3.into()), w);
    let s = atanh_series(&third, w).shl(1);
    Interval::rounded(s.lo, s.hi, prec)
}

/// Enclosure of `ln x` for a positive dyadic point.
pub fn ln_point(x: &Dyadic, prec: u32) -> Interval {
    let w = prec + 32;
    // x = y * 2^k with y in [1, 2)
    let k = x.magnitude().expect("ln of zero");
    let y = x.shl(-k);
    let yi = Interval::point(y);
    let one = Interval::point(Dyadic::one());
    let num = yi.sub(&one, w);
    let den = yi.add(&one, w);
    let z = num.div(&den, w).expect("y + 1 > 0");
    let ln_y = atanh_series(&z, w).shl(1);
    let kl = ln2(w).mul(&Interval::from_int(k), w);
    let r = ln_y.add(&kl, w);
    Interval::rounded(r.lo, r.hi, prec)
}

/// Enclosure of `exp x` for a dyadic point.
pub fn exp_point(x: &Dyadic, prec: u32) -> Result<Interval, IntervalError> {
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > 1.0e9 {
        return Err(IntervalError::ExpOverflow);
    }
    const HALVINGS: i64 = 12;
    let w = prec + 32 + HALVINGS as u32;
    let l2 = ln2(w);
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    // r = x - k ln 2, |r| <= ~0.35
    let r = Interval::point(x.clone()).sub(&l2.mul(&Interval::from_int(k), w), w);
    let r = r.shl(-HALVINGS);
    // Taylor series; |r| < 2^-12, remainder <= 2 |r|^(n+1)/(n+1)!
    let mut sum = Interval::point(Dyadic::one());
    let mut term = Interval::point(Dyadic::one());
    let target = Dyadic::pow2(-(w as i64) - 8);
    let mut n: i64 = 1;
    loop {
        term = term.mul(&r, w).div_int(&BigInt::from(n), w);
        sum = sum.add(&term, w);
        n += 1;
        let mag = term.abs().hi().clone();
        if mag < target {
            let bound = mag.shl(1);
            sum = Interval { lo: sum.lo.sub(&bound), hi: sum.hi.add(&bound) };
            break;
        }
    }
    let mut v = sum;
    for _ in 0..HALVINGS {
        v = v.mul(&v, w);
    }
    let v = v.shl(k);
    Ok(Interval::rounded(v.lo, v.hi, prec))
}

impl Interval {
    /// Lossy midpoint, for diagnostics.
    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    /// Lossy width, for diagnostics.
    pub fn width_f64(&self) -> f64 {
        self.width().to_f64()
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64()
    }
}
