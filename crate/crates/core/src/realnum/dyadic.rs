//! Exact dyadic rationals `mantissa * 2^exponent` with directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

/// An exact number of the form `mantissa * 2^exponent`.
///
/// The representation is normalized: the mantissa is odd, or zero with a zero
/// exponent. Equality is therefore structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

fn floor_shr(m: &BigInt, s: u64) -> (BigInt, bool) {
    if s == 0 {
        return (m.clone(), true);
    }
    let d = BigInt::one() << s;
    let (q, r) = m.div_mod_floor(&d);
    (q, r.is_zero())
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz;
            self.exponent += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: k }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mantissa.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// Binary order of magnitude: `floor(log2 |self|)`, or `None` for zero.
    pub fn magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent + self.mantissa.bits() as i64 - 1)
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        Dyadic::new(&self.mantissa * &other.mantissa, self.exponent + other.exponent)
    }

    /// Multiply by `2^k` exactly.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent + k }
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mantissa.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        let (q, exact) = floor_shr(&self.mantissa, s);
        let q = if !exact && dir == Round::Up { q + 1 } else { q };
        Dyadic::new(q, self.exponent + s as i64)
    }

    /// Quotient rounded to `prec` significant bits.
    ///
    /// Panics on a zero divisor.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let k = (prec as i64 + other.mantissa.bits() as i64 - self.mantissa.bits() as i64 + 2).max(0);
        let num = &self.mantissa << k as u64;
        let (q, r) = num.div_mod_floor(&other.mantissa);
        let q = if !r.is_zero() && dir == Round::Up { q + 1 } else { q };
        Dyadic::new(q, self.exponent - other.exponent - k).round(prec, dir)
    }

    /// Square root rounded to `prec` significant bits. `self` must be non-negative.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Self {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut s = (2 * prec as i64 + 4 - self.mantissa.bits() as i64).max(0);
        if (self.exponent - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let m = &self.mantissa << s as u64;
        let r = m.sqrt();
        let r = if dir == Round::Up && &r * &r != m { r + 1 } else { r };
        Dyadic::new(r, (self.exponent - s) / 2).round(prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            floor_shr(&self.mantissa, (-self.exponent) as u64).0
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    pub fn is_integer(&self) -> bool {
        self.exponent >= 0
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as u64)
        }
    }

    /// Closest dyadic with `prec` bits below (or above) a rational.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Self {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let num = r.numer();
        let den = r.denom();
        let k = (prec as i64 + den.bits() as i64 - num.bits() as i64 + 2).max(0);
        let scaled = num << k as u64;
        let (q, rem) = scaled.div_mod_floor(den);
        let q = if !rem.is_zero() && dir == Round::Up { q + 1 } else { q };
        Dyadic::new(q, -k).round(prec, dir)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // keep 64 bits of mantissa, then scale
        let bits = self.mantissa.bits() as i64;
        let shift = (bits - 64).max(0);
        let (m, _) = floor_shr(&self.mantissa, shift as u64);
        let m = m.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi((self.exponent + shift).clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    /// Decimal rendering with `digits` significant digits, rounded in `dir`.
    pub fn to_decimal(&self, digits: usize, dir: Round) -> String {
        decimal_string(&self.to_rational(), digits, dir)
    }
}

/// Render a rational in scientific notation with `digits` significant digits,
/// rounded in the given direction.
pub fn decimal_string(r: &BigRational, digits: usize, dir: Round) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let neg = r.is_negative();
    let a = r.abs();
    // estimate decimal exponent, then correct
    let ten = BigInt::from(10);
    let approx = (a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2;
    let mut e = approx.floor() as i64;
    let pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    loop {
        let p = pow(e);
        if p > a {
            e -= 1;
        } else if pow(e + 1) <= a {
            e += 1;
        } else {
            break;
        }
    }
    let scaled = &a / pow(e - digits as i64 + 1);
    // rounding direction applies to the signed value
    let want_up = matches!((dir, neg), (Round::Up, false) | (Round::Down, true));
    let mut m = if want_up { scaled.ceil().to_integer() } else { scaled.floor().to_integer() };
    if m.to_string().len() > digits {
        m = m.div_ceil(&ten);
        e += 1;
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    if e != 0 {
        out.push_str(&format!("e{e}"));
    }
    out
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.sign(), other.sign()) {
            (a, b) if a != b => {
                let rank = |s: Sign| match s {
                    Sign::Minus => 0,
                    Sign::NoSign => 1,
                    Sign::Plus => 2,
                };
                rank(a).cmp(&rank(b))
            }
            _ => {
                let e = self.exponent.min(other.exponent);
                let a = &self.mantissa << (self.exponent - e) as u64;
                let b = &other.mantissa << (other.exponent - e) as u64;
                a.cmp(&b)
            }
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normalizes_trailing_zeros() {
        let d = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), 2);
        assert_eq!(Dyadic::new(BigInt::zero(), 5), Dyadic::zero());
    }

    #[test]
    fn rational_rounding_brackets() {
        for (n, d) in [(1, 3), (-22, 7), (355, 113), (-1, 10)] {
            let r = rat(n, d);
            let lo = Dyadic::from_rational(&r, 40, Round::Down);
            let hi = Dyadic::from_rational(&r, 40, Round::Up);
            assert!(lo.to_rational() <= r && r <= hi.to_rational());
            assert!(hi.sub(&lo) <= Dyadic::pow2(-36));
        }
    }

    #[test]
    fn floor_and_ceil_of_negatives() {
        let d = Dyadic::from_rational(&rat(-5, 2), 10, Round::Down);
        assert_eq!(d.floor(), BigInt::from(-3));
        assert_eq!(d.ceil(), BigInt::from(-2));
    }

    #[test]
    fn sqrt_directed() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(64, Round::Down);
        let hi = two.sqrt(64, Round::Up);
        assert!(lo.mul(&lo) < two && hi.mul(&hi) > two);
        assert_eq!(Dyadic::from_int(9).sqrt(8, Round::Up), Dyadic::from_int(3));
    }

    #[test]
    fn decimal_rendering() {
        let r = rat(1, 3);
        assert_eq!(decimal_string(&r, 5, Round::Down), "3.3333e-1");
        assert_eq!(decimal_string(&r, 5, Round::Up), "3.3334e-1");
        assert_eq!(decimal_string(&rat(-144, 1), 6, Round::Down), "-1.44e2");
        assert_eq!(decimal_string(&rat(999999, 1), 3, Round::Up), "1e6");
    }
}
