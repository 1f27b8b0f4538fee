//! Expression trees that remember how a real constant was built, so it can be
//! re-evaluated at any precision.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::dyadic::Dyadic;
use super::interval::{Interval, IntervalError};

#[derive(Debug, PartialEq)]
enum Node {
    Int(BigInt),
    Ratio(BigRational),
    Exact(Dyadic),
    /// A fixed enclosure supplied from outside; cannot be refined.
    Enclosure(Interval),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    Abs(Expr),
    Sqrt(Expr),
    Ln(Expr),
    Exp(Expr),
    Powi(Expr, i64),
}

/// An immutable, cheaply clonable real-valued expression.
#[derive(Clone, Debug)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

/// Error for malformed literals.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("malformed decimal literal `{0}`")]
pub struct ParseDecimalError(pub String);

/// Parse a plain or scientific decimal literal (`166.3`, `-2.5e-3`) exactly.
pub fn parse_decimal(s: &str) -> Result<BigRational, ParseDecimalError> {
    let err = || ParseDecimalError(s.to_string());
    let t = s.trim();
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().map_err(|_| err())? / 10;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

impl Expr {
    fn node(n: Node) -> Self {
        Expr(Arc::new(n))
    }

    pub fn int<T: Into<BigInt>>(v: T) -> Self {
        Expr::node(Node::Int(v.into()))
    }

    pub fn ratio<T: Into<BigInt>>(num: T, den: T) -> Self {
        Expr::rational(BigRational::new(num.into(), den.into()))
    }

    pub fn rational(r: BigRational) -> Self {
        if r.is_integer() {
            Expr::int(r.to_integer())
        } else {
            Expr::node(Node::Ratio(r))
        }
    }

    pub fn dyadic(d: Dyadic) -> Self {
        Expr::node(Node::Exact(d))
    }

    /// Exact decimal literal. Panics on malformed input; use
    /// [`parse_decimal`] for untrusted strings.
    pub fn decimal(s: &str) -> Self {
        Expr::rational(parse_decimal(s).expect("valid decimal literal"))
    }

    pub fn enclosure(iv: Interval) -> Self {
        Expr::node(Node::Enclosure(iv))
    }

    pub fn sqrt(&self) -> Self {
        Expr::node(Node::Sqrt(self.clone()))
    }

    pub fn ln(&self) -> Self {
        Expr::node(Node::Ln(self.clone()))
    }

    pub fn exp(&self) -> Self {
        Expr::node(Node::Exp(self.clone()))
    }

    pub fn abs(&self) -> Self {
        Expr::node(Node::Abs(self.clone()))
    }

    pub fn powi(&self, k: i64) -> Self {
        Expr::node(Node::Powi(self.clone(), k))
    }

    /// True when the value is built only from rationals with field operations,
    /// i.e. it is certainly rational.
    pub fn is_rational(&self) -> bool {
        match &*self.0 {
            Node::Int(_) | Node::Ratio(_) | Node::Exact(_) => true,
            Node::Enclosure(_) | Node::Sqrt(_) | Node::Ln(_) | Node::Exp(_) => false,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.is_rational() && b.is_rational()
            }
            Node::Neg(a) | Node::Abs(a) | Node::Powi(a, _) => a.is_rational(),
        }
    }

    /// Exact value when the expression is rational-valued.
    pub fn rational_value(&self) -> Option<BigRational> {
        Some(match &*self.0 {
            Node::Int(v) => BigRational::from_integer(v.clone()),
            Node::Ratio(r) => r.clone(),
            Node::Exact(d) => d.to_rational(),
            Node::Add(a, b) => a.rational_value()? + b.rational_value()?,
            Node::Sub(a, b) => a.rational_value()? - b.rational_value()?,
            Node::Mul(a, b) => a.rational_value()? * b.rational_value()?,
            Node::Div(a, b) => {
                let d = b.rational_value()?;
                if d.is_zero() {
                    return None;
                }
                a.rational_value()? / d
            }
            Node::Neg(a) => -a.rational_value()?,
            Node::Abs(a) => {
                let v = a.rational_value()?;
                if v < BigRational::zero() {
                    -v
                } else {
                    v
                }
            }
            Node::Powi(a, k) => {
                let v = a.rational_value()?;
                if *k < 0 && v.is_zero() {
                    return None;
                }
                let p = num_traits::pow(v, k.unsigned_abs() as usize);
                if *k < 0 {
                    BigRational::one() / p
                } else {
                    p
                }
            }
            _ => return None,
        })
    }

    /// Enclosure of the value at working precision `prec` bits.
    pub fn eval_at(&self, prec: u32) -> Result<Interval, IntervalError> {
        Ok(match &*self.0 {
            Node::Int(v) => Interval::from_int(v.clone()),
            Node::Ratio(r) => Interval::from_rational(r, prec),
            Node::Exact(d) => Interval::point(d.clone()),
            Node::Enclosure(iv) => iv.clone(),
            Node::Add(a, b) => a.eval_at(prec)?.add(&b.eval_at(prec)?, prec),
            Node::Sub(a, b) => a.eval_at(prec)?.sub(&b.eval_at(prec)?, prec),
            Node::Mul(a, b) => a.eval_at(prec)?.mul(&b.eval_at(prec)?, prec),
            Node::Div(a, b) => a.eval_at(prec)?.div(&b.eval_at(prec)?, prec)?,
            Node::Neg(a) => a.eval_at(prec)?.neg(),
            Node::Abs(a) => a.eval_at(prec)?.abs(),
            Node::Sqrt(a) => a.eval_at(prec)?.sqrt(prec)?,
            Node::Ln(a) => a.eval_at(prec)?.ln(prec)?,
            Node::Exp(a) => a.eval_at(prec)?.exp(prec)?,
            Node::Powi(a, k) => a.eval_at(prec)?.powi(*k, prec)?,
        })
    }

    fn precedence(&self) -> u8 {
        match &*self.0 {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(_) => 3,
            Node::Powi(..) => 4,
            Node::Ratio(_) | Node::Exact(_) => 2,
            Node::Int(v) if v < &BigInt::zero() => 3,
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Int(v) => write!(f, "{v}"),
            Node::Ratio(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Node::Exact(d) => write!(f, "{d}"),
            Node::Enclosure(iv) => write!(f, "[{}, {}]", iv.lo(), iv.hi()),
            Node::Add(a, b) => {
                a.fmt_child(f, 1)?;
                write!(f, " + ")?;
                b.fmt_child(f, 2)
            }
            Node::Sub(a, b) => {
                a.fmt_child(f, 1)?;
                write!(f, " - ")?;
                b.fmt_child(f, 2)
            }
            Node::Mul(a, b) => {
                a.fmt_child(f, 2)?;
                write!(f, "*")?;
                b.fmt_child(f, 3)
            }
            Node::Div(a, b) => {
                a.fmt_child(f, 2)?;
                write!(f, "/")?;
                b.fmt_child(f, 3)
            }
            Node::Neg(a) => {
                write!(f, "-")?;
                a.fmt_child(f, 3)
            }
            Node::Abs(a) => write!(f, "|{a}|"),
            Node::Sqrt(a) => write!(f, "sqrt({a})"),
            Node::Ln(a) => write!(f, "log({a})"),
            Node::Exp(a) => write!(f, "exp({a})"),
            Node::Powi(a, k) => {
                a.fmt_child(f, 5)?;
                write!(f, "^{}", if *k < 0 { format!("({k})") } else { k.to_string() })
            }
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $node:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::node(Node::$node(self, rhs))
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::node(Node::$node(self, rhs.clone()))
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::node(Node::$node(self.clone(), rhs))
            }
        }
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::node(Node::$node(self.clone(), rhs.clone()))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::node(Node::Neg(self))
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::node(Node::Neg(self.clone()))
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::int(v)
    }
}

impl From<BigInt> for Expr {
    fn from(v: BigInt) -> Self {
        Expr::int(v)
    }
}

impl From<BigRational> for Expr {
    fn from(v: BigRational) -> Self {
        Expr::rational(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals() {
        assert_eq!(parse_decimal("166.3").unwrap(), BigRational::new(1663.into(), 10.into()));
        assert_eq!(parse_decimal("-2.5e-3").unwrap(), BigRational::new((-1).into(), 400.into()));
        assert_eq!(parse_decimal("6.90212e29").unwrap(), BigRational::from_integer("690212000000000000000000000000".parse().unwrap()));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal("e5").is_err());
    }

    #[test]
    fn rationality_is_structural() {
        let x = Expr::int(22) / Expr::int(7);
        assert!(x.is_rational());
        assert_eq!(x.rational_value(), Some(BigRational::new(22.into(), 7.into())));
        assert!(!Expr::int(5).sqrt().is_rational());
    }

    #[test]
    fn display_is_readable() {
        let alpha = (Expr::int(1) + Expr::int(5).sqrt()) / Expr::int(2);
        assert_eq!(format!("{}", alpha.ln()), "log((1 + sqrt(5))/2)");
        assert_eq!(format!("{}", (Expr::int(1) - alpha.powi(-3)).abs()), "|1 - ((1 + sqrt(5))/2)^(-3)|");
    }

    #[test]
    fn structural_equality() {
        let a = Expr::int(7).ln();
        let b = Expr::int(7).ln();
        assert_eq!(a, b);
        assert_ne!(a, Expr::int(13).ln());
    }
}
