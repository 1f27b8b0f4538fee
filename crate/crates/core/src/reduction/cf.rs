use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ReductionError;
use crate::realnum::{width_bits, CertifiedReal, EvalContext, Expr};

/// A certified prefix of a simple continued fraction.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    source: Expr,
    terms: Vec<BigInt>,
    convergents: Vec<(BigInt, BigInt)>,
}

impl ContinuedFraction {
    /// Build from known partial quotients.
    pub fn from_terms(source: Expr, terms: Vec<BigInt>) -> Self {
        let mut cf = ContinuedFraction { source, terms: Vec::new(), convergents: Vec::new() };
        for a in terms {
            cf.push(a);
        }
        cf
    }

    fn push(&mut self, a: BigInt) {
        let k = self.convergents.len();
        let (p2, q2, p1, q1) = match k {
            0 => (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero()),
            1 => (BigInt::one(), BigInt::zero(), self.convergents[0].0.clone(), self.convergents[0].1.clone()),
            _ => {
                let (p2, q2) = self.convergents[k - 2].clone();
                let (p1, q1) = self.convergents[k - 1].clone();
                (p2, q2, p1, q1)
            }
        };
        self.convergents.push((&a * p1 + p2, &a * q1 + q2));
        self.terms.push(a);
    }

    pub fn source(&self) -> &Expr {
        &self.source
    }

    /// Partial quotients `a_0, a_1, ...`.
    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    /// Convergents `(p_k, q_k)`, indexed from `a_0`.
    pub fn convergents(&self) -> &[(BigInt, BigInt)] {
        &self.convergents
    }

    /// Index of the last certified term.
    pub fn certified_through(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    pub fn denominator(&self, k: usize) -> Option<&BigInt> {
        self.convergents.get(k).map(|c| &c.1)
    }

    /// First index with `q_k > bound`.
    pub fn first_index_above(&self, bound: &BigInt) -> Option<usize> {
        self.convergents.iter().position(|(_, q)| q > bound)
    }

    pub fn convergent(&self, k: usize) -> Option<BigRational> {
        self.convergents.get(k).map(|(p, q)| BigRational::new(p.clone(), q.clone()))
    }
}

/// Run the expansion on both endpoints while they agree. Returns the
/// partial quotients that are correct for every number in `[lo, hi]`.
fn common_prefix(mut lo: BigRational, mut hi: BigRational, stop: impl Fn(&[BigInt]) -> bool) -> (Vec<BigInt>, bool) {
    let mut terms = Vec::new();
    loop {
        if stop(&terms) {
            return (terms, true);
        }
        let a = lo.floor();
        // an integer endpoint could end the expansion
        if a != hi.floor() || a == lo {
            return (terms, false);
        }
        let ai = a.to_integer();
        let next_lo = (&hi - &a).recip();
        let next_hi = (&lo - &a).recip();
        terms.push(ai);
        lo = next_lo;
        hi = next_hi;
    }
}

/// Expand `x` until some convergent has `q_k > q_min`, then `lookahead`
/// further terms. Every term is certified by an interval floor test; the
/// enclosure of `x` is refined as needed.
///
/// `x` must be irrational. Exact rational sources and zero-width enclosures
/// are rejected, since their expansion would terminate.
pub fn cf_expand(
    x: &CertifiedReal,
    q_min: &BigInt,
    lookahead: usize,
    ctx: &EvalContext,
) -> Result<ContinuedFraction, ReductionError> {
    if x.source().is_rational() || x.lo() == x.hi() {
        return Err(ReductionError::NotIrrational(x.source().to_string()));
    }
    let mut bits = (2 * q_min.bits() as u32 + 64).max(128);
    let mut current = x.clone();
    loop {
        current = current.refine(&width_bits(bits), &ctx.ladder)?;
        let stop = |terms: &[BigInt]| {
            let cf = ContinuedFraction::from_terms(Expr::int(0), terms.to_vec());
            match cf.first_index_above(q_min) {
                Some(k) => terms.len() > k + lookahead,
                None => false,
            }
        };
        let (terms, done) = common_prefix(current.lo().to_rational(), current.hi().to_rational(), stop);
        if done {
            return Ok(ContinuedFraction::from_terms(x.source().clone(), terms));
        }
        bits = bits.saturating_mul(2);
        if bits > ctx.ladder.max_bits.saturating_mul(2) {
            return Err(crate::realnum::RealError::PrecisionExhausted {
                bits: ctx.ladder.max_bits,
                what: format!("continued fraction of {}", x.source()),
            }
            .into());
        }
    }
}
