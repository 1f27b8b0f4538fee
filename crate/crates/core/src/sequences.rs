//! Fibonacci and Lucas numbers, the difference factorization, and prime-power
//! tests on exact integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Largest absolute index accepted by [`SeqIndex`].
pub const INDEX_CAP: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SequenceError {
    #[error("index {0} exceeds the cap of {INDEX_CAP}")]
    IndexOverCap(i64),
    #[error("domain error: {0}")]
    Domain(String),
}

/// A Fibonacci/Lucas index with `|n| <= INDEX_CAP`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeqIndex(i64);

impl SeqIndex {
    pub fn new(value: i64) -> Result<Self, SequenceError> {
        if value.unsigned_abs() > INDEX_CAP as u64 {
            Err(SequenceError::IndexOverCap(value))
        } else {
            Ok(SeqIndex(value))
        }
    }

    pub fn value(self) -> i64 {
        self.0
    }
}

impl TryFrom<i64> for SeqIndex {
    type Error = SequenceError;
    fn try_from(value: i64) -> Result<Self, Self::Error> {
        SeqIndex::new(value)
    }
}

/// `(F_k, F_{k+1})` by fast doubling.
fn fib_pair(k: u64) -> (BigInt, BigInt) {
    if k == 0 {
        return (BigInt::zero(), BigInt::one());
    }
    let (a, b) = fib_pair(k / 2);
    // F_2j = F_j (2 F_{j+1} - F_j), F_2j+1 = F_j^2 + F_{j+1}^2
    let c = &a * (&b * 2u32 - &a);
    let d = &a * &a + &b * &b;
    if k.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

/// The Fibonacci number `F_n`; negative indices use `F_{-n} = (-1)^{n+1} F_n`.
pub fn fib(n: SeqIndex) -> BigInt {
    let k = n.0.unsigned_abs();
    let f = fib_pair(k).0;
    if n.0 < 0 && k.is_multiple_of(2) {
        -f
    } else {
        f
    }
}

/// The Lucas number `L_n`; negative indices use `L_{-n} = (-1)^n L_n`.
pub fn lucas(n: SeqIndex) -> BigInt {
    let k = n.0.unsigned_abs();
    let (f, g) = fib_pair(k);
    // L_k = F_{k-1} + F_{k+1} = 2 F_{k+1} - F_k
    let l = g * 2u32 - f;
    if n.0 < 0 && k % 2 == 1 {
        -l
    } else {
        l
    }
}

/// `F_n` for a non-negative index known to be within the cap.
pub fn fib_u(n: u64) -> BigInt {
    assert!(n <= INDEX_CAP as u64, "index {n} over cap");
    fib_pair(n).0
}

/// `L_n` for a non-negative index known to be within the cap.
pub fn lucas_u(n: u64) -> BigInt {
    assert!(n <= INDEX_CAP as u64, "index {n} over cap");
    let (f, g) = fib_pair(n);
    g * 2u32 - f
}

/// Which branch of the difference identity applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorRule {
    /// `n ≡ m (mod 4)`: `F_n - F_m = F_{(n-m)/2} L_{(n+m)/2}`.
    A,
    /// `n ≡ m + 2 (mod 4)`: `F_n - F_m = F_{(n+m)/2} L_{(n-m)/2}`.
    B,
}

/// `F_n - F_m = F_{fib_index} * L_{lucas_index}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiffFactorization {
    pub fib_index: u64,
    pub lucas_index: u64,
    pub rule: FactorRule,
}

impl DiffFactorization {
    pub fn product(&self) -> BigInt {
        fib_u(self.fib_index) * lucas_u(self.lucas_index)
    }
}

/// Factor `F_n - F_m` for `n > m >= 0` of equal parity.
pub fn diff_factorization(n: SeqIndex, m: SeqIndex) -> Result<DiffFactorization, SequenceError> {
    let (n, m) = (n.0, m.0);
    if m < 0 || n <= m {
        return Err(SequenceError::Domain(format!("need n > m >= 0, got n={n}, m={m}")));
    }
    if (n - m) % 2 != 0 {
        return Err(SequenceError::Domain(format!("n={n} and m={m} differ in parity")));
    }
    let (half_diff, half_sum) = (((n - m) / 2) as u64, ((n + m) / 2) as u64);
    Ok(if (n - m) % 4 == 0 {
        DiffFactorization { fib_index: half_diff, lucas_index: half_sum, rule: FactorRule::A }
    } else {
        DiffFactorization { fib_index: half_sum, lucas_index: half_diff, rule: FactorRule::B }
    })
}

/// The exponent `a` with `x = p^a`, if any. `p` is trusted to be prime.
pub fn prime_power_exponent(x: &BigInt, p: u64) -> Result<Option<u32>, SequenceError> {
    if !x.is_positive() {
        return Err(SequenceError::Domain(format!("prime-power test needs x >= 1, got {x}")));
    }
    if p < 2 {
        return Err(SequenceError::Domain(format!("{p} is not a prime")));
    }
    let p = BigInt::from(p);
    let mut rest = x.clone();
    let mut a = 0u32;
    while !rest.is_one() {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return Ok(None);
        }
        rest = q;
        a += 1;
    }
    Ok(Some(a))
}

/// Deterministic primality test for `u64` (Miller–Rabin with a fixed base set).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// One entry of the perfect-power table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerFact {
    pub index: u64,
    pub value: u64,
}

/// The complete list of perfect powers in the Fibonacci and Lucas sequences
/// (Bugeaud–Mignotte–Siksek), taken as an axiom.
#[derive(Clone, Copy, Debug)]
pub struct PerfectPowerFacts {
    pub fibonacci: &'static [PowerFact],
    pub lucas: &'static [PowerFact],
}

const FIB_POWERS: &[PowerFact] = &[
    PowerFact { index: 0, value: 0 },
    PowerFact { index: 1, value: 1 },
    PowerFact { index: 2, value: 1 },
    PowerFact { index: 6, value: 8 },
    PowerFact { index: 12, value: 144 },
];

const LUCAS_POWERS: &[PowerFact] = &[PowerFact { index: 1, value: 1 }, PowerFact { index: 3, value: 4 }];

pub fn perfect_power_facts() -> PerfectPowerFacts {
    PerfectPowerFacts { fibonacci: FIB_POWERS, lucas: LUCAS_POWERS }
}

impl PerfectPowerFacts {
    pub fn fibonacci_values(&self) -> Vec<u64> {
        self.fibonacci.iter().map(|f| f.value).collect()
    }

    pub fn lucas_values(&self) -> Vec<u64> {
        self.lucas.iter().map(|f| f.value).collect()
    }

    pub fn is_fibonacci_power(&self, x: &BigInt) -> bool {
        self.fibonacci.iter().any(|f| BigInt::from(f.value) == *x)
    }

    pub fn is_lucas_power(&self, x: &BigInt) -> bool {
        self.lucas.iter().any(|f| BigInt::from(f.value) == *x)
    }
}

/// A solution `(n, m, a)` of `F_n - F_m = p^a` with `n > m >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SolutionTriple {
    pub n: u64,
    pub m: u64,
    pub a: u32,
}

impl SolutionTriple {
    pub fn new(n: u64, m: u64, a: u32) -> Result<Self, SequenceError> {
        if n <= m {
            return Err(SequenceError::Domain(format!("need n > m, got n={n}, m={m}")));
        }
        if n > INDEX_CAP as u64 {
            return Err(SequenceError::IndexOverCap(n as i64));
        }
        Ok(SolutionTriple { n, m, a })
    }

    /// Exact check of `F_n - F_m = p^a`.
    pub fn holds_for(&self, p: u64) -> bool {
        fib_u(self.n) - fib_u(self.m) == num_traits::pow(BigInt::from(p), self.a as usize)
    }
}

impl fmt::Display for SolutionTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.m, self.a)
    }
}
