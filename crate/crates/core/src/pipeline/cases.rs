use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use super::PipelineError;
use crate::sequences::{fib_u, lucas_u, perfect_power_facts, prime_power_exponent, SolutionTriple};

/// Every `(n, m, a)` with `0 <= m < n <= cap`, `n >= 2` and
/// `F_n - F_m = p^a`.
pub fn brute_force_search(p: u64, cap: u64) -> Vec<SolutionTriple> {
    let fibs: Vec<BigInt> = (0..=cap).map(fib_u).collect();
    let mut out = Vec::new();
    for n in 2..=cap {
        for m in 0..n {
            let diff = &fibs[n as usize] - &fibs[m as usize];
            if diff < BigInt::one() {
                continue;
            }
            if let Ok(Some(a)) = prime_power_exponent(&diff, p) {
                out.push(SolutionTriple { n, m, a });
            }
        }
    }
    out
}

/// The three shapes settled without linear forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SmallCaseRule {
    /// `n - m = 1`, so `F_(m-1) = p^a`.
    GapOne,
    /// `n - m = 2`, so `F_(m+1) = p^a`.
    GapTwo,
    /// `m = 0`, so `F_n = p^a`.
    ZeroM,
}

impl SmallCaseRule {
    pub fn name(self) -> &'static str {
        match self {
            SmallCaseRule::GapOne => "gap_one",
            SmallCaseRule::GapTwo => "gap_two",
            SmallCaseRule::ZeroM => "zero_m",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SmallCaseEntry {
    pub rule: SmallCaseRule,
    /// Indices `k` with `F_k` tested against `p^a`.
    pub candidates: Vec<u64>,
    pub solutions: Vec<SolutionTriple>,
}

/// Indices `k >= 1` where `F_k = p^a` is possible: `F_k <= p` covers
/// `a <= 1`, and the perfect-power table covers `a >= 2`.
fn fibonacci_candidates(p: u64) -> Vec<u64> {
    let mut ks: BTreeSet<u64> = BTreeSet::new();
    let pb = BigInt::from(p);
    let mut k = 1;
    while fib_u(k) <= pb {
        ks.insert(k);
        k += 1;
    }
    for f in perfect_power_facts().fibonacci {
        if f.index >= 1 {
            ks.insert(f.index);
        }
    }
    ks.into_iter().collect()
}

/// Settle `n - m = 1`, `n - m = 2` and `m = 0` for all `n`.
pub fn small_case_split(p: u64) -> Vec<SmallCaseEntry> {
    let candidates = fibonacci_candidates(p);
    let hits: Vec<(u64, u32)> = candidates
        .iter()
        .filter_map(|&k| match prime_power_exponent(&fib_u(k), p) {
            Ok(Some(a)) => Some((k, a)),
            _ => None,
        })
        .collect();
    let build = |rule: SmallCaseRule| {
        let mut solutions: Vec<SolutionTriple> = hits
            .iter()
            .filter_map(|&(k, a)| {
                let (n, m) = match rule {
                    SmallCaseRule::GapOne => (k + 2, k + 1),
                    SmallCaseRule::GapTwo => (k + 1, k - 1),
                    SmallCaseRule::ZeroM => (k, 0),
                };
                (n >= 2).then_some(SolutionTriple { n, m, a })
            })
            .collect();
        solutions.sort();
        SmallCaseEntry { rule, candidates: candidates.clone(), solutions }
    };
    vec![build(SmallCaseRule::GapOne), build(SmallCaseRule::GapTwo), build(SmallCaseRule::ZeroM)]
}

/// How an exceptional `d = n - m` is ruled out for `n > cap`, `a >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualRule {
    /// `d = 4`: `F_(m+4) - F_m = L_(m+2)` would be a perfect power.
    LucasPerfectPower,
    /// `d = 2 (mod 4)`: `F_n - F_m = F_((n+m)/2) L_(d/2)`.
    FixedLucasFactor,
    /// `d = 0 (mod 4)`: `F_n - F_m = F_(d/2) L_((n+m)/2)`.
    FixedFibonacciFactor,
}

impl ResidualRule {
    pub fn name(self) -> &'static str {
        match self {
            ResidualRule::LucasPerfectPower => "lucas_perfect_power",
            ResidualRule::FixedLucasFactor => "fixed_lucas_factor",
            ResidualRule::FixedFibonacciFactor => "fixed_fibonacci_factor",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ResidualElimination {
    pub d: u64,
    pub rule: ResidualRule,
    /// Index of the witness: `L_k` or `F_k` for the fixed-factor rules, or
    /// the Lucas index `m + 2` bound for the table rule.
    pub witness_index: u64,
    /// The fixed factor, or the largest Lucas perfect power.
    pub witness_value: BigInt,
}

/// Rule out `n - m = d` for solutions with `n > search_cap` and `a >= 2`.
pub fn eliminate_residual(p: u64, d: u64, search_cap: u64) -> Result<ResidualElimination, PipelineError> {
    if d == 4 {
        // L_(m+2) = p^a with a >= 2 means L_(m+2) is in the table; each such
        // entry gives n = index + 2, which the search already covers
        let facts = perfect_power_facts().lucas;
        for f in facts {
            if let Ok(Some(a)) = prime_power_exponent(&BigInt::from(f.value), p) {
                if a >= 2 && f.index + 2 > search_cap {
                    return Err(PipelineError::UnhandledResidual(d));
                }
            }
        }
        let top = facts.iter().max_by_key(|f| f.value).expect("table is nonempty");
        return Ok(ResidualElimination {
            d,
            rule: ResidualRule::LucasPerfectPower,
            witness_index: top.index,
            witness_value: BigInt::from(top.value),
        });
    }
    if d % 2 == 1 {
        return Err(PipelineError::UnhandledResidual(d));
    }
    let k = d / 2;
    let (rule, factor) = if d % 4 == 2 {
        (ResidualRule::FixedLucasFactor, lucas_u(k))
    } else {
        (ResidualRule::FixedFibonacciFactor, fib_u(k))
    };
    // both factors of p^a must be powers of p; a factor of 1 proves nothing
    if factor <= BigInt::one() || matches!(prime_power_exponent(&factor, p), Ok(Some(_))) {
        return Err(PipelineError::UnhandledResidual(d));
    }
    Ok(ResidualElimination { d, rule, witness_index: k, witness_value: factor })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u64, m: u64, a: u32) -> SolutionTriple {
        SolutionTriple { n, m, a }
    }

    #[test]
    fn search_p7() {
        let found = brute_force_search(7, 200);
        let big: Vec<_> = found.iter().filter(|s| s.a >= 1).copied().collect();
        // 377 - 34 = 343 = 7^3
        assert_eq!(big, vec![t(6, 1, 1), t(6, 2, 1), t(14, 9, 3)]);
        assert_eq!(fib_u(14) - fib_u(9), BigInt::from(343));
        for s in [t(2, 0, 0), t(3, 1, 0), t(3, 2, 0), t(4, 3, 0)] {
            assert!(found.contains(&s));
        }
    }

    #[test]
    fn search_p13() {
        let big: Vec<_> = brute_force_search(13, 200).into_iter().filter(|s| s.a >= 1).collect();
        assert_eq!(big, vec![t(7, 0, 1), t(8, 6, 1), t(9, 8, 1)]);
    }

    #[test]
    fn search_p2_smoke() {
        let found = brute_force_search(2, 30);
        assert!(found.contains(&t(3, 0, 1)));
        for s in &found {
            assert!(s.holds_for(2));
        }
    }

    #[test]
    fn small_cases() {
        let s7 = small_case_split(7);
        assert_eq!(s7[0].solutions, vec![t(3, 2, 0), t(4, 3, 0)]);
        assert_eq!(s7[1].solutions, vec![t(2, 0, 0), t(3, 1, 0)]);
        assert_eq!(s7[2].solutions, vec![t(2, 0, 0)]);
        let s13 = small_case_split(13);
        assert_eq!(s13[0].solutions, vec![t(3, 2, 0), t(4, 3, 0), t(9, 8, 1)]);
        assert_eq!(s13[1].solutions, vec![t(2, 0, 0), t(3, 1, 0), t(8, 6, 1)]);
        assert_eq!(s13[2].solutions, vec![t(2, 0, 0), t(7, 0, 1)]);
    }

    #[test]
    fn residuals() {
        let r = eliminate_residual(13, 66, 200).unwrap();
        assert_eq!(r.rule, ResidualRule::FixedLucasFactor);
        assert_eq!(r.witness_value, BigInt::from(7881196));
        let r = eliminate_residual(13, 88, 200).unwrap();
        assert_eq!(r.rule, ResidualRule::FixedFibonacciFactor);
        assert_eq!(r.witness_value, BigInt::from(701408733));
        let r = eliminate_residual(7, 4, 200).unwrap();
        assert_eq!(r.rule, ResidualRule::LucasPerfectPower);
        assert!(matches!(eliminate_residual(7, 31, 200), Err(PipelineError::UnhandledResidual(31))));
        // F_4 = 3 is a power of 3, so d = 8 cannot be ruled out this way
        assert!(matches!(eliminate_residual(3, 8, 200), Err(PipelineError::UnhandledResidual(8))));
        assert!(eliminate_residual(13, 14, 200).is_ok());
    }
}
