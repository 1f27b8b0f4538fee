//! Checks shared by the property suites and the acceptance target. Each one
//! returns `Err` with a description instead of panicking, so callers can
//! drive it from proptest or from a fixed-seed loop.

#![allow(dead_code)]

use std::cmp::Ordering;

use fibpow::heights::{eta3_exact, height_eta3_bound, height_quadratic, height_rational};
use fibpow::realnum::{
    constants, nearest_int_distance, width_bits, CertifiedReal, Dyadic, EvalContext, Expr, Interval,
};
use fibpow::reduction::{cf_expand, reduce, ContinuedFraction, ReductionParams};
use fibpow::sequences::{diff_factorization, fib, fib_u, lucas, lucas_u, SeqIndex};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `(F_0 ..= F_n, L_0 ..= L_n)` by the plain recurrence.
pub fn recurrence_table(n: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut f = vec![BigInt::zero(), BigInt::one()];
    let mut l = vec![BigInt::from(2), BigInt::one()];
    while f.len() <= n {
        let k = f.len();
        f.push(&f[k - 1] + &f[k - 2]);
        l.push(&l[k - 1] + &l[k - 2]);
    }
    f.truncate(n + 1);
    l.truncate(n + 1);
    (f, l)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

// ---- sequences ----

pub fn check_recurrence(n: u64) -> Check {
    let k = |i: u64| SeqIndex::new(i as i64).unwrap();
    ensure(fib(k(n)) == fib(k(n - 1)) + fib(k(n - 2)), || format!("F recurrence fails at {n}"))?;
    ensure(lucas(k(n)) == lucas(k(n - 1)) + lucas(k(n - 2)), || format!("L recurrence fails at {n}"))
}

pub fn check_binet(n: u64, ctx: &EvalContext) -> Check {
    let n_i = n as i64;
    let e = (constants::alpha().powi(n_i) - constants::beta().powi(n_i)) / constants::sqrt5();
    let x = ctx.eval(&e).map_err(|e| e.to_string())?;
    let f = BigRational::from_integer(fib_u(n));
    ensure(x.contains(&f), || format!("Binet enclosure misses F_{n}"))?;
    ensure(x.width().to_rational() < rat(1, 2), || format!("Binet enclosure too wide at {n}"))
}

/// `alpha^(n-2) <= F_n <= alpha^(n-1)`.
pub fn check_growth(n: u64, ctx: &EvalContext) -> Check {
    let f = BigRational::from_integer(fib_u(n));
    let power = |k: i64| -> Result<CertifiedReal, String> { ctx.eval(&constants::alpha().powi(k)).map_err(|e| e.to_string()) };
    let lower = n as i64 - 2;
    let upper = n as i64 - 1;
    // alpha^0 = 1 is the only power that can meet F_n exactly
    if lower == 0 {
        ensure(f >= BigRational::one(), || "F_2 < 1".into())?;
    } else {
        let lo = power(lower)?;
        ensure(lo.hi().to_rational() < f, || format!("alpha^{lower} not below F_{n}"))?;
    }
    if upper == 0 {
        ensure(f <= BigRational::one(), || "F_1 > 1".into())
    } else {
        let hi = power(upper)?;
        ensure(f < hi.lo().to_rational(), || format!("F_{n} not below alpha^{upper}"))
    }
}

pub fn check_lucas_identity(l: u64) -> Check {
    ensure(fib_u(l + 1) + fib_u(l - 1) == lucas_u(l), || format!("F_(l+1) + F_(l-1) != L_l at l = {l}"))
}

/// Factor `F_n - F_m` and compare with the recurrence table.
pub fn check_factorization(n: u64, m: u64, table: &(Vec<BigInt>, Vec<BigInt>)) -> Check {
    let f = diff_factorization(SeqIndex::new(n as i64).unwrap(), SeqIndex::new(m as i64).unwrap())
        .map_err(|e| e.to_string())?;
    let direct = &table.0[n as usize] - &table.0[m as usize];
    let product = &table.0[f.fib_index as usize] * &table.1[f.lucas_index as usize];
    ensure(direct == product, || format!("F_{n} - F_{m} != F_{} L_{}", f.fib_index, f.lucas_index))
}

// ---- heights ----

/// `exp(h(r)) = max(|num|, |den|)` for a rational in lowest terms.
fn exp_height(r: &BigRational) -> BigInt {
    r.numer().abs().max(r.denom().abs())
}

fn h(r: &BigRational, ctx: &EvalContext) -> Result<CertifiedReal, String> {
    height_rational(r, ctx).map(|b| b.value).map_err(|e| e.to_string())
}

/// `lhs <= rhs + log(factor)` where `lhs_exp <= rhs_exp * factor` is known
/// exactly. Strict integer inequality must also certify on the log side;
/// equality must leave the enclosures overlapping.
fn height_le(
    lhs: &CertifiedReal,
    rhs: Expr,
    lhs_exp: &BigInt,
    rhs_exp: &BigInt,
    what: &str,
    ctx: &EvalContext,
) -> Check {
    match lhs_exp.cmp(rhs_exp) {
        Ordering::Greater => Err(format!("{what}: exact heights violate the inequality")),
        Ordering::Less => ensure(ctx.less(lhs.source(), &rhs), || format!("{what}: not certified")),
        Ordering::Equal => {
            let r = ctx.eval(&rhs).map_err(|e| e.to_string())?;
            ensure(lhs.lo() <= r.hi() && r.lo() <= lhs.hi(), || format!("{what}: equal heights do not overlap"))
        }
    }
}

/// `h(x +- y) <= h(x) + h(y) + log 2`.
pub fn check_height_sum(x: &BigRational, y: &BigRational, ctx: &EvalContext) -> Check {
    for s in [x + y, x - y] {
        if s.is_zero() {
            continue;
        }
        let rhs = h(x, ctx)?.source().clone() + h(y, ctx)?.source().clone() + Expr::int(2).ln();
        let bound = exp_height(x) * exp_height(y) * 2;
        height_le(&h(&s, ctx)?, rhs, &exp_height(&s), &bound, "h(x+-y)", ctx)?;
    }
    Ok(())
}

/// `h(x y^(+-1)) <= h(x) + h(y)`.
pub fn check_height_product(x: &BigRational, y: &BigRational, ctx: &EvalContext) -> Check {
    for s in [x * y, x / y] {
        let rhs = h(x, ctx)?.source().clone() + h(y, ctx)?.source().clone();
        let bound = exp_height(x) * exp_height(y);
        height_le(&h(&s, ctx)?, rhs, &exp_height(&s), &bound, "h(xy)", ctx)?;
    }
    Ok(())
}

/// `h(x^k) = |k| h(x)`.
pub fn check_height_power(x: &BigRational, k: i32, ctx: &EvalContext) -> Check {
    let xk = num_traits::pow(x.clone(), k.unsigned_abs() as usize);
    let xk = if k < 0 { xk.recip() } else { xk };
    let exact = num_traits::pow(exp_height(x), k.unsigned_abs() as usize);
    ensure(exp_height(&xk) == exact, || format!("H(x^{k}) != H(x)^{}", k.abs()))?;
    let lhs = h(&xk, ctx)?;
    let rhs = ctx.eval(&(Expr::int(k.abs()) * h(x, ctx)?.source().clone())).map_err(|e| e.to_string())?;
    ensure(lhs.lo() <= rhs.hi() && rhs.lo() <= lhs.hi(), || format!("h(x^{k}) and {} h(x) are disjoint", k.abs()))
}

/// The exact height of `sqrt5 / (1 - alpha^-d)` is below the closed form.
pub fn check_eta3(d: u64, ctx: &EvalContext) -> Check {
    let exact = height_quadratic(&eta3_exact(d).map_err(|e| e.to_string())?, ctx).map_err(|e| e.to_string())?;
    let bound = height_eta3_bound(d, ctx).map_err(|e| e.to_string())?;
    ensure(ctx.less(exact.value.source(), bound.height.value.source()), || format!("eta3 height bound fails at d = {d}"))
}

// ---- continued fractions and reduction ----

/// `p_k q_(k-1) - p_(k-1) q_k = (-1)^(k-1)` and `q_k` increasing from `k = 1`.
pub fn check_determinant(cf: &ContinuedFraction) -> Check {
    let c = cf.convergents();
    for k in 1..c.len() {
        let det = &c[k].0 * &c[k - 1].1 - &c[k - 1].0 * &c[k].1;
        let expected = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        ensure(det == expected, || format!("determinant law fails at k = {k}"))?;
        if k >= 2 {
            ensure(c[k].1 > c[k - 1].1, || format!("q_{k} does not increase"))?;
        }
    }
    Ok(())
}

/// `|x - p_k/q_k| < 1/(q_k q_(k+1)) <= 1/q_k^2`, certified.
pub fn check_best_approximation(cf: &ContinuedFraction, ctx: &EvalContext) -> Check {
    let c = cf.convergents();
    for k in 0..c.len().saturating_sub(1) {
        let (p, q) = &c[k];
        let gap = (cf.source().clone() - Expr::rational(BigRational::new(p.clone(), q.clone()))).abs();
        let bound = Expr::rational(BigRational::new(BigInt::one(), q * &c[k + 1].1));
        ensure(ctx.less(&gap, &bound), || format!("convergent {k} is not within 1/(q_k q_k+1)"))?;
        ensure(q * q <= q * &c[k + 1].1, || format!("q_{k}^2 > q_k q_k+1"))?;
    }
    Ok(())
}

/// Outcome of one synthetic reduction.
pub enum Soundness {
    Verified { q: BigInt, pairs: usize },
    /// The lemma did not certify for this instance; nothing to check.
    NotCertified,
}

/// Reduce `|u gamma - v + mu| < A B^-w` with `u <= m_max`, then enumerate
/// every `0 <= u <= m_max` and every `v` in range and confirm that the
/// conclusion `|u gamma - v + mu| >= eps/q >= A B^-w` holds for
/// `w = omega_cap`.
pub fn check_reduction_soundness(gamma: Expr, mu: Expr, a: i64, b: Expr, m_max: u64, ctx: &EvalContext) -> Result<Soundness, String> {
    let g = ctx.eval(&gamma).map_err(|e| e.to_string())?;
    let six_m = BigInt::from(6 * m_max);
    let cf = cf_expand(&g, &six_m, 10, ctx).map_err(|e| e.to_string())?;
    let params = ReductionParams { gamma: gamma.clone(), mu: mu.clone(), a: BigRational::from_integer(a.into()), b: b.clone(), m: m_max.into() };
    let inst = match reduce(&params, &cf, ctx) {
        Ok(inst) => inst,
        Err(_) => return Ok(Soundness::NotCertified),
    };
    let eps_lo = inst.epsilon.lo().to_rational();
    let floor = &eps_lo / BigRational::from_integer(inst.q.clone());
    // A B^-w at w = omega_cap must not exceed eps/q
    let w = inst.omega_cap.clone().ok_or("no cap")?.to_i64().ok_or("cap too large")?;
    let tail = Expr::int(a) * b.powi(-w);
    let tail = ctx.eval(&tail).map_err(|e| e.to_string())?;
    ensure(tail.hi().to_rational() <= floor, || "A B^-omega_cap exceeds eps/q".into())?;

    let prec = 160;
    let gi = gamma.eval_at(prec).map_err(|e| e.to_string())?;
    let mi = mu.eval_at(prec).map_err(|e| e.to_string())?;
    let v_max = (g.to_f64() * m_max as f64 + mi.mid_f64().abs()).ceil() as i64 + 1;
    let mut pairs = 0;
    for u in 0..=m_max {
        let x = gi.mul(&Interval::from_int(u), prec).add(&mi, prec);
        let mid = x.mid_f64();
        for v in -v_max..=v_max {
            pairs += 1;
            // far from x the form is at least 1 > eps/q
            if (mid - v as f64).abs() > 2.0 {
                continue;
            }
            let form = x.sub(&Interval::from_int(v), prec).abs();
            ensure(form.lo().to_rational() >= floor, || format!("u = {u}, v = {v} violates the lemma"))?;
        }
    }
    Ok(Soundness::Verified { q: inst.q, pairs })
}

// ---- realnum ----

/// A random expression together with its exact value.
#[derive(Clone, Debug)]
pub struct RationalExpr {
    pub expr: Expr,
    pub value: BigRational,
}

/// Combine leaves by the op codes in `ops`: 0 add, 1 sub, 2 mul, 3 div,
/// 4 square root of a square, 5 integer power.
pub fn build_rational_expr(leaves: &[(i64, i64)], ops: &[u8]) -> RationalExpr {
    let leaf = |(n, d): (i64, i64)| RationalExpr { expr: Expr::ratio(n, d), value: rat(n, d) };
    let mut acc = leaf(leaves[0]);
    for (i, op) in ops.iter().enumerate() {
        let next = leaf(leaves[(i + 1) % leaves.len()]);
        acc = match op % 6 {
            0 => RationalExpr { expr: acc.expr + next.expr, value: acc.value + next.value },
            1 => RationalExpr { expr: acc.expr - next.expr, value: acc.value - next.value },
            2 => RationalExpr { expr: acc.expr * next.expr, value: acc.value * next.value },
            3 if !next.value.is_zero() => RationalExpr { expr: acc.expr / next.expr, value: acc.value / next.value },
            4 => RationalExpr { expr: acc.expr.powi(2).sqrt(), value: acc.value.abs() },
            5 if !acc.value.is_zero() => RationalExpr { expr: acc.expr.powi(-3), value: num_traits::pow(acc.value.recip(), 3) },
            _ => acc,
        };
    }
    acc
}

pub fn check_containment(e: &RationalExpr, ctx: &EvalContext) -> Check {
    let x = ctx.eval(&e.expr).map_err(|err| format!("{}: {err}", e.expr))?;
    ensure(x.contains(&e.value), || format!("{} does not contain {}", e.expr, e.value))
}

/// Refining to a smaller width stays inside and never widens.
pub fn check_refinement(expr: &Expr, ctx: &EvalContext) -> Check {
    let mut x = ctx.eval(expr).map_err(|e| e.to_string())?;
    for bits in [150, 300, 600] {
        let y = x.refine(&width_bits(bits), &ctx.ladder).map_err(|e| e.to_string())?;
        ensure(y.lo() <= x.hi() && x.lo() <= y.hi(), || format!("refinement of {expr} to {bits} bits is disjoint"))?;
        ensure(y.width() <= x.width(), || format!("refinement of {expr} widened"))?;
        x = y;
    }
    Ok(())
}

fn dyadic_interval(a: (i64, i64), b: (i64, i64)) -> Interval {
    let d = |(m, e): (i64, i64)| Dyadic::new(m.into(), e);
    let (x, y) = (d(a), d(b));
    if x <= y {
        Interval::new(x, y)
    } else {
        Interval::new(y, x)
    }
}

/// Every pairwise sum, difference, product and quotient of endpoints lies in
/// the result computed at a deliberately low precision.
pub fn check_directed_rounding(a: ((i64, i64), (i64, i64)), b: ((i64, i64), (i64, i64)), prec: u32) -> Check {
    let x = dyadic_interval(a.0, a.1);
    let y = dyadic_interval(b.0, b.1);
    let corners = |f: &dyn Fn(&BigRational, &BigRational) -> BigRational| -> Vec<BigRational> {
        let xs = [x.lo().to_rational(), x.hi().to_rational()];
        let ys = [y.lo().to_rational(), y.hi().to_rational()];
        xs.iter().flat_map(|u| ys.iter().map(move |v| (u.clone(), v.clone()))).map(|(u, v)| f(&u, &v)).collect()
    };
    let cases: Vec<(&str, Interval, Vec<BigRational>)> = vec![
        ("add", x.add(&y, prec), corners(&|u, v| u + v)),
        ("sub", x.sub(&y, prec), corners(&|u, v| u - v)),
        ("mul", x.mul(&y, prec), corners(&|u, v| u * v)),
    ];
    for (name, iv, values) in cases {
        for v in values {
            ensure(iv.contains_rational(&v), || format!("{name} misses {v}"))?;
        }
    }
    if !y.contains_zero() {
        let q = x.div(&y, prec).map_err(|e| e.to_string())?;
        for v in corners(&|u, v| u / v) {
            ensure(q.contains_rational(&v), || format!("div misses {v}"))?;
        }
    }
    Ok(())
}

/// `||x|| = ||-x||` with negated nearest integers.
pub fn check_distance_symmetry(expr: &Expr, ctx: &EvalContext) -> Check {
    let w = width_bits(100);
    let x = ctx.eval(expr).map_err(|e| e.to_string())?;
    let nx = ctx.eval(&-expr.clone()).map_err(|e| e.to_string())?;
    let a = nearest_int_distance(&x, &w, &ctx.ladder).map_err(|e| e.to_string())?;
    let b = nearest_int_distance(&nx, &w, &ctx.ladder).map_err(|e| e.to_string())?;
    ensure(a.nearest == -b.nearest.clone(), || format!("nearest integers of +-{expr} differ"))?;
    ensure(a.value.lo() <= b.value.hi() && b.value.lo() <= a.value.hi(), || format!("distances of +-{expr} are disjoint"))?;
    let half = rat(1, 2);
    ensure(a.value.lo().to_rational() >= BigRational::zero() && a.value.hi().to_rational() <= half, || {
        format!("distance of {expr} outside [0, 1/2]")
    })
}

/// An irrational value from a small seed: square roots of non-squares or
/// ratios of logarithms.
pub fn irrational(seed: u64) -> Expr {
    let k = 2 + seed % 97;
    let r = (k as f64).sqrt() as u64;
    if seed.is_multiple_of(2) && r * r != k {
        Expr::int(k).sqrt()
    } else {
        let p = [2u64, 3, 5, 7, 11, 13, 17, 19, 23][(seed % 9) as usize];
        Expr::int(p).ln() / constants::ln_alpha() * Expr::ratio(1 + (seed % 5) as i64, 1 + (seed % 3) as i64)
    }
}
