//! Simultaneous-approximation constants from the hypergeometric method and
//! the resulting upper bound on `K`.

use num_bigint::BigInt;

use super::{doubled, int, lit, AlgCtx};
use crate::arith::{with_precision_retry, RealApprox};
use crate::error::{Error, Result};
use crate::tuple::family_triple;

const DEFAULT_PREC: u32 = 40;
const PREC_CEILING: u32 = 640;

/// `N`, `λ` and `C⁻¹` of an effective irrationality measure for `(θ1, θ2)`.
#[derive(Clone, Debug)]
pub struct RickertResult {
    pub big_n: BigInt,
    pub lambda: RealApprox,
    pub c_inv: RealApprox,
    /// True when the constants come from the explicit `p, P, l, L` estimates
    /// rather than the closed-form statement.
    pub refined: bool,
}

fn big_n(big_a: i64, big_k: i64, eps: i64) -> BigInt {
    let (a, k, e) = (BigInt::from(big_a), BigInt::from(big_k), BigInt::from(eps));
    (&a * &a + &a) * k / 2 + e * a
}

fn check_eps(eps: i64) -> Result<()> {
    if [-2, -1, 1, 2].contains(&eps) {
        Ok(())
    } else {
        Err(Error::Domain(format!("eps must be ±1 or ±2, got {eps}")))
    }
}

/// Whether `K ≥ 30.03|ε|³(A+1)` with `A ≥ 3` or `A = |ε| = 2`.
pub fn rickert_applicable(big_a: i64, big_k: i64, eps: i64) -> bool {
    let e3 = eps.abs().pow(3);
    let a_ok = big_a >= 3 || (big_a == 2 && eps.abs() == 2);
    a_ok && 100 * big_k as i128 >= 3003 * e3 as i128 * (big_a as i128 + 1)
}

/// Closed-form constants at the default precision.
pub fn rickert(big_a: i64, big_k: i64, eps: i64) -> Result<RickertResult> {
    with_precision_retry(DEFAULT_PREC, PREC_CEILING, |p| rickert_at(big_a, big_k, eps, p)).map(|r| r.0)
}

/// `λ = 1 + log(20(A+1)N) / log(1.338N²/(|ε|³A(A+1)))` and `C⁻¹ = 2.838·10²⁸(A+1)N`.
pub fn rickert_at(big_a: i64, big_k: i64, eps: i64, prec: u32) -> Result<RickertResult> {
    check_eps(eps)?;
    if !rickert_applicable(big_a, big_k, eps) {
        return Err(Error::Inapplicable(format!(
            "hypergeometric method inapplicable at (A, K, eps) = ({big_a}, {big_k}, {eps})"
        )));
    }
    let n = big_n(big_a, big_k, eps);
    let a1 = BigInt::from(big_a + 1);
    let e3 = BigInt::from(eps.abs().pow(3));
    let num = int(&a1 * &n * 20, prec).ln()?;
    let den_arg = (lit("1.338", prec) * int(&n * &n, prec)).div_int(&(e3 * big_a * &a1))?;
    let lambda = num.div(&den_arg.ln()?)?.add_int(&BigInt::from(1));
    let c_inv = lit("2.838e28", prec).mul_int(&(&a1 * &n));
    if !lambda.lt(&int(2, prec))? {
        return Err(Error::Internal(format!("λ ≥ 2 at ({big_a}, {big_k}, {eps})")));
    }
    Ok(RickertResult { big_n: n, lambda, c_inv, refined: false })
}

/// Constants from the explicit estimates
/// `p = 2.045·10¹³(1+|ε|/(2(N+|ε|)))^½`, `P = 40A(A+1)N(1+3/(2N))/(2A+1)`,
/// `l = 2.045·10¹³·(27/64)/(1−A/N)`, `L = 1.35(1−A/N)²N²/(|ε|³A(A+1))`,
/// with `λ = 1 + log P/log L` and `C⁻¹ = 4pP·max{1, 2l}^{λ−1}`.
///
/// These are sharper than the closed form and stay usable somewhat below
/// its `K` threshold; the result is rejected unless `L > 1` and `λ < 2`.
pub fn rickert_refined(big_a: i64, big_k: i64, eps: i64, prec: u32) -> Result<RickertResult> {
    check_eps(eps)?;
    if big_a < 2 || big_k < 1 {
        return Err(Error::Inapplicable(format!("refined constants need A ≥ 2, got A = {big_a}")));
    }
    let n = big_n(big_a, big_k, eps);
    let e = BigInt::from(eps.abs());
    let (a, a1) = (BigInt::from(big_a), BigInt::from(big_a + 1));
    let one = RealApprox::one(prec);
    let c13 = lit("2.045e13", prec);
    let p = &c13
        * &(&one + &RealApprox::from_ratio(e.clone(), (&n + &e) * 2, prec)).sqrt()?;
    let big_p = int(&a * &a1 * &n * 40, prec)
        .mul_int(&(&n * 2 + 3))
        .div_int(&(&n * 2 * (&a * 2 + 1)))?;
    let shrink = RealApprox::from_ratio(&n - &a, n.clone(), prec);
    let l = (&c13 * &RealApprox::from_ratio(27, 64, prec)).div(&shrink)?;
    let big_l = (lit("1.35", prec) * &shrink * &shrink * int(&n * &n, prec))
        .div_int(&(e.pow(3) * &a * &a1))?;
    if !big_l.gt(&one)? {
        return Err(Error::Inapplicable(format!("L ≤ 1 at ({big_a}, {big_k}, {eps})")));
    }
    let lambda = &one + &big_p.ln()?.div(&big_l.ln()?)?;
    if !lambda.lt(&int(2, prec))? {
        return Err(Error::Inapplicable(format!("λ ≥ 2 at ({big_a}, {big_k}, {eps})")));
    }
    let two_l = l.mul_int(&BigInt::from(2)).max(&one);
    let c_inv = (p * big_p).mul_int(&BigInt::from(4)) * two_l.pow(&(&lambda - &one))?;
    Ok(RickertResult { big_n: n, lambda, c_inv, refined: true })
}

/// Whether a non-regular extension is still compatible with the hypergeometric
/// bound at `(A, K, ε, ν)`: true iff
/// `L·ν·log β < log(2C⁻¹A²(A+1)(A+1+2/K)) / (2(2−λ)·log((A+1)K+ε−2))`,
/// where `L = A − 1` for ε = −2 and `L = A` for ε = 2.
///
/// ε = ±1 is handled through the doubled triple. The closed-form constants
/// are used where they apply, the explicit estimates otherwise.
pub fn hg_k_check(big_a: i64, big_k: i64, eps: i64, nu: u64) -> Result<bool> {
    with_precision_retry(DEFAULT_PREC, PREC_CEILING, |p| hg_k_check_at(big_a, big_k, eps, nu, p)).map(|r| r.0)
}

pub fn hg_k_check_at(big_a: i64, big_k: i64, eps: i64, nu: u64, prec: u32) -> Result<bool> {
    if nu < 1 {
        return Err(Error::Domain("ν must be at least 1".into()));
    }
    let rk = measure(big_a, big_k, eps, prec)?;
    let (big_a, big_k, eps) = doubled(big_a, big_k, eps)?;
    let ctx = AlgCtx::family(big_a, big_k, eps, prec)?;
    let coeff = if eps < 0 { big_a - 1 } else { big_a };
    let lhs = ctx.log_beta.mul_int(&BigInt::from(coeff as i128 * nu as i128));
    let (a, a1, k) = (BigInt::from(big_a), BigInt::from(big_a + 1), BigInt::from(big_k));
    // A + 1 + 2/K = ((A+1)K + 2)/K
    let tail = RealApprox::from_ratio(&a1 * &k + 2, k.clone(), prec);
    let num = (rk.c_inv.mul_int(&(&a * &a * &a1 * 2)) * tail).ln()?;
    let base = &a1 * &k + eps - 2;
    let two_minus = int(2, prec) - rk.lambda.clone();
    let den = (two_minus * int(base, prec).ln()?).mul_int(&BigInt::from(2));
    let rhs = num.div(&den)?;
    lhs.lt(&rhs)
}

/// A measure for the pair `(θ1, θ2)` of `(A, K, ε)`.
///
/// For ε = ±1 the doubled parameters `(A, 2K, 2ε)` have `N' = 2N` and so
/// describe the same two numbers; every representation gives a valid measure.
/// The closed form is preferred, then the explicit estimates.
fn measure(big_a: i64, big_k: i64, eps: i64, prec: u32) -> Result<RickertResult> {
    let (da, dk, de) = doubled(big_a, big_k, eps)?;
    let reps = [(big_a, big_k, eps), (da, dk, de)];
    for &(a, k, e) in &reps {
        if rickert_applicable(a, k, e) {
            return rickert_at(a, k, e, prec);
        }
    }
    match rickert_refined(da, dk, de, prec) {
        Err(Error::Inapplicable(_)) if eps.abs() == 1 => rickert_refined(big_a, big_k, eps, prec),
        r => r,
    }
}

/// Spot check that `λ` decreases in `K` along `K, K+step, …` (`count` points).
pub fn lambda_decreasing_in_k(big_a: i64, eps: i64, k0: i64, step: i64, count: usize) -> Result<bool> {
    let mut prev: Option<RealApprox> = None;
    for i in 0..count as i64 {
        let r = rickert(big_a, k0 + i * step, eps)?;
        if let Some(p) = &prev {
            if !r.lambda.lt(p)? {
                return Ok(false);
            }
        }
        prev = Some(r.lambda);
    }
    Ok(true)
}

/// For a solution `d` of the family system with `x² = ad+4`, `y² = bd+4`, `z² = cd+4`:
/// `max{|θ1 − (A+1)x/z|, |θ2 − (A+1)y/(Az)|} < 2(A+1)(A+1+2/K)z⁻²`.
///
/// ε = ±1 is checked on the doubled triple. Returns `Err(Domain)` if `d` does not extend the triple.
pub fn sim_approx_check(big_a: i64, big_k: i64, eps: i64, d: &BigInt) -> Result<bool> {
    // an extension d of a D(1)-triple gives the extension 2d of the doubled triple
    let d = &if eps.abs() == 1 { d * 2 } else { d.clone() };
    let (big_a, big_k, eps) = doubled(big_a, big_k, eps)?;
    let f = family_triple(big_a, big_k, eps)?;
    let root = |m: &BigInt| -> Result<BigInt> {
        crate::arith::int::exact_sqrt(&(m * d + 4))
            .ok_or_else(|| Error::Domain(format!("d = {d} does not extend the triple")))
    };
    let (x, y, z) = (root(f.a())?, root(f.b())?, root(f.c())?);
    with_precision_retry(40, PREC_CEILING, |prec| {
        let n = f.big_n();
        let e = BigInt::from(eps);
        let (a, a1, k) = (BigInt::from(big_a), BigInt::from(big_a + 1), BigInt::from(big_k));
        let th1 = RealApprox::from_ratio(&n - &e * &a, n.clone(), prec).sqrt()?;
        let th2 = RealApprox::from_ratio(&n + &e, n.clone(), prec).sqrt()?;
        let d1 = (th1 - RealApprox::from_ratio(&a1 * &x, z.clone(), prec)).abs();
        let d2 = (th2 - RealApprox::from_ratio(&a1 * &y, &a * &z, prec)).abs();
        let bound = RealApprox::from_ratio(&a1 * (&a1 * &k + 2) * 2, &k * &z * &z, prec);
        d1.max(&d2).lt(&bound)
    })
    .map(|r| r.0)
}
