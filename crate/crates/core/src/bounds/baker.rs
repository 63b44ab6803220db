//! Linear forms in two and three logarithms, and the ν-floor test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{doubled, heights, int, lit, policy_prec, AlgCtx, Branch};
use crate::arith::{with_precision_retry, RealApprox};
use crate::error::{Error, Result};

const PREC_CEILING: u32 = 1280;

/// Staged `(A0, ν0)`: if `A ≤ A0` then `ν ≥ ν0`.
pub const NU_STAGES: [(i64, u64); 3] = [(900, 12), (360, 14), (40, 25)];

/// Smallest ν allowed at `A` by the staged table; 11 outside it.
pub fn staged_nu_min(big_a: i64) -> u64 {
    NU_STAGES
        .iter()
        .filter(|(a0, _)| big_a <= *a0)
        .map(|&(_, nu)| nu)
        .max()
        .unwrap_or(11)
}

fn family_eps(ctx: &AlgCtx) -> Result<i64> {
    match ctx.family {
        Some((_, _, e)) if e.abs() == 2 => Ok(e),
        Some((_, _, e)) => Err(Error::Domain(format!("two-log block needs |ε| = 2, got {e}"))),
        None => Err(Error::Domain("two-log block needs a family triple".into())),
    }
}

/// `(q, q2')` for the sign: `(0.058, 0.116)` for ε = −2 and `(8.0225, 16.045)` for ε = 2.
fn eps_constants(eps: i64) -> (&'static str, &'static str) {
    if eps < 0 {
        ("0.058", "0.116")
    } else {
        ("8.0225", "16.045")
    }
}

/// Upper bound for `A` from the two-logarithm argument, floored.
///
/// For ε = −2 this is `max{(40+0.058/ν)e^4.24675 + 1, 69.799(40+0.058/ν) + 1}`,
/// for ε = 2 `max{(40+8.0225/ν)e^4.24675, 70.073(40+8.0225/ν)}`.
pub fn laurent_a_bound(eps: i64, nu: u64) -> Result<BigInt> {
    if nu < 1 {
        return Err(Error::Domain("ν must be at least 1".into()));
    }
    let prec = 40;
    let (q, _) = match eps {
        -2 | 2 => eps_constants(eps),
        _ => return Err(Error::Domain(format!("eps must be ±2, got {eps}"))),
    };
    let base = lit(q, prec).div_int(&BigInt::from(nu))?.add_int(&BigInt::from(40));
    let e = lit("4.24675", prec).exp()?;
    let (slope, shift) = if eps < 0 { ("69.799", 1) } else { ("70.073", 0) };
    let small_h = (&base * &e).add_int(&BigInt::from(shift));
    let large_h = (&base * &lit(slope, prec)).add_int(&BigInt::from(shift));
    with_precision_retry(prec, PREC_CEILING, |_| small_h.max(&large_h).floor()).map(|r| r.0)
}

/// Parameters of the two-logarithm estimate at a given `m`, with `ρ = 37`, `μ = 0.63`,
/// `a1 = 4.0017 log α` and `a2 = (80ν + q2') log β`.
#[derive(Clone, Debug)]
pub struct LaurentBlock {
    pub rho: BigRational,
    pub mu_par: BigRational,
    pub nu: u64,
    pub m: BigInt,
    pub a1: RealApprox,
    pub a2: RealApprox,
    pub h: RealApprox,
    pub big_h: RealApprox,
    pub sigma_l: RealApprox,
    pub lambda_l: RealApprox,
    pub omega: RealApprox,
    pub theta: RealApprox,
    pub c: RealApprox,
    pub c_prime: RealApprox,
}

pub fn laurent_block(ctx: &AlgCtx, nu: u64, m: &BigInt) -> Result<LaurentBlock> {
    let eps = family_eps(ctx)?;
    let prec = ctx.prec;
    let (_, q2p) = eps_constants(eps);
    let q2p = lit(q2p, prec);
    let nu_i = BigInt::from(nu);
    let rho = BigRational::from_integer(BigInt::from(37));
    let mu_par = BigRational::new(BigInt::from(63), BigInt::from(100));
    let mu = RealApprox::from_rational(&mu_par, prec);
    let one = RealApprox::one(prec);

    let a1 = lit("4.0017", prec) * ctx.log_alpha.clone();
    let a2 = (&q2p + &int(&nu_i * 80, prec)) * ctx.log_beta.clone();
    // h = 4 log((m + 10ν + q2'/8) / ((40ν + q2'/2) log β)) + 11.913
    let num = q2p.div_int(&BigInt::from(8))?.add_int(&(m + &nu_i * 10));
    let den = q2p.div_int(&BigInt::from(2))?.add_int(&(&nu_i * 40)) * ctx.log_beta.clone();
    let h = num.div(&den)?.ln()?.mul_int(&BigInt::from(4)) + lit("11.913", prec);

    let sigma_l = (&one + &(&mu * &int(2, prec)) - &mu * &mu).div_int(&BigInt::from(2))?;
    let lambda_l = &sigma_l * &int(37, prec).ln()?;

    let b_sum = int(m * 2, prec).div(&a2)? + a1.recip()?;
    let cond = (b_sum.ln()? + lambda_l.ln()? + lit("1.75", prec)).mul_int(&BigInt::from(4))
        + lit("0.06", prec);
    let h_min = cond.max(&lambda_l).max(&int(2, prec).ln()?.mul_int(&BigInt::from(2)));
    if !h.gt(&h_min)? {
        return Err(Error::Domain(format!("h fails the admissibility condition at m = {m}")));
    }

    let big_h = h.div(&lambda_l)? + sigma_l.recip()?;
    let root = (&one + &(int(4, prec) * &big_h * &big_h).recip()?).sqrt()?;
    let omega = (&one + &root).mul_int(&BigInt::from(2));
    let theta = &root + &(&big_h * &int(2, prec)).recip()?;
    let lam3 = &lambda_l * &lambda_l * &lambda_l;
    // C = μ/(λ³σ) (ω/6 + ½ √(ω²/9 + 8λω^{5/4}θ^{1/4}/(3√(a1a2)H^{1/2}) + 4/3 (1/a1 + 1/a2) λω/H))²
    let quarter = RealApprox::from_ratio(1, 4, prec);
    let w54 = omega.pow(&RealApprox::from_ratio(5, 4, prec))?;
    let t14 = theta.pow(&quarter)?;
    let t1 = (&omega * &omega).div_int(&BigInt::from(9))?;
    let t2 = (lambda_l.mul_int(&BigInt::from(8)) * w54 * t14)
        .div(&((&a1 * &a2).sqrt()? * big_h.sqrt()?).mul_int(&BigInt::from(3)))?;
    let t3 = ((a1.recip()? + a2.recip()?) * lambda_l.clone() * omega.clone())
        .mul_int(&BigInt::from(4))
        .div(&big_h.mul_int(&BigInt::from(3)))?;
    let inner = omega.div_int(&BigInt::from(6))? + (t1 + t2 + t3).sqrt()?.div_int(&BigInt::from(2))?;
    let c = mu.div(&(&lam3 * &sigma_l))? * &inner * &inner;
    let c_prime = (&c * &sigma_l * &omega * &theta).div(&(&lam3 * &mu))?.sqrt()?;
    Ok(LaurentBlock {
        rho,
        mu_par,
        nu,
        m: m.clone(),
        a1,
        a2,
        h,
        big_h,
        sigma_l,
        lambda_l,
        omega,
        theta,
        c,
        c_prime,
    })
}

/// `C(h+λ/σ)²a1a2 + √(ωθ)(h+λ/σ) + log(C'(h+λ/σ)²a1a2)`, to be compared with `(4m−1) log α`.
pub fn laurent_rhs(b: &LaurentBlock) -> Result<RealApprox> {
    let hh = &b.h + &b.lambda_l.div(&b.sigma_l)?;
    let sq = &hh * &hh * &b.a1 * &b.a2;
    Ok(&b.c * &sq + (&b.omega * &b.theta).sqrt()? * hh + (&b.c_prime * &sq).ln()?)
}

/// True when `(4m−1) log α` certainly exceeds the two-log bound, i.e. `m` is excluded.
///
/// When `h` fails the admissibility condition nothing is concluded and `m` stays open.
pub fn laurent_excludes(ctx: &AlgCtx, nu: u64, m: &BigInt) -> Result<bool> {
    let block = match laurent_block(ctx, nu, m) {
        Ok(b) => b,
        Err(Error::Domain(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let rhs = laurent_rhs(&block)?;
    let lhs = ctx.log_alpha.mul_int(&(m * 4 - 1));
    Ok(lhs.cmp_cert(&rhs) == Some(std::cmp::Ordering::Greater))
}

/// Largest `m` the two-log bound leaves open, divided by `(40ν + q) log β`.
pub fn laurent_ratio(ctx: &AlgCtx, nu: u64) -> Result<(BigInt, RealApprox)> {
    let eps = family_eps(ctx)?;
    let excluded = |m: &BigInt| laurent_excludes(ctx, nu, m);
    let m_open = last_open(excluded)?;
    let (q, _) = eps_constants(eps);
    let den = lit(q, ctx.prec).add_int(&BigInt::from(40 * nu)) * ctx.log_beta.clone();
    let ratio = int(m_open.clone(), ctx.prec).div(&den)?;
    Ok((m_open, ratio))
}

/// Largest `m ≥ 1` with `excluded(m)` false, assuming exclusion is eventually permanent.
fn last_open(mut excluded: impl FnMut(&BigInt) -> Result<bool>) -> Result<BigInt> {
    let mut hi = BigInt::one();
    while !excluded(&hi)? {
        hi <<= 1;
        if hi.bits() > 400 {
            return Err(Error::Internal("bound search diverged".into()));
        }
    }
    let mut lo: BigInt = &hi >> 1;
    if lo.is_zero() {
        return Ok(lo);
    }
    // excluded(hi), !excluded(lo)
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if excluded(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// `C1 = 5·16⁵/(6χ) · e³ · (7+2χ) · (3e/2)^χ · (20.2 + log(3^5.5 D² log(eD)))`.
pub fn matveev_c1(d: u32, chi_deg: u32, prec: u32) -> Result<RealApprox> {
    if d == 0 || chi_deg == 0 {
        return Err(Error::Domain("D and χ must be positive".into()));
    }
    let e = RealApprox::one(prec).exp()?;
    let chi = BigInt::from(chi_deg);
    let lead = RealApprox::from_ratio(BigInt::from(5) * BigInt::from(16).pow(5), &chi * 6, prec);
    let e3 = &e * &e * &e;
    let mid = int(&chi * 2 + 7, prec);
    let three_e_half = (&e * &int(3, prec)).div_int(&BigInt::from(2))?.powi(chi_deg as i64)?;
    let d_i = BigInt::from(d);
    let log_ed = e.mul_int(&d_i).ln()?;
    let three55 = int(3, prec).powi(5)? * int(3, prec).sqrt()?;
    let tail = lit("20.2", prec) + (three55 * int(&d_i * &d_i, prec) * log_ed).ln()?;
    Ok(lead * e3 * mid * three_e_half * tail)
}

/// Largest `m` compatible with `(4m−1) log α < C1·D²·A1A2A3·log(1.5e·D·B·log(eD))` for
/// `Λ = log χ + 2ν log β − 2m log(α/β)` in the degree-4 field, with
/// `A1 = log(bc²(c−a))`, `A2 = 2 log β`, `A3 = 2 log α` and `B = max{1, 2m A3/A1}`.
pub fn matveev_m_bound(ctx: &AlgCtx) -> Result<BigInt> {
    let prec = ctx.prec;
    let d = 4u32;
    let c1 = matveev_c1(d, 1, prec)?;
    let floor = lit("0.16", prec);
    let (h_chi, _) = heights(ctx)?;
    let mut a1 = h_chi.mul_int(&BigInt::from(4)).max(&floor);
    for br in Branch::BOTH {
        a1 = a1.max(&ctx.chi(br).ln()?.abs());
    }
    let a2 = ctx.log_beta.mul_int(&BigInt::from(2)).max(&floor);
    let a3 = ctx.log_alpha.mul_int(&BigInt::from(2)).max(&floor);
    let e = RealApprox::one(prec).exp()?;
    let d_i = BigInt::from(d);
    let log_ed = e.mul_int(&d_i).ln()?;
    let front = c1.mul_int(&(&d_i * &d_i)) * &a1 * &a2 * &a3;
    let inner = lit("1.5", prec) * e.mul_int(&d_i) * log_ed;
    let ratio = a3.mul_int(&BigInt::from(2)).div(&a1)?;
    let one = RealApprox::one(prec);
    last_open(|m| {
        let b = (&ratio * &int(m.clone(), prec)).max(&one);
        let rhs = &front * &(&inner * &b).ln()?;
        let lhs = ctx.log_alpha.mul_int(&(m * 4 - 1));
        Ok(lhs.cmp_cert(&rhs) == Some(std::cmp::Ordering::Greater))
    })
}

/// Outcome of the ν test on one branch.
#[derive(Clone, Debug)]
pub struct NuTest {
    pub branch: Branch,
    pub m: BigInt,
    pub lambda: Option<RealApprox>,
    pub excluded: bool,
}

/// With `m = ⌊(ν log β + ½ log χ)/log(α/β)⌋` and `Λ = 2(m+ν) log β − 2m log α + log χ`,
/// the branch is excluded when `m < 2`, `Λ ≤ 0` or `Λ > α^{1−4m}`.
pub fn nu_test(ctx: &AlgCtx, nu: u64, br: Branch) -> Result<NuTest> {
    let nu_i = BigInt::from(nu);
    let log_chi = ctx.chi(br).ln()?;
    let log_ab = &ctx.log_alpha - &ctx.log_beta;
    let x = (ctx.log_beta.mul_int(&nu_i) + log_chi.div_int(&BigInt::from(2))?).div(&log_ab)?;
    let m = x.floor()?;
    if m < BigInt::from(2) {
        return Ok(NuTest { branch: br, m, lambda: None, excluded: true });
    }
    let lam = ctx.log_beta.mul_int(&((&m + &nu_i) * 2)) - ctx.log_alpha.mul_int(&(&m * 2)) + log_chi;
    let excluded = match lam.sign() {
        None => return Err(Error::InsufficientPrecision("sign of Λ undecided".into())),
        Some(std::cmp::Ordering::Greater) => {
            let bound = ctx.log_alpha.mul_int(&(BigInt::one() - &m * 4));
            lam.ln()?.gt(&bound)?
        }
        Some(_) => true,
    };
    Ok(NuTest { branch: br, m, lambda: Some(lam), excluded })
}

/// Smallest `ν ≤ nu_max` for which some branch survives the ν test; `nu_max + 1` if none does.
///
/// Runs at the family precision policy and doubles precision on undecided comparisons.
pub fn nu_floor(big_a: i64, big_k: i64, eps: i64, nu_max: u64) -> Result<u64> {
    let (a, _, _) = doubled(big_a, big_k, eps)?;
    with_precision_retry(policy_prec(a), PREC_CEILING, |p| nu_floor_at(big_a, big_k, eps, nu_max, p)).map(|r| r.0)
}

pub fn nu_floor_at(big_a: i64, big_k: i64, eps: i64, nu_max: u64, prec: u32) -> Result<u64> {
    if nu_max < 1 {
        return Err(Error::Domain("nu_max must be at least 1".into()));
    }
    let (a, k, e) = doubled(big_a, big_k, eps)?;
    let ctx = AlgCtx::family(a, k, e, prec)?;
    for nu in 1..=nu_max {
        for br in Branch::BOTH {
            if !nu_test(&ctx, nu, br)?.excluded {
                return Ok(nu);
            }
        }
    }
    Ok(nu_max + 1)
}
