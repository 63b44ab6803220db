//! Elementary inequalities for the units `α, β` and for `χ` on family triples.

use num_bigint::BigInt;

use super::{doubled, int, lit, AlgCtx, Branch};
use crate::arith::{with_precision_retry, RealApprox};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxStatus {
    Pass,
    Fail,
    Skipped,
}

impl AuxStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            AuxStatus::Pass => "pass",
            AuxStatus::Fail => "fail",
            AuxStatus::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuxCheck {
    pub name: &'static str,
    pub status: AuxStatus,
}

#[derive(Clone, Debug)]
pub struct AuxReport {
    pub big_a: i64,
    pub big_k: i64,
    pub eps: i64,
    pub checks: Vec<AuxCheck>,
}

impl AuxReport {
    /// No applicable check failed.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != AuxStatus::Fail)
    }

    pub fn status(&self, name: &str) -> Option<AuxStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }
}

struct Builder {
    checks: Vec<AuxCheck>,
}

impl Builder {
    fn push(&mut self, name: &'static str, applies: bool, f: impl FnOnce() -> Result<bool>) -> Result<()> {
        let status = if !applies {
            AuxStatus::Skipped
        } else if f()? {
            AuxStatus::Pass
        } else {
            AuxStatus::Fail
        };
        self.checks.push(AuxCheck { name, status });
        Ok(())
    }
}

/// Evaluates the auxiliary inequalities that apply at `(A, K, ε)`.
///
/// ε = ±1 is checked on the doubled triple. Checks whose hypotheses fail are
/// reported as skipped.
pub fn aux_lemma_suite(big_a: i64, big_k: i64, eps: i64) -> Result<AuxReport> {
    let (a, k, e) = doubled(big_a, big_k, eps)?;
    with_precision_retry(40, 640, |p| suite_at(a, k, e, p)).map(|r| r.0)
}

fn suite_at(big_a: i64, big_k: i64, eps: i64, prec: u32) -> Result<AuxReport> {
    let ctx = AlgCtx::family(big_a, big_k, eps, prec)?;
    let tr = &ctx.triple;
    let [a, b, c] = tr.entries();
    let (ab, kb) = (BigInt::from(big_a), BigInt::from(big_k));
    let ak = big_a * big_k;
    let r = |x: &BigInt| int(x.clone(), prec);
    let one = RealApprox::one(prec);
    let log_ab = &ctx.log_alpha - &ctx.log_beta;
    let chi_minus = ctx.chi(Branch::Minus).clone();
    let five_over_2a = one.clone() + RealApprox::from_ratio(5, &ab * 2, prec);
    let mut out = Builder { checks: Vec::new() };

    out.push("alpha-minus-beta-exceeds-k", true, || (&ctx.alpha - &ctx.beta).gt(&r(&kb)))?;
    out.push("log-chi-exceeds-alpha-pow", true, || {
        let bound = ctx.log_alpha.mul_int(&BigInt::from(-3)).exp()?;
        Ok(ctx.chi(Branch::Plus).ln()?.gt(&bound)? && ctx.chi(Branch::Minus).ln()?.gt(&bound)?)
    })?;

    if eps < 0 {
        out.push("log-ratio-bracket", big_a >= 2, || {
            let a1 = &ab + 1;
            let am1 = &ab - 1;
            let sac = (&ctx.sqrt_a).div(&ctx.sqrt_c)?;
            let sab = (&ctx.sqrt_a).div(&ctx.sqrt_b)?;
            Ok(&c < &(&a1 * &a1 * &a)
                && sac.lt(&log_ab)?
                && log_ab.lt(&sab)?
                && &(&am1 * &am1 * &a) < &b)
        })?;
        out.push("beta-exceeds-0.999r", ak >= 34, || {
            ctx.beta.gt(&(lit("0.999", prec) * r(&tr.r)))
        })?;
        let rho = BigInt::from(37);
        out.push("c-minus-a-bound", ak >= 2 * 37 + 4, || {
            // ρA(c − a) ≤ ρAb + (2ρ+2)b
            Ok(&rho * &ab * (&c - &a) <= &rho * &ab * &b + (&rho * 2 + 2) * &b)
        })?;
        out.push("bc2-c-minus-a-vs-beta8", big_k >= 3 && ak >= 2 * 14 + 4, || {
            let rho = BigInt::from(14);
            let f1 = one.clone() + RealApprox::from_ratio(&rho * 2 + 2, &rho * &ab, prec);
            let f2 = RealApprox::from_ratio(&rho * 2 + 2 + &kb, &kb * (&rho * 2 + 2), prec).powi(4)?;
            let rhs = (f1 * f2 * ctx.beta.powi(8)?).div(&lit("0.992", prec))?;
            r(&(&b * &c * &c * (&c - &a))).lt(&rhs)
        })?;
        let cases = (big_k == 3 && big_a >= 6)
            || (big_k == 5 && big_a >= 5)
            || ((6..=11).contains(&big_k) && big_a >= 4)
            || (big_k >= 12 && big_a >= 3);
        out.push("chi-minus-below-1+5/2a", cases, || chi_minus.lt(&five_over_2a))?;
    } else {
        out.push("alpha-beta-exceed-0.998", true, || {
            let f = lit("0.998", prec);
            Ok(ctx.alpha.gt(&(&f * &r(&tr.s)))? && ctx.beta.gt(&(&f * &r(&tr.r)))?)
        })?;
        out.push("alpha-beta-exceed-0.999", ak >= 30, || {
            let f = lit("0.999", prec);
            Ok(ctx.alpha.gt(&(&f * &r(&tr.s)))? && ctx.beta.gt(&(&f * &r(&tr.r)))?)
        })?;
        out.push("roots-exceed-0.999", ak >= 43, || {
            let f = lit("0.999", prec);
            Ok(ctx.sqrt_ab.gt(&(&f * &r(&tr.r)))?
                && ctx.sqrt_ac.gt(&(&f * &r(&tr.s)))?
                && (&f * &(&ctx.sqrt_ac - &ctx.sqrt_ab)).lt(&r(&kb))?)
        })?;
        out.push("sqrt-bc-exceeds-0.999t", big_a >= 23, || {
            ctx.sqrt_bc.gt(&(lit("0.999", prec) * r(&tr.t)))
        })?;
        out.push("log-ratio-bracket", true, || {
            // 1/(A+1+2/K) = K/((A+1)K+2)
            let lo = RealApprox::from_ratio(kb.clone(), (&ab + 1) * &kb + 2, prec);
            let hi = RealApprox::from_ratio(1, ab.clone(), prec);
            Ok(lo.lt(&log_ab)? && log_ab.lt(&hi)?)
        })?;
        out.push("c-minus-a-bound", true, || Ok(&ab * (&c - &a) < (&ab + 2) * &b))?;
        out.push("bc2-c-minus-a-vs-beta8", ak >= 30, || {
            let rho = BigInt::from(15);
            let f1 = one.clone() + RealApprox::from_ratio(2, ab.clone(), prec);
            let f2 = RealApprox::from_ratio(&rho * 2 + 2 + &kb, &kb * (&rho * 2 + 2), prec).powi(4)?;
            let rhs = (f1 * f2 * ctx.beta.powi(8)?).div(&lit("0.992", prec))?;
            r(&(&b * &c * &c * (&c - &a))).lt(&rhs)
        })?;
        out.push("chi-minus-below-1+5/2a", true, || chi_minus.lt(&five_over_2a))?;
    }
    Ok(AuxReport { big_a, big_k, eps, checks: out.checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = aux_lemma_suite(3, 12, -2).unwrap();
        assert_eq!(r.status("beta-exceeds-0.999r"), Some(AuxStatus::Pass));
        assert!(r.all_pass(), "{r:?}");
        let r = aux_lemma_suite(5, 3, -2).unwrap();
        assert_eq!(r.status("chi-minus-below-1+5/2a"), Some(AuxStatus::Skipped));
        let r = aux_lemma_suite(2, 30, 2).unwrap();
        assert_eq!(r.status("alpha-beta-exceed-0.999"), Some(AuxStatus::Pass));
    }
}
