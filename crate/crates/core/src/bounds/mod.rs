//! Evaluable forms of the approximation machinery: hypergeometric constants,
//! heights, two- and three-logarithm bounds, the ν-floor test and the
//! auxiliary inequalities for family triples.
//!
//! Every inequality is decided with certified interval arithmetic. A result
//! is only reported as holding when the intervals separate.

mod aux;
mod baker;
mod hyper;

pub use aux::{aux_lemma_suite, AuxCheck, AuxReport, AuxStatus};
pub use baker::{
    laurent_a_bound, laurent_block, laurent_excludes, laurent_ratio, laurent_rhs, matveev_c1,
    matveev_m_bound, nu_floor, nu_floor_at, nu_test, staged_nu_min, LaurentBlock, NuTest, NU_STAGES,
};
pub use hyper::{
    hg_k_check, hg_k_check_at, lambda_decreasing_in_k, rickert, rickert_applicable, rickert_at,
    rickert_refined,
    sim_approx_check, RickertResult,
};

use num_bigint::BigInt;

use crate::arith::RealApprox;
use crate::error::{Error, Result};
use crate::tuple::{family_triple, FamilyTriple, Triple};

/// Sign choice in `χ` and `μ`; the two branches belong to `z0 = ±2` (or `±1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }

    fn idx(self) -> usize {
        match self {
            Branch::Plus => 0,
            Branch::Minus => 1,
        }
    }
}

/// Parses a decimal literal that is known to be well formed.
pub(crate) fn lit(s: &str, prec: u32) -> RealApprox {
    RealApprox::from_decimal(s, prec).expect("constant literal")
}

pub(crate) fn int(n: impl Into<BigInt>, prec: u32) -> RealApprox {
    RealApprox::from_int(n, prec)
}

/// Algebraic data attached to a triple at a fixed precision.
#[derive(Clone, Debug)]
pub struct AlgCtx {
    pub triple: Triple,
    /// `(A, K, ε)` when the triple comes from a family.
    pub family: Option<(i64, i64, i64)>,
    pub big_n: Option<BigInt>,
    pub prec: u32,
    pub sqrt_a: RealApprox,
    pub sqrt_b: RealApprox,
    pub sqrt_c: RealApprox,
    pub sqrt_ab: RealApprox,
    pub sqrt_ac: RealApprox,
    pub sqrt_bc: RealApprox,
    pub alpha: RealApprox,
    pub beta: RealApprox,
    pub gamma: RealApprox,
    pub log_alpha: RealApprox,
    pub log_beta: RealApprox,
    pub log_gamma: RealApprox,
    chi: [RealApprox; 2],
    mu: [RealApprox; 2],
}

impl AlgCtx {
    pub fn new(triple: &Triple, prec: u32) -> Result<Self> {
        let [a, b, c] = triple.entries();
        let sq = |n: BigInt| int(n, prec).sqrt();
        let (sqrt_a, sqrt_b, sqrt_c) = (sq(a.clone())?, sq(b.clone())?, sq(c.clone())?);
        let sqrt_ab = sq(&a * &b)?;
        let sqrt_ac = sq(&a * &c)?;
        let sqrt_bc = sq(&b * &c)?;
        let unit = |x: &BigInt, root: &RealApprox| -> Result<RealApprox> {
            let v = root.add_int(x);
            match triple.sigma {
                4 => v.div_int(&BigInt::from(2)),
                1 => Ok(v),
                s => Err(Error::Domain(format!("unsupported σ = {s}"))),
            }
        };
        let alpha = unit(&triple.s, &sqrt_ac)?;
        let beta = unit(&triple.r, &sqrt_ab)?;
        let gamma = unit(&triple.t, &sqrt_bc)?;
        let chi = [
            (&sqrt_bc + &sqrt_ac).div(&(&sqrt_bc + &sqrt_ab))?,
            (&sqrt_bc + &sqrt_ac).div(&(&sqrt_bc - &sqrt_ab))?,
        ];
        let mu = [
            (&sqrt_b * &(&sqrt_c + &sqrt_a)).div(&(&sqrt_a * &(&sqrt_c + &sqrt_b)))?,
            (&sqrt_b * &(&sqrt_c - &sqrt_a)).div(&(&sqrt_a * &(&sqrt_c - &sqrt_b)))?,
        ];
        Ok(AlgCtx {
            triple: triple.clone(),
            family: None,
            big_n: None,
            prec,
            log_alpha: alpha.ln()?,
            log_beta: beta.ln()?,
            log_gamma: gamma.ln()?,
            sqrt_a,
            sqrt_b,
            sqrt_c,
            sqrt_ab,
            sqrt_ac,
            sqrt_bc,
            alpha,
            beta,
            gamma,
            chi,
            mu,
        })
    }

    /// Context of the family triple `(A, K, ε)`.
    pub fn family(big_a: i64, big_k: i64, eps: i64, prec: u32) -> Result<Self> {
        let f = family_triple(big_a, big_k, eps)?;
        Self::from_family(&f, prec)
    }

    pub fn from_family(f: &FamilyTriple, prec: u32) -> Result<Self> {
        let mut ctx = Self::new(&f.triple, prec)?;
        ctx.family = Some((f.big_a, f.big_k, f.eps));
        ctx.big_n = Some(f.big_n());
        Ok(ctx)
    }

    pub fn chi(&self, br: Branch) -> &RealApprox {
        &self.chi[br.idx()]
    }

    pub fn mu(&self, br: Branch) -> &RealApprox {
        &self.mu[br.idx()]
    }

    /// `χ χ''' = (bc − ac)/(bc − ab)` for the given branch, with `χ'''` evaluated directly.
    pub fn chi_conjugate_product(&self, br: Branch) -> Result<RealApprox> {
        let num = &self.sqrt_bc - &self.sqrt_ac;
        let conj = match br {
            Branch::Plus => num.div(&(&self.sqrt_bc - &self.sqrt_ab))?,
            Branch::Minus => num.div(&(&self.sqrt_bc + &self.sqrt_ab))?,
        };
        Ok(self.chi(br) * &conj)
    }
}

/// Upper bound `¼ log(bc²(c − a))` for `h(χ)` and the exact `h(α/β) = ½ log α`.
pub fn heights(ctx: &AlgCtx) -> Result<(RealApprox, RealApprox)> {
    let [a, b, c] = ctx.triple.entries();
    let four = BigInt::from(4);
    let h_chi = int(&b * &c * &c * (&c - &a), ctx.prec).ln()?.div_int(&four)?;
    let h_ab = ctx.log_alpha.div_int(&BigInt::from(2))?;
    Ok((h_chi, h_ab))
}

/// Precision used for family instances: `max{180, 10⌈A/100⌉}` digits.
pub fn policy_prec(big_a: i64) -> u32 {
    let tens = (big_a.max(0) as u64).div_ceil(100) * 10;
    180u32.max(tens as u32)
}

/// Largest `K` in the admissible region for `A`, or `None` outside `2 ≤ A ≤ 2810`.
///
/// `K < 237.05(A+1)` for `40 ≤ A ≤ 2810` and `K < 240.24(A+1) + 740` for `2 ≤ A ≤ 39`.
pub fn admissible_k_max(big_a: i64) -> Option<i64> {
    let a1 = big_a + 1;
    let bound = match big_a {
        40..=2810 => 23705 * a1,
        2..=39 => 24024 * a1 + 74000,
        _ => return None,
    };
    // largest K with 100K < bound
    Some((bound - 1) / 100)
}

/// Largest `A` allowed for the sign `ε` once `ν ≥ 11`: 2796 for ε = −2 and 2810 for ε = 2.
pub fn admissible_a_max(eps: i64) -> Option<i64> {
    match eps {
        -2 => Some(2796),
        2 => Some(2810),
        _ => None,
    }
}

/// `⌈240.24(A+1)⌉ + K0`.
pub fn hg_anchor_k(big_a: i64, k0: i64) -> i64 {
    (24024 * (big_a + 1) + 99) / 100 + k0
}

/// Maps ε = ±1 to the doubled σ = 4 triple `(A, 2K, 2ε)`; ε = ±2 is returned unchanged.
pub fn doubled(big_a: i64, big_k: i64, eps: i64) -> Result<(i64, i64, i64)> {
    match eps {
        -2 | 2 => Ok((big_a, big_k, eps)),
        -1 | 1 => Ok((big_a, 2 * big_k, 2 * eps)),
        _ => Err(Error::Domain(format!("eps must be ±1 or ±2, got {eps}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_for_small_family() {
        let ctx = AlgCtx::family(3, 3, -2, 40).unwrap();
        assert!((ctx.alpha.to_f64() - 9.899).abs() < 1e-3);
        assert!((ctx.gamma.to_f64() - 21.954).abs() < 1e-3);
        assert_eq!(ctx.big_n, Some(BigInt::from(12)));
    }

    #[test]
    fn conjugate_product_in_unit_interval() {
        let ctx = AlgCtx::family(6, 7, 2, 40).unwrap();
        for br in Branch::BOTH {
            let p = ctx.chi_conjugate_product(br).unwrap();
            let [a, b, c] = ctx.triple.entries();
            let exact = RealApprox::from_ratio(&b * &c - &a * &c, &b * &c - &a * &b, 40);
            assert!((p.to_f64() - exact.to_f64()).abs() < 1e-20);
            assert!(p.to_f64() > 0.0 && p.to_f64() < 1.0);
        }
    }

    #[test]
    fn heights_grow_with_triple() {
        let small = AlgCtx::new(&Triple::from_u64(3, 15, 32, 4).unwrap(), 30).unwrap();
        let big = AlgCtx::new(&Triple::from_u64(6, 16, 42, 4).unwrap(), 30).unwrap();
        let (hs, ha) = heights(&small).unwrap();
        let expect = (15.0f64 * 1024.0 * 29.0).ln() / 4.0;
        assert!((hs.to_f64() - expect).abs() < 1e-12);
        assert!((ha.to_f64() - small.alpha.to_f64().ln() / 2.0).abs() < 1e-12);
        let (hb, hb2) = heights(&big).unwrap();
        assert!(hb.gt(&hs).unwrap() && hb2.gt(&ha).unwrap());
    }

    #[test]
    fn region_limits() {
        assert_eq!(policy_prec(250), 180);
        assert_eq!(policy_prec(2800), 280);
        assert_eq!(admissible_k_max(40), Some(9719));
        assert_eq!(admissible_k_max(2), Some(1460));
        assert_eq!(admissible_k_max(1), None);
        assert_eq!(hg_anchor_k(1326, 0), 318799);
    }
}
