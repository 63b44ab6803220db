//! Candidate sieves for D(1)-quintuples whose three smallest elements are regular.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use super::{corollary_form, Triple};
use crate::arith::int::{ceil_sqrt, divisors};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SieveStatus {
    EliminatedGcd,
    EliminatedParity,
    EliminatedCorollary,
    EliminatedBound,
    Survivor,
}

impl SieveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SieveStatus::EliminatedGcd => "eliminated-gcd",
            SieveStatus::EliminatedParity => "eliminated-parity",
            SieveStatus::EliminatedCorollary => "eliminated-corollary",
            SieveStatus::EliminatedBound => "eliminated-bound",
            SieveStatus::Survivor => "survivor",
        }
    }
}

impl fmt::Display for SieveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict for one candidate `(a, b, c)`; `delta` is `Δ` or `δ` depending on the scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveVerdict {
    pub a: u64,
    pub delta: u64,
    pub b: u64,
    pub c: u64,
    pub status: SieveStatus,
    pub reason: String,
}

impl SieveVerdict {
    pub fn is_survivor(&self) -> bool {
        self.status == SieveStatus::Survivor
    }
}

fn v2(n: u64) -> u32 {
    n.trailing_zeros()
}

fn verdict(a: u64, delta: u64, b: u64, c: u64, status: SieveStatus, reason: impl Into<String>) -> SieveVerdict {
    SieveVerdict { a, delta, b, c, status, reason: reason.into() }
}

/// Scan over `r = a² − Δ`, `b = a³ − 2aΔ + (Δ²−1)/a`, `c = a + b + 2r`.
///
/// For each `5 <= Δ <= delta_max` and each divisor `a` of `Δ² − 1` in
/// `a_range`, filters run in a fixed order and the first failure is recorded.
/// `min_a` is the lower cutoff on `a` applied by the third filter (20 by default).
pub fn quintuple_scan_regular(a_range: (u64, u64), delta_max: u64, min_a: u64) -> Vec<SieveVerdict> {
    let mut out = Vec::new();
    for delta in 5..=delta_max {
        let n = delta * delta - 1;
        for a in divisors(n) {
            if a < a_range.0 || a > a_range.1 || a * a <= delta {
                continue;
            }
            let r = a * a - delta;
            let b = (a * a * a + n / a).checked_sub(2 * a * delta);
            let b = match b {
                Some(b) if b > a => b,
                _ => continue,
            };
            let c = a + b + 2 * r;
            out.push(regular_filters(a, delta, b, c, n, min_a));
        }
    }
    out
}

fn regular_filters(a: u64, delta: u64, b: u64, c: u64, n: u64, min_a: u64) -> SieveVerdict {
    use SieveStatus::*;
    if b >= a * a * a {
        return verdict(a, delta, b, c, EliminatedBound, format!("b = {b} >= a^3"));
    }
    let g = b.gcd(&c);
    if g != 1 {
        let note = if a % 2 == 0 && b % 2 == 0 { ", a and b both even" } else { "" };
        return verdict(a, delta, b, c, EliminatedGcd, format!("gcd(b, c) = {g}{note}"));
    }
    if a % 2 == 0 && v2(a) != v2(n) {
        return verdict(
            a,
            delta,
            b,
            c,
            EliminatedParity,
            format!("v2(a) = {} differs from v2(Δ²−1) = {}", v2(a), v2(n)),
        );
    }
    if a < min_a {
        return verdict(a, delta, b, c, EliminatedBound, format!("a = {a} < {min_a}"));
    }
    if corollary_form(a, 1) {
        return verdict(a, delta, b, c, EliminatedCorollary, format!("a = {a} is p^e, 2p^e or 4: extension is unique"));
    }
    verdict(a, delta, b, c, Survivor, "all filters pass")
}

/// Scan over `r = 2a − δ`, `b = 4a − 4δ + (δ²−1)/a`, i.e. candidates with `b < 4a`.
///
/// `δ = 1` admits every `a` in range and is emitted once per `a`.
pub fn quintuple_scan_b4a(a_range: (u64, u64), delta_max: u64) -> Vec<SieveVerdict> {
    use SieveStatus::*;
    let mut out = Vec::new();
    for delta in 1..=delta_max {
        let n = delta * delta - 1;
        let cands: Vec<u64> = if n == 0 {
            (a_range.0..=a_range.1).collect()
        } else {
            divisors(n).into_iter().filter(|&a| a >= a_range.0 && a <= a_range.1).collect()
        };
        for a in cands {
            if 2 * a <= delta {
                continue;
            }
            let r = 2 * a - delta;
            let b = match (4 * a + n / a).checked_sub(4 * delta) {
                Some(b) if b > a && b < 4 * a => b,
                _ => continue,
            };
            let c = a + b + 2 * r;
            let v = if delta == 1 {
                verdict(a, delta, b, c, EliminatedCorollary, "δ = 1: regular triple with r ≡ −1 (mod a), extension is unique")
            } else if delta % 2 == 0 {
                verdict(a, delta, b, c, EliminatedParity, "δ must be odd (a, b both odd forces b > 40a/9)")
            } else if b.gcd(&c) != 1 {
                verdict(a, delta, b, c, EliminatedGcd, format!("gcd(b, c) = {}", b.gcd(&c)))
            } else if a % 2 == 0 && v2(a) != v2(n) {
                verdict(a, delta, b, c, EliminatedParity, format!("v2(a) = {} differs from v2(δ²−1) = {}", v2(a), v2(n)))
            } else if a == n {
                verdict(a, delta, b, c, EliminatedCorollary, "a = δ²−1: the triple cannot be extended to a quintuple")
            } else if corollary_form(a, 1) {
                verdict(a, delta, b, c, EliminatedCorollary, format!("a = {a} is p^e, 2p^e or 4: extension is unique"))
            } else if b <= 130_000 {
                verdict(a, delta, b, c, EliminatedBound, format!("b = {b} <= 130000"))
            } else {
                verdict(a, delta, b, c, Survivor, "all filters pass")
            };
            out.push(v);
        }
    }
    out
}

/// `a³ − 2a⌈√(3a+1)⌉ + 3`.
pub fn appfin_bound(a: u64) -> BigInt {
    let a = BigInt::from(a);
    let root = ceil_sqrt(&(&a * 3 + 1));
    &a * &a * &a - &a * root * 2 + 3
}

/// `4a − 4⌈√(3a+1)⌉ + 3`.
pub fn appsup_bound(a: u64) -> BigInt {
    let a = BigInt::from(a);
    let root = ceil_sqrt(&(&a * 3 + 1));
    &a * 4 - root * 4 + 3
}

/// The parametric D(1)-triple with `a = Δ² − 1` and its data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropDeltaTriple {
    pub delta: u64,
    pub triple: Triple,
    pub d_plus: BigInt,
}

pub fn prop_delta_triple(delta: u64) -> Result<PropDeltaTriple> {
    if delta < 6 {
        return Err(Error::Domain(format!("Δ = {delta} < 6")));
    }
    let d = BigInt::from(delta);
    let p = |k: u32| num_traits::pow(d.clone(), k as usize);
    let a = p(2) - 1;
    let b = p(6) - p(4) * 3 - p(3) * 2 + p(2) * 3 + &d * 2;
    let c = p(6) - p(4) - p(3) * 2 + 1;
    let r = p(4) - p(2) * 2 - &d + 1;
    let s = p(4) - p(2) - &d;
    let t = p(6) - p(4) * 2 - p(3) * 2 + p(2) + &d + 1;
    let d_plus = p(14) * 4 - p(12) * 20 - p(11) * 16 + p(10) * 40 + p(9) * 56 - p(8) * 16 - p(7) * 72
        - p(6) * 32
        + p(5) * 24
        + p(4) * 32
        + p(3) * 8
        - p(2) * 4
        - &d * 4;
    let triple = Triple::new(a, b, c, 1)?;
    if triple.r != r || triple.s != s || triple.t != t {
        return Err(Error::Internal(format!("closed forms of r, s, t disagree at Δ = {delta}")));
    }
    if triple.d_plus()? != d_plus {
        return Err(Error::Internal(format!("closed form of d_+ disagrees at Δ = {delta}")));
    }
    Ok(PropDeltaTriple { delta, triple, d_plus })
}
