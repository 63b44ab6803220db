//! D(n)-tuple algebra.

mod oracle;
mod sieve;

pub use oracle::brute_force_extensions;
pub use sieve::{
    appfin_bound, appsup_bound, prop_delta_triple, quintuple_scan_b4a, quintuple_scan_regular,
    PropDeltaTriple, SieveStatus, SieveVerdict,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::int::{exact_sqrt, is_odd_prime_power_or_twice};
use crate::error::{Error, Result};

/// A set of distinct positive integers whose pairwise products plus `n` are squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DTuple {
    pub elems: Vec<BigInt>,
    pub n: BigInt,
    /// `(u, v, w)` with `u v + n = w^2`, in lexicographic pair order.
    pub witnesses: Vec<(BigInt, BigInt, BigInt)>,
}

/// Outcome of [`verify_dtuple`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TupleCheck {
    Valid(DTuple),
    /// The first pair `(u, v)` for which `u v + n` is not a square.
    Invalid { u: BigInt, v: BigInt, value: BigInt },
}

impl TupleCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, TupleCheck::Valid(_))
    }
}

pub fn verify_dtuple(elems: &[BigInt], n: &BigInt) -> Result<TupleCheck> {
    let mut sorted = elems.to_vec();
    sorted.sort();
    if sorted.iter().any(|e| !e.is_positive()) {
        return Err(Error::Domain("tuple entries must be positive".into()));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("tuple entries must be distinct".into()));
    }
    let mut witnesses = Vec::new();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let value = &sorted[i] * &sorted[j] + n;
            match exact_sqrt(&value) {
                Some(w) => witnesses.push((sorted[i].clone(), sorted[j].clone(), w)),
                None => {
                    return Ok(TupleCheck::Invalid {
                        u: sorted[i].clone(),
                        v: sorted[j].clone(),
                        value,
                    })
                }
            }
        }
    }
    Ok(TupleCheck::Valid(DTuple { elems: sorted, n: n.clone(), witnesses }))
}

/// A D(σ)-triple `a < b < c` with `ab+σ = r²`, `ac+σ = s²`, `bc+σ = t²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub r: BigInt,
    pub s: BigInt,
    pub t: BigInt,
    pub sigma: u32,
}

impl Triple {
    /// Checks the square conditions and recovers `r, s, t`.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, sigma: u32) -> Result<Self> {
        if !(a.is_positive() && a < b && b < c) {
            return Err(Error::Degenerate(format!("need 0 < a < b < c, got ({a}, {b}, {c})")));
        }
        if sigma != 1 && sigma != 4 {
            return Err(Error::Domain(format!("sigma must be 1 or 4, got {sigma}")));
        }
        let sg = BigInt::from(sigma);
        let root = |x: &BigInt, y: &BigInt| {
            exact_sqrt(&(x * y + &sg))
                .ok_or_else(|| Error::Domain(format!("{x}*{y}+{sigma} is not a square")))
        };
        let r = root(&a, &b)?;
        let s = root(&a, &c)?;
        let t = root(&b, &c)?;
        Ok(Triple { a, b, c, r, s, t, sigma })
    }

    pub fn from_u64(a: u64, b: u64, c: u64, sigma: u32) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), sigma)
    }

    pub fn entries(&self) -> [BigInt; 3] {
        [self.a.clone(), self.b.clone(), self.c.clone()]
    }

    /// `c = a + b + 2r`.
    pub fn is_regular(&self) -> bool {
        self.c == &self.a + &self.b + &self.r * 2
    }

    pub fn d_plus(&self) -> Result<BigInt> {
        self.d_pm(true)
    }

    pub fn d_minus(&self) -> Result<BigInt> {
        self.d_pm(false)
    }

    fn d_pm(&self, plus: bool) -> Result<BigInt> {
        let abc = &self.a * &self.b * &self.c;
        let rst = &self.r * &self.s * &self.t;
        let inner = if plus { abc + rst } else { abc - rst };
        let num = inner * 2;
        let (q, rem) = Integer::div_rem(&num, &BigInt::from(self.sigma));
        if !rem.is_zero() {
            return Err(Error::Internal(format!("sigma = {} does not divide 2(abc ± rst)", self.sigma)));
        }
        Ok(&self.a + &self.b + &self.c + q)
    }
}

/// `d_+ = a + b + c + (2/σ)(abc + rst)`.
pub fn d_plus(tr: &Triple) -> Result<BigInt> {
    tr.d_plus()
}

/// `d_- = a + b + c + (2/σ)(abc − rst)`.
pub fn d_minus(tr: &Triple) -> Result<BigInt> {
    tr.d_minus()
}

/// The triple `{K, A²K+2εA, (A+1)²K+2ε(A+1)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyTriple {
    pub big_a: i64,
    pub big_k: i64,
    pub eps: i64,
    pub triple: Triple,
}

impl FamilyTriple {
    pub fn a(&self) -> &BigInt {
        &self.triple.a
    }
    pub fn b(&self) -> &BigInt {
        &self.triple.b
    }
    pub fn c(&self) -> &BigInt {
        &self.triple.c
    }
    pub fn r(&self) -> &BigInt {
        &self.triple.r
    }
    pub fn s(&self) -> &BigInt {
        &self.triple.s
    }
    pub fn t(&self) -> &BigInt {
        &self.triple.t
    }
    pub fn sigma(&self) -> u32 {
        self.triple.sigma
    }

    /// `N = (A²+A)K/2 + εA`.
    pub fn big_n(&self) -> BigInt {
        let (a, k, e) = (BigInt::from(self.big_a), BigInt::from(self.big_k), BigInt::from(self.eps));
        (&a * &a + &a) * k / 2 + e * a
    }

    pub fn d_plus(&self) -> BigInt {
        self.triple.d_plus().expect("family triples have integral d_+")
    }
}

pub fn family_triple(big_a: i64, big_k: i64, eps: i64) -> Result<FamilyTriple> {
    if ![-2, -1, 1, 2].contains(&eps) {
        return Err(Error::Domain(format!("eps must be ±1 or ±2, got {eps}")));
    }
    if big_a < 1 || big_k < 1 {
        return Err(Error::Domain("A and K must be positive".into()));
    }
    let (a_, k, e) = (BigInt::from(big_a), BigInt::from(big_k), BigInt::from(eps));
    let a = k.clone();
    let b = &a_ * &a_ * &k + &e * &a_ * 2;
    let a1 = &a_ + 1;
    let c = &a1 * &a1 * &k + &e * &a1 * 2;
    if !(a.is_positive() && a < b && b < c) {
        return Err(Error::Degenerate(format!(
            "(A, K, eps) = ({big_a}, {big_k}, {eps}) gives ({a}, {b}, {c}), not 0 < a < b < c"
        )));
    }
    let sigma = (eps * eps) as u32;
    let triple = Triple::new(a, b, c, sigma)?;
    let r = &a_ * &k + &e;
    let s = &a1 * &k + &e;
    let t = &a_ * &a1 * &k + (&a_ * 2 + 1) * &e;
    if triple.r != r || triple.s != s || triple.t != t || !triple.is_regular() {
        return Err(Error::Internal("family closed forms disagree with square roots".into()));
    }
    Ok(FamilyTriple { big_a, big_k, eps, triple })
}

/// `d_+` from its closed form in `(A, K, ε)`, evaluated over the rationals.
pub fn d_plus_closed(big_a: i64, big_k: i64, eps: i64) -> Result<BigInt> {
    family_triple(big_a, big_k, eps)?;
    let q = |n: i64| BigRational::from_integer(BigInt::from(n));
    let (a, k, e) = (q(big_a), q(big_k), q(eps));
    let two_a2 = &a * &a * q(2) + &a * q(2);
    let k2 = &k * &k;
    let k3 = &k2 * &k;
    let a2 = &a * &a;
    let a3 = &a2 * &a;
    let v = &two_a2 * &two_a2 * &k3 / (&e * &e)
        + (&a3 * q(16) + &a2 * q(24) + &a * q(8)) * &k2 / &e
        + (&a2 * q(20) + &a * q(20) + q(4)) * &k
        + &e * (&a * q(8) + q(4));
    if !v.is_integer() {
        return Err(Error::Internal(format!("closed form of d_+ is not integral: {v}")));
    }
    Ok(v.to_integer())
}

/// `B = A − 4/K`, under which the ε = −2 triple for `A` equals the ε = +2 triple for `B`.
pub fn dual_map(big_a: i64, big_k: i64) -> Result<i64> {
    if big_k < 1 || 4 % big_k != 0 {
        return Err(Error::Domain(format!("K = {big_k} does not divide 4")));
    }
    let b = big_a - 4 / big_k;
    if b < 1 {
        return Err(Error::Domain(format!("A = {big_a} must exceed 4/K")));
    }
    Ok(b)
}

/// Writes a regular D(ε²)-triple as a family member when `r ≡ ±ε (mod a)`.
///
/// Returns `(A, K, ε')` where `ε'` is `ε` or `−ε`, whichever residue matched.
pub fn corollary_decompose(
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    eps: i64,
) -> Result<Option<(i64, i64, i64)>> {
    let tr = Triple::new(a.clone(), b.clone(), c.clone(), (eps * eps) as u32)?;
    if !tr.is_regular() {
        return Err(Error::Domain("triple is not regular (c != a + b + 2r)".into()));
    }
    for e in [eps, -eps] {
        let (k, rem) = Integer::div_rem(&(&tr.r - e), a);
        if rem.is_zero() && k.is_positive() {
            let k = k.to_i64().ok_or_else(|| Error::Domain("A out of range".into()))?;
            let big_k = a.to_i64().ok_or_else(|| Error::Domain("K out of range".into()))?;
            if let Ok(f) = family_triple(k, big_k, e) {
                if f.triple == tr {
                    return Ok(Some((k, big_k, e)));
                }
            }
        }
    }
    Ok(None)
}

/// Shapes of `a` for which the decomposition always applies: `4|ε|`, `p^e`, `2p^e`.
pub fn corollary_form(a: u64, eps: i64) -> bool {
    a == 4 * eps.unsigned_abs() || is_odd_prime_power_or_twice(a)
}
