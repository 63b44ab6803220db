//! Certified real approximations.
//!
//! A [`RealApprox`] is a closed interval `[lo, hi] * 2^-bits` with integer
//! endpoints. Every operation rounds its endpoints outward, so the true value
//! of any expression built from exact inputs always lies in the result. The
//! reported error bound is the half-width of the interval.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;
/// Binary digits carried beyond the requested decimal precision.
const GUARD_BITS: u32 = 48;
/// Extra bits used inside series evaluations.
const SERIES_BITS: u32 = 40;
/// Largest integer part accepted by `exp`.
const EXP_INT_LIMIT: i64 = 1 << 20;

/// Working binary precision for `prec` decimal digits.
pub fn bits_for_prec(prec: u32) -> u32 {
    (prec as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
}

fn pow2(n: u32) -> BigInt {
    BigInt::one() << n as usize
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn shr_floor(a: &BigInt, n: u32) -> BigInt {
    div_floor(a, &pow2(n))
}

fn shr_ceil(a: &BigInt, n: u32) -> BigInt {
    div_ceil(a, &pow2(n))
}

fn ceil_isqrt(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &r * &r == *n {
        r
    } else {
        r + 1
    }
}

/// A real number known to lie in an interval with dyadic endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RealApprox {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
    prec: u32,
}

impl RealApprox {
    fn from_parts(lo: BigInt, hi: BigInt, bits: u32, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        RealApprox { lo, hi, bits, prec }
    }

    pub fn from_int<T: Into<BigInt>>(n: T, prec: u32) -> Self {
        let bits = bits_for_prec(prec);
        let v = n.into() << bits as usize;
        Self::from_parts(v.clone(), v, bits, prec)
    }

    pub fn from_ratio<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D, prec: u32) -> Self {
        let (num, den) = (num.into(), den.into());
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let bits = bits_for_prec(prec);
        let scaled = num << bits as usize;
        Self::from_parts(div_floor(&scaled, &den), div_ceil(&scaled, &den), bits, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::from_ratio(q.numer().clone(), q.denom().clone(), prec)
    }

    /// Parses a decimal literal such as `2.838e28` or `-0.058` exactly.
    pub fn from_decimal(s: &str, prec: u32) -> Result<Self> {
        Ok(Self::from_rational(&parse_decimal(s)?, prec))
    }

    /// Interval `[lo, hi]` given as exact rationals.
    pub fn between(lo: &BigRational, hi: &BigRational, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain("empty interval".into()));
        }
        let bits = bits_for_prec(prec);
        let s = pow2(bits);
        let l = div_floor(&(lo.numer() * &s), lo.denom());
        let h = div_ceil(&(hi.numer() * &s), hi.denom());
        Ok(Self::from_parts(l, h, bits, prec))
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_int(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(1, prec)
    }

    /// Decimal working precision.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Lower endpoint as an exact rational.
    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.bits))
    }

    /// Upper endpoint as an exact rational.
    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.bits))
    }

    /// Midpoint as an exact rational.
    pub fn midpoint(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, pow2(self.bits + 1))
    }

    /// Absolute error bound (interval half-width) as an exact rational.
    pub fn err(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, pow2(self.bits + 1))
    }

    /// `true` when the error bound is strictly below `10^k`.
    pub fn err_below_pow10(&self, k: i32) -> bool {
        let width = &self.hi - &self.lo;
        let ten = BigInt::from(10u8);
        if k >= 0 {
            width < num_traits::pow(ten, k as usize) << (self.bits + 1) as usize
        } else {
            width * num_traits::pow(ten, (-k) as usize) < pow2(self.bits + 1)
        }
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        self.lower() <= *q && *q <= self.upper()
    }

    pub fn to_f64(&self) -> f64 {
        scaled_to_f64(&(&self.lo + &self.hi), self.bits + 1)
    }

    pub fn err_f64(&self) -> f64 {
        scaled_to_f64(&(&self.hi - &self.lo), self.bits + 1)
    }

    /// Re-expresses the interval with `bits` fractional bits, rounding outward.
    pub fn rescale(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let sh = (bits - self.bits) as usize;
                Self::from_parts(&self.lo << sh, &self.hi << sh, bits, self.prec)
            }
            Ordering::Less => {
                let sh = self.bits - bits;
                Self::from_parts(shr_floor(&self.lo, sh), shr_ceil(&self.hi, sh), bits, self.prec)
            }
        }
    }

    /// Same value at a different decimal precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        let mut r = self.rescale(bits_for_prec(prec));
        r.prec = prec;
        r
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let bits = self.bits.min(other.bits);
        let prec = self.prec.min(other.prec);
        let mut a = self.rescale(bits);
        let mut b = other.rescale(bits);
        a.prec = prec;
        b.prec = prec;
        (a, b)
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            let hi = (-&self.lo).max(self.hi.clone());
            Self::from_parts(BigInt::zero(), hi, self.bits, self.prec)
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self::from_parts(a.lo.max(b.lo), a.hi.max(b.hi), a.bits, a.prec)
    }

    pub fn min(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self::from_parts(a.lo.min(b.lo), a.hi.min(b.hi), a.bits, a.prec)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let (lo, hi) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            Self::from_parts(hi, lo, self.bits, self.prec)
        } else {
            Self::from_parts(lo, hi, self.bits, self.prec)
        }
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        let shifted = k << self.bits as usize;
        Self::from_parts(&self.lo + &shifted, &self.hi + &shifted, self.bits, self.prec)
    }

    /// Certified quotient; fails when the divisor interval meets zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other);
        if b.lo.is_zero() && b.hi.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        if !b.lo.is_positive() && !b.hi.is_negative() {
            return Err(Error::InsufficientPrecision("divisor sign undecided".into()));
        }
        let s = pow2(a.bits);
        let nums = [&a.lo * &s, &a.hi * &s];
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for n in &nums {
            for d in [&b.lo, &b.hi] {
                let (f, c) = if d.is_negative() {
                    let (nn, dd) = (-n, -d);
                    (div_floor(&nn, &dd), div_ceil(&nn, &dd))
                } else {
                    (div_floor(n, d), div_ceil(n, d))
                };
                lo = Some(lo.map_or(f.clone(), |x| x.min(f)));
                hi = Some(hi.map_or(c.clone(), |x| x.max(c)));
            }
        }
        Ok(Self::from_parts(lo.unwrap(), hi.unwrap(), a.bits, a.prec))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.prec).with_bits(self.bits).div(self)
    }

    fn with_bits(mut self, bits: u32) -> Self {
        self = self.rescale(bits);
        self
    }

    pub fn div_int(&self, k: &BigInt) -> Result<Self> {
        self.div(&Self::from_parts(k << self.bits as usize, k << self.bits as usize, self.bits, self.prec))
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.hi.is_negative() {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        if self.lo.is_negative() {
            return Err(Error::InsufficientPrecision("square root argument sign undecided".into()));
        }
        let sh = self.bits as usize;
        let lo = (&self.lo << sh).sqrt();
        let hi = ceil_isqrt(&(&self.hi << sh));
        Ok(Self::from_parts(lo, hi, self.bits, self.prec))
    }

    /// Natural logarithm.
    pub fn ln(&self) -> Result<Self> {
        if !self.hi.is_positive() {
            return Err(Error::Domain("logarithm of a non-positive number".into()));
        }
        if !self.lo.is_positive() {
            return Err(Error::InsufficientPrecision("logarithm argument sign undecided".into()));
        }
        let w = self.bits + SERIES_BITS;
        let (r_lo, e_lo) = ln_fixed(&self.lo, self.bits, w);
        let (r_hi, e_hi) = if self.is_exact() {
            (r_lo.clone(), e_lo.clone())
        } else {
            ln_fixed(&self.hi, self.bits, w)
        };
        let lo = shr_floor(&(r_lo - e_lo), SERIES_BITS);
        let hi = shr_ceil(&(r_hi + e_hi), SERIES_BITS);
        Ok(Self::from_parts(lo, hi, self.bits, self.prec))
    }

    pub fn exp(&self) -> Result<Self> {
        let w = self.bits + SERIES_BITS;
        let lo = exp_fixed(&self.lo, self.bits, w, self.prec)?;
        let hi = if self.is_exact() {
            lo.clone()
        } else {
            exp_fixed(&self.hi, self.bits, w, self.prec)?
        };
        let joined = Self::from_parts(lo.lo, hi.hi, w, self.prec);
        Ok(joined.rescale(self.bits))
    }

    /// Integer power; negative exponents require a zero-free interval.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut result = Self::one(self.prec).rescale(self.bits);
        result.prec = self.prec;
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        Ok(result)
    }

    /// `self^y` for a positive base.
    pub fn pow(&self, y: &Self) -> Result<Self> {
        (&self.ln()? * y).exp()
    }

    fn square(&self) -> Self {
        if !self.lo.is_negative() || !self.hi.is_positive() {
            self * self
        } else {
            // interval straddles zero: [0, max^2]
            let m = (-&self.lo).max(self.hi.clone());
            let sq = &m * &m;
            Self::from_parts(BigInt::zero(), shr_ceil(&sq, self.bits), self.bits, self.prec)
        }
    }

    /// Certified ordering; `None` when the intervals overlap.
    pub fn cmp_cert(&self, other: &Self) -> Option<Ordering> {
        let (a, b) = self.aligned(other);
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if a.lo > b.hi {
            Some(Ordering::Greater)
        } else if a.is_exact() && b.is_exact() && a.lo == b.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified `self < other`; undecidable comparisons are errors.
    pub fn lt(&self, other: &Self) -> Result<bool> {
        self.cmp_cert(other)
            .map(|o| o == Ordering::Less)
            .ok_or_else(|| Error::InsufficientPrecision("comparison undecided".into()))
    }

    pub fn gt(&self, other: &Self) -> Result<bool> {
        other.lt(self)
    }

    /// Sign of the value, `None` if the interval contains zero and is not exactly zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> Result<bool> {
        self.sign()
            .map(|s| s == Ordering::Greater)
            .ok_or_else(|| Error::InsufficientPrecision("sign undecided".into()))
    }

    /// Certified floor.
    pub fn floor(&self) -> Result<BigInt> {
        let a = shr_floor(&self.lo, self.bits);
        let b = shr_floor(&self.hi, self.bits);
        if a == b {
            Ok(a)
        } else {
            Err(Error::InsufficientPrecision("floor undecided".into()))
        }
    }

    /// Certified ceiling.
    pub fn ceil(&self) -> Result<BigInt> {
        let a = shr_ceil(&self.lo, self.bits);
        let b = shr_ceil(&self.hi, self.bits);
        if a == b {
            Ok(a)
        } else {
            Err(Error::InsufficientPrecision("ceiling undecided".into()))
        }
    }

    /// Floor of the upper endpoint: an integer certainly `>=` floor of the value.
    pub fn floor_upper(&self) -> BigInt {
        shr_floor(&self.hi, self.bits)
    }

    /// Ceiling of the upper endpoint.
    pub fn ceil_upper(&self) -> BigInt {
        shr_ceil(&self.hi, self.bits)
    }

    /// Distance to the nearest integer, `||x||`.
    pub fn nearest_dist(&self) -> Result<Self> {
        let quarter = pow2(self.bits) >> 2usize;
        if &self.hi - &self.lo >= quarter.clone() * 2 {
            return Err(Error::InsufficientPrecision("error bound too large for ||x||".into()));
        }
        let s = pow2(self.bits);
        let half = pow2(self.bits - 1);
        let mid = (&self.lo + &self.hi) >> 1usize;
        let n = div_floor(&(&mid + &half), &s);
        let ns = &n * &s;
        if self.lo <= &ns - &half || self.hi >= &ns + &half {
            return Err(Error::InsufficientPrecision("nearest integer undecided".into()));
        }
        let dl = (&self.lo - &ns).abs();
        let dh = (&self.hi - &ns).abs();
        let (lo, hi) = if self.lo <= ns && ns <= self.hi {
            (BigInt::zero(), dl.max(dh))
        } else {
            (dl.clone().min(dh.clone()), dl.max(dh))
        };
        Ok(Self::from_parts(lo, hi, self.bits, self.prec))
    }

    /// Decimal rendering of the midpoint with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format_decimal(&self.midpoint(), digits)
    }
}

fn scaled_to_f64(x: &BigInt, bits: u32) -> f64 {
    let shift = x.bits().saturating_sub(64) as u32;
    let m = (x >> shift as usize).to_f64().unwrap_or(f64::NAN);
    m * 2f64.powi(shift as i32 - bits as i32)
}

impl fmt::Debug for RealApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e} (prec {})", self.to_decimal(20), self.err_f64(), self.prec)
    }
}

impl fmt::Display for RealApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        write!(f, "{}", self.to_decimal(digits))
    }
}

impl Neg for &RealApprox {
    type Output = RealApprox;
    fn neg(self) -> RealApprox {
        RealApprox::from_parts(-&self.hi, -&self.lo, self.bits, self.prec)
    }
}

impl Neg for RealApprox {
    type Output = RealApprox;
    fn neg(self) -> RealApprox {
        -&self
    }
}

impl Add for &RealApprox {
    type Output = RealApprox;
    fn add(self, rhs: &RealApprox) -> RealApprox {
        let (a, b) = self.aligned(rhs);
        RealApprox::from_parts(a.lo + b.lo, a.hi + b.hi, a.bits, a.prec)
    }
}

impl Sub for &RealApprox {
    type Output = RealApprox;
    fn sub(self, rhs: &RealApprox) -> RealApprox {
        let (a, b) = self.aligned(rhs);
        RealApprox::from_parts(a.lo - b.hi, a.hi - b.lo, a.bits, a.prec)
    }
}

impl Mul for &RealApprox {
    type Output = RealApprox;
    fn mul(self, rhs: &RealApprox) -> RealApprox {
        let (a, b) = self.aligned(rhs);
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let lo = products.iter().min().unwrap();
        let hi = products.iter().max().unwrap();
        RealApprox::from_parts(shr_floor(lo, a.bits), shr_ceil(hi, a.bits), a.bits, a.prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RealApprox {
            type Output = RealApprox;
            fn $m(self, rhs: RealApprox) -> RealApprox {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RealApprox> for RealApprox {
            type Output = RealApprox;
            fn $m(self, rhs: &RealApprox) -> RealApprox {
                (&self).$m(rhs)
            }
        }
        impl $tr<RealApprox> for &RealApprox {
            type Output = RealApprox;
            fn $m(self, rhs: RealApprox) -> RealApprox {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// `2 atanh(u)` for `u = num/den` at scale `2^w`, with an error bound in ulps.
fn two_atanh_fixed(num: &BigInt, den: &BigInt, w: u32) -> (BigInt, BigInt) {
    let s = pow2(w);
    let u = div_floor(&(num * &s), den);
    let u2 = shr_floor(&(&u * &u), w);
    let mut sum = u.clone();
    let mut p = u;
    let mut k: u64 = 1;
    loop {
        p = (&p * &u2) / &s;
        if p.is_zero() {
            break;
        }
        sum += &p / BigInt::from(2 * k + 1);
        k += 1;
    }
    let err = BigInt::from(4 * k + 8);
    (sum * 2, err * 2)
}

fn ln2_fixed(w: u32) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&w) {
        return v.clone();
    }
    let v = two_atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    cache.lock().unwrap().insert(w, v.clone());
    v
}

/// Logarithm of `m / 2^b` (`m > 0`) at scale `2^w`; returns value and error in ulps.
fn ln_fixed(m: &BigInt, b: u32, w: u32) -> (BigInt, BigInt) {
    let nb = m.bits() as i64;
    let mut e = nb - 1 - b as i64;
    let top = (nb - 1) as u64;
    let (f, mut err) = if top <= w as u64 {
        (m << (w as u64 - top) as usize, BigInt::zero())
    } else {
        (m >> (top - w as u64) as usize, BigInt::one())
    };
    let s = pow2(w);
    // choose the reference point among 1 and 2 so that |u| <= 0.172
    let two_s2 = (&s * &s) << 1usize;
    let reference = if &f * &f > two_s2 {
        e += 1;
        &s << 1usize
    } else {
        s.clone()
    };
    let (series, serr) = two_atanh_fixed(&(&f - &reference), &(&f + &reference), w);
    err += serr;
    let (l2, l2err) = ln2_fixed(w);
    let value = series + &l2 * e;
    err += l2err * e.unsigned_abs();
    err += 2;
    (value, err)
}

/// `exp(m / 2^b)` enclosed at `w` fractional bits.
fn exp_fixed(m: &BigInt, b: u32, w: u32, prec: u32) -> Result<RealApprox> {
    let n = shr_floor(m, b);
    let n_i = n
        .to_i64()
        .filter(|v| v.abs() < EXP_INT_LIMIT)
        .ok_or_else(|| Error::Domain("exp argument too large".into()))?;
    let frac = (m - (&n << b as usize)) << (w - b) as usize;
    let (sum, err) = exp_series(&frac, w);
    let mut result = RealApprox::from_parts(&sum - &err, &sum + &err, w, prec);
    if n_i != 0 {
        let (es, ee) = exp_series(&pow2(w), w);
        let e = RealApprox::from_parts(&es - &ee, &es + &ee, w, prec);
        result = &result * &e.powi(n_i)?;
    }
    Ok(result)
}

/// Taylor series of `exp(f)` for `0 <= f <= 1` given at scale `2^w`.
fn exp_series(f: &BigInt, w: u32) -> (BigInt, BigInt) {
    let s = pow2(w);
    let mut term = s.clone();
    let mut sum = s.clone();
    let mut k: u64 = 1;
    loop {
        term = (&term * f) / (&s * BigInt::from(k));
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    (sum, BigInt::from(2 * k + 4))
}

/// Parses `[-]digits[.digits][e[-]digits]` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Domain(format!("malformed decimal literal '{s}'"));
    let t = s.trim();
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Scientific-notation rendering of an exact rational.
pub fn format_decimal(q: &BigRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    let ten = BigInt::from(10);
    // estimate decimal exponent
    let num_digits = a.numer().to_string().len() as i64;
    let den_digits = a.denom().to_string().len() as i64;
    let mut e10 = num_digits - den_digits;
    let scaled = |e: i64| -> BigRational {
        if e >= 0 {
            &a / BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            &a * BigRational::from_integer(num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    let mut m = scaled(e10);
    let one = BigRational::one();
    let tenq = BigRational::from_integer(ten.clone());
    while m >= tenq {
        e10 += 1;
        m = scaled(e10);
    }
    while m < one {
        e10 -= 1;
        m = scaled(e10);
    }
    let digits = digits.max(1);
    let big = (m * BigRational::from_integer(num_traits::pow(ten.clone(), digits - 1))).round();
    let mut ds = big.to_integer().to_string();
    if ds.len() > digits {
        ds.truncate(digits);
        e10 += 1;
    }
    let sign = if neg { "-" } else { "" };
    let (head, tail) = ds.split_at(1);
    let tail = tail.trim_end_matches('0');
    match (tail.is_empty(), e10) {
        (true, 0) => format!("{sign}{head}"),
        (true, e) => format!("{sign}{head}e{e}"),
        (false, 0) => format!("{sign}{head}.{tail}"),
        (false, e) => format!("{sign}{head}.{tail}e{e}"),
    }
}

impl From<&RealApprox> for Sign {
    fn from(x: &RealApprox) -> Sign {
        match x.sign() {
            Some(Ordering::Greater) => Sign::Plus,
            Some(Ordering::Less) => Sign::Minus,
            _ => Sign::NoSign,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ra(n: i64, p: u32) -> RealApprox {
        RealApprox::from_int(n, p)
    }

    #[test]
    fn arithmetic_contains_exact_results() {
        let third = RealApprox::from_ratio(1, 3, 30);
        let sum = &(&third + &third) + &third;
        assert!(sum.contains(&BigRational::one()));
        let q = ra(7, 30).div(&ra(3, 30)).unwrap();
        assert!(q.contains(&BigRational::new(7.into(), 3.into())));
        assert!(q.err_below_pow10(-30));
    }

    #[test]
    fn sqrt_of_two_squares_back() {
        let r = ra(2, 60).sqrt().unwrap();
        let sq = &r * &r;
        assert!(sq.contains(&BigRational::from_integer(2.into())));
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn log_of_one_is_zero() {
        let l = ra(1, 50).ln().unwrap();
        assert!(l.contains(&BigRational::zero()));
        assert!(l.err_below_pow10(-45));
    }

    #[test]
    fn log_and_exp_are_inverse() {
        let e = ra(1, 50).exp().unwrap();
        let one = e.ln().unwrap();
        assert!(one.contains(&BigRational::one()));
        assert!(one.err_below_pow10(-45));
        assert!((e.to_f64() - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn exp_of_negative_and_large_arguments() {
        let x = RealApprox::from_decimal("-3.5", 40).unwrap();
        assert!((x.exp().unwrap().to_f64() - (-3.5f64).exp()).abs() < 1e-16);
        let y = RealApprox::from_decimal("4.24675", 40).unwrap().exp().unwrap();
        assert!((y.to_f64() - 4.24675f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn ln_of_large_and_small_values() {
        let big = RealApprox::from_int(BigInt::from(10).pow(60), 60).ln().unwrap();
        assert!((big.to_f64() - 60.0 * std::f64::consts::LN_10).abs() < 1e-12);
        let small = RealApprox::from_ratio(1, 1000, 60).ln().unwrap();
        assert!((small.to_f64() + 1000f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn ln_rejects_nonpositive() {
        assert!(matches!(ra(0, 20).ln(), Err(Error::Domain(_))));
        assert!(matches!(ra(-3, 20).ln(), Err(Error::Domain(_))));
    }

    #[test]
    fn comparison_reports_undecidable_overlap() {
        let a = RealApprox::between(
            &BigRational::new(1.into(), 2.into()),
            &BigRational::new(3.into(), 4.into()),
            20,
        )
        .unwrap();
        let b = RealApprox::from_ratio(2, 3, 20);
        assert_eq!(a.cmp_cert(&b), None);
        assert!(a.lt(&b).unwrap_err().is_precision());
        assert_eq!(ra(1, 20).cmp_cert(&ra(1, 20)), Some(Ordering::Equal));
    }

    #[test]
    fn nearest_distance_examples() {
        let x = RealApprox::from_decimal("2.25", 30).unwrap();
        assert!(x.nearest_dist().unwrap().contains(&BigRational::new(1.into(), 4.into())));
        let y = RealApprox::from_decimal("1219.4999", 30).unwrap();
        let d = y.nearest_dist().unwrap();
        assert!((d.to_f64() - 0.4999).abs() < 1e-12);
        let eps = parse_decimal("1e-40").unwrap();
        let three = BigRational::from_integer(3.into());
        let z = RealApprox::between(&(&three - &eps), &(&three + &eps), 60).unwrap();
        let dz = z.nearest_dist().unwrap();
        assert!(dz.contains(&BigRational::zero()));
        assert!(dz.err_below_pow10(-39));
    }

    #[test]
    fn nearest_distance_needs_precision() {
        let wide = RealApprox::between(
            &BigRational::new(1.into(), 10.into()),
            &BigRational::new(9.into(), 10.into()),
            20,
        )
        .unwrap();
        assert!(wide.nearest_dist().unwrap_err().is_precision());
    }

    #[test]
    fn decimal_parsing_and_rendering() {
        assert_eq!(parse_decimal("2.838e28").unwrap(), BigRational::from_integer(BigInt::from(2838) * BigInt::from(10).pow(25)));
        assert_eq!(parse_decimal("-0.058").unwrap(), BigRational::new((-58).into(), 1000.into()));
        assert!(parse_decimal("1.2.3").is_err());
        assert_eq!(format_decimal(&BigRational::new(1.into(), 8.into()), 5), "1.25e-1");
        assert_eq!(format_decimal(&BigRational::from_integer(1540.into()), 6), "1.54e3");
    }

    #[test]
    fn powers_and_real_powers() {
        let x = RealApprox::from_ratio(3, 2, 40);
        let p = x.powi(5).unwrap();
        assert!(p.contains(&BigRational::new(243.into(), 32.into())));
        let n = x.powi(-2).unwrap();
        assert!(n.contains(&BigRational::new(4.into(), 9.into())));
        let r = ra(16, 40).pow(&RealApprox::from_ratio(3, 4, 40)).unwrap();
        assert!(r.contains(&BigRational::from_integer(8.into())));
    }
}
