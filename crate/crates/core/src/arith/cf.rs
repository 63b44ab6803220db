//! Continued fractions of certified reals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::real::RealApprox;
use crate::error::{Error, Result};

/// Convergents of `x` up to and including the first one with `Q > q_min`.
///
/// Partial quotients are read off both endpoints of the enclosure and only
/// emitted while they agree. If `x` is an exact rational whose expansion ends
/// first, all of its convergents are returned.
pub fn cf_convergents(x: &RealApprox, q_min: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    if x.is_exact() {
        return Ok(cf_convergents_rational(&x.lower(), q_min));
    }
    let (lo, hi) = (x.lower(), x.upper());
    let mut a = (lo.numer().clone(), lo.denom().clone());
    let mut b = (hi.numer().clone(), hi.denom().clone());
    let mut out = Vec::new();
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    loop {
        let qa = a.0.div_floor(&a.1);
        let qb = b.0.div_floor(&b.1);
        if qa != qb {
            return Err(Error::InsufficientPrecision(format!(
                "continued fraction diverges after {} terms (Q = {q1})",
                out.len()
            )));
        }
        let p = &qa * &p1 + &p0;
        let q = &qa * &q1 + &q0;
        out.push((p.clone(), q.clone()));
        if &q > q_min {
            return Ok(out);
        }
        p0 = std::mem::replace(&mut p1, p);
        q0 = std::mem::replace(&mut q1, q);
        let ra = &a.0 - &qa * &a.1;
        let rb = &b.0 - &qb * &b.1;
        match (ra.is_zero(), rb.is_zero()) {
            (true, true) => return Ok(out),
            (false, false) => {
                a = (std::mem::take(&mut a.1), ra);
                b = (std::mem::take(&mut b.1), rb);
            }
            _ => {
                return Err(Error::InsufficientPrecision(
                    "continued fraction endpoint terminates".into(),
                ))
            }
        }
    }
}

/// Convergents of an exact rational, stopping after the first `Q > q_min`.
pub fn cf_convergents_rational(x: &BigRational, q_min: &BigInt) -> Vec<(BigInt, BigInt)> {
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    let mut out = Vec::new();
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    loop {
        let (qt, r) = n.div_mod_floor(&d);
        let p = &qt * &p1 + &p0;
        let q = &qt * &q1 + &q0;
        out.push((p.clone(), q.clone()));
        if &q > q_min || r.is_zero() {
            return out;
        }
        p0 = std::mem::replace(&mut p1, p);
        q0 = std::mem::replace(&mut q1, q);
        n = std::mem::replace(&mut d, r);
    }
}

/// Distance from `x` to the nearest integer.
pub fn nearest_dist(x: &RealApprox) -> Result<RealApprox> {
    x.nearest_dist()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_decimal;

    fn pairs(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(p, q)| (p.into(), q.into())).collect()
    }

    #[test]
    fn rational_input_terminates() {
        let x = BigRational::new(7.into(), 3.into());
        let c = cf_convergents_rational(&x, &BigInt::one());
        assert_eq!(c, pairs(&[(2, 1), (7, 3)]));
        // a dyadic enclosure of 7/3 cannot decide the second quotient
        let approx = RealApprox::from_ratio(7, 3, 30);
        assert!(cf_convergents(&approx, &BigInt::one()).unwrap_err().is_precision());
        let exact = RealApprox::from_ratio(9, 4, 30);
        assert_eq!(cf_convergents(&exact, &BigInt::from(100)).unwrap(), pairs(&[(2, 1), (9, 4)]));
    }

    #[test]
    fn golden_ratio_gives_fibonacci() {
        let five = RealApprox::from_int(5, 40);
        let phi = (&five.sqrt().unwrap() + &RealApprox::one(40)).div_int(&BigInt::from(2)).unwrap();
        let c = cf_convergents(&phi, &BigInt::from(10)).unwrap();
        assert_eq!(c, pairs(&[(1, 1), (2, 1), (3, 2), (5, 3), (8, 5), (13, 8), (21, 13)]));
    }

    #[test]
    fn coarse_enclosure_runs_out() {
        let phi = parse_decimal("1.6180339887").unwrap();
        let eps = parse_decimal("1e-9").unwrap();
        let spread = RealApprox::between(&(&phi - &eps), &(&phi + &eps), 40).unwrap();
        let err = cf_convergents(&spread, &BigInt::from(10).pow(12)).unwrap_err();
        assert!(err.is_precision());
    }
}
