//! Exact integer helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Floor square root together with an exactness flag.
pub fn isqrt(n: &BigInt) -> Result<(BigInt, bool)> {
    if n.is_negative() {
        return Err(Error::Domain(format!("isqrt of negative integer {n}")));
    }
    let root = n.sqrt();
    let exact = &root * &root == *n;
    Ok((root, exact))
}

/// Returns the square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let root = n.sqrt();
    (&root * &root == *n).then_some(root)
}

/// Smallest integer `r` with `r * r >= n` (for `n >= 0`).
pub fn ceil_sqrt(n: &BigInt) -> BigInt {
    let root = n.sqrt();
    if &root * &root == *n {
        root
    } else {
        root + 1
    }
}

/// Floor square root on `u128`.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u128;
    // Newton steps from the float estimate, then settle the last unit.
    for _ in 0..3 {
        if r == 0 {
            r = 1;
        }
        r = (r + n / r) / 2;
    }
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_square_u128(n: u128) -> bool {
    // squares mod 64 occupy 12 residues
    const MASK: u64 = 0x0202_0212_0203_0213;
    if (MASK >> (n & 63)) & 1 == 0 {
        return false;
    }
    let r = isqrt_u128(n);
    r * r == n
}

/// Floor of the fourth root.
pub fn iroot4(n: &BigInt) -> BigInt {
    n.sqrt().sqrt()
}

/// 2-adic valuation; `None` for zero.
pub fn v2(n: &BigInt) -> Option<u64> {
    if n.is_zero() {
        None
    } else {
        n.trailing_zeros()
    }
}

/// Trial-division factorisation of a positive integer into (prime, exponent).
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// All positive divisors of `n`, sorted.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// `a` is `p^e` or `2 p^e` for an odd prime `p` and `e >= 0`.
pub fn is_odd_prime_power_or_twice(a: u64) -> bool {
    if a == 0 {
        return false;
    }
    let odd = if a % 2 == 0 { a / 2 } else { a };
    if odd % 2 == 0 {
        return false;
    }
    factorize(odd).len() <= 1
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Integer power with a small exponent.
pub fn pow(base: &BigInt, exp: u32) -> BigInt {
    num_traits::pow(base.clone(), exp as usize)
}

/// `ceil(num / den)` for positive `den`.
pub fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    if r.is_zero() {
        q
    } else {
        q + BigInt::one()
    }
}

/// Modular inverse by the extended Euclidean algorithm.
pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}

/// Residues `z mod n` with `z^2 ≡ sigma (mod n)` where `sigma` is a perfect
/// square coprime to every odd prime dividing `n`.
pub fn sqrt_residues_of_square(sigma: u64, n: u64) -> Vec<u64> {
    let root = (sigma as f64).sqrt().round() as u64;
    debug_assert_eq!(root * root, sigma);
    if n == 1 {
        return vec![0];
    }
    let mut acc: Vec<u128> = vec![0];
    let mut modulus: u128 = 1;
    for (p, e) in factorize(n) {
        let pe = p.pow(e) as u128;
        let local: Vec<u128> = if p == 2 {
            two_adic_roots(sigma as u128, e)
        } else if sigma % p == 0 {
            // not reachable for sigma in {1, 4} and odd p
            (0..pe).filter(|z| (z * z) % pe == sigma as u128 % pe).collect()
        } else {
            let r = root as u128 % pe;
            let mut v = vec![r, (pe - r) % pe];
            v.sort_unstable();
            v.dedup();
            v
        };
        let inv = mod_inverse((modulus % pe) as i128, pe as i128).expect("coprime moduli") as u128;
        let mut next = Vec::with_capacity(acc.len() * local.len());
        for &x in &acc {
            for &y in &local {
                // x + modulus * k ≡ y (mod pe)
                let k = ((y + pe - x % pe) % pe) * inv % pe;
                next.push(x + modulus * k);
            }
        }
        modulus *= pe;
        acc = next;
    }
    let mut out: Vec<u64> = acc.into_iter().map(|x| x as u64).collect();
    out.sort_unstable();
    out
}

fn two_adic_roots(sigma: u128, e: u32) -> Vec<u128> {
    let mut sols: Vec<u128> = (0..2u128).filter(|z| (z * z) % 2 == sigma % 2).collect();
    let mut m: u128 = 2;
    for _ in 1..e {
        let next_m = m * 2;
        let mut next = Vec::new();
        for &z in &sols {
            for cand in [z, z + m] {
                if (cand * cand) % next_m == sigma % next_m {
                    next.push(cand);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        sols = next;
        m = next_m;
    }
    sols
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(&bi(0)).unwrap(), (bi(0), true));
        assert_eq!(isqrt(&bi(49284)).unwrap(), (bi(222), true));
        assert_eq!(isqrt(&bi(2)).unwrap(), (bi(1), false));
        assert!(matches!(isqrt(&bi(-1)), Err(Error::Domain(_))));
    }

    #[test]
    fn u128_square_root_edges() {
        for n in [0u128, 1, 2, 3, 4, 15, 16, 17, u64::MAX as u128, (1u128 << 100) - 1, 1u128 << 100] {
            let r = isqrt_u128(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "n={n}");
        }
        assert!(is_square_u128(49284));
        assert!(!is_square_u128(49285));
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(48), vec![1, 2, 3, 4, 6, 8, 12, 16, 24, 48]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn prime_power_forms() {
        for a in [1u64, 2, 17, 18, 19, 25, 27, 50, 54] {
            assert!(is_odd_prime_power_or_twice(a), "{a}");
        }
        for a in [4u64, 8, 16, 20, 21, 24, 35, 36] {
            assert!(!is_odd_prime_power_or_twice(a), "{a}");
        }
    }

    #[test]
    fn square_residues_match_scan() {
        for sigma in [1u64, 4] {
            for n in 2u64..400 {
                let fast = sqrt_residues_of_square(sigma, n);
                let slow: Vec<u64> = (0..n).filter(|z| (z * z) % n == sigma % n).collect();
                assert_eq!(fast, slow, "sigma={sigma} n={n}");
            }
        }
    }
}
