//! Exhaustive search for extensions of a triple, independent of the Pell machinery.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Triple;
use crate::arith::int::{is_square_u128, isqrt_u128, mod_inverse, sqrt_residues_of_square};

/// Moduli used to sieve candidate indices; pairwise coprime.
const MODULI: [u64; 17] = [64, 63, 65, 11, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67];

fn square_tables() -> &'static Vec<Vec<bool>> {
    static TABLES: OnceLock<Vec<Vec<bool>>> = OnceLock::new();
    TABLES.get_or_init(|| {
        MODULI
            .iter()
            .map(|&m| {
                let mut t = vec![false; m as usize];
                for x in 0..m {
                    t[((x * x) % m) as usize] = true;
                }
                t
            })
            .collect()
    })
}

/// All `d` in `[1, d_max]`, other than `a, b, c`, with `ad+σ`, `bd+σ`, `cd+σ` squares.
///
/// Candidates come from `ed + σ = z²` for one entry `e` of the triple: `z`
/// runs over the residues of `√σ` modulo `e`, and the two remaining square
/// conditions are sieved modulo a set of small coprime moduli before being
/// checked exactly.
pub fn brute_force_extensions(tr: &Triple, d_max: &BigInt) -> Vec<BigInt> {
    if !d_max.is_positive() {
        return Vec::new();
    }
    let small = (|| {
        let c = tr.c.to_u64()?;
        let dm = d_max.to_u128()?;
        let prod = (c as u128).checked_mul(dm)?;
        (prod < 1u128 << 100 && tr.b.to_u128()?.checked_mul(dm)? < 1u128 << 120).then_some(())?;
        Some((tr.a.to_u128()?, tr.b.to_u128()?, c, dm))
    })();
    let mut out = match small {
        Some((a, b, c, dm)) => scan_u128(a, b, c, tr.sigma as u128, dm)
            .into_iter()
            .map(BigInt::from)
            .collect(),
        None => scan_big(tr, d_max),
    };
    out.sort();
    out.dedup();
    out
}

struct Scan {
    a: u128,
    b: u128,
    c: u128,
    sigma: u128,
    d_max: u128,
    found: Vec<u128>,
}

/// Squares modulo 64 as a bit mask.
const SQ64: u64 = 0x0202_0212_0203_0213;
/// `63 · 65 · 11`, a second cheap filter applied after the mod-64 test.
const M2: u64 = 45045;

fn square_table_m2() -> &'static Vec<bool> {
    static TABLE: OnceLock<Vec<bool>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let qr = |m: u64| {
            let mut t = vec![false; m as usize];
            for x in 0..m {
                t[((x * x) % m) as usize] = true;
            }
            t
        };
        let (t63, t65, t11) = (qr(63), qr(65), qr(11));
        (0..M2)
            .map(|x| t63[(x % 63) as usize] && t65[(x % 65) as usize] && t11[(x % 11) as usize])
            .collect()
    })
}

impl Scan {
    #[inline]
    fn test_d(&mut self, d: u128) {
        let (a, b, s) = (self.a as u64, self.b as u64, self.sigma as u64);
        let dl = d as u64;
        if (SQ64 >> (a.wrapping_mul(dl).wrapping_add(s) & 63)) & 1 == 0
            || (SQ64 >> (b.wrapping_mul(dl).wrapping_add(s) & 63)) & 1 == 0
        {
            return;
        }
        // a, b, c here are the triple in pivot order
        if d == 0 || d > self.d_max || d == self.a || d == self.b || d == self.c {
            return;
        }
        let (x, y) = (self.a * d + self.sigma, self.b * d + self.sigma);
        let t = square_table_m2();
        if !t[(x % M2 as u128) as usize] || !t[(y % M2 as u128) as usize] {
            return;
        }
        if is_square_u128(x) && is_square_u128(y) {
            self.found.push(d);
        }
    }
}

fn scan_u128(a: u128, b: u128, c: u64, sigma: u128, d_max: u128) -> Vec<u128> {
    // pivot on the entry with the fewest candidates, about #roots · √(d_max / e)
    let pivots = [(c as u128, a, b), (b, a, c as u128), (a, b, c as u128)];
    let (e, o1, o2, roots) = pivots
        .into_iter()
        .map(|(e, o1, o2)| (e, o1, o2, sqrt_residues_of_square(sigma as u64, e as u64)))
        .min_by(|x, y| {
            let cost = |r: &Vec<u64>, e: u128| r.len() as f64 / (e as f64).sqrt();
            cost(&x.3, x.0).total_cmp(&cost(&y.3, y.0))
        })
        .expect("three pivots");
    let z_max = isqrt_u128(e * d_max + sigma);
    let mut scan = Scan { a: o1, b: o2, c: e, sigma, d_max, found: Vec::new() };
    for zr in roots {
        let zr = zr as u128;
        if zr > z_max {
            continue;
        }
        let j_max = ((z_max - zr) / e) as u64;
        wheel(&mut scan, zr, j_max);
    }
    scan.found
}

/// Residues `j mod m` for which `a d(j) + σ` and `b d(j) + σ` are both squares mod `m`,
/// where `d(j) = (z(j)² − σ)/c` and `z(j) = zr + c j`.
fn allowed(scan: &Scan, zr: u128, idx: usize) -> Vec<bool> {
    let m = MODULI[idx];
    let table = &square_tables()[idx];
    let d0 = (zr as i128 * zr as i128 - scan.sigma as i128) / scan.c as i128;
    let d0 = d0.rem_euclid(m as i128) as u64;
    let (lin, quad) = ((2 * zr % m as u128) as u64, (scan.c % m as u128) as u64);
    let (am, bm, sm) = ((scan.a % m as u128) as u64, (scan.b % m as u128) as u64, (scan.sigma % m as u128) as u64);
    // d(j+1) − d(j) = lin + quad (2j + 1)
    let mut d = d0;
    let mut out = Vec::with_capacity(m as usize);
    for j in 0..m {
        out.push(table[((am * d + sm) % m) as usize] && table[((bm * d + sm) % m) as usize]);
        d = (d + lin + quad * ((2 * j + 1) % m)) % m;
    }
    out
}

fn wheel(scan: &mut Scan, zr: u128, j_max: u64) {
    // indices j <= j_max whose residues survive every modulus, built by CRT
    // lifting; once the running modulus W exceeds the range, each index has at
    // most a few lifts and those are tested against the mask directly
    let mut w: u64 = 1;
    let mut js: Vec<u64> = vec![0];
    for (idx, &m) in MODULI.iter().enumerate() {
        let mask = allowed(scan, zr, idx);
        if w.saturating_mul(m) <= j_max.saturating_add(1) {
            let inv = mod_inverse((w % m) as i128, m as i128).expect("coprime moduli") as u64;
            let locals: Vec<u64> = (0..m).filter(|&y| mask[y as usize]).collect();
            let mut next = Vec::with_capacity(js.len() * locals.len());
            for &x in &js {
                for &y in &locals {
                    let k = ((y + m - x % m) % m) * inv % m;
                    let j = x + w * k;
                    if j <= j_max {
                        next.push(j);
                    }
                }
            }
            js = next;
        } else {
            let mut next = Vec::with_capacity(js.len());
            for &x in &js {
                let mut j = x;
                while j <= j_max {
                    if mask[(j % m) as usize] {
                        next.push(j);
                    }
                    j = match j.checked_add(w) {
                        Some(v) => v,
                        None => break,
                    };
                }
            }
            js = next;
        }
        w = w.saturating_mul(m);
        if js.is_empty() {
            return;
        }
    }
    let (c, sigma) = (scan.c, scan.sigma);
    for j in js {
        let z = zr + c * j as u128;
        if z * z < sigma {
            continue;
        }
        scan.test_d((z * z - sigma) / c);
    }
}

fn scan_big(tr: &Triple, d_max: &BigInt) -> Vec<BigInt> {
    // plain scan over z ≡ ±√σ residues; only used beyond the u128 range
    let sigma = BigInt::from(tr.sigma);
    let c = &tr.c;
    let z_max = (c * d_max + &sigma).sqrt();
    let roots: Vec<BigInt> = match c.to_u64() {
        Some(cu) => sqrt_residues_of_square(tr.sigma as u64, cu).into_iter().map(BigInt::from).collect(),
        None => {
            let mut v = Vec::new();
            let mut z = BigInt::zero();
            while &z < c {
                if (&z * &z - &sigma).mod_floor(c).is_zero() {
                    v.push(z.clone());
                }
                z += BigInt::one();
            }
            v
        }
    };
    let mut out = Vec::new();
    for zr in roots {
        let mut z = zr;
        while z <= z_max {
            let zz = &z * &z;
            if zz >= &sigma + c {
                let d = (zz - &sigma) / c;
                if &d <= d_max && d != tr.a && d != tr.b && d != tr.c {
                    let sq = |x: BigInt| {
                        let r = x.sqrt();
                        &r * &r == x
                    };
                    if sq(&tr.a * &d + &sigma) && sq(&tr.b * &d + &sigma) {
                        out.push(d);
                    }
                }
            }
            z += c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(tr: &Triple, d_max: u64) -> Vec<BigInt> {
        let s = BigInt::from(tr.sigma);
        let sq = |x: BigInt| {
            let r = x.sqrt();
            &r * &r == x
        };
        (1..=d_max)
            .map(BigInt::from)
            .filter(|d| *d != tr.a && *d != tr.b && *d != tr.c)
            .filter(|d| sq(&tr.a * d + &s) && sq(&tr.b * d + &s) && sq(&tr.c * d + &s))
            .collect()
    }

    #[test]
    fn known_extensions() {
        let t = Triple::from_u64(3, 15, 32, 4).unwrap();
        assert_eq!(brute_force_extensions(&t, &BigInt::from(100_000)), vec![BigInt::from(1540)]);
        let u = Triple::from_u64(1, 8, 15, 1).unwrap();
        assert_eq!(brute_force_extensions(&u, &BigInt::from(10_000)), vec![BigInt::from(528)]);
        assert!(brute_force_extensions(&u, &BigInt::from(100)).is_empty());
    }

    #[test]
    fn agrees_with_naive_scan() {
        for (a, b, c, s) in [(1, 3, 8, 1), (3, 15, 32, 4), (1, 8, 15, 1), (2, 4, 12, 1), (5, 12, 33, 4)] {
            if let Ok(t) = Triple::from_u64(a, b, c, s) {
                assert_eq!(brute_force_extensions(&t, &BigInt::from(200_000)), naive(&t, 200_000), "{a} {b} {c}");
            }
        }
    }

    #[test]
    fn big_path_matches_small_path() {
        let t = Triple::from_u64(1, 3, 8, 1).unwrap();
        let d_max = BigInt::from(500_000);
        let mut big = scan_big(&t, &d_max);
        big.sort();
        assert_eq!(big, brute_force_extensions(&t, &d_max));
    }
}
