//! The simultaneous Pell system attached to a triple.
//!
//! Extending `{a, b, c}` by `d` with `ad+σ = x²`, `bd+σ = y²`, `cd+σ = z²`
//! and eliminating `d` gives
//!
//! ```text
//! a z² − c x² = σ(a − c)      (eq1)
//! b z² − c y² = σ(b − c)      (eq2)
//! a y² − b x² = σ(a − b)      (eq3)
//! ```
//!
//! Solutions of each equation fall into classes generated from a fundamental
//! solution by the unit of the corresponding quadratic order.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::int::{exact_sqrt, isqrt};
use crate::error::{Error, Result};
use crate::tuple::Triple;

/// `p Z² − q X² = σ(p − q)` together with the unit `(u + √(pq))/2` (σ = 4) or `u + √(pq)` (σ = 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellEq {
    pub p: BigInt,
    pub q: BigInt,
    pub sigma: u32,
    pub unit: BigInt,
}

impl PellEq {
    pub fn new(p: BigInt, q: BigInt, sigma: u32) -> Result<Self> {
        let unit = exact_sqrt(&(&p * &q + sigma))
            .ok_or_else(|| Error::Domain(format!("{p}*{q}+{sigma} is not a square")))?;
        Ok(PellEq { p, q, sigma, unit })
    }

    pub fn rhs(&self) -> BigInt {
        (&self.p - &self.q) * self.sigma
    }

    pub fn holds(&self, z: &BigInt, x: &BigInt) -> bool {
        &self.p * z * z - &self.q * x * x == self.rhs()
    }

    fn halve(&self, v: BigInt) -> Result<BigInt> {
        if self.sigma == 1 {
            return Ok(v);
        }
        let (h, r) = v.div_rem(&BigInt::from(2));
        if r.is_zero() {
            Ok(h)
        } else {
            Err(Error::Domain("odd intermediate term: fundamental solution has the wrong parity".into()))
        }
    }

    /// Multiplication by the unit.
    pub fn step(&self, z: &BigInt, x: &BigInt) -> Result<(BigInt, BigInt)> {
        Ok((
            self.halve(&self.unit * z + &self.q * x)?,
            self.halve(&self.p * z + &self.unit * x)?,
        ))
    }

    /// Division by the unit.
    pub fn step_back(&self, z: &BigInt, x: &BigInt) -> Result<(BigInt, BigInt)> {
        Ok((
            self.halve(&self.unit * z - &self.q * x)?,
            self.halve(-(&self.p * z) + &self.unit * x)?,
        ))
    }

    /// Recurrence coefficient shared by both coordinates.
    pub fn coeff(&self) -> BigInt {
        if self.sigma == 1 {
            &self.unit * 2
        } else {
            self.unit.clone()
        }
    }

    /// The `Z` coordinates of the class of `(z0, x0)`.
    pub fn z_seq(&self, z0: &BigInt, x0: &BigInt) -> Result<RecurrenceSeq> {
        let (z1, _) = self.step(z0, x0)?;
        Ok(RecurrenceSeq::new(z0.clone(), z1, self.coeff()))
    }

    /// The `X` coordinates of the class of `(z0, x0)`.
    pub fn x_seq(&self, z0: &BigInt, x0: &BigInt) -> Result<RecurrenceSeq> {
        let (_, x1) = self.step(z0, x0)?;
        Ok(RecurrenceSeq::new(x0.clone(), x1, self.coeff()))
    }

    /// `⌈p^(−1/4) q^(3/4)⌉`, the window for fundamental `|Z|`.
    pub fn window(&self) -> BigInt {
        // smallest w with w⁴ p >= q³
        let q3 = &self.q * &self.q * &self.q;
        let approx = crate::arith::int::iroot4(&(&q3 / &self.p));
        let mut w = approx;
        while &w * &w * &w * &w * &self.p < q3 {
            w += 1;
        }
        w
    }

    /// `|z| < p^(−1/4) q^(3/4)`, decided exactly.
    pub fn in_window(&self, z: &BigInt) -> bool {
        let z2 = z * z;
        &z2 * &z2 * &self.p < &self.q * &self.q * &self.q
    }
}

/// The three equations of a triple.
#[derive(Clone, Debug)]
pub struct PellSystem {
    pub triple: Triple,
    pub eq1: PellEq,
    pub eq2: PellEq,
    pub eq3: PellEq,
}

impl PellSystem {
    pub fn new(tr: &Triple) -> Result<Self> {
        let s = tr.sigma;
        Ok(PellSystem {
            triple: tr.clone(),
            eq1: PellEq::new(tr.a.clone(), tr.c.clone(), s)?,
            eq2: PellEq::new(tr.b.clone(), tr.c.clone(), s)?,
            eq3: PellEq::new(tr.a.clone(), tr.b.clone(), s)?,
        })
    }

    /// `v` sequence of eq1 through `(z0, x0)`.
    pub fn v_seq(&self, z0: &BigInt, x0: &BigInt) -> Result<RecurrenceSeq> {
        self.eq1.z_seq(z0, x0)
    }

    /// `w` sequence of eq2 through `(z1, y1)`.
    pub fn w_seq(&self, z1: &BigInt, y1: &BigInt) -> Result<RecurrenceSeq> {
        self.eq2.z_seq(z1, y1)
    }
}

/// Which alternative of the initial-term classification a fundamental solution matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FundClass {
    /// `|z0| = √σ`, case (a).
    Two,
    /// `|z0| = (cr − st)/2`, cases (a) and (c).
    CrStHalf,
    /// `|z0| = t`, cases (b) and (d).
    T,
    /// `|z1| = s`, cases (c) and (d).
    S,
    /// Any other value; only case (a) with a small `|z0|` can produce it.
    Small,
    /// Not classified (generic equation).
    Unclassified,
}

/// A solution `(z0, x0)` found in the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundSol {
    pub z0: BigInt,
    pub x0: BigInt,
    /// The backward unit step leaves the window or loses `x > 0`.
    pub fundamental: bool,
    pub class: FundClass,
}

/// All `(z0, x0)` with `|z0| <= z_bound`, `x0 >= 1`, `p z0² − q x0² = rhs`, ordered by `z0`.
///
/// When `rhs = σ(p − q)` with `σ ∈ {1, 4}` and `pq + σ` is a square, each
/// solution is tagged as fundamental if stepping back by the unit leaves the
/// window or makes `x` non-positive. Otherwise all solutions are tagged
/// fundamental.
pub fn fundamental_solutions(p: &BigInt, q: &BigInt, rhs: &BigInt, z_bound: &BigInt) -> Vec<FundSol> {
    let eq = (p != q)
        .then(|| {
            let (sg, rem) = rhs.div_rem(&(p - q));
            (rem.is_zero() && (sg == BigInt::one() || sg == BigInt::from(4)))
                .then(|| PellEq::new(p.clone(), q.clone(), sg.to_u32().unwrap()).ok())
                .flatten()
        })
        .flatten();
    let mut out = Vec::new();
    let mut z = -z_bound.clone();
    while &z <= z_bound {
        let num = p * &z * &z - rhs;
        if !num.is_negative() {
            let (x2, rem) = num.div_rem(q);
            if rem.is_zero() {
                if let Some(x) = exact_sqrt(&x2) {
                    if x.is_positive() {
                        let fundamental = match &eq {
                            Some(e) => match e.step_back(&z, &x) {
                                Ok((zb, xb)) => !xb.is_positive() || zb.abs() > *z_bound,
                                Err(_) => true,
                            },
                            None => true,
                        };
                        out.push(FundSol { z0: z.clone(), x0: x, fundamental, class: FundClass::Unclassified });
                    }
                }
            }
        }
        z += 1;
    }
    out
}

/// Solutions of eq1 of a triple in its window, classified against the triple.
pub fn triple_fundamentals(tr: &Triple) -> Result<Vec<FundSol>> {
    let sys = PellSystem::new(tr)?;
    let bound = sys.eq1.window();
    let root = isqrt(&BigInt::from(tr.sigma))?.0;
    // the remaining alternatives only exist for σ = 4
    let cr_st = if tr.sigma == 4 { Some(cr_st_half(tr)?.abs()) } else { None };
    Ok(fundamental_solutions(&sys.eq1.p, &sys.eq1.q, &sys.eq1.rhs(), &bound)
        .into_iter()
        .filter(|f| sys.eq1.in_window(&f.z0))
        .map(|mut f| {
            let z = f.z0.abs();
            f.class = if z == root {
                FundClass::Two
            } else if cr_st.is_none() {
                FundClass::Unclassified
            } else if Some(&z) == cr_st.as_ref() {
                FundClass::CrStHalf
            } else if z == tr.t {
                FundClass::T
            } else if z == tr.s {
                FundClass::S
            } else {
                FundClass::Small
            };
            f
        })
        .collect())
}

/// Starting values `(z, x0, y1)` shared by eq1 and eq2: fundamental solutions
/// `(z, x0)` of eq1 and `(z, y1)` of eq2, each in its window, with the same `z`.
pub fn common_fundamentals(tr: &Triple) -> Result<Vec<(BigInt, BigInt, BigInt)>> {
    let sys = PellSystem::new(tr)?;
    let sols = |eq: &PellEq| {
        fundamental_solutions(&eq.p, &eq.q, &eq.rhs(), &eq.window())
            .into_iter()
            .filter(|f| f.fundamental && eq.in_window(&f.z0))
            .collect::<Vec<_>>()
    };
    let (s1, s2) = (sols(&sys.eq1), sols(&sys.eq2));
    let mut out = Vec::new();
    for f in &s1 {
        for g in s2.iter().filter(|g| g.z0 == f.z0) {
            out.push((f.z0.clone(), f.x0.clone(), g.x0.clone()));
        }
    }
    Ok(out)
}

fn cr_st_half(tr: &Triple) -> Result<BigInt> {
    let v = &tr.c * &tr.r - &tr.s * &tr.t;
    let (h, rem) = v.div_rem(&BigInt::from(2));
    if rem.is_zero() {
        Ok(h)
    } else {
        Err(Error::Internal("cr − st is odd".into()))
    }
}

/// Which alternatives for the initial terms survive for a D(4)-triple.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassReport {
    pub cr_st_half: BigInt,
    /// `1.608 a^(−5/14) c^(9/14)`.
    pub small_threshold: f64,
    /// `|z0| = t` fits the eq1 window (`t⁴ a < c³`); needed by cases (b), (d).
    pub case_b_d_possible: bool,
    /// `|z1| = s` fits the eq2 window (`s⁴ b < c³`); needed by case (c).
    pub case_c_possible: bool,
    /// `c <= min{0.173 b^(13/2) a^(11/2), 0.087 b^(7/2) a^(5/2)}` rules out small `|z0|`.
    pub small_excluded: bool,
    /// Absolute values of `z0 = z1` still allowed in case (a).
    pub allowed_abs_z0: Vec<BigInt>,
    /// Only case (a) with `|z0| = 2` remains.
    pub two_only: bool,
}

pub fn classify_fundamentals(tr: &Triple) -> Result<ClassReport> {
    if tr.sigma != 4 {
        return Err(Error::Domain("classification applies to D(4)-triples".into()));
    }
    let (a, b, c) = (&tr.a, &tr.b, &tr.c);
    let half = cr_st_half(tr)?;
    let c3 = c * c * c;
    let t2 = &tr.t * &tr.t;
    let s2 = &tr.s * &tr.s;
    let case_b_d_possible = &t2 * &t2 * a < c3;
    let case_c_possible = &s2 * &s2 * b < c3;
    let pw = |x: &BigInt, k: u32| num_traits::pow(x.clone(), k as usize);
    let lhs = c * c * BigInt::from(1_000_000);
    let small_excluded = lhs <= pw(b, 13) * pw(a, 11) * 29929 && lhs <= pw(b, 7) * pw(a, 5) * 7569;
    let af = a.to_f64().unwrap_or(f64::INFINITY);
    let cf = c.to_f64().unwrap_or(f64::INFINITY);
    let small_threshold = 1.608 * af.powf(-5.0 / 14.0) * cf.powf(9.0 / 14.0);
    let two = BigInt::from(2);
    let mut allowed_abs_z0 = vec![two.clone()];
    if half.abs() != two {
        allowed_abs_z0.push(half.abs());
    }
    let two_only = !case_b_d_possible && !case_c_possible && small_excluded && half.abs() == two;
    Ok(ClassReport {
        cr_st_half: half,
        small_threshold,
        case_b_d_possible,
        case_c_possible,
        small_excluded,
        allowed_abs_z0,
        two_only,
    })
}

/// `u_{k+2} = coeff · u_{k+1} − u_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecurrenceSeq {
    pub init0: BigInt,
    pub init1: BigInt,
    pub coeff: BigInt,
}

impl RecurrenceSeq {
    pub fn new(init0: BigInt, init1: BigInt, coeff: BigInt) -> Self {
        RecurrenceSeq { init0, init1, coeff }
    }

    pub fn iter(&self) -> SeqIter<'_> {
        SeqIter { seq: self, cur: self.init0.clone(), next: self.init1.clone() }
    }

    /// Terms up to and including the first index where the sequence has
    /// risen past `cap` for good, capped at `max_terms`.
    pub fn terms_up_to(&self, cap: &BigInt, max_terms: usize) -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut it = self.iter();
        let mut prev: Option<BigInt> = None;
        while out.len() < max_terms {
            let v = it.next().expect("infinite sequence");
            let done = matches!(&prev, Some(p) if p > cap && &v > p) && self.coeff >= BigInt::from(2);
            prev = Some(v.clone());
            out.push(v);
            if done {
                break;
            }
        }
        out
    }
}

pub struct SeqIter<'a> {
    seq: &'a RecurrenceSeq,
    cur: BigInt,
    next: BigInt,
}

impl Iterator for SeqIter<'_> {
    type Item = BigInt;
    fn next(&mut self) -> Option<BigInt> {
        let following = &self.seq.coeff * &self.next - &self.cur;
        let out = std::mem::replace(&mut self.cur, std::mem::replace(&mut self.next, following));
        Some(out)
    }
}

pub fn seq_generate(seq: &RecurrenceSeq, count: usize) -> Vec<BigInt> {
    seq.iter().take(count).collect()
}

const MAX_TERMS: usize = 100_000;

/// All `(m, n, z)` with `v_m = w_n = z`, `1 <= z <= z_cap`, sorted by `(m, n)`.
pub fn intersect(vseq: &RecurrenceSeq, wseq: &RecurrenceSeq, z_cap: &BigInt) -> Vec<(usize, usize, BigInt)> {
    let index = |s: &RecurrenceSeq| {
        let mut v: Vec<(BigInt, usize)> = s
            .terms_up_to(z_cap, MAX_TERMS)
            .into_iter()
            .enumerate()
            .filter(|(_, z)| z.is_positive() && z <= z_cap)
            .map(|(i, z)| (z, i))
            .collect();
        v.sort();
        v
    };
    let (vs, ws) = (index(vseq), index(wseq));
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < vs.len() && j < ws.len() {
        match vs[i].0.cmp(&ws[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let z = vs[i].0.clone();
                let i_end = vs[i..].iter().take_while(|x| x.0 == z).count() + i;
                let j_end = ws[j..].iter().take_while(|x| x.0 == z).count() + j;
                for vi in &vs[i..i_end] {
                    for wj in &ws[j..j_end] {
                        out.push((vi.1, wj.1, z.clone()));
                    }
                }
                i = i_end;
                j = j_end;
            }
        }
    }
    out.sort();
    out
}

/// `d = (z² − σ)/c` when it is a positive integer.
pub fn solution_to_d(z: &BigInt, c: &BigInt, sigma: u32) -> Option<BigInt> {
    let (d, rem) = (z * z - sigma).div_rem(c);
    (rem.is_zero() && d.is_positive()).then_some(d)
}

/// Residues of the first `count` terms modulo `m`, in `[0, m)`.
pub fn seq_mod_pattern(seq: &RecurrenceSeq, m: &BigInt, count: usize) -> Result<Vec<BigInt>> {
    if m < &BigInt::from(2) {
        return Err(Error::Domain("modulus must be at least 2".into()));
    }
    let (mut u, mut v) = (seq.init0.mod_floor(m), seq.init1.mod_floor(m));
    let c = seq.coeff.mod_floor(m);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let w = (&c * &v - &u).mod_floor(m);
        out.push(std::mem::replace(&mut u, std::mem::replace(&mut v, w)));
    }
    Ok(out)
}

/// `(preperiod, period)` of the sequence modulo `m`, found within `max_steps` states.
pub fn seq_mod_period(seq: &RecurrenceSeq, m: &BigInt, max_steps: usize) -> Option<(usize, usize)> {
    let (mut u, mut v) = (seq.init0.mod_floor(m), seq.init1.mod_floor(m));
    let c = seq.coeff.mod_floor(m);
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    for k in 0..max_steps {
        if let Some(&first) = seen.get(&(u.clone(), v.clone())) {
            return Some((first, k - first));
        }
        seen.insert((u.clone(), v.clone()), k);
        let w = (&c * &v - &u).mod_floor(m);
        u = std::mem::replace(&mut v, w);
    }
    None
}

/// Outcome of the even/odd analysis of `y`-sequences built on eq2 and eq3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedParityReport {
    /// Solutions `(y2, x2)` of eq3 with `y2⁴ a < b³` and `1 <= x2 < √b`.
    pub eq3_solutions: Vec<(BigInt, BigInt)>,
    /// Those with `y2 ≡ 2 (mod b)`, the only ones compatible with equal even indices.
    pub even_compatible: Vec<(BigInt, BigInt)>,
    /// Those with `b x2 − r |y2| = 4`, required for an even/odd coincidence.
    pub eq37_hits: Vec<(BigInt, BigInt)>,
    /// Coincidences `u'_{2n} = u''_{2l+1}` found below the cap, as `(2n, 2l+1, y)`.
    pub mixed_coincidences: Vec<(usize, usize, BigInt)>,
}

impl MixedParityReport {
    /// The mixed case is impossible for this triple.
    pub fn excluded(&self) -> bool {
        self.eq37_hits.is_empty() && self.mixed_coincidences.is_empty()
    }
}

pub fn mixed_parity_check(tr: &Triple, y_cap: &BigInt) -> Result<MixedParityReport> {
    if tr.sigma != 4 {
        return Err(Error::Domain("mixed-parity analysis applies to D(4)-triples".into()));
    }
    let sys = PellSystem::new(tr)?;
    let (a, b, r) = (&tr.a, &tr.b, &tr.r);
    let rhs = sys.eq3.rhs();
    let mut eq3_solutions = Vec::new();
    let mut x2 = BigInt::one();
    while &x2 * &x2 < *b {
        let num = b * &x2 * &x2 + &rhs;
        if num.is_positive() {
            let (q, rem) = num.div_rem(a);
            if rem.is_zero() {
                if let Some(y) = exact_sqrt(&q) {
                    for y2 in [y.clone(), -y.clone()] {
                        if sys.eq3.in_window(&y2) && !eq3_solutions.contains(&(y2.clone(), x2.clone())) {
                            eq3_solutions.push((y2, x2.clone()));
                        }
                    }
                }
            }
        }
        x2 += 1;
    }
    eq3_solutions.sort();
    let two = BigInt::from(2);
    let even_compatible = eq3_solutions.iter().filter(|(y, _)| y.mod_floor(b) == two).cloned().collect();
    let eq37_hits = eq3_solutions
        .iter()
        .filter(|(y, x)| b * x - r * y.abs() == BigInt::from(4))
        .cloned()
        .collect();
    // y-sequences: u' from eq2 with (z1, y1) = (±2, 2), u'' from eq3 with (y2, x2)
    let mut mixed = Vec::new();
    for z1 in [two.clone(), -two.clone()] {
        let up = sys.eq2.x_seq(&z1, &two)?;
        for (y2, x2) in &eq3_solutions {
            let Ok(upp) = sys.eq3.z_seq(y2, x2) else { continue };
            for (n, l, y) in intersect(&up, &upp, y_cap) {
                if n % 2 == 0 && l % 2 == 1 {
                    mixed.push((n, l, y));
                }
            }
        }
    }
    mixed.sort();
    mixed.dedup();
    Ok(MixedParityReport { eq3_solutions, even_compatible, eq37_hits, mixed_coincidences: mixed })
}

/// Every positive `d` produced by intersecting the `±z0` classes of eq1 and eq2
/// built on `|z0| = |z1| ∈ {2}` (σ = 4) or `{1}` (σ = 1), restricted to `d <= d_max`.
pub fn extensions_from_fundamentals(tr: &Triple, d_max: &BigInt) -> Result<Vec<BigInt>> {
    let sys = PellSystem::new(tr)?;
    let sg = BigInt::from(tr.sigma);
    let root = isqrt(&sg)?.0;
    let z_cap = isqrt(&(&tr.c * d_max + &sg))?.0;
    let mut out = Vec::new();
    for z0 in [root.clone(), -root.clone()] {
        for z1 in [root.clone(), -root.clone()] {
            let v = sys.v_seq(&z0, &root)?;
            let w = sys.w_seq(&z1, &root)?;
            for (_, _, z) in intersect(&v, &w, &z_cap) {
                if let Some(d) = solution_to_d(&z, &tr.c, tr.sigma) {
                    if &d <= d_max {
                        out.push(d);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn t31532() -> Triple {
        Triple::from_u64(3, 15, 32, 4).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let f = fundamental_solutions(&bi(3), &bi(32), &bi(-116), &bi(10));
        let zs: Vec<(BigInt, BigInt)> = f.iter().map(|s| (s.z0.clone(), s.x0.clone())).collect();
        assert_eq!(zs, vec![(bi(-2), bi(2)), (bi(2), bi(2))]);
        assert!(f.iter().all(|s| s.fundamental));
        let eq = PellEq::new(bi(6), bi(42), 4).unwrap();
        assert_eq!(eq.window(), bi(11));
        let g = fundamental_solutions(&bi(6), &bi(42), &bi(4 * (6 - 42)), &bi(13));
        assert_eq!(g.iter().map(|s| (s.z0.clone(), s.x0.clone())).collect::<Vec<_>>(), vec![(bi(-2), bi(2)), (bi(2), bi(2))]);
        assert!(fundamental_solutions(&bi(3), &bi(32), &bi(-115), &bi(10)).is_empty());
    }

    #[test]
    fn classification_examples() {
        let rep = classify_fundamentals(&t31532()).unwrap();
        assert_eq!(rep.cr_st_half, bi(2));
        assert!(!rep.case_b_d_possible && !rep.case_c_possible && rep.two_only);
        let rep = classify_fundamentals(&Triple::from_u64(6, 16, 42, 4).unwrap()).unwrap();
        assert!(rep.two_only);
        let f = triple_fundamentals(&t31532()).unwrap();
        assert!(f.iter().all(|s| s.class == FundClass::Two && s.x0 == bi(2)));
        assert!(classify_fundamentals(&Triple::from_u64(1, 3, 8, 1).unwrap()).is_err());
    }

    #[test]
    fn sequence_examples() {
        let sys = PellSystem::new(&t31532()).unwrap();
        let v = sys.v_seq(&bi(-2), &bi(2)).unwrap();
        assert_eq!(seq_generate(&v, 3), vec![bi(-2), bi(22), bi(222)]);
        let w = sys.w_seq(&bi(-2), &bi(2)).unwrap();
        assert_eq!(seq_generate(&w, 3), vec![bi(-2), bi(10), bi(222)]);
        let s = RecurrenceSeq::new(bi(2), bi(10 + 32), bi(10));
        assert_eq!(seq_generate(&s, 3)[2], bi(10 * 42 - 2));
        assert_eq!(intersect(&v, &w, &bi(1_000_000)), vec![(2, 2, bi(222))]);
        let w_plus = sys.w_seq(&bi(2), &bi(2)).unwrap();
        assert!(intersect(&v, &w_plus, &bi(1_000_000)).is_empty());
        let diag = intersect(&v, &v, &bi(100_000));
        assert!(diag.iter().all(|(m, n, _)| m == n));
        assert_eq!(diag.len(), 4);
    }

    #[test]
    fn d_recovery() {
        assert_eq!(solution_to_d(&bi(222), &bi(32), 4), Some(bi(1540)));
        assert_eq!(solution_to_d(&bi(2), &bi(32), 4), None);
        assert_eq!(solution_to_d(&bi(23), &bi(32), 4), None);
        assert_eq!(extensions_from_fundamentals(&t31532(), &bi(10_000)).unwrap(), vec![bi(1540)]);
    }

    #[test]
    fn mod_patterns() {
        let tr = t31532();
        let sys = PellSystem::new(&tr).unwrap();
        let up = sys.eq2.x_seq(&bi(-2), &bi(2)).unwrap();
        let res = seq_mod_pattern(&up, &tr.b, 41).unwrap();
        assert!(res.iter().step_by(2).all(|x| *x == bi(2)));
        let v = sys.eq3.x_seq(&bi(2), &bi(2)).unwrap();
        assert_eq!(v.init1, &tr.r + &tr.a);
        let (pre, per) = seq_mod_period(&v, &bi(2), 100).unwrap();
        assert!(per >= 1 && pre <= 1);
        let rep = mixed_parity_check(&tr, &BigInt::from(10).pow(30)).unwrap();
        assert!(rep.excluded());
        assert_eq!(rep.even_compatible, vec![(bi(2), bi(2))]);
    }

    #[test]
    fn conservation() {
        let tr = t31532();
        let sys = PellSystem::new(&tr).unwrap();
        let z = seq_generate(&sys.v_seq(&bi(2), &bi(2)).unwrap(), 30);
        let x = seq_generate(&sys.eq1.x_seq(&bi(2), &bi(2)).unwrap(), 30);
        assert!(z.iter().zip(&x).all(|(z, x)| sys.eq1.holds(z, x)));
    }
}
