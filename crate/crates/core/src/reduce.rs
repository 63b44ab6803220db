//! Continued-fraction reduction of exponent bounds.
//!
//! Given `0 < mκ − n + ξ < E·B^{−m}` for `m < M`, a convergent `P/Q` of `κ`
//! with `Q > 6M` and `η = ||ξQ|| − M||κQ|| > 0` rules out every solution with
//! `log(EQ/η)/log B ≤ m < M`. The instances come from the linear form
//! `Ω = 2m log α − 2n log γ + log μ`, which satisfies `0 < Ω < 2ac·α^{−4m}`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{cf_convergents, with_precision_retry, RealApprox};
use crate::bounds::{doubled, matveev_m_bound, policy_prec, AlgCtx, Branch};
use crate::error::{Error, Result};
use crate::pell::{classify_fundamentals, common_fundamentals, extensions_from_fundamentals, PellSystem};
use crate::tuple::{family_triple, prop_delta_triple, Triple};

/// Convergents tried after the first one with `Q > 6M`.
pub const MAX_CONVERGENT_TRIES: usize = 10;
/// Precision ceiling for automatic doubling.
pub const PREC_CEILING: u32 = 2000;
/// Exponent bound fed to family instances.
pub const FAMILY_M: u64 = 34_000_000_000_000_000;
/// Exponent bound fed to the quintuple instances.
pub const DELTA_M: u64 = 100_000_000_000_000_000;
/// Largest eq1 window scanned when listing fundamental solutions.
const WINDOW_SCAN_LIMIT: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    OmegaForm,
    LambdaForm,
    PropDelta,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::OmegaForm => "omega-form",
            Provenance::LambdaForm => "lambda-form",
            Provenance::PropDelta => "prop-delta",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub kappa: RealApprox,
    pub xi: RealApprox,
    pub e: RealApprox,
    pub b: RealApprox,
    pub m: BigInt,
    pub provenance: Provenance,
    pub prec: u32,
}

impl ReductionInstance {
    pub fn validate(&self) -> Result<()> {
        let one = RealApprox::one(self.prec);
        if !self.e.gt(&one)? || !self.b.gt(&one)? {
            return Err(Error::Domain("reduction needs E > 1 and B > 1".into()));
        }
        if self.m < BigInt::one() {
            return Err(Error::Domain("reduction needs M ≥ 1".into()));
        }
        Ok(())
    }

    pub fn with_m(&self, m: BigInt) -> Self {
        ReductionInstance { m, ..self.clone() }
    }
}

#[derive(Clone, Debug)]
pub enum ReductionOutcome {
    /// Solutions with `new_bound ≤ m < M` are excluded.
    Reduced { q: BigInt, eta: RealApprox, new_bound: BigInt, tries: usize },
    /// `ξ` lies within `||κQ||/2` of `jκ + i`, so the form is shifted to the
    /// homogeneous `(m + j)κ − (n − i)` and bounded by the best approximation
    /// property; `m = −j` stays open and lies below `new_bound`.
    Homogeneous { q: BigInt, shift: i64, new_bound: BigInt },
    /// No convergent among those tried gave `η > 0`.
    NoReduction { tries: usize },
}

impl ReductionOutcome {
    pub fn new_bound(&self) -> Option<&BigInt> {
        match self {
            ReductionOutcome::Reduced { new_bound, .. } | ReductionOutcome::Homogeneous { new_bound, .. } => {
                Some(new_bound)
            }
            ReductionOutcome::NoReduction { .. } => None,
        }
    }
}

/// One reduction step at the instance's own precision.
///
/// Fails with `InsufficientPrecision` if a convergent or the sign of `η` cannot be certified.
pub fn bd_reduce(inst: &ReductionInstance) -> Result<ReductionOutcome> {
    inst.validate()?;
    match inhomogeneous(inst)? {
        ReductionOutcome::NoReduction { tries } => Ok(homogeneous(inst)?.unwrap_or(ReductionOutcome::NoReduction { tries })),
        out => Ok(out),
    }
}

fn inhomogeneous(inst: &ReductionInstance) -> Result<ReductionOutcome> {
    let six_m = &inst.m * 6;
    let mut convs = cf_convergents(&inst.kappa, &six_m)?;
    let mut tries = 0;
    loop {
        let (_, q) = convs.last().cloned().expect("at least one convergent");
        if q <= six_m {
            // κ is rational with small denominators: nothing to reduce with
            return Ok(ReductionOutcome::NoReduction { tries });
        }
        tries += 1;
        let qi = RealApprox::from_int(q.clone(), inst.prec);
        let eta = (&inst.xi * &qi).nearest_dist()? - (&inst.kappa * &qi).nearest_dist()?.mul_int(&inst.m);
        if eta.is_positive()? {
            let ratio = (&inst.e * &qi).div(&eta)?;
            let nb = ratio.ln()?.div(&inst.b.ln()?)?.ceil_upper();
            let new_bound = if nb.is_negative() { BigInt::zero() } else { nb };
            return Ok(ReductionOutcome::Reduced { q, eta, new_bound, tries });
        }
        if tries >= MAX_CONVERGENT_TRIES {
            return Ok(ReductionOutcome::NoReduction { tries });
        }
        let next = cf_convergents(&inst.kappa, &q)?;
        if next.len() <= convs.len() {
            return Ok(ReductionOutcome::NoReduction { tries });
        }
        convs = next;
    }
}

/// Largest `|j|` tried when looking for `ξ ≈ jκ + i`.
const SHIFT_RANGE: i64 = 2;

/// For `0 < (m+j)κ − n' + δ < E·B^{−m}` with `|δ| < ||κQ||/2` and `0 < |m+j| < Q'`
/// (`Q'` the next denominator), `||κQ|| <= |(m+j)κ − n'|` gives
/// `m < log(2E/||κQ||)/log B`.
fn homogeneous(inst: &ReductionInstance) -> Result<Option<ReductionOutcome>> {
    // Q > 6M ≥ M + SHIFT_RANGE keeps |m + j| below the next denominator
    let convs = cf_convergents(&inst.kappa, &(&inst.m * 6))?;
    let (_, q) = convs.last().cloned().expect("at least one convergent");
    if q <= &inst.m * 6 {
        return Ok(None);
    }
    let qi = RealApprox::from_int(q.clone(), inst.prec);
    let gap = (&inst.kappa * &qi).nearest_dist()?;
    if !gap.is_positive()? {
        return Ok(None);
    }
    for j in -SHIFT_RANGE..=SHIFT_RANGE {
        let delta = (&inst.xi - &inst.kappa.mul_int(&BigInt::from(j))).nearest_dist()?;
        if delta.mul_int(&BigInt::from(2)).lt(&gap)? {
            let ratio = inst.e.mul_int(&BigInt::from(2)).div(&gap)?;
            let nb = ratio.ln()?.div(&inst.b.ln()?)?.ceil_upper();
            let new_bound = nb.max(BigInt::from(1 - j)).max(BigInt::zero());
            return Ok(Some(ReductionOutcome::Homogeneous { q, shift: j, new_bound }));
        }
    }
    Ok(None)
}

/// Rebuilds the instance at doubled precision until the step is certified.
pub fn bd_reduce_auto(
    prec: u32,
    build: impl Fn(u32) -> Result<ReductionInstance>,
) -> Result<(ReductionOutcome, u32)> {
    with_precision_retry(prec, PREC_CEILING, |p| bd_reduce(&build(p)?))
}

/// Repeats the reduction with `M` replaced by the last bound while it keeps shrinking.
///
/// Returns every step and the final exponent bound (solutions have `m` below it).
pub fn reduce_iterated(
    prec: u32,
    m0: &BigInt,
    build: impl Fn(u32) -> Result<ReductionInstance>,
) -> Result<(Vec<ReductionOutcome>, BigInt, u32)> {
    let mut steps = Vec::new();
    let mut m = m0.clone();
    let mut used = prec;
    loop {
        let (out, p) = bd_reduce_auto(used, |p| Ok(build(p)?.with_m(m.clone())))?;
        used = used.max(p);
        let nb = out.new_bound().cloned();
        steps.push(out);
        match nb {
            Some(nb) if nb < m => {
                m = nb;
                if m <= BigInt::from(2) {
                    return Ok((steps, m, used));
                }
            }
            _ => return Ok((steps, m, used)),
        }
    }
}

fn omega_instance(ctx: &AlgCtx, br: Branch, m: BigInt, provenance: Provenance) -> Result<ReductionInstance> {
    let prec = ctx.prec;
    let [a, _, c] = ctx.triple.entries();
    let kappa = ctx.log_alpha.div(&ctx.log_gamma)?;
    let xi = ctx.mu(br).ln()?.div(&ctx.log_gamma.mul_int(&BigInt::from(2)))?;
    let e = RealApprox::from_int(&a * &c, prec).div(&ctx.log_gamma)?;
    let b = ctx.alpha.powi(4)?;
    Ok(ReductionInstance { kappa, xi, e, b, m, provenance, prec })
}

/// `κ = log α/log γ`, `ξ = log μ/(2 log γ)`, `E = ac/log γ`, `B = α⁴`, `M = 3.4·10¹⁶`.
///
/// ε = ±1 uses the doubled triple. `prec` defaults to `max{180, 10⌈A/100⌉}`.
pub fn build_omega_instance(
    big_a: i64,
    big_k: i64,
    eps: i64,
    br: Branch,
    prec: Option<u32>,
) -> Result<ReductionInstance> {
    let (a, k, e) = doubled(big_a, big_k, eps)?;
    let ctx = AlgCtx::family(a, k, e, prec.unwrap_or_else(|| policy_prec(a)))?;
    omega_instance(&ctx, br, BigInt::from(FAMILY_M), Provenance::OmegaForm)
}

/// The same shape for the σ = 1 triple attached to `Δ`, with `M = 10¹⁷`.
pub fn build_delta_instance(delta: u64, br: Branch, prec: u32) -> Result<ReductionInstance> {
    let t = prop_delta_triple(delta)?;
    let ctx = AlgCtx::new(&t.triple, prec)?;
    omega_instance(&ctx, br, BigInt::from(DELTA_M), Provenance::PropDelta)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    UniqueExtension,
    NeedsAttention(String),
}

impl Verdict {
    pub fn is_unique(&self) -> bool {
        matches!(self, Verdict::UniqueExtension)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::UniqueExtension => "unique-extension",
            Verdict::NeedsAttention(_) => "needs-attention",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BranchReport {
    pub branch: Branch,
    pub steps: Vec<ReductionOutcome>,
    /// Every solution on this branch has `m` below this bound.
    pub final_bound: BigInt,
}

#[derive(Clone, Debug)]
pub struct PairReport {
    pub triple: Triple,
    pub d_plus: BigInt,
    pub verdict: Verdict,
    pub branches: Vec<BranchReport>,
    /// Initial exponent bound (Matveev, or the fixed `M`).
    pub m_start: BigInt,
    /// Extensions found by exact intersection below the reduced bound.
    pub residual: Vec<BigInt>,
    /// How the fundamental solutions were established.
    pub fundamentals: &'static str,
    pub prec: u32,
}

impl PairReport {
    pub fn max_bound(&self) -> BigInt {
        self.branches.iter().map(|b| b.final_bound.clone()).max().unwrap_or_default()
    }
}

/// Checks that the only starting values shared by eq1 and eq2 are `z = ±√σ`,
/// when both windows are small enough to list.
fn fundamentals_status(tr: &Triple) -> Result<(&'static str, Option<String>)> {
    let sys = PellSystem::new(tr)?;
    let limit = BigInt::from(WINDOW_SCAN_LIMIT);
    if sys.eq1.window() > limit || sys.eq2.window() > limit {
        return Ok(("classification", None));
    }
    let root = BigInt::from(if tr.sigma == 4 { 2 } else { 1 });
    if tr.sigma == 4 {
        // starts with |z0| = t or |z1| = s pair different values and are ruled out by size
        let class = classify_fundamentals(tr)?;
        if class.case_b_d_possible || class.case_c_possible {
            return Ok(("enumerated", Some("starts with |z0| = t or |z1| = s not excluded".into())));
        }
    }
    let odd: Vec<String> = common_fundamentals(tr)?
        .into_iter()
        .filter(|(z, _, _)| z.abs() != root)
        .map(|(z, x, y)| format!("({z}, {x}, {y})"))
        .collect();
    if odd.is_empty() {
        Ok(("enumerated", None))
    } else {
        Ok(("enumerated", Some(format!("extra starting values {}", odd.join(" ")))))
    }
}

/// Runs both branches through the reduction and settles the remaining small
/// indices by exact intersection of the `z` sequences.
///
/// The Ω form covers equal signs `z0 = z1`; even-index terms satisfy
/// `v ≡ z0`, `w ≡ z1 (mod c)`, which rules out mixed signs. The residual
/// intersection still runs over all four sign combinations.
fn verify_triple(
    tr: &Triple,
    d_plus: BigInt,
    prec: u32,
    m_start: BigInt,
    build: impl Fn(Branch, u32) -> Result<ReductionInstance>,
) -> Result<PairReport> {
    let mut branches = Vec::new();
    let mut notes = Vec::new();
    let mut used = prec;
    for br in Branch::BOTH {
        let (steps, bound, p) = reduce_iterated(prec, &m_start, |p| build(br, p))?;
        used = used.max(p);
        if bound >= m_start {
            notes.push(format!("branch {} not reduced", br.as_str()));
        }
        branches.push(BranchReport { branch: br, steps, final_bound: bound });
    }
    let (fundamentals, extra) = fundamentals_status(tr)?;
    if let Some(e) = extra {
        notes.push(e);
    }
    let max_bound = branches.iter().map(|b| b.final_bound.clone()).max().unwrap_or_default();
    let residual = if notes.is_empty() {
        // v_{2m} for m < bound: cap z at the largest term up to index 2·bound + 2
        let sys = PellSystem::new(tr)?;
        let root = BigInt::from(if tr.sigma == 4 { 2 } else { 1 });
        let idx: BigInt = &max_bound * 2 + 2;
        let idx: usize = idx.try_into().map_err(|_| Error::Internal("residual index too large".into()))?;
        let mut z_cap = BigInt::zero();
        for z0 in [root.clone(), -root.clone()] {
            let v = sys.v_seq(&z0, &root)?;
            for z in v.iter().take(idx + 1) {
                z_cap = z_cap.max(z.abs());
            }
        }
        let d_max = (&z_cap * &z_cap - tr.sigma) / &tr.c;
        let found = extensions_from_fundamentals(tr, &d_max)?;
        if found != vec![d_plus.clone()] {
            notes.push(format!("residual intersection found {found:?}"));
        }
        found
    } else {
        Vec::new()
    };
    let verdict = if notes.is_empty() { Verdict::UniqueExtension } else { Verdict::NeedsAttention(notes.join("; ")) };
    Ok(PairReport { triple: tr.clone(), d_plus, verdict, branches, m_start, residual, fundamentals, prec: used })
}

/// Uniqueness of the extension of the family triple `(A, K, ε)` starting from `M = 3.4·10¹⁶`.
pub fn verify_pair(big_a: i64, big_k: i64, eps: i64) -> Result<PairReport> {
    verify_pair_at(big_a, big_k, eps, None)
}

pub fn verify_pair_at(big_a: i64, big_k: i64, eps: i64, prec: Option<u32>) -> Result<PairReport> {
    let (a, k, e) = doubled(big_a, big_k, eps)?;
    let f = family_triple(a, k, e)?;
    let prec = prec.unwrap_or_else(|| policy_prec(a));
    verify_triple(&f.triple, f.d_plus(), prec, BigInt::from(FAMILY_M), |br, p| {
        build_omega_instance(a, k, e, br, Some(p))
    })
}

/// The σ = 1 triple attached to `Δ` (`6 ≤ Δ`), starting from `M = 10¹⁷` at 200 digits.
pub fn verify_prop_delta(delta: u64) -> Result<PairReport> {
    let t = prop_delta_triple(delta)?;
    verify_triple(&t.triple, t.d_plus.clone(), 200, BigInt::from(DELTA_M), |br, p| {
        build_delta_instance(delta, br, p)
    })
}

/// Matveev exponent bound for the σ = 1 triple attached to `Δ`.
pub fn delta_m_bound(delta: u64) -> Result<BigInt> {
    let t = prop_delta_triple(delta)?;
    let ctx = AlgCtx::new(&t.triple, 40)?;
    matveev_m_bound(&ctx)
}
