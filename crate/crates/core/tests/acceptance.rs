//! End-to-end acceptance run. Prints one line per criterion and fails if any
//! reproducible criterion fails.

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;

use dtriple::bounds::{
    admissible_a_max, admissible_k_max, hg_anchor_k, hg_k_check, laurent_a_bound, matveev_m_bound, nu_floor_at,
    policy_prec, rickert, rickert_at, rickert_applicable, AlgCtx,
};
use dtriple::pell::{common_fundamentals, intersect, mixed_parity_check, solution_to_d, PellSystem};
use dtriple::reduce::{delta_m_bound, verify_pair, verify_prop_delta};
use dtriple::tuple::{
    brute_force_extensions, d_plus_closed, family_triple, quintuple_scan_regular, verify_dtuple, SieveStatus, Triple,
};
use dtriple::Error;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn bi(n: i64) -> BigInt {
    BigInt::from(n)
}

const EPS: [i64; 4] = [-2, -1, 1, 2];

fn c1_d_plus_identity() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for eps in EPS {
        for a in 1..=50 {
            for k in 1..=50 {
                let Ok(f) = family_triple(a, k, eps) else { continue };
                let dp = f.d_plus();
                if d_plus_closed(a, k, eps).ok() != Some(dp.clone()) {
                    return outcome(false, format!("closed form differs at ({a}, {k}, {eps})"));
                }
                let quad = [f.a().clone(), f.b().clone(), f.c().clone(), dp];
                if !verify_dtuple(&quad, &bi(eps * eps)).map(|c| c.is_valid()).unwrap_or(false) {
                    return outcome(false, format!("not a D({})-quadruple at ({a}, {k}, {eps})", eps * eps));
                }
                checked += 1;
            }
        }
    }
    let t = start.elapsed();
    outcome(t < Duration::from_secs(5), format!("{checked} triples, {:.2} s (limit 5 s)", t.as_secs_f64()))
}

fn c2_oracle() -> Outcome {
    const C_MAX: i64 = 200_000;
    let start = Instant::now();
    let mut jobs = Vec::new();
    for eps in EPS {
        for a in 1..=C_MAX {
            // c = (A+1)²K + 2ε(A+1) grows with both A and K
            if (a + 1) * (a + 1) + 2 * eps * (a + 1) > C_MAX {
                break;
            }
            jobs.push((eps, a));
        }
    }
    let bad: Vec<String> = jobs
        .par_iter()
        .flat_map_iter(|&(eps, a)| {
            let mut bad = Vec::new();
            for k in 1.. {
                if (a + 1) * (a + 1) * k + 2 * eps * (a + 1) > C_MAX {
                    break;
                }
                let Ok(f) = family_triple(a, k, eps) else { continue };
                let dp = f.d_plus();
                let found = brute_force_extensions(&f.triple, &(&dp * 2));
                if found != vec![dp] {
                    bad.push(format!("({a}, {k}, {eps}): {found:?}"));
                }
            }
            bad
        })
        .collect();
    let t = start.elapsed();
    let ok = bad.is_empty() && t < Duration::from_secs(600);
    outcome(ok, format!("{} exceptions, {:.1} s (limit 600 s) {}", bad.len(), t.as_secs_f64(), bad.join(" ")))
}

fn c3_fundamentals() -> Outcome {
    let mut pairs = Vec::new();
    for a in 2..=12 {
        let ks: Vec<i64> = if a == 2 { (6..=60).collect() } else { std::iter::once(3).chain(5..=60).collect() };
        pairs.extend(ks.into_iter().map(|k| (a, k)));
    }
    let expect = vec![(bi(-2), bi(2), bi(2)), (bi(2), bi(2), bi(2))];
    let cap = BigInt::from(10).pow(30);
    let bad: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(a, k)| {
            let f = family_triple(a, k, -2).ok()?;
            let fund = match common_fundamentals(&f.triple) {
                Ok(v) => v,
                Err(e) => return Some(format!("({a}, {k}): {e}")),
            };
            let mixed = mixed_parity_check(&f.triple, &cap).map(|r| r.excluded()).unwrap_or(false);
            (fund != expect || !mixed).then(|| format!("({a}, {k}): {fund:?} mixed-excluded={mixed}"))
        })
        .collect();
    outcome(bad.is_empty(), format!("{} pairs with 2 <= A <= 12, {} exceptions {}", pairs.len(), bad.len(), bad.join(" ")))
}

fn c4_intersection() -> Outcome {
    let tr = Triple::from_u64(3, 15, 32, 4).unwrap();
    let sys = PellSystem::new(&tr).unwrap();
    let v = sys.v_seq(&bi(-2), &bi(2)).unwrap();
    let w = sys.w_seq(&bi(-2), &bi(2)).unwrap();
    let hits = intersect(&v, &w, &BigInt::from(10).pow(12));
    let d = hits.first().and_then(|(_, _, z)| solution_to_d(z, &tr.c, 4));
    let ok = hits == vec![(2, 2, bi(222))] && d == Some(bi(1540));
    outcome(ok, format!("hits {hits:?}, d = {d:?}"))
}

fn c5_rickert() -> Outcome {
    let lam = match rickert(3, 121, 1) {
        Ok(r) => r.lambda.to_f64(),
        Err(e) => return outcome(false, format!("(3, 121, 1): {e}")),
    };
    let near = (lam - 1.9985).abs() <= 1e-3;
    let mut grid = 0;
    let mut below = true;
    'outer: for eps in EPS {
        for a in [2i64, 3, 5, 8, 13, 21, 40, 100, 400, 2000] {
            for step in 0..5i64 {
                let k_min = (3003 * eps.abs().pow(3) * (a + 1) + 99) / 100;
                let k = k_min + step * step * 997;
                if !rickert_applicable(a, k, eps) {
                    continue;
                }
                grid += 1;
                let ok = rickert(a, k, eps).map(|r| r.lambda.lt(&dtriple::arith::RealApprox::from_int(2, 40)).unwrap_or(false));
                if ok != Ok(true) {
                    below = false;
                    break 'outer;
                }
            }
        }
    }
    let rejected = matches!(rickert_at(3, 120, 1, 40), Err(Error::Inapplicable(_)));
    outcome(
        near && below && grid >= 150 && rejected,
        format!("λ(3,121,1) = {lam:.6} (target 1.9985 ± 1e-3), λ < 2 on {grid} grid points: {below}, (3,120,1) rejected: {rejected}"),
    )
}

fn c6_laurent() -> Outcome {
    let got = [laurent_a_bound(-2, 1), laurent_a_bound(2, 1), laurent_a_bound(-2, 11)];
    let want = [bi(2800), bi(3365), bi(2796)];
    let ok = got.iter().zip(&want).all(|(g, w)| g.as_ref().ok() == Some(w));
    outcome(ok, format!("{:?} (expected 2800, 3365, 2796)", got.iter().map(|g| g.as_ref().map(|v| v.to_string())).collect::<Vec<_>>()))
}

fn c7_hg_anchors() -> Outcome {
    let anchors = [(1326i64, 0i64), (454, 1000), (3, 23000), (2, 210000)];
    let mut lines = Vec::new();
    let mut ok = true;
    for (a, k0) in anchors {
        let k = hg_anchor_k(a, k0);
        for eps in [-2, 2] {
            let r = hg_k_check(a, k, eps, 1);
            ok &= r == Ok(false);
            lines.push(format!("({a},{k},{eps})={:?}", r.map_err(|e| e.to_string())));
        }
    }
    outcome(ok, lines.join(" "))
}

fn c8_matveev() -> Outcome {
    let worst = AlgCtx::family(2810, admissible_k_max(2810).unwrap(), 2, policy_prec(2810)).and_then(|c| matveev_m_bound(&c));
    let limit = BigInt::from(35) * BigInt::from(10).pow(15);
    let family_ok = worst.as_ref().map(|m| *m <= limit).unwrap_or(false);
    let delta_max = (6..=60u64)
        .map(delta_m_bound)
        .collect::<Result<Vec<_>, _>>()
        .map(|v| v.into_iter().max().unwrap());
    let delta_ok = delta_max.as_ref().map(|m| *m <= BigInt::from(10).pow(17)).unwrap_or(false);
    outcome(
        family_ok && delta_ok,
        format!(
            "worst family m-bound {:?} (limit 3.5e16), largest Δ-context bound {:?} (limit 1e17)",
            worst.map(|m| m.to_string()),
            delta_max.map(|m| m.to_string())
        ),
    )
}

/// Deterministic spread of `n` points over `1..=hi`.
fn spread(i: i64, n: i64, hi: i64, salt: i64) -> i64 {
    let _ = n;
    1 + (i * 2_654_435_761 + salt * 40_503).rem_euclid(hi)
}

fn c9_nu_floor() -> Outcome {
    let mut pairs = Vec::new();
    for i in 0..100i64 {
        let eps = if i % 2 == 0 { -2 } else { 2 };
        let a = 1 + spread(i, 100, admissible_a_max(eps).unwrap() - 1, 1);
        let k = spread(i, 100, admissible_k_max(a).unwrap(), 2);
        pairs.push((a, k, eps, 10u64));
    }
    for i in 0..20i64 {
        let eps = if i % 2 == 0 { -2 } else { 2 };
        let a = 1 + spread(i, 20, 39, 3);
        let k = spread(i, 20, admissible_k_max(a).unwrap(), 4);
        pairs.push((a, k, eps, 24));
    }
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for &(a, k, eps, nu_max) in &pairs {
        let t = Instant::now();
        let r = nu_floor_at(a, k, eps, nu_max, 180);
        slowest = slowest.max(t.elapsed());
        if r != Ok(nu_max + 1) {
            bad.push(format!("({a},{k},{eps}): {r:?}"));
        }
    }
    let ok = bad.is_empty() && slowest < Duration::from_secs(1);
    outcome(
        ok,
        format!("{} pairs (100 region-wide at ν ≤ 10, 20 with A ≤ 40 at ν ≤ 24), slowest {:.3} s (limit 1 s) {}", pairs.len(), slowest.as_secs_f64(), bad.join(" ")),
    )
}

fn c10_reduction() -> Outcome {
    let mut pairs = Vec::new();
    for i in 0..50i64 {
        let eps = EPS[(i % 4) as usize];
        let (sa, se) = (admissible_a_max(eps.signum() * 2).unwrap(), eps.abs());
        let a = 1 + spread(i, 50, sa - 1, 5);
        // ε = ±1 is checked through (A, 2K, 2ε), which must stay in the region
        let k = spread(i, 50, admissible_k_max(a).unwrap() * se / 2, 6);
        pairs.push((a, k, eps));
    }
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for &(a, k, eps) in &pairs {
        let t = Instant::now();
        let r = verify_pair(a, k, eps);
        slowest = slowest.max(t.elapsed());
        match r {
            Ok(rep) if rep.verdict.is_unique() => {}
            Ok(rep) => bad.push(format!("({a},{k},{eps}): {:?}", rep.verdict)),
            Err(e) => bad.push(format!("({a},{k},{eps}): {e}")),
        }
    }
    let mut delta_slowest = Duration::ZERO;
    for delta in 6..=20u64 {
        let t = Instant::now();
        let r = verify_prop_delta(delta);
        delta_slowest = delta_slowest.max(t.elapsed());
        match r {
            Ok(rep) if rep.verdict.is_unique() => {}
            Ok(rep) => bad.push(format!("Δ={delta}: {:?}", rep.verdict)),
            Err(e) => bad.push(format!("Δ={delta}: {e}")),
        }
    }
    let ok = bad.is_empty() && slowest < Duration::from_secs(5) && delta_slowest < Duration::from_millis(1500);
    outcome(
        ok,
        format!(
            "50 pairs slowest {:.2} s (limit 5 s); Δ = 6..20 slowest {:.2} s (limit 1.5 s) {}",
            slowest.as_secs_f64(),
            delta_slowest.as_secs_f64(),
            bad.join(" ")
        ),
    )
}

fn c11_sieve() -> Outcome {
    let v = quintuple_scan_regular((1, u64::MAX), 10, 20);
    let gcd11 = v.iter().any(|x| x.delta == 5 && x.status == SieveStatus::EliminatedGcd && x.reason.contains("= 11"));
    let gcd2 = v.iter().any(|x| x.delta == 7 && x.a == 24 && x.status == SieveStatus::EliminatedGcd && x.reason.contains("= 2"));
    let mut surv: Vec<(u64, u64, u64)> = v.iter().filter(|x| x.is_survivor()).map(|x| (x.a, x.b, x.c)).collect();
    surv.sort();
    let want = vec![
        (21, 8928, 9815),
        (35, 42456, 44929),
        (48, 109921, 114563),
        (80, 510561, 523423),
        (99, 968320, 988001),
    ];
    outcome(gcd11 && gcd2 && surv == want, format!("Δ=5 gcd 11: {gcd11}, Δ=7 a=24 gcd 2: {gcd2}, survivors {surv:?}"))
}

#[test]
fn acceptance() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "d+ closed form and quadruple check", c1_d_plus_identity),
        (2, "exhaustive oracle for c <= 2e5", c2_oracle),
        (3, "fundamental solutions and mixed parity", c3_fundamentals),
        (4, "intersection for (3, 15, 32)", c4_intersection),
        (5, "hypergeometric exponent", c5_rickert),
        (6, "two-logarithm A bounds", c6_laurent),
        (7, "K bound at the four anchors", c7_hg_anchors),
        (8, "three-logarithm m bound", c8_matveev),
        (9, "nu floor on sampled pairs", c9_nu_floor),
        (10, "reduction on sampled pairs and Δ triples", c10_reduction),
        (11, "quintuple sieve for Δ <= 10", c11_sieve),
    ];
    // written to the handle directly so the report survives libtest's capture
    let mut out = std::io::stdout();
    let mut failed = Vec::new();
    for (n, name, f) in criteria {
        let t = Instant::now();
        let o = f();
        writeln!(
            out,
            "criterion {n:>2}: {} [{name}] {} ({:.1} s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        )
        .unwrap();
        if !o.pass {
            failed.push(n);
        }
    }
    writeln!(
        out,
        "criterion 12: NOT REPRODUCIBLE [full exhaustive sweeps] months of compute; covered by the sampled checks of criteria 2, 9 and 10"
    )
    .unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
