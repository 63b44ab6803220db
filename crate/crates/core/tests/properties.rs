use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use dtriple::arith::{cf_convergents, cf_convergents_rational, isqrt, RealApprox};
use dtriple::bounds::{
    admissible_k_max, laurent_a_bound, lambda_decreasing_in_k, sim_approx_check, AlgCtx, Branch,
};
use dtriple::pell::{extensions_from_fundamentals, seq_generate, PellSystem};
use dtriple::reduce::{bd_reduce, build_omega_instance, verify_pair, ReductionOutcome};
use dtriple::tuple::{
    brute_force_extensions, corollary_decompose, d_minus, d_plus_closed, dual_map, family_triple,
    quintuple_scan_b4a, quintuple_scan_regular, verify_dtuple,
};

fn eps_strategy() -> impl Strategy<Value = i64> {
    prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2)]
}

fn big_below_1e40() -> impl Strategy<Value = BigInt> {
    (any::<u64>(), any::<u64>(), 0u32..=40).prop_map(|(hi, lo, digits)| {
        let n = (BigInt::from(hi) << 64u32) | BigInt::from(lo);
        n % BigInt::from(10).pow(digits)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn isqrt_brackets(n in big_below_1e40()) {
        let (r, exact) = isqrt(&n).unwrap();
        prop_assert!(&r * &r <= n);
        let r1 = &r + 1;
        prop_assert!(n < &r1 * &r1);
        prop_assert_eq!(exact, &r * &r == n);
    }

    #[test]
    fn doubling_precision_stays_inside(num in 1u64..1_000_000_000, den in 1u64..1_000_000, p in 20u32..120) {
        let x = |prec| RealApprox::from_ratio(num, den, prec);
        let f = |y: RealApprox| -> RealApprox { (y.ln().unwrap() + y.sqrt().unwrap()).exp().unwrap() };
        let coarse = f(x(p));
        let fine = f(x(2 * p));
        prop_assert!(coarse.contains(&fine.lower()) && coarse.contains(&fine.upper()));
    }

    #[test]
    fn convergents_approximate(num in 1u64..u64::MAX, den in 1u64..u64::MAX) {
        let q = BigRational::new(BigInt::from(num), BigInt::from(den));
        let x = RealApprox::from_rational(&q, 60);
        let convs = cf_convergents(&x, &BigInt::from(1_000_000_000u64)).unwrap();
        let exact = cf_convergents_rational(&q, &BigInt::from(1_000_000_000u64));
        prop_assert!(convs.len() <= exact.len());
        prop_assert_eq!(&convs[..], &exact[..convs.len()]);
        for (p, qq) in convs {
            // |xQ − P| < 1/Q
            let err = (&x * &RealApprox::from_int(qq.clone(), 60)).add_int(&-p).abs();
            prop_assert!(err.lt(&RealApprox::from_ratio(1, qq, 60)).unwrap());
        }
    }

    #[test]
    fn family_invariants(a in 1i64..=50, k in 1i64..=50, eps in eps_strategy()) {
        let Ok(f) = family_triple(a, k, eps) else { return Ok(()) };
        let dp = f.d_plus();
        prop_assert_eq!(d_plus_closed(a, k, eps).unwrap(), dp.clone());
        prop_assert_eq!(d_minus(&f.triple).unwrap(), BigInt::from(0));
        let quad = [f.a().clone(), f.b().clone(), f.c().clone(), dp];
        prop_assert!(verify_dtuple(&quad, &BigInt::from(eps * eps)).unwrap().is_valid());
        let back = corollary_decompose(f.a(), f.b(), f.c(), eps).unwrap();
        prop_assert_eq!(back, Some((a, k, eps)));
    }

    #[test]
    fn duality(k in prop_oneof![Just(1i64), Just(2), Just(4)], a in 5i64..200) {
        let b = dual_map(a, k).unwrap();
        let minus = family_triple(a, k, -2).unwrap();
        let plus = family_triple(b, k, 2).unwrap();
        prop_assert_eq!(minus.triple, plus.triple);
    }

    #[test]
    fn pell_conservation(a in 2i64..60, k in 1i64..60, eps in prop_oneof![Just(-2i64), Just(2)], sign in prop_oneof![Just(-2i64), Just(2)]) {
        let Ok(f) = family_triple(a, k, eps) else { return Ok(()) };
        let sys = PellSystem::new(&f.triple).unwrap();
        let z0 = BigInt::from(sign);
        let two = BigInt::from(2);
        for eq in [&sys.eq1, &sys.eq2] {
            let z = seq_generate(&eq.z_seq(&z0, &two).unwrap(), 50);
            let x = seq_generate(&eq.x_seq(&z0, &two).unwrap(), 50);
            prop_assert!(z.iter().zip(&x).all(|(z, x)| eq.holds(z, x)));
        }
    }

    #[test]
    fn sieves_are_deterministic(dmax in 5u64..30) {
        prop_assert_eq!(quintuple_scan_regular((1, u64::MAX), dmax, 20), quintuple_scan_regular((1, u64::MAX), dmax, 20));
        prop_assert_eq!(quintuple_scan_b4a((1, 500), dmax), quintuple_scan_b4a((1, 500), dmax));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_matches_pell(a in 1i64..40, k in 1i64..200, eps in eps_strategy()) {
        let Ok(f) = family_triple(a, k, eps) else { return Ok(()) };
        prop_assume!(f.c() <= &BigInt::from(200_000));
        let d_max = f.d_plus() * 3;
        prop_assert_eq!(extensions_from_fundamentals(&f.triple, &d_max).unwrap(), brute_force_extensions(&f.triple, &d_max));
    }

    #[test]
    fn verified_pairs_agree_with_oracle(a in 2i64..40, k in 1i64..100, eps in prop_oneof![Just(-2i64), Just(2)]) {
        let Ok(f) = family_triple(a, k, eps) else { return Ok(()) };
        prop_assume!(f.c() <= &BigInt::from(200_000));
        let rep = verify_pair(a, k, eps).unwrap();
        if rep.verdict.is_unique() {
            prop_assert_eq!(brute_force_extensions(&f.triple, &(f.d_plus() * 2)), vec![f.d_plus()]);
        }
    }

    #[test]
    fn lambda_decreases(a in 3i64..500, eps in eps_strategy(), extra in 0i64..5000) {
        let k0 = (3003 * eps.abs().pow(3) * (a + 1) + 99) / 100 + extra;
        prop_assert!(lambda_decreasing_in_k(a, eps, k0, 137, 6).unwrap());
    }

    #[test]
    fn regular_extension_approximates(a in 2i64..200, k in 1i64..2000, eps in eps_strategy()) {
        let Ok(f) = family_triple(a, k, eps) else { return Ok(()) };
        prop_assert!(sim_approx_check(a, k, eps, &f.d_plus()).unwrap());
    }

    #[test]
    fn laurent_bound_non_increasing(nu in 1u64..60, eps in prop_oneof![Just(-2i64), Just(2)]) {
        let here = laurent_a_bound(eps, nu).unwrap();
        let next = laurent_a_bound(eps, nu + 1).unwrap();
        prop_assert!(next <= here);
        // the limit 40·e^4.24675 ≈ 2795.12 stays below every floored bound
        prop_assert!(next >= BigInt::from(2796));
    }

    #[test]
    fn conjugate_product_in_unit_interval(a in 2i64..2800, k in 1i64..5000, eps in prop_oneof![Just(-2i64), Just(2)]) {
        let Ok(ctx) = AlgCtx::family(a, k, eps, 60) else { return Ok(()) };
        for br in Branch::BOTH {
            let p = ctx.chi_conjugate_product(br).unwrap();
            prop_assert!(p.is_positive().unwrap());
            prop_assert!(p.lt(&RealApprox::one(60)).unwrap());
        }
    }

    #[test]
    fn reduction_is_deterministic_and_monotone(a in 2i64..2700, frac in 0.0f64..1.0, eps in prop_oneof![Just(-2i64), Just(2)]) {
        let k = 1 + (frac * admissible_k_max(a).unwrap() as f64) as i64;
        let Ok(inst) = build_omega_instance(a, k, eps, Branch::Plus, None) else { return Ok(()) };
        let first = bd_reduce(&inst).unwrap();
        let again = bd_reduce(&inst).unwrap();
        prop_assert_eq!(format!("{first:?}"), format!("{again:?}"));
        // a slightly larger M that keeps the convergent can only raise the bound
        if let ReductionOutcome::Reduced { q, new_bound, .. } = &first {
            let bigger = inst.with_m(&inst.m + 1000);
            if let ReductionOutcome::Reduced { q: q2, new_bound: nb2, .. } = bd_reduce(&bigger).unwrap() {
                if &q2 == q {
                    prop_assert!(&nb2 >= new_bound);
                }
            }
            // the sign of η survives a doubling of the precision
            let fine = build_omega_instance(a, k, eps, Branch::Plus, Some(inst.prec * 2)).unwrap();
            if let ReductionOutcome::Reduced { q: q3, .. } = bd_reduce(&fine).unwrap() {
                prop_assert_eq!(&q3, q);
            }
        }
    }
}
