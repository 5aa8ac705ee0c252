use alphanum::classifier::{
    classify_exact, classify_rounded, partial_alpha, ratio_bound_check, Order, Variant, Verdict,
};
use alphanum::exact_arith::{
    divisor_stats, factorize, factorize_u64, is_prime_u64, reduce_ratio, sigma_k_exact, SieveTable,
};
use alphanum::hyper_arith::{sigma_general, Precision, Quaternion, RoundMode};
use alphanum::search::{
    chi_alpha, enumerate_alpha, enumerate_alpha_with, reverify, seed_search_odd, AlphaSeed,
    Parity, PruneReason,
};
use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

fn order11() -> Order {
    Order::integer(1, 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn factorization_invariants(n in 1u64..u64::MAX / 2) {
        let f = factorize_u64(n).unwrap();
        prop_assert_eq!(f.product(), BigUint::from(n));
        prop_assert_eq!(f.parts().is_empty(), n == 1);
        for w in f.parts().windows(2) {
            prop_assert!(w[0].prime < w[1].prime);
        }
        for pp in f.parts() {
            prop_assert!(pp.exp >= 1);
            prop_assert!(is_prime_u64(u64::try_from(&pp.prime).unwrap()));
        }
    }

    #[test]
    fn factorization_round_trips_through_text(n in 1u64..10_000_000_000) {
        let f = factorize_u64(n).unwrap();
        let back: alphanum::exact_arith::Factorization = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn big_factorization(a in 2u64..1 << 40, b in 2u64..1 << 40) {
        let n = BigUint::from(a) * BigUint::from(b);
        prop_assert_eq!(factorize(&n).unwrap().product(), n);
    }

    #[test]
    fn reduced_ratio_is_coprime(a in 0u64..1 << 50, b in 1u64..1 << 50) {
        let r = reduce_ratio(&a.into(), &b.into()).unwrap();
        prop_assert!(r.den() >= &BigUint::from(1u32));
        prop_assert_eq!(r.num().gcd(r.den()), if a == 0 { r.den().clone() } else { BigUint::from(1u32) });
        prop_assert_eq!(r.num() * BigUint::from(b), r.den() * BigUint::from(a));
    }

    #[test]
    fn quaternion_exp_modulus(a in -10.0f64..10.0, b in -5.0f64..5.0, c in -5.0f64..5.0, d in -5.0f64..5.0) {
        let q = Quaternion::new(a, b, c, d);
        prop_assume!(q.norm() <= 10.0);
        let e = q.exp();
        prop_assert!(((e.norm() - a.exp()) / a.exp()).abs() < 1e-12);
    }

    #[test]
    fn complex_exponents_stay_complex(n in 1u64..100_000, re in -2.0f64..2.0, im in -3.0f64..3.0) {
        let v = sigma_general(&factorize_u64(n).unwrap(), Quaternion::complex(re, im), &Precision::default()).unwrap();
        prop_assert!(v.c.abs() <= 1e-12 * v.norm().max(1.0) && v.d.abs() <= 1e-12 * v.norm().max(1.0));
    }

    #[test]
    fn classification_bands(n in 1u64..10_000_000) {
        let c = classify_exact(&factorize_u64(n).unwrap(), &order11()).unwrap();
        let m = c.ratio.max_term().clone();
        let (omega, tau, n) = (BigUint::from(c.omega), c.tau.clone(), BigUint::from(n));
        let two = BigUint::from(2u32);
        match c.verdict {
            Verdict::Strong => prop_assert!(two <= m && m <= omega),
            Verdict::Weak => prop_assert!(two <= omega && omega < m && m <= tau),
            Verdict::VeryWeak => prop_assert!(two <= tau && tau < m && m < n),
            Verdict::NotAlpha => prop_assert!(
                !(two <= m && m <= omega) && !(two <= omega && omega < m && m <= tau)
                    && !(two <= tau && tau < m && m < n)
            ),
        }
    }

    #[test]
    fn partial_alpha_matches_ratio(n in 1u64..1_000_000) {
        let f = factorize_u64(n).unwrap();
        let a = partial_alpha(&f, &order11(), &Precision::default()).unwrap();
        let r = classify_exact(&f, &order11()).unwrap().ratio.to_f64();
        prop_assert!(a.is_real() && (a.a - r).abs() < 1e-12 * r);
    }

    #[test]
    fn chi_reason_invariant(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), e in 1u32..6, q in prop::sample::select(vec![17u64, 19, 23, 29, 31, 37]), g in 0u32..3) {
        let mut parts = vec![(p, e)];
        if g > 0 {
            parts.push((q, g));
        }
        let Ok(seed) = AlphaSeed::new(&parts, 10_000_000) else { return Ok(()) };
        let v = chi_alpha(&seed, 10_000_000);
        prop_assert_eq!(v.chi() == 0, v.reason() != PruneReason::Viable);
        prop_assert!(v.value >= BigUint::from(seed.value()));
    }
}

#[test]
fn prime_power_divisor_sums_exactly() {
    // σ(pᵉ) for the prime powers of the seed tables
    let cases = [
        (3u32, 7u32, 3280u64),
        (3, 6, 1093),
        (3, 5, 364),
        (3, 4, 121),
        (5, 5, 3906),
        (5, 4, 781),
        (7, 4, 2801),
        (7, 3, 400),
        (13, 3, 2380),
        (31, 2, 993),
    ];
    for (p, e, s) in cases {
        let f = factorize_u64(u64::from(p).pow(e)).unwrap();
        assert_eq!(sigma_k_exact(&f, 1), BigUint::from(s), "{p}^{e}");
    }
    assert_eq!(factorize_u64(3280).unwrap().to_string(), "2^4*5*41");
    assert_eq!(factorize_u64(3906).unwrap().to_string(), "2*3^2*7*31");
    assert_eq!(factorize_u64(2380).unwrap().to_string(), "2^2*5*7*17");
}

#[test]
fn totient_divisor_inequality() {
    let sieve = SieveTable::build(100_000).unwrap();
    for n in 3..=100_000u64 {
        let f = factorize_u64(n).unwrap();
        let phi = u64::try_from(&divisor_stats(&f).phi).unwrap();
        assert!((sieve.sigma1(n) as u128) * (phi as u128) < (n as u128) * (n as u128), "n={n}");
        assert!(ratio_bound_check(&f).unwrap().ok, "n={n}");
    }
}

#[test]
fn exact_and_rounded_agree_on_integers() {
    let prec = Precision::default();
    for n in 1..=10_000u64 {
        let f = factorize_u64(n).unwrap();
        let exact = classify_exact(&f, &order11()).unwrap();
        for mode in [RoundMode::Floor, RoundMode::Ceiling] {
            let r = classify_rounded(&f, &order11().floating(), mode, &prec).unwrap();
            assert!(!r.boundary_flag, "n={n}");
            assert_eq!((r.verdict, &r.ratio), (exact.verdict, &exact.ratio), "n={n}");
        }
    }
}

#[test]
fn general_sigma_tracks_exact() {
    let prec = Precision::default();
    for n in 1..=200u64 {
        let f = factorize_u64(n).unwrap();
        for k in 0..3u32 {
            let exact = sigma_k_exact(&f, k).to_string().parse::<f64>().unwrap();
            let v = sigma_general(&f, Quaternion::real(f64::from(k)), &prec).unwrap();
            assert!(((v.a - exact) / exact).abs() < 1e-10, "n={n} k={k}");
        }
    }
}

#[test]
fn band_exclusivity_and_enumeration_soundness() {
    let classes = [Verdict::Strong, Verdict::Weak, Verdict::VeryWeak];
    let records = enumerate_alpha(100_000, &order11(), &classes, Parity::All).unwrap();
    for r in &records {
        assert!(reverify(r).unwrap(), "{}", r.n);
        assert!(r.verdict().is_alpha());
    }
    // every n not listed classifies outside the requested classes
    let listed: std::collections::BTreeSet<u64> =
        records.iter().map(|r| u64::try_from(&r.n).unwrap()).collect();
    let mut checked = 0;
    for n in (1..=100_000u64).step_by(97) {
        if !listed.contains(&n) {
            let v = classify_exact(&factorize_u64(n).unwrap(), &order11()).unwrap().verdict;
            assert_eq!(v, Verdict::NotAlpha, "n={n}");
            checked += 1;
        }
    }
    assert!(checked >= 300);
}

#[test]
fn enumeration_is_deterministic() {
    let prec = Precision::default();
    let run = || {
        let recs = enumerate_alpha_with(
            30_000,
            &order11(),
            Variant::Exact,
            &prec,
            &[Verdict::Strong, Verdict::Weak],
            Parity::All,
        )
        .unwrap();
        serde_json::to_vec(&recs).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn seed_search_matches_sieve() {
    for b in [1_000u64, 10_000, 100_000] {
        let seed = seed_search_odd(b).unwrap();
        let sieve = enumerate_alpha(b, &order11(), &[Verdict::Strong], Parity::Odd).unwrap();
        assert_eq!(seed, sieve, "bound {b}");
    }
}

#[test]
fn weak_odd_below_a_million() {
    let recs = enumerate_alpha(1_000_000, &order11(), &[Verdict::Weak], Parity::Odd).unwrap();
    let ns: Vec<String> = recs.iter().map(|r| r.n.to_string()).collect();
    assert_eq!(ns, ["544635", "931095"]);
}
