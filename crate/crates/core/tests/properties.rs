use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selmer_core::descent::{classify, normalize, psi_bounds, psihat_bounds, root_number};
use selmer_core::intbase::{factorize, kronecker};
use selmer_core::table::bundled_rows;
use selmer_core::{analyze, Error};

#[test]
fn s_sets_disjoint_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = 0;
    while seen < 1000 {
        let a = rng.gen_range(-100_000i64..100_000);
        let b = rng.gen_range(-100_000i64..100_000);
        let Ok(params) = normalize(a, b) else {
            continue;
        };
        let s = classify(&params).unwrap();
        assert!(s.is_disjoint(), "({a}, {b})");
        seen += 1;
    }
}

#[test]
fn normalization_invariance() {
    for (a, b) in [(79, 131), (137, 143), (2230, 48), (29, 76), (142, 12)] {
        let base = analyze(a, b, None).unwrap();
        for c in [2, 5, 6] {
            let scaled = analyze(a * c * c, b * c * c, None).unwrap();
            assert_eq!(scaled, base, "({a}, {b}) scaled by {c}^2");
        }
    }
}

#[test]
fn degenerate_curves_rejected() {
    for (a, b) in [(1, 0), (0, 5), (27, -4)] {
        assert!(matches!(analyze(a, b, None), Err(Error::DegenerateCurve { .. })));
    }
}

#[test]
fn reports_fit_the_exact_relation() {
    for row in bundled_rows() {
        let r = analyze(row.a, row.b, Some(row.r)).unwrap();
        let x = r.bound_inputs();
        let k = x.s3 as i64 - x.s2 as i64 - 1;
        let (psi, _) = psi_bounds(&x);
        let hat = psihat_bounds(&x);
        assert!(psi.upper as i64 - hat.lower as i64 >= k, "({}, {})", row.a, row.b);
        assert!(k >= psi.lower as i64 - hat.upper as i64, "({}, {})", row.a, row.b);
        assert!(r.psi_lower <= r.psi_upper && r.sel3_lower <= r.sel3_upper);
        let expected = if (x.s2 + x.s3 + 1) % 2 == 0 { 1 } else { -1 };
        assert_eq!(root_number(&x), Some(expected));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn kronecker_is_multiplicative(a in -2000i64..2000, b in -2000i64..2000, n in 1i64..500) {
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
    }

    #[test]
    fn factorization_round_trips(n in prop::num::i64::ANY.prop_filter("nonzero", |n| *n != 0 && *n != i64::MIN)) {
        let f = factorize(n).unwrap();
        let prod: i128 = f.factors.iter().map(|&(p, e)| (p as i128).pow(e)).product();
        prop_assert_eq!(prod * f.sign() as i128, n as i128);
    }
}
