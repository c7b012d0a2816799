mod common;

use common::{random_order, random_series};
use germsum_core::json::{series_from_json, series_to_json};
use germsum_core::{Error, Exponent, PolyRadius, Scalar, TruncatedSeries, EXACT};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn trunc_of(rng: &mut ChaCha8Rng) -> i64 {
    if rng.gen_bool(0.25) {
        EXACT
    } else {
        rng.gen_range(0..=8)
    }
}

fn triple(seed: u64) -> (TruncatedSeries, TruncatedSeries, TruncatedSeries) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.gen_range(1..=3);
    let mut next = || {
        let t = trunc_of(&mut rng);
        random_series(&mut rng, dim, t, 6, 6)
    };
    (next(), next(), next())
}

fn no_constant(s: &TruncatedSeries) -> TruncatedSeries {
    s.map_terms(|e, c| (e.degree() > 0).then(|| (e.clone(), c.clone())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let (a, b, c) = triple(seed);
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn sharp_product_refines_plain_product(seed in any::<u64>()) {
        let (a, b, _) = triple(seed);
        let plain = a.mul(&b).unwrap();
        let sharp = a.mul_sharp(&b).unwrap();
        prop_assert!(sharp.trunc() >= plain.trunc());
        prop_assert!(sharp.agrees(&plain));
    }

    #[test]
    fn substitution_is_a_ring_map(seed in any::<u64>()) {
        let (a, b, _) = triple(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(17));
        let out_dim = rng.gen_range(1..=3);
        let images: Vec<TruncatedSeries> = (0..a.dim())
            .map(|_| {
                let t = trunc_of(&mut rng);
                no_constant(&random_series(&mut rng, out_dim, t, 3, 3))
            })
            .collect();
        let sa = a.substitute(&images).unwrap();
        let sb = b.substitute(&images).unwrap();
        let prod = a.mul(&b).unwrap().substitute(&images).unwrap();
        let sum = a.add(&b).unwrap().substitute(&images).unwrap();
        prop_assert!(prod.agrees(&sa.mul(&sb).unwrap()));
        prop_assert!(sum.agrees(&sa.add(&sb).unwrap()));
    }

    #[test]
    fn valuation_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.gen_range(1..=3);
        let ord = random_order(&mut rng, dim);
        let a = random_series(&mut rng, dim, EXACT, 6, 6);
        let b = random_series(&mut rng, dim, EXACT, 6, 6);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let v = a.mul(&b).unwrap().v_ell(&ord).unwrap();
        prop_assert_eq!(v, a.v_ell(&ord).unwrap().add(&b.v_ell(&ord).unwrap()));
    }

    #[test]
    fn majorant_norm_is_submultiplicative(seed in any::<u64>(), rho in 0.05f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.gen_range(1..=3);
        let a = random_series(&mut rng, dim, EXACT, 6, 6);
        let b = random_series(&mut rng, dim, EXACT, 6, 6);
        let r = PolyRadius::new(rho).unwrap();
        let slack = 1.0 + 1e-12;
        let na = a.majorant_norm(r);
        let nb = b.majorant_norm(r);
        prop_assert!(a.add(&b).unwrap().majorant_norm(r) <= (na + nb) * slack);
        prop_assert!(a.mul(&b).unwrap().majorant_norm(r) <= na * nb * slack);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let (a, _, _) = triple(seed);
        let v = series_to_json(&a);
        let text = serde_json::to_string(&v).unwrap();
        let back = series_from_json(&serde_json::from_str(&text).unwrap(), 128, "$").unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn float_series_round_trip_through_json() {
    let terms = [
        (Exponent::new(vec![0, 1]), Scalar::from_f64(0.1, -2.5, 128)),
        (Exponent::new(vec![3, 0]), Scalar::from_f64(1e-30, 0.0, 128)),
    ];
    let s = TruncatedSeries::from_terms(2, 5, terms).unwrap();
    let text = serde_json::to_string(&series_to_json(&s)).unwrap();
    let back = series_from_json(&serde_json::from_str(&text).unwrap(), 128, "$").unwrap();
    assert_eq!(back, s);
}

#[test]
fn exact_truncation_serializes_as_null() {
    let s = TruncatedSeries::poly(2, &[(&[1, 1], 1)]);
    assert!(series_to_json(&s)["trunc"].is_null());
    assert_eq!(series_to_json(&s.with_trunc(4))["trunc"], 4);
}

#[test]
fn malformed_json_names_the_path() {
    let v = serde_json::json!({"dim": 2, "trunc": 3, "terms": [{"exp": [1], "coeff": "1"}]});
    match series_from_json(&v, 128, "$") {
        Err(Error::Parse(msg)) => assert!(msg.contains("$.terms[0]"), "{msg}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn constant_term_substitution_needs_exact_input() {
    let f = TruncatedSeries::poly(1, &[(&[2], 1)]);
    let shift = TruncatedSeries::poly(1, &[(&[0], 1), (&[1], 1)]);
    // (1 + x)² exactly
    assert_eq!(
        f.substitute(&[shift.clone()]).unwrap(),
        TruncatedSeries::poly(1, &[(&[0], 1), (&[1], 2), (&[2], 1)])
    );
    assert!(matches!(
        f.with_trunc(3).substitute(&[shift]),
        Err(Error::InsufficientTruncation(_))
    ));
}

#[test]
fn derivative_lowers_truncation() {
    let f = TruncatedSeries::poly(2, &[(&[3, 1], 2), (&[0, 2], 1)]).with_trunc(6);
    let d = f.derivative(0);
    assert_eq!(d, TruncatedSeries::poly(2, &[(&[2, 1], 6)]).with_trunc(5));
}
