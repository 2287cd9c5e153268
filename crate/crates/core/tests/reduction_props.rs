mod common;

use common::*;
use goodred::arith::{FqField, Rational, Ring};
use goodred::geom::{reduce_morphism, HomogPoly, Morphism, Poly, ProjPointFq, ReducedMorphism};
use goodred::reduction::{
    composition_experiment, has_good_reduction, search_common_zero, Certificate, SearchOptions, Verdict,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn binary_form(d: u32, coeffs: &[i64]) -> HomogPoly<Rational> {
    let terms = (0..=d)
        .zip(coeffs)
        .filter(|(_, c)| **c != 0)
        .map(|(i, c)| (vec![d - i, i], Rational::from_integer((*c).into())));
    HomogPoly::new(d, Poly::from_terms(2, terms)).unwrap()
}

fn p1_map() -> impl Strategy<Value = Morphism> {
    (1u32..=3)
        .prop_flat_map(|d| {
            let n = d as usize + 1;
            (Just(d), prop::collection::vec(-3i64..=3, n), prop::collection::vec(-3i64..=3, n))
        })
        .prop_filter_map("not a morphism", |(d, a, b)| Morphism::new(vec![binary_form(d, &a), binary_form(d, &b)]).ok())
}

/// Every point of `P^N(F_{p^j})`, checked one by one.
fn zero_by_enumeration(red: &ReducedMorphism, j: u32) -> Option<ProjPointFq> {
    let field = FqField::new(red.field().characteristic(), j).unwrap();
    let lifted = red.over_field(&field).unwrap();
    let found = ProjPointFq::all(&field, red.dim()).find(|pt| lifted.eval_coords(pt.coords()).iter().all(Ring::is_zero));
    found
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn resultant_agrees_with_extension_search(phi in p1_map(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let report = has_good_reduction(&phi, p).unwrap();
        let red = reduce_morphism(&phi, &FqField::prime(p).unwrap());
        let found = (1..=phi.degree()).any(|j| zero_by_enumeration(&red, j).is_some());
        prop_assert_eq!(report.verdict == Verdict::Bad, found, "{} at p={}", phi, p);
        prop_assert_ne!(report.verdict, Verdict::Unknown);
        if let Some((j, point)) = report.witness() {
            let lifted = red.over_field(point.field()).unwrap();
            prop_assert!(lifted.eval_coords(point.coords()).iter().all(Ring::is_zero));
            prop_assert!(j <= phi.degree());
        }
    }
}

#[test]
fn restricted_gcd_search_matches_enumeration_on_the_plane() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut bad_seen = 0;
    for case in 0..150 {
        let p = [2u64, 3][case % 2];
        let field = FqField::prime(p).unwrap();
        // random reduced quadrics, often with a common zero
        let comps: Vec<HomogPoly<_>> = (0..3)
            .map(|_| {
                let mut terms = Vec::new();
                for m in monomials(3, 2) {
                    if rng.gen_bool(0.5) {
                        terms.push((m, goodred::arith::FqElem::from_i64(&field, rng.gen_range(0..p as i64))));
                    }
                }
                HomogPoly::new(2, Poly::from_terms(3, terms)).unwrap()
            })
            .collect();
        if comps.iter().any(|c| c.is_zero()) {
            continue;
        }
        let red = ReducedMorphism::new(&field, comps).unwrap();
        for j in 1..=2 {
            let opts = SearchOptions { budget: 1_000_000, parallel: case % 3 == 0 };
            let cert = search_common_zero(&red, j, &opts).unwrap();
            let brute = (1..=j).find(|&i| zero_by_enumeration(&red, i).is_some());
            match cert {
                Certificate::Witness { degree, point } => {
                    assert_eq!(Some(degree), brute, "{red}");
                    let lifted = red.over_field(point.field()).unwrap();
                    assert!(lifted.eval_coords(point.coords()).iter().all(Ring::is_zero));
                    bad_seen += 1;
                }
                Certificate::ExhaustiveSearch { .. } => assert_eq!(brute, None, "{red}"),
                other => panic!("unexpected certificate {other:?}"),
            }
        }
    }
    assert!(bad_seen > 20);
}

#[test]
fn good_reduction_makes_every_orbit_defined() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut checked = 0;
    while checked < 40 {
        let n = rng.gen_range(1..=2usize);
        let phi = random_morphism(&mut rng, n, 2, 4);
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let report = has_good_reduction(&phi, p).unwrap();
        let field = FqField::prime(p).unwrap();
        let red = reduce_morphism(&phi, &field);
        let all_defined = ProjPointFq::all(&field, n).all(|x| red.eval(&x).is_ok());
        match report.verdict {
            Verdict::Good => assert!(all_defined, "{phi} at {p}"),
            Verdict::Bad => {
                let (j, w) = report.witness().expect("bad verdicts carry a witness");
                let lifted = red.over_field(w.field()).unwrap();
                assert!(lifted.eval_coords(w.coords()).iter().all(Ring::is_zero));
                if j == 1 {
                    assert!(!all_defined);
                }
            }
            Verdict::Unknown => panic!("small primes are always decided"),
        }
        checked += 1;
    }
}

#[test]
fn good_reduction_survives_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let (mut both_good, mut bad_factor) = (0, 0);
    for case in 0..120 {
        let p = [2u64, 3, 5][case % 3];
        // on the plane keep D^N small enough for the search to decide
        let (n, outer, inner) = if case % 2 == 0 { (1, 2, rng.gen_range(1..=2)) } else { (2, 2, 1) };
        let phi = random_morphism(&mut rng, n, outer, 3);
        let psi = random_morphism(&mut rng, n, inner, 3);
        let exp = composition_experiment(&phi, &psi, p, &SearchOptions::default()).unwrap();
        assert!(!exp.is_counterexample(), "{phi} after {psi} at {p}");
        if exp.outer.is_good() && exp.inner.is_good() {
            assert_eq!(exp.composite.verdict, Verdict::Good);
            assert!(exp.reductions_commute, "{phi} after {psi} at {p}");
            both_good += 1;
        } else {
            bad_factor += 1;
        }
    }
    assert!(both_good > 20 && bad_factor > 5, "{both_good} good pairs, {bad_factor} with a bad factor");
}
