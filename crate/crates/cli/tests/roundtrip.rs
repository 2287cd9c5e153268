use goodred::arith::Rational;
use goodred::geom::{HomogPoly, Morphism, Poly};
use goodred_cli::{parse_morphism, parse_point, render};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .rev()
        .flat_map(|e| {
            monomials(nvars - 1, d - e).into_iter().map(move |mut rest| {
                rest.insert(0, e);
                rest
            })
        })
        .collect()
}

fn random_morphism(rng: &mut ChaCha8Rng) -> Morphism {
    let n = rng.gen_range(1..=3usize);
    let d = rng.gen_range(1..=3u32);
    loop {
        let comps: Vec<HomogPoly<Rational>> = (0..=n)
            .map(|i| {
                let terms = monomials(n + 1, d).into_iter().filter_map(|m| {
                    let forced = m[i] == d;
                    if !forced && rng.gen_bool(0.6) {
                        return None;
                    }
                    let num = rng.gen_range(-30i64..=30);
                    let num = if forced && num == 0 { 1 } else { num };
                    Some((m, Rational::new(num.into(), rng.gen_range(1i64..=12).into())))
                });
                HomogPoly::new(d, Poly::from_terms(n + 1, terms.collect::<Vec<_>>())).unwrap()
            })
            .collect();
        if let Ok(phi) = Morphism::new(comps) {
            return phi;
        }
    }
}

#[test]
fn render_then_parse_is_the_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for _ in 0..100 {
        let phi = random_morphism(&mut rng);
        let text = render(&phi);
        assert_eq!(parse_morphism(&text).unwrap(), phi, "{text}");
    }
}

proptest! {
    #[test]
    fn points_round_trip(coords in prop::collection::vec((-1000i64..1000, 1i64..50), 2..5)) {
        prop_assume!(coords.iter().any(|c| c.0 != 0));
        let text = coords.iter().map(|(a, b)| format!("{a}/{b}")).collect::<Vec<_>>().join(",");
        let bracketed = format!("[{}]", text.replace(',', ":"));
        prop_assert_eq!(parse_point(&text).unwrap(), parse_point(&bracketed).unwrap());
        let p = parse_point(&text).unwrap();
        prop_assert_eq!(parse_point(&p.to_string()).unwrap(), p);
    }
}
