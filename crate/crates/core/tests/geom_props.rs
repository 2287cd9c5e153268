mod common;

use common::*;
use goodred::arith::{to_padic, PrimeContext, Rational};
use goodred::geom::{
    chart_of, check_move_to_chart, conjugate, count_hyperplanes, count_hyperplanes_through_point, move_to_chart,
    reduce_morphism, reduce_point, taylor_expand, Morphism, PGLMatrix, ProjPointQ,
};
use goodred::orbits::period_mod_p;
use goodred::reduction::has_good_reduction;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn good(phi: &Morphism, p: u64) -> bool {
    has_good_reduction(phi, p).unwrap().is_good()
}

fn random_point(rng: &mut impl Rng, n: usize, h: i64) -> ProjPointQ {
    loop {
        let c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-h..=h)).collect();
        if let Ok(p) = ProjPointQ::from_ints(&c) {
            return p;
        }
    }
}

proptest! {
    #[test]
    fn reduction_ignores_unit_scalars(
        a in -50i64..50, b in -50i64..50, c in 1i64..50,
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        scalars in prop::collection::vec((1i64..1000, 1i64..1000), 50),
    ) {
        prop_assume!(a != 0 || b != 0);
        let field = prime_field(p);
        let point = ProjPointQ::new(vec![Rational::new(a.into(), c.into()), Rational::from_integer(b.into())]).unwrap();
        let base = reduce_point(&point, &field);
        for (u, v) in scalars {
            let (u, v) = (u * p as i64 + 1, v * p as i64 - 1);
            let lambda = Rational::new(u.into(), v.into());
            let scaled = ProjPointQ::new(point.coords().iter().map(|x| x * &lambda).collect()).unwrap();
            prop_assert_eq!(reduce_point(&scaled, &field), base.clone());
        }
    }

    #[test]
    fn hyperplane_identity(q in prop::sample::select(vec![2u64, 3, 4, 5, 7]), n in 1usize..=4) {
        prop_assert_eq!(count_hyperplanes(q, n) - count_hyperplanes_through_point(q, n), (q as u128).pow(n as u32));
    }
}

#[test]
fn reduction_commutes_with_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut cases = 0;
    while cases < 100 {
        let n = rng.gen_range(1..=2usize);
        // degree-2 heights double every step, so the long orbits use degree 1
        let (d, s_max) = if rng.gen_bool(0.5) { (1, 20) } else { (2, if n == 1 { 12 } else { 9 }) };
        let phi = random_morphism(&mut rng, n, d, 4);
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        if !good(&phi, p) {
            continue;
        }
        let point = random_point(&mut rng, n, 6);
        let s = rng.gen_range(0..=s_max);
        let field = prime_field(p);
        let red = reduce_morphism(&phi, &field);
        let exact = reduce_point(&phi.iterate(&point, s).unwrap(), &field);
        assert_eq!(exact, red.iterate(&reduce_point(&point, &field), s).unwrap(), "{phi} at {point}, p={p}, s={s}");
        cases += 1;
    }
}

#[test]
fn reduction_commutes_with_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut cases = 0;
    while cases < 60 {
        let n = rng.gen_range(1..=2usize);
        let d = rng.gen_range(1..=2);
        let phi = random_morphism(&mut rng, n, d, 4);
        let d = rng.gen_range(1..=2);
        let psi = random_morphism(&mut rng, n, d, 4);
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        if !good(&phi, p) || !good(&psi, p) {
            continue;
        }
        let field = prime_field(p);
        let lhs = reduce_morphism(&phi.compose(&psi), &field);
        let rhs = reduce_morphism(&phi, &field).compose(&reduce_morphism(&psi, &field));
        assert_eq!(lhs, rhs, "{phi} o {psi} at p={p}");
        cases += 1;
    }
}

fn random_pgl(rng: &mut impl Rng, size: usize, p: u64) -> PGLMatrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..size)
            .map(|_| {
                (0..size)
                    .map(|_| {
                        let den = rng.gen_range(1..4i64) * p as i64 + 1;
                        Rational::new(rng.gen_range(-5..=5i64).into(), den.into())
                    })
                    .collect()
            })
            .collect();
        if let Ok(g) = PGLMatrix::new(rows, p) {
            return g;
        }
    }
}

#[test]
fn conjugation_preserves_periods() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (phi, coords) in rational_periodic_corpus() {
        let n = brute_period(&phi, &coords, 10).unwrap();
        let point = pt(&coords);
        for p in [3u64, 5, 7] {
            if !good(&phi, p) {
                continue;
            }
            let g = random_pgl(&mut rng, 2, p);
            let conj = conjugate(&phi, &g).unwrap();
            assert!(good(&conj, p));
            let moved = g.apply_inverse(&point);
            assert_eq!(conj.iterate(&moved, n).unwrap(), moved);
            for s in 1..n {
                assert_ne!(conj.iterate(&moved, s).unwrap(), moved);
            }
            assert_eq!(period_mod_p(&conj, &moved, p).unwrap(), period_mod_p(&phi, &point, p).unwrap());
        }
    }
}

#[test]
fn move_to_chart_postcondition() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for case in 0..100 {
        let n = if case % 2 == 0 { 2 } else { 1 };
        let p = [2u64, 3][rng.gen_range(0..2)];
        let base: Vec<i64> = loop {
            let c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-9..=9)).collect();
            if c.iter().any(|x| x % p as i64 != 0) {
                break c;
            }
        };
        let size = rng.gen_range(1..=4);
        let points: Vec<ProjPointQ> = (0..size)
            .map(|i| {
                if i == 0 {
                    return pt(&base);
                }
                let u = rng.gen_range(1..4) * p as i64 + 1;
                pt(&base.iter().map(|b| b * u + p as i64 * rng.gen_range(-5..=5)).collect::<Vec<_>>())
            })
            .collect();
        let g = move_to_chart(&points, p).unwrap();
        assert!(check_move_to_chart(&points, &g), "points {points:?} at p={p}");
    }
}

#[test]
fn taylor_matches_exact_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut cases = 0;
    while cases < 40 {
        let n = rng.gen_range(1..=2usize);
        let phi = random_morphism(&mut rng, n, 2, 3);
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        if !good(&phi, p) {
            continue;
        }
        let field = prime_field(p);
        let point = random_point(&mut rng, n, 5);
        let bar = reduce_point(&point, &field);
        if reduce_morphism(&phi, &field).eval(&bar).unwrap() != bar {
            continue;
        }
        let chart = chart_of(&bar);
        let (k, order) = (rng.gen_range(2..=6u32), rng.gen_range(1..=4u32));
        let ctx = PrimeContext::new(p, k).unwrap();
        let series = taylor_expand(&phi, &point, chart, &ctx, order).unwrap();
        let check_prec = k.min(order + 1);
        let check_ctx = PrimeContext::new(p, check_prec).unwrap();
        let lead = &point.coords()[chart];
        let affine: Vec<Rational> =
            (0..=n).filter(|&j| j != chart).map(|j| &point.coords()[j] / lead).collect();
        let map = phi.dehomogenize(chart);
        for _ in 0..10 {
            let t: Vec<Rational> =
                (0..n).map(|_| Rational::from_integer(BigInt::from(p as i64 * rng.gen_range(-20..=20)))).collect();
            let t_padic: Vec<_> = t.iter().map(|x| to_padic(x, &ctx).unwrap()).collect();
            let approx = series.eval(&t_padic);
            let arg: Vec<Rational> = affine.iter().zip(&t).map(|(a, b)| a + b).collect();
            let exact = map.eval(&arg).expect("denominator is a unit");
            for i in 0..n {
                let want = to_padic(&(&exact[i] - &affine[i]), &check_ctx).unwrap();
                let got = approx[i].truncate(check_prec).unwrap();
                assert_eq!(got, want, "{phi} at {point}, p={p}, K={k}, order={order}");
            }
        }
        cases += 1;
    }
}

#[test]
fn hyperplane_counts_are_geometric_sums() {
    for q in [2u64, 3, 4, 5, 7] {
        for n in 1..=4usize {
            let direct: u128 = (0..=n as u32).map(|i| (q as u128).pow(i)).sum();
            assert_eq!(count_hyperplanes(q, n), direct);
            assert_eq!(count_hyperplanes_through_point(q, n) * q as u128 + 1, direct);
        }
    }
}
