use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use qmrat::symbols::arith::{factor, is_rational_square, rat};
use qmrat::symbols::{
    conic_point, conic_point_with, cubic_symbol, hilbert_local, hilbert_q, hilbert_quadext, product_formula,
    ConicSearch, Place, SearchOrder, Tri,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f2(t: &Tri) -> u8 {
    match t {
        Tri::Zero => 0,
        Tri::NonZero => 1,
        Tri::Undecided(_) => panic!("degree-2 symbols are never undecided"),
    }
}

#[test]
fn hilbert_agrees_with_conic_search() {
    for a in -30i64..=30 {
        for b in -30i64..=30 {
            if a == 0 || b == 0 {
                continue;
            }
            let h = hilbert_q(&rat(a), &rat(b)).unwrap();
            let pt = conic_point(&rat(a), &rat(b), true);
            assert_eq!(h == Tri::Zero, pt.is_some(), "({a}, {b})");
            if let Some(p) = pt {
                assert!(p.satisfies(&rat(a), &rat(b)));
            }
        }
    }
}

#[test]
fn product_formula_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let a = loop {
            let v: i64 = rng.gen_range(-10_000..=10_000);
            if v != 0 {
                break v;
            }
        };
        let b = loop {
            let v: i64 = rng.gen_range(-10_000..=10_000);
            if v != 0 {
                break v;
            }
        };
        assert_eq!(product_formula(&rat(a), &rat(b)), 1, "({a}, {b})");
    }
}

#[test]
fn spectator_primes_are_trivial() {
    for p in [3i64, 5, 7, 11, 13] {
        assert_eq!(hilbert_local(&rat(2), &rat(-1), &Place::Prime(BigInt::from(p))), 1);
    }
}

#[test]
fn steinberg_relations() {
    for a in -50i64..=50 {
        if a == 0 {
            continue;
        }
        assert_eq!(hilbert_q(&rat(a), &rat(-a)).unwrap(), Tri::Zero, "(a,-a) a={a}");
        if a != 1 {
            assert_eq!(hilbert_q(&rat(a), &rat(1 - a)).unwrap(), Tri::Zero, "(a,1-a) a={a}");
        }
    }
}

// Zero/NonZero is not a group homomorphism globally (Br(Q)[2] is large), so
// multiplicativity is checked place by place, plus the global consequence
// when one factor vanishes.
#[test]
fn bimultiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nz = || loop {
        let v: i64 = rng.gen_range(-500..=500);
        if v != 0 {
            break v;
        }
    };
    let places = |n: &[i64]| {
        let mut ps: Vec<Place> = vec![Place::Infinity, Place::Prime(BigInt::from(2))];
        for &k in n {
            for (p, _) in factor(&BigInt::from(k)) {
                ps.push(Place::Prime(p));
            }
        }
        ps
    };
    for _ in 0..300 {
        let (a, b1, b2) = (nz(), nz(), nz());
        for v in places(&[a, b1, b2]) {
            let lhs = hilbert_local(&rat(a), &rat(b1 * b2), &v);
            let rhs = hilbert_local(&rat(a), &rat(b1), &v) * hilbert_local(&rat(a), &rat(b2), &v);
            assert_eq!(lhs, rhs, "({a}, {b1}*{b2}) at {v}");
        }
        let h1 = f2(&hilbert_q(&rat(a), &rat(b1)).unwrap());
        let h2 = f2(&hilbert_q(&rat(a), &rat(b2)).unwrap());
        let h12 = f2(&hilbert_q(&rat(a), &rat(b1 * b2)).unwrap());
        if h1 == 0 || h2 == 0 {
            assert_eq!(h12, h1 ^ h2, "({a}, {b1}*{b2})");
        }
    }
}

#[test]
fn rational_arguments_reduce_to_square_classes() {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    assert_eq!(hilbert_q(&q(3, 4), &q(-7, 5)).unwrap(), hilbert_q(&rat(3), &rat(-35)).unwrap());
    assert_eq!(hilbert_q(&q(-1, 9), &q(-1, 2)).unwrap(), hilbert_q(&rat(-1), &rat(-2)).unwrap());
    let p = conic_point(&q(3, 4), &q(-7, 5), true);
    assert_eq!(p.is_some(), hilbert_q(&q(3, 4), &q(-7, 5)).unwrap() == Tri::Zero);
}

#[test]
fn quadext_over_square_matches_q() {
    for a in [-7i64, -1, 2, 3, 5, 6] {
        for b in [-5i64, -3, -1, 7, 11] {
            for m in [1i64, 4, 9, 25] {
                assert_eq!(
                    hilbert_quadext(&rat(a), &rat(b), &rat(m)).unwrap(),
                    hilbert_q(&rat(a), &rat(b)).unwrap()
                );
            }
        }
    }
}

// Ramification sets worked by hand: (-1,-1) at {2, inf}, (2,5) at {2, 5}.
#[test]
fn quadext_vanishes_when_a_point_exists_over_the_extension() {
    // (-1, -1) over Q(√-1): x = i gives x² + y² + z² = 0 with (i, 1, 0).
    assert_eq!(hilbert_quadext(&rat(-1), &rat(-1), &rat(-1)).unwrap(), Tri::Zero);
    // (-1, -1) over Q(√-7): -7 ≡ 1 mod 8 so 2 splits.
    assert_eq!(hilbert_quadext(&rat(-1), &rat(-1), &rat(-7)).unwrap(), Tri::NonZero);
    // (-1, -1) over Q(√-2): neither 2 nor ∞ splits.
    assert_eq!(hilbert_quadext(&rat(-1), &rat(-1), &rat(-2)).unwrap(), Tri::Zero);
    // Q(√3): 5 inert, 2 ramified.
    assert_eq!(hilbert_q(&rat(2), &rat(5)).unwrap(), Tri::NonZero);
    assert_eq!(hilbert_quadext(&rat(2), &rat(5), &rat(3)).unwrap(), Tri::Zero);
    // Q(√11): 5 splits since 11 ≡ 1 mod 5.
    assert_eq!(hilbert_quadext(&rat(2), &rat(5), &rat(11)).unwrap(), Tri::NonZero);
}

#[test]
fn search_orders_give_valid_points() {
    for a in [2i64, -7, 13, 17] {
        for b in [-1i64, 7, -23, 2] {
            if hilbert_q(&rat(a), &rat(b)).unwrap() != Tri::Zero {
                continue;
            }
            for order in [SearchOrder::Forward, SearchOrder::Reverse, SearchOrder::Shuffled(9)] {
                let p = conic_point_with(&rat(a), &rat(b), ConicSearch { order, honor_holzer: true }).unwrap();
                assert!(p.satisfies(&rat(a), &rat(b)));
            }
        }
    }
}

#[test]
fn cubic_refinement_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let a: i64 = rng.gen_range(2..40);
        let c: i64 = rng.gen_range(-40..40);
        if c == 0 {
            continue;
        }
        let mut decided: Option<Tri> = None;
        for bound in [0i64, 1, 2, 4, 8] {
            let t = cubic_symbol(&rat(a), &rat(c), bound);
            if matches!(t, Tri::Undecided(_)) {
                assert!(decided.is_none(), "decided value lost at bound {bound} for ({a},{c})");
                continue;
            }
            if let Some(d) = &decided {
                assert_eq!(d, &t, "({a},{c}) flipped at bound {bound}");
            }
            decided = Some(t);
        }
    }
}

#[test]
fn factor_round_trip() {
    for n in [2i64, 97, 360, 1001, 65_536, 999_983 * 7] {
        let prod = factor(&BigInt::from(n))
            .into_iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p, e as usize));
        assert_eq!(prod, BigInt::from(n));
    }
    assert!(is_rational_square(&BigRational::new(9.into(), 49.into())));
    assert!(!is_rational_square(&rat(-4)));
}

proptest! {
    #[test]
    fn square_class_invariance(a in -200i64..200, b in -200i64..200, t in 1i64..30) {
        prop_assume!(a != 0 && b != 0);
        prop_assert_eq!(
            hilbert_q(&rat(a * t * t), &rat(b)).unwrap(),
            hilbert_q(&rat(a), &rat(b)).unwrap()
        );
    }

    #[test]
    fn symmetric(a in -300i64..300, b in -300i64..300) {
        prop_assume!(a != 0 && b != 0);
        prop_assert_eq!(hilbert_q(&rat(a), &rat(b)).unwrap(), hilbert_q(&rat(b), &rat(a)).unwrap());
    }
}
