use num_rational::BigRational;
use qmrat::decider::{
    certificate_for, clause_row, decide, decide_dim1, decide_with, normalize, Certificate, DecideOptions, FieldData,
    Instance, Outcome,
};
use qmrat::glz::{normal_subgroup_table, ConjugacyLabel};
use qmrat::symbols::arith::{is_rational_square, rat};
use qmrat::symbols::{ConicSearch, QOmega, SearchOrder, Tri};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ConjugacyLabel::*;

fn inst(label: ConjugacyLabel, h: &str, params: &[(&str, i64)]) -> Instance {
    params.iter().fold(Instance::new(label, h).unwrap(), |i, (k, v)| i.param_int(k, *v))
}

fn nz(rng: &mut ChaCha8Rng, r: i64) -> i64 {
    loop {
        let v = rng.gen_range(-r..=r);
        if v != 0 {
            return v;
        }
    }
}

fn nonsquare(rng: &mut ChaCha8Rng, r: i64) -> i64 {
    loop {
        let v = nz(rng, r);
        if !is_rational_square(&rat(v)) {
            return v;
        }
    }
}

#[test]
fn spot_suite() {
    let v = decide(&inst(C2_2, "1", &[("a", -1), ("b", -1)])).unwrap();
    assert_eq!(v.outcome, Outcome::NotRational);
    assert_eq!(v.obstructions()[0].query.to_string(), "(-1, -1)_{2,Q}");
    for b in [1, 5, -3] {
        assert_eq!(decide(&inst(C2_3, "1", &[("a", 3), ("b", b)])).unwrap().outcome, Outcome::Rational);
    }
    let v = decide(&inst(C4, "sigma^2", &[("a", 2), ("c", 1)])).unwrap();
    assert_eq!(v.outcome, Outcome::Rational);
    assert!(v.symbols.iter().all(|s| s.value == Tri::Zero) && v.symbols.len() == 2);
    for h in ["1", "rho^3", "rho^2"] {
        assert_eq!(decide(&inst(C6, h, &[("b", 2), ("c", 3)])).unwrap().outcome, Outcome::Rational);
    }
    let d6 = normal_subgroup_table(D6);
    for (k, (h, _)) in d6.iter().enumerate() {
        let i = inst(D6, h, &[("b", 2), ("c", 1), ("d", 2), ("e", 1)]);
        // b/d = 1 and c*d = 2 violate c = 1/b^2 after absorption; G = H needs no relation
        assert_eq!(decide(&i).is_err(), k + 1 < d6.len(), "{h}");
        let i = inst(D6, h, &[("b", 6), ("c", 1), ("d", 3)]).param("e", BigRational::new(1.into(), 3.into()));
        let n = normalize(&i);
        assert_eq!(n.params["c"], rat(3));
        let i = inst(D6, h, &[("b", 6), ("d", 3)])
            .param("c", BigRational::new(1.into(), 12.into()))
            .param("e", BigRational::new(1.into(), 3.into()));
        assert_eq!(decide(&i).unwrap().outcome, Outcome::Rational, "{h}");
    }
    assert_eq!(decide_dim1(&rat(2), &rat(-1)).unwrap().outcome, Outcome::Rational);
    assert_eq!(decide_dim1(&rat(-1), &rat(-1)).unwrap().outcome, Outcome::NotRational);
    assert_eq!(decide_dim1(&rat(4), &rat(-7)).unwrap().outcome, Outcome::Rational);
}

#[test]
fn dispatch_is_total() {
    let mut rows = 0;
    for label in ConjugacyLabel::ALL {
        for (h, _) in normal_subgroup_table(label) {
            for e in [1i8, -1] {
                for e1 in [1i8, -1] {
                    for e2 in [1i8, -1] {
                        assert!(clause_row(label, h, e, e1, e2).is_some(), "{} {h}", label.as_str());
                        rows += 1;
                    }
                }
            }
            let last = normal_subgroup_table(label).last().unwrap().0;
            assert_eq!(clause_row(label, h, 1, 1, 1) == Some("G = H"), h == last);
        }
    }
    let total: usize = ConjugacyLabel::ALL.iter().map(|&l| normal_subgroup_table(l).len()).sum();
    assert_eq!(total, 45);
    assert_eq!(rows, 8 * total);
    let mut clauses: Vec<&str> = ConjugacyLabel::ALL
        .iter()
        .flat_map(|&l| {
            normal_subgroup_table(l).into_iter().flat_map(move |(h, _)| {
                [(1, 1, 1), (-1, -1, -1)].into_iter().map(move |(e, e1, e2)| clause_row(l, h, e, e1, e2).unwrap())
            })
        })
        .collect();
    clauses.sort();
    clauses.dedup();
    assert_eq!(clauses.len(), 27);
    assert!(clauses.contains(&"(11)(IV)") && clauses.contains(&"G = H"));
}

#[test]
fn invalid_instances() {
    assert!(Instance::new(C4, "tau").is_err());
    assert!(decide(&inst(C2_1, "1", &[("a", 4), ("b", 1), ("c", 1)])).is_err());
    assert!(decide(&inst(C2_1, "1", &[("a", 2), ("b", 0), ("c", 1)])).is_err());
    assert!(decide(&inst(C2_1, "1", &[("a", 2), ("b", 1)])).is_err());
    assert!(decide(&inst(C4, "1", &[("c", 3)])).is_err());
    assert!(decide(&inst(S3_2, "1", &[("c", 8), ("d", 3)])).is_err());
    assert_eq!(decide(&inst(S3_2, "1", &[("c", 8), ("d", 4), ("e", 4)])).unwrap().outcome, Outcome::Rational);
    assert!(decide(&inst(C2_2, "1", &[("a", 2), ("b", 3)]).with_epsilon(2)).is_err());
}

#[test]
fn g_equals_h_falls_back() {
    for label in ConjugacyLabel::ALL {
        let (h, _) = normal_subgroup_table(label).pop().unwrap();
        let v = decide(&Instance::new(label, h).unwrap()).unwrap();
        assert_eq!(v.outcome, Outcome::Rational);
        assert_eq!(v.clause, "G = H");
        assert!(matches!(v.certificate, Some(Certificate::CitedTheorem(_))));
    }
}

#[test]
fn square_class_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let a = nonsquare(&mut rng, 40);
        let (b, c) = (nz(&mut rng, 40), nz(&mut rng, 40));
        let t = rng.gen_range(2..7);
        let base = [
            inst(C2_1, "1", &[("a", a), ("b", b), ("c", c)]),
            inst(C2_2, "1", &[("a", a), ("b", b)]),
            inst(C4, "sigma^2", &[("a", a), ("c", c)]),
        ];
        let scaled = [
            inst(C2_1, "1", &[("a", a), ("b", b * t * t), ("c", c)]),
            inst(C2_2, "1", &[("a", a), ("b", b * t * t)]),
            inst(C4, "sigma^2", &[("a", a), ("c", c * t * t)]),
        ];
        for (x, y) in base.iter().zip(&scaled) {
            assert_eq!(decide(x).unwrap().outcome, decide(y).unwrap().outcome, "{x}");
        }
    }
}

fn random_family(rng: &mut ChaCha8Rng, fam: usize) -> Instance {
    let a = nonsquare(rng, 30);
    let (b, c, d) = (nz(rng, 12), nz(rng, 30), nz(rng, 30));
    let s = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1i8 } else { -1 };
    match fam {
        0 => inst(C2_2, "1", &[("a", a), ("b", c)]).with_epsilon(s(rng)),
        1 => inst(C2_3, "1", &[("a", a), ("b", b)]),
        2 => inst(C4, "sigma^2", &[("a", a), ("b", b), ("c", c)]),
        3 => inst(C6, "rho^3", &[("b", b), ("c", c)]),
        4 => {
            let h = ["1", "-I", "lambda", "-lambda"][rng.gen_range(0..4)];
            let bb = loop {
                let v = nonsquare(rng, 30);
                if !is_rational_square(&rat(a * v)) {
                    break v;
                }
            };
            inst(V4_1, h, &[("a", a), ("b", bb), ("c", c), ("d", d)]).with_epsilon1(s(rng)).with_epsilon2(s(rng))
        }
        5 => {
            let k = 2 * rng.gen_range(0..3) + 1;
            inst(C3, "1", &[("b", b), ("c", c)]).with_field(FieldData::OmegaBase { a: rat(2 * k * k) })
        }
        _ => {
            let h = ["-I", "-I,tau"][rng.gen_range(0..2)];
            let bb = loop {
                let v = nonsquare(rng, 30);
                if !is_rational_square(&rat(a * v)) {
                    break v;
                }
            };
            inst(D4, h, &[("a", a), ("b", bb), ("c", c)]).with_epsilon(s(rng))
        }
    }
}

#[test]
fn normalization_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for fam in 0..7 {
        for _ in 0..200 {
            let i = random_family(&mut rng, fam);
            let n = normalize(&i);
            assert_eq!(normalize(&n), n, "idempotent on {i}");
            let (v1, v2) = (decide(&i).unwrap(), decide(&n).unwrap());
            assert_eq!(v1.outcome, v2.outcome, "{i}");
            assert_eq!(v1.clause, v2.clause, "{i}");
        }
    }
}

#[test]
fn explicit_certificates_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut explicit = 0;
    for fam in [0usize, 1, 2, 4, 6] {
        let mut done = 0;
        for _ in 0..400 {
            if done == 6 {
                break;
            }
            let i = random_family(&mut rng, fam);
            let v = decide(&i).unwrap();
            if v.outcome != Outcome::Rational {
                continue;
            }
            let cert = certificate_for(&i, &v).unwrap_or_else(|e| panic!("{i}: {e}"));
            if let Certificate::ExplicitGenerators { invariance_checked, independence_checked, .. } = cert {
                assert!(invariance_checked && independence_checked);
                explicit += 1;
            }
            done += 1;
        }
    }
    assert!(explicit >= 15, "{explicit}");
}

#[test]
fn certificate_examples() {
    let i = inst(C2_2, "1", &[("a", 2), ("b", 7)]);
    let v = decide(&i).unwrap();
    match certificate_for(&i, &v).unwrap() {
        Certificate::ExplicitGenerators { u, v, .. } => {
            assert_eq!(u.to_string(), "x");
            assert!(v.to_string().contains("sa"));
        }
        c => panic!("{c}"),
    }
    for (label, h, params) in [
        (C2_1, "1", vec![("a", 2), ("b", 7), ("c", -1)]),
        (C2_3, "1", vec![("a", 5), ("b", 3)]),
        (V4_2, "-I", vec![("a", 3), ("c", 5)]),
        (V4_2, "tau", vec![("a", 3), ("c", 5)]),
        (D4, "-I,tau*sigma", vec![("a", 3), ("c", 5)]),
        (D4, "sigma", vec![("a", 3), ("c", 5)]),
    ] {
        for e in [1i8, -1] {
            let i = inst(label, h, &params).with_epsilon(e);
            let v = decide(&i).unwrap();
            assert_eq!(v.outcome, Outcome::Rational, "{i}");
            assert!(
                matches!(certificate_for(&i, &v).unwrap(), Certificate::ExplicitGenerators { .. }),
                "{i}"
            );
        }
    }
    let d6 = inst(D6, "1", &[("b", 1), ("c", 1)]);
    assert!(matches!(certificate_for(&d6, &decide(&d6).unwrap()).unwrap(), Certificate::CitedTheorem(_)));
}

fn c4_field(rng: &mut ChaCha8Rng) -> FieldData {
    loop {
        let b = nz(rng, 9);
        if !is_rational_square(&rat(b * b + 4)) {
            return FieldData::CyclicQuartic { a: rat(nz(rng, 20)), b: rat(b) };
        }
    }
}

fn d4_field(rng: &mut ChaCha8Rng) -> FieldData {
    loop {
        let (a, n) = (nz(rng, 15), nz(rng, 15));
        let disc = a * a - 4 * n;
        if disc != 0 && [n, disc, n * disc].iter().all(|v| !is_rational_square(&rat(*v))) {
            return FieldData::DihedralOctic { a: rat(a), n: rat(n) };
        }
    }
}

#[test]
fn solution_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut exercised = 0;
    for k in 0..300 {
        let i = if k % 2 == 0 {
            inst(C4, "1", &[("c", nz(&mut rng, 30))]).with_field(c4_field(&mut rng))
        } else {
            let e = if rng.gen_bool(0.5) { 1 } else { -1 };
            inst(D4, "1", &[("c", nz(&mut rng, 30))]).with_field(d4_field(&mut rng)).with_epsilon(e)
        };
        let base = decide(&i).unwrap();
        if !base.clause.contains("ii") {
            continue;
        }
        let hit_search = base.notes.iter().any(|n| n.contains("solved by"));
        for order in [SearchOrder::Reverse, SearchOrder::Shuffled(k), SearchOrder::Shuffled(k + 1000)] {
            let opts = DecideOptions { search: ConicSearch { order, honor_holzer: true }, ..Default::default() };
            let v = decide_with(&i, opts).unwrap();
            assert_eq!(v.outcome, base.outcome, "{i} with {order:?}");
        }
        if hit_search {
            exercised += 1;
        }
    }
    assert!(exercised >= 20, "{exercised}");
}

#[test]
fn cubic_clauses() {
    let i = inst(C3, "1", &[("c", 3)]).with_field(FieldData::OmegaBase { a: rat(2) });
    assert_eq!(decide(&i).unwrap().outcome, Outcome::Rational);
    let i = inst(C3, "1", &[("c", 8)]).with_field(FieldData::CyclicCubic {
        alpha: QOmega { re: rat(2), om: rat(1) },
    });
    let v = decide(&i).unwrap();
    assert_eq!((v.outcome, v.clause.as_str()), (Outcome::Rational, "(4)(ii)"));
    let i = inst(S3_1, "1", &[("c", 4)]).with_field(FieldData::Kummer { a: rat(2) });
    assert_eq!(decide(&i).unwrap().clause, "(9)(I)(i)");
    let i = inst(S3_1, "1", &[("c", 5)]).with_field(FieldData::GeneralCubic { m: rat(5), alpha: rat(1), alpha_sqrt: rat(2) });
    assert_eq!(decide(&i).unwrap().outcome, Outcome::Undecided);
    let i = inst(S3_1, "1", &[("c", 7), ("d", 2)]).with_field(FieldData::Kummer { a: rat(2) });
    assert!(decide(&i).is_err());
}

#[test]
fn d4_second_branch_ignores_the_chosen_solution() {
    // forward and reverse search land on different solutions of the conic here
    let i = inst(D4, "1", &[("c", 25)])
        .with_field(FieldData::DihedralOctic { a: rat(-9), n: rat(5) })
        .with_epsilon(-1);
    let base = decide(&i).unwrap();
    assert_eq!(base.clause, "(11)(I) eps=-1 (ii)");
    for order in [SearchOrder::Reverse, SearchOrder::Shuffled(1), SearchOrder::Shuffled(2)] {
        let opts = DecideOptions { search: ConicSearch { order, honor_holzer: true }, ..Default::default() };
        assert_eq!(decide_with(&i, opts).unwrap().outcome, base.outcome, "{order:?}");
    }
}
