use qmrat::glz::{classify, close_group, normal_subgroup_table, ConjugacyLabel, FiniteMatrixGroup, IntMatrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_unimodular(rng: &mut ChaCha8Rng) -> IntMatrix2 {
    let gens = [
        IntMatrix2::from_row_major([1, 1, 0, 1]).unwrap(),
        IntMatrix2::from_row_major([1, 0, 1, 1]).unwrap(),
        IntMatrix2::from_row_major([1, -1, 0, 1]).unwrap(),
        IntMatrix2::from_row_major([1, 0, -1, 1]).unwrap(),
        IntMatrix2::LAMBDA,
    ];
    (0..rng.gen_range(1..9)).fold(IntMatrix2::IDENTITY, |m, _| m * gens[rng.gen_range(0..gens.len())])
}

#[test]
fn representatives_classify_to_themselves() {
    for label in ConjugacyLabel::ALL {
        let rep = label.representative();
        assert_eq!(rep.order(), label.order());
        assert_eq!(classify(&rep).unwrap(), (label, IntMatrix2::IDENTITY));
    }
}

#[test]
fn classifier_round_trip_under_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..500 {
        let label = ConjugacyLabel::ALL[k % 13];
        let p = random_unimodular(&mut rng);
        let g = label.representative().conjugate_by(&p);
        let (found, q) = classify(&g).unwrap();
        assert_eq!(found, label, "conjugated by {p}");
        assert_eq!(q.det().abs(), 1);
        assert!(g.conjugate_by(&q).same_elements(&label.representative()));
    }
}

#[test]
fn labels_are_pairwise_non_conjugate() {
    // Same order, different classes: the classifier must separate them even
    // though the abstract groups agree.
    for (a, b) in [
        (ConjugacyLabel::C2_2, ConjugacyLabel::C2_3),
        (ConjugacyLabel::V4_1, ConjugacyLabel::V4_2),
        (ConjugacyLabel::S3_1, ConjugacyLabel::S3_2),
    ] {
        assert_ne!(classify(&a.representative()).unwrap().0, classify(&b.representative()).unwrap().0);
    }
}

fn all_subgroups(g: &FiniteMatrixGroup) -> Vec<FiniteMatrixGroup> {
    let mut out: Vec<FiniteMatrixGroup> = Vec::new();
    for x in &g.elements {
        for y in &g.elements {
            let h = close_group(&[*x, *y]).unwrap();
            if !out.iter().any(|o| o.same_elements(&h)) {
                out.push(h);
            }
        }
    }
    out
}

#[test]
fn normal_subgroup_tables_are_complete() {
    let mut counts = Vec::new();
    for label in ConjugacyLabel::ALL {
        let g = label.representative();
        let table = normal_subgroup_table(label);
        for (name, h) in &table {
            assert!(h.is_subgroup_of(&g) && h.is_normal_in(&g), "{label} {name}");
        }
        assert!(table.last().unwrap().1.same_elements(&g));
        let normal: Vec<_> = all_subgroups(&g).into_iter().filter(|h| h.is_normal_in(&g)).collect();
        assert_eq!(normal.len(), table.len(), "{label}");
        for h in &normal {
            assert!(table.iter().any(|(_, t)| t.same_elements(h)), "{label}");
        }
        counts.push(table.len());
    }
    assert_eq!(counts, [1, 2, 2, 2, 2, 3, 4, 5, 5, 3, 3, 6, 7]);
}

#[test]
fn closure_rejects_bad_input() {
    assert!(close_group(&[IntMatrix2::from_row_major([1, 1, 0, 1]).unwrap()]).is_err());
    assert!(IntMatrix2::from_row_major([2, 0, 0, 1]).is_err());
    for s in ["C2_1", "c2_1", "C_2^{(1)}", "D6"] {
        assert!(s.parse::<ConjugacyLabel>().is_ok(), "{s}");
    }
    assert!("C5".parse::<ConjugacyLabel>().is_err());
}
