use std::collections::BTreeMap;

use qmrat::fixedfield::{
    case_chain, case_chain_with, case_spec, case_tags, lemma21_basis, lemma22_basis, lemma23_basis, lemma24_eigenbasis,
    theorem26_basis, CheckKind, CASES,
};
use qmrat::glz::{normal_subgroup_by_name, ConjugacyLabel};

fn none() -> BTreeMap<String, String> {
    BTreeMap::new()
}

#[test]
fn every_case_chain_verifies() {
    let mut total = 0;
    for tag in case_tags() {
        let chain = case_chain_with(tag, &none()).unwrap();
        assert!(!chain.checks.is_empty(), "{tag}");
        if let Some(f) = chain.first_failure() {
            panic!("{tag}: {f}");
        }
        total += chain.checks.len();
    }
    assert!(total >= 1000, "{total}");
}

#[test]
fn chains_survive_specialization() {
    let params: BTreeMap<String, String> =
        [("a", "3"), ("b", "5"), ("c", "7"), ("d", "11")].iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    for tag in case_tags() {
        let chain = case_chain_with(tag, &params).unwrap();
        assert!(chain.passed(), "{tag}: {}", chain.first_failure().unwrap());
    }
}

#[test]
fn tags_cover_every_group_and_name_real_subgroups() {
    assert_eq!(CASES.len(), case_tags().len());
    for label in ConjugacyLabel::ALL.into_iter().filter(|l| *l != ConjugacyLabel::C1) {
        assert!(CASES.iter().any(|c| c.group == label), "{label}");
    }
    for c in CASES {
        assert!(normal_subgroup_by_name(c.group, c.h).is_some(), "{} names {}", c.tag, c.h);
        assert_eq!(case_spec(c.tag).unwrap().tag, c.tag);
    }
    assert!(case_chain_with("nope/1", &none()).is_err());
    assert!(case_chain("d6", &none()).is_ok());
}

#[test]
fn headers_are_checked() {
    for tag in case_tags().into_iter().filter(|t| !t.ends_with("/remark")) {
        let chain = case_chain_with(tag, &none()).unwrap();
        assert!(chain.checks.iter().any(|c| c.kind == CheckKind::Header), "{tag}");
    }
}

#[test]
fn misprints_are_pinned() {
    let pinned: Vec<&str> = case_tags()
        .into_iter()
        .filter(|t| case_chain_with(t, &none()).unwrap().checks.iter().any(|c| c.kind == CheckKind::PrintedForm))
        .collect();
    assert_eq!(pinned, ["v4_1/2", "v4_2/1", "s3_1/1-2", "s3_2", "d6"]);
}

#[test]
fn lemma_generators() {
    for a in ["a", "2", "-5", "a*b"] {
        let p = lemma21_basis(a).unwrap();
        assert!(p.invariant && p.independent, "{a}");
    }
    for (a, c, d) in [("a", "c", "d"), ("2", "3", "0"), ("-1", "0", "7"), ("a", "1", "-1")] {
        let p = lemma22_basis(a, c, d).unwrap();
        assert!(p.invariant && p.independent, "{a} {c} {d}");
    }
    assert!(lemma22_basis("a", "0", "0").is_err());
    for b in ["b", "2", "-3"] {
        let p = lemma23_basis(b).unwrap();
        assert!(p.invariant && p.independent, "{b}");
    }
    let e = lemma24_eigenbasis().unwrap();
    assert!(e.u_eigen && e.v_eigen && e.products_invariant && e.independent);
    for (a, f) in [("a", "x^2 + b"), ("2", "x - 3"), ("-1", "b*x")] {
        let z = theorem26_basis(a, f).unwrap();
        assert!(z.invariant && z.relation && z.independent && z.x_variant_fails, "{a} {f}");
    }
}
