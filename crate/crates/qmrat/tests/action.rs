use qmrat::action::{build_action, ActionError, CoefficientMode, GeneratorSpec};
use qmrat::glz::{classify, normal_subgroup_by_name, ConjugacyLabel};
use qmrat::{RatFunc, TowerSpec};

use ConjugacyLabel::*;

fn check(label: ConjugacyLabel, h: &str, roots: &[(&str, &str)], gens: &[(&str, &[(&str, &str)])]) {
    let mut tb = TowerSpec::builder().vars(&["x", "y"]).frees(&["a", "b", "c", "d"]);
    for (n, r) in roots {
        tb = tb.sqrt(n, r);
    }
    let t = tb.build().unwrap();
    let specs = gens.iter().map(|(n, imgs)| GeneratorSpec::from_images(n, &t, imgs).unwrap()).collect();
    let a = build_action(&t, specs, CoefficientMode::BaseField).unwrap();
    assert_eq!(classify(&a.group).unwrap().0, label);
    assert_eq!(a.elements().count(), label.order());
    let (_, expected) = normal_subgroup_by_name(label, h).unwrap();
    assert!(a.kernel_h().h.same_elements(&expected), "{label} {h}");
    assert_eq!(a.kernel_h().quotient_order, label.order() / expected.order());
}

#[test]
fn kernels_of_standard_actions() {
    check(C2_1, "1", &[("sa", "a")], &[("-I", &[("x", "b/x"), ("y", "c/y"), ("sa", "-sa")])]);
    check(C2_2, "lambda", &[], &[("lambda", &[("x", "x"), ("y", "b/y")])]);
    check(C4, "sigma^2", &[("sa", "a")], &[("sigma", &[("x", "y"), ("y", "c/x"), ("sa", "-sa")])]);
    check(
        V4_1,
        "lambda",
        &[("sa", "a")],
        &[("lambda", &[("x", "x"), ("y", "d/y")]), ("-I", &[("x", "c/x"), ("y", "d/y"), ("sa", "-sa")])],
    );
    check(
        D4,
        "-I,tau",
        &[("sa", "a")],
        &[("sigma", &[("x", "y"), ("y", "c/x"), ("sa", "-sa")]), ("tau", &[("x", "y"), ("y", "x")])],
    );
    check(
        D4,
        "sigma",
        &[("sa", "a")],
        &[("sigma", &[("x", "y"), ("y", "c/x")]), ("tau", &[("x", "y"), ("y", "x"), ("sa", "-sa")])],
    );
    check(C6, "rho^2", &[("sa", "a")], &[("rho", &[("x", "b*x*y"), ("y", "c/x"), ("sa", "-sa")])]);
}

#[test]
fn invariants_and_coefficients() {
    let t = TowerSpec::builder().vars(&["x", "y"]).frees(&["c"]).sqrt("sa", "3").build().unwrap();
    let g = GeneratorSpec::from_images("sigma", &t, &[("x", "y"), ("y", "c/x"), ("sa", "-sa")]).unwrap();
    let a = build_action(&t, vec![g], CoefficientMode::BaseField).unwrap();
    let s = "((x*y + c)/(x + y))";
    let inv = RatFunc::parse(&t, &format!("{s} + c/{s} + sa*({s} - c/{s})")).unwrap();
    assert!(a.is_invariant(&inv).unwrap());
    assert!(!a.is_invariant(&RatFunc::parse(&t, "x*y").unwrap()).unwrap());
    for e in a.elements() {
        let (c1, c2) = a.coefficients(e);
        assert!(c1.is_constant_in_variables() && c2.is_constant_in_variables(), "{}", e.word);
    }
}

#[test]
fn rejects_inconsistent_generators() {
    let t = TowerSpec::builder().vars(&["x", "y"]).sqrt("sa", "2").build().unwrap();
    let g = GeneratorSpec::from_images("rho", &t, &[("x", "x*y"), ("y", "1/x"), ("sa", "-sa")]).unwrap();
    assert!(build_action(&t, vec![g], CoefficientMode::BaseField).is_ok());
    // order three on x, y but order two on sa
    let g = GeneratorSpec::from_images("r3", &t, &[("x", "y"), ("y", "1/(x*y)"), ("sa", "-sa")]).unwrap();
    assert!(matches!(build_action(&t, vec![g], CoefficientMode::General), Err(ActionError::RelationViolation(_))));
    assert!(GeneratorSpec::from_images("bad", &t, &[("x", "2*x^2")]).is_err());
}
