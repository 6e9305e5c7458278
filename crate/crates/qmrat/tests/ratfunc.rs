use std::sync::Arc;

use proptest::prelude::*;
use qmrat::ratfunc::{jacobian_independent, Relation};
use qmrat::{RatFunc, Substitution, TowerSpec};

fn tower() -> Arc<TowerSpec> {
    TowerSpec::builder().vars(&["x", "y"]).frees(&["a", "b"]).sqrt("sa", "a").omega("w").build().unwrap()
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (-6i64..=6).prop_map(|n| format!("({n})")),
        prop::sample::select(vec!["x", "y", "a", "b", "sa", "w"]).prop_map(String::from),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("({l} + {r})")),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("({l} - {r})")),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("({l})*({r})")),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("({l})/({r})")),
            (inner, -2i64..=3).prop_map(|(b, e)| format!("({b})^{e}")),
        ]
    })
}

fn parse(src: &str) -> Option<RatFunc> {
    RatFunc::parse(&tower(), src).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn display_reparses_to_the_same_function(src in expr()) {
        let Some(f) = parse(&src) else { return Ok(()) };
        let shown = f.to_string();
        let g = RatFunc::parse(&tower(), &shown).unwrap();
        prop_assert!(f.equals(&g), "{} printed as {}", src, shown);
    }

    #[test]
    fn field_operations(a in expr(), b in expr()) {
        let (Some(f), Some(g)) = (parse(&a), parse(&b)) else { return Ok(()) };
        prop_assert!((&(&f + &g) - &g).equals(&f));
        prop_assert!((&f * &g).equals(&(&g * &f)));
        if !g.is_zero() {
            prop_assert!((&f * &g).checked_div(&g).unwrap().equals(&f));
        }
    }
}

#[test]
fn tower_relations_hold() {
    let t = tower();
    let p = |s: &str| RatFunc::parse(&t, s).unwrap();
    assert!(p("sa^2").equals(&p("a")));
    assert!(p("w^2 + w + 1").is_zero());
    assert!(p("w^3").equals(&p("1")));
    assert!(p("w^-1").equals(&p("w^2")));
    assert!(p("1/(sa + 1)").equals(&p("(sa - 1)/(a - 1)")));
    let c = TowerSpec::builder().var("x").free("c").cbrt("r", "c").build().unwrap();
    assert!(RatFunc::parse(&c, "r^3").unwrap().equals(&RatFunc::parse(&c, "c").unwrap()));
    assert_eq!(*c.relation(c.index_of("x").unwrap()), Relation::Variable);
}

#[test]
fn parse_errors_and_zero_division() {
    let t = tower();
    assert!(RatFunc::parse(&t, "x +").is_err());
    assert!(RatFunc::parse(&t, "z").is_err());
    assert!(RatFunc::parse(&t, "x / (sa^2 - a)").is_err());
    assert!(RatFunc::parse(&t, "x # y").is_err());
}

#[test]
fn substitutions_compose() {
    let t = tower();
    let s = Substitution::parse(&t, &[("x", "y"), ("y", "b/x")]).unwrap();
    let s2 = s.compose(&s).unwrap();
    let s4 = s2.compose(&s2).unwrap();
    assert!(s4.is_identity());
    assert!(!s2.is_identity());
    let f = RatFunc::parse(&t, "(x*y + b)/(x + y)").unwrap();
    assert!(s2.apply(&f).unwrap().equals(&f));
    let u = RatFunc::parse(&t, "x + y").unwrap();
    let v = RatFunc::parse(&t, "x*y").unwrap();
    assert!(jacobian_independent(&u, &v));
    assert!(!jacobian_independent(&u, &u.powi(2).unwrap()));
}
