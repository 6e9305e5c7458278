//! JSON payloads. `serde_json::Map` keeps keys sorted, so equal inputs give
//! byte-identical output apart from `elapsed_ms`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use qmrat::decider::{Certificate, Instance, Verdict};
use qmrat::fixedfield::TransformChain;
use qmrat::symbols::{ConicPoint, Evaluated, Witness};
use serde_json::{json, Map, Value};

pub fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn rat(q: &BigRational) -> Value {
    if q.is_integer() {
        int(q.numer())
    } else {
        json!(q.to_string())
    }
}

pub fn point(p: &ConicPoint) -> Value {
    json!([int(&p.x), int(&p.y), int(&p.z)])
}

pub fn witness(w: &Witness) -> Value {
    match w {
        Witness::None => Value::Null,
        Witness::Ramified(places) => json!({ "ramified": places.iter().map(|p| p.to_string()).collect::<Vec<_>>() }),
        Witness::Point(p) => json!({ "point": point(p) }),
        Witness::Norm { x, r } => json!({ "norm": { "x": x.iter().map(int).collect::<Vec<_>>(), "r": rat(r) } }),
        Witness::Tame(places) => json!({
            "tame": places
                .iter()
                .map(|t| json!({ "p": int(&t.p), "root": t.root.as_ref().map(int), "trivial": t.trivial }))
                .collect::<Vec<_>>()
        }),
        Witness::Reciprocity => json!("reciprocity"),
    }
}

pub fn symbol(e: &Evaluated) -> Value {
    json!({ "query": e.query.to_string(), "value": e.value.as_str(), "witness": witness(&e.witness) })
}

pub fn certificate(c: &Certificate) -> Value {
    match c {
        Certificate::ExplicitGenerators { u, v, invariance_checked, independence_checked } => json!({
            "kind": "explicit_generators",
            "u": u.to_string(),
            "v": v.to_string(),
            "invariance_checked": invariance_checked,
            "independence_checked": independence_checked,
        }),
        Certificate::CitedTheorem(anchor) => json!({ "kind": "cited_theorem", "anchor": anchor }),
    }
}

/// Same shape as the instance file.
pub fn instance(i: &Instance) -> Value {
    let mut m = Map::new();
    m.insert("group".into(), json!(i.label.as_str()));
    m.insert("H".into(), json!(i.h));
    m.insert("params".into(), Value::Object(i.params.iter().map(|(k, q)| (k.clone(), rat(q))).collect()));
    for (k, e) in [("epsilon", i.epsilon), ("epsilon1", i.epsilon1), ("epsilon2", i.epsilon2)] {
        if let Some(e) = e {
            m.insert(k.into(), json!(e));
        }
    }
    if let Some(f) = &i.field {
        let mut t: Map<String, Value> = f.entries().iter().map(|(k, q)| (k.to_string(), rat(q))).collect();
        t.insert("kind".into(), json!(f.kind()));
        m.insert("field".into(), Value::Object(t));
    }
    if !i.absorbed.is_empty() {
        m.insert("absorbed".into(), json!(i.absorbed));
    }
    Value::Object(m)
}

pub fn verdict(v: &Verdict, cert: Option<&Certificate>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("verdict".into(), json!(v.outcome.as_str()));
    m.insert("clause".into(), json!(v.clause));
    m.insert("symbols".into(), Value::Array(v.symbols.iter().map(symbol).collect()));
    m.insert("certificate".into(), cert.or(v.certificate.as_ref()).map_or(Value::Null, certificate));
    m.insert("notes".into(), json!(v.notes));
    m.insert("normalized".into(), instance(&v.instance));
    m
}

pub fn chain(c: &TransformChain) -> Value {
    let failed = c.checks.iter().filter(|k| !k.passed).count();
    json!({
        "tag": c.tag,
        "title": c.title,
        "checks": c.checks.len(),
        "failed": failed,
        "passed": failed == 0,
        "failures": c.checks.iter().filter(|k| !k.passed).map(|k| k.to_string()).collect::<Vec<_>>(),
    })
}
