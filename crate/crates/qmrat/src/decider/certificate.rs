//! Explicit generators of the fixed field for the clauses that reduce, after
//! a short chain, to an involution `√a ↦ −√a` acting on two functions that
//! are either invariant or inverted up to a constant.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{normalize, Certificate, DeciderError, FieldData, Instance, Outcome, Verdict};
use crate::action::{build_action, CoefficientMode, GeneratorSpec};
use crate::glz::ConjugacyLabel;
use crate::ratfunc::jacobian_independent_in;
use crate::symbols::{conic_point, ConicPoint};
use crate::{RatFunc, TowerSpec};

type Q = BigRational;

/// One generator before the involution is taken into account.
enum Part {
    /// Already invariant.
    Inv(String),
    /// `σ(w) = c/w` while `σ(√a) = −√a`: parametrize the conic
    /// `T1² − a·T2² = c`, `T1 = (w + c/w)/2`, `T2 = (w − c/w)/(2√a)`.
    Conic(String, Q),
}

struct Recipe {
    /// Square roots adjoined to Q, as (name, radicand).
    roots: Vec<(&'static str, Q)>,
    gens: Vec<(&'static str, Vec<(&'static str, String)>)>,
    parts: [Part; 2],
}

fn lit(v: &Q) -> String {
    format!("({v})")
}

fn l21(c: &Q) -> (String, String) {
    let c = lit(c);
    (format!("((x*y + {c})/(x + y))"), format!("((x*y - {c})/(x - y))"))
}

fn recipe(n: &Instance) -> Option<Recipe> {
    use ConjugacyLabel::*;
    let p = |k: &str| n.params.get(k).cloned();
    let eps = n.epsilon.unwrap_or(1);
    let s = |v: &str| v.to_string();
    Some(match (n.label, n.h.as_str()) {
        (C2_1, "1") => {
            let (a, b, c) = (p("a")?, p("b")?, p("c")?);
            Recipe {
                roots: vec![("sa", a)],
                gens: vec![("-I", vec![("x", format!("{}/x", lit(&b))), ("y", format!("{}/y", lit(&c))), ("sa", s("-sa"))])],
                parts: [Part::Conic(s("x"), b), Part::Conic(s("y"), c)],
            }
        }
        (C2_2, "1") => {
            let (a, b) = (p("a")?, p("b")?);
            Recipe {
                roots: vec![("sa", a)],
                gens: vec![("lambda", vec![("x", s("x")), ("y", format!("{}/y", lit(&b))), ("sa", s("-sa"))])],
                parts: [Part::Inv(s("x")), Part::Conic(s("y"), b)],
            }
        }
        (C2_3, "1") => {
            let a = p("a")?;
            Recipe {
                roots: vec![("sa", a)],
                gens: vec![("tau", vec![("x", s("y")), ("y", s("x")), ("sa", s("-sa"))])],
                parts: [Part::Inv(s("x + y")), Part::Inv(s("sa*(x - y)"))],
            }
        }
        (C4, "sigma^2") => {
            let (a, c) = (p("a")?, p("c")?);
            let (u, v) = l21(&c);
            Recipe {
                roots: vec![("sa", a)],
                gens: vec![("sigma", vec![("x", s("y")), ("y", format!("{}/x", lit(&c))), ("sa", s("-sa"))])],
                parts: [Part::Conic(u, c.clone()), Part::Conic(v, -c)],
            }
        }
        (V4_1, "lambda") if n.epsilon1.unwrap_or(1) == 1 => {
            let (a, c, d) = (p("a")?, p("c")?, p("d")?);
            Recipe {
                roots: vec![("sa", a)],
                gens: vec![
                    ("lambda", vec![("x", s("x")), ("y", format!("{}/y", lit(&d)))]),
                    ("-I", vec![("x", format!("{}/x", lit(&c))), ("y", format!("{}/y", lit(&d))), ("sa", s("-sa"))]),
                ],
                parts: [Part::Conic(s("x"), c), Part::Inv(format!("y + {}/y", lit(&d)))],
            }
        }
        (V4_1, "-lambda") if n.epsilon2.unwrap_or(1) == 1 => {
            let (a, c, d) = (p("a")?, p("c")?, p("d")?);
            Recipe {
                roots: vec![("sa", a)],
                gens: vec![
                    ("-lambda", vec![("x", format!("{}/x", lit(&c))), ("y", s("y"))]),
                    ("-I", vec![("x", format!("{}/x", lit(&c))), ("y", format!("{}/y", lit(&d))), ("sa", s("-sa"))]),
                ],
                parts: [Part::Inv(format!("x + {}/x", lit(&c))), Part::Conic(s("y"), d)],
            }
        }
        (V4_2, "-I") => {
            let (a, c) = (p("a")?, p("c")?);
            let (u, v) = l21(&c);
            Recipe {
                roots: vec![("sa", a)],
                gens: vec![
                    ("tau", vec![("x", s("y")), ("y", s("x")), ("sa", s("-sa"))]),
                    ("-I", vec![("x", format!("{}/x", lit(&c))), ("y", format!("{}/y", lit(&c)))]),
                ],
                parts: [Part::Inv(u), Part::Inv(format!("sa*{v}"))],
            }
        }
        (V4_2, "tau") => {
            let (a, c) = (p("a")?, p("c")?);
            Recipe {
                roots: vec![("sa", a)],
                gens: vec![
                    ("tau", vec![("x", s("y")), ("y", s("x"))]),
                    ("-I", vec![("x", format!("{}/x", lit(&c))), ("y", format!("{}/y", lit(&c))), ("sa", s("-sa"))]),
                ],
                parts: [
                    Part::Conic(format!("x*y/{}", lit(&c)), Q::one()),
                    Part::Inv(format!("(x + y)/(1 + x*y/{})", lit(&c))),
                ],
            }
        }
        (D4, "-I") | (D4, "-I,tau") | (D4, "-I,tau*sigma") | (D4, "sigma") => {
            let (a, c) = (p("a")?, p("c")?);
            let (x, y) = l21(&c);
            let e = Q::from_integer(eps.into());
            let (sig_sa, tau_sa) = match n.h.as_str() {
                "sigma" => (None, Some("-sa")),
                "-I,tau*sigma" => (Some("-sa"), Some("-sa")),
                _ => (Some("-sa"), None),
            };
            let mut sigma = vec![("x", s("y")), ("y", format!("{}/x", lit(&c)))];
            let mut tau = vec![("x", format!("{eps}*y")), ("y", format!("{eps}*x"))];
            if let Some(img) = sig_sa {
                sigma.push(("sa", s(img)));
            }
            if let Some(img) = tau_sa {
                tau.push(("sa", s(img)));
            }
            let mut roots = vec![("sa", a.clone())];
            let parts = match n.h.as_str() {
                "-I" => {
                    let b = p("b")?;
                    roots.push(("sb", b.clone()));
                    tau.push(("sb", s("-sb")));
                    if eps == 1 {
                        [Part::Conic(x, c.clone()), Part::Conic(format!("sb*{y}"), -(&b * &c))]
                    } else {
                        [Part::Conic(format!("sb*{x}"), &b * &c), Part::Conic(y, -c.clone())]
                    }
                }
                "-I,tau" => {
                    if eps == 1 {
                        [Part::Conic(x, c.clone()), Part::Conic(format!("{y}^2/{}", lit(&c)), Q::one())]
                    } else {
                        [Part::Conic(format!("{x}^2/{}", lit(&c)), Q::one()), Part::Conic(y, -c.clone())]
                    }
                }
                "-I,tau*sigma" => {
                    let ec = lit(&(&e * &c));
                    let ss = format!("(({x}*{y} + {ec})/({x} + {y}))");
                    let tt = format!("(({x}*{y} - {ec})/({x} - {y}))");
                    [Part::Inv(format!("{ss} - ({eps})*{tt}")), Part::Inv(format!("sa*({ss} + ({eps})*{tt})"))]
                }
                _ => {
                    // σ acts trivially on K: S ↦ A/S, T ↦ B/T with constants A, B.
                    let (ss, tt, aa, bb) = if eps == 1 {
                        (x, format!("(sa*{y})"), c.clone(), -(&a * &c))
                    } else {
                        (format!("(sa*{x})"), y, &a * &c, -c.clone())
                    };
                    let (la, lb) = (lit(&aa), lit(&bb));
                    let den = format!("({ss}*{tt} - {la}*{lb}/({ss}*{tt}))");
                    [
                        Part::Inv(format!("({ss} - {la}/{ss})/{den}")),
                        Part::Inv(format!("({tt} - {lb}/{tt})/{den}")),
                    ]
                }
            };
            Recipe { roots, gens: vec![("sigma", sigma), ("tau", tau)], parts }
        }
        _ => return None,
    })
}

fn anchor_of(v: &Verdict) -> String {
    match &v.certificate {
        Some(Certificate::CitedTheorem(a)) => a.clone(),
        _ => format!("criterion {} satisfied", v.clause),
    }
}

/// Explicit generators when a construction is available, otherwise the
/// citation carried by the verdict (the verdict itself is unaffected).
pub fn certificate_for(i: &Instance, v: &Verdict) -> Result<Certificate, DeciderError> {
    if v.outcome != Outcome::Rational {
        return Err(DeciderError::InvalidInstance(format!("verdict is {}, not rational", v.outcome)));
    }
    let n = normalize(i);
    if matches!(n.field, Some(FieldData::OmegaBase { .. })) {
        return Ok(Certificate::CitedTheorem(anchor_of(v)));
    }
    let r = match recipe(&n) {
        Some(r) if v.clause != "G = H" => r,
        _ => {
            return Ok(Certificate::CitedTheorem(format!(
                "{} (no explicit generators implemented for clause {})",
                anchor_of(v),
                v.clause
            )))
        }
    };
    build(&r).map_err(DeciderError::CertificateCheck)
}

fn point_on(a: &Q, c: &Q) -> Result<(Q, Q), String> {
    let p: ConicPoint = conic_point(a, c, true).ok_or_else(|| format!("T1^2 - ({a})*T2^2 = {c} has no rational point"))?;
    if p.z.is_zero() {
        return Err(format!("degenerate point on T1^2 - ({a})*T2^2 = {c}"));
    }
    let z = Q::from_integer(p.z);
    Ok((Q::from_integer(p.x) / &z, Q::from_integer(p.y) / &z))
}

fn build(r: &Recipe) -> Result<Certificate, String> {
    let mut tb = TowerSpec::builder().vars(&["x", "y"]);
    for (name, v) in &r.roots {
        tb = tb.sqrt(name, &lit(v));
    }
    let tower: Arc<TowerSpec> = tb.build().map_err(|e| e.to_string())?;
    let a = r.roots[0].1.clone();
    let mut specs = Vec::new();
    for (name, imgs) in &r.gens {
        let pairs: Vec<(&str, &str)> = imgs.iter().map(|(k, v)| (*k, v.as_str())).collect();
        specs.push(GeneratorSpec::from_images(name, &tower, &pairs).map_err(|e| e.to_string())?);
    }
    let action = build_action(&tower, specs, CoefficientMode::BaseField).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for part in &r.parts {
        let src = match part {
            Part::Inv(e) => e.clone(),
            Part::Conic(w, c) => {
                let (p, q) = point_on(&a, c)?;
                let (w, c) = (format!("({w})"), lit(c));
                let t1 = format!("(({w} + {c}/{w})/2)");
                let t2 = format!("(({w} - {c}/{w})/(2*sa))");
                format!("({t2} - {})/({t1} - {})", lit(&q), lit(&p))
            }
        };
        out.push(RatFunc::parse(&tower, &src).map_err(|e| format!("{src}: {e}"))?);
    }
    let (u, v) = (out.remove(0), out.remove(0));
    for (name, f) in [("u", &u), ("v", &v)] {
        if !action.is_invariant(f).map_err(|e| e.to_string())? {
            return Err(format!("{name} = {f} is not invariant"));
        }
    }
    let (ix, iy) = (tower.index_of("x").unwrap(), tower.index_of("y").unwrap());
    if !jacobian_independent_in(&u, &v, ix, iy) {
        return Err("generators are algebraically dependent".into());
    }
    Ok(Certificate::ExplicitGenerators { u, v, invariance_checked: true, independence_checked: true })
}
