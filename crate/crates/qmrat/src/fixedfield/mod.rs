//! Explicit fixed-field generators and change-of-variables chains.
//!
//! A [`Chain`] starts from an action of named generators on a pair of
//! variables and on the constants of a formal tower.  Each step introduces
//! new variables as rational functions of the current ones together with
//! the claimed images of the new variables; the claim is checked against the
//! action of the previous step, and the claimed images become the action
//! used by the next step.

mod cases;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::action::{build_action, CoefficientMode, GeneratorSpec};
use crate::glz::{normal_subgroup_by_name, ConjugacyLabel};
use crate::ratfunc::{jacobian_independent_in, parse_expr, Expr, RatFuncError};
use crate::{RatFunc, Relation, Substitution, TowerSpec};

pub use cases::{case_chain, case_chain_with, case_spec, case_tags, CaseSpec, CASES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FixedFieldError {
    #[error("verification failed in {tag}: {check}")]
    VerificationFailure { tag: String, check: String },
    #[error("unknown case tag {0}")]
    UnknownCase(String),
    #[error("malformed chain {tag}: {msg}")]
    Malformed { tag: String, msg: String },
    #[error("tower has no omega generator")]
    MissingOmega,
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// Image of a new variable or constant under a generator.
    Image,
    /// Jacobian test for the new variables against the old ones.
    Independence,
    /// Invariance of an element under every current generator.
    Invariance,
    /// Equality of two displayed expressions.
    Identity,
    /// A printed formula that must fail, confirming the corrected one.
    PrintedForm,
    /// Group, label and kernel of the action at the head of the case.
    Header,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub part: String,
    pub step: String,
    pub kind: CheckKind,
    pub what: String,
    pub passed: bool,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} [{}] {}: {}", self.part, self.step, self.what)
    }
}

/// Verified chain for one case tag.
#[derive(Clone, Debug)]
pub struct TransformChain {
    pub tag: String,
    pub title: String,
    pub checks: Vec<Check>,
}

impl TransformChain {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

#[derive(Clone, Debug)]
enum GenDef {
    Base { name: String, consts: Vec<(String, String)>, start: Vec<String> },
    Composite { name: String, outer: String, inner: String },
}

#[derive(Clone, Debug)]
enum Step {
    Vars {
        label: String,
        defs: Vec<(String, String)>,
        expected: Vec<(String, Vec<(String, String)>)>,
        printed: Vec<(String, String, String)>,
    },
    Invariant { label: String, exprs: Vec<String> },
    InvariantUnder { label: String, gens: Vec<String>, exprs: Vec<String> },
    Identity { label: String, lhs: String, rhs: String },
}

/// Header action: generator names, expected label and kernel name.
#[derive(Clone, Debug)]
struct Header {
    gens: Vec<String>,
    label: ConjugacyLabel,
    h: String,
}

/// One verified sequence of variable changes over a single formal tower.
#[derive(Clone, Debug)]
pub struct Chain {
    name: String,
    consts: Vec<(String, Relation)>,
    macros: Vec<(String, String)>,
    gens: Vec<GenDef>,
    start_vars: Vec<String>,
    steps: Vec<Step>,
    header: Option<Header>,
    params: BTreeMap<String, String>,
}

fn owned(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

impl Chain {
    pub fn new(name: &str, vars: &[&str]) -> Self {
        Chain {
            name: name.to_string(),
            consts: Vec::new(),
            macros: Vec::new(),
            gens: Vec::new(),
            start_vars: vars.iter().map(|v| v.to_string()).collect(),
            steps: Vec::new(),
            header: None,
            params: BTreeMap::new(),
        }
    }

    pub fn free(mut self, names: &[&str]) -> Self {
        for n in names {
            self.consts.push((n.to_string(), Relation::Free));
        }
        self
    }

    pub fn sqrt(mut self, name: &str, radicand: &str) -> Self {
        self.consts.push((name.to_string(), Relation::Sqrt(radicand.to_string())));
        self
    }

    pub fn cbrt(mut self, name: &str, radicand: &str) -> Self {
        self.consts.push((name.to_string(), Relation::Cbrt(radicand.to_string())));
        self
    }

    pub fn omega(mut self, name: &str) -> Self {
        self.consts.push((name.to_string(), Relation::Omega));
        self
    }

    /// Named abbreviation, expanded wherever it is mentioned.
    pub fn define(mut self, name: &str, expr: &str) -> Self {
        self.macros.push((name.to_string(), expr.to_string()));
        self
    }

    /// A generator with its images of the constants (unlisted ones are
    /// fixed) and of the starting variables, in order.
    pub fn gen(mut self, name: &str, consts: &[(&str, &str)], start: &[&str]) -> Self {
        self.gens.push(GenDef::Base {
            name: name.to_string(),
            consts: owned(consts),
            start: start.iter().map(|s| s.to_string()).collect(),
        });
        self
    }

    /// `outer ∘ inner`: apply `inner` first.
    pub fn composite(mut self, name: &str, outer: &str, inner: &str) -> Self {
        self.gens.push(GenDef::Composite { name: name.to_string(), outer: outer.to_string(), inner: inner.to_string() });
        self
    }

    pub fn header(mut self, gens: &[&str], label: ConjugacyLabel, h: &str) -> Self {
        self.header = Some(Header { gens: gens.iter().map(|s| s.to_string()).collect(), label, h: h.to_string() });
        self
    }

    /// New variables and their claimed images under each listed generator.
    /// Generators that are not listed are dropped from later steps.
    pub fn step(mut self, label: &str, defs: &[(&str, &str)], expected: &[(&str, &[(&str, &str)])]) -> Self {
        self.steps.push(Step::Vars {
            label: label.to_string(),
            defs: owned(defs),
            expected: expected.iter().map(|(g, e)| (g.to_string(), owned(e))).collect(),
            printed: Vec::new(),
        });
        self
    }

    /// Records a misprinted image on the most recent step.
    pub fn printed(mut self, gen: &str, name: &str, printed: &str) -> Self {
        match self.steps.last_mut() {
            Some(Step::Vars { printed: p, .. }) => p.push((gen.to_string(), name.to_string(), printed.to_string())),
            _ => panic!("printed() must follow step()"),
        }
        self
    }

    pub fn invariant(mut self, label: &str, exprs: &[&str]) -> Self {
        self.steps.push(Step::Invariant { label: label.to_string(), exprs: exprs.iter().map(|s| s.to_string()).collect() });
        self
    }

    /// Invariance under the listed current generators only.
    pub fn invariant_under(mut self, label: &str, gens: &[&str], exprs: &[&str]) -> Self {
        self.steps.push(Step::InvariantUnder {
            label: label.to_string(),
            gens: gens.iter().map(|s| s.to_string()).collect(),
            exprs: exprs.iter().map(|s| s.to_string()).collect(),
        });
        self
    }

    pub fn identity(mut self, label: &str, lhs: &str, rhs: &str) -> Self {
        self.steps.push(Step::Identity { label: label.to_string(), lhs: lhs.to_string(), rhs: rhs.to_string() });
        self
    }

    /// Specializes free constants to numbers (`"c" -> "3"`).
    pub fn with_params(mut self, params: &BTreeMap<String, String>) -> Self {
        for (k, v) in params {
            if self.consts.iter().any(|(n, r)| n == k && *r == Relation::Free) {
                self.params.insert(k.clone(), v.clone());
            }
        }
        self
    }

    fn all_vars(&self) -> Vec<String> {
        let mut out: Vec<String> = self.start_vars.clone();
        for s in &self.steps {
            if let Step::Vars { defs, .. } = s {
                for (n, _) in defs {
                    if !out.contains(n) {
                        out.push(n.clone());
                    }
                }
            }
        }
        out
    }

    fn build_tower(&self) -> Result<Arc<TowerSpec>, RatFuncError> {
        let mut b = TowerSpec::builder();
        for v in self.all_vars() {
            b = b.var(&v);
        }
        for (n, r) in &self.consts {
            if self.params.contains_key(n) {
                continue;
            }
            let r = match r {
                Relation::Sqrt(e) => Relation::Sqrt(replace_idents(e, &self.params)),
                Relation::Cbrt(e) => Relation::Cbrt(replace_idents(e, &self.params)),
                other => other.clone(),
            };
            b = b.symbol(n, r);
        }
        b.build()
    }

    /// Runs every check; never stops at the first failure.
    pub fn verify(&self) -> Result<Vec<Check>, FixedFieldError> {
        let malformed = |msg: String| FixedFieldError::Malformed { tag: self.name.clone(), msg };
        let tower = self.build_tower()?;
        let mut env = Env { tower: tower.clone(), macros: HashMap::new() };
        for (k, v) in &self.params {
            let val = env.eval(v)?;
            env.macros.insert(k.clone(), val);
        }
        for (n, e) in &self.macros {
            let val = env.eval(e)?;
            env.macros.insert(n.clone(), val);
        }
        let mut checks = Vec::new();
        let mut push = |step: &str, kind: CheckKind, what: String, passed: bool| {
            checks.push(Check { part: self.name.clone(), step: step.to_string(), kind, what, passed });
        };

        // Full substitutions at the start, and the constant part of each.
        let mut full: Vec<(String, Substitution)> = Vec::new();
        for g in &self.gens {
            match g {
                GenDef::Base { name, consts, start } => {
                    if start.len() != self.start_vars.len() {
                        return Err(malformed(format!("generator {name} needs {} images", self.start_vars.len())));
                    }
                    let mut images = Vec::new();
                    for (c, e) in consts {
                        images.push((c.clone(), env.eval(e)?));
                    }
                    for (v, e) in self.start_vars.iter().zip(start) {
                        images.push((v.clone(), env.eval(e)?));
                    }
                    full.push((name.clone(), Substitution::new(&tower, &tower, images)?));
                }
                GenDef::Composite { name, outer, inner } => {
                    let find = |n: &str| {
                        full.iter().find(|(m, _)| m == n).map(|(_, s)| s.clone()).ok_or_else(|| malformed(format!("unknown generator {n}")))
                    };
                    let s = find(outer)?.compose(&find(inner)?)?;
                    full.push((name.clone(), s));
                }
            }
        }

        if let Some(h) = &self.header {
            let (passed, what) = self.check_header(&tower, &full, h)?;
            push("header", CheckKind::Header, what, passed);
        }

        let const_idx: Vec<usize> = (0..tower.len()).filter(|&i| !tower.is_variable(i)).collect();
        let const_images: HashMap<String, Vec<(String, RatFunc)>> = full
            .iter()
            .map(|(n, s)| (n.clone(), const_idx.iter().map(|&i| (tower.name(i).to_string(), s.image_at(i).clone())).collect()))
            .collect();
        let mut current: Vec<(String, Substitution)> = full;
        let mut vars: Vec<String> = self.start_vars.clone();

        for step in &self.steps {
            match step {
                Step::Vars { label, defs, expected, printed } => {
                    let mut local = env.clone();
                    let mut def_vals = Vec::new();
                    for (n, e) in defs {
                        let val = local.eval(e)?;
                        if !vars.contains(n) {
                            local.macros.insert(n.clone(), val.clone());
                        }
                        def_vals.push((n.clone(), val));
                    }
                    let to_old = Substitution::new(&tower, &tower, def_vals.clone())?;
                    let new_vars: Vec<String> = if defs.is_empty() { vars.clone() } else { defs.iter().map(|(n, _)| n.clone()).collect() };
                    if new_vars.len() == 2 && vars.len() == 2 && new_vars.iter().all(|n| !vars.contains(n)) {
                        let i = tower.index_of(&vars[0]).unwrap();
                        let j = tower.index_of(&vars[1]).unwrap();
                        let ok = jacobian_independent_in(&def_vals[0].1, &def_vals[1].1, i, j);
                        push(label, CheckKind::Independence, format!("{}, {} independent over {}, {}", new_vars[0], new_vars[1], vars[0], vars[1]), ok);
                    }
                    let mut next = Vec::new();
                    for (g, entries) in expected {
                        let old = current
                            .iter()
                            .find(|(n, _)| n == g)
                            .map(|(_, s)| s.clone())
                            .ok_or_else(|| malformed(format!("{label}: no current action for {g}")))?;
                        let mut images: Vec<(String, RatFunc)> = const_images[g].clone();
                        for (name, e) in entries {
                            let rhs = to_old.apply(&env.eval(e)?)?;
                            let lhs = match def_vals.iter().find(|(n, _)| n == name) {
                                Some((_, d)) => old.apply(d)?,
                                None => old.apply(&env.eval(name)?)?,
                            };
                            push(label, CheckKind::Image, format!("{g}: {name} -> {e}"), lhs.equals(&rhs));
                            if new_vars.contains(name) {
                                images.push((name.clone(), env.eval(e)?));
                            }
                        }
                        for (pg, name, p) in printed.iter().filter(|(pg, _, _)| pg == g) {
                            let d = def_vals.iter().find(|(n, _)| n == name).map(|(_, d)| d.clone());
                            let lhs = match d {
                                Some(d) => old.apply(&d)?,
                                None => old.apply(&env.eval(name)?)?,
                            };
                            let rhs = to_old.apply(&env.eval(p)?)?;
                            push(
                                label,
                                CheckKind::PrintedForm,
                                format!("{pg}: printed {name} -> {p} does not hold"),
                                !lhs.equals(&rhs),
                            );
                        }
                        let carried = new_vars.iter().all(|v| images.iter().any(|(n, _)| n == v));
                        if carried {
                            next.push((g.clone(), Substitution::new(&tower, &tower, images)?));
                        }
                    }
                    if !defs.is_empty() {
                        current = next;
                    }
                    vars = new_vars;
                }
                Step::Invariant { label, exprs } => {
                    for e in exprs {
                        let f = env.eval(e)?;
                        for (g, s) in &current {
                            push(label, CheckKind::Invariance, format!("{g} fixes {e}"), s.apply(&f)?.equals(&f));
                        }
                    }
                }
                Step::InvariantUnder { label, gens, exprs } => {
                    for e in exprs {
                        let f = env.eval(e)?;
                        for g in gens {
                            let s = current
                                .iter()
                                .find(|(n, _)| n == g)
                                .map(|(_, s)| s)
                                .ok_or_else(|| malformed(format!("{label}: no current action for {g}")))?;
                            push(label, CheckKind::Invariance, format!("{g} fixes {e}"), s.apply(&f)?.equals(&f));
                        }
                    }
                }
                Step::Identity { label, lhs, rhs } => {
                    let ok = env.eval(lhs)?.equals(&env.eval(rhs)?);
                    push(label, CheckKind::Identity, format!("{lhs} = {rhs}"), ok);
                }
            }
        }
        Ok(checks)
    }

    fn check_header(
        &self,
        tower: &Arc<TowerSpec>,
        full: &[(String, Substitution)],
        h: &Header,
    ) -> Result<(bool, String), FixedFieldError> {
        let mut specs = Vec::new();
        for g in &h.gens {
            let s = &full.iter().find(|(n, _)| n == g).ok_or_else(|| FixedFieldError::Malformed {
                tag: self.name.clone(),
                msg: format!("header generator {g}"),
            })?
            .1;
            let mut images: Vec<(String, String)> = Vec::new();
            for i in 0..tower.len() {
                if tower.is_variable(i) && !["x", "y"].contains(&tower.name(i)) {
                    continue;
                }
                images.push((tower.name(i).to_string(), s.image_at(i).to_string()));
            }
            let pairs: Vec<(&str, &str)> = images.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            match GeneratorSpec::from_images(g, tower, &pairs) {
                Ok(spec) => specs.push(spec),
                Err(e) => return Ok((false, format!("generator {g}: {e}"))),
            }
        }
        let action = match build_action(tower, specs, CoefficientMode::BaseField) {
            Ok(a) => a,
            Err(e) => return Ok((false, format!("action rejected: {e}"))),
        };
        let rep = h.label.representative();
        let kernel = action.kernel_h();
        let expected = normal_subgroup_by_name(h.label, &h.h).map(|(_, g)| g);
        let ok_group = action.group.same_elements(&rep);
        let ok_h = expected.as_ref().is_some_and(|e| e.same_elements(&kernel.h));
        Ok((
            ok_group && ok_h,
            format!(
                "group {} (order {}, action order {}), H = <{}> (order {})",
                h.label.as_str(),
                rep.order(),
                action.group.order(),
                h.h,
                kernel.h.order()
            ),
        ))
    }
}

#[derive(Clone)]
struct Env {
    tower: Arc<TowerSpec>,
    macros: HashMap<String, RatFunc>,
}

impl Env {
    fn eval(&self, src: &str) -> Result<RatFunc, RatFuncError> {
        self.eval_expr(&parse_expr(src)?)
    }

    fn eval_expr(&self, e: &Expr) -> Result<RatFunc, RatFuncError> {
        let t = &self.tower;
        Ok(match e {
            Expr::Sym(s) => match self.macros.get(s) {
                Some(v) => v.clone(),
                None => RatFunc::symbol(t, s)?,
            },
            Expr::Int(_) => RatFunc::from_expr(t, e)?,
            Expr::Neg(a) => -&self.eval_expr(a)?,
            Expr::Add(a, b) => &self.eval_expr(a)? + &self.eval_expr(b)?,
            Expr::Sub(a, b) => &self.eval_expr(a)? - &self.eval_expr(b)?,
            Expr::Mul(a, b) => &self.eval_expr(a)? * &self.eval_expr(b)?,
            Expr::Div(a, b) => self.eval_expr(a)?.checked_div(&self.eval_expr(b)?)?,
            Expr::Pow(a, k) => self.eval_expr(a)?.powi(*k)?,
        })
    }
}

/// Replaces whole identifiers in expression text.
fn replace_idents(src: &str, map: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    let mut ident = String::new();
    let flush = |ident: &mut String, out: &mut String| {
        if !ident.is_empty() {
            match map.get(ident.as_str()) {
                Some(v) => out.push_str(&format!("({v})")),
                None => out.push_str(ident),
            }
            ident.clear();
        }
    };
    for ch in src.chars() {
        if ch.is_alphanumeric() || ch == '_' || ch == '\'' {
            if ident.is_empty() && ch.is_ascii_digit() {
                out.push(ch);
            } else {
                ident.push(ch);
            }
        } else {
            flush(&mut ident, &mut out);
            out.push(ch);
        }
    }
    flush(&mut ident, &mut out);
    out
}

/// Two fixed-field generators with their checks.
#[derive(Clone, Debug)]
pub struct GeneratorPair {
    pub u: RatFunc,
    pub v: RatFunc,
    pub verified_invariant_under: String,
    pub invariant: bool,
    pub independent: bool,
}

fn coefficient_tower(params: &[&str], extra: &[(&str, Relation)]) -> Result<Arc<TowerSpec>, RatFuncError> {
    let mut b = TowerSpec::builder().vars(&["x", "y"]);
    let mut seen: Vec<String> = Vec::new();
    for p in params {
        for s in parse_expr(p)?.symbols() {
            if !seen.contains(&s) && s != "x" && s != "y" && !extra.iter().any(|(n, _)| *n == s) {
                seen.push(s);
            }
        }
    }
    for s in &seen {
        b = b.free(s);
    }
    for (n, r) in extra {
        b = b.symbol(n, r.clone());
    }
    b.build()
}

fn subst_with(t: &Arc<TowerSpec>, pairs: &[(&str, String)]) -> Result<Substitution, RatFuncError> {
    let mut images = Vec::new();
    for (n, e) in pairs {
        images.push((n.to_string(), RatFunc::parse(t, e)?));
    }
    Substitution::new(t, t, images)
}

fn pair_from(
    t: &Arc<TowerSpec>,
    u: RatFunc,
    v: RatFunc,
    group: String,
    subs: &[Substitution],
) -> Result<GeneratorPair, RatFuncError> {
    let mut invariant = true;
    for s in subs {
        invariant &= s.apply(&u)?.equals(&u) && s.apply(&v)?.equals(&v);
    }
    let (i, j) = (t.index_of("x").unwrap(), t.index_of("y").unwrap());
    let independent = jacobian_independent_in(&u, &v, i, j);
    Ok(GeneratorPair { u, v, verified_invariant_under: group, invariant, independent })
}

/// `s = (xy+a)/(x+y)`, `t = (xy-a)/(x-y)` under `x ↦ a/x, y ↦ a/y`.
pub fn lemma21_basis(a: &str) -> Result<GeneratorPair, FixedFieldError> {
    let t = coefficient_tower(&[a], &[])?;
    let s = RatFunc::parse(&t, &format!("(x*y + ({a}))/(x + y)"))?;
    let tt = RatFunc::parse(&t, &format!("(x*y - ({a}))/(x - y)"))?;
    let g = subst_with(&t, &[("x", format!("({a})/x")), ("y", format!("({a})/y"))])?;
    Ok(pair_from(&t, s, tt, format!("<-I>: x -> {a}/x, y -> {a}/y"), &[g])?)
}

/// Invariants of `x ↦ a/x, y ↦ b/y` with `b = c(x + a/x) + d`.
pub fn lemma22_basis(a: &str, c: &str, d: &str) -> Result<GeneratorPair, FixedFieldError> {
    let t = coefficient_tower(&[a, c, d], &[])?;
    let cz = RatFunc::parse(&t, c)?.is_zero();
    let dz = RatFunc::parse(&t, d)?.is_zero();
    if cz && dz {
        return Err(FixedFieldError::Malformed { tag: "lemma22".into(), msg: "(c, d) = (0, 0)".into() });
    }
    let b = format!("(({c})*(x + ({a})/x) + ({d}))");
    let den = format!("(x*y - ({a})*{b}/(x*y))");
    let u = RatFunc::parse(&t, &format!("(x - ({a})/x)/{den}"))?;
    let v = RatFunc::parse(&t, &format!("(y - {b}/y)/{den}"))?;
    let g = subst_with(&t, &[("x", format!("({a})/x")), ("y", format!("{b}/y"))])?;
    Ok(pair_from(&t, u, v, format!("<-I>: x -> {a}/x, y -> b/y, b = {b}"), &[g])?)
}

/// Degree-four invariants of the three-cycle `x ↦ y ↦ b/(xy)`.
pub fn lemma23_basis(b: &str) -> Result<GeneratorPair, FixedFieldError> {
    let t = coefficient_tower(&[b], &[])?;
    let (u, v) = lemma23_pair(&t, b)?;
    let g = subst_with(&t, &[("x", "y".into()), ("y", format!("({b})/(x*y)"))])?;
    let g2 = g.compose(&g)?;
    Ok(pair_from(&t, u, v, format!("<sigma>: x -> y -> {b}/(xy)"), &[g, g2])?)
}

fn lemma23_pair(t: &Arc<TowerSpec>, b: &str) -> Result<(RatFunc, RatFunc), RatFuncError> {
    let den = format!("(y^2*x^4 - y^3*x^3 + y^4*x^2 - ({b})*y*x^2 - ({b})*y^2*x + ({b})^2)");
    let u = RatFunc::parse(t, &format!("y*(y^3*x^3 + ({b})*x^3 - 3*({b})*y*x^2 + ({b})^2)/{den}"))?;
    let v = RatFunc::parse(t, &format!("x*(x^3*y^3 + ({b})*y^3 - 3*({b})*x*y^2 + ({b})^2)/{den}"))?;
    Ok((u, v))
}

/// Eigenvectors of `x ↦ y ↦ 1/(xy)` over a tower containing `omega`.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub u: RatFunc,
    pub v: RatFunc,
    /// `σ(u) = ωu`.
    pub u_eigen: bool,
    /// `σ(v) = ω⁻¹v`.
    pub v_eigen: bool,
    /// `uv` and `u³` are fixed.
    pub products_invariant: bool,
    pub independent: bool,
}

pub fn lemma24_eigenbasis() -> Result<EigenPair, FixedFieldError> {
    let t = TowerSpec::builder().vars(&["x", "y"]).omega("omega").build()?;
    lemma24_on(&t)
}

pub fn lemma24_on(t: &Arc<TowerSpec>) -> Result<EigenPair, FixedFieldError> {
    let w = (0..t.len())
        .find(|&i| *t.relation(i) == Relation::Omega)
        .map(|i| t.name(i).to_string())
        .ok_or(FixedFieldError::MissingOmega)?;
    let u = RatFunc::parse(t, &format!("(1 + {w}^-1*x + {w}*x*y)/(1 + x + x*y)"))?;
    let v = RatFunc::parse(t, &format!("(1 + {w}*x + {w}^-1*x*y)/(1 + x + x*y)"))?;
    let g = subst_with(t, &[("x", "y".into()), ("y", "1/(x*y)".into())])?;
    let om = RatFunc::symbol(t, &w)?;
    let u_eigen = g.apply(&u)?.equals(&(&om * &u));
    let v_eigen = g.apply(&v)?.equals(&v.checked_div(&om)?);
    let uv = &u * &v;
    let u3 = u.powi(3)?;
    let products_invariant = g.apply(&uv)?.equals(&uv) && g.apply(&u3)?.equals(&u3);
    let (i, j) = (t.index_of("x").unwrap(), t.index_of("y").unwrap());
    let independent = jacobian_independent_in(&u, &v, i, j);
    Ok(EigenPair { u, v, u_eigen, v_eigen, products_invariant, independent })
}

/// Conic-bundle generators for `√a ↦ -√a, x ↦ x, y ↦ f(x)/y`.
#[derive(Clone, Debug)]
pub struct ConicBundle {
    pub z1: RatFunc,
    pub z2: RatFunc,
    pub invariant: bool,
    /// `z1² - a z2² = f(x)`.
    pub relation: bool,
    /// Jacobian of `(z1, z2)` in `y` together with `x` is nonzero.
    pub independent: bool,
    /// The variant with `x` in place of `y` fails to be invariant.
    pub x_variant_fails: bool,
}

pub fn theorem26_basis(a: &str, f: &str) -> Result<ConicBundle, FixedFieldError> {
    let t = coefficient_tower(&[a, f], &[])?;
    let t = {
        let mut b = TowerSpec::builder();
        for i in 0..t.len() {
            b = b.symbol(t.name(i), t.relation(i).clone());
        }
        b.sqrt("sqrt_a", a).build()?
    };
    let g = subst_with(&t, &[("sqrt_a", "-sqrt_a".into()), ("y", format!("({f})/y"))])?;
    let z1 = RatFunc::parse(&t, &format!("(y + ({f})/y)/2"))?;
    let z2 = RatFunc::parse(&t, &format!("(y - ({f})/y)/(2*sqrt_a)"))?;
    let invariant = g.apply(&z1)?.equals(&z1) && g.apply(&z2)?.equals(&z2);
    let lhs = &z1.powi(2)? - &(&RatFunc::parse(&t, a)? * &z2.powi(2)?);
    let relation = lhs.equals(&RatFunc::parse(&t, f)?);
    let (ix, iy) = (t.index_of("x").unwrap(), t.index_of("y").unwrap());
    let x = RatFunc::symbol(&t, "x")?;
    let independent = jacobian_independent_in(&x, &z1, ix, iy) || jacobian_independent_in(&x, &z2, ix, iy);
    let w1 = RatFunc::parse(&t, &format!("(x + ({f})/x)/2"))?;
    let w2 = RatFunc::parse(&t, &format!("(x - ({f})/x)/(2*sqrt_a)"))?;
    let x_variant_fails = !(g.apply(&w1)?.equals(&w1) && g.apply(&w2)?.equals(&w2));
    Ok(ConicBundle { z1, z2, invariant, relation, independent, x_variant_fails })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_pairs() {
        for a in ["a", "1", "-3"] {
            let p = lemma21_basis(a).unwrap();
            assert!(p.invariant && p.independent, "{a}");
        }
        for (a, c, d) in [("a", "c", "d"), ("1", "0", "1"), ("1", "1", "0")] {
            let p = lemma22_basis(a, c, d).unwrap();
            assert!(p.invariant && p.independent, "{a} {c} {d}");
        }
        assert!(lemma22_basis("1", "0", "0").is_err());
        for b in ["b", "1"] {
            let p = lemma23_basis(b).unwrap();
            assert!(p.invariant && p.independent, "{b}");
        }
        let e = lemma24_eigenbasis().unwrap();
        assert!(e.u_eigen && e.v_eigen && e.products_invariant && e.independent);
    }

    #[test]
    fn conic_bundle_generators() {
        for f in ["b", "x + 1", "b*(x^2 - c)"] {
            let z = theorem26_basis("a", f).unwrap();
            assert!(z.invariant && z.relation && z.independent && z.x_variant_fails, "{f}");
        }
    }

    #[test]
    fn identifiers_are_replaced_whole() {
        let m: BTreeMap<String, String> = [("c".to_string(), "3".to_string())].into();
        assert_eq!(replace_idents("c*cc + c^2 + 2c", &m), "(3)*cc + (3)^2 + 2(3)");
    }
}
