//! Quasi-monomial actions on K(x, y).
//!
//! Each group element sends `x_j ↦ c_j(σ)·x^{a_1j}·y^{a_2j}` and acts on the
//! constant generators of the tower by a field substitution.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::glz::{close_group, FiniteMatrixGroup, GlzError, IntMatrix2};
use crate::ratfunc::{MultiPoly as GenPoly, RatFuncError};
use crate::{RatFunc, Substitution, TowerSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ActionError {
    #[error("relation violated: {0} does not act as the multiplication table requires")]
    RelationViolation(String),
    #[error("generator {0} has a zero coefficient")]
    ZeroCoefficient(String),
    #[error("coefficient of generator {0} is not in the base field")]
    CoefficientOutsideBaseField(String),
    #[error("image of {var} under {generator} is not a coefficient times a monomial")]
    NotMonomial { generator: String, var: String },
    #[error("tower must declare variables x and y")]
    MissingVariables,
    #[error(transparent)]
    Glz(#[from] GlzError),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
}

/// Where the coefficients `c_j(σ)` are allowed to live.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientMode {
    /// Any element of K (symbolic verification of intermediate actions).
    General,
    /// Elements fixed by every field substitution, as the main theorem
    /// requires.
    BaseField,
}

/// Generator data: matrix part, the two coefficients and the action on the
/// constant generators of the tower.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub name: String,
    pub matrix: IntMatrix2,
    pub c1: RatFunc,
    pub c2: RatFunc,
    pub field: Vec<(String, RatFunc)>,
}

impl GeneratorSpec {
    /// Reads matrix and coefficients off explicit images such as
    /// `[("x", "b*y"), ("y", "c/x"), ("sqrt_a", "-sqrt_a")]`.
    pub fn from_images(name: &str, tower: &Arc<TowerSpec>, images: &[(&str, &str)]) -> Result<Self, ActionError> {
        let (ix, iy) = xy(tower)?;
        let mut field = Vec::new();
        let mut img_x = None;
        let mut img_y = None;
        for (sym, src) in images {
            let f = RatFunc::parse(tower, src)?;
            match *sym {
                "x" => img_x = Some(f),
                "y" => img_y = Some(f),
                _ => field.push((sym.to_string(), f)),
            }
        }
        let img_x = img_x.unwrap_or(RatFunc::symbol(tower, "x")?);
        let img_y = img_y.unwrap_or(RatFunc::symbol(tower, "y")?);
        let (ex, c1) = split_monomial(&img_x, ix, iy).ok_or_else(|| ActionError::NotMonomial {
            generator: name.to_string(),
            var: "x".into(),
        })?;
        let (ey, c2) = split_monomial(&img_y, ix, iy).ok_or_else(|| ActionError::NotMonomial {
            generator: name.to_string(),
            var: "y".into(),
        })?;
        let matrix = IntMatrix2::new(ex.0, ey.0, ex.1, ey.1)?;
        Ok(GeneratorSpec { name: name.to_string(), matrix, c1, c2, field })
    }
}

fn xy(tower: &Arc<TowerSpec>) -> Result<(usize, usize), ActionError> {
    match (tower.index_of("x"), tower.index_of("y")) {
        (Some(i), Some(j)) if tower.is_variable(i) && tower.is_variable(j) => Ok((i, j)),
        _ => Err(ActionError::MissingVariables),
    }
}

fn var_part(p: &GenPoly<BigRational>, ix: usize, iy: usize) -> Option<(i64, i64)> {
    let mut out = None;
    for (m, _) in p.terms() {
        let e = (m[ix] as i64, m[iy] as i64);
        match out {
            None => out = Some(e),
            Some(o) if o == e => {}
            Some(_) => return None,
        }
    }
    out
}

/// Writes `f = coeff · x^i y^j` with `coeff` free of x and y.
fn split_monomial(f: &RatFunc, ix: usize, iy: usize) -> Option<((i64, i64), RatFunc)> {
    if f.is_zero() {
        return Some(((0, 0), f.clone()));
    }
    let n = var_part(f.numer(), ix, iy)?;
    let d = var_part(f.denom(), ix, iy)?;
    let e = (n.0 - d.0, n.1 - d.1);
    let tower = f.tower();
    let mono = monomial(tower, ix, iy, e);
    let coeff = f.checked_div(&mono).ok()?;
    coeff.is_constant_in_variables().then_some((e, coeff))
}

fn monomial(tower: &Arc<TowerSpec>, ix: usize, iy: usize, e: (i64, i64)) -> RatFunc {
    let x = RatFunc::from_poly(GenPoly::symbol(tower, ix));
    let y = RatFunc::from_poly(GenPoly::symbol(tower, iy));
    &x.powi(e.0).expect("x is nonzero") * &y.powi(e.1).expect("y is nonzero")
}

#[derive(Clone, Debug)]
pub struct ActionElement {
    pub matrix: IntMatrix2,
    pub subst: Substitution,
    /// Shortest word in the generators reaching this element.
    pub word: String,
}

#[derive(Clone, Debug)]
pub struct QuasiMonomialAction {
    pub group: FiniteMatrixGroup,
    pub tower: Arc<TowerSpec>,
    pub generators: Vec<GeneratorSpec>,
    elements: BTreeMap<IntMatrix2, ActionElement>,
}

#[derive(Clone, Debug)]
pub struct KernelReport {
    pub h: FiniteMatrixGroup,
    pub quotient_order: usize,
}

fn generator_substitution(tower: &Arc<TowerSpec>, g: &GeneratorSpec) -> Result<Substitution, ActionError> {
    let (ix, iy) = xy(tower)?;
    let m = g.matrix;
    let img_x = &g.c1 * &monomial(tower, ix, iy, (m.a11, m.a21));
    let img_y = &g.c2 * &monomial(tower, ix, iy, (m.a12, m.a22));
    let mut images = vec![("x".to_string(), img_x), ("y".to_string(), img_y)];
    images.extend(g.field.iter().cloned());
    Ok(Substitution::new(tower, tower, images)?)
}

pub fn build_action(
    tower: &Arc<TowerSpec>,
    generators: Vec<GeneratorSpec>,
    mode: CoefficientMode,
) -> Result<QuasiMonomialAction, ActionError> {
    xy(tower)?;
    let mut subs = Vec::new();
    for g in &generators {
        if g.c1.is_zero() || g.c2.is_zero() {
            return Err(ActionError::ZeroCoefficient(g.name.clone()));
        }
        if !g.c1.is_constant_in_variables() || !g.c2.is_constant_in_variables() {
            return Err(ActionError::CoefficientOutsideBaseField(g.name.clone()));
        }
        subs.push(generator_substitution(tower, g)?);
    }
    let group = close_group(&generators.iter().map(|g| g.matrix).collect::<Vec<_>>())?;
    let mut elements: BTreeMap<IntMatrix2, ActionElement> = BTreeMap::new();
    elements.insert(
        IntMatrix2::IDENTITY,
        ActionElement { matrix: IntMatrix2::IDENTITY, subst: Substitution::identity(tower), word: "1".into() },
    );
    let mut queue = VecDeque::from([IntMatrix2::IDENTITY]);
    while let Some(m) = queue.pop_front() {
        let cur = elements[&m].clone();
        for (g, s) in generators.iter().zip(&subs) {
            let nm = m * g.matrix;
            let ns = cur.subst.compose(s)?;
            let word = if cur.word == "1" { g.name.clone() } else { format!("{}*{}", cur.word, g.name) };
            match elements.get(&nm) {
                Some(e) => {
                    if !e.subst.equals(&ns) {
                        return Err(ActionError::RelationViolation(word));
                    }
                }
                None => {
                    elements.insert(nm, ActionElement { matrix: nm, subst: ns, word });
                    queue.push_back(nm);
                }
            }
        }
    }
    let action = QuasiMonomialAction { group, tower: tower.clone(), generators, elements };
    action.check_table()?;
    if mode == CoefficientMode::BaseField {
        action.check_base_field()?;
    }
    Ok(action)
}

impl QuasiMonomialAction {
    pub fn elements(&self) -> impl Iterator<Item = &ActionElement> {
        self.elements.values()
    }

    pub fn element(&self, m: &IntMatrix2) -> Option<&ActionElement> {
        self.elements.get(m)
    }

    fn check_table(&self) -> Result<(), ActionError> {
        for a in self.elements.values() {
            for b in self.elements.values() {
                let prod = a.subst.compose(&b.subst)?;
                let expected = &self.elements[&(a.matrix * b.matrix)];
                if !prod.equals(&expected.subst) {
                    return Err(ActionError::RelationViolation(format!("({})*({})", a.word, b.word)));
                }
            }
        }
        Ok(())
    }

    /// `(c1(σ), c2(σ))` for an element.
    pub fn coefficients(&self, e: &ActionElement) -> (RatFunc, RatFunc) {
        let (ix, iy) = xy(&self.tower).expect("checked at build");
        let m = e.matrix;
        let cx = e.subst.image("x").unwrap().checked_div(&monomial(&self.tower, ix, iy, (m.a11, m.a21)));
        let cy = e.subst.image("y").unwrap().checked_div(&monomial(&self.tower, ix, iy, (m.a12, m.a22)));
        (cx.expect("monomial is nonzero"), cy.expect("monomial is nonzero"))
    }

    fn check_base_field(&self) -> Result<(), ActionError> {
        for g in &self.generators {
            for c in [&g.c1, &g.c2] {
                for e in self.elements.values() {
                    if !e.subst.apply(c)?.equals(c) {
                        return Err(ActionError::CoefficientOutsideBaseField(g.name.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    fn fixes_constants(&self, e: &ActionElement) -> bool {
        (0..self.tower.len())
            .filter(|&i| !self.tower.is_variable(i))
            .all(|i| {
                let z = RatFunc::from_poly(GenPoly::symbol(&self.tower, i));
                e.subst.image_at(i).equals(&z)
            })
    }

    /// Elements acting trivially on the constants.
    pub fn kernel_h(&self) -> KernelReport {
        let gens: Vec<IntMatrix2> =
            self.elements.values().filter(|e| self.fixes_constants(e)).map(|e| e.matrix).collect();
        let h = close_group(&gens).expect("subgroup of a finite group");
        assert_eq!(h.order(), gens.len(), "kernel is closed");
        assert!(h.is_normal_in(&self.group), "kernel is normal");
        let quotient_order = self.group.order() / h.order();
        KernelReport { h, quotient_order }
    }

    pub fn is_invariant(&self, f: &RatFunc) -> Result<bool, ActionError> {
        for e in self.elements.values() {
            if !e.subst.apply(f)?.equals(f) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn kernel_h(a: &QuasiMonomialAction) -> KernelReport {
    a.kernel_h()
}

pub fn is_invariant(f: &RatFunc, a: &QuasiMonomialAction) -> Result<bool, ActionError> {
    a.is_invariant(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glz::ConjugacyLabel;

    fn tower() -> Arc<TowerSpec> {
        TowerSpec::builder().vars(&["x", "y"]).frees(&["a", "b", "c"]).sqrt("sqrt_a", "a").build().unwrap()
    }

    #[test]
    fn c2_1_example() {
        let t = tower();
        let g = GeneratorSpec::from_images("-I", &t, &[("sqrt_a", "-sqrt_a"), ("x", "b/x"), ("y", "c/y")]).unwrap();
        assert_eq!(g.matrix, IntMatrix2::MINUS_I);
        let a = build_action(&t, vec![g], CoefficientMode::BaseField).unwrap();
        assert_eq!(a.group.order(), 2);
        assert_eq!(a.kernel_h().h.order(), 1);
        assert!(!a.is_invariant(&RatFunc::parse(&t, "x").unwrap()).unwrap());
    }

    #[test]
    fn c4_example() {
        let t = tower();
        let g = GeneratorSpec::from_images("sigma", &t, &[("x", "y"), ("y", "c/x")]).unwrap();
        let a = build_action(&t, vec![g], CoefficientMode::BaseField).unwrap();
        assert!(a.group.same_elements(&ConjugacyLabel::C4.representative()));
        assert_eq!(a.kernel_h().h.order(), 4);
        let g = GeneratorSpec::from_images("sigma", &t, &[("x", "y"), ("y", "c/x"), ("sqrt_a", "-sqrt_a")]).unwrap();
        let a = build_action(&t, vec![g], CoefficientMode::BaseField).unwrap();
        let h = a.kernel_h().h;
        assert_eq!(h.elements, vec![IntMatrix2::MINUS_I, IntMatrix2::IDENTITY]);
    }

    #[test]
    fn zero_coefficient() {
        let t = tower();
        let g = GeneratorSpec {
            name: "-I".into(),
            matrix: IntMatrix2::MINUS_I,
            c1: RatFunc::zero(&t),
            c2: RatFunc::one(&t),
            field: vec![],
        };
        assert_eq!(
            build_action(&t, vec![g], CoefficientMode::General).unwrap_err(),
            ActionError::ZeroCoefficient("-I".into())
        );
    }

    #[test]
    fn relation_violation() {
        let t = tower();
        // σ: x ↦ y, y ↦ 1/x with √a ↦ −√a has σ² = −I acting as x ↦ 1/x, √a ↦ √a;
        // pairing it with −I moving √a breaks the table.
        let s = GeneratorSpec::from_images("sigma", &t, &[("x", "y"), ("y", "1/x"), ("sqrt_a", "-sqrt_a")]).unwrap();
        let m = GeneratorSpec::from_images("-I", &t, &[("x", "1/x"), ("y", "1/y"), ("sqrt_a", "-sqrt_a")]).unwrap();
        assert!(matches!(
            build_action(&t, vec![s, m], CoefficientMode::General),
            Err(ActionError::RelationViolation(_))
        ));
        let bad = GeneratorSpec::from_images("-I", &t, &[("x", "b/x"), ("y", "c/y"), ("b", "-b")]).unwrap();
        assert!(matches!(
            build_action(&t, vec![bad], CoefficientMode::General),
            Err(ActionError::RelationViolation(_))
        ));
    }

    #[test]
    fn base_field_mode_rejects_moved_coefficients() {
        let t = tower();
        let g = GeneratorSpec::from_images(
            "lambda",
            &t,
            &[("sqrt_a", "-sqrt_a"), ("x", "(1+sqrt_a)/(1-sqrt_a)*x"), ("y", "1/y")],
        )
        .unwrap();
        assert_eq!(g.matrix, IntMatrix2::LAMBDA);
        assert!(build_action(&t, vec![g.clone()], CoefficientMode::General).is_ok());
        assert_eq!(
            build_action(&t, vec![g], CoefficientMode::BaseField).unwrap_err(),
            ActionError::CoefficientOutsideBaseField("lambda".into())
        );
    }

    #[test]
    fn non_monomial_image() {
        let t = tower();
        assert!(matches!(
            GeneratorSpec::from_images("g", &t, &[("x", "x+1")]),
            Err(ActionError::NotMonomial { .. })
        ));
    }
}
