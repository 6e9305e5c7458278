//! Exact rational functions over a formal radical tower.
//!
//! A [`TowerSpec`] lists function variables (`x`, `y`, and any auxiliary
//! variables a computation needs) together with constant generators. Each
//! generator is transcendental or bound by a relation in strictly earlier
//! generators: a square root, a cube root, or a primitive cube root of unity.
//! Polynomials are kept in the normal form where bound generators appear with
//! exponent below their relation degree; that form is unique, so a polynomial
//! is zero exactly when its term map is empty.

mod parse;
mod scalar;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

pub use parse::{parse_expr, Expr};
pub use scalar::Scalar;

pub type Mono = Vec<u32>;
type Terms<C> = BTreeMap<Mono, C>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RatFuncError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("relation for `{0}` must be a polynomial in earlier generators")]
    NotTriangular(String),
    #[error("at most one omega generator is allowed")]
    MultipleOmega,
    #[error("`{0}` is reserved for a function variable")]
    ReservedName(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("image of `{0}` does not satisfy its relation")]
    InconsistentImage(String),
    #[error("operands live over different towers")]
    TowerMismatch,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Relation attached to a symbol, written as expression text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Variable,
    Free,
    Sqrt(String),
    Cbrt(String),
    Omega,
}

#[derive(Clone, Debug)]
enum Bound<C> {
    None,
    Power(u32, Terms<C>),
}

#[derive(Clone, Debug)]
struct SymbolDef<C> {
    name: String,
    rel: Relation,
    bound: Bound<C>,
}

/// Ordered symbol table with triangular relations.
#[derive(Clone, Debug)]
pub struct TowerSpec<C: Scalar> {
    syms: Vec<SymbolDef<C>>,
    index: HashMap<String, usize>,
}

#[derive(Clone, Debug)]
pub struct TowerBuilder<C> {
    entries: Vec<(String, Relation)>,
    _scalar: PhantomData<C>,
}

impl<C: Scalar> TowerBuilder<C> {
    pub fn var(mut self, name: &str) -> Self {
        self.entries.push((name.to_string(), Relation::Variable));
        self
    }

    pub fn vars(mut self, names: &[&str]) -> Self {
        for n in names {
            self.entries.push((n.to_string(), Relation::Variable));
        }
        self
    }

    pub fn free(mut self, name: &str) -> Self {
        self.entries.push((name.to_string(), Relation::Free));
        self
    }

    pub fn frees(mut self, names: &[&str]) -> Self {
        for n in names {
            self.entries.push((n.to_string(), Relation::Free));
        }
        self
    }

    pub fn sqrt(mut self, name: &str, radicand: &str) -> Self {
        self.entries.push((name.to_string(), Relation::Sqrt(radicand.to_string())));
        self
    }

    pub fn cbrt(mut self, name: &str, radicand: &str) -> Self {
        self.entries.push((name.to_string(), Relation::Cbrt(radicand.to_string())));
        self
    }

    pub fn omega(mut self, name: &str) -> Self {
        self.entries.push((name.to_string(), Relation::Omega));
        self
    }

    pub fn symbol(mut self, name: &str, rel: Relation) -> Self {
        self.entries.push((name.to_string(), rel));
        self
    }

    pub fn build(self) -> Result<Arc<TowerSpec<C>>, RatFuncError> {
        TowerSpec::new(self.entries).map(Arc::new)
    }
}

impl<C: Scalar> TowerSpec<C> {
    pub fn builder() -> TowerBuilder<C> {
        TowerBuilder { entries: Vec::new(), _scalar: PhantomData }
    }

    pub fn new(entries: Vec<(String, Relation)>) -> Result<Self, RatFuncError> {
        let mut index = HashMap::new();
        let mut omegas = 0;
        for (i, (name, rel)) in entries.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(RatFuncError::DuplicateSymbol(name.clone()));
            }
            if !matches!(rel, Relation::Variable) && (name == "x" || name == "y") {
                return Err(RatFuncError::ReservedName(name.clone()));
            }
            if matches!(rel, Relation::Omega) {
                omegas += 1;
            }
        }
        if omegas > 1 {
            return Err(RatFuncError::MultipleOmega);
        }
        let n = entries.len();
        let mut tower = TowerSpec {
            syms: entries
                .iter()
                .map(|(name, rel)| SymbolDef { name: name.clone(), rel: rel.clone(), bound: Bound::None })
                .collect(),
            index,
        };
        for i in 0..n {
            let (name, rel) = &entries[i];
            let bound = match rel {
                Relation::Variable | Relation::Free => Bound::None,
                Relation::Omega => {
                    let mut t = Terms::new();
                    t.insert(vec![0; n], -C::one());
                    let mut m = vec![0; n];
                    m[i] = 1;
                    t.insert(m, -C::one());
                    Bound::Power(2, t)
                }
                Relation::Sqrt(src) | Relation::Cbrt(src) => {
                    let deg = if matches!(rel, Relation::Sqrt(_)) { 2 } else { 3 };
                    let expr = parse_expr(src)?;
                    for s in expr.symbols() {
                        match tower.index.get(&s) {
                            Some(&j) if j < i && !matches!(entries[j].1, Relation::Variable) => {}
                            Some(_) => return Err(RatFuncError::NotTriangular(name.clone())),
                            None => return Err(RatFuncError::UnknownSymbol(s)),
                        }
                    }
                    let t = tower.eval_poly(&expr).ok_or_else(|| RatFuncError::NotTriangular(name.clone()))?;
                    Bound::Power(deg, tower.reduce(t))
                }
            };
            tower.syms[i].bound = bound;
        }
        Ok(tower)
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.syms[i].name
    }

    pub fn relation(&self, i: usize) -> &Relation {
        &self.syms[i].rel
    }

    pub fn is_variable(&self, i: usize) -> bool {
        matches!(self.syms[i].rel, Relation::Variable)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.syms.iter().map(|s| s.name.as_str())
    }

    pub fn variables(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_variable(i)).collect()
    }

    /// Polynomial value of an expression using only `+ - *`, nonnegative powers
    /// and division by nonzero integers.
    fn eval_poly(&self, e: &Expr) -> Option<Terms<C>> {
        let n = self.len();
        Some(match e {
            Expr::Int(k) => const_terms(n, C::from_bigint(k)),
            Expr::Sym(s) => {
                let mut m = vec![0; n];
                m[*self.index.get(s)?] = 1;
                let mut t = Terms::new();
                t.insert(m, C::one());
                t
            }
            Expr::Neg(a) => neg_terms(self.eval_poly(a)?),
            Expr::Add(a, b) => add_terms(self.eval_poly(a)?, &self.eval_poly(b)?, false),
            Expr::Sub(a, b) => add_terms(self.eval_poly(a)?, &self.eval_poly(b)?, true),
            Expr::Mul(a, b) => self.mul(&self.eval_poly(a)?, &self.eval_poly(b)?),
            Expr::Div(a, b) => match &**b {
                Expr::Int(k) if *k != BigInt::from(0) => {
                    let inv = C::one() / C::from_bigint(k);
                    scale_terms(self.eval_poly(a)?, &inv)
                }
                _ => return None,
            },
            Expr::Pow(a, k) => {
                if *k < 0 {
                    return None;
                }
                let base = self.eval_poly(a)?;
                let mut acc = const_terms(n, C::one());
                for _ in 0..*k {
                    acc = self.mul(&acc, &base);
                }
                acc
            }
        })
    }

    fn first_reducible(&self, m: &Mono) -> Option<usize> {
        (0..m.len()).rev().find(|&i| match &self.syms[i].bound {
            Bound::Power(d, _) => m[i] >= *d,
            Bound::None => false,
        })
    }

    /// Rewrite until every bound exponent sits below its relation degree.
    fn reduce(&self, terms: Terms<C>) -> Terms<C> {
        let mut out = Terms::new();
        let mut work: Vec<(Mono, C)> = Vec::new();
        for (m, c) in terms {
            if self.first_reducible(&m).is_some() {
                work.push((m, c));
            } else {
                accumulate(&mut out, m, c);
            }
        }
        while let Some((m, c)) = work.pop() {
            match self.first_reducible(&m) {
                None => accumulate(&mut out, m, c),
                Some(i) => {
                    let Bound::Power(d, rel) = &self.syms[i].bound else { unreachable!() };
                    let mut rest = m;
                    rest[i] -= d;
                    for (rm, rc) in rel {
                        let nm: Mono = rest.iter().zip(rm).map(|(a, b)| a + b).collect();
                        work.push((nm, c.clone() * rc.clone()));
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn mul(&self, a: &Terms<C>, b: &Terms<C>) -> Terms<C> {
        let mut out = Terms::new();
        let mut needs_reduce = false;
        for (ma, ca) in a {
            for (mb, cb) in b {
                let m: Mono = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                if !needs_reduce && self.first_reducible(&m).is_some() {
                    needs_reduce = true;
                }
                accumulate(&mut out, m, ca.clone() * cb.clone());
            }
        }
        out.retain(|_, c| !c.is_zero());
        if needs_reduce {
            self.reduce(out)
        } else {
            out
        }
    }
}

fn accumulate<C: Scalar>(out: &mut Terms<C>, m: Mono, c: C) {
    match out.get_mut(&m) {
        Some(v) => *v = v.clone() + c,
        None => {
            out.insert(m, c);
        }
    }
}

fn const_terms<C: Scalar>(n: usize, c: C) -> Terms<C> {
    let mut t = Terms::new();
    if !c.is_zero() {
        t.insert(vec![0; n], c);
    }
    t
}

fn neg_terms<C: Scalar>(t: Terms<C>) -> Terms<C> {
    t.into_iter().map(|(m, c)| (m, -c)).collect()
}

fn scale_terms<C: Scalar>(t: Terms<C>, s: &C) -> Terms<C> {
    if s.is_zero() {
        return Terms::new();
    }
    t.into_iter().map(|(m, c)| (m, c * s.clone())).collect()
}

fn add_terms<C: Scalar>(mut a: Terms<C>, b: &Terms<C>, subtract: bool) -> Terms<C> {
    for (m, c) in b {
        let c = if subtract { -c.clone() } else { c.clone() };
        accumulate(&mut a, m.clone(), c);
    }
    a.retain(|_, c| !c.is_zero());
    a
}

/// Sparse polynomial in normal form over a tower.
#[derive(Clone, Debug)]
pub struct MultiPoly<C: Scalar> {
    terms: Terms<C>,
    tower: Arc<TowerSpec<C>>,
}

impl<C: Scalar> MultiPoly<C> {
    pub fn zero(tower: &Arc<TowerSpec<C>>) -> Self {
        MultiPoly { terms: Terms::new(), tower: tower.clone() }
    }

    pub fn constant(tower: &Arc<TowerSpec<C>>, c: C) -> Self {
        MultiPoly { terms: const_terms(tower.len(), c), tower: tower.clone() }
    }

    pub fn symbol(tower: &Arc<TowerSpec<C>>, i: usize) -> Self {
        let mut m = vec![0; tower.len()];
        m[i] = 1;
        Self::from_terms(tower, [(m, C::one())])
    }

    /// Builds a polynomial from raw terms and brings it to normal form.
    pub fn from_terms(tower: &Arc<TowerSpec<C>>, terms: impl IntoIterator<Item = (Mono, C)>) -> Self {
        let mut t = Terms::new();
        for (m, c) in terms {
            assert_eq!(m.len(), tower.len(), "monomial length must match tower");
            accumulate(&mut t, m, c);
        }
        t.retain(|_, c| !c.is_zero());
        MultiPoly { terms: tower.reduce(t), tower: tower.clone() }
    }

    pub fn tower(&self) -> &Arc<TowerSpec<C>> {
        &self.tower
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    pub fn mentions(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m[i] > 0)
    }

    fn same_tower(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.tower, &other.tower) || self.tower.names().eq(other.tower.names()),
            "{}",
            RatFuncError::TowerMismatch
        );
    }

    pub fn scale(&self, s: &C) -> Self {
        MultiPoly { terms: scale_terms(self.terms.clone(), s), tower: self.tower.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.tower, C::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative; generators other than `i` are constants.
    pub fn derivative(&self, i: usize) -> Self {
        let mut t = Terms::new();
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm[i] -= 1;
            accumulate(&mut t, nm, c.clone() * C::from_i64(m[i] as i64));
        }
        t.retain(|_, c| !c.is_zero());
        MultiPoly { terms: self.tower.reduce(t), tower: self.tower.clone() }
    }

    fn leading(&self) -> Option<(&Mono, &C)> {
        self.terms.iter().next_back()
    }

    /// Componentwise minimum exponent over unbound symbols.
    fn monomial_content(&self) -> Mono {
        let n = self.tower.len();
        let mut out: Option<Mono> = None;
        for m in self.terms.keys() {
            out = Some(match out {
                None => m.clone(),
                Some(o) => o.iter().zip(m).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        let mut out = out.unwrap_or_else(|| vec![0; n]);
        for (i, e) in out.iter_mut().enumerate() {
            if !matches!(self.tower.syms[i].bound, Bound::None) {
                *e = 0;
            }
        }
        out
    }

    fn divide_monomial(&self, d: &Mono) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.iter().zip(d).map(|(a, b)| a - b).collect(), c.clone()))
            .collect();
        MultiPoly { terms, tower: self.tower.clone() }
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.same_tower(other);
        self.terms == other.terms
    }
}

impl<C: Scalar> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_display();
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.tower.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.tower.name(i), e)),
                }
            }
            if factors.is_empty() || !abs.is_one() {
                let s = abs.to_string();
                if s.contains('/') && !factors.is_empty() {
                    factors.insert(0, format!("({s})"));
                } else {
                    factors.insert(0, s);
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<C: Scalar> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: Self) -> MultiPoly<C> {
        self.same_tower(rhs);
        MultiPoly { terms: add_terms(self.terms.clone(), &rhs.terms, false), tower: self.tower.clone() }
    }
}

impl<C: Scalar> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: Self) -> MultiPoly<C> {
        self.same_tower(rhs);
        MultiPoly { terms: add_terms(self.terms.clone(), &rhs.terms, true), tower: self.tower.clone() }
    }
}

impl<C: Scalar> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: Self) -> MultiPoly<C> {
        self.same_tower(rhs);
        MultiPoly { terms: self.tower.mul(&self.terms, &rhs.terms), tower: self.tower.clone() }
    }
}

impl<C: Scalar> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly { terms: neg_terms(self.terms.clone()), tower: self.tower.clone() }
    }
}

/// Reduce `p` to normal form over `t`.
pub fn normal_form<C: Scalar>(p: &MultiPoly<C>, t: &Arc<TowerSpec<C>>) -> Result<MultiPoly<C>, RatFuncError> {
    if p.tower.len() != t.len() || !p.tower.names().eq(t.names()) {
        return Err(RatFuncError::TowerMismatch);
    }
    Ok(MultiPoly { terms: t.reduce(p.terms.clone()), tower: t.clone() })
}

/// Quotient of two normal-form polynomials with nonzero denominator.
#[derive(Clone, Debug)]
pub struct RatFunc<C: Scalar> {
    num: MultiPoly<C>,
    den: MultiPoly<C>,
}

impl<C: Scalar> RatFunc<C> {
    pub fn new(num: MultiPoly<C>, den: MultiPoly<C>) -> Result<Self, RatFuncError> {
        num.same_tower(&den);
        if den.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        Ok(RatFunc { num, den }.tidy())
    }

    pub fn from_poly(p: MultiPoly<C>) -> Self {
        let den = MultiPoly::constant(&p.tower, C::one());
        RatFunc { num: p, den }
    }

    pub fn constant(tower: &Arc<TowerSpec<C>>, c: C) -> Self {
        Self::from_poly(MultiPoly::constant(tower, c))
    }

    pub fn from_int(tower: &Arc<TowerSpec<C>>, n: i64) -> Self {
        Self::constant(tower, C::from_i64(n))
    }

    pub fn zero(tower: &Arc<TowerSpec<C>>) -> Self {
        Self::constant(tower, C::zero())
    }

    pub fn one(tower: &Arc<TowerSpec<C>>) -> Self {
        Self::constant(tower, C::one())
    }

    pub fn symbol(tower: &Arc<TowerSpec<C>>, name: &str) -> Result<Self, RatFuncError> {
        let i = tower.index_of(name).ok_or_else(|| RatFuncError::UnknownSymbol(name.to_string()))?;
        Ok(Self::from_poly(MultiPoly::symbol(tower, i)))
    }

    pub fn parse(tower: &Arc<TowerSpec<C>>, src: &str) -> Result<Self, RatFuncError> {
        Self::from_expr(tower, &parse_expr(src)?)
    }

    pub fn from_expr(tower: &Arc<TowerSpec<C>>, e: &Expr) -> Result<Self, RatFuncError> {
        Ok(match e {
            Expr::Int(k) => Self::constant(tower, C::from_bigint(k)),
            Expr::Sym(s) => Self::symbol(tower, s)?,
            Expr::Neg(a) => -&Self::from_expr(tower, a)?,
            Expr::Add(a, b) => &Self::from_expr(tower, a)? + &Self::from_expr(tower, b)?,
            Expr::Sub(a, b) => &Self::from_expr(tower, a)? - &Self::from_expr(tower, b)?,
            Expr::Mul(a, b) => &Self::from_expr(tower, a)? * &Self::from_expr(tower, b)?,
            Expr::Div(a, b) => Self::from_expr(tower, a)?.checked_div(&Self::from_expr(tower, b)?)?,
            Expr::Pow(a, k) => Self::from_expr(tower, a)?.powi(*k)?,
        })
    }

    pub fn tower(&self) -> &Arc<TowerSpec<C>> {
        &self.num.tower
    }

    pub fn numer(&self) -> &MultiPoly<C> {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<C> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn mentions(&self, i: usize) -> bool {
        self.num.mentions(i) || self.den.mentions(i)
    }

    /// Free of every function variable of the tower.
    pub fn is_constant_in_variables(&self) -> bool {
        self.tower().variables().into_iter().all(|i| !self.mentions(i))
    }

    /// Strip unbound monomial content and make the denominator's leading
    /// coefficient one.
    fn tidy(self) -> Self {
        let RatFunc { mut num, mut den } = self;
        if num.is_zero() {
            return RatFunc { den: MultiPoly::constant(&num.tower, C::one()), num };
        }
        let a = num.monomial_content();
        let b = den.monomial_content();
        let g: Mono = a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect();
        if g.iter().any(|&e| e > 0) {
            num = num.divide_monomial(&g);
            den = den.divide_monomial(&g);
        }
        let lead = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lead.is_one() {
            let inv = C::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, RatFuncError> {
        if rhs.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn inv(&self) -> Result<Self, RatFuncError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn powi(&self, k: i64) -> Result<Self, RatFuncError> {
        let e = k.unsigned_abs() as u32;
        let p = RatFunc { num: self.num.pow(e), den: self.den.pow(e) };
        if k < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    pub fn equals(&self, other: &Self) -> bool {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }

    pub fn derivative(&self, i: usize) -> Self {
        let n = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        RatFunc::new(n, &self.den * &self.den).expect("square of nonzero denominator")
    }
}

impl<C: Scalar> fmt::Display for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.den.as_constant() {
            Some(c) if c.is_one() => write!(f, "{}", self.num),
            _ => {
                let wrap = |p: &MultiPoly<C>| {
                    if p.num_terms() > 1 {
                        format!("({p})")
                    } else {
                        p.to_string()
                    }
                };
                let den = self.den.to_string();
                let bare = den.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
                if bare {
                    write!(f, "{}/{den}", wrap(&self.num))
                } else {
                    write!(f, "{}/({den})", wrap(&self.num))
                }
            }
        }
    }
}

impl<C: Scalar> Add for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn add(self, rhs: Self) -> RatFunc<C> {
        if self.den.equals(&rhs.den) {
            return RatFunc { num: &self.num + &rhs.num, den: self.den.clone() }.tidy();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc { num, den: &self.den * &rhs.den }.tidy()
    }
}

impl<C: Scalar> Sub for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn sub(self, rhs: Self) -> RatFunc<C> {
        self + &(-rhs)
    }
}

impl<C: Scalar> Mul for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn mul(self, rhs: Self) -> RatFunc<C> {
        RatFunc { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.tidy()
    }
}

impl<C: Scalar> Neg for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

/// Cross-multiplication equality test.
pub fn rf_equal<C: Scalar>(f: &RatFunc<C>, g: &RatFunc<C>, t: &Arc<TowerSpec<C>>) -> Result<bool, RatFuncError> {
    if f.den.is_zero() || g.den.is_zero() {
        return Err(RatFuncError::ZeroDenominator);
    }
    let lhs = normal_form(&(&f.num * &g.den), t)?;
    let rhs = normal_form(&(&g.num * &f.den), t)?;
    Ok((&lhs - &rhs).is_zero())
}

/// Simultaneous substitution of every source symbol by a rational function
/// over the target tower.
#[derive(Clone, Debug)]
pub struct Substitution<C: Scalar> {
    source: Arc<TowerSpec<C>>,
    target: Arc<TowerSpec<C>>,
    images: Vec<RatFunc<C>>,
}

impl<C: Scalar> Substitution<C> {
    pub fn identity(tower: &Arc<TowerSpec<C>>) -> Self {
        let images = (0..tower.len()).map(|i| RatFunc::from_poly(MultiPoly::symbol(tower, i))).collect();
        Substitution { source: tower.clone(), target: tower.clone(), images }
    }

    /// Symbols not listed map to the same-named symbol of the target.
    pub fn new(
        source: &Arc<TowerSpec<C>>,
        target: &Arc<TowerSpec<C>>,
        images: impl IntoIterator<Item = (String, RatFunc<C>)>,
    ) -> Result<Self, RatFuncError> {
        let mut slots: Vec<Option<RatFunc<C>>> = vec![None; source.len()];
        for (name, f) in images {
            let i = source.index_of(&name).ok_or(RatFuncError::UnknownSymbol(name))?;
            slots[i] = Some(f);
        }
        let mut out = Vec::with_capacity(slots.len());
        for (i, s) in slots.into_iter().enumerate() {
            out.push(match s {
                Some(f) => f,
                None => RatFunc::symbol(target, source.name(i))?,
            });
        }
        let sub = Substitution { source: source.clone(), target: target.clone(), images: out };
        sub.check_relations()?;
        Ok(sub)
    }

    /// Parses `name -> expression` pairs over one tower.
    pub fn parse(tower: &Arc<TowerSpec<C>>, pairs: &[(&str, &str)]) -> Result<Self, RatFuncError> {
        let mut images = Vec::new();
        for (n, e) in pairs {
            images.push((n.to_string(), RatFunc::parse(tower, e)?));
        }
        Self::new(tower, tower, images)
    }

    fn check_relations(&self) -> Result<(), RatFuncError> {
        for (i, sym) in self.source.syms.iter().enumerate() {
            let img = &self.images[i];
            let ok = match &sym.bound {
                Bound::None => true,
                Bound::Power(d, rel) => {
                    let rel = RatFunc::from_poly(MultiPoly { terms: rel.clone(), tower: self.source.clone() });
                    let lhs = img.powi(*d as i64)?;
                    lhs.equals(&self.apply(&rel)?)
                }
            };
            if !ok {
                return Err(RatFuncError::InconsistentImage(sym.name.clone()));
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<TowerSpec<C>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TowerSpec<C>> {
        &self.target
    }

    pub fn image(&self, name: &str) -> Option<&RatFunc<C>> {
        self.source.index_of(name).map(|i| &self.images[i])
    }

    pub fn image_at(&self, i: usize) -> &RatFunc<C> {
        &self.images[i]
    }

    pub fn apply(&self, f: &RatFunc<C>) -> Result<RatFunc<C>, RatFuncError> {
        let n = self.source.len();
        let mut top = vec![0u32; n];
        for p in [&f.num, &f.den] {
            for m in p.terms.keys() {
                for i in 0..n {
                    top[i] = top[i].max(m[i]);
                }
            }
        }
        let mut cache: HashMap<(usize, u32, bool), MultiPoly<C>> = HashMap::new();
        let num = self.homogenize(&f.num, &top, &mut cache);
        let den = self.homogenize(&f.den, &top, &mut cache);
        if den.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        Ok(RatFunc { num, den }.tidy())
    }

    fn power(&self, i: usize, e: u32, numer: bool, cache: &mut HashMap<(usize, u32, bool), MultiPoly<C>>) -> MultiPoly<C> {
        if let Some(p) = cache.get(&(i, e, numer)) {
            return p.clone();
        }
        let img = &self.images[i];
        let base = if numer { &img.num } else { &img.den };
        let p = if e == 0 {
            MultiPoly::constant(&self.target, C::one())
        } else if e == 1 {
            base.clone()
        } else {
            let half = self.power(i, e / 2, numer, cache);
            let sq = &half * &half;
            if e % 2 == 1 {
                &sq * base
            } else {
                sq
            }
        };
        cache.insert((i, e, numer), p.clone());
        p
    }

    fn homogenize(&self, p: &MultiPoly<C>, top: &[u32], cache: &mut HashMap<(usize, u32, bool), MultiPoly<C>>) -> MultiPoly<C> {
        let mut acc = MultiPoly::zero(&self.target);
        for (m, c) in &p.terms {
            let mut t = MultiPoly::constant(&self.target, c.clone());
            for i in 0..m.len() {
                if m[i] > 0 {
                    t = &t * &self.power(i, m[i], true, cache);
                }
                let rest = top[i] - m[i];
                if rest > 0 && self.images[i].den.as_constant().is_none_or(|c| !c.is_one()) {
                    t = &t * &self.power(i, rest, false, cache);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// `(self ∘ inner)(z) = self(inner(z))`: apply `inner` first.
    pub fn compose(&self, inner: &Substitution<C>) -> Result<Substitution<C>, RatFuncError> {
        let images = inner.images.iter().map(|f| self.apply(f)).collect::<Result<Vec<_>, _>>()?;
        Ok(Substitution { source: inner.source.clone(), target: self.target.clone(), images })
    }

    pub fn equals(&self, other: &Substitution<C>) -> bool {
        self.images.len() == other.images.len()
            && self.images.iter().zip(&other.images).all(|(a, b)| a.equals(b))
    }

    pub fn is_identity(&self) -> bool {
        (0..self.source.len()).all(|i| {
            self.images[i].equals(&RatFunc::symbol(&self.target, self.source.name(i)).expect("same names"))
        })
    }
}

/// `substitute(f, s)`.
pub fn substitute<C: Scalar>(f: &RatFunc<C>, s: &Substitution<C>) -> Result<RatFunc<C>, RatFuncError> {
    s.apply(f)
}

/// Jacobian test with respect to the first two function variables.
pub fn jacobian_independent<C: Scalar>(u: &RatFunc<C>, v: &RatFunc<C>) -> bool {
    let vars = u.tower().variables();
    jacobian_independent_in(u, v, vars[0], vars[1])
}

pub fn jacobian_independent_in<C: Scalar>(u: &RatFunc<C>, v: &RatFunc<C>, i: usize, j: usize) -> bool {
    let det = &(&u.derivative(i) * &v.derivative(j)) - &(&u.derivative(j) * &v.derivative(i));
    !det.is_zero()
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;

    type Q = BigRational;

    fn tower() -> Arc<TowerSpec<Q>> {
        TowerSpec::builder().vars(&["x", "y"]).free("a").sqrt("sqrt_a", "a").omega("w").build().unwrap()
    }

    fn rf(t: &Arc<TowerSpec<Q>>, s: &str) -> RatFunc<Q> {
        RatFunc::parse(t, s).unwrap()
    }

    #[test]
    fn sqrt_square_reduces() {
        let t = tower();
        assert!(rf(&t, "sqrt_a^2").equals(&rf(&t, "a")));
        let p = rf(&t, "sqrt_a^3*x");
        assert_eq!(p.to_string(), "x*a*sqrt_a");
    }

    #[test]
    fn omega_relation() {
        let t = tower();
        assert!(rf(&t, "w^2").equals(&rf(&t, "-1-w")));
        assert!(rf(&t, "w^2+w+1").is_zero());
        assert!(rf(&t, "w^3").equals(&rf(&t, "1")));
        assert!(rf(&t, "w^-1").equals(&rf(&t, "w^2")));
    }

    #[test]
    fn cross_multiplication() {
        let t = tower();
        let lhs = rf(&t, "(x*y+1)/(x+y)");
        let rhs = rf(&t, "(1/(x*y)+1)/(1/x+1/y)");
        assert!(rf_equal(&lhs, &rhs, &t).unwrap());
        assert!(!rf_equal(&rf(&t, "x/y"), &rf(&t, "y/x"), &t).unwrap());
    }

    #[test]
    fn bad_towers() {
        let e = TowerSpec::<Q>::builder().sqrt("r", "s").free("s").build();
        assert!(matches!(e, Err(RatFuncError::UnknownSymbol(_)) | Err(RatFuncError::NotTriangular(_))));
        let e = TowerSpec::<Q>::builder().var("x").sqrt("r", "x").build();
        assert!(matches!(e, Err(RatFuncError::NotTriangular(_))));
        let e = TowerSpec::<Q>::builder().omega("w").omega("v").build();
        assert_eq!(e.unwrap_err(), RatFuncError::MultipleOmega);
        let e = TowerSpec::<Q>::builder().free("x").build();
        assert_eq!(e.unwrap_err(), RatFuncError::ReservedName("x".into()));
    }

    #[test]
    fn substitution_checks_relations() {
        let t = tower();
        assert!(Substitution::parse(&t, &[("sqrt_a", "-sqrt_a")]).is_ok());
        assert!(Substitution::parse(&t, &[("w", "w^2")]).is_ok());
        assert_eq!(
            Substitution::parse(&t, &[("sqrt_a", "a")]).unwrap_err(),
            RatFuncError::InconsistentImage("sqrt_a".into())
        );
        assert!(Substitution::parse(&t, &[("w", "1")]).is_err());
    }

    #[test]
    fn substitute_and_zero_denominator() {
        let t = tower();
        let s = Substitution::parse(&t, &[("x", "a/x")]).unwrap();
        assert!(s.apply(&rf(&t, "x")).unwrap().equals(&rf(&t, "a/x")));
        let z = Substitution::parse(&t, &[("x", "y")]).unwrap();
        assert_eq!(z.apply(&rf(&t, "1/(x-y)")).unwrap_err(), RatFuncError::ZeroDenominator);
    }

    #[test]
    fn jacobian() {
        let t = tower();
        assert!(jacobian_independent(&rf(&t, "x"), &rf(&t, "y")));
        assert!(!jacobian_independent(&rf(&t, "x"), &rf(&t, "x^2")));
        assert!(jacobian_independent(&rf(&t, "(x*y+1)/(x+y)"), &rf(&t, "(x*y-1)/(x-y)")));
        assert!(!jacobian_independent(&rf(&t, "sqrt_a*x"), &rf(&t, "a*x+1")));
    }

    #[test]
    fn display_round_trips() {
        let t = tower();
        for s in ["(x^2*y - 3/4*sqrt_a)/(x + w)", "-x/(2*y)", "a*w - 1", "0"] {
            let f = rf(&t, s);
            let g = rf(&t, &f.to_string());
            assert!(f.equals(&g), "{s} -> {f}");
        }
    }
}
