//! Norm residue symbols of degree 2 over Q and its quadratic extensions,
//! degree 3 over Q(ω), and the conic-point oracle.

pub mod arith;
mod cubic;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use arith::{kronecker_prime, legendre, prime_support, rat_valuation, squarefree_part};
pub use cubic::{cubic_symbol, cubic_symbol_detail, cubic_symbol_qomega, CubicOutcome, QOmega, TamePlace};

pub const DEFAULT_CUBIC_BOUND: i64 = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("product formula violated for ({a}, {b})")]
    ProductFormulaViolation { a: BigRational, b: BigRational },
    #[error("symbol arguments must be nonzero")]
    ZeroArgument,
}

/// Three-valued symbol outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tri {
    Zero,
    NonZero,
    Undecided(String),
}

impl Tri {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tri::Zero => "zero",
            Tri::NonZero => "nonzero",
            Tri::Undecided(_) => "undecided",
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Tri::Zero)
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Place {
    Prime(BigInt),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseField {
    Q,
    QuadExt(BigRational),
    QOmega,
    /// A field outside the supported menu, described in words.
    Other(String),
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Q => write!(f, "Q"),
            BaseField::QuadExt(m) => write!(f, "Q(sqrt({m}))"),
            BaseField::QOmega => write!(f, "Q(omega)"),
            BaseField::Other(s) => write!(f, "{s}"),
        }
    }
}

/// A symbol `(a, b)_{n, base}`. For degree 3 the first argument may lie in
/// Q(ω): it is `a + a_omega·ω`. Over an `Other` base the second basis
/// element is the generator `theta` named in the base description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolQuery {
    pub degree: u8,
    pub a: BigRational,
    pub a_omega: BigRational,
    pub b: BigRational,
    pub base: BaseField,
}

impl SymbolQuery {
    pub fn quadratic(a: BigRational, b: BigRational) -> Self {
        SymbolQuery { degree: 2, a, a_omega: BigRational::zero(), b, base: BaseField::Q }
    }

    pub fn quadratic_over(a: BigRational, b: BigRational, m: BigRational) -> Self {
        SymbolQuery { degree: 2, a, a_omega: BigRational::zero(), b, base: BaseField::QuadExt(m) }
    }

    pub fn cubic(a: BigRational, c: BigRational) -> Self {
        SymbolQuery { degree: 3, a, a_omega: BigRational::zero(), b: c, base: BaseField::QOmega }
    }

    pub fn cubic_qomega(alpha: QOmega, c: BigRational) -> Self {
        SymbolQuery { degree: 3, a: alpha.re, a_omega: alpha.om, b: c, base: BaseField::QOmega }
    }

    fn first_arg(&self) -> String {
        if self.a_omega.is_zero() {
            self.a.to_string()
        } else if matches!(self.base, BaseField::Other(_)) {
            format!("{} + {}*theta", self.a, self.a_omega)
        } else {
            QOmega { re: self.a.clone(), om: self.a_omega.clone() }.to_string()
        }
    }
}

impl fmt::Display for SymbolQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})_{{{},{}}}", self.first_arg(), self.b, self.degree, self.base)
    }
}

/// Evidence attached to an evaluated symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    None,
    /// Places of Q where the quaternion algebra ramifies; for a quadratic
    /// base field, those among them that split.
    Ramified(Vec<Place>),
    Point(ConicPoint),
    /// `c = N(x0 + x1·θ + x2·θ²) / r³` with `θ³ = a`.
    Norm { x: [BigInt; 3], r: BigRational },
    Tame(Vec<TamePlace>),
    Reciprocity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluated {
    pub query: SymbolQuery,
    pub value: Tri,
    pub witness: Witness,
}

/// Local Hilbert symbol `(a, b)_v` as ±1.
pub fn hilbert_local(a: &BigRational, b: &BigRational, place: &Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => {
            let alpha = rat_valuation(a, p);
            let beta = rat_valuation(b, p);
            let unit = |q: &BigRational, v: i64| {
                let pv = num_traits::pow(p.clone(), v.unsigned_abs() as usize);
                let u = if v >= 0 { q / BigRational::from_integer(pv) } else { q * BigRational::from_integer(pv) };
                u.numer() * u.denom()
            };
            let u = unit(a, alpha);
            let v = unit(b, beta);
            let (ap, bp) = (alpha.rem_euclid(2), beta.rem_euclid(2));
            if *p == BigInt::from(2) {
                let m8 = |n: &BigInt| n.mod_floor(&BigInt::from(8)).to_i64().unwrap();
                let (u8_, v8) = (m8(&u), m8(&v));
                let eps = |n: i64| ((n - 1) / 2) % 2;
                let om = |n: i64| ((n * n - 1) / 8) % 2;
                let e = eps(u8_) * eps(v8) + ap * om(v8) + bp * om(u8_);
                if e % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else {
                let eps_p = ((p - 1u32) / 2u32).is_odd() as i64;
                let mut s = if (ap * bp * eps_p) % 2 == 1 { -1 } else { 1 };
                if bp == 1 {
                    s *= legendre(&u, p);
                }
                if ap == 1 {
                    s *= legendre(&v, p);
                }
                s
            }
        }
    }
}

fn relevant_places(a: &BigRational, b: &BigRational) -> Vec<Place> {
    let mut out: Vec<Place> = prime_support(&[a, b]).into_iter().map(Place::Prime).collect();
    out.push(Place::Infinity);
    out
}

/// Places where `(a, b)` is locally nontrivial, after the product-formula
/// self-check.
pub fn ramified_places(a: &BigRational, b: &BigRational) -> Result<Vec<Place>, SymbolError> {
    if a.is_zero() || b.is_zero() {
        return Err(SymbolError::ZeroArgument);
    }
    let ram: Vec<Place> = relevant_places(a, b).into_iter().filter(|v| hilbert_local(a, b, v) == -1).collect();
    if ram.len() % 2 == 1 {
        return Err(SymbolError::ProductFormulaViolation { a: a.clone(), b: b.clone() });
    }
    Ok(ram)
}

/// Product of local symbols over every relevant place.
pub fn product_formula(a: &BigRational, b: &BigRational) -> i32 {
    relevant_places(a, b).iter().map(|v| hilbert_local(a, b, v)).product()
}

/// `(a, b)_{2,Q}`.
pub fn hilbert_q(a: &BigRational, b: &BigRational) -> Result<Tri, SymbolError> {
    Ok(if ramified_places(a, b)?.is_empty() { Tri::Zero } else { Tri::NonZero })
}

fn splits(place: &Place, m: &BigInt) -> bool {
    match place {
        Place::Infinity => m.is_positive(),
        Place::Prime(p) if *p == BigInt::from(2) => m.mod_floor(&BigInt::from(8)).is_one(),
        Place::Prime(p) => kronecker_prime(m, p) == 1,
    }
}

/// `(a, b)_{2,Q(√m)}` for rational arguments: zero iff no ramified place of
/// `(a, b)` splits in Q(√m).
pub fn hilbert_quadext(a: &BigRational, b: &BigRational, m: &BigRational) -> Result<Tri, SymbolError> {
    Ok(hilbert_quadext_detail(a, b, m)?.0)
}

pub fn hilbert_quadext_detail(
    a: &BigRational,
    b: &BigRational,
    m: &BigRational,
) -> Result<(Tri, Vec<Place>), SymbolError> {
    if m.is_zero() {
        return Err(SymbolError::ZeroArgument);
    }
    let ram = ramified_places(a, b)?;
    let mm = squarefree_part(m);
    if mm.is_one() {
        let t = if ram.is_empty() { Tri::Zero } else { Tri::NonZero };
        return Ok((t, ram));
    }
    let split: Vec<Place> = ram.into_iter().filter(|v| splits(v, &mm)).collect();
    Ok((if split.is_empty() { Tri::Zero } else { Tri::NonZero }, split))
}

/// Integer point on `x² − a·y² − b·z² = 0`, not all zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConicPoint {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl ConicPoint {
    pub fn satisfies(&self, a: &BigRational, b: &BigRational) -> bool {
        let sq = |n: &BigInt| BigRational::from_integer(n * n);
        (sq(&self.x) - a * sq(&self.y) - b * sq(&self.z)).is_zero()
    }
}

impl fmt::Display for ConicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Enumeration order for the box search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOrder {
    Forward,
    Reverse,
    Shuffled(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConicSearch {
    pub order: SearchOrder,
    pub honor_holzer: bool,
}

impl Default for ConicSearch {
    fn default() -> Self {
        ConicSearch { order: SearchOrder::Forward, honor_holzer: true }
    }
}

fn ordered(bound: u64, order: SearchOrder, salt: u64) -> Vec<i64> {
    let mut v: Vec<i64> = (0..=bound as i64).collect();
    match order {
        SearchOrder::Forward => {}
        SearchOrder::Reverse => v.reverse(),
        SearchOrder::Shuffled(seed) => v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ salt)),
    }
    v
}

/// Search for a point on `x² − a·y² − b·z² = 0` within the Holzer box of the
/// squarefree-reduced Legendre form. `None` proves there is no point.
pub fn conic_point(a: &BigRational, b: &BigRational, honor_holzer: bool) -> Option<ConicPoint> {
    conic_point_with(a, b, ConicSearch { order: SearchOrder::Forward, honor_holzer })
}

pub fn conic_point_with(a: &BigRational, b: &BigRational, opts: ConicSearch) -> Option<ConicPoint> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    let sa = squarefree_part(a);
    let sb = squarefree_part(b);
    // a = sa·ra², b = sb·rb²
    let ra = arith::rational_sqrt(&(a / BigRational::from_integer(sa.clone()))).expect("square class");
    let rb = arith::rational_sqrt(&(b / BigRational::from_integer(sb.clone()))).expect("square class");
    let g = sa.gcd(&sb);
    let a1 = &sa / &g;
    let b1 = &sb / &g;
    if a1.is_negative() && b1.is_negative() {
        return None;
    }
    let bx = (&a1 * &b1).abs().sqrt();
    let by = (&g * &b1).abs().sqrt().to_u64()?;
    let bz = (&g * &a1).abs().sqrt().to_u64()?;
    let (x0, y0, z0) = ordered(bz, opts.order, 0x5a)
        .into_iter()
        .flat_map(|z| ordered(by, opts.order, 0xa5 ^ z as u64).into_iter().map(move |y| (z, y)))
        .find_map(|(z, y)| {
            if y == 0 && z == 0 {
                return None;
            }
            let (yb, zb) = (BigInt::from(y), BigInt::from(z));
            let rhs = &a1 * &yb * &yb + &b1 * &zb * &zb;
            if rhs.is_negative() || !(&rhs % &g).is_zero() {
                return None;
            }
            let q = &rhs / &g;
            let xp = q.sqrt();
            if &xp * &xp != q || (opts.honor_holzer && xp > bx) {
                return None;
            }
            Some((&g * xp, yb, zb))
        })?;
    // x0² = sa·y0² + sb·z0², so (x0, y0/ra, z0/rb) lies on the original conic.
    let xs = BigRational::from_integer(x0);
    let ys = BigRational::from_integer(y0) / ra;
    let zs = BigRational::from_integer(z0) / rb;
    let l = xs.denom().lcm(ys.denom()).lcm(zs.denom());
    let lq = BigRational::from_integer(l);
    let (x, y, z) = ((xs * &lq).to_integer(), (ys * &lq).to_integer(), (zs * &lq).to_integer());
    let d = x.gcd(&y).gcd(&z);
    let p = ConicPoint { x: x / &d, y: y / &d, z: z / &d };
    debug_assert!(p.satisfies(a, b));
    Some(p)
}

/// Evaluate any supported query.
pub fn evaluate(q: &SymbolQuery, cubic_bound: i64) -> Result<Evaluated, SymbolError> {
    let (value, witness) = match (q.degree, &q.base) {
        (2, BaseField::Q) => {
            let ram = ramified_places(&q.a, &q.b)?;
            if ram.is_empty() {
                let pt = conic_point(&q.a, &q.b, true).expect("local-global principle");
                (Tri::Zero, Witness::Point(pt))
            } else {
                (Tri::NonZero, Witness::Ramified(ram))
            }
        }
        (2, BaseField::QuadExt(m)) => {
            let (t, places) = hilbert_quadext_detail(&q.a, &q.b, m)?;
            (t, Witness::Ramified(places))
        }
        (3, BaseField::QOmega) => {
            let out = if q.a_omega.is_zero() {
                cubic_symbol_detail(&q.a, &q.b, cubic_bound)
            } else {
                cubic_symbol_qomega(&QOmega { re: q.a.clone(), om: q.a_omega.clone() }, &q.b)
            };
            (out.value, out.witness)
        }
        _ => (Tri::Undecided(format!("base field {} is outside the supported menu", q.base)), Witness::None),
    };
    Ok(Evaluated { query: q.clone(), value, witness })
}

#[cfg(test)]
mod tests {
    use super::arith::rat;
    use super::*;

    fn p(n: i64) -> Place {
        Place::Prime(BigInt::from(n))
    }

    #[test]
    fn local_examples() {
        assert_eq!(hilbert_local(&rat(1), &rat(5), &p(5)), 1);
        assert_eq!(hilbert_local(&rat(-1), &rat(-1), &Place::Infinity), -1);
        assert_eq!(hilbert_local(&rat(2), &rat(7), &p(7)), 1);
        assert_eq!(hilbert_local(&rat(-1), &rat(-1), &p(2)), -1);
        assert_eq!(hilbert_local(&rat(3), &rat(7), &p(7)), -1);
    }

    #[test]
    fn global_examples() {
        assert_eq!(hilbert_q(&rat(5), &rat(-5)).unwrap(), Tri::Zero);
        assert_eq!(hilbert_q(&rat(3), &rat(-2)).unwrap(), Tri::Zero);
        assert_eq!(hilbert_q(&rat(-1), &rat(-1)).unwrap(), Tri::NonZero);
        assert_eq!(ramified_places(&rat(-1), &rat(-1)).unwrap(), vec![p(2), Place::Infinity]);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(hilbert_q(&half, &rat(7)).unwrap(), hilbert_q(&rat(2), &rat(7)).unwrap());
    }

    #[test]
    fn conic_examples() {
        let pt = |x: i64, y: i64, z: i64| ConicPoint { x: x.into(), y: y.into(), z: z.into() };
        assert_eq!(conic_point(&rat(1), &rat(1), true), Some(pt(1, 1, 0)));
        assert_eq!(conic_point(&rat(-1), &rat(-1), true), None);
        assert_eq!(conic_point(&rat(2), &rat(7), true), Some(pt(3, 1, 1)));
        assert_eq!(conic_point(&rat(2), &rat(1), true), Some(pt(1, 0, 1)));
        assert_eq!(conic_point(&rat(2), &rat(-1), true), Some(pt(1, 1, 1)));
        let b = BigRational::new((-2).into(), 9.into());
        let q = conic_point(&rat(18), &b, true).unwrap();
        assert!(q.satisfies(&rat(18), &b));
        assert_eq!(conic_point(&rat(12), &BigRational::new(7.into(), 9.into()), true), None);
    }

    #[test]
    fn quadext_examples() {
        assert_eq!(hilbert_quadext(&rat(2), &rat(7), &rat(5)).unwrap(), Tri::Zero);
        assert_eq!(hilbert_quadext(&rat(-1), &rat(-1), &rat(-1)).unwrap(), Tri::Zero);
        assert_eq!(hilbert_quadext(&rat(-1), &rat(-1), &rat(2)).unwrap(), Tri::NonZero);
        assert_eq!(hilbert_quadext(&rat(-1), &rat(-1), &rat(9)).unwrap(), Tri::NonZero);
    }

    #[test]
    fn shuffled_orders_find_valid_points() {
        for seed in 0..10 {
            let o = ConicSearch { order: SearchOrder::Shuffled(seed), honor_holzer: true };
            let q = conic_point_with(&rat(-7), &rat(23), o).unwrap();
            assert!(q.satisfies(&rat(-7), &rat(23)));
        }
    }
}
