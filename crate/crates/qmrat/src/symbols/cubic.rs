//! Cubic norm residue symbol over Q(ω).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::{cubefree_part, factor, is_cube_int, is_rational_cube, rational_cbrt, valuation};
use super::{Tri, Witness};

/// `re + om·ω` with `ω² + ω + 1 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QOmega {
    pub re: BigRational,
    pub om: BigRational,
}

impl QOmega {
    pub fn rational(q: BigRational) -> Self {
        QOmega { re: q, om: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.om.is_zero()
    }

    pub fn mul(&self, o: &QOmega) -> QOmega {
        // ω² = −1 − ω
        let rr = &self.re * &o.re;
        let oo = &self.om * &o.om;
        let cross = &self.re * &o.om + &self.om * &o.re;
        QOmega { re: &rr - &oo, om: cross - oo }
    }

    pub fn cube(&self) -> QOmega {
        self.mul(self).mul(self)
    }

    pub fn conj(&self) -> QOmega {
        QOmega { re: &self.re - &self.om, om: -self.om.clone() }
    }

    pub fn norm(&self) -> BigRational {
        &self.re * &self.re - &self.re * &self.om + &self.om * &self.om
    }
}

impl fmt::Display for QOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.om.is_zero() {
            write!(f, "{}", self.re)
        } else if self.om.is_negative() {
            write!(f, "{} - {}*omega", self.re, -self.om.clone())
        } else {
            write!(f, "{} + {}*omega", self.re, self.om)
        }
    }
}

/// A prime of Z[ω] not above 3 where the tame symbol was evaluated. For a
/// split rational prime `root` is the residue of ω at that prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TamePlace {
    pub p: BigInt,
    pub root: Option<BigInt>,
    pub trivial: bool,
}

impl fmt::Display for TamePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.root {
            Some(r) => write!(f, "p={} (omega={r} mod p)", self.p),
            None => write!(f, "p={} (inert)", self.p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicOutcome {
    pub value: Tri,
    pub witness: Witness,
    /// Every tame local symbol is trivial.
    pub tame_trivial: bool,
}

/// `(a, c)_{3,Q(ω)}` for rational `a`, `c`.
pub fn cubic_symbol(a: &BigRational, c: &BigRational, search_bound: i64) -> Tri {
    cubic_symbol_detail(a, c, search_bound).value
}

/// Tame local symbols decide non-vanishing; vanishing is certified by a norm
/// `c = N(x)/r³` from Q(∛a) found in the box `|x_i| ≤ search_bound`. The
/// witness refers to the cube-free representatives of `a` and `c`.
pub fn cubic_symbol_detail(a: &BigRational, c: &BigRational, search_bound: i64) -> CubicOutcome {
    assert!(!a.is_zero() && !c.is_zero(), "cubic symbol of zero");
    if is_rational_cube(a) {
        return CubicOutcome { value: Tri::Zero, witness: Witness::None, tame_trivial: true };
    }
    if let Some(r) = rational_cbrt(c) {
        let r = BigRational::one() / r;
        let x = [BigInt::one(), BigInt::zero(), BigInt::zero()];
        return CubicOutcome { value: Tri::Zero, witness: Witness::Norm { x, r }, tame_trivial: true };
    }
    let ar = cubefree_part(a);
    let cr = cubefree_part(c);
    let tame = tame_places(&ar, &BigInt::zero(), &cr);
    let bad: Vec<TamePlace> = tame.into_iter().filter(|t| !t.trivial).collect();
    if !bad.is_empty() {
        return CubicOutcome { value: Tri::NonZero, witness: Witness::Tame(bad), tame_trivial: false };
    }
    match norm_search(&ar, &cr, search_bound) {
        Some((x, r)) => CubicOutcome { value: Tri::Zero, witness: Witness::Norm { x, r }, tame_trivial: true },
        None => CubicOutcome {
            value: Tri::Undecided(format!("tame places trivial; no norm witness with |x_i| <= {search_bound}")),
            witness: Witness::None,
            tame_trivial: true,
        },
    }
}

/// `(α, c)_{3,Q(ω)}` with α in Q(ω). Non-vanishing comes from a tame place;
/// otherwise the only remaining place is the one above 3, and the product
/// formula forces the symbol to vanish.
pub fn cubic_symbol_qomega(alpha: &QOmega, c: &BigRational) -> CubicOutcome {
    assert!(!alpha.is_zero() && !c.is_zero(), "cubic symbol of zero");
    let d = alpha.re.denom().lcm(alpha.om.denom());
    let d3 = BigRational::from_integer(&d * &d * &d);
    let re = (&alpha.re * &d3).to_integer();
    let om = (&alpha.om * &d3).to_integer();
    let cr = cubefree_part(c);
    let bad: Vec<TamePlace> = tame_places(&re, &om, &cr).into_iter().filter(|t| !t.trivial).collect();
    if bad.is_empty() {
        CubicOutcome { value: Tri::Zero, witness: Witness::Reciprocity, tame_trivial: true }
    } else {
        CubicOutcome { value: Tri::NonZero, witness: Witness::Tame(bad), tame_trivial: false }
    }
}

/// Tame symbols of `(u + v·ω, c)` at every prime of Z[ω] above a rational
/// prime p ≠ 3 dividing the norm of the first argument or `c`.
fn tame_places(u: &BigInt, v: &BigInt, c: &BigInt) -> Vec<TamePlace> {
    let norm = u * u - u * v + v * v;
    let mut primes: Vec<BigInt> = factor(&norm).into_iter().chain(factor(c)).map(|(p, _)| p).collect();
    primes.sort();
    primes.dedup();
    let three = BigInt::from(3);
    let mut out = Vec::new();
    for p in primes {
        if p == three {
            continue;
        }
        let vc = valuation(c, &p);
        let c0 = (c / num_traits::pow(p.clone(), vc as usize)).mod_floor(&p);
        if (&p % 3u32).is_one() {
            let r = cube_root_of_unity(&p);
            for root in [r.clone(), &p - 1u32 - &r] {
                let k = valuation(&norm, &p) + 2;
                let pk = num_traits::pow(p.clone(), k as usize);
                let lifted = hensel_lift(&root, &p, k);
                let e = (u + v * &lifted).mod_floor(&pk);
                let va = valuation(&e, &p).min(k - 1);
                let w = (&e / num_traits::pow(p.clone(), va as usize)).mod_floor(&p);
                let t = (w.modpow(&BigInt::from(vc), &p) * inv_mod(&c0, &p).modpow(&BigInt::from(va), &p)).mod_floor(&p);
                let trivial = (va == 0 && vc == 0) || t.modpow(&((&p - 1u32) / 3u32), &p).is_one();
                out.push(TamePlace { p: p.clone(), root: Some(root), trivial });
            }
        } else {
            let va = valuation(u, &p).min(valuation(v, &p));
            let scale = num_traits::pow(p.clone(), va as usize);
            let w = Fp2::new((u / &scale).mod_floor(&p), (v / &scale).mod_floor(&p), &p);
            let t = w.pow(&BigInt::from(vc));
            let e = (&p * &p - 1u32) / 3u32;
            let trivial = t.pow(&e).is_one();
            out.push(TamePlace { p: p.clone(), root: None, trivial });
        }
    }
    out
}

fn inv_mod(a: &BigInt, p: &BigInt) -> BigInt {
    a.modpow(&(p - 2u32), p)
}

fn cube_root_of_unity(p: &BigInt) -> BigInt {
    let e = (p - 1u32) / 3u32;
    let mut g = BigInt::from(2);
    loop {
        let r = g.modpow(&e, p);
        if !r.is_one() {
            return r;
        }
        g += 1;
    }
}

/// Lift a root of `t² + t + 1` from mod p to mod p^k.
fn hensel_lift(r: &BigInt, p: &BigInt, k: u32) -> BigInt {
    let pk = num_traits::pow(p.clone(), k as usize);
    let mut r = r.clone();
    for _ in 0..k {
        let f = (&r * &r + &r + 1u32).mod_floor(&pk);
        let df = (&r * 2u32 + 1u32).mod_floor(&pk);
        let inv = df.extended_gcd(&pk).x.mod_floor(&pk);
        r = (&r - f * inv).mod_floor(&pk);
    }
    r
}

/// F_p[ω] for p ≡ 2 mod 3.
#[derive(Clone, Debug)]
struct Fp2<'a> {
    a: BigInt,
    b: BigInt,
    p: &'a BigInt,
}

impl<'a> Fp2<'a> {
    fn new(a: BigInt, b: BigInt, p: &'a BigInt) -> Self {
        Fp2 { a, b, p }
    }

    fn mul(&self, o: &Fp2<'a>) -> Fp2<'a> {
        let aa = &self.a * &o.a;
        let bb = &self.b * &o.b;
        let cross = &self.a * &o.b + &self.b * &o.a;
        Fp2::new((&aa - &bb).mod_floor(self.p), (cross - bb).mod_floor(self.p), self.p)
    }

    fn pow(&self, e: &BigInt) -> Fp2<'a> {
        let mut acc = Fp2::new(BigInt::one(), BigInt::zero(), self.p);
        let mut base = self.clone();
        let mut e = e.clone();
        while e.is_positive() {
            if e.is_odd() {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }
}

fn icbrt_exact(n: i128) -> bool {
    let r = (n.unsigned_abs() as f64).cbrt().round() as i128;
    (r - 1..=r + 1).any(|s| s * s * s == n.abs())
}

/// Search `x = x0 + x1 θ + x2 θ²`, `θ³ = a`, with `N(x)/c` a rational cube.
fn norm_search(a: &BigInt, c: &BigInt, bound: i64) -> Option<([BigInt; 3], BigRational)> {
    let small = a.abs() <= BigInt::from(1_000_000) && c.abs() <= BigInt::from(1_000_000_000_000i64) && bound <= 1000;
    for s in 1..=bound.max(0) {
        let line: Vec<i64> = std::iter::once(0).chain((1..=s).flat_map(|k| [k, -k])).collect();
        for &x2 in &line {
            for &x1 in &line {
                for &x0 in &line {
                    if x0.abs().max(x1.abs()).max(x2.abs()) != s {
                        continue;
                    }
                    let hit = if small {
                        let (a, c) = (a.to_i128().unwrap(), c.to_i128().unwrap());
                        let (x0, x1, x2) = (x0 as i128, x1 as i128, x2 as i128);
                        let n = x0 * x0 * x0 + a * x1 * x1 * x1 + a * a * x2 * x2 * x2 - 3 * a * x0 * x1 * x2;
                        if n == 0 {
                            continue;
                        }
                        let g = n.gcd(&c);
                        icbrt_exact(n / g) && icbrt_exact(c / g)
                    } else {
                        let (x0b, x1b, x2b) = (BigInt::from(x0), BigInt::from(x1), BigInt::from(x2));
                        let n = &x0b * &x0b * &x0b + a * &x1b * &x1b * &x1b + a * a * &x2b * &x2b * &x2b
                            - BigInt::from(3) * a * &x0b * &x1b * &x2b;
                        if n.is_zero() {
                            continue;
                        }
                        let g = n.gcd(c);
                        is_cube_int(&(&n / &g)) && is_cube_int(&(c / &g))
                    };
                    if hit {
                        let (x0b, x1b, x2b) = (BigInt::from(x0), BigInt::from(x1), BigInt::from(x2));
                        let n = &x0b * &x0b * &x0b + a * &x1b * &x1b * &x1b + a * a * &x2b * &x2b * &x2b
                            - BigInt::from(3) * a * &x0b * &x1b * &x2b;
                        let r = rational_cbrt(&BigRational::new(n, c.clone())).expect("checked cube");
                        return Some(([x0b, x1b, x2b], r));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::arith::rat;
    use super::*;

    #[test]
    fn steinberg_and_small_norms() {
        for a in [2, 3, 5, 7] {
            assert_eq!(cubic_symbol(&rat(a), &rat(-a), 20), Tri::Zero);
        }
        let out = cubic_symbol_detail(&rat(2), &rat(3), 20);
        assert_eq!(out.value, Tri::Zero);
        assert_eq!(out.witness, Witness::Norm { x: [1.into(), 1.into(), 0.into()], r: rat(1) });
    }

    #[test]
    fn empty_box_is_undecided() {
        assert!(matches!(cubic_symbol(&rat(2), &rat(5), 0), Tri::Undecided(_)));
    }

    #[test]
    fn tame_obstruction() {
        // 2 is not a cube mod 7
        assert_eq!(cubic_symbol(&rat(2), &rat(7), 20), Tri::NonZero);
        assert_eq!(cubic_symbol(&rat(7), &rat(2), 20), Tri::NonZero);
        // 8 is a cube, so (8, 7) vanishes
        assert_eq!(cubic_symbol(&rat(8), &rat(7), 20), Tri::Zero);
    }

    #[test]
    fn qomega_agrees_with_rational_on_rational_input() {
        for (a, c) in [(2, 7), (2, 3), (5, 13), (3, 19), (6, 31)] {
            let r = cubic_symbol(&rat(a), &rat(c), 20);
            let q = cubic_symbol_qomega(&QOmega::rational(rat(a)), &rat(c)).value;
            if r != Tri::Undecided(String::new()) && !matches!(r, Tri::Undecided(_)) {
                assert_eq!(r, q, "({a},{c})");
            }
        }
    }

    #[test]
    fn qomega_arithmetic() {
        let w = QOmega { re: rat(0), om: rat(1) };
        assert_eq!(w.cube(), QOmega::rational(rat(1)));
        assert_eq!(w.norm(), rat(1));
        let z = QOmega { re: rat(2), om: rat(-1) };
        assert_eq!(z.mul(&z.conj()), QOmega::rational(z.norm()));
    }
}
