//! Integer helpers: factorization, power-free parts, residue symbols.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(2000))
}

fn sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut x, mut y, mut g) = (BigInt::from(2), BigInt::from(2), one.clone());
        while g == one {
            x = f(&x);
            y = f(&f(&y));
            g = (&x - &y).abs().gcd(n);
        }
        if &g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization of `|n|`, primes ascending.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    if n.is_zero() {
        return out;
    }
    for &p in small_primes() {
        let pb = BigInt::from(p);
        if &pb * &pb > n {
            break;
        }
        let mut e = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    let mut stack = vec![n];
    let mut big: Vec<BigInt> = Vec::new();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            big.push(m);
        } else {
            let d = pollard_brent(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    big.sort();
    for p in big {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out.sort();
    out
}

pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let mut n = n.clone();
    let mut e = 0;
    while (&n % p).is_zero() {
        n /= p;
        e += 1;
    }
    e
}

pub fn rat_valuation(q: &BigRational, p: &BigInt) -> i64 {
    valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64
}

/// Squarefree integer in the square class of a nonzero rational.
pub fn squarefree_part(q: &BigRational) -> BigInt {
    let n = q.numer() * q.denom();
    let mut out = BigInt::from(if n.sign() == Sign::Minus { -1 } else { 1 });
    for (p, e) in factor(&n) {
        if e % 2 == 1 {
            out *= p;
        }
    }
    out
}

/// Cube-free integer in the cube class of a nonzero rational.
pub fn cubefree_part(q: &BigRational) -> BigInt {
    let n = q.numer() * q.denom() * q.denom();
    let mut out = BigInt::from(if n.sign() == Sign::Minus { -1 } else { 1 });
    for (p, e) in factor(&n) {
        for _ in 0..e % 3 {
            out *= &p;
        }
    }
    out
}

pub fn is_square_int(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

pub fn is_rational_square(q: &BigRational) -> bool {
    is_square_int(q.numer()) && is_square_int(q.denom())
}

pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    is_rational_square(q).then(|| BigRational::new(q.numer().sqrt(), q.denom().sqrt()))
}

pub fn is_cube_int(n: &BigInt) -> bool {
    let r = n.cbrt();
    &r * &r * &r == *n
}

pub fn is_rational_cube(q: &BigRational) -> bool {
    is_cube_int(q.numer()) && is_cube_int(q.denom())
}

pub fn rational_cbrt(q: &BigRational) -> Option<BigRational> {
    is_rational_cube(q).then(|| BigRational::new(q.numer().cbrt(), q.denom().cbrt()))
}

/// Legendre symbol `(a|p)` for odd prime `p`.
pub fn legendre(a: &BigInt, p: &BigInt) -> i32 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1u32) / 2u32;
    if a.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(m|p)` for a prime `p`.
pub fn kronecker_prime(m: &BigInt, p: &BigInt) -> i32 {
    if *p == BigInt::from(2) {
        if m.is_even() {
            return 0;
        }
        match m.mod_floor(&BigInt::from(8)).to_u32().unwrap() {
            1 | 7 => 1,
            _ => -1,
        }
    } else {
        legendre(m, p)
    }
}

/// Odd prime divisors and 2 of the numerators and denominators given.
pub fn prime_support(qs: &[&BigRational]) -> Vec<BigInt> {
    let mut ps: Vec<BigInt> = vec![BigInt::from(2)];
    for q in qs {
        for n in [q.numer(), q.denom()] {
            for (p, _) in factor(n) {
                ps.push(p);
            }
        }
    }
    ps.sort();
    ps.dedup();
    ps
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factoring() {
        let f = factor(&int(-360));
        assert_eq!(f, vec![(int(2), 3), (int(3), 2), (int(5), 1)]);
        let n = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        assert_eq!(factor(&n), vec![(int(998_244_353), 1), (int(1_000_000_007), 1)]);
        assert!(factor(&int(1)).is_empty());
    }

    #[test]
    fn power_free_parts() {
        assert_eq!(squarefree_part(&BigRational::new(int(12), int(5))), int(15));
        assert_eq!(squarefree_part(&rat(-4)), int(-1));
        assert_eq!(cubefree_part(&BigRational::new(int(16), int(3))), int(18));
        assert_eq!(cubefree_part(&rat(-8)), int(-1));
    }

    #[test]
    fn residue_symbols() {
        assert_eq!(legendre(&int(2), &int(7)), 1);
        assert_eq!(legendre(&int(3), &int(7)), -1);
        assert_eq!(kronecker_prime(&int(17), &int(2)), 1);
        assert_eq!(kronecker_prime(&int(5), &int(2)), -1);
        assert_eq!(kronecker_prime(&int(6), &int(2)), 0);
    }
}
