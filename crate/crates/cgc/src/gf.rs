//! Arithmetic in small finite fields F_q.
//!
//! Elements are indices `0..q`. For a prime field the index is the residue;
//! for `q = p^k` it is the base-`p` digit vector of the coefficients in the
//! power basis `1, x, .., x^{k-1}` modulo a fixed Conway polynomial.
//! All operations go through precomputed tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};

/// A field element, stored as its table index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u8);

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// (p, k, ascending coefficients of the monic modulus)
const CONWAY: &[(u32, u32, &[u32])] = &[
    (3, 2, &[2, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (7, 2, &[3, 6, 1]),
];

struct Tables {
    p: u32,
    k: u32,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    square: Vec<bool>,
}

/// The field F_q. Cheap to clone.
#[derive(Clone)]
pub struct Fq(Arc<Tables>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl Fq {
    /// F_p for a prime `p` (2 is accepted; see [`Fq::is_odd`]).
    pub fn prime(p: u32) -> Result<Fq> {
        Fq::new(p, 1)
    }

    pub fn new(p: u32, k: u32) -> Result<Fq> {
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not a prime")));
        }
        if k == 0 {
            return Err(invalid("extension degree must be positive"));
        }
        let modulus: Vec<u32> = if k == 1 {
            vec![0, 1]
        } else {
            CONWAY
                .iter()
                .find(|(cp, ck, _)| *cp == p && *ck == k)
                .map(|(_, _, m)| m.to_vec())
                .ok_or_else(|| Error::Unsupported(format!("no built-in modulus for {p}^{k}")))?
        };
        let q = (p as usize).pow(k);
        if q > 256 {
            return Err(Error::Unsupported(format!("q = {q} is too large")));
        }
        let digits = |mut x: usize| -> Vec<u32> {
            (0..k)
                .map(|_| {
                    let d = (x % p as usize) as u32;
                    x /= p as usize;
                    d
                })
                .collect()
        };
        let index = |v: &[u32]| -> usize { v.iter().rev().fold(0, |acc, &d| acc * p as usize + d as usize) };
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = index(&s) as u8;
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for top in (k as usize..prod.len()).rev() {
                    let c = prod[top];
                    if c != 0 {
                        for (i, m) in modulus.iter().enumerate().take(k as usize) {
                            let j = top - k as usize + i;
                            prod[j] = (prod[j] + (p - c) * m) % p;
                        }
                        prod[top] = 0;
                    }
                }
                mul[a * q + b] = index(&prod[..k as usize]) as u8;
            }
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        let mut square = vec![false; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as u8;
                }
            }
            if a != 0 {
                square[mul[a * q + a] as usize] = true;
            }
        }
        Ok(Fq(Arc::new(Tables { p, k, q, modulus, add, mul, neg, inv, square })))
    }

    /// Parses "p", "q" or "p^k", e.g. "3", "9", "3^2".
    pub fn parse(text: &str) -> Result<Fq> {
        let text = text.trim();
        let bad = || Error::Parse(format!("bad field {text:?}"));
        if let Some((p, k)) = text.split_once('^') {
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            return Fq::new(p, k);
        }
        let q: u32 = text.parse().map_err(|_| bad())?;
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or_else(bad)?;
        let mut k = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            k += 1;
        }
        if r != 1 {
            return Err(invalid(format!("{q} is not a prime power")));
        }
        Fq::new(p, k)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> usize {
        self.0.q
    }

    pub fn is_odd(&self) -> bool {
        self.0.p != 2
    }

    /// Ascending coefficients of the defining modulus (`[0, 1]` for a prime field).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Reduces an integer to an element: mod p for prime fields, mod q as an index otherwise.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.0.q as i64) as u8)
    }

    /// The image of the integer `v` under Z -> F_p -> F_q.
    pub fn from_prime_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.0.p as i64) as u8)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.0.add[a.0 as usize * self.0.q + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.0.mul[a.0 as usize * self.0.q + b.0 as usize])
    }

    /// `a + b*c`
    #[inline]
    pub fn mul_add(&self, a: Fe, b: Fe, c: Fe) -> Fe {
        self.add(a, self.mul(b, c))
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Fe(self.0.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_square(&self, a: Fe) -> bool {
        self.0.square[a.0 as usize]
    }

    /// +1 for a nonzero square, -1 for a non-square.
    pub fn sign_class(&self, a: Fe) -> Result<i8> {
        if a.is_zero() {
            return Err(invalid("sign_class of zero"));
        }
        Ok(if self.is_square(a) { 1 } else { -1 })
    }

    /// All elements, starting with 0.
    pub fn elements(&self) -> Vec<Fe> {
        (0..self.0.q).map(|i| Fe(i as u8)).collect()
    }

    pub fn units(&self) -> impl Iterator<Item = Fe> {
        (1..self.0.q).map(|i| Fe(i as u8))
    }

    /// The smallest non-square, if any (none in characteristic 2).
    pub fn nonsquare(&self) -> Option<Fe> {
        self.units().find(|&a| !self.is_square(a))
    }

    /// The smallest generator of the multiplicative group.
    pub fn primitive(&self) -> Fe {
        let order = self.0.q as u64 - 1;
        self.units()
            .find(|&a| (1..order).all(|e| !order.is_multiple_of(e) || self.pow(a, e) != Fe::ONE))
            .unwrap_or(Fe::ONE)
    }

    /// The powers `1, x, .., x^{k-1}`, a basis of F_q over F_p.
    pub fn prime_basis(&self) -> Vec<Fe> {
        (0..self.0.k).map(|i| Fe((self.0.p as usize).pow(i) as u8)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<Fq> {
        [3, 5, 7, 9, 11, 13, 25, 27, 49].iter().map(|&q| Fq::parse(&q.to_string()).unwrap()).collect()
    }

    #[test]
    fn small_arith() {
        let f3 = Fq::prime(3).unwrap();
        assert_eq!(f3.mul(Fe(2), Fe(2)), Fe(1));
        let f5 = Fq::prime(5).unwrap();
        assert_eq!(f5.inv(Fe(2)).unwrap(), Fe(3));
        assert!(matches!(f5.div(Fe(1), Fe(0)), Err(Error::DivisionByZero)));
        for f in all_fields() {
            for a in f.elements() {
                assert_eq!(f.add(a, Fe::ZERO), a);
            }
        }
    }

    #[test]
    fn sign_classes() {
        let f3 = Fq::prime(3).unwrap();
        assert_eq!(f3.sign_class(Fe(2)).unwrap(), -1);
        let f7 = Fq::prime(7).unwrap();
        assert_eq!(f7.sign_class(Fe(2)).unwrap(), 1);
        let f5 = Fq::prime(5).unwrap();
        assert_eq!(f5.sign_class(Fe(4)).unwrap(), 1);
        assert!(f5.sign_class(Fe(0)).is_err());
        assert_eq!(f7.units().filter(|&a| f7.is_square(a)).count(), 3);
    }

    #[test]
    fn enumeration() {
        let f3 = Fq::prime(3).unwrap();
        assert_eq!(f3.elements(), vec![Fe(0), Fe(1), Fe(2)]);
        assert_eq!(Fq::prime(5).unwrap().elements().len(), 5);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields() {
            let q = f.q() as u64;
            let els = f.elements();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                    assert_eq!(f.pow(a, q - 1), Fe::ONE, "{f:?} {a:?}");
                    assert_eq!(f.sign_class(f.mul(a, a)).unwrap(), 1);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    if !a.is_zero() && !b.is_zero() {
                        assert_eq!(
                            f.sign_class(f.mul(a, b)).unwrap(),
                            f.sign_class(a).unwrap() * f.sign_class(b).unwrap()
                        );
                    }
                    for &c in &els {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn extension_modulus_is_primitive() {
        for (q, p) in [(9, 3), (25, 5), (27, 3), (49, 7)] {
            let f = Fq::parse(&q.to_string()).unwrap();
            assert_eq!(f.p(), p);
            let x = Fe(p as u8);
            let order = (1..q as u64).find(|&e| f.pow(x, e) == Fe::ONE).unwrap();
            assert_eq!(order, q as u64 - 1);
        }
    }

    #[test]
    fn parse_field_names() {
        assert_eq!(Fq::parse("3^2").unwrap(), Fq::parse("9").unwrap());
        assert!(Fq::parse("6").is_err());
        assert!(Fq::parse("x").is_err());
        assert!(Fq::parse("11^2").is_err());
        assert!(!Fq::parse("2").unwrap().is_odd());
    }
}
