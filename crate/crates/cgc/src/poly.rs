//! Univariate polynomials over F_q, irreducibles, factorization and the dual involution.
//!
//! Coefficients are ascending with no trailing zeros, so the zero polynomial is
//! empty. Polynomials do not carry their field; every operation takes it.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{invalid, Error, Result};
use crate::gf::{Fe, Fq};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    c: Vec<Fe>,
}

/// Canonical key order: by degree, then by the ascending coefficient tuple.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.len().cmp(&other.c.len()).then_with(|| self.c.cmp(&other.c))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn new(mut c: Vec<Fe>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { c: vec![Fe::ONE] }
    }

    pub fn constant(a: Fe) -> Poly {
        Poly::new(vec![a])
    }

    /// `t - a`
    pub fn linear(f: &Fq, a: Fe) -> Poly {
        Poly { c: vec![f.neg(a), Fe::ONE] }
    }

    /// `t - 1`
    pub fn t_minus_one(f: &Fq) -> Poly {
        Poly::linear(f, Fe::ONE)
    }

    /// `t + 1`
    pub fn t_plus_one(f: &Fq) -> Poly {
        Poly::linear(f, f.neg(Fe::ONE))
    }

    pub fn from_ints(f: &Fq, v: &[i64]) -> Poly {
        Poly::new(v.iter().map(|&x| f.from_int(x)).collect())
    }

    /// Parses ascending comma-separated coefficients, e.g. "1,0,1" for t^2+1.
    pub fn parse(f: &Fq, s: &str) -> Result<Poly> {
        let v = s
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coefficient {x:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_ints(f, &v))
    }

    pub fn to_ints(&self) -> Vec<u32> {
        self.c.iter().map(|x| x.0 as u32).collect()
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Fe::ONE
    }

    pub fn add(&self, other: &Poly, f: &Fq) -> Poly {
        let n = self.c.len().max(other.c.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &Fq) -> Poly {
        let n = self.c.len().max(other.c.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, a: Fe, f: &Fq) -> Poly {
        Poly::new(self.c.iter().map(|&x| f.mul(a, x)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &Fq) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Fe::ZERO; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = f.mul_add(c[i + j], a, b);
            }
        }
        Poly::new(c)
    }

    pub fn pow(&self, e: u32, f: &Fq) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self, f))
    }

    pub fn divmod(&self, g: &Poly, f: &Fq) -> Result<(Poly, Poly)> {
        let dg = g.degree().ok_or(Error::DivisionByZero)?;
        let inv = f.inv(g.lead())?;
        let mut r = self.c.clone();
        if r.len() <= dg {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Fe::ZERO; r.len() - dg];
        for top in (dg..r.len()).rev() {
            let c = f.mul(r[top], inv);
            if c.is_zero() {
                continue;
            }
            quot[top - dg] = c;
            for (i, &b) in g.c.iter().enumerate() {
                let j = top - dg + i;
                r[j] = f.sub(r[j], f.mul(c, b));
            }
        }
        Ok((Poly::new(quot), Poly::new(r)))
    }

    pub fn rem(&self, g: &Poly, f: &Fq) -> Result<Poly> {
        Ok(self.divmod(g, f)?.1)
    }

    pub fn monic(&self, f: &Fq) -> Poly {
        match f.inv(self.lead()) {
            Ok(inv) => self.scale(inv, f),
            Err(_) => Poly::zero(),
        }
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &Fq) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn eval(&self, x: Fe, f: &Fq) -> Fe {
        self.c.iter().rev().fold(Fe::ZERO, |acc, &a| f.mul_add(a, acc, x))
    }

    /// The dual `sum a_i a_0^{-1} t^{d-i}` of a monic polynomial with nonzero constant term.
    pub fn dual(&self, f: &Fq) -> Result<Poly> {
        if !self.is_monic() {
            return Err(invalid("dual of a non-monic polynomial"));
        }
        let a0 = self.coeff(0);
        let inv = f.inv(a0).map_err(|_| invalid("dual needs a nonzero constant term"))?;
        Ok(Poly::new(self.c.iter().rev().map(|&a| f.mul(a, inv)).collect()))
    }

    pub fn is_self_dual(&self, f: &Fq) -> bool {
        self.dual(f).is_ok_and(|d| &d == self)
    }

    /// Human-readable form in the variable t, e.g. "t^2 + 2t + 1".
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let coef = if a == Fe::ONE && i > 0 { String::new() } else { a.to_string() };
            match i {
                0 => out.push_str(&a.to_string()),
                1 => {
                    let _ = write!(out, "{coef}t");
                }
                _ => {
                    let _ = write!(out, "{coef}t^{i}");
                }
            }
        }
        out
    }
}

type IrrKey = (u32, u32, usize);

fn irr_cache() -> &'static Mutex<HashMap<IrrKey, Arc<Vec<Poly>>>> {
    static CACHE: OnceLock<Mutex<HashMap<IrrKey, Arc<Vec<Poly>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn monic_of_degree(f: &Fq, d: usize, idx: usize) -> Poly {
    let q = f.q();
    let mut c = Vec::with_capacity(d + 1);
    let mut x = idx;
    for _ in 0..d {
        c.push(Fe((x % q) as u8));
        x /= q;
    }
    c.push(Fe::ONE);
    Poly::new(c)
}

/// All monic irreducibles of degree exactly `d`, excluding t, in canonical order.
pub fn irreducibles_of_degree(f: &Fq, d: usize) -> Arc<Vec<Poly>> {
    let key = (f.p(), f.k(), d);
    if let Some(v) = irr_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let count = f.q().pow(d as u32);
    let mut out = Vec::new();
    if d >= 1 {
        for idx in 0..count {
            let g = monic_of_degree(f, d, idx);
            if g.coeff(0).is_zero() {
                continue;
            }
            if is_irreducible_with(f, &g, |e| irreducibles_of_degree(f, e)) {
                out.push(g);
            }
        }
    }
    out.sort();
    let v = Arc::new(out);
    irr_cache().lock().unwrap().insert(key, v.clone());
    v
}

fn is_irreducible_with(f: &Fq, g: &Poly, table: impl Fn(usize) -> Arc<Vec<Poly>>) -> bool {
    let d = match g.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    if f.elements().into_iter().any(|x| g.eval(x, f).is_zero()) {
        return false;
    }
    for e in 2..=d / 2 {
        for h in table(e).iter() {
            if g.rem(h, f).expect("nonzero").is_zero() {
                return false;
            }
        }
    }
    true
}

pub fn is_irreducible(f: &Fq, g: &Poly) -> bool {
    is_irreducible_with(f, g, |e| irreducibles_of_degree(f, e))
}

/// All monic irreducibles of degree at most `d`, excluding t.
pub fn monic_irreducibles(f: &Fq, d: usize) -> Vec<Poly> {
    (1..=d).flat_map(|e| irreducibles_of_degree(f, e).iter().cloned().collect::<Vec<_>>()).collect()
}

/// Factorization of a monic polynomial into (irreducible, exponent) in canonical order.
/// A factor `t` is reported like any other.
pub fn factor(f: &Fq, g: &Poly) -> Result<Vec<(Poly, u32)>> {
    if !g.is_monic() {
        return Err(invalid("factor needs a monic polynomial"));
    }
    let mut rem = g.clone();
    let mut out = Vec::new();
    let zeros = rem.c.iter().take_while(|x| x.is_zero()).count();
    if zeros > 0 {
        out.push((Poly::new(vec![Fe::ZERO, Fe::ONE]), zeros as u32));
        rem = Poly::new(rem.c[zeros..].to_vec());
    }
    for a in f.units() {
        if rem.deg() == 0 {
            break;
        }
        let lin = Poly::linear(f, a);
        let mut e = 0;
        while rem.deg() >= 1 && rem.eval(a, f).is_zero() {
            rem = rem.divmod(&lin, f)?.0;
            e += 1;
        }
        if e > 0 {
            out.push((lin, e));
        }
    }
    let mut d = 2;
    while 2 * d <= rem.deg() {
        for h in irreducibles_of_degree(f, d).iter() {
            let mut e = 0;
            loop {
                let (qt, r) = rem.divmod(h, f)?;
                if !r.is_zero() {
                    break;
                }
                rem = qt;
                e += 1;
            }
            if e > 0 {
                out.push((h.clone(), e));
            }
        }
        d += 1;
    }
    if rem.deg() >= 1 {
        match out.iter_mut().find(|(h, _)| *h == rem) {
            Some(entry) => entry.1 += 1,
            None => out.push((rem, 1)),
        }
    }
    out.sort();
    Ok(out)
}

/// True iff `g` is irreducible, or `g = h * dual(h)` with `h` irreducible and not self-dual.
/// Non-self-dual input is rejected with `false`.
pub fn is_dual_irreducible(f: &Fq, g: &Poly) -> bool {
    if !g.is_self_dual(f) {
        return false;
    }
    if is_irreducible(f, g) {
        return true;
    }
    match factor(f, g) {
        Ok(fs) if fs.len() == 2 && fs.iter().all(|(_, e)| *e == 1) => {
            let (a, b) = (&fs[0].0, &fs[1].0);
            a.dual(f).is_ok_and(|d| &d == b)
        }
        _ => false,
    }
}

/// The dual-irreducible keys of degree at most `d`: self-dual irreducibles (including
/// t-1 and t+1) and products `h * dual(h)` for non-self-dual irreducible `h`.
pub fn dual_irreducible_keys(f: &Fq, d: usize) -> Vec<Poly> {
    let mut out = Vec::new();
    for e in 1..=d {
        for h in irreducibles_of_degree(f, e).iter() {
            let hd = h.dual(f).expect("irreducible other than t");
            if &hd == h {
                out.push(h.clone());
            } else if h < &hd && 2 * e <= d {
                out.push(h.mul(&hd, f));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u32) -> Fq {
        Fq::parse(&q.to_string()).unwrap()
    }

    fn p(fq: &Fq, v: &[i64]) -> Poly {
        Poly::from_ints(fq, v)
    }

    // Brute-force oracle: a monic polynomial of degree <= 3 is irreducible iff it has no root.
    fn rootless(fq: &Fq, g: &Poly) -> bool {
        fq.elements().into_iter().all(|x| !g.eval(x, fq).is_zero())
    }

    #[test]
    fn arithmetic_examples() {
        let f3 = f(3);
        assert_eq!(p(&f3, &[-1, 1]).mul(&p(&f3, &[1, 1]), &f3), p(&f3, &[-1, 0, 1]));
        assert_eq!(p(&f3, &[-1, 0, 1]).gcd(&p(&f3, &[-1, 1]), &f3), p(&f3, &[-1, 1]));
        let g = p(&f3, &[2, 0, 1, 1]);
        assert_eq!(g.mul(&Poly::one(), &f3), g);
        assert!(g.divmod(&Poly::zero(), &f3).is_err());
    }

    #[test]
    fn divmod_reconstructs() {
        let f5 = f(5);
        let a = p(&f5, &[1, 2, 3, 4, 1, 2]);
        let b = p(&f5, &[3, 0, 2]);
        let (qt, r) = a.divmod(&b, &f5).unwrap();
        assert!(r.deg() < b.deg());
        assert_eq!(qt.mul(&b, &f5).add(&r, &f5), a);
    }

    #[test]
    fn irreducible_counts() {
        let f3 = f(3);
        assert_eq!(*irreducibles_of_degree(&f3, 1), vec![p(&f3, &[1, 1]), p(&f3, &[2, 1])]);
        let brute2 = (0..9).map(|i| monic_of_degree(&f3, 2, i)).filter(|g| rootless(&f3, g)).count();
        assert_eq!(brute2, 3);
        assert_eq!(irreducibles_of_degree(&f3, 2).len(), brute2);
        let f2 = f(2);
        let brute3 = (0..8).map(|i| monic_of_degree(&f2, 3, i)).filter(|g| rootless(&f2, g)).count();
        assert_eq!(brute3, 2);
        assert_eq!(irreducibles_of_degree(&f2, 3).len(), brute3);
        assert!(monic_irreducibles(&f3, 3).iter().all(|g| g.coeff(0) != Fe::ZERO));
    }

    #[test]
    fn necklace_counts() {
        // number of monic irreducibles of degree d is (1/d) sum_{e|d} mu(d/e) q^e; minus t for d=1
        let mobius = |n: usize| -> i64 {
            let mut n = n;
            let mut r = 1;
            let mut d = 2;
            while d * d <= n {
                if n.is_multiple_of(d) {
                    n /= d;
                    if n.is_multiple_of(d) {
                        return 0;
                    }
                    r = -r;
                }
                d += 1;
            }
            if n > 1 {
                r = -r;
            }
            r
        };
        for q in [2u32, 3, 5, 9] {
            let fq = f(q);
            for d in 1..=4usize {
                let n: i64 = (1..=d).filter(|e| d % e == 0).map(|e| mobius(d / e) * (q as i64).pow(e as u32)).sum::<i64>()
                    / d as i64;
                let expected = if d == 1 { n - 1 } else { n };
                assert_eq!(irreducibles_of_degree(&fq, d).len() as i64, expected, "q={q} d={d}");
            }
        }
    }

    #[test]
    fn factor_examples() {
        let f3 = f(3);
        assert_eq!(factor(&f3, &p(&f3, &[1, -2, 1])).unwrap(), vec![(p(&f3, &[-1, 1]), 2)]);
        let g = p(&f3, &[1, 0, 1]);
        assert!(rootless(&f3, &g));
        assert_eq!(factor(&f3, &g).unwrap(), vec![(g.clone(), 1)]);
        let f5 = f(5);
        let fs = factor(&f5, &p(&f5, &[-1, 0, 1])).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&(p(&f5, &[-1, 1]), 1)));
        assert!(fs.contains(&(p(&f5, &[1, 1]), 1)));
        assert!(factor(&f5, &p(&f5, &[1, 2])).is_err());
    }

    #[test]
    fn dual_examples() {
        let f3 = f(3);
        let f5 = f(5);
        assert_eq!(p(&f3, &[-1, 1]).dual(&f3).unwrap(), p(&f3, &[-1, 1]));
        // root 2 of t-2 inverts to 3 in F_5
        let d = p(&f5, &[-2, 1]).dual(&f5).unwrap();
        assert_eq!(f5.inv(Fe(2)).unwrap(), Fe(3));
        assert_eq!(d, p(&f5, &[-3, 1]));
        assert_eq!(p(&f3, &[1, 0, 1]).dual(&f3).unwrap(), p(&f3, &[1, 0, 1]));
        assert!(p(&f3, &[0, 1]).dual(&f3).is_err());
    }

    #[test]
    fn dual_irreducible_examples() {
        let f3 = f(3);
        let f5 = f(5);
        assert!(is_dual_irreducible(&f3, &p(&f3, &[1, 0, 1])));
        let pair = p(&f5, &[-2, 1]).mul(&p(&f5, &[-3, 1]), &f5);
        assert!(is_dual_irreducible(&f5, &pair));
        assert!(!is_dual_irreducible(&f3, &p(&f3, &[1, -2, 1])));
        assert!(!is_dual_irreducible(&f5, &p(&f5, &[-2, 1])));
    }

    #[test]
    fn dual_preserves_irreducibility() {
        for q in [3, 5] {
            let fq = f(q);
            for g in monic_irreducibles(&fq, 3) {
                let d = g.dual(&fq).unwrap();
                assert!(is_irreducible(&fq, &d));
                assert_eq!(d.dual(&fq).unwrap(), g);
            }
        }
    }

    #[test]
    fn dual_keys_over_f3() {
        let f3 = f(3);
        let keys = dual_irreducible_keys(&f3, 2);
        // t-1, t+1, t^2+1 (self-dual); t^2+t+2 and t^2+2t+2 are duals of each other,
        // and the only non-self-dual linear factors would be t-a with a != a^{-1}: none over F_3.
        assert!(keys.contains(&p(&f3, &[-1, 1])));
        assert!(keys.contains(&p(&f3, &[1, 1])));
        assert!(keys.contains(&p(&f3, &[1, 0, 1])));
        for k in &keys {
            assert!(is_dual_irreducible(&f3, k));
        }
        let f5 = f(5);
        let keys5 = dual_irreducible_keys(&f5, 2);
        assert!(keys5.contains(&p(&f5, &[-2, 1]).mul(&p(&f5, &[-3, 1]), &f5)));
    }

    fn arb_monic(q: u32, maxdeg: usize) -> impl Strategy<Value = (u32, Vec<i64>)> {
        (1..=maxdeg).prop_flat_map(move |d| (Just(q), prop::collection::vec(0..q as i64, d)))
    }

    proptest! {
        #[test]
        fn dual_is_involution((q, low) in prop_oneof![arb_monic(3, 6), arb_monic(5, 6), arb_monic(7, 5)]) {
            let fq = f(q);
            let mut c = low.clone();
            if c[0] == 0 { c[0] = 1; }
            c.push(1);
            let g = Poly::from_ints(&fq, &c);
            prop_assert_eq!(g.dual(&fq).unwrap().dual(&fq).unwrap(), g.clone());
            for x in fq.units() {
                if g.eval(x, &fq).is_zero() {
                    let xi = fq.inv(x).unwrap();
                    prop_assert!(g.dual(&fq).unwrap().eval(xi, &fq).is_zero());
                }
            }
        }

        #[test]
        fn dual_is_multiplicative(a in prop::collection::vec(0..5i64, 1..4), b in prop::collection::vec(0..5i64, 1..4)) {
            let fq = f(5);
            let mk = |v: &Vec<i64>| {
                let mut c = v.clone();
                if c[0] == 0 { c[0] = 2; }
                c.push(1);
                Poly::from_ints(&fq, &c)
            };
            let (g, h) = (mk(&a), mk(&b));
            let lhs = g.mul(&h, &fq).dual(&fq).unwrap();
            let rhs = g.dual(&fq).unwrap().mul(&h.dual(&fq).unwrap(), &fq);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn factor_multiplies_back(low in prop::collection::vec(0..3i64, 1..9)) {
            let fq = f(3);
            let mut c = low.clone();
            c.push(1);
            let g = Poly::from_ints(&fq, &c);
            let fs = factor(&fq, &g).unwrap();
            let mut prod = Poly::one();
            for (h, e) in &fs {
                prop_assert!(is_irreducible(&fq, h) || h.to_ints() == vec![0, 1]);
                prod = prod.mul(&h.pow(*e, &fq), &fq);
            }
            prop_assert_eq!(prod, g);
        }
    }
}
