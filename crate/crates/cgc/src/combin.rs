//! Partitions, partition-valued functions and their signed symplectic variant.
//!
//! A conjugacy type of GL_n(q) is a [`PartitionFn`]: a partition for each monic
//! irreducible other than t. For Sp_n(q) the keys are dual-irreducible and the
//! entries at t-1 and t+1 also carry Wall signs, giving a [`SymplecticFn`].
//! The modification operator strips one box from every part at t-1; completion
//! and n-completion put them back and pad with 1-parts.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gf::Fq;
use crate::poly::{self, Poly};

/// A non-increasing list of positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    /// `(1, 1, .., 1)` with `n` parts.
    pub fn ones(n: usize) -> Partition {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Subtract one from every part and drop the zeros.
    pub fn modify(&self) -> Partition {
        Partition(self.0.iter().filter(|&&p| p > 1).map(|&p| p - 1).collect())
    }

    /// Add one to every part.
    pub fn complete(&self) -> Partition {
        Partition(self.0.iter().map(|&p| p + 1).collect())
    }

    /// Complete, then pad with 1-parts up to weight `n`.
    pub fn ncomplete(&self, n: usize) -> Result<Partition> {
        let mut c = self.complete();
        let w = c.weight();
        if w > n {
            return Err(invalid(format!("completion has weight {w} > {n}")));
        }
        c.0.extend(std::iter::repeat_n(1, n - w));
        Ok(c)
    }

    /// `(size, multiplicity)` pairs in ascending size.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in self.0.iter().rev() {
            match out.last_mut() {
                Some((s, m)) if *s == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn conjugate(&self) -> Partition {
        let top = self.0.first().copied().unwrap_or(0);
        Partition((1..=top).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    /// Odd parts occur with even multiplicity.
    pub fn is_symplectic_shape(&self) -> bool {
        self.multiplicities().iter().all(|&(s, m)| s % 2 == 0 || m % 2 == 0)
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=max.min(rem)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n as u32, n as u32, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// One run of equal parts with its sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SignedPart {
    pub size: u32,
    pub mult: u32,
    pub sign: i8,
}

/// Runs of equal parts in ascending size, each with one sign.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct SignedPartition(Vec<SignedPart>);

impl SignedPartition {
    pub fn new(mut runs: Vec<SignedPart>) -> Result<SignedPartition> {
        runs.retain(|r| r.mult > 0);
        runs.sort();
        for w in runs.windows(2) {
            if w[0].size == w[1].size {
                return Err(invalid(format!("two sign entries for part size {}", w[0].size)));
            }
        }
        if runs.iter().any(|r| r.size == 0 || (r.sign != 1 && r.sign != -1)) {
            return Err(invalid("bad signed part"));
        }
        Ok(SignedPartition(runs))
    }

    pub fn empty() -> SignedPartition {
        SignedPartition(Vec::new())
    }

    pub fn runs(&self) -> &[SignedPart] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.0.iter().flat_map(|r| std::iter::repeat_n(r.size, r.mult as usize)).collect())
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|r| (r.size * r.mult) as usize).sum()
    }

    pub fn sign_of(&self, size: u32) -> Option<i8> {
        self.0.iter().find(|r| r.size == size).map(|r| r.sign)
    }

    /// Odd parts have even multiplicity and sign -1.
    pub fn is_symplectic(&self) -> bool {
        self.0.iter().all(|r| r.size % 2 == 0 || (r.mult % 2 == 0 && r.sign == -1))
    }

    /// Part i+1 becomes part i and keeps its sign; parts of size 1 vanish.
    pub fn modify(&self) -> SignedPartition {
        SignedPartition(
            self.0.iter().filter(|r| r.size > 1).map(|r| SignedPart { size: r.size - 1, ..*r }).collect(),
        )
    }

    pub fn complete(&self) -> SignedPartition {
        SignedPartition(self.0.iter().map(|r| SignedPart { size: r.size + 1, ..*r }).collect())
    }

    /// Complete, then pad with `pad` parts of size 1 and sign -1.
    pub fn complete_padded(&self, pad: usize) -> SignedPartition {
        let mut c = self.complete();
        if pad > 0 {
            c.0.insert(0, SignedPart { size: 1, mult: pad as u32, sign: -1 });
        }
        c
    }

    /// All symplectic signed partitions of `n`.
    pub fn all_symplectic(n: usize) -> Vec<SignedPartition> {
        let mut out = Vec::new();
        for p in Partition::all(n) {
            if !p.is_symplectic_shape() {
                continue;
            }
            let mult = p.multiplicities();
            let free: Vec<usize> = (0..mult.len()).filter(|&i| mult[i].0 % 2 == 0).collect();
            for mask in 0..(1u32 << free.len()) {
                let runs = mult
                    .iter()
                    .enumerate()
                    .map(|(i, &(size, m))| {
                        let sign = match free.iter().position(|&j| j == i) {
                            Some(b) if mask >> b & 1 == 1 => 1,
                            Some(_) => -1,
                            None => -1,
                        };
                        SignedPart { size, mult: m, sign }
                    })
                    .collect();
                out.push(SignedPartition(runs));
            }
        }
        out
    }
}

impl fmt::Display for SignedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .0
            .iter()
            .map(|r| format!("{}^({},{})", r.size, r.mult, if r.sign > 0 { "+" } else { "-" }))
            .collect();
        write!(f, "({})", s.join(","))
    }
}

/// A partition for each key polynomial; absent keys mean the empty partition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct PartitionFn(BTreeMap<Poly, Partition>);

impl PartitionFn {
    pub fn new() -> PartitionFn {
        PartitionFn(BTreeMap::new())
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Poly, Partition)>) -> PartitionFn {
        let mut m = PartitionFn::new();
        for (k, v) in entries {
            m.set(k, v);
        }
        m
    }

    pub fn set(&mut self, key: Poly, part: Partition) {
        if part.is_empty() {
            self.0.remove(&key);
        } else {
            self.0.insert(key, part);
        }
    }

    pub fn get(&self, key: &Poly) -> Partition {
        self.0.get(key).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Poly, &Partition)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|(k, v)| k.deg() * v.weight()).sum()
    }

    fn map_unipotent(&self, fq: &Fq, g: impl FnOnce(&Partition) -> Result<Partition>) -> Result<PartitionFn> {
        let key = Poly::t_minus_one(fq);
        let mut out = self.clone();
        let new = g(&self.get(&key))?;
        out.set(key, new);
        Ok(out)
    }

    pub fn modify(&self, fq: &Fq) -> PartitionFn {
        self.map_unipotent(fq, |p| Ok(p.modify())).expect("infallible")
    }

    pub fn complete(&self, fq: &Fq) -> PartitionFn {
        self.map_unipotent(fq, |p| Ok(p.complete())).expect("infallible")
    }

    /// Complete at t-1, then pad with 1-parts there up to total weight `n`.
    pub fn ncomplete(&self, fq: &Fq, n: usize) -> Result<PartitionFn> {
        let c = self.complete(fq);
        let w = c.weight();
        if w > n {
            return Err(invalid(format!("completion has weight {w} > {n}")));
        }
        let key = Poly::t_minus_one(fq);
        let mut part = c.get(&key).0;
        part.extend(std::iter::repeat_n(1, n - w));
        let mut out = c;
        out.set(key, Partition::new(part));
        Ok(out)
    }

    /// (part at t-1, everything else)
    pub fn unipotent_split(&self, fq: &Fq) -> (PartitionFn, PartitionFn) {
        let key = Poly::t_minus_one(fq);
        let mut e = PartitionFn::new();
        let mut ne = self.clone();
        if let Some(p) = ne.0.remove(&key) {
            e.set(key, p);
        }
        (e, ne)
    }

    pub fn describe(&self) -> String {
        if self.0.is_empty() {
            return "{}".into();
        }
        let s: Vec<String> = self.0.iter().map(|(k, v)| format!("{}:{}", k.pretty(), v)).collect();
        format!("{{{}}}", s.join(", "))
    }
}

/// A symplectic type: dual-irreducible keys plus Wall signs at t-1 and t+1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct SymplecticFn {
    pub base: PartitionFn,
    pub hminus: SignedPartition,
    pub hplus: SignedPartition,
}

impl SymplecticFn {
    /// Builds the type from the non-unipotent entries and the two signed partitions;
    /// any t-1/t+1 entries of `rest` are overwritten.
    pub fn assemble(fq: &Fq, rest: PartitionFn, hminus: SignedPartition, hplus: SignedPartition) -> SymplecticFn {
        let mut base = rest;
        base.set(Poly::t_minus_one(fq), hminus.partition());
        base.set(Poly::t_plus_one(fq), hplus.partition());
        SymplecticFn { base, hminus, hplus }
    }

    pub fn weight(&self) -> usize {
        self.base.weight()
    }

    /// Checks the invariants of a full (unmodified) symplectic type.
    pub fn validate(&self, fq: &Fq) -> Result<()> {
        self.check_signs_agree(fq)?;
        if !self.hminus.is_symplectic() || !self.hplus.is_symplectic() {
            return Err(invalid("odd parts at t-1/t+1 need even multiplicity and sign -1"));
        }
        for (k, _) in self.base.iter() {
            if !poly::is_dual_irreducible(fq, k) {
                return Err(invalid(format!("key {} is not dual-irreducible", k.pretty())));
            }
        }
        Ok(())
    }

    fn check_signs_agree(&self, fq: &Fq) -> Result<()> {
        if self.base.get(&Poly::t_minus_one(fq)) != self.hminus.partition()
            || self.base.get(&Poly::t_plus_one(fq)) != self.hplus.partition()
        {
            return Err(invalid("sign data disagrees with the partitions at t-1/t+1"));
        }
        Ok(())
    }

    pub fn modify(&self, fq: &Fq) -> SymplecticFn {
        SymplecticFn::assemble(fq, self.base.clone(), self.hminus.modify(), self.hplus.clone())
    }

    pub fn complete(&self, fq: &Fq) -> SymplecticFn {
        SymplecticFn::assemble(fq, self.base.clone(), self.hminus.complete(), self.hplus.clone())
    }

    /// Completion padded to total weight `2n`; the new 1-parts carry sign -1.
    pub fn ncomplete(&self, fq: &Fq, n: usize) -> Result<SymplecticFn> {
        let c = self.complete(fq);
        let w = c.weight();
        if w > 2 * n {
            return Err(invalid(format!("completion has weight {w} > {}", 2 * n)));
        }
        let pad = 2 * n - w;
        if pad % 2 == 1 {
            return Err(invalid("completion has odd weight"));
        }
        let out =
            SymplecticFn::assemble(fq, self.base.clone(), self.hminus.complete_padded(pad), self.hplus.clone());
        out.validate(fq)?;
        Ok(out)
    }

    pub fn describe(&self, fq: &Fq) -> String {
        let tm = Poly::t_minus_one(fq);
        let tp = Poly::t_plus_one(fq);
        if self.base.is_empty() {
            return "{}".into();
        }
        let s: Vec<String> = self
            .base
            .iter()
            .map(|(k, v)| {
                if *k == tm {
                    format!("{}:{}", k.pretty(), self.hminus)
                } else if *k == tp {
                    format!("{}:{}", k.pretty(), self.hplus)
                } else {
                    format!("{}:{}", k.pretty(), v)
                }
            })
            .collect();
        format!("{{{}}}", s.join(", "))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Gl,
    Sp,
}

impl Kind {
    pub fn parse(s: &str) -> Result<Kind> {
        match s {
            "gl" => Ok(Kind::Gl),
            "sp" => Ok(Kind::Sp),
            _ => Err(Error::Parse(format!("unknown kind {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Gl => "gl",
            Kind::Sp => "sp",
        }
    }
}

/// A conjugacy type of either family.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ClassType {
    Gl(PartitionFn),
    Sp(SymplecticFn),
}

impl ClassType {
    pub fn kind(&self) -> Kind {
        match self {
            ClassType::Gl(_) => Kind::Gl,
            ClassType::Sp(_) => Kind::Sp,
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            ClassType::Gl(t) => t.weight(),
            ClassType::Sp(t) => t.weight(),
        }
    }

    pub fn base(&self) -> &PartitionFn {
        match self {
            ClassType::Gl(t) => t,
            ClassType::Sp(t) => &t.base,
        }
    }

    pub fn modify(&self, fq: &Fq) -> ClassType {
        match self {
            ClassType::Gl(t) => ClassType::Gl(t.modify(fq)),
            ClassType::Sp(t) => ClassType::Sp(t.modify(fq)),
        }
    }

    pub fn complete(&self, fq: &Fq) -> ClassType {
        match self {
            ClassType::Gl(t) => ClassType::Gl(t.complete(fq)),
            ClassType::Sp(t) => ClassType::Sp(t.complete(fq)),
        }
    }

    /// n-completion into GL_n or Sp_n (matrix size n resp. 2n).
    pub fn ncomplete(&self, fq: &Fq, n: usize) -> Result<ClassType> {
        Ok(match self {
            ClassType::Gl(t) => ClassType::Gl(t.ncomplete(fq, n)?),
            ClassType::Sp(t) => ClassType::Sp(t.ncomplete(fq, n)?),
        })
    }

    /// The smallest rank n at which this modified type is realizable.
    pub fn min_rank(&self, fq: &Fq) -> usize {
        match self {
            ClassType::Gl(t) => t.complete(fq).weight(),
            ClassType::Sp(t) => t.complete(fq).weight().div_ceil(2),
        }
    }

    pub fn describe(&self, fq: &Fq) -> String {
        match self {
            ClassType::Gl(t) => t.describe(),
            ClassType::Sp(t) => t.describe(fq),
        }
    }

    pub fn to_json(&self, fq: &Fq) -> serde_json::Value {
        let tm = Poly::t_minus_one(fq);
        let tp = Poly::t_plus_one(fq);
        let signs = |h: &SignedPartition| -> Vec<(u32, u32, i8)> {
            h.runs().iter().map(|r| (r.size, r.mult, r.sign)).collect()
        };
        let factors: Vec<FactorJson> = self
            .base()
            .iter()
            .map(|(k, v)| {
                let s = match self {
                    ClassType::Sp(t) if *k == tm => Some(signs(&t.hminus)),
                    ClassType::Sp(t) if *k == tp => Some(signs(&t.hplus)),
                    _ => None,
                };
                FactorJson { poly: k.to_ints().into_iter().map(i64::from).collect(), parts: v.0.clone(), signs: s }
            })
            .collect();
        serde_json::to_value(TypeJson { factors }).expect("serializable")
    }

    /// Loads a type from JSON. Sign data is required at t-1 and t+1 for sp.
    pub fn from_json(fq: &Fq, kind: Kind, v: &serde_json::Value) -> Result<ClassType> {
        let tj: TypeJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let tm = Poly::t_minus_one(fq);
        let tp = Poly::t_plus_one(fq);
        let mut base = PartitionFn::new();
        let mut hminus = SignedPartition::empty();
        let mut hplus = SignedPartition::empty();
        for fj in tj.factors {
            let key = Poly::from_ints(fq, &fj.poly);
            if !key.is_monic() || key.deg() == 0 {
                return Err(invalid(format!("key {:?} is not a monic nonconstant polynomial", fj.poly)));
            }
            let part = Partition::new(fj.parts);
            if base.0.contains_key(&key) {
                return Err(invalid(format!("duplicate key {}", key.pretty())));
            }
            if kind == Kind::Sp && (key == tm || key == tp) {
                let runs = fj
                    .signs
                    .ok_or_else(|| invalid(format!("sign data required at {}", key.pretty())))?
                    .into_iter()
                    .map(|(size, mult, sign)| SignedPart { size, mult, sign })
                    .collect();
                let h = SignedPartition::new(runs)?;
                if h.partition() != part {
                    return Err(invalid(format!("sign data disagrees with parts at {}", key.pretty())));
                }
                if key == tm {
                    hminus = h;
                } else {
                    hplus = h;
                }
            }
            base.set(key, part);
        }
        Ok(match kind {
            Kind::Gl => ClassType::Gl(base),
            Kind::Sp => ClassType::Sp(SymplecticFn { base, hminus, hplus }),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TypeJson {
    factors: Vec<FactorJson>,
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    poly: Vec<i64>,
    parts: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signs: Option<Vec<(u32, u32, i8)>>,
}

/// All types of the given total weight (matrix size).
pub fn enumerate_types(fq: &Fq, weight: usize, kind: Kind) -> Result<Vec<ClassType>> {
    match kind {
        Kind::Gl => {
            let keys = poly::monic_irreducibles(fq, weight.max(1));
            let mut out = Vec::new();
            let mut cur = Vec::new();
            gl_rec(&keys, 0, weight, &mut cur, &mut out);
            Ok(out.into_iter().map(ClassType::Gl).collect())
        }
        Kind::Sp => {
            if weight % 2 == 1 {
                return Err(invalid("symplectic types need even weight"));
            }
            if !fq.is_odd() {
                return Err(Error::Unsupported("symplectic types need odd q".into()));
            }
            let keys = poly::dual_irreducible_keys(fq, weight.max(1));
            let tm = Poly::t_minus_one(fq);
            let tp = Poly::t_plus_one(fq);
            let mut out = Vec::new();
            let mut cur = Vec::new();
            sp_rec(fq, &keys, &tm, &tp, 0, weight, &mut cur, &mut out);
            Ok(out.into_iter().map(ClassType::Sp).collect())
        }
    }
}

fn gl_rec(keys: &[Poly], i: usize, rem: usize, cur: &mut Vec<(Poly, Partition)>, out: &mut Vec<PartitionFn>) {
    if rem == 0 {
        out.push(PartitionFn::from_entries(cur.iter().cloned()));
        return;
    }
    if i == keys.len() {
        return;
    }
    let d = keys[i].deg();
    gl_rec(keys, i + 1, rem, cur, out);
    for k in 1..=rem / d {
        for p in Partition::all(k) {
            cur.push((keys[i].clone(), p));
            gl_rec(keys, i + 1, rem - k * d, cur, out);
            cur.pop();
        }
    }
}

enum Entry {
    Plain(Poly, Partition),
    Minus(SignedPartition),
    Plus(SignedPartition),
}

#[allow(clippy::too_many_arguments)]
fn sp_rec(
    fq: &Fq,
    keys: &[Poly],
    tm: &Poly,
    tp: &Poly,
    i: usize,
    rem: usize,
    cur: &mut Vec<Entry>,
    out: &mut Vec<SymplecticFn>,
) {
    if rem == 0 {
        let mut rest = PartitionFn::new();
        let mut hm = SignedPartition::empty();
        let mut hp = SignedPartition::empty();
        for e in cur.iter() {
            match e {
                Entry::Plain(k, p) => rest.set(k.clone(), p.clone()),
                Entry::Minus(h) => hm = h.clone(),
                Entry::Plus(h) => hp = h.clone(),
            }
        }
        out.push(SymplecticFn::assemble(fq, rest, hm, hp));
        return;
    }
    if i == keys.len() {
        return;
    }
    let key = &keys[i];
    let d = key.deg();
    sp_rec(fq, keys, tm, tp, i + 1, rem, cur, out);
    for k in 1..=rem / d {
        if key == tm || key == tp {
            for h in SignedPartition::all_symplectic(k) {
                cur.push(if key == tm { Entry::Minus(h) } else { Entry::Plus(h) });
                sp_rec(fq, keys, tm, tp, i + 1, rem - k * d, cur, out);
                cur.pop();
            }
        } else {
            for p in Partition::all(k) {
                cur.push(Entry::Plain(key.clone(), p));
                sp_rec(fq, keys, tm, tp, i + 1, rem - k * d, cur, out);
                cur.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u32) -> Fq {
        Fq::parse(&q.to_string()).unwrap()
    }

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn partition_operators() {
        assert_eq!(part(&[4, 3, 3, 2, 1, 1, 1]).modify(), part(&[3, 2, 2, 1]));
        assert_eq!(part(&[3, 2, 2, 1]).weight(), 8);
        assert_eq!(Partition::empty().modify(), Partition::empty());
        assert_eq!(part(&[2, 1]).complete(), part(&[3, 2]));
        assert_eq!(part(&[3, 2, 2, 1]).complete(), part(&[4, 3, 3, 2]));
        assert_eq!(part(&[3, 2, 2, 1]).ncomplete(15).unwrap(), part(&[4, 3, 3, 2, 1, 1, 1]));
        assert_eq!(Partition::empty().ncomplete(5).unwrap(), Partition::ones(5));
        assert!(part(&[3]).ncomplete(3).is_err());
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..10).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
        assert_eq!(part(&[2, 2, 1]).multiplicities(), vec![(1, 1), (2, 2)]);
    }

    // The worked example: mu(t-1) = (3,2,1,1), mu(t^2 - alpha) = (2,2,1) with alpha a non-square.
    fn example_mu(fq: &Fq) -> PartitionFn {
        let alpha = fq.nonsquare().unwrap();
        let quad = Poly::new(vec![fq.neg(alpha), crate::gf::Fe::ZERO, crate::gf::Fe::ONE]);
        assert!(poly::is_irreducible(fq, &quad));
        PartitionFn::from_entries([(Poly::t_minus_one(fq), part(&[3, 2, 1, 1])), (quad, part(&[2, 2, 1]))])
    }

    #[test]
    fn function_weights() {
        let f5 = f(5);
        let mu = example_mu(&f5);
        assert_eq!(mu.weight(), 17);
        assert_eq!(mu.modify(&f5).weight(), 13);
        assert_eq!(mu.modify(&f5).complete(&f5).weight(), 15);
        assert_eq!(mu.modify(&f5).ncomplete(&f5, 17).unwrap(), mu);
        assert_eq!(PartitionFn::new().weight(), 0);
        let (e, ne) = mu.unipotent_split(&f5);
        assert_eq!(e.weight(), 7);
        assert_eq!(ne.weight(), 10);
        assert_eq!(e.get(&Poly::t_minus_one(&f5)), part(&[3, 2, 1, 1]));
        let (e2, ne2) = e.unipotent_split(&f5);
        assert_eq!((e2, ne2), (e.clone(), PartitionFn::new()));
        let empty = PartitionFn::new();
        assert_eq!(empty.unipotent_split(&f5), (PartitionFn::new(), PartitionFn::new()));
    }

    #[test]
    fn signed_modification_shifts_signs() {
        let h = SignedPartition::new(vec![
            SignedPart { size: 1, mult: 2, sign: -1 },
            SignedPart { size: 2, mult: 1, sign: 1 },
            SignedPart { size: 3, mult: 2, sign: -1 },
        ])
        .unwrap();
        let m = h.modify();
        assert_eq!(m.runs(), &[SignedPart { size: 1, mult: 1, sign: 1 }, SignedPart { size: 2, mult: 2, sign: -1 }]);
        assert_eq!(m.complete_padded(2), h);
    }

    #[test]
    fn symplectic_fn_weight_is_base_weight() {
        let f3 = f(3);
        let h = SignedPartition::new(vec![SignedPart { size: 2, mult: 1, sign: -1 }]).unwrap();
        let t = SymplecticFn::assemble(&f3, PartitionFn::new(), h, SignedPartition::empty());
        assert_eq!(t.weight(), t.base.weight());
        assert_eq!(t.weight(), 2);
        t.validate(&f3).unwrap();
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_types(&f(3), 1, Kind::Gl).unwrap().len(), 2);
        assert_eq!(enumerate_types(&f(2), 2, Kind::Gl).unwrap().len(), 3);
        assert_eq!(enumerate_types(&f(3), 2, Kind::Sp).unwrap().len(), 7);
        assert!(enumerate_types(&f(3), 3, Kind::Sp).is_err());
        assert_eq!(enumerate_types(&f(3), 0, Kind::Gl).unwrap().len(), 1);
    }

    #[test]
    fn enumerated_types_are_valid_and_distinct() {
        for (q, w) in [(3, 4), (5, 2), (5, 4)] {
            let fq = f(q);
            let ts = enumerate_types(&fq, w, Kind::Sp).unwrap();
            let set: std::collections::HashSet<_> = ts.iter().collect();
            assert_eq!(set.len(), ts.len());
            for t in &ts {
                assert_eq!(t.weight(), w);
                if let ClassType::Sp(s) = t {
                    s.validate(&fq).unwrap();
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let fq = f(3);
        for t in enumerate_types(&fq, 4, Kind::Sp).unwrap() {
            let j = t.to_json(&fq);
            assert_eq!(ClassType::from_json(&fq, Kind::Sp, &j).unwrap(), t);
            let m = t.modify(&fq);
            assert_eq!(ClassType::from_json(&fq, Kind::Sp, &m.to_json(&fq)).unwrap(), m);
        }
        let v: serde_json::Value = serde_json::from_str(r#"{"factors":[{"poly":[-1,1],"parts":[2]}]}"#).unwrap();
        let t = ClassType::from_json(&fq, Kind::Gl, &v).unwrap();
        assert_eq!(t.base().get(&Poly::t_minus_one(&fq)), part(&[2]));
        assert!(ClassType::from_json(&fq, Kind::Sp, &v).is_err());
        assert_eq!(
            serde_json::to_string(&t.to_json(&fq)).unwrap(),
            r#"{"factors":[{"poly":[2,1],"parts":[2]}]}"#
        );
    }

    proptest! {
        #[test]
        fn modify_inverts_ncomplete(parts in prop::collection::vec(1u32..5, 0..5), extra in 0usize..4) {
            let fq = f(3);
            let lam = PartitionFn::from_entries([
                (Poly::t_minus_one(&fq), Partition::new(parts.clone())),
                (Poly::from_ints(&fq, &[1, 0, 1]), part(&[1])),
            ]);
            let n = lam.complete(&fq).weight() + extra;
            let up = lam.ncomplete(&fq, n).unwrap();
            prop_assert_eq!(up.weight(), n);
            prop_assert_eq!(up.modify(&fq), lam);
        }

        #[test]
        fn symplectic_modify_inverts_ncomplete(idx in 0usize..1000, extra in 0usize..3) {
            let fq = f(3);
            let all: Vec<ClassType> = (0..=3).flat_map(|w| enumerate_types(&fq, 2 * w, Kind::Sp).unwrap()).collect();
            let t = all[idx % all.len()].modify(&fq);
            let n = t.min_rank(&fq) + extra;
            let up = t.ncomplete(&fq, n).unwrap();
            prop_assert_eq!(up.weight(), 2 * n);
            prop_assert_eq!(up.modify(&fq), t);
        }
    }
}
