//! Structure constants of the class algebra, and the centralizer identities
//! behind their stability.
//!
//! Types passed in are *modified* types; they are n-completed for the rank of
//! the [`Center`] they are evaluated in.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::classify::{self, fixed_dim, refl_length};
use crate::combin::{ClassType, Kind};
use crate::error::{invalid, Error, Result};
use crate::gf::{Fe, Fq};
use crate::grp::{centralizer_order_filtered, conj_orbit, Group};
use crate::mat::{self, Matrix};
use crate::poly::Poly;

/// Search limits: orbit elements and centralizer search nodes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Budgets {
    pub orbit: u64,
    pub filter: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { orbit: 10_000_000, filter: 100_000_000 }
    }
}

/// Class data of one group, with orbits and class sizes memoized by full type.
pub struct Center {
    group: Group,
    budgets: Budgets,
    gens: Vec<Matrix>,
    orbits: Mutex<HashMap<ClassType, Arc<Vec<Matrix>>>>,
    sizes: Mutex<HashMap<ClassType, u128>>,
}

/// One term `c * K_eta` of a product of class sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub eta: ClassType,
    pub c: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub kind: Kind,
    pub q: usize,
    pub n: usize,
    pub lambda: Value,
    pub mu: Value,
    pub eta: Value,
    pub constant: u64,
    pub method: &'static str,
    /// Number of simultaneous-conjugation orbits on the fiber.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_sum: Option<u64>,
    pub agree: bool,
}

impl Center {
    pub fn new(group: Group, budgets: Budgets) -> Center {
        let gens = group.generators();
        Center { group, budgets, gens, orbits: Mutex::default(), sizes: Mutex::default() }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn field(&self) -> &Fq {
        &self.group.field
    }

    pub fn budgets(&self) -> Budgets {
        self.budgets
    }

    pub fn complete(&self, modified: &ClassType) -> Result<ClassType> {
        self.group.complete(modified)
    }

    /// Conjugacy class of a full type, sorted by packed code.
    pub fn orbit(&self, full: &ClassType) -> Result<Arc<Vec<Matrix>>> {
        if let Some(o) = self.orbits.lock().unwrap().get(full) {
            return Ok(o.clone());
        }
        let rep = classify::build_rep(self.field(), full)?;
        let o = Arc::new(conj_orbit(&self.group, &rep, &self.gens, self.budgets.orbit)?);
        self.orbits.lock().unwrap().insert(full.clone(), o.clone());
        Ok(o)
    }

    /// Class size |G| / |C(rep)| of a full type.
    pub fn class_size(&self, full: &ClassType) -> Result<u128> {
        if let Some(&s) = self.sizes.lock().unwrap().get(full) {
            return Ok(s);
        }
        let rep = classify::build_rep(self.field(), full)?;
        let c = self.centralizer(&[rep])?;
        let s = self.group.order() / c;
        self.sizes.lock().unwrap().insert(full.clone(), s);
        Ok(s)
    }

    pub fn centralizer(&self, us: &[Matrix]) -> Result<u128> {
        centralizer_order_filtered(self.field(), us, self.group.gram().as_ref(), self.budgets.filter)
    }

    /// Modified types of all classes of this group.
    pub fn modified_types(&self) -> Result<Vec<ClassType>> {
        Ok(self.group.types()?.iter().map(|t| t.modify(self.field())).collect())
    }

    /// Pairs `(x, x^{-1} z)` with `x` in the class of λ, `x^{-1} z` in the class of μ,
    /// `z` the representative of η.
    pub fn fiber(&self, lambda: &ClassType, mu: &ClassType, eta: &ClassType) -> Result<Vec<(Matrix, Matrix)>> {
        let f = self.field();
        let z = self.group.rep(eta)?;
        let mu_full = self.complete(mu)?;
        let mu_cp = classify::build_rep(f, &mu_full)?.char_poly(f);
        let orbit = self.orbit(&self.complete(lambda)?)?;
        let kind = self.group.kind;
        orbit
            .par_iter()
            .map(|x| -> Result<Option<(Matrix, Matrix)>> {
                let y = x.inverse(f)?.mul(&z, f);
                if y.char_poly(f) != mu_cp {
                    return Ok(None);
                }
                Ok((classify::type_of(f, kind, &y)? == mu_full).then(|| (x.clone(), y)))
            })
            .filter_map(|r| r.transpose())
            .collect()
    }

    /// c^η_{λ,μ} at this rank, by fiber counting.
    pub fn structure_constant(&self, lambda: &ClassType, mu: &ClassType, eta: &ClassType) -> Result<u64> {
        Ok(self.fiber(lambda, mu, eta)?.len() as u64)
    }

    /// All nonzero terms of `K_λ K_μ`, in the order of the type enumeration.
    pub fn product_expand(&self, lambda: &ClassType, mu: &ClassType) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        for eta in self.modified_types()? {
            let c = self.structure_constant(lambda, mu, &eta)?;
            if c > 0 {
                out.push(Term { eta, c });
            }
        }
        Ok(out)
    }

    /// Terms of top modified weight ||λ|| + ||μ||.
    pub fn filtered_product(&self, lambda: &ClassType, mu: &ClassType) -> Result<Vec<Term>> {
        Ok(filter_top(&self.product_expand(lambda, mu)?, lambda, mu))
    }

    /// `(Σ c |η|, |λ| |μ|)` for an expansion of `K_λ K_μ`.
    pub fn mass(&self, lambda: &ClassType, mu: &ClassType, terms: &[Term]) -> Result<(u128, u128)> {
        let mut lhs = 0u128;
        for t in terms {
            lhs += t.c as u128 * self.class_size(&self.complete(&t.eta)?)?;
        }
        let rhs = self.class_size(&self.complete(lambda)?)? * self.class_size(&self.complete(mu)?)?;
        Ok((lhs, rhs))
    }

    /// Splits the fiber over z into C(z)-orbits and compares
    /// Σ |C(z)| / |C(x_i) ∩ C(y_i)| with the fiber count.
    pub fn orbit_sum_check(&self, lambda: &ClassType, mu: &ClassType, eta: &ClassType) -> Result<StructureReport> {
        let f = self.field();
        let codec = self.group.codec()?;
        let z = self.group.rep(eta)?;
        let fiber = self.fiber(lambda, mu, eta)?;
        let in_fiber: HashSet<(u128, u128)> = fiber.iter().map(|(x, y)| (codec.pack(x), codec.pack(y))).collect();
        let cz = self.centralizer(&[z])?;
        let pairs: Vec<(Matrix, Matrix)> =
            self.gens.iter().map(|g| Ok((g.inverse(f)?, g.clone()))).collect::<Result<_>>()?;
        let mut covered: HashSet<(u128, u128)> = HashSet::new();
        let mut visited = 0u64;
        let mut orbits = 0;
        let mut sum = 0u64;
        let mut consistent = true;
        for (x, y) in &fiber {
            let key = (codec.pack(x), codec.pack(y));
            if covered.contains(&key) {
                continue;
            }
            // G-orbit of the pair; its points over z form one C(z)-orbit
            let mut seen = HashSet::from([key]);
            let mut queue = VecDeque::from([(x.clone(), y.clone())]);
            let mut hits = 0u64;
            while let Some((a, b)) = queue.pop_front() {
                let k = (codec.pack(&a), codec.pack(&b));
                if in_fiber.contains(&k) {
                    covered.insert(k);
                    hits += 1;
                }
                for (gi, g) in &pairs {
                    let a2 = gi.mul(&a, f).mul(g, f);
                    let b2 = gi.mul(&b, f).mul(g, f);
                    if seen.insert((codec.pack(&a2), codec.pack(&b2))) {
                        visited += 1;
                        if visited > self.budgets.orbit {
                            return Err(Error::Budget { what: "pair orbits".into(), limit: self.budgets.orbit });
                        }
                        queue.push_back((a2, b2));
                    }
                }
            }
            let cxy = self.centralizer(&[x.clone(), y.clone()])?;
            if cz % cxy != 0 || (cz / cxy) as u64 != hits {
                consistent = false;
            }
            sum += (cz / cxy) as u64;
            orbits += 1;
        }
        let constant = fiber.len() as u64;
        Ok(StructureReport {
            kind: self.group.kind,
            q: f.q(),
            n: self.group.n,
            lambda: lambda.to_json(f),
            mu: mu.to_json(f),
            eta: eta.to_json(f),
            constant,
            method: "orbit-sum",
            orbits: Some(orbits),
            orbit_sum: Some(sum),
            agree: consistent && sum == constant,
        })
    }

    pub fn report(&self, lambda: &ClassType, mu: &ClassType, eta: &ClassType) -> Result<StructureReport> {
        let f = self.field();
        Ok(StructureReport {
            kind: self.group.kind,
            q: f.q(),
            n: self.group.n,
            lambda: lambda.to_json(f),
            mu: mu.to_json(f),
            eta: eta.to_json(f),
            constant: self.structure_constant(lambda, mu, eta)?,
            method: "fiber",
            orbits: None,
            orbit_sum: None,
            agree: true,
        })
    }
}

pub fn filter_top(terms: &[Term], lambda: &ClassType, mu: &ClassType) -> Vec<Term> {
    let w = lambda.weight() + mu.weight();
    terms.iter().filter(|t| t.eta.weight() == w).cloned().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    OutOfHypothesis,
}

/// Both sides of a centralizer growth identity.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub kind: Kind,
    pub q: usize,
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub lhs: u128,
    pub rhs: u128,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// True if 1 is not an eigenvalue with a Jordan block of size 1.
pub fn no_identity_block(f: &Fq, u: &Matrix) -> Result<bool> {
    let t = classify::gl_type(f, u)?;
    Ok(!t.get(&Poly::t_minus_one(f)).parts().contains(&1))
}

fn rank_of(kind: Kind, u: &Matrix) -> Result<usize> {
    match kind {
        Kind::Gl => Ok(u.rows()),
        Kind::Sp if u.rows().is_multiple_of(2) => Ok(u.rows() / 2),
        Kind::Sp => Err(Error::Shape("odd-sized symplectic matrix".into())),
    }
}

fn check_member(g: &Group, u: &Matrix) -> Result<()> {
    if !g.contains(u) {
        return Err(match g.kind {
            Kind::Sp => Error::NotSymplectic,
            Kind::Gl => Error::Singular,
        });
    }
    Ok(())
}

/// `|C_n(U↑n)|` against `|C_m(U)| · |G_{n-m}| · q^{2d(n-m)}`, d = dim ker(U - I).
pub fn growth_check(f: &Fq, kind: Kind, u: &Matrix, m: usize, n: usize, budget: u64) -> Result<GrowthReport> {
    intersection_inner(f, kind, std::slice::from_ref(u), u, m, n, budget, None)
}

pub fn growth_check_sp(f: &Fq, u: &Matrix, m: usize, n: usize, budget: u64) -> Result<GrowthReport> {
    growth_check(f, Kind::Sp, u, m, n, budget)
}

pub fn growth_check_gl(f: &Fq, u: &Matrix, m: usize, n: usize, budget: u64) -> Result<GrowthReport> {
    growth_check(f, Kind::Gl, u, m, n, budget)
}

/// `|C_n(U1↑) ∩ C_n(U2↑)|` against `|C_m(U1) ∩ C_m(U2)| · |Sp_{n-m}| · q^{2(n-m)d}`,
/// d = dim ker(U1 U2 - I). Requires rl(U1) + rl(U2) = rl(U1 U2).
pub fn intersection_growth_check(f: &Fq, u1: &Matrix, u2: &Matrix, m: usize, n: usize, budget: u64) -> Result<GrowthReport> {
    let u = u1.checked_mul(u2, f)?;
    let additive = refl_length(f, u1) + refl_length(f, u2) == refl_length(f, &u);
    let note = (!additive).then(|| "reflection length is not additive".to_string());
    intersection_inner(f, Kind::Sp, &[u1.clone(), u2.clone()], &u, m, n, budget, note)
}

#[allow(clippy::too_many_arguments)]
fn intersection_inner(
    f: &Fq,
    kind: Kind,
    us: &[Matrix],
    prod: &Matrix,
    m: usize,
    n: usize,
    budget: u64,
    note: Option<String>,
) -> Result<GrowthReport> {
    let small = Group::new(kind, f.clone(), m)?;
    if us.iter().any(|u| rank_of(kind, u).ok() != Some(m)) {
        return Err(Error::Shape(format!("matrices are not in {}", small.name())));
    }
    if n < m {
        return Err(invalid(format!("n = {n} is below m = {m}")));
    }
    for u in us {
        check_member(&small, u)?;
    }
    let big = small.at_rank(n)?;
    let d = fixed_dim(f, prod);
    let ups: Vec<Matrix> = us.iter().map(|u| big.embed(u)).collect::<Result<_>>()?;
    let lhs = centralizer_order_filtered(f, &ups, big.gram().as_ref(), budget)?;
    let cm = centralizer_order_filtered(f, us, small.gram().as_ref(), budget)?;
    let rest = if n > m { small.at_rank(n - m)?.order() } else { 1 };
    let rhs = cm * rest * (f.q() as u128).pow((2 * d * (n - m)) as u32);
    let mut note = note;
    if note.is_none() && !no_identity_block(f, prod)? {
        note = Some("identity block in the Jordan form".into());
    }
    let status = if note.is_some() {
        Status::OutOfHypothesis
    } else if lhs == rhs {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(GrowthReport { kind, q: f.q(), m, n, d, lhs, rhs, status, note })
}

/// Reflection lengths and fixed spaces of a pair.
#[derive(Clone, Debug, Serialize)]
pub struct FixedSpaceReport {
    pub rl1: usize,
    pub rl2: usize,
    pub rl12: usize,
    pub additive: bool,
    pub subadditive: bool,
    /// ker(U1 - I) ∩ ker(U2 - I) = ker(U1 U2 - I), checked when additive.
    pub intersection: Option<bool>,
    /// ker(U1 - I) + ker(U2 - I) is the whole space, checked when additive.
    pub sum: Option<bool>,
}

impl FixedSpaceReport {
    pub fn holds(&self) -> bool {
        self.subadditive && self.intersection != Some(false) && self.sum != Some(false)
    }
}

pub fn normal_form_fixedspace_check(f: &Fq, u1: &Matrix, u2: &Matrix) -> Result<FixedSpaceReport> {
    let u = u1.checked_mul(u2, f)?;
    let dim = u.rows();
    let (rl1, rl2, rl12) = (refl_length(f, u1), refl_length(f, u2), refl_length(f, &u));
    let additive = rl1 + rl2 == rl12;
    let (mut intersection, mut sum) = (None, None);
    if additive {
        let a = u1.minus_scalar(Fe::ONE, f);
        let b = u2.minus_scalar(Fe::ONE, f);
        let stacked = Matrix::from_fn(2 * dim, dim, |i, j| if i < dim { a.get(i, j) } else { b.get(i - dim, j) });
        let common = stacked.kernel_basis(f);
        let c = u.minus_scalar(Fe::ONE, f);
        let inside = common.iter().all(|v| c.mul_vec(v, f).iter().all(|x| x.is_zero()));
        intersection = Some(inside && common.len() == dim - rl12);
        let mut both = a.kernel_basis(f);
        both.extend(b.kernel_basis(f));
        sum = Some(mat::span_basis(f, &both).len() == dim);
    }
    Ok(FixedSpaceReport { rl1, rl2, rl12, additive, subadditive: rl12 <= rl1 + rl2, intersection, sum })
}

/// A unipotent block of a symplectic matrix: `J_{2m}` or `J_{2m,ε}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnipotentBlock {
    J { m: usize },
    JEps { m: usize, eps: Fe },
}

impl UnipotentBlock {
    pub fn size(&self) -> usize {
        match *self {
            UnipotentBlock::J { m } | UnipotentBlock::JEps { m, .. } => 2 * m,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            UnipotentBlock::J { m } => format!("J{}", 2 * m),
            UnipotentBlock::JEps { m, eps } => format!("J{},{}", 2 * m, eps.0),
        }
    }

    /// The block split into its lower unitriangular pieces:
    /// `J_{2m} = diag(S_m, S_m^{-1})` gives two, `J_{2m,ε}` one.
    pub fn pieces(&self, f: &Fq) -> Result<Vec<Matrix>> {
        Ok(match *self {
            UnipotentBlock::J { m } => {
                let j = mat::j_block(f, 2 * m)?;
                let idx: Vec<usize> = (0..m).collect();
                let idx2: Vec<usize> = (m..2 * m).collect();
                vec![j.select(&idx, &idx), j.select(&idx2, &idx2)]
            }
            UnipotentBlock::JEps { m, eps } => vec![mat::j_block_eps(f, 2 * m, eps)?],
        })
    }
}

/// Lower unitriangular with nonzero subdiagonal.
pub fn is_lower_unipotent(a: &Matrix) -> bool {
    let n = a.rows();
    a.is_square()
        && (0..n).all(|i| {
            (0..n).all(|j| match j.cmp(&i) {
                std::cmp::Ordering::Greater => a.get(i, j).is_zero(),
                std::cmp::Ordering::Equal => a.get(i, j) == Fe::ONE,
                std::cmp::Ordering::Less => j + 1 != i || !a.get(i, j).is_zero(),
            })
        })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeReport {
    pub blocks: Vec<String>,
    pub pieces: usize,
    pub commutant_dim: usize,
    pub pieces_unipotent: bool,
    /// Every commutant element has zero first rows in all piece blocks, except the first entry.
    pub leading_row: bool,
    /// For every pair of pieces, E_{last,0} is the only elementary solution of A X = X B.
    pub unique_free_index: bool,
}

impl ShapeReport {
    pub fn holds(&self) -> bool {
        self.pieces_unipotent && self.leading_row && self.unique_free_index
    }
}

pub fn shape_check(f: &Fq, blocks: &[UnipotentBlock]) -> Result<ShapeReport> {
    let pieces: Vec<Matrix> =
        blocks.iter().map(|b| b.pieces(f)).collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    if pieces.is_empty() {
        return Err(invalid("no blocks"));
    }
    let u = Matrix::block_diag(&pieces);
    let basis = crate::grp::commutant_basis(f, &[u])?;
    let mut offs = vec![0];
    for p in &pieces {
        offs.push(offs.last().unwrap() + p.rows());
    }
    let k = pieces.len();
    let leading_row = basis.iter().all(|x| {
        (0..k).all(|i| (0..k).all(|j| (offs[j] + 1..offs[j + 1]).all(|c| x.get(offs[i], c).is_zero())))
    });
    let mut unique_free_index = true;
    for a in &pieces {
        for b in &pieces {
            let (r, c) = (a.rows(), b.rows());
            let mut free = Vec::new();
            for x in 0..r {
                for y in 0..c {
                    let mut e = Matrix::zeros(r, c);
                    e.set(x, y, Fe::ONE);
                    if a.mul(&e, f) == e.mul(b, f) {
                        free.push((x, y));
                    }
                }
            }
            unique_free_index &= free == [(r - 1, 0)];
        }
    }
    Ok(ShapeReport {
        blocks: blocks.iter().map(UnipotentBlock::label).collect(),
        pieces: k,
        commutant_dim: basis.len(),
        pieces_unipotent: pieces.iter().all(is_lower_unipotent),
        leading_row,
        unique_free_index,
    })
}

/// All multisets of `J_{2m}`, `J_{2m,1}`, `J_{2m,ν}` with total size in 1..=max_size.
pub fn block_combinations(f: &Fq, max_size: usize) -> Vec<Vec<UnipotentBlock>> {
    let nu = f.nonsquare().expect("odd q");
    let mut kinds = Vec::new();
    for m in 1..=max_size / 2 {
        kinds.push(UnipotentBlock::J { m });
        kinds.push(UnipotentBlock::JEps { m, eps: Fe::ONE });
        kinds.push(UnipotentBlock::JEps { m, eps: nu });
    }
    fn go(kinds: &[UnipotentBlock], start: usize, left: usize, cur: &mut Vec<UnipotentBlock>, out: &mut Vec<Vec<UnipotentBlock>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for i in start..kinds.len() {
            if kinds[i].size() <= left {
                cur.push(kinds[i]);
                go(kinds, i, left - kinds[i].size(), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&kinds, 0, max_size, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::{Partition, PartitionFn, SignedPart, SignedPartition, SymplecticFn};
    use crate::grp::GroupTable;

    fn f(q: u32) -> Fq {
        Fq::parse(&q.to_string()).unwrap()
    }

    fn gl_type(fq: &Fq, entries: &[(&[i64], &[u32])]) -> ClassType {
        ClassType::Gl(PartitionFn::from_entries(
            entries.iter().map(|(p, parts)| (Poly::from_ints(fq, p), Partition::new(parts.to_vec()))),
        ))
    }

    fn sp_unipotent(fq: &Fq, runs: &[(u32, u32, i8)]) -> ClassType {
        let hm = SignedPartition::new(runs.iter().map(|&(size, mult, sign)| SignedPart { size, mult, sign }).collect())
            .unwrap();
        ClassType::Sp(SymplecticFn::assemble(fq, PartitionFn::new(), hm, SignedPartition::empty()))
    }

    // Oracle: all pairs of group elements, counted directly.
    fn brute_constant(t: &GroupTable, lam: &ClassType, mu: &ClassType, eta: &ClassType) -> u64 {
        let g = &t.group;
        let fq = &g.field;
        let z = g.rep(eta).unwrap();
        let (lf, mf) = (g.complete(lam).unwrap(), g.complete(mu).unwrap());
        let elems: Vec<Matrix> = (0..t.len()).map(|i| t.element(i)).collect();
        let types: Vec<ClassType> = elems.iter().map(|x| g.type_of(x).unwrap()).collect();
        let mut c = 0;
        for (i, x) in elems.iter().enumerate() {
            if types[i] != lf {
                continue;
            }
            let y = x.inverse(fq).unwrap().mul(&z, fq);
            if g.type_of(&y).unwrap() == mf {
                c += 1;
            }
        }
        c
    }

    #[test]
    fn gl2_2_transpositions() {
        let f2 = f(2);
        let g = Group::gl(&f2, 2).unwrap();
        let c = Center::new(g.clone(), Budgets::default());
        // involutions: one Jordan block of size 2 at t-1, modified to (1)
        let inv = gl_type(&f2, &[(&[1, 1], &[1])]);
        let three = gl_type(&f2, &[(&[1, 1, 1], &[1])]);
        assert_eq!(c.structure_constant(&inv, &inv, &three).unwrap(), 3);
        let t = GroupTable::build(&g, 1000).unwrap();
        assert_eq!(brute_constant(&t, &inv, &inv, &three), 3);
        let triv = gl_type(&f2, &[]);
        assert_eq!(c.structure_constant(&triv, &triv, &triv).unwrap(), 1);
    }

    #[test]
    fn trivial_lambda_is_identity() {
        let f3 = f(3);
        let c = Center::new(Group::sp(&f3, 1).unwrap(), Budgets::default());
        let triv = ClassType::Sp(SymplecticFn::default());
        for mu in c.modified_types().unwrap() {
            let terms = c.product_expand(&triv, &mu).unwrap();
            assert_eq!(terms, vec![Term { eta: mu.clone(), c: 1 }]);
        }
    }

    #[test]
    fn sl2_unipotent_mass_and_orbit_sum() {
        let f3 = f(3);
        let c = Center::new(Group::sp(&f3, 1).unwrap(), Budgets::default());
        let u = sp_unipotent(&f3, &[(1, 1, 1)]);
        assert_eq!(c.complete(&u).unwrap().weight(), 2);
        let terms = c.product_expand(&u, &u).unwrap();
        let (lhs, rhs) = c.mass(&u, &u, &terms).unwrap();
        assert_eq!(rhs, 16);
        assert_eq!(lhs, rhs);
        for t in &terms {
            let r = c.orbit_sum_check(&u, &u, &t.eta).unwrap();
            assert!(r.agree);
            assert_eq!(r.constant, t.c);
        }
        let t = GroupTable::build(c.group(), 1000).unwrap();
        for eta in c.modified_types().unwrap() {
            assert_eq!(c.structure_constant(&u, &u, &eta).unwrap(), brute_constant(&t, &u, &u, &eta));
        }
    }

    #[test]
    fn commutativity_sl2() {
        let f3 = f(3);
        let c = Center::new(Group::sp(&f3, 1).unwrap(), Budgets::default());
        let types = c.modified_types().unwrap();
        for a in &types {
            for b in &types {
                for e in &types {
                    assert_eq!(c.structure_constant(a, b, e).unwrap(), c.structure_constant(b, a, e).unwrap());
                }
            }
        }
    }

    #[test]
    fn growth_examples() {
        let f3 = f(3);
        let t = mat::j_block_eps(&f3, 2, Fe::ONE).unwrap();
        let r = growth_check_sp(&f3, &t, 1, 2, 100_000_000).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.lhs, 6 * 24 * 9);
        let mt = t.neg(&f3);
        let r = growth_check_sp(&f3, &mt, 1, 2, 100_000_000).unwrap();
        assert_eq!((r.d, r.status), (0, Status::Pass));
        assert_eq!(r.lhs, r.rhs);
        let r = growth_check_sp(&f3, &Matrix::identity(2), 1, 2, 100_000_000).unwrap();
        assert_eq!(r.status, Status::OutOfHypothesis);
        let j = mat::companion(&f3, &Poly::t_minus_one(&f3), 2).unwrap();
        let r = growth_check_gl(&f3, &j, 2, 3, 100_000_000).unwrap();
        assert_eq!(r.status, Status::Pass);
        let r = growth_check_sp(&f3, &Matrix::identity(3), 1, 2, 1000);
        assert!(r.is_err());
    }

    #[test]
    fn fixed_space_examples() {
        let f3 = f(3);
        let i = Matrix::identity(2);
        let r = normal_form_fixedspace_check(&f3, &i, &i).unwrap();
        assert!(r.additive && r.holds());
        let t = mat::j_block_eps(&f3, 2, Fe::ONE).unwrap();
        let r = normal_form_fixedspace_check(&f3, &t, &t).unwrap();
        // t^2 is again a transvection: 1 + 1 != 1
        assert!(!r.additive && r.holds());
    }

    #[test]
    fn shape_small() {
        let f3 = f(3);
        let r = shape_check(&f3, &[UnipotentBlock::J { m: 2 }, UnipotentBlock::JEps { m: 1, eps: Fe(2) }]).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.pieces, 3);
        assert!(block_combinations(&f3, 4).len() > 6);
    }
}
