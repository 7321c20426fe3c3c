//! Small matrix groups: enumeration, conjugacy classes, orbits and centralizers.
//!
//! Elements are packed base-q into `u128` codes (row-major, first entry most
//! significant). Centralizer orders are counted without enumerating the group:
//! the commutant is solved as a linear space and its invertible (resp.
//! symplectic) members are counted column by column.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::classify;
use crate::combin::{enumerate_types, ClassType, Kind};
use crate::error::{invalid, Error, Result};
use crate::gf::{Fe, Fq};
use crate::mat::{self, Matrix, Vector};

/// |GL_n(q)| or |Sp_n(q)| (the latter acting on F_q^{2n}).
pub fn order_formula(kind: Kind, n: usize, q: u64) -> u128 {
    let q = q as u128;
    match kind {
        Kind::Gl => (0..n as u32).map(|i| q.pow(n as u32) - q.pow(i)).product(),
        Kind::Sp => q.pow((n * n) as u32) * (1..=n as u32).map(|i| q.pow(2 * i) - 1).product::<u128>(),
    }
}

/// GL_n(q) or Sp_n(q) over a given field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub kind: Kind,
    pub field: Fq,
    pub n: usize,
}

impl Group {
    pub fn new(kind: Kind, field: Fq, n: usize) -> Result<Group> {
        if n == 0 {
            return Err(invalid("rank must be positive"));
        }
        if kind == Kind::Sp && !field.is_odd() {
            return Err(Error::Unsupported("Sp needs odd q".into()));
        }
        Ok(Group { kind, field, n })
    }

    pub fn gl(field: &Fq, n: usize) -> Result<Group> {
        Group::new(Kind::Gl, field.clone(), n)
    }

    pub fn sp(field: &Fq, n: usize) -> Result<Group> {
        Group::new(Kind::Sp, field.clone(), n)
    }

    /// Same family and field at another rank.
    pub fn at_rank(&self, n: usize) -> Result<Group> {
        Group::new(self.kind, self.field.clone(), n)
    }

    pub fn name(&self) -> String {
        match self.kind {
            Kind::Gl => format!("GL_{}({})", self.n, self.field.q()),
            Kind::Sp => format!("Sp_{}({})", self.n, self.field.q()),
        }
    }

    /// Matrix size.
    pub fn dim(&self) -> usize {
        match self.kind {
            Kind::Gl => self.n,
            Kind::Sp => 2 * self.n,
        }
    }

    pub fn order(&self) -> u128 {
        order_formula(self.kind, self.n, self.field.q() as u64)
    }

    pub fn gram(&self) -> Option<Matrix> {
        match self.kind {
            Kind::Gl => None,
            Kind::Sp => Some(mat::gram_standard(&self.field, self.n)),
        }
    }

    pub fn contains(&self, u: &Matrix) -> bool {
        if u.rows() != self.dim() || !u.is_square() {
            return false;
        }
        match self.kind {
            Kind::Gl => !u.det(&self.field).map_or(true, |d| d.is_zero()),
            Kind::Sp => mat::is_symplectic(&self.field, u, &self.gram().expect("sp")),
        }
    }

    pub fn type_of(&self, u: &Matrix) -> Result<ClassType> {
        classify::type_of(&self.field, self.kind, u)
    }

    /// n-completion of a modified type at this rank.
    pub fn complete(&self, modified: &ClassType) -> Result<ClassType> {
        if modified.kind() != self.kind {
            return Err(invalid("type kind does not match the group"));
        }
        modified.ncomplete(&self.field, self.n)
    }

    /// Representative of the class whose modified type is given.
    pub fn rep(&self, modified: &ClassType) -> Result<Matrix> {
        classify::build_rep(&self.field, &self.complete(modified)?)
    }

    /// Embeds an element of a smaller group of the same family.
    pub fn embed(&self, u: &Matrix) -> Result<Matrix> {
        match self.kind {
            Kind::Gl => mat::embed_up(u, self.n),
            Kind::Sp => mat::embed_upup(u, self.n),
        }
    }

    /// All full types of this group.
    pub fn types(&self) -> Result<Vec<ClassType>> {
        enumerate_types(&self.field, self.dim(), self.kind)
    }

    /// Default generators: transvections with coefficients in an F_p-basis of F_q,
    /// plus a primitive diagonal element for GL.
    pub fn generators(&self) -> Vec<Matrix> {
        let f = &self.field;
        let d = self.dim();
        let coeffs = f.prime_basis();
        let mut out = Vec::new();
        match self.kind {
            Kind::Gl => {
                for i in 0..d {
                    for j in 0..d {
                        if i == j {
                            continue;
                        }
                        for &c in &coeffs {
                            let mut m = Matrix::identity(d);
                            m.set(i, j, c);
                            out.push(m);
                        }
                    }
                }
                let w = f.primitive();
                if w != Fe::ONE {
                    let mut m = Matrix::identity(d);
                    m.set(0, 0, w);
                    out.push(m);
                }
                if out.is_empty() {
                    out.push(Matrix::identity(d));
                }
            }
            Kind::Sp => {
                let g = self.gram().expect("sp");
                for v in sp_directions(self.n) {
                    for &c in &coeffs {
                        out.push(mat::transvection(f, &v, c, &g));
                    }
                }
            }
        }
        out
    }

    /// Transvections in every nonzero direction.
    pub fn all_transvections(&self) -> Vec<Matrix> {
        let f = &self.field;
        let d = self.dim();
        let g = self.gram().expect("sp");
        let q = f.q();
        let mut out = Vec::new();
        for idx in 1..q.pow(d as u32) {
            let mut x = idx;
            let v: Vector = (0..d)
                .map(|_| {
                    let e = Fe((x % q) as u8);
                    x /= q;
                    e
                })
                .collect();
            for &c in &f.prime_basis() {
                out.push(mat::transvection(f, &v, c, &g));
            }
        }
        out
    }

    pub fn codec(&self) -> Result<Codec> {
        Codec::new(&self.field, self.dim())
    }
}

/// `e_i`, `f_i`, `e_i + f_j`, `e_i + e_j` (i < j) in the standard basis of rank n.
fn sp_directions(n: usize) -> Vec<Vector> {
    let d = 2 * n;
    let e = |i: usize| i;
    let fi = |i: usize| d - 1 - i;
    let mut out = Vec::new();
    for i in 0..n {
        out.push(mat::unit(d, e(i)));
        out.push(mat::unit(d, fi(i)));
    }
    for i in 0..n {
        for j in 0..n {
            let mut v = mat::unit(d, e(i));
            v[fi(j)] = Fe::ONE;
            out.push(v);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = mat::unit(d, e(i));
            v[e(j)] = Fe::ONE;
            out.push(v);
        }
    }
    out
}

/// Base-q packing of d x d matrices into `u128`.
#[derive(Clone, Debug)]
pub struct Codec {
    field: Fq,
    dim: usize,
}

impl Codec {
    pub fn new(field: &Fq, dim: usize) -> Result<Codec> {
        let fits = (field.q() as u128).checked_pow((dim * dim) as u32).is_some();
        if !fits {
            return Err(Error::Unsupported(format!("{dim}x{dim} matrices over F_{} do not fit a 128-bit code", field.q())));
        }
        Ok(Codec { field: field.clone(), dim })
    }

    #[inline]
    pub fn pack(&self, m: &Matrix) -> u128 {
        let q = self.field.q() as u128;
        m.data().iter().fold(0u128, |acc, x| acc * q + x.0 as u128)
    }

    pub fn unpack(&self, mut code: u128) -> Matrix {
        let q = self.field.q() as u128;
        let n = self.dim * self.dim;
        let mut data = vec![Fe::ZERO; n];
        for i in (0..n).rev() {
            data[i] = Fe((code % q) as u8);
            code /= q;
        }
        Matrix::from_vec(self.dim, self.dim, data)
    }
}

/// An enumerated group: sorted element codes, code index and conjugacy classes.
pub struct GroupTable {
    pub group: Group,
    codec: Codec,
    codes: Vec<u128>,
    index: HashMap<u128, u32>,
    classes: OnceLock<Vec<u32>>,
}

impl GroupTable {
    fn from_codes(group: Group, mut codes: Vec<u128>) -> Result<GroupTable> {
        codes.sort_unstable();
        codes.dedup();
        let codec = group.codec()?;
        let index = codes.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        Ok(GroupTable { group, codec, codes, index, classes: OnceLock::new() })
    }

    /// Closure of `gens` under multiplication; the size must equal the order formula.
    pub fn bfs_closure(group: &Group, gens: &[Matrix], budget: u64) -> Result<GroupTable> {
        if gens.is_empty() {
            return Err(invalid("empty generator set"));
        }
        let f = &group.field;
        let codec = group.codec()?;
        let id = Matrix::identity(group.dim());
        let mut seen: HashSet<u128> = HashSet::new();
        seen.insert(codec.pack(&id));
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.mul(g, f);
                if seen.insert(codec.pack(&y)) {
                    if seen.len() as u64 > budget {
                        return Err(Error::Budget { what: format!("enumeration of {}", group.name()), limit: budget });
                    }
                    queue.push_back(y);
                }
            }
        }
        let got = seen.len() as u128;
        let table = GroupTable::from_codes(group.clone(), seen.into_iter().collect())?;
        if got != group.order() {
            return Err(Error::Generators { got, expected: group.order() });
        }
        Ok(table)
    }

    /// Enumerates the group from its default generators, enlarging the symplectic
    /// generator set to all transvections if the default set falls short.
    pub fn build(group: &Group, budget: u64) -> Result<GroupTable> {
        if group.order() > budget as u128 {
            return Err(Error::Budget { what: format!("enumeration of {}", group.name()), limit: budget });
        }
        match GroupTable::bfs_closure(group, &group.generators(), budget) {
            Err(Error::Generators { .. }) if group.kind == Kind::Sp => {
                GroupTable::bfs_closure(group, &group.all_transvections(), budget)
            }
            r => r,
        }
    }

    /// Loads from the cache directory or builds and stores.
    pub fn load_or_build(group: &Group, cache: Option<&Path>, budget: u64) -> Result<GroupTable> {
        let dir = cache.map(Path::to_path_buf).unwrap_or_else(default_cache_dir);
        let path = dir.join(cache_file_name(group));
        if let Ok(t) = GroupTable::read_cache(group, &path) {
            return Ok(t);
        }
        let t = GroupTable::build(group, budget)?;
        // a failed write only costs a rebuild next time
        let _ = t.write_cache(&path);
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u128] {
        &self.codes
    }

    pub fn codec(&self) -> &Codec {
        &self.codec
    }

    pub fn element(&self, i: usize) -> Matrix {
        self.codec.unpack(self.codes[i])
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(&self.codec.pack(m)).map(|&i| i as usize)
    }

    /// Class id of every element; classes are numbered by their smallest code.
    pub fn class_ids(&self) -> &[u32] {
        self.classes.get_or_init(|| {
            let f = &self.group.field;
            let gens: Vec<(Matrix, Matrix)> =
                self.group.generators().into_iter().map(|g| (g.inverse(f).expect("invertible"), g)).collect();
            let mut ids = vec![u32::MAX; self.len()];
            let mut next = 0u32;
            for start in 0..self.len() {
                if ids[start] != u32::MAX {
                    continue;
                }
                ids[start] = next;
                let mut queue = VecDeque::from([self.element(start)]);
                while let Some(x) = queue.pop_front() {
                    for (gi, g) in &gens {
                        let y = gi.mul(&x, f).mul(g, f);
                        let j = self.index_of(&y).expect("closed under conjugation");
                        if ids[j] == u32::MAX {
                            ids[j] = next;
                            queue.push_back(y);
                        }
                    }
                }
                next += 1;
            }
            ids
        })
    }

    pub fn class_count(&self) -> usize {
        self.class_ids().iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Smallest-code representative of each class, by class id.
    pub fn class_reps(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.class_count()];
        for (i, &c) in self.class_ids().iter().enumerate() {
            if reps[c as usize] == usize::MAX {
                reps[c as usize] = i;
            }
        }
        reps
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class_count()];
        for &c in self.class_ids() {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Number of elements commuting with `u`, by direct scan.
    pub fn centralizer_order_scan(&self, u: &Matrix) -> usize {
        let f = &self.group.field;
        (0..self.len())
            .into_par_iter()
            .filter(|&i| {
                let x = self.element(i);
                x.mul(u, f) == u.mul(&x, f)
            })
            .count()
    }

    fn write_cache(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut buf = Vec::with_capacity(24 + 16 * self.len());
        buf.extend_from_slice(b"CGC1");
        buf.push(match self.group.kind {
            Kind::Gl => 0,
            Kind::Sp => 1,
        });
        buf.extend_from_slice(&(self.group.n as u32).to_le_bytes());
        buf.extend_from_slice(&(self.group.field.q() as u32).to_le_bytes());
        buf.extend_from_slice(&(self.len() as u64).to_le_bytes());
        for c in &self.codes {
            buf.extend_from_slice(&c.to_le_bytes());
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::File::create(&tmp)?.write_all(&buf)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read_cache(group: &Group, path: &Path) -> Result<GroupTable> {
        let mut buf = Vec::new();
        fs::File::open(path)?.read_to_end(&mut buf)?;
        let bad = |m: &str| Error::Parse(format!("cache {}: {m}", path.display()));
        if buf.len() < 21 || &buf[0..4] != b"CGC1" {
            return Err(bad("bad magic"));
        }
        let kind = match buf[4] {
            0 => Kind::Gl,
            1 => Kind::Sp,
            _ => return Err(bad("bad kind")),
        };
        let n = u32::from_le_bytes(buf[5..9].try_into().unwrap()) as usize;
        let q = u32::from_le_bytes(buf[9..13].try_into().unwrap()) as usize;
        let count = u64::from_le_bytes(buf[13..21].try_into().unwrap()) as usize;
        if kind != group.kind || n != group.n || q != group.field.q() {
            return Err(bad("header does not match the requested group"));
        }
        if buf.len() != 21 + 16 * count || count as u128 != group.order() {
            return Err(bad("bad element count"));
        }
        let codes = buf[21..].chunks_exact(16).map(|c| u128::from_le_bytes(c.try_into().unwrap())).collect();
        GroupTable::from_codes(group.clone(), codes)
    }
}

pub fn default_cache_dir() -> PathBuf {
    std::env::var_os("CGC_CACHE").map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("cgc-cache"))
}

fn cache_file_name(g: &Group) -> String {
    format!("{}_{}_{}.cgc", g.kind.name(), g.n, g.field.q())
}

/// Conjugation orbit of `rep` under the group generated by `gens`, sorted by code.
pub fn conj_orbit(group: &Group, rep: &Matrix, gens: &[Matrix], budget: u64) -> Result<Vec<Matrix>> {
    let f = &group.field;
    let codec = group.codec()?;
    let pairs: Vec<(Matrix, Matrix)> =
        gens.iter().map(|g| Ok((g.inverse(f)?, g.clone()))).collect::<Result<_>>()?;
    let mut seen: HashMap<u128, Matrix> = HashMap::new();
    seen.insert(codec.pack(rep), rep.clone());
    let mut queue = VecDeque::from([rep.clone()]);
    while let Some(x) = queue.pop_front() {
        for (gi, g) in &pairs {
            let y = gi.mul(&x, f).mul(g, f);
            let c = codec.pack(&y);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(c) {
                e.insert(y.clone());
                if seen.len() as u64 > budget {
                    return Err(Error::Budget { what: "conjugation orbit".into(), limit: budget });
                }
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<(u128, Matrix)> = seen.into_iter().collect();
    out.sort_unstable_by_key(|(c, _)| *c);
    Ok(out.into_iter().map(|(_, m)| m).collect())
}

/// Basis of `{X : U X = X U for all U in us}`.
pub fn commutant_basis(f: &Fq, us: &[Matrix]) -> Result<Vec<Matrix>> {
    let d = us.first().map(|u| u.rows()).ok_or_else(|| invalid("no matrices"))?;
    if us.iter().any(|u| u.rows() != d || u.cols() != d) {
        return Err(Error::Shape("commutant of matrices of different sizes".into()));
    }
    let cols = commutant_rows(f, us, &(0..d).collect::<Vec<_>>());
    Ok(cols.iter().map(|v| Matrix::from_fn(d, d, |i, j| v[j * d + i])).collect())
}

/// Commutant basis in coordinates `pos[c] * d + i` for entry (i, c).
fn commutant_rows(f: &Fq, us: &[Matrix], pos: &[usize]) -> Vec<Vector> {
    let d = pos.len();
    let var = |i: usize, c: usize| pos[c] * d + i;
    let mut sys = Matrix::zeros(us.len() * d * d, d * d);
    for (ui, u) in us.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                let row = ui * d * d + i * d + j;
                // (U X)_{ij} - (X U)_{ij}
                for k in 0..d {
                    let a = u.get(i, k);
                    if !a.is_zero() {
                        let v = f.add(sys.get(row, var(k, j)), a);
                        sys.set(row, var(k, j), v);
                    }
                    let b = u.get(k, j);
                    if !b.is_zero() {
                        let v = f.sub(sys.get(row, var(i, k)), b);
                        sys.set(row, var(i, k), v);
                    }
                }
            }
        }
    }
    sys.kernel_basis(f)
}

/// Solves `A a = b`: particular solution and kernel basis, or `None` if inconsistent.
fn solve_affine(f: &Fq, a: &Matrix, b: &[Fe]) -> Option<(Vector, Vec<Vector>)> {
    let (r, k) = (a.rows(), a.cols());
    let mut aug = Matrix::zeros(r, k + 1);
    for i in 0..r {
        for j in 0..k {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, k, b[i]);
    }
    let pivots = aug.rref_in_place(f);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = vec![Fe::ZERO; k];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(row, k);
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Fe::ZERO; k];
            v[fc] = Fe::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(aug.get(row, fc));
            }
            v
        })
        .collect();
    Some((x, kernel))
}

struct Level {
    col: usize,
    vars: Vec<usize>,
    /// Column `col` of each of this level's basis vectors, as a d x k matrix.
    m: Matrix,
}

struct Search<'a> {
    f: &'a Fq,
    d: usize,
    gram: Option<&'a Matrix>,
    gram_t: Option<Matrix>,
    basis: Vec<Vector>,
    levels: Vec<Level>,
    nodes: u64,
    budget: u64,
    /// Size of a nonempty subtree rooted at each level.
    memo: Vec<Option<u128>>,
}

/// Admissible values of one level's new coefficients, with the resulting columns.
type Children = Vec<(Vector, Vector)>;

impl Search<'_> {
    fn slice(&self, k: usize, level: usize) -> &[Fe] {
        &self.basis[k][level * self.d..(level + 1) * self.d]
    }

    /// Part of column `level` fixed by the coefficients of earlier levels.
    fn fixed_part(&self, coef: &[Fe], level: usize) -> Vector {
        let f = self.f;
        let mut x = vec![Fe::ZERO; self.d];
        for lv in &self.levels[..level] {
            for &k in &lv.vars {
                let a = coef[k];
                if a.is_zero() {
                    continue;
                }
                for (xi, &b) in x.iter_mut().zip(self.slice(k, level)) {
                    *xi = f.mul_add(*xi, a, b);
                }
            }
        }
        x
    }

    fn with_new(&self, fixed: &[Fe], level: usize, new: &[Fe]) -> Vector {
        let f = self.f;
        let m = &self.levels[level].m;
        let mut x = fixed.to_vec();
        for (j, &a) in new.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = f.mul_add(*xi, a, m.get(i, j));
            }
        }
        x
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget { what: "centralizer search".into(), limit: self.budget });
        }
        Ok(())
    }

    /// Symplectic case: the affine space of new coefficients meeting the pairing
    /// conditions against all earlier columns.
    fn affine(&self, fixed: &[Fe], level: usize, prev: &[Vector]) -> Option<(Vector, Vec<Vector>)> {
        let f = self.f;
        let g = self.gram.expect("symplectic");
        let gt = self.gram_t.as_ref().expect("symplectic");
        let lv = &self.levels[level];
        let k = lv.vars.len();
        let mut a = Matrix::zeros(level, k);
        let mut b = vec![Fe::ZERO; level];
        for (p, xp) in prev.iter().enumerate() {
            let gx = gt.mul_vec(xp, f);
            let dot = |col: &mut dyn Iterator<Item = Fe>| gx.iter().zip(col).fold(Fe::ZERO, |acc, (&u, w)| f.mul_add(acc, u, w));
            for j in 0..k {
                a.set(p, j, dot(&mut (0..self.d).map(|i| lv.m.get(i, j))));
            }
            b[p] = f.sub(g.get(self.levels[p].col, lv.col), dot(&mut fixed.iter().copied()));
        }
        solve_affine(f, &a, &b)
    }

    fn children(&self, coef: &[Fe], level: usize, prev: &[Vector]) -> Children {
        let f = self.f;
        let fixed = self.fixed_part(coef, level);
        let k = self.levels[level].vars.len();
        match self.gram {
            Some(_) => {
                let Some((x0, ker)) = self.affine(&fixed, level, prev) else {
                    return Vec::new();
                };
                all_vectors(f, ker.len())
                    .map(|lam| {
                        let mut a = x0.clone();
                        for (l, kv) in lam.iter().zip(&ker) {
                            for (ai, &b) in a.iter_mut().zip(kv) {
                                *ai = f.mul_add(*ai, *l, b);
                            }
                        }
                        let x = self.with_new(&fixed, level, &a);
                        (a, x)
                    })
                    .collect()
            }
            None => {
                let red = Reducer::new(f, prev);
                all_vectors(f, k)
                    .filter_map(|a| {
                        let x = self.with_new(&fixed, level, &a);
                        (!red.reduce(&x).iter().all(|e| e.is_zero())).then_some((a, x))
                    })
                    .collect()
            }
        }
    }

    /// Number of admissible values at the last level.
    fn last_count(&self, coef: &[Fe], level: usize, prev: &[Vector]) -> u128 {
        let f = self.f;
        let q = f.q() as u128;
        let fixed = self.fixed_part(coef, level);
        let k = self.levels[level].vars.len();
        match self.gram {
            Some(_) => self.affine(&fixed, level, prev).map_or(0, |(_, ker)| q.pow(ker.len() as u32)),
            None => {
                // values whose column falls in span(prev) are excluded
                let red = Reducer::new(f, prev);
                let rf = red.reduce(&fixed);
                let m = &self.levels[level].m;
                let rm = Matrix::from_columns(self.d, &(0..k).map(|j| red.reduce(&m.column(j))).collect::<Vec<_>>());
                let neg: Vector = rf.iter().map(|&x| f.neg(x)).collect();
                let bad = solve_affine(f, &rm, &neg).map_or(0, |(_, ker)| q.pow(ker.len() as u32));
                q.pow(k as u32) - bad
            }
        }
    }

    fn assign(&self, coef: &mut [Fe], level: usize, a: &[Fe]) {
        for (&k, &v) in self.levels[level].vars.iter().zip(a) {
            coef[k] = v;
        }
    }

    // The matrices of the centralizer with prescribed first columns form, when
    // nonempty, a coset of the pointwise stabilizer of those basis vectors. So all
    // nonempty subtrees at one level have the same size: one is counted, the others
    // only need a witness.
    fn count(&mut self, coef: &mut Vec<Fe>, level: usize, prev: &mut Vec<Vector>) -> Result<u128> {
        self.tick()?;
        if level + 1 == self.levels.len() {
            return Ok(self.last_count(coef, level, prev));
        }
        if let Some(s) = self.memo[level] {
            return Ok(if self.exists(coef, level, prev)? { s } else { 0 });
        }
        let mut total = 0;
        for (a, x) in self.children(coef, level, prev) {
            self.assign(coef, level, &a);
            prev.push(x);
            total += self.count(coef, level + 1, prev)?;
            prev.pop();
        }
        if total > 0 {
            self.memo[level] = Some(total);
        }
        Ok(total)
    }

    fn exists(&mut self, coef: &mut Vec<Fe>, level: usize, prev: &mut Vec<Vector>) -> Result<bool> {
        self.tick()?;
        if level + 1 == self.levels.len() {
            return Ok(self.last_count(coef, level, prev) > 0);
        }
        for (a, x) in self.children(coef, level, prev) {
            self.assign(coef, level, &a);
            prev.push(x);
            let found = self.exists(coef, level + 1, prev)?;
            prev.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Reduction modulo the span of a set of vectors.
struct Reducer<'a> {
    f: &'a Fq,
    rows: Vec<(usize, Vector)>,
}

impl<'a> Reducer<'a> {
    fn new(f: &'a Fq, vs: &[Vector]) -> Reducer<'a> {
        let mut rows: Vec<(usize, Vector)> = Vec::new();
        for v in vs {
            let mut r = v.clone();
            for (p, b) in &rows {
                let c = r[*p];
                if !c.is_zero() {
                    for (x, &y) in r.iter_mut().zip(b) {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
            }
            if let Some(p) = r.iter().position(|x| !x.is_zero()) {
                let inv = f.inv(r[p]).expect("nonzero");
                for x in r.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                rows.push((p, r));
            }
        }
        Reducer { f, rows }
    }

    fn reduce(&self, v: &[Fe]) -> Vector {
        let f = self.f;
        let mut r = v.to_vec();
        for (p, b) in &self.rows {
            let c = r[*p];
            if !c.is_zero() {
                for (x, &y) in r.iter_mut().zip(b) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        r
    }
}

/// All vectors of length k over F_q.
fn all_vectors(f: &Fq, k: usize) -> impl Iterator<Item = Vector> + '_ {
    let q = f.q();
    let total = q.pow(k as u32);
    (0..total).map(move |mut idx| {
        (0..k)
            .map(|_| {
                let e = Fe((idx % q) as u8);
                idx /= q;
                e
            })
            .collect()
    })
}

/// Number of invertible (and, with a Gram matrix, form-preserving) matrices
/// commuting with every element of `us`. `budget` bounds the search nodes.
pub fn centralizer_order_filtered(f: &Fq, us: &[Matrix], gram: Option<&Matrix>, budget: u64) -> Result<u128> {
    let d = us.first().map(|u| u.rows()).ok_or_else(|| invalid("no matrices"))?;
    if us.iter().any(|u| u.rows() != d || u.cols() != d) {
        return Err(Error::Shape("centralizer of matrices of different sizes".into()));
    }
    if gram.is_some_and(|g| g.rows() != d) {
        return Err(Error::Shape("Gram matrix of the wrong size".into()));
    }
    // Columns are processed freest last, since the last level is counted in closed
    // form. Symplectic columns go in hyperbolic pairs so the pairing constraint
    // applies as early as possible.
    let natural = commutant_rows(f, us, &(0..d).collect::<Vec<_>>());
    let freedom: Vec<usize> = (0..d)
        .map(|c| {
            let vs: Vec<Vector> = natural.iter().map(|v| v[c * d..(c + 1) * d].to_vec()).collect();
            mat::span_basis(f, &vs).len()
        })
        .collect();
    let order: Vec<usize> = match gram {
        Some(g) => {
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            let mut taken = vec![false; d];
            for i in 0..d {
                if taken[i] {
                    continue;
                }
                let j = (0..d).find(|&j| !taken[j] && j != i && !g.get(i, j).is_zero()).unwrap_or(i);
                taken[i] = true;
                taken[j] = true;
                pairs.push(if freedom[i] <= freedom[j] { (i, j) } else { (j, i) });
            }
            pairs.sort_by_key(|&(a, b)| (freedom[a] + freedom[b], freedom[b]));
            pairs.into_iter().flat_map(|(a, b)| if a == b { vec![a] } else { vec![a, b] }).collect()
        }
        None => {
            let mut o: Vec<usize> = (0..d).collect();
            o.sort_by_key(|&c| freedom[c]);
            o
        }
    };
    let mut pos = vec![0; d];
    for (p, &c) in order.iter().enumerate() {
        pos[c] = p;
    }
    let kernel = commutant_rows(f, us, &pos);
    let basis = if kernel.is_empty() {
        Vec::new()
    } else {
        let mut m = Matrix::from_vec(kernel.len(), d * d, kernel.iter().flatten().copied().collect());
        let r = m.rref_in_place(f).len();
        (0..r).map(|i| m.row(i).to_vec()).collect::<Vec<_>>()
    };
    let mut vars: Vec<Vec<usize>> = vec![Vec::new(); d];
    for (k, v) in basis.iter().enumerate() {
        let p = v.iter().position(|x| !x.is_zero()).expect("nonzero basis vector");
        vars[p / d].push(k);
    }
    let levels: Vec<Level> = order
        .iter()
        .zip(vars)
        .enumerate()
        .map(|(p, (&col, vars))| {
            let m = Matrix::from_fn(d, vars.len(), |i, j| basis[vars[j]][p * d + i]);
            Level { col, vars, m }
        })
        .collect();
    let nvars = basis.len();
    let mut search = Search {
        f,
        d,
        gram,
        gram_t: gram.map(Matrix::transpose),
        basis,
        levels,
        nodes: 0,
        budget,
        memo: vec![None; d],
    };
    search.count(&mut vec![Fe::ZERO; nvars], 0, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::Kind;

    fn f(q: u32) -> Fq {
        Fq::parse(&q.to_string()).unwrap()
    }

    // Oracle: brute-force enumeration of all invertible d x d matrices.
    fn brute_gl(fq: &Fq, d: usize) -> Vec<Matrix> {
        let q = fq.q();
        (0..q.pow((d * d) as u32))
            .map(|mut idx| {
                Matrix::from_fn(d, d, |_, _| {
                    let e = Fe((idx % q) as u8);
                    idx /= q;
                    e
                })
            })
            .filter(|m| !m.det(fq).unwrap().is_zero())
            .collect()
    }

    #[test]
    fn order_formula_examples() {
        assert_eq!(order_formula(Kind::Gl, 2, 3), 48);
        assert_eq!(order_formula(Kind::Sp, 1, 3), 24);
        assert_eq!(order_formula(Kind::Sp, 2, 3), 51840);
        assert_eq!(brute_gl(&f(3), 2).len(), 48);
        let sl = brute_gl(&f(3), 2).into_iter().filter(|m| m.det(&f(3)).unwrap() == Fe::ONE).count();
        assert_eq!(sl, 24);
    }

    #[test]
    fn closures() {
        let f3 = f(3);
        let g = Group::sp(&f3, 1).unwrap();
        let t = GroupTable::bfs_closure(&g, &g.generators(), 1_000_000).unwrap();
        assert_eq!(t.len(), 24);
        let triv = GroupTable::bfs_closure(&g, &[Matrix::identity(2)], 10);
        assert!(matches!(triv, Err(Error::Generators { got: 1, expected: 24 })));
        let gl = Group::gl(&f3, 2).unwrap();
        assert_eq!(GroupTable::build(&gl, 1_000_000).unwrap().len(), 48);
        assert!(matches!(GroupTable::build(&Group::sp(&f3, 3).unwrap(), 1_000_000), Err(Error::Budget { .. })));
    }

    #[test]
    fn classes_sl2_3() {
        let f3 = f(3);
        let g = Group::sp(&f3, 1).unwrap();
        let t = GroupTable::build(&g, 1_000_000).unwrap();
        assert_eq!(t.class_count(), 7);
        assert_eq!(t.class_sizes().iter().sum::<usize>(), 24);
        for (c, &r) in t.class_reps().iter().enumerate() {
            let u = t.element(r);
            assert_eq!(t.centralizer_order_scan(&u) * t.class_sizes()[c], 24);
            assert_eq!(
                centralizer_order_filtered(&f3, std::slice::from_ref(&u), Some(&g.gram().unwrap()), 1_000_000).unwrap(),
                t.centralizer_order_scan(&u) as u128
            );
        }
    }

    #[test]
    fn orbit_examples() {
        let f3 = f(3);
        let g = Group::sp(&f3, 1).unwrap();
        let gens = g.generators();
        assert_eq!(conj_orbit(&g, &Matrix::identity(2), &gens, 100).unwrap().len(), 1);
        let t = mat::j_block_eps(&f3, 2, Fe::ONE).unwrap();
        let orb = conj_orbit(&g, &t, &gens, 100).unwrap();
        assert_eq!(orb.len(), 4);
        let c = centralizer_order_filtered(&f3, &[t], Some(&g.gram().unwrap()), 1000).unwrap();
        assert_eq!(c, 6);
        assert_eq!(orb.len() as u128 * c, 24);
    }

    #[test]
    fn commutant_examples() {
        let f3 = f(3);
        assert_eq!(commutant_basis(&f3, &[Matrix::identity(4)]).unwrap().len(), 16);
        let j = mat::companion(&f3, &crate::poly::Poly::t_minus_one(&f3), 2).unwrap();
        assert_eq!(commutant_basis(&f3, std::slice::from_ref(&j)).unwrap().len(), 2);
        for x in commutant_basis(&f3, std::slice::from_ref(&j)).unwrap() {
            assert_eq!(j.mul(&x, &f3), x.mul(&j, &f3));
        }
        let b = mat::companion(&f3, &crate::poly::Poly::from_ints(&f3, &[1, 0, 1]), 1).unwrap();
        let u = Matrix::block_diag(&[j, b]);
        for x in commutant_basis(&f3, &[u]).unwrap() {
            for i in 0..2 {
                for k in 2..4 {
                    assert!(x.get(i, k).is_zero() && x.get(k, i).is_zero());
                }
            }
        }
    }

    #[test]
    fn filtered_centralizers_match_scan() {
        let f3 = f(3);
        let sp2 = Group::sp(&f3, 2).unwrap();
        assert_eq!(
            centralizer_order_filtered(&f3, &[Matrix::identity(2)], Some(&mat::gram_standard(&f3, 1)), 1000).unwrap(),
            24
        );
        assert_eq!(
            centralizer_order_filtered(&f3, &[Matrix::identity(4).neg(&f3)], sp2.gram().as_ref(), 1_000_000).unwrap(),
            51840
        );
        for (q, n) in [(3, 2), (5, 2)] {
            let fq = f(q);
            let g = Group::gl(&fq, n).unwrap();
            let t = GroupTable::build(&g, 1_000_000).unwrap();
            let sizes = t.class_sizes();
            for (c, &r) in t.class_reps().iter().enumerate() {
                let u = t.element(r);
                let filt = centralizer_order_filtered(&fq, &[u], None, 1_000_000).unwrap();
                assert_eq!(filt * sizes[c] as u128, t.len() as u128);
            }
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Group::gl(&f(3), 2).unwrap();
        let t = GroupTable::load_or_build(&g, Some(dir.path()), 1_000_000).unwrap();
        let path = dir.path().join("gl_2_3.cgc");
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[0..4], b"CGC1");
        assert_eq!(bytes.len(), 21 + 16 * 48);
        let back = GroupTable::read_cache(&g, &path).unwrap();
        assert_eq!(back.codes(), t.codes());
        let other = Group::gl(&f(3), 3).unwrap();
        assert!(GroupTable::read_cache(&other, &path).is_err());
    }

    #[test]
    fn codec_round_trip() {
        let g = Group::sp(&f(7), 3).unwrap();
        let c = g.codec().unwrap();
        let m = mat::j_block_eps(&f(7), 6, Fe(3)).unwrap();
        assert_eq!(c.unpack(c.pack(&m)), m);
        assert!(Codec::new(&f(49), 6).is_err());
    }
}
