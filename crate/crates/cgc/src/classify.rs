//! Conjugacy invariants: GL type, symplectic type with Wall signs, reflection
//! length, and construction of class representatives.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combin::{ClassType, Kind, Partition, PartitionFn, SignedPart, SignedPartition, SymplecticFn};
use crate::error::{invalid, Error, Result};
use crate::gf::{Fe, Fq};
use crate::mat::{self, Matrix, Vector};
use crate::poly::{self, Poly};

/// Type of an invertible matrix: for each irreducible factor g of the
/// characteristic polynomial, the partition with
/// `#{parts >= j} = (rank g(U)^{j-1} - rank g(U)^j) / deg g`.
pub fn gl_type(f: &Fq, u: &Matrix) -> Result<PartitionFn> {
    if !u.is_square() {
        return Err(Error::Shape("gl_type of a non-square matrix".into()));
    }
    let chi = u.char_poly(f);
    if chi.coeff(0).is_zero() {
        return Err(Error::Singular);
    }
    let n = u.rows();
    let mut out = PartitionFn::new();
    for (g, e) in poly::factor(f, &chi)? {
        let d = g.deg();
        let m = u.eval_poly(&g, f);
        let mut counts = Vec::new();
        let mut prev = n;
        let mut pw = Matrix::identity(n);
        for _ in 0..e {
            pw = pw.mul(&m, f);
            let r = pw.rank(f);
            if r == prev {
                break;
            }
            counts.push(((prev - r) / d) as u32);
            prev = r;
        }
        let part = Partition::new(counts).conjugate();
        if part.weight() != e as usize {
            return Err(Error::Inconsistent(format!("rank sequence for {} does not sum to {e}", g.pretty())));
        }
        out.set(g, part);
    }
    Ok(out)
}

/// `dim ker(U - I)`
pub fn fixed_dim(f: &Fq, u: &Matrix) -> usize {
    u.rows() - u.minus_scalar(Fe::ONE, f).rank(f)
}

/// `size - dim ker(U - I)`
pub fn refl_length(f: &Fq, u: &Matrix) -> usize {
    u.minus_scalar(Fe::ONE, f).rank(f)
}

/// One orthogonal piece of the t-zeta part: `mult` Jordan blocks of size `size`.
#[derive(Clone, Debug)]
pub struct WallBlockReport {
    pub size: u32,
    pub mult: u32,
    pub sign: i8,
    /// Generators `v_a` of the free piece; their classes form a basis of H_size.
    pub witness: Vec<Vector>,
    /// `h(v_a, v_b) = Q(v_a, D^{size-1} v_b)` with `D = zeta U - (zeta U)^{-1}`.
    pub gram: Matrix,
}

fn is_zero_vec(v: &[Fe]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Wall forms of the generalized `zeta`-eigenspace of a symplectic `U`.
/// Reports come in decreasing part size.
pub fn wall_forms(f: &Fq, u: &Matrix, zeta: i8) -> Result<Vec<WallBlockReport>> {
    let n2 = u.rows();
    if !u.is_square() || n2 % 2 == 1 {
        return Err(Error::Shape("wall_forms needs an even square matrix".into()));
    }
    let gram = mat::gram_standard(f, n2 / 2);
    if !mat::is_symplectic(f, u, &gram) {
        return Err(Error::NotSymplectic);
    }
    wall_forms_unchecked(f, u, zeta, &gram)
}

fn wall_forms_unchecked(f: &Fq, u: &Matrix, zeta: i8, gram: &Matrix) -> Result<Vec<WallBlockReport>> {
    let n2 = u.rows();
    let uz = match zeta {
        1 => u.clone(),
        -1 => u.neg(f),
        _ => return Err(invalid("zeta must be +1 or -1")),
    };
    let nil = uz.minus_scalar(Fe::ONE, f);
    let delta = uz.sub(&uz.inverse(f)?, f);
    let mut w = nil.pow(n2 as u64, f).kernel_basis(f);
    let mut out = Vec::new();
    while !w.is_empty() {
        // nilpotency index on W
        let mut s = 0usize;
        let mut cur = w.clone();
        while cur.iter().any(|v| !is_zero_vec(v)) {
            cur = cur.iter().map(|v| nil.mul_vec(v, f)).collect();
            s += 1;
        }
        let top = |v: &Vector| (1..s).fold(v.clone(), |acc, _| nil.mul_vec(&acc, f));
        let mut chosen: Vec<Vector> = Vec::new();
        let mut images: Vec<Vector> = Vec::new();
        for v in &w {
            let img = top(v);
            images.push(img);
            let r = mat::span_basis(f, &images).len();
            if r == chosen.len() + 1 {
                chosen.push(v.clone());
            } else {
                images.pop();
            }
        }
        let k = chosen.len();
        let mut piece = Vec::with_capacity(s * k);
        for v in &chosen {
            let mut x = v.clone();
            for _ in 0..s {
                piece.push(x.clone());
                x = nil.mul_vec(&x, f);
            }
        }
        if mat::span_basis(f, &piece).len() != s * k {
            return Err(Error::Inconsistent("cyclic piece is not free".into()));
        }
        let dtop: Vec<Vector> =
            chosen.iter().map(|v| (1..s).fold(v.clone(), |acc, _| delta.mul_vec(&acc, f))).collect();
        let h = Matrix::from_fn(k, k, |a, b| mat::form(f, gram, &chosen[a], &dtop[b]));
        let det = h.det(f)?;
        if det.is_zero() {
            return Err(Error::Inconsistent(format!("degenerate Wall form for part size {s}")));
        }
        let sign = if s % 2 == 1 {
            if h.transpose() != h.neg(f) || k % 2 == 1 {
                return Err(Error::Inconsistent(format!("Wall form for odd part {s} is not alternating")));
            }
            -1
        } else {
            if h.transpose() != h {
                return Err(Error::Inconsistent(format!("Wall form for even part {s} is not symmetric")));
            }
            f.sign_class(det)?
        };
        // W <- W cap piece^perp, in W-coordinates
        let a = Matrix::from_fn(piece.len(), w.len(), |i, j| mat::form(f, gram, &piece[i], &w[j]));
        let coords = a.kernel_basis(f);
        let next: Vec<Vector> = coords
            .iter()
            .map(|c| {
                let mut v = vec![Fe::ZERO; n2];
                for (cj, wj) in c.iter().zip(&w) {
                    if cj.is_zero() {
                        continue;
                    }
                    for (x, &y) in v.iter_mut().zip(wj) {
                        *x = f.mul_add(*x, *cj, y);
                    }
                }
                v
            })
            .collect();
        if next.len() + s * k != w.len() {
            return Err(Error::Inconsistent("cyclic piece is degenerate".into()));
        }
        out.push(WallBlockReport { size: s as u32, mult: k as u32, sign, witness: chosen, gram: h });
        w = next;
    }
    Ok(out)
}

fn signed_from_reports(reports: &[WallBlockReport]) -> Result<SignedPartition> {
    SignedPartition::new(reports.iter().map(|r| SignedPart { size: r.size, mult: r.mult, sign: r.sign }).collect())
}

/// Symplectic type of `U` with respect to the standard form.
pub fn sp_type(f: &Fq, u: &Matrix) -> Result<SymplecticFn> {
    if !f.is_odd() {
        return Err(Error::Unsupported("symplectic types need odd q".into()));
    }
    let n2 = u.rows();
    if !u.is_square() || n2 % 2 == 1 {
        return Err(Error::Shape("sp_type needs an even square matrix".into()));
    }
    let gram = mat::gram_standard(f, n2 / 2);
    if !mat::is_symplectic(f, u, &gram) {
        return Err(Error::NotSymplectic);
    }
    let gl = gl_type(f, u)?;
    let tm = Poly::t_minus_one(f);
    let tp = Poly::t_plus_one(f);
    let mut rest = PartitionFn::new();
    for (g, part) in gl.iter() {
        if *g == tm || *g == tp {
            continue;
        }
        let gd = g.dual(f)?;
        if gd == *g {
            rest.set(g.clone(), part.clone());
        } else if *g < gd {
            if gl.get(&gd) != *part {
                return Err(Error::Inconsistent(format!("{} and its dual have different partitions", g.pretty())));
            }
            rest.set(g.mul(&gd, f), part.clone());
        }
    }
    let hminus = signed_from_reports(&wall_forms_unchecked(f, u, 1, &gram)?)?;
    let hplus = signed_from_reports(&wall_forms_unchecked(f, u, -1, &gram)?)?;
    if hminus.partition() != gl.get(&tm) || hplus.partition() != gl.get(&tp) {
        return Err(Error::Inconsistent("Wall reports disagree with the Jordan type".into()));
    }
    Ok(SymplecticFn::assemble(f, rest, hminus, hplus))
}

pub fn type_of(f: &Fq, kind: Kind, u: &Matrix) -> Result<ClassType> {
    Ok(match kind {
        Kind::Gl => ClassType::Gl(gl_type(f, u)?),
        Kind::Sp => ClassType::Sp(sp_type(f, u)?),
    })
}

/// A representative of the class with the given (full) type.
pub fn build_rep(f: &Fq, t: &ClassType) -> Result<Matrix> {
    match t {
        ClassType::Gl(p) => gl_rep(f, p),
        ClassType::Sp(s) => {
            let m = sp_rep(f, s)?;
            let back = sp_type(f, &m)?;
            if back != *s {
                return Err(Error::Inconsistent(format!(
                    "representative has type {} instead of {}",
                    back.describe(f),
                    s.describe(f)
                )));
            }
            Ok(m)
        }
    }
}

fn gl_rep(f: &Fq, p: &PartitionFn) -> Result<Matrix> {
    let mut blocks = Vec::new();
    for (g, part) in p.iter() {
        if g.coeff(0).is_zero() {
            return Err(invalid("the key t is not allowed"));
        }
        for &s in part.parts() {
            blocks.push(mat::companion(f, g, s)?);
        }
    }
    Ok(Matrix::block_diag(&blocks))
}

/// `J_lambda` for a single key: diagonal of companion blocks.
fn jordan_of(f: &Fq, g: &Poly, part: &Partition) -> Result<Matrix> {
    let blocks = part.parts().iter().map(|&s| mat::companion(f, g, s)).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::block_diag(&blocks))
}

fn unipotent_blocks(f: &Fq, h: &SignedPartition) -> Result<Vec<Matrix>> {
    let nonsq = f.nonsquare().ok_or_else(|| Error::Unsupported("no non-square in this field".into()))?;
    let mut blocks = Vec::new();
    for r in h.runs() {
        let s = r.size as usize;
        if s % 2 == 1 {
            for _ in 0..r.mult / 2 {
                blocks.push(mat::j_block(f, 2 * s)?);
            }
        } else {
            let k = (s / 2) as u64;
            // sign of J_{2k,eps} is the class of (-1)^{k-1} 2^{2k-1} eps
            let two = f.from_prime_int(2);
            let base = f.mul(f.pow(f.neg(Fe::ONE), k - 1), f.pow(two, 2 * k - 1));
            let sigma = f.sign_class(base)?;
            let want = r.sign * if r.mult % 2 == 0 { 1 } else { sigma };
            let eps = if want == 1 { Fe::ONE } else { nonsq };
            for _ in 0..r.mult - 1 {
                blocks.push(mat::j_block_eps(f, s, Fe::ONE)?);
            }
            blocks.push(mat::j_block_eps(f, s, eps)?);
        }
    }
    Ok(blocks)
}

fn sp_rep(f: &Fq, t: &SymplecticFn) -> Result<Matrix> {
    t.validate(f)?;
    let tm = Poly::t_minus_one(f);
    let tp = Poly::t_plus_one(f);
    let mut blocks = unipotent_blocks(f, &t.hminus)?;
    blocks.extend(unipotent_blocks(f, &t.hplus)?.into_iter().map(|b| b.neg(f)));
    for (key, part) in t.base.iter() {
        if *key == tm || *key == tp {
            continue;
        }
        if poly::is_irreducible(f, key) {
            for &s in part.parts() {
                let a = mat::companion(f, key, s)?;
                blocks.push(symplectic_conjugate(f, &a)?);
            }
        } else {
            let fs = poly::factor(f, key)?;
            let g = &fs[0].0;
            let a = jordan_of(f, g, part)?;
            let d = a.rows();
            let k = Matrix::from_fn(d, d, |i, j| if i + j + 1 == d { Fe::ONE } else { Fe::ZERO });
            let b = k.mul(&a.inverse(f)?.transpose(), f).mul(&k, f);
            blocks.push(Matrix::block_diag(&[a, b]));
        }
    }
    if blocks.is_empty() {
        return Ok(Matrix::identity(0));
    }
    Ok(mat::orthogonal_sum(&blocks))
}

/// Finds a nondegenerate alternating `G` with `A^T G A = G` and returns `A` written
/// in a hyperbolic basis for `G`, so the result preserves the standard form.
fn symplectic_conjugate(f: &Fq, a: &Matrix) -> Result<Matrix> {
    let d = a.rows();
    let unknowns: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
    let basis_mat = |coef: &[Fe]| {
        let mut g = Matrix::zeros(d, d);
        for (&(i, j), &c) in unknowns.iter().zip(coef) {
            g.set(i, j, c);
            g.set(j, i, f.neg(c));
        }
        g
    };
    let at = a.transpose();
    let mut sys = Matrix::zeros(d * d, unknowns.len());
    for (col, &(i, j)) in unknowns.iter().enumerate() {
        let mut e = Matrix::zeros(d, d);
        e.set(i, j, Fe::ONE);
        e.set(j, i, f.neg(Fe::ONE));
        let r = at.mul(&e, f).mul(a, f).sub(&e, f);
        for (row, &v) in r.data().iter().enumerate() {
            sys.set(row, col, v);
        }
    }
    let sols = sys.kernel_basis(f);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut found = None;
    for attempt in 0..200 {
        let coef: Vec<Fe> = if attempt < sols.len() {
            sols[attempt].clone()
        } else {
            let mut c = vec![Fe::ZERO; unknowns.len()];
            for s in &sols {
                let x = Fe(rng.gen_range(0..f.q()) as u8);
                for (ci, &si) in c.iter_mut().zip(s) {
                    *ci = f.mul_add(*ci, x, si);
                }
            }
            c
        };
        let g = basis_mat(&coef);
        if !g.det(f)?.is_zero() {
            found = Some(g);
            break;
        }
    }
    let g = found.ok_or_else(|| Error::Unsupported("no invariant symplectic form found".into()))?;
    let p = hyperbolic_basis(f, &g)?;
    Ok(p.inverse(f)?.mul(a, f).mul(&p, f))
}

/// Columns `e_1..e_k, f_k..f_1` of a hyperbolic basis for the alternating form `g`.
fn hyperbolic_basis(f: &Fq, g: &Matrix) -> Result<Matrix> {
    let d = g.rows();
    let mut rest: Vec<Vector> = (0..d).map(|i| mat::unit(d, i)).collect();
    let mut es = Vec::new();
    let mut fs = Vec::new();
    while let Some(e) = rest.first().cloned() {
        let j = (1..rest.len())
            .find(|&j| !mat::form(f, g, &e, &rest[j]).is_zero())
            .ok_or_else(|| Error::Inconsistent("form is degenerate".into()))?;
        let c = f.inv(mat::form(f, g, &e, &rest[j]))?;
        let fv: Vector = rest[j].iter().map(|&x| f.mul(c, x)).collect();
        let mut next = Vec::new();
        for (i, u) in rest.iter().enumerate() {
            if i == 0 || i == j {
                continue;
            }
            let a = mat::form(f, g, u, &fv);
            let b = mat::form(f, g, u, &e);
            let v: Vector = (0..d).map(|t| f.add(f.sub(u[t], f.mul(a, e[t])), f.mul(b, fv[t]))).collect();
            next.push(v);
        }
        es.push(e);
        fs.push(fv);
        rest = next;
    }
    fs.reverse();
    es.extend(fs);
    Ok(Matrix::from_columns(d, &es))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::enumerate_types;

    fn f(q: u32) -> Fq {
        Fq::parse(&q.to_string()).unwrap()
    }

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn gl_type_examples() {
        let f3 = f(3);
        let tm = Poly::t_minus_one(&f3);
        assert_eq!(gl_type(&f3, &Matrix::identity(2)).unwrap(), PartitionFn::from_entries([(tm.clone(), part(&[1, 1]))]));
        assert_eq!(gl_type(&f3, &mat::s_matrix(3)).unwrap(), PartitionFn::from_entries([(tm.clone(), part(&[3]))]));
        let g = Poly::from_ints(&f3, &[1, 0, 1]);
        let c = mat::companion(&f3, &g, 1).unwrap();
        assert_eq!(gl_type(&f3, &c).unwrap(), PartitionFn::from_entries([(g, part(&[1]))]));
        assert!(matches!(gl_type(&f3, &Matrix::zeros(2, 2)), Err(Error::Singular)));
    }

    #[test]
    fn reflection_lengths() {
        let f3 = f(3);
        assert_eq!(refl_length(&f3, &Matrix::identity(4)), 0);
        assert_eq!(refl_length(&f3, &mat::j_block_eps(&f3, 4, Fe::ONE).unwrap()), 3);
        assert_eq!(refl_length(&f3, &mat::j_block(&f3, 6).unwrap()), 4);
        let j6 = mat::j_block(&f3, 6).unwrap();
        assert_eq!(fixed_dim(&f3, &j6), gl_type(&f3, &j6).unwrap().get(&Poly::t_minus_one(&f3)).len());
    }

    #[test]
    fn wall_examples() {
        let f3 = f(3);
        let r = wall_forms(&f3, &mat::j_block(&f3, 6).unwrap(), 1).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].size, r[0].mult, r[0].sign), (3, 2, -1));
        assert!(wall_forms(&f3, &Matrix::identity(4), -1).unwrap().is_empty());
        for q in [3, 5, 7] {
            let fq = f(q);
            for k in 1..=3u64 {
                for eps in fq.units() {
                    let j = mat::j_block_eps(&fq, 2 * k as usize, eps).unwrap();
                    let r = wall_forms(&fq, &j, 1).unwrap();
                    let two = fq.from_prime_int(2);
                    let x = fq.mul(fq.mul(fq.pow(fq.neg(Fe::ONE), k - 1), fq.pow(two, 2 * k - 1)), eps);
                    assert_eq!(r.len(), 1);
                    assert_eq!((r[0].size, r[0].mult), (2 * k as u32, 1));
                    assert_eq!(r[0].sign, fq.sign_class(x).unwrap(), "q={q} k={k} eps={eps}");
                }
            }
        }
    }

    #[test]
    fn sp_type_examples() {
        let f3 = f(3);
        let minus_i = Matrix::identity(2).neg(&f3);
        let t = sp_type(&f3, &minus_i).unwrap();
        assert_eq!(t.hplus.runs(), &[SignedPart { size: 1, mult: 2, sign: -1 }]);
        assert!(t.hminus.is_empty());
        let t = sp_type(&f3, &mat::j_block_eps(&f3, 2, Fe::ONE).unwrap()).unwrap();
        assert_eq!(t.hminus.runs(), &[SignedPart { size: 2, mult: 1, sign: -1 }]);
        let g = Poly::from_ints(&f3, &[1, 0, 1]);
        let c = mat::companion(&f3, &g, 1).unwrap();
        let t = sp_type(&f3, &c).unwrap();
        assert_eq!(t.base, PartitionFn::from_entries([(g, part(&[1]))]));
        assert!(t.hminus.is_empty() && t.hplus.is_empty());
        assert!(matches!(sp_type(&f3, &Matrix::from_ints(&f3, 2, 2, &[2, 0, 0, 1])), Err(Error::NotSymplectic)));
    }

    #[test]
    fn build_rep_examples() {
        let f3 = f(3);
        let tm = Poly::t_minus_one(&f3);
        let gl = ClassType::Gl(PartitionFn::from_entries([(tm.clone(), part(&[2]))]));
        assert_eq!(build_rep(&f3, &gl).unwrap(), mat::companion(&f3, &tm, 2).unwrap());
        let h = SignedPartition::new(vec![SignedPart { size: 3, mult: 2, sign: -1 }]).unwrap();
        let sp = ClassType::Sp(SymplecticFn::assemble(&f3, PartitionFn::new(), h, SignedPartition::empty()));
        assert_eq!(build_rep(&f3, &sp).unwrap(), mat::j_block(&f3, 6).unwrap());
        let g = Poly::from_ints(&f3, &[1, 0, 1]);
        let sp2 = ClassType::Sp(SymplecticFn::assemble(
            &f3,
            PartitionFn::from_entries([(g.clone(), part(&[1]))]),
            SignedPartition::empty(),
            SignedPartition::empty(),
        ));
        let r = build_rep(&f3, &sp2).unwrap();
        assert!(mat::is_symplectic(&f3, &r, &mat::gram_standard(&f3, 1)));
        assert_eq!(r.char_poly(&f3), g);
    }

    #[test]
    fn sp_round_trip_all_small_types() {
        for q in [3, 5] {
            let fq = f(q);
            for w in [2, 4] {
                for t in enumerate_types(&fq, w, Kind::Sp).unwrap() {
                    let r = build_rep(&fq, &t).unwrap();
                    assert_eq!(type_of(&fq, Kind::Sp, &r).unwrap(), t, "q={q} {}", t.describe(&fq));
                    assert_eq!(r.det(&fq).unwrap(), Fe::ONE);
                }
            }
        }
    }

    #[test]
    fn sp_round_trip_weight_six_f3() {
        let fq = f(3);
        for t in enumerate_types(&fq, 6, Kind::Sp).unwrap() {
            let r = build_rep(&fq, &t).unwrap();
            assert_eq!(type_of(&fq, Kind::Sp, &r).unwrap(), t);
        }
    }

    #[test]
    fn gl_round_trip() {
        for (q, n) in [(2, 4), (3, 3), (5, 2)] {
            let fq = f(q);
            for t in enumerate_types(&fq, n, Kind::Gl).unwrap() {
                let r = build_rep(&fq, &t).unwrap();
                assert_eq!(type_of(&fq, Kind::Gl, &r).unwrap(), t);
            }
        }
    }

    #[test]
    fn embedding_preserves_modified_type() {
        let fq = f(3);
        for t in enumerate_types(&fq, 2, Kind::Sp).unwrap() {
            let u = build_rep(&fq, &t).unwrap();
            let up = mat::embed_upup(&u, 2).unwrap();
            let tu = type_of(&fq, Kind::Sp, &up).unwrap();
            assert_eq!(tu, t.modify(&fq).ncomplete(&fq, 2).unwrap());
            assert_eq!(tu.modify(&fq), t.modify(&fq));
        }
    }
}
