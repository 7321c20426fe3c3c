//! Dense matrices over F_q with basis labels, and the block builders.
//!
//! Symplectic spaces of rank n use the ordered hyperbolic basis
//! `e_1, .., e_n, f_n, .., f_1` with `Q(e_i, f_i) = 1`, so the Gram matrix has
//! +1 on the upper half of the anti-diagonal and -1 on the lower half.
//! Vectors are column vectors stored as `Vec<Fe>`.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::gf::{Fe, Fq};
use crate::poly::{self, Poly};

pub type Vector = Vec<Fe>;

/// Name of a basis vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Label {
    E(u32),
    F(u32),
    Idx(u32),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::E(i) => write!(f, "e{i}"),
            Label::F(i) => write!(f, "f{i}"),
            Label::Idx(i) => write!(f, "v{i}"),
        }
    }
}

/// `e_1..e_n, f_n..f_1`
pub fn hyperbolic_labels(n: usize) -> Arc<[Label]> {
    (1..=n as u32).map(Label::E).chain((1..=n as u32).rev().map(Label::F)).collect()
}

fn index_labels(n: usize) -> Arc<[Label]> {
    (1..=n as u32).map(Label::Idx).collect()
}

/// Row-major matrix. Labels are metadata and do not take part in equality.
#[derive(Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
    row_labels: Option<Arc<[Label]>>,
    col_labels: Option<Arc<[Label]>>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for Matrix {}

impl std::hash::Hash for Matrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_text())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Fe::ZERO; rows * cols], row_labels: None, col_labels: None }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Fe::ONE;
        }
        m
    }

    pub fn scalar(n: usize, a: Fe) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = a;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Fe>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "data length");
        Matrix { rows, cols, data, row_labels: None, col_labels: None }
    }

    pub fn from_fn(rows: usize, cols: usize, mut g: impl FnMut(usize, usize) -> Fe) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(g(i, j));
            }
        }
        Matrix::from_vec(rows, cols, data)
    }

    pub fn from_ints(f: &Fq, rows: usize, cols: usize, v: &[i64]) -> Matrix {
        Matrix::from_vec(rows, cols, v.iter().map(|&x| f.from_int(x)).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, cols: &[Vector]) -> Matrix {
        Matrix::from_fn(n, cols.len(), |i, j| cols[j][i])
    }

    /// Parses "1,0;1,1": rows separated by ';', entries by ','.
    pub fn parse(f: &Fq, s: &str) -> Result<Matrix> {
        let rows: Vec<Vec<i64>> = s
            .split(';')
            .map(|r| {
                r.split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad matrix entry {x:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, |r| r.len());
        if cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("matrix rows must be nonempty and of equal length".into()));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Ok(Matrix::from_ints(f, rows.len(), cols, &flat))
    }

    pub fn to_text(&self) -> String {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn with_labels(mut self, labels: Arc<[Label]>) -> Matrix {
        assert!(self.rows == self.cols && labels.len() == self.rows, "labels need a square matrix");
        self.row_labels = Some(labels.clone());
        self.col_labels = Some(labels);
        self
    }

    pub fn row_labels(&self) -> Arc<[Label]> {
        self.row_labels.clone().unwrap_or_else(|| index_labels(self.rows))
    }

    pub fn col_labels(&self) -> Arc<[Label]> {
        self.col_labels.clone().unwrap_or_else(|| index_labels(self.cols))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, o: &Matrix, f: &Fq) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape");
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn sub(&self, o: &Matrix, f: &Fq) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape");
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn scale(&self, a: Fe, f: &Fq) -> Matrix {
        let data = self.data.iter().map(|&x| f.mul(a, x)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn neg(&self, f: &Fq) -> Matrix {
        let data = self.data.iter().map(|&x| f.neg(x)).collect();
        Matrix { data, ..self.clone() }
    }

    /// `self - a*I`
    pub fn minus_scalar(&self, a: Fe, f: &Fq) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = f.sub(m.get(i, i), a);
            m.set(i, i, v);
        }
        m
    }

    /// Product; panics on a shape mismatch (see [`Matrix::checked_mul`]).
    pub fn mul(&self, o: &Matrix, f: &Fq) -> Matrix {
        assert_eq!(self.cols, o.rows, "shape");
        let mut out = vec![Fe::ZERO; self.rows * o.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * o.cols..(i + 1) * o.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &o.data[k * o.cols..(k + 1) * o.cols];
                for (c, &b) in orow.iter_mut().zip(brow) {
                    *c = f.mul_add(*c, a, b);
                }
            }
        }
        Matrix {
            rows: self.rows,
            cols: o.cols,
            data: out,
            row_labels: self.row_labels.clone(),
            col_labels: o.col_labels.clone(),
        }
    }

    pub fn checked_mul(&self, o: &Matrix, f: &Fq) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(self.mul(o, f))
    }

    pub fn mul_vec(&self, v: &[Fe], f: &Fq) -> Vector {
        assert_eq!(self.cols, v.len(), "shape");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Fe::ZERO, |acc, (&a, &b)| f.mul_add(acc, a, b)))
            .collect()
    }

    pub fn pow(&self, e: u64, f: &Fq) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self, f: &Fq) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.data[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("nonzero pivot");
            for j in c..cols {
                self.data[r * cols + j] = f.mul(self.data[r * cols + j], inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let m = self.data[i * cols + c];
                if m.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let v = f.sub(self.data[i * cols + j], f.mul(m, self.data[r * cols + j]));
                    self.data[i * cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Fq) -> usize {
        self.clone().rref_in_place(f).len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel_basis(&self, f: &Fq) -> Vec<Vector> {
        let mut m = self.clone();
        let pivots = m.rref_in_place(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Fe::ZERO; self.cols];
                v[fc] = Fe::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    pub fn det(&self, f: &Fq) -> Result<Fe> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Fe::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i * n + c].is_zero()) else {
                return Ok(Fe::ZERO);
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let piv = a[c * n + c];
            det = f.mul(det, piv);
            let inv = f.inv(piv)?;
            for i in c + 1..n {
                let m = f.mul(a[i * n + c], inv);
                if m.is_zero() {
                    continue;
                }
                for j in c..n {
                    a[i * n + j] = f.sub(a[i * n + j], f.mul(m, a[c * n + j]));
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self, f: &Fq) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        let pivots = aug.rref_in_place(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::from_fn(n, n, |i, j| aug.get(i, n + j));
        inv.row_labels = self.col_labels.clone();
        inv.col_labels = self.row_labels.clone();
        Ok(inv)
    }

    /// Characteristic polynomial det(tI - M), via Hessenberg reduction.
    pub fn char_poly(&self, f: &Fq) -> Poly {
        assert!(self.is_square(), "char_poly of a non-square matrix");
        let n = self.rows;
        let mut h = self.data.clone();
        for k in 0..n.saturating_sub(2) {
            let Some(r) = (k + 1..n).find(|&i| !h[i * n + k].is_zero()) else {
                continue;
            };
            if r != k + 1 {
                for j in 0..n {
                    h.swap(r * n + j, (k + 1) * n + j);
                }
                for i in 0..n {
                    h.swap(i * n + r, i * n + k + 1);
                }
            }
            let inv = f.inv(h[(k + 1) * n + k]).expect("nonzero pivot");
            for i in k + 2..n {
                let m = f.mul(h[i * n + k], inv);
                if m.is_zero() {
                    continue;
                }
                for j in 0..n {
                    h[i * n + j] = f.sub(h[i * n + j], f.mul(m, h[(k + 1) * n + j]));
                }
                for row in 0..n {
                    h[row * n + k + 1] = f.add(h[row * n + k + 1], f.mul(m, h[row * n + i]));
                }
            }
        }
        let at = |i: usize, j: usize| h[(i - 1) * n + (j - 1)];
        let mut ps: Vec<Poly> = vec![Poly::one()];
        for m in 1..=n {
            let lin = Poly::new(vec![f.neg(at(m, m)), Fe::ONE]);
            let mut pm = lin.mul(&ps[m - 1], f);
            let mut prod = Fe::ONE;
            for i in (1..m).rev() {
                prod = f.mul(prod, at(i + 1, i));
                if prod.is_zero() {
                    break;
                }
                let c = f.mul(at(i, m), prod);
                if !c.is_zero() {
                    pm = pm.sub(&ps[i - 1].scale(c, f), f);
                }
            }
            ps.push(pm);
        }
        ps.pop().expect("nonempty")
    }

    /// `g(M)` by Horner's rule.
    pub fn eval_poly(&self, g: &Poly, f: &Fq) -> Matrix {
        let n = self.rows;
        let mut acc = Matrix::zeros(n, n);
        for &c in g.coeffs().iter().rev() {
            acc = acc.mul(self, f);
            for i in 0..n {
                let v = f.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == if i == j { Fe::ONE } else { Fe::ZERO }))
    }

    /// Block-diagonal matrix of square blocks, with index labels.
    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Matrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.rows;
        }
        out
    }

    /// Submatrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }
}

/// Companion matrix of `g^m` for a monic irreducible `g`.
pub fn companion(f: &Fq, g: &Poly, m: u32) -> Result<Matrix> {
    if !g.is_monic() || !poly::is_irreducible(f, g) {
        return Err(invalid(format!("{} is not monic irreducible", g.pretty())));
    }
    if m == 0 {
        return Err(invalid("companion power must be positive"));
    }
    Ok(companion_of(f, &g.pow(m, f)))
}

/// Companion matrix of any monic polynomial: ones on the subdiagonal and the
/// last column `a_i` where `h = t^k - sum a_i t^i`.
pub fn companion_of(f: &Fq, h: &Poly) -> Matrix {
    let k = h.deg();
    let mut c = Matrix::zeros(k, k);
    for i in 1..k {
        c.set(i, i - 1, Fe::ONE);
    }
    for i in 0..k {
        c.set(i, k - 1, f.neg(h.coeff(i)));
    }
    c
}

/// Lower-triangular all-ones n x n matrix.
pub fn s_matrix(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| if j <= i { Fe::ONE } else { Fe::ZERO })
}

/// Ones on the diagonal and -1 on the subdiagonal: the inverse of `s_matrix(n)`.
fn s_inverse(f: &Fq, n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Fe::ONE
        } else if i == j + 1 {
            f.neg(Fe::ONE)
        } else {
            Fe::ZERO
        }
    })
}

/// Gram matrix of the standard form on `e_1..e_n, f_n..f_1`.
pub fn gram_standard(f: &Fq, n: usize) -> Matrix {
    let d = 2 * n;
    let mut g = Matrix::zeros(d, d);
    for i in 0..n {
        g.set(i, d - 1 - i, Fe::ONE);
        g.set(d - 1 - i, i, f.neg(Fe::ONE));
    }
    g.with_labels(hyperbolic_labels(n))
}

fn even_half(size: usize) -> Result<usize> {
    if size == 0 || size % 2 == 1 {
        return Err(invalid(format!("block size {size} must be positive and even")));
    }
    Ok(size / 2)
}

/// The symplectic unipotent block `J_{2m} = diag(S_m, S_m^{-1})` of the given size 2m.
pub fn j_block(f: &Fq, size: usize) -> Result<Matrix> {
    let m = even_half(size)?;
    let a = s_matrix(m);
    let b = s_inverse(f, m);
    Ok(Matrix::block_diag(&[a, b]).with_labels(hyperbolic_labels(m)))
}

/// The unipotent block `J_{2m,eps}` of size 2m: `J_{2m}` with row `f_m` set to
/// `eps` in every e column.
pub fn j_block_eps(f: &Fq, size: usize, eps: Fe) -> Result<Matrix> {
    let m = even_half(size)?;
    if eps.is_zero() {
        return Err(invalid("eps must be nonzero"));
    }
    let mut j = j_block(f, size)?;
    for c in 0..m {
        j.set(m, c, eps);
    }
    Ok(j)
}

pub fn is_symplectic(f: &Fq, m: &Matrix, gram: &Matrix) -> bool {
    m.is_square() && m.rows() == gram.rows() && m.transpose().mul(gram, f).mul(m, f) == *gram
}

/// Q(x, y) = x^T G y
pub fn form(f: &Fq, gram: &Matrix, x: &[Fe], y: &[Fe]) -> Fe {
    let gy = gram.mul_vec(y, f);
    x.iter().zip(&gy).fold(Fe::ZERO, |acc, (&a, &b)| f.mul_add(acc, a, b))
}

/// The transvection `x -> x + c Q(x, v) v`.
pub fn transvection(f: &Fq, v: &[Fe], c: Fe, gram: &Matrix) -> Matrix {
    let n = v.len();
    // Q(x, v) = (G v) . x
    let gv = gram.mul_vec(v, f);
    let mut t = Matrix::from_fn(n, n, |i, j| f.mul(c, f.mul(v[i], gv[j])));
    for i in 0..n {
        let d = f.add(t.get(i, i), Fe::ONE);
        t.set(i, i, d);
    }
    match &gram.row_labels {
        Some(l) => t.with_labels(l.clone()),
        None => t,
    }
}

/// Position of a label in the standard order of rank `n`.
fn hyperbolic_position(l: Label, n: usize) -> usize {
    match l {
        Label::E(i) => i as usize - 1,
        Label::F(i) => 2 * n - i as usize,
        Label::Idx(_) => unreachable!("index label in a symplectic block"),
    }
}

/// Orthogonal sum of symplectic blocks, each in its own standard basis.
/// The hyperbolic pairs of block k are renumbered after those of blocks 0..k
/// and the result is written in the standard order of the total rank.
pub fn orthogonal_sum(blocks: &[Matrix]) -> Matrix {
    let total: usize = blocks.iter().map(|b| b.rows() / 2).sum();
    let mut out = Matrix::zeros(2 * total, 2 * total);
    let mut off = 0u32;
    for b in blocks {
        let m = b.rows() / 2;
        let pos: Vec<usize> = (0..b.rows())
            .map(|i| {
                let l = if i < m { Label::E(off + i as u32 + 1) } else { Label::F(off + (2 * m - i) as u32) };
                hyperbolic_position(l, total)
            })
            .collect();
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out.set(pos[i], pos[j], b.get(i, j));
            }
        }
        off += m as u32;
    }
    out.with_labels(hyperbolic_labels(total))
}

/// `U` of size 2m placed in Sp_n as `U (+) I_{2n-2m}`, in standard order.
pub fn embed_upup(u: &Matrix, n: usize) -> Result<Matrix> {
    let m = u.rows() / 2;
    if !u.is_square() || u.rows() % 2 == 1 || n < m {
        return Err(invalid(format!("cannot embed a {}x{} matrix into Sp_{n}", u.rows(), u.cols())));
    }
    if n == m {
        return Ok(u.clone().with_labels(hyperbolic_labels(n)));
    }
    Ok(orthogonal_sum(&[u.clone(), Matrix::identity(2 * (n - m))]))
}

/// `diag(U, I_{n-m})` in GL_n.
pub fn embed_up(u: &Matrix, n: usize) -> Result<Matrix> {
    if !u.is_square() || n < u.rows() {
        return Err(invalid(format!("cannot embed a {}x{} matrix into GL_{n}", u.rows(), u.cols())));
    }
    Ok(Matrix::block_diag(&[u.clone(), Matrix::identity(n - u.rows())]))
}

/// Basis of `{x : Q(w, x) = 0 for all w in W}`.
pub fn orth_complement(f: &Fq, w: &[Vector], gram: &Matrix) -> Vec<Vector> {
    let n = gram.rows();
    if w.is_empty() {
        return (0..n).map(|i| unit(n, i)).collect();
    }
    let rows: Vec<Fe> = w.iter().flat_map(|v| gram.transpose().mul_vec(v, f)).collect();
    Matrix::from_vec(w.len(), n, rows).kernel_basis(f)
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![Fe::ZERO; n];
    v[i] = Fe::ONE;
    v
}

/// Basis of the span of the given vectors (row-reduced).
pub fn span_basis(f: &Fq, vs: &[Vector]) -> Vec<Vector> {
    if vs.is_empty() {
        return Vec::new();
    }
    let n = vs[0].len();
    let mut m = Matrix::from_vec(vs.len(), n, vs.iter().flatten().copied().collect());
    let r = m.rref_in_place(f).len();
    (0..r).map(|i| m.row(i).to_vec()).collect()
}
