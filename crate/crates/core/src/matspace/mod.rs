//! Dense matrices over a finite field.
//!
//! Vectors are rows and matrices act on the right, `v ↦ vM`. Conjugation is
//! `t^g = g⁻¹ t g`, so the image of a t-invariant subspace `S` under `g` is the
//! `t^g`-invariant subspace `S·g`.

mod spin;
mod subspace;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

use crate::gfield::{poly, Fe, FieldElement, FieldError, FieldSpec};
use crate::numth;

/// Matrix entries packed into machine words, for hashing large orbits.
pub type PackedKey = SmallVec<[u64; 4]>;

pub use spin::{is_reducible_oracle, spin_closure, DEFAULT_POINT_CAP};
pub use subspace::{commutator_space, fixed_space, is_irreducible_on, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrices over different fields")]
    FieldMismatch,
    #[error("matrix is not square")]
    NotSquare,
    #[error("subspace is not invariant under the matrix")]
    NotInvariant,
    #[error("matrix is singular")]
    Singular,
    #[error("projective point count {points} exceeds the cap {cap}")]
    CapExceeded { points: u64, cap: u64 },
    #[error("cannot parse matrix: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone)]
pub struct Matrix {
    field: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field.id() == other.field.id()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}
impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.id().hash(state);
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} {}x{}", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(field: &Arc<FieldSpec>, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Arc<FieldSpec>, n: usize) -> Self {
        Self::scalar(field, n, 1)
    }

    pub fn scalar(field: &Arc<FieldSpec>, n: usize, c: Fe) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_vec(
        field: &Arc<FieldSpec>,
        rows: usize,
        cols: usize,
        data: Vec<Fe>,
    ) -> Result<Self, MatError> {
        if data.len() != rows * cols {
            return Err(MatError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&x) = data.iter().find(|&&x| x as u64 >= field.order()) {
            return Err(FieldError::OutOfRange(x as u64, format!("{field:?}")).into());
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &Arc<FieldSpec>, rows: &[Vec<Fe>]) -> Result<Self, MatError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatError::Dimension("ragged rows".into()));
        }
        Self::from_vec(field, rows.len(), cols, rows.concat())
    }

    /// Block diagonal matrix with the given square blocks.
    pub fn block_diag(field: &Arc<FieldSpec>, blocks: &[&Matrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zero(field, n, n);
        let mut off = 0;
        for b in blocks {
            assert!(b.is_square(), "block_diag needs square blocks");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[(off + i) * n + off + j] = b.get(i, j);
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Fe) {
        self.data[i * self.cols + j] = x;
    }

    pub fn element(&self, i: usize, j: usize) -> FieldElement {
        FieldElement::new(&self.field, self.get(i, j)).expect("entries are in range")
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn same_field(&self, other: &Matrix) {
        assert!(
            self.field.id() == other.field.id(),
            "matrices over {:?} and {:?}",
            self.field,
            other.field
        );
    }

    /// Matrix product; panics on a dimension or field mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.checked_mul(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, MatError> {
        if self.field.id() != other.field.id() {
            return Err(MatError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(MatError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &*self.field;
        let mut out = Matrix::zero(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = f.add(*o, f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// The row vector `v·M`.
    pub fn vec_mul(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.rows, "vector length");
        let f = &*self.field;
        let mut out = vec![0; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(k)) {
                *o = f.add(*o, f.mul(a, b));
            }
        }
        out
    }

    /// The column product `M·xᵀ`, returned as a row.
    pub fn mul_vec(&self, x: &[Fe]) -> Vec<Fe> {
        assert_eq!(x.len(), self.cols, "vector length");
        let f = &*self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(&FieldSpec, Fe, Fe) -> Fe) -> Matrix {
        self.same_field(other);
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| op(&self.field, a, b))
            .collect();
        Matrix { data, ..self.clone() }
    }

    pub fn scale(&self, c: Fe) -> Matrix {
        self.map(|f, x| f.mul(c, x))
    }

    pub fn neg(&self) -> Matrix {
        self.map(|f, x| f.neg(x))
    }

    /// Applies a function entrywise (for example a field automorphism).
    pub fn map(&self, op: impl Fn(&FieldSpec, Fe) -> Fe) -> Matrix {
        let data = self.data.iter().map(|&x| op(&self.field, x)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn minus_identity(&self) -> Matrix {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            let x = out.get(i, i);
            out.set(i, i, self.field.sub(x, 1));
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as Fe))
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(&self.field, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Exact order of the matrix, given any positive multiple `n` of it.
    pub fn order_dividing(&self, n: u64) -> Option<u64> {
        if !self.pow(n).is_identity() {
            return None;
        }
        let mut ord = n;
        for (r, _) in numth::factor(n) {
            while ord % r == 0 && self.pow(ord / r).is_identity() {
                ord /= r;
            }
        }
        Some(ord)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            for j in c..cols {
                self.data[r * cols + j] = f.mul(inv, self.data[r * cols + j]);
            }
            for i in 0..rows {
                let x = self.data[i * cols + c];
                if i == r || x == 0 {
                    continue;
                }
                for j in c..cols {
                    let v = f.mul(x, self.data[r * cols + j]);
                    self.data[i * cols + j] = f.sub(self.data[i * cols + j], v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Right kernel `{x : M xᵀ = 0}`, so that rank + nullity = column count.
    pub fn nullspace(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<Fe>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect();
        Subspace::from_vectors(f, self.cols, &basis)
    }

    /// Left kernel `{v : vM = 0}`.
    pub fn left_nullspace(&self) -> Subspace {
        self.transpose().nullspace()
    }

    pub fn det(&self) -> Result<Fe, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare);
        }
        let f = self.field.clone();
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det: Fe = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| m[i * n + c] != 0) else {
                return Ok(0);
            };
            if p != c {
                for j in 0..n {
                    m.swap(p * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pv = m[c * n + c];
            det = f.mul(det, pv);
            let inv = f.inv(pv);
            for i in c + 1..n {
                let x = f.mul(m[i * n + c], inv);
                if x == 0 {
                    continue;
                }
                for j in c..n {
                    m[i * n + j] = f.sub(m[i * n + j], f.mul(x, m[c * n + j]));
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare);
        }
        let n = self.rows;
        let mut aug = Matrix::zero(&self.field, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(MatError::Singular);
        }
        let mut out = Matrix::zero(&self.field, n, n);
        for i in 0..n {
            out.data[i * n..(i + 1) * n].copy_from_slice(&aug.data[i * 2 * n + n..(i + 1) * 2 * n]);
        }
        Ok(out)
    }

    /// `g⁻¹ self g`.
    pub fn conjugate_by(&self, g: &Matrix, g_inv: &Matrix) -> Matrix {
        g_inv.mul(self).mul(g)
    }

    /// Characteristic polynomial `det(xI − M)`, low degree first, via
    /// reduction to upper Hessenberg form.
    pub fn char_poly(&self) -> Result<poly::Poly, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare);
        }
        let f = self.field.clone();
        let n = self.rows;
        let mut h = self.data.clone();
        let at = |i: usize, j: usize| i * n + j;
        for j in 0..n.saturating_sub(2) {
            let Some(p) = (j + 1..n).find(|&i| h[at(i, j)] != 0) else {
                continue;
            };
            if p != j + 1 {
                for c in 0..n {
                    h.swap(at(p, c), at(j + 1, c));
                }
                for r in 0..n {
                    h.swap(at(r, p), at(r, j + 1));
                }
            }
            let inv = f.inv(h[at(j + 1, j)]);
            for k in j + 2..n {
                let u = f.mul(h[at(k, j)], inv);
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    h[at(k, c)] = f.sub(h[at(k, c)], f.mul(u, h[at(j + 1, c)]));
                }
                for r in 0..n {
                    h[at(r, j + 1)] = f.add(h[at(r, j + 1)], f.mul(u, h[at(r, k)]));
                }
            }
        }
        // p_{m+1} = (x − h_mm) p_m − Σ_{i<m} h_im (h_{i+1,i} ⋯ h_{m,m−1}) p_i
        let mut ps: Vec<poly::Poly> = vec![vec![1]];
        for m in 0..n {
            let mut next = poly::mul(&f, &[f.neg(h[at(m, m)]), 1], &ps[m]);
            let mut prod: Fe = 1;
            for i in (0..m).rev() {
                prod = f.mul(prod, h[at(i + 1, i)]);
                let c = f.mul(h[at(i, m)], prod);
                if c != 0 {
                    next = poly::sub(&f, &next, &poly::scale(&f, &ps[i], c));
                }
            }
            ps.push(next);
        }
        Ok(ps.pop().unwrap())
    }

    fn bits_per_entry(&self) -> u32 {
        64 - (self.field.order() - 1).leading_zeros().min(63)
    }

    /// Entries packed at `ceil(log2 |F|)` bits each.
    pub fn pack(&self) -> PackedKey {
        let b = self.bits_per_entry() as usize;
        let per_word = 64 / b;
        let mut key = PackedKey::new();
        for chunk in self.data.chunks(per_word) {
            let w = chunk
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &x)| acc | ((x as u64) << (i * b)));
            key.push(w);
        }
        key
    }

    /// Inverse of [`pack`](Self::pack).
    pub fn unpack(field: &Arc<FieldSpec>, rows: usize, cols: usize, key: &[u64]) -> Matrix {
        let mut m = Matrix::zero(field, rows, cols);
        let b = m.bits_per_entry() as usize;
        let per_word = 64 / b;
        let mask = (1u64 << b) - 1;
        for (idx, x) in m.data.iter_mut().enumerate() {
            *x = ((key[idx / per_word] >> ((idx % per_word) * b)) & mask) as Fe;
        }
        m
    }

    /// Text form: the field serialization on the first line, then one line per
    /// row of whitespace-separated element coefficient lists.
    pub fn to_text(&self) -> String {
        let mut s = self.field.serialize();
        s.push('\n');
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.element(i, j).to_string())
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Matrix, MatError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| MatError::Parse("missing field header".into()))?;
        let field = FieldSpec::parse(header)?;
        let rows = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|tok| FieldElement::parse(tok, &field).map(|e| e.code()))
                    .collect::<Result<Vec<Fe>, FieldError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::from_rows(&field, &rows)
    }
}

/// Matrix of multiplication by `zeta` on its field viewed as a vector space
/// over the tower subfield `sub`: row `i` holds the coordinates of `b_i·ζ`
/// for the tower basis `b_i`.
pub fn mult_matrix(zeta: &FieldElement, sub: &Arc<FieldSpec>) -> Result<Matrix, MatError> {
    let big = zeta.field();
    let d = (big.degree() / sub.degree()) as usize;
    let k = sub.order();
    let mut rows = Vec::with_capacity(d);
    let mut b: u64 = 1;
    for _ in 0..d {
        let prod = big.mul(b as Fe, zeta.code());
        rows.push(big.coords_over(prod, sub)?);
        b *= k;
    }
    Matrix::from_rows(sub, &rows)
}

/// Companion matrix of a monic polynomial, in the row convention: `e_i ↦ e_{i+1}`
/// and `e_{d−1} ↦ −Σ c_j e_j`.
pub fn companion(field: &Arc<FieldSpec>, monic: &[Fe]) -> Matrix {
    let d = monic.len() - 1;
    let mut m = Matrix::zero(field, d, d);
    for i in 0..d.saturating_sub(1) {
        m.set(i, i + 1, 1);
    }
    for j in 0..d {
        m.set(d - 1, j, field.neg(monic[j]));
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::{ext_field, field_of_order, make_field, prime_field};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(f: &Arc<FieldSpec>, r: usize, c: usize, rng: &mut impl Rng) -> Matrix {
        let data = (0..r * c).map(|_| rng.gen_range(0..f.order()) as Fe).collect();
        Matrix::from_vec(f, r, c, data).unwrap()
    }

    #[test]
    fn identity_and_zero_ranks() {
        let f = prime_field(2).unwrap();
        let i4 = Matrix::identity(&f, 4);
        assert_eq!(i4.rank(), 4);
        assert_eq!(i4.nullspace().dim(), 0);
        let z = Matrix::zero(&f, 3, 3);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.nullspace().dim(), 3);
    }

    #[test]
    fn companion_of_x2_x_1_has_no_fixed_vector() {
        let f = prime_field(2).unwrap();
        let c = companion(&f, &[1, 1, 1]);
        assert_eq!(c.minus_identity().rank(), 2);
    }

    #[test]
    fn rank_nullity_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for q in [2u64, 3, 4, 5, 9] {
            let f = field_of_order(q).unwrap();
            for _ in 0..50 {
                let (r, c) = (rng.gen_range(1..6), rng.gen_range(1..6));
                let m = random_matrix(&f, r, c, &mut rng);
                let ns = m.nullspace();
                assert_eq!(m.rank() + ns.dim(), c);
                for v in ns.basis().row_vecs() {
                    assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
                }
            }
        }
    }

    #[test]
    fn inverse_and_det_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for q in [2u64, 3, 7, 8, 9] {
            let f = field_of_order(q).unwrap();
            for _ in 0..50 {
                let m = random_matrix(&f, 4, 4, &mut rng);
                let d = m.det().unwrap();
                match m.inverse() {
                    Ok(inv) => {
                        assert_ne!(d, 0);
                        assert!(m.mul(&inv).is_identity());
                        assert_eq!(f.mul(d, inv.det().unwrap()), 1);
                    }
                    Err(MatError::Singular) => assert_eq!(d, 0),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = field_of_order(5).unwrap();
        for _ in 0..100 {
            let a = random_matrix(&f, 3, 3, &mut rng);
            let b = random_matrix(&f, 3, 3, &mut rng);
            let lhs = a.mul(&b).det().unwrap();
            assert_eq!(lhs, f.mul(a.det().unwrap(), b.det().unwrap()));
        }
    }

    #[test]
    fn char_poly_matches_pointwise_determinants() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for q in [7u64, 9, 11, 16] {
            let f = field_of_order(q).unwrap();
            for n in 1..=5 {
                let m = random_matrix(&f, n, n, &mut rng);
                let cp = m.char_poly().unwrap();
                assert_eq!(cp.len(), n + 1);
                for a in f.elements() {
                    let det = Matrix::scalar(&f, n, a).sub(&m).det().unwrap();
                    assert_eq!(poly::eval(&f, &cp, a), det);
                }
            }
        }
    }

    #[test]
    fn char_poly_of_sparse_matrices() {
        // Zero subdiagonal entries exercise the skipped-column path.
        let f = prime_field(3).unwrap();
        let m = Matrix::block_diag(
            &f,
            &[&companion(&f, &[1, 0, 1]), &Matrix::scalar(&f, 2, 2)],
        );
        let cp = m.char_poly().unwrap();
        let expected = poly::mul(&f, &[1, 0, 1], &poly::mul(&f, &[1, 1], &[1, 1]));
        assert_eq!(cp, expected);
    }

    #[test]
    fn companion_char_poly_is_the_polynomial() {
        let f = prime_field(2).unwrap();
        let p = vec![1, 1, 0, 0, 1];
        assert_eq!(companion(&f, &p).char_poly().unwrap(), p);
    }

    #[test]
    fn mult_matrix_of_one_is_identity() {
        let k = prime_field(2).unwrap();
        let big = ext_field(&k, 4).unwrap();
        let m = mult_matrix(&FieldElement::one(&big), &k).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn mult_matrix_order_five_over_gf2() {
        let k = prime_field(2).unwrap();
        let big = ext_field(&k, 4).unwrap();
        let zeta = FieldElement::generator(&big).pow(3);
        let m = mult_matrix(&zeta, &k).unwrap();
        assert_eq!(m.order_dividing(15), Some(5));
        assert!(poly::is_irreducible(&k, &m.char_poly().unwrap()));
    }

    #[test]
    fn mult_matrix_order_seven_over_gf9() {
        let k = make_field(3, 2).unwrap();
        let big = ext_field(&k, 3).unwrap();
        assert_eq!(big.order(), 729);
        let zeta = FieldElement::generator(&big).pow(728 / 7);
        let m = mult_matrix(&zeta, &k).unwrap();
        assert_eq!(m.rows(), 3);
        assert_eq!(m.order_dividing(728), Some(7));
    }

    #[test]
    fn mult_matrix_is_a_ring_homomorphism() {
        let k = make_field(2, 2).unwrap();
        let big = ext_field(&k, 3).unwrap();
        for a in [3u32, 17, 40] {
            for b in [5u32, 22, 63] {
                let x = FieldElement::new(&big, a).unwrap();
                let y = FieldElement::new(&big, b).unwrap();
                let lhs = mult_matrix(&x.mul(&y), &k).unwrap();
                let rhs = mult_matrix(&x, &k).unwrap().mul(&mult_matrix(&y, &k).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k = make_field(3, 2).unwrap();
        let m = random_matrix(&k, 3, 4, &mut rng);
        assert_eq!(Matrix::from_text(&m.to_text()).unwrap(), m);
        let t = ext_field(&k, 2).unwrap();
        let m = random_matrix(&t, 2, 2, &mut rng);
        assert_eq!(Matrix::from_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn pack_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for q in [2u64, 3, 4, 9, 16, 81] {
            let f = field_of_order(q).unwrap();
            let m = random_matrix(&f, 6, 6, &mut rng);
            let key = m.pack();
            assert_eq!(Matrix::unpack(&f, 6, 6, &key), m);
        }
    }

    #[test]
    fn mismatched_product_is_an_error() {
        let f = prime_field(2).unwrap();
        let a = Matrix::zero(&f, 2, 3);
        assert!(matches!(a.checked_mul(&a), Err(MatError::Dimension(_))));
        let g = prime_field(3).unwrap();
        let b = Matrix::zero(&g, 3, 2);
        assert_eq!(a.checked_mul(&b), Err(MatError::FieldMismatch));
    }
}
