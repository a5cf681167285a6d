//! Symplectic, hermitian and quadratic forms.
//!
//! A form on `F^d` is given by its Gram matrix `G`, with
//! `B(x, y) = x G σ(y)ᵀ` where `σ` is `x ↦ x^q` on GF(q²) for hermitian forms
//! and the identity otherwise. A quadratic form additionally stores the upper
//! triangular coefficients `A` with `Q(x) = Σ_{i≤j} A_ij x_i x_j`; its Gram
//! matrix is the polarization `A + Aᵀ`.

mod solve;
mod standardize;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clgroup::GroupType;
use crate::gfield::{ext_field, field_of_order, Fe, FieldError, FieldSpec};
use crate::matspace::{MatError, Matrix, Subspace};

pub use solve::{invariant_form_space, invariant_form_solve, pinned_quadratic_solve, FormSolve};
pub use standardize::standardize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("form is degenerate")]
    Degenerate,
    #[error("dimension {0} must be even")]
    OddDimension(usize),
    #[error("invalid standard form request: {0}")]
    Invalid(String),
    #[error("matrix is not an isometry of the form")]
    NotIsometry,
    #[error("operation needs a {0} form")]
    WrongKind(&'static str),
    #[error("operation needs even characteristic")]
    OddCharacteristic,
    #[error("malformed form data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormKind {
    Symplectic,
    Hermitian,
    Quadratic,
}

impl FormKind {
    fn tag(self) -> &'static str {
        match self {
            FormKind::Symplectic => "symplectic",
            FormKind::Hermitian => "hermitian",
            FormKind::Quadratic => "quadratic",
        }
    }
}

/// The type ε of an orthogonal space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// How an orthogonal type was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeWitness {
    /// Arf invariant (even characteristic), as a field code.
    Arf(Fe),
    /// Whether `(−1)^k det(B)` is a square (odd characteristic).
    Discriminant { square: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthType {
    pub sign: Sign,
    pub witness: TypeWitness,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FormSpec {
    kind: FormKind,
    gram: Matrix,
    quad: Option<Matrix>,
}

impl fmt::Debug for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} form {:?}", self.kind.tag(), self.gram)
    }
}

/// Entries of `M` folded onto the upper triangle: `(i, j)` with `i < j`
/// collects `M_ij + M_ji`.
pub(crate) fn upper_fold(m: &Matrix) -> Matrix {
    let f = m.field();
    let d = m.rows();
    let mut out = Matrix::zero(f, d, d);
    for i in 0..d {
        out.set(i, i, m.get(i, i));
        for j in i + 1..d {
            out.set(i, j, f.add(m.get(i, j), m.get(j, i)));
        }
    }
    out
}

fn polarization(a: &Matrix) -> Matrix {
    a.add(&a.transpose())
}

impl FormSpec {
    pub fn symplectic(gram: Matrix) -> Result<Self, FormError> {
        let f = gram.field().clone();
        let d = gram.rows();
        if !gram.is_square() {
            return Err(MatError::NotSquare.into());
        }
        for i in 0..d {
            if gram.get(i, i) != 0 {
                return Err(FormError::Malformed("nonzero diagonal".into()));
            }
            for j in 0..i {
                if gram.get(i, j) != f.neg(gram.get(j, i)) {
                    return Err(FormError::Malformed("not alternating".into()));
                }
            }
        }
        Ok(FormSpec {
            kind: FormKind::Symplectic,
            gram,
            quad: None,
        })
    }

    /// A hermitian form over GF(q²); the field must be a quadratic extension.
    pub fn hermitian(gram: Matrix) -> Result<Self, FormError> {
        if !gram.is_square() {
            return Err(MatError::NotSquare.into());
        }
        if gram.field().rel_degree() != 2 {
            return Err(FormError::Malformed(
                "hermitian forms live over a quadratic extension".into(),
            ));
        }
        let form = FormSpec {
            kind: FormKind::Hermitian,
            gram,
            quad: None,
        };
        if form.conj_transpose(&form.gram) != form.gram {
            return Err(FormError::Malformed("Gram is not hermitian".into()));
        }
        Ok(form)
    }

    /// A quadratic form from its coefficient matrix; entries below the
    /// diagonal are folded upward.
    pub fn quadratic(coeffs: Matrix) -> Result<Self, FormError> {
        if !coeffs.is_square() {
            return Err(MatError::NotSquare.into());
        }
        let quad = upper_fold(&coeffs);
        Ok(FormSpec {
            kind: FormKind::Quadratic,
            gram: polarization(&quad),
            quad: Some(quad),
        })
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.gram.field()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Upper triangular coefficients of `Q` (quadratic forms only).
    pub fn quad(&self) -> Option<&Matrix> {
        self.quad.as_ref()
    }

    /// The field automorphism attached to the form.
    pub fn sigma(&self, x: Fe) -> Fe {
        match self.kind {
            FormKind::Hermitian => {
                let k = self.field().base().expect("quadratic extension").order();
                self.field().pow(x, k)
            }
            _ => x,
        }
    }

    fn conj_transpose(&self, m: &Matrix) -> Matrix {
        m.transpose().map(|_, x| self.sigma(x))
    }

    pub fn bilinear(&self, x: &[Fe], y: &[Fe]) -> Fe {
        let f = self.field();
        let xg = self.gram.vec_mul(x);
        xg.iter()
            .zip(y)
            .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, self.sigma(b))))
    }

    /// `Q(x)` for quadratic forms; `B(x, x)` otherwise.
    pub fn value(&self, x: &[Fe]) -> Fe {
        let Some(a) = &self.quad else {
            return self.bilinear(x, x);
        };
        let f = self.field();
        let d = self.dim();
        let mut acc = 0;
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            let mut row = 0;
            for j in i..d {
                row = f.add(row, f.mul(a.get(i, j), x[j]));
            }
            acc = f.add(acc, f.mul(x[i], row));
        }
        acc
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.det().map_or(false, |d| d != 0)
    }

    /// The form in the basis given by the rows of `p`: Gram `P G σ(P)ᵀ`.
    pub fn transport(&self, p: &Matrix) -> FormSpec {
        let gram = p.mul(&self.gram).mul(&self.conj_transpose(p));
        let quad = self
            .quad
            .as_ref()
            .map(|a| upper_fold(&p.mul(a).mul(&p.transpose())));
        FormSpec {
            kind: self.kind,
            gram,
            quad,
        }
    }

    /// Restriction to a subspace, in its echelon basis.
    pub fn restrict(&self, s: &Subspace) -> FormSpec {
        self.transport(s.basis())
    }

    /// `{v : B(v, s) = 0 for all s ∈ S}`.
    pub fn perp(&self, s: &Subspace) -> Subspace {
        if s.dim() == 0 {
            return Subspace::full(self.field(), self.dim());
        }
        self.gram
            .mul(&self.conj_transpose(s.basis()))
            .left_nullspace()
    }

    pub fn is_isometry(&self, m: &Matrix) -> bool {
        if !m.is_square() || m.rows() != self.dim() || m.field().id() != self.field().id() {
            return false;
        }
        if m.mul(&self.gram).mul(&self.conj_transpose(m)) != self.gram {
            return false;
        }
        match &self.quad {
            Some(a) => upper_fold(&m.mul(a).mul(&m.transpose())) == *a,
            None => true,
        }
    }

    /// Kind tag line followed by the Gram matrix and, for quadratic forms, the
    /// coefficient matrix, each in the matrix text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n{}", self.kind.tag(), self.gram.to_text());
        if let Some(a) = &self.quad {
            s.push_str("---\n");
            s.push_str(&a.to_text());
        }
        s
    }

    pub fn from_text(text: &str) -> Result<FormSpec, FormError> {
        let (tag, rest) = text
            .trim_start()
            .split_once('\n')
            .ok_or_else(|| FormError::Malformed("missing kind tag".into()))?;
        match tag.trim() {
            "symplectic" => FormSpec::symplectic(Matrix::from_text(rest)?),
            "hermitian" => FormSpec::hermitian(Matrix::from_text(rest)?),
            "quadratic" => {
                let (_, quad) = rest
                    .split_once("---\n")
                    .ok_or_else(|| FormError::Malformed("missing coefficients".into()))?;
                FormSpec::quadratic(Matrix::from_text(quad)?)
            }
            other => Err(FormError::Malformed(format!("unknown kind {other}"))),
        }
    }
}

/// The least ν for which `x² + x + ν` is irreducible over `f`.
pub fn anisotropic_nu(f: &FieldSpec) -> Fe {
    f.elements()
        .find(|&nu| f.elements().all(|x| f.add(f.add(f.mul(x, x), x), nu) != 0))
        .expect("an irreducible quadratic exists")
}

/// Field over which `X` acts: GF(q) or, for SU, GF(q²) as a quadratic
/// extension of GF(q).
pub fn group_field(x: GroupType, q: u64) -> Result<Arc<FieldSpec>, FormError> {
    let k = field_of_order(q)?;
    match x {
        GroupType::SU => Ok(ext_field(&k, 2)?),
        _ => Ok(k),
    }
}

/// The standard form of the given type on a space of dimension `dim`.
///
/// Symplectic and orthogonal forms use hyperbolic pairs `(e_i, f_i)` at
/// positions `(i, dim−1−i)`; the minus type replaces the central pair by the
/// anisotropic plane `x² + xy + νy²`. The hermitian form is the identity.
pub fn standard_form(x: GroupType, dim: usize, q: u64) -> Result<FormSpec, FormError> {
    let f = group_field(x, q)?;
    if x == GroupType::SL {
        return Err(FormError::Invalid("SL preserves no form".into()));
    }
    if x != GroupType::SU && dim % 2 == 1 {
        return Err(FormError::OddDimension(dim));
    }
    if dim == 0 {
        return Err(FormError::Invalid("dimension 0".into()));
    }
    let half = dim / 2;
    match x {
        GroupType::SU => FormSpec::hermitian(Matrix::identity(&f, dim)),
        GroupType::Sp => {
            let mut g = Matrix::zero(&f, dim, dim);
            for i in 0..half {
                g.set(i, dim - 1 - i, 1);
                g.set(dim - 1 - i, i, f.neg(1));
            }
            FormSpec::symplectic(g)
        }
        GroupType::SOPlus | GroupType::SOMinus => {
            let mut a = Matrix::zero(&f, dim, dim);
            for i in 0..half {
                a.set(i, dim - 1 - i, 1);
            }
            if x == GroupType::SOMinus {
                let c = half - 1;
                a.set(c, c, 1);
                a.set(c, c + 1, 1);
                a.set(c + 1, c + 1, anisotropic_nu(&f));
            }
            FormSpec::quadratic(a)
        }
        GroupType::SL => unreachable!(),
    }
}

fn is_square(f: &FieldSpec, x: Fe) -> bool {
    x == 0 || f.pow(x, (f.order() - 1) / 2) == 1
}

/// Absolute trace to GF(2) in characteristic 2.
fn abs_trace(f: &FieldSpec, x: Fe) -> Fe {
    let mut acc = 0;
    let mut c = x;
    for _ in 0..f.degree() {
        acc = f.add(acc, c);
        c = f.mul(c, c);
    }
    acc
}

/// Type ε of a nondegenerate even-dimensional quadratic form.
pub fn orth_type(form: &FormSpec) -> Result<OrthType, FormError> {
    if form.kind != FormKind::Quadratic {
        return Err(FormError::WrongKind("quadratic"));
    }
    let d = form.dim();
    if d % 2 == 1 {
        return Err(FormError::OddDimension(d));
    }
    if !form.is_nondegenerate() {
        return Err(FormError::Degenerate);
    }
    let f = form.field();
    let k = (d / 2) as u64;
    if f.characteristic() == 2 {
        let pairs = standardize::symplectic_pairs(form)?;
        let arf = pairs.iter().fold(0, |acc, (e, fv)| {
            f.add(acc, f.mul(form.value(e), form.value(fv)))
        });
        let sign = if abs_trace(f, arf) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        };
        Ok(OrthType {
            sign,
            witness: TypeWitness::Arf(arf),
        })
    } else {
        let det = form.gram.det()?;
        let disc = if k % 2 == 1 { f.neg(det) } else { det };
        let square = is_square(f, disc);
        Ok(OrthType {
            sign: if square { Sign::Plus } else { Sign::Minus },
            witness: TypeWitness::Discriminant { square },
        })
    }
}

/// Number of nonzero singular vectors, by enumeration.
pub fn count_singular(form: &FormSpec) -> u64 {
    let f = form.field();
    let q = f.order();
    let d = form.dim();
    let mut v = vec![0; d];
    let mut count = 0;
    for code in 1..q.pow(d as u32) {
        let mut c = code;
        for x in v.iter_mut() {
            *x = (c % q) as Fe;
            c /= q;
        }
        if form.value(&v) == 0 {
            count += 1;
        }
    }
    count
}

/// `(q^k − ε)(q^{k−1} + ε)`, the number of nonzero singular vectors of a
/// 2k-dimensional quadratic space of type ε.
pub fn singular_count_formula(q: u64, k: u32, sign: Sign) -> i128 {
    let e = sign.as_i64() as i128;
    let q = q as i128;
    (q.pow(k) - e) * (q.pow(k - 1) + e)
}

/// Dickson invariant `rank(M − I) mod 2` of an isometry in even characteristic.
pub fn dickson_invariant(m: &Matrix, form: &FormSpec) -> Result<u8, FormError> {
    if form.kind != FormKind::Quadratic {
        return Err(FormError::WrongKind("quadratic"));
    }
    if form.field().characteristic() != 2 {
        return Err(FormError::OddCharacteristic);
    }
    if !form.is_isometry(m) {
        return Err(FormError::NotIsometry);
    }
    Ok((m.minus_identity().rank() % 2) as u8)
}

/// Orthogonal sum of two forms of the same kind, on the direct sum of spaces.
pub fn orthogonal_sum(a: &FormSpec, b: &FormSpec) -> Result<FormSpec, FormError> {
    if a.kind != b.kind || a.field().id() != b.field().id() {
        return Err(FormError::Malformed("mismatched summands".into()));
    }
    let f = a.field();
    let gram = Matrix::block_diag(f, &[&a.gram, &b.gram]);
    let quad = match (&a.quad, &b.quad) {
        (Some(x), Some(y)) => Some(Matrix::block_diag(f, &[x, y])),
        _ => None,
    };
    Ok(FormSpec {
        kind: a.kind,
        gram,
        quad,
    })
}
