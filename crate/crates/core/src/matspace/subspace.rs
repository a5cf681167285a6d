use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::{MatError, Matrix};
use crate::gfield::{poly, Fe, FieldSpec};

/// A subspace of `F^ambient`, stored as the reduced row echelon basis.
#[derive(Clone)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}
impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.dim(), self.ambient)?;
        f.debug_list().entries(self.basis.row_vecs()).finish()
    }
}

impl Subspace {
    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let (r, pivots) = m.rref();
        let k = pivots.len();
        let basis = Matrix::from_vec(r.field(), k, m.cols(), r.data()[..k * m.cols()].to_vec())
            .expect("prefix of an rref");
        Subspace {
            ambient: m.cols(),
            basis,
            pivots,
        }
    }

    pub fn from_vectors(field: &Arc<FieldSpec>, ambient: usize, vectors: &[Vec<Fe>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        Self::row_space(&Matrix::from_rows(field, vectors).expect("vectors of equal length"))
    }

    pub fn zero(field: &Arc<FieldSpec>, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zero(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &Arc<FieldSpec>, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.ambient
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coords(&self, v: &[Fe]) -> Option<Vec<Fe>> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let c: Vec<Fe> = self.pivots.iter().map(|&p| v[p]).collect();
        (self.basis.vec_mul(&c) == v).then_some(c)
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.row_vecs().iter().all(|v| self.contains(v))
    }

    fn check(&self, other: &Subspace) -> Result<(), MatError> {
        if self.field().id() != other.field().id() {
            return Err(MatError::FieldMismatch);
        }
        if self.ambient != other.ambient {
            return Err(MatError::Dimension(format!(
                "ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, MatError> {
        self.check(other)?;
        let mut rows = self.basis.row_vecs();
        rows.extend(other.basis.row_vecs());
        Ok(Self::from_vectors(self.field(), self.ambient, &rows))
    }

    /// Intersection by the Zassenhaus algorithm.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, MatError> {
        self.check(other)?;
        let d = self.ambient;
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for v in self.basis.row_vecs() {
            let mut r = v.clone();
            r.extend(v);
            rows.push(r);
        }
        for v in other.basis.row_vecs() {
            let mut r = v;
            r.extend(std::iter::repeat(0).take(d));
            rows.push(r);
        }
        if rows.is_empty() {
            return Ok(Self::zero(self.field(), d));
        }
        let (r, pivots) = Matrix::from_rows(self.field(), &rows)?.rref();
        let inter: Vec<Vec<Fe>> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= d)
            .map(|(i, _)| r.row(i)[d..].to_vec())
            .collect();
        let out = Self::from_vectors(self.field(), d, &inter);
        debug_assert_eq!(
            self.sum(other)?.dim() + out.dim(),
            self.dim() + other.dim(),
            "modular law"
        );
        Ok(out)
    }

    /// The image `S·M`.
    pub fn image(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient, "matrix size");
        Self::row_space(&self.basis.mul(m))
    }

    pub fn is_invariant(&self, m: &Matrix) -> bool {
        self.basis.row_vecs().iter().all(|v| self.contains(&m.vec_mul(v)))
    }

    /// Matrix of `m` restricted to this invariant subspace, in the echelon basis.
    pub fn restrict(&self, m: &Matrix) -> Result<Matrix, MatError> {
        if !m.is_square() || m.rows() != self.ambient {
            return Err(MatError::Dimension("operator size".into()));
        }
        let rows = self
            .basis
            .row_vecs()
            .iter()
            .map(|v| self.coords(&m.vec_mul(v)).ok_or(MatError::NotInvariant))
            .collect::<Result<Vec<_>, _>>()?;
        if rows.is_empty() {
            return Ok(Matrix::zero(self.field(), 0, 0));
        }
        Matrix::from_rows(self.field(), &rows)
    }

    /// A basis of a complement, taken from standard basis vectors.
    pub fn complement(&self) -> Subspace {
        let rows: Vec<Vec<Fe>> = (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| {
                let mut v = vec![0; self.ambient];
                v[c] = 1;
                v
            })
            .collect();
        Self::from_vectors(self.field(), self.ambient, &rows)
    }
}

/// Fixed space `{v : vM = v}`.
pub fn fixed_space(m: &Matrix) -> Subspace {
    m.minus_identity().left_nullspace()
}

/// Commutator space `[V, M] = ⟨vM − v⟩`.
pub fn commutator_space(m: &Matrix) -> Subspace {
    Subspace::row_space(&m.minus_identity())
}

/// Whether `m` acts irreducibly on the invariant subspace `s`, decided by
/// irreducibility of the characteristic polynomial of the restriction.
pub fn is_irreducible_on(m: &Matrix, s: &Subspace) -> Result<bool, MatError> {
    let r = s.restrict(m)?;
    if r.rows() == 0 {
        return Ok(false);
    }
    Ok(poly::is_irreducible(m.field(), &r.char_poly()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::{field_of_order, prime_field};
    use crate::matspace::companion;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_subspace(f: &Arc<FieldSpec>, d: usize, k: usize, rng: &mut impl Rng) -> Subspace {
        let rows: Vec<Vec<Fe>> = (0..k)
            .map(|_| (0..d).map(|_| rng.gen_range(0..f.order()) as Fe).collect())
            .collect();
        Subspace::from_vectors(f, d, &rows)
    }

    fn all_vectors(q: u64, d: usize) -> impl Iterator<Item = Vec<Fe>> {
        (0..q.pow(d as u32)).map(move |mut c| {
            (0..d)
                .map(|_| {
                    let x = (c % q) as Fe;
                    c /= q;
                    x
                })
                .collect()
        })
    }

    #[test]
    fn equal_spaces_sum_and_meet_to_themselves() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let f = prime_field(5).unwrap();
        let a = random_subspace(&f, 5, 3, &mut rng);
        assert_eq!(a.sum(&a).unwrap(), a);
        assert_eq!(a.intersection(&a).unwrap(), a);
    }

    #[test]
    fn complementary_spaces_meet_trivially() {
        let f = prime_field(3).unwrap();
        let a = Subspace::from_vectors(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let b = Subspace::from_vectors(&f, 4, &[vec![0, 0, 1, 0], vec![1, 1, 1, 1]]);
        assert!(a.intersection(&b).unwrap().is_zero());
        assert!(a.sum(&b).unwrap().is_full());
        assert!(a.complement().sum(&a).unwrap().is_full());
    }

    #[test]
    fn sum_and_intersection_match_enumeration_in_gf3_4() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = prime_field(3).unwrap();
        for _ in 0..30 {
            let a = random_subspace(&f, 4, 2, &mut rng);
            let b = random_subspace(&f, 4, 2, &mut rng);
            let inter = a.intersection(&b).unwrap();
            let sum = a.sum(&b).unwrap();
            let members_a: Vec<Vec<Fe>> = all_vectors(3, 4).filter(|v| a.contains(v)).collect();
            let members_b: Vec<Vec<Fe>> = all_vectors(3, 4).filter(|v| b.contains(v)).collect();
            let common = members_a.iter().filter(|v| members_b.contains(v)).count();
            assert_eq!(common as u64, 3u64.pow(inter.dim() as u32));
            // Every a + b lies in the sum, and the sum has exactly that many vectors.
            let mut sums = std::collections::HashSet::new();
            for x in &members_a {
                for y in &members_b {
                    let s: Vec<Fe> = x.iter().zip(y).map(|(&p, &q)| f.add(p, q)).collect();
                    sums.insert(s);
                }
            }
            assert_eq!(sums.len() as u64, 3u64.pow(sum.dim() as u32));
            assert!(sums.iter().all(|v| sum.contains(v)));
        }
    }

    #[test]
    fn fixed_and_commutator_of_identity() {
        let f = prime_field(2).unwrap();
        let i = Matrix::identity(&f, 4);
        assert!(fixed_space(&i).is_full());
        assert!(commutator_space(&i).is_zero());
    }

    #[test]
    fn diagonal_eigenspace_split() {
        let f = prime_field(5).unwrap();
        let mut m = Matrix::identity(&f, 4);
        m.set(2, 2, 4);
        m.set(3, 3, 4);
        assert_eq!(fixed_space(&m).dim(), 2);
        assert_eq!(commutator_space(&m).dim(), 2);
    }

    #[test]
    fn irreducibility_on_subspaces() {
        let f = prime_field(2).unwrap();
        let c = companion(&f, &[1, 1, 0, 0, 1]);
        assert!(is_irreducible_on(&c, &Subspace::full(&f, 4)).unwrap());
        let i = Matrix::identity(&f, 3);
        let s = Subspace::from_vectors(&f, 3, &[vec![1, 0, 0], vec![0, 1, 1]]);
        assert!(!is_irreducible_on(&i, &s).unwrap());
        let t = Subspace::from_vectors(&f, 4, &[vec![1, 0, 0, 0]]);
        assert_eq!(is_irreducible_on(&c, &t), Err(MatError::NotInvariant));
    }

    #[test]
    fn restriction_intertwines() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let f = field_of_order(4).unwrap();
        let c = companion(&f, &[2, 1, 1]);
        let m = Matrix::block_diag(&f, &[&c, &Matrix::scalar(&f, 2, 3)]);
        let s = Subspace::from_vectors(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let r = s.restrict(&m).unwrap();
        for _ in 0..10 {
            let a: Vec<Fe> = (0..2).map(|_| rng.gen_range(0..4)).collect();
            let v = s.basis().vec_mul(&a);
            assert_eq!(m.vec_mul(&v), s.basis().vec_mul(&r.vec_mul(&a)));
        }
    }
}
