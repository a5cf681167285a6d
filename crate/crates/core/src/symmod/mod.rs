//! The fully deleted permutation module `U = W/(W∩E)` of `S_ℓ` over GF(p),
//! the signed permutation action on it, the fixed-vector parameterization
//! and closed-form fixed-point dimensions.

mod audit;

use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::gfield::{prime_field, Fe, FieldError, FieldSpec};
use crate::matspace::Matrix;
use crate::numth;
use crate::ppdgood::PpdError;

pub use audit::{
    c9_alt_contribution, embedding_for, good_cycle_type_audit, partitions, AltContribution,
    CycleTypeVerdict, Embedding, GoodTypeAudit,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("permutation length {0} is below 2")]
    Length(usize),
    #[error("not a permutation of {0} points")]
    BadPermutation(usize),
    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error("sign -1 is only used in odd characteristic")]
    SignInCharTwo,
    #[error("vector does not lie in the sum-zero subspace W")]
    NotInW,
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("p={p}, ℓ={ell} lies outside both closed-form regimes")]
    Regime { p: u64, ell: usize },
    #[error("unsupported configuration: {0}")]
    Configuration(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Ppd(#[from] PpdError),
}

/// A permutation of `{0, …, ℓ−1}` times a sign `a = ±1`.
///
/// Each cycle is stored starting from its least point and listed in the
/// order `c, c^g, c^{g²}, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPerm {
    images: Vec<usize>,
    sign: i8,
    cycles: Vec<Vec<usize>>,
}

impl SignedPerm {
    /// `images[i]` is the image of point `i`.
    pub fn new(images: Vec<usize>, sign: i8) -> Result<Self, SymError> {
        let ell = images.len();
        if sign != 1 && sign != -1 {
            return Err(SymError::BadSign(sign));
        }
        let mut seen = vec![false; ell];
        for &j in &images {
            if j >= ell || seen[j] {
                return Err(SymError::BadPermutation(ell));
            }
            seen[j] = true;
        }
        let mut done = vec![false; ell];
        let mut cycles = Vec::new();
        for start in 0..ell {
            if done[start] {
                continue;
            }
            let mut cycle = vec![start];
            done[start] = true;
            let mut j = images[start];
            while j != start {
                cycle.push(j);
                done[j] = true;
                j = images[j];
            }
            cycles.push(cycle);
        }
        Ok(SignedPerm {
            images,
            sign,
            cycles,
        })
    }

    /// The permutation whose cycles are consecutive blocks of the given
    /// lengths, `(1 … k₁)(k₁+1 … k₁+k₂)…` in 1-based terms.
    pub fn from_cycle_type(lengths: &[usize], sign: i8) -> Result<Self, SymError> {
        let mut images = Vec::with_capacity(lengths.iter().sum());
        for &k in lengths {
            if k == 0 {
                return Err(SymError::BadPermutation(images.len()));
            }
            let base = images.len();
            images.extend((1..k).map(|j| base + j));
            images.push(base);
        }
        SignedPerm::new(images, sign)
    }

    pub fn identity(ell: usize) -> Self {
        SignedPerm::new((0..ell).collect(), 1).expect("identity is a permutation")
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    /// The number `s` of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    /// `I₁`: the number of cycles whose length is prime to `p`.
    pub fn i1(&self, p: u64) -> usize {
        self.cycles.iter().filter(|c| c.len() as u64 % p != 0).count()
    }

    /// `I₂`: the number of cycles of length `2 mod 4`.
    pub fn i2(&self) -> usize {
        self.cycles.iter().filter(|c| c.len() % 4 == 2).count()
    }

    /// `I₃`: the number of cycles of odd length.
    pub fn i3(&self) -> usize {
        self.cycles.iter().filter(|c| c.len() % 2 == 1).count()
    }

    /// The order of the underlying permutation.
    pub fn perm_order(&self) -> u64 {
        self.cycles.iter().fold(1, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// The order of `a·g` in `Z × S_ℓ` over a field of characteristic `p`.
    pub fn order(&self, p: u64) -> u64 {
        let o = self.perm_order();
        if self.sign == -1 && p != 2 {
            o.lcm(&2)
        } else {
            o
        }
    }
}

/// A vector `Σᵢ v(i, aᵢ, a, b)` with the per-cycle fixing condition
/// `(1+a+⋯+a^{kᵢ−1})((a−1)aᵢ+b) = 0` evaluated for each cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyVector {
    pub vector: Vec<Fe>,
    pub cycle_conditions: Vec<bool>,
    pub in_w: bool,
}

/// Which closed form describes fixed-point dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `p | ℓ = 2n+2`: `U = W/E`.
    DividesEven,
    /// `p ∤ ℓ = 2n+1`: `U ≅ W`.
    CoprimeOdd,
}

/// The fully deleted permutation module of `S_ℓ` over GF(p).
///
/// Cosets are represented by vectors of `W`; when `E ⊆ W` the canonical
/// representative is the member with first coordinate 0.
#[derive(Debug, Clone)]
pub struct DeletedModule {
    ell: usize,
    p: u64,
    field: Arc<FieldSpec>,
}

impl DeletedModule {
    pub fn new(ell: usize, p: u64) -> Result<Self, SymError> {
        if !numth::is_prime(p) {
            return Err(SymError::NotPrime(p));
        }
        if ell < 2 {
            return Err(SymError::Length(ell));
        }
        Ok(DeletedModule {
            ell,
            p,
            field: prime_field(p)?,
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// Whether `E ⊆ W`, that is, whether `p | ℓ`.
    pub fn e_in_w(&self) -> bool {
        self.ell as u64 % self.p == 0
    }

    /// `dim U`: ℓ−2 if `p | ℓ`, else ℓ−1.
    pub fn dim(&self) -> usize {
        if self.e_in_w() {
            self.ell - 2
        } else {
            self.ell - 1
        }
    }

    pub fn regime(&self) -> Result<Regime, SymError> {
        match (self.e_in_w(), self.ell % 2) {
            (true, 0) => Ok(Regime::DividesEven),
            (false, 1) => Ok(Regime::CoprimeOdd),
            _ => Err(SymError::Regime {
                p: self.p,
                ell: self.ell,
            }),
        }
    }

    /// `n` with `ℓ = 2n+1` or `ℓ = 2n+2`.
    pub fn half_rank(&self) -> usize {
        (self.ell - 1) / 2
    }

    fn sum(&self, v: &[Fe]) -> Fe {
        v.iter().fold(0, |acc, &x| self.field.add(acc, x))
    }

    fn check_len(&self, v: &[Fe]) -> Result<(), SymError> {
        if v.len() != self.ell {
            return Err(SymError::WrongLength {
                expected: self.ell,
                got: v.len(),
            });
        }
        Ok(())
    }

    fn sign_scalar(&self, sp: &SignedPerm) -> Result<Fe, SymError> {
        if sp.len() != self.ell {
            return Err(SymError::WrongLength {
                expected: self.ell,
                got: sp.len(),
            });
        }
        match sp.sign {
            1 => Ok(1),
            _ if self.p == 2 => Err(SymError::SignInCharTwo),
            _ => Ok(self.field.neg(1)),
        }
    }

    pub fn in_w(&self, v: &[Fe]) -> bool {
        v.len() == self.ell && self.sum(v) == 0
    }

    /// The canonical representative of `v + W∩E`.
    pub fn reduce(&self, v: &[Fe]) -> Result<Vec<Fe>, SymError> {
        self.check_len(v)?;
        if !self.in_w(v) {
            return Err(SymError::NotInW);
        }
        if !self.e_in_w() {
            return Ok(v.to_vec());
        }
        let c = v[0];
        Ok(v.iter().map(|&x| self.field.sub(x, c)).collect())
    }

    /// The basis vector `vᵢ = e_i − e_{i+1}` (0-based `i`).
    pub fn basis_vector(&self, i: usize) -> Vec<Fe> {
        let mut v = vec![0; self.ell];
        v[i] = 1;
        v[i + 1] = self.field.neg(1);
        v
    }

    pub fn basis(&self) -> Vec<Vec<Fe>> {
        (0..self.dim()).map(|i| self.basis_vector(i)).collect()
    }

    /// Coordinates of `v + W∩E` in the basis `v₁, …, v_m`.
    pub fn coordinates(&self, v: &[Fe]) -> Result<Vec<Fe>, SymError> {
        self.check_len(v)?;
        if !self.in_w(v) {
            return Err(SymError::NotInW);
        }
        let shift = if self.e_in_w() { v[self.ell - 1] } else { 0 };
        let mut acc = 0;
        Ok((0..self.dim())
            .map(|i| {
                acc = self.field.add(acc, self.field.sub(v[i], shift));
                acc
            })
            .collect())
    }

    /// `a·v·g` on the ambient space, with `e_i g = e_{g(i)}`.
    pub fn act_ambient(&self, sp: &SignedPerm, v: &[Fe]) -> Result<Vec<Fe>, SymError> {
        self.check_len(v)?;
        let a = self.sign_scalar(sp)?;
        let mut out = vec![0; self.ell];
        for (i, &x) in v.iter().enumerate() {
            out[sp.image(i)] = self.field.mul(a, x);
        }
        Ok(out)
    }

    /// The action of `a·g` on a coset, returned as its canonical representative.
    pub fn act(&self, sp: &SignedPerm, u: &[Fe]) -> Result<Vec<Fe>, SymError> {
        self.check_len(u)?;
        if !self.in_w(u) {
            return Err(SymError::NotInW);
        }
        self.reduce(&self.act_ambient(sp, u)?)
    }

    /// The matrix of `a·g` on `U` in the basis `v₁, …, v_m` (row convention).
    pub fn action_matrix(&self, sp: &SignedPerm) -> Result<Matrix, SymError> {
        let rows = self
            .basis()
            .iter()
            .map(|b| self.coordinates(&self.act_ambient(sp, b)?))
            .collect::<Result<Vec<_>, _>>()?;
        if rows.is_empty() {
            return Ok(Matrix::zero(&self.field, 0, 0));
        }
        Ok(Matrix::from_rows(&self.field, &rows).expect("rows have equal length"))
    }

    /// `Σᵢ v(i, aᵢ, a, b)`: on cycle `i` the coefficients run
    /// `aᵢ, a·aᵢ+b, a(a·aᵢ+b)+b, …` along the cycle.
    pub fn fixed_vector_family(
        &self,
        sp: &SignedPerm,
        a_params: &[Fe],
        b: Fe,
    ) -> Result<FamilyVector, SymError> {
        let a = self.sign_scalar(sp)?;
        if a_params.len() != sp.cycle_count() {
            return Err(SymError::WrongLength {
                expected: sp.cycle_count(),
                got: a_params.len(),
            });
        }
        let f = &self.field;
        let mut vector = vec![0; self.ell];
        let mut cycle_conditions = Vec::with_capacity(sp.cycle_count());
        for (cycle, &ai) in sp.cycles().iter().zip(a_params) {
            let mut c = ai;
            let mut geometric = 0;
            let mut a_pow = 1;
            for &point in cycle {
                vector[point] = c;
                c = f.add(f.mul(a, c), b);
                geometric = f.add(geometric, a_pow);
                a_pow = f.mul(a_pow, a);
            }
            let inner = f.add(f.mul(f.sub(a, 1), ai), b);
            cycle_conditions.push(f.mul(geometric, inner) == 0);
        }
        let in_w = self.sum(&vector) == 0;
        Ok(FamilyVector {
            vector,
            cycle_conditions,
            in_w,
        })
    }

    /// Whether `v ∈ W` and `a·v·g = v − b·e`, with `b = 0` forced when
    /// `W∩E = 0`. This is "v ∈ W and v + W∩E fixed by ag" with `b` as witness.
    pub fn fixed_with_witness(&self, sp: &SignedPerm, v: &[Fe], b: Fe) -> Result<bool, SymError> {
        if !self.in_w(v) || (!self.e_in_w() && b != 0) {
            return Ok(false);
        }
        let image = self.act_ambient(sp, v)?;
        Ok(image
            .iter()
            .zip(v)
            .all(|(&x, &y)| x == self.field.sub(y, b)))
    }

    /// The closed-form conditions on `(aᵢ, b)` under which
    /// `Σ v(i, aᵢ, a, b)` lies in `W` and is fixed by `a·g` modulo `W∩E`.
    pub fn fixed_conditions(&self, sp: &SignedPerm, a_params: &[Fe], b: Fe) -> Result<bool, SymError> {
        self.sign_scalar(sp)?;
        let f = &self.field;
        let b_free = self.e_in_w() || b == 0;
        let lengths = sp.cycle_lengths();
        if sp.sign == -1 {
            let half_b = f.div(b, 2);
            let odd_ok = lengths
                .iter()
                .zip(a_params)
                .all(|(&k, &ai)| k % 2 == 0 || ai == half_b);
            return Ok(odd_ok && b_free);
        }
        if sp.i1(self.p) > 0 {
            let weighted = lengths
                .iter()
                .zip(a_params)
                .fold(0, |acc, (&k, &ai)| f.add(acc, f.mul(self.small(k), ai)));
            return Ok(b == 0 && weighted == 0);
        }
        if self.p == 2 && sp.i2() % 2 == 1 {
            return Ok(b == 0);
        }
        Ok(b_free)
    }

    fn small(&self, k: usize) -> Fe {
        (k as u64 % self.p) as Fe
    }

    /// `dim Fix_U(a·g)` as the nullity of the action matrix minus the identity.
    pub fn fix_dim_direct(&self, sp: &SignedPerm) -> Result<usize, SymError> {
        let m = self.action_matrix(sp)?;
        if m.rows() == 0 {
            return Ok(0);
        }
        Ok(m.rows() - m.minus_identity().rank())
    }

    /// `dim Fix_U(a·g)` from the closed forms: for `p | ℓ = 2n+2`,
    /// `s`, `s−2` or `s−I₃` in odd characteristic and `s`, `s−1`, `s−2` in
    /// characteristic 2; for `p ∤ ℓ = 2n+1`, `s−1` for `g` and `s−I₃` for `−g`.
    pub fn fix_dim_formula(&self, sp: &SignedPerm) -> Result<usize, SymError> {
        self.sign_scalar(sp)?;
        let s = sp.cycle_count();
        let regime = self.regime()?;
        if sp.sign == -1 {
            return Ok(s - sp.i3());
        }
        Ok(match regime {
            Regime::CoprimeOdd => s - 1,
            Regime::DividesEven if self.p != 2 => {
                if sp.i1(self.p) == 0 {
                    s
                } else {
                    s - 2
                }
            }
            Regime::DividesEven => {
                if sp.i3() > 0 {
                    s - 2
                } else if self.half_rank() % 2 == 1 {
                    s
                } else {
                    s - 1
                }
            }
        })
    }
}
