//! Classical group descriptors, order formulas, membership, uniform sampling
//! and conjugacy class enumeration.

mod orbit;
mod sample;
mod theta_bounds;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{self, dickson_invariant, FormError, FormSpec, Sign};
use crate::gfield::{FieldError, FieldSpec};
use crate::matspace::{MatError, Matrix};
use crate::numth;

pub use orbit::{
    brute_force_centralizer_order, class_orbit, class_orbit_with, orbit_generators, ClassOrbit,
    DEFAULT_CLASS_CAP,
};
pub use theta_bounds::{theta_inequality_suite, ThetaSuite, ThetaViolation};
pub use sample::{
    enumerate_general_linear, enumerate_group, enumerate_isometry_group, uniform_element,
    DEFAULT_GROUP_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("inadmissible group: {0}")]
    Inadmissible(String),
    #[error("matrix does not match the group's dimension or field")]
    Mismatch,
    #[error("enumeration of {size} items exceeds the cap {cap}")]
    CapExceeded { size: u64, cap: u64 },
    #[error("element is not in the group")]
    NotMember,
    #[error("bad Θ range: k={k}, n={n}, q={q}")]
    ThetaRange { k: u32, n: u32, q: u64 },
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The type X of a classical group `X_{2n}(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupType {
    SL,
    SU,
    Sp,
    SOPlus,
    SOMinus,
}

impl GroupType {
    pub const ALL: [GroupType; 5] = [
        GroupType::SL,
        GroupType::SU,
        GroupType::Sp,
        GroupType::SOPlus,
        GroupType::SOMinus,
    ];

    /// δ: 2 for SU, else 1.
    pub fn delta(self) -> u32 {
        if self == GroupType::SU {
            2
        } else {
            1
        }
    }

    pub fn is_orthogonal(self) -> bool {
        matches!(self, GroupType::SOPlus | GroupType::SOMinus)
    }

    /// ε for the orthogonal types.
    pub fn sign(self) -> Option<Sign> {
        match self {
            GroupType::SOPlus => Some(Sign::Plus),
            GroupType::SOMinus => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn orthogonal(sign: Sign) -> GroupType {
        match sign {
            Sign::Plus => GroupType::SOPlus,
            Sign::Minus => GroupType::SOMinus,
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupType::SL => "SL",
            GroupType::SU => "SU",
            GroupType::Sp => "Sp",
            GroupType::SOPlus => "SO+",
            GroupType::SOMinus => "SO-",
        })
    }
}

impl FromStr for GroupType {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(GroupType::SL),
            "su" => Ok(GroupType::SU),
            "sp" => Ok(GroupType::Sp),
            "so+" | "soplus" | "so_plus" => Ok(GroupType::SOPlus),
            "so-" | "sominus" | "so_minus" => Ok(GroupType::SOMinus),
            _ => Err(GroupError::Inadmissible(format!("unknown group type {s}"))),
        }
    }
}

/// A classical group `X_d(q)` acting on its natural module of dimension `d`
/// over GF(q^δ), together with its standard form.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    x: GroupType,
    dim: usize,
    q: u64,
    field: Arc<FieldSpec>,
    form: Option<FormSpec>,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.dim == other.dim && self.q == other.q
    }
}
impl Eq for GroupSpec {}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}({})", self.x, self.dim, self.q)
    }
}

impl GroupSpec {
    /// `X_{2n}(q)`.
    pub fn new(x: GroupType, n: usize, q: u64) -> Result<Self, GroupError> {
        Self::with_dim(x, 2 * n, q)
    }

    /// `X_dim(q)` for any dimension admitted by the form type.
    pub fn with_dim(x: GroupType, dim: usize, q: u64) -> Result<Self, GroupError> {
        if dim == 0 {
            return Err(GroupError::Inadmissible("dimension 0".into()));
        }
        if numth::prime_power(q).is_none() {
            return Err(GroupError::Inadmissible(format!("{q} is not a prime power")));
        }
        let field = forms::group_field(x, q)?;
        let form = match x {
            GroupType::SL => None,
            _ => Some(forms::standard_form(x, dim, q)?),
        };
        Ok(GroupSpec {
            x,
            dim,
            q,
            field,
            form,
        })
    }

    pub fn group_type(&self) -> GroupType {
        self.x
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Half the dimension.
    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn delta(&self) -> u32 {
        self.x.delta()
    }

    /// GF(q^δ).
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn form(&self) -> Option<&FormSpec> {
        self.form.as_ref()
    }

    pub fn order(&self) -> BigUint {
        let kind = match self.x {
            GroupType::SL => GroupKind::SL,
            GroupType::SU => GroupKind::SU,
            GroupType::Sp => GroupKind::Sp,
            GroupType::SOPlus => GroupKind::SO(Sign::Plus),
            GroupType::SOMinus => GroupKind::SO(Sign::Minus),
        };
        group_order(kind, self.dim as u32, self.q).expect("admissible by construction")
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(&self.field, self.dim)
    }

    /// Membership: determinant 1 and isometry of the form; for orthogonal
    /// groups in even characteristic, Dickson invariant 0 instead of det 1.
    pub fn contains(&self, m: &Matrix) -> Result<bool, GroupError> {
        if !m.is_square() || m.rows() != self.dim || m.field().id() != self.field.id() {
            return Err(GroupError::Mismatch);
        }
        if let Some(form) = &self.form {
            if !form.is_isometry(m) {
                return Ok(false);
            }
        }
        if self.x.is_orthogonal() && self.field.characteristic() == 2 {
            return Ok(dickson_invariant(m, self.form.as_ref().unwrap())? == 0);
        }
        Ok(m.det()? == 1)
    }
}

/// Descriptors accepted by [`group_order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    GL,
    SL,
    GU,
    SU,
    Sp,
    /// Full orthogonal group of even dimension and the given type.
    O(Sign),
    /// Index-2 subgroup of `O(ε)`: determinant 1 (odd q) or Dickson invariant 0 (even q).
    SO(Sign),
    /// Full orthogonal group of odd dimension.
    OOdd,
    SOOdd,
}

fn q_pow(q: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base, (-e) as usize).recip()
    }
}

/// `Θ(k, n; q) = ∏_{i=k}^n (1 − q^{−i})`, or with `−q` in place of `q` when
/// `negative` is set. `Θ(0, n; ±q) = 1`.
pub fn theta(k: u32, n: u32, q: u64, negative: bool) -> Result<BigRational, GroupError> {
    if k == 0 {
        return Ok(BigRational::one());
    }
    if q < 2 || k > n + 1 {
        return Err(GroupError::ThetaRange { k, n, q });
    }
    let mut acc = BigRational::one();
    for i in k..=n {
        let mut term = q_pow(q, -(i as i64));
        if negative && i % 2 == 1 {
            term = -term;
        }
        acc *= BigRational::one() - term;
    }
    Ok(acc)
}

fn to_integer(r: BigRational) -> BigUint {
    assert!(r.is_integer(), "group order formula gave a non-integer");
    r.to_integer().to_biguint().expect("positive order")
}

/// Exact group order from the closed formulas.
pub fn group_order(kind: GroupKind, dim: u32, q: u64) -> Result<BigUint, GroupError> {
    if dim == 0 || q < 2 {
        return Err(GroupError::Inadmissible(format!("dim {dim}, q {q}")));
    }
    let d = dim as i64;
    let even = |what: &str| {
        if dim % 2 == 0 {
            Ok(dim / 2)
        } else {
            Err(GroupError::Inadmissible(format!("{what} needs even dimension")))
        }
    };
    let two = BigRational::from_integer(BigInt::from(2));
    let value = match kind {
        GroupKind::GL => q_pow(q, d * d) * theta(1, dim, q, false)?,
        GroupKind::SL => {
            q_pow(q, d * d) * theta(1, dim, q, false)? / BigRational::from_integer((q - 1).into())
        }
        GroupKind::GU => q_pow(q, d * d) * theta(1, dim, q, true)?,
        GroupKind::SU => {
            q_pow(q, d * d) * theta(1, dim, q, true)? / BigRational::from_integer((q + 1).into())
        }
        GroupKind::Sp => {
            let n = even("Sp")? as i64;
            q_pow(q, 2 * n * n + n) * theta(1, n as u32, q * q, false)?
        }
        GroupKind::O(sign) | GroupKind::SO(sign) => {
            let n = even("O")? as i64;
            let eps = BigRational::from_integer(sign.as_i64().into());
            let o = two.clone()
                * q_pow(q, 2 * n * n - n)
                * (BigRational::one() - eps * q_pow(q, -n))
                * theta(1, n as u32 - 1, q * q, false)?;
            if matches!(kind, GroupKind::SO(_)) {
                o / two
            } else {
                o
            }
        }
        GroupKind::OOdd | GroupKind::SOOdd => {
            if dim % 2 == 0 {
                return Err(GroupError::Inadmissible("odd orthogonal needs odd dimension".into()));
            }
            let o = two.clone()
                * q_pow(q, (d * d - d) / 2)
                * theta(1, (dim - 1) / 2, q * q, false)?;
            if kind == GroupKind::SOOdd {
                o / two
            } else {
                o
            }
        }
    };
    if value.is_zero() {
        return Err(GroupError::Inadmissible("empty product".into()));
    }
    Ok(to_integer(value))
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ord(kind: GroupKind, d: u32, q: u64) -> u64 {
        group_order(kind, d, q).unwrap().to_u64().unwrap()
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(0, 5, 3, false).unwrap(), BigRational::one());
        assert_eq!(
            theta(1, 2, 3, false).unwrap(),
            BigRational::new(16.into(), 27.into())
        );
        assert_eq!(
            theta(1, 2, 2, true).unwrap(),
            BigRational::new(9.into(), 8.into())
        );
        assert!(theta(1, 2, 1, false).is_err());
    }

    #[test]
    fn small_orders() {
        assert_eq!(ord(GroupKind::GL, 2, 2), 6);
        assert_eq!(ord(GroupKind::GL, 2, 3), 48);
        assert_eq!(ord(GroupKind::GU, 2, 2), 18);
        assert_eq!(ord(GroupKind::Sp, 2, 3), 24);
        assert_eq!(ord(GroupKind::Sp, 4, 2), 720);
        assert_eq!(ord(GroupKind::Sp, 4, 3), 51840);
        assert_eq!(ord(GroupKind::O(Sign::Plus), 2, 3), 4);
        assert_eq!(ord(GroupKind::O(Sign::Minus), 2, 3), 8);
        assert_eq!(ord(GroupKind::SL, 4, 4), 987_033_600);
        assert_eq!(ord(GroupKind::OOdd, 3, 3), 48);
        assert_eq!(ord(GroupKind::SU, 3, 2), 216);
    }

    #[test]
    fn group_type_parsing() {
        for x in GroupType::ALL {
            assert_eq!(x.to_string().parse::<GroupType>().unwrap(), x);
        }
        assert_eq!("SOminus".parse::<GroupType>().unwrap(), GroupType::SOMinus);
        assert!("G2".parse::<GroupType>().is_err());
    }

    #[test]
    fn membership_basics() {
        for x in GroupType::ALL {
            let g = GroupSpec::new(x, 2, 3).unwrap();
            assert!(g.contains(&g.identity()).unwrap());
        }
        // A symplectic transvection in characteristic 2 has Dickson invariant 1.
        let sp = GroupSpec::new(GroupType::Sp, 2, 2).unwrap();
        let mut t = sp.identity();
        t.set(0, 3, 1);
        assert!(sp.contains(&t).unwrap());
        let so = GroupSpec::new(GroupType::SOPlus, 2, 2).unwrap();
        let form = so.form().unwrap();
        // x ↦ x + B(x, v) v with Q(v) = 1.
        let v = [1, 0, 0, 1];
        let f = so.field().clone();
        let rows: Vec<Vec<u32>> = (0..4)
            .map(|i| {
                let mut e = vec![0; 4];
                e[i] = 1;
                let c = form.bilinear(&e, &v);
                e.iter().zip(&v).map(|(&a, &b)| f.add(a, f.mul(c, b))).collect()
            })
            .collect();
        let r = Matrix::from_rows(&f, &rows).unwrap();
        assert!(form.is_isometry(&r));
        assert!(!so.contains(&r).unwrap());
    }
}
