//! Primitive prime divisors, the admissible orders Φ^X(n,q), torus and
//! centralizer orders, class counts, centralizer ratio bounds, and good
//! element construction.

mod element;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::clgroup::{group_order, GroupError, GroupKind, GroupType};
use crate::forms::{FormError, Sign};
use crate::gfield::FieldError;
use crate::matspace::MatError;
use crate::numth;

pub use element::{build_good_element, build_torus_element, default_element, GoodElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PpdError {
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("{m} is not in the set of good orders for {x}, n={n}, q={q}")]
    NotInPhi { x: GroupType, n: usize, q: u64, m: u64 },
    #[error("no good orders for {x}, n={n}, q={q}")]
    EmptyPhi { x: GroupType, n: usize, q: u64 },
    #[error("order {m} divides q-1={}: the element is scalar on W", .q - 1)]
    ScalarOnW { m: u64, q: u64 },
    #[error("order {m} does not divide the torus order {torus}")]
    NotInTorus { m: u64, torus: u64 },
    #[error("element of order {m} is reducible on W")]
    ReducibleOnW { m: u64 },
    #[error("no nondegenerate invariant form on W: {0}")]
    NoInvariantForm(String),
    #[error("postcondition failed: {0}")]
    Postcondition(String),
    #[error("arithmetic overflow computing {0}")]
    Overflow(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Checks the parity and size conditions under which `X_{2n}(q)` has good
/// elements: n odd for SU, n even for Sp and SO, n ≥ 4 for SO, n ≥ 2.
pub fn check_admissible(x: GroupType, n: usize, q: u64) -> Result<(), PpdError> {
    if numth::prime_power(q).is_none() {
        return Err(PpdError::Inadmissible(format!("q={q} is not a prime power")));
    }
    if n < 2 {
        return Err(PpdError::Inadmissible(format!("n={n} < 2")));
    }
    match x {
        GroupType::SU if n % 2 == 0 => Err(PpdError::Inadmissible(format!("SU needs n odd, got {n}"))),
        GroupType::Sp | GroupType::SOPlus | GroupType::SOMinus if n % 2 == 1 => Err(
            PpdError::Inadmissible(format!("{x} needs n even, got {n}")),
        ),
        GroupType::SOPlus | GroupType::SOMinus if n < 4 => {
            Err(PpdError::Inadmissible(format!("{x} needs n >= 4, got {n}")))
        }
        _ => Ok(()),
    }
}

/// Whether `r` is a primitive prime divisor of `q^n − 1`.
pub fn is_ppd(r: u64, n: u64, q: u64) -> bool {
    numth::is_prime(r) && q % r != 0 && numth::mult_order(q, r) == Some(n)
}

/// All primitive prime divisors of `q^n − 1`.
pub fn ppd_primes(n: u32, q: u64) -> Result<Vec<u64>, PpdError> {
    let value = numth::checked_pow(q, n).ok_or_else(|| PpdError::Overflow(format!("{q}^{n}")))?;
    Ok(numth::factor(value - 1)
        .into_keys()
        .filter(|&r| is_ppd(r, n as u64, q))
        .collect())
}

fn pow_checked(q: u64, e: u32) -> Result<u64, PpdError> {
    numth::checked_pow(q, e).ok_or_else(|| PpdError::Overflow(format!("{q}^{e}")))
}

/// The number that every element of Φ^X(n,q) divides: the order of the
/// cyclic torus of a good element.
pub fn torus_order(x: GroupType, n: usize, q: u64) -> Result<u64, PpdError> {
    check_admissible(x, n, q)?;
    let n32 = n as u32;
    Ok(match x {
        GroupType::SL => (pow_checked(q, n32)? - 1) / (q - 1),
        GroupType::SU => (pow_checked(q, n32)? + 1) / (q + 1),
        _ => pow_checked(q, n32 / 2)? + 1,
    })
}

/// The sorted set Φ^X(n,q) of admissible good-element orders.
pub fn phi_set(x: GroupType, n: usize, q: u64) -> Result<Vec<u64>, PpdError> {
    check_admissible(x, n, q)?;
    if n == 2 {
        return Ok(vec![(q + 1) / numth::gcd(q - 1, 2)]);
    }
    let qd = pow_checked(q, x.delta())?;
    let ppds = ppd_primes(n as u32, qd)?;
    let nine = n == 6 && qd == 2;
    Ok(numth::divisors(torus_order(x, n, q)?)
        .into_iter()
        .filter(|m| ppds.iter().any(|r| m % r == 0) || (nine && m % 9 == 0))
        .collect())
}

/// The class count φ(m)/n of good elements of order `m`, which need not be
/// an integer when n = 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCount {
    pub count: BigRational,
    /// Set when the count is not an integer.
    pub flagged: bool,
}

pub fn good_class_count(x: GroupType, n: usize, q: u64, m: u64) -> Result<ClassCount, PpdError> {
    if !phi_set(x, n, q)?.contains(&m) {
        return Err(PpdError::NotInPhi { x, n, q, m });
    }
    let count = BigRational::new(
        BigInt::from(numth::euler_phi(m)),
        BigInt::from(n as u64),
    );
    let flagged = !count.is_integer();
    Ok(ClassCount { count, flagged })
}

/// Orders of the cyclic torus `T`, of `C_G(t)` and of `N_G(T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusData {
    pub torus: BigUint,
    pub centralizer: BigUint,
    pub normalizer: BigUint,
}

pub fn torus_and_centralizer_order(x: GroupType, n: usize, q: u64) -> Result<TorusData, PpdError> {
    check_admissible(x, n, q)?;
    let qn = numth::big_pow(q, n as u64);
    let n32 = n as u32;
    let (torus, factor, inner) = match x {
        GroupType::SL => (
            (&qn - 1u32) / (q - 1),
            &qn - 1u32,
            group_order(GroupKind::SL, n32, q)?,
        ),
        GroupType::SU => (
            (&qn + 1u32) / (q + 1),
            &qn + 1u32,
            group_order(GroupKind::SU, n32, q)?,
        ),
        GroupType::Sp => {
            let t = numth::big_pow(q, n as u64 / 2) + 1u32;
            (t.clone(), t, group_order(GroupKind::Sp, n32, q)?)
        }
        GroupType::SOPlus | GroupType::SOMinus => {
            let t = numth::big_pow(q, n as u64 / 2) + 1u32;
            let sign = x.sign().expect("orthogonal").flip();
            (t.clone(), t, group_order(GroupKind::SO(sign), n32, q)?)
        }
    };
    let centralizer = factor * inner;
    let normalizer = &centralizer * n;
    Ok(TorusData {
        torus,
        centralizer,
        normalizer,
    })
}

/// Order of `X_{2n}(q)` as a big integer.
pub fn ambient_order(x: GroupType, n: usize, q: u64) -> Result<BigUint, PpdError> {
    let kind = match x {
        GroupType::SL => GroupKind::SL,
        GroupType::SU => GroupKind::SU,
        GroupType::Sp => GroupKind::Sp,
        GroupType::SOPlus => GroupKind::SO(Sign::Plus),
        GroupType::SOMinus => GroupKind::SO(Sign::Minus),
    };
    Ok(group_order(kind, 2 * n as u32, q)?)
}

fn big(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn q_power(q: u64, e: i64) -> BigRational {
    let p = big(numth::big_pow(q, e.unsigned_abs()));
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// The exact ratio `|C_G(t)|² / |G|` for a good element `t`.
pub fn cent_ratio(x: GroupType, n: usize, q: u64) -> Result<BigRational, PpdError> {
    let c = big(torus_and_centralizer_order(x, n, q)?.centralizer);
    Ok(&c * &c / big(ambient_order(x, n, q)?))
}

/// The stated upper bound on `|C_G(t)|² / |G|`, first form:
/// SL `(q^n−1)²/((q−1)q^{2n²−1})`, SU `16(q^n+1)²/(15q^{2n²})`,
/// Sp `(25/16)q^{−n²+n}`, SO `(25/9)q^{−n²+n}`.
pub fn cent_ratio_bound(x: GroupType, n: usize, q: u64) -> Result<BigRational, PpdError> {
    check_admissible(x, n, q)?;
    let ni = n as i64;
    let qn = big(numth::big_pow(q, n as u64));
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    Ok(match x {
        GroupType::SL => {
            let num = (&qn - BigRational::one()) * (&qn - BigRational::one());
            num / r(q as i64 - 1, 1) * q_power(q, -(2 * ni * ni - 1))
        }
        GroupType::SU => {
            let num = (&qn + BigRational::one()) * (&qn + BigRational::one());
            r(16, 15) * num * q_power(q, -2 * ni * ni)
        }
        GroupType::Sp => r(25, 16) * q_power(q, -ni * ni + ni),
        GroupType::SOPlus | GroupType::SOMinus => r(25, 9) * q_power(q, -ni * ni + ni),
    })
}

/// The coarser closed forms `2q^{−2n²+2n}` (SL) and `(27/20)q^{−2n²+2n}` (SU);
/// for Sp and SO this equals [`cent_ratio_bound`].
pub fn cent_ratio_coarse_bound(x: GroupType, n: usize, q: u64) -> Result<BigRational, PpdError> {
    let ni = n as i64;
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    match x {
        GroupType::SL => {
            check_admissible(x, n, q)?;
            Ok(r(2, 1) * q_power(q, -2 * ni * ni + 2 * ni))
        }
        GroupType::SU => {
            check_admissible(x, n, q)?;
            Ok(r(27, 20) * q_power(q, -2 * ni * ni + 2 * ni))
        }
        _ => cent_ratio_bound(x, n, q),
    }
}

/// The order of the torus as a machine integer, for element construction.
fn torus_order_u64(x: GroupType, n: usize, q: u64) -> Result<u64, PpdError> {
    torus_and_centralizer_order(x, n, q)?
        .torus
        .to_u64()
        .ok_or_else(|| PpdError::Overflow("torus order".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn ppd_examples() {
        assert_eq!(ppd_primes(4, 2).unwrap(), vec![5]);
        assert!(ppd_primes(6, 2).unwrap().is_empty());
        assert!(ppd_primes(2, 3).unwrap().is_empty());
        assert!(ppd_primes(2, 7).unwrap().is_empty());
        assert_eq!(ppd_primes(3, 9).unwrap(), vec![7, 13]);
        assert!(is_ppd(5, 4, 2));
        assert!(!is_ppd(3, 4, 2));
    }

    #[test]
    fn ppd_primes_are_one_mod_n() {
        for n in 2..=12u32 {
            for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
                for r in ppd_primes(n, q).unwrap() {
                    assert_eq!(r % n as u64, 1, "r={r} n={n} q={q}");
                }
            }
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_set(GroupType::SL, 2, 5).unwrap(), vec![3]);
        assert_eq!(phi_set(GroupType::Sp, 4, 2).unwrap(), vec![5]);
        assert_eq!(phi_set(GroupType::SU, 3, 3).unwrap(), vec![7]);
        assert!(phi_set(GroupType::SU, 3, 2).unwrap().is_empty());
        assert!(phi_set(GroupType::SL, 4, 3).unwrap().contains(&40));
        assert!(phi_set(GroupType::Sp, 3, 2).is_err());
        assert!(phi_set(GroupType::SU, 2, 2).is_err());
        assert!(phi_set(GroupType::SOPlus, 2, 3).is_err());
        // (n, q) = (6, 2): orders divisible by 9.
        assert_eq!(phi_set(GroupType::SL, 6, 2).unwrap(), vec![9, 63]);
    }

    #[test]
    fn class_count_examples() {
        let c = good_class_count(GroupType::Sp, 4, 2, 5).unwrap();
        assert_eq!(c.count, rat(1, 1));
        assert!(!c.flagged);
        assert_eq!(good_class_count(GroupType::SU, 3, 3, 7).unwrap().count, rat(2, 1));
        assert_eq!(good_class_count(GroupType::SL, 4, 3, 40).unwrap().count, rat(4, 1));
        let half = good_class_count(GroupType::Sp, 2, 3, 2).unwrap();
        assert_eq!(half.count, rat(1, 2));
        assert!(half.flagged);
        assert!(good_class_count(GroupType::Sp, 4, 2, 3).is_err());
    }

    #[test]
    fn torus_examples() {
        let t = torus_and_centralizer_order(GroupType::Sp, 2, 3).unwrap();
        assert_eq!((t.torus, t.centralizer.clone()), (4u32.into(), 96u32.into()));
        assert_eq!(t.normalizer, 192u32.into());
        let t = torus_and_centralizer_order(GroupType::SL, 2, 4).unwrap();
        assert_eq!((t.torus, t.centralizer), (5u32.into(), 900u32.into()));
        let t = torus_and_centralizer_order(GroupType::Sp, 2, 2).unwrap();
        assert_eq!((t.torus, t.centralizer), (3u32.into(), 18u32.into()));
    }

    #[test]
    fn phi_divides_torus() {
        for x in GroupType::ALL {
            for n in 2..=6 {
                for q in [2u64, 3, 4, 5, 7, 8, 9] {
                    if check_admissible(x, n, q).is_err() {
                        continue;
                    }
                    let t = torus_order(x, n, q).unwrap();
                    for m in phi_set(x, n, q).unwrap() {
                        assert_eq!(t % m, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn cent_ratio_examples() {
        assert_eq!(cent_ratio(GroupType::Sp, 2, 3).unwrap(), rat(9216, 51840));
        let sl = cent_ratio(GroupType::SL, 3, 2).unwrap();
        assert!(sl <= cent_ratio_coarse_bound(GroupType::SL, 3, 2).unwrap());
        assert!(sl <= cent_ratio_bound(GroupType::SL, 3, 2).unwrap());
        assert_eq!(cent_ratio_coarse_bound(GroupType::SL, 3, 2).unwrap(), rat(2, 4096));
        assert!(cent_ratio(GroupType::SU, 3, 2).unwrap() > rat(0, 1));
    }
}
