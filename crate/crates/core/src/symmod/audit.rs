//! Partition sweeps for good elements in `Z × S_ℓ` and the contribution
//! of these subgroups to the irreducible-but-proper probabilities.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::{DeletedModule, SignedPerm, SymError};
use crate::clgroup::GroupType;
use crate::numth;
use crate::ppdgood::{cent_ratio, check_admissible, is_ppd, phi_set};

/// All partitions of `ell` as non-increasing part lists, in reverse
/// lexicographic order starting from `[ell]`.
pub fn partitions(ell: usize) -> Vec<Vec<usize>> {
    fn extend(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            extend(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(ell, ell, &mut Vec::new(), &mut out);
    out
}

/// How `Z × S_ℓ` sits in a classical group `X_{2n}(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Embedding {
    /// The configuration number 1–4.
    pub case: u8,
    /// The ambient group; for odd `p` the orthogonal sign is not determined
    /// here and `SOPlus` stands in for both (their good orders coincide).
    pub group: GroupType,
    pub sign_determined: bool,
}

/// The configuration in which `S_ℓ` embeds in a classical group of
/// dimension `2n` over GF(p) through the fully deleted permutation module.
pub fn embedding_for(n: usize, p: u64, ell: usize) -> Result<Embedding, SymError> {
    if !numth::is_prime(p) {
        return Err(SymError::NotPrime(p));
    }
    let unsupported = || SymError::Configuration(format!("n={n}, p={p}, ℓ={ell}"));
    let determined = |case, group| Embedding {
        case,
        group,
        sign_determined: true,
    };
    if p != 2 {
        if n < 3 {
            return Err(unsupported());
        }
        let case = if ell == 2 * n + 1 && ell as u64 % p != 0 {
            1
        } else if ell == 2 * n + 2 && (n as u64 + 1) % p == 0 {
            2
        } else {
            return Err(unsupported());
        };
        return Ok(Embedding {
            case,
            group: GroupType::SOPlus,
            sign_determined: false,
        });
    }
    if ell == 2 * n + 2 {
        return Ok(match n % 4 {
            3 => determined(3, GroupType::SOPlus),
            1 => determined(3, GroupType::SOMinus),
            _ => determined(3, GroupType::Sp),
        });
    }
    if ell == 2 * n + 1 {
        return match n % 4 {
            0 => Ok(determined(4, GroupType::SOPlus)),
            2 => Ok(determined(4, GroupType::SOMinus)),
            _ => Err(unsupported()),
        };
    }
    Err(unsupported())
}

/// The verdict for one signed cycle type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleTypeVerdict {
    pub cycle_type: Vec<usize>,
    pub sign: i8,
    pub order: u64,
    pub fix_dim: usize,
    pub fix_dim_direct: usize,
    pub in_phi: bool,
    /// Order in Φ and fixed-point dimension n.
    pub good: bool,
    /// The largest prime dividing the order (1 for the identity).
    pub largest_prime: u64,
    /// The largest prime is n+1 or 2n+1 and is a ppd(n; p) prime.
    pub largest_prime_ok: bool,
}

/// The result of sweeping every cycle type of `S_ℓ` for good elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodTypeAudit {
    pub n: usize,
    pub p: u64,
    pub ell: usize,
    pub embedding: Embedding,
    pub phi: Vec<u64>,
    pub partitions: usize,
    pub verdicts: Vec<CycleTypeVerdict>,
    pub good_types: Vec<(Vec<usize>, i8)>,
    /// `(n+1)¹ 1^{ℓ−n−1}`.
    pub expected_type: Vec<usize>,
    pub n_plus_one_prime: bool,
    /// The good types are exactly the expected type with sign +1, and n+1 is prime.
    pub matches_expected: bool,
    /// Whether the uniqueness claim applies (n ≥ 4 and ℓ ≥ 7); smaller
    /// cases are reported only.
    pub claim_applies: bool,
    /// Every good type passes the largest-prime check.
    pub largest_prime_ok: bool,
    /// The closed-form and direct fixed dimensions agree on every type.
    pub formula_agrees: bool,
}

/// Sweeps all cycle types and signs of `Z × S_ℓ ≤ X_{2n}(p)`.
pub fn good_cycle_type_audit(n: usize, p: u64, ell: usize) -> Result<GoodTypeAudit, SymError> {
    let embedding = embedding_for(n, p, ell)?;
    if n % 2 == 1 {
        return Err(SymError::Configuration(format!(
            "good elements need n even, got n={n}"
        )));
    }
    let phi = phi_set(embedding.group, n, p)?;
    let module = DeletedModule::new(ell, p)?;
    let signs: &[i8] = if p == 2 { &[1] } else { &[1, -1] };
    let types = partitions(ell);
    let verdicts: Vec<CycleTypeVerdict> = types
        .par_iter()
        .flat_map_iter(|parts| signs.iter().map(move |&a| (parts.clone(), a)))
        .map(|(parts, sign)| {
            let sp = SignedPerm::from_cycle_type(&parts, sign)?;
            let order = sp.order(p);
            let fix_dim = module.fix_dim_formula(&sp)?;
            let fix_dim_direct = module.fix_dim_direct(&sp)?;
            let in_phi = phi.contains(&order);
            let largest_prime = numth::factor(order).keys().last().copied().unwrap_or(1);
            let largest_prime_ok = (largest_prime == n as u64 + 1
                || largest_prime == 2 * n as u64 + 1)
                && is_ppd(largest_prime, n as u64, p);
            Ok(CycleTypeVerdict {
                cycle_type: parts,
                sign,
                order,
                fix_dim,
                fix_dim_direct,
                in_phi,
                good: in_phi && fix_dim == n,
                largest_prime,
                largest_prime_ok,
            })
        })
        .collect::<Result<_, SymError>>()?;
    let good_types: Vec<(Vec<usize>, i8)> = verdicts
        .iter()
        .filter(|v| v.good)
        .map(|v| (v.cycle_type.clone(), v.sign))
        .collect();
    let mut expected_type = vec![n + 1];
    expected_type.extend(std::iter::repeat(1).take(ell - n - 1));
    let n_plus_one_prime = numth::is_prime(n as u64 + 1);
    let matches_expected =
        n_plus_one_prime && good_types == vec![(expected_type.clone(), 1)];
    Ok(GoodTypeAudit {
        n,
        p,
        ell,
        embedding,
        phi,
        partitions: types.len(),
        largest_prime_ok: verdicts.iter().filter(|v| v.good).all(|v| v.largest_prime_ok),
        formula_agrees: verdicts.iter().all(|v| v.fix_dim == v.fix_dim_direct),
        verdicts,
        good_types,
        expected_type,
        n_plus_one_prime,
        matches_expected,
        claim_applies: n >= 4 && ell >= 7,
    })
}

/// The contribution of `Z × S_ℓ` to the irreducible-but-proper probability
/// and its comparison with `q^{−n²+4n+3}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AltContribution {
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub value: BigRational,
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub bound: BigRational,
    pub bound_ok: bool,
}

fn factorial(k: usize) -> BigUint {
    (1..=k as u64).map(BigUint::from).product()
}

/// `(|C_G(t)|²/|G|) · ℓ!(2,q−1) / ((n+1)² ((ℓ−n−1)!)²)` for `X ∈ {Sp, SO±}`.
pub fn c9_alt_contribution(
    x: GroupType,
    n: usize,
    q: u64,
    ell: usize,
) -> Result<AltContribution, SymError> {
    if matches!(x, GroupType::SL | GroupType::SU) {
        return Err(SymError::Configuration(format!("{x} has no such subgroup")));
    }
    check_admissible(x, n, q)?;
    if (ell != 2 * n + 1 && ell != 2 * n + 2) || ell < 7 {
        return Err(SymError::Configuration(format!("ℓ={ell} with n={n}")));
    }
    let z = numth::gcd(q - 1, 2);
    let num = factorial(ell) * BigUint::from(z);
    let tail = factorial(ell - n - 1);
    let den = BigUint::from((n as u64 + 1).pow(2)) * &tail * &tail;
    let value = cent_ratio(x, n, q)? * BigRational::new(BigInt::from(num), BigInt::from(den));
    let e = -(n as i64).pow(2) + 4 * n as i64 + 3;
    let qe = BigRational::from_integer(BigInt::from(numth::big_pow(q, e.unsigned_abs())));
    let bound = if e >= 0 { qe } else { BigRational::one() / qe };
    Ok(AltContribution {
        bound_ok: value < bound,
        value,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=13).map(|l| partitions(l).len()).collect();
        assert_eq!(counts, [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101]);
        assert_eq!(partitions(4)[0], vec![4]);
        assert_eq!(partitions(4)[4], vec![1, 1, 1, 1]);
    }

    #[test]
    fn embeddings() {
        assert_eq!(embedding_for(4, 5, 10).unwrap().case, 2);
        assert_eq!(embedding_for(6, 7, 13).unwrap().case, 1);
        assert_eq!(embedding_for(4, 2, 10).unwrap().group, GroupType::Sp);
        assert_eq!(embedding_for(3, 2, 8).unwrap().group, GroupType::SOPlus);
        assert_eq!(embedding_for(5, 2, 12).unwrap().group, GroupType::SOMinus);
        assert_eq!(embedding_for(4, 2, 9).unwrap().group, GroupType::SOPlus);
        assert_eq!(embedding_for(6, 2, 13).unwrap().group, GroupType::SOMinus);
        assert!(embedding_for(4, 3, 10).is_err());
        assert!(embedding_for(6, 13, 13).is_err());
        assert!(embedding_for(3, 2, 7).is_err());
    }

    #[test]
    fn sp8_2_has_a_unique_good_type() {
        let audit = good_cycle_type_audit(4, 2, 10).unwrap();
        assert_eq!(audit.partitions, 42);
        assert!(audit.matches_expected);
        assert_eq!(audit.good_types, vec![(vec![5, 1, 1, 1, 1, 1], 1)]);
        assert!(audit.largest_prime_ok);
        assert!(audit.formula_agrees);
    }

    #[test]
    fn alt_contribution_bounds() {
        assert!(c9_alt_contribution(GroupType::SOPlus, 4, 5, 10).unwrap().bound_ok);
        assert!(c9_alt_contribution(GroupType::Sp, 4, 2, 10).unwrap().bound_ok);
        assert!(c9_alt_contribution(GroupType::Sp, 10, 2, 22).unwrap().bound_ok);
        assert!(c9_alt_contribution(GroupType::SL, 4, 2, 10).is_err());
        assert!(c9_alt_contribution(GroupType::Sp, 2, 2, 6).is_err());
    }

    #[test]
    fn alt_contribution_closed_form() {
        // ℓ = 2n+2: ℓ!/((n+1)²((n+1)!)²) = C(2n+2, n+1)/(n+1)².
        let c = c9_alt_contribution(GroupType::Sp, 4, 2, 10).unwrap();
        let ratio = cent_ratio(GroupType::Sp, 4, 2).unwrap();
        assert_eq!(c.value, ratio * BigRational::new(BigInt::from(252), BigInt::from(25)));
    }
}
