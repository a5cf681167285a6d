//! Exact-rational closed-form bounds: the reducible probability p₁, the
//! per-class contributions p_i and p̃_i with their validity conditions,
//! column totals with leading terms, and the generation margin.

mod power;
mod table;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::clgroup::GroupType;
use crate::numth;
use crate::ppdgood::{cent_ratio, cent_ratio_bound, check_admissible, torus_order, PpdError};

pub use power::{
    c9_count_bound, c9_count_check, log2_log2_upper, pow_lower, pow_upper, Certified, Exponent,
    Term,
};
pub use table::{condition, lemma_bound, source, table_cell, Cell};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("class index {0} is outside 2..=9")]
    ClassIndex(u8),
    #[error("the p̃ column exists only for Sp, got {0}")]
    Tilde(GroupType),
    #[error(transparent)]
    Ppd(#[from] PpdError),
}

/// A column of the per-class ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Column {
    SL,
    SU,
    Sp,
    /// Both orthogonal signs share one column.
    SO,
    /// p̃ for Sp in even characteristic.
    SpTilde,
}

impl Column {
    pub const ALL: [Column; 5] = [Column::SL, Column::SU, Column::Sp, Column::SO, Column::SpTilde];

    pub fn of(x: GroupType, tilde: bool) -> Result<Column, BoundError> {
        Ok(match (x, tilde) {
            (GroupType::Sp, true) => Column::SpTilde,
            (_, true) => return Err(BoundError::Tilde(x)),
            (GroupType::SL, _) => Column::SL,
            (GroupType::SU, _) => Column::SU,
            (GroupType::Sp, _) => Column::Sp,
            _ => Column::SO,
        })
    }

    /// The group types whose bounds this column must cover.
    fn members(self) -> Vec<GroupType> {
        match self {
            Column::SL => vec![GroupType::SL],
            Column::SU => vec![GroupType::SU],
            Column::Sp | Column::SpTilde => vec![GroupType::Sp],
            Column::SO => vec![GroupType::SOPlus, GroupType::SOMinus],
        }
    }
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn q_pow(q: u64, e: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(numth::big_pow(q, e)))
}

/// The upper bound on p₁ for `X_{2n}(q)`:
/// SL `2/(q−1) − 4/q^{n+1}`, SU `1/(q²−1) + 3/(2q^{n+2})`,
/// Sp `1/(q−1) − 1/q^{n+1}`, SO^± `1/((2,q−1)q) + 1/(q(q−1)) + c/q^{n/2+1}`
/// with c = 3 for + and 4 for −.
pub fn p1_bound(x: GroupType, n: usize, q: u64) -> Result<BigRational, BoundError> {
    check_admissible(x, n, q)?;
    let qi = q as i64;
    let n64 = n as u64;
    Ok(match x {
        GroupType::SL => ratio(2, qi - 1) - ratio(4, 1) / q_pow(q, n64 + 1),
        GroupType::SU => ratio(1, qi * qi - 1) + ratio(3, 2) / q_pow(q, n64 + 2),
        GroupType::Sp => ratio(1, qi - 1) - q_pow(q, n64 + 1).recip(),
        GroupType::SOPlus | GroupType::SOMinus => {
            let c = if x == GroupType::SOPlus { 3 } else { 4 };
            let z = numth::gcd(q - 1, 2) as i64;
            ratio(1, z * qi) + ratio(1, qi * (qi - 1)) + ratio(c, 1) / q_pow(q, n64 / 2 + 1)
        }
    })
}

fn serialize_exponent<S: Serializer>(e: &Exponent, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

fn serialize_opt_exponent<S: Serializer>(e: &Option<Exponent>, s: S) -> Result<S::Ok, S::Error> {
    match e {
        Some(e) => s.serialize_some(&e.to_string()),
        None => s.serialize_none(),
    }
}

/// One per-class entry of a bound report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub class: u8,
    pub source: &'static str,
    /// The tabulated formula, `0` for an empty cell.
    pub formula: String,
    /// Certified upper bound from the tabulated cell.
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub value: BigRational,
    /// Whether `value` is exact rather than rounded up.
    pub exact: bool,
    /// The same bound re-derived from the class estimate for this group type.
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub lemma_value: BigRational,
    /// The tabulated cell equals the class estimate, maximized over the
    /// group types sharing the column.
    pub agrees: bool,
    pub valid: bool,
    pub condition: &'static str,
}

fn eval(term: Option<Term>, n: usize, q: u64) -> Certified {
    match term {
        Some(t) => t.eval(n, q),
        None => Certified {
            value: BigRational::zero(),
            exact: true,
        },
    }
}

/// The class-`i` contribution bound for `X_{2n}(q)`; `tilde` selects p̃ for Sp.
pub fn class_contribution(
    i: u8,
    x: GroupType,
    n: usize,
    q: u64,
    tilde: bool,
) -> Result<BoundEntry, BoundError> {
    if !(2..=9).contains(&i) {
        return Err(BoundError::ClassIndex(i));
    }
    let column = Column::of(x, tilde)?;
    check_admissible(x, n, q)?;
    let cell = table_cell(i, column).at(n, q);
    let formula = cell.as_ref().map_or_else(|| "0".to_string(), Term::to_string);
    let Certified { value, exact } = eval(cell, n, q);
    let lemma_value = eval(lemma_bound(i, x, tilde, n, q), n, q).value;
    let column_lemma = column
        .members()
        .into_iter()
        .map(|y| eval(lemma_bound(i, y, tilde, n, q), n, q).value)
        .max()
        .expect("every column has a member");
    let (valid, cond) = condition(i, x, n, q);
    Ok(BoundEntry {
        class: i,
        source: source(i),
        formula,
        agrees: value == column_lemma,
        value,
        exact,
        lemma_value,
        valid,
        condition: cond,
    })
}

/// The dominant term of a column as n → ∞.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeadingTerm {
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub coeff: BigRational,
    #[serde(serialize_with = "serialize_exponent")]
    pub exponent: Exponent,
    /// The next largest exponent among the remaining terms.
    #[serde(serialize_with = "serialize_opt_exponent")]
    pub next_exponent: Option<Exponent>,
}

/// Sums the coefficients of the generic column terms with the largest exponent.
pub fn leading_term(column: Column) -> LeadingTerm {
    let terms: Vec<Term> = (2..=9).filter_map(|i| table_cell(i, column).generic()).collect();
    let top = terms.iter().map(|t| t.exponent).max().expect("every column has terms");
    let coeff = terms
        .iter()
        .filter(|t| t.exponent == top)
        .map(|t| t.coeff.clone())
        .sum();
    let next_exponent = terms.iter().map(|t| t.exponent).filter(|e| *e < top).max();
    LeadingTerm {
        coeff,
        exponent: top,
        next_exponent,
    }
}

/// The full ledger for one group: p₁ and the per-class column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub group: GroupType,
    pub n: usize,
    pub q: u64,
    pub tilde: bool,
    /// Sp in even characteristic uses p̃, and p is defined only for odd q.
    pub probability_defined: bool,
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub p1_bound: BigRational,
    /// `p1_bound < 1`.
    pub p1_informative: bool,
    pub p1_valid: bool,
    pub entries: Vec<BoundEntry>,
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub total: BigRational,
    pub all_valid: bool,
    pub all_agree: bool,
    pub leading: LeadingTerm,
}

fn report(x: GroupType, n: usize, q: u64, tilde: bool) -> Result<BoundReport, BoundError> {
    let column = Column::of(x, tilde)?;
    let p1 = p1_bound(x, n, q)?;
    let entries = (2..=9)
        .map(|i| class_contribution(i, x, n, q, tilde))
        .collect::<Result<Vec<_>, _>>()?;
    let total = entries.iter().map(|e| e.value.clone()).sum();
    let probability_defined = match (x, tilde) {
        (GroupType::Sp, false) => q % 2 == 1,
        (GroupType::Sp, true) => q % 2 == 0,
        _ => true,
    };
    Ok(BoundReport {
        group: x,
        n,
        q,
        tilde,
        probability_defined,
        p1_informative: p1 < BigRational::one(),
        p1_valid: condition(1, x, n, q).0,
        p1_bound: p1,
        all_valid: entries.iter().all(|e| e.valid),
        all_agree: entries.iter().all(|e| e.agrees),
        entries,
        total,
        leading: leading_term(column),
    })
}

/// The column for p(X, n, q): `p ≤ Σ_{i=2}^{9} p_i`.
pub fn p_bound_total(x: GroupType, n: usize, q: u64) -> Result<BoundReport, BoundError> {
    report(x, n, q, false)
}

/// The column for p̃(Sp, n, q).
pub fn p_tilde_bound_total(n: usize, q: u64) -> Result<BoundReport, BoundError> {
    report(GroupType::Sp, n, q, true)
}

/// `(1 − p₁ bound) − Σ p_i`: a lower bound on the probability that a good
/// element and a random conjugate generate `G` (or SO^± for Sp in even
/// characteristic).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Margin {
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub margin: BigRational,
    pub positive: bool,
    /// All validity conditions hold, including q ≥ 4 for SL.
    pub conditions_met: bool,
}

pub fn broadbrush_margin(x: GroupType, n: usize, q: u64) -> Result<Margin, BoundError> {
    let tilde = x == GroupType::Sp && q % 2 == 0;
    let r = report(x, n, q, tilde)?;
    let margin = BigRational::one() - &r.p1_bound - &r.total;
    Ok(Margin {
        positive: margin > BigRational::zero(),
        conditions_met: r.all_valid && r.p1_valid && (x != GroupType::SL || q >= 4),
        margin,
    })
}

/// `|C_G(t)|²/|G|` against its closed-form bound at one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentRatioCheck {
    pub group: GroupType,
    pub n: usize,
    pub q: u64,
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub ratio: BigRational,
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub bound: BigRational,
    pub holds: bool,
}

/// Compares the exact centralizer ratio with its bound on every admissible
/// `(X, n ≤ n_max, q ≤ q_max)`.
pub fn cent_ratio_grid(n_max: usize, q_max: u64) -> Vec<CentRatioCheck> {
    let mut out = Vec::new();
    for x in GroupType::ALL {
        for n in 2..=n_max {
            for q in 2..=q_max {
                if check_admissible(x, n, q).is_err() {
                    continue;
                }
                let (Ok(ratio), Ok(bound)) = (cent_ratio(x, n, q), cent_ratio_bound(x, n, q)) else {
                    continue;
                };
                out.push(CentRatioCheck {
                    group: x,
                    n,
                    q,
                    holds: ratio <= bound,
                    ratio,
                    bound,
                });
            }
        }
    }
    out
}

/// One possible extension-field subgroup containing good elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionFieldRow {
    /// The prime degree of the field extension.
    pub s: usize,
    pub d: usize,
    pub structure: String,
    /// Number of conjugacy classes of such subgroups.
    pub classes: &'static str,
    pub conditions: &'static str,
    pub conditions_hold: bool,
    /// Order of a cyclic torus of the subgroup with a d-dimensional fixed
    /// space over the extension field, if the subgroup has one.
    pub torus_order: Option<u64>,
    /// The good-element torus order divides `torus_order`.
    pub torus_embeds: bool,
}

/// The candidate extension-field subgroups of `X_{2n}(q)` for each prime
/// `s | n`, with their structural conditions and a torus divisibility check.
pub fn extension_field_rows(x: GroupType, n: usize, q: u64) -> Result<Vec<ExtensionFieldRow>, BoundError> {
    let good_torus = torus_order(x, n, q)?;
    let pw = |e: usize| numth::checked_pow(q, e as u32).ok_or_else(|| PpdError::Overflow(format!("{q}^{e}")));
    let mut rows = Vec::new();
    for s in numth::factor(n as u64).into_keys().map(|s| s as usize) {
        let d = n / s;
        // Sp/O over q^s: q^{sd/2}+1 when d is even; unitary: q^d − (−1)^d.
        let even_torus = if d % 2 == 0 { Some(pw(s * d / 2)? + 1) } else { None };
        let unitary_torus = Some(if d % 2 == 1 { pw(d)? + 1 } else { pw(d)? - 1 });
        let mut push = |structure: String, classes, conditions, hold: bool, torus: Option<u64>| {
            rows.push(ExtensionFieldRow {
                s,
                d,
                structure,
                classes,
                conditions,
                conditions_hold: hold,
                torus_order: torus,
                torus_embeds: torus.is_some_and(|t| t % good_torus == 0),
            })
        };
        match x {
            GroupType::SL => push(
                format!("(GL_{}(q^{s}).{s}) ∩ SL_{}(q)", 2 * d, 2 * n),
                "1",
                "none",
                true,
                Some((pw(n)? - 1) / (q - 1)),
            ),
            GroupType::SU => push(
                format!("(GU_{}(q^{s}).{s}) ∩ SU_{}(q)", 2 * d, 2 * n),
                "1",
                "d, s odd",
                d % 2 == 1 && s % 2 == 1,
                Some((pw(n)? + 1) / (q + 1)),
            ),
            GroupType::Sp => {
                push(
                    format!("Sp_{}(q^{s}).{s}", 2 * d),
                    "1",
                    "d even",
                    d % 2 == 0,
                    even_torus,
                );
                if s == 2 {
                    push(
                        format!("GU_{n}(q).2"),
                        "1",
                        "s = 2 and d, q odd",
                        d % 2 == 1 && q % 2 == 1,
                        unitary_torus,
                    );
                }
            }
            GroupType::SOPlus | GroupType::SOMinus => {
                push(
                    format!("(O_{}(q^{s}).{s}) ∩ SO_{}(q)", 2 * d, 2 * n),
                    "1 or (s,2)",
                    "d even",
                    d % 2 == 0,
                    even_torus,
                );
                if s == 2 && x == GroupType::SOPlus {
                    push(
                        format!("GU_{n}(q) ∩ SO+_{}(q)", 2 * n),
                        "2",
                        "s = 2 and d odd",
                        d % 2 == 1,
                        unitary_torus,
                    );
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_examples() {
        assert_eq!(p1_bound(GroupType::SL, 3, 4).unwrap(), ratio(125, 192));
        assert_eq!(p1_bound(GroupType::Sp, 2, 2).unwrap(), ratio(7, 8));
        assert_eq!(
            p1_bound(GroupType::SU, 3, 3).unwrap(),
            ratio(1, 8) + ratio(1, 162)
        );
        assert_eq!(p1_bound(GroupType::Sp, 2, 3).unwrap(), ratio(1, 2) - ratio(1, 27));
        assert_eq!(p1_bound(GroupType::SL, 2, 4).unwrap(), ratio(2, 3) - ratio(1, 16));
        assert_eq!(
            p1_bound(GroupType::SOMinus, 4, 3).unwrap(),
            ratio(1, 6) + ratio(1, 6) + ratio(4, 27)
        );
        assert!(p1_bound(GroupType::SOPlus, 2, 3).is_err());
        assert!(p1_bound(GroupType::SL, 2, 2).unwrap() > BigRational::one());
    }

    #[test]
    fn class_contribution_examples() {
        let e = class_contribution(2, GroupType::SOPlus, 4, 3, false).unwrap();
        assert_eq!(e.value, ratio(1, 162));
        assert!(e.exact && e.agrees);
        let e = class_contribution(6, GroupType::SL, 2, 5, false).unwrap();
        assert_eq!(e.value, ratio(1, 48));
        assert_eq!(class_contribution(6, GroupType::SL, 3, 5, false).unwrap().value, ratio(0, 1));
        for x in GroupType::ALL {
            let n = if x.is_orthogonal() { 4 } else if x == GroupType::SU { 3 } else { 2 };
            assert!(class_contribution(4, x, n, 3, false).unwrap().value.is_zero());
        }
        assert_eq!(
            class_contribution(1, GroupType::SL, 2, 3, false),
            Err(BoundError::ClassIndex(1))
        );
        assert_eq!(
            class_contribution(3, GroupType::SL, 2, 3, true),
            Err(BoundError::Tilde(GroupType::SL))
        );
    }

    #[test]
    fn orthogonal_minus_lemma_value_is_sharper() {
        let e = class_contribution(2, GroupType::SOMinus, 4, 3, false).unwrap();
        assert!(e.lemma_value.is_zero());
        assert_eq!(e.value, ratio(1, 162));
        assert!(e.agrees);
    }

    #[test]
    fn leading_constants() {
        let sl = leading_term(Column::SL);
        assert_eq!(sl.coeff, ratio(21, 2));
        assert_eq!(sl.exponent.to_string(), "-n^2+n+2");
        assert_eq!(sl.next_exponent.unwrap().to_string(), "-n^2");
        assert_eq!(leading_term(Column::SU).coeff, ratio(9, 1));
        assert_eq!(leading_term(Column::SU).exponent.to_string(), "-(4/3)n^2+(4/3)n+2");
        assert_eq!(leading_term(Column::Sp).coeff, ratio(37, 10));
        assert_eq!(leading_term(Column::SpTilde).coeff, ratio(37, 10));
        assert_eq!(leading_term(Column::SO).coeff, ratio(53, 5));
        assert_eq!(leading_term(Column::SO).exponent.to_string(), "-(1/2)n^2");
    }

    #[test]
    fn reports_flag_conditions() {
        let r = p_bound_total(GroupType::SL, 3, 4).unwrap();
        assert!(!r.all_valid);
        assert!(r.all_agree);
        assert_eq!(r.entries.len(), 8);
        assert!(r.entries.iter().all(|e| e.value <= r.total));
        let r = p_tilde_bound_total(10, 2).unwrap();
        assert!(r.probability_defined && r.all_valid);
        assert!(!p_bound_total(GroupType::Sp, 10, 2).unwrap().probability_defined);
    }

    #[test]
    fn margins() {
        let m = broadbrush_margin(GroupType::Sp, 20, 2).unwrap();
        assert!(m.positive);
        let m = broadbrush_margin(GroupType::SL, 20, 4).unwrap();
        assert!(m.positive && m.conditions_met);
        let m = broadbrush_margin(GroupType::SL, 3, 4).unwrap();
        assert!(!m.conditions_met);
    }

    #[test]
    fn extension_field_rows_embed_the_torus() {
        for (x, n, q) in [
            (GroupType::SL, 6, 2),
            (GroupType::SU, 9, 2),
            (GroupType::Sp, 6, 3),
            (GroupType::SOPlus, 6, 5),
            (GroupType::SOMinus, 8, 3),
        ] {
            let rows = extension_field_rows(x, n, q).unwrap();
            assert!(!rows.is_empty());
            for row in rows {
                assert_eq!(row.s * row.d, n);
                if row.conditions_hold {
                    assert!(row.torus_embeds, "{x} {n} {q} {row:?}");
                }
            }
        }
    }
}
