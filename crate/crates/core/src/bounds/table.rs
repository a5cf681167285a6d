//! The per-class bound ledger encoded row by row as a table, and the same
//! bounds re-derived class by class from the individual estimates.

use super::power::{Exponent, Term};
use super::Column;
use crate::clgroup::GroupType;

/// One ledger cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Zero,
    Term(Term),
    /// A constant that applies at a single `(n, q)` and is 0 elsewhere.
    Sporadic { n: usize, q: u64, term: Term },
}

impl Cell {
    pub fn at(&self, n: usize, q: u64) -> Option<Term> {
        match self {
            Cell::Zero => None,
            Cell::Term(t) => Some(t.clone()),
            Cell::Sporadic { n: n0, q: q0, term } => (*n0 == n && *q0 == q).then(|| term.clone()),
        }
    }

    /// The cell as a function of n for large n.
    pub fn generic(&self) -> Option<Term> {
        match self {
            Cell::Term(t) => Some(t.clone()),
            _ => None,
        }
    }
}

fn t(coeff: (i64, i64), n2: (i64, i64), n1: (i64, i64), c: i64) -> Cell {
    Cell::Term(Term::new(coeff, Exponent::new(n2, n1, (c, 1))))
}

/// The ledger cell for class `i` in `column`, as tabulated.
pub fn table_cell(i: u8, column: Column) -> Cell {
    use Column::*;
    let z = Cell::Zero;
    match (i, column) {
        (2, SL) => t((1, 1), (-1, 1), (0, 1), 0),
        (2, SO) => t((1, 2), (-1, 1), (3, 1), 0),
        (2, _) => z,
        (3, SL) => t((36, 10), (-1, 1), (0, 1), 0),
        (3, SU) => t((5, 1), (-4, 3), (0, 1), 0),
        (3, Sp) | (3, SpTilde) => t((37, 10), (-1, 2), (0, 1), 0),
        (3, SO) => t((106, 10), (-1, 2), (0, 1), 0),
        (4, _) => z,
        (5, SL) => t((8, 1), (-1, 1), (1, 1), 2),
        (5, SU) => t((9, 1), (-4, 3), (4, 3), 2),
        (5, Sp) | (5, SpTilde) => t((3, 1), (-2, 3), (2, 3), 0),
        (5, SO) => t((4, 1), (-2, 3), (2, 3), 0),
        (6, SL) => Cell::Sporadic {
            n: 2,
            q: 5,
            term: Term::new((1, 48), Exponent::new((0, 1), (0, 1), (0, 1))),
        },
        (6, _) => z,
        (7, _) => z,
        (8, SL) => t((25, 10), (-1, 1), (1, 1), 2),
        (8, _) => z,
        (9, SL) => t((6, 1), (-2, 1), (106, 10), 0),
        (9, SU) => t((6, 1), (-2, 1), (166, 10), 0),
        (9, _) => t((9, 1), (-1, 1), (96, 10), 0),
        _ => unreachable!("class index checked by the caller"),
    }
}

/// `coeff · q^{-(a2·n² + a1·n + a0)}`, the shape in which the individual
/// estimates are stated.
fn over(coeff: (i64, i64), a2: (i64, i64), a1: (i64, i64), a0: i64) -> Term {
    Term::new(coeff, Exponent::new((-a2.0, a2.1), (-a1.0, a1.1), (-a0, 1)))
}

/// The bound for class `i` re-derived from the class-by-class estimates,
/// for the concrete group type (the two orthogonal signs are distinguished).
pub fn lemma_bound(i: u8, x: GroupType, tilde: bool, n: usize, q: u64) -> Option<Term> {
    use GroupType::*;
    match i {
        // Direct-sum stabilizers: only SL and SO⁺ contribute.
        2 => match (x, tilde) {
            (_, true) => None,
            (SL, _) => Some(over((1, 1), (1, 1), (0, 1), 0)),
            (SOPlus, _) => Some(over((1, 2), (1, 1), (-3, 1), 0)),
            _ => None,
        },
        // Extension-field stabilizers.
        3 => Some(match (x, tilde) {
            (_, true) => over((37, 10), (1, 2), (0, 1), 0),
            (SL, _) => over((36, 10), (1, 1), (0, 1), 0),
            (SU, _) => over((5, 1), (4, 3), (0, 1), 0),
            (Sp, _) => over((37, 10), (1, 2), (0, 1), 0),
            (SOPlus | SOMinus, _) => over((106, 10), (1, 2), (0, 1), 0),
        }),
        // Tensor-product stabilizers contain no good elements.
        4 => None,
        // Subfield stabilizers.
        5 => Some(match (x, tilde) {
            (_, true) => over((3, 1), (2, 3), (-2, 3), 0),
            (SL, _) => over((8, 1), (1, 1), (-1, 1), -2),
            (SU, _) => over((9, 1), (4, 3), (-4, 3), -2),
            (Sp, _) => over((3, 1), (2, 3), (-2, 3), 0),
            (SOPlus | SOMinus, _) => over((4, 1), (2, 3), (-2, 3), 0),
        }),
        // Symplectic-type normalizers: only SL_4(5) contributes.
        6 => (x == SL && !tilde && (n, q) == (2, 5)).then(|| over((1, 48), (0, 1), (0, 1), 0)),
        // Tensor-power stabilizers contain no good elements.
        7 => None,
        // Classical subgroups: only SL contributes.
        8 => (x == SL && !tilde).then(|| over((5, 2), (1, 1), (-1, 1), -2)),
        // Nearly simple subgroups.
        9 => Some(match (x, tilde) {
            (SL, false) => over((6, 1), (2, 1), (-53, 5), 0),
            (SU, false) => over((6, 1), (2, 1), (-83, 5), 0),
            _ => over((9, 1), (1, 1), (-48, 5), 0),
        }),
        _ => unreachable!("class index checked by the caller"),
    }
}

/// The conditions on `(n, q)` under which the class-`i` bound holds
/// (class 1 is the reducible bound), with a description.
pub fn condition(i: u8, x: GroupType, n: usize, q: u64) -> (bool, &'static str) {
    let mersenne = (q + 1).is_power_of_two();
    match i {
        1 => (
            q != 2 || !matches!(x, GroupType::SL | GroupType::Sp),
            "q != 2 if X = SL or Sp",
        ),
        2 => (
            !(n == 2 && (q == 5 || mersenne)),
            "(n,q) != (2,5), (2,2^a-1)",
        ),
        3 => (!(n == 2 && (q == 3 || q == 7)), "(n,q) != (2,3), (2,7)"),
        4 | 5 | 7 => (n >= 3, "n >= 3"),
        6 => (!(n == 2 && mersenne), "(n,q) != (2,2^a-1)"),
        8 => (n >= 3 || x != GroupType::SL, "n >= 3 if X = SL"),
        9 => (n >= 9, "n >= 9"),
        _ => unreachable!("class index checked by the caller"),
    }
}

/// A short description of the subgroup family behind class `i`.
pub fn source(i: u8) -> &'static str {
    match i {
        2 => "C2: stabilizers of direct sum decompositions",
        3 => "C3: stabilizers of extension fields",
        4 => "C4: stabilizers of tensor products",
        5 => "C5: stabilizers of subfields",
        6 => "C6: normalizers of symplectic-type groups",
        7 => "C7: stabilizers of tensor powers",
        8 => "C8: classical subgroups",
        9 => "C9: nearly simple subgroups",
        _ => unreachable!("class index checked by the caller"),
    }
}
