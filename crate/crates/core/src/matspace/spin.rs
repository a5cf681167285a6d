use std::collections::VecDeque;

use super::{MatError, Matrix, Subspace};
use crate::gfield::{Fe, FieldSpec};

/// Default cap on the number of projective points the oracle enumerates.
pub const DEFAULT_POINT_CAP: u64 = 100_000;

/// Incrementally maintained reduced echelon basis.
struct Echelon<'a> {
    field: &'a FieldSpec,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl<'a> Echelon<'a> {
    fn new(field: &'a FieldSpec) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Adds `v` to the span; returns false if it was already inside.
    fn insert(&mut self, mut v: Vec<Fe>) -> bool {
        let f = self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[p]);
        for x in v.iter_mut() {
            *x = f.mul(inv, *x);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }
}

/// Smallest subspace containing `v` and invariant under every generator.
pub fn spin_closure(gens: &[Matrix], v: &[Fe]) -> Subspace {
    let field = gens
        .first()
        .expect("spin_closure needs at least one generator")
        .field()
        .clone();
    let d = v.len();
    assert!(
        gens.iter().all(|g| g.is_square() && g.rows() == d),
        "generators must be square of the vector's size"
    );
    let mut ech = Echelon::new(&field);
    let mut queue = VecDeque::new();
    if ech.insert(v.to_vec()) {
        queue.push_back(v.to_vec());
    }
    while let Some(w) = queue.pop_front() {
        if ech.rows.len() == d {
            break;
        }
        for g in gens {
            let img = g.vec_mul(&w);
            if ech.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    let out = Subspace::from_vectors(&field, d, &ech.rows);
    debug_assert!(gens.iter().all(|g| out.is_invariant(g)));
    out
}

/// Whether the matrix group generated by `gens` fixes a proper nonzero
/// subspace, decided by spinning every projective point.
///
/// Closures are constant along orbits of the generated group, so once a point
/// spins to the whole space its entire orbit is skipped.
pub fn is_reducible_oracle(gens: &[Matrix], cap: u64) -> Result<bool, MatError> {
    let first = gens
        .first()
        .ok_or_else(|| MatError::Dimension("no generators".into()))?;
    let field = first.field().clone();
    let d = first.rows();
    if gens.iter().any(|g| !g.is_square() || g.rows() != d) {
        return Err(MatError::Dimension("generator sizes differ".into()));
    }
    if d <= 1 {
        return Ok(false);
    }
    let q = field.order();
    let total = q
        .checked_pow(d as u32)
        .ok_or(MatError::CapExceeded { points: u64::MAX, cap })?;
    let points = (total - 1) / (q - 1);
    if points > cap {
        return Err(MatError::CapExceeded { points, cap });
    }
    let index = |v: &[Fe]| v.iter().rev().fold(0u64, |acc, &x| acc * q + x as u64) as usize;
    let normalize = |v: &mut Vec<Fe>| {
        if let Some(&lead) = v.iter().find(|&&x| x != 0) {
            let inv = field.inv(lead);
            for x in v.iter_mut() {
                *x = field.mul(inv, *x);
            }
        }
    };
    let mut visited = vec![false; total as usize];
    for code in 1..total {
        let mut v = Vec::with_capacity(d);
        let mut c = code;
        for _ in 0..d {
            v.push((c % q) as Fe);
            c /= q;
        }
        if v.iter().find(|&&x| x != 0) != Some(&1) || visited[code as usize] {
            continue;
        }
        if !spin_closure(gens, &v).is_full() {
            return Ok(true);
        }
        visited[code as usize] = true;
        let mut stack = vec![v];
        while let Some(w) = stack.pop() {
            for g in gens {
                let mut img = g.vec_mul(&w);
                normalize(&mut img);
                let i = index(&img);
                if !visited[i] {
                    visited[i] = true;
                    stack.push(img);
                }
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::{field_of_order, prime_field};
    use crate::matspace::companion;

    #[test]
    fn identity_spins_to_a_line() {
        let f = field_of_order(3).unwrap();
        let s = spin_closure(&[Matrix::identity(&f, 4)], &[1, 2, 0, 1]);
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn companion_spins_to_everything() {
        let f = prime_field(2).unwrap();
        let c = companion(&f, &[1, 1, 0, 0, 1]);
        assert!(spin_closure(&[c.clone()], &[0, 1, 1, 0]).is_full());
        assert!(!is_reducible_oracle(&[c], DEFAULT_POINT_CAP).unwrap());
    }

    #[test]
    fn sl4_2_standard_generators_are_irreducible() {
        let f = prime_field(2).unwrap();
        // A 4-cycle permutation matrix and a transvection generate SL_4(2).
        let mut x = Matrix::zero(&f, 4, 4);
        for i in 0..4 {
            x.set(i, (i + 1) % 4, 1);
        }
        let mut y = Matrix::identity(&f, 4);
        y.set(0, 1, 1);
        assert!(!is_reducible_oracle(&[x.clone(), y.clone()], DEFAULT_POINT_CAP).unwrap());
        assert!(is_reducible_oracle(&[y], DEFAULT_POINT_CAP).unwrap());
    }

    #[test]
    fn block_diagonal_is_reducible() {
        let f = prime_field(3).unwrap();
        let c = companion(&f, &[1, 0, 1]);
        let m = Matrix::block_diag(&f, &[&c, &c]);
        assert!(is_reducible_oracle(&[m.clone(), m], DEFAULT_POINT_CAP).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let f = prime_field(2).unwrap();
        let i = Matrix::identity(&f, 20);
        assert!(matches!(
            is_reducible_oracle(&[i], 1000),
            Err(MatError::CapExceeded { .. })
        ));
    }
}
