//! Conjugacy-class orbits and centralizers in small groups.

use std::collections::HashMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{enumerate_group, uniform_element, GroupError, GroupSpec};
use crate::gfield::FieldSpec;
use crate::matspace::{Matrix, PackedKey};

/// Default cap on the size of an enumerated conjugacy class.
pub const DEFAULT_CLASS_CAP: u64 = 5_000_000;

/// Number of random generators used for orbit closure.
const GENERATOR_COUNT: usize = 3;

/// Fixed seed for the orbit generators, so orbits are reproducible.
const GENERATOR_SEED: u64 = 0x6f72_6269_74;

/// A conjugacy class `t^G` together with one conjugator per element.
///
/// Elements and conjugators are stored packed. Element `i` equals
/// `c⁻¹ t c` where `c` is conjugator `i`; element 0 is `t` itself.
#[derive(Clone, Debug)]
pub struct ClassOrbit {
    field: Arc<FieldSpec>,
    dim: usize,
    elements: Vec<PackedKey>,
    conjugators: Vec<PackedKey>,
    index: HashMap<PackedKey, usize>,
}

impl ClassOrbit {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> Matrix {
        Matrix::unpack(&self.field, self.dim, self.dim, &self.elements[i])
    }

    pub fn conjugator(&self, i: usize) -> Matrix {
        Matrix::unpack(&self.field, self.dim, self.dim, &self.conjugators[i])
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(&m.pack()).copied()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.index_of(m).is_some()
    }

    /// Iterates over the class elements.
    pub fn iter(&self) -> impl Iterator<Item = Matrix> + '_ {
        (0..self.len()).map(|i| self.element(i))
    }

    /// Iterates over `(element, conjugator)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (Matrix, Matrix)> + '_ {
        (0..self.len()).map(|i| (self.element(i), self.conjugator(i)))
    }
}

/// Generators used for orbit closure: seeded uniform random elements.
///
/// Three uniform elements generate every group handled here with
/// overwhelming probability; callers certify the result by comparing the
/// orbit size against the predicted class size.
pub fn orbit_generators(g: &GroupSpec) -> Vec<Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(GENERATOR_SEED ^ (g.dim() as u64) << 32 ^ g.q());
    (0..GENERATOR_COUNT)
        .map(|_| uniform_element(g, &mut rng))
        .collect()
}

/// The conjugacy class of `t` in `G`, by closure under conjugation.
pub fn class_orbit(t: &Matrix, g: &GroupSpec, cap: u64) -> Result<ClassOrbit, GroupError> {
    class_orbit_with(t, g, &orbit_generators(g), cap)
}

/// The orbit of `t` under conjugation by the group generated by `gens`.
pub fn class_orbit_with(
    t: &Matrix,
    g: &GroupSpec,
    gens: &[Matrix],
    cap: u64,
) -> Result<ClassOrbit, GroupError> {
    if !g.contains(t)? {
        return Err(GroupError::NotMember);
    }
    let field = g.field().clone();
    let dim = g.dim();
    let gens: Vec<(Matrix, Matrix)> = gens
        .iter()
        .map(|x| Ok((x.clone(), x.inverse()?)))
        .collect::<Result<_, GroupError>>()?;
    let mut orbit = ClassOrbit {
        field: field.clone(),
        dim,
        elements: vec![t.pack()],
        conjugators: vec![g.identity().pack()],
        index: HashMap::from([(t.pack(), 0)]),
    };
    let mut head = 0;
    while head < orbit.len() {
        let e = orbit.element(head);
        let c = orbit.conjugator(head);
        for (x, x_inv) in &gens {
            let key = e.conjugate_by(x, x_inv).pack();
            if orbit.index.contains_key(&key) {
                continue;
            }
            if orbit.len() as u64 >= cap {
                return Err(GroupError::CapExceeded {
                    size: orbit.len() as u64 + 1,
                    cap,
                });
            }
            orbit.index.insert(key.clone(), orbit.len());
            orbit.elements.push(key);
            orbit.conjugators.push(c.mul(x).pack());
        }
        head += 1;
    }
    Ok(orbit)
}

/// `|C_G(t)|` by enumerating all of `G`.
pub fn brute_force_centralizer_order(
    t: &Matrix,
    g: &GroupSpec,
    cap: u64,
) -> Result<u64, GroupError> {
    let mut count = 0;
    enumerate_group(g, cap, &mut |x| {
        if t.mul(x) == x.mul(t) {
            count += 1;
        }
    })?;
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clgroup::GroupType;
    use num_traits::ToPrimitive;

    #[test]
    fn central_element_has_singleton_class() {
        let g = GroupSpec::new(GroupType::Sp, 2, 3).unwrap();
        let minus = g.identity().neg();
        let orbit = class_orbit(&minus, &g, 10).unwrap();
        assert_eq!(orbit.len(), 1);
        assert!(orbit.contains(&minus));
    }

    #[test]
    fn conjugators_reproduce_elements() {
        let g = GroupSpec::new(GroupType::SL, 1, 3).unwrap();
        let t = Matrix::from_rows(g.field(), &[vec![1, 1], vec![0, 1]]).unwrap();
        let orbit = class_orbit(&t, &g, 100).unwrap();
        for (e, c) in orbit.pairs() {
            assert_eq!(t.conjugate_by(&c, &c.inverse().unwrap()), e);
        }
        let cent = brute_force_centralizer_order(&t, &g, 1000).unwrap();
        assert_eq!(orbit.len() as u64 * cent, g.order().to_u64().unwrap());
    }

    #[test]
    fn order_three_element_in_sp2_3() {
        let g = GroupSpec::with_dim(GroupType::Sp, 2, 3).unwrap();
        let t = Matrix::from_rows(g.field(), &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(g.contains(&t).unwrap());
        assert_eq!(brute_force_centralizer_order(&t, &g, 1000).unwrap(), 6);
        assert_eq!(class_orbit(&t, &g, 100).unwrap().len(), 4);
        let id = g.identity();
        assert_eq!(brute_force_centralizer_order(&id, &g, 1000).unwrap(), 24);
    }

    #[test]
    fn cap_is_enforced() {
        let g = GroupSpec::new(GroupType::SL, 2, 3).unwrap();
        let mut t = g.identity();
        t.set(0, 1, 1);
        assert!(matches!(
            class_orbit(&t, &g, 5),
            Err(GroupError::CapExceeded { .. })
        ));
    }
}
