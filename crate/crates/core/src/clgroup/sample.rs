//! Exactly uniform sampling and exhaustive enumeration.
//!
//! Isometries are built as images of the standard basis: each hyperbolic pair
//! (or orthonormal vector for hermitian forms) is chosen among all admissible
//! vectors in the perpendicular space of the pairs already placed. By Witt's
//! theorem every partial choice extends in the same number of ways, so a
//! uniform choice at each step gives a uniform element. The enumerator walks
//! the same tree exhaustively.

use num_traits::ToPrimitive;
use rand::Rng;

use super::{GroupError, GroupSpec, GroupType};
use crate::forms::{anisotropic_nu, FormKind, FormSpec};
use crate::gfield::{Fe, FieldSpec};
use crate::matspace::{Matrix, Subspace};

/// Default cap on the order of a group enumerated element by element.
pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

type Vector = Vec<Fe>;

fn random_in(space: &Subspace, rng: &mut impl Rng) -> Vector {
    let q = space.field().order();
    let c: Vec<Fe> = (0..space.dim()).map(|_| rng.gen_range(0..q) as Fe).collect();
    space.basis().vec_mul(&c)
}

fn all_in(space: &Subspace) -> impl Iterator<Item = Vector> + '_ {
    let q = space.field().order();
    let k = space.dim() as u32;
    (0..q.pow(k)).map(move |mut code| {
        let c: Vec<Fe> = (0..k)
            .map(|_| {
                let x = (code % q) as Fe;
                code /= q;
                x
            })
            .collect();
        space.basis().vec_mul(&c)
    })
}

fn scale(f: &FieldSpec, c: Fe, v: &[Fe]) -> Vector {
    v.iter().map(|&x| f.mul(c, x)).collect()
}

/// `f = y − Q(y)·e`, making `f` singular when `B(e, y) = 1` and `Q(e) = 0`.
fn make_singular(form: &FormSpec, e: &[Fe], y: &[Fe]) -> Vector {
    let f = form.field();
    let qy = form.value(y);
    y.iter()
        .zip(e)
        .map(|(&a, &b)| f.sub(a, f.mul(qy, b)))
        .collect()
}

fn perp_within(form: &FormSpec, space: &Subspace, vs: &[Vector]) -> Subspace {
    let span = Subspace::from_vectors(form.field(), form.dim(), vs);
    form.perp(&span)
        .intersection(space)
        .expect("same ambient space")
}

/// Structure of a standard form: number of hyperbolic pairs and whether a
/// central anisotropic plane follows.
fn layout(form: &FormSpec) -> (usize, bool) {
    let d = form.dim();
    match form.kind() {
        FormKind::Hermitian => (0, false),
        FormKind::Symplectic => (d / 2, false),
        FormKind::Quadratic => {
            let c = d / 2 - 1;
            let minus = form.quad().unwrap().get(c, c) != 0;
            if minus {
                (d / 2 - 1, true)
            } else {
                (d / 2, false)
            }
        }
    }
}

fn anisotropic_pairs(form: &FormSpec, space: &Subspace) -> Vec<(Vector, Vector)> {
    let nu = anisotropic_nu(form.field());
    let vecs: Vec<Vector> = all_in(space).collect();
    let mut out = Vec::new();
    for a in vecs.iter().filter(|a| form.value(a) == 1) {
        for b in &vecs {
            if form.bilinear(a, b) == 1 && form.value(b) == nu {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// A uniformly random isometry of a standard form (full isometry group).
pub(crate) fn random_isometry(form: &FormSpec, rng: &mut impl Rng) -> Matrix {
    let f = form.field().clone();
    let d = form.dim();
    let mut rows: Vec<Vector> = vec![Vec::new(); d];
    let mut space = Subspace::full(&f, d);
    if form.kind() == FormKind::Hermitian {
        for row in rows.iter_mut() {
            let v = loop {
                let v = random_in(&space, rng);
                if form.value(&v) == 1 {
                    break v;
                }
            };
            space = perp_within(form, &space, &[v.clone()]);
            *row = v;
        }
        return Matrix::from_rows(&f, &rows).expect("square");
    }
    let (pairs, plane) = layout(form);
    let quadratic = form.kind() == FormKind::Quadratic;
    for i in 0..pairs {
        let e = loop {
            let v = random_in(&space, rng);
            if v.iter().any(|&x| x != 0) && (!quadratic || form.value(&v) == 0) {
                break v;
            }
        };
        let y = loop {
            let y = random_in(&space, rng);
            let b = form.bilinear(&e, &y);
            if b != 0 {
                break scale(&f, f.inv(b), &y);
            }
        };
        let fv = if quadratic {
            make_singular(form, &e, &y)
        } else {
            y
        };
        space = perp_within(form, &space, &[e.clone(), fv.clone()]);
        rows[i] = e;
        rows[d - 1 - i] = fv;
    }
    if plane {
        let options = anisotropic_pairs(form, &space);
        let (a, b) = options[rng.gen_range(0..options.len())].clone();
        rows[pairs] = a;
        rows[pairs + 1] = b;
    }
    Matrix::from_rows(&f, &rows).expect("square")
}

fn scale_first_row_by_inverse_det(m: &mut Matrix) {
    let f = m.field().clone();
    let c = f.inv(m.det().expect("square"));
    for j in 0..m.cols() {
        let x = m.get(0, j);
        m.set(0, j, f.mul(c, x));
    }
}

/// A uniformly distributed element of `G`.
pub fn uniform_element(g: &GroupSpec, rng: &mut impl Rng) -> Matrix {
    let f = g.field().clone();
    let d = g.dim();
    match g.group_type() {
        GroupType::SL => {
            let mut rows: Vec<Vector> = Vec::with_capacity(d);
            let mut span = Subspace::zero(&f, d);
            let full = Subspace::full(&f, d);
            while rows.len() < d {
                let v = random_in(&full, rng);
                if !span.contains(&v) {
                    span = span.sum(&Subspace::from_vectors(&f, d, &[v.clone()])).unwrap();
                    rows.push(v);
                }
            }
            let mut m = Matrix::from_rows(&f, &rows).expect("square");
            scale_first_row_by_inverse_det(&mut m);
            m
        }
        GroupType::SU => {
            let mut m = random_isometry(g.form().unwrap(), rng);
            scale_first_row_by_inverse_det(&mut m);
            m
        }
        GroupType::Sp => random_isometry(g.form().unwrap(), rng),
        GroupType::SOPlus | GroupType::SOMinus => loop {
            let m = random_isometry(g.form().unwrap(), rng);
            if g.contains(&m).expect("matching sizes") {
                break m;
            }
        },
    }
}

fn enumerate_isometries(
    form: &FormSpec,
    space: &Subspace,
    level: usize,
    rows: &mut Vec<Vector>,
    out: &mut dyn FnMut(&Matrix),
) {
    let f = form.field().clone();
    let d = form.dim();
    if form.kind() == FormKind::Hermitian {
        if level == d {
            out(&Matrix::from_rows(&f, rows).expect("square"));
            return;
        }
        for v in all_in(space).filter(|v| form.value(v) == 1) {
            let next = perp_within(form, space, &[v.clone()]);
            rows[level] = v;
            enumerate_isometries(form, &next, level + 1, rows, out);
        }
        return;
    }
    let (pairs, plane) = layout(form);
    if level == pairs {
        if plane {
            for (a, b) in anisotropic_pairs(form, space) {
                rows[pairs] = a;
                rows[pairs + 1] = b;
                out(&Matrix::from_rows(&f, rows).expect("square"));
            }
        } else {
            out(&Matrix::from_rows(&f, rows).expect("square"));
        }
        return;
    }
    let quadratic = form.kind() == FormKind::Quadratic;
    let vecs: Vec<Vector> = all_in(space).collect();
    for e in vecs
        .iter()
        .filter(|v| v.iter().any(|&x| x != 0) && (!quadratic || form.value(v) == 0))
    {
        for y in vecs.iter().filter(|y| form.bilinear(e, y) == 1) {
            if quadratic && form.value(y) != 0 {
                continue;
            }
            let next = perp_within(form, space, &[e.clone(), y.clone()]);
            rows[level] = e.clone();
            rows[d - 1 - level] = y.clone();
            enumerate_isometries(form, &next, level + 1, rows, out);
        }
    }
}

fn enumerate_gl(
    f: &std::sync::Arc<FieldSpec>,
    d: usize,
    span: &Subspace,
    rows: &mut Vec<Vector>,
    out: &mut dyn FnMut(&Matrix),
) {
    if rows.len() == d {
        out(&Matrix::from_rows(f, rows).expect("square"));
        return;
    }
    let full = Subspace::full(f, d);
    for v in all_in(&full).filter(|v| !span.contains(v)) {
        let next = span.sum(&Subspace::from_vectors(f, d, &[v.clone()])).unwrap();
        rows.push(v);
        enumerate_gl(f, d, &next, rows, out);
        rows.pop();
    }
}

/// Calls `out` on every element of `G`, provided `|G| ≤ cap`.
pub fn enumerate_group(
    g: &GroupSpec,
    cap: u64,
    out: &mut dyn FnMut(&Matrix),
) -> Result<(), GroupError> {
    let size = g.order().to_u64().unwrap_or(u64::MAX);
    if size > cap {
        return Err(GroupError::CapExceeded { size, cap });
    }
    let f = g.field().clone();
    let d = g.dim();
    let mut filtered = |m: &Matrix| {
        if g.contains(m).expect("matching sizes") {
            out(m);
        }
    };
    match g.group_type() {
        GroupType::SL => {
            enumerate_gl(&f, d, &Subspace::zero(&f, d), &mut Vec::new(), &mut filtered)
        }
        _ => {
            let form = g.form().unwrap();
            let mut rows = vec![Vec::new(); d];
            enumerate_isometries(form, &Subspace::full(&f, d), 0, &mut rows, &mut filtered);
        }
    }
    Ok(())
}

/// Enumerates the full isometry group of a standard form.
pub fn enumerate_isometry_group(form: &FormSpec, out: &mut dyn FnMut(&Matrix)) {
    let mut rows = vec![Vec::new(); form.dim()];
    let full = Subspace::full(form.field(), form.dim());
    enumerate_isometries(form, &full, 0, &mut rows, out);
}

/// Enumerates GL_d over `f`.
pub fn enumerate_general_linear(
    f: &std::sync::Arc<FieldSpec>,
    d: usize,
    out: &mut dyn FnMut(&Matrix),
) {
    enumerate_gl(f, d, &Subspace::zero(f, d), &mut Vec::new(), out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clgroup::{group_order, GroupKind};
    use crate::forms::{standard_form, Sign};
    use crate::gfield::field_of_order;
    use num_traits::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn count_isometries(x: GroupType, d: usize, q: u64) -> u64 {
        let form = standard_form(x, d, q).unwrap();
        let mut n = 0;
        enumerate_isometry_group(&form, &mut |m| {
            assert!(form.is_isometry(m));
            n += 1;
        });
        n
    }

    #[test]
    fn enumeration_matches_order_formulas() {
        assert_eq!(count_isometries(GroupType::Sp, 2, 3), 24);
        assert_eq!(count_isometries(GroupType::Sp, 4, 2), 720);
        assert_eq!(count_isometries(GroupType::SU, 2, 2), 18);
        assert_eq!(count_isometries(GroupType::SOPlus, 2, 3), 4);
        assert_eq!(count_isometries(GroupType::SOMinus, 2, 3), 8);
        assert_eq!(count_isometries(GroupType::SOPlus, 4, 2), 72);
        assert_eq!(count_isometries(GroupType::SOMinus, 4, 2), 120);
        let f = field_of_order(3).unwrap();
        let mut n = 0;
        enumerate_general_linear(&f, 2, &mut |_| n += 1);
        assert_eq!(n, 48);
    }

    #[test]
    fn enumerate_group_respects_membership() {
        for (x, d, q) in [
            (GroupType::SL, 2, 3),
            (GroupType::SU, 2, 3),
            (GroupType::SOPlus, 4, 2),
            (GroupType::SOMinus, 4, 3),
        ] {
            let g = GroupSpec::with_dim(x, d, q).unwrap();
            let mut n = 0u64;
            enumerate_group(&g, DEFAULT_GROUP_CAP, &mut |_| n += 1).unwrap();
            assert_eq!(n, g.order().to_u64().unwrap(), "{g}");
        }
        let big = GroupSpec::new(GroupType::SL, 2, 4).unwrap();
        assert!(matches!(
            enumerate_group(&big, 1000, &mut |_| {}),
            Err(GroupError::CapExceeded { .. })
        ));
    }

    #[test]
    fn samples_lie_in_the_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for x in GroupType::ALL {
            for (n, q) in [(2usize, 2u64), (2, 3), (3, 4)] {
                let g = GroupSpec::new(x, n, q).unwrap();
                for _ in 0..20 {
                    let m = uniform_element(&g, &mut rng);
                    assert!(g.contains(&m).unwrap(), "{g}");
                }
            }
        }
    }

    /// Chi-square statistic of the empirical distribution against uniform.
    fn chi_square(g: &GroupSpec, draws: usize, seed: u64) -> (f64, usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts: HashMap<Matrix, u64> = HashMap::new();
        enumerate_group(g, DEFAULT_GROUP_CAP, &mut |m| {
            counts.insert(m.clone(), 0);
        })
        .unwrap();
        let cells = counts.len();
        for _ in 0..draws {
            let m = uniform_element(g, &mut rng);
            *counts.get_mut(&m).expect("sample outside the enumeration") += 1;
        }
        let expected = draws as f64 / cells as f64;
        let stat = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        (stat, cells - 1)
    }

    #[test]
    fn sp2_3_sampler_is_uniform() {
        let g = GroupSpec::with_dim(GroupType::Sp, 2, 3).unwrap();
        let (stat, df) = chi_square(&g, 100_000, 51);
        assert_eq!(df, 23);
        // Upper 0.1% point of chi-square with 23 degrees of freedom is 49.73.
        assert!(stat < 49.73, "chi-square {stat}");
    }

    #[test]
    fn gu2_2_sampler_is_uniform() {
        let form = standard_form(GroupType::SU, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let mut counts: HashMap<Matrix, u64> = HashMap::new();
        enumerate_isometry_group(&form, &mut |m| {
            counts.insert(m.clone(), 0);
        });
        assert_eq!(counts.len(), 18);
        let draws = 100_000;
        for _ in 0..draws {
            *counts.get_mut(&random_isometry(&form, &mut rng)).unwrap() += 1;
        }
        let stat: f64 = counts
            .values()
            .map(|&c| (c as f64 - draws as f64 / 18.0).powi(2) / (draws as f64 / 18.0))
            .sum();
        // Upper 0.1% point with 17 degrees of freedom is 40.79.
        assert!(stat < 40.79, "chi-square {stat}");
    }

    #[test]
    fn orthogonal_orders_cross_check() {
        let o4m = group_order(GroupKind::O(Sign::Minus), 4, 2).unwrap();
        assert_eq!(o4m.to_u64().unwrap(), 120);
    }
}
