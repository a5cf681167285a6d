use super::{anisotropic_nu, standard_form, FormError, FormKind, FormSpec};
use crate::clgroup::GroupType;
use crate::gfield::{Fe, FieldSpec};
use crate::matspace::{Matrix, Subspace};

type Vector = Vec<Fe>;

fn comb(f: &FieldSpec, coeffs: &[Fe], vecs: &[Vector]) -> Vector {
    let mut out = vec![0; vecs[0].len()];
    for (&c, v) in coeffs.iter().zip(vecs) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(v) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

fn axpy(f: &FieldSpec, y: &mut Vector, c: Fe, x: &[Fe]) {
    if c == 0 {
        return;
    }
    for (o, &v) in y.iter_mut().zip(x) {
        *o = f.add(*o, f.mul(c, v));
    }
}

fn scaled(f: &FieldSpec, c: Fe, x: &[Fe]) -> Vector {
    x.iter().map(|&v| f.mul(c, v)).collect()
}

/// All coefficient tuples of length `k` over `f`, zero tuple excluded.
fn tuples(f: &FieldSpec, k: usize) -> impl Iterator<Item = Vec<Fe>> + '_ {
    let q = f.order();
    (1..q.pow(k as u32)).map(move |mut c| {
        (0..k)
            .map(|_| {
                let x = (c % q) as Fe;
                c /= q;
                x
            })
            .collect()
    })
}

/// Re-spans a list of vectors after projection.
fn respan(f: &std::sync::Arc<FieldSpec>, d: usize, vecs: &[Vector]) -> Vec<Vector> {
    Subspace::from_vectors(f, d, vecs).basis().row_vecs()
}

/// A nonzero singular vector in the span of `rest`, if one exists.
/// Any three-dimensional space contains one, so only the span of the first
/// three vectors is searched.
fn find_singular(form: &FormSpec, rest: &[Vector]) -> Option<Vector> {
    let f = form.field();
    if let Some(v) = rest.iter().find(|v| form.value(v) == 0) {
        return Some(v.clone());
    }
    let k = rest.len().min(3);
    tuples(f, k)
        .map(|c| comb(f, &c, &rest[..k]))
        .find(|v| form.value(v) == 0)
}

/// Greedy symplectic basis `(e_i, f_i)` with `B(e_i, f_i) = 1` for an
/// alternating Gram matrix (a symplectic form, or a quadratic form in
/// characteristic 2).
pub(crate) fn symplectic_pairs(form: &FormSpec) -> Result<Vec<(Vector, Vector)>, FormError> {
    let f = form.field().clone();
    let d = form.dim();
    let mut rest = Subspace::full(&f, d).basis().row_vecs();
    let mut pairs = Vec::new();
    while !rest.is_empty() {
        let e = rest[0].clone();
        let Some(other) = rest.iter().find(|v| form.bilinear(&e, v) != 0) else {
            return Err(FormError::Degenerate);
        };
        let fv = scaled(&f, f.inv(form.bilinear(&e, other)), other);
        rest = project_alternating(form, &rest, &e, &fv);
        pairs.push((e, fv));
    }
    Ok(pairs)
}

/// Projection onto `⟨e, f⟩^⊥` for an alternating form with `B(e, f) = 1`.
fn project_alternating(form: &FormSpec, rest: &[Vector], e: &[Fe], fv: &[Fe]) -> Vec<Vector> {
    let f = form.field();
    let projected: Vec<Vector> = rest
        .iter()
        .map(|s| {
            let mut s2 = s.clone();
            axpy(f, &mut s2, f.neg(form.bilinear(s, fv)), e);
            axpy(f, &mut s2, form.bilinear(s, e), fv);
            s2
        })
        .collect();
    respan(f, form.dim(), &projected)
}

/// Projection onto `⟨e, f⟩^⊥` for a symmetric form with `B(e, f) = 1` and
/// `e`, `f` singular.
fn project_symmetric(form: &FormSpec, rest: &[Vector], e: &[Fe], fv: &[Fe]) -> Vec<Vector> {
    let f = form.field();
    let projected: Vec<Vector> = rest
        .iter()
        .map(|s| {
            let mut s2 = s.clone();
            axpy(f, &mut s2, f.neg(form.bilinear(s, fv)), e);
            axpy(f, &mut s2, f.neg(form.bilinear(s, e)), fv);
            s2
        })
        .collect();
    respan(f, form.dim(), &projected)
}

/// Basis change `P` (rows are the new basis vectors) taking a nondegenerate
/// form to the standard form of the same kind, dimension and type; the form
/// transported by `P` equals the returned standard form.
pub fn standardize(form: &FormSpec) -> Result<(Matrix, FormSpec), FormError> {
    if !form.is_nondegenerate() {
        return Err(FormError::Degenerate);
    }
    let f = form.field().clone();
    let d = form.dim();
    let (basis, x) = match form.kind() {
        FormKind::Symplectic => {
            let pairs = symplectic_pairs(form)?;
            let mut basis = vec![Vec::new(); d];
            for (i, (e, fv)) in pairs.into_iter().enumerate() {
                basis[i] = e;
                basis[d - 1 - i] = fv;
            }
            (basis, GroupType::Sp)
        }
        FormKind::Hermitian => (orthonormal_basis(form)?, GroupType::SU),
        FormKind::Quadratic => quadratic_basis(form)?,
    };
    let p = Matrix::from_rows(&f, &basis)?;
    let q = match form.kind() {
        FormKind::Hermitian => f.base().expect("quadratic extension").order(),
        _ => f.order(),
    };
    let std = standard_form(x, d, q)?;
    assert_eq!(form.transport(&p), std, "standardization produced a wrong basis");
    Ok((p, std))
}

fn quadratic_basis(form: &FormSpec) -> Result<(Vec<Vector>, GroupType), FormError> {
    let f = form.field().clone();
    let d = form.dim();
    if d % 2 == 1 {
        return Err(FormError::OddDimension(d));
    }
    let mut rest = Subspace::full(&f, d).basis().row_vecs();
    let mut basis = vec![Vec::new(); d];
    let mut i = 0;
    while !rest.is_empty() {
        let Some(e) = find_singular(form, &rest) else {
            // An anisotropic plane: match it against x² + xy + νy².
            if rest.len() != 2 {
                return Err(FormError::Degenerate);
            }
            let nu = anisotropic_nu(&f);
            let plane: Vec<Vector> = tuples(&f, 2).map(|c| comb(&f, &c, &rest)).collect();
            let (a, b) = plane
                .iter()
                .filter(|a| form.value(a) == 1)
                .find_map(|a| {
                    plane
                        .iter()
                        .find(|b| form.bilinear(a, b) == 1 && form.value(b) == nu)
                        .map(|b| (a.clone(), b.clone()))
                })
                .ok_or(FormError::Degenerate)?;
            basis[i] = a;
            basis[i + 1] = b;
            return Ok((basis, GroupType::SOMinus));
        };
        let Some(other) = rest.iter().find(|v| form.bilinear(&e, v) != 0) else {
            return Err(FormError::Degenerate);
        };
        let mut fv = scaled(&f, f.inv(form.bilinear(&e, other)), other);
        let qf = form.value(&fv);
        axpy(&f, &mut fv, f.neg(qf), &e);
        rest = project_symmetric(form, &rest, &e, &fv);
        basis[i] = e;
        basis[d - 1 - i] = fv;
        i += 1;
    }
    Ok((basis, GroupType::SOPlus))
}

fn orthonormal_basis(form: &FormSpec) -> Result<Vec<Vector>, FormError> {
    let f = form.field().clone();
    let d = form.dim();
    let mut rest = Subspace::full(&f, d).basis().row_vecs();
    let mut basis = Vec::with_capacity(d);
    while !rest.is_empty() {
        let v = rest
            .iter()
            .find(|v| form.value(v) != 0)
            .cloned()
            .or_else(|| {
                (0..rest.len()).find_map(|i| {
                    (i + 1..rest.len()).find_map(|j| {
                        f.elements().find_map(|c| {
                            let mut w = rest[i].clone();
                            axpy(&f, &mut w, c, &rest[j]);
                            (form.value(&w) != 0).then_some(w)
                        })
                    })
                })
            })
            .ok_or(FormError::Degenerate)?;
        let target = f.inv(form.value(&v));
        let lambda = f
            .elements()
            .find(|&l| f.mul(l, form.sigma(l)) == target)
            .expect("the norm map is surjective");
        let v = scaled(&f, lambda, &v);
        let projected: Vec<Vector> = rest
            .iter()
            .map(|s| {
                let mut s2 = s.clone();
                axpy(&f, &mut s2, f.neg(form.bilinear(s, &v)), &v);
                s2
            })
            .collect();
        rest = respan(&f, d, &projected);
        basis.push(v);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{orth_type, tests::random_invertible};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_input_is_recovered() {
        for (x, d, q) in [
            (GroupType::Sp, 4, 3),
            (GroupType::SOPlus, 4, 2),
            (GroupType::SOMinus, 6, 3),
            (GroupType::SU, 3, 3),
        ] {
            let form = standard_form(x, d, q).unwrap();
            let (p, std) = standardize(&form).unwrap();
            assert_eq!(std, form);
            assert_eq!(form.transport(&p), form);
        }
    }

    #[test]
    fn random_transports_are_standardized() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for (x, d, q) in [
            (GroupType::Sp, 4, 3),
            (GroupType::Sp, 6, 2),
            (GroupType::SOPlus, 4, 3),
            (GroupType::SOMinus, 4, 2),
            (GroupType::SOMinus, 4, 5),
            (GroupType::SOPlus, 6, 4),
            (GroupType::SU, 3, 2),
            (GroupType::SU, 4, 3),
        ] {
            let form = standard_form(x, d, q).unwrap();
            for _ in 0..30 {
                let m = random_invertible(form.field(), d, &mut rng);
                let moved = form.transport(&m);
                let (p, std) = standardize(&moved).unwrap();
                assert_eq!(std, form, "{x:?} d={d} q={q}");
                assert_eq!(moved.transport(&p), std);
                if form.kind() == FormKind::Quadratic {
                    assert_eq!(orth_type(&moved).unwrap().sign, orth_type(&std).unwrap().sign);
                }
            }
        }
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let f = crate::gfield::prime_field(3).unwrap();
        let form = FormSpec::symplectic(Matrix::zero(&f, 2, 2)).unwrap();
        assert_eq!(standardize(&form).unwrap_err(), FormError::Degenerate);
    }
}
