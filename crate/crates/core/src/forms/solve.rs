use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{upper_fold, FormError, FormKind, FormSpec};
use crate::gfield::{Fe, FieldSpec};
use crate::matspace::Matrix;

/// Outcome of solving for an invariant form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormSolve {
    /// A nondegenerate invariant form.
    Found(FormSpec),
    /// Invariant forms exist but every one tried is degenerate.
    OnlyDegenerate { solution_dim: usize },
    /// The constraints admit only the zero form (or, for the pinned system,
    /// no solution at all).
    Inconsistent,
}

impl FormSolve {
    pub fn found(&self) -> Option<&FormSpec> {
        match self {
            FormSolve::Found(f) => Some(f),
            _ => None,
        }
    }
}

/// Exhaustive search over combinations is used up to this many candidates.
const EXHAUSTIVE_LIMIT: u64 = 4096;
const RANDOM_TRIES: usize = 256;

fn unknown_basis(f: &Arc<FieldSpec>, d: usize, kind: FormKind) -> Vec<Matrix> {
    let mut out = Vec::new();
    match kind {
        FormKind::Symplectic => {
            for i in 0..d {
                for j in i + 1..d {
                    let mut e = Matrix::zero(f, d, d);
                    e.set(i, j, 1);
                    e.set(j, i, f.neg(1));
                    out.push(e);
                }
            }
        }
        FormKind::Quadratic => {
            for i in 0..d {
                for j in i..d {
                    let mut e = Matrix::zero(f, d, d);
                    e.set(i, j, 1);
                    out.push(e);
                }
            }
        }
        FormKind::Hermitian => {
            let k = f.base().expect("quadratic extension").order();
            let omega = k as Fe;
            for i in 0..d {
                let mut e = Matrix::zero(f, d, d);
                e.set(i, i, 1);
                out.push(e);
                for j in i + 1..d {
                    for beta in [1, omega] {
                        let mut e = Matrix::zero(f, d, d);
                        e.set(i, j, beta);
                        e.set(j, i, f.pow(beta, k));
                        out.push(e);
                    }
                }
            }
        }
    }
    out
}

fn act(g: &Matrix, e: &Matrix, kind: FormKind) -> Matrix {
    match kind {
        FormKind::Symplectic => g.mul(e).mul(&g.transpose()),
        FormKind::Quadratic => upper_fold(&g.mul(e).mul(&g.transpose())),
        FormKind::Hermitian => {
            let k = g.field().base().expect("quadratic extension").order();
            g.mul(e).mul(&g.transpose().map(|f, x| f.pow(x, k)))
        }
    }
}

/// Field over which the unknown coefficients live.
fn coefficient_field(f: &Arc<FieldSpec>, kind: FormKind) -> Arc<FieldSpec> {
    match kind {
        FormKind::Hermitian => f.base().expect("quadratic extension").clone(),
        _ => f.clone(),
    }
}

/// The residual `g·E − E` over all generators, flattened to coordinates over
/// the coefficient field.
fn residual(gens: &[Matrix], e: &Matrix, kind: FormKind) -> Vec<Fe> {
    let f = e.field();
    let mut out = Vec::new();
    for g in gens {
        let r = act(g, e, kind).sub(e);
        for &x in r.data() {
            match kind {
                FormKind::Hermitian => out.extend(f.coords(x)),
                _ => out.push(x),
            }
        }
    }
    out
}

fn check_gens(gens: &[Matrix]) -> Result<(Arc<FieldSpec>, usize), FormError> {
    let g0 = gens
        .first()
        .ok_or_else(|| FormError::Malformed("no generators".into()))?;
    let d = g0.rows();
    if gens.iter().any(|g| !g.is_square() || g.rows() != d) {
        return Err(FormError::Malformed("generator sizes differ".into()));
    }
    Ok((g0.field().clone(), d))
}

fn build_form(kind: FormKind, m: Matrix) -> FormSpec {
    match kind {
        FormKind::Quadratic => FormSpec::quadratic(m).expect("square"),
        _ => FormSpec {
            kind,
            gram: m,
            quad: None,
        },
    }
}

/// Basis of the space of forms of the given kind invariant under every
/// generator (possibly degenerate ones included).
pub fn invariant_form_space(gens: &[Matrix], kind: FormKind) -> Result<Vec<FormSpec>, FormError> {
    let (f, d) = check_gens(gens)?;
    if kind == FormKind::Hermitian && f.rel_degree() != 2 {
        return Err(FormError::WrongKind("quadratic-extension"));
    }
    let k = coefficient_field(&f, kind);
    let unknowns = unknown_basis(&f, d, kind);
    let columns: Vec<Vec<Fe>> = unknowns.iter().map(|e| residual(gens, e, kind)).collect();
    let system = Matrix::from_rows(&k, &columns)?.transpose();
    let kernel = system.nullspace();
    Ok(kernel
        .basis()
        .row_vecs()
        .iter()
        .map(|x| {
            let m = x
                .iter()
                .zip(&unknowns)
                .fold(Matrix::zero(&f, d, d), |acc, (&c, e)| acc.add(&e.scale(c)));
            build_form(kind, m)
        })
        .collect())
}

fn combine(kind: FormKind, coeffs: &[Fe], space: &[FormSpec]) -> FormSpec {
    let f = space[0].field().clone();
    let d = space[0].dim();
    let m = coeffs.iter().zip(space).fold(Matrix::zero(&f, d, d), |acc, (&c, s)| {
        let part = match s.quad() {
            Some(a) => a.scale(c),
            None => s.gram().scale(c),
        };
        acc.add(&part)
    });
    build_form(kind, m)
}

/// Solves for a nondegenerate form of the given kind preserved by all
/// generators. Basis solutions are tried first, then all combinations when
/// there are few, else seeded random combinations.
pub fn invariant_form_solve(gens: &[Matrix], kind: FormKind) -> Result<FormSolve, FormError> {
    let space = invariant_form_space(gens, kind)?;
    if space.is_empty() {
        return Ok(FormSolve::Inconsistent);
    }
    if let Some(form) = space.iter().find(|s| s.is_nondegenerate()) {
        return Ok(FormSolve::Found(form.clone()));
    }
    let k = coefficient_field(space[0].field(), kind);
    let n = space.len();
    let q = k.order();
    let exhaustive = q.checked_pow(n as u32).filter(|&c| c <= EXHAUSTIVE_LIMIT);
    let found = if let Some(count) = exhaustive {
        (1..count).find_map(|mut c| {
            let coeffs: Vec<Fe> = (0..n)
                .map(|_| {
                    let x = (c % q) as Fe;
                    c /= q;
                    x
                })
                .collect();
            let form = combine(kind, &coeffs, &space);
            form.is_nondegenerate().then_some(form)
        })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        (0..RANDOM_TRIES).find_map(|_| {
            let coeffs: Vec<Fe> = (0..n).map(|_| rng.gen_range(0..q) as Fe).collect();
            let form = combine(kind, &coeffs, &space);
            form.is_nondegenerate().then_some(form)
        })
    };
    Ok(match found {
        Some(form) => FormSolve::Found(form),
        None => FormSolve::OnlyDegenerate { solution_dim: n },
    })
}

/// Solves for an invariant quadratic form whose polarization is the given
/// alternating Gram matrix (characteristic 2). The off-diagonal coefficients
/// are forced to `B(e_i, e_j)`, leaving the diagonal as unknowns.
pub fn pinned_quadratic_solve(gens: &[Matrix], gram: &Matrix) -> Result<FormSolve, FormError> {
    let (f, d) = check_gens(gens)?;
    if f.characteristic() != 2 {
        return Err(FormError::OddCharacteristic);
    }
    if gram.rows() != d || !gram.is_square() {
        return Err(FormError::Malformed("Gram size".into()));
    }
    let mut a0 = Matrix::zero(&f, d, d);
    for i in 0..d {
        for j in i + 1..d {
            a0.set(i, j, gram.get(i, j));
        }
    }
    let mut columns: Vec<Vec<Fe>> = (0..d)
        .map(|i| {
            let mut e = Matrix::zero(&f, d, d);
            e.set(i, i, 1);
            residual(gens, &e, FormKind::Quadratic)
        })
        .collect();
    columns.push(residual(gens, &a0, FormKind::Quadratic));
    let system = Matrix::from_rows(&f, &columns)?.transpose();
    let kernel = system.nullspace();
    // In echelon form a kernel vector with nonzero last coordinate exists iff
    // the last basis row has its pivot there.
    let Some(x) = kernel.basis().row_vecs().into_iter().find(|x| x[d] != 0) else {
        return Ok(FormSolve::Inconsistent);
    };
    let scale = f.inv(x[d]);
    let mut a = a0;
    for i in 0..d {
        a.set(i, i, f.mul(scale, x[i]));
    }
    let form = FormSpec::quadratic(a)?;
    debug_assert!(gens.iter().all(|g| form.is_isometry(g)));
    Ok(FormSolve::Found(form))
}
