//! Construction and verification of good elements.

use std::fmt::Write as _;

use super::{check_admissible, phi_set, torus_order_u64, PpdError};
use crate::clgroup::{GroupSpec, GroupType};
use crate::forms::{
    invariant_form_solve, orth_type, orthogonal_sum, standard_form, standardize, FormKind,
    FormSolve, FormSpec, Sign,
};
use crate::gfield::{ext_field_with_limit, FieldElement};
use crate::matspace::{
    commutator_space, fixed_space, is_irreducible_on, mult_matrix, Matrix, Subspace,
};

/// An element `t` of `X_{2n}(q)` with an n-dimensional fixed space `U`,
/// acting irreducibly on the complement `W = [V, t]`, together with the
/// cyclic torus through it.
#[derive(Clone, Debug)]
pub struct GoodElement {
    t: Matrix,
    group: GroupSpec,
    m: u64,
    u: Subspace,
    w: Subspace,
    zeta: FieldElement,
    t_on_w: Matrix,
    torus: Matrix,
    torus_order: u64,
    u_type: Option<Sign>,
    w_type: Option<Sign>,
    in_phi: bool,
}

impl GoodElement {
    pub fn matrix(&self) -> &Matrix {
        &self.t
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    /// Fixed space `U`.
    pub fn fixed(&self) -> &Subspace {
        &self.u
    }

    /// Moving space `W = [V, t]`.
    pub fn moving(&self) -> &Subspace {
        &self.w
    }

    /// The field element ζ whose multiplication matrix is `t` on `W`.
    pub fn zeta(&self) -> &FieldElement {
        &self.zeta
    }

    /// Multiplication by ζ on GF(q^{δn}) over GF(q^δ).
    pub fn mult_matrix(&self) -> &Matrix {
        &self.t_on_w
    }

    /// A generator of the cyclic torus `T` containing `t`, with `t` a power of it.
    pub fn torus_generator(&self) -> &Matrix {
        &self.torus
    }

    pub fn torus_order(&self) -> u64 {
        self.torus_order
    }

    /// All elements of the torus `T`.
    pub fn torus_elements(&self) -> Vec<Matrix> {
        let mut out = Vec::with_capacity(self.torus_order as usize);
        let mut x = self.group.identity();
        for _ in 0..self.torus_order {
            out.push(x.clone());
            x = x.mul(&self.torus);
        }
        out
    }

    pub fn u_type(&self) -> Option<Sign> {
        self.u_type
    }

    pub fn w_type(&self) -> Option<Sign> {
        self.w_type
    }

    /// Whether the order lies in Φ^X(n,q). False only for torus elements built
    /// for the degenerate n = 2 cases.
    pub fn in_phi(&self) -> bool {
        self.in_phi
    }

    /// The conjugate `t^g = g⁻¹tg` with `U^g = U·g` and `W^g = W·g`.
    pub fn conjugate(&self, g: &Matrix) -> Result<GoodElement, PpdError> {
        let g_inv = g.inverse()?;
        let mut out = self.clone();
        out.t = self.t.conjugate_by(g, &g_inv);
        out.torus = self.torus.conjugate_by(g, &g_inv);
        out.u = self.u.image(g);
        out.w = self.w.image(g);
        Ok(out)
    }

    /// Re-checks every defining property, returning the first failure.
    pub fn verify(&self) -> Result<(), PpdError> {
        let fail = |what: &str| Err(PpdError::Postcondition(what.to_string()));
        let g = &self.group;
        let n = g.n();
        if !g.contains(&self.t)? {
            return fail("t is not in G");
        }
        if !g.contains(&self.torus)? {
            return fail("torus generator is not in G");
        }
        if self.t.order_dividing(self.m) != Some(self.m) {
            return fail("order of t differs from m");
        }
        if self.torus.order_dividing(self.torus_order) != Some(self.torus_order) {
            return fail("torus generator has the wrong order");
        }
        if self.torus.pow(self.torus_order / self.m) != self.t {
            return fail("t is not the expected power of the torus generator");
        }
        if self.in_phi && !phi_set(g.group_type(), n, g.q())?.contains(&self.m) {
            return fail("m is not in the set of good orders");
        }
        if fixed_space(&self.t) != self.u || self.u.dim() != n {
            return fail("fixed space is not U of dimension n");
        }
        if fixed_space(&self.torus) != self.u {
            return fail("torus does not fix U pointwise");
        }
        if commutator_space(&self.t) != self.w || self.w.dim() != n {
            return fail("commutator space is not W of dimension n");
        }
        if !is_irreducible_on(&self.t, &self.w)? {
            return fail("t is reducible on W");
        }
        if let Some(form) = g.form() {
            if form.perp(&self.w) != self.u {
                return fail("U is not the perp of W");
            }
            if let Some(eps) = g.group_type().sign() {
                let wt = orth_type(&form.restrict(&self.w))?.sign;
                let ut = orth_type(&form.restrict(&self.u))?.sign;
                if wt != Sign::Minus || Some(wt) != self.w_type {
                    return fail("W is not of minus type");
                }
                if ut != eps.flip() || Some(ut) != self.u_type {
                    return fail("U does not have type -ε");
                }
            }
        }
        Ok(())
    }

    /// Text serialization: group header, order, then `t` and the bases of `U`
    /// and `W` as matrix texts.
    pub fn to_text(&self) -> String {
        let g = &self.group;
        let mut s = String::new();
        writeln!(s, "group {} {} {}", g.group_type(), g.n(), g.q()).unwrap();
        writeln!(s, "m {}", self.m).unwrap();
        for (label, m) in [("t", &self.t), ("U", self.u.basis()), ("W", self.w.basis())] {
            writeln!(s, "{label}").unwrap();
            s.push_str(&m.to_text());
        }
        s
    }
}

/// A good element of order `m ∈ Φ^X(n,q)` in `G = X_{2n}(q)`.
///
/// `t` is built from ζ = g^{(q^{δn}−1)/m} for the stored generator `g` of
/// GF(q^{δn}), acting on `W` by multiplication, and is embedded in the
/// standard form of `G` through an orthogonal decomposition `U ⊥ W`.
pub fn build_good_element(g: &GroupSpec, m: u64) -> Result<GoodElement, PpdError> {
    let (x, n, q) = (g.group_type(), g.n(), g.q());
    check_admissible(x, n, q)?;
    let phi = phi_set(x, n, q)?;
    if phi.is_empty() {
        return Err(PpdError::EmptyPhi { x, n, q });
    }
    if !phi.contains(&m) {
        return Err(PpdError::NotInPhi { x, n, q, m });
    }
    if (q - 1) % m == 0 {
        return Err(PpdError::ScalarOnW { m, q });
    }
    construct(g, m, true)
}

/// An element of the cyclic torus of a good element, of any order `m`
/// dividing the torus order for which it is still irreducible on `W`.
/// Used where Φ only supplies orders that are scalar on `W`.
pub fn build_torus_element(g: &GroupSpec, m: u64) -> Result<GoodElement, PpdError> {
    let (x, n, q) = (g.group_type(), g.n(), g.q());
    check_admissible(x, n, q)?;
    let in_phi = phi_set(x, n, q)?.contains(&m) && (q - 1) % m != 0;
    construct(g, m, in_phi)
}

/// The element used when no order is requested: the least `m ∈ Φ` that is
/// not scalar on `W`, or a generator of the torus when every element of Φ
/// is (Φ = {2} for n = 2, q = 3).
pub fn default_element(g: &GroupSpec) -> Result<GoodElement, PpdError> {
    let (x, n, q) = (g.group_type(), g.n(), g.q());
    let phi = phi_set(x, n, q)?;
    if phi.is_empty() {
        return Err(PpdError::EmptyPhi { x, n, q });
    }
    match phi.iter().find(|&&m| (q - 1) % m != 0) {
        Some(&m) => build_good_element(g, m),
        None => build_torus_element(g, torus_order_u64(x, n, q)?),
    }
}

/// Solves for a nondegenerate form on `W` preserved by `gen` and returns
/// the basis change to the standard form.
fn standard_w_form(
    x: GroupType,
    gen: &Matrix,
) -> Result<(Matrix, FormSpec), PpdError> {
    let kind = match x {
        GroupType::SU => FormKind::Hermitian,
        GroupType::Sp => FormKind::Symplectic,
        _ => FormKind::Quadratic,
    };
    let form = match invariant_form_solve(std::slice::from_ref(gen), kind)? {
        FormSolve::Found(f) => f,
        other => return Err(PpdError::NoInvariantForm(format!("{other:?}"))),
    };
    Ok(standardize(&form)?)
}

fn construct(g: &GroupSpec, m: u64, in_phi: bool) -> Result<GoodElement, PpdError> {
    let (x, n, q) = (g.group_type(), g.n(), g.q());
    let torus_order = torus_order_u64(x, n, q)?;
    if torus_order % m != 0 {
        return Err(PpdError::NotInTorus { m, torus: torus_order });
    }
    let k = g.field().clone();
    let big = ext_field_with_limit(&k, n as u32, u32::MAX as u64)?;
    let gen = FieldElement::generator(&big);
    let zeta_t = gen.pow((big.order() - 1) / torus_order);
    let zeta = zeta_t.pow(torus_order / m);
    let tau_w = mult_matrix(&zeta_t, &k)?;
    let t_on_w = mult_matrix(&zeta, &k)?;
    if !is_irreducible_on(&t_on_w, &Subspace::full(&k, n))? {
        return Err(PpdError::ReducibleOnW { m });
    }

    let (t, torus, u_type, w_type) = if x == GroupType::SL {
        let id = Matrix::identity(&k, n);
        (
            Matrix::block_diag(&k, &[&id, &t_on_w]),
            Matrix::block_diag(&k, &[&id, &tau_w]),
            None,
            None,
        )
    } else {
        let (pw, std_w) = standard_w_form(x, &tau_w)?;
        let pw_inv = pw.inverse()?;
        let w_type = x.sign().map(|_| orth_type(&std_w).map(|o| o.sign)).transpose()?;
        if w_type == Some(Sign::Plus) {
            return Err(PpdError::Postcondition("W is not of minus type".into()));
        }
        let u_group = match x.sign() {
            Some(eps) => GroupType::orthogonal(eps.flip()),
            None => x,
        };
        let std_u = standard_form(u_group, n, q)?;
        let u_type = x.sign().map(|eps| eps.flip());
        let sum = orthogonal_sum(&std_u, &std_w)?;
        let (p, std) = standardize(&sum)?;
        if Some(&std) != g.form() {
            return Err(PpdError::Postcondition(
                "U ⊥ W does not have the type of G".into(),
            ));
        }
        let p_inv = p.inverse()?;
        let id = Matrix::identity(&k, n);
        let embed = |a: &Matrix| {
            let on_w = pw.mul(a).mul(&pw_inv);
            p.mul(&Matrix::block_diag(&k, &[&id, &on_w])).mul(&p_inv)
        };
        (embed(&t_on_w), embed(&tau_w), u_type, w_type)
    };

    let el = GoodElement {
        u: fixed_space(&t),
        w: commutator_space(&t),
        t,
        group: g.clone(),
        m,
        zeta,
        t_on_w,
        torus,
        torus_order,
        u_type,
        w_type,
        in_phi,
    };
    el.verify()?;
    Ok(el)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clgroup::uniform_element;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sp8_2_order_five() {
        let g = GroupSpec::new(GroupType::Sp, 4, 2).unwrap();
        let el = build_good_element(&g, 5).unwrap();
        assert_eq!(el.fixed().dim(), 4);
        assert_eq!(el.order(), 5);
        assert!(el.in_phi());
    }

    #[test]
    fn sl4_4_order_five() {
        let g = GroupSpec::new(GroupType::SL, 2, 4).unwrap();
        let el = build_good_element(&g, 5).unwrap();
        assert_eq!(el.fixed().dim(), 2);
        assert_eq!(el.matrix().det().unwrap(), 1);
    }

    #[test]
    fn so8_plus_2_types() {
        let g = GroupSpec::new(GroupType::SOPlus, 4, 2).unwrap();
        let el = build_good_element(&g, 5).unwrap();
        assert_eq!(el.w_type(), Some(Sign::Minus));
        assert_eq!(el.u_type(), Some(Sign::Minus));
        let g = GroupSpec::new(GroupType::SOMinus, 4, 3).unwrap();
        let el = build_good_element(&g, 5).unwrap();
        assert_eq!(el.u_type(), Some(Sign::Plus));
    }

    #[test]
    fn unitary_element() {
        let g = GroupSpec::new(GroupType::SU, 3, 3).unwrap();
        let el = build_good_element(&g, 7).unwrap();
        assert_eq!(el.torus_order(), 7);
        assert_eq!(el.torus_elements().len(), 7);
    }

    #[test]
    fn degenerate_order_is_rejected() {
        let g = GroupSpec::new(GroupType::Sp, 2, 3).unwrap();
        assert_eq!(
            build_good_element(&g, 2).unwrap_err(),
            PpdError::ScalarOnW { m: 2, q: 3 }
        );
        let el = build_torus_element(&g, 4).unwrap();
        assert!(!el.in_phi());
        assert!(build_torus_element(&g, 2).is_err());
    }

    #[test]
    fn default_element_falls_back_to_the_torus() {
        let g = GroupSpec::new(GroupType::Sp, 2, 3).unwrap();
        let el = default_element(&g).unwrap();
        assert_eq!((el.order(), el.in_phi()), (4, false));
        let g = GroupSpec::new(GroupType::Sp, 2, 2).unwrap();
        assert_eq!(default_element(&g).unwrap().order(), 3);
    }

    #[test]
    fn not_in_phi_is_rejected() {
        let g = GroupSpec::new(GroupType::Sp, 4, 2).unwrap();
        assert!(matches!(
            build_good_element(&g, 3),
            Err(PpdError::NotInPhi { .. })
        ));
        let su = GroupSpec::new(GroupType::SU, 3, 2).unwrap();
        assert!(matches!(build_good_element(&su, 3), Err(PpdError::EmptyPhi { .. })));
    }

    #[test]
    fn conjugates_stay_good() {
        let g = GroupSpec::new(GroupType::Sp, 2, 2).unwrap();
        let el = build_good_element(&g, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        for _ in 0..10 {
            let x = uniform_element(&g, &mut rng);
            el.conjugate(&x).unwrap().verify().unwrap();
        }
        assert!(el.to_text().starts_with("group Sp 2 2\nm 3\nt\n"));
    }
}
