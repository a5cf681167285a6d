//! Group orders, Θ estimates, good elements and torus centralizers.

use goodpair::clgroup::{
    brute_force_centralizer_order, class_orbit, enumerate_general_linear, enumerate_isometry_group,
    group_order, theta_inequality_suite, GroupKind, GroupType, DEFAULT_CLASS_CAP,
    DEFAULT_GROUP_CAP,
};
use goodpair::forms::{standard_form, Sign};
use goodpair::gfield::field_of_order;
use goodpair::ppdgood::{build_good_element, check_admissible, phi_set, torus_and_centralizer_order};
use num_bigint::BigUint;

use crate::{element, prime_powers, Check};

fn count_isometries(x: GroupType, dim: usize, q: u64) -> Result<u64, String> {
    let form = standard_form(x, dim, q).map_err(|e| e.to_string())?;
    let mut count = 0;
    enumerate_isometry_group(&form, &mut |_| count += 1);
    Ok(count)
}

fn count_gl(dim: usize, q: u64) -> Result<u64, String> {
    let f = field_of_order(q).map_err(|e| e.to_string())?;
    let mut count = 0;
    enumerate_general_linear(&f, dim, &mut |_| count += 1);
    Ok(count)
}

/// `∏_{i=0}^{d-1} (q^d − q^i)`, the number of ordered bases.
fn ordered_bases(d: u32, q: u64) -> BigUint {
    let qd = BigUint::from(q).pow(d);
    (0..d).map(|i| &qd - BigUint::from(q).pow(i)).product()
}

pub(crate) fn orders() -> Vec<Check> {
    let enumerated: [(&str, GroupKind, u32, u64, u64, Result<u64, String>); 7] = [
        ("GL_2(2)", GroupKind::GL, 2, 2, 6, count_gl(2, 2)),
        ("GL_2(3)", GroupKind::GL, 2, 3, 48, count_gl(2, 3)),
        ("GU_2(2)", GroupKind::GU, 2, 2, 18, count_isometries(GroupType::SU, 2, 2)),
        ("Sp_2(3)", GroupKind::Sp, 2, 3, 24, count_isometries(GroupType::Sp, 2, 3)),
        ("Sp_4(2)", GroupKind::Sp, 4, 2, 720, count_isometries(GroupType::Sp, 4, 2)),
        ("O_2^+(3)", GroupKind::O(Sign::Plus), 2, 3, 4, count_isometries(GroupType::SOPlus, 2, 3)),
        ("O_2^-(3)", GroupKind::O(Sign::Minus), 2, 3, 8, count_isometries(GroupType::SOMinus, 2, 3)),
    ];
    let mut checks = Vec::new();
    for (name, kind, d, q, expected, count) in enumerated {
        let check = match (count, group_order(kind, d, q)) {
            (Ok(c), Ok(formula)) => Check::new(
                name,
                formula == BigUint::from(c) && c == expected,
                format!("enumerated {c}, formula {formula}, expected {expected}"),
            ),
            (Err(e), _) => Check::error(name, e),
            (_, Err(e)) => Check::error(name, e),
        };
        checks.push(check);
    }
    // |Sp_4(3)| = q^{n²} ∏ (q^{2i} − 1) and |SL_4(4)| = (ordered bases)/(q − 1).
    let sp = BigUint::from(3u32).pow(4) * (1..=2u32).map(|i| BigUint::from(3u32).pow(2 * i) - 1u32).product::<BigUint>();
    let sl = ordered_bases(4, 4) / 3u32;
    for (name, kind, d, q, product, expected) in [
        ("Sp_4(3)", GroupKind::Sp, 4, 3, sp, 51_840u64),
        ("SL_4(4)", GroupKind::SL, 4, 4, sl, 987_033_600),
    ] {
        checks.push(match group_order(kind, d, q) {
            Ok(formula) => Check::new(
                name,
                formula == product && product == BigUint::from(expected),
                format!("formula {formula}, product {product}, expected {expected}"),
            ),
            Err(e) => Check::error(name, e),
        });
    }
    checks
}

pub(crate) fn theta_estimates() -> Vec<Check> {
    let s = theta_inequality_suite(30, 9);
    let equalities = s.violations.iter().filter(|v| v.equality).count();
    let mut detail = format!(
        "{} comparisons, {} violations ({} with equal sides)",
        s.checked,
        s.violations.len(),
        equalities
    );
    let mut seen = Vec::new();
    for v in &s.violations {
        if !seen.contains(&v.inequality) {
            seen.push(v.inequality);
            detail.push_str(&format!("; first failure of `{}` at k={}, n={}, q={}", v.inequality, v.k, v.n, v.q));
        }
    }
    vec![Check::new("zero violations for 1 <= k <= n <= 30, q <= 9", s.passed(), detail)]
}

pub(crate) fn good_elements() -> Vec<Check> {
    let mut built = 0;
    let mut failures = Vec::new();
    for x in GroupType::ALL {
        for n in 2..=6 {
            for q in prime_powers(9) {
                if check_admissible(x, n, q).is_err() {
                    continue;
                }
                let g = goodpair::clgroup::GroupSpec::new(x, n, q).expect("admissible");
                for m in phi_set(x, n, q).expect("admissible") {
                    match build_good_element(&g, m).and_then(|el| el.verify()) {
                        Ok(()) => built += 1,
                        Err(e) => failures.push(format!("{g} m={m}: {e}")),
                    }
                }
            }
        }
    }
    let mut detail = format!("{built} elements verified, {} failures", failures.len());
    if !failures.is_empty() {
        detail.push_str(": ");
        detail.push_str(&failures.join("; "));
    }
    vec![Check::new("every m in Φ for n <= 6, q <= 9", failures.is_empty(), detail)]
}

pub(crate) fn torus_centralizers() -> Vec<Check> {
    let mut checks = Vec::new();
    for (x, n, q, expected) in [(GroupType::Sp, 2, 2, 18u64), (GroupType::Sp, 2, 3, 96)] {
        let name = format!("|C(t)| in {x}_{}({q})", 2 * n);
        let result = element(x, n, q).and_then(|t| {
            let brute = brute_force_centralizer_order(t.matrix(), t.group(), DEFAULT_GROUP_CAP)
                .map_err(|e| e.to_string())?;
            let table = torus_and_centralizer_order(x, n, q).map_err(|e| e.to_string())?.centralizer;
            Ok((brute, table))
        });
        checks.push(match result {
            Ok((brute, table)) => Check::new(
                name,
                BigUint::from(brute) == table && brute == expected,
                format!("enumerated {brute}, formula {table}, expected {expected}"),
            ),
            Err(e) => Check::error(name, e),
        });
    }
    for (x, n, q) in [
        (GroupType::Sp, 2, 2),
        (GroupType::Sp, 2, 3),
        (GroupType::SL, 2, 3),
        (GroupType::SL, 2, 4),
    ] {
        let name = format!("torus meets class of t in n elements in {x}_{}({q})", 2 * n);
        let result = element(x, n, q).and_then(|t| {
            let orbit = class_orbit(t.matrix(), t.group(), DEFAULT_CLASS_CAP).map_err(|e| e.to_string())?;
            let torus = t.torus_elements();
            let meet = torus.iter().filter(|m| orbit.contains(m)).count();
            Ok((meet, torus.len(), orbit.len(), t.order()))
        });
        checks.push(match result {
            Ok((meet, torus, class, order)) => Check::new(
                name,
                meet == n,
                format!("t of order {order}: |T| = {torus}, class size {class}, |T ∩ t^G| = {meet}"),
            ),
            Err(e) => Check::error(name, e),
        });
    }
    checks
}
