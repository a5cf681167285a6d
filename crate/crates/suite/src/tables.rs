//! The deleted permutation module, the per-class bound ledger and the
//! broad-brush margins.

use goodpair::bounds::{
    broadbrush_margin, cent_ratio_grid, class_contribution, leading_term, Column,
};
use goodpair::clgroup::GroupType;
use goodpair::ppdgood::check_admissible;
use goodpair::symmod::{
    c9_alt_contribution, good_cycle_type_audit, partitions, DeletedModule, SignedPerm,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::{prime_powers, Check};

fn fix_dim_sweep() -> Check {
    let mut checked = 0u64;
    let mut bad = Vec::new();
    for ell in 3..=12 {
        for p in [2u64, 3, 5, 7] {
            let Ok(module) = DeletedModule::new(ell, p) else { continue };
            if module.regime().is_err() {
                continue;
            }
            let signs: &[i8] = if p == 2 { &[1] } else { &[1, -1] };
            for parts in partitions(ell) {
                for &a in signs {
                    let sp = SignedPerm::from_cycle_type(&parts, a).expect("valid cycle type");
                    checked += 1;
                    match (module.fix_dim_direct(&sp), module.fix_dim_formula(&sp)) {
                        (Ok(d), Ok(f)) if d == f => {}
                        (d, f) => bad.push(format!("ℓ={ell} p={p} {parts:?} sign {a}: {d:?} vs {f:?}")),
                    }
                }
            }
        }
    }
    let mut detail = format!("{checked} signed cycle types, {} discrepancies", bad.len());
    if let Some(b) = bad.first() {
        detail.push_str(&format!(", first {b}"));
    }
    Check::new("fixed dimension direct = formula, ℓ <= 12", bad.is_empty(), detail)
}

pub(crate) fn deleted_module() -> Vec<Check> {
    let mut checks = vec![fix_dim_sweep()];
    for (n, p, ell) in [(4, 5, 10), (4, 2, 10), (6, 7, 13)] {
        let label = format!("unique good type (n+1)1^(ℓ-n-1) for (n,p,ℓ) = ({n},{p},{ell})");
        checks.push(match good_cycle_type_audit(n, p, ell) {
            Ok(a) => Check::new(
                label,
                a.matches_expected && a.formula_agrees,
                format!(
                    "Φ = {:?}, {} partitions, good types {:?}, expected {:?}",
                    a.phi,
                    a.partitions,
                    a.good_types,
                    a.expected_type
                ),
            ),
            Err(e) => Check::error(label, e),
        });
    }
    checks
}

fn dual_path_grid() -> Check {
    let mut cells = 0u64;
    let mut bad = Vec::new();
    for x in GroupType::ALL {
        for n in 2..=30 {
            for q in prime_powers(9) {
                if check_admissible(x, n, q).is_err() {
                    continue;
                }
                let tildes: &[bool] = if x == GroupType::Sp { &[false, true] } else { &[false] };
                for &tilde in tildes {
                    for i in 2..=9 {
                        cells += 1;
                        match class_contribution(i, x, n, q, tilde) {
                            Ok(e) if e.agrees => {}
                            Ok(e) => bad.push(format!("{x} n={n} q={q} class {i}: {} vs {}", e.value, e.lemma_value)),
                            Err(e) => bad.push(format!("{x} n={n} q={q} class {i}: {e}")),
                        }
                    }
                }
            }
        }
    }
    let mut detail = format!("{cells} cells, {} disagreements", bad.len());
    if let Some(b) = bad.first() {
        detail.push_str(&format!(", first {b}"));
    }
    Check::new("tabulated cells = class estimates, n <= 30, q <= 9", bad.is_empty(), detail)
}

fn leading_constants() -> Check {
    let expected = [
        (Column::SL, (21, 2)),
        (Column::SU, (9, 1)),
        (Column::Sp, (37, 10)),
        (Column::SpTilde, (37, 10)),
        (Column::SO, (53, 5)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (column, (a, b)) in expected {
        let lead = leading_term(column);
        let want = BigRational::new(BigInt::from(a), BigInt::from(b));
        ok &= lead.coeff == want;
        parts.push(format!("{column:?}: {}·q^({})", lead.coeff, lead.exponent));
    }
    Check::new("leading constants 21/2, 9, 37/10, 53/5", ok, parts.join(", "))
}

fn cent_ratio_check() -> Check {
    let checks = cent_ratio_grid(30, 9);
    let bad: Vec<String> = checks
        .iter()
        .filter(|c| !c.holds)
        .map(|c| format!("{} n={} q={}: ratio {} > bound {}", c.group, c.n, c.q, c.ratio, c.bound))
        .collect();
    Check::new(
        "centralizer ratio bound on the admissible grid",
        bad.is_empty(),
        format!("{} points, {} failures{}", checks.len(), bad.len(), if bad.is_empty() { String::new() } else { format!(": {}", bad.join("; ")) }),
    )
}

fn alt_contribution_grid() -> Check {
    let mut points = 0u64;
    let mut bad = Vec::new();
    for x in [GroupType::Sp, GroupType::SOPlus, GroupType::SOMinus] {
        for n in (2..=30).step_by(2) {
            for q in prime_powers(9) {
                for ell in [2 * n + 1, 2 * n + 2] {
                    if ell < 7 || check_admissible(x, n, q).is_err() {
                        continue;
                    }
                    points += 1;
                    match c9_alt_contribution(x, n, q, ell) {
                        Ok(c) if c.bound_ok => {}
                        Ok(c) => bad.push(format!("{x} n={n} q={q} ℓ={ell}: {} >= {}", c.value, c.bound)),
                        Err(e) => bad.push(format!("{x} n={n} q={q} ℓ={ell}: {e}")),
                    }
                }
            }
        }
    }
    Check::new(
        "alternating-group contribution below q^(-n^2+4n+3)",
        bad.is_empty(),
        format!("{points} configurations, {} failures{}", bad.len(), bad.first().map_or(String::new(), |b| format!(", first {b}"))),
    )
}

pub(crate) fn bound_ledger() -> Vec<Check> {
    vec![dual_path_grid(), leading_constants(), cent_ratio_check(), alt_contribution_grid()]
}

pub(crate) fn margins() -> Vec<Check> {
    [(GroupType::Sp, 20, 2), (GroupType::SL, 20, 4)]
        .into_iter()
        .map(|(x, n, q)| {
            let label = format!("positive margin for {x}, n={n}, q={q}");
            match broadbrush_margin(x, n, q) {
                Ok(m) => Check::new(
                    label,
                    m.positive,
                    format!(
                        "margin ≈ {:.3e}, all table conditions met: {}",
                        m.margin.to_f64().unwrap_or(f64::NAN),
                        m.conditions_met
                    ),
                ),
                Err(e) => Check::error(label, e),
            }
        })
        .collect()
}
