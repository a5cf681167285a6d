//! Pair classification, exact and sampled p₁, and the quadratic form audit.

use goodpair::bounds::p1_bound;
use goodpair::clgroup::{enumerate_group, uniform_element, GroupType, DEFAULT_GROUP_CAP};
use goodpair::matspace::DEFAULT_POINT_CAP;
use goodpair::pairlab::{
    estimate_p1, oracle_reducible, reducible_subcases, sp_even_so_audit,
    sp_even_so_audit_exhaustive, trial_rng,
};
use goodpair::ppdgood::GoodElement;
use goodpair::matspace::Matrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::{element, Check, Suite};

const PAIR_TRIALS: u64 = 10_000;
const MC_TRIALS: u64 = 100_000;
const CONFIDENCE: f64 = 0.999;

fn name(x: GroupType, n: usize, q: u64) -> String {
    format!("{x}_{}({q})", 2 * n)
}

/// The classifier and the oracle disagree on `(t, t^g)`.
fn mismatch(t: &GoodElement, g: &Matrix) -> Result<bool, String> {
    let classified = !reducible_subcases(t, g).is_empty();
    let oracle = oracle_reducible(t, g, DEFAULT_POINT_CAP).map_err(|e| e.to_string())?;
    Ok(classified != oracle)
}

pub(crate) fn classifier_oracle(suite: &Suite) -> Vec<Check> {
    let mut checks = Vec::new();
    let cases = [
        (GroupType::SL, 2, 4),
        (GroupType::Sp, 2, 3),
        (GroupType::SU, 3, 3),
        (GroupType::Sp, 2, 2),
    ];
    for (stream, (x, n, q)) in cases.into_iter().enumerate() {
        let label = format!("{PAIR_TRIALS} seeded pairs in {}", name(x, n, q));
        let seed = suite.seed(50 + stream as u64);
        let result = element(x, n, q).and_then(|t| {
            suite.pool().install(|| {
                (0..PAIR_TRIALS)
                    .into_par_iter()
                    .map(|i| {
                        let g = uniform_element(t.group(), &mut trial_rng(seed, i));
                        Ok(if mismatch(&t, &g)? { vec![i] } else { Vec::new() })
                    })
                    .try_reduce(Vec::new, |mut a, b| {
                        a.extend(b);
                        Ok(a)
                    })
            })
        });
        checks.push(match result {
            Ok(bad) => Check::new(
                label,
                bad.is_empty(),
                match bad.first() {
                    None => "0 mismatches".to_string(),
                    Some(i) => format!("{} mismatches, first at trial {i} of seed {seed}", bad.len()),
                },
            ),
            Err(e) => Check::error(label, e),
        });
    }
    let label = "all pairs in Sp_4(2)";
    let result = element(GroupType::Sp, 2, 2).and_then(|t| {
        let mut total = 0u64;
        let mut bad: Vec<String> = Vec::new();
        let mut error = None;
        enumerate_group(t.group(), DEFAULT_GROUP_CAP, &mut |g| {
            total += 1;
            match mismatch(&t, g) {
                Ok(true) => bad.push(g.to_text()),
                Ok(false) => {}
                Err(e) => error = Some(e),
            }
        })
        .map_err(|e| e.to_string())?;
        match error {
            Some(e) => Err(e),
            None => Ok((total, bad)),
        }
    });
    checks.push(match result {
        Ok((total, bad)) => Check::new(
            label,
            bad.is_empty(),
            match bad.first() {
                None => format!("{total} pairs, 0 mismatches"),
                Some(g) => format!("{total} pairs, {} mismatches, first g =\n{g}", bad.len()),
            },
        ),
        Err(e) => Check::error(label, e),
    });
    checks
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub(crate) fn exact_p1_bounds(suite: &Suite) -> Vec<Check> {
    let quoted = [
        ((GroupType::Sp, 2, 2), ratio(7, 8)),
        ((GroupType::Sp, 2, 3), ratio(1, 2) - ratio(1, 27)),
        ((GroupType::SL, 2, 4), ratio(2, 3) - ratio(1, 64)),
    ];
    let mut checks = Vec::new();
    for ((x, n, q), quoted) in quoted {
        let label = format!("exact p1 <= bound in {}", name(x, n, q));
        let result = suite.exact_p1(x, n, q).and_then(|e| {
            let bound = p1_bound(x, n, q).map_err(|e| e.to_string())?;
            Ok((e, bound))
        });
        checks.push(match result {
            Ok((e, bound)) => Check::new(
                label,
                e.value <= bound,
                format!(
                    "p1 = {} over a class of {}; bound {} (quoted {})",
                    e.value, e.class_size, bound, quoted
                ),
            ),
            Err(e) => Check::error(label, e),
        });
    }
    checks
}

pub(crate) fn monte_carlo(suite: &Suite) -> Vec<Check> {
    let mut checks = Vec::new();
    for (stream, (x, n, q)) in [(GroupType::Sp, 2, 2), (GroupType::Sp, 2, 3), (GroupType::SL, 2, 4)]
        .into_iter()
        .enumerate()
    {
        let label = format!("99.9% Wilson interval covers exact p1 in {}", name(x, n, q));
        let seed = suite.seed(70 + stream as u64);
        let result = suite.exact_p1(x, n, q).and_then(|exact| {
            let t = element(x, n, q)?;
            let est = estimate_p1(&t, MC_TRIALS, seed, CONFIDENCE, suite.options().workers.max(1))
                .map_err(|e| e.to_string())?;
            Ok((exact.value.to_f64().unwrap_or(f64::NAN), est))
        });
        checks.push(match result {
            Ok((v, est)) => Check::new(
                label,
                est.lower <= v && v <= est.upper,
                format!(
                    "{} of {} trials, interval [{:.6}, {:.6}], exact {:.6}",
                    est.successes, est.trials, est.lower, est.upper, v
                ),
            ),
            Err(e) => Check::error(label, e),
        });
    }
    checks
}

pub(crate) fn quadratic_forms(suite: &Suite) -> Vec<Check> {
    let mut checks = Vec::new();
    match element(GroupType::Sp, 2, 2)
        .and_then(|t| sp_even_so_audit_exhaustive(&t, DEFAULT_GROUP_CAP).map_err(|e| e.to_string()))
    {
        Ok(a) => {
            let detail = format!(
                "{} pairs, {} reducible, {} plus type, {} minus type",
                a.pairs, a.reducible, a.plus, a.minus
            );
            checks.push(Check::new("every irreducible pair in Sp_4(2) has a form", true, detail.clone()));
            checks.push(Check::new(
                "both form types observed in Sp_4(2)",
                a.plus > 0 && a.minus > 0,
                detail,
            ));
        }
        Err(e) => checks.push(Check::error("every irreducible pair in Sp_4(2) has a form", e)),
    }
    let label = format!("{PAIR_TRIALS} seeded pairs in Sp_8(2)");
    match element(GroupType::Sp, 4, 2).and_then(|t| {
        sp_even_so_audit(&t, PAIR_TRIALS, suite.seed(80), suite.options().workers.max(1))
            .map_err(|e| e.to_string())
    }) {
        Ok(a) => checks.push(Check::new(
            label,
            true,
            format!(
                "{} pairs, {} reducible, {} plus type, {} minus type",
                a.pairs, a.reducible, a.plus, a.minus
            ),
        )),
        Err(e) => checks.push(Check::error(label, e)),
    }
    checks
}
