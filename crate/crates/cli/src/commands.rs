//! One function per subcommand.

use std::io::Write;
use std::path::Path;

use goodpair::bounds::{p1_bound, p_bound_total, p_tilde_bound_total, BoundError};
use goodpair::clgroup::{
    theta, theta_inequality_suite, uniform_element, GroupError, GroupSpec, GroupType,
};
use goodpair::pairlab::{
    classify_pair, estimate_p1, exact_p1, oracle_reducible, sp_even_so_audit,
    sp_even_so_audit_exhaustive, trial_rng, PairError,
};
use goodpair::ppdgood::{
    ambient_order, build_good_element, cent_ratio, cent_ratio_bound, check_admissible,
    default_element, good_class_count, phi_set, ppd_primes, torus_and_centralizer_order,
    GoodElement, PpdError,
};
use goodpair::symmod::{good_cycle_type_audit, SymError};
use goodpair_suite::{Suite, SuiteOptions, CRITERIA};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::*;
use crate::output::{Outcome, Violation};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ppd(#[from] PpdError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Settings that affect how a command runs but not what it outputs.
pub struct Runtime<'a> {
    pub workers: usize,
    pub cache_dir: Option<&'a Path>,
    pub progress: &'a mut dyn Write,
}

pub fn execute(command: &Command, rt: &mut Runtime<'_>) -> Result<Outcome, CliError> {
    match command {
        Command::Orders(a) => orders(a),
        Command::Theta(a) => theta_cmd(a),
        Command::Phi(a) => phi(a),
        Command::Good(a) => good(a),
        Command::Classify(a) => classify(a),
        Command::EstimateP1(a) => estimate(a, rt),
        Command::ExactP1(a) => exact(a, rt),
        Command::SoAudit(a) => so_audit(a, rt),
        Command::SymAudit(a) => sym_audit(a),
        Command::Bounds(a) => bounds(a),
        Command::Grid(a) => grid(a),
        Command::Selftest(a) => selftest(a, rt),
    }
}

fn ratio_str(r: &BigRational) -> String {
    r.to_string()
}

fn approx(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn group_spec(a: &GroupArgs) -> Result<GroupSpec, CliError> {
    Ok(GroupSpec::new(a.group, a.n, a.q)?)
}

fn element(a: &ElementArgs) -> Result<GoodElement, CliError> {
    let g = group_spec(&a.group)?;
    Ok(match a.m {
        Some(m) => build_good_element(&g, m)?,
        None => default_element(&g)?,
    })
}

#[derive(Serialize)]
struct ElementSummary {
    group: String,
    m: u64,
    in_phi: bool,
}

fn summary(t: &GoodElement) -> ElementSummary {
    ElementSummary {
        group: t.group().to_string(),
        m: t.order(),
        in_phi: t.in_phi(),
    }
}

fn orders(a: &GroupArgs) -> Result<Outcome, CliError> {
    let g = group_spec(a)?;
    let order = ambient_order(a.group, a.n, a.q)?;
    let torus = torus_and_centralizer_order(a.group, a.n, a.q).ok();
    Ok(Outcome::new(json!({
        "group": g.to_string(),
        "order": order.to_string(),
        "torus": torus.as_ref().map(|t| t.torus.to_string()),
        "centralizer": torus.as_ref().map(|t| t.centralizer.to_string()),
        "normalizer": torus.as_ref().map(|t| t.normalizer.to_string()),
    })))
}

fn theta_cmd(a: &ThetaArgs) -> Result<Outcome, CliError> {
    if a.suite {
        let s = theta_inequality_suite(a.n_max, a.q_max);
        let violations = s
            .violations
            .iter()
            .map(|v| {
                Violation::new(
                    v.inequality,
                    format!("k={} n={} q={}: {} vs {} (equal: {})", v.k, v.n, v.q, v.lhs, v.rhs, v.equality),
                )
            })
            .collect();
        let mut out = Outcome::new(&s).with_rows(&s.violations);
        out.violations = violations;
        return Ok(out);
    }
    let (Some(k), Some(n), Some(q)) = (a.k, a.n, a.q) else {
        return Err(CliError::Usage("theta needs --k, --n and --q, or --suite".into()));
    };
    let v = theta(k, n, q, a.negative)?;
    Ok(Outcome::new(json!({
        "value": ratio_str(&v),
        "approx": approx(&v),
    })))
}

fn phi(a: &GroupArgs) -> Result<Outcome, CliError> {
    check_admissible(a.group, a.n, a.q)?;
    let set = phi_set(a.group, a.n, a.q)?;
    let qd = a.q.pow(a.group.delta());
    let ppds = ppd_primes(a.n as u32, qd)?;
    let counts: Vec<Value> = set
        .iter()
        .map(|&m| {
            let c = good_class_count(a.group, a.n, a.q, m).expect("m is in Φ");
            json!({"m": m, "classes": ratio_str(&c.count), "non_integral": c.flagged})
        })
        .collect();
    let torus = torus_and_centralizer_order(a.group, a.n, a.q)?.torus;
    Ok(Outcome::new(json!({
        "phi": set,
        "ppd_primes": ppds,
        "torus_order": torus.to_string(),
        "class_counts": counts,
    }))
    .with_rows(&counts))
}

fn good(a: &ElementArgs) -> Result<Outcome, CliError> {
    let t = element(a)?;
    let mut out = Outcome::new(json!({
        "element": summary(&t),
        "fixed_dim": t.fixed().dim(),
        "moving_dim": t.moving().dim(),
        "u_type": t.u_type(),
        "w_type": t.w_type(),
        "torus_order": t.torus_order(),
        "matrix": t.to_text(),
    }));
    if let Err(e) = t.verify() {
        out.violations.push(Violation::new(format!("good element invariants: {e}"), t.to_text()));
    }
    Ok(out)
}

#[derive(Serialize)]
struct PairRow {
    trial: u64,
    reducible: bool,
    subcases: Vec<goodpair::pairlab::Subcase>,
    epsilon: Option<goodpair::forms::Sign>,
    oracle_reducible: Option<bool>,
    agrees: Option<bool>,
}

fn classify(a: &ClassifyArgs) -> Result<Outcome, CliError> {
    let t = element(&a.element)?;
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for i in 0..a.trials {
        let g = uniform_element(t.group(), &mut trial_rng(a.seed, i));
        let c = match classify_pair(&t, &g) {
            Ok(c) => c,
            Err(PairError::SolverFailure { witness }) => {
                violations.push(Violation::new(format!("trial {i}: no invariant quadratic form"), witness));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let oracle = match oracle_reducible(&t, &g, a.point_cap) {
            Ok(r) => Some(r),
            Err(PairError::Mat(goodpair::matspace::MatError::CapExceeded { .. })) => None,
            Err(e) => return Err(e.into()),
        };
        let agrees = oracle.map(|o| o == c.is_reducible());
        if agrees == Some(false) {
            violations.push(Violation::new(format!("trial {i}: classifier and oracle disagree"), g.to_text()));
        }
        rows.push(PairRow {
            trial: i,
            reducible: c.is_reducible(),
            subcases: c.subcases,
            epsilon: c.epsilon,
            oracle_reducible: oracle,
            agrees,
        });
    }
    let reducible = rows.iter().filter(|r| r.reducible).count();
    let mut out = Outcome::new(json!({
        "element": summary(&t),
        "trials": a.trials,
        "reducible": reducible,
        "pairs": &rows,
    }))
    .with_rows(&rows);
    out.violations = violations;
    Ok(out)
}

fn estimate(a: &EstimateArgs, rt: &mut Runtime<'_>) -> Result<Outcome, CliError> {
    let t = element(&a.element)?;
    let g = &a.element.group;
    let bound = p1_bound(g.group, g.n, g.q)?;
    log::info!("estimating p1 in {} over {} trials", t.group(), a.trials);
    let est = estimate_p1(&t, a.trials, a.seed, a.confidence, rt.workers)?;
    let mut out = Outcome::new(json!({
        "element": summary(&t),
        "estimate": &est,
        "bound": ratio_str(&bound),
        "bound_approx": approx(&bound),
    }));
    if est.lower > approx(&bound) {
        out.violations.push(Violation::new(
            "Wilson interval lies above the p1 bound",
            format!("{} of {} reducible, interval [{}, {}], bound {}", est.successes, est.trials, est.lower, est.upper, bound),
        ));
    }
    Ok(out)
}

fn cache_file(dir: &Path, a: &ExactArgs, m: u64) -> std::path::PathBuf {
    let g = &a.element.group;
    let x = match g.group {
        GroupType::SOPlus => "SOplus".to_string(),
        GroupType::SOMinus => "SOminus".to_string(),
        other => other.to_string(),
    };
    dir.join(format!("exact-p1_{x}_{}_{}_m{m}_cap{}.json", g.n, g.q, a.class_cap))
}

fn exact(a: &ExactArgs, rt: &mut Runtime<'_>) -> Result<Outcome, CliError> {
    let t = element(&a.element)?;
    let g = &a.element.group;
    let bound = p1_bound(g.group, g.n, g.q)?;
    let path = rt.cache_dir.map(|d| cache_file(d, a, t.order()));
    let cached = match &path {
        Some(p) if p.exists() => {
            log::info!("reading class sweep from {}", p.display());
            let text = std::fs::read_to_string(p)?;
            Some(serde_json::from_str::<Value>(&text).map_err(|e| CliError::Cache(e.to_string()))?)
        }
        _ => None,
    };
    let sweep = match cached {
        Some(v) => v,
        None => {
            log::info!("sweeping the class of t in {}", t.group());
            let e = exact_p1(&t, a.class_cap, rt.workers)?;
            let v = serde_json::to_value(&e).expect("sweep serializes");
            if let Some(p) = &path {
                if let Some(dir) = p.parent() {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(p, serde_json::to_string(&v).expect("json"))?;
            }
            v
        }
    };
    let value: BigRational = sweep["value"]
        .as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::Cache("sweep without a rational value".into()))?;
    let holds = value <= bound;
    let mut out = Outcome::new(json!({
        "element": summary(&t),
        "sweep": sweep,
        "value_approx": approx(&value),
        "bound": ratio_str(&bound),
        "bound_approx": approx(&bound),
        "bound_holds": holds,
    }));
    if !holds {
        out.violations.push(Violation::new("exact p1 exceeds its bound", format!("p1 = {value} > {bound}")));
    }
    Ok(out)
}

fn so_audit(a: &SoAuditArgs, rt: &mut Runtime<'_>) -> Result<Outcome, CliError> {
    let ea = ElementArgs {
        group: GroupArgs {
            group: GroupType::Sp,
            n: a.n,
            q: a.q,
        },
        m: a.m,
    };
    let t = element(&ea)?;
    let result = if a.exhaustive {
        sp_even_so_audit_exhaustive(&t, a.group_cap)
    } else {
        sp_even_so_audit(&t, a.trials, a.seed, rt.workers)
    };
    match result {
        Ok(audit) => Ok(Outcome::new(json!({
            "element": summary(&t),
            "mode": if a.exhaustive { "exhaustive" } else { "sampled" },
            "audit": audit,
            "both_types_observed": audit.plus > 0 && audit.minus > 0,
        }))),
        Err(PairError::SolverFailure { witness }) => {
            let mut out = Outcome::new(json!({"element": summary(&t)}));
            out.violations.push(Violation::new("irreducible pair without an invariant quadratic form", witness));
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}

fn sym_audit(a: &SymArgs) -> Result<Outcome, CliError> {
    let audit = good_cycle_type_audit(a.n, a.p, a.ell)?;
    let mut out = Outcome::new(&audit).with_rows(&audit.verdicts);
    if !audit.formula_agrees {
        out.violations.push(Violation::new(
            "fixed dimension formula disagrees with direct computation",
            format!("n={} p={} ℓ={}", a.n, a.p, a.ell),
        ));
    }
    if audit.claim_applies && !audit.matches_expected {
        out.violations.push(Violation::new(
            "good types differ from the unique type (n+1)1^(ℓ-n-1)",
            format!("good types {:?}, expected {:?}, Φ = {:?}", audit.good_types, audit.expected_type, audit.phi),
        ));
    }
    Ok(out)
}

fn bounds(a: &BoundsArgs) -> Result<Outcome, CliError> {
    let g = &a.group;
    let report = if a.tilde {
        if g.group != GroupType::Sp {
            return Err(CliError::Usage("--tilde applies to Sp only".into()));
        }
        p_tilde_bound_total(g.n, g.q)?
    } else {
        p_bound_total(g.group, g.n, g.q)?
    };
    let mut out = Outcome::new(&report).with_rows(&report.entries);
    for e in report.entries.iter().filter(|e| !e.agrees) {
        out.violations.push(Violation::new(
            format!("class {} table cell differs from the class estimate", e.class),
            format!("{} = {} vs {}", e.formula, e.value, e.lemma_value),
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct GridRow {
    group: GroupType,
    n: usize,
    q: u64,
    tilde: bool,
    p1_bound: String,
    total: String,
    total_approx: f64,
    all_agree: bool,
    all_valid: bool,
    cent_ratio: String,
    cent_ratio_bound: String,
    cent_ratio_holds: bool,
}

fn grid(a: &GridArgs) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for x in GroupType::ALL {
        for n in 2..=a.n_max {
            for q in 2..=a.q_max {
                if check_admissible(x, n, q).is_err() {
                    continue;
                }
                let ratio = cent_ratio(x, n, q)?;
                let ratio_bound = cent_ratio_bound(x, n, q)?;
                let holds = ratio <= ratio_bound;
                if !holds {
                    violations.push(Violation::new(
                        format!("centralizer ratio above its bound for {x} n={n} q={q}"),
                        format!("{ratio} > {ratio_bound}"),
                    ));
                }
                let tildes: &[bool] = if x == GroupType::Sp { &[false, true] } else { &[false] };
                for &tilde in tildes {
                    let r = if tilde { p_tilde_bound_total(n, q)? } else { p_bound_total(x, n, q)? };
                    if !r.all_agree {
                        violations.push(Violation::new(
                            format!("table and class estimates differ for {x} n={n} q={q}"),
                            format!("tilde={tilde}"),
                        ));
                    }
                    rows.push(GridRow {
                        group: x,
                        n,
                        q,
                        tilde,
                        p1_bound: ratio_str(&r.p1_bound),
                        total_approx: approx(&r.total),
                        total: ratio_str(&r.total),
                        all_agree: r.all_agree,
                        all_valid: r.all_valid,
                        cent_ratio: ratio_str(&ratio),
                        cent_ratio_bound: ratio_str(&ratio_bound),
                        cent_ratio_holds: holds,
                    });
                }
            }
        }
    }
    let mut out = Outcome::new(json!({"points": rows.len(), "rows": &rows})).with_rows(&rows);
    out.violations = violations;
    Ok(out)
}

fn selftest(a: &SelftestArgs, rt: &mut Runtime<'_>) -> Result<Outcome, CliError> {
    let ids: Vec<u8> = if a.criteria.is_empty() {
        CRITERIA.iter().map(|&(id, _)| id).collect()
    } else {
        a.criteria.clone()
    };
    if let Some(bad) = ids.iter().find(|id| !CRITERIA.iter().any(|(c, _)| c == *id)) {
        return Err(CliError::Usage(format!("unknown criterion {bad}")));
    }
    let suite = Suite::new(SuiteOptions {
        seed: a.seed,
        workers: rt.workers,
    });
    let mut reports = Vec::new();
    for id in ids {
        let r = suite.run(id).expect("known criterion");
        writeln!(rt.progress, "{}", r.line())?;
        reports.push(r);
    }
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| json!({"id": r.id, "title": r.title, "passed": r.passed}))
        .collect();
    let mut out = Outcome::new(json!({"seed": a.seed, "criteria": &reports}));
    out.rows = Some(rows);
    for r in &reports {
        for c in r.checks.iter().filter(|c| !c.passed) {
            out.violations.push(Violation::new(format!("criterion {}: {}", r.id, c.name), c.detail.clone()));
        }
    }
    Ok(out)
}
