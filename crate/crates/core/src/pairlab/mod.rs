//! Classification of pairs `(t, t^g)` by the reducible configurations they
//! fall into, Monte Carlo and exact computation of the reducibility
//! probability p₁, and the orthogonal audit for symplectic groups in even
//! characteristic.

mod stats;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::clgroup::{class_orbit, uniform_element, GroupError, GroupType};
use crate::forms::{orth_type, pinned_quadratic_solve, FormError, FormSolve, Sign};
use crate::matspace::{commutator_space, fixed_space, is_reducible_oracle, MatError, Matrix};
use crate::ppdgood::{torus_and_centralizer_order, GoodElement, PpdError};

pub use stats::{trial_rng, wilson_interval};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairError {
    #[error("g is not an element of the group")]
    NotMember,
    #[error("no invariant quadratic form for an irreducible pair; g =\n{witness}")]
    SolverFailure { witness: String },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("confidence must lie strictly between 0 and 1, got {0}")]
    Confidence(f64),
    #[error("enumerated class has {found} elements, expected {expected}")]
    Certification { found: u64, expected: String },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Ppd(#[from] PpdError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// A reducible configuration of `(t, t^g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Subcase {
    /// `U ∩ U^g ≠ 0`: a common fixed vector.
    CommonFixedVector,
    /// `dim(W + W^g) < 2n` in SL: a common invariant hyperplane.
    HyperplaneSL,
    /// `U = W^g` or `W = U^g`.
    Swap,
}

/// Verdict for one pair: every reducible configuration that holds, and for
/// irreducible pairs in Sp with q even, the type of the invariant quadratic
/// form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairClass {
    pub subcases: Vec<Subcase>,
    pub epsilon: Option<Sign>,
}

impl PairClass {
    pub fn is_reducible(&self) -> bool {
        !self.subcases.is_empty()
    }
}

/// The reducible configurations of `(t, t^g)`, without membership checks.
pub fn reducible_subcases(t: &GoodElement, g: &Matrix) -> Vec<Subcase> {
    let (u, w) = (t.fixed(), t.moving());
    let (ug, wg) = (u.image(g), w.image(g));
    let mut out = Vec::new();
    if u.intersection(&ug).expect("same ambient").dim() > 0 {
        out.push(Subcase::CommonFixedVector);
    }
    if t.group().group_type() == GroupType::SL
        && w.sum(&wg).expect("same ambient").dim() < t.group().dim()
    {
        out.push(Subcase::HyperplaneSL);
    }
    if *u == wg || *w == ug {
        out.push(Subcase::Swap);
    }
    out
}

fn is_sp_even(t: &GoodElement) -> bool {
    let g = t.group();
    g.group_type() == GroupType::Sp && g.q() % 2 == 0
}

/// Type of the quadratic form preserved by an irreducible pair in Sp with
/// q even, polarizing to the symplectic form.
fn invariant_quadratic_type(t: &GoodElement, g: &Matrix) -> Result<Sign, PairError> {
    let tg = t.matrix().conjugate_by(g, &g.inverse()?);
    let gram = t.group().form().expect("symplectic form").gram();
    match pinned_quadratic_solve(&[t.matrix().clone(), tg], gram)? {
        FormSolve::Found(form) if form.is_nondegenerate() => Ok(orth_type(&form)?.sign),
        _ => Err(PairError::SolverFailure {
            witness: g.to_text(),
        }),
    }
}

/// Classifies `⟨t, t^g⟩` as reducible (with all subcases that hold) or
/// irreducible.
pub fn classify_pair(t: &GoodElement, g: &Matrix) -> Result<PairClass, PairError> {
    if !t.group().contains(g)? {
        return Err(PairError::NotMember);
    }
    let subcases = reducible_subcases(t, g);
    let epsilon = if subcases.is_empty() && is_sp_even(t) {
        Some(invariant_quadratic_type(t, g)?)
    } else {
        None
    };
    Ok(PairClass { subcases, epsilon })
}

/// Checks that `U·g` and `W·g` equal the fixed and commutator spaces of
/// `t^g` recomputed from the conjugated matrix.
pub fn transport_agrees(t: &GoodElement, g: &Matrix) -> Result<bool, PairError> {
    let tg = t.matrix().conjugate_by(g, &g.inverse()?);
    Ok(fixed_space(&tg) == t.fixed().image(g) && commutator_space(&tg) == t.moving().image(g))
}

/// Reducibility of `⟨t, t^g⟩` by the projective-point spin oracle.
pub fn oracle_reducible(t: &GoodElement, g: &Matrix, cap: u64) -> Result<bool, PairError> {
    let tg = t.matrix().conjugate_by(g, &g.inverse()?);
    Ok(is_reducible_oracle(&[t.matrix().clone(), tg], cap)?)
}

/// Tallies of pair verdicts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PairCounts {
    pub reducible: u64,
    pub irreducible: u64,
    pub common_fixed_vector: u64,
    pub hyperplane_sl: u64,
    pub swap: u64,
    /// Reducible pairs with more than one subcase.
    pub overlapping: u64,
    pub epsilon_plus: u64,
    pub epsilon_minus: u64,
}

impl PairCounts {
    fn record(&mut self, c: &PairClass) {
        if c.is_reducible() {
            self.reducible += 1;
        } else {
            self.irreducible += 1;
        }
        for s in &c.subcases {
            match s {
                Subcase::CommonFixedVector => self.common_fixed_vector += 1,
                Subcase::HyperplaneSL => self.hyperplane_sl += 1,
                Subcase::Swap => self.swap += 1,
            }
        }
        if c.subcases.len() > 1 {
            self.overlapping += 1;
        }
        match c.epsilon {
            Some(Sign::Plus) => self.epsilon_plus += 1,
            Some(Sign::Minus) => self.epsilon_minus += 1,
            None => {}
        }
    }

    fn merge(mut self, o: PairCounts) -> PairCounts {
        self.reducible += o.reducible;
        self.irreducible += o.irreducible;
        self.common_fixed_vector += o.common_fixed_vector;
        self.hyperplane_sl += o.hyperplane_sl;
        self.swap += o.swap;
        self.overlapping += o.overlapping;
        self.epsilon_plus += o.epsilon_plus;
        self.epsilon_minus += o.epsilon_minus;
        self
    }
}

/// Monte Carlo estimate of p₁ with a Wilson score interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub trials: u64,
    pub successes: u64,
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub confidence: f64,
    pub seed: u64,
    pub counts: PairCounts,
}

fn run_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T, PairError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| PairError::Pool(e.to_string()))?;
    Ok(pool.install(job))
}

fn sampled_counts(
    t: &GoodElement,
    trials: u64,
    seed: u64,
    workers: usize,
    classify: impl Fn(&Matrix) -> Result<PairClass, PairError> + Sync,
) -> Result<PairCounts, PairError> {
    run_pool(workers, || {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng: ChaCha8Rng = trial_rng(seed, i);
                let g = uniform_element(t.group(), &mut rng);
                let mut c = PairCounts::default();
                c.record(&classify(&g)?);
                Ok(c)
            })
            .try_reduce(PairCounts::default, |a, b| Ok(a.merge(b)))
    })?
}

/// Estimates p₁ from `trials` uniform conjugates; trial `i` draws its `g`
/// from the stream `(seed, i)`, so results do not depend on `workers`.
pub fn estimate_p1(
    t: &GoodElement,
    trials: u64,
    seed: u64,
    confidence: f64,
    workers: usize,
) -> Result<Estimate, PairError> {
    if trials == 0 {
        return Err(PairError::NoTrials);
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(PairError::Confidence(confidence));
    }
    let counts = sampled_counts(t, trials, seed, workers, |g| {
        Ok(PairClass {
            subcases: reducible_subcases(t, g),
            epsilon: None,
        })
    })?;
    let (lower, upper) = wilson_interval(counts.reducible, trials, confidence);
    Ok(Estimate {
        trials,
        successes: counts.reducible,
        point: counts.reducible as f64 / trials as f64,
        lower,
        upper,
        confidence,
        seed,
        counts,
    })
}

/// Exact p₁ from a sweep of the conjugacy class of `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactP1 {
    pub class_size: u64,
    pub reducible: u64,
    #[serde(serialize_with = "crate::numth::serialize_ratio")]
    pub value: BigRational,
    pub counts: PairCounts,
}

/// Sweeps the class `t^G`: p₁ is the fraction of `t' ∈ t^G` with
/// `⟨t, t'⟩` reducible. The enumerated class size is certified against
/// `|G|/|C_G(t)|` from the torus centralizer order.
pub fn exact_p1(t: &GoodElement, cap: u64, workers: usize) -> Result<ExactP1, PairError> {
    let g = t.group();
    let orbit = class_orbit(t.matrix(), g, cap)?;
    let expected = g.order() / torus_and_centralizer_order(g.group_type(), g.n(), g.q())?.centralizer;
    let class_size = orbit.len() as u64;
    if expected.to_u64() != Some(class_size) {
        return Err(PairError::Certification {
            found: class_size,
            expected: expected.to_string(),
        });
    }
    let counts = run_pool(workers, || {
        (0..orbit.len())
            .into_par_iter()
            .map(|i| {
                let mut c = PairCounts::default();
                c.record(&PairClass {
                    subcases: reducible_subcases(t, &orbit.conjugator(i)),
                    epsilon: None,
                });
                c
            })
            .reduce(PairCounts::default, PairCounts::merge)
    })?;
    Ok(ExactP1 {
        class_size,
        reducible: counts.reducible,
        value: BigRational::new(BigInt::from(counts.reducible), BigInt::from(class_size)),
        counts,
    })
}

/// Outcome of the orthogonal audit: every irreducible pair must preserve a
/// nondegenerate quadratic form polarizing to the symplectic form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoAudit {
    pub pairs: u64,
    pub reducible: u64,
    pub plus: u64,
    pub minus: u64,
}

impl From<PairCounts> for SoAudit {
    fn from(c: PairCounts) -> Self {
        SoAudit {
            pairs: c.reducible + c.irreducible,
            reducible: c.reducible,
            plus: c.epsilon_plus,
            minus: c.epsilon_minus,
        }
    }
}

fn check_sp_even(t: &GoodElement) -> Result<(), PairError> {
    if !is_sp_even(t) || t.group().n() % 2 == 1 {
        return Err(PairError::Group(GroupError::Inadmissible(
            "the orthogonal audit needs Sp with q and n even".into(),
        )));
    }
    Ok(())
}

/// Audits `trials` seeded uniform pairs; any failure aborts with the witness.
pub fn sp_even_so_audit(
    t: &GoodElement,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<SoAudit, PairError> {
    check_sp_even(t)?;
    if trials == 0 {
        return Err(PairError::NoTrials);
    }
    Ok(sampled_counts(t, trials, seed, workers, |g| classify_pair(t, g))?.into())
}

/// Audits the pairs `(t, t^g)` for every `g` in `G`.
pub fn sp_even_so_audit_exhaustive(t: &GoodElement, cap: u64) -> Result<SoAudit, PairError> {
    check_sp_even(t)?;
    let mut counts = PairCounts::default();
    let mut failure = None;
    crate::clgroup::enumerate_group(t.group(), cap, &mut |g| {
        if failure.is_some() {
            return;
        }
        match classify_pair(t, g) {
            Ok(c) => counts.record(&c),
            Err(e) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(counts.into()),
    }
}
