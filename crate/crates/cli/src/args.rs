//! Command-line arguments. Every subcommand's arguments serialize into the
//! config echo of its report.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use goodpair::clgroup::{GroupType, DEFAULT_CLASS_CAP, DEFAULT_GROUP_CAP};
use goodpair::matspace::DEFAULT_POINT_CAP;
use serde::Serialize;

pub const CACHE_ENV: &str = "GOODPAIR_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(name = "goodpair", version, about = "Good elements in finite classical groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Directory for cached class sweeps.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Progress logging on standard error.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Orders of X_{2n}(q), its good-element torus, centralizer and normalizer.
    Orders(GroupArgs),
    /// Θ(k,n;±q), or the grid of Θ estimates with --suite.
    Theta(ThetaArgs),
    /// The admissible good-element orders Φ^X(n,q).
    Phi(GroupArgs),
    /// Builds and verifies a good element.
    Good(ElementArgs),
    /// Classifies seeded pairs (t, t^g) and cross-checks with the spin oracle.
    Classify(ClassifyArgs),
    /// Monte Carlo estimate of p1 with a Wilson interval.
    EstimateP1(EstimateArgs),
    /// Exact p1 from a sweep of the conjugacy class of t.
    ExactP1(ExactArgs),
    /// Invariant quadratic forms of irreducible pairs in Sp_{2n}(q), q even.
    SoAudit(SoAuditArgs),
    /// Cycle types of Z × S_ℓ acting on the deleted permutation module.
    SymAudit(SymArgs),
    /// The per-class bound ledger for one group.
    Bounds(BoundsArgs),
    /// The bound ledger and centralizer ratios over a parameter grid.
    Grid(GridArgs),
    /// Runs the acceptance criteria.
    Selftest(SelftestArgs),
}

fn parse_group(s: &str) -> Result<GroupType, String> {
    s.parse::<GroupType>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GroupArgs {
    /// SL, SU, Sp, SO+ or SO-.
    #[arg(long = "type", value_parser = parse_group)]
    #[serde(rename = "type")]
    pub group: GroupType,
    /// Half the dimension of the natural module.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ElementArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArgs,
    /// Order of the good element; defaults to the least usable element of Φ.
    #[arg(long)]
    pub m: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ThetaArgs {
    #[arg(long, conflicts_with = "suite")]
    pub k: Option<u32>,
    #[arg(long, conflicts_with = "suite")]
    pub n: Option<u32>,
    #[arg(long, conflicts_with = "suite")]
    pub q: Option<u64>,
    /// Use −q in place of q.
    #[arg(long)]
    pub negative: bool,
    /// Check every estimate on the grid k ≤ n ≤ n-max, q ≤ q-max.
    #[arg(long)]
    pub suite: bool,
    #[arg(long, default_value_t = 30)]
    pub n_max: u32,
    #[arg(long, default_value_t = 9)]
    pub q_max: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub element: ElementArgs,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of projective points the oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
    pub point_cap: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EstimateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub element: ElementArgs,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.999)]
    pub confidence: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExactArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub element: ElementArgs,
    /// Largest class size to enumerate.
    #[arg(long, default_value_t = DEFAULT_CLASS_CAP)]
    pub class_cap: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SoAuditArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub m: Option<u64>,
    /// Audit every g in the group instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    pub group_cap: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SymArgs {
    #[arg(long)]
    pub n: usize,
    /// The characteristic.
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub ell: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArgs,
    /// The p̃ column (Sp only).
    #[arg(long)]
    pub tilde: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 30)]
    pub n_max: usize,
    #[arg(long, default_value_t = 9)]
    pub q_max: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SelftestArgs {
    /// Criteria to run, comma separated; all by default.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u8>,
    #[arg(long, default_value_t = goodpair_suite::DEFAULT_SEED)]
    pub seed: u64,
}
