//! Prints one PASS/FAIL line per acceptance criterion, followed by the
//! details of every failed check. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use goodpair_suite::{Suite, SuiteOptions, CRITERIA};

fn main() -> ExitCode {
    let suite = Suite::new(SuiteOptions::default());
    let mut all = true;
    let mut failures = Vec::new();
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let report = suite.run(id).expect("known criterion");
        println!("{}  [{:.1}s]", report.line(), start.elapsed().as_secs_f64());
        all &= report.passed;
        failures.extend(report.checks.into_iter().filter(|c| !c.passed).map(|c| (id, c)));
    }
    for (id, c) in &failures {
        println!("  criterion {id}, {}: {}", c.name, c.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
