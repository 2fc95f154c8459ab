//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use qshear::selftest::CRITERIA;

fn main() -> ExitCode {
    let mut failed = 0;
    for criterion in CRITERIA {
        let start = Instant::now();
        let result = criterion();
        println!("{result} [{:.1}s]", start.elapsed().as_secs_f64());
        if !result.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
