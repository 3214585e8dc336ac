//! Acceptance gate: runs every criterion and prints one line each.

use std::process::ExitCode;
use std::thread;

use mgh_core::selftest::{run_criterion, CRITERIA, DEFAULT_SEED};

fn main() -> ExitCode {
    let results: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = (1..=CRITERIA)
            .map(|id| s.spawn(move || run_criterion(id, DEFAULT_SEED)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    });
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
