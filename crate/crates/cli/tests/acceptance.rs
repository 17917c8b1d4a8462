//! Runs every acceptance criterion in sequence and prints one line each.
//! Exits non-zero if any criterion fails.

use std::process::ExitCode;

use qvir_core::acceptance::{criteria, run};

fn main() -> ExitCode {
    let mut failed = 0;
    for c in criteria() {
        let result = run(&c);
        println!("{}", result.line());
        if !result.passed() {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
