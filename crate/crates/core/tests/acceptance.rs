// Runs every acceptance check and prints one line per check. Exits nonzero
// if any check fails.

use std::process::ExitCode;

use eddy_casimir::validation;

fn main() -> ExitCode {
    let results = validation::run_all();
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!(
        "acceptance: {} passed, {} failed",
        results.len() - failed.len(),
        failed.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed checks: {failed:?}");
        ExitCode::FAILURE
    }
}
