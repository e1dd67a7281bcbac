use std::process::ExitCode;

use equihom::check;

fn main() -> ExitCode {
    let results = check::run_all();
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}  {}: {}", r.id, r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
