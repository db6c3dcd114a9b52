//! Run the full named self-check suite programmatically (the `verify`
//! subcommand exposes the same thing on the command line, including hidden
//! fault-injection flags to prove the checks can fail).

use novikov2c::verify::{run_checks, VerifyFaults};

fn main() {
    let started = std::time::Instant::now();
    let results = run_checks(&VerifyFaults::default(), None);
    let mut failed = 0;
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {} — {}", r.name, r.detail);
        failed += usize::from(!r.passed);
    }
    println!(
        "{} checks, {failed} failed, {:.1}s",
        results.len(),
        started.elapsed().as_secs_f64()
    );
    std::process::exit(if failed == 0 { 0 } else { 1 });
}
