//! Runs the ten acceptance criteria and prints one line per criterion.
//! Seed from `FROBQUANT_SEED`, default 2024.

use frobquant::suite::run_criterion;

fn main() {
    let seed = std::env::var("FROBQUANT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(2024);
    println!("acceptance suite, seed {seed}");
    let mut failed = Vec::new();
    for id in 1..=10 {
        let r = run_criterion(id, seed);
        println!("{}", r.line());
        if !r.passed {
            failed.push(id);
        }
    }
    println!("{} passed, {} failed", 10 - failed.len(), failed.len());
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
