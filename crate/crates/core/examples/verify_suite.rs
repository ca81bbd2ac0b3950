//! Runs the randomized property suite against the brute-force oracle.

use convex_characters::verify::{run_verify, VerifyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let report = run_verify(&VerifyConfig { seed, ..Default::default() })?;
    println!("{report}");
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}
