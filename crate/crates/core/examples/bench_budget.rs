//! Largest n whose complete listing fits in a budget, on the wall clock and
//! on the deterministic simulated clock.

use std::time::Duration;

use convex_characters::bench::{run_bench, BenchRecord, Family, MonotonicClock, SimulatedClock};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let families = [Family::Caterpillar, Family::Random];
    let ks = [1, 2, 3, 4, 5, 6];
    println!("wall clock, 0.1 s");
    println!("{}", BenchRecord::TSV_HEADER);
    for r in run_bench(&families, &ks, &[Duration::from_millis(100)], 1, 200, &mut MonotonicClock::default())? {
        println!("{}", r.to_tsv());
    }
    println!("\nsimulated clock, 0.1 s");
    for r in run_bench(&families, &ks, &[Duration::from_millis(100)], 1, 200, &mut SimulatedClock::default())? {
        println!("{}", r.to_tsv());
    }
    Ok(())
}
