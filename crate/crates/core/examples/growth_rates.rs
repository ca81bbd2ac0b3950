//! Growth rates of the g_k extremes and the g_3 caterpillar closed form.

use convex_characters::count::{caterpillar_sequence, g3_caterpillar_closed, g3_closed_constants, rate_table};

fn main() {
    println!("k\tmin_rate\tmax_rate");
    for row in rate_table(6) {
        println!("{}\t{:.3}\t{:.3}", row.k, row.min_rate, row.max_rate);
    }
    let (c, alpha) = g3_closed_constants();
    println!("\ng_3(Cat_n) = floor({c:.10} * {alpha:.10}^n + 1/2)");
    let seq = caterpillar_sequence(30, 3);
    for n in (3..=30).step_by(3) {
        println!("n = {n:>2}  recurrence {:>6}  closed form {:>6}", seq[n], g3_caterpillar_closed(n));
    }
}
