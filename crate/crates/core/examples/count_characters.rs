//! Counts g_k characters of a tree and compares with the closed forms.
//!
//!     cargo run --example count_characters -- "(((a,b),c),(e,(f,g)),d);"

use convex_characters::count::{g1_closed, g2_closed, gk_caterpillar, gk_fully_loaded};
use convex_characters::{count_gk, Tree};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let newick = std::env::args().nth(1).unwrap_or_else(|| "(((a,b),c),(e,(f,g)),d);".to_string());
    let t = Tree::from_newick(&newick)?;
    let n = t.n();
    println!("tree {} on {n} taxa", t.to_newick());
    println!("k\tg_k\tmin\tmax");
    for k in 1..=n {
        let (lo, hi) = match k {
            1 => (g1_closed(n), g1_closed(n)),
            2 => (g2_closed(n), g2_closed(n)),
            _ => (gk_fully_loaded(n, k)?, gk_caterpillar(n, k)),
        };
        println!("{k}\t{}\t{lo}\t{hi}", count_gk(&t, k));
    }
    Ok(())
}
