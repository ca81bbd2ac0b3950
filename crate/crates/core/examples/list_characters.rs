//! Streams the g_k characters of a tree and checks each one.
//!
//!     cargo run --example list_characters -- 2 "(((a,b),c),(e,(f,g)),d);"

use convex_characters::enumerate::canonical_encoding;
use convex_characters::{is_convex, list_gk, parsimony_score, Tree};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let newick = args.next().unwrap_or_else(|| "(((a,b),c),(e,(f,g)),d);".to_string());
    let t = Tree::from_newick(&newick)?;
    for (i, f) in list_gk(&t, k).enumerate() {
        assert!(is_convex(&t, &f)?);
        println!(
            "{:>4}  {:<24} parsimony {}  word {:?}",
            i + 1,
            f.to_string(),
            parsimony_score(&t, &f)?,
            canonical_encoding(&t, &f, k)?
        );
    }
    Ok(())
}
