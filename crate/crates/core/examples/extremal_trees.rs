//! Caterpillars maximize g_k and fully k-loaded trees minimize it.

use convex_characters::count::{gk_caterpillar, gk_fully_loaded};
use convex_characters::extremal::{caterpillar, gen_fully_loaded, gen_random, is_fully_loaded};
use convex_characters::count_gk;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, k) = (15, 3);
    let cat = caterpillar(n);
    let loaded = gen_fully_loaded(n, k, None)?;
    println!("caterpillar    {}  g_{k} = {}", cat.to_newick(), count_gk(&cat, k));
    println!("fully loaded   {}  g_{k} = {}", loaded.to_newick(), count_gk(&loaded, k));
    let witness = is_fully_loaded(&loaded, k).expect("generator output is fully loaded");
    println!("scaffold       {} (residue {})", witness.scaffold, witness.residue_size);

    let (lo, hi) = (gk_fully_loaded(n, k)?, gk_caterpillar(n, k));
    for seed in 0..5 {
        let t = gen_random(n, seed);
        let g = count_gk(&t, k);
        assert!(lo <= g && g <= hi);
        println!("random seed {seed}  {lo} <= {g} <= {hi}");
    }
    Ok(())
}
