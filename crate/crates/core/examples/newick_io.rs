//! Parsing, canonical writing, restriction and splits.

use convex_characters::Tree;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = Tree::from_newick("((d:0.1,(b,a)x:2)y,(e,f),c)root;")?;
    println!("canonical   {t}");
    println!("taxa        {:?}", t.labels());
    for s in t.splits() {
        println!("split       {s}");
    }
    println!("cherries    {:?}", t.cherries());
    println!("restricted  {}", t.restrict(["a", "c", "e", "f"])?);
    println!("deleted     {}", t.delete_taxa(["a"])?);
    match Tree::from_newick("((a,b),(c,d)") {
        Ok(_) => unreachable!(),
        Err(e) => println!("error       {e}"),
    }
    Ok(())
}
