//! The three solver modes on small instances.

use convex_characters::apps::{solve_agreement_kforest, solve_objective, solve_quartet_partition, Objective, SolveInstance};
use convex_characters::extremal::gen_caterpillar;
use convex_characters::Tree;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t1 = gen_caterpillar(&["a", "b", "c", "d", "e", "f"])?;
    let t2 = gen_caterpillar(&["a", "c", "b", "d", "e", "f"])?;

    let af = solve_agreement_kforest(&t1, &t2, 2)?;
    println!("agreement forest  {:?}  components {:?}", af.character.map(|c| c.to_string()), af.objective_value);

    let z = solve_objective(&t1, &[t1.clone(), t2.clone()], 2, Objective::SumParsimony)?;
    println!("sum parsimony     {:?}  value {:?}", z.character.map(|c| c.to_string()), z.objective_value);

    let q = Tree::from_newick("(((a,b),(c,d)),((e,f),(g,h)));")?;
    let qp = solve_quartet_partition(&[q.clone(), q])?;
    println!("quartets          {:?}  scanned {}", qp.character.map(|c| c.to_string()), qp.characters_scanned);

    let inst = SolveInstance::from_json(
        r#"{"trees": ["((a,b),(c,d),(e,f));", "((a,c),(b,d),(e,f));"], "k": 2, "mode": "agreement_forest_min_components"}"#,
    )?;
    println!("json              {}", inst.solve()?.to_json(inst.mode));
    Ok(())
}
