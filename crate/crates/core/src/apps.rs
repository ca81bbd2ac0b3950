//! Solvers that scan the `g_k` stream of one tree and filter or optimize.

use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::character::Character;
use crate::count::{count_gk, BigCount};
use crate::enumerate::{is_convex, list_gk, parsimony_score};
use crate::error::{Error, Result};
use crate::tree::Tree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub character: Option<Character>,
    /// Components for agreement forests, the objective for optimization.
    pub objective_value: Option<u64>,
    pub characters_scanned: BigCount,
    pub wall_time: Duration,
}

impl SolveResult {
    fn none(started: Instant) -> Self {
        SolveResult {
            character: None,
            objective_value: None,
            characters_scanned: BigUint::default(),
            wall_time: started.elapsed(),
        }
    }

    pub fn to_json(&self, mode: Mode) -> serde_json::Value {
        serde_json::json!({
            "mode": mode.name(),
            "character": self.character.as_ref().map(Character::to_string),
            "objective_value": self.objective_value.map(|v| v.to_string()),
            "characters_scanned": self.characters_scanned.to_string(),
            "wall_time_ms": self.wall_time.as_secs_f64() * 1e3,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    AgreementForestMinComponents,
    QuartetExactPartition,
    ObjectiveOptimize,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::AgreementForestMinComponents => "agreement_forest_min_components",
            Mode::QuartetExactPartition => "quartet_exact_partition",
            Mode::ObjectiveOptimize => "objective_optimize",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    SumParsimony,
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum_parsimony" => Ok(Objective::SumParsimony),
            other => Err(Error::UnknownObjective(other.to_string())),
        }
    }
}

impl Objective {
    pub fn evaluate(self, trees: &[Tree], f: &Character) -> Result<u64> {
        match self {
            Objective::SumParsimony => trees.iter().map(|t| parsimony_score(t, f).map(|s| s as u64)).sum(),
        }
    }
}

fn check_same_taxa(trees: &[&Tree]) -> Result<()> {
    match trees.split_first() {
        Some((first, rest)) if rest.iter().all(|t| t.labels() == first.labels()) => Ok(()),
        Some(_) => Err(Error::TaxonMismatch),
        None => Err(Error::Precondition("at least one tree is required".into())),
    }
}

/// Whether every block restricts to the same topology in every tree.
fn blocks_agree(trees: &[&Tree], f: &Character) -> Result<bool> {
    let first = trees[0];
    for block in f.blocks() {
        let reference = first.restrict_ids(block)?;
        for t in &trees[1..] {
            if t.restrict_ids(block)? != reference {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Convex on every tree with pairwise agreeing block topologies.
fn is_agreement_forest(trees: &[&Tree], f: &Character) -> Result<bool> {
    for t in &trees[1..] {
        if !is_convex(t, f)? {
            return Ok(false);
        }
    }
    blocks_agree(trees, f)
}

/// Agreement forest of `t1` and `t2` with the fewest components, every
/// component holding at least `k` taxa. Scans the stream of `t1`.
pub fn solve_agreement_kforest(t1: &Tree, t2: &Tree, k: usize) -> Result<SolveResult> {
    solve_agreement_forest(&[t1.clone(), t2.clone()], k, false)
}

/// Agreement forest for any number of trees. The stream of `trees[0]` is
/// scanned unless `scan_smaller` picks the tree with the smallest `g_k`.
pub fn solve_agreement_forest(trees: &[Tree], k: usize, scan_smaller: bool) -> Result<SolveResult> {
    let started = Instant::now();
    let refs: Vec<&Tree> = trees.iter().collect();
    check_same_taxa(&refs)?;
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let mut order = refs.clone();
    if scan_smaller {
        let best = (0..trees.len()).min_by_key(|&i| count_gk(&trees[i], k)).expect("non-empty");
        order.swap(0, best);
    }
    let mut res = SolveResult::none(started);
    let mut best: Option<(usize, Character)> = None;
    for f in list_gk(order[0], k) {
        res.characters_scanned += 1u32;
        if best.as_ref().is_some_and(|(m, _)| f.num_blocks() >= *m) {
            continue;
        }
        if is_agreement_forest(&order, &f)? {
            best = Some((f.num_blocks(), f));
        }
    }
    if let Some((m, f)) = best {
        res.objective_value = Some(m as u64);
        res.character = Some(f);
    }
    res.wall_time = started.elapsed();
    Ok(res)
}

/// First partition of the taxa into blocks of exactly four that is convex in
/// every tree and whose quartets have the same topology in every tree.
pub fn solve_quartet_partition(trees: &[Tree]) -> Result<SolveResult> {
    let started = Instant::now();
    let refs: Vec<&Tree> = trees.iter().collect();
    check_same_taxa(&refs)?;
    let mut res = SolveResult::none(started);
    if !refs[0].n().is_multiple_of(4) {
        return Ok(res);
    }
    for f in list_gk(refs[0], 4) {
        res.characters_scanned += 1u32;
        if f.blocks().iter().all(|b| b.len() == 4) && is_agreement_forest(&refs, &f)? {
            res.objective_value = Some(f.num_blocks() as u64);
            res.character = Some(f);
            break;
        }
    }
    res.wall_time = started.elapsed();
    Ok(res)
}

/// `g_k` character of `t` minimizing `objective` over `trees`; ties go to the
/// earliest character in stream order.
pub fn solve_objective(t: &Tree, trees: &[Tree], k: usize, objective: Objective) -> Result<SolveResult> {
    let started = Instant::now();
    let mut refs: Vec<&Tree> = vec![t];
    refs.extend(trees.iter());
    check_same_taxa(&refs)?;
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let mut res = SolveResult::none(started);
    let mut best: Option<(u64, Character)> = None;
    for f in list_gk(t, k) {
        res.characters_scanned += 1u32;
        let z = objective.evaluate(trees, &f)?;
        if best.as_ref().is_none_or(|(b, _)| z < *b) {
            best = Some((z, f));
        }
    }
    if let Some((z, f)) = best {
        res.objective_value = Some(z);
        res.character = Some(f);
    }
    res.wall_time = started.elapsed();
    Ok(res)
}

/// JSON solve instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveInstance {
    pub trees: Vec<String>,
    #[serde(default)]
    pub k: Option<usize>,
    pub mode: Mode,
    #[serde(default)]
    pub objective: Option<String>,
    /// Tree whose stream is scanned in objective mode; defaults to `trees[0]`.
    #[serde(default)]
    pub tree: Option<String>,
    #[serde(default)]
    pub scan_smaller: bool,
}

impl SolveInstance {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Precondition(format!("invalid instance: {e}")))
    }

    pub fn solve(&self) -> Result<SolveResult> {
        let trees = self.trees.iter().map(|s| Tree::from_newick(s)).collect::<Result<Vec<_>>>()?;
        if trees.is_empty() {
            return Err(Error::Precondition("instance has no trees".into()));
        }
        let k = || self.k.ok_or_else(|| Error::Precondition(format!("mode {} needs k", self.mode.name())));
        match self.mode {
            Mode::AgreementForestMinComponents => solve_agreement_forest(&trees, k()?, self.scan_smaller),
            Mode::QuartetExactPartition => solve_quartet_partition(&trees),
            Mode::ObjectiveOptimize => {
                let objective: Objective = self.objective.as_deref().unwrap_or("sum_parsimony").parse()?;
                let scanned = match &self.tree {
                    Some(s) => Tree::from_newick(s)?,
                    None => trees[0].clone(),
                };
                solve_objective(&scanned, &trees, k()?, objective)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{caterpillar, gen_caterpillar, gen_random};

    #[test]
    fn self_agreement_is_one_component() {
        let t = gen_random(9, 3);
        for k in 1..=9 {
            let r = solve_agreement_kforest(&t, &t, k).unwrap();
            assert_eq!(r.objective_value, Some(1));
            assert_eq!(r.character.unwrap().num_blocks(), 1);
            assert_eq!(r.characters_scanned, count_gk(&t, k));
        }
    }

    #[test]
    fn swapped_caterpillar_needs_two_components() {
        let t1 = gen_caterpillar(&["a", "b", "c", "d", "e", "f"]).unwrap();
        let t2 = gen_caterpillar(&["a", "c", "b", "d", "e", "f"]).unwrap();
        let r = solve_agreement_kforest(&t1, &t2, 2).unwrap();
        assert_eq!(r.objective_value, Some(2));
        let f = r.character.unwrap();
        assert!(is_convex(&t2, &f).unwrap());
    }

    #[test]
    fn quartets() {
        let t = caterpillar(7);
        let r = solve_quartet_partition(&[t.clone(), t]).unwrap();
        assert!(r.character.is_none());
        assert_eq!(r.characters_scanned, 0u32.into());
    }

    #[test]
    fn objective_on_single_tree_is_zero() {
        let t = caterpillar(6);
        let r = solve_objective(&t, std::slice::from_ref(&t), 2, Objective::SumParsimony).unwrap();
        assert_eq!(r.objective_value, Some(0));
        assert_eq!(r.character.unwrap().num_blocks(), 1);
        let r = solve_objective(&t, std::slice::from_ref(&t), 7, Objective::SumParsimony).unwrap();
        assert!(r.character.is_none());
        assert_eq!(r.characters_scanned, 0u32.into());
        assert!(matches!("max_parsimony".parse::<Objective>(), Err(Error::UnknownObjective(_))));
    }

    #[test]
    fn mismatched_taxa() {
        let t1 = caterpillar(6);
        let t2 = caterpillar(7);
        assert_eq!(solve_agreement_kforest(&t1, &t2, 2).unwrap_err(), Error::TaxonMismatch);
    }

    #[test]
    fn instance_json() {
        let inst = SolveInstance::from_json(
            r#"{"trees": ["((a,b),(c,d));", "((a,b),(c,d));"], "k": 2, "mode": "agreement_forest_min_components"}"#,
        )
        .unwrap();
        let r = inst.solve().unwrap();
        let v = r.to_json(inst.mode);
        assert_eq!(v["character"], "a,b,c,d");
        assert_eq!(v["objective_value"], "1");
        assert_eq!(v["characters_scanned"], "2");
        assert!(SolveInstance::from_json(r#"{"trees": [], "mode": "bogus"}"#).is_err());
    }
}
