//! Randomized property suite comparing the fast algorithms with the oracle
//! and with the closed forms.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::character::Character;
use crate::count::{count_gk, decrease_recurrence_check, g1_closed, g2_closed, gk_caterpillar, gk_fully_loaded, tripartition_identity};
use crate::enumerate::{is_convex, list_gk, parsimony_score};
use crate::error::{Error, Result};
use crate::extremal::{caterpillar, default_labels, double_lonely_taxa, random_tree};
use crate::oracle::{all_partitions, brute_list, spanning_trees_disjoint, MAX_ORACLE_TAXA};
use crate::tree::Tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub nmax: usize,
    pub kmax: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { nmax: 9, kmax: 4, samples: 200, seed: 1 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, ..Default::default() }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {} ({} cases)", c.name, c.cases)?;
            for d in &c.failures {
                writeln!(f, "  {d}")?;
            }
        }
        write!(f, "{}", if self.passed() { "all checks passed" } else { "some checks failed" })
    }
}

/// Runs the suite. Errors if `nmax` exceeds the oracle limit.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.nmax > MAX_ORACLE_TAXA {
        return Err(Error::SizeGuard { n: cfg.nmax, limit: MAX_ORACLE_TAXA });
    }
    if cfg.nmax == 0 || cfg.kmax == 0 {
        return Err(Error::Precondition("nmax and kmax must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut oracle = Check::new("oracle equivalence (count and listing)");
    let mut convexity = Check::new("convexity tests agree with spanning trees and parsimony");
    let mut neutral = Check::new("topological neutrality for k = 1, 2");
    let mut sandwich = Check::new("extremal sandwich");
    let mut recurrence = Check::new("split recurrence");
    let mut tripartite = Check::new("tripartition identity");
    let mut cherry = Check::new("cherry bound for k = 3");

    for _ in 0..cfg.samples {
        let n = rng.gen_range(1..=cfg.nmax);
        let k = rng.gen_range(1..=cfg.kmax);
        let t = random_tree(&default_labels(n), &mut rng)?;
        let nw = t.to_newick();

        let brute: HashSet<Character> = brute_list(&t, k)?.into_iter().collect();
        let listed: Vec<Character> = list_gk(&t, k).collect();
        let fast: HashSet<Character> = listed.iter().cloned().collect();
        let count = count_gk(&t, k);
        oracle.record(
            fast.len() == listed.len() && fast == brute && count == brute.len().into(),
            || format!("{nw} k={k}: count {count}, listed {}, oracle {}", listed.len(), brute.len()),
        );

        if let Some(f) = all_partitions(t.labels(), 1)?.nth(rng.gen_range(0..bell_bound(n))) {
            let a = is_convex(&t, &f)?;
            let b = spanning_trees_disjoint(&t, &f);
            let c = parsimony_score(&t, &f)? == f.num_blocks() - 1;
            convexity.record(a == b && b == c, || format!("{nw} {f}: linear {a}, spanning {b}, parsimony {c}"));
        }

        neutral.record(count_gk(&t, 1) == g1_closed(n) && count_gk(&t, 2) == g2_closed(n), || nw.clone());

        if k >= 2 && n >= k {
            let lo = gk_fully_loaded(n, k)?;
            let hi = gk_caterpillar(n, k);
            sandwich.record(lo <= count && count <= hi, || format!("{nw} k={k}: {lo} <= {count} <= {hi}"));
        }

        if let Ok(ok) = decrease_recurrence_check(&t, k) {
            recurrence.record(ok, || format!("{nw} k={k}"));
        }

        if k >= 2 {
            for tp in t.tripartitions() {
                for order in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                    if let Ok(ok) = tripartition_identity(&t, &tp.permuted(order), k) {
                        tripartite.record(ok, || format!("{nw} k={k}"));
                    }
                }
            }
        }

        if n >= 4 {
            let c = t.cherries().len();
            let doubled = double_lonely_taxa(&t)?;
            let g3 = count_gk(&t, 3);
            let bound = g2_closed(n - c);
            cherry.record(g3 <= count_gk(&doubled, 3) && g3 <= bound, || format!("{nw}: {g3} > {bound}"));
        }
    }

    let mut cat = Check::new("caterpillar recurrence against the DP");
    for n in 1..=cfg.nmax.max(12) {
        for k in 2..=cfg.kmax.max(2) {
            let t = caterpillar(n);
            cat.record(count_gk(&t, k) == gk_caterpillar(n, k), || format!("n={n} k={k}"));
        }
    }

    Ok(VerifyReport { checks: vec![oracle, convexity, neutral, sandwich, recurrence, tripartite, cherry, cat] })
}

/// Bell numbers up to the oracle limit, for sampling a random partition index.
fn bell_bound(n: usize) -> usize {
    const BELL: [usize; 15] = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597, 27644437, 190899322];
    BELL[n].min(5000)
}

/// Counts and listings of `t` agree for every `k` in `1..=kmax`.
pub fn count_matches_listing(t: &Tree, kmax: usize) -> bool {
    (1..=kmax).all(|k| count_gk(t, k) == list_gk(t, k).count().into())
}
