//! Time-budget listing benchmark: the largest `n` whose full `g_k` listing
//! finishes within a budget, per tree family.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

use crate::count::BigCount;
use crate::enumerate::list_gk;
use crate::error::{Error, Result};
use crate::extremal::{caterpillar, gen_fully_loaded, gen_random};
use crate::tree::Tree;

/// Time source for the benchmark. `tick` is called once per listed character.
pub trait Clock {
    fn restart(&mut self);
    fn tick(&mut self, n: usize);
    fn elapsed(&self) -> Duration;
}

/// Wall clock.
#[derive(Debug)]
pub struct MonotonicClock {
    start: Instant,
}

impl Default for MonotonicClock {
    fn default() -> Self {
        MonotonicClock { start: Instant::now() }
    }
}

impl Clock for MonotonicClock {
    fn restart(&mut self) {
        self.start = Instant::now();
    }
    fn tick(&mut self, _n: usize) {}
    fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

/// Deterministic clock charging `per_taxon` for every taxon of every listed character.
#[derive(Debug, Clone)]
pub struct SimulatedClock {
    pub per_taxon: Duration,
    spent: Duration,
}

impl SimulatedClock {
    pub fn new(per_taxon: Duration) -> Self {
        SimulatedClock { per_taxon, spent: Duration::ZERO }
    }
}

impl Default for SimulatedClock {
    fn default() -> Self {
        SimulatedClock::new(Duration::from_micros(1))
    }
}

impl Clock for SimulatedClock {
    fn restart(&mut self) {
        self.spent = Duration::ZERO;
    }
    fn tick(&mut self, n: usize) {
        self.spent += self.per_taxon * n as u32;
    }
    fn elapsed(&self) -> Duration {
        self.spent
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Caterpillar,
    Random,
    FullyLoaded,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Caterpillar => "caterpillar",
            Family::Random => "random",
            Family::FullyLoaded => "fully_loaded",
        }
    }

    /// Member of the family on `n` taxa; `k` matters only for fully loaded trees.
    pub fn tree(self, n: usize, k: usize, seed: u64) -> Result<Tree> {
        match self {
            Family::Caterpillar => Ok(caterpillar(n)),
            Family::Random => Ok(gen_random(n, seed)),
            Family::FullyLoaded => gen_fully_loaded(n, k, None),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "caterpillar" => Ok(Family::Caterpillar),
            "random" => Ok(Family::Random),
            "fully_loaded" => Ok(Family::FullyLoaded),
            other => Err(Error::Precondition(format!("unknown tree family {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub family: Family,
    pub k: usize,
    pub budget: Duration,
    /// Zero when not even the smallest tree finished.
    pub max_n_completed: usize,
    /// Characters in the listing at `max_n_completed`.
    pub characters_listed: BigCount,
    pub seed: u64,
}

impl BenchRecord {
    pub const TSV_HEADER: &'static str = "family\tk\tbudget_s\tmax_n_completed\tcharacters_listed\tseed";

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.family,
            self.k,
            self.budget.as_secs_f64(),
            self.max_n_completed,
            self.characters_listed,
            self.seed
        )
    }
}

/// Lists every character of `t`, giving up once `clock` passes `budget`.
/// Returns the number listed when the listing completed.
pub fn timed_listing<C: Clock + ?Sized>(t: &Tree, k: usize, budget: Duration, clock: &mut C) -> Option<BigCount> {
    clock.restart();
    let mut listed = 0u64;
    for _ in list_gk(t, k) {
        listed += 1;
        clock.tick(t.n());
        if clock.elapsed() > budget {
            return None;
        }
    }
    (clock.elapsed() <= budget).then(|| BigUint::from(listed))
}

/// Ramps `n` upward from `max(k, 2)` until a listing overruns `budget` or
/// `n_cap` is reached.
pub fn bench_family<C: Clock + ?Sized>(
    family: Family,
    k: usize,
    budget: Duration,
    seed: u64,
    n_cap: usize,
    clock: &mut C,
) -> Result<BenchRecord> {
    if k == 0 || budget.is_zero() {
        return Err(Error::Precondition("bench needs k >= 1 and a positive budget".into()));
    }
    let mut rec = BenchRecord {
        family,
        k,
        budget,
        max_n_completed: 0,
        characters_listed: BigUint::default(),
        seed,
    };
    let start = k.max(2);
    for n in start..=n_cap.max(start) {
        let t = family.tree(n, k.max(2), seed)?;
        match timed_listing(&t, k, budget, clock) {
            Some(listed) => {
                rec.max_n_completed = n;
                rec.characters_listed = listed;
            }
            None => break,
        }
    }
    Ok(rec)
}

/// Every combination of family, `k` and budget, in that nesting order.
pub fn run_bench<C: Clock + ?Sized>(
    families: &[Family],
    ks: &[usize],
    budgets: &[Duration],
    seed: u64,
    n_cap: usize,
    clock: &mut C,
) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for &family in families {
        for &k in ks {
            for &budget in budgets {
                out.push(bench_family(family, k, budget, seed, n_cap, clock)?);
            }
        }
    }
    Ok(out)
}
