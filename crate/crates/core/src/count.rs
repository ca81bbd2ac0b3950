//! Exact counting of `g_k`, closed forms, recurrences and growth rates.
//!
//! The counting DP roots the tree at taxon 0 and keeps, for the edge above
//! every vertex `v`, a vector indexed by `0..=k`:
//!
//! * entry `0`: the edge is not used by any block and every block below `v`
//!   is complete (has at least `k` taxa);
//! * entry `j >= 1`: one block crosses the edge and holds `min(j, k)` taxa
//!   below it, every other block below is complete.
//!
//! Child vectors are combined at internal vertices by a convolution capped
//! at `k`, so a full pass costs `O(n k^2)` multiplications.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::tree::{TaxonSet, Tree, Tripartition};

/// Arbitrary-precision non-negative count.
pub type BigCount = BigUint;

/// The two operations the DP needs.
pub(crate) trait Weight: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn add_product(&mut self, a: &Self, b: &Self);
    fn add(&mut self, a: &Self);
    fn is_nil(&self) -> bool;
}

impl Weight for BigUint {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        if !Zero::is_zero(a) && !Zero::is_zero(b) {
            *self += a * b;
        }
    }
    fn add(&mut self, a: &Self) {
        *self += a;
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Weight for bool {
    fn nil() -> Self {
        false
    }
    fn unit() -> Self {
        true
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self |= *a && *b;
    }
    fn add(&mut self, a: &Self) {
        *self |= *a;
    }
    fn is_nil(&self) -> bool {
        !*self
    }
}

/// Vector for the edge above a leaf.
pub(crate) fn leaf_vector<W: Weight>(k: usize) -> Vec<W> {
    let mut v = vec![W::nil(); k + 1];
    v[1] = W::unit();
    if k <= 1 {
        v[0] = W::unit();
    }
    v
}

/// Combines the vectors of two children into the vector of their parent edge.
pub(crate) fn combine<W: Weight>(x: &[W], y: &[W], k: usize) -> Vec<W> {
    let mut out = vec![W::nil(); k + 1];
    out[0].add_product(&x[0], &y[0]);
    for i in 1..=k {
        if x[i].is_nil() {
            continue;
        }
        for j in 1..=k {
            let m = (i + j).min(k);
            // Both child edges join at the parent: the block either closes
            // here (cut above) or keeps going up.
            if m == k {
                out[0].add_product(&x[i], &y[j]);
            }
            out[m].add_product(&x[i], &y[j]);
        }
    }
    for m in 1..=k {
        out[m].add_product(&x[m], &y[0]);
        out[m].add_product(&y[m], &x[0]);
    }
    out
}

/// Total at the root leaf (taxon 0) given the vector of the edge below it.
pub(crate) fn root_total<W: Weight>(z: &[W], k: usize) -> W {
    let mut total = W::nil();
    if k <= 1 {
        total.add(&z[0]);
    }
    for (j, w) in z.iter().enumerate().skip(1) {
        if j + 1 >= k {
            total.add(w);
        }
    }
    total
}

/// Per-vertex DP vectors (edge above each vertex); the root entry is unused.
pub(crate) fn edge_tables<W: Weight>(t: &Tree, k: usize) -> Vec<Vec<W>> {
    let mut table: Vec<Vec<W>> = vec![Vec::new(); t.vertex_count()];
    for &v in t.preorder().iter().rev() {
        if v == 0 {
            continue;
        }
        table[v] = if t.is_leaf(v) {
            leaf_vector(k)
        } else {
            let c = t.children(v);
            combine(&table[c[0]], &table[c[1]], k)
        };
    }
    table
}

/// Number of convex characters of `t` whose blocks all have at least `k` taxa.
pub fn count_gk(t: &Tree, k: usize) -> BigCount {
    assert!(k >= 1, "k must be at least 1");
    count_generic::<BigUint>(t, k)
}

/// Whether `t` has at least one `g_k` character.
pub fn has_gk(t: &Tree, k: usize) -> bool {
    count_generic::<bool>(t, k)
}

fn count_generic<W: Weight>(t: &Tree, k: usize) -> W {
    let n = t.n();
    if n < k {
        return W::nil();
    }
    if n == 1 {
        return W::unit();
    }
    let table = edge_tables::<W>(t, k);
    root_total(&table[t.children(0)[0]], k)
}

/// `count_gk` memoized by canonical Newick and `k`.
///
/// Inserts are idempotent, so racing threads may duplicate work but never
/// disagree.
#[derive(Debug, Default)]
pub struct GkCache {
    map: RwLock<HashMap<(String, usize), BigCount>>,
}

impl GkCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self, t: &Tree, k: usize) -> BigCount {
        let key = (t.to_newick(), k);
        if let Some(v) = self.map.read().expect("cache lock").get(&key) {
            return v.clone();
        }
        let v = count_gk(t, k);
        self.map.write().expect("cache lock").entry(key).or_insert_with(|| v.clone());
        v
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Fibonacci number with `F(0) = 0`, `F(1) = F(2) = 1`.
pub fn fibonacci(n: usize) -> BigCount {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `g_1(n) = F(2n - 1)`, independent of topology.
pub fn g1_closed(n: usize) -> BigCount {
    assert!(n >= 1, "n must be at least 1");
    fibonacci(2 * n - 1)
}

/// `g_2(n) = F(n - 1)`, independent of topology.
pub fn g2_closed(n: usize) -> BigCount {
    assert!(n >= 1, "n must be at least 1");
    fibonacci(n - 1)
}

/// Largest Fibonacci index for which [`fibonacci_float`] is trusted.
pub const FLOAT_FIB_LIMIT: usize = 70;

/// `floor(phi^m / sqrt 5 + 1/2)` in `f64`; `None` beyond [`FLOAT_FIB_LIMIT`].
pub fn fibonacci_float(m: usize) -> Option<u64> {
    if m > FLOAT_FIB_LIMIT {
        return None;
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    Some((phi.powi(m as i32) / 5f64.sqrt() + 0.5).floor() as u64)
}

/// `g_k` of the caterpillar on `n` taxa: `0` below `k`, `1` at `k`, then
/// `g(n) = g(n - 1) + g(n - k)`.
pub fn gk_caterpillar(n: usize, k: usize) -> BigCount {
    assert!(k >= 2, "caterpillar recurrence needs k >= 2");
    caterpillar_sequence(n, k).pop().expect("non-empty")
}

/// `g_k(Cat_m)` for `m = 0..=n`.
pub fn caterpillar_sequence(n: usize, k: usize) -> Vec<BigCount> {
    assert!(k >= 2, "caterpillar recurrence needs k >= 2");
    let mut g: Vec<BigCount> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let v = match m.cmp(&k) {
            std::cmp::Ordering::Less => BigUint::zero(),
            std::cmp::Ordering::Equal => BigUint::one(),
            std::cmp::Ordering::Greater => &g[m - 1] + &g[m - k],
        };
        g.push(v);
    }
    g
}

/// Minimum of `g_k` over all trees on `n` taxa: `g_2(ceil(n / (k - 1)))`.
pub fn gk_fully_loaded(n: usize, k: usize) -> Result<BigCount> {
    if k < 2 {
        return Err(Error::Precondition(format!("fully loaded trees need k >= 2, got {k}")));
    }
    if n < k {
        return Err(Error::Precondition(format!("fully loaded trees need n >= k, got n = {n}, k = {k}")));
    }
    Ok(g2_closed(n.div_ceil(k - 1)))
}

/// Root in `[lo, hi]` of a function with a sign change, by bisection.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Exponential growth rates of the extreme values of `g_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthRate {
    pub k: usize,
    /// Growth rate of the caterpillar maximum.
    pub alpha: f64,
    /// `|alpha^k - alpha^(k-1) - 1|`; zero for `k = 1`.
    pub residual: f64,
    /// Growth rate of the fully loaded minimum, `phi^(1/(k-1))`.
    pub min_rate: f64,
}

pub const PHI: f64 = 1.618_033_988_749_895;

/// Growth rates for `k`. For `k >= 2`, `alpha` is the root in `(1, 2)` of
/// `x^k - x^(k-1) - 1`; for `k = 1` both rates are `phi^2`.
pub fn growth_rate(k: usize) -> GrowthRate {
    assert!(k >= 1, "k must be at least 1");
    if k == 1 {
        let r = PHI * PHI;
        return GrowthRate { k, alpha: r, residual: 0.0, min_rate: r };
    }
    let poly = |x: f64| x.powi(k as i32) - x.powi(k as i32 - 1) - 1.0;
    let alpha = bisect(poly, 1.0, 2.0);
    GrowthRate { k, alpha, residual: poly(alpha).abs(), min_rate: PHI.powf(1.0 / (k - 1) as f64) }
}

/// Rounds to three decimals, halves rounded up.
pub fn round3(x: f64) -> f64 {
    (x * 1000.0 + 0.5).floor() / 1000.0
}

/// One row of the rate table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateRow {
    pub k: usize,
    pub min_rate: f64,
    pub max_rate: f64,
}

/// Rows `k = 1..=kmax` with rates rounded to three decimals.
pub fn rate_table(kmax: usize) -> Vec<RateRow> {
    (1..=kmax)
        .map(|k| {
            let g = growth_rate(k);
            RateRow { k, min_rate: round3(g.min_rate), max_rate: round3(g.alpha) }
        })
        .collect()
}

/// Constants of the `g_3` caterpillar closed form `floor(c * alpha^n + 1/2)`.
///
/// `alpha` is the real root of `x^3 - x^2 - 1` and `c` is the real root of
/// `31x^3 - 31x^2 + 9x - 1` divided by `alpha^3`; numerically
/// `c = 0.1942540040...`.
pub fn g3_closed_constants() -> (f64, f64) {
    let alpha = growth_rate(3).alpha;
    let r = bisect(|x| 31.0 * x * x * x - 31.0 * x * x + 9.0 * x - 1.0, 0.0, 1.0);
    (r / alpha.powi(3), alpha)
}

/// `g_3(Cat_n)` from the closed form; exact for `3 <= n <= 40` in `f64`.
pub fn g3_caterpillar_closed(n: usize) -> u64 {
    let (c, alpha) = g3_closed_constants();
    (c * alpha.powi(n as i32) + 0.5).floor() as u64
}

/// Checks `g_k(T) = g_k(T \ A) + g_k(T \ {x})` on a split with `|A| = k`.
///
/// `A` is the first qualifying side in edge preorder and `x` its smallest
/// taxon. Errors if `k < 2` or `t` has no split side of size exactly `k`.
pub fn decrease_recurrence_check(t: &Tree, k: usize) -> Result<bool> {
    let n = t.n();
    let side = t
        .edge_splits()
        .into_iter()
        .find_map(|(_, below)| {
            if below.len() == k {
                Some(below)
            } else if n - below.len() == k {
                let mut mark = vec![false; n];
                below.iter().for_each(|&i| mark[i] = true);
                Some((0..n).filter(|&i| !mark[i]).collect())
            } else {
                None
            }
        })
        .ok_or_else(|| Error::Precondition(format!("no split side with exactly {k} taxa")))?;
    decrease_recurrence_on(t, &side, k)
}

/// The same identity for a caller-chosen side `A` (taxon ids) and its smallest taxon.
pub fn decrease_recurrence_on(t: &Tree, side: &[usize], k: usize) -> Result<bool> {
    if k < 2 {
        return Err(Error::Precondition("the split recurrence needs k >= 2".into()));
    }
    if side.len() != k || side.len() >= t.n() {
        return Err(Error::Precondition("side must have exactly k taxa and leave a non-empty rest".into()));
    }
    let lhs = count_gk(t, k);
    let without_a = count_gk(&t.delete_ids(side)?, k);
    let without_x = count_gk(&t.delete_ids(&side[..1])?, k);
    Ok(lhs == without_a + without_x)
}

/// Checks the tripartition identity
/// `g(T) = g(T|AB) g(T|C) + g(T|A) g(T|BC) + g(T|AB) g(T|BC)`
/// for `tp = A|B|C` with `|B| = k - 1`, `1 <= |C| <= k - 1` and `|A| > 2(k - 1)`.
pub fn tripartition_identity(t: &Tree, tp: &Tripartition, k: usize) -> Result<bool> {
    let (a, b, c) = (&tp.part_a, &tp.part_b, &tp.part_c);
    if k < 2 || b.len() != k - 1 || c.is_empty() || c.len() > k - 1 || a.len() <= 2 * (k - 1) {
        return Err(Error::Precondition(format!(
            "need |B| = k-1, 1 <= |C| <= k-1, |A| > 2(k-1); got {}, {}, {} for k = {k}",
            a.len(),
            b.len(),
            c.len()
        )));
    }
    let g = |parts: &[&TaxonSet]| -> Result<BigCount> {
        Ok(count_gk(&t.restrict(parts.iter().flat_map(|p| p.iter()))?, k))
    };
    let ab = g(&[a, b])?;
    let bc = g(&[b, c])?;
    let rhs = &ab * g(&[c])? + g(&[a])? * &bc + &ab * &bc;
    Ok(count_gk(t, k) == rhs)
}

/// Convenience for small counts in tests and reports.
pub fn to_u64(c: &BigCount) -> Option<u64> {
    c.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = "(((a,b),c),(e,(f,g)),d);";

    #[test]
    fn figure_one_counts() {
        let t = Tree::from_newick(FIG1).unwrap();
        let got: Vec<u64> = (1..=8).map(|k| to_u64(&count_gk(&t, k)).unwrap()).collect();
        assert_eq!(got, vec![233, 8, 3, 1, 1, 1, 1, 0]);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(g1_closed(7), 233u32.into());
        assert_eq!(g1_closed(1), 1u32.into());
        assert_eq!(g1_closed(4), 13u32.into());
        assert_eq!(g2_closed(7), 8u32.into());
        assert_eq!(g2_closed(2), 1u32.into());
        assert_eq!(g2_closed(10), 34u32.into());
        assert_eq!(gk_caterpillar(7, 3), 3u32.into());
        assert_eq!(gk_caterpillar(5, 3), 1u32.into());
        assert_eq!(gk_fully_loaded(7, 3).unwrap(), 2u32.into());
        assert_eq!(gk_fully_loaded(7, 4).unwrap(), 1u32.into());
        for k in 2..8 {
            assert_eq!(gk_fully_loaded(k, k).unwrap(), 1u32.into());
        }
        assert!(gk_fully_loaded(2, 3).is_err());
    }

    #[test]
    fn caterpillar_trace() {
        let seq: Vec<u64> = caterpillar_sequence(9, 3).iter().map(|c| to_u64(c).unwrap()).collect();
        assert_eq!(seq, vec![0, 0, 0, 1, 1, 1, 2, 3, 4, 6]);
    }

    #[test]
    fn float_fibonacci_agrees_up_to_guard() {
        for m in 0..=FLOAT_FIB_LIMIT {
            assert_eq!(fibonacci_float(m).map(BigUint::from), Some(fibonacci(m)), "m = {m}");
        }
        assert_eq!(fibonacci_float(FLOAT_FIB_LIMIT + 1), None);
    }

    #[test]
    fn growth_rates() {
        assert!((growth_rate(2).alpha - PHI).abs() < 1e-12);
        assert!((growth_rate(3).alpha - 1.466).abs() < 1e-3);
        assert!((growth_rate(6).alpha - 1.285).abs() < 1e-3);
        assert!((growth_rate(6).min_rate - 1.101).abs() < 1e-3);
        for k in 2..=12 {
            assert!(growth_rate(k).residual <= 1e-12, "k = {k}");
        }
        assert_eq!(growth_rate(1).residual, 0.0);
        assert!((growth_rate(1).alpha - 2.618).abs() < 1e-3);
    }

    #[test]
    fn g3_closed_form_matches_recurrence() {
        let (c, _) = g3_closed_constants();
        assert!((c - 0.194254).abs() < 1e-6);
        let seq = caterpillar_sequence(40, 3);
        for n in 3..=40 {
            assert_eq!(BigUint::from(g3_caterpillar_closed(n)), seq[n], "n = {n}");
        }
    }

    #[test]
    fn decrease_recurrence() {
        let t = Tree::from_newick(FIG1).unwrap();
        assert!(decrease_recurrence_check(&t, 3).unwrap());
        // A = {a,b,c}: 3 = g3(T|defg) + g3(T \ a) = 1 + 2
        assert!(decrease_recurrence_on(&t, &[0, 1, 2], 3).unwrap());
        assert_eq!(count_gk(&t.delete_ids(&[0, 1, 2]).unwrap(), 3), 1u32.into());
        assert_eq!(count_gk(&t.delete_ids(&[0]).unwrap(), 3), 2u32.into());
        let star = Tree::from_newick("((a,b),c);").unwrap();
        assert!(decrease_recurrence_check(&star, 3).is_err());
    }

    #[test]
    fn tripartition_identity_on_caterpillar() {
        let t = crate::extremal::caterpillar(10);
        let mut applicable = 0;
        for tp in t.tripartitions() {
            for order in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                if let Ok(ok) = tripartition_identity(&t, &tp.permuted(order), 3) {
                    assert!(ok);
                    applicable += 1;
                }
            }
        }
        assert!(applicable > 0);
    }

    #[test]
    fn cache_is_consistent() {
        let cache = GkCache::new();
        let t = Tree::from_newick(FIG1).unwrap();
        assert_eq!(cache.count(&t, 2), 8u32.into());
        assert_eq!(cache.count(&t, 2), 8u32.into());
        assert_eq!(cache.len(), 1);
    }
}
