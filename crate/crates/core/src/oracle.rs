//! Brute-force ground truth.
//!
//! Everything here is deliberately slow and shares no code with the counting
//! DP or the linear convexity test: partitions come from restricted growth
//! strings and convexity is decided by materializing each block's spanning
//! subtree.

use std::sync::Arc;

use num_bigint::BigUint;

use crate::character::Character;
use crate::count::BigCount;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::Tree;

/// Largest taxon count the oracle accepts; Bell(15) is about 1.4e9.
pub const MAX_ORACLE_TAXA: usize = 14;

fn guard(n: usize) -> Result<()> {
    if n > MAX_ORACLE_TAXA {
        return Err(Error::SizeGuard { n, limit: MAX_ORACLE_TAXA });
    }
    Ok(())
}

/// Restricted-growth-string cursor over set partitions with a minimum block size.
///
/// Position `i` holds the block of the `i`-th taxon in the given order; the
/// first occurrence of each block index is increasing, so every partition is
/// produced once. Prefixes whose undersized blocks cannot be filled by the
/// remaining taxa are pruned.
pub struct PartitionCursor {
    labels: Arc<[String]>,
    /// Sorted-table id of the taxon at each position.
    ids: Vec<usize>,
    min_block: usize,
    rgs: Vec<usize>,
    sizes: Vec<usize>,
    blocks: usize,
    deficit: usize,
    pos: usize,
    cand: usize,
    done: bool,
}

impl PartitionCursor {
    fn feasible(&self) -> bool {
        self.deficit <= self.ids.len() - self.pos
    }

    fn assign(&mut self, b: usize) {
        if b == self.blocks {
            self.blocks += 1;
            self.deficit += self.min_block;
        }
        self.sizes[b] += 1;
        if self.sizes[b] <= self.min_block {
            self.deficit -= 1;
        }
        self.rgs[self.pos] = b;
        self.pos += 1;
    }

    fn unassign(&mut self) {
        self.pos -= 1;
        let b = self.rgs[self.pos];
        if self.sizes[b] <= self.min_block {
            self.deficit += 1;
        }
        self.sizes[b] -= 1;
        if self.sizes[b] == 0 {
            self.blocks -= 1;
            self.deficit -= self.min_block;
        }
        self.cand = b + 1;
    }

    fn emit(&self) -> Character {
        let mut assignment = vec![0; self.ids.len()];
        for (p, &id) in self.ids.iter().enumerate() {
            assignment[id] = self.rgs[p];
        }
        Character::from_assignment(Arc::clone(&self.labels), &assignment).expect("rgs is a partition")
    }
}

impl Iterator for PartitionCursor {
    type Item = Character;

    fn next(&mut self) -> Option<Character> {
        let n = self.ids.len();
        if self.done {
            return None;
        }
        if self.pos == n && n > 0 {
            self.unassign();
        }
        loop {
            if self.pos == n {
                if n == 0 {
                    self.done = true;
                    return None;
                }
                return Some(self.emit());
            }
            if self.cand > self.blocks {
                if self.pos == 0 {
                    self.done = true;
                    return None;
                }
                self.unassign();
                continue;
            }
            let b = self.cand;
            self.assign(b);
            if self.feasible() {
                self.cand = 0;
            } else {
                self.unassign();
                self.cand = b + 1;
            }
        }
    }
}

/// Every partition of `taxa` whose blocks all have at least `min_block` taxa.
pub fn all_partitions<S: AsRef<str>>(taxa: &[S], min_block: usize) -> Result<PartitionCursor> {
    guard(taxa.len())?;
    if min_block == 0 {
        return Err(Error::Precondition("min_block must be at least 1".into()));
    }
    let mut sorted: Vec<String> = taxa.iter().map(|s| s.as_ref().to_string()).collect();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateLabel(w[0].clone()));
    }
    let ids = taxa
        .iter()
        .map(|s| sorted.binary_search_by(|l| l.as_str().cmp(s.as_ref())).expect("present"))
        .collect();
    let n = taxa.len();
    Ok(PartitionCursor {
        labels: sorted.into(),
        ids,
        min_block,
        rgs: vec![0; n],
        sizes: vec![0; n + 1],
        blocks: 0,
        deficit: 0,
        pos: 0,
        cand: 0,
        done: n < min_block,
    })
}

/// Vertex set of the minimal subtree spanning `members` (a mask over taxa),
/// found by peeling non-member leaves.
fn spanning_vertices(t: &Tree, members: &[bool]) -> Vec<bool> {
    let nv = t.vertex_count();
    let mut inside = vec![true; nv];
    let mut deg: Vec<usize> = (0..nv).map(|v| t.degree(v)).collect();
    let mut queue: Vec<usize> = (0..nv).filter(|&v| deg[v] <= 1 && !(v < t.n() && members[v])).collect();
    while let Some(v) = queue.pop() {
        if !inside[v] {
            continue;
        }
        inside[v] = false;
        for u in t.neighbors(v) {
            if inside[u] {
                deg[u] -= 1;
                if deg[u] <= 1 && !(u < t.n() && members[u]) {
                    queue.push(u);
                }
            }
        }
    }
    inside
}

/// Convexity by explicit pairwise vertex-disjointness of block spanning trees.
pub fn spanning_trees_disjoint(t: &Tree, f: &Character) -> bool {
    let mut owner = vec![usize::MAX; t.vertex_count()];
    for (b, block) in f.blocks().iter().enumerate() {
        let mut members = vec![false; t.n()];
        block.iter().for_each(|&x| members[x] = true);
        for (v, inside) in spanning_vertices(t, &members).into_iter().enumerate() {
            if inside {
                if owner[v] != usize::MAX {
                    return false;
                }
                owner[v] = b;
            }
        }
    }
    true
}

/// Number of convex characters with all blocks of size at least `k`, by exhaustion.
pub fn brute_count(t: &Tree, k: usize) -> Result<BigCount> {
    Ok(BigUint::from(brute_list(t, k)?.len()))
}

/// All convex `g_k` characters of `t` in restricted-growth order.
pub fn brute_list(t: &Tree, k: usize) -> Result<Vec<Character>> {
    guard(t.n())?;
    Ok(all_partitions(t.labels(), k)?
        .filter(|f| spanning_trees_disjoint(t, f))
        .collect())
}

/// Minimum number of bichromatic edges over every labelling of internal
/// vertices by block indices. Exponential; refuses more than 10^7 labellings.
pub fn parsimony_exhaustive(t: &Tree, f: &Character) -> Result<usize> {
    let n = t.n();
    let m = f.num_blocks();
    let internal = t.vertex_count() - n;
    let total = (m as f64).powi(internal as i32);
    if total > 1e7 {
        return Err(Error::SizeGuard { n, limit: MAX_ORACLE_TAXA });
    }
    let leaf_block = f.assignment();
    let mut label = vec![0usize; internal];
    let mut best = usize::MAX;
    loop {
        let colour = |v: usize| if v < n { leaf_block[v] } else { label[v - n] };
        let cost = (1..t.vertex_count())
            .filter(|&v| colour(v) != colour(t.parent(v).expect("non-root")))
            .count();
        best = best.min(cost);
        let mut i = 0;
        loop {
            if i == internal {
                return Ok(best);
            }
            label[i] += 1;
            if label[i] < m {
                break;
            }
            label[i] = 0;
            i += 1;
        }
    }
}

/// Every unrooted binary topology on `labels`, by inserting each new taxon on every edge.
pub fn all_trees<S: AsRef<str>>(labels: &[S]) -> Result<Vec<Tree>> {
    let n = labels.len();
    if n > 10 {
        return Err(Error::SizeGuard { n, limit: 10 });
    }
    if n <= 3 {
        let mut g = Graph::new();
        let leaves: Vec<usize> = labels.iter().map(|l| g.add_vertex(Some(l.as_ref().to_string()))).collect();
        match n {
            0 => return Err(Error::EmptySubset),
            1 => {}
            2 => g.add_edge(leaves[0], leaves[1]),
            _ => {
                let c = g.add_vertex(None);
                leaves.iter().for_each(|&l| g.add_edge(c, l));
            }
        }
        return Ok(vec![g.into_tree()?]);
    }
    let mut out = Vec::new();
    let mut edges: Vec<(usize, usize)> = vec![(3, 0), (3, 1), (3, 2)];
    // Vertex ids: taxa 0..n, internal vertices n.. as created; 3 marks the first centre.
    fn rec<S: AsRef<str>>(labels: &[S], i: usize, edges: &mut Vec<(usize, usize)>, next: usize, out: &mut Vec<Tree>) -> Result<()> {
        let n = labels.len();
        if i == n {
            let mut g = Graph::new();
            for l in labels {
                g.add_vertex(Some(l.as_ref().to_string()));
            }
            for _ in n..next {
                g.add_vertex(None);
            }
            for &(u, v) in edges.iter() {
                g.add_edge(u, v);
            }
            out.push(g.into_tree()?);
            return Ok(());
        }
        for e in 0..edges.len() {
            let (u, v) = edges[e];
            let w = next;
            edges[e] = (u, w);
            edges.push((w, v));
            edges.push((w, i));
            rec(labels, i + 1, edges, next + 1, out)?;
            edges.pop();
            edges.pop();
            edges[e] = (u, v);
        }
        Ok(())
    }
    // Remap the first centre to id n so that taxa keep ids 0..n.
    for e in edges.iter_mut() {
        e.0 = n;
    }
    rec(labels, 3, &mut edges, n + 1, &mut out)?;
    Ok(out)
}
