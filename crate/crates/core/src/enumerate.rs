//! Convexity testing and output-sensitive listing of `g_k` characters.

use crate::character::Character;
use crate::count::edge_tables;
use crate::error::{Error, Result};
use crate::tree::{Tree, NONE};

fn check_taxa(t: &Tree, f: &Character) -> Result<()> {
    if f.labels()[..] != t.labels()[..] {
        return Err(Error::NotAPartition("character and tree have different taxon sets".into()));
    }
    Ok(())
}

/// Whether the minimal spanning subtrees of the blocks are pairwise disjoint.
///
/// One bottom-up pass: every edge carries the single block crossing it
/// together with that block's taxon count below, and a vertex reached by two
/// different crossing blocks rejects.
pub fn is_convex(t: &Tree, f: &Character) -> Result<bool> {
    check_taxa(t, f)?;
    Ok(convex_by_assignment(t, &f.assignment(), f.blocks().iter().map(Vec::len).collect()))
}

pub(crate) fn convex_by_assignment(t: &Tree, block: &[usize], size: Vec<usize>) -> bool {
    if t.n() == 1 {
        return true;
    }
    // (block, taxa of that block below) carried by the edge above each vertex.
    let mut carry: Vec<Option<(usize, usize)>> = vec![None; t.vertex_count()];
    for &v in t.preorder().iter().rev() {
        if v == 0 {
            continue;
        }
        let mut here: Option<(usize, usize)> = if t.is_leaf(v) { Some((block[v], 1)) } else { None };
        for &c in t.children(v) {
            if let Some((b, cnt)) = carry[c] {
                here = match here {
                    None => Some((b, cnt)),
                    Some((b0, cnt0)) if b0 == b => Some((b, cnt0 + cnt)),
                    Some(_) => return false,
                };
            }
        }
        carry[v] = here.filter(|&(b, cnt)| cnt < size[b]);
    }
    let u = t.children(0)[0];
    match carry[u] {
        Some((b, cnt)) => b == block[0] && cnt + 1 == size[b],
        None => size[block[0]] == 1,
    }
}

/// Fitch small-parsimony score of the block labelling.
///
/// At least `num_blocks - 1`, with equality exactly for convex characters.
pub fn parsimony_score(t: &Tree, f: &Character) -> Result<usize> {
    check_taxa(t, f)?;
    let block = f.assignment();
    if t.n() == 1 {
        return Ok(0);
    }
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); t.vertex_count()];
    let mut score = 0;
    for &v in t.preorder().iter().rev() {
        if v == 0 {
            continue;
        }
        sets[v] = if t.is_leaf(v) {
            vec![block[v]]
        } else {
            let c = t.children(v);
            let (x, y) = (&sets[c[0]], &sets[c[1]]);
            let inter: Vec<usize> = x.iter().copied().filter(|s| y.binary_search(s).is_ok()).collect();
            if inter.is_empty() {
                score += 1;
                let mut u: Vec<usize> = x.iter().chain(y.iter()).copied().collect();
                u.sort_unstable();
                u.dedup();
                u
            } else {
                inter
            }
        };
    }
    if sets[t.children(0)[0]].binary_search(&block[0]).is_err() {
        score += 1;
    }
    Ok(score)
}

/// State of the edge above every non-root vertex for `f`: `0` if no block
/// crosses it, otherwise `min(k, taxa of the crossing block below)`.
fn edge_states(t: &Tree, f: &Character, k: usize) -> Vec<usize> {
    let block = f.assignment();
    let size: Vec<usize> = f.blocks().iter().map(Vec::len).collect();
    let mut states = vec![0; t.vertex_count()];
    for &v in t.preorder() {
        if v == 0 {
            continue;
        }
        let below = t.taxa_below(v);
        let mut per_block = std::collections::HashMap::new();
        for &x in &below {
            *per_block.entry(block[x]).or_insert(0usize) += 1;
        }
        states[v] = per_block
            .into_iter()
            .find(|&(b, cnt)| cnt < size[b])
            .map_or(0, |(_, cnt)| cnt.min(k));
    }
    states
}

/// The word that orders the listing stream: the state of the edge below
/// taxon 0, then for every internal vertex in preorder the states of its two
/// child edges.
pub fn canonical_encoding(t: &Tree, f: &Character, k: usize) -> Result<Vec<usize>> {
    check_taxa(t, f)?;
    if t.n() == 1 {
        return Ok(Vec::new());
    }
    let s = edge_states(t, f, k);
    let mut word = vec![s[t.children(0)[0]]];
    for &v in t.preorder() {
        if !t.is_leaf(v) {
            word.extend(t.children(v).iter().map(|&c| s[c]));
        }
    }
    Ok(word)
}

/// Pull-based stream over all `g_k` characters of a tree.
///
/// Each step is an odometer move over per-vertex decisions drawn from the
/// feasibility version of the counting DP, so every partial decision extends
/// to at least one character and the delay between outputs is `O(n k^2)`.
/// Characters appear in increasing [`canonical_encoding`] order.
pub struct ListGk<'a> {
    tree: &'a Tree,
    k: usize,
    feasible: Vec<Vec<bool>>,
    /// Internal vertices in preorder; decision slots after the root slot.
    slots: Vec<usize>,
    root_choice: usize,
    choice: Vec<(usize, usize)>,
    required: Vec<usize>,
    state: StreamState,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum StreamState {
    Fresh,
    Running,
    Done,
}

/// Lists every convex character of `t` with all blocks of size at least `k`.
pub fn list_gk(t: &Tree, k: usize) -> ListGk<'_> {
    assert!(k >= 1, "k must be at least 1");
    let n = t.n();
    let feasible = if n >= 2 && n >= k { edge_tables::<bool>(t, k) } else { Vec::new() };
    ListGk {
        tree: t,
        k,
        feasible,
        slots: t.preorder().iter().copied().filter(|&v| v >= n).collect(),
        root_choice: 0,
        choice: vec![(0, 0); t.vertex_count()],
        required: vec![NONE; t.vertex_count()],
        state: StreamState::Fresh,
    }
}

impl<'a> ListGk<'a> {
    fn root_ok(&self, s: usize) -> bool {
        let u = self.tree.children(0)[0];
        self.feasible[u][s] && if s == 0 { self.k <= 1 } else { s + 1 >= self.k }
    }

    fn next_root(&self, after: Option<usize>) -> Option<usize> {
        let start = after.map_or(0, |s| s + 1);
        (start..=self.k).find(|&s| self.root_ok(s))
    }

    /// Whether child states `(a, b)` produce parent state `s`.
    fn joins(&self, a: usize, b: usize, s: usize) -> bool {
        let k = self.k;
        match (a, b) {
            (0, 0) => s == 0,
            (0, m) | (m, 0) => s == m,
            (i, j) => {
                let m = (i + j).min(k);
                s == m || (s == 0 && m == k)
            }
        }
    }

    fn next_option(&self, v: usize, after: Option<(usize, usize)>) -> Option<(usize, usize)> {
        let c = self.tree.children(v);
        let (fa, fb) = (&self.feasible[c[0]], &self.feasible[c[1]]);
        let s = self.required[v];
        let k = self.k;
        let (a0, b0) = match after {
            None => (0, 0),
            Some((a, b)) if b < k => (a, b + 1),
            Some((a, _)) => (a + 1, 0),
        };
        for a in a0..=k {
            if !fa[a] {
                continue;
            }
            let bstart = if a == a0 { b0 } else { 0 };
            for b in bstart..=k {
                if fb[b] && self.joins(a, b, s) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Resets every slot from `from` on to its first option.
    fn refill(&mut self, from: usize) {
        for idx in from..self.slots.len() {
            let v = self.slots[idx];
            let p = self.tree.parent(v).expect("internal vertex has a parent");
            self.required[v] = if p == 0 {
                self.root_choice
            } else {
                let c = self.tree.children(p);
                let (a, b) = self.choice[p];
                if c[0] == v { a } else { b }
            };
            self.choice[v] = self.next_option(v, None).expect("feasible state has an option");
        }
    }

    fn advance(&mut self) -> bool {
        for idx in (0..self.slots.len()).rev() {
            let v = self.slots[idx];
            if let Some(opt) = self.next_option(v, Some(self.choice[v])) {
                self.choice[v] = opt;
                self.refill(idx + 1);
                return true;
            }
        }
        match self.next_root(Some(self.root_choice)) {
            Some(s) => {
                self.root_choice = s;
                self.refill(0);
                true
            }
            None => false,
        }
    }

    fn child_state(&self, v: usize) -> usize {
        let p = self.tree.parent(v).expect("non-root");
        if p == 0 {
            return self.root_choice;
        }
        let (a, b) = self.choice[p];
        if self.tree.children(p)[0] == v { a } else { b }
    }

    fn current(&self) -> Character {
        let t = self.tree;
        let n = t.n();
        let mut block = vec![NONE; t.vertex_count()];
        let mut next = 1;
        block[0] = 0;
        for &v in &t.preorder()[1..] {
            if self.child_state(v) > 0 {
                block[v] = block[t.parent(v).expect("non-root")];
            } else if t.is_leaf(v) || self.choice[v] != (0, 0) {
                block[v] = next;
                next += 1;
            }
        }
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); next];
        for x in 0..n {
            blocks[block[x]].push(x);
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_unstable_by_key(|b| b[0]);
        Character::from_canonical(t.labels_arc(), blocks)
    }
}

impl Iterator for ListGk<'_> {
    type Item = Character;

    fn next(&mut self) -> Option<Character> {
        let n = self.tree.n();
        match self.state {
            StreamState::Done => return None,
            StreamState::Fresh => {
                if n < self.k {
                    self.state = StreamState::Done;
                    return None;
                }
                if n == 1 {
                    self.state = StreamState::Done;
                    return Some(Character::from_canonical(self.tree.labels_arc(), vec![vec![0]]));
                }
                match self.next_root(None) {
                    Some(s) => {
                        self.root_choice = s;
                        self.refill(0);
                        self.state = StreamState::Running;
                    }
                    None => {
                        self.state = StreamState::Done;
                        return None;
                    }
                }
            }
            StreamState::Running => {
                if !self.advance() {
                    self.state = StreamState::Done;
                    return None;
                }
            }
        }
        Some(self.current())
    }
}

impl std::iter::FusedIterator for ListGk<'_> {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_gk;

    const FIG1: &str = "(((a,b),c),(e,(f,g)),d);";

    fn fig1() -> Tree {
        Tree::from_newick(FIG1).unwrap()
    }

    fn ch(t: &Tree, s: &str) -> Character {
        Character::parse(s, t.labels_arc()).unwrap()
    }

    #[test]
    fn convexity_examples() {
        let t = fig1();
        assert!(is_convex(&t, &ch(&t, "abde|c|fg")).unwrap());
        assert!(!is_convex(&t, &ch(&t, "abdf|c|eg")).unwrap());
        assert!(is_convex(&t, &ch(&t, "abc|defg")).unwrap());
        assert!(is_convex(&t, &ch(&t, "abcdefg")).unwrap());
        assert!(!is_convex(&t, &ch(&t, "ag|bcdef")).unwrap());
        assert!(is_convex(&t, &ch(&t, "a|b|c|d|e|f|g")).unwrap());
    }

    #[test]
    fn parsimony_examples() {
        let t = fig1();
        assert_eq!(parsimony_score(&t, &ch(&t, "abc|defg")).unwrap(), 1);
        assert_eq!(parsimony_score(&t, &ch(&t, "abcdefg")).unwrap(), 0);
        assert_eq!(parsimony_score(&t, &ch(&t, "ag|bcdef")).unwrap(), 2);
    }

    #[test]
    fn wrong_taxon_set_is_an_error() {
        let t = fig1();
        let other = Tree::from_newick("((a,b),(c,d));").unwrap();
        let f = ch(&other, "ab|cd");
        assert!(matches!(is_convex(&t, &f), Err(Error::NotAPartition(_))));
        assert!(parsimony_score(&t, &f).is_err());
    }

    #[test]
    fn figure_one_listings() {
        let t = fig1();
        let g3: Vec<String> = list_gk(&t, 3).map(|c| c.to_string()).collect();
        let mut sorted = g3.clone();
        sorted.sort();
        assert_eq!(sorted, ["a,b,c,d,e,f,g", "a,b,c,d|e,f,g", "a,b,c|d,e,f,g"]);
        let g4: Vec<String> = list_gk(&t, 4).map(|c| c.to_string()).collect();
        assert_eq!(g4, ["a,b,c,d,e,f,g"]);
        assert_eq!(list_gk(&t, 2).count(), 8);
        assert_eq!(list_gk(&t, 1).count(), 233);
        assert_eq!(list_gk(&t, 8).count(), 0);
    }

    #[test]
    fn tiny_trees() {
        let one = Tree::from_newick("a;").unwrap();
        assert_eq!(list_gk(&one, 1).count(), 1);
        assert_eq!(list_gk(&one, 2).count(), 0);
        let two = Tree::from_newick("(a,b);").unwrap();
        assert_eq!(list_gk(&two, 1).map(|c| c.to_string()).collect::<Vec<_>>(), ["a|b", "a,b"]);
        assert_eq!(list_gk(&two, 2).count(), 1);
    }

    #[test]
    fn encodings_strictly_increase() {
        let t = Tree::from_newick("(((a,b),(c,d)),((e,f),(g,h)),(i,(j,k)));").unwrap();
        for k in 1..=4 {
            let words: Vec<Vec<usize>> = list_gk(&t, k).map(|f| canonical_encoding(&t, &f, k).unwrap()).collect();
            assert_eq!(words.len() as u64, crate::count::to_u64(&count_gk(&t, k)).unwrap());
            assert!(words.windows(2).all(|w| w[0] < w[1]), "k = {k}");
        }
    }
}
