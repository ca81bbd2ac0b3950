//! Unrooted binary phylogenetic trees and their structural queries.
//!
//! A [`Tree`] is immutable and canonically numbered: taxa are interned in
//! lexicographic label order and leaf `i` is vertex `i`; internal vertices
//! follow in preorder of the tree rooted at taxon 0 with children ordered by
//! their smallest taxon. Two trees therefore compare equal exactly when they
//! are isomorphic as leaf-labelled trees.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::newick;

pub(crate) const NONE: usize = usize::MAX;

/// Taxon subset; serializes as a sorted array of labels.
pub type TaxonSet = BTreeSet<String>;

/// Checks that `label` can name a taxon.
pub fn validate_label(label: &str) -> Result<()> {
    let bad = |c: char| c.is_whitespace() || "(),;:|".contains(c);
    if label.is_empty() || label.chars().any(bad) {
        return Err(Error::InvalidLabel(label.to_string()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    labels: Arc<[String]>,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    preorder: Vec<usize>,
    below: Vec<usize>,
}

/// Leaf bipartition induced by a single edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Split {
    pub side_a: TaxonSet,
    pub side_b: TaxonSet,
}

impl Split {
    pub fn new(side_a: TaxonSet, side_b: TaxonSet) -> Self {
        Split { side_a, side_b }
    }

    /// The same split with the sides exchanged.
    pub fn flipped(&self) -> Self {
        Split { side_a: self.side_b.clone(), side_b: self.side_a.clone() }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &TaxonSet| s.iter().map(String::as_str).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", join(&self.side_a), join(&self.side_b))
    }
}

/// Leaf tripartition induced by an internal vertex.
///
/// `part_a` is the part containing the smallest taxon; `part_b` and `part_c`
/// are the two remaining subtrees in canonical child order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tripartition {
    pub part_a: TaxonSet,
    pub part_b: TaxonSet,
    pub part_c: TaxonSet,
    pub center: usize,
}

impl Tripartition {
    pub fn parts(&self) -> [&TaxonSet; 3] {
        [&self.part_a, &self.part_b, &self.part_c]
    }

    /// Reorders the parts; `order` lists which original part (0, 1, 2) goes to a, b, c.
    pub fn permuted(&self, order: [usize; 3]) -> Self {
        let p = self.parts();
        Tripartition {
            part_a: p[order[0]].clone(),
            part_b: p[order[1]].clone(),
            part_c: p[order[2]].clone(),
            center: self.center,
        }
    }
}

impl Tree {
    pub(crate) fn from_parts(
        labels: Arc<[String]>,
        parent: Vec<usize>,
        children: Vec<Vec<usize>>,
        preorder: Vec<usize>,
    ) -> Self {
        let n = labels.len();
        let mut below = vec![0; parent.len()];
        for &v in preorder.iter().rev() {
            if v < n {
                below[v] += 1;
            }
            if parent[v] != NONE {
                below[parent[v]] += below[v];
            }
        }
        Tree { labels, parent, children, preorder, below }
    }

    /// Parses a single semicolon-terminated Newick expression.
    pub fn from_newick(text: &str) -> Result<Tree> {
        newick::parse_newick(text)
    }

    /// Canonical Newick text; see [`newick::write_newick`].
    pub fn to_newick(&self) -> String {
        newick::write_newick(self)
    }

    /// Builds a tree from an explicit edge list over labels and internal vertex names.
    ///
    /// Vertices named in `leaves` are taxa; any other endpoint is an internal vertex.
    pub fn from_edges<S: AsRef<str>>(leaves: &[S], edges: &[(S, S)]) -> Result<Tree> {
        let mut g = Graph::new();
        let mut ids = std::collections::HashMap::new();
        let leafset: BTreeSet<&str> = leaves.iter().map(|s| s.as_ref()).collect();
        for l in leaves {
            let v = g.add_vertex(Some(l.as_ref().to_string()));
            if ids.insert(l.as_ref().to_string(), v).is_some() {
                return Err(Error::DuplicateLabel(l.as_ref().to_string()));
            }
        }
        let mut id = |name: &str, g: &mut Graph| -> usize {
            if let Some(&v) = ids.get(name) {
                return v;
            }
            debug_assert!(!leafset.contains(name));
            let v = g.add_vertex(None);
            ids.insert(name.to_string(), v);
            v
        };
        for (a, b) in edges {
            let u = id(a.as_ref(), &mut g);
            let v = id(b.as_ref(), &mut g);
            g.add_edge(u, v);
        }
        g.into_tree()
    }

    /// Number of taxa.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn labels_arc(&self) -> Arc<[String]> {
        Arc::clone(&self.labels)
    }

    pub fn label(&self, taxon: usize) -> &str {
        &self.labels[taxon]
    }

    pub fn taxon_id(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    pub fn taxon_set(&self) -> TaxonSet {
        self.labels.iter().cloned().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn edge_count(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v < self.n()
    }

    /// Parent in the rooting at taxon 0 (`None` for taxon 0 itself).
    pub fn parent(&self, v: usize) -> Option<usize> {
        (self.parent[v] != NONE).then_some(self.parent[v])
    }

    /// Children in the rooting at taxon 0, ordered by smallest taxon below.
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent(v).into_iter().chain(self.children[v].iter().copied())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(self.parent[v] != NONE)
    }

    /// All vertices, parents before children, starting with taxon 0.
    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    /// Number of taxa in the subtree below `v` (inclusive).
    pub fn taxa_below_count(&self, v: usize) -> usize {
        self.below[v]
    }

    /// Taxon ids in the subtree below `v`, ascending.
    pub fn taxa_below(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.below[v]);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if self.is_leaf(u) {
                out.push(u);
            }
            stack.extend(self.children[u].iter().copied());
        }
        out.sort_unstable();
        out
    }

    pub(crate) fn ids_to_set(&self, ids: impl IntoIterator<Item = usize>) -> TaxonSet {
        ids.into_iter().map(|i| self.labels[i].clone()).collect()
    }

    /// Resolves labels to ascending, de-duplicated taxon ids.
    pub fn ids_of<S: AsRef<str>>(&self, subset: impl IntoIterator<Item = S>) -> Result<Vec<usize>> {
        let mut ids = subset
            .into_iter()
            .map(|s| self.taxon_id(s.as_ref()).ok_or_else(|| Error::UnknownTaxon(s.as_ref().to_string())))
            .collect::<Result<Vec<_>>>()?;
        ids.sort_unstable();
        ids.dedup();
        Ok(ids)
    }

    /// The restriction `T|subset`: minimal spanning subtree with degree-2 vertices suppressed.
    pub fn restrict<S: AsRef<str>>(&self, subset: impl IntoIterator<Item = S>) -> Result<Tree> {
        let ids = self.ids_of(subset)?;
        self.restrict_ids(&ids)
    }

    /// [`Tree::restrict`] over taxon ids.
    pub fn restrict_ids(&self, ids: &[usize]) -> Result<Tree> {
        if ids.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut keep = vec![false; self.n()];
        for &i in ids {
            if i >= self.n() {
                return Err(Error::UnknownTaxon(format!("#{i}")));
            }
            keep[i] = true;
        }
        if keep.iter().all(|&k| k) {
            return Ok(self.clone());
        }
        let mut g = Graph::from_tree(self);
        g.remove_labelled((0..self.n()).filter(|&i| !keep[i]));
        g.normalize();
        g.into_tree()
    }

    /// `T \ subset`, the restriction to the complement of `subset`.
    pub fn delete_taxa<S: AsRef<str>>(&self, subset: impl IntoIterator<Item = S>) -> Result<Tree> {
        let ids = self.ids_of(subset)?;
        self.delete_ids(&ids)
    }

    pub fn delete_ids(&self, ids: &[usize]) -> Result<Tree> {
        let mut drop = vec![false; self.n()];
        for &i in ids {
            drop[i] = true;
        }
        let rest: Vec<usize> = (0..self.n()).filter(|&i| !drop[i]).collect();
        if rest.is_empty() {
            return Err(Error::DeleteAll);
        }
        self.restrict_ids(&rest)
    }

    /// Splits as `(below, rest)` taxon id lists, one per edge, keyed by the lower vertex.
    pub(crate) fn edge_splits(&self) -> Vec<(usize, Vec<usize>)> {
        self.preorder
            .iter()
            .copied()
            .filter(|&v| self.parent[v] != NONE)
            .map(|v| (v, self.taxa_below(v)))
            .collect()
    }

    /// One split per edge. `side_b` is the side not containing the smallest taxon.
    pub fn splits(&self) -> Vec<Split> {
        self.edge_splits()
            .into_iter()
            .map(|(_, below)| self.split_from_below(&below))
            .collect()
    }

    fn split_from_below(&self, below: &[usize]) -> Split {
        let mut mark = vec![false; self.n()];
        for &i in below {
            mark[i] = true;
        }
        Split {
            side_a: self.ids_to_set((0..self.n()).filter(|&i| !mark[i])),
            side_b: self.ids_to_set(below.iter().copied()),
        }
    }

    /// The edge `(upper, lower)` inducing `split`, if the tree contains it.
    pub fn edge_of_split(&self, split: &Split) -> Option<(usize, usize)> {
        let a = self.ids_of(&split.side_a).ok()?;
        let b = self.ids_of(&split.side_b).ok()?;
        if a.len() + b.len() != self.n() || a.is_empty() || b.is_empty() {
            return None;
        }
        let below = if b.binary_search(&0).is_ok() { a } else { b };
        self.edge_splits()
            .into_iter()
            .find(|(_, s)| *s == below)
            .map(|(v, _)| (self.parent[v], v))
    }

    /// Directed walk for a split `A|B` with `k <= |B| <= 2(k-1)`.
    ///
    /// Starting from the edge at taxon 0 the walk keeps stepping onto a child
    /// edge whose far side still holds at least `k` taxa (the larger one on a
    /// tie), and stops when neither child qualifies.
    pub fn find_bounded_split(&self, k: usize) -> Result<Split> {
        if k < 2 {
            return Err(Error::Precondition(format!("bounded split needs k >= 2, got {k}")));
        }
        if self.n() <= k {
            return Err(Error::Precondition(format!("bounded split needs n > k, got n = {}, k = {k}", self.n())));
        }
        let mut v = self.children[0][0];
        loop {
            let next = self.children[v]
                .iter()
                .copied()
                .filter(|&c| self.below[c] >= k)
                .max_by_key(|&c| self.below[c]);
            match next {
                Some(c) => v = c,
                None => break,
            }
        }
        debug_assert!(self.below[v] >= k && self.below[v] <= 2 * (k - 1));
        Ok(self.split_from_below(&self.taxa_below(v)))
    }

    /// Unordered leaf pairs with a common neighbour.
    ///
    /// For `n = 2` the single pair is returned; for `n = 3` all three pairs.
    pub fn cherries(&self) -> Vec<(String, String)> {
        let n = self.n();
        if n == 2 {
            return vec![(self.labels[0].clone(), self.labels[1].clone())];
        }
        let mut out = Vec::new();
        for v in n..self.vertex_count() {
            let leaves: Vec<usize> = self.neighbors(v).filter(|&u| self.is_leaf(u)).collect();
            for i in 0..leaves.len() {
                for j in i + 1..leaves.len() {
                    let (a, b) = (leaves[i].min(leaves[j]), leaves[i].max(leaves[j]));
                    out.push((self.labels[a].clone(), self.labels[b].clone()));
                }
            }
        }
        out.sort();
        out
    }

    /// One tripartition per internal vertex, in preorder.
    pub fn tripartitions(&self) -> Vec<Tripartition> {
        let n = self.n();
        self.preorder
            .iter()
            .copied()
            .filter(|&v| v >= n)
            .map(|v| {
                let b = self.taxa_below(v);
                let c1 = self.taxa_below(self.children[v][0]);
                let c2 = self.taxa_below(self.children[v][1]);
                let mut mark = vec![false; n];
                for &i in &b {
                    mark[i] = true;
                }
                Tripartition {
                    part_a: self.ids_to_set((0..n).filter(|&i| !mark[i])),
                    part_b: self.ids_to_set(c1),
                    part_c: self.ids_to_set(c2),
                    center: v,
                }
            })
            .collect()
    }

    /// Equality of leaf-labelled topology; same as `==`.
    pub fn is_isomorphic(&self, other: &Tree) -> bool {
        self == other
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_newick())
    }
}

impl std::str::FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tree> {
        Tree::from_newick(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = "(((a,b),c),(e,(f,g)),d);";

    fn set(s: &str) -> TaxonSet {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn star_counts() {
        let t = Tree::from_newick("((a,b),c);").unwrap();
        assert_eq!(t.n(), 3);
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(t.splits().len(), 3);
        assert!(t.splits().iter().all(|s| s.side_a.len().min(s.side_b.len()) == 1));
        assert_eq!(t.tripartitions().len(), 1);
        assert_eq!(t.cherries().len(), 3);
    }

    #[test]
    fn figure_one_splits() {
        let t = Tree::from_newick(FIG1).unwrap();
        let splits = t.splits();
        assert_eq!(splits.len(), 11);
        let has = |a: &str, b: &str| {
            splits.iter().any(|s| (s.side_a == set(a) && s.side_b == set(b)) || (s.side_a == set(b) && s.side_b == set(a)))
        };
        assert!(has("abc", "defg"));
        assert!(has("abcd", "efg"));
    }

    #[test]
    fn restrict_identity_and_singletons() {
        let t = Tree::from_newick(FIG1).unwrap();
        assert_eq!(t.restrict(t.labels().to_vec()).unwrap(), t);
        let one = t.restrict(["a"]).unwrap();
        assert_eq!(one.n(), 1);
        assert_eq!(one.edge_count(), 0);
        let four = t.restrict(["a", "b", "c", "d"]).unwrap();
        assert!(four.splits().iter().any(|s| s.side_b == set("cd") || s.side_b == set("ab")));
        assert_eq!(four, Tree::from_newick("((a,b),(c,d));").unwrap());
    }

    #[test]
    fn restrict_errors() {
        let t = Tree::from_newick(FIG1).unwrap();
        assert_eq!(t.restrict(Vec::<String>::new()), Err(Error::EmptySubset));
        assert_eq!(t.restrict(["z"]), Err(Error::UnknownTaxon("z".into())));
        assert_eq!(t.delete_taxa(t.labels().to_vec()), Err(Error::DeleteAll));
        assert_eq!(t.delete_taxa(Vec::<String>::new()).unwrap(), t);
    }

    #[test]
    fn bounded_split_at_n_equals_k_plus_one() {
        let t = Tree::from_newick("((a,b),(c,d));").unwrap();
        let s = t.find_bounded_split(3).unwrap();
        assert_eq!(s.side_b.len(), 3);
        assert!(t.find_bounded_split(4).is_err());
    }

    #[test]
    fn tripartition_sizes_of_linearization_example() {
        let t = Tree::from_newick("(((a,b),c),((d,e),f),((g,h),(i,j)));").unwrap();
        let want = [set("abc"), set("def"), set("ghij")];
        assert!(t.tripartitions().iter().any(|tp| {
            let mut got: Vec<TaxonSet> = tp.parts().into_iter().cloned().collect();
            got.sort();
            let mut w = want.to_vec();
            w.sort();
            got == w
        }));
    }

    #[test]
    fn degenerate_sizes() {
        let t = Tree::from_newick("(a,b);").unwrap();
        assert_eq!(t.n(), 2);
        assert_eq!(t.splits().len(), 1);
        assert_eq!(t.cherries().len(), 1);
        let t = Tree::from_newick("a;").unwrap();
        assert_eq!(t.n(), 1);
        assert!(t.splits().is_empty());
    }

    #[test]
    fn edge_of_split_roundtrip() {
        let t = Tree::from_newick(FIG1).unwrap();
        for s in t.splits() {
            let (u, v) = t.edge_of_split(&s).unwrap();
            assert_eq!(t.parent(v), Some(u));
            assert_eq!(t.edge_of_split(&s.flipped()), Some((u, v)));
        }
        assert_eq!(t.edge_of_split(&Split::new(set("ag"), set("bcdef"))), None);
    }
}
