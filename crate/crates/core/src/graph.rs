//! Mutable scratch graph used to build, restrict and rewire trees.
//!
//! Every tree-producing operation goes through [`Graph::into_tree`], which
//! validates the binary-tree invariants and assigns canonical vertex ids.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tree::{validate_label, Tree, NONE};

#[derive(Clone, Debug, Default)]
pub(crate) struct Graph {
    adj: Vec<Vec<usize>>,
    label: Vec<Option<String>>,
    alive: Vec<bool>,
}

impl Graph {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    /// Copies `tree` so that vertex ids coincide with the tree's ids.
    pub(crate) fn from_tree(tree: &Tree) -> Self {
        let mut g = Graph::new();
        for v in 0..tree.vertex_count() {
            let label = if v < tree.n() { Some(tree.label(v).to_string()) } else { None };
            g.add_vertex(label);
        }
        for v in 0..tree.vertex_count() {
            if let Some(p) = tree.parent(v) {
                g.add_edge(p, v);
            }
        }
        g
    }

    pub(crate) fn add_vertex(&mut self, label: Option<String>) -> usize {
        self.adj.push(Vec::with_capacity(3));
        self.label.push(label);
        self.alive.push(true);
        self.adj.len() - 1
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].retain(|&x| x != v);
        self.adj[v].retain(|&x| x != u);
    }

    pub(crate) fn remove_vertex(&mut self, v: usize) {
        let nbrs = std::mem::take(&mut self.adj[v]);
        for u in nbrs {
            self.adj[u].retain(|&x| x != v);
        }
        self.alive[v] = false;
    }

    /// Inserts a new unlabelled vertex in the middle of edge `u`-`v`.
    pub(crate) fn subdivide(&mut self, u: usize, v: usize) -> usize {
        self.remove_edge(u, v);
        let w = self.add_vertex(None);
        self.add_edge(u, w);
        self.add_edge(w, v);
        w
    }

    pub(crate) fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Removes every vertex in `doomed` that carries a label.
    pub(crate) fn remove_labelled(&mut self, doomed: impl IntoIterator<Item = usize>) {
        for v in doomed {
            self.remove_vertex(v);
        }
    }

    /// Repeatedly deletes unlabelled vertices of degree at most one.
    pub(crate) fn prune_unlabelled_leaves(&mut self) {
        let mut work: Vec<usize> = (0..self.adj.len())
            .filter(|&v| self.alive[v] && self.label[v].is_none() && self.adj[v].len() <= 1)
            .collect();
        while let Some(v) = work.pop() {
            if !self.alive[v] || self.label[v].is_some() || self.adj[v].len() > 1 {
                continue;
            }
            let nbrs = self.adj[v].clone();
            self.remove_vertex(v);
            for u in nbrs {
                if self.label[u].is_none() && self.adj[u].len() <= 1 {
                    work.push(u);
                }
            }
        }
    }

    /// Suppresses every unlabelled vertex of degree two.
    pub(crate) fn suppress_degree_two(&mut self) {
        for v in 0..self.adj.len() {
            if self.alive[v] && self.label[v].is_none() && self.adj[v].len() == 2 {
                let (x, y) = (self.adj[v][0], self.adj[v][1]);
                self.remove_vertex(v);
                self.add_edge(x, y);
            }
        }
    }

    pub(crate) fn normalize(&mut self) {
        self.prune_unlabelled_leaves();
        self.suppress_degree_two();
    }

    /// Validates the graph and converts it to a canonically numbered [`Tree`].
    pub(crate) fn into_tree(self) -> Result<Tree> {
        let alive: Vec<usize> = (0..self.adj.len()).filter(|&v| self.alive[v]).collect();
        let mut taxa: Vec<(&str, usize)> = alive
            .iter()
            .filter_map(|&v| self.label[v].as_deref().map(|l| (l, v)))
            .collect();
        if taxa.is_empty() {
            return Err(Error::EmptySubset);
        }
        for (l, _) in &taxa {
            validate_label(l)?;
        }
        taxa.sort_unstable();
        for w in taxa.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateLabel(w[0].0.to_string()));
            }
        }
        let n = taxa.len();

        let edges: usize = alive.iter().map(|&v| self.adj[v].len()).sum::<usize>() / 2;
        if edges + 1 != alive.len() {
            return Err(Error::NotATree);
        }
        for &v in &alive {
            let d = self.adj[v].len();
            let ok = match self.label[v] {
                Some(_) => d == 1 || (d == 0 && alive.len() == 1),
                None => d == 3,
            };
            if !ok {
                return Err(Error::NonBinary { degree: d });
            }
        }

        let len = self.adj.len();
        let mut taxon_of = vec![NONE; len];
        for (id, &(_, v)) in taxa.iter().enumerate() {
            taxon_of[v] = id;
        }

        // Root at the smallest taxon and orient every edge away from it.
        let root = taxa[0].1;
        let mut parent = vec![NONE; len];
        let mut seen = vec![false; len];
        let mut order = Vec::with_capacity(alive.len());
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = v;
                    stack.push(u);
                }
            }
        }
        if order.len() != alive.len() {
            return Err(Error::NotATree);
        }

        let mut min_taxon = vec![usize::MAX; len];
        for &v in order.iter().rev() {
            if taxon_of[v] != NONE {
                min_taxon[v] = min_taxon[v].min(taxon_of[v]);
            }
            let p = parent[v];
            if p != NONE {
                min_taxon[p] = min_taxon[p].min(min_taxon[v]);
            }
        }

        let kids = |v: usize| -> Vec<usize> {
            let mut c: Vec<usize> = self.adj[v].iter().copied().filter(|&u| u != parent[v]).collect();
            c.sort_unstable_by_key(|&u| min_taxon[u]);
            c
        };

        let mut new_id = vec![NONE; len];
        let mut next_internal = n;
        let mut preorder_old = Vec::with_capacity(alive.len());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            new_id[v] = if taxon_of[v] != NONE {
                taxon_of[v]
            } else {
                next_internal += 1;
                next_internal - 1
            };
            preorder_old.push(v);
            for u in kids(v).into_iter().rev() {
                stack.push(u);
            }
        }

        let count = alive.len();
        let mut t_parent = vec![NONE; count];
        let mut t_children = vec![Vec::new(); count];
        let mut t_preorder = Vec::with_capacity(count);
        for &v in &preorder_old {
            let id = new_id[v];
            t_preorder.push(id);
            if parent[v] != NONE {
                t_parent[id] = new_id[parent[v]];
            }
            t_children[id] = kids(v).into_iter().map(|u| new_id[u]).collect();
        }
        let labels: Arc<[String]> = taxa.iter().map(|(l, _)| l.to_string()).collect();
        Ok(Tree::from_parts(labels, t_parent, t_children, t_preorder))
    }
}
