//! Tree families that attain the extremes of `g_k`, plus the local
//! rewrites used to move between them.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::newick::RootedShape;
use crate::tree::{Split, TaxonSet, Tree, Tripartition};

/// `t01, t02, ...`, zero-padded so that label order is numeric order.
pub fn default_labels(n: usize) -> Vec<String> {
    let width = n.to_string().len().max(2);
    (1..=n).map(|i| format!("t{i:0width$}")).collect()
}

fn check_distinct<S: AsRef<str>>(labels: &[S]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_ref()) {
            return Err(Error::DuplicateLabel(l.as_ref().to_string()));
        }
    }
    Ok(())
}

/// Caterpillar whose leaves appear along the spine in the order of `labels`.
pub fn gen_caterpillar<S: AsRef<str>>(labels: &[S]) -> Result<Tree> {
    check_distinct(labels)?;
    let n = labels.len();
    let mut g = Graph::new();
    let leaves: Vec<usize> = labels.iter().map(|l| g.add_vertex(Some(l.as_ref().to_string()))).collect();
    match n {
        0 => return Err(Error::EmptySubset),
        1 => {}
        2 => g.add_edge(leaves[0], leaves[1]),
        _ => {
            let spine: Vec<usize> = (0..n - 2).map(|_| g.add_vertex(None)).collect();
            g.add_edge(spine[0], leaves[0]);
            for (i, &s) in spine.iter().enumerate() {
                g.add_edge(s, leaves[i + 1]);
                if i > 0 {
                    g.add_edge(spine[i - 1], s);
                }
            }
            g.add_edge(spine[n - 3], leaves[n - 1]);
        }
    }
    g.into_tree()
}

/// Caterpillar on [`default_labels`].
pub fn caterpillar(n: usize) -> Tree {
    gen_caterpillar(&default_labels(n)).expect("default labels are valid")
}

/// Uniform random topology on [`default_labels`], reproducible from `seed`.
pub fn gen_random(n: usize, seed: u64) -> Tree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree(&default_labels(n), &mut rng).expect("default labels are valid")
}

/// Uniform random topology by sequential edge attachment: taxon `i` subdivides
/// one of the `2i - 3` existing edges chosen uniformly.
pub fn random_tree<S: AsRef<str>, R: Rng + ?Sized>(labels: &[S], rng: &mut R) -> Result<Tree> {
    check_distinct(labels)?;
    let n = labels.len();
    if n <= 3 {
        return gen_caterpillar(labels);
    }
    let centre = n;
    let mut edges: Vec<(usize, usize)> = vec![(centre, 0), (centre, 1), (centre, 2)];
    let mut next = n + 1;
    for i in 3..n {
        let e = rng.gen_range(0..edges.len());
        let (u, v) = edges[e];
        edges[e] = (u, next);
        edges.push((next, v));
        edges.push((next, i));
        next += 1;
    }
    let mut g = Graph::new();
    for l in labels {
        g.add_vertex(Some(l.as_ref().to_string()));
    }
    for _ in n..next {
        g.add_vertex(None);
    }
    for (u, v) in edges {
        g.add_edge(u, v);
    }
    g.into_tree()
}

/// Shape of the pendant subtrees in generated fully loaded trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PendantStyle {
    Caterpillar,
    Balanced,
    Random(u64),
}

/// Recipe for a fully `k`-loaded tree: a scaffold whose every leaf is
/// replaced by a pendant subtree of `k - 1` taxa, except at most one residue
/// leaf carrying `n mod (k - 1)` taxa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullyLoadedSpec {
    pub n: usize,
    pub k: usize,
    pub scaffold: Tree,
    /// `n mod (k - 1)`; zero when there is no residue.
    pub residue_size: usize,
    pub residue_leaf: Option<String>,
    /// Pendant subtree for each scaffold leaf label.
    pub pendants: BTreeMap<String, RootedShape>,
}

impl FullyLoadedSpec {
    /// Validates a scaffold with explicit pendants.
    pub fn new(k: usize, scaffold: Tree, pendants: BTreeMap<String, RootedShape>) -> Result<Self> {
        if k < 2 {
            return Err(Error::Precondition(format!("fully loaded trees need k >= 2, got {k}")));
        }
        let leaves: Vec<String> = scaffold.labels().to_vec();
        if pendants.keys().cloned().collect::<Vec<_>>() != leaves {
            return Err(Error::Precondition("pendants must be given for exactly the scaffold leaves".into()));
        }
        let n: usize = pendants.values().map(|p| p.taxa().len()).sum();
        let s = n.div_ceil(k - 1);
        if s != leaves.len() {
            return Err(Error::Precondition(format!(
                "{n} taxa need a scaffold on {s} leaves, got {}",
                leaves.len()
            )));
        }
        let residue_size = n % (k - 1);
        let mut residue_leaf = None;
        for (leaf, p) in &pendants {
            let size = p.taxa().len();
            if size == k - 1 {
                continue;
            }
            if size != residue_size || residue_leaf.is_some() {
                return Err(Error::Precondition(format!("pendant at {leaf} has {size} taxa")));
            }
            residue_leaf = Some(leaf.clone());
        }
        Ok(FullyLoadedSpec { n, k, scaffold, residue_size, residue_leaf, pendants })
    }

    /// Splits `labels` into consecutive chunks over the scaffold leaves (in
    /// label order), the residue chunk going to `residue_leaf` or, by default,
    /// the last scaffold leaf.
    pub fn with_style<S: AsRef<str>>(
        k: usize,
        scaffold: Tree,
        labels: &[S],
        style: PendantStyle,
        residue_leaf: Option<&str>,
    ) -> Result<Self> {
        if k < 2 {
            return Err(Error::Precondition(format!("fully loaded trees need k >= 2, got {k}")));
        }
        let n = labels.len();
        let s = n.div_ceil(k - 1);
        if scaffold.n() != s {
            return Err(Error::Precondition(format!("{n} taxa need a scaffold on {s} leaves, got {}", scaffold.n())));
        }
        let residue_at = match residue_leaf {
            Some(l) => scaffold.taxon_id(l).ok_or_else(|| Error::UnknownTaxon(l.to_string()))?,
            None => s - 1,
        };
        let mut rng = match style {
            PendantStyle::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut pendants = BTreeMap::new();
        let mut start = 0;
        for leaf in 0..s {
            let size = if leaf == residue_at { n - (s - 1) * (k - 1) } else { k - 1 };
            let chunk = &labels[start..start + size];
            start += size;
            let shape = match (style, rng.as_mut()) {
                (PendantStyle::Balanced, _) => RootedShape::balanced(chunk),
                (PendantStyle::Random(_), Some(r)) => RootedShape::random(chunk, r),
                _ => RootedShape::caterpillar(chunk),
            };
            pendants.insert(scaffold.label(leaf).to_string(), shape);
        }
        FullyLoadedSpec::new(k, scaffold, pendants)
    }

    /// Caterpillar scaffold and pendants, residue at the end of the spine.
    pub fn default_for(n: usize, k: usize) -> Result<Self> {
        if k < 2 || n < k {
            return Err(Error::Precondition(format!("fully loaded trees need n >= k >= 2, got n = {n}, k = {k}")));
        }
        let s = n.div_ceil(k - 1);
        let scaffold = scaffold_caterpillar(s);
        FullyLoadedSpec::with_style(k, scaffold, &default_labels(n), PendantStyle::Caterpillar, None)
    }

    /// Assembles the tree.
    pub fn build(&self) -> Result<Tree> {
        let mut g = Graph::from_tree(&self.scaffold);
        for (leaf, shape) in &self.pendants {
            let v = self.scaffold.taxon_id(leaf).ok_or_else(|| Error::UnknownTaxon(leaf.clone()))?;
            let nbrs = g.neighbors(v).to_vec();
            g.remove_vertex(v);
            let r = shape.add_to(&mut g);
            for u in nbrs {
                g.add_edge(u, r);
            }
        }
        g.normalize();
        g.into_tree()
    }
}

/// Caterpillar scaffold on leaves `s01, s02, ...`.
pub fn scaffold_caterpillar(s: usize) -> Tree {
    let labels: Vec<String> = default_labels(s).into_iter().map(|l| l.replacen('t', "s", 1)).collect();
    gen_caterpillar(&labels).expect("valid labels")
}

/// Random scaffold on leaves `s01, s02, ...`.
pub fn scaffold_random(s: usize, seed: u64) -> Tree {
    let labels: Vec<String> = default_labels(s).into_iter().map(|l| l.replacen('t', "s", 1)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree(&labels, &mut rng).expect("valid labels")
}

/// A fully `k`-loaded tree on `n` taxa from `spec`, or from
/// [`FullyLoadedSpec::default_for`] when none is given.
pub fn gen_fully_loaded(n: usize, k: usize, spec: Option<&FullyLoadedSpec>) -> Result<Tree> {
    if k < 2 || n < k {
        return Err(Error::Precondition(format!("fully loaded trees need n >= k >= 2, got n = {n}, k = {k}")));
    }
    match spec {
        Some(s) if s.n != n || s.k != k => Err(Error::Precondition("spec does not match n and k".into())),
        Some(s) => s.build(),
        None => FullyLoadedSpec::default_for(n, k)?.build(),
    }
}

/// Vertices of the component containing `root` once the edge to `away` is cut.
fn component(t: &Tree, root: usize, away: usize) -> Vec<usize> {
    let mut out = vec![root];
    let mut stack = vec![(root, away)];
    while let Some((v, from)) = stack.pop() {
        for u in t.neighbors(v) {
            if u != from {
                out.push(u);
                stack.push((u, v));
            }
        }
    }
    out
}

/// That component as a rooted shape hanging from `root`.
fn component_shape(t: &Tree, root: usize, away: usize) -> RootedShape {
    if t.is_leaf(root) && t.degree(root) <= 1 && (t.degree(root) == 0 || t.neighbors(root).any(|u| u == away)) {
        return RootedShape::Leaf(t.label(root).to_string());
    }
    let kids: Vec<RootedShape> = t
        .neighbors(root)
        .filter(|&u| u != away)
        .map(|u| component_shape(t, u, root))
        .collect();
    if kids.len() == 1 && t.is_leaf(root) {
        // Taxon 0 as a component root with its only neighbour below it.
        return RootedShape::Node(vec![RootedShape::Leaf(t.label(root).to_string()), kids.into_iter().next().expect("one")]);
    }
    RootedShape::Node(kids)
}

/// Decides whether `t` is fully `k`-loaded and returns a witness recipe.
///
/// For scaffolds on three or more leaves the pendants are exactly the maximal
/// pendant subtrees with at most `k - 1` taxa; for a single-edge scaffold a
/// split with a side of exactly `k - 1` taxa is required. Trees with fewer
/// than `k` taxa are fully loaded with a one-leaf scaffold.
pub fn is_fully_loaded(t: &Tree, k: usize) -> Option<FullyLoadedSpec> {
    if k < 2 {
        return None;
    }
    let n = t.n();
    let cap = k - 1;
    let s = n.div_ceil(cap);
    // (component root, attachment vertex) pairs for the chosen pendants.
    let parts: Vec<(usize, usize)> = if s <= 1 {
        let scaffold = Tree::from_newick("s01;").expect("valid");
        let shape = if n == 1 {
            RootedShape::Leaf(t.label(0).to_string())
        } else {
            RootedShape::Node(vec![RootedShape::Leaf(t.label(0).to_string()), component_shape(t, t.children(0)[0], 0)])
        };
        let pendants = BTreeMap::from([("s01".to_string(), shape)]);
        return FullyLoadedSpec::new(k, scaffold, pendants).ok();
    } else if s == 2 {
        let (lower, upper) = t.preorder().iter().skip(1).find_map(|&v| {
            let b = t.taxa_below_count(v);
            (b == cap || n - b == cap).then(|| (v, t.parent(v).expect("non-root")))
        })?;
        vec![(lower, upper), (upper, lower)]
    } else {
        // Directed candidates: component of `root` away from `att`, with its size.
        let mut cands: Vec<(usize, usize, usize)> = Vec::new();
        for &v in t.preorder().iter().skip(1) {
            let p = t.parent(v).expect("non-root");
            let b = t.taxa_below_count(v);
            if b <= cap {
                cands.push((v, p, b));
            }
            if n - b <= cap {
                cands.push((p, v, n - b));
            }
        }
        let mut best: Vec<Option<(usize, usize, usize)>> = vec![None; n];
        for &(r, a, size) in &cands {
            for x in component(t, r, a).into_iter().filter(|&x| t.is_leaf(x)) {
                if best[x].is_none_or(|(_, _, s0)| size > s0) {
                    best[x] = Some((r, a, size));
                }
            }
        }
        let mut chosen: Vec<(usize, usize)> = best.into_iter().map(|b| b.map(|(r, a, _)| (r, a))).collect::<Option<Vec<_>>>()?;
        chosen.sort_unstable();
        chosen.dedup();
        chosen
    };
    if parts.len() != s {
        return None;
    }

    let mut g = Graph::from_tree(t);
    let mut pendants = BTreeMap::new();
    let mut covered = 0;
    let mut attach = Vec::new();
    for &(root, att) in &parts {
        let verts = component(t, root, att);
        let taxa: Vec<usize> = verts.iter().copied().filter(|&x| t.is_leaf(x)).collect();
        covered += taxa.len();
        let name = format!("s_{}", t.label(*taxa.iter().min().expect("non-empty")));
        pendants.insert(name.clone(), component_shape(t, root, att));
        attach.push((name, verts, att));
    }
    if covered != n {
        return None;
    }
    // Contract each pendant to a scaffold leaf.
    let mut scaffold_leaves = Vec::new();
    for (name, verts, _) in &attach {
        for &v in verts {
            g.remove_vertex(v);
        }
        scaffold_leaves.push(g.add_vertex(Some(name.clone())));
    }
    if s == 2 {
        g.add_edge(scaffold_leaves[0], scaffold_leaves[1]);
    } else {
        for (leaf, (_, _, att)) in scaffold_leaves.iter().zip(&attach) {
            g.add_edge(*att, *leaf);
        }
    }
    let scaffold = g.into_tree().ok()?;
    FullyLoadedSpec::new(k, scaffold, pendants).ok()
}

/// Removes the component at `root` (away from `att`) and hangs `shape` from `att`.
fn replace_component(t: &Tree, root: usize, att: usize, shape: &RootedShape) -> Result<Tree> {
    let mut g = Graph::from_tree(t);
    for v in component(t, root, att) {
        g.remove_vertex(v);
    }
    let r = shape.add_to(&mut g);
    g.add_edge(att, r);
    g.normalize();
    g.into_tree()
}

/// Locates the `side` of a split as `(component root, attachment vertex)`.
fn locate_side(t: &Tree, side: &TaxonSet) -> Result<(usize, usize)> {
    let ids = t.ids_of(side)?;
    let rest = t.taxon_set().difference(side).cloned().collect::<TaxonSet>();
    let split = Split::new(rest, side.clone());
    let (upper, lower) = t
        .edge_of_split(&split)
        .ok_or_else(|| Error::Precondition("the tree does not contain this split".into()))?;
    Ok(if ids.binary_search(&0).is_ok() { (upper, lower) } else { (lower, upper) })
}

/// Replaces the pendant subtree on `side` with `shape` on the same taxa.
pub fn replace_pendant(t: &Tree, side: &TaxonSet, shape: &RootedShape) -> Result<Tree> {
    let mut taxa = shape.taxa();
    taxa.sort();
    if taxa != side.iter().cloned().collect::<Vec<_>>() {
        return Err(Error::Precondition("replacement must carry exactly the side's taxa".into()));
    }
    let (root, att) = locate_side(t, side)?;
    replace_component(t, root, att, shape)
}

/// Swaps the `B` side of `split` (with `k <= |B| <= 2(k-1)`) for the
/// single-edge-scaffold fully loaded tree on `B`, hung from the subdivided
/// scaffold edge. The first `k - 1` taxa of `B` form one pendant.
pub fn replace_with_local_fully_loaded(t: &Tree, split: &Split, k: usize) -> Result<Tree> {
    let b = &split.side_b;
    if k < 2 || b.len() < k || b.len() > 2 * (k - 1) {
        return Err(Error::Precondition(format!("need k <= |B| <= 2(k-1), got |B| = {}, k = {k}", b.len())));
    }
    let taxa: Vec<&String> = b.iter().collect();
    let (left, right) = taxa.split_at(k - 1);
    let shape = RootedShape::Node(vec![RootedShape::caterpillar(left), RootedShape::caterpillar(right)]);
    let (root, att) = locate_side(t, b)?;
    replace_component(t, root, att, &shape)
}

/// Replaces the `C` subtree of `tp` by a caterpillar on `C` inserted on the
/// path between the `A` and `B` subtrees. `C`'s taxa hang off the new spine
/// in label order, the first one next to `A`.
pub fn linearize(t: &Tree, tp: &Tripartition) -> Result<Tree> {
    if tp.parts().iter().any(|p| p.len() < 2) {
        return Err(Error::Precondition("linearization needs |A|, |B|, |C| >= 2".into()));
    }
    let v = tp.center;
    if v < t.n() || v >= t.vertex_count() {
        return Err(Error::Precondition("tripartition centre is not an internal vertex".into()));
    }
    let nbrs: Vec<usize> = t.neighbors(v).collect();
    let side_taxa = |u: usize| -> TaxonSet {
        t.ids_to_set(component(t, u, v).into_iter().filter(|&x| t.is_leaf(x)))
    };
    let find = |part: &TaxonSet| nbrs.iter().copied().find(|&u| side_taxa(u) == *part);
    let (a0, b0, c0) = match (find(&tp.part_a), find(&tp.part_b), find(&tp.part_c)) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err(Error::Precondition("tree does not contain this tripartition".into())),
    };
    let mut g = Graph::from_tree(t);
    for x in component(t, c0, v) {
        g.remove_vertex(x);
    }
    g.remove_vertex(v);
    let mut prev = a0;
    for label in &tp.part_c {
        let w = g.add_vertex(None);
        let leaf = g.add_vertex(Some(label.clone()));
        g.add_edge(prev, w);
        g.add_edge(w, leaf);
        prev = w;
    }
    g.add_edge(prev, b0);
    g.into_tree()
}

/// Gives every taxon outside a cherry a new sibling `<label>~2`, producing a
/// tree in which every taxon is in a cherry.
pub fn double_lonely_taxa(t: &Tree) -> Result<Tree> {
    let in_cherry: TaxonSet = t.cherries().into_iter().flat_map(|(a, b)| [a, b]).collect();
    let mut g = Graph::from_tree(t);
    for x in 0..t.n() {
        if in_cherry.contains(t.label(x)) {
            continue;
        }
        let twin = format!("{}~2", t.label(x));
        if t.taxon_id(&twin).is_some() {
            return Err(Error::DuplicateLabel(twin));
        }
        let u = g.neighbors(x)[0];
        let w = g.subdivide(u, x);
        let leaf = g.add_vertex(Some(twin));
        g.add_edge(w, leaf);
    }
    g.into_tree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_gk;

    const FIG1: &str = "(((a,b),c),(e,(f,g)),d);";

    #[test]
    fn caterpillar_shape() {
        let t = gen_caterpillar(&["a", "b", "c", "d"]).unwrap();
        assert_eq!(t, Tree::from_newick("((a,b),(c,d));").unwrap());
        let t = caterpillar(12);
        assert_eq!(t.cherries().len(), 2);
        let nine = gen_caterpillar(&["a", "b", "c", "d", "e", "f", "g", "h", "i"]).unwrap();
        assert_eq!(nine.to_newick(), "(a,(b,(c,(d,(e,(f,(g,(h,i))))))));");
        assert!(gen_caterpillar(&["a", "a"]).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(gen_random(10, 7), gen_random(10, 7));
        assert_eq!(gen_random(10, 7).vertex_count(), 18);
    }

    #[test]
    fn figure_one_is_fully_four_loaded() {
        let scaffold = Tree::from_newick("(x,y,z);").unwrap();
        let pendants = BTreeMap::from([
            ("x".to_string(), RootedShape::caterpillar(&["a", "b", "c"])),
            ("y".to_string(), RootedShape::caterpillar(&["g", "f", "e"])),
            ("z".to_string(), RootedShape::Leaf("d".into())),
        ]);
        let spec = FullyLoadedSpec::new(4, scaffold, pendants).unwrap();
        assert_eq!(spec.residue_leaf.as_deref(), Some("z"));
        let fig1 = Tree::from_newick(FIG1).unwrap();
        assert_eq!(gen_fully_loaded(7, 4, Some(&spec)).unwrap(), fig1);
        assert!(is_fully_loaded(&fig1, 4).is_some());
        assert!(is_fully_loaded(&fig1, 5).is_some());
        assert!(is_fully_loaded(&fig1, 3).is_none());
    }

    #[test]
    fn witness_rebuilds_the_tree() {
        for (n, k) in [(7, 3), (8, 3), (9, 4), (13, 5), (4, 3), (6, 4), (2, 3), (5, 2)] {
            let t = gen_fully_loaded(n.max(k), k, None).unwrap();
            let w = is_fully_loaded(&t, k).unwrap_or_else(|| panic!("n = {n}, k = {k}"));
            assert_eq!(w.build().unwrap(), t);
        }
    }

    #[test]
    fn fully_loaded_counts() {
        assert_eq!(count_gk(&gen_fully_loaded(7, 3, None).unwrap(), 3), 2u32.into());
        for k in 2..7 {
            let t = gen_fully_loaded(2 * (k - 1), k, None).unwrap();
            assert_eq!(count_gk(&t, k), 1u32.into());
        }
        assert!(gen_fully_loaded(2, 3, None).is_err());
        assert!(is_fully_loaded(&caterpillar(9), 3).is_none());
    }

    #[test]
    fn linearization_example() {
        let t = Tree::from_newick("(((a,b),c),((d,e),f),((g,h),(i,j)));").unwrap();
        let tp = t
            .tripartitions()
            .into_iter()
            .find(|tp| tp.parts().iter().all(|p| p.len() >= 3))
            .unwrap();
        // Put {g,h,i,j} in the C slot.
        let idx = tp.parts().iter().position(|p| p.len() == 4).unwrap();
        let order = match idx {
            0 => [1, 2, 0],
            1 => [0, 2, 1],
            _ => [0, 1, 2],
        };
        let tp = tp.permuted(order);
        let out = linearize(&t, &tp).unwrap();
        let want = Tree::from_newick("(((a,b),c),(g,(h,(i,(j,((d,e),f))))));").unwrap();
        assert_eq!(out, want);
        assert!(out.cherries().len() < t.cherries().len());
    }

    #[test]
    fn doubling_puts_everything_in_cherries() {
        let t = caterpillar(7);
        let d = double_lonely_taxa(&t).unwrap();
        assert_eq!(d.n(), 2 * 7 - 2 * 2);
        assert!(is_fully_loaded(&d, 3).is_some());
    }
}
