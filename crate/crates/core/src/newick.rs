//! Newick reading and canonical writing.
//!
//! Branch lengths and internal node labels are accepted and discarded. A
//! rooted input is unrooted by suppressing its degree-2 root.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::Tree;

/// A rooted binary topology, used for Newick ASTs and pendant subtrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RootedShape {
    Leaf(String),
    Node(Vec<RootedShape>),
}

impl RootedShape {
    /// `((((t0,t1),t2),t3),...)`: a rooted caterpillar in the given taxon order.
    pub fn caterpillar<S: AsRef<str>>(taxa: &[S]) -> RootedShape {
        assert!(!taxa.is_empty(), "pendant needs at least one taxon");
        let mut acc = RootedShape::Leaf(taxa[0].as_ref().to_string());
        for t in &taxa[1..] {
            acc = RootedShape::Node(vec![acc, RootedShape::Leaf(t.as_ref().to_string())]);
        }
        acc
    }

    /// Splits the taxon list in halves recursively.
    pub fn balanced<S: AsRef<str>>(taxa: &[S]) -> RootedShape {
        assert!(!taxa.is_empty(), "pendant needs at least one taxon");
        if taxa.len() == 1 {
            return RootedShape::Leaf(taxa[0].as_ref().to_string());
        }
        let (l, r) = taxa.split_at(taxa.len() / 2);
        RootedShape::Node(vec![RootedShape::balanced(l), RootedShape::balanced(r)])
    }

    /// Uniform random rooted topology by sequential attachment, root edge included.
    pub fn random<S: AsRef<str>, R: Rng + ?Sized>(taxa: &[S], rng: &mut R) -> RootedShape {
        assert!(!taxa.is_empty(), "pendant needs at least one taxon");
        // Arena: children per node, leaves carry a taxon index.
        let mut kids: Vec<Vec<usize>> = vec![Vec::new()];
        let mut leaf: Vec<Option<usize>> = vec![Some(0)];
        let mut parent: Vec<Option<usize>> = vec![None];
        let mut root = 0;
        for i in 1..taxa.len() {
            // Every node owns the edge above it; picking a node picks an edge.
            let target = rng.gen_range(0..kids.len());
            let new_leaf = kids.len();
            kids.push(Vec::new());
            leaf.push(Some(i));
            parent.push(None);
            let joint = kids.len();
            kids.push(vec![target, new_leaf]);
            leaf.push(None);
            parent.push(parent[target]);
            match parent[target] {
                Some(p) => {
                    for c in kids[p].iter_mut() {
                        if *c == target {
                            *c = joint;
                        }
                    }
                }
                None => root = joint,
            }
            parent[target] = Some(joint);
            parent[new_leaf] = Some(joint);
        }
        fn build<S: AsRef<str>>(v: usize, kids: &[Vec<usize>], leaf: &[Option<usize>], taxa: &[S]) -> RootedShape {
            match leaf[v] {
                Some(i) => RootedShape::Leaf(taxa[i].as_ref().to_string()),
                None => RootedShape::Node(kids[v].iter().map(|&c| build(c, kids, leaf, taxa)).collect()),
            }
        }
        build(root, &kids, &leaf, taxa)
    }

    pub fn taxa(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_taxa(&mut out);
        out
    }

    fn collect_taxa(&self, out: &mut Vec<String>) {
        match self {
            RootedShape::Leaf(l) => out.push(l.clone()),
            RootedShape::Node(c) => c.iter().for_each(|s| s.collect_taxa(out)),
        }
    }

    /// Adds the shape to `g`, returning the vertex that plays the root.
    pub(crate) fn add_to(&self, g: &mut Graph) -> usize {
        match self {
            RootedShape::Leaf(l) => g.add_vertex(Some(l.clone())),
            RootedShape::Node(children) => {
                let v = g.add_vertex(None);
                for c in children {
                    let u = c.add_to(g);
                    g.add_edge(v, u);
                }
                v
            }
        }
    }

    /// Unrooted tree with the root suppressed.
    pub fn to_tree(&self) -> Result<Tree> {
        let mut g = Graph::new();
        self.add_to(&mut g);
        g.normalize();
        g.into_tree()
    }
}

impl fmt::Display for RootedShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootedShape::Leaf(l) => f.write_str(l),
            RootedShape::Node(c) => {
                f.write_str("(")?;
                for (i, s) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn token(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_whitespace() || b"(),;:".contains(&c) {
                break;
            }
            self.pos += 1;
        }
        // Boundaries fall on ASCII delimiters, so the slice is valid UTF-8.
        std::str::from_utf8(&self.src[start..self.pos]).expect("utf-8 boundary")
    }

    fn branch_length(&mut self) -> Result<()> {
        if self.peek() == Some(b':') {
            self.pos += 1;
            let tok = self.token();
            if tok.parse::<f64>().is_err() {
                return self.err(format!("invalid branch length {tok:?}"));
            }
        }
        Ok(())
    }

    fn subtree(&mut self, depth: usize) -> Result<RootedShape> {
        if depth > 100_000 {
            return self.err("nesting too deep");
        }
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut children = vec![self.subtree(depth + 1)?];
            loop {
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                        children.push(self.subtree(depth + 1)?);
                    }
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) => return self.err(format!("expected ',' or ')', found {:?}", c as char)),
                    None => return self.err("unbalanced parentheses"),
                }
            }
            let _internal_label = self.token();
            self.branch_length()?;
            Ok(RootedShape::Node(children))
        } else {
            let label = self.token();
            if label.is_empty() {
                return self.err("empty label");
            }
            self.branch_length()?;
            Ok(RootedShape::Leaf(label.to_string()))
        }
    }
}

/// Parses Newick text into its rooted AST without unrooting.
pub fn parse_rooted(text: &str) -> Result<RootedShape> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let shape = p.subtree(0)?;
    match p.peek() {
        Some(b';') => p.pos += 1,
        Some(b')') => return p.err("unbalanced parentheses"),
        Some(c) => return p.err(format!("expected ';', found {:?}", c as char)),
        None => return p.err("missing ';'"),
    }
    if p.peek().is_some() {
        return p.err("trailing text after ';'");
    }
    Ok(shape)
}

/// Parses one semicolon-terminated Newick expression into an unrooted tree.
pub fn parse_newick(text: &str) -> Result<Tree> {
    parse_rooted(text)?.to_tree()
}

/// Canonical Newick: rooted on the edge at the smallest taxon, children
/// ordered by their smallest label, e.g. `(a,(b,c));` for the 3-taxon tree.
pub fn write_newick(t: &Tree) -> String {
    let mut out = String::with_capacity(8 * t.n());
    if t.n() == 1 {
        out.push_str(t.label(0));
    } else {
        out.push('(');
        out.push_str(t.label(0));
        out.push(',');
        write_clade(t, t.children(0)[0], &mut out);
        out.push(')');
    }
    out.push(';');
    out
}

/// Rooted Newick (no trailing `;`) of the clade below `v`.
pub(crate) fn write_clade(t: &Tree, v: usize, out: &mut String) {
    if t.is_leaf(v) {
        out.push_str(t.label(v));
        return;
    }
    out.push('(');
    for (i, &c) in t.children(v).iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_clade(t, c, out);
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn three_star_canonical() {
        let t = parse_newick("((a,b),c);").unwrap();
        assert_eq!(write_newick(&t), "(a,(b,c));");
        assert_eq!(parse_newick("(c,b,a);").unwrap(), t);
    }

    #[test]
    fn branch_lengths_and_internal_labels_ignored() {
        let a = parse_newick("((a:0.1,b:2)x:3.5,(c,d)y:1e-3)root;").unwrap();
        let b = parse_newick("((a,b),(c,d));").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_newick("((a,b),(a,c));"), Err(Error::DuplicateLabel(l)) if l == "a"));
        assert!(matches!(parse_newick("((a,b),c;"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_newick("((a,b),c));"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_newick("((a,),c);"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_newick("((a,b),c)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_newick("((a,b),c); x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_newick("((a:x,b),c);"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_newick("(a,b,c,d);"), Err(Error::NonBinary { degree: 4 })));
        assert!(matches!(parse_newick("((a,b,c,d),e);"), Err(Error::NonBinary { degree: 5 })));
        assert!(matches!(parse_newick("((a,b),c|d);"), Err(Error::InvalidLabel(_))));
    }

    #[test]
    fn degree_two_chains_suppressed() {
        let t = parse_newick("((((a)),b),(c,d));").unwrap();
        assert_eq!(t, parse_newick("((a,b),(c,d));").unwrap());
    }

    #[test]
    fn rooted_shapes() {
        let taxa = ["a", "b", "c", "d"];
        assert_eq!(RootedShape::caterpillar(&taxa).to_string(), "(((a,b),c),d)");
        assert_eq!(RootedShape::balanced(&taxa).to_string(), "((a,b),(c,d))");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let r = RootedShape::random(&taxa, &mut rng);
        let mut got = r.taxa();
        got.sort();
        assert_eq!(got, taxa);
        assert_eq!(r.to_tree().unwrap().n(), 4);
    }
}
