//! Rooted `d`-tuplet trees: the central combinatorial object.
//!
//! A `d`-tuplet tree is a rooted plane tree assembled from *tuplets*. Each
//! tuplet attaches one parent vertex to exactly `d` linearly ordered child
//! vertices, and a vertex may carry any number of tuplets, themselves
//! linearly ordered. A tree with `n` tuplets has `d*n + 1` vertices. For
//! `d = 1` this is the ordinary rooted ordered tree with `n` edges.
//!
//! Trees are immutable values; every operation that "changes" a tree returns
//! a new one. Vertices are identified positionally by [`VertexAddr`], the
//! path of `(tuplet, position)` steps from the root.

use std::fmt;

use crate::{Error, Result};

/// One tuplet: an ordered block of exactly `d` child vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tuplet {
    /// The `d` children, eldest first.
    pub children: Vec<Node>,
}

/// A vertex together with the ordered tuplets hanging below it.
///
/// The number of tuplets is the vertex's *outdegree*; its child count is
/// `d` times that.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Node {
    /// Tuplets in left-to-right order.
    pub tuplets: Vec<Tuplet>,
}

impl Node {
    fn tuplet_count(&self) -> usize {
        self.tuplets
            .iter()
            .map(|t| {
                1 + t
                    .children
                    .iter()
                    .map(Node::tuplet_count_children)
                    .sum::<usize>()
            })
            .sum()
    }

    fn tuplet_count_children(&self) -> usize {
        self.tuplet_count()
    }

    fn push_outdegrees(&self, out: &mut Vec<usize>) {
        out.push(self.tuplets.len());
        for t in &self.tuplets {
            for c in &t.children {
                c.push_outdegrees(out);
            }
        }
    }

    fn mirrored(&self) -> Node {
        Node {
            tuplets: self
                .tuplets
                .iter()
                .rev()
                .map(|t| Tuplet {
                    children: t.children.iter().rev().map(Node::mirrored).collect(),
                })
                .collect(),
        }
    }
}

/// A rooted `d`-tuplet tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupletTree {
    d: usize,
    root: Node,
}

/// A single step of a vertex address: enter tuplet `tuplet` of the current
/// vertex, then move to the child at `pos` (`0 <= pos < d`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AddrStep {
    pub tuplet: usize,
    pub pos: usize,
}

/// Path-from-root address of a vertex. The empty address is the root.
///
/// The level of a vertex equals the length of its address: one step per
/// tuplet crossed on the way down.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexAddr {
    pub steps: Vec<AddrStep>,
}

impl VertexAddr {
    /// The root address.
    pub fn root() -> Self {
        VertexAddr { steps: Vec::new() }
    }

    pub fn is_root(&self) -> bool {
        self.steps.is_empty()
    }

    /// Level of the addressed vertex: tuplets crossed from the root.
    pub fn level(&self) -> usize {
        self.steps.len()
    }

    /// Address of the parent vertex, or `None` for the root.
    pub fn parent(&self) -> Option<VertexAddr> {
        if self.steps.is_empty() {
            None
        } else {
            Some(VertexAddr {
                steps: self.steps[..self.steps.len() - 1].to_vec(),
            })
        }
    }

    /// Address of the child at `(tuplet, pos)` below this vertex.
    pub fn child(&self, tuplet: usize, pos: usize) -> VertexAddr {
        let mut steps = self.steps.clone();
        steps.push(AddrStep { tuplet, pos });
        VertexAddr { steps }
    }

    /// True when `self` addresses `other` or an ancestor of `other`.
    pub fn is_prefix_of(&self, other: &VertexAddr) -> bool {
        other.steps.len() >= self.steps.len() && other.steps[..self.steps.len()] == self.steps[..]
    }

    /// Parse the textual form: `root` (or the empty string) for the root,
    /// otherwise `/`-joined `tuplet.pos` steps, e.g. `0.1/2.0`.
    pub fn parse(text: &str) -> Result<VertexAddr> {
        let text = text.trim();
        if text.is_empty() || text == "root" {
            return Ok(VertexAddr::root());
        }
        let mut steps = Vec::new();
        for part in text.split('/') {
            let (t, p) = part.split_once('.').ok_or_else(|| {
                Error::Parse(format!("address step `{part}` is not `tuplet.pos`"))
            })?;
            let tuplet = t
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad tuplet index `{t}` in address")))?;
            let pos = p
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad position `{p}` in address")))?;
            steps.push(AddrStep { tuplet, pos });
        }
        Ok(VertexAddr { steps })
    }
}

impl fmt::Display for VertexAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| format!("{}.{}", s.tuplet, s.pos))
            .collect();
        write!(f, "{}", parts.join("/"))
    }
}

/// Per-vertex statistics.
///
/// Two sibling notions coexist: `tuplet_elders` counts elder siblings inside
/// the vertex's own tuplet (its 0-based position), while `global_elders` /
/// `global_youngers` count all same-parent siblings across every tuplet of
/// the parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexStats {
    pub level: usize,
    pub outdegree: usize,
    pub child_count: usize,
    pub tuplet_elders: usize,
    pub global_elders: usize,
    pub global_youngers: usize,
}

/// A structural defect reported by [`TupletTree::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `d` must be at least 1.
    ZeroArity,
    /// A tuplet holding a number of children different from `d`.
    TupletArity {
        at: VertexAddr,
        tuplet: usize,
        found: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroArity => write!(f, "tuplet arity d must be >= 1"),
            Violation::TupletArity { at, tuplet, found } => {
                write!(f, "tuplet {tuplet} of vertex {at} has {found} children")
            }
        }
    }
}

impl TupletTree {
    /// Wrap a root node as a tree. No validation happens here; use
    /// [`validate`](Self::validate) to check the arity invariant.
    pub fn new(d: usize, root: Node) -> Self {
        TupletTree { d, root }
    }

    /// The tree with a bare root and no tuplets (`n = 0`).
    pub fn leaf(d: usize) -> Self {
        TupletTree {
            d,
            root: Node::default(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Number of tuplets (`n`).
    pub fn tuplet_count(&self) -> usize {
        self.root.tuplet_count()
    }

    /// Number of vertices, always `d*n + 1` for a valid tree.
    pub fn vertex_count(&self) -> usize {
        self.d * self.tuplet_count() + 1
    }

    /// Check every invariant, returning all violations (empty means valid).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.d == 0 {
            out.push(Violation::ZeroArity);
        }
        let mut addr = VertexAddr::root();
        self.validate_node(&self.root, &mut addr, &mut out);
        out
    }

    fn validate_node(&self, node: &Node, addr: &mut VertexAddr, out: &mut Vec<Violation>) {
        for (ti, t) in node.tuplets.iter().enumerate() {
            if t.children.len() != self.d {
                out.push(Violation::TupletArity {
                    at: addr.clone(),
                    tuplet: ti,
                    found: t.children.len(),
                });
            }
            for (pi, c) in t.children.iter().enumerate() {
                addr.steps.push(AddrStep {
                    tuplet: ti,
                    pos: pi,
                });
                self.validate_node(c, addr, out);
                addr.steps.pop();
            }
        }
    }

    /// Resolve an address to its node.
    pub fn node_at(&self, addr: &VertexAddr) -> Result<&Node> {
        let mut cur = &self.root;
        for (depth, s) in addr.steps.iter().enumerate() {
            let tuplet = cur
                .tuplets
                .get(s.tuplet)
                .ok_or_else(|| Error::InvalidAddress {
                    addr: addr.to_string(),
                    reason: format!("no tuplet {} at depth {depth}", s.tuplet),
                })?;
            cur = tuplet
                .children
                .get(s.pos)
                .ok_or_else(|| Error::InvalidAddress {
                    addr: addr.to_string(),
                    reason: format!("no position {} at depth {depth}", s.pos),
                })?;
        }
        Ok(cur)
    }

    pub(crate) fn node_at_mut(&mut self, addr: &VertexAddr) -> Result<&mut Node> {
        let full = addr.to_string();
        let mut cur = &mut self.root;
        for (depth, s) in addr.steps.iter().enumerate() {
            let tuplet = cur
                .tuplets
                .get_mut(s.tuplet)
                .ok_or_else(|| Error::InvalidAddress {
                    addr: full.clone(),
                    reason: format!("no tuplet {} at depth {depth}", s.tuplet),
                })?;
            cur = tuplet
                .children
                .get_mut(s.pos)
                .ok_or_else(|| Error::InvalidAddress {
                    addr: full.clone(),
                    reason: format!("no position {} at depth {depth}", s.pos),
                })?;
        }
        Ok(cur)
    }

    /// All vertex addresses in preorder: a vertex before its descendants,
    /// children tuplet by tuplet, each child's subtree before the next
    /// sibling. The list has `d*n + 1` entries.
    pub fn preorder(&self) -> Vec<VertexAddr> {
        let mut out = Vec::with_capacity(self.vertex_count());
        let mut addr = VertexAddr::root();
        self.preorder_node(&self.root, &mut addr, &mut out);
        out
    }

    fn preorder_node(&self, node: &Node, addr: &mut VertexAddr, out: &mut Vec<VertexAddr>) {
        out.push(addr.clone());
        for (ti, t) in node.tuplets.iter().enumerate() {
            for (pi, c) in t.children.iter().enumerate() {
                addr.steps.push(AddrStep {
                    tuplet: ti,
                    pos: pi,
                });
                self.preorder_node(c, addr, out);
                addr.steps.pop();
            }
        }
    }

    /// Statistics of the vertex at `addr`.
    pub fn stats(&self, addr: &VertexAddr) -> Result<VertexStats> {
        let node = self.node_at(addr)?;
        let outdegree = node.tuplets.len();
        let level = addr.level();
        let (tuplet_elders, global_elders, global_youngers) = match addr.steps.last() {
            None => (0, 0, 0),
            Some(step) => {
                let parent = self.node_at(&addr.parent().expect("non-root has a parent"))?;
                let parent_out = parent.tuplets.len();
                let elders = self.d * step.tuplet + step.pos;
                let youngers = self.d * (parent_out - step.tuplet - 1) + (self.d - 1 - step.pos);
                (step.pos, elders, youngers)
            }
        };
        Ok(VertexStats {
            level,
            outdegree,
            child_count: self.d * outdegree,
            tuplet_elders,
            global_elders,
            global_youngers,
        })
    }

    /// The subtree consisting of the vertex at `v` and all its descendants,
    /// returned as a tree rooted at (a copy of) that vertex.
    pub fn descendant_subtree(&self, v: &VertexAddr) -> Result<TupletTree> {
        let node = self.node_at(v)?;
        Ok(TupletTree {
            d: self.d,
            root: node.clone(),
        })
    }

    /// Swap the whole subtrees rooted at `v` and `w`. Equal addresses are a
    /// no-op; a strict ancestor relation is an error.
    pub fn exchange_subtrees(&self, v: &VertexAddr, w: &VertexAddr) -> Result<TupletTree> {
        self.node_at(v)?;
        self.node_at(w)?;
        if v == w {
            return Ok(self.clone());
        }
        if v.is_prefix_of(w) || w.is_prefix_of(v) {
            return Err(Error::AncestorOverlap(v.to_string(), w.to_string()));
        }
        let mut tree = self.clone();
        tree.swap_subtrees_unchecked(v, w);
        Ok(tree)
    }

    /// Swap two disjoint non-root subtrees in place. Callers guarantee both
    /// addresses are valid, distinct and prefix-free.
    pub(crate) fn swap_subtrees_unchecked(&mut self, v: &VertexAddr, w: &VertexAddr) {
        let nv = std::mem::take(self.child_slot_mut(v));
        let nw = std::mem::replace(self.child_slot_mut(w), nv);
        *self.child_slot_mut(v) = nw;
    }

    fn child_slot_mut(&mut self, addr: &VertexAddr) -> &mut Node {
        let step = *addr.steps.last().expect("child slot of a non-root vertex");
        let parent = addr.parent().expect("child slot of a non-root vertex");
        let node = self.node_at_mut(&parent).expect("validated address");
        &mut node.tuplets[step.tuplet].children[step.pos]
    }

    /// Left-right flip: tuplet order and within-tuplet order both reversed.
    pub(crate) fn mirrored(&self) -> TupletTree {
        TupletTree {
            d: self.d,
            root: self.root.mirrored(),
        }
    }

    /// Preorder outdegree word, length `d*n + 1`. Uniquely determines the
    /// tree.
    pub fn outdegrees(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.vertex_count());
        self.root.push_outdegrees(&mut out);
        out
    }

    /// Rebuild a tree from its preorder outdegree word.
    pub fn from_outdegrees(d: usize, word: &[usize]) -> Result<TupletTree> {
        if d == 0 {
            return Err(Error::Domain("tuplet arity d must be >= 1".into()));
        }
        let mut iter = word.iter().copied();
        let root = build_node(d, &mut iter)?;
        if iter.next().is_some() {
            return Err(Error::Parse(
                "trailing outdegrees after a complete tree".into(),
            ));
        }
        Ok(TupletTree { d, root })
    }

    /// Canonical text form: `d=<d>;` followed by the comma-separated
    /// preorder outdegree word, e.g. `d=2;1,0,0`.
    pub fn to_text(&self) -> String {
        let word: Vec<String> = self.outdegrees().iter().map(|m| m.to_string()).collect();
        format!("d={};{}", self.d, word.join(","))
    }

    /// Parse the canonical text form.
    pub fn parse(text: &str) -> Result<TupletTree> {
        let rest = text
            .trim()
            .strip_prefix("d=")
            .ok_or_else(|| Error::Parse("tree text must start with `d=<d>;`".into()))?;
        let (d_str, word_str) = rest
            .split_once(';')
            .ok_or_else(|| Error::Parse("tree text must start with `d=<d>;`".into()))?;
        let d: usize = d_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad arity `{d_str}` in tree text")))?;
        let mut word = Vec::new();
        for part in word_str.split(',') {
            let part = part.trim();
            let m: usize = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad outdegree `{part}` in tree text")))?;
            word.push(m);
        }
        TupletTree::from_outdegrees(d, &word)
    }
}

fn build_node(d: usize, iter: &mut impl Iterator<Item = usize>) -> Result<Node> {
    let m = iter
        .next()
        .ok_or_else(|| Error::Parse("outdegree word ended before the tree was complete".into()))?;
    let mut tuplets = Vec::with_capacity(m);
    for _ in 0..m {
        let mut children = Vec::with_capacity(d);
        for _ in 0..d {
            children.push(build_node(d, iter)?);
        }
        tuplets.push(Tuplet { children });
    }
    Ok(Node { tuplets })
}

impl fmt::Display for TupletTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(text: &str) -> TupletTree {
        TupletTree::parse(text).unwrap()
    }

    #[test]
    fn smallest_valid_tree_has_no_violations() {
        let t = tree("d=2;1,0,0");
        assert!(t.validate().is_empty());
        assert_eq!(t.tuplet_count(), 1);
        assert_eq!(t.vertex_count(), 3);
    }

    #[test]
    fn wrong_arity_is_reported() {
        let bad = TupletTree::new(
            2,
            Node {
                tuplets: vec![Tuplet {
                    children: vec![Node::default(), Node::default(), Node::default()],
                }],
            },
        );
        let violations = bad.validate();
        assert_eq!(violations.len(), 1);
        assert!(matches!(
            violations[0],
            Violation::TupletArity { found: 3, .. }
        ));
    }

    #[test]
    fn preorder_of_single_tuplet() {
        let t = tree("d=2;1,0,0");
        let order = t.preorder();
        assert_eq!(order.len(), 3);
        assert!(order[0].is_root());
        assert_eq!(order[1], VertexAddr::root().child(0, 0));
        assert_eq!(order[2], VertexAddr::root().child(0, 1));
    }

    #[test]
    fn preorder_of_chain() {
        let t = tree("d=1;1,1,0");
        let order = t.preorder();
        let child = VertexAddr::root().child(0, 0);
        let grandchild = child.child(0, 0);
        assert_eq!(order, vec![VertexAddr::root(), child, grandchild]);
    }

    #[test]
    fn root_stats_are_zero() {
        let t = tree("d=3;2,1,0,0,0,0,0,0,0,0");
        let s = t.stats(&VertexAddr::root()).unwrap();
        assert_eq!(s.level, 0);
        assert_eq!(s.tuplet_elders, 0);
        assert_eq!(s.global_elders, 0);
        assert_eq!(s.global_youngers, 0);
        assert_eq!(s.outdegree, 2);
        assert_eq!(s.child_count, 6);
    }

    #[test]
    fn global_elders_span_tuplets() {
        // d=2 root with two tuplets; the last child (t=1, p=1) has all three
        // other children as elder siblings.
        let t = tree("d=2;2,0,0,0,0");
        let last = VertexAddr::root().child(1, 1);
        let s = t.stats(&last).unwrap();
        assert_eq!(s.global_elders, 3);
        assert_eq!(s.global_youngers, 0);
        assert_eq!(s.tuplet_elders, 1);
    }

    #[test]
    fn exchange_with_self_is_identity() {
        let t = tree("d=2;2,1,0,0,0,0,0");
        let v = VertexAddr::root().child(0, 0);
        assert_eq!(t.exchange_subtrees(&v, &v).unwrap(), t);
    }

    #[test]
    fn exchange_is_an_involution() {
        let t = tree("d=2;2,1,0,0,0,0,0");
        let v = VertexAddr::root().child(0, 0);
        let w = VertexAddr::root().child(1, 1);
        let once = t.exchange_subtrees(&v, &w).unwrap();
        assert_ne!(once, t);
        assert_eq!(once.exchange_subtrees(&v, &w).unwrap(), t);
    }

    #[test]
    fn exchange_moves_pendant_edge() {
        // d=1 cherry whose left child carries a pendant edge; swapping the
        // two children moves the pendant edge to the right child.
        let t = tree("d=1;2,1,0,0");
        let left = VertexAddr::root().child(0, 0);
        let right = VertexAddr::root().child(1, 0);
        let swapped = t.exchange_subtrees(&left, &right).unwrap();
        assert_eq!(swapped.outdegrees(), vec![2, 0, 1, 0]);
    }

    #[test]
    fn exchange_rejects_nested_subtrees() {
        let t = tree("d=1;1,1,0");
        let v = VertexAddr::root().child(0, 0);
        let w = v.child(0, 0);
        assert!(matches!(
            t.exchange_subtrees(&v, &w),
            Err(Error::AncestorOverlap(..))
        ));
    }

    #[test]
    fn text_round_trip() {
        for text in ["d=2;1,0,0", "d=1;2,1,0,0", "d=3;0", "d=2;2,1,0,0,0,0,0"] {
            let t = tree(text);
            assert_eq!(t.to_text(), text);
            assert!(t.validate().is_empty());
        }
    }

    #[test]
    fn malformed_text_is_rejected() {
        assert!(TupletTree::parse("2;1,0,0").is_err());
        assert!(TupletTree::parse("d=2;1,0").is_err());
        assert!(TupletTree::parse("d=2;1,0,0,0").is_err());
        assert!(TupletTree::parse("d=0;0").is_err());
    }

    #[test]
    fn address_text_round_trip() {
        for text in ["root", "0.1", "0.1/2.0", "1.0/0.0/0.1"] {
            let a = VertexAddr::parse(text).unwrap();
            assert_eq!(a.to_string(), text);
        }
        assert_eq!(VertexAddr::parse("").unwrap(), VertexAddr::root());
        assert!(VertexAddr::parse("0:1").is_err());
    }

    #[test]
    fn descendant_subtree_is_rooted_at_the_vertex() {
        let t = tree("d=1;2,1,0,0");
        let left = VertexAddr::root().child(0, 0);
        let sub = t.descendant_subtree(&left).unwrap();
        assert_eq!(sub.to_text(), "d=1;1,0");
        assert_eq!(sub.tuplet_count(), 1);
        // The root's subtree is the whole tree.
        assert_eq!(t.descendant_subtree(&VertexAddr::root()).unwrap(), t);
    }

    #[test]
    fn stats_aggregate_to_the_published_cell() {
        // Nine vertices of outdegree 1 at level 2 across all of T_3^(3).
        let mut hits = 0;
        for t in crate::generate::gen_trees(3, 3).unwrap() {
            assert!(t.validate().is_empty());
            for v in t.preorder() {
                let s = t.stats(&v).unwrap();
                if s.outdegree == 1 && s.level == 2 {
                    hits += 1;
                }
            }
        }
        assert_eq!(hits, 9);
    }

    #[test]
    fn preorder_is_duplicate_free_across_a_family() {
        for tree in crate::generate::gen_trees(2, 3).unwrap() {
            let order = tree.preorder();
            assert_eq!(order.len(), 7);
            let distinct: std::collections::BTreeSet<_> = order.iter().collect();
            assert_eq!(distinct.len(), 7);
        }
    }

    #[test]
    fn vertex_count_matches_tuplet_count() {
        let t = tree("d=3;2,1,0,0,0,0,0,0,0,0");
        assert_eq!(t.tuplet_count(), 3);
        assert_eq!(t.vertex_count(), 10);
        assert_eq!(t.preorder().len(), 10);
    }
}
