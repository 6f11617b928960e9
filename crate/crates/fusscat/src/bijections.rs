//! The constructive maps between trees, marked trees, and lattice paths.
//!
//! Three boundary-walk encodings of a tree as a path:
//!
//! * [`contour_path`] walks the tree boundary in preorder and records an up-step when
//!   descending the left side of a tuplet, a down-step when crossing to the
//!   next sibling or ascending; the image is a Fuss-Catalan path.
//! * [`reverse_contour_path`] swaps the roles (down/right emit a down-step, ascending
//!   emits an up-step); the image is a reverse Fuss-Catalan path.
//! * [`outdegree_path`] visits vertices in preorder and records `m` up-steps and one
//!   down-step for a vertex of outdegree `m`, skipping the final preorder
//!   vertex; the image is again a Fuss-Catalan path.
//!
//! On top of these sits [`encode_marked`]: a bijection between marked trees
//! `(T, v)` with `outdeg(v) >= k` at `level(v) >= l` and pairs of a length-`l`
//! digit sequence with a free lattice path. Its inverse is
//! [`decode_marked`]. The sibling-constraint reductions [`cut_and_paste`] and
//! [`exchange_to_youngest_sibling`] complete the toolkit.

use std::fmt;

use crate::path::{LatticePath, Step};
use crate::tree::{Node, TupletTree, VertexAddr};
use crate::{Error, Result};

/// A tree together with a distinguished vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedTree {
    tree: TupletTree,
    vertex: VertexAddr,
}

impl MarkedTree {
    /// Pair a tree with a vertex address, validating the address.
    pub fn new(tree: TupletTree, vertex: VertexAddr) -> Result<MarkedTree> {
        tree.node_at(&vertex)?;
        Ok(MarkedTree { tree, vertex })
    }

    pub fn tree(&self) -> &TupletTree {
        &self.tree
    }

    pub fn vertex(&self) -> &VertexAddr {
        &self.vertex
    }

    pub fn into_parts(self) -> (TupletTree, VertexAddr) {
        (self.tree, self.vertex)
    }
}

/// The digit sequence recorded by [`encode_marked`]: one entry in `0..d` per
/// requested level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SiblingSeq(pub Vec<usize>);

impl SiblingSeq {
    /// Parse `"()"`, `"(0)"`, `"(0,2,1)"`.
    pub fn parse(text: &str) -> Result<SiblingSeq> {
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse("sibling sequence must look like (0,1,...)".into()))?;
        if inner.trim().is_empty() {
            return Ok(SiblingSeq(Vec::new()));
        }
        let mut entries = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            entries.push(
                part.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad sibling digit `{part}`")))?,
            );
        }
        Ok(SiblingSeq(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for SiblingSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Output of [`encode_marked`]: the digit sequence and the trimmed free path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedEncoding {
    pub digits: SiblingSeq,
    pub path: LatticePath,
}

// ---------------------------------------------------------------------------
// Boundary walks
// ---------------------------------------------------------------------------

fn contour_walk(node: &Node, steps: &mut Vec<Step>) {
    for tuplet in &node.tuplets {
        for (pi, child) in tuplet.children.iter().enumerate() {
            steps.push(if pi == 0 { Step::Up } else { Step::Down });
            contour_walk(child, steps);
        }
        steps.push(Step::Down);
    }
}

/// Boundary-walk encoding: descending the left side of a tuplet emits `U`,
/// crossing to the next sibling or ascending emits `D`. Each tuplet
/// contributes one `U` and `d` `D`s, so the image has length `(d+1)n`.
pub fn contour_path(tree: &TupletTree) -> LatticePath {
    let mut steps = Vec::with_capacity((tree.d() + 1) * tree.tuplet_count());
    contour_walk(tree.root(), &mut steps);
    LatticePath::new(tree.d(), 0, steps)
}

struct ContourParser<'a> {
    steps: &'a [Step],
    pos: usize,
    d: usize,
}

impl<'a> ContourParser<'a> {
    fn peek(&self) -> Option<Step> {
        self.steps.get(self.pos).copied()
    }

    fn expect_down(&mut self) -> Result<()> {
        match self.peek() {
            Some(Step::Down) => {
                self.pos += 1;
                Ok(())
            }
            other => Err(Error::Domain(format!(
                "not a Fuss-Catalan path: expected D at step {}, found {other:?}",
                self.pos + 1
            ))),
        }
    }

    fn parse_node(&mut self) -> Result<Node> {
        let mut tuplets = Vec::new();
        while self.peek() == Some(Step::Up) {
            self.pos += 1;
            let mut children = Vec::with_capacity(self.d);
            children.push(self.parse_node()?);
            for _ in 1..self.d {
                self.expect_down()?;
                children.push(self.parse_node()?);
            }
            self.expect_down()?;
            tuplets.push(crate::tree::Tuplet { children });
        }
        Ok(Node { tuplets })
    }
}

/// Inverse of [`contour_path`]. Fails on paths that are not Fuss-Catalan for the
/// path's own `d`.
pub fn contour_path_inv(path: &LatticePath) -> Result<TupletTree> {
    if !path.is_fuss_catalan() {
        return Err(Error::Domain(
            "contour_path_inv expects a Fuss-Catalan path".into(),
        ));
    }
    let mut parser = ContourParser {
        steps: path.steps(),
        pos: 0,
        d: path.d(),
    };
    let root = parser.parse_node()?;
    if parser.pos != path.len() {
        return Err(Error::Domain(
            "contour_path_inv could not consume the whole path".into(),
        ));
    }
    Ok(TupletTree::new(path.d(), root))
}

fn reverse_contour_walk(node: &Node, steps: &mut Vec<Step>) {
    for tuplet in &node.tuplets {
        for child in &tuplet.children {
            steps.push(Step::Down);
            reverse_contour_walk(child, steps);
        }
        steps.push(Step::Up);
    }
}

/// Mirror-image boundary walk: descending or crossing emits `D`, ascending
/// emits `U`. The image stays weakly below the axis.
pub fn reverse_contour_path(tree: &TupletTree) -> LatticePath {
    let mut steps = Vec::with_capacity((tree.d() + 1) * tree.tuplet_count());
    reverse_contour_walk(tree.root(), &mut steps);
    LatticePath::new(tree.d(), 0, steps)
}

/// Inverse of [`reverse_contour_path`], through the identity
/// `reverse_contour_path(T) = reverse(contour_path(mirror(T)))`.
pub fn reverse_contour_path_inv(path: &LatticePath) -> Result<TupletTree> {
    if !path.is_reverse_fuss_catalan() {
        return Err(Error::Domain(
            "reverse_contour_path_inv expects a reverse Fuss-Catalan path".into(),
        ));
    }
    let tree = contour_path_inv(&path.reversed())?;
    Ok(tree.mirrored())
}

/// The preorder outdegree encoding: a vertex of outdegree `m` contributes
/// `m` up-steps and one down-step, except the final preorder vertex, which
/// contributes nothing.
pub fn outdegree_path(tree: &TupletTree) -> LatticePath {
    let word = tree.outdegrees();
    let mut steps = Vec::with_capacity((tree.d() + 1) * tree.tuplet_count());
    for &m in &word[..word.len() - 1] {
        steps.extend(std::iter::repeat_n(Step::Up, m));
        steps.push(Step::Down);
    }
    LatticePath::new(tree.d(), 0, steps)
}

/// Inverse of [`outdegree_path`]: re-append the silent final vertex's down-step, read
/// off the outdegree word, rebuild the tree.
pub fn outdegree_path_inv(path: &LatticePath) -> Result<TupletTree> {
    if !path.is_fuss_catalan() {
        return Err(Error::Domain(
            "outdegree_path_inv expects a Fuss-Catalan path".into(),
        ));
    }
    let word = outdegree_word_padded(path.d(), path.steps())?;
    TupletTree::from_outdegrees(path.d(), &word)
}

/// Parse `steps + [D]` as blocks `U^m D` and return the outdegree word.
fn outdegree_word_padded(d: usize, steps: &[Step]) -> Result<Vec<usize>> {
    let mut word = Vec::new();
    let mut ups = 0usize;
    for s in steps.iter().chain(std::iter::once(&Step::Down)) {
        match s {
            Step::Up => ups += 1,
            Step::Down => {
                word.push(ups);
                ups = 0;
            }
        }
    }
    let n: usize = word.iter().sum();
    if word.len() != d * n + 1 {
        return Err(Error::Domain(
            "step word is not a preorder outdegree encoding".into(),
        ));
    }
    Ok(word)
}

/// Left rotation `rotate(s1 s2 ... sn) = s2 ... sn s1`, applied `m` times.
pub fn rotate(path: &LatticePath, m: usize) -> Result<LatticePath> {
    if path.is_empty() {
        return Err(Error::Domain(
            "rotate is undefined on the empty path".into(),
        ));
    }
    Ok(path.rotate_left(m))
}

// ---------------------------------------------------------------------------
// The main bijection
// ---------------------------------------------------------------------------

/// 1-based index of the step of `reverse_contour_path(tree)` that first arrives at `v`,
/// which is always a down-step. The root is never "arrived at".
fn arrival_step_of(tree: &TupletTree, v: &VertexAddr) -> Result<usize> {
    fn walk(
        node: &Node,
        target: &[crate::tree::AddrStep],
        depth: usize,
        counter: &mut usize,
    ) -> Option<usize> {
        for (ti, tuplet) in node.tuplets.iter().enumerate() {
            for (pi, child) in tuplet.children.iter().enumerate() {
                *counter += 1; // the D arriving at this child
                let on_target =
                    depth < target.len() && target[depth].tuplet == ti && target[depth].pos == pi;
                if on_target && depth + 1 == target.len() {
                    return Some(*counter);
                }
                if on_target {
                    if let Some(found) = walk(child, target, depth + 1, counter) {
                        return Some(found);
                    }
                } else {
                    skip(child, counter);
                }
            }
            *counter += 1; // the U closing this tuplet
        }
        None
    }
    fn skip(node: &Node, counter: &mut usize) {
        for tuplet in &node.tuplets {
            for child in &tuplet.children {
                *counter += 1;
                skip(child, counter);
            }
            *counter += 1;
        }
    }
    if v.is_root() {
        return Err(Error::Domain(
            "the boundary walk never re-arrives at the root".into(),
        ));
    }
    tree.node_at(v)?;
    let mut counter = 0usize;
    walk(tree.root(), &v.steps, 0, &mut counter).ok_or_else(|| Error::InvalidAddress {
        addr: v.to_string(),
        reason: "not reached".into(),
    })
}

/// The vertex whose first arrival in the `reverse_contour_path` walk is step `step`
/// (1-based).
fn vertex_at_arrival(tree: &TupletTree, step: usize) -> Result<VertexAddr> {
    fn walk(
        node: &Node,
        addr: &mut VertexAddr,
        counter: &mut usize,
        step: usize,
    ) -> Option<VertexAddr> {
        for (ti, tuplet) in node.tuplets.iter().enumerate() {
            for (pi, child) in tuplet.children.iter().enumerate() {
                *counter += 1;
                addr.steps.push(crate::tree::AddrStep {
                    tuplet: ti,
                    pos: pi,
                });
                if *counter == step {
                    return Some(addr.clone());
                }
                if let Some(found) = walk(child, addr, counter, step) {
                    return Some(found);
                }
                addr.steps.pop();
            }
            *counter += 1;
            if *counter == step {
                return None; // step is an up-step, not an arrival
            }
        }
        None
    }
    let mut addr = VertexAddr::root();
    let mut counter = 0usize;
    walk(tree.root(), &mut addr, &mut counter, step)
        .ok_or_else(|| Error::Domain(format!("step {step} is not a first arrival")))
}

/// 0-based start position of the block of `v` inside `outdegree_path(tree)` followed by
/// one extra down-step (the cyclic word in which every vertex, including the
/// final preorder leaf, owns a block `U^outdeg D`).
fn block_start_of(tree: &TupletTree, v: &VertexAddr) -> Result<usize> {
    let order = tree.preorder();
    let word = tree.outdegrees();
    let mut pos = 0usize;
    for (addr, m) in order.iter().zip(&word) {
        if addr == v {
            return Ok(pos);
        }
        pos += m + 1;
    }
    Err(Error::InvalidAddress {
        addr: v.to_string(),
        reason: "not in preorder".into(),
    })
}

/// Level-0 branch of the forward map: rotate the cyclic word `outdegree_path(T) D` so
/// that it starts at the marked vertex's block. For the root this is no
/// rotation at all.
fn encode_marked_level0(tree: &TupletTree, v: &VertexAddr, k: usize) -> Result<MarkedEncoding> {
    let d = tree.d();
    let mut steps = outdegree_path(tree).steps().to_vec();
    steps.push(Step::Down);
    let word = LatticePath::new(d, 0, steps);
    let rotated = word.rotate_left(block_start_of(tree, v)?);
    let steps = rotated.steps();
    debug_assert!(steps[..k].iter().all(|s| *s == Step::Up));
    debug_assert_eq!(steps[steps.len() - 1], Step::Down);
    let hat = steps[k..steps.len() - 1].to_vec();
    Ok(MarkedEncoding {
        digits: SiblingSeq(Vec::new()),
        path: LatticePath::new(d, (d * k) as i64, hat),
    })
}

/// Level-0 branch of the inverse: the unique rotation of the cyclic word
/// `U^k path D` whose proper prefixes all stay strictly above -1 is
/// `outdegree_path(T) D`; the rotation offset locates the marked vertex's block.
fn decode_marked_level0(d: usize, steps: Vec<Step>, k: usize) -> Result<MarkedTree> {
    let word = LatticePath::new(d, 0, steps);
    let len = word.len();
    let mut best_height = i64::MAX;
    let mut t_star = 0usize;
    for (idx, h) in word.heights().enumerate() {
        if h < best_height {
            best_height = h;
            t_star = idx + 1;
        }
    }
    let dominating = word.rotate_left(t_star % len);
    let steps = dominating.steps();
    if steps.last() != Some(&Step::Down) {
        return Err(Error::Domain(
            "path cannot be completed to a tree encoding".into(),
        ));
    }
    let tree = outdegree_path_inv(&LatticePath::new(d, 0, steps[..len - 1].to_vec()))?;
    let offset = (len - t_star) % len;
    let order = tree.preorder();
    for addr in &order {
        if block_start_of(&tree, addr)? == offset {
            let out = tree.node_at(addr)?.tuplets.len();
            if out < k {
                return Err(Error::Domain(
                    "recovered vertex has smaller outdegree than k".into(),
                ));
            }
            return MarkedTree::new(tree, addr.clone());
        }
    }
    Err(Error::Domain(
        "rotation offset does not start a vertex block".into(),
    ))
}

/// The main bijection. For a marked tree `(T, v)` with `outdeg(v) >= k` and
/// `level(v) >= l`, produces the digit sequence `p` (within-tuplet elder
/// counts of the chain vertices at the lowest `l` levels) and the trimmed
/// path `path` with `n - k - l` up-steps and `dn + l` down-steps.
///
/// For `l >= 1` the construction follows the tree decomposition: exchange
/// each of the lowest `l` chain vertices with the youngest sibling in its
/// tuplet, cut the descendant subtree of `v` and the right-side subtrees
/// along the chain, encode the pieces with `outdegree_path`/`contour_path`/`reverse_contour_path`, and splice
/// them with separating down-steps. The leftover tree's encoding is rotated
/// so that it ends at the arrival of `v` followed by the `l` ascents. The
/// assembled path starts with `outdeg(v)` up-steps and ends with one
/// down-step and `l` up-steps; trimming `k` steps in front and `l + 1`
/// behind yields `path`.
pub fn encode_marked(marked: &MarkedTree, k: usize, l: usize) -> Result<MarkedEncoding> {
    let tree = marked.tree();
    let v = marked.vertex();
    let d = tree.d();
    let n = tree.tuplet_count();
    let stats = tree.stats(v)?;
    if stats.outdegree < k {
        return Err(Error::Domain(format!(
            "marked vertex has outdegree {} < k = {k}",
            stats.outdegree
        )));
    }
    if stats.level < l {
        return Err(Error::Domain(format!(
            "marked vertex has level {} < l = {l}",
            stats.level
        )));
    }
    if l == 0 {
        return encode_marked_level0(tree, v, k);
    }

    let level = stats.level; // l' >= l >= 1, so v is not the root
    let p: Vec<usize> = (0..l).map(|i| v.steps[level - 1 - i].pos).collect();

    // Step 1: push the lowest l chain vertices to the youngest slot of
    // their tuplet, bottom-up.
    let mut work = tree.clone();
    let mut vaddr = v.clone();
    for i in 0..l {
        let depth = level - i;
        let step = vaddr.steps[depth - 1];
        if step.pos != d - 1 {
            let mut chain = vaddr.clone();
            chain.steps.truncate(depth);
            let mut youngest = chain.clone();
            youngest.steps[depth - 1].pos = d - 1;
            work.swap_subtrees_unchecked(&chain, &youngest);
            vaddr.steps[depth - 1].pos = d - 1;
        }
    }

    // Step 2: cut. D_v keeps v as a leaf; each cut R_i keeps its chain
    // vertex and takes the tuplets right of the chain, descendants included.
    let d_v = TupletTree::new(
        d,
        Node {
            tuplets: std::mem::take(&mut work.node_at_mut(&vaddr)?.tuplets),
        },
    );
    let mut right_cuts = Vec::with_capacity(l.saturating_sub(1));
    for i in 1..l {
        let depth = level - i;
        let chain_tuplet = vaddr.steps[depth].tuplet;
        let mut anc = vaddr.clone();
        anc.steps.truncate(depth);
        let node = work.node_at_mut(&anc)?;
        right_cuts.push(TupletTree::new(
            d,
            Node {
                tuplets: node.tuplets.split_off(chain_tuplet + 1),
            },
        ));
    }
    let root_cut = {
        let chain_tuplet = vaddr.steps[0].tuplet;
        let node = work.node_at_mut(&VertexAddr::root())?;
        TupletTree::new(
            d,
            Node {
                tuplets: node.tuplets.split_off(chain_tuplet + 1),
            },
        )
    };
    debug_assert_eq!(
        d_v.tuplet_count()
            + right_cuts.iter().map(|t| t.tuplet_count()).sum::<usize>()
            + root_cut.tuplet_count()
            + work.tuplet_count(),
        n
    );

    // Assemble P: outdegree_path(D_v), a separator, each right cut under contour_path with its
    // separator, then reverse_contour_path of the leftover rotated past the arrival of v
    // and the l ascents above it.
    let arrival = arrival_step_of(&work, &vaddr)?;
    let leftover = reverse_contour_path(&work).rotate_left(arrival + l);
    let mut steps = outdegree_path(&d_v).steps().to_vec();
    steps.push(Step::Down);
    for cut in &right_cuts {
        steps.extend_from_slice(contour_path(cut).steps());
        steps.push(Step::Down);
    }
    steps.extend_from_slice(contour_path(&root_cut).steps());
    steps.push(Step::Down);
    steps.extend_from_slice(leftover.steps());

    debug_assert_eq!(steps.len(), (d + 1) * n + l + 1);
    debug_assert!(steps[..k].iter().all(|s| *s == Step::Up));
    debug_assert_eq!(steps[steps.len() - l - 1], Step::Down);
    debug_assert!(steps[steps.len() - l..].iter().all(|s| *s == Step::Up));

    let hat = steps[k..steps.len() - l - 1].to_vec();
    Ok(MarkedEncoding {
        digits: SiblingSeq(p),
        path: LatticePath::new(d, (d * k) as i64, hat),
    })
}

/// Inverse of [`encode_marked`].
///
/// Rebuilds `P = U^k path D U^l`, splits it at the leftmost down-steps
/// crossing each height `-i -> -(i+1)`, decodes the segments with
/// `outdegree_path`/`contour_path`/`reverse_contour_path` (undoing the rotation at the leftmost highest
/// vertex), reattaches the cut subtrees along the chain, and undoes the
/// youngest-sibling exchanges using the recorded digits, top-down.
pub fn decode_marked(
    digits: &SiblingSeq,
    path: &LatticePath,
    d: usize,
    n: usize,
    k: usize,
    l: usize,
) -> Result<MarkedTree> {
    if d == 0 {
        return Err(Error::Domain("tuplet arity d must be >= 1".into()));
    }
    if path.d() != d {
        return Err(Error::Domain(format!(
            "path arity {} does not match requested d={d}",
            path.d()
        )));
    }
    if digits.len() != l {
        return Err(Error::Domain(format!(
            "sibling sequence has length {}, expected {l}",
            digits.len()
        )));
    }
    if digits.0.iter().any(|&x| x >= d) {
        return Err(Error::Domain(format!("sibling digits must lie in 0..{d}")));
    }
    if !path.is_free(n, k, l) {
        return Err(Error::Domain(format!(
            "path is not a free path for n={n}, k={k}, l={l}: need {} up-steps and {} down-steps from height {}",
            n.saturating_sub(k + l),
            d * n + l,
            d * k
        )));
    }

    let mut steps = vec![Step::Up; k];
    steps.extend_from_slice(path.steps());
    steps.push(Step::Down);
    steps.extend(std::iter::repeat_n(Step::Up, l));

    if l == 0 {
        return decode_marked_level0(d, steps, k);
    }

    // Leftmost height crossings -i -> -(i+1) for i = 0..=l.
    let mut marks = Vec::with_capacity(l + 1);
    let mut height = 0i64;
    for (idx, s) in steps.iter().enumerate() {
        let next = height + if *s == Step::Up { d as i64 } else { -1 };
        if *s == Step::Down && height == -(marks.len() as i64) && marks.len() <= l {
            marks.push(idx);
        }
        height = next;
    }
    if marks.len() != l + 1 {
        return Err(Error::Domain(
            "path never crosses all required depths".into(),
        ));
    }

    let segment = |from: usize, to: usize| LatticePath::new(d, 0, steps[from..to].to_vec());
    let d_v = outdegree_path_inv(&segment(0, marks[0]))?;
    let mut right_cuts = Vec::with_capacity(l - 1);
    for i in 1..l {
        right_cuts.push(contour_path_inv(&segment(marks[i - 1] + 1, marks[i]))?);
    }
    let root_cut = contour_path_inv(&segment(marks[l - 1] + 1, marks[l]))?;

    let tail = segment(marks[l] + 1, steps.len());
    if tail.is_empty() {
        return Err(Error::Domain("leftover segment is empty".into()));
    }
    // Undo the rotation: the leftmost highest vertex of the tail marks the
    // original start of the reverse_contour_path encoding.
    let mut best = 0i64;
    let mut q = 0usize;
    for (idx, h) in tail.heights().enumerate() {
        if h > best {
            best = h;
            q = idx + 1;
        }
    }
    let leftover_path = tail.rotate_left(q);
    let leftover = reverse_contour_path_inv(&leftover_path)?;
    let rotation = tail.len() - q;
    if rotation <= l {
        return Err(Error::Domain("rotation too small to mark a vertex".into()));
    }
    let arrival = rotation - l;
    let mut vaddr = vertex_at_arrival(&leftover, arrival)?;
    let level = vaddr.level();
    if level < l {
        return Err(Error::Domain(
            "marked vertex sits below the requested level".into(),
        ));
    }

    // Reattach: right cuts extend their chain vertex, the root cut extends
    // the root, and D_v's tuplets hang back under v.
    let mut work = leftover;
    if !work.node_at(&vaddr)?.tuplets.is_empty() {
        return Err(Error::Domain(
            "marked vertex is not a leaf of the leftover".into(),
        ));
    }
    for (i, cut) in right_cuts.into_iter().enumerate() {
        let mut anc = vaddr.clone();
        anc.steps.truncate(level - (i + 1));
        work.node_at_mut(&anc)?
            .tuplets
            .extend(cut.root().tuplets.iter().cloned());
    }
    work.node_at_mut(&VertexAddr::root())?
        .tuplets
        .extend(root_cut.root().tuplets.iter().cloned());
    work.node_at_mut(&vaddr)?.tuplets = d_v.root().tuplets.clone();

    // Undo the Step-1 exchanges, top-down.
    for i in (0..l).rev() {
        let depth = level - i;
        if vaddr.steps[depth - 1].pos != d - 1 {
            return Err(Error::Domain(
                "chain vertex is not at the youngest slot".into(),
            ));
        }
        let original = digits.0[i];
        if original != d - 1 {
            let mut chain = vaddr.clone();
            chain.steps.truncate(depth);
            let mut target = chain.clone();
            target.steps[depth - 1].pos = original;
            work.swap_subtrees_unchecked(&chain, &target);
            vaddr.steps[depth - 1].pos = original;
        }
    }

    if work.tuplet_count() != n {
        return Err(Error::Domain(format!(
            "reassembled tree has {} tuplets, expected {n}",
            work.tuplet_count()
        )));
    }
    MarkedTree::new(work, vaddr)
}

// ---------------------------------------------------------------------------
// Sibling-constraint reductions
// ---------------------------------------------------------------------------

/// Cut-and-paste: re-root the parent's leftmost `i/d` tuplets as the marked
/// vertex's leftmost tuplets, and the parent's rightmost `j/d` tuplets as
/// its rightmost. Converts "at least `i` elder and `j` younger siblings"
/// into "at least `i + j` more children". `i` and `j` must be multiples of
/// `d`.
pub fn cut_and_paste(marked: &MarkedTree, i: usize, j: usize) -> Result<MarkedTree> {
    let d = marked.tree().d();
    if !i.is_multiple_of(d) || !j.is_multiple_of(d) {
        return Err(Error::Domain(format!(
            "cut_and_paste requires i and j to be multiples of d={d}"
        )));
    }
    if i == 0 && j == 0 {
        return Ok(marked.clone());
    }
    let v = marked.vertex();
    if v.is_root() {
        return Err(Error::Domain("the root has no siblings".into()));
    }
    let (left, right) = (i / d, j / d);
    let step = *v.steps.last().expect("non-root");
    let parent_addr = v.parent().expect("non-root");
    let parent_out = marked.tree().node_at(&parent_addr)?.tuplets.len();
    if step.tuplet < left {
        return Err(Error::Domain(format!(
            "marked vertex has fewer than {i} elder siblings"
        )));
    }
    if parent_out - step.tuplet - 1 < right {
        return Err(Error::Domain(format!(
            "marked vertex has fewer than {j} younger siblings"
        )));
    }

    let mut tree = marked.tree().clone();
    let parent = tree.node_at_mut(&parent_addr)?;
    let leftmost: Vec<_> = parent.tuplets.drain(..left).collect();
    let keep = parent.tuplets.len() - right;
    let rightmost: Vec<_> = parent.tuplets.split_off(keep);

    let mut vaddr = v.clone();
    vaddr.steps.last_mut().expect("non-root").tuplet -= left;
    let node = tree.node_at_mut(&vaddr)?;
    let mut tuplets = leftmost;
    tuplets.append(&mut node.tuplets);
    tuplets.extend(rightmost);
    node.tuplets = tuplets;
    MarkedTree::new(tree, vaddr)
}

/// Inverse of [`cut_and_paste`]: paste-and-cut with the roles swapped. The marked
/// vertex gives its leftmost `i/d` tuplets back to the parent's left and its
/// rightmost `j/d` tuplets back to the parent's right.
pub fn cut_and_paste_inv(marked: &MarkedTree, i: usize, j: usize) -> Result<MarkedTree> {
    let d = marked.tree().d();
    if !i.is_multiple_of(d) || !j.is_multiple_of(d) {
        return Err(Error::Domain(format!(
            "cut_and_paste requires i and j to be multiples of d={d}"
        )));
    }
    if i == 0 && j == 0 {
        return Ok(marked.clone());
    }
    let v = marked.vertex();
    if v.is_root() {
        return Err(Error::Domain("the root has no siblings".into()));
    }
    let (left, right) = (i / d, j / d);
    let out = marked.tree().node_at(v)?.tuplets.len();
    if out < left + right {
        return Err(Error::Domain(format!(
            "marked vertex has outdegree {out} < {}",
            left + right
        )));
    }

    let mut tree = marked.tree().clone();
    let node = tree.node_at_mut(v)?;
    let leftmost: Vec<_> = node.tuplets.drain(..left).collect();
    let keep = node.tuplets.len() - right;
    let rightmost: Vec<_> = node.tuplets.split_off(keep);

    let parent_addr = v.parent().expect("non-root");
    let step = *v.steps.last().expect("non-root");
    let parent = tree.node_at_mut(&parent_addr)?;
    let mut tuplets = leftmost;
    tuplets.append(&mut parent.tuplets);
    tuplets.extend(rightmost);
    parent.tuplets = tuplets;

    let mut vaddr = v.clone();
    vaddr.steps.last_mut().expect("non-root").tuplet = step.tuplet + left;
    MarkedTree::new(tree, vaddr)
}

/// Exchange the marked vertex's descendant subtree with that of its `jth`
/// global younger sibling; the mark follows the subtree. Trades younger
/// siblings for elder ones.
pub fn exchange_to_youngest_sibling(marked: &MarkedTree, jth: usize) -> Result<MarkedTree> {
    if jth == 0 {
        return Ok(marked.clone());
    }
    let v = marked.vertex();
    if v.is_root() {
        return Err(Error::Domain("the root has no siblings".into()));
    }
    let d = marked.tree().d();
    let step = *v.steps.last().expect("non-root");
    let parent_addr = v.parent().expect("non-root");
    let parent_out = marked.tree().node_at(&parent_addr)?.tuplets.len();
    let index = d * step.tuplet + step.pos + jth;
    if index >= d * parent_out {
        return Err(Error::Domain(format!(
            "marked vertex has fewer than {jth} younger siblings"
        )));
    }
    let mut target = v.clone();
    {
        let last = target.steps.last_mut().expect("non-root");
        last.tuplet = index / d;
        last.pos = index % d;
    }
    let tree = marked.tree().exchange_subtrees(v, &target)?;
    MarkedTree::new(tree, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_fc_paths, gen_free_paths, gen_reverse_paths, gen_trees};
    use std::collections::BTreeSet;

    fn tree(text: &str) -> TupletTree {
        TupletTree::parse(text).unwrap()
    }

    #[test]
    fn contour_on_small_trees() {
        assert_eq!(contour_path(&tree("d=2;1,0,0")).step_word(), "UDD");
        assert_eq!(contour_path(&tree("d=1;1,1,0")).step_word(), "UUDD");
    }

    #[test]
    fn reverse_contour_on_small_trees() {
        assert_eq!(reverse_contour_path(&tree("d=2;1,0,0")).step_word(), "DDU");
        assert_eq!(reverse_contour_path(&tree("d=1;1,1,0")).step_word(), "DDUU");
    }

    #[test]
    fn outdegree_encoding_on_small_trees() {
        assert_eq!(outdegree_path(&tree("d=2;1,0,0")).step_word(), "UDD");
        assert_eq!(outdegree_path(&tree("d=1;2,0,0")).step_word(), "UUDD");
        assert_eq!(outdegree_path(&tree("d=1;1,1,0")).step_word(), "UDUD");
    }

    #[test]
    fn boundary_walks_round_trip_exhaustively() {
        for (d, n) in [(1, 4), (2, 4), (3, 3)] {
            for t in gen_trees(d, n).unwrap() {
                assert_eq!(contour_path_inv(&contour_path(&t)).unwrap(), t);
                assert_eq!(
                    reverse_contour_path_inv(&reverse_contour_path(&t)).unwrap(),
                    t
                );
                assert_eq!(outdegree_path_inv(&outdegree_path(&t)).unwrap(), t);
            }
        }
    }

    #[test]
    fn images_cover_the_path_families() {
        for (d, n) in [(2, 3), (3, 3)] {
            let fc: BTreeSet<String> = gen_fc_paths(d, n).unwrap().map(|p| p.step_word()).collect();
            let reverse: BTreeSet<String> = gen_reverse_paths(d, n)
                .unwrap()
                .map(|p| p.step_word())
                .collect();
            let contour_image: BTreeSet<String> = gen_trees(d, n)
                .unwrap()
                .map(|t| contour_path(&t).step_word())
                .collect();
            let outdegree_image: BTreeSet<String> = gen_trees(d, n)
                .unwrap()
                .map(|t| outdegree_path(&t).step_word())
                .collect();
            let reverse_image: BTreeSet<String> = gen_trees(d, n)
                .unwrap()
                .map(|t| reverse_contour_path(&t).step_word())
                .collect();
            assert_eq!(contour_image, fc);
            assert_eq!(outdegree_image, fc);
            assert_eq!(reverse_image, reverse);
        }
    }

    #[test]
    fn inverses_reject_wrong_kind() {
        let below = crate::path::path_from_word(2, 0, "DDU");
        assert!(contour_path_inv(&below).is_err());
        assert!(outdegree_path_inv(&below).is_err());
        let above = crate::path::path_from_word(2, 0, "UDD");
        assert!(reverse_contour_path_inv(&above).is_err());
    }

    #[test]
    fn rotation_composes() {
        let p = crate::path::path_from_word(2, 0, "UDD");
        assert_eq!(rotate(&p, 1).unwrap().step_word(), "DDU");
        assert_eq!(rotate(&p, 3).unwrap().step_word(), "UDD");
        let a = rotate(&rotate(&p, 1).unwrap(), 2).unwrap();
        assert_eq!(a, rotate(&p, 3).unwrap());
        assert!(rotate(&LatticePath::empty(2), 1).is_err());
    }

    #[test]
    fn encode_marked_at_root_has_empty_digits() {
        let t = tree("d=2;2,1,0,0,0,0,0");
        let marked = MarkedTree::new(t, VertexAddr::root()).unwrap();
        let image = encode_marked(&marked, 1, 0).unwrap();
        assert!(image.digits.is_empty());
        assert_eq!(image.digits.to_string(), "()");
    }

    #[test]
    fn encode_marked_small_round_trip() {
        // All pairs for d=1, n=2, k=0, l=1: four marked trees onto the four
        // free paths with one up-step and three down-steps.
        let mut images = BTreeSet::new();
        for t in gen_trees(1, 2).unwrap() {
            for v in t.preorder() {
                if v.level() < 1 {
                    continue;
                }
                let marked = MarkedTree::new(t.clone(), v).unwrap();
                let image = encode_marked(&marked, 0, 1).unwrap();
                let back = decode_marked(&image.digits, &image.path, 1, 2, 0, 1).unwrap();
                assert_eq!(back, marked);
                images.insert(image.path.step_word());
            }
        }
        assert_eq!(
            images,
            BTreeSet::from([
                "UDDD".to_string(),
                "DUDD".to_string(),
                "DDUD".to_string(),
                "DDDU".to_string()
            ])
        );
    }

    #[test]
    fn encode_marked_level0_round_trip() {
        // k = 0, l = 0 marks every vertex; d=1, n=2 gives six pairs onto the
        // six free paths with two up-steps and two down-steps.
        let mut images = BTreeSet::new();
        for t in gen_trees(1, 2).unwrap() {
            for v in t.preorder() {
                let marked = MarkedTree::new(t.clone(), v).unwrap();
                let image = encode_marked(&marked, 0, 0).unwrap();
                let back = decode_marked(&image.digits, &image.path, 1, 2, 0, 0).unwrap();
                assert_eq!(back, marked);
                images.insert(image.path.step_word());
            }
        }
        assert_eq!(images.len(), 6);
    }

    #[test]
    fn encode_marked_rejects_violated_preconditions() {
        let t = tree("d=2;1,0,0");
        let root = MarkedTree::new(t.clone(), VertexAddr::root()).unwrap();
        assert!(encode_marked(&root, 2, 0).is_err()); // outdegree 1 < 2
        assert!(encode_marked(&root, 0, 1).is_err()); // level 0 < 1
    }

    #[test]
    fn decode_marked_sweeps_the_full_image() {
        // Every (digits, free path) pair is hit exactly once: d=2, n=3,
        // k=0, l=1 has 2 * C(9,7) = 72 preimages.
        let mut seen = BTreeSet::new();
        for digit in 0..2usize {
            for path in gen_free_paths(2, 3, 0, 1).unwrap() {
                let marked = decode_marked(&SiblingSeq(vec![digit]), &path, 2, 3, 0, 1).unwrap();
                let image = encode_marked(&marked, 0, 1).unwrap();
                assert_eq!(image.digits.0, vec![digit]);
                assert_eq!(image.path, path);
                seen.insert((marked.tree().to_text(), marked.vertex().to_string()));
            }
        }
        assert_eq!(seen.len(), 72);
    }

    #[test]
    fn cut_and_paste_zero_is_identity() {
        let t = tree("d=2;2,1,0,0,0,0,0");
        let v = VertexAddr::root().child(1, 0);
        let marked = MarkedTree::new(t, v).unwrap();
        assert_eq!(cut_and_paste(&marked, 0, 0).unwrap(), marked);
    }

    #[test]
    fn cut_and_paste_then_inverse_is_identity() {
        let t = tree("d=2;3,0,0,1,0,0,0,0,0");
        let v = VertexAddr::root().child(1, 1);
        let marked = MarkedTree::new(t, v).unwrap();
        for (i, j) in [(2, 0), (0, 2), (2, 2)] {
            let moved = cut_and_paste(&marked, i, j).unwrap();
            assert_eq!(cut_and_paste_inv(&moved, i, j).unwrap(), marked);
            assert_eq!(moved.tree().tuplet_count(), marked.tree().tuplet_count());
            assert_eq!(moved.vertex().level(), marked.vertex().level());
        }
    }

    #[test]
    fn cut_and_paste_rejects_missing_siblings() {
        let t = tree("d=2;1,0,0");
        let v = VertexAddr::root().child(0, 0);
        let marked = MarkedTree::new(t, v).unwrap();
        assert!(cut_and_paste(&marked, 2, 0).is_err());
        assert!(cut_and_paste(&marked, 1, 0).is_err()); // not a multiple of d
    }

    #[test]
    fn exchange_to_youngest_zero_is_identity() {
        let t = tree("d=2;2,0,0,0,0");
        let v = VertexAddr::root().child(0, 0);
        let marked = MarkedTree::new(t, v).unwrap();
        assert_eq!(exchange_to_youngest_sibling(&marked, 0).unwrap(), marked);
    }

    #[test]
    fn exchange_to_youngest_moves_mark_and_subtree() {
        // d=2, two root tuplets, first child carries a subtree.
        let t = tree("d=2;2,1,0,0,0,0,0");
        let v = VertexAddr::root().child(0, 0);
        let marked = MarkedTree::new(t, v).unwrap();
        let moved = exchange_to_youngest_sibling(&marked, 3).unwrap();
        assert_eq!(*moved.vertex(), VertexAddr::root().child(1, 1));
        // The subtree travelled with the mark.
        assert_eq!(
            moved.tree().node_at(moved.vertex()).unwrap().tuplets.len(),
            1
        );
        // Swapping back along the elder direction restores the tree.
        let restored = moved
            .tree()
            .exchange_subtrees(moved.vertex(), marked.vertex())
            .unwrap();
        assert_eq!(&restored, marked.tree());
    }

    #[test]
    fn exchange_to_youngest_rejects_overflow() {
        let t = tree("d=2;1,0,0");
        let v = VertexAddr::root().child(0, 0);
        let marked = MarkedTree::new(t, v).unwrap();
        assert!(exchange_to_youngest_sibling(&marked, 2).is_err());
    }

    #[test]
    fn sibling_seq_text_round_trip() {
        for text in ["()", "(0)", "(0,1,2)"] {
            assert_eq!(SiblingSeq::parse(text).unwrap().to_string(), text);
        }
        assert!(SiblingSeq::parse("0,1").is_err());
    }
}
