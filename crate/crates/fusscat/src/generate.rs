//! Exhaustive generation of trees and paths.
//!
//! All generators are pull-based iterators: nothing is materialized, and a
//! resource guard refuses instances whose cardinality exceeds a cap
//! (default [`DEFAULT_CAP`]) before the first item is produced.
//!
//! Trees are emitted in lexicographic order of their preorder outdegree
//! word; paths in lexicographic order of their step word with `D < U`.

use num_traits::ToPrimitive;

use crate::counting::{binom_i, fuss_catalan, Count};
use crate::path::{LatticePath, Step};
use crate::tree::TupletTree;
use crate::{Error, Result};

/// Default resource cap: generation refuses instances with more than this
/// many objects.
pub const DEFAULT_CAP: u64 = 10_000_000;

fn guard(what: &str, count: &Count, cap: u64) -> Result<()> {
    if count > &Count::from(cap) {
        return Err(Error::InstanceTooLarge(
            format!("{what} would yield {count} objects"),
            cap,
        ));
    }
    Ok(())
}

/// All trees of `T_n^(d)`, lexicographic by outdegree word, under the
/// default cap.
pub fn gen_trees(d: usize, n: usize) -> Result<TreeIter> {
    gen_trees_with_cap(d, n, DEFAULT_CAP)
}

/// All trees of `T_n^(d)` under an explicit cap.
pub fn gen_trees_with_cap(d: usize, n: usize, cap: u64) -> Result<TreeIter> {
    if d == 0 {
        return Err(Error::Domain("tuplet arity d must be >= 1".into()));
    }
    guard("tree enumeration", &fuss_catalan(d as u64, n as u64), cap)?;
    Ok(TreeIter::new(d, n))
}

/// Lexicographic enumeration of preorder outdegree words, parsed into
/// trees on the fly.
///
/// A word position consumes one pending vertex slot and opens `d*m` new
/// ones, so the depth-first search tracks `(budget, slots)` per position:
/// remaining tuplets to place and vertices still owed.
#[derive(Debug)]
pub struct TreeIter {
    d: usize,
    len: usize,
    word: Vec<usize>,
    state: Vec<(usize, usize)>,
    exhausted: bool,
}

impl TreeIter {
    fn new(d: usize, n: usize) -> Self {
        TreeIter {
            d,
            len: d * n + 1,
            word: Vec::with_capacity(d * n + 1),
            state: vec![(n, 1)],
            exhausted: false,
        }
    }

    /// Smallest feasible outdegree at a position with `budget` tuplets left
    /// and `slots` vertices still owed. When this is the final owed vertex
    /// the whole budget must land here.
    fn min_choice(budget: usize, slots: usize) -> usize {
        if slots == 1 && budget > 0 {
            1
        } else {
            0
        }
    }

    fn push(&mut self, m: usize) {
        let (budget, slots) = *self.state.last().expect("state tracks word positions");
        self.word.push(m);
        self.state.push((budget - m, slots - 1 + self.d * m));
    }
}

impl Iterator for TreeIter {
    type Item = TupletTree;

    fn next(&mut self) -> Option<TupletTree> {
        if self.exhausted {
            return None;
        }
        if self.word.len() == self.len {
            // Backtrack from the previously yielded word to the next branch.
            loop {
                match self.word.pop() {
                    None => {
                        self.exhausted = true;
                        return None;
                    }
                    Some(m) => {
                        self.state.pop();
                        let (budget, _slots) = *self.state.last().expect("root state persists");
                        if m < budget {
                            self.push(m + 1);
                            break;
                        }
                    }
                }
            }
        }
        while self.word.len() < self.len {
            let (budget, slots) = *self.state.last().expect("state tracks word positions");
            self.push(Self::min_choice(budget, slots));
        }
        let tree = TupletTree::from_outdegrees(self.d, &self.word)
            .expect("generated outdegree words are valid");
        Some(tree)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum HeightRule {
    WeaklyAbove,
    WeaklyBelow,
    Unconstrained,
}

/// Depth-first enumeration of step words under a height rule, `D` before
/// `U` at every branch.
#[derive(Debug)]
pub struct PathIter {
    d: usize,
    start: i64,
    len: usize,
    ups_left: usize,
    downs_left: usize,
    height: i64,
    rule: HeightRule,
    word: Vec<Step>,
    started: bool,
    exhausted: bool,
}

impl PathIter {
    fn new(d: usize, start: i64, ups: usize, downs: usize, rule: HeightRule) -> Self {
        PathIter {
            d,
            start,
            len: ups + downs,
            ups_left: ups,
            downs_left: downs,
            height: start,
            rule,
            word: Vec::with_capacity(ups + downs),
            started: false,
            exhausted: false,
        }
    }

    fn feasible(&self, s: Step) -> bool {
        match s {
            Step::Down => {
                self.downs_left > 0 && (self.rule != HeightRule::WeaklyAbove || self.height >= 1)
            }
            Step::Up => {
                self.ups_left > 0
                    && (self.rule != HeightRule::WeaklyBelow || self.height + (self.d as i64) <= 0)
            }
        }
    }

    fn apply(&mut self, s: Step) {
        match s {
            Step::Down => {
                self.downs_left -= 1;
                self.height -= 1;
            }
            Step::Up => {
                self.ups_left -= 1;
                self.height += self.d as i64;
            }
        }
        self.word.push(s);
    }

    fn unapply(&mut self) -> Step {
        let s = self.word.pop().expect("unapply only after apply");
        match s {
            Step::Down => {
                self.downs_left += 1;
                self.height += 1;
            }
            Step::Up => {
                self.ups_left += 1;
                self.height -= self.d as i64;
            }
        }
        s
    }
}

impl Iterator for PathIter {
    type Item = LatticePath;

    fn next(&mut self) -> Option<LatticePath> {
        if self.exhausted {
            return None;
        }
        if self.started {
            // Backtrack: the only move after D is U.
            loop {
                if self.word.is_empty() {
                    self.exhausted = true;
                    return None;
                }
                let s = self.unapply();
                if s == Step::Down && self.feasible(Step::Up) {
                    self.apply(Step::Up);
                    break;
                }
            }
        }
        self.started = true;
        while self.word.len() < self.len {
            if self.feasible(Step::Down) {
                self.apply(Step::Down);
            } else if self.feasible(Step::Up) {
                self.apply(Step::Up);
            } else {
                // Unreachable for the three families: the step counts are
                // consistent with the rule, so a partial word always extends.
                self.exhausted = true;
                return None;
            }
        }
        Some(LatticePath::new(self.d, self.start, self.word.clone()))
    }
}

/// All `d`-Fuss-Catalan paths of length `(d+1)n` (default cap).
pub fn gen_fc_paths(d: usize, n: usize) -> Result<PathIter> {
    gen_fc_paths_with_cap(d, n, DEFAULT_CAP)
}

pub fn gen_fc_paths_with_cap(d: usize, n: usize, cap: u64) -> Result<PathIter> {
    if d == 0 {
        return Err(Error::Domain("path arity d must be >= 1".into()));
    }
    guard(
        "Fuss-Catalan path enumeration",
        &fuss_catalan(d as u64, n as u64),
        cap,
    )?;
    Ok(PathIter::new(d, 0, n, d * n, HeightRule::WeaklyAbove))
}

/// All reverse `d`-Fuss-Catalan paths of length `(d+1)n` (default cap).
pub fn gen_reverse_paths(d: usize, n: usize) -> Result<PathIter> {
    gen_reverse_paths_with_cap(d, n, DEFAULT_CAP)
}

pub fn gen_reverse_paths_with_cap(d: usize, n: usize, cap: u64) -> Result<PathIter> {
    if d == 0 {
        return Err(Error::Domain("path arity d must be >= 1".into()));
    }
    guard(
        "reverse path enumeration",
        &fuss_catalan(d as u64, n as u64),
        cap,
    )?;
    Ok(PathIter::new(d, 0, n, d * n, HeightRule::WeaklyBelow))
}

/// All free paths with `n - k - l` up-steps and `dn + l` down-steps from
/// height `d*k`. Empty when `k + l > n`.
pub fn gen_free_paths(d: usize, n: usize, k: usize, l: usize) -> Result<PathIter> {
    gen_free_paths_with_cap(d, n, k, l, DEFAULT_CAP)
}

pub fn gen_free_paths_with_cap(
    d: usize,
    n: usize,
    k: usize,
    l: usize,
    cap: u64,
) -> Result<PathIter> {
    if d == 0 {
        return Err(Error::Domain("path arity d must be >= 1".into()));
    }
    if k + l > n {
        let mut it = PathIter::new(d, (d * k) as i64, 0, 0, HeightRule::Unconstrained);
        it.exhausted = true;
        return Ok(it);
    }
    let count = binom_i(((d + 1) * n - k) as i64, (d * n + l) as i64);
    guard("free path enumeration", &count, cap)?;
    Ok(PathIter::new(
        d,
        (d * k) as i64,
        n - k - l,
        d * n + l,
        HeightRule::Unconstrained,
    ))
}

/// Convenience: number of items a generator will emit, as `u64` (callers
/// use this for progress and sanity checks at desk scale).
pub fn expected_tree_count(d: usize, n: usize) -> u64 {
    fuss_catalan(d as u64, n as u64)
        .to_u64()
        .unwrap_or(u64::MAX)
}
