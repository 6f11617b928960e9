//! Brute-force ground truth.
//!
//! [`vertex_histogram`] walks every tree of `T_n^(d)` and tallies every
//! vertex by `(level, outdegree, global elders, global youngers)`. The
//! marginal sums of this histogram are what the closed forms in
//! [`crate::counting`] must reproduce; every verification suite ultimately
//! compares against it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::counting::Count;
use crate::generate::{gen_trees_with_cap, DEFAULT_CAP};
use crate::tree::Node;
use crate::{Error, Result};

/// Histogram cell key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HistKey {
    pub level: usize,
    pub outdegree: usize,
    pub elders: usize,
    pub youngers: usize,
}

/// Exact vertex counts over all trees of `T_n^(d)`, keyed by level,
/// outdegree and global sibling counts.
///
/// Sibling counts are global (all same-parent vertices across every tuplet
/// of the parent); the within-tuplet position is recoverable as
/// `elders % d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexHistogram {
    d: usize,
    n: usize,
    cells: BTreeMap<HistKey, u64>,
}

/// Tally every vertex of every tree of `T_n^(d)` (default cap).
pub fn vertex_histogram(d: usize, n: usize) -> Result<VertexHistogram> {
    vertex_histogram_with_cap(d, n, DEFAULT_CAP)
}

/// Tally under an explicit cap on trees times vertices.
pub fn vertex_histogram_with_cap(d: usize, n: usize, cap: u64) -> Result<VertexHistogram> {
    if d == 0 {
        return Err(Error::Domain("tuplet arity d must be >= 1".into()));
    }
    let work = crate::counting::fuss_catalan(d as u64, n as u64) * Count::from((d * n + 1) as u64);
    if work > Count::from(cap) {
        return Err(Error::InstanceTooLarge(
            format!("histogram of d={d}, n={n} would visit {work} vertices"),
            cap,
        ));
    }
    let mut cells = BTreeMap::new();
    for tree in gen_trees_with_cap(d, n, cap)? {
        tally(tree.root(), d, 0, None, &mut cells);
    }
    Ok(VertexHistogram { d, n, cells })
}

/// `ctx` carries (parent outdegree, tuplet index, position) for non-roots.
fn tally(
    node: &Node,
    d: usize,
    level: usize,
    ctx: Option<(usize, usize, usize)>,
    cells: &mut BTreeMap<HistKey, u64>,
) {
    let outdegree = node.tuplets.len();
    let (elders, youngers) = match ctx {
        None => (0, 0),
        Some((parent_out, t, p)) => (d * t + p, d * (parent_out - t - 1) + (d - 1 - p)),
    };
    *cells
        .entry(HistKey {
            level,
            outdegree,
            elders,
            youngers,
        })
        .or_insert(0) += 1;
    for (ti, tuplet) in node.tuplets.iter().enumerate() {
        for (pi, child) in tuplet.children.iter().enumerate() {
            tally(child, d, level + 1, Some((outdegree, ti, pi)), cells);
        }
    }
}

impl VertexHistogram {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &BTreeMap<HistKey, u64> {
        &self.cells
    }

    /// Total mass: `(dn + 1) * Cat_n^(d)` vertices.
    pub fn total(&self) -> Count {
        self.cells.values().map(|&c| Count::from(c)).sum()
    }

    /// Marginal `(level, outdegree)` matrix with rows `0..=n` and columns
    /// `0..=n`.
    pub fn level_outdegree_matrix(&self) -> Vec<Vec<u64>> {
        let size = self.n + 1;
        let mut rows = vec![vec![0u64; size]; size];
        for (key, count) in &self.cells {
            rows[key.level][key.outdegree] += count;
        }
        rows
    }

    /// CSV serialisation, one sorted row per cell:
    /// `level,outdegree,elders,youngers,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,outdegree,elders,youngers,count\n");
        for (key, count) in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                key.level, key.outdegree, key.elders, key.youngers, count
            ));
        }
        out
    }

    /// JSON serialisation with stable cell order.
    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<_> = self
            .cells
            .iter()
            .map(|(key, count)| {
                serde_json::json!({
                    "level": key.level,
                    "outdegree": key.outdegree,
                    "elders": key.elders,
                    "youngers": key.youngers,
                    "count": count,
                })
            })
            .collect();
        serde_json::json!({ "d": self.d, "n": self.n, "cells": cells })
    }
}

/// Vertices of outdegree `>= k` at level `>= l`.
pub fn brute_count_atleast(h: &VertexHistogram, k: usize, l: usize) -> Count {
    h.cells
        .iter()
        .filter(|(key, _)| key.outdegree >= k && key.level >= l)
        .map(|(_, &c)| Count::from(c))
        .sum()
}

/// Vertices with at least `i` elder siblings, `j` younger siblings and `k`
/// children (`d * outdegree >= k`) at level `>= l`.
pub fn brute_count_refined(h: &VertexHistogram, i: usize, j: usize, k: usize, l: usize) -> Count {
    h.cells
        .iter()
        .filter(|(key, _)| {
            key.elders >= i && key.youngers >= j && h.d * key.outdegree >= k && key.level >= l
        })
        .map(|(_, &c)| Count::from(c))
        .sum()
}

/// Vertices of outdegree exactly `k` at level exactly `l`.
pub fn brute_count_exact(h: &VertexHistogram, k: usize, l: usize) -> Count {
    h.cells
        .iter()
        .filter(|(key, _)| key.outdegree == k && key.level == l)
        .map(|(_, &c)| Count::from(c))
        .sum()
}
