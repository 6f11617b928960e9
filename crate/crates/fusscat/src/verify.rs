//! Verification sweeps: every closed form and every bijection checked
//! against exhaustive enumeration, cell by cell.
//!
//! A sweep runs a set of [`Suite`]s over a rectangle of `(d, n)` instances
//! and reports one [`CellReport`] per `(d, n, suite)` with the number of
//! checks performed and a witness string for every failure. Cells share
//! nothing and run on a small worker pool.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_traits::Zero;

use crate::bijections::{
    contour_path, contour_path_inv, cut_and_paste, decode_marked, encode_marked,
    exchange_to_youngest_sibling, outdegree_path, outdegree_path_inv, reverse_contour_path,
    reverse_contour_path_inv, MarkedTree,
};
use crate::counting::{count_atleast, count_exact, count_refined, total_vertices, Count};
use crate::generate::{gen_fc_paths_with_cap, gen_reverse_paths_with_cap, gen_trees_with_cap};
use crate::oracle::{
    brute_count_atleast, brute_count_exact, brute_count_refined, vertex_histogram_with_cap,
    VertexHistogram,
};
use crate::tree::VertexAddr;
use crate::Result;

/// One family of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    /// Closed forms versus the oracle (at-least, refined, exact, totals).
    Formulas,
    /// Round trips and image characterisation of every bijection.
    Bijections,
    /// Inclusion-exclusion consistency of the exact counts (pure
    /// arithmetic, no oracle).
    Sieve,
    /// The telescoping identity for sibling-constrained counts, against the
    /// oracle.
    Telescoping,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Formulas,
        Suite::Bijections,
        Suite::Sieve,
        Suite::Telescoping,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Formulas => "formulas",
            Suite::Bijections => "bijections",
            Suite::Sieve => "sieve",
            Suite::Telescoping => "telescoping",
        }
    }

    pub fn parse(text: &str) -> Result<Suite> {
        match text.trim() {
            "formulas" => Ok(Suite::Formulas),
            "bijections" => Ok(Suite::Bijections),
            "sieve" => Ok(Suite::Sieve),
            "telescoping" => Ok(Suite::Telescoping),
            other => Err(crate::Error::Parse(format!(
                "unknown suite `{other}` (expected formulas, bijections, sieve or telescoping)"
            ))),
        }
    }
}

/// Outcome of one suite on one `(d, n)` instance.
#[derive(Debug, Clone)]
pub struct CellReport {
    pub d: usize,
    pub n: usize,
    pub suite: Suite,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl CellReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All cell reports of a sweep, ordered by `(d, n, suite)`.
#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub cells: Vec<CellReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(CellReport::passed)
    }

    pub fn total_checks(&self) -> usize {
        self.cells.iter().map(|c| c.checks).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<_> = self
            .cells
            .iter()
            .map(|c| {
                serde_json::json!({
                    "d": c.d,
                    "n": c.n,
                    "suite": c.suite.as_str(),
                    "checks": c.checks,
                    "failures": c.failures,
                })
            })
            .collect();
        serde_json::json!({
            "passed": self.passed(),
            "total_checks": self.total_checks(),
            "cells": cells,
        })
    }
}

/// Run `suites` over every `(d, n)` in the given ranges. Cells are
/// independent; they are distributed over `workers` threads and the report
/// is reassembled in deterministic order.
pub fn run_verification(
    d_range: RangeInclusive<usize>,
    n_range: RangeInclusive<usize>,
    suites: &[Suite],
    cap: u64,
    workers: usize,
) -> VerifyReport {
    let mut jobs = Vec::new();
    for d in d_range {
        for n in n_range.clone() {
            for &suite in suites {
                jobs.push((d, n, suite));
            }
        }
    }
    let workers = workers.max(1).min(jobs.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results = std::sync::Mutex::new(Vec::with_capacity(jobs.len()));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if idx >= jobs.len() {
                    break;
                }
                let (d, n, suite) = jobs[idx];
                let report = run_cell(d, n, suite, cap);
                results
                    .lock()
                    .expect("no poisoned cell")
                    .push((idx, report));
            });
        }
    });
    let mut results = results.into_inner().expect("workers are done");
    results.sort_by_key(|(idx, _)| *idx);
    VerifyReport {
        cells: results.into_iter().map(|(_, r)| r).collect(),
    }
}

/// Run one suite on one instance.
pub fn run_cell(d: usize, n: usize, suite: Suite, cap: u64) -> CellReport {
    let mut checks = 0usize;
    let mut failures = Vec::new();
    let outcome = match suite {
        Suite::Formulas => check_formulas(d, n, cap, &mut checks, &mut failures),
        Suite::Bijections => check_bijections(d, n, cap, &mut checks, &mut failures),
        Suite::Sieve => check_sieve(d, n, &mut checks, &mut failures),
        Suite::Telescoping => check_telescoping(d, n, cap, &mut checks, &mut failures),
    };
    if let Err(e) = outcome {
        failures.push(format!("suite aborted: {e}"));
    }
    CellReport {
        d,
        n,
        suite,
        checks,
        failures,
    }
}

fn refined_grid(d: usize, n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    let ls = 1..=n;
    ls.flat_map(move |l| {
        (0..=2 * d).flat_map(move |i| {
            (0..=2 * d).flat_map(move |j| [0, d, 2 * d].into_iter().map(move |k| (i, j, k, l)))
        })
    })
}

fn check_formulas(
    d: usize,
    n: usize,
    cap: u64,
    checks: &mut usize,
    failures: &mut Vec<String>,
) -> Result<()> {
    let h = vertex_histogram_with_cap(d, n, cap)?;
    let (du, nu) = (d as u64, n as u64);

    *checks += 1;
    if h.total() != total_vertices(du, nu)? {
        failures.push(format!("total mass mismatch at d={d}, n={n}"));
    }

    for k in 0..=n + 1 {
        for l in 0..=n + 1 {
            *checks += 1;
            let brute = brute_count_atleast(&h, k, l);
            let formula = count_atleast(du, nu, k as u64, l as u64);
            if brute != formula {
                failures.push(format!(
                    "atleast(d={d}, n={n}, k={k}, l={l}): oracle {brute} vs formula {formula}"
                ));
            }
        }
    }

    if n >= 1 {
        for (i, j, k, l) in refined_grid(d, n) {
            *checks += 1;
            let brute = brute_count_refined(&h, i, j, k, l);
            let formula = count_refined(du, nu, i as u64, j as u64, k as u64, l as u64)?;
            if brute != formula {
                failures.push(format!(
                    "refined(d={d}, n={n}, i={i}, j={j}, k={k}, l={l}): oracle {brute} vs formula {formula}"
                ));
            }
        }

        for k in 0..=n {
            for l in 0..=n {
                *checks += 1;
                let brute = brute_count_exact(&h, k, l);
                let formula = count_exact(du, nu, k as u64, l as u64)?;
                if brute != formula {
                    failures.push(format!(
                        "exact(d={d}, n={n}, k={k}, l={l}): oracle {brute} vs formula {formula}"
                    ));
                }
            }
        }
    }
    Ok(())
}

fn check_bijections(
    d: usize,
    n: usize,
    cap: u64,
    checks: &mut usize,
    failures: &mut Vec<String>,
) -> Result<()> {
    let trees: Vec<_> = gen_trees_with_cap(d, n, cap)?.collect();

    // Round trips and image sets for the three boundary encodings.
    let mut contour_image = BTreeSet::new();
    let mut reverse_image = BTreeSet::new();
    let mut outdegree_image = BTreeSet::new();
    for t in &trees {
        *checks += 3;
        let p = contour_path(t);
        if contour_path_inv(&p).ok().as_ref() != Some(t) {
            failures.push(format!("contour_path round trip failed on {t}"));
        }
        contour_image.insert(p.step_word());
        let pb = reverse_contour_path(t);
        if reverse_contour_path_inv(&pb).ok().as_ref() != Some(t) {
            failures.push(format!("reverse_contour_path round trip failed on {t}"));
        }
        reverse_image.insert(pb.step_word());
        let ps = outdegree_path(t);
        if outdegree_path_inv(&ps).ok().as_ref() != Some(t) {
            failures.push(format!("outdegree_path round trip failed on {t}"));
        }
        outdegree_image.insert(ps.step_word());
    }
    let fc: BTreeSet<_> = gen_fc_paths_with_cap(d, n, cap)?
        .map(|p| p.step_word())
        .collect();
    let rev: BTreeSet<_> = gen_reverse_paths_with_cap(d, n, cap)?
        .map(|p| p.step_word())
        .collect();
    *checks += 3;
    if contour_image != fc {
        failures.push(format!(
            "contour_path image differs from the Fuss-Catalan set at d={d}, n={n}"
        ));
    }
    if outdegree_image != fc {
        failures.push(format!(
            "outdegree_path image differs from the Fuss-Catalan set at d={d}, n={n}"
        ));
    }
    if reverse_image != rev {
        failures.push(format!(
            "reverse_contour_path image differs from the reverse set at d={d}, n={n}"
        ));
    }

    // The main bijection: injective, right cardinality, and invertible for
    // every (k, l) with k + l <= n.
    for k in 0..=n {
        for l in 0..=n.saturating_sub(k) {
            let mut image = BTreeSet::new();
            let mut domain = 0u64;
            for t in &trees {
                for v in t.preorder() {
                    let stats = t.stats(&v)?;
                    if stats.outdegree < k || stats.level < l {
                        continue;
                    }
                    domain += 1;
                    let marked = MarkedTree::new(t.clone(), v)?;
                    let img = encode_marked(&marked, k, l)?;
                    *checks += 1;
                    let back = decode_marked(&img.digits, &img.path, d, n, k, l)?;
                    if back != marked {
                        failures.push(format!(
                            "encode_marked round trip failed at d={d}, n={n}, k={k}, l={l} on ({}, {})",
                            marked.tree(),
                            marked.vertex()
                        ));
                    }
                    image.insert((img.digits.to_string(), img.path.to_text()));
                }
            }
            *checks += 1;
            let expected = count_atleast(d as u64, n as u64, k as u64, l as u64);
            if Count::from(domain) != expected || Count::from(image.len() as u64) != expected {
                failures.push(format!(
                    "encode_marked cardinality at d={d}, n={n}, k={k}, l={l}: domain {domain}, image {}, formula {expected}",
                    image.len()
                ));
            }
        }
    }

    // cut_and_paste carries (i, 0, k; l) classes onto (0, 0, i+k; l) classes.
    if n >= 1 {
        let h = vertex_histogram_with_cap(d, n, cap)?;
        for l in 1..=n {
            for i_mult in 0..=2usize {
                for k_mult in 0..=1usize {
                    let (i, k) = (i_mult * d, k_mult * d);
                    let mut image = BTreeSet::new();
                    let mut domain = 0u64;
                    for t in &trees {
                        for v in t.preorder() {
                            let stats = t.stats(&v)?;
                            if stats.global_elders < i || stats.child_count < k || stats.level < l {
                                continue;
                            }
                            domain += 1;
                            let marked = MarkedTree::new(t.clone(), v)?;
                            let moved = cut_and_paste(&marked, i, 0)?;
                            let mstats = moved.tree().stats(moved.vertex())?;
                            *checks += 1;
                            if mstats.child_count < i + k || mstats.level < l {
                                failures.push(format!(
                                    "cut_and_paste left the target class at d={d}, n={n}, i={i}, k={k}, l={l}"
                                ));
                            }
                            image.insert((moved.tree().to_text(), moved.vertex().to_string()));
                        }
                    }
                    *checks += 1;
                    let target = brute_count_refined(&h, 0, 0, i + k, l);
                    if Count::from(domain) != Count::from(image.len() as u64)
                        || Count::from(domain) != target
                    {
                        failures.push(format!(
                            "cut_and_paste is not a bijection at d={d}, n={n}, i={i}, k={k}, l={l}: domain {domain}, image {}, target {target}",
                            image.len()
                        ));
                    }
                }
            }
        }

        // The sibling exchange reduces (i, j, k; l) into (i+j, 0, k; l)
        // injectively.
        for l in 1..=n {
            for i in 0..=d {
                for j in 0..=d {
                    let mut image = BTreeSet::new();
                    let mut domain = 0u64;
                    for t in &trees {
                        for v in t.preorder() {
                            let stats = t.stats(&v)?;
                            if stats.global_elders < i
                                || stats.global_youngers < j
                                || stats.level < l
                            {
                                continue;
                            }
                            domain += 1;
                            let marked = MarkedTree::new(t.clone(), v)?;
                            let moved = exchange_to_youngest_sibling(&marked, j)?;
                            let mstats = moved.tree().stats(moved.vertex())?;
                            *checks += 1;
                            if mstats.global_elders < i + j || mstats.level < l {
                                failures.push(format!(
                                    "sibling exchange left the target class at d={d}, n={n}, i={i}, j={j}, l={l}"
                                ));
                            }
                            image.insert((moved.tree().to_text(), moved.vertex().to_string()));
                        }
                    }
                    *checks += 1;
                    if Count::from(domain) != Count::from(image.len() as u64) {
                        failures.push(format!(
                            "sibling exchange is not injective at d={d}, n={n}, i={i}, j={j}, l={l}"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_sieve(d: usize, n: usize, checks: &mut usize, failures: &mut Vec<String>) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    let (du, nu) = (d as u64, n as u64);
    let mut sum = Count::zero();
    for k in 0..=nu {
        for l in 0..=nu {
            *checks += 1;
            let exact = count_exact(du, nu, k, l)?;
            let sieve = count_atleast(du, nu, k, l) + count_atleast(du, nu, k + 1, l + 1);
            let drop = count_atleast(du, nu, k + 1, l) + count_atleast(du, nu, k, l + 1);
            if sieve != &drop + &exact {
                failures.push(format!("sieve mismatch at d={d}, n={n}, k={k}, l={l}"));
            }
            sum += exact;
        }
    }
    *checks += 1;
    if sum != total_vertices(du, nu)? {
        failures.push(format!(
            "exact counts do not sum to the total at d={d}, n={n}"
        ));
    }
    Ok(())
}

fn check_telescoping(
    d: usize,
    n: usize,
    cap: u64,
    checks: &mut usize,
    failures: &mut Vec<String>,
) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    let h = vertex_histogram_with_cap(d, n, cap)?;
    for l in 1..=n {
        for alpha in 0..=2usize {
            let k = alpha * d;
            let base = brute_count_refined(&h, 0, 0, k, l);
            let full = brute_count_refined(&h, d, 0, k, l);
            let gap = &base - &full;
            for beta in 0..d {
                *checks += 1;
                // #V(0,0,ad;l) - #V(b,0,ad;l) = (b/d) (#V(0,0,ad;l) - #V(d,0,ad;l))
                let lhs = (&base - brute_count_refined(&h, beta, 0, k, l)) * Count::from(d as u64);
                let rhs = &gap * Count::from(beta as u64);
                if lhs != rhs {
                    failures.push(format!(
                        "telescoping fails at d={d}, n={n}, alpha={alpha}, beta={beta}, l={l}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Collect all marked trees of the class `V_n^(d)(i, j, k; l)`: at least
/// `i` elder siblings, `j` younger siblings, `k` children, level `>= l`.
/// Used by tests and the acceptance suite.
pub fn marked_class(
    d: usize,
    n: usize,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    cap: u64,
) -> Result<Vec<MarkedTree>> {
    let mut out = Vec::new();
    for t in gen_trees_with_cap(d, n, cap)? {
        for v in t.preorder() {
            let stats = t.stats(&v)?;
            if stats.global_elders >= i
                && stats.global_youngers >= j
                && stats.child_count >= k
                && stats.level >= l
            {
                out.push(MarkedTree::new(t.clone(), v)?);
            }
        }
    }
    Ok(out)
}

/// Histogram accessor reused by the CLI.
pub fn histogram(d: usize, n: usize, cap: u64) -> Result<VertexHistogram> {
    vertex_histogram_with_cap(d, n, cap)
}

/// Addresses of all vertices of `tree`, paired with level and outdegree.
/// Convenience for filtering marked-tree domains.
pub fn marked_domain(
    tree: &crate::tree::TupletTree,
    k: usize,
    l: usize,
) -> Result<Vec<VertexAddr>> {
    let mut out = Vec::new();
    for v in tree.preorder() {
        let stats = tree.stats(&v)?;
        if stats.outdegree >= k && stats.level >= l {
            out.push(v);
        }
    }
    Ok(out)
}
