//! The `(level, outdegree)` count table with margins, computable from the
//! closed form or from the brute-force oracle.

use num_traits::Zero;

use crate::counting::{count_exact, Count};
use crate::oracle::vertex_histogram_with_cap;
use crate::{Error, Result};

/// Which route produced a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    Formula,
    Oracle,
}

impl TableSource {
    pub fn as_str(self) -> &'static str {
        match self {
            TableSource::Formula => "formula",
            TableSource::Oracle => "oracle",
        }
    }
}

/// Exact counts of vertices of outdegree `k` at level `l` over all trees of
/// `T_n^(d)`, for `0 <= k, l <= n`, with row/column sums and grand total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub d: usize,
    pub n: usize,
    pub source: TableSource,
    /// `rows[l][k]`
    pub rows: Vec<Vec<Count>>,
}

impl CountTable {
    /// Evaluate the closed form cell by cell. Requires `n >= 1` (the sieve
    /// denominator vanishes at `n = 0`).
    pub fn from_formula(d: usize, n: usize) -> Result<CountTable> {
        if n == 0 {
            return Err(Error::Domain(
                "the closed-form table needs n >= 1; use the oracle for n = 0".into(),
            ));
        }
        let mut rows = Vec::with_capacity(n + 1);
        for l in 0..=n {
            let mut row = Vec::with_capacity(n + 1);
            for k in 0..=n {
                row.push(count_exact(d as u64, n as u64, k as u64, l as u64)?);
            }
            rows.push(row);
        }
        Ok(CountTable {
            d,
            n,
            source: TableSource::Formula,
            rows,
        })
    }

    /// Tally the table by exhaustive enumeration.
    pub fn from_oracle(d: usize, n: usize, cap: u64) -> Result<CountTable> {
        let h = vertex_histogram_with_cap(d, n, cap)?;
        let m = h.level_outdegree_matrix();
        let rows = m
            .into_iter()
            .map(|row| row.into_iter().map(Count::from).collect())
            .collect();
        Ok(CountTable {
            d,
            n,
            source: TableSource::Oracle,
            rows,
        })
    }

    pub fn row_sums(&self) -> Vec<Count> {
        self.rows.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<Count> {
        let size = self.n + 1;
        let mut sums = vec![Count::zero(); size];
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                sums[k] += v;
            }
        }
        sums
    }

    pub fn total(&self) -> Count {
        self.rows.iter().flatten().sum()
    }

    /// Fixed-width layout mirroring the published table: rows are levels,
    /// columns are outdegrees, margins are sums.
    pub fn render_pretty(&self) -> String {
        let row_sums = self.row_sums();
        let col_sums = self.col_sums();
        let total = self.total();
        let width = self
            .rows
            .iter()
            .flatten()
            .chain(&row_sums)
            .chain(&col_sums)
            .map(|c| c.to_string().len())
            .chain(std::iter::once(total.to_string().len()))
            .max()
            .unwrap_or(1)
            .max(3);

        let mut out = String::new();
        out.push_str(&format!("{:<5}", "l\\k"));
        for k in 0..=self.n {
            out.push_str(&format!(" {k:>width$}"));
        }
        out.push_str(&format!(" | {:>width$}\n", "sum"));
        for (l, row) in self.rows.iter().enumerate() {
            out.push_str(&format!("{l:<5}"));
            for v in row {
                out.push_str(&format!(" {:>width$}", v.to_string()));
            }
            out.push_str(&format!(" | {:>width$}\n", row_sums[l].to_string()));
        }
        out.push_str(&format!("{:<5}", "sum"));
        for v in &col_sums {
            out.push_str(&format!(" {:>width$}", v.to_string()));
        }
        out.push_str(&format!(" | {:>width$}\n", total.to_string()));
        out
    }

    /// CSV with a header row, one row per level, and a trailing sum row.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("level");
        for k in 0..=self.n {
            out.push_str(&format!(",k{k}"));
        }
        out.push_str(",sum\n");
        let row_sums = self.row_sums();
        for (l, row) in self.rows.iter().enumerate() {
            out.push_str(&l.to_string());
            for v in row {
                out.push_str(&format!(",{v}"));
            }
            out.push_str(&format!(",{}\n", row_sums[l]));
        }
        out.push_str("sum");
        for v in self.col_sums() {
            out.push_str(&format!(",{v}"));
        }
        out.push_str(&format!(",{}\n", self.total()));
        out
    }

    /// JSON with counts as decimal strings (they outgrow u64 quickly).
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect();
        serde_json::json!({
            "d": self.d,
            "n": self.n,
            "source": self.source.as_str(),
            "rows": rows,
            "row_sums": self.row_sums().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "col_sums": self.col_sums().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "total": self.total().to_string(),
        })
    }

    /// Cell-by-cell equality ignoring the source tag.
    pub fn same_counts(&self, other: &CountTable) -> bool {
        self.d == other.d && self.n == other.n && self.rows == other.rows
    }
}
