//! Lattice paths with up-steps `(1, d)` and down-steps `(1, -1)`.
//!
//! Three families show up throughout the crate:
//!
//! * *Fuss-Catalan paths*: start and end at height 0, never dip below the
//!   x-axis;
//! * *reverse Fuss-Catalan paths*: start and end at height 0, never rise
//!   above the x-axis;
//! * *free paths*: a fixed number of up- and down-steps with no height
//!   constraint.

use std::fmt;

use crate::{Error, Result};

/// One lattice step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// `(1, d)`
    Up,
    /// `(1, -1)`
    Down,
}

impl Step {
    pub fn to_char(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Down => 'D',
        }
    }

    pub fn from_char(c: char) -> Result<Step> {
        match c {
            'U' => Ok(Step::Up),
            'D' => Ok(Step::Down),
            other => Err(Error::Parse(format!("unknown step character `{other}`"))),
        }
    }
}

/// A lattice path over `{U, D}` with a fixed start height.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePath {
    d: usize,
    start: i64,
    steps: Vec<Step>,
}

impl LatticePath {
    pub fn new(d: usize, start: i64, steps: Vec<Step>) -> Self {
        LatticePath { d, start, steps }
    }

    /// The empty path at height 0.
    pub fn empty(d: usize) -> Self {
        LatticePath {
            d,
            start: 0,
            steps: Vec::new(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn start_height(&self) -> i64 {
        self.start
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn ups(&self) -> usize {
        self.steps.iter().filter(|s| **s == Step::Up).count()
    }

    pub fn downs(&self) -> usize {
        self.steps.iter().filter(|s| **s == Step::Down).count()
    }

    fn delta(&self, s: Step) -> i64 {
        match s {
            Step::Up => self.d as i64,
            Step::Down => -1,
        }
    }

    /// Heights after each step (the start height is not included).
    pub fn heights(&self) -> impl Iterator<Item = i64> + '_ {
        self.steps.iter().scan(self.start, |h, s| {
            *h += self.delta(*s);
            Some(*h)
        })
    }

    pub fn end_height(&self) -> i64 {
        self.start + (self.d * self.ups()) as i64 - self.downs() as i64
    }

    /// Start at 0, end at 0, all prefix heights weakly above the x-axis.
    pub fn is_fuss_catalan(&self) -> bool {
        self.start == 0 && self.heights().all(|h| h >= 0) && self.end_height() == 0
    }

    /// Start at 0, end at 0, all prefix heights weakly below the x-axis.
    pub fn is_reverse_fuss_catalan(&self) -> bool {
        self.start == 0 && self.heights().all(|h| h <= 0) && self.end_height() == 0
    }

    /// Exactly `n - k - l` up-steps and `d*n + l` down-steps, starting at
    /// height `d*k`; no height constraint.
    pub fn is_free(&self, n: usize, k: usize, l: usize) -> bool {
        k + l <= n
            && self.start == (self.d * k) as i64
            && self.ups() == n - k - l
            && self.downs() == self.d * n + l
    }

    /// Left rotation by `m % len` steps; the start height is kept.
    pub fn rotate_left(&self, m: usize) -> LatticePath {
        if self.steps.is_empty() {
            return self.clone();
        }
        let m = m % self.steps.len();
        let mut steps = Vec::with_capacity(self.steps.len());
        steps.extend_from_slice(&self.steps[m..]);
        steps.extend_from_slice(&self.steps[..m]);
        LatticePath {
            d: self.d,
            start: self.start,
            steps,
        }
    }

    /// Step word reversed, start height kept.
    pub(crate) fn reversed(&self) -> LatticePath {
        let steps = self.steps.iter().rev().copied().collect();
        LatticePath {
            d: self.d,
            start: self.start,
            steps,
        }
    }

    /// Canonical text form: `d=<d>;start=<h>;<steps>`, e.g. `d=2;start=0;UDD`.
    pub fn to_text(&self) -> String {
        let word: String = self.steps.iter().map(|s| s.to_char()).collect();
        format!("d={};start={};{}", self.d, self.start, word)
    }

    /// Parse the canonical text form.
    pub fn parse(text: &str) -> Result<LatticePath> {
        let rest = text
            .trim()
            .strip_prefix("d=")
            .ok_or_else(|| Error::Parse("path text must start with `d=<d>;`".into()))?;
        let (d_str, rest) = rest
            .split_once(';')
            .ok_or_else(|| Error::Parse("path text must start with `d=<d>;`".into()))?;
        let d: usize = d_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad arity `{d_str}` in path text")))?;
        if d == 0 {
            return Err(Error::Parse("path arity d must be >= 1".into()));
        }
        let rest = rest
            .strip_prefix("start=")
            .ok_or_else(|| Error::Parse("path text needs a `start=<h>;` field".into()))?;
        let (h_str, word) = rest
            .split_once(';')
            .ok_or_else(|| Error::Parse("path text needs a `start=<h>;` field".into()))?;
        let start: i64 = h_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad start height `{h_str}` in path text")))?;
        let steps = word
            .chars()
            .map(Step::from_char)
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticePath { d, start, steps })
    }

    /// The bare step word, e.g. `UDD`.
    pub fn step_word(&self) -> String {
        self.steps.iter().map(|s| s.to_char()).collect()
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Build a path from a step word like "UDD".
#[cfg(test)]
pub(crate) fn path_from_word(d: usize, start: i64, word: &str) -> LatticePath {
    let steps = word
        .chars()
        .map(|c| Step::from_char(c).expect("step word uses only U and D"))
        .collect();
    LatticePath::new(d, start, steps)
}
