//! Exact enumeration of rooted `d`-tuplet trees and `d`-Fuss-Catalan
//! lattice paths.
//!
//! A *`d`-tuplet tree* is a rooted plane tree built from tuplets, each
//! attaching one parent vertex to `d` ordered children; the trees with `n`
//! tuplets are counted by the Fuss-Catalan number
//! `binom((d+1)n, n) / (dn + 1)`, as are the lattice paths of `n` up-steps
//! `(1, d)` and `dn` down-steps `(1, -1)` that stay weakly above the axis.
//! At `d = 1` both specialise to ordered trees, Dyck paths and the Catalan
//! numbers.
//!
//! The crate provides, at desk scale and with exact integer arithmetic
//! throughout:
//!
//! * domain types for trees, vertex addresses and lattice paths, with
//!   canonical text encodings ([`tree`], [`path`]);
//! * exhaustive, duplicate-free generators for all tree and path families
//!   ([`generate`]);
//! * closed-form counts of vertices by outdegree, level and sibling
//!   constraints ([`counting`]);
//! * the constructive bijections relating marked trees to digit sequences
//!   and free lattice paths ([`bijections`]);
//! * a brute-force oracle and verification sweeps that prove the formulas
//!   and bijections against each other on every small instance ([`oracle`],
//!   [`verify`]);
//! * a `fusscat` command-line tool wrapping all of the above.
//!
//! ```
//! use fusscat::counting::fuss_catalan;
//! use fusscat::generate::gen_trees;
//!
//! // 22 rooted 3-tuplet trees with 3 tuplets, enumerated and counted.
//! assert_eq!(fuss_catalan(3, 3), 22u64.into());
//! assert_eq!(gen_trees(3, 3).unwrap().count(), 22);
//! ```

pub mod bijections;
pub mod counting;
pub mod generate;
pub mod oracle;
pub mod path;
pub mod table;
pub mod tree;
pub mod verify;

pub use counting::Count;
pub use path::{LatticePath, Step};
pub use tree::{TupletTree, VertexAddr, VertexStats};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid vertex address {addr}: {reason}")]
    InvalidAddress { addr: String, reason: String },
    #[error("subtree exchange requires disjoint subtrees: {0} and {1} are nested")]
    AncestorOverlap(String, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("instance too large: {0} (cap {1})")]
    InstanceTooLarge(String, u64),
    #[error("arithmetic identity violated: {0}")]
    Arithmetic(String),
}

pub type Result<T> = std::result::Result<T, Error>;

// The guide chapters under book/ double as doc-tests, so every code block
// in the book is compiled and run by `cargo test --doc`.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }
    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(trees, "../../../book/src/trees.md");
    chapter!(paths, "../../../book/src/paths.md");
    chapter!(counting, "../../../book/src/counting.md");
    chapter!(bijections, "../../../book/src/bijections.md");
    chapter!(verification, "../../../book/src/verification.md");
    chapter!(cli, "../../../book/src/cli.md");
}
