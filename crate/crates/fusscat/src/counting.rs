//! Exact closed-form counts in arbitrary-precision integer arithmetic.
//!
//! Every function here returns an exact [`Count`]; there is no floating
//! point anywhere. Rational prefactors that appear in the closed forms are
//! eliminated algebraically before any division, and each division asserts
//! a zero remainder.
//!
//! The headline formulas, for rooted `d`-tuplet trees with `n` tuplets:
//!
//! * `fuss_catalan(d, n) = binom((d+1)n, n) / (dn+1)` counts the trees;
//! * `count_atleast(d, n, k, l) = d^l * binom((d+1)n - k, dn + l)` counts
//!   vertices of outdegree `>= k` at level `>= l` over all trees;
//! * `count_exact` refines that to outdegree exactly `k` at level exactly
//!   `l` via inclusion-exclusion;
//! * `count_refined` adds elder/younger sibling constraints.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Exact nonnegative integer count.
pub type Count = BigUint;

/// Binomial coefficient `C(a, b)` with the convention that out-of-range `b`
/// (negative or exceeding `a`) yields 0.
pub fn binomial(a: u64, b: i64) -> Count {
    if b < 0 || b as u64 > a {
        return Count::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut res = Count::one();
    for i in 0..b {
        res = res * Count::from(a - i) / Count::from(i + 1);
    }
    res
}

/// Binomial over a possibly-negative top argument: zero whenever `a < 0`.
/// The closed forms below can push their top argument negative for large
/// sibling/child constraints, where the true count is 0.
pub(crate) fn binom_i(a: i64, b: i64) -> Count {
    if a < 0 {
        return Count::zero();
    }
    binomial(a as u64, b)
}

fn pow_d(d: u64, l: u64) -> Count {
    Count::from(d).pow(l as u32)
}

/// The `n`th `d`-Fuss-Catalan number `binom((d+1)n, n) / (dn + 1)`.
///
/// Counts the rooted `d`-tuplet trees with `n` tuplets, as well as the
/// `d`-Fuss-Catalan paths of length `(d+1)n`.
pub fn fuss_catalan(d: u64, n: u64) -> Count {
    assert!(d >= 1, "tuplet arity d must be >= 1");
    let top = binomial((d + 1) * n, n as i64);
    let div = Count::from(d * n + 1);
    let (q, r) = div_rem(&top, &div);
    assert!(r.is_zero(), "(dn+1) divides binom((d+1)n, n)");
    q
}

fn div_rem(a: &Count, b: &Count) -> (Count, Count) {
    (a / b, a % b)
}

/// Total number of vertices over all trees of `T_n^(d)`:
/// `(dn + 1) * fuss_catalan(d, n)`, which must equal `binom((d+1)n, n)`.
/// Both routes are computed and compared.
pub fn total_vertices(d: u64, n: u64) -> Result<Count> {
    let via_catalan = Count::from(d * n + 1) * fuss_catalan(d, n);
    let direct = binomial((d + 1) * n, n as i64);
    if via_catalan != direct {
        return Err(Error::Arithmetic(format!(
            "(dn+1)*Cat != binom((d+1)n, n) at d={d}, n={n}"
        )));
    }
    Ok(direct)
}

/// Number of vertices of outdegree `>= k` at level `>= l` over all trees
/// with `n` tuplets: `d^l * binom((d+1)n - k, dn + l)`.
pub fn count_atleast(d: u64, n: u64, k: u64, l: u64) -> Count {
    assert!(d >= 1, "tuplet arity d must be >= 1");
    pow_d(d, l) * binom_i(((d + 1) * n) as i64 - k as i64, (d * n + l) as i64)
}

/// The `d = 1` specialisation: vertices of outdegree `>= k` at level `>= l`
/// over all rooted ordered trees with `n` edges, `binom(2n - k, n + l)`.
pub fn count_atleast_d1(n: u64, k: u64, l: u64) -> Count {
    binom_i(2 * n as i64 - k as i64, (n + l) as i64)
}

/// Marked vertices with at least `i` elder siblings, `j` younger siblings
/// and `k` children at level `>= l`, when `i`, `j`, `k` are all multiples of
/// `d`: `d^l * binom((d+1)n - a, dn + l)` with `a = (i + j + k)/d`.
pub fn count_refined_aligned(d: u64, n: u64, i: u64, j: u64, k: u64, l: u64) -> Result<Count> {
    assert!(d >= 1, "tuplet arity d must be >= 1");
    if l < 1 {
        return Err(Error::Domain(
            "the sibling-constrained count requires level >= 1".into(),
        ));
    }
    if !i.is_multiple_of(d) || !j.is_multiple_of(d) || !k.is_multiple_of(d) {
        return Err(Error::Domain(format!(
            "i, j, k must all be multiples of d={d} (got i={i}, j={j}, k={k})"
        )));
    }
    let alpha = (i + j + k) / d;
    Ok(pow_d(d, l) * binom_i(((d + 1) * n) as i64 - alpha as i64, (d * n + l) as i64))
}

/// Marked vertices with at least `i` elder siblings, `j` younger siblings
/// and `k` children (any `i`, `j`; `k` a multiple of `d`) at level `>= l`.
///
/// Writing `i + j + k = a*d + b` with `0 <= b < d`, the count is
/// `d^l * (1 - (b/d) * (dn+l)/((d+1)n - a)) * binom((d+1)n - a, dn + l)`.
/// It is evaluated through the equivalent integer-only form
/// `d^(l-1) * ((d - b) * binom(M, r) + b * binom(M - 1, r))` with
/// `M = (d+1)n - a` and `r = dn + l`, and the two routes are asserted equal.
pub fn count_refined(d: u64, n: u64, i: u64, j: u64, k: u64, l: u64) -> Result<Count> {
    assert!(d >= 1, "tuplet arity d must be >= 1");
    if l < 1 {
        return Err(Error::Domain(
            "the sibling-constrained count requires level >= 1".into(),
        ));
    }
    if !k.is_multiple_of(d) {
        return Err(Error::Domain(format!(
            "k must be a multiple of d={d} (got k={k})"
        )));
    }
    let s = i + j + k;
    let alpha = s / d;
    let beta = s % d;
    let m = ((d + 1) * n) as i64 - alpha as i64;
    let r = (d * n + l) as i64;
    let b0 = binom_i(m, r);
    let b1 = binom_i(m - 1, r);
    let value = pow_d(d, l - 1) * (Count::from(d - beta) * &b0 + Count::from(beta) * &b1);

    // Cross-check against the rational form, cleared of denominators:
    // d*M*value + d^l*b*r*B0 == d^l*d*M*B0.
    if m > 0 {
        let dm = Count::from(d) * Count::from(m as u64);
        let lhs = &dm * &value + pow_d(d, l) * Count::from(beta) * Count::from(r as u64) * &b0;
        let rhs = pow_d(d, l) * &dm * &b0;
        if lhs != rhs {
            return Err(Error::Arithmetic(format!(
                "telescoped and rational routes disagree at d={d}, n={n}, i={i}, j={j}, k={k}, l={l}"
            )));
        }
    }
    Ok(value)
}

/// Number of vertices of outdegree exactly `k` at level exactly `l`:
/// `d^l * (dk + (d+1)l) / ((d+1)n - k) * binom((d+1)n - k, dn + l)`.
///
/// The division is exact and asserted; the result is also cross-checked
/// against the four-term inclusion-exclusion over [`count_atleast`].
pub fn count_exact(d: u64, n: u64, k: u64, l: u64) -> Result<Count> {
    assert!(d >= 1, "tuplet arity d must be >= 1");
    let m = ((d + 1) * n) as i64 - k as i64;
    if m == 0 {
        return Err(Error::Domain(format!(
            "outdegree k={k} equals (d+1)n; the closed form divides by zero"
        )));
    }
    if m < 0 {
        return Ok(Count::zero());
    }
    let r = (d * n + l) as i64;
    let numerator = pow_d(d, l) * Count::from(d * k + (d + 1) * l) * binom_i(m, r);
    let divisor = Count::from(m as u64);
    let (value, rem) = div_rem(&numerator, &divisor);
    if !rem.is_zero() {
        return Err(Error::Arithmetic(format!(
            "((d+1)n - k) does not divide the sieve numerator at d={d}, n={n}, k={k}, l={l}"
        )));
    }

    // Sieve route: d^l B(M,r) - d^l B(M-1,r) - d^(l+1) B(M,r+1) + d^(l+1) B(M-1,r+1).
    let pos = pow_d(d, l) * binom_i(m, r) + pow_d(d, l + 1) * binom_i(m - 1, r + 1);
    let neg = pow_d(d, l) * binom_i(m - 1, r) + pow_d(d, l + 1) * binom_i(m, r + 1);
    if pos != &neg + &value {
        return Err(Error::Arithmetic(format!(
            "closed form and sieve disagree at d={d}, n={n}, k={k}, l={l}"
        )));
    }
    Ok(value)
}

/// The `d = 1` specialisation of [`count_refined`]:
/// `binom(2n - i - j - k, n + l)`.
pub fn count_refined_d1(n: u64, i: u64, j: u64, k: u64, l: u64) -> Result<Count> {
    if l < 1 {
        return Err(Error::Domain(
            "the sibling-constrained count requires level >= 1".into(),
        ));
    }
    Ok(binom_i(2 * n as i64 - (i + j + k) as i64, (n + l) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: u64) -> Count {
        Count::from(v)
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(12, 3), c(220));
        assert_eq!(binomial(11, 11), c(1));
        assert_eq!(binomial(8, 9), c(0));
        assert_eq!(binomial(8, -1), c(0));
        assert_eq!(binomial(0, 0), c(1));
    }

    #[test]
    fn fuss_catalan_values() {
        assert_eq!(fuss_catalan(3, 3), c(22));
        assert_eq!(fuss_catalan(1, 0), c(1));
        assert_eq!(fuss_catalan(4, 0), c(1));
        assert_eq!(fuss_catalan(2, 6), c(1428));
        assert_eq!(fuss_catalan(1, 5), c(42));
    }

    #[test]
    fn fuss_catalan_matches_published_sequences() {
        // d = 1..=4 specialise to the classical sequences of Catalan type.
        let expected: [&[u64]; 4] = [
            &[1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862],
            &[1, 1, 3, 12, 55, 273, 1428, 7752, 43263, 246675],
            &[1, 1, 4, 22, 140, 969, 7084, 53820, 420732, 3362260],
            &[1, 1, 5, 35, 285, 2530, 23751, 231880, 2330445, 23950355],
        ];
        for (d, seq) in expected.iter().enumerate() {
            for (n, &want) in seq.iter().enumerate() {
                assert_eq!(
                    fuss_catalan((d + 1) as u64, n as u64),
                    c(want),
                    "d={} n={n}",
                    d + 1
                );
            }
        }
    }

    #[test]
    fn total_vertices_values() {
        assert_eq!(total_vertices(3, 3).unwrap(), c(220));
        assert_eq!(total_vertices(1, 1).unwrap(), c(2));
        assert_eq!(total_vertices(2, 2).unwrap(), c(15));
    }

    #[test]
    fn total_vertices_identity_range() {
        for d in 1..=5 {
            for n in 0..=20 {
                total_vertices(d, n).unwrap();
            }
        }
    }

    #[test]
    fn count_atleast_values() {
        assert_eq!(count_atleast(3, 3, 1, 2), c(9));
        assert_eq!(count_atleast(3, 3, 0, 0), c(220));
        assert_eq!(count_atleast(3, 3, 4, 0), c(0));
    }

    #[test]
    fn count_atleast_monotone_in_k_and_l() {
        for d in 1..=3u64 {
            for n in 1..=5 {
                for k in 0..=n {
                    for l in 0..=n {
                        let here = count_atleast(d, n, k, l);
                        assert!(count_atleast(d, n, k + 1, l) <= here);
                        assert!(count_atleast(d, n, k, l + 1) <= here);
                    }
                }
            }
        }
    }

    #[test]
    fn count_atleast_d1_values() {
        assert_eq!(count_atleast_d1(2, 0, 1), c(4));
        assert_eq!(count_atleast_d1(3, 2, 1), c(1));
        for n in 1..=8u64 {
            assert_eq!(count_atleast_d1(n, 0, 0), binomial(2 * n, n as i64));
        }
    }

    #[test]
    fn count_refined_aligned_values() {
        assert_eq!(count_refined_aligned(3, 3, 0, 0, 3, 1).unwrap(), c(33));
        assert_eq!(count_refined_aligned(2, 2, 2, 0, 0, 1).unwrap(), c(2));
        for d in 1..=3u64 {
            for n in 1..=4 {
                assert_eq!(
                    count_refined_aligned(d, n, 0, 0, 0, 1).unwrap(),
                    Count::from(d) * binomial((d + 1) * n, (d * n + 1) as i64)
                );
            }
        }
        assert!(count_refined_aligned(3, 3, 1, 0, 0, 1).is_err());
        assert!(count_refined_aligned(3, 3, 0, 0, 3, 0).is_err());
    }

    #[test]
    fn count_refined_values() {
        assert_eq!(count_refined(2, 2, 1, 0, 0, 1).unwrap(), c(7));
        assert_eq!(count_refined(3, 3, 0, 0, 0, 2).unwrap(), c(108));
        assert_eq!(count_refined(1, 2, 0, 1, 0, 1).unwrap(), c(1));
        assert!(count_refined(2, 2, 0, 0, 1, 1).is_err());
        assert!(count_refined(2, 2, 0, 0, 0, 0).is_err());
    }

    #[test]
    fn count_refined_reduces_to_aligned_on_multiples() {
        for d in 1..=3u64 {
            for n in 1..=4 {
                for l in 1..=n {
                    for a in 0..=2u64 {
                        let (i, j, k) = (a * d, d, 0);
                        assert_eq!(
                            count_refined(d, n, i, j, k, l).unwrap(),
                            count_refined_aligned(d, n, i, j, k, l).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn count_exact_values() {
        assert_eq!(count_exact(3, 3, 0, 1).unwrap(), c(66));
        assert_eq!(count_exact(3, 3, 3, 0).unwrap(), c(1));
        assert_eq!(count_exact(3, 3, 0, 3).unwrap(), c(27));
        assert!(count_exact(1, 1, 2, 0).is_err()); // k = (d+1)n
    }

    #[test]
    fn count_exact_sums_to_total() {
        for d in 1..=3u64 {
            for n in 1..=8 {
                let mut sum = Count::zero();
                for k in 0..=n {
                    for l in 0..=n {
                        sum += count_exact(d, n, k, l).unwrap();
                    }
                }
                assert_eq!(sum, total_vertices(d, n).unwrap(), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn count_refined_d1_values() {
        assert_eq!(count_refined_d1(2, 0, 1, 0, 1).unwrap(), c(1));
        assert_eq!(count_refined_d1(3, 1, 1, 1, 1).unwrap(), c(0));
        for n in 1..=6u64 {
            for l in 1..=n {
                assert_eq!(
                    count_refined_d1(n, 0, 0, 0, l).unwrap(),
                    binomial(2 * n, (n + l) as i64)
                );
            }
        }
    }

    #[test]
    fn d1_reductions_agree() {
        for n in 1..=8u64 {
            for k in 0..=n {
                for l in 0..=n {
                    assert_eq!(count_atleast(1, n, k, l), count_atleast_d1(n, k, l));
                }
                for l in 1..=n {
                    for i in 0..=2 {
                        for j in 0..=2 {
                            assert_eq!(
                                count_refined(1, n, i, j, k, l).unwrap(),
                                count_refined_d1(n, i, j, k, l).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }
}
