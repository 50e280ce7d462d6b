//! Spherical Whittaker values for degree-`r` covers of the general linear
//! group at the identity, assembled as a weighted sum over strict
//! Gelfand-Tsetlin patterns.
//!
//! Each entry below the top row contributes a factor determined by its class
//! and its `b` statistic; a pattern contributes only when `r` divides every
//! `k_i`, in which case its term carries the character monomial
//! `prod_i (x_i / x_{i+1})^(k_i)`.

use num_rational::Ratio;
use thiserror::Error;

use crate::gtpatterns::{self, EntryClass, GTPattern};
use crate::qring::{Monomial, Polynomial, Rat};

/// Ranks above this enumerate too many patterns to be useful interactively.
pub const DEFAULT_MAX_RANK: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlError {
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("rank {0} exceeds the enumeration bound {1}")]
    RankTooLarge(usize, usize),
    #[error("cover degree must be at least 1")]
    DegreeTooSmall,
    #[error("pattern is not supported at degree {r}: k = {k:?}")]
    Unsupported { r: u32, k: Vec<i64> },
}

/// Weight of a single entry: circled entries contribute 1; boxed entries
/// contribute `-q^-1` when `r | b` and `q^(-1/2) g(r, b mod r)` otherwise;
/// free entries contribute `1 - q^-1` when `r | b` and kill the pattern
/// otherwise.
pub fn entry_weight(nvars: usize, cls: EntryClass, b: i64, r: u32) -> Polynomial {
    let rr = i64::from(r);
    let divides = b.rem_euclid(rr) == 0;
    match (cls, divides) {
        (EntryClass::Circled, _) => Polynomial::one(nvars),
        (EntryClass::Boxed, true) => {
            Polynomial::from_monomial(-1, Monomial::q_power(nvars, Rat::new(-1, 1)))
        }
        (EntryClass::Boxed, false) => {
            let m = Monomial::new(Rat::new(-1, 2), vec![0; nvars], [(r, b, 1)])
                .expect("b mod r is nonzero here");
            Polynomial::from_monomial(1, m)
        }
        (EntryClass::Free, true) => Polynomial::one(nvars)
            .try_sub(&Polynomial::from_monomial(
                1,
                Monomial::q_power(nvars, Rat::new(-1, 1)),
            ))
            .expect("same variable count"),
        (EntryClass::Free, false) => Polynomial::zero(nvars),
    }
}

/// The contribution of one supported pattern: the product of its entry
/// weights times `prod_i (x_i/x_{i+1})^(k_i)`.
pub fn pattern_term(p: &GTPattern, r: u32) -> Result<Polynomial, GlError> {
    if r < 1 {
        return Err(GlError::DegreeTooSmall);
    }
    let n = p.n();
    let stats = gtpatterns::statistics(p);
    if !gtpatterns::is_supported(&stats, r) {
        return Err(GlError::Unsupported { r, k: stats.k });
    }
    let mut x = vec![0i64; n];
    for (i, k) in stats.k.iter().enumerate() {
        x[i] += k;
        x[i + 1] -= k;
    }
    let mut term = Polynomial::from_monomial(
        1,
        Monomial::new(Ratio::from_integer(0), x, []).expect("valid monomial"),
    );
    for ((i, j), cls) in &stats.cls {
        let w = entry_weight(n, *cls, stats.b[&(*i, *j)], r);
        term = term.try_mul(&w).expect("same variable count");
        if term.is_zero() {
            break;
        }
    }
    Ok(term)
}

/// Full report of one pattern-sum evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlReport {
    pub n: usize,
    pub r: u32,
    pub polynomial: Polynomial,
    /// Number of strict patterns with the fixed top row.
    pub pattern_count: usize,
    /// Patterns with every `k_i` divisible by `r`.
    pub supported_count: usize,
    /// Supported patterns whose term is nonzero.
    pub nonzero_count: usize,
    /// The closed forms are pinned down for `r >= n-1`; smaller degrees are
    /// exposed for exploration only.
    pub verified_scope: bool,
}

pub fn whittaker_gl_report(n: usize, r: u32, max_rank: usize) -> Result<GlReport, GlError> {
    if n < 2 {
        return Err(GlError::RankTooSmall(n));
    }
    if n > max_rank {
        return Err(GlError::RankTooLarge(n, max_rank));
    }
    if r < 1 {
        return Err(GlError::DegreeTooSmall);
    }
    let patterns = gtpatterns::enumerate(n).expect("rank checked above");
    let pattern_count = patterns.len();
    let mut supported_count = 0usize;
    let mut nonzero_count = 0usize;
    let mut sum = Polynomial::zero(n);
    for p in &patterns {
        if !gtpatterns::is_supported(&gtpatterns::statistics(p), r) {
            continue;
        }
        supported_count += 1;
        let term = pattern_term(p, r).expect("support checked above");
        if !term.is_zero() {
            nonzero_count += 1;
        }
        sum = sum.try_add(&term).expect("same variable count");
    }
    Ok(GlReport {
        n,
        r,
        polynomial: sum,
        pattern_count,
        supported_count,
        nonzero_count,
        verified_scope: i64::from(r) >= n as i64 - 1,
    })
}

/// The Whittaker value at the identity for the degree-`r` cover of GL(n).
pub fn whittaker_gl(n: usize, r: u32) -> Result<Polynomial, GlError> {
    Ok(whittaker_gl_report(n, r, DEFAULT_MAX_RANK)?.polynomial)
}

/// Independent reference for the degree-1 (linear) case: the fully expanded
/// product `prod_{i<j} (1 - q^-1 x_i/x_j)`.
pub fn tokuyama_reference(n: usize) -> Result<Polynomial, GlError> {
    if n < 2 {
        return Err(GlError::RankTooSmall(n));
    }
    let mut out = Polynomial::one(n);
    for i in 0..n {
        for j in i + 1..n {
            let mut x = vec![0i64; n];
            x[i] = 1;
            x[j] = -1;
            let m = Monomial::new(Rat::new(-1, 1), x, []).expect("valid monomial");
            let factor = Polynomial::one(n)
                .try_sub(&Polynomial::from_monomial(1, m))
                .expect("same variable count");
            out = out.try_mul(&factor).expect("same variable count");
        }
    }
    Ok(out)
}

/// The closed form `1 - q^(-(n-1)) (x_1/x_n)^(n-1)` that the sum collapses
/// to at `r = n-1`.
pub fn subregular_closed_form(n: usize) -> Polynomial {
    let e = n as i64 - 1;
    let mut x = vec![0i64; n];
    x[0] = e;
    x[n - 1] = -e;
    Polynomial::one(n)
        .try_sub(&Polynomial::from_monomial(
            1,
            Monomial::new(Rat::new(-e, 1), x, []).expect("valid monomial"),
        ))
        .expect("same variable count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gtpatterns::GTPattern;

    #[test]
    fn entry_weight_table() {
        // Boxed with r | b.
        assert_eq!(
            entry_weight(4, EntryClass::Boxed, 3, 3).to_string(),
            "-q^-1"
        );
        // Boxed with r not dividing b keeps a Gauss symbol.
        assert_eq!(
            entry_weight(4, EntryClass::Boxed, 1, 3).to_string(),
            "q^(-1/2)*g(3,1)"
        );
        // Circled entries contribute one.
        assert!(entry_weight(4, EntryClass::Circled, 2, 3).is_one());
        assert!(entry_weight(4, EntryClass::Circled, 0, 7).is_one());
        // Free entries with r | b.
        assert_eq!(
            entry_weight(3, EntryClass::Free, 3, 3).to_string(),
            "1 - q^-1"
        );
        // Free entries with r not dividing b kill the pattern.
        assert!(entry_weight(3, EntryClass::Free, 1, 3).is_zero());
    }

    #[test]
    fn worked_pattern_term() {
        let p = GTPattern::try_new(vec![
            vec![3, 2, 1, 0],
            vec![3, 2, 1],
            vec![3, 1],
            vec![3],
        ])
        .unwrap();
        let t = pattern_term(&p, 3).unwrap();
        assert_eq!(t.to_string(), "-q^-3*x1^3*x4^-3");
    }

    #[test]
    fn trivial_pattern_contributes_one() {
        for n in 2..=5 {
            for r in [1, 2, 5] {
                assert!(pattern_term(&GTPattern::trivial(n), r).unwrap().is_one());
            }
        }
    }

    #[test]
    fn rank_two_degree_one_nontrivial_pattern() {
        let p = GTPattern::try_new(vec![vec![1, 0], vec![1]]).unwrap();
        let t = pattern_term(&p, 1).unwrap();
        assert_eq!(t.to_string(), "-q^-1*x1*x2^-1");
    }

    #[test]
    fn unsupported_pattern_is_an_error() {
        let p = GTPattern::try_new(vec![
            vec![3, 2, 1, 0],
            vec![3, 2, 1],
            vec![3, 1],
            vec![3],
        ])
        .unwrap();
        assert!(matches!(
            pattern_term(&p, 4),
            Err(GlError::Unsupported { .. })
        ));
    }

    #[test]
    fn stable_range_gives_one() {
        for n in 2..=5 {
            for r in [n as u32, n as u32 + 1, n as u32 + 3] {
                let report = whittaker_gl_report(n, r, DEFAULT_MAX_RANK).unwrap();
                assert!(report.polynomial.is_one(), "n={n} r={r}");
                assert_eq!(report.supported_count, 1);
            }
        }
    }

    #[test]
    fn subregular_degree_collapses_gauss_symbols() {
        for n in 3..=5 {
            let w = whittaker_gl(n, n as u32 - 1).unwrap();
            assert_eq!(w, subregular_closed_form(n), "n={n}");
            assert!(!w.has_gauss());
        }
    }

    #[test]
    fn degree_one_matches_reference_expansion() {
        // The seven-term rank-3 expansion, written out term by term:
        // 1 - q^-1 x1/x2 - q^-1 x2/x3 - q^-1(1-q^-1) x1/x3
        //   + q^-2 x1^2/(x2 x3) + q^-2 x1 x2/x3^2 - q^-3 x1^2/x3^2
        let raw = [
            (1, 0, [0, 0, 0]),
            (-1, -1, [1, -1, 0]),
            (-1, -1, [0, 1, -1]),
            (-1, -1, [1, 0, -1]),
            (1, -2, [1, 0, -1]),
            (1, -2, [2, -1, -1]),
            (1, -2, [1, 1, -2]),
            (-1, -3, [2, 0, -2]),
        ];
        let expect3 = Polynomial::normalize(
            3,
            raw.iter().map(|(c, q, x)| {
                (
                    *c,
                    Monomial::new(Rat::new(*q, 1), x.to_vec(), []).unwrap(),
                )
            }),
        );
        assert_eq!(tokuyama_reference(3).unwrap(), expect3);
        assert_eq!(whittaker_gl(3, 1).unwrap(), expect3);
        for n in 2..=4 {
            assert_eq!(
                whittaker_gl(n, 1).unwrap(),
                tokuyama_reference(n).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn rank_guard() {
        assert!(matches!(
            whittaker_gl_report(8, 3, DEFAULT_MAX_RANK),
            Err(GlError::RankTooLarge(8, 7))
        ));
        assert!(matches!(whittaker_gl(1, 1), Err(GlError::RankTooSmall(1))));
    }

    #[test]
    fn exploration_scope_marker() {
        let report = whittaker_gl_report(4, 2, DEFAULT_MAX_RANK).unwrap();
        assert!(!report.verified_scope);
        let report = whittaker_gl_report(4, 3, DEFAULT_MAX_RANK).unwrap();
        assert!(report.verified_scope);
    }
}
