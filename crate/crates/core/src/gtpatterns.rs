//! Strict Gelfand-Tsetlin patterns with top row `(n-1, n-2, ..., 1, 0)` and
//! the statistics that drive the pattern-sum formula: the row excesses `k_i`,
//! the partial column sums `b_{i,j}`, and the boxed/circled/free
//! classification of entries.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("row {row} has {got} entries, expected {expected}")]
    BadShape {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("top row must be (n-1, n-2, ..., 1, 0)")]
    BadTopRow,
    #[error("row {0} is not strictly decreasing")]
    NotStrict(usize),
    #[error("entry a[{i}][{j}] violates the interleaving bounds")]
    NotInterleaved { i: usize, j: usize },
}

/// A strict Gelfand-Tsetlin pattern. Row `i` holds the entries `a_{i,j}` for
/// `j = i..n-1`; row 0 is the fixed top row.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GTPattern {
    rows: Vec<Vec<i64>>,
}

/// Classification of an entry against its two upper neighbours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntryClass {
    /// `a_{i,j} = a_{i-1,j-1}` (equal to the upper-left neighbour).
    Boxed,
    /// `a_{i,j} = a_{i-1,j}` (equal to the upper-right neighbour).
    Circled,
    /// Strictly between its neighbours.
    Free,
}

impl fmt::Display for EntryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryClass::Boxed => write!(f, "boxed"),
            EntryClass::Circled => write!(f, "circled"),
            EntryClass::Free => write!(f, "free"),
        }
    }
}

/// Statistics of one pattern: `k_i` for `i = 1..n-1`, and `b_{i,j}` plus the
/// entry class for every entry below the top row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternStats {
    pub k: Vec<i64>,
    pub b: BTreeMap<(usize, usize), i64>,
    pub cls: BTreeMap<(usize, usize), EntryClass>,
}

impl GTPattern {
    pub fn top_row(n: usize) -> Vec<i64> {
        (0..n).rev().map(|v| v as i64).collect()
    }

    /// Validate a row list as a strict pattern with the fixed top row.
    pub fn try_new(rows: Vec<Vec<i64>>) -> Result<Self, PatternError> {
        let n = rows.first().map(Vec::len).unwrap_or(0);
        if n < 2 {
            return Err(PatternError::RankTooSmall(n));
        }
        if rows.len() != n {
            return Err(PatternError::BadShape {
                row: rows.len(),
                got: rows.len(),
                expected: n,
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n - i {
                return Err(PatternError::BadShape {
                    row: i,
                    got: row.len(),
                    expected: n - i,
                });
            }
        }
        if rows[0] != Self::top_row(n) {
            return Err(PatternError::BadTopRow);
        }
        for (i, row) in rows.iter().enumerate() {
            for w in row.windows(2) {
                if w[0] <= w[1] {
                    return Err(PatternError::NotStrict(i));
                }
            }
        }
        let p = GTPattern { rows };
        for i in 1..n {
            for j in i..n {
                let a = p.entry(i, j);
                if a > p.entry(i - 1, j - 1) || a < p.entry(i - 1, j) {
                    return Err(PatternError::NotInterleaved { i, j });
                }
            }
        }
        Ok(p)
    }

    /// The pattern in which every row is a suffix of the top row.
    pub fn trivial(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n - i).rev().map(|v| v as i64).collect())
            .collect();
        GTPattern { rows }
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `a_{i,j}` with `j` running from `i` to `n-1`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j - i]
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::trivial(self.n())
    }

    /// `{"rows": [...], "stats": {"k": [...], "entries": [...]}}`
    pub fn to_json(&self) -> Value {
        let stats = statistics(self);
        let entries: Vec<Value> = stats
            .cls
            .iter()
            .map(|((i, j), cls)| {
                json!({
                    "i": i,
                    "j": j,
                    "class": cls.to_string(),
                    "b": stats.b[&(*i, *j)],
                })
            })
            .collect();
        json!({
            "rows": self.rows,
            "stats": { "k": stats.k, "entries": entries },
        })
    }
}

/// All strict patterns for the given rank, in lexicographic order of the
/// concatenated rows. The counts follow the alternating-sign-matrix sequence
/// 2, 7, 42, 429, 7436, ...
pub fn enumerate(n: usize) -> Result<Vec<GTPattern>, PatternError> {
    if n < 2 {
        return Err(PatternError::RankTooSmall(n));
    }
    let mut rows: Vec<Vec<i64>> = vec![GTPattern::top_row(n)];
    let mut out = Vec::new();
    fill_rows(n, &mut rows, &mut out);
    Ok(out)
}

fn fill_rows(n: usize, rows: &mut Vec<Vec<i64>>, out: &mut Vec<GTPattern>) {
    let i = rows.len();
    if i == n {
        out.push(GTPattern { rows: rows.clone() });
        return;
    }
    let mut row = Vec::with_capacity(n - i);
    fill_entries(n, rows, &mut row, out);
}

fn fill_entries(n: usize, rows: &mut Vec<Vec<i64>>, row: &mut Vec<i64>, out: &mut Vec<GTPattern>) {
    let i = rows.len();
    let j = i + row.len();
    if j == n {
        rows.push(row.clone());
        fill_rows(n, rows, out);
        rows.pop();
        return;
    }
    // a_{i-1,j} <= a_{i,j} <= a_{i-1,j-1}, strictly below the previous entry.
    let upper_right = rows[i - 1][j - (i - 1)];
    let upper_left = rows[i - 1][j - 1 - (i - 1)];
    let cap = match row.last() {
        Some(prev) => upper_left.min(prev - 1),
        None => upper_left,
    };
    for v in upper_right..=cap {
        row.push(v);
        fill_entries(n, rows, row, out);
        row.pop();
    }
}

/// Compute `k`, `b`, and the entry classes:
/// `k_i = sum_{j>=i} (a_{i,j} - a_{0,j})` and
/// `b_{i,j} = sum_{l>=j} (a_{i,l} - a_{i-1,l})`.
pub fn statistics(p: &GTPattern) -> PatternStats {
    let n = p.n();
    let mut k = Vec::with_capacity(n - 1);
    for i in 1..n {
        k.push((i..n).map(|j| p.entry(i, j) - p.entry(0, j)).sum());
    }
    let mut b = BTreeMap::new();
    let mut cls = BTreeMap::new();
    for i in 1..n {
        for j in i..n {
            let bij = (j..n).map(|l| p.entry(i, l) - p.entry(i - 1, l)).sum();
            b.insert((i, j), bij);
            let a = p.entry(i, j);
            let class = if a == p.entry(i - 1, j - 1) {
                EntryClass::Boxed
            } else if a == p.entry(i - 1, j) {
                EntryClass::Circled
            } else {
                EntryClass::Free
            };
            cls.insert((i, j), class);
        }
    }
    PatternStats { k, b, cls }
}

/// A pattern contributes to the degree-`r` sum iff `r` divides every `k_i`.
pub fn is_supported(s: &PatternStats, r: u32) -> bool {
    s.k.iter().all(|k| k.rem_euclid(i64::from(r)) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent validity predicate over a flat row-major entry buffer
    /// (rows 1..n-1, top row implicit).
    fn brute_valid(n: usize, entries: &[i64]) -> bool {
        let start = |i: usize| -> usize { (1..i).map(|t| n - t).sum() };
        let at = |i: usize, j: usize| -> i64 {
            if i == 0 {
                (n - 1 - j) as i64
            } else {
                entries[start(i) + (j - i)]
            }
        };
        for i in 1..n {
            for j in i..n {
                let a = at(i, j);
                if a > at(i - 1, j - 1) || a < at(i - 1, j) {
                    return false;
                }
                if j > i && at(i, j - 1) <= a {
                    return false;
                }
            }
        }
        true
    }

    /// Independent brute-force generator: scan every triangular integer
    /// array with entries in `0..n` and count the ones the predicate
    /// accepts.
    fn brute_force_count(n: usize) -> usize {
        let slots: usize = (1..n).map(|i| n - i).sum();
        let base = n as u64;
        let total = base.pow(slots as u32);
        let mut entries = vec![0i64; slots];
        let mut count = 0usize;
        for code in 0..total {
            let mut c = code;
            for e in entries.iter_mut() {
                *e = (c % base) as i64;
                c /= base;
            }
            if brute_valid(n, &entries) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn counts_follow_asm_numbers() {
        assert_eq!(enumerate(2).unwrap().len(), 2);
        assert_eq!(enumerate(3).unwrap().len(), 7);
        assert_eq!(enumerate(4).unwrap().len(), 42);
        assert_eq!(enumerate(5).unwrap().len(), 429);
        assert_eq!(enumerate(6).unwrap().len(), 7436);
    }

    #[test]
    fn counts_match_brute_force() {
        for n in 2..=5 {
            assert_eq!(enumerate(n).unwrap().len(), brute_force_count(n), "n={n}");
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_valid() {
        for n in 2..=5 {
            let pats = enumerate(n).unwrap();
            let keys: Vec<Vec<i64>> = pats
                .iter()
                .map(|p| p.rows().concat())
                .collect();
            let mut sorted = keys.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(keys, sorted, "n={n}");
            for p in &pats {
                assert!(GTPattern::try_new(p.rows().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn rank_below_two_rejected() {
        assert!(matches!(enumerate(1), Err(PatternError::RankTooSmall(1))));
        assert!(matches!(enumerate(0), Err(PatternError::RankTooSmall(0))));
    }

    #[test]
    fn worked_rank_four_statistics() {
        let p = GTPattern::try_new(vec![
            vec![3, 2, 1, 0],
            vec![3, 2, 1],
            vec![3, 1],
            vec![3],
        ])
        .unwrap();
        let s = statistics(&p);
        assert_eq!(s.k, vec![3, 3, 3]);
        assert_eq!(s.b[&(1, 1)], 3);
        assert_eq!(s.b[&(2, 2)], 1);
        assert_eq!(s.b[&(3, 3)], 2);
        // The general formula gives b_{1,i} = n - i.
        assert_eq!(s.b[&(1, 2)], 2);
        assert_eq!(s.b[&(1, 3)], 1);
        assert_eq!(s.cls[&(1, 1)], EntryClass::Boxed);
        assert_eq!(s.cls[&(2, 2)], EntryClass::Boxed);
        assert_eq!(s.cls[&(3, 3)], EntryClass::Boxed);
        assert_eq!(s.cls[&(1, 2)], EntryClass::Boxed);
        assert_eq!(s.cls[&(1, 3)], EntryClass::Boxed);
        assert_eq!(s.cls[&(2, 3)], EntryClass::Circled);
    }

    #[test]
    fn trivial_pattern_is_all_circled_with_zero_k() {
        for n in 2..=6 {
            let s = statistics(&GTPattern::trivial(n));
            assert!(s.k.iter().all(|&k| k == 0));
            assert!(s.cls.values().all(|&c| c == EntryClass::Circled));
            assert!(is_supported(&s, 1));
            assert!(is_supported(&s, 97));
        }
    }

    #[test]
    fn left_leaning_pattern_has_k_equal_n_minus_one() {
        for n in 3..=6 {
            let mut rows = vec![GTPattern::top_row(n)];
            for i in 1..n {
                let mut row = vec![n as i64 - 1];
                for j in i + 1..n {
                    row.push((n - (j - i) - i) as i64);
                }
                rows.push(row);
            }
            let p = GTPattern::try_new(rows).unwrap();
            let s = statistics(&p);
            assert!(s.k.iter().all(|&k| k == n as i64 - 1), "n={n}");
        }
    }

    #[test]
    fn support_is_divisibility() {
        let s = PatternStats {
            k: vec![3, 3, 3],
            b: BTreeMap::new(),
            cls: BTreeMap::new(),
        };
        assert!(is_supported(&s, 3));
        assert!(!is_supported(&s, 4));
        assert!(is_supported(&s, 1));
    }

    #[test]
    fn only_trivial_pattern_supported_for_large_r() {
        for n in 2..=6 {
            for r in [n as u32, n as u32 + 3] {
                let supported: Vec<_> = enumerate(n)
                    .unwrap()
                    .into_iter()
                    .filter(|p| is_supported(&statistics(p), r))
                    .collect();
                assert_eq!(supported.len(), 1, "n={n} r={r}");
                assert!(supported[0].is_trivial());
            }
        }
    }

    #[test]
    fn zero_b_forces_circled() {
        for n in 2..=5 {
            for p in enumerate(n).unwrap() {
                let s = statistics(&p);
                for ((i, j), b) in &s.b {
                    if *b == 0 {
                        assert_eq!(s.cls[&(*i, *j)], EntryClass::Circled);
                    }
                }
                // Boxed entries never occur in the trivial pattern.
                if p.is_trivial() {
                    assert!(s.cls.values().all(|&c| c != EntryClass::Boxed));
                }
            }
        }
    }

    #[test]
    fn json_dump_shape() {
        let p = GTPattern::trivial(3);
        let v = p.to_json();
        assert!(v["rows"].is_array());
        assert!(v["stats"]["k"].is_array());
        assert!(v["stats"]["entries"].is_array());
    }
}
