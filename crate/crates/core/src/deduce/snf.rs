//! Smith normal form for small integer matrices, with unimodular transforms
//! tracked on both sides.

// Index loops mirror the simultaneous row/column operations.
#![allow(clippy::needless_range_loop)]

/// `u * a * v = diag(d)` with `u`, `v` unimodular; `d` holds the diagonal
/// entries (no divisibility chain is needed by callers, but entries are
/// nonnegative with zeros trailing).
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: Vec<i64>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub rank: usize,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn smith_normal_form(a: &[Vec<i64>]) -> Snf {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let mut t = 0usize;
    while t < rows.min(cols) {
        // Find a nonzero pivot in the remaining block.
        let mut pivot = None;
        'search: for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }

        // Reduce the pivot row and column until everything off the pivot is 0.
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                while m[i][t] != 0 {
                    let k = m[i][t].div_euclid(m[t][t]);
                    if k != 0 {
                        for j in 0..cols {
                            m[i][j] -= k * m[t][j];
                        }
                        for j in 0..rows {
                            u[i][j] -= k * u[t][j];
                        }
                    }
                    if m[i][t] != 0 {
                        m.swap(t, i);
                        u.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                while m[t][j] != 0 {
                    let k = m[t][j].div_euclid(m[t][t]);
                    if k != 0 {
                        for i in 0..rows {
                            m[i][j] -= k * m[i][t];
                        }
                        for i in 0..cols {
                            v[i][j] -= k * v[i][t];
                        }
                    }
                    if m[t][j] != 0 {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                        for row in v.iter_mut() {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }

        if m[t][t] < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
        t += 1;
    }

    let mut d: Vec<i64> = (0..rows.min(cols)).map(|i| m[i][i]).collect();
    let rank = d.iter().filter(|&&x| x != 0).count();
    d.truncate(rank);
    Snf { d, u, v, rank }
}
