//! Complete case analysis of how a polynomial factor can vanish at a
//! character point `x_i = zeta_i * q^(e_i)` with `q` transcendental.
//!
//! Terms are first split by their Gauss monomial; distinct canonical Gauss
//! monomials are treated as linearly independent, so every sector must
//! vanish. Within a sector, a vanishing point groups the terms by their
//! total q-exponent, and each group must be a vanishing sum of roots of
//! unity. Enumerating set partitions into groups of size at least two,
//! with the root-of-unity tuples bounded by the classical order bound for
//! minimal vanishing sums (the product of the primes up to the group size),
//! covers every solution: non-minimal groups split into finer partitions.

use std::collections::{BTreeMap, BTreeSet};

use crate::deduce::state::MonomialEquation;
use crate::qring::{Cyclotomic, Polynomial, Rat, Torsion};

/// Outcome of analysing one factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorCases {
    /// The factor is identically zero; any constraint containing it holds.
    AlwaysZero,
    /// The vanishing locus is exactly the union of these equation systems.
    /// An empty list means the factor can never vanish.
    Cases(Vec<Vec<MonomialEquation>>),
    /// Too many terms to enumerate; decidable only pointwise.
    Hard,
}

/// Order bound for the ratios in a minimal vanishing sum of `size` roots of
/// unity with rational coefficients.
fn torsion_order_bound(size: usize) -> i64 {
    let mut n = 1;
    for p in [2, 3, 5, 7] {
        if p <= size as i64 {
            n *= p;
        }
    }
    n
}

/// Work cap for a single block enumeration.
const BLOCK_ENUM_LIMIT: u64 = 100_000;

pub fn vanishing_cases(p: &Polynomial, hard_term_limit: usize) -> FactorCases {
    if p.is_zero() {
        return FactorCases::AlwaysZero;
    }
    // Split into Gauss sectors.
    let mut sectors: BTreeMap<String, Vec<(i64, Rat, Vec<i64>)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let key = format!("{:?}", m.gauss());
        sectors
            .entry(key)
            .or_default()
            .push((c, m.q_exp(), m.x_exps().to_vec()));
    }
    // Every sector must vanish; the cases multiply out conjunctively.
    let mut combined: Vec<Vec<MonomialEquation>> = vec![Vec::new()];
    for terms in sectors.values() {
        let sector_cases = match sector_vanishing_cases(terms, hard_term_limit) {
            Some(cs) => cs,
            None => return FactorCases::Hard,
        };
        if sector_cases.is_empty() {
            return FactorCases::Cases(Vec::new());
        }
        let mut next = Vec::new();
        for base in &combined {
            for case in &sector_cases {
                let mut merged = base.clone();
                merged.extend(case.iter().cloned());
                merged.sort();
                merged.dedup();
                next.push(merged);
            }
        }
        combined = next;
    }
    let mut dedup: BTreeSet<Vec<MonomialEquation>> = BTreeSet::new();
    dedup.extend(combined);
    FactorCases::Cases(dedup.into_iter().collect())
}

/// Case list for one Gauss-free term list; `None` when the enumeration is
/// out of reach.
fn sector_vanishing_cases(
    terms: &[(i64, Rat, Vec<i64>)],
    hard_term_limit: usize,
) -> Option<Vec<Vec<MonomialEquation>>> {
    let t = terms.len();
    if t == 1 {
        // A single monomial times a unit never vanishes.
        return Some(Vec::new());
    }
    if t > hard_term_limit {
        return None;
    }
    let mut out: BTreeSet<Vec<MonomialEquation>> = BTreeSet::new();
    for partition in partitions_min_two(t) {
        let mut block_case_lists: Vec<Vec<Vec<MonomialEquation>>> = Vec::new();
        let mut dead = false;
        for block in &partition {
            match block_cases(terms, block) {
                Some(cases) if !cases.is_empty() => block_case_lists.push(cases),
                _ => {
                    dead = true;
                    break;
                }
            }
        }
        if dead {
            continue;
        }
        // Conjunction across blocks: cross product of the per-block cases.
        let mut acc: Vec<Vec<MonomialEquation>> = vec![Vec::new()];
        for cases in &block_case_lists {
            let mut next = Vec::new();
            for base in &acc {
                for case in cases {
                    let mut merged = base.clone();
                    merged.extend(case.iter().cloned());
                    merged.sort();
                    merged.dedup();
                    next.push(merged);
                }
            }
            acc = next;
        }
        out.extend(acc);
    }
    Some(out.into_iter().collect())
}

/// All set partitions of `0..t` with every block of size at least 2.
fn partitions_min_two(t: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(next: usize, t: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if next == t {
            if blocks.iter().all(|b| b.len() >= 2) {
                out.push(blocks.clone());
            }
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(next);
            rec(next + 1, t, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![next]);
        rec(next + 1, t, blocks, out);
        blocks.pop();
    }
    rec(0, t, &mut blocks, &mut out);
    out
}

/// The ways one block of terms can sum to zero: the terms share their total
/// q-exponent, and the coefficients weighted by relative roots of unity
/// cancel. Equations are expressed relative to the block's first term.
fn block_cases(
    terms: &[(i64, Rat, Vec<i64>)],
    block: &[usize],
) -> Option<Vec<Vec<MonomialEquation>>> {
    let s = block.len();
    debug_assert!(s >= 2);
    let order = torsion_order_bound(s);
    let tuples = (order as u64).checked_pow(s as u32 - 1)?;
    if tuples > BLOCK_ENUM_LIMIT {
        return None;
    }
    let anchor = block[0];
    let (c0, q0, v0) = &terms[anchor];
    let zeta: Vec<Cyclotomic> = (0..order)
        .map(|k| Cyclotomic::root_power(order as u64, k))
        .collect();
    let mut cases = Vec::new();
    let mut tuple = vec![0i64; s - 1];
    loop {
        // Check the cancellation for this root-of-unity tuple.
        let mut sum = Cyclotomic::from_integer(order as u64, *c0);
        for (pos, &k) in tuple.iter().enumerate() {
            let (c, _, _) = &terms[block[pos + 1]];
            sum = sum.add(&zeta[k as usize].scale(*c));
        }
        if sum.is_zero() {
            let mut eqs = Vec::new();
            for (pos, &k) in tuple.iter().enumerate() {
                let (_, q, v) = &terms[block[pos + 1]];
                let exps: Vec<i64> = v.iter().zip(v0).map(|(a, b)| a - b).collect();
                eqs.push(MonomialEquation::new(
                    exps,
                    Torsion::from_fraction(k, order),
                    *q0 - *q,
                ));
            }
            eqs.sort();
            cases.push(eqs);
        }
        // Odometer.
        let mut i = 0;
        loop {
            if i == s - 1 {
                return Some(cases);
            }
            tuple[i] += 1;
            if tuple[i] < order {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qring::Monomial;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn poly(raw: Vec<(i64, (i64, i64), Vec<i64>)>) -> Polynomial {
        let nvars = raw[0].2.len();
        Polynomial::normalize(
            nvars,
            raw.into_iter()
                .map(|(c, q, x)| (c, Monomial::new(rat(q.0, q.1), x, []).unwrap())),
        )
    }

    #[test]
    fn binomial_one_minus_gives_single_case() {
        // 1 - q^-1 x1 x2^-1 = 0 iff x1/x2 = q.
        let p = poly(vec![(1, (0, 1), vec![0, 0]), (-1, (-1, 1), vec![1, -1])]);
        match vanishing_cases(&p, 8) {
            FactorCases::Cases(cs) => {
                assert_eq!(cs.len(), 1);
                assert_eq!(cs[0].len(), 1);
                let eq = &cs[0][0];
                assert!(eq.torsion.is_zero());
                assert!(
                    (eq.exps == vec![1, -1] && eq.q_rhs == rat(1, 1))
                        || (eq.exps == vec![-1, 1] && eq.q_rhs == rat(-1, 1))
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn binomial_one_plus_needs_torsion() {
        // 1 + x2^2 = 0 iff x2^2 = -1.
        let p = poly(vec![(1, (0, 1), vec![0, 0]), (1, (0, 1), vec![0, 2])]);
        match vanishing_cases(&p, 8) {
            FactorCases::Cases(cs) => {
                assert_eq!(cs.len(), 1);
                let eq = &cs[0][0];
                assert_eq!(eq.torsion, Torsion::new(2, 1).unwrap());
                assert_eq!(eq.q_rhs, rat(0, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mismatched_magnitudes_cannot_vanish() {
        // 1 - 2 x1 never vanishes at a unit times a q-power.
        let p = poly(vec![(1, (0, 1), vec![0]), (-2, (0, 1), vec![1])]);
        assert_eq!(vanishing_cases(&p, 8), FactorCases::Cases(Vec::new()));
    }

    #[test]
    fn monomial_never_vanishes() {
        let p = poly(vec![(3, (-1, 2), vec![5, 4])]);
        assert_eq!(vanishing_cases(&p, 8), FactorCases::Cases(Vec::new()));
    }

    #[test]
    fn zero_polynomial_always_vanishes() {
        assert_eq!(vanishing_cases(&Polynomial::zero(2), 8), FactorCases::AlwaysZero);
    }

    #[test]
    fn trinomial_splits_into_cube_root_cases() {
        // 1 + q^-1 x1^2 x2 + q^-1 x1 x2^2: the only grouping is all three
        // terms together, with the two ratios the two primitive cube roots.
        let p = poly(vec![
            (1, (0, 1), vec![0, 0]),
            (1, (-1, 1), vec![2, 1]),
            (1, (-1, 1), vec![1, 2]),
        ]);
        match vanishing_cases(&p, 8) {
            FactorCases::Cases(cs) => {
                assert_eq!(cs.len(), 2);
                for case in &cs {
                    assert_eq!(case.len(), 2);
                    let orders: BTreeSet<i64> =
                        case.iter().map(|e| e.torsion.order()).collect();
                    assert_eq!(orders, BTreeSet::from([3]));
                    for e in case {
                        assert_eq!(e.q_rhs, rat(1, 1));
                    }
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn four_terms_include_pairings() {
        // 1 - q^-2 x1^4 x2^2 + q^-1 x1^2 x2^4 - q^-2 x1^2 x2^4: admits the
        // pair grouping {1, q^-2 x1^2 x2^4}, {q^-2 x1^4 x2^2, q^-1 x1^2 x2^4}
        // among its cases.
        let p = poly(vec![
            (1, (0, 1), vec![0, 0]),
            (-1, (-2, 1), vec![4, 2]),
            (1, (-1, 1), vec![2, 4]),
            (-1, (-2, 1), vec![2, 4]),
        ]);
        let target_a = MonomialEquation::q_power(vec![2, 4], rat(2, 1));
        let target_b = MonomialEquation::q_power(vec![2, -2], rat(1, 1));
        match vanishing_cases(&p, 8) {
            FactorCases::Cases(cs) => {
                assert!(!cs.is_empty());
                let found = cs.iter().any(|case| {
                    case.iter().any(|e| {
                        e == &target_a
                            || (e.exps == vec![-2, -4]
                                && e.q_rhs == rat(-2, 1)
                                && e.torsion.is_zero())
                    }) && case.iter().any(|e| {
                        e == &target_b
                            || (e.exps == vec![-2, 2]
                                && e.q_rhs == rat(-1, 1)
                                && e.torsion.is_zero())
                    })
                });
                assert!(found, "pair grouping missing from {cs:?}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn many_terms_are_hard() {
        let raw: Vec<(i64, (i64, i64), Vec<i64>)> = (0..9)
            .map(|i| (1, (-i, 1), vec![i, 0]))
            .collect();
        assert_eq!(vanishing_cases(&poly(raw), 8), FactorCases::Hard);
    }

    #[test]
    fn gauss_sectors_must_vanish_jointly() {
        // q^(-5/2) x1^5 x2^4 + g(3,1)^-1 (1 + x1 x2^-1): the Gauss-free
        // sector is a lone monomial, so the whole factor can never vanish.
        let nvars = 2;
        let bare = Monomial::new(rat(-5, 2), vec![5, 4], []).unwrap();
        let g0 = Monomial::new(rat(0, 1), vec![0, 0], [(3, 2, 1)]).unwrap();
        let g1 = Monomial::new(rat(0, 1), vec![1, -1], [(3, 2, 1)]).unwrap();
        let p = Polynomial::normalize(nvars, [(1, bare), (1, g0), (1, g1)]);
        assert_eq!(vanishing_cases(&p, 8), FactorCases::Cases(Vec::new()));
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions_min_two(2).len(), 1);
        assert_eq!(partitions_min_two(3).len(), 1);
        assert_eq!(partitions_min_two(4).len(), 4);
        assert_eq!(partitions_min_two(5).len(), 11);
        assert_eq!(partitions_min_two(6).len(), 41);
    }
}
