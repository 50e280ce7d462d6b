//! Accumulated knowledge about a character point: an integer lattice of
//! monomial equations `x^v = zeta * q^s` kept in Hermite-style echelon form
//! with the right-hand values carried along, plus recorded disequalities.
//!
//! `q` is treated as transcendental (`q^s = 1` iff `s = 0`), so a state is
//! contradictory exactly when the zero exponent vector acquires a nonzero
//! value or a stored disequality becomes entailed.

use std::fmt;

use serde_json::{json, Value};

use crate::deduce::snf::smith_normal_form;
use crate::qring::{FamilyValue, Monomial, Rat, Torsion};

/// One derived equation `prod_i x_i^(exps_i) = zeta * q^(q_rhs)` where the
/// root of unity is `torsion` as an element of Q/Z.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonomialEquation {
    pub exps: Vec<i64>,
    pub torsion: Torsion,
    pub q_rhs: Rat,
}

impl MonomialEquation {
    pub fn new(exps: Vec<i64>, torsion: Torsion, q_rhs: Rat) -> Self {
        MonomialEquation {
            exps,
            torsion,
            q_rhs,
        }
    }

    /// Torsion-free equation `x^v = q^s`.
    pub fn q_power(exps: Vec<i64>, q_rhs: Rat) -> Self {
        Self::new(exps, Torsion::zero(), q_rhs)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exps": self.exps,
            "torsion": { "order": self.torsion.order(), "power": self.torsion.numer() },
            "q_rhs": format!("{}/{}", self.q_rhs.numer(), self.q_rhs.denom()),
        })
    }
}

impl fmt::Display for MonomialEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = Monomial::new(Rat::new(0, 1), self.exps.clone(), []).expect("valid monomial");
        write!(f, "{lhs} = ")?;
        let zero_q = self.q_rhs == Rat::new(0, 1);
        if self.torsion.is_zero() && zero_q {
            return write!(f, "1");
        }
        if !self.torsion.is_zero() {
            write!(f, "{}", self.torsion)?;
            if !zero_q {
                write!(f, "*")?;
            }
        }
        if !zero_q {
            if self.q_rhs.is_integer() {
                write!(f, "q^{}", self.q_rhs.numer())?;
            } else {
                write!(f, "q^({})", self.q_rhs)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    v: Vec<i64>,
    torsion: Torsion,
    q: Rat,
}

impl Row {
    fn pivot(&self) -> Option<usize> {
        self.v.iter().position(|&e| e != 0)
    }

    fn is_zero_vector(&self) -> bool {
        self.v.iter().all(|&e| e == 0)
    }

    fn value_is_zero(&self) -> bool {
        self.torsion.is_zero() && self.q == Rat::new(0, 1)
    }

    fn sub_multiple(&mut self, other: &Row, k: i64) {
        if k == 0 {
            return;
        }
        for (a, b) in self.v.iter_mut().zip(&other.v) {
            *a -= k * b;
        }
        self.torsion = self.torsion.add(&other.torsion.scale(-k));
        self.q -= other.q * Rat::from_integer(k);
    }

    fn negate(&mut self) {
        for a in self.v.iter_mut() {
            *a = -*a;
        }
        self.torsion = self.torsion.neg();
        self.q = -self.q;
    }

    fn equation(&self) -> MonomialEquation {
        MonomialEquation::new(self.v.clone(), self.torsion, self.q)
    }
}

/// Consistent accumulated equalities (as an echelon lattice with values)
/// plus disequalities that are known to currently not be entailed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct KnowledgeState {
    nvars: usize,
    rows: Vec<Row>,
    diseqs: Vec<MonomialEquation>,
}

impl KnowledgeState {
    pub fn new(nvars: usize) -> Self {
        KnowledgeState {
            nvars,
            rows: Vec::new(),
            diseqs: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rows.len() == self.nvars
    }

    pub fn equations(&self) -> Vec<MonomialEquation> {
        self.rows.iter().map(Row::equation).collect()
    }

    pub fn diseqs(&self) -> &[MonomialEquation] {
        &self.diseqs
    }

    /// Reduce a vector against the echelon rows. Returns the residual
    /// vector together with the value accumulated from the subtracted rows,
    /// or `None` if some pivot does not divide the corresponding entry (the
    /// vector is then certainly outside the lattice).
    fn reduce(&self, eq: &MonomialEquation) -> Option<(Vec<i64>, Torsion, Rat)> {
        let mut v = eq.exps.clone();
        let mut torsion = eq.torsion;
        let mut q = eq.q_rhs;
        for row in &self.rows {
            let p = row.pivot().expect("echelon rows are nonzero");
            if v[p] != 0 {
                if v[p] % row.v[p] != 0 {
                    return None;
                }
                let k = v[p] / row.v[p];
                for (a, b) in v.iter_mut().zip(&row.v) {
                    *a -= k * b;
                }
                torsion = torsion.add(&row.torsion.scale(-k));
                q -= row.q * Rat::from_integer(k);
            }
        }
        Some((v, torsion, q))
    }

    /// True iff the equation's exponent vector lies in the lattice with
    /// matching value.
    pub fn entails(&self, eq: &MonomialEquation) -> bool {
        match self.reduce(eq) {
            Some((v, torsion, q)) => {
                v.iter().all(|&e| e == 0) && torsion.is_zero() && q == Rat::new(0, 1)
            }
            None => false,
        }
    }

    /// True iff the equation's exponent vector lies in the lattice with a
    /// different value (so asserting it would contradict the state).
    pub fn refutes(&self, eq: &MonomialEquation) -> bool {
        match self.reduce(eq) {
            Some((v, torsion, q)) => {
                v.iter().all(|&e| e == 0) && !(torsion.is_zero() && q == Rat::new(0, 1))
            }
            None => false,
        }
    }

    /// Extend the state with one equation. Returns `None` on contradiction:
    /// the zero vector acquiring a nonzero value, or a stored disequality
    /// becoming entailed.
    pub fn assert_equation(&self, eq: &MonomialEquation) -> Option<KnowledgeState> {
        assert_eq!(eq.exps.len(), self.nvars);
        if eq.exps.iter().all(|&e| e == 0) {
            // No lattice content: 1 = value.
            return if eq.torsion.is_zero() && eq.q_rhs == Rat::new(0, 1) {
                Some(self.clone())
            } else {
                None
            };
        }
        let mut rows = self.rows.clone();
        rows.push(Row {
            v: eq.exps.clone(),
            torsion: eq.torsion,
            q: eq.q_rhs,
        });
        let rows = echelon(self.nvars, rows)?;
        let state = KnowledgeState {
            nvars: self.nvars,
            rows,
            diseqs: self.diseqs.clone(),
        };
        if state.diseqs.iter().any(|d| state.entails(d)) {
            return None;
        }
        Some(state)
    }

    /// Record a disequality; contradictory if already entailed.
    pub fn assert_diseq(&self, eq: &MonomialEquation) -> Option<KnowledgeState> {
        if self.entails(eq) {
            return None;
        }
        let mut out = self.clone();
        if !out.diseqs.contains(eq) {
            out.diseqs.push(eq.clone());
            out.diseqs.sort();
        }
        Some(out)
    }

    /// Every state with the same solution set reduces to the same echelon
    /// rows, so this key identifies states for memoization.
    pub fn canonical_key(&self) -> String {
        format!("{:?}|{:?}", self.rows, self.diseqs)
    }
}

/// Integer row echelon with value carry. Returns `None` when a row reduces
/// to the zero vector with a nonzero value.
fn echelon(nvars: usize, mut rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut out: Vec<Row> = Vec::new();
    for col in 0..nvars {
        loop {
            let mut nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].v[col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            // Reduce everything at this column by the row of least magnitude.
            nz.sort_by_key(|&i| rows[i].v[col].abs());
            let base = nz[0];
            for &i in &nz[1..] {
                let k = rows[i].v[col].div_euclid(rows[base].v[col]);
                let base_row = rows[base].clone();
                rows[i].sub_multiple(&base_row, k);
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| rows[i].v[col] != 0) {
            let mut piv = rows.remove(i);
            if piv.v[col] < 0 {
                piv.negate();
            }
            out.push(piv);
        }
    }
    for r in rows {
        debug_assert!(r.is_zero_vector());
        if !r.value_is_zero() {
            return None;
        }
    }
    // Reduce entries above each pivot for a canonical form.
    for i in 0..out.len() {
        let p = out[i].pivot().expect("nonzero row");
        let h = out[i].v[p];
        for j in 0..i {
            let k = out[j].v[p].div_euclid(h);
            let pivot_row = out[i].clone();
            out[j].sub_multiple(&pivot_row, k);
        }
    }
    Some(out)
}

/// A parametrization of the solution set of a consistent state:
/// `x_i = (twist torsion) * zeta^(rep_torsion_i) * q^(rep_q_i) * prod_j u_j^(free_dirs[j][i])`
/// where the `u_j` range over all unit values and the finite twist classes
/// enumerate the torsion ambiguity of the lattice equations.
#[derive(Clone, Debug)]
pub struct FamilyChart {
    pub rep_q: Vec<Rat>,
    pub rep_torsion: Vec<Torsion>,
    pub free_dirs: Vec<Vec<i64>>,
    /// Per-variable torsion offsets of each twist class; the first is zero.
    pub twists: Vec<Vec<Torsion>>,
    /// True when the twist enumeration was truncated at the cap.
    pub twists_truncated: bool,
}

impl FamilyChart {
    pub fn from_state(state: &KnowledgeState, twist_cap: usize) -> FamilyChart {
        let n = state.nvars;
        let rho = state.rows.len();
        let snf = if rho == 0 {
            crate::deduce::snf::Snf {
                d: Vec::new(),
                u: Vec::new(),
                v: (0..n)
                    .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                    .collect(),
                rank: 0,
            }
        } else {
            let matrix: Vec<Vec<i64>> = state.rows.iter().map(|r| r.v.clone()).collect();
            smith_normal_form(&matrix)
        };
        debug_assert_eq!(snf.rank, rho);

        // Values of the U-transformed equations: w_k^(d_k) = beta_k.
        let mut w_tor = Vec::with_capacity(rho);
        let mut w_q = Vec::with_capacity(rho);
        for k in 0..rho {
            let mut torsion = Torsion::zero();
            let mut q = Rat::new(0, 1);
            for (j, row) in state.rows.iter().enumerate() {
                let c = snf.u[k][j];
                if c != 0 {
                    torsion = torsion.add(&row.torsion.scale(c));
                    q += row.q * Rat::from_integer(c);
                }
            }
            let d = snf.d[k];
            w_tor.push(Torsion::from_fraction(
                torsion.numer(),
                torsion.order() * d,
            ));
            w_q.push(q / Rat::from_integer(d));
        }

        let mut rep_q = vec![Rat::new(0, 1); n];
        let mut rep_torsion = vec![Torsion::zero(); n];
        for i in 0..n {
            for k in 0..rho {
                let c = snf.v[i][k];
                if c != 0 {
                    rep_q[i] += w_q[k] * Rat::from_integer(c);
                    rep_torsion[i] = rep_torsion[i].add(&w_tor[k].scale(c));
                }
            }
        }
        let free_dirs: Vec<Vec<i64>> = (rho..n)
            .map(|k| (0..n).map(|i| snf.v[i][k]).collect())
            .collect();

        // Enumerate twist tuples in the product of Z/d_k.
        let total: i64 = snf.d.iter().product::<i64>().max(1);
        let mut twists = Vec::new();
        let mut truncated = false;
        if total as usize > twist_cap {
            truncated = true;
            twists.push(vec![Torsion::zero(); n]);
        } else {
            let mut counter = vec![0i64; rho];
            loop {
                let mut delta = vec![Torsion::zero(); n];
                for (k, &m) in counter.iter().enumerate() {
                    if m != 0 {
                        for (i, d) in delta.iter_mut().enumerate() {
                            let c = snf.v[i][k];
                            if c != 0 {
                                *d = d.add(&Torsion::from_fraction(m * c, snf.d[k]));
                            }
                        }
                    }
                }
                twists.push(delta);
                // Mixed-radix increment.
                let mut k = 0;
                loop {
                    if k == rho {
                        break;
                    }
                    counter[k] += 1;
                    if counter[k] < snf.d[k] {
                        break;
                    }
                    counter[k] = 0;
                    k += 1;
                }
                if k == rho {
                    break;
                }
            }
        }
        FamilyChart {
            rep_q,
            rep_torsion,
            free_dirs,
            twists,
            twists_truncated: truncated,
        }
    }

    /// The member assignment of one twist class, with the free directions as
    /// formal parameters.
    pub fn member(&self, twist: &[Torsion]) -> Vec<Option<FamilyValue>> {
        let n = self.rep_q.len();
        (0..n)
            .map(|i| {
                Some(FamilyValue {
                    torsion: self.rep_torsion[i].add(&twist[i]),
                    q_exp: self.rep_q[i],
                    free_exps: self.free_dirs.iter().map(|d| d[i]).collect(),
                })
            })
            .collect()
    }

    pub fn free_count(&self) -> usize {
        self.free_dirs.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qring::{substitute_family, Polynomial};

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn eq(exps: Vec<i64>, q: Rat) -> MonomialEquation {
        MonomialEquation::q_power(exps, q)
    }

    #[test]
    fn closure_under_multiples() {
        // From x1/x2 = q the square is entailed.
        let s = KnowledgeState::new(2)
            .assert_equation(&eq(vec![1, -1], rat(1, 1)))
            .unwrap();
        assert!(s.entails(&eq(vec![2, -2], rat(2, 1))));
        assert!(s.entails(&eq(vec![-1, 1], rat(-1, 1))));
        assert!(!s.entails(&eq(vec![1, 0], rat(1, 1))));
    }

    #[test]
    fn zero_vector_with_value_contradicts() {
        let s = KnowledgeState::new(1);
        assert!(s.assert_equation(&eq(vec![0], rat(1, 1))).is_none());
        assert!(s.assert_equation(&eq(vec![0], rat(0, 1))).is_some());
        // x^2 = q and x^2 = q^2 clash.
        let s = s.assert_equation(&eq(vec![2], rat(1, 1))).unwrap();
        assert!(s.assert_equation(&eq(vec![2], rat(2, 1))).is_none());
    }

    #[test]
    fn linear_solve_over_exponents() {
        // x1 x2^2 = q^2 and x1^2 x2 = q^3 entail x1 = q^(4/3)? No: only the
        // cube x1^3 = q^4 is in the lattice.
        let s = KnowledgeState::new(2)
            .assert_equation(&eq(vec![1, 2], rat(2, 1)))
            .unwrap()
            .assert_equation(&eq(vec![2, 1], rat(3, 1)))
            .unwrap();
        assert!(s.entails(&eq(vec![3, 0], rat(4, 1))));
        assert!(!s.entails(&eq(vec![1, 0], rat(4, 3))));
        // The chart still exposes the torsion-free representative (4/3, 1/3).
        let chart = FamilyChart::from_state(&s, 64);
        assert_eq!(chart.rep_q, vec![rat(4, 3), rat(1, 3)]);
        assert_eq!(chart.free_dirs.len(), 0);
        assert_eq!(chart.twists.len(), 3);
    }

    #[test]
    fn fractional_split_requires_torsion_freedom() {
        let s = KnowledgeState::new(1)
            .assert_equation(&eq(vec![3], rat(1, 1)))
            .unwrap();
        assert!(!s.entails(&eq(vec![1], rat(1, 3))));
        let chart = FamilyChart::from_state(&s, 64);
        assert_eq!(chart.rep_q, vec![rat(1, 3)]);
        assert_eq!(chart.twists.len(), 3);
    }

    #[test]
    fn diseq_blocks_equation() {
        let s = KnowledgeState::new(2)
            .assert_diseq(&eq(vec![1, -1], rat(0, 1)))
            .unwrap();
        // Asserting x1 = x2 now contradicts.
        assert!(s.assert_equation(&eq(vec![1, -1], rat(0, 1))).is_none());
        // Asserting x1 = q x2 is fine.
        assert!(s.assert_equation(&eq(vec![1, -1], rat(1, 1))).is_some());
    }

    #[test]
    fn torsion_values_tracked() {
        // x^2 = -1 entails x^4 = 1 and refutes x^4 = -1.
        let m1 = MonomialEquation::new(vec![2], Torsion::new(2, 1).unwrap(), rat(0, 1));
        let s = KnowledgeState::new(1).assert_equation(&m1).unwrap();
        assert!(s.entails(&eq(vec![4], rat(0, 1))));
        assert!(s.refutes(&MonomialEquation::new(
            vec![4],
            Torsion::new(2, 1).unwrap(),
            rat(0, 1)
        )));
    }

    #[test]
    fn chart_members_satisfy_the_equations() {
        // x1^2 x2^4 = q^2, x1^2 x2^-2 = q: the degree-6 theta data.
        let s = KnowledgeState::new(2)
            .assert_equation(&eq(vec![2, 4], rat(2, 1)))
            .unwrap()
            .assert_equation(&eq(vec![2, -2], rat(1, 1)))
            .unwrap();
        let chart = FamilyChart::from_state(&s, 64);
        assert_eq!(chart.rep_q, vec![rat(2, 3), rat(1, 6)]);
        // Every twist must satisfy the defining binomials exactly.
        for twist in &chart.twists {
            let member = chart.member(twist);
            for (exps, q) in [(vec![2i64, 4], rat(2, 1)), (vec![2, -2], rat(1, 1))] {
                let poly = Polynomial::one(2)
                    .try_sub(&Polynomial::from_monomial(
                        1,
                        crate::qring::Monomial::new(-q, exps, []).unwrap(),
                    ))
                    .unwrap();
                let v = substitute_family(&poly, &member, chart.free_count()).unwrap();
                assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn rank_zero_chart_is_fully_free() {
        let s = KnowledgeState::new(2);
        let chart = FamilyChart::from_state(&s, 64);
        assert_eq!(chart.free_dirs.len(), 2);
        assert_eq!(chart.twists.len(), 1);
    }
}
