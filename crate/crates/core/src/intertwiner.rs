//! Weyl-group actions on unramified characters and the numerator factors of
//! the intertwining-operator scalars, assembled into vanishing constraints:
//! when every Whittaker functional of the unramified subrepresentation
//! vanishes, each word `w` with a defined operator forces the product of its
//! accumulated c-numerators and the value at the acted character to vanish.
//!
//! Only numerators are ever collected; denominator nonvanishing is recorded
//! as advisory side conditions (acted ratios different from 1).

use serde_json::{json, Value};
use thiserror::Error;

use crate::qring::{Monomial, Polynomial, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntertwinerError {
    #[error("invalid reflection tag {tag} for {group}")]
    InvalidTag { tag: String, group: String },
    #[error("constraint requires a nonempty base factor list")]
    EmptyBase,
}

/// Which group and cover the constraints live on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupKind {
    Gl { n: usize },
    G2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub r: u32,
}

impl GroupSpec {
    pub fn gl(n: usize, r: u32) -> Self {
        GroupSpec {
            kind: GroupKind::Gl { n },
            r,
        }
    }

    pub fn g2(r: u32) -> Self {
        GroupSpec {
            kind: GroupKind::G2,
            r,
        }
    }

    /// Number of character variables.
    pub fn nvars(&self) -> usize {
        match self.kind {
            GroupKind::Gl { n } => n,
            GroupKind::G2 => 2,
        }
    }

    /// Number of simple reflections.
    pub fn generator_count(&self) -> usize {
        match self.kind {
            GroupKind::Gl { n } => n - 1,
            GroupKind::G2 => 2,
        }
    }

    /// Effective exponent of the short-root factor: `r` when 3 does not
    /// divide `r`, `r/3` when it does. Only meaningful for the exceptional
    /// group.
    pub fn r1(&self) -> u32 {
        if self.r.is_multiple_of(3) {
            self.r / 3
        } else {
            self.r
        }
    }

    pub fn tag_name(&self, tag: usize) -> String {
        match self.kind {
            GroupKind::Gl { .. } => format!("w{}", tag + 1),
            GroupKind::G2 => ["w_a", "w_b"][tag].to_string(),
        }
    }

    pub fn parse_tag(&self, s: &str) -> Result<usize, IntertwinerError> {
        let err = || IntertwinerError::InvalidTag {
            tag: s.to_string(),
            group: format!("{:?}", self.kind),
        };
        match self.kind {
            GroupKind::Gl { n } => {
                let i: usize = s.trim_start_matches('w').parse().map_err(|_| err())?;
                if i >= 1 && i < n {
                    Ok(i - 1)
                } else {
                    Err(err())
                }
            }
            GroupKind::G2 => match s {
                "a" | "w_a" | "wa" => Ok(0),
                "b" | "w_b" | "wb" => Ok(1),
                _ => Err(err()),
            },
        }
    }

    fn check_tag(&self, tag: usize) -> Result<(), IntertwinerError> {
        if tag < self.generator_count() {
            Ok(())
        } else {
            Err(IntertwinerError::InvalidTag {
                tag: tag.to_string(),
                group: format!("{:?}", self.kind),
            })
        }
    }
}

/// A symbolically acted character: slot `i` of the acted character is the
/// monomial `x^(grid[i])` in the original variables.
pub type CharGrid = Vec<Vec<i64>>;

pub fn identity_grid(nvars: usize) -> CharGrid {
    (0..nvars)
        .map(|i| {
            let mut v = vec![0; nvars];
            v[i] = 1;
            v
        })
        .collect()
}

/// Apply one simple reflection to an acted character. The linear group
/// reflections swap adjacent slots; for the exceptional group the long-root
/// reflection sends `(x1, x2)` to `(x1*x2, x2^-1)` and the short-root
/// reflection swaps the slots.
pub fn apply_reflection(
    g: &GroupSpec,
    tag: usize,
    grid: &CharGrid,
) -> Result<CharGrid, IntertwinerError> {
    g.check_tag(tag)?;
    let mut out = grid.clone();
    match g.kind {
        GroupKind::Gl { .. } => {
            out.swap(tag, tag + 1);
        }
        GroupKind::G2 => {
            if tag == 0 {
                out.swap(0, 1);
            } else {
                let prod: Vec<i64> = grid[0]
                    .iter()
                    .zip(&grid[1])
                    .map(|(a, b)| a + b)
                    .collect();
                let inv: Vec<i64> = grid[1].iter().map(|e| -e).collect();
                out[0] = prod;
                out[1] = inv;
            }
        }
    }
    Ok(out)
}

/// Left-to-right composition of reflections on a symbolic character.
pub fn act_word(
    g: &GroupSpec,
    word: &[usize],
    grid: &CharGrid,
) -> Result<CharGrid, IntertwinerError> {
    let mut grid = grid.clone();
    for &tag in word {
        grid = apply_reflection(g, tag, &grid)?;
    }
    Ok(grid)
}

/// The action on concrete exponent vectors: left-to-right composition of
/// simple-reflection actions on the q-exponents of a character point.
pub fn weyl_act(g: &GroupSpec, word: &[usize], exps: &[Rat]) -> Result<Vec<Rat>, IntertwinerError> {
    let mut e = exps.to_vec();
    for &tag in word {
        g.check_tag(tag)?;
        match g.kind {
            GroupKind::Gl { .. } => e.swap(tag, tag + 1),
            GroupKind::G2 => {
                if tag == 0 {
                    e.swap(0, 1);
                } else {
                    let (a, b) = (e[0], e[1]);
                    e[0] = a + b;
                    e[1] = -b;
                }
            }
        }
    }
    Ok(e)
}

fn ratio_monomial(grid: &CharGrid, i: usize, j: usize) -> Vec<i64> {
    grid[i].iter().zip(&grid[j]).map(|(a, b)| a - b).collect()
}

fn binomial_one_minus(q_exp: Rat, x: Vec<i64>) -> Polynomial {
    let nvars = x.len();
    Polynomial::one(nvars)
        .try_sub(&Polynomial::from_monomial(
            1,
            Monomial::new(q_exp, x, []).expect("valid monomial"),
        ))
        .expect("same variable count")
}

/// The numerator binomial of the c-factor of one reflection at the given
/// (symbolically acted) character:
/// `1 - q^-1 (x_i/x_{i+1})^r` for the linear group,
/// `1 - q^-1 (x_1/x_2)^(r1)` for the short-root reflection, and
/// `1 - q^-1 x_2^r` for the long-root reflection.
pub fn c_numerator(
    g: &GroupSpec,
    tag: usize,
    grid: &CharGrid,
) -> Result<Polynomial, IntertwinerError> {
    g.check_tag(tag)?;
    let e: Vec<i64> = match (g.kind, tag) {
        (GroupKind::Gl { .. }, i) => ratio_monomial(grid, i, i + 1)
            .iter()
            .map(|c| c * i64::from(g.r))
            .collect(),
        (GroupKind::G2, 0) => ratio_monomial(grid, 0, 1)
            .iter()
            .map(|c| c * i64::from(g.r1()))
            .collect(),
        (GroupKind::G2, _) => grid[1].iter().map(|c| c * i64::from(g.r)).collect(),
    };
    Ok(binomial_one_minus(Rat::new(-1, 1), e))
}

/// Definedness condition for applying one reflection at the given acted
/// character: the relevant acted ratio differs from 1.
pub fn side_condition(g: &GroupSpec, tag: usize, grid: &CharGrid) -> SideCondition {
    let exps = match (g.kind, tag) {
        (GroupKind::Gl { .. }, i) => ratio_monomial(grid, i, i + 1),
        (GroupKind::G2, 0) => ratio_monomial(grid, 0, 1),
        (GroupKind::G2, _) => grid[1].clone(),
    };
    SideCondition {
        exps,
        rhs_q_exp: Rat::new(0, 1),
    }
}

/// A monomial disequality `x^(exps) != q^(rhs_q_exp)` recorded as an
/// advisory definedness condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideCondition {
    pub exps: Vec<i64>,
    pub rhs_q_exp: Rat,
}

impl SideCondition {
    pub fn to_json(&self) -> Value {
        json!({
            "monomial": self.exps,
            "rhs_q_exp": format!("{}/{}", self.rhs_q_exp.numer(), self.rhs_q_exp.denom()),
        })
    }
}

/// One vanishing constraint: at least one factor vanishes, provided the side
/// conditions (operator definedness along the word) hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub word: Vec<usize>,
    pub factors: Vec<Polynomial>,
    pub side_conditions: Vec<SideCondition>,
}

impl Constraint {
    pub fn to_json(&self, g: &GroupSpec) -> Value {
        json!({
            "word": self.word.iter().map(|t| g.tag_name(*t)).collect::<Vec<_>>(),
            "factors": self.factors.iter().map(Polynomial::to_json).collect::<Vec<_>>(),
            "side": self.side_conditions.iter().map(SideCondition::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Accumulate the constraint of one word: the c-numerators collected at the
/// successively acted characters, followed by the base vanishing factors at
/// the fully acted character. `base` maps an acted character to its factor
/// list over the original variables.
pub fn constraint_for_word(
    g: &GroupSpec,
    word: &[usize],
    base: &dyn Fn(&CharGrid) -> Vec<Polynomial>,
) -> Result<Constraint, IntertwinerError> {
    let mut grid = identity_grid(g.nvars());
    let mut factors = Vec::new();
    let mut side_conditions = Vec::new();
    for &tag in word {
        side_conditions.push(side_condition(g, tag, &grid));
        factors.push(c_numerator(g, tag, &grid)?);
        grid = apply_reflection(g, tag, &grid)?;
    }
    let base_factors = base(&grid);
    if base_factors.is_empty() {
        return Err(IntertwinerError::EmptyBase);
    }
    factors.extend(base_factors);
    Ok(Constraint {
        word: word.to_vec(),
        factors,
        side_conditions,
    })
}

/// Enumerate the Weyl group as (element, canonical shortest word) pairs in
/// breadth-first order, elements identified by their action on characters.
pub fn enumerate_elements(g: &GroupSpec, max_len: usize) -> Vec<(CharGrid, Vec<usize>)> {
    let id = identity_grid(g.nvars());
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(id.clone());
    let mut out = vec![(id.clone(), Vec::new())];
    let mut frontier = vec![(id, Vec::<usize>::new())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (grid, word) in &frontier {
            for tag in 0..g.generator_count() {
                let acted = apply_reflection(g, tag, grid).expect("valid tag");
                if seen.insert(acted.clone()) {
                    let mut w = word.clone();
                    w.push(tag);
                    out.push((acted.clone(), w.clone()));
                    next.push((acted, w));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn short_reflection_swaps() {
        let g = GroupSpec::g2(5);
        let acted = weyl_act(&g, &[0], &[rat(2, 5), rat(1, 5)]).unwrap();
        assert_eq!(acted, vec![rat(1, 5), rat(2, 5)]);
    }

    #[test]
    fn long_reflection_action() {
        let g = GroupSpec::g2(5);
        let acted = weyl_act(&g, &[1], &[rat(2, 5), rat(1, 5)]).unwrap();
        assert_eq!(acted, vec![rat(3, 5), rat(-1, 5)]);
    }

    #[test]
    fn gl_reflection_is_a_transposition() {
        let g = GroupSpec::gl(3, 2);
        let acted = weyl_act(&g, &[0], &[rat(1, 1), rat(2, 1), rat(3, 1)]).unwrap();
        assert_eq!(acted, vec![rat(2, 1), rat(1, 1), rat(3, 1)]);
    }

    #[test]
    fn dihedral_relations() {
        // Both reflections are involutions and (w_a w_b) has order 6.
        let g = GroupSpec::g2(7);
        let id = identity_grid(2);
        assert_eq!(act_word(&g, &[0, 0], &id).unwrap(), id);
        assert_eq!(act_word(&g, &[1, 1], &id).unwrap(), id);
        let mut word = Vec::new();
        for k in 1..=6 {
            word.extend([0, 1]);
            let acted = act_word(&g, &word, &id).unwrap();
            assert_eq!(acted == id, k == 6, "order check at k={k}");
        }
    }

    #[test]
    fn braid_relation_for_gl() {
        let g = GroupSpec::gl(4, 3);
        let id = identity_grid(4);
        assert_eq!(
            act_word(&g, &[0, 1, 0], &id).unwrap(),
            act_word(&g, &[1, 0, 1], &id).unwrap()
        );
        assert_eq!(
            act_word(&g, &[0, 2], &id).unwrap(),
            act_word(&g, &[2, 0], &id).unwrap()
        );
    }

    #[test]
    fn random_words_invert_by_reversal() {
        // Generators are involutions, so reversing a word inverts it; check
        // on pseudo-random words up to length 6 for both groups.
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for g in [GroupSpec::g2(5), GroupSpec::gl(4, 3), GroupSpec::gl(5, 4)] {
            let id = identity_grid(g.nvars());
            for _ in 0..50 {
                let len = (next() % 7) as usize;
                let word: Vec<usize> =
                    (0..len).map(|_| (next() % g.generator_count() as u64) as usize).collect();
                let mut round_trip = word.clone();
                round_trip.extend(word.iter().rev());
                assert_eq!(act_word(&g, &round_trip, &id).unwrap(), id);
            }
        }
    }

    #[test]
    fn longest_word_twice_is_identity() {
        let g2 = GroupSpec::g2(4);
        let id2 = identity_grid(2);
        let longest: Vec<usize> = (0..6).map(|i| i % 2).collect();
        let twice: Vec<usize> = longest.iter().chain(&longest).copied().collect();
        assert_eq!(act_word(&g2, &twice, &id2).unwrap(), id2);

        let gl = GroupSpec::gl(4, 3);
        let id4 = identity_grid(4);
        let longest = vec![0, 1, 0, 2, 1, 0];
        let twice: Vec<usize> = longest.iter().chain(&longest).copied().collect();
        assert_eq!(act_word(&gl, &twice, &id4).unwrap(), id4);
    }

    #[test]
    fn c_numerators_match_worked_cases() {
        let id = identity_grid(2);
        let g = GroupSpec::g2(5);
        assert_eq!(
            c_numerator(&g, 1, &id).unwrap().to_string(),
            "1 - q^-1*x2^5"
        );
        // Degree 6 has the short-root exponent r/3 = 2.
        let g6 = GroupSpec::g2(6);
        assert_eq!(
            c_numerator(&g6, 0, &id).unwrap().to_string(),
            "1 - q^-1*x1^2*x2^-2"
        );
        let gl = GroupSpec::gl(4, 3);
        assert_eq!(
            c_numerator(&gl, 0, &identity_grid(4)).unwrap().to_string(),
            "1 - q^-1*x1^3*x2^-3"
        );
    }

    #[test]
    fn invalid_tags_rejected() {
        let g = GroupSpec::g2(5);
        assert!(c_numerator(&g, 2, &identity_grid(2)).is_err());
        assert!(weyl_act(&GroupSpec::gl(3, 2), &[2], &[rat(0, 1); 3]).is_err());
        assert!(g.parse_tag("w9").is_err());
        assert_eq!(g.parse_tag("a").unwrap(), 0);
        assert_eq!(GroupSpec::gl(4, 3).parse_tag("w2").unwrap(), 1);
    }

    #[test]
    fn worked_constraint_quintic_word_ab() {
        // Word [w_a, w_b] against the quintic identity-coset binomial.
        let g = GroupSpec::g2(5);
        let base = |grid: &CharGrid| -> Vec<Polynomial> {
            // 1 - q^-3 (x1 x2)^5 at the acted character.
            let v: Vec<i64> = grid[0]
                .iter()
                .zip(&grid[1])
                .map(|(a, b)| 5 * (a + b))
                .collect();
            vec![binomial_one_minus(rat(-3, 1), v)]
        };
        let c = constraint_for_word(&g, &[0, 1], &base).unwrap();
        let strings: Vec<String> = c.factors.iter().map(|p| p.to_string()).collect();
        assert_eq!(
            strings,
            vec![
                "1 - q^-1*x1^5*x2^-5".to_string(),
                "1 - q^-1*x1^5".to_string(),
                "1 - q^-3*x2^5".to_string(),
            ]
        );
        assert_eq!(c.side_conditions.len(), 2);
        // Applying the short reflection first needs x1 != x2, then the long
        // one needs the acted second slot (= x1) different from 1.
        assert_eq!(c.side_conditions[0].exps, vec![1, -1]);
        assert_eq!(c.side_conditions[1].exps, vec![1, 0]);
    }

    #[test]
    fn worked_constraint_gl4_single_step() {
        let g = GroupSpec::gl(4, 3);
        let base = |grid: &CharGrid| -> Vec<Polynomial> {
            let v: Vec<i64> = grid[0]
                .iter()
                .zip(&grid[3])
                .map(|(a, b)| 3 * (a - b))
                .collect();
            vec![binomial_one_minus(rat(-3, 1), v)]
        };
        let c = constraint_for_word(&g, &[0], &base).unwrap();
        let strings: Vec<String> = c.factors.iter().map(|p| p.to_string()).collect();
        assert_eq!(
            strings,
            vec![
                "1 - q^-1*x1^3*x2^-3".to_string(),
                "1 - q^-3*x2^3*x4^-3".to_string(),
            ]
        );
    }

    #[test]
    fn empty_word_gives_base_factors() {
        let g = GroupSpec::g2(5);
        let base = |_: &CharGrid| -> Vec<Polynomial> { vec![Polynomial::one(2)] };
        let c = constraint_for_word(&g, &[], &base).unwrap();
        assert_eq!(c.factors.len(), 1);
        assert!(c.side_conditions.is_empty());
    }

    #[test]
    fn empty_base_is_an_error() {
        let g = GroupSpec::g2(5);
        let base = |_: &CharGrid| -> Vec<Polynomial> { Vec::new() };
        assert!(matches!(
            constraint_for_word(&g, &[1], &base),
            Err(IntertwinerError::EmptyBase)
        ));
    }

    #[test]
    fn element_enumeration_sizes() {
        assert_eq!(enumerate_elements(&GroupSpec::g2(5), 6).len(), 12);
        assert_eq!(enumerate_elements(&GroupSpec::gl(3, 2), 3).len(), 6);
        assert_eq!(enumerate_elements(&GroupSpec::gl(4, 3), 6).len(), 24);
        assert_eq!(enumerate_elements(&GroupSpec::g2(5), 2).len(), 5);
    }

    #[test]
    fn constraint_serializes_with_side_conditions() {
        let g = GroupSpec::g2(5);
        let base = |_: &CharGrid| -> Vec<Polynomial> { vec![Polynomial::one(2)] };
        let c = constraint_for_word(&g, &[1], &base).unwrap();
        let v = c.to_json(&g);
        assert_eq!(v["word"][0], "w_b");
        assert!(v["factors"].is_array());
        assert_eq!(v["side"][0]["monomial"], serde_json::json!([0, 1]));
        assert_eq!(v["side"][0]["rhs_q_exp"], "0/1");
    }

    #[test]
    fn constraints_never_carry_denominators() {
        // Structural: every emitted factor is a polynomial, and the side
        // conditions carry the definedness data separately.
        let g = GroupSpec::g2(6);
        let base = |_: &CharGrid| -> Vec<Polynomial> { vec![Polynomial::one(2)] };
        for (_, word) in enumerate_elements(&g, 6) {
            let c = constraint_for_word(&g, &word, &base).unwrap();
            assert_eq!(c.side_conditions.len(), word.len());
        }
    }
}
