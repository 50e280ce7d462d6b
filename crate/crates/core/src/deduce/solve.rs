//! Exhaustive case-split over the vanishing constraints of a cover: starting
//! from the base values at the identity coset, every Weyl word contributes a
//! disjunction (some factor of its constraint vanishes, or the operator is
//! undefined at some step). Consistent leaves are charted, their torsion
//! twists are filtered pointwise through any deferred constraints, every
//! surviving member is audited by substitution into every base polynomial,
//! and subsumed families are dropped.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::deduce::cases::{vanishing_cases, FactorCases};
use crate::deduce::state::{FamilyChart, KnowledgeState, MonomialEquation};
use crate::g2_tables::{self, TableError};
use crate::gl_whittaker::{self, GlError};
use crate::intertwiner::{
    constraint_for_word, enumerate_elements, GroupKind, GroupSpec, IntertwinerError,
    SideCondition,
};
use crate::qring::{substitute_family, FamilyValue, Monomial, Polynomial, QringError, Rat, Torsion};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DeduceError {
    #[error("deduction scope: the linear-group engine needs r >= n-1 (got n={n}, r={r})")]
    GlScope { n: usize, r: u32 },
    #[error("deduction scope: the exceptional-group engine needs r >= 2 (got r={r})")]
    G2Scope { r: u32 },
    #[error("search exceeded {0} branches")]
    SearchOverflow(usize),
    #[error(transparent)]
    Gl(#[from] GlError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Intertwiner(#[from] IntertwinerError),
    #[error(transparent)]
    Qring(#[from] QringError),
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Longest Weyl word to use; `None` walks the whole group.
    pub max_word_len: Option<usize>,
    /// Upper bound on enumerated torsion twist classes per family.
    pub twist_cap: usize,
    /// Factors with more terms than this are deferred to pointwise checks.
    pub hard_term_limit: usize,
    /// Branch-count guard.
    pub max_branches: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_word_len: None,
            twist_cap: 4096,
            hard_term_limit: 6,
            max_branches: 100_000,
        }
    }
}

/// One step of a deduction, replayable against an empty state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStep {
    /// The constraint already held on the branch through this factor.
    Satisfied { constraint: String, factor: usize },
    /// One vanishing case of one factor was asserted.
    Assert {
        constraint: String,
        factor: usize,
        case: Vec<MonomialEquation>,
    },
    /// The branch chose the operator-undefined case of one word step.
    SideSplit {
        constraint: String,
        step: usize,
        equation: MonomialEquation,
    },
    /// The constraint was left for pointwise twist filtering.
    Deferred { constraint: String },
    /// The operator was undefined on the whole branch; no information.
    SkippedUndefined { constraint: String },
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceStep::Satisfied { constraint, factor } => {
                write!(f, "{constraint}: already zero via factor {factor}")
            }
            TraceStep::Assert {
                constraint,
                factor,
                case,
            } => {
                let eqs: Vec<String> = case.iter().map(|e| e.to_string()).collect();
                write!(
                    f,
                    "{constraint}: factor {factor} vanishes, so {}",
                    eqs.join(" and ")
                )
            }
            TraceStep::SideSplit {
                constraint,
                step,
                equation,
            } => write!(
                f,
                "{constraint}: operator undefined at step {step} ({equation})"
            ),
            TraceStep::Deferred { constraint } => {
                write!(f, "{constraint}: deferred to pointwise checks")
            }
            TraceStep::SkippedUndefined { constraint } => {
                write!(f, "{constraint}: operator undefined on this family; skipped")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DeductionTrace {
    pub steps: Vec<TraceStep>,
}

impl DeductionTrace {
    /// Reapply the asserted equations; reproduces the family's state.
    pub fn replay(&self, nvars: usize) -> Option<KnowledgeState> {
        let mut state = KnowledgeState::new(nvars);
        for step in &self.steps {
            match step {
                TraceStep::Assert { case, .. } => {
                    for eq in case {
                        state = state.assert_equation(eq)?;
                    }
                }
                TraceStep::SideSplit { equation, .. } => {
                    state = state.assert_equation(equation)?;
                }
                _ => {}
            }
        }
        Some(state)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.steps.iter().map(|s| json!(s.to_string())).collect())
    }
}

/// A consistent character family on which every constraint holds, reported
/// as the lattice equations plus a parametrized chart.
#[derive(Clone, Debug)]
pub struct SolutionFamily {
    pub equations: Vec<MonomialEquation>,
    /// Torsion-free representative q-exponents (free coordinates at 0).
    pub rep_q: Vec<Rat>,
    pub rep_torsion: Vec<Torsion>,
    /// Integer exponent vectors of the free parameters.
    pub free_dirs: Vec<Vec<i64>>,
    /// Verified absolute torsion tuples (one per surviving twist class).
    pub torsion_classes: Vec<Vec<Torsion>>,
    pub twists_truncated: bool,
    /// Words whose definedness condition fails identically on this family.
    pub side_condition_flags: Vec<String>,
    pub trace: DeductionTrace,
}

impl SolutionFamily {
    pub fn to_json(&self) -> Value {
        json!({
            "equations": self.equations.iter().map(MonomialEquation::to_json).collect::<Vec<_>>(),
            "equations_text": self.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "rep_q_exps": self.rep_q.iter().map(|r| format!("{}/{}", r.numer(), r.denom())).collect::<Vec<_>>(),
            "rep_torsion": self.rep_torsion.iter().map(|t| json!({"order": t.order(), "power": t.numer()})).collect::<Vec<_>>(),
            "free_directions": self.free_dirs,
            "torsion_classes": self.torsion_classes.iter().map(|tw| {
                tw.iter().map(|t| json!({"order": t.order(), "power": t.numer()})).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
            "twists_truncated": self.twists_truncated,
            "side_condition_flags": self.side_condition_flags,
            "trace": self.trace.to_json(),
        })
    }
}

struct Prepared {
    label: String,
    factors: Vec<Polynomial>,
    factor_cases: Vec<FactorCases>,
    side: Vec<SideCondition>,
}

#[derive(Clone)]
struct Branch {
    state: KnowledgeState,
    trace: Vec<TraceStep>,
    deferred: Vec<usize>,
}

fn side_equation(sc: &SideCondition) -> MonomialEquation {
    MonomialEquation::q_power(sc.exps.clone(), sc.rhs_q_exp)
}

fn prepare_constraints(
    g: &GroupSpec,
    opts: &SolveOptions,
) -> Result<(Vec<Prepared>, Vec<Polynomial>), DeduceError> {
    let nvars = g.nvars();
    // Base value factor lists at the identity coset.
    let entry_sets: Vec<(String, Vec<Polynomial>)> = match g.kind {
        GroupKind::Gl { n } => {
            if n < 2 || i64::from(g.r) < n as i64 - 1 {
                return Err(DeduceError::GlScope { n, r: g.r });
            }
            let value = gl_whittaker::whittaker_gl(n, g.r)?;
            vec![("value".to_string(), vec![value])]
        }
        GroupKind::G2 => {
            if g.r < 2 {
                return Err(DeduceError::G2Scope { r: g.r });
            }
            let mut sets: Vec<(String, Vec<Polynomial>)> = g2_tables::tabulated_entries()
                .into_iter()
                .filter(|e| e.r == g.r)
                .map(|e| (e.label.clone(), e.factors))
                .collect();
            if !sets.iter().any(|(l, _)| l.ends_with(".e")) {
                let e = g2_tables::lookup(g.r, g2_tables::EtaLabel::Identity)?;
                sets.insert(0, (e.label.clone(), e.factors));
            }
            sets
        }
    };

    let base_polys: Vec<Polynomial> = entry_sets
        .iter()
        .map(|(_, factors)| {
            let mut p = Polynomial::one(nvars);
            for f in factors {
                p = p.try_mul(f).expect("same variable count");
            }
            p
        })
        .collect();

    let mut constraints = Vec::new();
    for (label, factors) in &entry_sets {
        constraints.push(Prepared {
            label: format!("base {label}"),
            factor_cases: factors
                .iter()
                .map(|f| vanishing_cases(f, opts.hard_term_limit))
                .collect(),
            factors: factors.clone(),
            side: Vec::new(),
        });
    }

    let all_factors: Vec<Polynomial> = entry_sets
        .iter()
        .flat_map(|(_, fs)| fs.iter().cloned())
        .collect();
    let base_fn = move |grid: &crate::intertwiner::CharGrid| -> Vec<Polynomial> {
        all_factors
            .iter()
            .map(|f| {
                f.substitute_vars(grid, grid[0].len())
                    .expect("grid matches variable count")
            })
            .collect()
    };

    let max_len = opts.max_word_len.unwrap_or(64);
    for (_, word) in enumerate_elements(g, max_len) {
        if word.is_empty() {
            continue;
        }
        let c = constraint_for_word(g, &word, &base_fn)?;
        let names: Vec<String> = word.iter().map(|t| g.tag_name(*t)).collect();
        constraints.push(Prepared {
            label: format!("word {}", names.join(" ")),
            factor_cases: c
                .factors
                .iter()
                .map(|f| vanishing_cases(f, opts.hard_term_limit))
                .collect(),
            factors: c.factors,
            side: c.side_conditions,
        });
    }
    Ok((constraints, base_polys))
}

fn process_branch(br: &Branch, ci: usize, c: &Prepared) -> Vec<Branch> {
    // If the operator is undefined on the whole family the word carries no
    // information.
    for sc in &c.side {
        if br.state.entails(&side_equation(sc)) {
            let mut b = br.clone();
            b.trace.push(TraceStep::SkippedUndefined {
                constraint: c.label.clone(),
            });
            return vec![b];
        }
    }
    // Already satisfied through some factor?
    for (fi, fc) in c.factor_cases.iter().enumerate() {
        let hit = match fc {
            FactorCases::AlwaysZero => true,
            FactorCases::Cases(cs) => cs
                .iter()
                .any(|case| case.iter().all(|e| br.state.entails(e))),
            FactorCases::Hard => false,
        };
        if hit {
            let mut b = br.clone();
            b.trace.push(TraceStep::Satisfied {
                constraint: c.label.clone(),
                factor: fi,
            });
            return vec![b];
        }
    }
    // Split: one child per consistent vanishing case, per operator-undefined
    // step, plus a deferred child when a factor resists case analysis.
    let mut out = Vec::new();
    for (fi, fc) in c.factor_cases.iter().enumerate() {
        if let FactorCases::Cases(cs) = fc {
            for case in cs {
                let mut state = Some(br.state.clone());
                for eq in case {
                    state = state.and_then(|s| s.assert_equation(eq));
                }
                if let Some(state) = state {
                    let mut b = br.clone();
                    b.state = state;
                    b.trace.push(TraceStep::Assert {
                        constraint: c.label.clone(),
                        factor: fi,
                        case: case.clone(),
                    });
                    out.push(b);
                }
            }
        }
    }
    for (si, sc) in c.side.iter().enumerate() {
        let eq = side_equation(sc);
        if let Some(state) = br.state.assert_equation(&eq) {
            let mut b = br.clone();
            b.state = state;
            b.trace.push(TraceStep::SideSplit {
                constraint: c.label.clone(),
                step: si,
                equation: eq,
            });
            out.push(b);
        }
    }
    if c.factor_cases
        .iter()
        .any(|f| matches!(f, FactorCases::Hard))
    {
        let mut b = br.clone();
        b.deferred.push(ci);
        b.trace.push(TraceStep::Deferred {
            constraint: c.label.clone(),
        });
        out.push(b);
    }
    out
}

fn member_satisfies_constraint(
    c: &Prepared,
    member: &[Option<FamilyValue>],
    free_count: usize,
) -> bool {
    for sc in &c.side {
        let binom = Polynomial::one(member.len())
            .try_sub(&Polynomial::from_monomial(
                1,
                Monomial::new(-sc.rhs_q_exp, sc.exps.clone(), []).expect("valid monomial"),
            ))
            .expect("same variable count");
        if substitute_family(&binom, member, free_count)
            .map(|v| v.is_zero())
            .unwrap_or(false)
        {
            // Operator undefined at this member: the word is vacuous here.
            return true;
        }
    }
    c.factors.iter().any(|f| {
        substitute_family(f, member, free_count)
            .map(|v| v.is_zero())
            .unwrap_or(false)
    })
}

struct Resolved {
    state: KnowledgeState,
    chart: FamilyChart,
    verified: Vec<Vec<Torsion>>,
    fully_verified: bool,
    trace: Vec<TraceStep>,
}

fn resolve_branch(
    br: Branch,
    constraints: &[Prepared],
    base_polys: &[Polynomial],
    opts: &SolveOptions,
) -> Option<Resolved> {
    let chart = FamilyChart::from_state(&br.state, opts.twist_cap);
    let mut verified = Vec::new();
    for twist in &chart.twists {
        let member = chart.member(twist);
        let deferred_ok = br
            .deferred
            .iter()
            .all(|&ci| member_satisfies_constraint(&constraints[ci], &member, chart.free_count()));
        if !deferred_ok {
            continue;
        }
        let audit_ok = base_polys.iter().all(|bp| {
            substitute_family(bp, &member, chart.free_count())
                .map(|v| v.is_zero())
                .unwrap_or(false)
        });
        if audit_ok {
            verified.push(
                (0..br.state.nvars())
                    .map(|i| chart.rep_torsion[i].add(&twist[i]))
                    .collect(),
            );
        }
    }
    if verified.is_empty() {
        return None;
    }
    let fully_verified = !chart.twists_truncated && verified.len() == chart.twists.len();
    Some(Resolved {
        state: br.state,
        chart,
        verified,
        fully_verified,
        trace: br.trace,
    })
}

/// Find every unramified character family at which all base values (and all
/// word constraints derived from them) vanish. Families are verified by
/// substitution and reported maximally: a family whose solutions are
/// contained in another fully verified family is dropped.
pub fn solve_genericity(
    g: &GroupSpec,
    opts: &SolveOptions,
) -> Result<Vec<SolutionFamily>, DeduceError> {
    let (constraints, base_polys) = prepare_constraints(g, opts)?;
    let nvars = g.nvars();

    let mut frontier = vec![Branch {
        state: KnowledgeState::new(nvars),
        trace: Vec::new(),
        deferred: Vec::new(),
    }];
    for (ci, c) in constraints.iter().enumerate() {
        let mut next = Vec::new();
        let mut seen = BTreeSet::new();
        for br in &frontier {
            for child in process_branch(br, ci, c) {
                let key = format!("{}|{:?}", child.state.canonical_key(), child.deferred);
                if seen.insert(key) {
                    next.push(child);
                }
            }
        }
        if next.len() > opts.max_branches {
            return Err(DeduceError::SearchOverflow(opts.max_branches));
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }

    // Resolve leaves and merge identical states.
    let mut resolved: Vec<Resolved> = Vec::new();
    for br in frontier {
        if let Some(r) = resolve_branch(br, &constraints, &base_polys, opts) {
            if let Some(existing) = resolved
                .iter_mut()
                .find(|e| e.state.canonical_key() == r.state.canonical_key())
            {
                for tw in r.verified {
                    if !existing.verified.contains(&tw) {
                        existing.verified.push(tw);
                    }
                }
                existing.fully_verified = !existing.chart.twists_truncated
                    && existing.verified.len() == existing.chart.twists.len();
            } else {
                resolved.push(r);
            }
        }
    }

    // Subsumption: drop families contained in a larger fully verified one.
    let mut keep = vec![true; resolved.len()];
    for i in 0..resolved.len() {
        for j in 0..resolved.len() {
            if i == j || !keep[i] {
                continue;
            }
            let smaller = &resolved[i];
            let larger = &resolved[j];
            if !larger.fully_verified
                || larger.state.canonical_key() == smaller.state.canonical_key()
            {
                continue;
            }
            if larger
                .state
                .equations()
                .iter()
                .all(|eq| smaller.state.entails(eq))
            {
                keep[i] = false;
            }
        }
    }

    let mut families: Vec<SolutionFamily> = Vec::new();
    for (r, kept) in resolved.into_iter().zip(keep) {
        if !kept {
            continue;
        }
        // Flag words whose definedness fails identically on the family.
        let mut flags = Vec::new();
        for c in &constraints {
            for (si, sc) in c.side.iter().enumerate() {
                if r.state.entails(&side_equation(sc)) {
                    flags.push(format!("{} step {si}", c.label));
                }
            }
        }
        let mut verified = r.verified;
        verified.sort();
        families.push(SolutionFamily {
            equations: r.state.equations(),
            rep_q: r.chart.rep_q,
            rep_torsion: r.chart.rep_torsion,
            free_dirs: r.chart.free_dirs,
            torsion_classes: verified,
            twists_truncated: r.chart.twists_truncated,
            side_condition_flags: flags,
            trace: DeductionTrace { steps: r.trace },
        });
    }
    families.sort_by(|a, b| {
        a.rep_q
            .cmp(&b.rep_q)
            .then_with(|| a.equations.cmp(&b.equations))
    });
    Ok(families)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn quintic_cover_pins_theta() {
        let fams = solve_genericity(&GroupSpec::g2(5), &SolveOptions::default()).unwrap();
        assert_eq!(fams.len(), 1);
        let f = &fams[0];
        assert_eq!(f.rep_q, vec![rat(2, 5), rat(1, 5)]);
        assert!(f.free_dirs.is_empty());
        assert!(f.rep_torsion.iter().all(Torsion::is_zero));
        assert!(!f.torsion_classes.is_empty());
    }

    #[test]
    fn degree_seven_is_always_generic() {
        let fams = solve_genericity(&GroupSpec::g2(7), &SolveOptions::default()).unwrap();
        assert!(fams.is_empty());
    }

    #[test]
    fn cubic_cover_gives_one_parameter_family() {
        let fams = solve_genericity(&GroupSpec::g2(3), &SolveOptions::default()).unwrap();
        assert_eq!(fams.len(), 1);
        let f = &fams[0];
        // x1 = q x2, with x2 free.
        assert_eq!(f.equations.len(), 1);
        assert_eq!(f.equations[0].exps, vec![1, -1]);
        assert_eq!(f.equations[0].q_rhs, rat(1, 1));
        assert!(f.equations[0].torsion.is_zero());
        assert_eq!(f.free_dirs.len(), 1);
    }

    #[test]
    fn small_linear_group() {
        let fams =
            solve_genericity(&GroupSpec::gl(3, 2), &SolveOptions::default()).unwrap();
        assert_eq!(fams.len(), 1);
        let f = &fams[0];
        assert_eq!(f.free_dirs.len(), 1);
        let en = *f.rep_q.last().unwrap();
        assert_eq!(f.rep_q[0] - en, rat(1, 1));
        assert_eq!(f.rep_q[1] - en, rat(1, 2));
    }

    #[test]
    fn gl_scope_is_enforced() {
        assert!(matches!(
            solve_genericity(&GroupSpec::gl(4, 2), &SolveOptions::default()),
            Err(DeduceError::GlScope { .. })
        ));
        assert!(matches!(
            solve_genericity(&GroupSpec::g2(1), &SolveOptions::default()),
            Err(DeduceError::G2Scope { .. })
        ));
    }

    #[test]
    fn gl_stable_range_has_no_solutions() {
        let fams =
            solve_genericity(&GroupSpec::gl(3, 3), &SolveOptions::default()).unwrap();
        assert!(fams.is_empty());
    }

    #[test]
    fn traces_replay() {
        for g in [GroupSpec::g2(5), GroupSpec::g2(3), GroupSpec::gl(3, 2)] {
            let fams = solve_genericity(&g, &SolveOptions::default()).unwrap();
            for f in &fams {
                let state = f.trace.replay(g.nvars()).expect("consistent trace");
                assert_eq!(state.equations(), f.equations);
            }
        }
    }

    #[test]
    fn deterministic_output() {
        let a = solve_genericity(&GroupSpec::g2(4), &SolveOptions::default()).unwrap();
        let b = solve_genericity(&GroupSpec::g2(4), &SolveOptions::default()).unwrap();
        let fmt = |fams: &[SolutionFamily]| -> String {
            fams.iter()
                .map(|f| serde_json::to_string(&f.to_json()).unwrap())
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(fmt(&a), fmt(&b));
    }
}
