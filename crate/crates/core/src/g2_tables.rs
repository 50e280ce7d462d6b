//! Closed-form Whittaker values at the identity for covers of the
//! exceptional two-variable group, stored as verified constant data in the
//! product shape they were derived in, keyed by cover degree and the torus
//! coset of the functional.
//!
//! The table is read-only: entries are rebuilt from literal term data on
//! every lookup and guarded by the vanishing test suite. Custom tables are
//! deliberately not accepted.

use std::fmt;

use thiserror::Error;

use crate::qring::{
    substitute, CharacterAssignment, CharacterValue, EvaluatedValue, Monomial, Polynomial,
    QringError, Rat,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("no closed form tabulated for degree {r} and coset {eta}")]
    NotTabulated { r: u32, eta: EtaLabel },
    #[error("cover degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error(transparent)]
    Eval(#[from] QringError),
}

/// Torus-coset label of a Whittaker functional. `Identity` is the coset of
/// the identity; `Eta(alpha, beta)` is the coset of
/// `diag(p^alpha, p^beta, ...)`. Labels are opaque keys, not group elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EtaLabel {
    Identity,
    Eta(i64, i64),
}

impl fmt::Display for EtaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaLabel::Identity => write!(f, "e"),
            EtaLabel::Eta(a, b) => write!(f, "eta({a},{b})"),
        }
    }
}

impl EtaLabel {
    /// Accepts `e`, `eta(a,b)`, or the bare pair `(a,b)`.
    pub fn parse(s: &str) -> Option<EtaLabel> {
        let s = s.trim();
        if s == "e" || s == "identity" {
            return Some(EtaLabel::Identity);
        }
        let inner = s
            .strip_prefix("eta")
            .unwrap_or(s)
            .trim()
            .strip_prefix('(')?
            .strip_suffix(')')?;
        let (a, b) = inner.split_once(',')?;
        Some(EtaLabel::Eta(
            a.trim().parse().ok()?,
            b.trim().parse().ok()?,
        ))
    }
}

/// One tabulated value: a list of polynomial factors in `x1 = chi_1(p)` and
/// `x2 = chi_2(p)` whose product is the Whittaker value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormEntry {
    pub r: u32,
    pub eta: EtaLabel,
    pub factors: Vec<Polynomial>,
    /// Stable identifier of the table row.
    pub label: String,
    pub convergence_note: &'static str,
}

const CONVERGENCE: &str = "analytic continuation of an integral converging for |x1*x2| < q^(1/2)";

impl ClosedFormEntry {
    /// The canonical expanded product of the stored factors.
    pub fn expanded(&self) -> Polynomial {
        let mut out = Polynomial::one(2);
        for f in &self.factors {
            out = out.try_mul(f).expect("table factors are bivariate");
        }
        out
    }
}

/// Term helper: `c * q^(qn/qd) * x1^e1 * x2^e2`.
fn term(c: i64, qn: i64, qd: i64, e1: i64, e2: i64) -> Polynomial {
    Polynomial::from_monomial(
        c,
        Monomial::new(Rat::new(qn, qd), vec![e1, e2], []).expect("valid monomial"),
    )
}

/// Term with one Gauss symbol attached.
fn gterm(c: i64, qn: i64, qd: i64, e1: i64, e2: i64, m: u32, a: i64) -> Polynomial {
    Polynomial::from_monomial(
        c,
        Monomial::new(Rat::new(qn, qd), vec![e1, e2], [(m, a, 1)]).expect("valid monomial"),
    )
}

fn sum(parts: &[Polynomial]) -> Polynomial {
    let mut out = Polynomial::zero(2);
    for p in parts {
        out = out.try_add(p).expect("bivariate");
    }
    out
}

fn entry(r: u32, eta: EtaLabel, factors: Vec<Polynomial>) -> ClosedFormEntry {
    ClosedFormEntry {
        r,
        eta,
        factors,
        label: format!("r{r}.{eta}"),
        convergence_note: CONVERGENCE,
    }
}

/// The identity-coset value for degree 2, which only ever appears expanded:
/// `1 + (1-q^-1) q^-1 x1^2 (1+x2^2) - q^-2 x1^2 (x1^2+x2^4)
///    - (1-q^-1) q^-2 x1^4 x2^2 (1+x2^2) + q^-4 x1^6 x2^4`.
fn degree_two_identity() -> Polynomial {
    sum(&[
        term(1, 0, 1, 0, 0),
        term(1, -1, 1, 2, 0),
        term(-1, -2, 1, 2, 0),
        term(1, -1, 1, 2, 2),
        term(-1, -2, 1, 2, 2),
        term(-1, -2, 1, 4, 0),
        term(-1, -2, 1, 2, 4),
        term(-1, -2, 1, 4, 2),
        term(1, -3, 1, 4, 2),
        term(-1, -2, 1, 4, 4),
        term(1, -3, 1, 4, 4),
        term(1, -4, 1, 6, 4),
    ])
}

/// All finitely tabulated rows (the generic identity-coset rows equal to 1
/// are generated on lookup instead).
pub fn tabulated_entries() -> Vec<ClosedFormEntry> {
    vec![
        entry(2, EtaLabel::Identity, vec![degree_two_identity()]),
        entry(
            3,
            EtaLabel::Identity,
            vec![
                sum(&[term(1, 0, 1, 0, 0), term(-1, -1, 1, 1, -1)]),
                sum(&[term(1, 0, 1, 0, 0), term(-1, -1, 1, 2, 1)]),
                sum(&[term(1, 0, 1, 0, 0), term(-1, -1, 1, 1, 2)]),
                sum(&[
                    term(1, 0, 1, 0, 0),
                    term(1, -1, 1, 2, 1),
                    term(1, -1, 1, 1, 2),
                ]),
            ],
        ),
        entry(
            4,
            EtaLabel::Identity,
            vec![sum(&[term(1, 0, 1, 0, 0), term(-1, -2, 1, 4, 0)])],
        ),
        entry(
            5,
            EtaLabel::Identity,
            vec![sum(&[term(1, 0, 1, 0, 0), term(-1, -3, 1, 5, 5)])],
        ),
        entry(
            6,
            EtaLabel::Identity,
            vec![sum(&[term(1, 0, 1, 0, 0), term(-1, -2, 1, 2, 4)])],
        ),
        entry(
            9,
            EtaLabel::Identity,
            vec![sum(&[term(1, 0, 1, 0, 0), term(-1, -3, 1, 6, 3)])],
        ),
        entry(
            2,
            EtaLabel::Eta(1, -1),
            vec![
                term(1, -3, 2, 2, -2),
                sum(&[term(1, 0, 1, 0, 0), term(1, 0, 1, 0, 2)]),
                sum(&[term(1, 0, 1, 0, 0), term(1, -1, 1, 2, 1)]),
                sum(&[term(1, 0, 1, 0, 0), term(-1, -1, 1, 0, 2)]),
                sum(&[term(1, 0, 1, 0, 0), term(-1, -1, 1, 2, 1)]),
            ],
        ),
        entry(
            4,
            EtaLabel::Eta(3, -3),
            vec![
                gterm(1, -7, 2, 4, -4, 8, 6),
                sum(&[term(1, 0, 1, 0, 0), term(-1, -1, 1, 0, 4)]),
            ],
        ),
        entry(
            6,
            EtaLabel::Eta(1, -1),
            vec![
                term(1, -3, 2, 2, -2),
                sum(&[
                    term(1, 0, 1, 0, 0),
                    term(-1, -2, 1, 4, 2),
                    term(1, -1, 1, 2, 4),
                    term(-1, -2, 1, 2, 4),
                ]),
            ],
        ),
        entry(
            9,
            EtaLabel::Eta(5, -5),
            vec![
                gterm(1, -11, 2, 6, -6, 9, 6),
                sum(&[term(1, 0, 1, 0, 0), term(-1, -2, 1, 3, 6)]),
            ],
        ),
        entry(2, EtaLabel::Eta(1, 0), vec![Polynomial::zero(2)]),
        entry(
            2,
            EtaLabel::Eta(0, 1),
            vec![
                term(1, -3, 2, 0, 2),
                sum(&[term(1, 0, 1, 0, 0), term(-1, -1, 1, 2, -2)]),
                sum(&[term(1, 0, 1, 0, 0), term(-1, -2, 1, 4, 4)]),
            ],
        ),
        entry(
            3,
            EtaLabel::Eta(0, 2),
            vec![
                term(1, -5, 2, 0, 3),
                sum(&[term(1, 0, 1, 0, 0), term(-1, -1, 1, 1, -1)]),
                sum(&[
                    term(1, -5, 2, 5, 4),
                    gterm(1, 0, 1, 0, 0, 3, 2),
                    gterm(1, 0, 1, 1, -1, 3, 2),
                    gterm(-1, -1, 1, 3, 0, 3, 2),
                    gterm(-1, -1, 1, 2, 1, 3, 2),
                    gterm(-1, -1, 1, 1, 2, 3, 2),
                ]),
            ],
        ),
    ]
}

/// Degrees whose identity-coset value is not the constant 1.
pub const NONTRIVIAL_DEGREES: [u32; 6] = [2, 3, 4, 5, 6, 9];

/// Look up the closed form for `(r, eta)`. For the identity coset and a
/// degree outside the nontrivial list the value is the constant 1; any other
/// absent key is an error.
pub fn lookup(r: u32, eta: EtaLabel) -> Result<ClosedFormEntry, TableError> {
    if let Some(e) = tabulated_entries()
        .into_iter()
        .find(|e| e.r == r && e.eta == eta)
    {
        return Ok(e);
    }
    if eta == EtaLabel::Identity {
        return Ok(entry(r, eta, vec![Polynomial::one(2)]));
    }
    Err(TableError::NotTabulated { r, eta })
}

/// The q-exponents `(e1, e2)` of the distinguished (theta) character:
/// `(2/r, 1/r)` when 3 does not divide `r`, and `(4/r, 1/r)` when it does.
pub fn theta_character(r: u32) -> Result<(Rat, Rat), TableError> {
    if r < 2 {
        return Err(TableError::DegreeTooSmall(r));
    }
    let rr = i64::from(r);
    if rr % 3 == 0 {
        Ok((Rat::new(4, rr), Rat::new(1, rr)))
    } else {
        Ok((Rat::new(2, rr), Rat::new(1, rr)))
    }
}

/// The theta character as an evaluation point.
pub fn theta_assignment(r: u32) -> Result<CharacterAssignment, TableError> {
    let (e1, e2) = theta_character(r)?;
    Ok(CharacterAssignment::from_values(vec![
        CharacterValue::q_power(e1),
        CharacterValue::q_power(e2),
    ]))
}

/// Evaluate a tabulated entry at a character point.
pub fn evaluate_entry(
    r: u32,
    eta: EtaLabel,
    a: &CharacterAssignment,
) -> Result<EvaluatedValue, TableError> {
    let entry = lookup(r, eta)?;
    Ok(substitute(&entry.expanded(), a)?)
}
