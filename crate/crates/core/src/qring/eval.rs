//! Evaluation of polynomials at character points `x_i = zeta * q^(e)`,
//! possibly with free monomial parameters left symbolic. Gauss symbols pass
//! through unevaluated; coefficients land in a cyclotomic integer ring.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde_json::{json, Value};

use super::cyclotomic::Cyclotomic;
use super::gauss::GaussSymbol;
use super::monomial::Rat;
use super::poly::Polynomial;
use super::QringError;

/// An element of Q/Z: the exponent of a root of unity, stored as a reduced
/// fraction `num/den` with `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Torsion {
    num: i64,
    den: i64,
}

impl Torsion {
    pub fn zero() -> Self {
        Torsion { num: 0, den: 1 }
    }

    /// `zeta_order^power`, i.e. the class of `power/order`.
    pub fn new(order: i64, power: i64) -> Result<Self, QringError> {
        if order < 1 {
            return Err(QringError::InvalidTorsion { order, power });
        }
        Ok(Self::from_fraction(power, order))
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0);
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        Torsion {
            num: num / g,
            den: den / g,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// The order of the root of unity (the reduced denominator).
    pub fn order(&self) -> i64 {
        self.den
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn add(&self, other: &Torsion) -> Torsion {
        let den = self.den.lcm(&other.den);
        Torsion::from_fraction(self.num * (den / self.den) + other.num * (den / other.den), den)
    }

    pub fn neg(&self) -> Torsion {
        Torsion::from_fraction(-self.num, self.den)
    }

    pub fn scale(&self, k: i64) -> Torsion {
        Torsion::from_fraction(self.num.checked_mul(k).expect("torsion overflow"), self.den)
    }

    /// The coefficient `zeta_order^(...)` in a ring of the given order;
    /// `order` must be a multiple of the reduced denominator.
    pub fn as_root_power(&self, order: u64) -> i64 {
        debug_assert_eq!(order % self.den as u64, 0);
        self.num * (order as i64 / self.den)
    }
}

impl fmt::Display for Torsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "1")
        } else if self.den == 2 {
            write!(f, "-1")
        } else if self.num == 1 {
            write!(f, "z{}", self.den)
        } else {
            write!(f, "z{}^{}", self.den, self.num)
        }
    }
}

/// The value assigned to one character variable: `zeta * q^(q_exp)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharacterValue {
    pub torsion: Torsion,
    pub q_exp: Rat,
}

impl CharacterValue {
    pub fn q_power(e: Rat) -> Self {
        CharacterValue {
            torsion: Torsion::zero(),
            q_exp: e,
        }
    }
}

/// An evaluation point for a polynomial's character variables. Variables may
/// be left unassigned as long as they do not occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterAssignment {
    values: Vec<Option<CharacterValue>>,
}

impl CharacterAssignment {
    pub fn new(nvars: usize) -> Self {
        CharacterAssignment {
            values: vec![None; nvars],
        }
    }

    pub fn from_values(values: Vec<CharacterValue>) -> Self {
        CharacterAssignment {
            values: values.into_iter().map(Some).collect(),
        }
    }

    /// Torsion-free point with the given q-exponents.
    pub fn from_q_exps(exps: &[Rat]) -> Self {
        Self::from_values(exps.iter().map(|e| CharacterValue::q_power(*e)).collect())
    }

    pub fn set(&mut self, index: usize, value: CharacterValue) {
        self.values[index] = value.into();
    }

    pub fn nvars(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, index: usize) -> Option<CharacterValue> {
        self.values.get(index).copied().flatten()
    }
}

/// A family-shaped assignment: `x_i = zeta * q^(e) * u^(free_exps)` where the
/// `u_j` are fresh formal unit parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyValue {
    pub torsion: Torsion,
    pub q_exp: Rat,
    pub free_exps: Vec<i64>,
}

/// Key for one evaluated term: the q-power, the exponents of the free
/// parameters, and the residual Gauss monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalKey {
    pub q_exp: Rat,
    pub free: Vec<i64>,
    pub gauss: BTreeMap<GaussSymbol, i64>,
}

/// Same order as polynomial terms: descending in the q-exponent.
impl Ord for EvalKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .q_exp
            .cmp(&self.q_exp)
            .then_with(|| self.free.cmp(&other.free))
            .then_with(|| self.gauss.cmp(&other.gauss))
    }
}

impl PartialOrd for EvalKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of substituting character values into a polynomial. Zero is
/// decidable: distinct canonical Gauss monomials (and distinct q-powers and
/// free-parameter monomials) are treated as linearly independent, so the
/// value vanishes iff every cyclotomic coefficient does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluatedValue {
    order: u64,
    free_vars: usize,
    terms: BTreeMap<EvalKey, Cyclotomic>,
}

impl EvaluatedValue {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&EvalKey, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.free_vars, other.free_vars);
        let order = self.order.lcm(&other.order);
        let mut terms: BTreeMap<EvalKey, Cyclotomic> = BTreeMap::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let key = EvalKey {
                    q_exp: k1.q_exp + k2.q_exp,
                    free: k1
                        .free
                        .iter()
                        .zip(&k2.free)
                        .map(|(a, b)| a + b)
                        .collect(),
                    gauss: super::gauss::merge_gauss(
                        &k1.gauss,
                        &k2.gauss,
                        super::gauss::GaussReduction::default(),
                    ),
                };
                let c = c1.lift(order).mul(&c2.lift(order));
                let entry = terms.entry(key.clone()).or_insert_with(|| Cyclotomic::zero(order));
                *entry = entry.add(&c);
                if entry.is_zero() {
                    terms.remove(&key);
                }
            }
        }
        EvaluatedValue {
            order,
            free_vars: self.free_vars,
            terms,
        }
    }

    /// `{"N":..,"terms":[{"q":"num/den","free":[..],"g":[[m,a,e],..],
    /// "coeff":{"N":..,"coeffs":[..]}},..]}`; each cyclotomic coefficient
    /// is an integer vector modulo the N-th cyclotomic polynomial.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let g: Vec<Value> = k
                    .gauss
                    .iter()
                    .map(|(s, e)| json!([s.modulus(), s.residue(), e]))
                    .collect();
                json!({
                    "q": format!("{}/{}", k.q_exp.numer(), k.q_exp.denom()),
                    "free": k.free,
                    "g": g,
                    "coeff": { "N": c.order(), "coeffs": c.coeffs() },
                })
            })
            .collect();
        json!({ "N": self.order, "terms": terms })
    }
}

impl fmt::Display for EvaluatedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            // Integer coefficients print with their sign pulled out; genuine
            // cyclotomic coefficients are parenthesized.
            let (negative, coeff) = match c.as_integer() {
                Some(v) => (v < 0, if v.abs() == 1 { None } else { Some(v.abs().to_string()) }),
                None => (false, Some(format!("({c})"))),
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            if let Some(cs) = coeff {
                factors.push(cs);
            }
            if k.q_exp != Rat::from_integer(0) {
                if k.q_exp.is_integer() {
                    factors.push(format!("q^{}", k.q_exp.numer()));
                } else {
                    factors.push(format!("q^({})", k.q_exp));
                }
            }
            for (i, e) in k.free.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("u{}", i + 1)),
                    _ => factors.push(format!("u{}^{}", i + 1, e)),
                }
            }
            for (s, e) in &k.gauss {
                if *e == 1 {
                    factors.push(format!("{s}"));
                } else {
                    factors.push(format!("{s}^{e}"));
                }
            }
            if factors.is_empty() {
                write!(f, "1")?;
            } else {
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Core substitution: each occurring variable must have a value; the result
/// is a ring homomorphism in the assigned variables.
pub fn substitute_family(
    p: &Polynomial,
    values: &[Option<FamilyValue>],
    free_vars: usize,
) -> Result<EvaluatedValue, QringError> {
    let mut order: u64 = 1;
    for v in values.iter().flatten() {
        order = order.lcm(&(v.torsion.order() as u64));
    }
    let mut terms: BTreeMap<EvalKey, Cyclotomic> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut q_exp = m.q_exp();
        let mut torsion = Torsion::zero();
        let mut free = vec![0i64; free_vars];
        for (i, e) in m.x_exps().iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let v = values
                .get(i)
                .and_then(|v| v.as_ref())
                .ok_or(QringError::MissingVariable { index: i })?;
            q_exp += v.q_exp * Rat::from_integer(*e);
            torsion = torsion.add(&v.torsion.scale(*e));
            for (j, fe) in v.free_exps.iter().enumerate() {
                free[j] += fe * e;
            }
        }
        let key = EvalKey {
            q_exp,
            free,
            gauss: m.gauss().clone(),
        };
        let coeff = Cyclotomic::root_power(order, torsion.as_root_power(order)).scale(c);
        let entry = terms
            .entry(key.clone())
            .or_insert_with(|| Cyclotomic::zero(order));
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            terms.remove(&key);
        }
    }
    Ok(EvaluatedValue {
        order,
        free_vars,
        terms,
    })
}

/// Evaluate at a character point. Gauss symbols pass through unevaluated.
pub fn substitute(
    p: &Polynomial,
    assignment: &CharacterAssignment,
) -> Result<EvaluatedValue, QringError> {
    let values: Vec<Option<FamilyValue>> = (0..assignment.nvars())
        .map(|i| {
            assignment.get(i).map(|v| FamilyValue {
                torsion: v.torsion,
                q_exp: v.q_exp,
                free_exps: Vec::new(),
            })
        })
        .collect();
    substitute_family(p, &values, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qring::monomial::Monomial;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn binomial(m: Monomial) -> Polynomial {
        Polynomial::one(m.nvars())
            .try_sub(&Polynomial::from_monomial(1, m))
            .unwrap()
    }

    #[test]
    fn theta_point_kills_quintic_binomial() {
        // 1 - q^-3 x1^5 x2^5 vanishes at (q^(2/5), q^(1/5)).
        let p = binomial(Monomial::new(rat(-3, 1), vec![5, 5], []).unwrap());
        let a = CharacterAssignment::from_q_exps(&[rat(2, 5), rat(1, 5)]);
        assert!(substitute(&p, &a).unwrap().is_zero());
    }

    #[test]
    fn trivial_point_leaves_value() {
        let p = binomial(Monomial::new(rat(-3, 1), vec![5, 5], []).unwrap());
        let a = CharacterAssignment::from_q_exps(&[rat(0, 1), rat(0, 1)]);
        let v = substitute(&p, &a).unwrap();
        assert!(!v.is_zero());
        assert_eq!(v.to_string(), "1 - q^-3");
    }

    #[test]
    fn torsion_point_kills_one_plus_square() {
        // 1 + x^2 vanishes at x = zeta_4.
        let p = Polynomial::one(1)
            .try_add(&Polynomial::from_monomial(
                1,
                Monomial::new(rat(0, 1), vec![2], []).unwrap(),
            ))
            .unwrap();
        let mut a = CharacterAssignment::new(1);
        a.set(
            0,
            CharacterValue {
                torsion: Torsion::new(4, 1).unwrap(),
                q_exp: rat(0, 1),
            },
        );
        assert!(substitute(&p, &a).unwrap().is_zero());
    }

    #[test]
    fn missing_variable_is_an_error() {
        let p = binomial(Monomial::new(rat(0, 1), vec![1, 1], []).unwrap());
        let mut a = CharacterAssignment::new(2);
        a.set(0, CharacterValue::q_power(rat(1, 1)));
        assert!(matches!(
            substitute(&p, &a),
            Err(QringError::MissingVariable { index: 1 })
        ));
    }

    #[test]
    fn unused_variables_may_be_unassigned() {
        let p = binomial(Monomial::new(rat(-1, 1), vec![2, 0], []).unwrap());
        let mut a = CharacterAssignment::new(2);
        a.set(0, CharacterValue::q_power(rat(1, 2)));
        assert!(substitute(&p, &a).unwrap().is_zero());
    }

    #[test]
    fn family_substitution_keeps_free_exponents() {
        // 1 - q^-1 x1 x2^-1 on the family x1 = q * u, x2 = u: identically zero.
        let p = binomial(Monomial::new(rat(-1, 1), vec![1, -1], []).unwrap());
        let values = vec![
            Some(FamilyValue {
                torsion: Torsion::zero(),
                q_exp: rat(1, 1),
                free_exps: vec![1],
            }),
            Some(FamilyValue {
                torsion: Torsion::zero(),
                q_exp: rat(0, 1),
                free_exps: vec![1],
            }),
        ];
        assert!(substitute_family(&p, &values, 1).unwrap().is_zero());
    }
}
