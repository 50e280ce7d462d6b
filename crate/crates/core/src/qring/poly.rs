//! Exact Laurent polynomials over the canonical monomials, with integer
//! coefficients and a unique sorted term order.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde_json::{json, Value};

use super::gauss::GaussReduction;
use super::monomial::{Monomial, Rat};
use super::QringError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, i64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Monomial::unit(nvars), c);
        }
        Polynomial { nvars, terms }
    }

    pub fn from_monomial(coeff: i64, m: Monomial) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(m, coeff);
        }
        Polynomial { nvars, terms }
    }

    /// Canonical form of a raw term list: like monomials merged, zero
    /// coefficients dropped. Monomials are already canonical by
    /// construction, so the Gauss pairing reduction has been applied.
    pub fn normalize(nvars: usize, raw: impl IntoIterator<Item = (i64, Monomial)>) -> Self {
        let mut terms: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (c, m) in raw {
            debug_assert_eq!(m.nvars(), nvars);
            *terms.entry(m).or_insert(0) += c;
        }
        terms.retain(|_, c| *c != 0);
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(m, c)| m.is_unit() && *c == 1)
    }

    pub fn has_gauss(&self) -> bool {
        self.terms.keys().any(Monomial::has_gauss)
    }

    /// True when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(i64, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*c, m))
        } else {
            None
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, QringError> {
        if self.nvars != other.nvars {
            return Err(QringError::DimensionMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert(0);
            *entry += c;
            if *entry == 0 {
                terms.remove(m);
            }
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, QringError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, QringError> {
        self.try_mul_with(other, GaussReduction::default())
    }

    pub fn try_mul_with(
        &self,
        other: &Self,
        reduction: GaussReduction,
    ) -> Result<Self, QringError> {
        if self.nvars != other.nvars {
            return Err(QringError::DimensionMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut terms: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul_with(m2, reduction)?;
                let entry = terms.entry(m.clone()).or_insert(0);
                *entry += c1 * c2;
                if *entry == 0 {
                    terms.remove(&m);
                }
            }
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Result<Self, QringError> {
        self.try_mul(&Polynomial::from_monomial(1, m.clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Polynomial::one(self.nvars);
        for _ in 0..k {
            out = out.try_mul(self).expect("same variable count");
        }
        out
    }

    /// Substitute each variable by a monomial in a (possibly different)
    /// variable set: `x_i -> q^0 * y^(grid[i])`. Gauss symbols pass through.
    pub fn substitute_vars(
        &self,
        grid: &[Vec<i64>],
        target_nvars: usize,
    ) -> Result<Self, QringError> {
        if grid.len() != self.nvars {
            return Err(QringError::DimensionMismatch {
                left: grid.len(),
                right: self.nvars,
            });
        }
        let mut terms: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut x = vec![0i64; target_nvars];
            for (i, e) in m.x_exps().iter().enumerate() {
                if *e != 0 {
                    for (j, g) in grid[i].iter().enumerate() {
                        x[j] += e * g;
                    }
                }
            }
            let gauss: Vec<(u32, i64, i64)> = m
                .gauss()
                .iter()
                .map(|(s, e)| (s.modulus(), i64::from(s.residue()), *e))
                .collect();
            let nm = Monomial::new(m.q_exp(), x, gauss)?;
            let entry = terms.entry(nm.clone()).or_insert(0);
            *entry += c;
            if *entry == 0 {
                terms.remove(&nm);
            }
        }
        Ok(Polynomial {
            nvars: target_nvars,
            terms,
        })
    }

    /// Canonical JSON: `{"terms":[{"c":..,"q":"num/den","x":[..],"g":[[m,a,e],..]},..]}`
    /// with terms in the monomial total order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let g: Vec<Value> = m
                    .gauss()
                    .iter()
                    .map(|(s, e)| json!([s.modulus(), s.residue(), e]))
                    .collect();
                json!({
                    "c": c,
                    "q": format!("{}/{}", m.q_exp().numer(), m.q_exp().denom()),
                    "x": m.x_exps(),
                    "g": g,
                })
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Value, nvars: usize) -> Result<Self, QringError> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or(QringError::MalformedJson)?;
        let mut raw = Vec::new();
        for t in terms {
            let c = t
                .get("c")
                .and_then(Value::as_i64)
                .ok_or(QringError::MalformedJson)?;
            let q = t
                .get("q")
                .and_then(Value::as_str)
                .ok_or(QringError::MalformedJson)?;
            let q = parse_rat(q).ok_or(QringError::MalformedJson)?;
            let x: Vec<i64> = t
                .get("x")
                .and_then(Value::as_array)
                .ok_or(QringError::MalformedJson)?
                .iter()
                .map(|e| e.as_i64().ok_or(QringError::MalformedJson))
                .collect::<Result<_, _>>()?;
            if x.len() != nvars {
                return Err(QringError::DimensionMismatch {
                    left: x.len(),
                    right: nvars,
                });
            }
            let mut gauss = Vec::new();
            if let Some(gs) = t.get("g").and_then(Value::as_array) {
                for g in gs {
                    let g = g.as_array().ok_or(QringError::MalformedJson)?;
                    if g.len() != 3 {
                        return Err(QringError::MalformedJson);
                    }
                    let m = g[0].as_u64().ok_or(QringError::MalformedJson)? as u32;
                    let a = g[1].as_i64().ok_or(QringError::MalformedJson)?;
                    let e = g[2].as_i64().ok_or(QringError::MalformedJson)?;
                    gauss.push((m, a, e));
                }
            }
            raw.push((c, Monomial::new(q, x, gauss)?));
        }
        Ok(Self::normalize(nvars, raw))
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                None
            } else {
                Some(Ratio::new(n, d))
            }
        }
        None => {
            let n: i64 = s.trim().parse().ok()?;
            Some(Ratio::from_integer(n))
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let a = c.abs();
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if *c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}
