//! Canonical monomials `q^(a) * x1^(e1) ... xn^(en) * g(m,a)^(k) ...` with an
//! exact rational q-exponent, integer character exponents, and formal Gauss
//! symbols.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use super::gauss::{insert_gauss, merge_gauss, GaussReduction, GaussSymbol};
use super::QringError;

pub type Rat = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    q_exp: Rat,
    x_exps: Vec<i64>,
    gauss: BTreeMap<GaussSymbol, i64>,
}

/// Total term order: descending in the q-exponent (so constants print
/// first), then lexicographic in the character exponents and Gauss factors.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .q_exp
            .cmp(&self.q_exp)
            .then_with(|| self.x_exps.cmp(&other.x_exps))
            .then_with(|| self.gauss.cmp(&other.gauss))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    /// Build a canonical monomial. Gauss factors are given as
    /// `(modulus, residue, exponent)` triples and are fully reduced.
    pub fn new(
        q_exp: Rat,
        x_exps: Vec<i64>,
        gauss: impl IntoIterator<Item = (u32, i64, i64)>,
    ) -> Result<Self, QringError> {
        Self::with_reduction(q_exp, x_exps, gauss, GaussReduction::default())
    }

    pub fn with_reduction(
        q_exp: Rat,
        x_exps: Vec<i64>,
        gauss: impl IntoIterator<Item = (u32, i64, i64)>,
        reduction: GaussReduction,
    ) -> Result<Self, QringError> {
        let mut map = BTreeMap::new();
        for (m, a, e) in gauss {
            insert_gauss(&mut map, m, a, e, reduction)?;
        }
        Ok(Monomial {
            q_exp,
            x_exps,
            gauss: map,
        })
    }

    pub fn unit(nvars: usize) -> Self {
        Monomial {
            q_exp: Rat::from_integer(0),
            x_exps: vec![0; nvars],
            gauss: BTreeMap::new(),
        }
    }

    pub fn q_power(nvars: usize, e: Rat) -> Self {
        Monomial {
            q_exp: e,
            x_exps: vec![0; nvars],
            gauss: BTreeMap::new(),
        }
    }

    /// `x_i^e` (zero-based variable index).
    pub fn var_pow(nvars: usize, i: usize, e: i64) -> Self {
        assert!(i < nvars);
        let mut x = vec![0; nvars];
        x[i] = e;
        Monomial {
            q_exp: Rat::from_integer(0),
            x_exps: x,
            gauss: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.x_exps.len()
    }

    pub fn q_exp(&self) -> Rat {
        self.q_exp
    }

    pub fn x_exps(&self) -> &[i64] {
        &self.x_exps
    }

    pub fn gauss(&self) -> &BTreeMap<GaussSymbol, i64> {
        &self.gauss
    }

    pub fn has_gauss(&self) -> bool {
        !self.gauss.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.q_exp == Rat::from_integer(0)
            && self.x_exps.iter().all(|&e| e == 0)
            && self.gauss.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, QringError> {
        self.mul_with(other, GaussReduction::default())
    }

    pub fn mul_with(&self, other: &Self, reduction: GaussReduction) -> Result<Self, QringError> {
        if self.nvars() != other.nvars() {
            return Err(QringError::DimensionMismatch {
                left: self.nvars(),
                right: other.nvars(),
            });
        }
        let x_exps = self
            .x_exps
            .iter()
            .zip(&other.x_exps)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Monomial {
            q_exp: self.q_exp + other.q_exp,
            x_exps,
            gauss: merge_gauss(&self.gauss, &other.gauss, reduction),
        })
    }

    /// Integer power; negative powers invert (Gauss symbols via pairing).
    pub fn pow(&self, k: i64) -> Self {
        let mut gauss = BTreeMap::new();
        for (sym, e) in &self.gauss {
            let mut exp = e * k;
            if sym.is_self_paired() {
                exp = exp.rem_euclid(2);
            }
            if exp != 0 {
                gauss.insert(*sym, exp);
            }
        }
        Monomial {
            q_exp: self.q_exp * Rat::from_integer(k),
            x_exps: self.x_exps.iter().map(|e| e * k).collect(),
            gauss,
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.q_exp != Rat::from_integer(0) {
            if self.q_exp.is_integer() {
                parts.push(format!("q^{}", self.q_exp.numer()));
            } else {
                parts.push(format!("q^({})", self.q_exp));
            }
        }
        for (i, e) in self.x_exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        for (sym, e) in &self.gauss {
            if *e == 1 {
                parts.push(format!("{sym}"));
            } else {
                parts.push(format!("{sym}^{e}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn gauss_canonicalization_in_constructor() {
        // g(3,1) * g(3,2) = 1
        let m = Monomial::new(rat(0, 1), vec![0, 0], [(3, 1, 1), (3, 2, 1)]).unwrap();
        assert!(m.is_unit());

        // g(8,6) = g(8,2)^(-1)
        let m = Monomial::new(rat(0, 1), vec![], [(8, 6, 1)]).unwrap();
        let (sym, _) = GaussSymbol::reduce(8, 2).unwrap();
        assert_eq!(m.gauss().get(&sym), Some(&-1));
    }

    #[test]
    fn multiplication_adds_exponents() {
        let a = Monomial::new(rat(-1, 2), vec![2, 0], [(3, 1, 1)]).unwrap();
        let b = Monomial::new(rat(-1, 2), vec![1, -1], [(3, 1, 1)]).unwrap();
        let c = a.mul(&b).unwrap();
        assert_eq!(c.q_exp(), rat(-1, 1));
        assert_eq!(c.x_exps(), &[3, -1]);
        let (sym, _) = GaussSymbol::reduce(3, 1).unwrap();
        assert_eq!(c.gauss().get(&sym), Some(&2));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = Monomial::unit(2);
        let b = Monomial::unit(3);
        assert!(matches!(
            a.mul(&b),
            Err(QringError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inverse_cancels() {
        let a = Monomial::new(rat(3, 2), vec![1, -4], [(9, 2, 3)]).unwrap();
        assert!(a.mul(&a.inv()).unwrap().is_unit());
    }
}
