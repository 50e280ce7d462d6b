//! Formal normalized Gauss-sum symbols `g(m,a)` subject to the pairing
//! relation `g(m,a) * g(m,m-a) = 1`.

use std::collections::BTreeMap;
use std::fmt;

use super::QringError;

/// How aggressively Gauss symbols are reduced when monomials are built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussReduction {
    /// Apply `g(m,m/2)^2 = 1` for even `m`, so self-paired exponents are
    /// kept in `{0,1}`. Valid when the residue field satisfies
    /// `q = 1 mod 2m`; `ffgauss` measures the sign in general.
    pub reduce_self_paired: bool,
}

impl Default for GaussReduction {
    fn default() -> Self {
        GaussReduction {
            reduce_self_paired: true,
        }
    }
}

/// A normalized Gauss-sum symbol of modulus `m` and residue `a`, stored in
/// canonical form with `1 <= a <= m/2`. Residues above `m/2` are expressed
/// through the pairing relation as inverse powers of `g(m, m-a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussSymbol {
    modulus: u32,
    residue: u32,
}

impl GaussSymbol {
    /// Reduce `(m, a)` to the canonical representative. Returns the symbol
    /// together with `+1` or `-1`, the factor to multiply the exponent by.
    pub fn reduce(modulus: u32, residue: i64) -> Result<(GaussSymbol, i64), QringError> {
        if modulus < 2 {
            return Err(QringError::InvalidGaussSymbol { modulus, residue });
        }
        let m = i64::from(modulus);
        let a = residue.rem_euclid(m);
        if a == 0 {
            return Err(QringError::InvalidGaussSymbol { modulus, residue });
        }
        if 2 * a <= m {
            Ok((
                GaussSymbol {
                    modulus,
                    residue: a as u32,
                },
                1,
            ))
        } else {
            Ok((
                GaussSymbol {
                    modulus,
                    residue: (m - a) as u32,
                },
                -1,
            ))
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn residue(&self) -> u32 {
        self.residue
    }

    /// True when `a = m/2`, i.e. the symbol pairs with itself.
    pub fn is_self_paired(&self) -> bool {
        2 * self.residue == self.modulus
    }
}

impl fmt::Display for GaussSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g({},{})", self.modulus, self.residue)
    }
}

/// Merge a reduced `(modulus, residue, exponent)` triple into a canonical
/// exponent map.
pub(crate) fn insert_gauss(
    map: &mut BTreeMap<GaussSymbol, i64>,
    modulus: u32,
    residue: i64,
    exponent: i64,
    reduction: GaussReduction,
) -> Result<(), QringError> {
    if exponent == 0 {
        // Validate the symbol even when it contributes nothing.
        GaussSymbol::reduce(modulus, residue)?;
        return Ok(());
    }
    let (sym, sign) = GaussSymbol::reduce(modulus, residue)?;
    let entry = map.entry(sym).or_insert(0);
    *entry += sign * exponent;
    if sym.is_self_paired() && reduction.reduce_self_paired {
        *entry = entry.rem_euclid(2);
    }
    if *entry == 0 {
        map.remove(&sym);
    }
    Ok(())
}

/// Product of two canonical exponent maps.
pub(crate) fn merge_gauss(
    left: &BTreeMap<GaussSymbol, i64>,
    right: &BTreeMap<GaussSymbol, i64>,
    reduction: GaussReduction,
) -> BTreeMap<GaussSymbol, i64> {
    let mut out = left.clone();
    for (sym, exp) in right {
        let entry = out.entry(*sym).or_insert(0);
        *entry += exp;
        if sym.is_self_paired() && reduction.reduce_self_paired {
            *entry = entry.rem_euclid(2);
        }
        if *entry == 0 {
            out.remove(sym);
        }
    }
    out
}
