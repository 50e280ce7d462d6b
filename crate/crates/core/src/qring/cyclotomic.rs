//! Exact arithmetic in the cyclotomic integer ring `Z[zeta_N]`, with elements
//! stored as integer coefficient vectors modulo the N-th cyclotomic polynomial.

use std::fmt;

/// Coefficients of the N-th cyclotomic polynomial, constant term first,
/// including the leading 1.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    use std::cell::RefCell;
    use std::collections::BTreeMap;
    thread_local! {
        static CACHE: RefCell<BTreeMap<u64, Vec<i64>>> = const { RefCell::new(BTreeMap::new()) };
    }
    assert!(n >= 1);
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return hit;
    }
    // x^n - 1 divided by Phi_d for every proper divisor d of n.
    let mut f = vec![0i64; n as usize + 1];
    f[0] = -1;
    f[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            f = poly_div_exact(&f, &phi_d);
        }
    }
    CACHE.with(|c| c.borrow_mut().insert(n, f.clone()));
    f
}

/// Exact division of integer polynomials; panics if the division is inexact.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let lead = den[dn];
    assert!(lead == 1 || lead == -1, "divisor must be monic up to sign");
    let mut rem = num.to_vec();
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn] / lead;
        quot[i] = c;
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
    quot
}

/// An element of `Z[zeta_order]`, reduced modulo the cyclotomic polynomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cyclotomic {
    order: u64,
    /// Length `phi(order)`; index `i` is the coefficient of `zeta^i`.
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(order: u64) -> Self {
        let deg = cyclotomic_polynomial(order).len() - 1;
        Cyclotomic {
            order,
            coeffs: vec![0; deg],
        }
    }

    pub fn from_integer(order: u64, value: i64) -> Self {
        let mut out = Self::zero(order);
        if !out.coeffs.is_empty() {
            out.coeffs[0] = value;
        } else {
            // Phi_1 has degree 1, so the vector is never empty for order >= 1.
            unreachable!("cyclotomic polynomial has positive degree");
        }
        out
    }

    pub fn one(order: u64) -> Self {
        Self::from_integer(order, 1)
    }

    /// `zeta_order^k` as a ring element.
    pub fn root_power(order: u64, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut dense = vec![0i64; e + 1];
        dense[e] = 1;
        Self::reduce_dense(order, dense)
    }

    fn reduce_dense(order: u64, mut dense: Vec<i64>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        if dense.len() > deg {
            for i in (deg..dense.len()).rev() {
                let c = dense[i];
                if c != 0 {
                    dense[i] = 0;
                    for (j, pj) in phi.iter().enumerate().take(deg) {
                        dense[i - deg + j] -= c * pj;
                    }
                }
            }
        }
        dense.resize(deg, 0);
        Cyclotomic {
            order,
            coeffs: dense,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The value as a plain integer, when no higher root-of-unity power
    /// carries a coefficient.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "cyclotomic order mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Cyclotomic {
            order: self.order,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "cyclotomic order mismatch");
        let mut dense = vec![0i64; self.coeffs.len() + other.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                dense[i + j] += a * b;
            }
        }
        Self::reduce_dense(self.order, dense)
    }

    /// Re-express this element in `Z[zeta_target]` for `order | target`.
    pub fn lift(&self, target: u64) -> Self {
        assert!(
            target.is_multiple_of(self.order),
            "target order must be a multiple of the current order"
        );
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as i64;
        let mut out = Cyclotomic::zero(target);
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c != 0 {
                out = out.add(&Cyclotomic::root_power(target, step * i as i64).scale(*c));
            }
        }
        out
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
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
            let a = c.abs();
            if i == 0 {
                write!(f, "{a}")?;
            } else {
                if a != 1 {
                    write!(f, "{a}*")?;
                }
                if i == 1 {
                    write!(f, "z{}", self.order)?;
                } else {
                    write!(f, "z{}^{}", self.order, i)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = Cyclotomic::one(3)
            .add(&Cyclotomic::root_power(3, 1))
            .add(&Cyclotomic::root_power(3, 2));
        assert!(s.is_zero());
    }

    #[test]
    fn fourth_root_squares_to_minus_one() {
        let i = Cyclotomic::root_power(4, 1);
        let m1 = Cyclotomic::from_integer(4, -1);
        assert_eq!(i.mul(&i), m1);
    }

    #[test]
    fn root_powers_wrap() {
        assert_eq!(
            Cyclotomic::root_power(6, 7),
            Cyclotomic::root_power(6, 1)
        );
        assert_eq!(Cyclotomic::root_power(6, -1), Cyclotomic::root_power(6, 5));
    }

    #[test]
    fn lifting_preserves_values() {
        // zeta_3 lifted to Z[zeta_12] still satisfies 1 + z + z^2 = 0.
        let z = Cyclotomic::root_power(3, 1).lift(12);
        let s = Cyclotomic::one(12).add(&z).add(&z.mul(&z));
        assert!(s.is_zero());
    }
}
