//! Numeric Gauss and Jacobi sums over prime fields, used to back the formal
//! Gauss-symbol relations with measured values: the pairing relation, the
//! self-paired sign, and the degree-9 triple-product identity.

use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("prime {0} exceeds the supported bound {MAX_PRIME}")]
    PrimeTooLarge(u64),
    #[error("character order {m} does not divide p - 1 = {pm1}")]
    OrderDoesNotDivide { m: u64, pm1: u64 },
    #[error("character order must be at least 2, got {0}")]
    OrderTooSmall(u64),
    #[error("character power {0} is trivial mod the order; the sum degenerates")]
    TrivialCharacter(i64),
    #[error("prime {0} is not 1 mod 9")]
    NotOneModNine(u64),
}

pub const MAX_PRIME: u64 = 1_000_000;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    'g: for g in 2..p {
        for f in &factors {
            if pow_mod(g, (p - 1) / f, p) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

/// A multiplicative character of order `m` on the prime field `F_p`, stored
/// through the discrete logarithm to a fixed primitive root so powers are
/// exact integer arithmetic.
#[derive(Clone, Debug)]
pub struct FieldCharacterSpec {
    p: u64,
    m: u64,
    generator: u64,
    /// `dlog[t]` for `t` in `1..p`; index 0 is unused.
    dlog: Vec<u32>,
}

impl FieldCharacterSpec {
    pub fn new(p: u64, m: u64) -> Result<Self, FfError> {
        if p > MAX_PRIME {
            return Err(FfError::PrimeTooLarge(p));
        }
        if p < 3 || !is_prime(p) {
            return Err(FfError::NotOddPrime(p));
        }
        if m < 2 {
            return Err(FfError::OrderTooSmall(m));
        }
        if !(p - 1).is_multiple_of(m) {
            return Err(FfError::OrderDoesNotDivide { m, pm1: p - 1 });
        }
        let generator = primitive_root(p);
        let mut dlog = vec![0u32; p as usize];
        let mut t = 1u64;
        for k in 0..p - 1 {
            dlog[t as usize] = k as u32;
            t = t * generator % p;
        }
        Ok(FieldCharacterSpec {
            p,
            m,
            generator,
            dlog,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// `chi^a(t)`: the order-`m` character to the power `a`, with
    /// `chi(0) = 0`.
    pub fn chi(&self, a: i64, t: u64) -> Complex64 {
        debug_assert!(t < self.p);
        if t == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let k = i64::from(self.dlog[t as usize]);
        let e = (a * k).rem_euclid(self.m as i64);
        Complex64::from_polar(1.0, TAU * e as f64 / self.m as f64)
    }

    fn additive(&self, t: u64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * (t % self.p) as f64 / self.p as f64)
    }

    /// Unnormalized Gauss sum `sum_t chi^a(t) e(t/p)` of modulus `sqrt(p)`.
    pub fn gauss(&self, a: i64) -> Result<Complex64, FfError> {
        if a.rem_euclid(self.m as i64) == 0 {
            return Err(FfError::TrivialCharacter(a));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 1..self.p {
            acc += self.chi(a, t) * self.additive(t);
        }
        Ok(acc)
    }

    /// Normalized Gauss sum `p^(-1/2) * gauss(a)`, of modulus 1.
    pub fn normalized_gauss(&self, a: i64) -> Result<Complex64, FfError> {
        Ok(self.gauss(a)? / (self.p as f64).sqrt())
    }

    /// Jacobi sum `sum_{t != 0,1} chi^a(t) chi^b(1-t)`, of modulus
    /// `sqrt(p)` for nondegenerate parameters.
    pub fn jacobi(&self, a: i64, b: i64) -> Result<Complex64, FfError> {
        let m = self.m as i64;
        if a.rem_euclid(m) == 0 {
            return Err(FfError::TrivialCharacter(a));
        }
        if b.rem_euclid(m) == 0 {
            return Err(FfError::TrivialCharacter(b));
        }
        if (a + b).rem_euclid(m) == 0 {
            return Err(FfError::TrivialCharacter(a + b));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 2..self.p {
            acc += self.chi(a, t) * self.chi(b, self.p + 1 - t);
        }
        Ok(acc)
    }
}

/// The depth-one unit-group average `p^-1 sum_{t != 0,1} chi^6(t) chi^2(1-t)`
/// for the order-9 character, divided by the predicted normalized product
/// `p^(-1/2) g1 g6 g2`. The ratio is 1 when the identity holds.
pub fn verify_g234(p: u64) -> Result<Complex64, FfError> {
    if p % 9 != 1 {
        return Err(FfError::NotOneModNine(p));
    }
    let f = FieldCharacterSpec::new(p, 9)?;
    let lhs = f.jacobi(6, 2)? / p as f64;
    let rhs = f.normalized_gauss(1)? * f.normalized_gauss(6)? * f.normalized_gauss(2)?
        / (p as f64).sqrt();
    Ok(lhs / rhs)
}

/// Measured checks packaged for reporting: the largest deviation over the
/// checked instances.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub p: u64,
    pub m: u64,
    pub check: &'static str,
    pub max_error: f64,
    pub pass: bool,
}

/// `|g_a| = 1` and `g_a * g_{m-a} = 1` for all `1 <= a < m/2`, plus the
/// measured self-paired square when `m` is even.
pub fn pairing_report(p: u64, m: u64, tol: f64) -> Result<CheckReport, FfError> {
    let f = FieldCharacterSpec::new(p, m)?;
    let mut max_error: f64 = 0.0;
    for a in 1..m as i64 {
        let g = f.normalized_gauss(a)?;
        max_error = max_error.max((g.norm() - 1.0).abs());
        let pair = g * f.normalized_gauss(m as i64 - a)?;
        max_error = max_error.max((pair - Complex64::new(1.0, 0.0)).norm());
    }
    Ok(CheckReport {
        p,
        m,
        check: "pairing",
        max_error,
        pass: max_error < tol,
    })
}

/// Measured sign of `g(m, m/2)^2` for even `m`; the formal self-pair
/// reduction assumes `+1`, which holds exactly when `p = 1 mod 4`.
pub fn self_pair_sign(p: u64, m: u64) -> Result<Complex64, FfError> {
    if !m.is_multiple_of(2) {
        return Err(FfError::TrivialCharacter(0));
    }
    let f = FieldCharacterSpec::new(p, m)?;
    let g = f.normalized_gauss(m as i64 / 2)?;
    Ok(g * g)
}

/// Gauss-Jacobi relation `jacobi(a,b) = gauss(a) gauss(b) / gauss(a+b)` over
/// every nondegenerate pair.
pub fn jacobi_report(p: u64, m: u64, tol: f64) -> Result<CheckReport, FfError> {
    let f = FieldCharacterSpec::new(p, m)?;
    let mut max_error: f64 = 0.0;
    let mm = m as i64;
    for a in 1..mm {
        for b in 1..mm {
            if (a + b) % mm == 0 {
                continue;
            }
            let j = f.jacobi(a, b)?;
            max_error = max_error.max(((j.norm() - (p as f64).sqrt()) / (p as f64).sqrt()).abs());
            let predicted = f.gauss(a)? * f.gauss(b)? / f.gauss(a + b)?;
            max_error = max_error.max((j - predicted).norm() / (p as f64).sqrt());
        }
    }
    Ok(CheckReport {
        p,
        m,
        check: "jacobi",
        max_error,
        pass: max_error < tol,
    })
}

pub fn g234_report(p: u64, tol: f64) -> Result<CheckReport, FfError> {
    let ratio = verify_g234(p)?;
    let max_error = (ratio - Complex64::new(1.0, 0.0)).norm();
    Ok(CheckReport {
        p,
        m: 9,
        check: "g234",
        max_error,
        pass: max_error < tol,
    })
}
