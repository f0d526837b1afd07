use std::fmt;

use serde::{Deserialize, Serialize};

use super::Coeff;
use crate::error::{Error, Result};

/// A prime modulus below 2^31, validated once at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of the prime field `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    p: Prime,
}

impl Fp {
    pub fn new(value: u64, p: Prime) -> Self {
        Fp {
            value: (value % p.0 as u64) as u32,
            p,
        }
    }

    pub fn from_i64(value: i64, p: Prime) -> Self {
        Fp {
            value: value.rem_euclid(p.0 as i64) as u32,
            p,
        }
    }

    pub fn zero(p: Prime) -> Self {
        Fp { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        Fp::new(1, p)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn prime(self) -> Prime {
        self.p
    }

    fn modulus(self) -> u64 {
        self.p.0 as u64
    }

    pub fn inv(self) -> Result<Fp> {
        field_inverse(self)
    }
}

/// Inverse in `F_p` via Fermat's little theorem.
pub fn field_inverse(a: Fp) -> Result<Fp> {
    if a.value == 0 {
        return Err(Error::ZeroInverse);
    }
    Ok(Coeff::pow(&a, a.modulus() - 2))
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl std::ops::Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            value: ((self.value as u64 + rhs.value as u64) % self.modulus()) as u32,
            p: self.p,
        }
    }
}

impl std::ops::Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            value: ((self.value as u64 + self.modulus() - rhs.value as u64) % self.modulus())
                as u32,
            p: self.p,
        }
    }
}

impl std::ops::Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            value: ((self.value as u64 * rhs.value as u64) % self.modulus()) as u32,
            p: self.p,
        }
    }
}

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: ((self.modulus() - self.value as u64) % self.modulus()) as u32,
            p: self.p,
        }
    }
}

impl Coeff for Fp {
    fn zero_like(&self) -> Self {
        Fp::zero(self.p)
    }
    fn one_like(&self) -> Self {
        Fp::one(self.p)
    }
    fn from_int(&self, n: i64) -> Self {
        Fp::from_i64(n, self.p)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn inverse(&self) -> Option<Self> {
        field_inverse(*self).ok()
    }
    fn characteristic(&self) -> u32 {
        self.p.0
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

/// Exponent of `p` in `n!` (Legendre).
fn factorial_valuation(mut n: u64, p: u64) -> u64 {
    let mut v = 0;
    while n > 0 {
        n /= p;
        v += n;
    }
    v
}

/// `n!` with every factor of `p` stripped, reduced mod `p`.
fn factorial_unit_part(n: u64, p: Prime) -> Fp {
    let pm = p.0 as u64;
    let mut acc = Fp::one(p);
    for mut i in 2..=n {
        while i % pm == 0 {
            i /= pm;
        }
        acc = acc * Fp::new(i, p);
    }
    acc
}

/// Multinomial coefficient `top! / prod(parts_i!)` reduced mod `p`.
///
/// Exact for any sizes: the `p`-adic valuation is counted separately and the
/// unit parts of the factorials are inverted in `F_p`.
pub fn multinomial_mod_p(top: u64, parts: &[u64], p: Prime) -> Result<Fp> {
    let sum: u64 = parts.iter().sum();
    if sum != top {
        return Err(Error::BadPartition { top, sum });
    }
    let pm = p.0 as u64;
    let v = factorial_valuation(top, pm)
        - parts
            .iter()
            .map(|&k| factorial_valuation(k, pm))
            .sum::<u64>();
    if v > 0 {
        return Ok(Fp::zero(p));
    }
    let mut den = Fp::one(p);
    for &k in parts {
        den = den * factorial_unit_part(k, p);
    }
    Ok(factorial_unit_part(top, p) * field_inverse(den)?)
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod_p(mut n: u64, mut k: u64, p: Prime) -> Fp {
    if k > n {
        return Fp::zero(p);
    }
    let pm = p.0 as u64;
    let mut acc = Fp::one(p);
    while k > 0 {
        let (nd, kd) = (n % pm, k % pm);
        if kd > nd {
            return Fp::zero(p);
        }
        acc = acc
            * multinomial_mod_p(nd, &[kd, nd - kd], p).expect("digits partition their sum");
        n /= pm;
        k /= pm;
    }
    acc
}
