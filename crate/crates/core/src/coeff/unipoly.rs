use std::fmt;

use super::{field_inverse, Coeff, Fp, Prime};
use crate::error::{Error, Result};

/// A univariate polynomial in `t` over `F_p`, stored without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpUniPoly {
    p: Prime,
    coeffs: Vec<u32>,
}

impl FpUniPoly {
    pub fn zero(p: Prime) -> Self {
        FpUniPoly { p, coeffs: vec![] }
    }

    pub fn one(p: Prime) -> Self {
        Self::constant(Fp::one(p))
    }

    pub fn constant(c: Fp) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * t^e`
    pub fn monomial(c: Fp, e: usize) -> Self {
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c.value();
        let mut out = FpUniPoly { p: c.prime(), coeffs };
        out.trim();
        out
    }

    pub fn from_coeffs(p: Prime, coeffs: &[u64]) -> Self {
        let pm = p.get() as u64;
        let mut out = FpUniPoly {
            p,
            coeffs: coeffs.iter().map(|&c| (c % pm) as u32).collect(),
        };
        out.trim();
        out
    }

    fn from_raw(p: Prime, coeffs: Vec<u32>) -> Self {
        let mut out = FpUniPoly { p, coeffs };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Least exponent with nonzero coefficient; `None` for the zero polynomial.
    pub fn ord_t(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn coeff(&self, i: usize) -> Fp {
        Fp::new(self.coeffs.get(i).copied().unwrap_or(0) as u64, self.p)
    }

    pub fn leading(&self) -> Option<Fp> {
        self.coeffs.last().map(|&c| Fp::new(c as u64, self.p))
    }

    /// The constant polynomial's value, if this is a constant.
    pub fn as_constant(&self) -> Option<Fp> {
        match self.coeffs.len() {
            0 => Some(Fp::zero(self.p)),
            1 => Some(self.coeff(0)),
            _ => None,
        }
    }

    fn pm(&self) -> u64 {
        self.p.get() as u64
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let pm = self.pm();
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0) as u64;
                let b = rhs.coeffs.get(i).copied().unwrap_or(0) as u64;
                ((a + b) % pm) as u32
            })
            .collect();
        Self::from_raw(self.p, coeffs)
    }

    pub fn neg(&self) -> Self {
        let pm = self.pm();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| ((pm - c as u64) % pm) as u32)
            .collect();
        Self::from_raw(self.p, coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.p);
        }
        let pm = self.pm();
        let mut acc = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % pm;
            }
        }
        Self::from_raw(self.p, acc.into_iter().map(|c| c as u32).collect())
    }

    pub fn scale(&self, c: Fp) -> Self {
        let pm = self.pm();
        let c = c.value() as u64;
        Self::from_raw(
            self.p,
            self.coeffs
                .iter()
                .map(|&a| (a as u64 * c % pm) as u32)
                .collect(),
        )
    }

    /// Euclidean division; `rhs` must be nonzero.
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self)> {
        let lead = rhs.leading().ok_or(Error::ZeroInverse)?;
        let lead_inv = field_inverse(lead)?;
        let dr = rhs.coeffs.len() - 1;
        let mut rem = self.clone();
        if self.coeffs.len() <= dr {
            return Ok((Self::zero(self.p), rem));
        }
        let mut quot = vec![0u32; self.coeffs.len() - dr];
        let pm = self.pm();
        while rem.coeffs.len() > dr {
            let shift = rem.coeffs.len() - 1 - dr;
            let c = rem.leading().unwrap() * lead_inv;
            quot[shift] = c.value();
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let sub = c.value() as u64 * b as u64 % pm;
                let slot = &mut rem.coeffs[shift + j];
                *slot = ((*slot as u64 + pm - sub) % pm) as u32;
            }
            rem.trim();
        }
        Ok((Self::from_raw(self.p, quot), rem))
    }

    /// Quotient when `rhs` divides `self` exactly.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(rhs)?;
        if !r.is_zero() {
            return Err(Error::DivisionFailure(format!(
                "{rhs} does not divide {self}"
            )));
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        match a.leading() {
            Some(l) => a.scale(field_inverse(l).expect("leading coefficient is nonzero")),
            None => a,
        }
    }

    pub fn eval(&self, t: Fp) -> Fp {
        self.coeffs
            .iter()
            .rev()
            .fold(Fp::zero(self.p), |acc, &c| acc * t + Fp::new(c as u64, self.p))
    }

    /// Parse `"c0+c1*t+c2*t^2"`-style text; terms may be any of `c`, `t`,
    /// `c*t`, `t^e`, `c*t^e`, in any order and with `-` signs.
    pub fn parse(text: &str, p: Prime) -> Result<Self> {
        let bad = |msg: String| Error::ParseError {
            field: format!("polynomial {text:?}"),
            message: msg,
        };
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty polynomial".into()));
        }
        let mut acc = Self::zero(p);
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1i64, &rest[1..]),
                b'-' => (-1i64, &rest[1..]),
                _ => (1i64, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() {
                return Err(bad("empty term".into()));
            }
            let (coef_str, power) = match term.find('t') {
                None => (term, 0usize),
                Some(pos) => {
                    let coef = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
                    let tail = &term[pos + 1..];
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(|| bad(format!("unexpected {tail:?} after t")))?
                            .parse::<usize>()
                            .map_err(|e| bad(format!("bad exponent in {term:?}: {e}")))?
                    };
                    (if coef.is_empty() { "1" } else { coef }, power)
                }
            };
            let c: i64 = coef_str
                .parse()
                .map_err(|e| bad(format!("bad coefficient {coef_str:?}: {e}")))?;
            acc = acc.add(&Self::monomial(Fp::from_i64(sign * c, p), power));
        }
        Ok(acc)
    }
}

impl fmt::Display for FpUniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}*t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FpUniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self}) mod {}", self.p)
    }
}

impl Coeff for FpUniPoly {
    fn zero_like(&self) -> Self {
        Self::zero(self.p)
    }
    fn one_like(&self) -> Self {
        Self::one(self.p)
    }
    fn from_int(&self, n: i64) -> Self {
        Self::constant(Fp::from_i64(n, self.p))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        FpUniPoly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        FpUniPoly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        FpUniPoly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        FpUniPoly::neg(self)
    }
    fn inverse(&self) -> Option<Self> {
        match self.coeffs.len() {
            1 => field_inverse(self.coeff(0)).ok().map(Self::constant),
            _ => None,
        }
    }
    fn characteristic(&self) -> u32 {
        self.p.get()
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn parse_forms() {
        let p = p3();
        assert_eq!(
            FpUniPoly::parse("1+2*t+t^3", p).unwrap(),
            FpUniPoly::from_coeffs(p, &[1, 2, 0, 1])
        );
        assert_eq!(
            FpUniPoly::parse("t", p).unwrap(),
            FpUniPoly::from_coeffs(p, &[0, 1])
        );
        assert_eq!(
            FpUniPoly::parse("t^2 - 1", p).unwrap(),
            FpUniPoly::from_coeffs(p, &[2, 0, 1])
        );
        assert_eq!(
            FpUniPoly::parse("5", p).unwrap(),
            FpUniPoly::from_coeffs(p, &[2])
        );
        assert!(FpUniPoly::parse("t^", p).is_err());
        assert!(FpUniPoly::parse("", p).is_err());
        assert!(FpUniPoly::parse("2*x", p).is_err());
    }

    #[test]
    fn display_round_trips() {
        let p = Prime::new(7).unwrap();
        let poly = FpUniPoly::from_coeffs(p, &[3, 0, 4, 1]);
        assert_eq!(poly.to_string(), "3+4*t^2+t^3");
        assert_eq!(FpUniPoly::parse(&poly.to_string(), p).unwrap(), poly);
    }

    #[test]
    fn division_and_gcd() {
        let p = Prime::new(5).unwrap();
        let a = FpUniPoly::from_coeffs(p, &[1, 1]); // 1 + t
        let b = FpUniPoly::from_coeffs(p, &[2, 0, 1]); // 2 + t^2
        let ab = a.mul(&b);
        assert_eq!(ab.div_exact(&a).unwrap(), b);
        assert_eq!(ab.gcd(&a.mul(&a)), a);
        assert!(b.div_exact(&a).is_err());
        assert_eq!(ab.ord_t(), Some(0));
        assert_eq!(FpUniPoly::monomial(Fp::one(p), 4).ord_t(), Some(4));
    }
}
