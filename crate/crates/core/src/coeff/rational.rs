use std::fmt;

use super::{field_inverse, Coeff, Fp, FpUniPoly, Prime};
use crate::error::{Error, Result};

/// An element of `F_p(t)`, kept as a reduced fraction with monic denominator.
///
/// Valuations only depend on `ord_t` of both parts, so reduction never
/// changes them; it only keeps degrees from compounding across sums.
#[derive(Clone)]
pub struct RationalFunction {
    num: FpUniPoly,
    den: FpUniPoly,
}

impl RationalFunction {
    pub fn new(num: FpUniPoly, den: FpUniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if num.prime() != den.prime() {
            return Err(Error::ModulusMismatch(num.prime().get(), den.prime().get()));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(num: FpUniPoly) -> Self {
        let p = num.prime();
        RationalFunction {
            num,
            den: FpUniPoly::one(p),
        }
    }

    pub fn constant(c: Fp) -> Self {
        Self::from_poly(FpUniPoly::constant(c))
    }

    fn normalized(num: FpUniPoly, den: FpUniPoly) -> Self {
        let p = num.prime();
        if num.is_zero() {
            return RationalFunction {
                num,
                den: FpUniPoly::one(p),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lead = den.leading().expect("denominator is nonzero");
        if lead != Fp::one(p) {
            let inv = field_inverse(lead).expect("nonzero");
            num = num.scale(inv);
            den = den.scale(inv);
        }
        RationalFunction { num, den }
    }

    pub fn numerator(&self) -> &FpUniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &FpUniPoly {
        &self.den
    }

    pub fn prime(&self) -> Prime {
        self.num.prime()
    }

    /// The numerator, when the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&FpUniPoly> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    /// `ord_t(num) - ord_t(den)`; `None` stands for `+inf` (the zero element).
    pub fn valuation(&self) -> Option<i64> {
        let n = self.num.ord_t()? as i64;
        let d = self.den.ord_t().expect("denominator is nonzero") as i64;
        Some(n - d)
    }
}

/// The `t`-adic valuation of a nonzero rational function.
pub fn rat_valuation(r: &RationalFunction) -> Result<i64> {
    r.valuation().ok_or(Error::ZeroValuation)
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} mod {}", self.prime())
    }
}

impl Coeff for RationalFunction {
    fn zero_like(&self) -> Self {
        Self::from_poly(FpUniPoly::zero(self.prime()))
    }
    fn one_like(&self) -> Self {
        Self::from_poly(FpUniPoly::one(self.prime()))
    }
    fn from_int(&self, n: i64) -> Self {
        Self::constant(Fp::from_i64(n, self.prime()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        Self::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return self.zero_like();
        }
        Self::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::normalized(self.den.clone(), self.num.clone()))
    }
    fn characteristic(&self) -> u32 {
        self.prime().get()
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.prime() == other.prime()
    }
}
