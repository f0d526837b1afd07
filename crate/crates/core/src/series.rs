//! Truncated power series `c_0 + c_1 z + ... + c_prec z^prec + O(z^{prec+1})`.
//!
//! Every operation returns the largest precision it can certify and never
//! raises precision. The coefficient ring is whatever the coefficients carry.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// A `z`-adic order: exact, or only bounded below by the available precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    Finite(usize),
    AtLeast(usize),
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(k) => Some(k),
            Order::AtLeast(_) => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }

    /// The certified lower bound (the value itself when finite).
    pub fn lower_bound(self) -> usize {
        match self {
            Order::Finite(k) | Order::AtLeast(k) => k,
        }
    }

    /// Shift both variants by `-1`, saturating; used for `i_n = mult - 1`.
    pub fn pred(self) -> Order {
        match self {
            Order::Finite(k) => Order::Finite(k.saturating_sub(1)),
            Order::AtLeast(k) => Order::AtLeast(k.saturating_sub(1)),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncatedSeries<C> {
    /// Series with the given coefficients of `z^0..z^{len-1}`.
    pub fn new(coeffs: Vec<C>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::PreconditionViolation("a series needs at least one coefficient".into()))?;
        if coeffs.iter().any(|c| !c.same_ring(first)) {
            return Err(Error::RingMismatch);
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn zero(like: &C, prec: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![like.zero_like(); prec + 1],
        }
    }

    pub fn one(like: &C, prec: usize) -> Self {
        Self::constant(like.one_like(), prec)
    }

    pub fn constant(c: C, prec: usize) -> Self {
        let mut s = Self::zero(&c, prec);
        s.coeffs[0] = c;
        s
    }

    /// The series `z` (just `0` when `prec == 0`).
    pub fn identity(like: &C, prec: usize) -> Self {
        let mut s = Self::zero(like, prec);
        if prec >= 1 {
            s.coeffs[1] = like.one_like();
        }
        s
    }

    /// Sparse constructor; terms above `prec` are dropped.
    pub fn from_terms(like: &C, prec: usize, terms: impl IntoIterator<Item = (usize, C)>) -> Self {
        let mut s = Self::zero(like, prec);
        for (d, c) in terms {
            if d <= prec {
                s.coeffs[d] = s.coeffs[d].add(&c);
            }
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Option<&C> {
        self.coeffs.get(i)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    fn zero_elem(&self) -> C {
        self.coeffs[0].zero_like()
    }

    /// Nonzero `(degree, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &C)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Drop coefficients above `prec`; a larger `prec` is a no-op.
    pub fn truncate(&self, prec: usize) -> Self {
        let keep = (prec + 1).min(self.coeffs.len());
        TruncatedSeries {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.coeffs[0].same_ring(&other.coeffs[0]) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&C, &C) -> C) -> Result<Self> {
        self.check_ring(other)?;
        let n = self.coeffs.len().min(other.coeffs.len());
        Ok(TruncatedSeries {
            coeffs: (0..n).map(|i| op(&self.coeffs[i], &other.coeffs[i])).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, C::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, C::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(C::neg)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Product at precision `min(self.prec, other.prec)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let prec = self.prec().min(other.prec());
        Ok(mul_truncated(&self.coeffs, &other.coeffs, prec))
    }

    /// Multiply by `z^k`, keeping the same precision (top terms fall off).
    pub fn shift_up(&self, k: usize) -> Self {
        let mut s = Self::zero(&self.coeffs[0], self.prec());
        for i in 0..self.coeffs.len().saturating_sub(k) {
            s.coeffs[i + k] = self.coeffs[i].clone();
        }
        s
    }

    /// Divide by `z^k`; the caller guarantees the low `k` coefficients vanish.
    /// Precision drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.prec() {
            return Err(Error::InsufficientPrecision {
                needed: k,
                available: self.prec(),
            });
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::PreconditionViolation(format!(
                "series is not divisible by z^{k}"
            )));
        }
        Ok(TruncatedSeries {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Composition `self(inner(z))`; needs `inner(0) = 0`.
    ///
    /// Writes `inner = z (c + v)` with `v(0) = 0` and sums
    /// `a_k z^k sum_i C(k, i) c^{k-i} v^i`; since `ord v^i >= i ord v`, only
    /// a few powers of `v` are needed when `inner` is close to `c z`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_ring(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let prec = self.prec().min(inner.prec());
        let zero = self.zero_elem();
        let mut out = vec![zero.clone(); prec + 1];
        out[0] = self.coeffs[0].clone();
        if prec == 0 {
            return Ok(TruncatedSeries { coeffs: out });
        }
        let lin = inner.coeffs[1].clone();
        // v has precision prec - 1: inner = z (lin + v)
        let mut v: Vec<C> = inner.coeffs[1..=prec].to_vec();
        v[0] = zero.clone();
        let v_order = v.iter().position(|c| !c.is_zero());
        let max_power = match v_order {
            Some(r) => (prec - 1) / r,
            None => 0,
        };
        let mut v_pows: Vec<Vec<C>> = Vec::with_capacity(max_power + 1);
        let mut unit = vec![zero.clone(); prec];
        unit[0] = lin.one_like();
        v_pows.push(unit);
        for i in 1..=max_power {
            let next = mul_truncated(&v_pows[i - 1], &v, prec - 1).coeffs;
            v_pows.push(next);
        }
        let mut lin_pows = vec![lin.one_like()];
        for k in 1..=prec {
            let next = lin_pows[k - 1].mul(&lin);
            lin_pows.push(next);
        }
        let char_p = zero.characteristic() as u64;
        let mut pascal = vec![1u64];
        for k in 1..=prec {
            let mut row = vec![1u64; (k + 1).min(max_power + 1)];
            for (i, slot) in row.iter_mut().enumerate().skip(1) {
                let above = pascal.get(i).copied().unwrap_or(0);
                *slot = (pascal[i - 1] + above) % char_p;
            }
            pascal = row;
            let a_k = &self.coeffs[k];
            if a_k.is_zero() {
                continue;
            }
            let room = prec - k;
            for (i, &binom) in pascal.iter().enumerate() {
                if binom == 0 || lin_pows[k - i].is_zero() {
                    continue;
                }
                let scalar = a_k.mul(&lin_pows[k - i]).scale_int(binom as i64);
                if scalar.is_zero() {
                    continue;
                }
                for (d, c) in v_pows[i][..=room].iter().enumerate() {
                    if !c.is_zero() {
                        out[k + d] = out[k + d].add(&scalar.mul(c));
                    }
                }
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Multiplicative inverse of a series with unit constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse().ok_or(Error::NonUnitConstant)?;
        let prec = self.prec();
        let mut out = Vec::with_capacity(prec + 1);
        out.push(inv0.clone());
        for k in 1..=prec {
            let mut acc = self.zero_elem();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    acc = acc.add(&self.coeffs[i].mul(&out[k - i]));
                }
            }
            out.push(acc.mul(&inv0).neg());
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Compositional inverse by Newton iteration `g <- g - (h(g) - z) / h'(g)`.
    pub fn compositional_inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible("h(0) != 0"));
        }
        let prec = self.prec();
        if prec == 0 {
            return Ok(self.clone());
        }
        let lin_inv = self.coeffs[1]
            .inverse()
            .ok_or(Error::NotInvertible("h'(0) is not a unit"))?;
        let like = &self.coeffs[0];
        let mut g = Self::identity(like, 1).scale(&lin_inv);
        let mut cur = 1;
        while cur < prec {
            cur = (2 * cur).min(prec);
            let h = self.truncate(cur);
            let g_ext = TruncatedSeries::from_terms(like, cur, g.terms().map(|(d, c)| (d, c.clone())));
            let residual = h.compose(&g_ext)?.sub(&Self::identity(like, cur))?;
            // residual vanishes below z^{prev+1}, so the slope is only needed
            // to precision cur - prev - 1 and may be padded with zeros
            let slope = self.truncate(cur + 1).derivative().compose(&g_ext)?;
            let slope = TruncatedSeries::from_terms(like, cur, slope.terms().map(|(d, c)| (d, c.clone())));
            let step = residual.mul(&slope.reciprocal()?)?;
            g = g_ext.sub(&step)?;
        }
        Ok(g)
    }

    /// Formal derivative; precision drops by one (saturating at zero).
    pub fn derivative(&self) -> Self {
        let prec = self.prec();
        if prec == 0 {
            return Self::zero(&self.coeffs[0], 0);
        }
        TruncatedSeries {
            coeffs: (1..=prec)
                .map(|k| self.coeffs[k].scale_int(k as i64))
                .collect(),
        }
    }

    pub fn order(&self) -> Order {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => Order::Finite(k),
            None => Order::AtLeast(self.prec() + 1),
        }
    }

    /// `self^e` at the same precision, by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let prec = self.prec();
        let mut base = self.clone();
        let mut acc = Self::one(&self.coeffs[0], prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_truncated(&acc.coeffs, &base.coeffs, prec);
            }
            e >>= 1;
            if e > 0 {
                base = mul_truncated(&base.coeffs, &base.coeffs, prec);
            }
        }
        acc
    }
}

fn mul_truncated<C: Coeff>(a: &[C], b: &[C], prec: usize) -> TruncatedSeries<C> {
    let zero = a[0].zero_like();
    let mut out = vec![zero; prec + 1];
    let b_start = b.iter().position(|c| !c.is_zero());
    let Some(b_start) = b_start else {
        return TruncatedSeries { coeffs: out };
    };
    for (i, x) in a.iter().enumerate().take(prec + 1) {
        if x.is_zero() || i + b_start > prec {
            continue;
        }
        for j in b_start..=(prec - i).min(b.len() - 1) {
            let y = &b[j];
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    TruncatedSeries { coeffs: out }
}

impl<C: Coeff + fmt::Display> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.prec() + 1)
    }
}

impl<C: Coeff> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSeries")
            .field("prec", &self.prec())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}
