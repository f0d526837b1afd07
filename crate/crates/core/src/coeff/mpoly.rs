use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::{Coeff, Fp, Prime};
use crate::error::{Error, Result};

/// A monomial `x_{v1}^{e1} * x_{v2}^{e2} * ...` stored sparsely by variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    /// `(variable, exponent)` pairs, variables strictly increasing, exponents > 0.
    exps: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(index: u32) -> Self {
        Monomial {
            degree: 1,
            exps: vec![(index, 1)],
        }
    }

    pub fn from_exponents(exps: &[(u32, u32)]) -> Self {
        let mut m = Monomial::one();
        for &(v, e) in exps {
            for _ in 0..e {
                m = m.mul(&Monomial::var(v));
            }
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponent(&self, var: u32) -> u32 {
        self.exps
            .iter()
            .find(|&&(v, _)| v == var)
            .map_or(0, |&(_, e)| e)
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.exps
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + rhs.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < rhs.exps.len() {
            let (a, b) = (self.exps[i], rhs.exps[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    exps.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&rhs.exps[j..]);
        Monomial {
            degree: self.degree + rhs.degree,
            exps,
        }
    }
}

/// Graded lexicographic with `x_0 > x_1 > ...`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (a, b) in self.exps.iter().zip(&other.exps) {
                if a.0 != b.0 {
                    // the side holding the smaller variable index is larger
                    return b.0.cmp(&a.0);
                }
                if a.1 != b.1 {
                    return a.1.cmp(&b.1);
                }
            }
            self.exps.len().cmp(&other.exps.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A sparse polynomial in `x_0, x_1, ...` over `F_p`.
///
/// No zero coefficients are ever stored, so equality is structural.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    p: Prime,
    terms: BTreeMap<Monomial, u32>,
}

impl MPoly {
    pub fn zero(p: Prime) -> Self {
        MPoly {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Fp) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(index: u32, p: Prime) -> Self {
        Self::term(Fp::one(p), Monomial::var(index))
    }

    pub fn term(c: Fp, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if c.value() != 0 {
            terms.insert(m, c.value());
        }
        MPoly { p: c.prime(), terms }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Fp)> {
        self.terms
            .iter()
            .rev()
            .map(|(m, &c)| (m, Fp::new(c as u64, self.p)))
    }

    pub fn coeff_of(&self, m: &Monomial) -> Fp {
        Fp::new(self.terms.get(m).copied().unwrap_or(0) as u64, self.p)
    }

    /// Largest variable index that occurs, if any.
    pub fn max_var(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter_map(|m| m.exps.last().map(|&(v, _)| v))
            .max()
    }

    fn accumulate(&mut self, m: Monomial, c: u64) {
        let pm = self.p.get() as u64;
        let c = c % pm;
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c as u32);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = (*e.get() as u64 + c) % pm;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v as u32;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.accumulate(m.clone(), c as u64);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let pm = self.p.get();
        MPoly {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), pm - c))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let pm = self.p.get() as u64;
        let mut out = MPoly::zero(self.p);
        if self.is_empty() || rhs.is_empty() {
            return out;
        }
        if rhs.terms.len() == 1 {
            if let Some((m, &c)) = rhs.terms.iter().next() {
                if m.exps.is_empty() {
                    return self.scale(Fp::new(c as u64, self.p));
                }
            }
        }
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                out.accumulate(ma.mul(mb), ca as u64 * cb as u64 % pm);
            }
        }
        out
    }

    pub fn scale(&self, c: Fp) -> Self {
        if c.value() == 0 {
            return MPoly::zero(self.p);
        }
        let pm = self.p.get() as u64;
        MPoly {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(m, &a)| (m.clone(), (a as u64 * c.value() as u64 % pm) as u32))
                .collect(),
        }
    }

    /// Substitute `values[i]` for `x_i`; every occurring variable needs a value.
    pub fn evaluate(&self, values: &[Fp]) -> Result<Fp> {
        let mut acc = Fp::zero(self.p);
        for (m, c) in self.terms() {
            let mut term = c;
            for &(v, e) in &m.exps {
                let x = values.get(v as usize).ok_or_else(|| {
                    Error::PreconditionViolation(format!("no value supplied for x{v}"))
                })?;
                if x.prime() != self.p {
                    return Err(Error::ModulusMismatch(x.prime().get(), self.p.get()));
                }
                term = term * Coeff::pow(x, e as u64);
            }
            acc = acc + term;
        }
        Ok(acc)
    }
}

/// Exact product in `F_p[x_0, x_1, ...]`.
pub fn mpoly_mul(a: &MPoly, b: &MPoly) -> Result<MPoly> {
    if a.p != b.p {
        return Err(Error::ModulusMismatch(a.p.get(), b.p.get()));
    }
    Ok(a.mul(b))
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match (c.value(), m.exps.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{m}")?,
                _ => write!(f, "{c}*{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self}) mod {}", self.p)
    }
}

impl Coeff for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(self.p)
    }
    fn one_like(&self) -> Self {
        MPoly::constant(Fp::one(self.p))
    }
    fn from_int(&self, n: i64) -> Self {
        MPoly::constant(Fp::from_i64(n, self.p))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        MPoly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        MPoly::add(self, &rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        MPoly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        MPoly::neg(self)
    }
    fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, &c) = self.terms.iter().next()?;
        if !m.exps.is_empty() {
            return None;
        }
        Fp::new(c as u64, self.p).inv().ok().map(MPoly::constant)
    }
    fn characteristic(&self) -> u32 {
        self.p.get()
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.p == other.p
    }
    fn scale_int(&self, n: i64) -> Self {
        self.scale(Fp::from_i64(n, self.p))
    }
}
