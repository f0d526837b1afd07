//! Residue fixed-point indices and the ramification predictions built on them.

use serde::{Deserialize, Serialize};

use crate::coeff::{multinomial_mod_p, Coeff, Prime};
use crate::error::{Error, Result};
use crate::series::{Order, TruncatedSeries};
use crate::wild::{lower_ramification, WildSeries};

/// `Λ(q, F_p)`: the `ℓ` in `0..=q` with `ℓ ≡ q (mod p)`, increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaSet {
    pub q: usize,
    pub p: u32,
    pub elements: Vec<usize>,
}

impl LambdaSet {
    pub fn new(q: usize, p: u32) -> Self {
        let p_us = p as usize;
        let elements = (q % p_us..=q).step_by(p_us).collect();
        LambdaSet { q, p, elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `ℓ_j`, 1-based.
    pub fn ell(&self, j: usize) -> Result<usize> {
        j.checked_sub(1)
            .and_then(|i| self.elements.get(i).copied())
            .ok_or_else(|| {
                Error::PreconditionViolation(format!(
                    "j = {j} is outside 1..={} for q = {}, p = {}",
                    self.len(),
                    self.q,
                    self.p
                ))
            })
    }
}

pub fn lambda_set(q: usize, p: Prime) -> LambdaSet {
    LambdaSet::new(q, p.get())
}

fn setup<C: Coeff>(f: &WildSeries<C>, j: usize) -> Result<(usize, usize)> {
    let q = f.q_or_err()?;
    let ell = LambdaSet::new(q, f.characteristic()).ell(j)?;
    let needed = q + ell + 1;
    if f.prec() < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            available: f.prec(),
        });
    }
    Ok((q, ell))
}

/// `pind_j(f)`: the residue of `z^{q-ℓ_j} / (z - f(z))` at `0`.
///
/// With `z - f = -a_q z^{q+1} (1 + u)` this is `-a_q^{-1} [z^{ℓ_j}] (1+u)^{-1}`.
pub fn pind_laurent<C: Coeff>(f: &WildSeries<C>, j: usize) -> Result<C> {
    let (q, ell) = setup(f, j)?;
    let a_q = f.a(q).expect("resolved");
    let a_q_inv = a_q.inverse().ok_or(Error::NotInvertible("a_q is not a unit"))?;
    let unit: Vec<C> = (0..=ell)
        .map(|i| f.a(q + i).expect("checked precision").mul(&a_q_inv))
        .collect();
    let recip = TruncatedSeries::new(unit)?.reciprocal()?;
    Ok(recip.coeffs()[ell].mul(&a_q_inv).neg())
}

/// `ind(f)`, the residue of `1 / (z - f(z))`; equal to `pind_r` for `ℓ_r = q`.
pub fn residue_index<C: Coeff>(f: &WildSeries<C>) -> Result<C> {
    let q = f.q_or_err()?;
    let r = LambdaSet::new(q, f.characteristic()).len();
    pind_laurent(f, r)
}

/// Visit every multiplicity vector `(μ_1, ..., μ_ℓ)` with `Σ i μ_i = ℓ`.
fn for_each_partition(ell: usize, mut visit: impl FnMut(&[u64])) {
    fn go(part: usize, budget: usize, mu: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
        if part == 0 {
            if budget == 0 {
                visit(mu);
            }
            return;
        }
        for m in 0..=budget / part {
            mu[part] = m as u64;
            go(part - 1, budget - m * part, mu, visit);
        }
        mu[part] = 0;
    }
    let mut mu = vec![0u64; ell + 1];
    go(ell, ell, &mut mu, &mut visit);
}

/// `pind_j(f)` from the coefficients `a_q..a_{q+ℓ_j}` by summing over the
/// multi-indices `μ ∈ N^{ℓ_j+1}` with `|μ| = ‖μ‖ = ℓ_j`:
///
/// `-a_q^{-(ℓ+1)} Σ (-1)^{ℓ-μ_0} (ℓ-μ_0; μ_1, ..., μ_ℓ) Π a_{q+i}^{μ_i}`.
pub fn pind_closed<C: Coeff>(f: &WildSeries<C>, j: usize) -> Result<C> {
    let (q, ell) = setup(f, j)?;
    let p = Prime::new(f.characteristic() as u64)?;
    let a: Vec<C> = (0..=ell).map(|i| f.a(q + i).expect("checked").clone()).collect();
    if a[0].is_zero() {
        return Err(Error::NotInvertible("a_q is zero"));
    }
    let zero = a[0].zero_like();
    let mut sum = zero.clone();
    let mut failure = None;
    for_each_partition(ell, |mu| {
        if failure.is_some() {
            return;
        }
        let parts: Vec<u64> = mu[1..].to_vec();
        let n: u64 = parts.iter().sum();
        let mu0 = ell as u64 - n;
        let coeff = match multinomial_mod_p(n, &parts, p) {
            Ok(c) => c,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        if coeff.value() == 0 {
            return;
        }
        let mut term = a[0].pow(mu0);
        for (i, &m) in parts.iter().enumerate() {
            if m > 0 {
                term = term.mul(&a[i + 1].pow(m));
            }
        }
        let signed = if n % 2 == 1 { -(coeff.value() as i64) } else { coeff.value() as i64 };
        sum = sum.add(&term.scale_int(signed));
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let prefactor = a[0]
        .pow_signed(-(ell as i64 + 1))
        .ok_or(Error::NotInvertible("a_q is not a unit"))?;
    Ok(sum.mul(&prefactor).neg())
}

/// The iterative residue `(q + 1)/2 - ind(f)`.
pub fn iterative_residue<C: Coeff>(f: &WildSeries<C>) -> Result<C> {
    if f.characteristic() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let q = f.q_or_err()?;
    let one = f.one();
    let half = one.from_int(2).inverse().expect("p is odd");
    Ok(one.from_int(q as i64 + 1).mul(&half).sub(&residue_index(f)?))
}

/// The least `j` with `pind_j(f) != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmallestIndex {
    Some(usize),
    NoneUpTo(usize),
}

impl SmallestIndex {
    pub fn found(self) -> Option<usize> {
        match self {
            SmallestIndex::Some(j) => Some(j),
            SmallestIndex::NoneUpTo(_) => None,
        }
    }
}

pub fn smallest_index_j<C: Coeff>(f: &WildSeries<C>) -> Result<SmallestIndex> {
    let q = f.q_or_err()?;
    let r = LambdaSet::new(q, f.characteristic()).len();
    for j in 1..=r {
        if !pind_laurent(f, j)?.is_zero() {
            return Ok(SmallestIndex::Some(j));
        }
    }
    Ok(SmallestIndex::NoneUpTo(r))
}

/// `ℓ_j (1 + p + ... + p^{n-1}) + q p^n`; `None` on overflow.
pub fn omega(q: u64, ell_j: u64, p: u64, n: u32) -> Option<u64> {
    let mut geometric = 0u64;
    let mut pk = 1u64;
    for _ in 0..n {
        geometric = geometric.checked_add(pk)?;
        pk = pk.checked_mul(p)?;
    }
    ell_j.checked_mul(geometric)?.checked_add(q.checked_mul(pk)?)
}

/// `δ_n(f)`, the coefficient of `z^{i_n + 1}` in `f^{p^n}`.
pub fn delta_coefficient<C: Coeff>(f: &WildSeries<C>, n: usize) -> Result<C> {
    let prof = lower_ramification(f, n)?;
    let level = &prof.levels[n];
    match (&level.i, &level.delta) {
        (Order::Finite(_), Some(d)) => Ok(d.clone()),
        (i, _) => Err(Error::InsufficientPrecision {
            needed: i.lower_bound() + 2,
            available: f.prec(),
        }),
    }
}

/// Outcome of comparing a measured profile against a prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// Every level is resolved and equals the prediction.
    Match,
    /// Level `level` certainly differs from the prediction.
    Mismatch { level: usize },
    /// Precision ran out before level `level` could be compared.
    Inconclusive { level: usize },
    /// All `pind_j` with `ℓ_j < q` vanish and `resit != 0`: the profile is
    /// predicted to be `q(1 + ... + p^n)`.
    QRamified { measured: Option<bool> },
    /// All `pind_j` with `ℓ_j < q` vanish and `resit = 0`: no prediction
    /// beyond "not q-ramified".
    Unclassified { q_ramified: Option<bool> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub q: usize,
    pub ells: Vec<usize>,
    pub smallest_j: SmallestIndex,
    pub predicted: Option<Vec<u64>>,
    pub measured: Vec<Order>,
    pub verdict: Verdict,
}

fn check_range(q: usize, p: u32) -> Result<()> {
    let p = p as usize;
    if q <= p || q.is_multiple_of(p) {
        return Err(Error::PreconditionViolation(format!(
            "needs q >= p + 1 and p not dividing q (q = {q}, p = {p})"
        )));
    }
    Ok(())
}

/// Compare `measured` with `predicted` level by level.
pub fn compare_profile(predicted: &[u64], measured: &[Order]) -> Verdict {
    for (n, (&want, got)) in predicted.iter().zip(measured).enumerate() {
        match *got {
            Order::Finite(v) if v as u64 == want => {}
            Order::Finite(_) => return Verdict::Mismatch { level: n },
            Order::AtLeast(b) if b as u64 > want => return Verdict::Mismatch { level: n },
            Order::AtLeast(_) => return Verdict::Inconclusive { level: n },
        }
    }
    Verdict::Match
}

fn omega_profile(q: usize, ell: usize, p: u32, n_max: usize) -> Result<Vec<u64>> {
    (0..=n_max)
        .map(|n| {
            omega(q as u64, ell as u64, p as u64, n as u32)
                .ok_or_else(|| Error::PreconditionViolation("ramification number overflows u64".into()))
        })
        .collect()
}

/// Predict `i_0..i_{n_max}` from the smallest nonvanishing index and compare
/// with direct iteration.
pub fn classify<C: Coeff>(f: &WildSeries<C>, n_max: usize) -> Result<Classification> {
    let q = f.q_or_err()?;
    let p = f.characteristic();
    check_range(q, p)?;
    let lambda = LambdaSet::new(q, p);
    let r = lambda.len();
    let smallest_j = smallest_index_j(f)?;
    let measured = lower_ramification(f, n_max)?.orders();
    let (predicted, verdict) = match smallest_j {
        SmallestIndex::Some(j) if j < r => {
            let predicted = omega_profile(q, lambda.ell(j)?, p, n_max)?;
            let verdict = compare_profile(&predicted, &measured);
            (Some(predicted), verdict)
        }
        _ => {
            let predicted = omega_profile(q, q, p, n_max)?;
            let measured_q = match compare_profile(&predicted, &measured) {
                Verdict::Match => Some(true),
                Verdict::Mismatch { .. } => Some(false),
                _ => None,
            };
            if p == 2 || iterative_residue(f)?.is_zero() {
                (None, Verdict::Unclassified { q_ramified: measured_q })
            } else {
                (Some(predicted), Verdict::QRamified { measured: measured_q })
            }
        }
    };
    Ok(Classification {
        q,
        ells: lambda.elements,
        smallest_j,
        predicted,
        measured,
        verdict,
    })
}

/// `(predicted, measured)` q-ramification of `f` through level `n_max`.
pub fn is_q_ramified<C: Coeff>(f: &WildSeries<C>, n_max: usize) -> Result<(bool, bool)> {
    let q = f.q_or_err()?;
    let p = f.characteristic();
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    check_range(q, p)?;
    let r = LambdaSet::new(q, p).len();
    let mut predicted = !iterative_residue(f)?.is_zero();
    for j in 1..r {
        predicted &= pind_laurent(f, j)?.is_zero();
    }
    let prof = lower_ramification(f, n_max)?;
    let target = omega_profile(q, q, p, n_max)?;
    let measured = match compare_profile(&target, &prof.orders()) {
        Verdict::Match => true,
        Verdict::Mismatch { .. } => false,
        _ => {
            let needed = target.last().copied().unwrap_or(0) as usize + 1;
            return Err(Error::InsufficientPrecision {
                needed,
                available: f.prec(),
            });
        }
    };
    Ok((predicted, measured))
}

/// The residue of `z^d h'(z) / h(z)^{N+1}`, for `p | d`.
///
/// Writing `h = z w` the residue is `[z^{N-d}] h' w^{-(N+1)}`.
pub fn residue_of_form<C: Coeff>(h: &TruncatedSeries<C>, d: usize, n: usize) -> Result<C> {
    let zero = h.coeffs()[0].zero_like();
    let p = zero.characteristic();
    if d == 0 || !d.is_multiple_of(p as usize) {
        return Err(Error::NotDivisible { d, p });
    }
    if !h.coeffs()[0].is_zero() {
        return Err(Error::NotInvertible("h(0) != 0"));
    }
    if h.prec() < 1 || h.coeffs()[1].inverse().is_none() {
        return Err(Error::NotInvertible("h'(0) is not a unit"));
    }
    if n < d {
        return Ok(zero);
    }
    let k = n - d;
    if h.prec() < k + 1 {
        return Err(Error::InsufficientPrecision {
            needed: k + 1,
            available: h.prec(),
        });
    }
    let h = h.truncate(k + 1);
    let w = h.shift_down(1)?;
    let inv = w.reciprocal()?.pow(n as u64 + 1);
    let prod = h.derivative().mul(&inv)?;
    Ok(prod.coeffs()[k].clone())
}

/// Convenience: every `pind_j`, `j = 1..=r`.
pub fn all_pind<C: Coeff>(f: &WildSeries<C>) -> Result<Vec<C>> {
    let q = f.q_or_err()?;
    let r = LambdaSet::new(q, f.characteristic()).len();
    (1..=r).map(|j| pind_laurent(f, j)).collect()
}

/// Everything `wildram index` reports about a series.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport<C> {
    pub q: usize,
    pub ells: Vec<usize>,
    pub pind: Vec<C>,
    pub resit: Option<C>,
    pub smallest_j: SmallestIndex,
}

pub fn index_report<C: Coeff>(f: &WildSeries<C>) -> Result<IndexReport<C>> {
    let q = f.q_or_err()?;
    let lambda = LambdaSet::new(q, f.characteristic());
    let pind = all_pind(f)?;
    let smallest_j = match pind.iter().position(|c| !c.is_zero()) {
        Some(i) => SmallestIndex::Some(i + 1),
        None => SmallestIndex::NoneUpTo(pind.len()),
    };
    let resit = if f.characteristic() == 2 {
        None
    } else {
        Some(iterative_residue(f)?)
    };
    Ok(IndexReport {
        q,
        ells: lambda.elements,
        pind,
        resit,
        smallest_j,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Fp;
    use crate::wild::conjugate;

    fn fp(v: i64, p: u64) -> Fp {
        Fp::from_i64(v, Prime::new(p).unwrap())
    }

    fn wild(p: u64, prec: usize, terms: &[(usize, i64)]) -> WildSeries<Fp> {
        let pr = Prime::new(p).unwrap();
        WildSeries::from_terms(&Fp::zero(pr), prec, terms.iter().map(|&(d, c)| (d, fp(c, p)))).unwrap()
    }

    fn series(p: u64, prec: usize, terms: &[(usize, i64)]) -> TruncatedSeries<Fp> {
        let pr = Prime::new(p).unwrap();
        TruncatedSeries::from_terms(&Fp::zero(pr), prec, terms.iter().map(|&(d, c)| (d, fp(c, p))))
    }

    #[test]
    fn lambda_sets() {
        let p3 = Prime::new(3).unwrap();
        assert_eq!(lambda_set(4, p3).elements, vec![1, 4]);
        assert_eq!(lambda_set(7, p3).elements, vec![1, 4, 7]);
        assert_eq!(lambda_set(7, Prime::new(5).unwrap()).elements, vec![2, 7]);
        assert!(lambda_set(4, p3).ell(0).is_err());
        assert!(lambda_set(4, p3).ell(3).is_err());
    }

    #[test]
    fn second_indices() {
        let f = wild(3, 20, &[(5, 1), (6, 2)]);
        assert_eq!(pind_laurent(&f, 1).unwrap(), fp(2, 3));
        assert_eq!(pind_laurent(&f, 2).unwrap(), fp(2, 3));
        assert_eq!(pind_closed(&f, 2).unwrap(), fp(2, 3));
        assert_eq!(pind_laurent(&wild(3, 20, &[(5, 1)]), 1).unwrap(), fp(0, 3));
        assert_eq!(
            pind_laurent(&wild(3, 20, &[]), 1),
            Err(Error::InfiniteMultiplicity)
        );
        assert!(matches!(
            pind_laurent(&wild(3, 8, &[(5, 1)]), 2),
            Err(Error::InsufficientPrecision { needed: 9, available: 8 })
        ));
    }

    #[test]
    fn residue_indices() {
        assert_eq!(residue_index(&wild(5, 10, &[(2, 1), (3, 3)])).unwrap(), fp(3, 5));
        assert_eq!(residue_index(&wild(5, 10, &[(2, 1)])).unwrap(), fp(0, 5));
        assert_eq!(residue_index(&wild(3, 20, &[(5, 1), (6, 2)])).unwrap(), fp(2, 3));
    }

    #[test]
    fn closed_formula_special_cases() {
        // normal form z(1 + αz^q + βz^{q+ℓ}): only μ = (ℓ-1, 0, .., 0, 1) survives
        let f = wild(7, 30, &[(11, 3), (14, 5)]);
        assert_eq!(pind_closed(&f, 1).unwrap(), fp(5, 7) * fp(9, 7).inv().unwrap());
        for c in 0..5 {
            assert_eq!(pind_closed(&wild(5, 10, &[(2, 1), (3, c)]), 1).unwrap(), fp(c, 5));
        }
    }

    #[test]
    fn iterative_residues() {
        assert_eq!(iterative_residue(&wild(3, 20, &[(5, 1)])).unwrap(), fp(1, 3));
        assert_eq!(iterative_residue(&wild(3, 20, &[(5, 1), (6, 2)])).unwrap(), fp(2, 3));
        assert_eq!(iterative_residue(&wild(5, 10, &[(2, 1), (3, 1)])).unwrap(), fp(0, 5));
        assert_eq!(
            iterative_residue(&wild(2, 10, &[(2, 1)])),
            Err(Error::EvenCharacteristic)
        );
    }

    #[test]
    fn smallest_indices() {
        assert_eq!(smallest_index_j(&wild(3, 20, &[(5, 1), (6, 2)])).unwrap(), SmallestIndex::Some(1));
        assert_eq!(smallest_index_j(&wild(3, 20, &[(5, 1)])).unwrap(), SmallestIndex::NoneUpTo(2));
        assert_eq!(smallest_index_j(&wild(3, 20, &[(5, 1), (9, 1)])).unwrap(), SmallestIndex::Some(2));
    }

    #[test]
    fn omegas() {
        assert_eq!(omega(4, 1, 3, 1), Some(13));
        assert_eq!(omega(4, 1, 3, 2), Some(40));
        assert_eq!(omega(4, 4, 3, 1), Some(16));
        assert_eq!(omega(4, 1, 3, 0), Some(4));
        assert_eq!(omega(4, 1, 3, 100), None);
    }

    #[test]
    fn delta_coefficients() {
        let f = wild(3, 62, &[(5, 1), (6, 2)]);
        assert_eq!(delta_coefficient(&f, 0).unwrap(), fp(1, 3));
        assert_eq!(delta_coefficient(&f, 1).unwrap(), fp(1, 3));
        assert_eq!(delta_coefficient(&f, 2).unwrap(), fp(1, 3));
        assert!(matches!(
            delta_coefficient(&wild(3, 10, &[(5, 1)]), 1),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn classification() {
        let c = classify(&wild(3, 62, &[(5, 1), (6, 2)]), 2).unwrap();
        assert_eq!(c.verdict, Verdict::Match);
        assert_eq!(c.smallest_j, SmallestIndex::Some(1));
        assert_eq!(c.measured, vec![Order::Finite(4), Order::Finite(13), Order::Finite(40)]);

        // pind_1 = 0, ind = 0, resit = 1: q-ramified
        let c = classify(&wild(3, 40, &[(5, 1)]), 1).unwrap();
        assert_eq!(c.verdict, Verdict::QRamified { measured: Some(true) });

        // q = 7: pind_1 vanishes, pind_2 does not
        let f = wild(3, 40, &[(8, 1), (12, 1)]);
        assert_eq!(pind_laurent(&f, 1).unwrap(), fp(0, 3));
        let c = classify(&f, 1).unwrap();
        assert_eq!(c.smallest_j, SmallestIndex::Some(2));
        assert_eq!(c.verdict, Verdict::Match);
        assert_eq!(c.measured, vec![Order::Finite(7), Order::Finite(25)]);

        let c = classify(&wild(3, 40, &[(8, 1), (9, 1)]), 1).unwrap();
        assert_eq!(c.smallest_j, SmallestIndex::Some(1));
        assert_eq!(c.measured, vec![Order::Finite(7), Order::Finite(22)]);
        assert_eq!(c.verdict, Verdict::Match);

        assert!(matches!(
            classify(&wild(3, 40, &[(4, 1)]), 1),
            Err(Error::PreconditionViolation(_))
        ));
        assert!(matches!(
            classify(&wild(3, 40, &[(7, 1)]), 1),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn q_ramification() {
        assert_eq!(is_q_ramified(&wild(3, 30, &[(5, 1)]), 1).unwrap(), (true, true));
        assert_eq!(is_q_ramified(&wild(3, 30, &[(5, 1), (6, 2)]), 1).unwrap(), (false, false));
        // ind = β at z^9; β = (q+1)/2 = 1 makes resit vanish
        let f = wild(3, 30, &[(5, 1), (9, 1)]);
        assert_eq!(residue_index(&f).unwrap(), fp(1, 3));
        assert_eq!(is_q_ramified(&f, 1).unwrap(), (false, false));
    }

    #[test]
    fn residues_of_forms() {
        assert_eq!(residue_of_form(&series(3, 10, &[(1, 1), (2, 1)]), 3, 4).unwrap(), fp(0, 3));
        assert_eq!(residue_of_form(&series(3, 10, &[(1, 1), (2, 1)]), 3, 3).unwrap(), fp(1, 3));
        assert_eq!(residue_of_form(&series(3, 10, &[(1, 2), (2, 1)]), 3, 3).unwrap(), fp(2, 3));
        assert_eq!(
            residue_of_form(&series(3, 10, &[(1, 1)]), 2, 3),
            Err(Error::NotDivisible { d: 2, p: 3 })
        );
    }

    #[test]
    fn conjugation_scales_pind_1() {
        let f = wild(3, 30, &[(5, 1), (6, 2)]);
        let g = conjugate(&f, &series(3, 30, &[(1, 2)])).unwrap();
        assert_eq!(pind_laurent(&g, 1).unwrap(), fp(1, 3));
        assert_eq!(pind_closed(&g, 1).unwrap(), fp(1, 3));
    }
}
