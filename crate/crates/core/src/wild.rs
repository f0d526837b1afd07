//! Wildly ramified series `f(z) = z + a_q z^{q+1} + ...` and their dynamics.
//!
//! A series carries coefficients of `z^0..z^prec`, all known exactly. An
//! order that runs past `prec` is reported as `Order::AtLeast(prec + 1)`;
//! this is the strongest bound the data certifies.

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::residue;
use crate::series::{Order, TruncatedSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct WildSeries<C: Coeff> {
    series: TruncatedSeries<C>,
    q: Option<usize>,
}

impl<C: Coeff> WildSeries<C> {
    pub fn new(series: TruncatedSeries<C>) -> Result<Self> {
        if series.prec() < 1 {
            return Err(Error::PreconditionViolation(
                "a wild series needs precision at least 1".into(),
            ));
        }
        if !series.coeffs()[0].is_zero() {
            return Err(Error::PreconditionViolation("f(0) must be 0".into()));
        }
        if !series.coeffs()[1].is_one() {
            return Err(Error::PreconditionViolation("f'(0) must be 1".into()));
        }
        let q = series
            .coeffs()
            .iter()
            .enumerate()
            .skip(2)
            .find(|(_, c)| !c.is_zero())
            .map(|(m, _)| m - 1);
        Ok(WildSeries { series, q })
    }

    /// `z + sum c_d z^d` over the ring of `like`.
    pub fn from_terms(like: &C, prec: usize, terms: impl IntoIterator<Item = (usize, C)>) -> Result<Self> {
        let terms = std::iter::once((1, like.one_like())).chain(terms);
        Self::new(TruncatedSeries::from_terms(like, prec, terms))
    }

    pub fn identity(like: &C, prec: usize) -> Result<Self> {
        Self::new(TruncatedSeries::identity(like, prec))
    }

    pub fn series(&self) -> &TruncatedSeries<C> {
        &self.series
    }

    pub fn into_series(self) -> TruncatedSeries<C> {
        self.series
    }

    pub fn prec(&self) -> usize {
        self.series.prec()
    }

    /// `mult(f) - 1`, when the multiplicity is resolved.
    pub fn q(&self) -> Option<usize> {
        self.q
    }

    pub fn q_or_err(&self) -> Result<usize> {
        self.q.ok_or(Error::InfiniteMultiplicity)
    }

    /// The coefficient of `z^d`.
    pub fn coeff(&self, d: usize) -> Option<&C> {
        self.series.coeff(d)
    }

    /// `a_i` in `f = z(1 + sum a_i z^i)`, i.e. the coefficient of `z^{i+1}`.
    pub fn a(&self, i: usize) -> Option<&C> {
        self.series.coeff(i + 1)
    }

    /// The ring element `1`.
    pub fn one(&self) -> C {
        self.series.coeffs()[1].clone()
    }

    pub fn characteristic(&self) -> u32 {
        self.series.coeffs()[0].characteristic()
    }

    pub fn truncate(&self, prec: usize) -> Result<Self> {
        Self::new(self.series.truncate(prec.max(1)))
    }

    fn identity_like(&self) -> TruncatedSeries<C> {
        TruncatedSeries::identity(&self.series.coeffs()[0], self.prec())
    }

    /// `f - z`.
    pub fn displacement(&self) -> TruncatedSeries<C> {
        self.series
            .sub(&self.identity_like())
            .expect("same ring")
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Self::new(self.series.compose(&other.series)?)
    }
}

/// `mult(f) = ord_z(f - z)`; `AtLeast(prec + 1)` when `f = z` to precision.
pub fn multiplicity<C: Coeff>(f: &WildSeries<C>) -> Order {
    match f.q {
        Some(q) => Order::Finite(q + 1),
        None => Order::AtLeast(f.prec() + 1),
    }
}

/// The `n`-fold composite `f∘...∘f`, by binary powering.
pub fn iterate<C: Coeff>(f: &WildSeries<C>, n: u64) -> Result<WildSeries<C>> {
    let mut acc = WildSeries::new(f.identity_like())?;
    let mut base = f.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.compose(&base)?;
        }
        n >>= 1;
        if n > 0 {
            base = base.compose(&base)?;
        }
    }
    Ok(acc)
}

/// `Δ_m` with `Δ_0 = base` and `Δ_m = Δ_{m-1}∘f - Δ_{m-1}`.
pub fn delta_operator<C: Coeff>(
    f: &WildSeries<C>,
    m: usize,
    base: Option<&TruncatedSeries<C>>,
) -> Result<TruncatedSeries<C>> {
    let mut delta = match base {
        Some(b) => {
            if !b.coeffs()[0].is_zero() {
                return Err(Error::NonzeroConstant);
            }
            b.clone()
        }
        None => f.identity_like(),
    };
    for _ in 0..m {
        delta = delta.compose(f.series())?.sub(&delta)?;
    }
    Ok(delta)
}

/// Precision that resolves `i_0..i_{n_max}` when some `j` attains the
/// predicted profile, with slack for reading `δ_n`.
pub fn required_precision(q: u64, p: u64, n_max: u32) -> Option<u64> {
    let mut geometric = 0u64;
    let mut pk = 1u64;
    for _ in 0..n_max {
        geometric = geometric.checked_add(pk)?;
        pk = pk.checked_mul(p)?;
    }
    q.checked_mul(geometric)?
        .checked_add(q.checked_mul(pk)?)?
        .checked_add(q.checked_mul(2)?)?
        .checked_add(2)
}

/// One level `n` of a profile: `i_n` and, when resolved, `δ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RamificationLevel<C> {
    pub i: Order,
    pub delta: Option<C>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RamificationProfile<C> {
    pub p: u32,
    pub levels: Vec<RamificationLevel<C>>,
}

impl<C> RamificationProfile<C> {
    pub fn i(&self, n: usize) -> Option<Order> {
        self.levels.get(n).map(|l| l.i)
    }

    pub fn orders(&self) -> Vec<Order> {
        self.levels.iter().map(|l| l.i).collect()
    }

    /// Finite `i_0, i_1, ...` up to the first unresolved level.
    pub fn finite_prefix(&self) -> Vec<usize> {
        self.levels.iter().map_while(|l| l.i.finite()).collect()
    }
}

/// `i_n(f) = mult(f^{p^n}) - 1` for `n = 0..=n_max`.
///
/// Each level applies `p - 1` further compositions to the previous iterate.
/// Once a level is unresolved, every later level is `AtLeast` as well.
pub fn lower_ramification<C: Coeff>(f: &WildSeries<C>, n_max: usize) -> Result<RamificationProfile<C>> {
    let p = f.characteristic();
    let prec = f.prec();
    let mut levels = Vec::with_capacity(n_max + 1);
    let mut g = f.clone();
    for n in 0..=n_max {
        if n > 0 {
            let step = g.clone();
            for _ in 1..p {
                g = g.compose(&step)?;
            }
        }
        match g.q {
            Some(i) => levels.push(RamificationLevel {
                i: Order::Finite(i),
                delta: g.coeff(i + 1).cloned(),
            }),
            None => {
                while levels.len() <= n_max {
                    levels.push(RamificationLevel {
                        i: Order::AtLeast(prec),
                        delta: None,
                    });
                }
                break;
            }
        }
    }
    Ok(RamificationProfile { p, levels })
}

/// `h∘f∘h^{-1}` at precision `min(f.prec, h.prec)`.
pub fn conjugate<C: Coeff>(f: &WildSeries<C>, h: &TruncatedSeries<C>) -> Result<WildSeries<C>> {
    let prec = f.prec().min(h.prec());
    let h = h.truncate(prec);
    let h_inv = h.compositional_inverse()?;
    let inner = f.series().truncate(prec).compose(&h_inv)?;
    WildSeries::new(h.compose(&inner)?)
}

/// Remove the coefficient `a_{q+k}` (of `z^{q+k+1}`) by conjugating with
/// `h = z + c z^{k+1}`, `c = -a_{q+k} / ((k - q) a_q)`.
pub fn eliminate_term<C: Coeff>(f: &WildSeries<C>, k: usize) -> Result<(WildSeries<C>, TruncatedSeries<C>)> {
    let q = f.q_or_err()?;
    let p = f.characteristic() as usize;
    if k == 0 || (k % p) == (q % p) {
        return Err(Error::NotRemovable { k, q });
    }
    let target = q + k + 1;
    if target > f.prec() {
        return Err(Error::InsufficientPrecision {
            needed: target,
            available: f.prec(),
        });
    }
    let zero = f.one().zero_like();
    let b = f.a(q + k).expect("checked precision").clone();
    if b.is_zero() {
        return Ok((f.clone(), f.identity_like()));
    }
    let a_q = f.a(q).expect("q is resolved");
    let denom = a_q.scale_int(k as i64 - q as i64);
    let c = b
        .mul(&denom.inverse().ok_or(Error::NotInvertible("(k - q) a_q is not a unit"))?)
        .neg();
    let h = TruncatedSeries::from_terms(&zero, f.prec(), [(1, f.one()), (k + 1, c)]);
    let g = conjugate(f, &h)?;
    for d in 0..=target {
        let expected = if d == target { &zero } else { f.coeff(d).expect("within precision") };
        if g.coeff(d) != Some(expected) {
            return Err(Error::InvariantViolation(format!(
                "term elimination at k = {k} changed the coefficient of z^{d}"
            )));
        }
    }
    Ok((g, h))
}

/// Conjugate `f` to `z(1 + α z^q + β z^{q+ℓ_j})` modulo `z^{q+ℓ_j+p+1}`.
///
/// Requires `pind_i(f) = 0` for `i < j`. The returned coordinate `h` has
/// `h'(0) = 1` and satisfies `g = h∘f∘h^{-1}`.
pub fn normal_form<C: Coeff>(f: &WildSeries<C>, j: usize) -> Result<(WildSeries<C>, TruncatedSeries<C>)> {
    let q = f.q_or_err()?;
    let p = f.characteristic() as usize;
    let lambda = residue::LambdaSet::new(q, p as u32);
    let ell = lambda.ell(j)?;
    let top = q + ell + p;
    if f.prec() < top {
        return Err(Error::InsufficientPrecision {
            needed: top,
            available: f.prec(),
        });
    }
    for i in 1..j {
        if !residue::pind_laurent(f, i)?.is_zero() {
            return Err(Error::PrecedingIndexNonzero(i));
        }
    }
    let mut g = f.clone();
    let mut h = f.identity_like();
    for k in 1..ell + p {
        if k % p == q % p {
            continue;
        }
        let (next, step) = eliminate_term(&g, k)?;
        h = step.compose(&h)?;
        g = next;
    }
    for d in q + 2..=top {
        if d != q + ell + 1 && !g.coeff(d).expect("within precision").is_zero() {
            return Err(Error::InvariantViolation(format!(
                "normal form keeps a nonzero coefficient at z^{d}"
            )));
        }
    }
    Ok((g, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Fp, Prime};
    use proptest::prelude::*;

    fn wild(p: u64, prec: usize, terms: &[(usize, i64)]) -> WildSeries<Fp> {
        let p = Prime::new(p).unwrap();
        WildSeries::from_terms(
            &Fp::zero(p),
            prec,
            terms.iter().map(|&(d, c)| (d, Fp::from_i64(c, p))),
        )
        .unwrap()
    }

    fn series(p: u64, prec: usize, terms: &[(usize, i64)]) -> TruncatedSeries<Fp> {
        let p = Prime::new(p).unwrap();
        TruncatedSeries::from_terms(&Fp::zero(p), prec, terms.iter().map(|&(d, c)| (d, Fp::from_i64(c, p))))
    }

    #[test]
    fn validation() {
        let p = Prime::new(3).unwrap();
        assert!(WildSeries::new(series(3, 4, &[(1, 2)])).is_err());
        assert!(WildSeries::new(series(3, 4, &[(0, 1), (1, 1)])).is_err());
        assert!(WildSeries::new(TruncatedSeries::identity(&Fp::zero(p), 4)).is_ok());
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity(&wild(3, 10, &[(5, 1)])), Order::Finite(5));
        assert_eq!(multiplicity(&wild(3, 20, &[])), Order::AtLeast(21));
        assert_eq!(multiplicity(&wild(3, 10, &[(5, 1), (6, 2)])), Order::Finite(5));
    }

    #[test]
    fn iterates() {
        let f = wild(3, 8, &[(5, 1)]);
        assert_eq!(iterate(&f, 1).unwrap(), f);
        assert_eq!(iterate(&f, 2).unwrap(), wild(3, 8, &[(5, 2)]));
        let f3 = iterate(&wild(3, 26, &[(5, 1)]), 3).unwrap();
        assert_eq!(f3.q(), Some(16));
        assert_eq!(multiplicity(&f3), Order::Finite(17));
    }

    #[test]
    fn delta_operators() {
        let f = wild(3, 4, &[(2, 1)]);
        assert_eq!(delta_operator(&f, 1, None).unwrap(), series(3, 4, &[(2, 1)]));
        assert_eq!(delta_operator(&f, 2, None).unwrap(), series(3, 4, &[(3, 2), (4, 1)]));
        let g = wild(3, 30, &[(5, 1)]);
        let f3 = iterate(&g, 3).unwrap();
        assert_eq!(delta_operator(&g, 3, None).unwrap(), f3.displacement());
    }

    #[test]
    fn precision_budget() {
        assert_eq!(required_precision(4, 3, 1), Some(26));
        assert_eq!(required_precision(4, 3, 0), Some(14));
        assert_eq!(required_precision(4, 3, 2), Some(62));
        assert_eq!(required_precision(4, 3, 80), None);
    }

    #[test]
    fn ramification_profiles() {
        let f = wild(3, 62, &[(5, 1), (6, 2)]);
        let prof = lower_ramification(&f, 2).unwrap();
        assert_eq!(prof.orders(), vec![Order::Finite(4), Order::Finite(13), Order::Finite(40)]);
        let one = Fp::one(Prime::new(3).unwrap());
        assert_eq!(prof.levels[0].delta, Some(one));
        assert_eq!(prof.levels[1].delta, Some(one));
        assert_eq!(prof.levels[2].delta, Some(one));

        let f = wild(3, 26, &[(5, 1)]);
        assert_eq!(
            lower_ramification(&f, 1).unwrap().orders(),
            vec![Order::Finite(4), Order::Finite(16)]
        );
        let f = wild(3, 10, &[(5, 1)]);
        let prof = lower_ramification(&f, 2).unwrap();
        assert_eq!(
            prof.orders(),
            vec![Order::Finite(4), Order::AtLeast(10), Order::AtLeast(10)]
        );
        assert_eq!(prof.levels[1].delta, None);
    }

    #[test]
    fn conjugation() {
        let f = wild(3, 20, &[(5, 1), (6, 2)]);
        assert_eq!(conjugate(&f, &series(3, 20, &[(1, 1)])).unwrap(), f);
        let g = conjugate(&f, &series(3, 20, &[(1, 2)])).unwrap();
        let p1 = residue::pind_laurent(&g, 1).unwrap();
        assert_eq!(p1, Fp::one(Prime::new(3).unwrap()));
        assert!(matches!(
            conjugate(&f, &series(3, 20, &[(2, 1)])),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn term_elimination() {
        let f = wild(3, 12, &[(5, 1), (7, 1)]);
        let (g, h) = eliminate_term(&f, 2).unwrap();
        assert_eq!(h, series(3, 12, &[(1, 1), (3, 2)]));
        assert!(g.coeff(7).unwrap().is_zero());
        assert!(g.coeff(5).unwrap().is_one());
        let f = wild(3, 12, &[(5, 1), (8, 1)]);
        let (g, h) = eliminate_term(&f, 2).unwrap();
        assert_eq!(g, f);
        assert_eq!(h, series(3, 12, &[(1, 1)]));
        assert_eq!(
            eliminate_term(&f, 1),
            Err(Error::NotRemovable { k: 1, q: 4 })
        );
        assert!(matches!(
            eliminate_term(&wild(3, 6, &[(5, 1)]), 2),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn normal_forms() {
        let f = wild(3, 8, &[(5, 1), (6, 1), (7, 1)]);
        let (g, h) = normal_form(&f, 1).unwrap();
        assert_eq!(g.truncate(8).unwrap(), wild(3, 8, &[(5, 1), (6, 1)]));
        assert!(h.coeff(1).unwrap().is_one());
        assert_eq!(conjugate(&f, &h).unwrap(), g);

        let nf = wild(3, 12, &[(5, 2), (6, 1)]);
        let (g, h) = normal_form(&nf, 1).unwrap();
        assert_eq!(g, nf);
        assert_eq!(h, series(3, 12, &[(1, 1)]));

        // pind_j = β/α² on the normal form
        let (g, _) = normal_form(&wild(3, 14, &[(5, 2), (6, 1), (7, 2), (9, 1)]), 1).unwrap();
        let alpha = *g.a(4).unwrap();
        let beta = *g.a(5).unwrap();
        let expected = beta * crate::coeff::field_inverse(alpha * alpha).unwrap();
        assert_eq!(residue::pind_laurent(&g, 1).unwrap(), expected);

        assert_eq!(
            normal_form(&wild(3, 14, &[(5, 1), (6, 1)]), 2).map(|_| ()),
            Err(Error::PrecedingIndexNonzero(1))
        );
    }

    fn arb_wild(p: u64, prec: usize) -> impl Strategy<Value = WildSeries<Fp>> {
        (2usize..6, 1i64..p as i64, prop::collection::vec(0i64..p as i64, prec))
            .prop_map(move |(q, lead, rest)| {
                let terms: Vec<(usize, i64)> = std::iter::once((q + 1, lead))
                    .chain(rest.into_iter().enumerate().map(|(i, c)| (i + q + 2, c)))
                    .collect();
                wild(p, prec, &terms)
            })
    }

    fn arb_coordinate(p: u64, prec: usize) -> impl Strategy<Value = TruncatedSeries<Fp>> {
        (1i64..p as i64, prop::collection::vec(0i64..p as i64, prec))
            .prop_map(move |(lin, rest)| {
                let terms: Vec<(usize, i64)> = std::iter::once((1, lin))
                    .chain(rest.into_iter().enumerate().map(|(i, c)| (i + 2, c)))
                    .collect();
                series(p, prec, &terms)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn conjugation_preserves_multiplicity(f in arb_wild(5, 20), h in arb_coordinate(5, 20)) {
            prop_assert_eq!(multiplicity(&conjugate(&f, &h).unwrap()), multiplicity(&f));
        }

        #[test]
        fn iteration_is_additive(f in arb_wild(3, 24), a in 0u64..5, b in 0u64..5) {
            let lhs = iterate(&f, a + b).unwrap();
            let rhs = iterate(&f, a).unwrap().compose(&iterate(&f, b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn delta_p_is_the_p_th_iterate(f in arb_wild(5, 24)) {
            let lhs = delta_operator(&f, 5, None).unwrap();
            prop_assert_eq!(lhs, iterate(&f, 5).unwrap().displacement());
        }

        #[test]
        fn iterates_are_linear_to_second_order(f in arb_wild(7, 16), n in 0u64..20) {
            let q = f.q().unwrap();
            let lhs = iterate(&f, n).unwrap().displacement().truncate(2 * q);
            let rhs = f.displacement().truncate(2 * q).scale(&Fp::new(n, Prime::new(7).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn delta_orders_grow(f in arb_wild(5, 40)) {
            let first = delta_operator(&f, 1, None).unwrap().order().lower_bound();
            let mut prev = first;
            for m in 2..=5 {
                let cur = delta_operator(&f, m, None).unwrap().order();
                if let Order::Finite(k) = cur {
                    prop_assert!(k >= prev + first - 1);
                    prev = k;
                } else {
                    break;
                }
            }
        }
    }
}
