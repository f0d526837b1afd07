//! Symbolic checks of the `p`-th iterate congruences over `F_p[x_0, x_1, ...]`.
//!
//! Every recursion involved is division-free, so congruences mod `p` over
//! `Z_(p)` are checked as identities in characteristic `p`.

use serde::{Serialize, Serializer};

use crate::coeff::{Coeff, Fp, MPoly, Monomial, Prime};
use crate::error::{Error, Result};
use crate::residue::LambdaSet;
use crate::series::TruncatedSeries;
use crate::wild::{delta_operator, WildSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// `z(1 + x_0 z^q + x_1 z^{q+ℓ} + z^{q+2ℓ} Σ_{i≥1} x_{i+1} z^i)`
    MainLemma,
    /// `z(1 + x_0 z^q + x_1 z^{q+ℓ_j} + z^{q+ℓ_j+p} Σ_{i≥1} x_{i+1} z^i)`
    DeltaShort,
}

#[derive(Debug, Clone)]
pub struct GenericSeries {
    pub p: Prime,
    pub q: usize,
    pub ell: usize,
    pub shape: Shape,
    pub series: WildSeries<MPoly>,
    /// `var_degrees[i]` is the power of `z` that carries `x_i`.
    pub var_degrees: Vec<usize>,
}

/// Build the generic series, creating only the tail variables that can
/// reach degree `prec` in a `p`-th iterate (those at `z^e` with `e + q <= prec`).
pub fn build_generic(p: Prime, q: usize, ell: usize, shape: Shape, prec: usize) -> Result<GenericSeries> {
    build(p, q, ell, shape, prec, false)
}

/// As [`build_generic`], with a tail variable at every degree up to `prec`.
pub fn build_generic_full(p: Prime, q: usize, ell: usize, shape: Shape, prec: usize) -> Result<GenericSeries> {
    build(p, q, ell, shape, prec, true)
}

fn build(p: Prime, q: usize, ell: usize, shape: Shape, prec: usize, full: bool) -> Result<GenericSeries> {
    let pu = p.get() as usize;
    let fail = |msg: String| Err(Error::PreconditionViolation(msg));
    if q == 0 || q.is_multiple_of(pu) {
        return fail(format!("q = {q} must be positive and prime to p = {pu}"));
    }
    if ell % pu != q % pu || ell > q {
        return fail(format!("ℓ = {ell} is not in Λ({q}, F_{pu})"));
    }
    let tail_base = match shape {
        Shape::MainLemma => {
            if ell == 0 || !(ell < pu || 2 * ell < q) {
                return fail(format!("main-lemma shape needs ℓ <= p - 1 or 2ℓ + 1 <= q (ℓ = {ell}, q = {q})"));
            }
            q + 2 * ell + 1
        }
        Shape::DeltaShort => {
            if q < pu + 1 {
                return fail(format!("delta-short shape needs q >= p + 1 (q = {q})"));
            }
            q + ell + pu + 1
        }
    };
    if prec < q + 1 {
        return fail(format!("precision {prec} is below q + 1 = {}", q + 1));
    }
    let limit = if full { prec } else { prec.saturating_sub(q) };
    let mut var_degrees = vec![q + 1, q + ell + 1];
    let mut e = tail_base + 1;
    while e <= limit {
        var_degrees.push(e);
        e += 1;
    }
    let zero = MPoly::zero(p);
    let terms = var_degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| (d, MPoly::var(i as u32, p)));
    let series = WildSeries::from_terms(&zero, prec, terms)?;
    Ok(GenericSeries {
        p,
        q,
        ell,
        shape,
        series,
        var_degrees,
    })
}

/// `f^p` by `p - 1` sequential compositions.
fn pth_iterate<C: Coeff>(f: &WildSeries<C>) -> Result<WildSeries<C>> {
    let mut g = f.clone();
    for _ in 1..f.characteristic() {
        g = g.compose(f)?;
    }
    Ok(g)
}

fn ser_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_opt_display<S: Serializer>(v: &Option<(usize, MPoly)>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some((d, c)) => s.collect_str(&format_args!("z^{d}: {c}")),
        None => s.serialize_none(),
    }
}

fn monomial(p: Prime, c: i64, exps: &[(u32, u32)]) -> MPoly {
    MPoly::term(Fp::from_i64(c, p), Monomial::from_exponents(exps))
}

/// The first coefficient of `g - z` below `stop` (other than at `allowed`)
/// that does not vanish.
fn stray_coefficient(g: &TruncatedSeries<MPoly>, stop: usize, allowed: &[usize]) -> Option<(usize, MPoly)> {
    (0..stop)
        .filter(|d| !allowed.contains(d))
        .find_map(|d| {
            let c = &g.coeffs()[d];
            (!c.is_zero()).then(|| (d, c.clone()))
        })
}

#[derive(Debug, Clone, Serialize)]
pub struct MainLemmaReport {
    pub p: u32,
    pub q: usize,
    pub ell: usize,
    #[serde(serialize_with = "ser_display")]
    pub beta: MPoly,
    #[serde(serialize_with = "ser_display")]
    pub gamma: MPoly,
    #[serde(serialize_with = "ser_display")]
    pub expected_beta: MPoly,
    #[serde(serialize_with = "ser_display")]
    pub expected_gamma: MPoly,
    /// A coefficient of `f^p - z` that should vanish but does not.
    #[serde(serialize_with = "ser_opt_display")]
    pub stray: Option<(usize, MPoly)>,
    pub pass: bool,
}

/// `f^p ≡ z(1 + β z^{qp+ℓ} + γ z^{qp+2ℓ}) mod z^{qp+2ℓ+2}` with
/// `β = -x_0^{p-1} x_1` and `γ = -x_0^{p-2} x_1^2`.
pub fn verify_main_lemma(p: Prime, q: usize, ell: usize) -> Result<MainLemmaReport> {
    let pu = p.get() as usize;
    if pu == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let prec = q * pu + 2 * ell + 1;
    let g = build_generic(p, q, ell, Shape::MainLemma, prec)?;
    let disp = pth_iterate(&g.series)?.displacement();
    let (db, dg) = (q * pu + ell + 1, q * pu + 2 * ell + 1);
    let pe = p.get() - 1;
    let expected_beta = monomial(p, -1, &[(0, pe), (1, 1)]);
    let expected_gamma = monomial(p, -1, &[(0, pe - 1), (1, 2)]);
    let beta = disp.coeffs()[db].clone();
    let gamma = disp.coeffs()[dg].clone();
    let stray = stray_coefficient(&disp, dg, &[db]);
    let pass = stray.is_none() && beta == expected_beta && gamma == expected_gamma;
    Ok(MainLemmaReport {
        p: p.get(),
        q,
        ell,
        beta,
        gamma,
        expected_beta,
        expected_gamma,
        stray,
        pass,
    })
}

/// The predicted `z^{qp+ℓ_j+1}` coefficient of `f^p - z` for the short shape.
pub fn delta_short_beta(p: Prime, q: usize, ell_j: usize) -> MPoly {
    let pe = p.get() - 1;
    let x1_term = monomial(p, -1, &[(0, pe), (1, 1)]);
    if ell_j < q {
        return x1_term;
    }
    let two_inv = Fp::from_i64(2, p).inv().expect("p is odd");
    let half = Fp::new(q as u64 + 1, p) * two_inv;
    MPoly::term(half, Monomial::from_exponents(&[(0, pe + 2)])).add(&x1_term)
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaShortReport {
    pub p: u32,
    pub q: usize,
    pub ell_j: usize,
    #[serde(serialize_with = "ser_display")]
    pub beta: MPoly,
    #[serde(serialize_with = "ser_display")]
    pub expected_beta: MPoly,
    #[serde(serialize_with = "ser_opt_display")]
    pub stray: Option<(usize, MPoly)>,
    /// `Δ_p(z) = f^p(z) - z` coefficientwise.
    pub delta_identity: bool,
    pub pass: bool,
}

/// `f^p - z ≡ β z^{qp+ℓ_j+1} mod z^{qp+ℓ_j+2}` for the short generic shape.
pub fn verify_delta_short(p: Prime, q: usize, ell_j: usize) -> Result<DeltaShortReport> {
    let pu = p.get() as usize;
    if pu == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !LambdaSet::new(q, p.get()).elements.contains(&ell_j) {
        return Err(Error::PreconditionViolation(format!(
            "ℓ_j = {ell_j} is not in Λ({q}, F_{pu})"
        )));
    }
    let prec = q * pu + ell_j + 1;
    let g = build_generic(p, q, ell_j, Shape::DeltaShort, prec)?;
    let disp = pth_iterate(&g.series)?.displacement();
    let delta_identity = delta_operator(&g.series, pu, None)? == disp;
    let db = q * pu + ell_j + 1;
    let beta = disp.coeffs()[db].clone();
    let expected_beta = delta_short_beta(p, q, ell_j);
    let stray = stray_coefficient(&disp, db, &[]);
    let pass = stray.is_none() && delta_identity && beta == expected_beta;
    Ok(DeltaShortReport {
        p: p.get(),
        q,
        ell_j,
        beta,
        expected_beta,
        stray,
        delta_identity,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceRow {
    pub m: usize,
    #[serde(serialize_with = "ser_display")]
    pub alpha: MPoly,
    #[serde(serialize_with = "ser_display")]
    pub beta: MPoly,
    pub alpha_closed_form: bool,
    /// Only defined for `ℓ_j < q`.
    pub beta_closed_form: Option<bool>,
    /// `Δ_m ≡ α_m z^{qm+1} + β_m z^{qm+ℓ_j+1} mod z^{qm+ℓ_j+2}`.
    pub delta_matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceReport {
    pub p: u32,
    pub q: usize,
    pub ell_j: usize,
    pub rows: Vec<RecurrenceRow>,
    /// `α_p = 0`, when `m_max >= p`.
    pub alpha_p_vanishes: Option<bool>,
    /// `β_p` equals the short-shape prediction, when `m_max >= p`.
    pub beta_p_matches: Option<bool>,
    pub pass: bool,
}

fn scalar(p: Prime, n: u64) -> MPoly {
    MPoly::constant(Fp::new(n, p))
}

/// Iterate
/// `α_{m+1} = x_0 (qm+1) α_m`,
/// `β_{m+1} = x_1 (qm+1) α_m + x_0 (qm+ℓ_j+1) β_m` from `α_1 = x_0`, `β_1 = x_1`,
/// with the extra `C(qm+1, 2) x_0^2 α_m` in `β_{m+1}` when `ℓ_j = q`
/// (then `z^{2q}` and `z^{q+ℓ_j}` coincide).
pub fn recurrence_alpha_beta(p: Prime, q: usize, ell_j: usize, m_max: usize) -> Result<RecurrenceReport> {
    if m_max == 0 {
        return Err(Error::PreconditionViolation("m_max must be at least 1".into()));
    }
    let pu = p.get() as usize;
    let ell = ell_j % pu;
    let x0 = MPoly::var(0, p);
    let x1 = MPoly::var(1, p);
    let prec = q * m_max + ell_j + 1;
    let g = build_generic(p, q, ell_j, Shape::DeltaShort, prec)?;
    let z = TruncatedSeries::identity(&MPoly::zero(p), prec);

    let mut alpha = x0.clone();
    let mut beta = x1.clone();
    let mut delta = delta_operator(&g.series, 1, Some(&z))?;
    let mut rows = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let alpha_closed = (1..m).fold(x0.pow(m as u64), |acc, j| acc.mul(&scalar(p, (q * j + 1) as u64)));
        let beta_closed = (ell_j < q).then(|| {
            let sum = (1..=m)
                .map(|r| {
                    (1..=m)
                        .filter(|&j| j != r)
                        .fold(1u64, |acc, j| acc * ((ell * j + 1) % pu) as u64 % pu as u64)
                })
                .fold(0u64, |acc, t| (acc + t) % pu as u64);
            x0.pow(m as u64 - 1).mul(&x1).mul(&scalar(p, sum))
        });
        let (da, db) = (q * m + 1, q * m + ell_j + 1);
        let delta_matches = delta.coeffs()[da] == alpha
            && delta.coeffs()[db] == beta
            && (0..=db).all(|d| d == da || d == db || delta.coeffs()[d].is_zero());
        rows.push(RecurrenceRow {
            m,
            alpha: alpha.clone(),
            beta: beta.clone(),
            alpha_closed_form: alpha_closed == alpha,
            beta_closed_form: beta_closed.map(|b| b == beta),
            delta_matches,
        });
        let qm1 = (q * m + 1) as u64;
        let mut next_beta = x1
            .mul(&scalar(p, qm1))
            .mul(&alpha)
            .add(&x0.mul(&scalar(p, (q * m + ell_j + 1) as u64)).mul(&beta));
        if ell_j == q {
            let c2 = crate::coeff::binomial_mod_p(qm1, 2, p);
            next_beta = next_beta.add(&x0.mul(&x0).mul(&MPoly::constant(c2)).mul(&alpha));
        }
        alpha = x0.mul(&scalar(p, qm1)).mul(&alpha);
        beta = next_beta;
        if m < m_max {
            delta = delta.compose(g.series.series())?.sub(&delta)?;
        }
    }
    let at_p = rows.get(pu - 1);
    let alpha_p_vanishes = at_p.map(|r| r.alpha.is_zero());
    let beta_p_matches = at_p.map(|r| r.beta == delta_short_beta(p, q, ell_j));
    let pass = rows.iter().all(|r| {
        r.alpha_closed_form && r.beta_closed_form.unwrap_or(true) && r.delta_matches
    }) && alpha_p_vanishes.unwrap_or(true)
        && beta_p_matches.unwrap_or(true);
    Ok(RecurrenceReport {
        p: p.get(),
        q,
        ell_j,
        rows,
        alpha_p_vanishes,
        beta_p_matches,
        pass,
    })
}

/// Substituting `values` into `f^p` agrees with iterating the specialized
/// series.
pub fn specialization_commutes(g: &GenericSeries, values: &[Fp]) -> Result<bool> {
    let generic = pth_iterate(&g.series)?;
    let special_coeffs: Vec<Fp> = g
        .series
        .series()
        .coeffs()
        .iter()
        .map(|c| c.evaluate(values))
        .collect::<Result<_>>()?;
    let special = WildSeries::new(TruncatedSeries::new(special_coeffs)?)?;
    let special_p = pth_iterate(&special)?;
    for (c, want) in generic.series().coeffs().iter().zip(special_p.series().coeffs()) {
        if c.evaluate(values)? != *want {
            return Ok(false);
        }
    }
    Ok(true)
}
