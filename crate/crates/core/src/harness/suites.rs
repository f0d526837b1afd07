//! Randomized and symbolic verification suites.

use std::time::Instant;

use rayon::prelude::*;

use super::report::{Counterexample, SuiteParams, SuiteReport};
use super::rng::Sampler;
use super::spec::SeriesSpec;
use crate::coeff::{Coeff, Fp, FpUniPoly, Prime, RationalFunction};
use crate::error::{Error, Result};
use crate::newton::{fixed_point_valuations, periodic_point_bound, ValuedPoly};
use crate::residue::{
    compare_profile, is_q_ramified, iterative_residue, omega, pind_closed, pind_laurent, residue_index,
    residue_of_form, smallest_index_j, LambdaSet, SmallestIndex, Verdict,
};
use crate::series::{Order, TruncatedSeries};
use crate::symbolic::{recurrence_alpha_beta, verify_delta_short, verify_main_lemma};
use crate::wild::{conjugate, iterate, lower_ramification, normal_form, required_precision, WildSeries};

pub const SUITES: [&str; 11] = [
    "closed-formula",
    "conj-invariance",
    "iter-residue",
    "criterion1",
    "criterion2",
    "q-ramified",
    "sen-lower-bound",
    "main-lemma",
    "delta-short",
    "powersarezero",
    "newton-bounds",
];

/// Precision cap for the profile sweep, where `p^n q` grows quickly.
const SWEEP_PREC_CAP: usize = 200;

struct Failure {
    check: &'static str,
    observed: String,
    expected: String,
}

/// What one sample recorded.
#[derive(Default)]
struct Outcome {
    checks: Vec<(&'static str, bool)>,
    profiles: usize,
    violations: usize,
    subject: Option<SeriesSpec>,
    failure: Option<(Failure, Option<SeriesSpec>)>,
}

impl Outcome {
    fn focus(&mut self, spec: SeriesSpec) {
        self.subject = Some(spec);
    }

    fn check(&mut self, name: &'static str, ok: bool, observed: impl FnOnce() -> String, expected: impl FnOnce() -> String) {
        self.checks.push((name, ok));
        if !ok && self.failure.is_none() {
            let failure = Failure {
                check: name,
                observed: observed(),
                expected: expected(),
            };
            self.failure = Some((failure, self.subject.clone()));
        }
    }

    fn eq<T: PartialEq + std::fmt::Display>(&mut self, name: &'static str, got: T, want: T) {
        let ok = got == want;
        self.check(name, ok, || got.to_string(), || want.to_string());
    }

    fn error(&mut self, e: Error) {
        self.check("evaluation", false, || e.to_string(), || "no error".into());
    }

    /// The congruence `i_n ≡ i_{n-1} mod p^n`, the bound
    /// `i_n ≥ ℓ(1 + ... + p^{n-1}) + q p^n` with `ℓ = q mod p`, and, when
    /// `p ∤ i_0` and `i_1 < (p^2 - p + 1) i_0`, the closed form
    /// `i_n = i_0 + (1 + ... + p^{n-1})(i_1 - i_0)`.
    fn profile(&mut self, orders: &[Order], p: u32) {
        self.profiles += 1;
        let p = p as u64;
        let Some(Order::Finite(q)) = orders.first().copied() else {
            self.violations += 1;
            self.check("profile", false, || format!("{orders:?}"), || "finite i_0".into());
            return;
        };
        let q = q as u64;
        let ell = q % p;
        let linear = match orders.get(1) {
            Some(Order::Finite(i1)) if !q.is_multiple_of(p) && (*i1 as u64) < (p * p - p + 1) * q => Some(*i1 as u64),
            _ => None,
        };
        let mut problem = None;
        let mut pn = 1u64;
        let mut geometric = 0u64;
        for n in 1..orders.len() {
            geometric += pn;
            pn *= p;
            let bound = ell * geometric + q * pn;
            let predicted = linear.map(|i1| q + geometric * (i1 - q));
            match (orders[n - 1], orders[n]) {
                (Order::Finite(prev), Order::Finite(cur)) => {
                    let (prev, cur) = (prev as u64, cur as u64);
                    if !(cur + pn * prev - prev).is_multiple_of(pn) {
                        problem = Some(format!("i_{n} = {cur} and i_{} = {prev} differ mod {pn}", n - 1));
                    } else if cur < bound {
                        problem = Some(format!("i_{n} = {cur} is below {bound}"));
                    } else if predicted.is_some_and(|want| want != cur) {
                        problem = Some(format!("i_{n} = {cur}, closed form gives {}", predicted.unwrap()));
                    }
                }
                (_, Order::AtLeast(b)) => {
                    if predicted.is_some_and(|want| (b as u64) > want) {
                        problem = Some(format!("i_{n} >= {b} exceeds closed form {}", predicted.unwrap()));
                    }
                }
                (Order::AtLeast(_), Order::Finite(_)) => {
                    problem = Some(format!("i_{n} resolved after an unresolved level"));
                }
            }
            if problem.is_some() {
                break;
            }
        }
        match problem {
            None => self.check("profile", true, String::new, String::new),
            Some(msg) => {
                self.violations += 1;
                let shown: Vec<String> = orders.iter().map(|o| o.to_string()).collect();
                self.check("profile", false, || format!("{} ({msg})", shown.join(", ")), || {
                    "congruence, lower bound and closed form".into()
                });
            }
        }
    }

    fn passed(&self) -> bool {
        self.failure.is_none() && self.violations == 0
    }
}

fn guarded(body: impl FnOnce(&mut Outcome) -> Result<()>) -> Outcome {
    let mut out = Outcome::default();
    if let Err(e) = body(&mut out) {
        out.error(e);
    }
    out
}

fn run_samples(n: usize, body: impl Fn(usize, &mut Outcome) -> Result<()> + Sync) -> Vec<Outcome> {
    (0..n)
        .into_par_iter()
        .map(|i| guarded(|out| body(i, out)))
        .collect()
}

fn prime(p: u64) -> Result<Prime> {
    let p = Prime::new(p)?;
    if !p.is_odd() {
        return Err(Error::EvenCharacteristic);
    }
    Ok(p)
}

fn primes(params: &SuiteParams, default: &[u64]) -> Result<Vec<Prime>> {
    match params.p {
        Some(p) => Ok(vec![prime(p)?]),
        None => default.iter().map(|&p| prime(p)).collect(),
    }
}

/// `q >= p + 1` with `p ∤ q`.
fn check_large_q(q: usize, p: Prime) -> Result<()> {
    let pu = p.get() as usize;
    if q <= pu || q.is_multiple_of(pu) {
        return Err(Error::PreconditionViolation(format!(
            "q = {q} needs q >= p + 1 and p not dividing q (p = {pu})"
        )));
    }
    Ok(())
}

fn qs_for(params: &SuiteParams, default: &[usize], p: Prime) -> Result<Vec<usize>> {
    let qs = match params.q {
        Some(q) => vec![q],
        None => default.to_vec(),
    };
    for &q in &qs {
        check_large_q(q, p)?;
    }
    Ok(qs)
}

fn precision(q: usize, p: Prime, n_max: usize) -> Result<usize> {
    required_precision(q as u64, p.get() as u64, n_max as u32)
        .map(|v| v as usize)
        .ok_or_else(|| Error::PreconditionViolation("precision overflows".into()))
}

fn omega_at(q: usize, ell: usize, p: Prime, n: usize) -> u64 {
    omega(q as u64, ell as u64, p.get() as u64, n as u32).expect("sizes fit in u64")
}

fn predicted_profile(q: usize, ell: usize, p: Prime, n_max: usize) -> Vec<u64> {
    (0..=n_max).map(|n| omega_at(q, ell, p, n)).collect()
}

fn show_orders(orders: &[Order]) -> String {
    orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(", ")
}

fn show_u64(vals: &[u64]) -> String {
    vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

fn exceeds(order: Order, bound: u64) -> bool {
    order.lower_bound() as u64 > bound
}

/// Run `name` with `seed` and `params`.
///
/// Samples are evaluated in parallel and reduced in index order, so the
/// serialized report depends only on the arguments.
pub fn run_suite(name: &str, seed: u64, params: &SuiteParams) -> Result<SuiteReport> {
    let start = Instant::now();
    let (resolved, outcomes) = match name {
        "closed-formula" => closed_formula(seed, params)?,
        "conj-invariance" => conj_invariance(seed, params)?,
        "iter-residue" => iter_residue(seed, params)?,
        "criterion1" => criterion1(seed, params)?,
        "criterion2" => criterion2(seed, params)?,
        "q-ramified" => q_ramified(seed, params)?,
        "sen-lower-bound" => sen_lower_bound(seed, params)?,
        "main-lemma" => main_lemma(params)?,
        "delta-short" => delta_short(params)?,
        "powersarezero" => powers_are_zero(seed, params)?,
        "newton-bounds" => newton_bounds(seed, params)?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let mut report = SuiteReport::new(name, seed, resolved);
    for (i, out) in outcomes.into_iter().enumerate() {
        report.samples += 1;
        if out.passed() {
            report.pass += 1;
        } else {
            report.fail += 1;
        }
        report.profiles_checked += out.profiles;
        report.profile_violations += out.violations;
        for (check, ok) in out.checks {
            let tally = report.checks.entry(check.to_string()).or_default();
            if ok {
                tally.pass += 1;
            } else {
                tally.fail += 1;
            }
        }
        if report.first_counterexample.is_none() {
            if let Some((failure, series)) = out.failure {
                report.first_counterexample = Some(Counterexample {
                    sample: i,
                    check: failure.check.to_string(),
                    series,
                    observed: failure.observed,
                    expected: failure.expected,
                });
            }
        }
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

type SuiteOutput = (SuiteParams, Vec<Outcome>);

/// `pind_closed = pind_laurent` for every `j`, and `pind_r = ind`.
fn closed_formula(seed: u64, params: &SuiteParams) -> Result<SuiteOutput> {
    let ps = primes(params, &[3, 5, 7])?;
    let q_max = params.q_max.unwrap_or(20).max(1);
    let per_p = params.samples.unwrap_or(500);
    let outcomes = run_samples(per_p * ps.len(), |i, out| {
        let p = ps[i / per_p];
        let mut s = Sampler::for_sample(seed, i);
        let q = s.range(1, q_max as u64) as usize;
        let f = s.wild(p, q, 2 * q + 1);
        out.focus(SeriesSpec::from_wild(&f));
        let r = LambdaSet::new(q, p.get()).len();
        for j in 1..=r {
            out.eq("closed-formula", pind_closed(&f, j)?, pind_laurent(&f, j)?);
        }
        out.eq("ind", pind_laurent(&f, r)?, residue_index(&f)?);
        Ok(())
    });
    let resolved = SuiteParams {
        p: params.p,
        q_max: Some(q_max),
        samples: Some(per_p),
        ..Default::default()
    };
    Ok((resolved, outcomes))
}

/// `pind_j(f̂) = h'(0)^{ℓ_j - q} pind_j(f)` at the smallest nonzero `j`, where
/// `f∘h = h∘f̂`, together with the pushforward form of the same identity.
///
/// Odd samples build `f` with a chosen smallest index: a normal form
/// `z(1 + α z^q + β z^{q+ℓ_j})` plus a tail, hidden by a random conjugation.
fn conj_invariance(seed: u64, params: &SuiteParams) -> Result<SuiteOutput> {
    let ps = primes(params, &[3, 5, 7])?;
    let q_max = params.q_max.unwrap_or(12).max(1);
    let n = params.samples.unwrap_or(1000);
    let outcomes = run_samples(n, |i, out| {
        let p = ps[i % ps.len()];
        let mut s = Sampler::for_sample(seed, i);
        let q = s.range(1, q_max as u64) as usize;
        let prec = 2 * q + 2;
        let lambda = LambdaSet::new(q, p.get());
        let f = if i % 2 == 0 {
            s.wild(p, q, prec)
        } else {
            let j = s.range(1, lambda.len() as u64) as usize;
            let ell = lambda.ell(j)?;
            let mut fixed = vec![(q + 1, s.fp_nonzero(p))];
            // `ℓ_1 = 0` when `p | q`, and then `pind_1 = -1/α` already.
            if ell > 0 {
                fixed.push((q + ell + 1, s.fp_nonzero(p)));
            }
            let g = s.wild_tail(p, prec, &fixed, q + ell + 2);
            conjugate(&g, &s.coordinate(p, prec, false))?
        };
        out.focus(SeriesSpec::from_wild(&f));
        let h = s.coordinate(p, prec, false);
        let gamma = h.coeffs()[1];
        let before = smallest_index_j(&f)?;
        let ell_1 = lambda.ell(1)?;
        // `f∘h = h∘f̂` scales by `γ^{ℓ_j - q}`; `f̂ = h∘f∘h^{-1}` by `γ^{q - ℓ_j}`.
        for (pulled_back, fh) in [(true, conjugate(&f, &h.compositional_inverse()?)?), (false, conjugate(&f, &h)?)] {
            let scale = |ell: usize| {
                let e = ell as i64 - q as i64;
                gamma.pow_signed(if pulled_back { e } else { -e }).expect("γ != 0")
            };
            let (first, smallest) = if pulled_back {
                ("pind-1", "smallest-pind")
            } else {
                ("pind-1-pushforward", "smallest-pind-pushforward")
            };
            out.eq(first, pind_laurent(&fh, 1)?, scale(ell_1) * pind_laurent(&f, 1)?);
            let after = smallest_index_j(&fh)?;
            out.check("smallest-j", before == after, || format!("{after:?}"), || format!("{before:?}"));
            if let SmallestIndex::Some(j) = before {
                let ell = lambda.ell(j)?;
                out.eq(smallest, pind_laurent(&fh, j)?, scale(ell) * pind_laurent(&f, j)?);
            }
        }
        Ok(())
    });
    let resolved = SuiteParams {
        p: params.p,
        q_max: Some(q_max),
        samples: Some(n),
        ..Default::default()
    };
    Ok((resolved, outcomes))
}

/// `pind_1(f^n) = pind_1(f)/n` and `resit(f^n) = resit(f)/n` for
/// `n ∈ {2, ..., p-1} ∪ {p+1}` and `q >= p`.
fn iter_residue(seed: u64, params: &SuiteParams) -> Result<SuiteOutput> {
    let ps = primes(params, &[3, 5])?;
    let per_p = params.samples.unwrap_or(200);
    let outcomes = run_samples(per_p * ps.len(), |i, out| {
        let p = ps[i / per_p];
        let pu = p.get() as u64;
        let mut s = Sampler::for_sample(seed, i);
        let q = s.range(pu, pu + 6) as usize;
        let f = s.wild(p, q, 2 * q + 2);
        out.focus(SeriesSpec::from_wild(&f));
        let pind = pind_laurent(&f, 1)?;
        let resit = iterative_residue(&f)?;
        for n in (2..pu).chain([pu + 1]) {
            let fnth = iterate(&f, n)?;
            let n_fp = Fp::new(n, p);
            out.eq("pind-scaling", n_fp * pind_laurent(&fnth, 1)?, pind);
            out.eq("resit-scaling", n_fp * iterative_residue(&fnth)?, resit);
        }
        Ok(())
    });
    let resolved = SuiteParams {
        p: params.p,
        samples: Some(per_p),
        ..Default::default()
    };
    Ok((resolved, outcomes))
}

/// `(-1)^n α^{(p^{n+1}-1)/(p-1)} pind_1^{(p^n-1)/(p-1)}`.
fn delta_closed_form(alpha: Fp, pind: Fp, p: Prime, n: u32) -> Fp {
    let pu = p.get() as u64;
    let e_alpha = (pu.pow(n + 1) - 1) / (pu - 1);
    let e_pind = (pu.pow(n) - 1) / (pu - 1);
    let sign = if n.is_multiple_of(2) { Fp::one(p) } else { -Fp::one(p) };
    sign * alpha.pow(e_alpha) * pind.pow(e_pind)
}

/// Both directions of the first criterion, plus the closed form of `δ_n`.
///
/// Positive samples are uniform apart from `a_{q+ℓ}`, which is solved for so
/// that `pind_1` takes a uniform nonzero value; negative samples are
/// conjugates of `z(1 + α z^q) + O(z^{q+ℓ+2})`.
fn criterion1(seed: u64, params: &SuiteParams) -> Result<SuiteOutput> {
    let p = prime(params.p.unwrap_or(3))?;
    let qs = qs_for(params, &[4, 5, 7, 8], p)?;
    let n_max = params.n_max.unwrap_or(2).max(1);
    let per_q = params.samples.unwrap_or(100);
    for &q in &qs {
        precision(q, p, n_max)?;
    }
    let outcomes = run_samples(per_q * qs.len(), |i, out| {
        let q = qs[i / per_q];
        let ell = LambdaSet::new(q, p.get()).ell(1)?;
        let prec = precision(q, p, n_max)?;
        let mut s = Sampler::for_sample(seed, i);

        let draft = s.wild(p, q, prec);
        let alpha = *draft.a(q).expect("q resolved");
        let target = s.fp_nonzero(p);
        let mut coeffs = draft.series().coeffs().to_vec();
        coeffs[q + ell + 1] = Fp::zero(p);
        let base = pind_laurent(&WildSeries::new(TruncatedSeries::new(coeffs.clone())?)?, 1)?;
        coeffs[q + ell + 1] = (target - base) * alpha * alpha;
        let f = WildSeries::new(TruncatedSeries::new(coeffs)?)?;
        out.focus(SeriesSpec::from_wild(&f));
        let pind = pind_laurent(&f, 1)?;
        out.eq("pind-target", pind, target);
        let prof = lower_ramification(&f, n_max)?;
        let orders = prof.orders();
        out.profile(&orders, p.get());
        let predicted = predicted_profile(q, ell, p, n_max);
        let verdict = compare_profile(&predicted, &orders);
        out.check("criterion1-positive", verdict == Verdict::Match, || show_orders(&orders), || show_u64(&predicted));
        for n in 1..=n_max {
            let want = delta_closed_form(alpha, pind, p, n as u32);
            match &prof.levels[n].delta {
                Some(got) => out.eq("delta-closed-form", *got, want),
                None => out.check("delta-closed-form", false, || "unresolved".into(), || want.to_string()),
            }
        }

        let fixed = [(q + 1, s.fp_nonzero(p))];
        let g = s.wild_tail(p, prec, &fixed, q + ell + 2);
        let f = conjugate(&g, &s.coordinate(p, prec, false))?;
        out.focus(SeriesSpec::from_wild(&f));
        out.eq("pind-zero", pind_laurent(&f, 1)?, Fp::zero(p));
        let orders = lower_ramification(&f, n_max)?.orders();
        out.profile(&orders, p.get());
        let bound = omega_at(q, ell, p, 1);
        out.check("criterion1-negative", exceeds(orders[1], bound), || orders[1].to_string(), || format!("> {bound}"));
        Ok(())
    });
    let resolved = SuiteParams {
        p: Some(p.get() as u64),
        q: params.q,
        n_max: Some(n_max),
        samples: Some(per_q),
        ..Default::default()
    };
    Ok((resolved, outcomes))
}

/// The second criterion on conjugates of `z(1 + α z^q + β z^{q+ℓ_j})` plus a
/// tail from `z^{q+ℓ_j+p+1}`, for each `j < ⌈q/p⌉`.
fn criterion2(seed: u64, params: &SuiteParams) -> Result<SuiteOutput> {
    let p = prime(params.p.unwrap_or(3))?;
    let pu = p.get() as usize;
    let qs = qs_for(params, &[7, 8, 10], p)?;
    let n_max = params.n_max.unwrap_or(2).max(1);
    let per_case = params.samples.unwrap_or(10);
    let cases: Vec<(usize, usize)> = qs
        .iter()
        .flat_map(|&q| (1..q.div_ceil(pu)).map(move |j| (q, j)))
        .collect();
    for &q in &qs {
        precision(q, p, n_max)?;
    }
    let outcomes = run_samples(per_case * cases.len(), |i, out| {
        let (q, j) = cases[i / per_case];
        let ell = LambdaSet::new(q, p.get()).ell(j)?;
        let prec = precision(q, p, n_max)?;
        let mut s = Sampler::for_sample(seed, i);
        for positive in [true, false] {
            let mut fixed = vec![(q + 1, s.fp_nonzero(p))];
            if positive {
                fixed.push((q + ell + 1, s.fp_nonzero(p)));
            }
            let g = s.wild_tail(p, prec, &fixed, q + ell + pu + 1);
            let f = conjugate(&g, &s.coordinate(p, prec, false))?;
            out.focus(SeriesSpec::from_wild(&f));
            let orders = lower_ramification(&f, n_max)?.orders();
            out.profile(&orders, p.get());
            if positive {
                let found = smallest_index_j(&f)?;
                out.check("smallest-j", found == SmallestIndex::Some(j), || format!("{found:?}"), || format!("Some({j})"));
                let predicted = predicted_profile(q, ell, p, n_max);
                let verdict = compare_profile(&predicted, &orders);
                out.check("criterion2-positive", verdict == Verdict::Match, || show_orders(&orders), || {
                    show_u64(&predicted)
                });
                let (nf, _) = normal_form(&f, j)?;
                let a = *nf.a(q).expect("q resolved");
                let b = *nf.a(q + ell).expect("within precision");
                out.eq("normal-form-index", b * (a * a).inv()?, pind_laurent(&f, j)?);
            } else {
                let bound = omega_at(q, ell, p, 1);
                out.check("criterion2-negative", exceeds(orders[1], bound), || orders[1].to_string(), || {
                    format!("> {bound}")
                });
            }
        }
        Ok(())
    });
    let resolved = SuiteParams {
        p: Some(p.get() as u64),
        q: params.q,
        n_max: Some(n_max),
        samples: Some(per_case),
        ..Default::default()
    };
    Ok((resolved, outcomes))
}

/// Predicted against measured q-ramification.
///
/// For `p = 3`, samples 0 and 1 are `z + z^5` and `z(1 + z^4 + z^8)`. Other
/// odd samples kill every `pind_j` with `ℓ_j < q` by construction, so the
/// prediction turns on `resit`; even samples are uniform.
fn q_ramified(seed: u64, params: &SuiteParams) -> Result<SuiteOutput> {
    let p = prime(params.p.unwrap_or(3))?;
    let qs = qs_for(params, &[4, 5, 7, 8], p)?;
    let n_max = params.n_max.unwrap_or(2).max(1);
    let n = params.samples.unwrap_or(40);
    for &q in &qs {
        precision(q, p, n_max)?;
    }
    let outcomes = run_samples(n, |i, out| {
        let mut s = Sampler::for_sample(seed, i);
        let f = if p.get() == 3 && i < 2 {
            let q = 4;
            let prec = precision(q, p, n_max)?;
            let terms: &[(usize, u64)] = if i == 0 { &[(5, 1)] } else { &[(5, 1), (9, 1)] };
            WildSeries::from_terms(&Fp::zero(p), prec, terms.iter().map(|&(d, c)| (d, Fp::new(c, p))))?
        } else {
            let q = qs[s.index(qs.len())];
            let prec = precision(q, p, n_max)?;
            if i % 2 == 1 {
                let fixed = [(q + 1, s.fp_nonzero(p)), (2 * q + 1, s.fp(p))];
                let g = s.wild_tail(p, prec, &fixed, 2 * q + 2);
                conjugate(&g, &s.coordinate(p, prec, false))?
            } else {
                s.wild(p, q, prec)
            }
        };
        out.focus(SeriesSpec::from_wild(&f));
        let q = f.q_or_err()?;
        let orders = lower_ramification(&f, n_max)?.orders();
        out.profile(&orders, p.get());
        let (predicted, measured) = is_q_ramified(&f, n_max)?;
        out.check("q-ramified", predicted == measured, || format!("measured {measured}"), || {
            format!("predicted {predicted}")
        });
        if p.get() == 3 && i < 2 {
            let resit = iterative_residue(&f)?;
            let i_1 = orders[1];
            let target = Order::Finite(omega_at(q, q, p, 1) as usize);
            if i == 0 {
                out.eq("example-resit", resit, Fp::one(p));
                out.eq("example-i1", i_1, target);
            } else {
                out.eq("example-resit", resit, Fp::zero(p));
                out.check("example-i1", i_1 != target, || i_1.to_string(), || format!("not {target}"));
            }
        }
        Ok(())
    });
    let resolved = SuiteParams {
        p: Some(p.get() as u64),
        q: params.q,
        n_max: Some(n_max),
        samples: Some(n),
        ..Default::default()
    };
    Ok((resolved, outcomes))
}

/// Profiles of uniform series with any `q >= 1`, checked globally.
fn sen_lower_bound(seed: u64, params: &SuiteParams) -> Result<SuiteOutput> {
    let ps = primes(params, &[3, 5])?;
    let q_max = params.q_max.unwrap_or(8).max(1);
    let n_max = params.n_max.unwrap_or(2).max(1);
    let n = params.samples.unwrap_or(200);
    let outcomes = run_samples(n, |i, out| {
        let p = ps[i % ps.len()];
        let mut s = Sampler::for_sample(seed, i);
        let q = s.range(1, q_max as u64) as usize;
        let prec = precision(q, p, n_max)?.min(SWEEP_PREC_CAP.max(2 * q + 2));
        let f = s.wild(p, q, prec);
        out.focus(SeriesSpec::from_wild(&f));
        let orders = lower_ramification(&f, n_max)?.orders();
        out.profile(&orders, p.get());
        Ok(())
    });
    let resolved = SuiteParams {
        p: params.p,
        q_max: Some(q_max),
        n_max: Some(n_max),
        samples: Some(n),
        ..Default::default()
    };
    Ok((resolved, outcomes))
}

fn cases_or(params: &SuiteParams, default: &[(u64, usize, usize)]) -> Vec<(u64, usize, usize)> {
    params.cases.clone().unwrap_or_else(|| default.to_vec())
}

pub const MAIN_LEMMA_CASES: [(u64, usize, usize); 5] = [(3, 4, 1), (3, 5, 2), (3, 7, 1), (5, 7, 2), (5, 11, 1)];

pub const DELTA_SHORT_CASES: [(u64, usize, usize); 13] = [
    (3, 4, 1),
    (3, 4, 4),
    (3, 5, 2),
    (3, 5, 5),
    (3, 7, 1),
    (3, 7, 4),
    (3, 7, 7),
    (3, 8, 2),
    (3, 8, 8),
    (5, 6, 1),
    (5, 6, 6),
    (5, 7, 2),
    (5, 7, 7),
];

fn main_lemma(params: &SuiteParams) -> Result<SuiteOutput> {
    let cases = cases_or(params, &MAIN_LEMMA_CASES);
    let outcomes = run_samples(cases.len(), |i, out| {
        let (p, q, ell) = cases[i];
        let report = verify_main_lemma(prime(p)?, q, ell)?;
        out.check("beta", report.beta == report.expected_beta, || report.beta.to_string(), || {
            report.expected_beta.to_string()
        });
        out.check("gamma", report.gamma == report.expected_gamma, || report.gamma.to_string(), || {
            report.expected_gamma.to_string()
        });
        out.check("no-stray-terms", report.stray.is_none(), || format!("{:?}", report.stray), || "none".into());
        out.check("main-lemma", report.pass, || format!("case {p},{q},{ell}"), || "pass".into());
        Ok(())
    });
    let resolved = SuiteParams {
        cases: Some(cases),
        ..Default::default()
    };
    Ok((resolved, outcomes))
}

fn delta_short(params: &SuiteParams) -> Result<SuiteOutput> {
    let cases = cases_or(params, &DELTA_SHORT_CASES);
    let outcomes = run_samples(cases.len(), |i, out| {
        let (p, q, ell_j) = cases[i];
        let p = prime(p)?;
        let report = verify_delta_short(p, q, ell_j)?;
        let name = if ell_j < q { "beta-short" } else { "beta-short-top" };
        out.check(name, report.beta == report.expected_beta, || report.beta.to_string(), || {
            report.expected_beta.to_string()
        });
        out.check("delta-identity", report.delta_identity, || "Δ_p differs from f^p - z".into(), || {
            "equal".into()
        });
        out.check("no-stray-terms", report.stray.is_none(), || format!("{:?}", report.stray), || "none".into());
        let rec = recurrence_alpha_beta(p, q, ell_j, p.get() as usize)?;
        out.check("alpha-p-vanishes", rec.alpha_p_vanishes == Some(true), || {
            format!("{:?}", rec.rows.last().map(|r| r.alpha.to_string()))
        }, || "0".into());
        out.check("beta-p-recurrence", rec.beta_p_matches == Some(true), || {
            format!("{:?}", rec.rows.last().map(|r| r.beta.to_string()))
        }, || report.expected_beta.to_string());
        out.check("recurrence", rec.pass, || format!("case {},{q},{ell_j}", p.get()), || "pass".into());
        Ok(())
    });
    let resolved = SuiteParams {
        cases: Some(cases),
        ..Default::default()
    };
    Ok((resolved, outcomes))
}

/// Residues of `z^d h'/h^{N+1}` for `p | d`: zero when `p ∤ N`, and
/// `h'(0)^{-d}` when `N = d`.
fn powers_are_zero(seed: u64, params: &SuiteParams) -> Result<SuiteOutput> {
    let p = prime(params.p.unwrap_or(3))?;
    let pu = p.get() as usize;
    let n = params.samples.unwrap_or(50);
    let outcomes = run_samples(n, |i, out| {
        let mut s = Sampler::for_sample(seed, i);
        let h = s.coordinate(p, 2 * pu + 1, false);
        let gamma = h.coeffs()[1];
        for d in [pu, 2 * pu] {
            for big_n in 1..=2 * pu {
                let c = residue_of_form(&h, d, big_n)?;
                if big_n % pu != 0 {
                    out.eq("prime-to-p-vanishes", c, Fp::zero(p));
                }
                if big_n == d {
                    out.eq("diagonal", c, gamma.pow_signed(-(d as i64)).expect("γ != 0"));
                }
            }
        }
        Ok(())
    });
    let resolved = SuiteParams {
        p: Some(p.get() as u64),
        samples: Some(n),
        ..Default::default()
    };
    Ok((resolved, outcomes))
}

/// Root valuations for `f = z(1 + t^a z^q + Σ_{i=1}^{ℓ} c_i(t) z^{q+i})`
/// over `F_p(t)`, with `c_ℓ` nudged so that `pind_1 != 0`.
fn newton_bounds(seed: u64, params: &SuiteParams) -> Result<SuiteOutput> {
    let p = prime(params.p.unwrap_or(3))?;
    let qs = qs_for(params, &[4, 5, 7], p)?;
    let n = params.samples.unwrap_or(100);
    let outcomes = run_samples(n, |i, out| {
        let q = qs[i % qs.len()];
        let ell = LambdaSet::new(q, p.get()).ell(1)?;
        let mut s = Sampler::for_sample(seed, i);
        let a = s.range(0, 3) as usize;
        let mut polys = vec![FpUniPoly::zero(p); q + ell + 2];
        polys[1] = FpUniPoly::one(p);
        polys[q + 1] = FpUniPoly::monomial(Fp::one(p), a);
        for k in 1..=ell {
            polys[q + k + 1] = s.poly(p, 3);
        }
        let nudge = FpUniPoly::monomial(Fp::one(p), s.range(0, 3) as usize);
        let mut f = ValuedPoly::from_polys(polys.clone())?;
        if pind_of(&f)?.is_zero() {
            polys[q + ell + 1] = polys[q + ell + 1].add(&nudge);
            f = ValuedPoly::from_polys(polys)?;
        }
        out.focus(SeriesSpec::from_valued(&f));
        let fixed = fixed_point_valuations(&f)?;
        out.check("fixed-point-bound", fixed.pass, || format!("{:?}", fixed.polygon.segments), || {
            format!("root valuations <= {}", fixed.v_a)
        });
        let periodic = periodic_point_bound(&f, p)?;
        let bound_ok = periodic
            .polygon
            .positive_roots()
            .all(|seg| seg.root_valuation <= periodic.bound);
        out.check("periodic-point-bound", bound_ok, || format!("{:?}", periodic.polygon.segments), || {
            format!("root valuations <= {}", periodic.bound)
        });
        if let Some(ok) = periodic.delta_check {
            out.check("delta-valuation", ok, || "v(δ_1) - v(a) mismatch".into(), || "p v(a) + v(pind_1)".into());
        }
        Ok(())
    });
    let resolved = SuiteParams {
        p: Some(p.get() as u64),
        q: params.q,
        samples: Some(n),
        ..Default::default()
    };
    Ok((resolved, outcomes))
}

fn pind_of(f: &ValuedPoly) -> Result<RationalFunction> {
    let p = f.prime();
    let zero = RationalFunction::from_poly(FpUniPoly::zero(p));
    let prec = f.degree() + p.get() as usize;
    let series = TruncatedSeries::from_terms(&zero, prec, f.coeffs().iter().cloned().enumerate());
    pind_closed(&WildSeries::new(series)?, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(samples: usize) -> SuiteParams {
        SuiteParams {
            samples: Some(samples),
            ..Default::default()
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", 0, &SuiteParams::default()), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn every_suite_passes_small_runs() {
        for name in SUITES {
            let report = run_suite(name, 11, &small(4)).unwrap();
            assert!(report.all_passed(), "{}", report.to_json());
            assert!(report.samples > 0);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("conj-invariance", 5, &small(30)).unwrap();
        let b = run_suite("conj-invariance", 5, &small(30)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn profile_check_flags_bad_congruence() {
        let mut out = Outcome::default();
        out.profile(&[Order::Finite(4), Order::Finite(14)], 3);
        assert_eq!(out.violations, 1);
        let mut out = Outcome::default();
        out.profile(&[Order::Finite(4), Order::Finite(13), Order::Finite(40)], 3);
        assert_eq!(out.violations, 0);
    }

    #[test]
    fn profile_check_flags_low_values() {
        let mut out = Outcome::default();
        // Congruent mod 3 but below q p = 12.
        out.profile(&[Order::Finite(4), Order::Finite(10)], 3);
        assert_eq!(out.violations, 1);
    }

    #[test]
    fn delta_formula_known_case() {
        // z(1 + z^4 + 2 z^5) over F_3: α = 1, pind_1 = 2.
        let p = Prime::new(3).unwrap();
        assert_eq!(delta_closed_form(Fp::one(p), Fp::new(2, p), p, 1), -Fp::new(2, p));
    }
}
