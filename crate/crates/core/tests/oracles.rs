//! Independent reference computations on plain `u64` vectors, checked
//! against the library, plus fixed published values.

use proptest::prelude::*;

use wildram::coeff::{Fp, MPoly, Monomial, Prime};
use wildram::residue::{omega, pind_closed, pind_laurent, residue_of_form, LambdaSet};
use wildram::series::{Order, TruncatedSeries};
use wildram::symbolic::{recurrence_alpha_beta, verify_delta_short, verify_main_lemma};
use wildram::wild::{iterate, lower_ramification, WildSeries};

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn mul_trunc(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// `f(g)` by Horner's rule.
fn compose_naive(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![0; f.len()];
    for &c in f.iter().rev() {
        acc = mul_trunc(&acc, g, p);
        acc[0] = (acc[0] + c) % p;
    }
    acc
}

/// Coefficient of `1/z` in `z^{q-ℓ} / (z - f)`, by long division.
fn pind_naive(f: &[u64], q: usize, ell: usize, p: u64) -> u64 {
    // z - f = -z^{q+1} A(z), A_k = f_{q+1+k}.
    let a: Vec<u64> = f[q + 1..].to_vec();
    let a0_inv = inv_mod(a[0], p);
    let mut b = vec![a0_inv];
    for k in 1..=ell {
        let s = (1..=k).fold(0, |acc, i| (acc + a[i] * b[k - i]) % p);
        b.push((p - s) * a0_inv % p);
    }
    (p - b[ell]) % p
}

/// `i_n` from `p^n` plain compositions; `None` if unresolved.
fn ramification_naive(f: &[u64], p: u64, n: u32) -> Option<usize> {
    let mut g: Vec<u64> = (0..f.len()).map(|i| u64::from(i == 1)).collect();
    for _ in 0..p.pow(n) {
        g = compose_naive(f, &g, p);
    }
    (2..g.len()).find(|&d| g[d] != 0).map(|d| d - 1)
}

fn to_series(v: &[u64], p: Prime) -> TruncatedSeries<Fp> {
    TruncatedSeries::new(v.iter().map(|&c| Fp::new(c, p)).collect()).unwrap()
}

fn values(s: &TruncatedSeries<Fp>) -> Vec<u64> {
    s.coeffs().iter().map(|c| c.value() as u64).collect()
}

fn wild_vec(p: u64, q: usize, prec: usize, lead: u64, tail: &[u64]) -> Vec<u64> {
    let mut v = vec![0; prec + 1];
    v[1] = 1;
    v[q + 1] = lead;
    for (k, &c) in tail.iter().enumerate() {
        if q + 2 + k <= prec {
            v[q + 2 + k] = c % p;
        }
    }
    v
}

fn prime_strategy() -> impl Strategy<Value = u64> {
    prop_oneof![Just(3u64), Just(5), Just(7)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_matches_horner(
        p in prime_strategy(),
        f in prop::collection::vec(0u64..7, 12),
        g in prop::collection::vec(0u64..7, 12),
    ) {
        let pr = Prime::new(p).unwrap();
        let f: Vec<u64> = f.iter().map(|c| c % p).collect();
        let mut g: Vec<u64> = g.iter().map(|c| c % p).collect();
        g[0] = 0;
        let lib = to_series(&f, pr).compose(&to_series(&g, pr)).unwrap();
        prop_assert_eq!(values(&lib), compose_naive(&f, &g, p));
    }

    #[test]
    fn both_index_formulas_match_long_division(
        p in prime_strategy(),
        q in 1usize..14,
        lead in 1u64..7,
        tail in prop::collection::vec(0u64..7, 30),
    ) {
        let lead = 1 + lead % (p - 1);
        let prec = 2 * q + 1;
        let v = wild_vec(p, q, prec, lead, &tail);
        let f = WildSeries::new(to_series(&v, Prime::new(p).unwrap())).unwrap();
        let lambda = LambdaSet::new(q, p as u32);
        for j in 1..=lambda.len() {
            let ell = lambda.ell(j).unwrap();
            let want = pind_naive(&v, q, ell, p);
            prop_assert_eq!(pind_laurent(&f, j).unwrap().value() as u64, want);
            prop_assert_eq!(pind_closed(&f, j).unwrap().value() as u64, want);
        }
    }

    #[test]
    fn ramification_matches_plain_iteration(
        q in 1usize..5,
        lead in 1u64..3,
        tail in prop::collection::vec(0u64..3, 40),
    ) {
        let p = 3u64;
        let prec = 45;
        let v = wild_vec(p, q, prec, lead, &tail);
        let f = WildSeries::new(to_series(&v, Prime::new(p).unwrap())).unwrap();
        let prof = lower_ramification(&f, 2).unwrap();
        for n in 0..=2u32 {
            let want = ramification_naive(&v, p, n);
            let got = prof.i(n as usize).unwrap();
            match want {
                Some(i) => prop_assert_eq!(got, Order::Finite(i)),
                None => prop_assert!(!got.is_finite()),
            }
        }
    }

    #[test]
    fn compositional_inverse_composes_to_identity(
        p in prime_strategy(),
        gamma in 1u64..7,
        tail in prop::collection::vec(0u64..7, 14),
    ) {
        let pr = Prime::new(p).unwrap();
        let mut v = vec![0u64; 16];
        v[1] = 1 + gamma % (p - 1);
        for (k, &c) in tail.iter().enumerate() {
            v[k + 2] = c % p;
        }
        let h = to_series(&v, pr);
        let inv = values(&h.compositional_inverse().unwrap());
        let id: Vec<u64> = (0..16).map(|i| u64::from(i == 1)).collect();
        prop_assert_eq!(compose_naive(&v, &inv, p), id.clone());
        prop_assert_eq!(compose_naive(&inv, &v, p), id);
    }
}

fn fp(c: u64) -> Fp {
    Fp::new(c, Prime::new(3).unwrap())
}

fn wild3(prec: usize, terms: &[(usize, u64)]) -> WildSeries<Fp> {
    WildSeries::from_terms(&fp(0), prec, terms.iter().map(|&(d, c)| (d, fp(c)))).unwrap()
}

#[test]
fn second_iterate_doubles_the_displacement() {
    let f = wild3(8, &[(5, 1)]);
    let g = iterate(&f, 2).unwrap();
    assert_eq!(g, wild3(8, &[(5, 2)]));
}

#[test]
fn index_from_leading_coefficients() {
    // z(1 + z^4 + 2 z^5): α = 1, β = 2, so pind_1 = β/α^2 = 2.
    let f = wild3(12, &[(5, 1), (6, 2)]);
    assert_eq!(pind_laurent(&f, 1).unwrap(), fp(2));
}

#[test]
fn ramification_formula_instances() {
    assert_eq!(omega(4, 1, 3, 1), Some(13));
    assert_eq!(omega(4, 1, 3, 2), Some(40));
    assert_eq!(omega(4, 4, 3, 1), Some(16));
}

#[test]
fn residue_lemma_instances() {
    let h = TruncatedSeries::from_terms(&fp(0), 8, [(1, fp(1)), (2, fp(1))]);
    assert_eq!(residue_of_form(&h, 3, 4).unwrap(), fp(0));
    assert_eq!(residue_of_form(&h, 3, 3).unwrap(), fp(1));
}

fn x_monomial(c: u64, exps: &[(u32, u32)]) -> MPoly {
    MPoly::term(fp(c), Monomial::from_exponents(exps))
}

#[test]
fn main_lemma_mod_three() {
    let r = verify_main_lemma(Prime::new(3).unwrap(), 4, 1).unwrap();
    assert_eq!(r.beta, x_monomial(2, &[(0, 2), (1, 1)]));
    assert_eq!(r.gamma, x_monomial(2, &[(0, 1), (1, 2)]));
    assert!(r.pass);
}

#[test]
fn short_iterate_mod_three() {
    let r = verify_delta_short(Prime::new(3).unwrap(), 4, 1).unwrap();
    assert_eq!(r.beta, x_monomial(2, &[(0, 2), (1, 1)]));
    assert!(r.pass);
}

#[test]
fn recurrence_at_m_equal_p() {
    for (q, ell) in [(4, 1), (5, 2), (7, 4)] {
        let r = recurrence_alpha_beta(Prime::new(3).unwrap(), q, ell, 3).unwrap();
        assert_eq!(r.alpha_p_vanishes, Some(true));
        assert_eq!(r.rows[2].beta, x_monomial(2, &[(0, 2), (1, 1)]));
        assert!(r.pass);
    }
}
