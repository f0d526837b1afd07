//! Deterministic sampling.
//!
//! Sample `i` of a run with seed `s` draws from SplitMix64 seeded with
//! `s ^ (i * 0x9E3779B97F4A7C15)` (wrapping multiply). SplitMix64 advances
//! its state by `0x9E3779B97F4A7C15` and mixes with the multipliers
//! `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`. Every draw goes through
//! `u64` ranges, so streams are identical on every platform.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::coeff::{Fp, FpUniPoly, Prime};
use crate::series::TruncatedSeries;
use crate::wild::WildSeries;

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn for_sample(seed: u64, index: usize) -> Self {
        let mixed = seed ^ (index as u64).wrapping_mul(GOLDEN_GAMMA);
        Sampler {
            rng: SplitMix64::seed_from_u64(mixed),
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.range(0, len as u64 - 1) as usize
    }

    pub fn pick<T: Copy>(&mut self, items: &[T]) -> T {
        items[self.index(items.len())]
    }

    pub fn fp(&mut self, p: Prime) -> Fp {
        Fp::new(self.range(0, p.get() as u64 - 1), p)
    }

    pub fn fp_nonzero(&mut self, p: Prime) -> Fp {
        Fp::new(self.range(1, p.get() as u64 - 1), p)
    }

    /// `z(1 + Σ_{i≥q} a_i z^i)` with `a_q != 0` and uniform higher terms.
    pub fn wild(&mut self, p: Prime, q: usize, prec: usize) -> WildSeries<Fp> {
        let mut terms = vec![(q + 1, self.fp_nonzero(p))];
        for d in q + 2..=prec {
            terms.push((d, self.fp(p)));
        }
        WildSeries::from_terms(&Fp::zero(p), prec, terms).expect("q + 1 >= 2")
    }

    /// Uniform coefficients at the listed degrees on top of `z`.
    pub fn wild_tail(&mut self, p: Prime, prec: usize, fixed: &[(usize, Fp)], from: usize) -> WildSeries<Fp> {
        let mut terms = fixed.to_vec();
        for d in from..=prec {
            terms.push((d, self.fp(p)));
        }
        WildSeries::from_terms(&Fp::zero(p), prec, terms).expect("degrees start at 2")
    }

    /// `γ z + ...` with `γ != 0` (or `γ = 1` when `tangent`).
    pub fn coordinate(&mut self, p: Prime, prec: usize, tangent: bool) -> TruncatedSeries<Fp> {
        let gamma = if tangent { Fp::one(p) } else { self.fp_nonzero(p) };
        let mut terms = vec![(1, gamma)];
        for d in 2..=prec {
            terms.push((d, self.fp(p)));
        }
        TruncatedSeries::from_terms(&Fp::zero(p), prec, terms)
    }

    /// A polynomial in `t` of degree at most `deg`.
    pub fn poly(&mut self, p: Prime, deg: usize) -> FpUniPoly {
        let coeffs: Vec<u64> = (0..=deg).map(|_| self.range(0, p.get() as u64 - 1)).collect();
        FpUniPoly::from_coeffs(p, &coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let mut a = Sampler::for_sample(42, 3);
        let mut b = Sampler::for_sample(42, 3);
        let xs: Vec<u64> = (0..16).map(|_| a.range(0, 1000)).collect();
        let ys: Vec<u64> = (0..16).map(|_| b.range(0, 1000)).collect();
        assert_eq!(xs, ys);
        let mut c = Sampler::for_sample(42, 4);
        let zs: Vec<u64> = (0..16).map(|_| c.range(0, 1000)).collect();
        assert_ne!(xs, zs);
    }

    #[test]
    fn splitmix_reference_output() {
        // First outputs of SplitMix64 from state 0.
        let mut rng = SplitMix64::seed_from_u64(0);
        assert_eq!(rng.random::<u64>(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.random::<u64>(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn wild_sample_shape() {
        let p = Prime::new(5).unwrap();
        let mut s = Sampler::for_sample(1, 0);
        for _ in 0..20 {
            let f = s.wild(p, 3, 12);
            assert_eq!(f.q(), Some(3));
            assert_eq!(f.prec(), 12);
        }
    }
}
