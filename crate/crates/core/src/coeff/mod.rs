//! Exact coefficient domains.
//!
//! Every element carries its own ring descriptor (the prime, and for
//! polynomial rings nothing more), so a series only needs its coefficient
//! vector to know where it lives. All rings here have characteristic `p`.

mod fp;
mod mpoly;
mod rational;
mod unipoly;

use std::fmt;

pub use fp::{binomial_mod_p, field_inverse, multinomial_mod_p, Fp, Prime};
pub use mpoly::{mpoly_mul, MPoly, Monomial};
pub use rational::{rat_valuation, RationalFunction};
pub use unipoly::FpUniPoly;

/// A commutative ring of prime characteristic with value-carrying elements.
///
/// Operations assume both operands come from the same ring; callers that
/// combine foreign values check [`Coeff::same_ring`] first.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// The image of the integer `n` in this ring.
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for non-units.
    fn inverse(&self) -> Option<Self>;
    fn characteristic(&self) -> u32;
    fn same_ring(&self, other: &Self) -> bool;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^e` for a signed exponent; `None` if `e < 0` and `self` is not a unit.
    fn pow_signed(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inverse().map(|inv| inv.pow(e.unsigned_abs()))
        }
    }

    /// Multiply by an integer (reduced in the ring).
    fn scale_int(&self, n: i64) -> Self {
        self.mul(&self.from_int(n))
    }
}
