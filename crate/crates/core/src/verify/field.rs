use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact field arithmetic used by the elimination routines.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;
    fn from_i64(v: i64) -> Self;
}

/// The prime 2^31 - 1.
pub const P: u64 = (1 << 31) - 1;

/// Element of the prime field of order [`P`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Fp(u32);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp((v % P) as u32)
    }

    pub fn value(self) -> u64 {
        self.0 as u64
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.value();
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc as u32)
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp::new(self.value() + o.value())
    }
    fn sub(&self, o: &Self) -> Self {
        Fp::new(self.value() + P - o.value())
    }
    fn mul(&self, o: &Self) -> Self {
        Fp::new(self.value() * o.value())
    }
    fn neg(&self) -> Self {
        Fp::new(P - self.value())
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.pow(P - 2)
    }
    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        for v in [1u64, 2, 12345, P - 1] {
            let x = Fp::new(v);
            assert_eq!(x.mul(&x.inv()), Fp::one());
        }
        assert_eq!(Fp::from_i64(-1), Fp::new(P - 1));
        assert_eq!(Fp::new(P - 1).add(&Fp::one()), Fp::zero());
    }
}
