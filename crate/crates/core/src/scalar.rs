//! Prime-field scalars.
//!
//! Every algebra in this crate is a finite-dimensional vector space over a
//! prime field, either `F_p` or `Q`. The modulus of `F_p` is only known at run
//! time, so the scalar type is paired with a small context object implementing
//! [`PrimeField`]; all coordinate arithmetic goes through it.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arithmetic context for the prime subfield of an algebra.
pub trait PrimeField: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Ord + Hash + Send + Sync;

    /// `p` for `F_p`, `0` for `Q`.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// `num / den`, or `None` when `den` vanishes in this field.
    #[allow(clippy::wrong_self_convention)]
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Canonical decimal form, parseable back by [`PrimeField::from_ratio`].
    fn render(&self, a: &Self::Elem) -> String;
    /// All elements in canonical order; `None` for infinite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    /// Draw a uniformly random element (bounded numerators for `Q`).
    fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The prime field `F_p` with elements stored as reduced `u64` residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModP {
    p: u64,
}

impl ModP {
    /// `p` must be a prime below `2^32` so that products fit in a `u64`.
    pub fn new(p: u64) -> Option<Self> {
        if !(2..1 << 32).contains(&p) || !is_prime(p) {
            return None;
        }
        Some(ModP { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField for ModP {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<u64> {
        let p = BigInt::from(self.p);
        let reduce = |x: &BigInt| {
            let r = ((x % &p) + &p) % &p;
            r.to_u64().unwrap_or(0)
        };
        let d = reduce(den);
        let n = reduce(num);
        self.inv(&d).map(|di| self.mul(&n, &di))
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.p).collect())
    }
    fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

/// The rational numbers, exact and unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl PrimeField for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<BigRational> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else if a.is_negative() {
            format!("-{}/{}", a.numer().abs(), a.denom())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
    fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let n: i64 = rng.gen_range(-6..=6);
        let d: i64 = rng.gen_range(1..=4);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modp_inverse() {
        let f5 = ModP::new(5).unwrap();
        assert_eq!(f5.inv(&2), Some(3));
        assert_eq!(f5.inv(&0), None);
        for a in 1..5 {
            assert_eq!(f5.mul(&a, &f5.inv(&a).unwrap()), 1);
        }
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(ModP::new(9).is_none());
        assert!(ModP::new(1).is_none());
        assert!(ModP::new(7).is_some());
    }

    #[test]
    fn ratio_reduction() {
        let f7 = ModP::new(7).unwrap();
        assert_eq!(f7.from_ratio(&BigInt::from(1), &BigInt::from(2)), Some(4));
        assert_eq!(f7.from_ratio(&BigInt::from(1), &BigInt::from(7)), None);
        assert_eq!(f7.from_i64(-1), 6);
        let q = Rationals;
        assert_eq!(q.render(&q.from_ratio(&BigInt::from(-1), &BigInt::from(2)).unwrap()), "-1/2");
    }
}
