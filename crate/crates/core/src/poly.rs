//! Dense univariate polynomials with coefficients in an [`Algebra`].

use std::fmt;

use num_bigint::BigUint;

use crate::algebra::{Algebra, RingElement};
use crate::error::{Error, Result};
use crate::scalar::PrimeField;

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<F: PrimeField> {
    alg: Algebra<F>,
    /// Low to high, no trailing zeros.
    coeffs: Vec<RingElement<F>>,
}

impl<F: PrimeField> Polynomial<F> {
    pub fn new(alg: &Algebra<F>, mut coeffs: Vec<RingElement<F>>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.algebra() == alg));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { alg: alg.clone(), coeffs }
    }

    pub fn zero(alg: &Algebra<F>) -> Self {
        Polynomial { alg: alg.clone(), coeffs: Vec::new() }
    }

    pub fn one(alg: &Algebra<F>) -> Self {
        Self::constant(alg.one())
    }

    pub fn constant(c: RingElement<F>) -> Self {
        let alg = c.algebra().clone();
        Self::new(&alg, vec![c])
    }

    /// The polynomial `t`.
    pub fn var(alg: &Algebra<F>) -> Self {
        Self::new(alg, vec![alg.zero(), alg.one()])
    }

    /// `c t^k`.
    pub fn monomial(c: RingElement<F>, k: usize) -> Self {
        let alg = c.algebra().clone();
        let mut v = vec![alg.zero(); k];
        v.push(c);
        Self::new(&alg, v)
    }

    pub fn algebra(&self) -> &Algebra<F> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[RingElement<F>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RingElement<F> {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.alg.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&RingElement<F>> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.alg == other.alg {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(&self.alg, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(&self.alg, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.alg));
        }
        let mut out = vec![self.alg.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Ok(Self::new(&self.alg, out))
    }

    pub fn scale(&self, c: &RingElement<F>) -> Self {
        Self::new(&self.alg, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.alg, self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one(&self.alg);
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    /// Divide by the leading coefficient (which must be a unit).
    pub fn monic(&self) -> Result<Self> {
        let lc = self.leading().ok_or(Error::ZeroPolynomial)?;
        Ok(self.scale(&lc.inverse()?))
    }

    /// Euclidean division by a polynomial with unit leading coefficient.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        self.check(d)?;
        let lc = d.leading().ok_or(Error::ZeroPolynomial)?;
        let inv = lc.inverse()?;
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(&self.alg), self.clone()));
        }
        let mut quot = vec![self.alg.zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] * &inv;
            for (i, di) in d.coeffs.iter().enumerate() {
                rem[k - dd + i] = &rem[k - dd + i] - &(&q * di);
            }
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(&self.alg, quot), Self::new(&self.alg, rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic gcd; coefficients must lie in a field.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if !self.alg.is_field() {
            return Err(Error::NotAField);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &self.alg.from_i64(i as i64)).collect();
        Self::new(&self.alg, coeffs)
    }

    pub fn eval(&self, x: &RingElement<F>) -> RingElement<F> {
        let mut acc = self.alg.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `self^exp mod m`.
    pub fn pow_mod(&self, exp: &BigUint, m: &Self) -> Result<Self> {
        let base = self.rem(m)?;
        let mut r = Self::one(&self.alg).rem(m)?;
        for i in (0..exp.bits()).rev() {
            r = (&r * &r).rem(m)?;
            if exp.bit(i) {
                r = (&r * &base).rem(m)?;
            }
        }
        Ok(r)
    }

    /// Apply `f` to every coefficient, landing in `alg`.
    pub fn map_coeffs(&self, alg: &Algebra<F>, f: impl Fn(&RingElement<F>) -> Result<RingElement<F>>) -> Result<Self> {
        Ok(Self::new(alg, self.coeffs.iter().map(f).collect::<Result<_>>()?))
    }

    /// Coefficients embedded into a larger algebra sharing the same `K`.
    pub fn embed(&self, alg: &Algebra<F>) -> Result<Self> {
        self.map_coeffs(alg, |c| alg.embed(c))
    }

    /// The `e^k` coordinate polynomial, with coefficients in the residue field.
    pub fn eps_coeff(&self, k: usize) -> Polynomial<F> {
        let l = self.alg.residue_field();
        Polynomial::new(&l, self.coeffs.iter().map(|c| c.eps_coeff(k)).collect())
    }

    /// Reduction modulo the nilradical.
    pub fn residue(&self) -> Polynomial<F> {
        self.eps_coeff(0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<F: PrimeField> std::ops::$tr<&Polynomial<F>> for &Polynomial<F> {
            type Output = Polynomial<F>;
            fn $m(self, rhs: &Polynomial<F>) -> Polynomial<F> {
                self.$checked(rhs).expect("polynomials over different algebras")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<F: PrimeField> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            parts.push(match (cs.as_str(), mono.is_empty()) {
                (_, true) => cs,
                ("1", false) => mono,
                _ if cs.contains(['+', '-', '*', '/']) => format!("({cs})*{mono}"),
                _ => format!("{cs}*{mono}"),
            });
        }
        f.write_str(&parts.join("+"))
    }
}

impl<F: PrimeField> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    fn f5() -> Algebra<crate::ModP> {
        Algebra::new(FieldDescriptor::prime(5).unwrap(), 1).unwrap()
    }

    fn p(alg: &Algebra<crate::ModP>, c: &[i64]) -> Polynomial<crate::ModP> {
        Polynomial::new(alg, c.iter().map(|&v| alg.from_i64(v)).collect())
    }

    #[test]
    fn division_identity() {
        let a = f5();
        let f = p(&a, &[1, 2, 3, 4, 1]);
        let d = p(&a, &[2, 0, 3]);
        let (q, r) = f.div_rem(&d).unwrap();
        assert_eq!(&(&q * &d) + &r, f);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_of_coprime_and_shared() {
        let a = f5();
        let x1 = p(&a, &[1, 1]);
        let x2 = p(&a, &[2, 1]);
        let x3 = p(&a, &[3, 1]);
        assert!((&x1 * &x2).gcd(&(&x2 * &x3)).unwrap() == x2);
        assert!(x1.gcd(&x3).unwrap().is_one());
    }

    #[test]
    fn zero_divisor_is_rejected() {
        let a = f5();
        assert_eq!(p(&a, &[1]).div_rem(&Polynomial::zero(&a)).unwrap_err(), Error::ZeroPolynomial);
    }
}
