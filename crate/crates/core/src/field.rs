//! Finite fields `F_{p^d} = F_p[x]/(mu)` and the rationals.

use num_bigint::BigUint;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::poly::Polynomial;
use crate::scalar::{ModP, PrimeField, Rationals};

/// A field given by its prime subfield and, for `d > 1`, a monic irreducible
/// modulus over that subfield.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDescriptor<F: PrimeField> {
    prime: F,
    /// Monic, coefficients low to high, length `d + 1`. `None` means `d = 1`.
    modulus: Option<Vec<F::Elem>>,
}

impl FieldDescriptor<ModP> {
    /// `F_p`. Fails when `p` is not a prime below `2^32`.
    pub fn prime(p: u64) -> Result<Self> {
        let f = ModP::new(p).ok_or_else(|| Error::InvalidDescriptor(format!("{p} is not a supported prime")))?;
        Ok(FieldDescriptor { prime: f, modulus: None })
    }

    /// `F_{p^d}` with the smallest irreducible modulus of degree `d`, where
    /// monic polynomials are ordered by the integer `sum c_i p^i` of their
    /// lower coefficients.
    pub fn galois(p: u64, d: usize) -> Result<Self> {
        let base = Self::prime(p)?;
        if d == 0 {
            return Err(Error::InvalidDescriptor("degree must be at least 1".into()));
        }
        if d == 1 {
            return Ok(base);
        }
        let alg = Algebra::new(base.clone(), 1)?;
        let modulus = smallest_irreducible(&alg, d)?;
        let coeffs = modulus.coeffs().iter().map(|c| c.coords()[0]).collect();
        Ok(FieldDescriptor { prime: base.prime, modulus: Some(coeffs) })
    }
}

impl FieldDescriptor<Rationals> {
    pub fn rationals() -> Self {
        FieldDescriptor { prime: Rationals, modulus: None }
    }
}

impl<F: PrimeField> FieldDescriptor<F> {
    /// The prime field itself.
    pub fn from_prime(prime: F) -> Self {
        FieldDescriptor { prime, modulus: None }
    }

    /// `prime[x]/(modulus)`; `modulus` is given low-to-high and must be monic
    /// and irreducible. Irreducibility is only decidable here for `p > 0`.
    pub fn with_modulus(prime: F, modulus: Vec<F::Elem>) -> Result<Self> {
        let mut m = modulus;
        while m.len() > 1 && prime.is_zero(m.last().unwrap()) {
            m.pop();
        }
        if m.len() < 2 {
            return Err(Error::InvalidDescriptor("modulus must have degree at least 1".into()));
        }
        if !prime.is_one(m.last().unwrap()) {
            return Err(Error::InvalidDescriptor("modulus must be monic".into()));
        }
        if m.len() == 2 {
            return Ok(FieldDescriptor { prime, modulus: None });
        }
        if prime.characteristic() == 0 {
            return Err(Error::Unsupported("extensions of Q are not supported".into()));
        }
        let base = FieldDescriptor { prime: prime.clone(), modulus: None };
        let alg = Algebra::new(base, 1)?;
        let poly = Polynomial::new(&alg, m.iter().map(|c| alg.from_prime(c.clone())).collect());
        if !is_irreducible(&poly)? {
            return Err(Error::InvalidDescriptor("modulus is reducible".into()));
        }
        Ok(FieldDescriptor { prime, modulus: Some(m) })
    }

    pub fn prime_field(&self) -> &F {
        &self.prime
    }

    pub fn characteristic(&self) -> u64 {
        self.prime.characteristic()
    }

    pub fn degree(&self) -> usize {
        self.modulus.as_ref().map_or(1, |m| m.len() - 1)
    }

    pub fn modulus(&self) -> Option<&[F::Elem]> {
        self.modulus.as_deref()
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic() == 0
    }

    /// `p^d`, or `None` for `Q`.
    pub fn cardinality(&self) -> Option<BigUint> {
        match self.characteristic() {
            0 => None,
            p => Some(BigUint::from(p).pow(self.degree() as u32)),
        }
    }
}

/// Smallest monic irreducible polynomial of degree `d` over the residue field
/// of `alg` (which must be a finite field), in the enumeration order of
/// [`Algebra::elements`].
pub fn smallest_irreducible<F: PrimeField>(alg: &Algebra<F>, d: usize) -> Result<Polynomial<F>> {
    if !alg.is_field() {
        return Err(Error::NotAField);
    }
    let elems = alg.elements().ok_or(Error::NotFinite)?;
    let q = elems.len();
    let mut idx = vec![0usize; d];
    loop {
        let mut coeffs: Vec<_> = idx.iter().map(|&i| elems[i].clone()).collect();
        coeffs.push(alg.one());
        let poly = Polynomial::new(alg, coeffs);
        if is_irreducible(&poly)? {
            return Ok(poly);
        }
        // increment as a base-q counter, c_0 least significant
        let mut k = 0;
        loop {
            if k == d {
                return Err(Error::InvalidDescriptor(format!("no irreducible of degree {d}")));
            }
            idx[k] += 1;
            if idx[k] < q {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn galois_defaults() {
        let f9 = FieldDescriptor::galois(3, 2).unwrap();
        assert_eq!(f9.modulus().unwrap(), &[1, 0, 1]);
        assert_eq!(f9.cardinality().unwrap(), BigUint::from(9u32));
        let f4 = FieldDescriptor::galois(2, 2).unwrap();
        assert_eq!(f4.modulus().unwrap(), &[1, 1, 1]);
    }

    #[test]
    fn rejects_reducible_modulus() {
        let f3 = ModP::new(3).unwrap();
        // x^2 + 2 = (x + 1)(x + 2) over F_3
        assert!(FieldDescriptor::with_modulus(f3.clone(), vec![2, 0, 1]).is_err());
        assert!(FieldDescriptor::with_modulus(f3.clone(), vec![1, 0, 1]).is_ok());
        assert!(FieldDescriptor::with_modulus(f3, vec![1, 0, 2]).is_err());
    }
}
