//! Factorization of univariate polynomials over finite fields.
//!
//! Square-free decomposition, then distinct-degree factorization, then
//! Cantor–Zassenhaus equal-degree splitting. The splitting is driven by a
//! fixed-seed generator and the factors are sorted, so output is
//! deterministic.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, RingElement};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::PrimeField;

/// `f = unit · ∏ factor^multiplicity`, factors monic irreducible and sorted
/// by degree, then lexicographically on coefficients (constant term first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization<F: PrimeField> {
    pub unit: RingElement<F>,
    pub factors: Vec<(Polynomial<F>, usize)>,
}

impl<F: PrimeField> Factorization<F> {
    /// Multiply everything back together.
    pub fn expand(&self) -> Polynomial<F> {
        let mut acc = Polynomial::constant(self.unit.clone());
        for (g, m) in &self.factors {
            acc = &acc * &g.pow(*m as u32);
        }
        acc
    }
}

fn field_order<F: PrimeField>(alg: &Algebra<F>) -> Result<BigUint> {
    if !alg.is_field() {
        return Err(Error::NotAField);
    }
    alg.residue_field_order().ok_or(Error::NotFinite)
}

/// Total order used for deterministic output.
pub fn cmp_poly<F: PrimeField>(a: &Polynomial<F>, b: &Polynomial<F>) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            let o = x.coords().cmp(y.coords());
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

pub fn factor<F: PrimeField>(f: &Polynomial<F>) -> Result<Factorization<F>> {
    let alg = f.algebra().clone();
    let q = field_order(&alg)?;
    let unit = f.leading().ok_or(Error::ZeroPolynomial)?.clone();
    let g = f.monic()?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut out = Vec::new();
    for (part, mult) in square_free(&g, &q)? {
        for (block, d) in distinct_degree(&part, &q)? {
            for irr in equal_degree(&block, d, &q, &mut rng)? {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| cmp_poly(&a.0, &b.0).then(a.1.cmp(&b.1)));
    Ok(Factorization { unit, factors: out })
}

/// Rabin-style test: `f` of degree `n` is irreducible iff it has no factor of
/// degree `<= n/2`, i.e. `gcd(t^{q^i} - t, f) = 1` for all `i <= n/2`.
pub fn is_irreducible<F: PrimeField>(f: &Polynomial<F>) -> Result<bool> {
    let q = field_order(f.algebra())?;
    let n = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(n) => n,
    };
    let f = f.monic()?;
    let t = Polynomial::var(f.algebra());
    let mut h = t.clone();
    for _ in 1..=n / 2 {
        h = h.pow_mod(&q, &f)?;
        if !(&h - &t).gcd(&f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn exact_div<F: PrimeField>(a: &Polynomial<F>, b: &Polynomial<F>) -> Result<Polynomial<F>> {
    let (quot, r) = a.div_rem(b)?;
    debug_assert!(r.is_zero());
    Ok(quot)
}

/// `c(t) = d(t)^p` for some `d`; returns `d`.
fn pth_root<F: PrimeField>(c: &Polynomial<F>, q: &BigUint) -> Polynomial<F> {
    let alg = c.algebra();
    let p = alg.characteristic() as usize;
    // a^{1/p} = a^{q/p} in F_q
    let e = q / BigUint::from(p as u64);
    let coeffs = c.coeffs().iter().step_by(p).map(|a| a.pow_big(&e)).collect();
    Polynomial::new(alg, coeffs)
}

fn square_free<F: PrimeField>(f: &Polynomial<F>, q: &BigUint) -> Result<Vec<(Polynomial<F>, usize)>> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let p = f.algebra().characteristic() as usize;
    let df = f.derivative();
    let mut c;
    if !df.is_zero() {
        c = f.gcd(&df)?;
        let mut w = exact_div(f, &c)?;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c)?;
            let fac = exact_div(&w, &y)?;
            if !fac.is_one() {
                out.push((fac, i));
            }
            c = exact_div(&c, &y)?;
            w = y;
            i += 1;
        }
    } else {
        c = f.clone();
    }
    if !c.is_one() {
        let root = pth_root(&c, q);
        for (g, m) in square_free(&root, q)? {
            out.push((g, m * p));
        }
    }
    Ok(out)
}

fn distinct_degree<F: PrimeField>(f: &Polynomial<F>, q: &BigUint) -> Result<Vec<(Polynomial<F>, usize)>> {
    let mut out = Vec::new();
    let t = Polynomial::var(f.algebra());
    let mut rest = f.clone();
    let mut h = t.rem(&rest)?;
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(q, &rest)?;
        let g = (&h - &t).gcd(&rest)?;
        if !g.is_one() {
            rest = exact_div(&rest, &g)?;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(n) = rest.degree() {
        if n > 0 {
            out.push((rest, n));
        }
    }
    Ok(out)
}

fn equal_degree<F: PrimeField>(
    f: &Polynomial<F>,
    d: usize,
    q: &BigUint,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Polynomial<F>>> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let alg = f.algebra();
    let two = BigUint::from(2u32);
    let qd = q.pow(d as u32);
    loop {
        let a = Polynomial::new(alg, (0..n).map(|_| alg.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if alg.characteristic() == 2 {
            // absolute trace F_{q^d} -> F_2
            let bits = (qd.bits() - 1) as usize;
            let mut acc = a.rem(f)?;
            let mut sq = acc.clone();
            for _ in 1..bits {
                sq = (&sq * &sq).rem(f)?;
                acc = &acc + &sq;
            }
            acc
        } else {
            let e = (&qd - BigUint::one()) / &two;
            &a.pow_mod(&e, f)? - &Polynomial::one(alg)
        };
        let g = b.gcd(f)?;
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = exact_div(f, &g)?;
            let mut out = equal_degree(&g, d, q, rng)?;
            out.extend(equal_degree(&h, d, q, rng)?);
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::scalar::ModP;

    fn field(p: u64) -> Algebra<ModP> {
        Algebra::new(FieldDescriptor::prime(p).unwrap(), 1).unwrap()
    }

    fn p(alg: &Algebra<ModP>, c: &[i64]) -> Polynomial<ModP> {
        Polynomial::new(alg, c.iter().map(|&v| alg.from_i64(v)).collect())
    }

    #[test]
    fn t2_plus_1_over_f3_is_irreducible() {
        let a = field(3);
        let f = p(&a, &[1, 0, 1]);
        let fac = factor(&f).unwrap();
        assert_eq!(fac.factors, vec![(f, 1)]);
    }

    #[test]
    fn difference_of_squares_over_f5() {
        let a = field(5);
        let fac = factor(&p(&a, &[-1, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(p(&a, &[1, 1]), 1), (p(&a, &[4, 1]), 1)]);
    }

    #[test]
    fn bare_variable() {
        let a = field(7);
        let fac = factor(&p(&a, &[0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(p(&a, &[0, 1]), 1)]);
    }

    #[test]
    fn repeated_and_pth_power_factors() {
        let a = field(2);
        // (t+1)^4 (t^2+t+1)^3 t over F_2
        let f = &(&p(&a, &[1, 1]).pow(4) * &p(&a, &[1, 1, 1]).pow(3)) * &p(&a, &[0, 1]);
        let fac = factor(&f).unwrap();
        assert_eq!(fac.expand(), f);
        assert_eq!(fac.factors, vec![(p(&a, &[0, 1]), 1), (p(&a, &[1, 1]), 4), (p(&a, &[1, 1, 1]), 3)]);
    }

    #[test]
    fn leading_unit_is_kept() {
        let a = field(5);
        let f = p(&a, &[3, 0, 3]);
        let fac = factor(&f).unwrap();
        assert_eq!(fac.unit, a.from_i64(3));
        assert_eq!(fac.expand(), f);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        let a = field(3);
        assert_eq!(factor(&Polynomial::zero(&a)).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn over_f9() {
        let k = Algebra::new(FieldDescriptor::galois(3, 2).unwrap(), 1).unwrap();
        // t^2 + 1 splits over F_9 = F_3[x]/(x^2+1): roots ±x
        let f = p(&k, &[1, 0, 1]);
        let fac = factor(&f).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.expand(), f);
        assert!(fac.factors.iter().all(|(g, _)| g.degree() == Some(1)));
    }
}
