//! Seeded generators for test and verification inputs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::curve::RationalFunction;
use crate::laurent::LaurentSeries;
use crate::poly::Polynomial;
use crate::scalar::PrimeField;

/// The generator every seeded suite uses.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Polynomial of degree at most `deg` with uniform coefficients.
pub fn polynomial<F: PrimeField, R: Rng + ?Sized>(alg: &Algebra<F>, deg: usize, rng: &mut R) -> Polynomial<F> {
    Polynomial::new(alg, (0..=deg).map(|_| alg.random(rng)).collect())
}

/// Polynomial whose reduction modulo nilpotents is nonzero.
pub fn unit_polynomial<F: PrimeField, R: Rng + ?Sized>(alg: &Algebra<F>, deg: usize, rng: &mut R) -> Polynomial<F> {
    loop {
        let p = polynomial(alg, deg, rng);
        if !p.residue().is_zero() {
            return p;
        }
    }
}

/// Unit of `F_q(t) ⊗ B` with numerator and denominator of degree at most
/// `deg`.
pub fn rational_unit<F: PrimeField, R: Rng + ?Sized>(alg: &Algebra<F>, deg: usize, rng: &mut R) -> RationalFunction<F> {
    let num = unit_polynomial(alg, rng.gen_range(0..=deg), rng);
    let den = unit_polynomial(alg, rng.gen_range(0..=deg), rng);
    RationalFunction::new(num, den).expect("denominator is a unit")
}

/// Exact Laurent unit supported in `[lo, hi]`: a unit coefficient at a
/// random valuation, nilpotents below it and arbitrary coefficients above.
pub fn laurent_unit<F: PrimeField, R: Rng + ?Sized>(alg: &Algebra<F>, lo: i64, hi: i64, rng: &mut R) -> LaurentSeries<F> {
    let n = rng.gen_range(lo..=hi);
    let coeffs = (lo..=hi)
        .map(|k| match k.cmp(&n) {
            std::cmp::Ordering::Less => alg.random_nilpotent(rng),
            std::cmp::Ordering::Equal => alg.random_unit(rng),
            std::cmp::Ordering::Greater => alg.random(rng),
        })
        .collect();
    LaurentSeries::exact(alg, lo, coeffs)
}

/// Like [`laurent_unit`], with a sparse support so that products of a few
/// stay small.
pub fn sparse_laurent_unit<F: PrimeField, R: Rng + ?Sized>(
    alg: &Algebra<F>,
    lo: i64,
    hi: i64,
    terms: usize,
    rng: &mut R,
) -> LaurentSeries<F> {
    let n = rng.gen_range(lo..=hi);
    let mut t = vec![(n, alg.random_unit(rng))];
    for _ in 0..terms {
        let k = rng.gen_range(lo..=hi);
        let c = if k < n { alg.random_nilpotent(rng) } else { alg.random(rng) };
        if k != n {
            t.push((k, c));
        }
    }
    t.sort_by_key(|x| x.0);
    t.dedup_by_key(|x| x.0);
    LaurentSeries::from_terms(alg, &t, None)
}
