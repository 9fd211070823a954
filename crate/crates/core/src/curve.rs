//! Rational functions on the projective line over `F_q ⊗ B`, their closed
//! points, local expansions and the reciprocity products.

use std::fmt;

use crate::algebra::{Algebra, RingElement};
use crate::error::{Error, Result};
use crate::factor::{cmp_poly, factor};
use crate::laurent::{required_precision, LaurentSeries};
use crate::poly::Polynomial;
use crate::scalar::PrimeField;
use crate::symbols::{hilbert_character, phi_symbol, tag_root_of_unity, Character, SymbolValue};

/// A closed point of `P^1` over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedPoint<F: PrimeField> {
    /// Zero locus of a monic irreducible polynomial over `F_q`.
    Finite(Polynomial<F>),
    Infinity,
}

impl<F: PrimeField> ClosedPoint<F> {
    pub fn degree(&self) -> usize {
        match self {
            ClosedPoint::Finite(pi) => pi.degree().unwrap_or(0),
            ClosedPoint::Infinity => 1,
        }
    }
}

impl<F: PrimeField> fmt::Display for ClosedPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedPoint::Finite(pi) => write!(f, "({pi})"),
            ClosedPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// `num / den` with coefficients in `B = F_q[e]/(e^n)`; the reduction of
/// `den` modulo nilpotents is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction<F: PrimeField> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

impl<F: PrimeField> RationalFunction<F> {
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Result<Self> {
        let alg = num.algebra();
        if alg != den.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if alg.has_extension() {
            return Err(Error::Unsupported("rational functions over a scalar extension".into()));
        }
        if den.residue().is_zero() {
            return Err(Error::NotAUnit);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_polynomial(p: Polynomial<F>) -> Result<Self> {
        let one = Polynomial::one(p.algebra());
        Self::new(p, one)
    }

    pub fn constant(c: RingElement<F>) -> Result<Self> {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn one(alg: &Algebra<F>) -> Result<Self> {
        Self::from_polynomial(Polynomial::one(alg))
    }

    /// The coordinate `t`.
    pub fn t(alg: &Algebra<F>) -> Result<Self> {
        Self::from_polynomial(Polynomial::var(alg))
    }

    pub fn algebra(&self) -> &Algebra<F> {
        self.num.algebra()
    }

    pub fn numerator(&self) -> &Polynomial<F> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<F> {
        &self.den
    }

    /// A unit of `F_q(t) ⊗ B` exactly when the numerator survives reduction.
    pub fn is_unit(&self) -> bool {
        !self.num.residue().is_zero()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let num = (&self.num * &other.den).checked_add(&(&other.num * &self.den))?;
        Self::new(num, &self.den * &other.den)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.algebra() != other.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        Self::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let k = u32::try_from(k.unsigned_abs()).map_err(|_| Error::BadIndex("exponent too large".into()))?;
        Self::new(base.num.pow(k), base.den.pow(k))
    }

    /// Equality as functions: `a d = b c`.
    pub fn same_function(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl<F: PrimeField> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Every finite point dividing some `e`-coordinate of a numerator or
/// denominator, sorted, followed by the point at infinity.
pub fn support<F: PrimeField>(f: &RationalFunction<F>, g: &RationalFunction<F>) -> Result<Vec<ClosedPoint<F>>> {
    if !f.is_unit() || !g.is_unit() {
        return Err(Error::NotAUnit);
    }
    let nil = f.algebra().nil_index();
    let mut pis: Vec<Polynomial<F>> = Vec::new();
    for h in [&f.num, &f.den, &g.num, &g.den] {
        for k in 0..nil {
            let c = h.eps_coeff(k);
            if c.degree().unwrap_or(0) == 0 {
                continue;
            }
            for (pi, _) in factor(&c)?.factors {
                if !pis.contains(&pi) {
                    pis.push(pi);
                }
            }
        }
    }
    pis.sort_by(cmp_poly);
    let mut out: Vec<_> = pis.into_iter().map(ClosedPoint::Finite).collect();
    out.push(ClosedPoint::Infinity);
    Ok(out)
}

/// The coefficient algebra `k(p) ⊗ B` at `p`.
pub fn local_algebra<F: PrimeField>(b: &Algebra<F>, p: &ClosedPoint<F>) -> Result<Algebra<F>> {
    match p {
        ClosedPoint::Finite(pi) if pi.degree() > Some(1) => b.extend(&pi.embed(&b.coefficient_field())?),
        _ => Ok(b.clone()),
    }
}

/// `h(t)` written in the local coordinate `z` at `p`, exactly.
fn substitute<F: PrimeField>(h: &Polynomial<F>, p: &ClosedPoint<F>, alg: &Algebra<F>) -> Result<LaurentSeries<F>> {
    let coeffs: Vec<RingElement<F>> = h.coeffs().iter().map(|c| alg.embed(c)).collect::<Result<_>>()?;
    match p {
        ClosedPoint::Infinity => Ok(LaurentSeries::exact(alg, -(coeffs.len() as i64) + 1, coeffs.into_iter().rev().collect())),
        ClosedPoint::Finite(pi) => {
            let alpha = match pi.degree() {
                Some(1) => -&alg.embed(&pi.coeff(0))?,
                _ => alg.gen_y()?,
            };
            let shift = LaurentSeries::from_terms(alg, &[(0, alpha), (1, alg.one())], None);
            let mut acc = LaurentSeries::zero(alg);
            for c in coeffs.iter().rev() {
                acc = &(&acc * &shift) + &LaurentSeries::constant(c.clone());
            }
            Ok(acc)
        }
    }
}

/// Expansion of `f` at `p` with `prec` coefficients counted from the lowest
/// term: `t = alpha + z` at a finite point, `t = 1/z` at infinity.
pub fn local_expand<F: PrimeField>(f: &RationalFunction<F>, p: &ClosedPoint<F>, prec: i64) -> Result<LaurentSeries<F>> {
    if !f.is_unit() {
        return Err(Error::NotAUnit);
    }
    let alg = local_algebra(f.algebra(), p)?;
    let num = substitute(&f.num, p, &alg)?;
    let den = substitute(&f.den, p, &alg)?;
    let lo = num.min_index().expect("unit numerator") - den.valuation()?;
    let mut margin = prec.max(1);
    loop {
        let dinv = den.inverse_to(lo + prec + margin - num.min_index().unwrap())?;
        let r = &num * &dinv;
        if r.precision().is_some_and(|have| have >= prec) {
            return Ok(r.with_precision(prec));
        }
        margin *= 2;
    }
}

/// Expansions of `f` and `g` at `p` with enough precision to determine
/// every symbol of the pair.
pub fn local_pair<F: PrimeField>(
    f: &RationalFunction<F>,
    g: &RationalFunction<F>,
    p: &ClosedPoint<F>,
) -> Result<(LaurentSeries<F>, LaurentSeries<F>)> {
    let mut prec = 4;
    loop {
        let u = local_expand(f, p, prec)?;
        let w = local_expand(g, p, prec)?;
        match required_precision(&u, &w) {
            Ok(r) if r <= prec => return Ok((u, w)),
            Ok(r) => prec = r,
            // the valuation lies beyond the expansion so far
            Err(Error::NotAUnit) => prec *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// `(f, g)_p^phi`, pushed down to `B`.
pub fn local_symbol<F: PrimeField>(
    f: &RationalFunction<F>,
    g: &RationalFunction<F>,
    p: &ClosedPoint<F>,
    phi: &Character,
) -> Result<SymbolValue<F>> {
    local_symbol_with_precision(f, g, p, phi).map(|r| r.0)
}

/// [`local_symbol`] together with the expansion precision it needed.
pub fn local_symbol_with_precision<F: PrimeField>(
    f: &RationalFunction<F>,
    g: &RationalFunction<F>,
    p: &ClosedPoint<F>,
    phi: &Character,
) -> Result<(SymbolValue<F>, i64)> {
    let (u, w) = local_pair(f, g, p)?;
    Ok((phi_symbol(&u, &w, phi, p.degree())?, required_precision(&u, &w)?))
}

pub type LocalValues<F> = Vec<(ClosedPoint<F>, SymbolValue<F>)>;

fn product<F: PrimeField>(alg: &Algebra<F>, locals: &LocalValues<F>) -> RingElement<F> {
    locals.iter().fold(alg.one(), |acc, (_, s)| &acc * &s.value)
}

/// Local symbols over the support of `(f, g)` and their product, which the
/// reciprocity law says is 1.
pub fn reciprocity_product<F: PrimeField>(
    f: &RationalFunction<F>,
    g: &RationalFunction<F>,
    phi: &Character,
) -> Result<(SymbolValue<F>, LocalValues<F>)> {
    let locals = support(f, g)?
        .into_iter()
        .map(|p| local_symbol(f, g, &p, phi).map(|s| (p, s)))
        .collect::<Result<Vec<_>>>()?;
    Ok((SymbolValue::new(product(f.algebra(), &locals)), locals))
}

/// Reciprocity for the Hilbert symbol with values in the `m`-th roots of
/// unity.
pub fn hilbert_reciprocity<F: PrimeField>(
    f: &RationalFunction<F>,
    g: &RationalFunction<F>,
    m: u64,
) -> Result<(SymbolValue<F>, LocalValues<F>)> {
    let phi = hilbert_character(f.algebra(), m)?;
    let (_, locals) = reciprocity_product(f, g, &phi)?;
    let locals: LocalValues<F> = locals.into_iter().map(|(p, s)| (p, tag_root_of_unity(s.value, m))).collect();
    Ok((tag_root_of_unity(product(f.algebra(), &locals), m), locals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::scalar::ModP;

    fn alg(p: u64, e: usize) -> Algebra<ModP> {
        Algebra::new(FieldDescriptor::prime(p).unwrap(), e).unwrap()
    }

    fn poly(a: &Algebra<ModP>, c: &[RingElement<ModP>]) -> Polynomial<ModP> {
        Polynomial::new(a, c.to_vec())
    }

    fn ints(a: &Algebra<ModP>, c: &[i64]) -> Polynomial<ModP> {
        Polynomial::new(a, c.iter().map(|&v| a.from_i64(v)).collect())
    }

    fn rf(a: &Algebra<ModP>, num: &[i64], den: &[i64]) -> RationalFunction<ModP> {
        RationalFunction::new(ints(a, num), ints(a, den)).unwrap()
    }

    fn golden() -> (Algebra<ModP>, RationalFunction<ModP>, RationalFunction<ModP>) {
        let b = alg(3, 2);
        let eps = b.gen_eps().unwrap();
        let f = RationalFunction::from_polynomial(poly(&b, &[eps, b.one()])).unwrap();
        let g = rf(&b, &[1, -1], &[1]);
        (b, f, g)
    }

    #[test]
    fn support_examples() {
        let a = alg(5, 1);
        let pts = support(&rf(&a, &[0, 1], &[1]), &rf(&a, &[1, -1], &[1])).unwrap();
        let names: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["(t)", "(t+4)", "inf"]);
        assert_eq!(support(&rf(&a, &[1], &[1]), &rf(&a, &[1], &[1])).unwrap(), vec![ClosedPoint::Infinity]);

        let b = alg(3, 2);
        let eps = b.gen_eps().unwrap();
        // 1 + e/t = (t + e)/t
        let f = RationalFunction::new(poly(&b, &[eps, b.one()]), ints(&b, &[0, 1])).unwrap();
        let pts = support(&f, &RationalFunction::one(&b).unwrap()).unwrap();
        assert_eq!(pts, vec![ClosedPoint::Finite(ints(&alg(3, 1), &[0, 1])), ClosedPoint::Infinity]);
    }

    #[test]
    fn non_units_are_rejected() {
        let b = alg(3, 2);
        let eps = b.gen_eps().unwrap();
        let f = RationalFunction::from_polynomial(poly(&b, &[eps])).unwrap();
        assert_eq!(support(&f, &f).unwrap_err(), Error::NotAUnit);
        assert_eq!(RationalFunction::new(ints(&b, &[1]), ints(&b, &[0])).unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn expansion_examples() {
        let a = alg(5, 1);
        let origin = ClosedPoint::Finite(ints(&a, &[0, 1]));
        let z = local_expand(&rf(&a, &[0, 1], &[1]), &origin, 3).unwrap();
        assert!(z.agrees_with(&LaurentSeries::z(&a)));
        assert_eq!(z.valuation().unwrap(), 1);

        let (b, f, _) = golden();
        let eps = b.gen_eps().unwrap();
        let u = local_expand(&f, &ClosedPoint::Finite(ints(&alg(3, 1), &[0, 1])), 3).unwrap();
        assert!(u.agrees_with(&LaurentSeries::from_terms(&b, &[(0, eps), (1, b.one())], None)));

        let inf = local_expand(&rf(&a, &[1, -1], &[1]), &ClosedPoint::Infinity, 4).unwrap();
        let want = LaurentSeries::from_terms(&a, &[(-1, a.from_i64(-1)), (0, a.one())], None);
        assert!(inf.agrees_with(&want));
        assert_eq!(inf.valuation().unwrap(), -1);
    }

    #[test]
    fn expansion_of_a_quotient() {
        let a = alg(5, 1);
        // 1/(1 - t) at t = 0 is the geometric series
        let u = local_expand(&rf(&a, &[1], &[1, -1]), &ClosedPoint::Finite(ints(&a, &[0, 1])), 5).unwrap();
        let ones: Vec<_> = (0..5).map(|i| (i, a.one())).collect();
        assert_eq!(u, LaurentSeries::from_terms(&a, &ones, Some(5)));
    }

    #[test]
    fn local_symbol_examples() {
        let a = alg(5, 1);
        let id = Character::identity();
        let origin = ClosedPoint::Finite(ints(&a, &[0, 1]));
        let t = rf(&a, &[0, 1], &[1]);
        assert_eq!(local_symbol(&t, &t, &origin, &id).unwrap().value, a.from_i64(4));

        let (b, f, g) = golden();
        let origin3 = ClosedPoint::Finite(ints(&alg(3, 1), &[0, 1]));
        let eps = b.gen_eps().unwrap();
        assert_eq!(local_symbol(&f, &g, &origin3, &id).unwrap().value, &b.one() - &eps);

        let f3 = alg(3, 1);
        let pi = ints(&f3, &[1, 0, 1]);
        let v = local_symbol(&rf(&f3, &[1, 0, 1], &[1]), &rf(&f3, &[1, 1], &[1]), &ClosedPoint::Finite(pi), &id).unwrap();
        assert_eq!(v.value, f3.from_i64(2));
    }

    #[test]
    fn reciprocity_examples() {
        let a = alg(5, 1);
        let id = Character::identity();
        let t = rf(&a, &[0, 1], &[1]);
        let (prod, locals) = reciprocity_product(&t, &t, &id).unwrap();
        assert!(prod.is_one());
        assert!(locals.iter().all(|(_, s)| s.value == a.from_i64(-1)));

        let (prod, locals) = reciprocity_product(&t, &rf(&a, &[1, -1], &[1]), &id).unwrap();
        assert!(prod.is_one());
        assert_eq!(locals.len(), 3);
        assert!(locals.iter().all(|(_, s)| s.is_one()));

        let (b, f, g) = golden();
        let eps = b.gen_eps().unwrap();
        let (prod, locals) = reciprocity_product(&f, &g, &id).unwrap();
        assert!(prod.is_one());
        let values: Vec<_> = locals.iter().map(|(_, s)| s.value.clone()).collect();
        assert_eq!(values, vec![&b.one() - &eps, &b.one() + &eps, b.one()]);
        let names: Vec<_> = locals.iter().map(|(p, _)| p.to_string()).collect();
        assert_eq!(names, ["(t)", "(t+2)", "inf"]);
    }

    #[test]
    fn hilbert_examples() {
        let a = alg(5, 1);
        let t = rf(&a, &[0, 1], &[1]);
        let (prod, locals) = hilbert_reciprocity(&t, &t, 4).unwrap();
        assert!(prod.is_one());
        assert!(locals.iter().all(|(_, s)| s.value == a.from_i64(4) && s.m == Some(4)));
        let (_, locals) = hilbert_reciprocity(&t, &t, 2).unwrap();
        assert!(locals.iter().all(|(_, s)| s.is_one()));
        let (_, locals) = hilbert_reciprocity(&RationalFunction::one(&a).unwrap(), &t, 4).unwrap();
        assert!(locals.iter().all(|(_, s)| s.is_one()));
        assert_eq!(hilbert_reciprocity(&t, &t, 3).unwrap_err(), Error::NoRootsOfUnity(3));
    }
}
