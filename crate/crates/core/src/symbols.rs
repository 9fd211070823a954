//! Local symbols on Laurent series units.
//!
//! With `u = lambda z^n prod(1 - a_{-i} z^{-i}) prod(1 - a_i z^i)` and
//! `w = mu z^m prod(1 - b_{-j} z^{-j}) prod(1 - b_j z^j)`,
//!
//! ```text
//!   (u, w) = (-1)^{nm} lambda^m D(a_+, b_-) / (mu^n D(b_+, a_-))
//!   D(a_+, b_-) = prod_{i,j} (1 - a_i^{j/g} b_{-j}^{i/g})^g,   g = gcd(i, j)
//! ```
//!
//! Every other symbol here is a specialization or a twist of this one.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Algebra, RingElement};
use crate::error::{Error, Result};
use crate::laurent::{cc_decompose, log_derivative, required_precision, CCDecomposition, LaurentSeries};
use crate::scalar::PrimeField;

/// A symbol value; `m` records membership in the `m`-th roots of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolValue<F: PrimeField> {
    pub value: RingElement<F>,
    pub m: Option<u64>,
}

impl<F: PrimeField> SymbolValue<F> {
    pub fn new(value: RingElement<F>) -> Self {
        SymbolValue { value, m: None }
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }
}

impl<F: PrimeField> std::fmt::Display for SymbolValue<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The character `x -> x^n` of the multiplicative group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub n: BigInt,
}

impl Character {
    pub fn new(n: impl Into<BigInt>) -> Self {
        Character { n: n.into() }
    }

    pub fn identity() -> Self {
        Self::new(1)
    }

    pub fn apply<F: PrimeField>(&self, x: &RingElement<F>) -> Result<RingElement<F>> {
        let base = if self.n.is_negative() { x.inverse()? } else { x.clone() };
        Ok(base.pow_big(&self.n.magnitude().clone()))
    }
}

/// `D(pos, neg) = prod_{i,j} (1 - a_i^{j/g} b_{-j}^{i/g})^g`.
///
/// Only pairs with `i/g < nil(b_{-j})` contribute; `pos` must reach that far
/// for the result to be exact.
pub fn duality_pairing<F: PrimeField>(
    alg: &Algebra<F>,
    pos: &[RingElement<F>],
    neg: &[RingElement<F>],
) -> Result<SymbolValue<F>> {
    Ok(SymbolValue::new(pairing(alg, pos, neg)?))
}

fn pairing<F: PrimeField>(alg: &Algebra<F>, pos: &[RingElement<F>], neg: &[RingElement<F>]) -> Result<RingElement<F>> {
    let mut acc = alg.one();
    for (j, b) in neg.iter().enumerate() {
        let j = j as i64 + 1;
        let nil = b.nilindex().ok_or(Error::NotNilpotent)? as i64;
        if b.is_zero() {
            continue;
        }
        for (i, a) in pos.iter().enumerate() {
            let i = i as i64 + 1;
            let g = i.gcd(&j);
            if i / g >= nil {
                continue;
            }
            if a.is_zero() {
                continue;
            }
            let t = &alg.one() - &(&a.pow(j / g)? * &b.pow(i / g)?);
            acc = &acc * &t.pow(g)?;
        }
    }
    Ok(acc)
}

/// Largest `i` with `a_i` pairing nontrivially with some entry of `neg`.
fn reach<F: PrimeField>(neg: &[RingElement<F>]) -> usize {
    neg.iter()
        .enumerate()
        .filter(|(_, b)| !b.is_zero())
        .map(|(j, b)| (j + 1) * b.nilindex().unwrap_or(1) - 1)
        .max()
        .unwrap_or(0)
}

fn check_reach<F: PrimeField>(d: &CCDecomposition<F>, neg: &[RingElement<F>]) -> Result<()> {
    let need = reach(neg);
    match d.pos_known {
        Some(k) if k < need => Err(Error::PrecisionTooLow(format!("{k} positive factors known, {need} needed"))),
        _ => Ok(()),
    }
}

fn sign<F: PrimeField>(alg: &Algebra<F>, exp: i64) -> RingElement<F> {
    if exp.rem_euclid(2) == 1 {
        -&alg.one()
    } else {
        alg.one()
    }
}

/// `lambda^m D(a_+, b_-) / (mu^n D(b_+, a_-))`, the symbol without its sign.
pub fn cc_fraction<F: PrimeField>(du: &CCDecomposition<F>, dw: &CCDecomposition<F>) -> Result<RingElement<F>> {
    if du.algebra() != dw.algebra() {
        return Err(Error::Mismatch("decompositions over different algebras".into()));
    }
    check_reach(du, &dw.neg)?;
    check_reach(dw, &du.neg)?;
    let alg = du.algebra();
    let num = &du.lambda.pow(dw.n)? * &pairing(alg, &du.pos, &dw.neg)?;
    let den = &dw.lambda.pow(du.n)? * &pairing(alg, &dw.pos, &du.neg)?;
    num.checked_mul(&den.inverse()?)
}

/// Truncate both arguments to a common precision that determines every
/// symbol, failing if an inexact argument falls short.
pub fn prepare<F: PrimeField>(
    u: &LaurentSeries<F>,
    w: &LaurentSeries<F>,
) -> Result<(LaurentSeries<F>, LaurentSeries<F>, i64)> {
    if u.algebra() != w.algebra() {
        return Err(Error::Mismatch("series over different algebras".into()));
    }
    let p = required_precision(u, w)?;
    let fit = |s: &LaurentSeries<F>| match s.precision() {
        None => Ok(s.with_precision(p)),
        Some(have) if have >= p => Ok(s.clone()),
        Some(have) => Err(Error::PrecisionTooLow(format!("precision {have} is below the required {p}"))),
    };
    Ok((fit(u)?, fit(w)?, p))
}

/// Decompositions of both arguments at a sufficient precision.
pub fn decompose_pair<F: PrimeField>(
    u: &LaurentSeries<F>,
    w: &LaurentSeries<F>,
) -> Result<(CCDecomposition<F>, CCDecomposition<F>)> {
    let (u, w, _) = prepare(u, w)?;
    Ok((cc_decompose(&u)?, cc_decompose(&w)?))
}

/// The Contou-Carrère symbol via the closed product formula.
pub fn cc_symbol<F: PrimeField>(u: &LaurentSeries<F>, w: &LaurentSeries<F>) -> Result<SymbolValue<F>> {
    let (du, dw) = decompose_pair(u, w)?;
    cc_symbol_from(&du, &dw)
}

pub fn cc_symbol_from<F: PrimeField>(du: &CCDecomposition<F>, dw: &CCDecomposition<F>) -> Result<SymbolValue<F>> {
    let frac = cc_fraction(du, dw)?;
    Ok(SymbolValue::new(&sign(du.algebra(), du.n * dw.n) * &frac))
}

/// The symbol in characteristic zero through logarithmic derivatives:
///
/// ```text
///   (-1)^{nm} lambda^m exp(sum_{i>0} delta_{-i}(u) delta_i(w) / i)
///     / (mu^n exp(sum_{i>0} delta_i(u) delta_{-i}(w) / i))
/// ```
pub fn cc_symbol_residue<F: PrimeField>(u: &LaurentSeries<F>, w: &LaurentSeries<F>) -> Result<SymbolValue<F>> {
    let alg = u.algebra().clone();
    if alg.characteristic() != 0 {
        return Err(Error::CharNotZero);
    }
    let (u, w, _) = prepare(u, w)?;
    let (du, dw) = (cc_decompose(&u)?, cc_decompose(&w)?);
    // delta_i(w) for i > 0 is sum_{jk=i} j b_{-j}^k, zero past reach(neg w)
    let pf = alg.prime_field();
    let (lu, lw) = (log_derivative(&u)?, log_derivative(&w)?);
    let log_sum = |f: &LaurentSeries<F>, g: &LaurentSeries<F>, top: usize| -> Result<RingElement<F>> {
        let mut acc = alg.zero();
        for i in 1..=top as i64 {
            let inv_i = pf.inv(&pf.from_i64(i)).expect("nonzero in characteristic 0");
            // delta_{-i}(f) delta_i(g)
            acc = &acc + &(&f.coeff(i - 1)? * &g.coeff(-1 - i)?).scale(&inv_i);
        }
        Ok(acc)
    };
    let s_num = log_sum(&lu, &lw, reach(&dw.neg))?;
    let s_den = log_sum(&lw, &lu, reach(&du.neg))?;
    let num = &du.lambda.pow(dw.n)? * &s_num.exp_nilpotent()?;
    let den = &dw.lambda.pow(du.n)? * &s_den.exp_nilpotent()?;
    let value = &sign(&alg, du.n * dw.n) * &num.checked_mul(&den.inverse()?)?;
    Ok(SymbolValue::new(value))
}

/// `(-1)^{v(f) v(g)} f^{v(g)} / g^{v(f)}` evaluated at `z = 0`.
pub fn tame_symbol<F: PrimeField>(f: &LaurentSeries<F>, g: &LaurentSeries<F>) -> Result<SymbolValue<F>> {
    let alg = f.algebra();
    if !alg.is_field() {
        return Err(Error::NotAField);
    }
    let (vf, vg) = (f.valuation()?, g.valuation()?);
    let h = f.with_precision(1).pow(vg)?.checked_mul(&g.with_precision(1).pow(-vf)?)?;
    Ok(SymbolValue::new(&sign(alg, vf * vg) * &h.coeff(0)?))
}

/// Symbol over `k(p) ⊗ B` pushed down to `B`:
/// `(-1)^{nm deg} N(lambda^m D(a_+, b_-) / (mu^n D(b_+, a_-)))`.
pub fn norm_symbol<F: PrimeField>(u: &LaurentSeries<F>, w: &LaurentSeries<F>, deg: usize) -> Result<SymbolValue<F>> {
    let (du, dw) = decompose_pair(u, w)?;
    norm_symbol_from(&du, &dw, deg)
}

pub fn norm_symbol_from<F: PrimeField>(
    du: &CCDecomposition<F>,
    dw: &CCDecomposition<F>,
    deg: usize,
) -> Result<SymbolValue<F>> {
    let alg = du.algebra();
    let frac = cc_fraction(du, dw)?;
    let down = if alg.has_extension() {
        if alg.ext_degree() != deg {
            return Err(Error::Mismatch(format!("point degree {deg} but extension degree {}", alg.ext_degree())));
        }
        frac.norm()?
    } else if deg == 1 {
        frac
    } else {
        return Err(Error::NoExtension);
    };
    let s = sign(down.algebra(), du.n * dw.n * deg as i64);
    Ok(SymbolValue::new(&s * &down))
}

/// `phi(-1)^{nm deg} phi(N(fraction))`.
pub fn phi_symbol<F: PrimeField>(
    u: &LaurentSeries<F>,
    w: &LaurentSeries<F>,
    phi: &Character,
    deg: usize,
) -> Result<SymbolValue<F>> {
    let s = norm_symbol(u, w, deg)?;
    Ok(SymbolValue::new(phi.apply(&s.value)?))
}

/// The character `phi_N`, `N = #B^* / m`, whose values on `B^*` are `m`-th
/// roots of unity. Needs `m | q - 1` for the base field `F_q`.
pub fn hilbert_character<F: PrimeField>(b: &Algebra<F>, m: u64) -> Result<Character> {
    let q = b.base_field_order().ok_or(Error::NotFinite)?;
    if m == 0 || !((q - BigUint::one()) % m).is_zero() {
        return Err(Error::NoRootsOfUnity(m));
    }
    let alpha = b.base_algebra().unit_group_order()?;
    Ok(Character { n: BigInt::from_biguint(Sign::Plus, alpha / m) })
}

pub(crate) fn tag_root_of_unity<F: PrimeField>(value: RingElement<F>, m: u64) -> SymbolValue<F> {
    assert!(value.pow_big(&BigUint::from(m)).is_one(), "Hilbert symbol value {value} is not an {m}-th root of unity");
    SymbolValue { value, m: Some(m) }
}

/// Hilbert norm residue symbol with values in the `m`-th roots of unity.
pub fn hilbert_symbol<F: PrimeField>(u: &LaurentSeries<F>, w: &LaurentSeries<F>, m: u64) -> Result<SymbolValue<F>> {
    let alg = u.algebra();
    let phi = hilbert_character(alg, m)?;
    let s = phi_symbol(u, w, &phi, alg.ext_degree())?;
    Ok(tag_root_of_unity(s.value, m))
}

/// An element `(alpha, f, g)` of `G_m × K × K^`: `f = z^n · plus` with
/// `plus` in `1 + zA[[z]]`, and `g = mu · minus` with `minus` in
/// `1 + z^{-1} Nil[z^{-1}]`. The law is
/// `(alpha, f, g)(alpha', f', g') = (alpha alpha' chi(f', g), ff', gg')`
/// with `chi(f, g) = mu_g^{n_f} / D(pos f, neg g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergElement<F: PrimeField> {
    pub alpha: RingElement<F>,
    pub n: i64,
    pub plus: LaurentSeries<F>,
    pub mu: RingElement<F>,
    pub minus: LaurentSeries<F>,
}

impl<F: PrimeField> HeisenbergElement<F> {
    pub fn new(
        alpha: RingElement<F>,
        n: i64,
        plus: LaurentSeries<F>,
        mu: RingElement<F>,
        minus: LaurentSeries<F>,
    ) -> Result<Self> {
        let alg = alpha.algebra();
        if plus.algebra() != alg || minus.algebra() != alg || mu.algebra() != alg {
            return Err(Error::Mismatch("components over different algebras".into()));
        }
        if !alpha.is_unit() || !mu.is_unit() {
            return Err(Error::NotAUnit);
        }
        let plus_ok = plus.min_index() == Some(0) && plus.coeff(0)?.is_one();
        let (mneg, m0, mpos) = minus.split();
        let minus_ok = minus.is_exact() && m0.is_one() && mpos.is_zero() && mneg.terms().all(|t| t.1.is_nilpotent());
        if !plus_ok || !minus_ok {
            return Err(Error::Mismatch("malformed Heisenberg component".into()));
        }
        Ok(HeisenbergElement { alpha, n, plus, mu, minus })
    }

    /// `(1, z^n P, lambda N)` for `u = lambda z^n N P`, keeping the positive
    /// part to `p` coefficients.
    pub fn from_unit(u: &LaurentSeries<F>, p: i64) -> Result<Self> {
        let u = if u.is_exact() { u.with_precision(p) } else { u.clone() };
        let d = cc_decompose(&u)?;
        let known = d.pos_known.map_or(p, |k| k as i64 + 1);
        let plus = d.pos_product().truncate(known);
        Self::new(d.algebra().one(), d.n, plus, d.lambda.clone(), d.neg_product())
    }

    pub fn algebra(&self) -> &Algebra<F> {
        self.alpha.algebra()
    }

    pub fn identity(alg: &Algebra<F>) -> Self {
        let one = LaurentSeries::one(alg);
        HeisenbergElement { alpha: alg.one(), n: 0, plus: one.clone(), mu: alg.one(), minus: one }
    }

    /// Both non-central components are trivial on their known range.
    pub fn is_central(&self) -> bool {
        let one = LaurentSeries::one(self.algebra());
        self.n == 0 && self.plus.agrees_with(&one) && self.mu.is_one() && self.minus.is_one()
    }
}

/// `chi(f, g) = mu_g^{n_f} / D(pos f, neg g)`.
fn chi<F: PrimeField>(f: &HeisenbergElement<F>, g: &HeisenbergElement<F>) -> Result<RingElement<F>> {
    let df = cc_decompose(&f.plus)?;
    let dg = cc_decompose(&g.minus)?;
    check_reach(&df, &dg.neg)?;
    let d = pairing(f.algebra(), &df.pos, &dg.neg)?;
    g.mu.pow(f.n)?.checked_mul(&d.inverse()?)
}

pub fn heisenberg_mul<F: PrimeField>(x: &HeisenbergElement<F>, y: &HeisenbergElement<F>) -> Result<HeisenbergElement<F>> {
    if x.algebra() != y.algebra() {
        return Err(Error::Mismatch("Heisenberg elements over different algebras".into()));
    }
    Ok(HeisenbergElement {
        alpha: &(&x.alpha * &y.alpha) * &chi(y, x)?,
        n: x.n + y.n,
        plus: x.plus.checked_mul(&y.plus)?,
        mu: &x.mu * &y.mu,
        minus: x.minus.checked_mul(&y.minus)?,
    })
}

pub fn heisenberg_inverse<F: PrimeField>(x: &HeisenbergElement<F>) -> Result<HeisenbergElement<F>> {
    let f_inv = HeisenbergElement {
        alpha: x.algebra().one(),
        n: -x.n,
        plus: x.plus.inverse()?,
        mu: x.algebra().one(),
        minus: LaurentSeries::one(x.algebra()),
    };
    // x x^{-1} = (alpha beta chi(f^{-1}, g), 1, 1)
    let beta = x.alpha.checked_mul(&chi(&f_inv, x)?)?.inverse()?;
    Ok(HeisenbergElement { alpha: beta, mu: x.mu.inverse()?, minus: x.minus.inverse()?, ..f_inv })
}

/// `x y x^{-1} y^{-1}`, which is central; returns its `G_m` component.
pub fn heisenberg_commutator<F: PrimeField>(x: &HeisenbergElement<F>, y: &HeisenbergElement<F>) -> Result<SymbolValue<F>> {
    let xy = heisenberg_mul(x, y)?;
    let xyx = heisenberg_mul(&xy, &heisenberg_inverse(x)?)?;
    let c = heisenberg_mul(&xyx, &heisenberg_inverse(y)?)?;
    if !c.is_central() {
        return Err(Error::Mismatch("commutator is not central".into()));
    }
    Ok(SymbolValue::new(c.alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::scalar::{ModP, Rationals};

    fn alg(p: u64, e: usize) -> Algebra<ModP> {
        Algebra::new(FieldDescriptor::prime(p).unwrap(), e).unwrap()
    }

    fn ser<F: PrimeField>(a: &Algebra<F>, terms: &[(i64, RingElement<F>)]) -> LaurentSeries<F> {
        LaurentSeries::from_terms(a, terms, None)
    }

    #[test]
    fn pairing_examples() {
        let b = alg(7, 2);
        let eps = b.gen_eps().unwrap();
        let a = b.from_i64(3);
        let bb = &b.from_i64(2) * &eps;
        let v = duality_pairing(&b, std::slice::from_ref(&a), std::slice::from_ref(&bb)).unwrap();
        assert_eq!(v.value, &b.one() - &(&a * &bb));
        assert!(duality_pairing(&b, std::slice::from_ref(&a), &[]).unwrap().is_one());
        let v = duality_pairing(&b, &[b.zero(), a.clone()], &[b.zero(), bb.clone()]).unwrap();
        let t = &b.one() - &(&a * &bb);
        assert_eq!(v.value, &t * &t);
        assert_eq!(duality_pairing(&b, &[a], &[b.one()]).unwrap_err(), Error::NotNilpotent);
    }

    #[test]
    fn cc_examples() {
        let b = alg(5, 2);
        let eps = b.gen_eps().unwrap();
        let a = b.from_i64(2);
        let u = ser(&b, &[(0, b.one()), (1, -&a)]);
        let w = ser(&b, &[(0, b.one()), (-1, -&eps)]);
        assert_eq!(cc_symbol(&u, &w).unwrap().value, &b.one() - &(&a * &eps));

        let c = b.from_i64(3);
        let z = LaurentSeries::z(&b);
        assert_eq!(cc_symbol(&z, &LaurentSeries::constant(c.clone())).unwrap().value, c.inverse().unwrap());

        let f3 = alg(3, 2);
        let e3 = f3.gen_eps().unwrap();
        let u = ser(&f3, &[(1, f3.one()), (0, e3.clone())]);
        let w = ser(&f3, &[(0, f3.one()), (1, -&f3.one())]);
        assert_eq!(cc_symbol(&u, &w).unwrap().value, &f3.one() - &e3);
    }

    #[test]
    fn residue_formula_examples() {
        let q = Algebra::new(FieldDescriptor::rationals(), 2).unwrap();
        let c = q.from_i64(7);
        let z = LaurentSeries::z(&q);
        assert_eq!(cc_symbol_residue(&z, &LaurentSeries::constant(c.clone())).unwrap().value, c.inverse().unwrap());
        let u = ser(&q, &[(0, q.one()), (1, q.from_i64(-2)), (-1, q.gen_eps().unwrap())]);
        assert!(cc_symbol_residue(&u, &LaurentSeries::one(&q)).unwrap().is_one());
        let eps = q.gen_eps().unwrap();
        let u = ser(&q, &[(0, q.one()), (1, q.from_i64(-2))]);
        let w = ser(&q, &[(0, q.one()), (-1, -&eps)]);
        let want = &q.one() - &(&q.from_i64(2) * &eps);
        assert_eq!(cc_symbol_residue(&u, &w).unwrap().value, want);
        assert_eq!(cc_symbol(&u, &w).unwrap().value, want);
        assert_eq!(cc_symbol_residue(&LaurentSeries::z(&alg(5, 1)), &LaurentSeries::z(&alg(5, 1))).unwrap_err(), Error::CharNotZero);
        let _ = Rationals;
    }

    #[test]
    fn tame_examples() {
        let a = alg(5, 1);
        let z = LaurentSeries::z(&a);
        let one_minus_z = ser(&a, &[(0, a.one()), (1, -&a.one())]);
        assert_eq!(tame_symbol(&z, &z).unwrap().value, a.from_i64(-1));
        assert!(tame_symbol(&z, &one_minus_z).unwrap().is_one());
        let u = ser(&a, &[(0, a.from_i64(2)), (3, a.one())]);
        assert!(tame_symbol(&u, &one_minus_z).unwrap().is_one());
        let b = alg(5, 2);
        let zb = LaurentSeries::z(&b);
        assert_eq!(tame_symbol(&zb, &zb).unwrap_err(), Error::NotAField);
    }

    #[test]
    fn norm_example_over_f9() {
        let base = alg(3, 1);
        let k = base.extend_by_degree(2).unwrap();
        let y = k.gen_y().unwrap();
        // u = z, w = y + 1: fraction (y+1)^{-1}, norm 2^{-1} = 2 in F_3
        let u = LaurentSeries::z(&k);
        let w = LaurentSeries::constant(&y + &k.one());
        let s = norm_symbol(&u, &w, 2).unwrap();
        assert_eq!(s.value, base.from_i64(2));
        assert!(norm_symbol(&u, &LaurentSeries::one(&k), 2).unwrap().is_one());
        assert_eq!(norm_symbol(&LaurentSeries::z(&base), &LaurentSeries::z(&base), 2).unwrap_err(), Error::NoExtension);
    }

    #[test]
    fn phi_and_hilbert_examples() {
        let a = alg(5, 1);
        let z = LaurentSeries::z(&a);
        assert!(phi_symbol(&z, &z, &Character::new(2), 1).unwrap().is_one());
        assert!(phi_symbol(&z, &z, &Character::new(0), 1).unwrap().is_one());
        assert_eq!(phi_symbol(&z, &z, &Character::identity(), 1).unwrap().value, a.from_i64(4));
        let h = hilbert_symbol(&z, &z, 4).unwrap();
        assert_eq!((h.value.clone(), h.m), (a.from_i64(4), Some(4)));
        assert!(hilbert_symbol(&z, &z, 2).unwrap().is_one());
        assert_eq!(hilbert_symbol(&z, &z, 3).unwrap_err(), Error::NoRootsOfUnity(3));
        let b = alg(5, 2);
        assert_eq!(hilbert_character(&b, 4).unwrap(), Character::new(5));
        let u = ser(&b, &[(0, b.one()), (1, -&b.one())]);
        assert!(hilbert_symbol(&u, &LaurentSeries::one(&b), 4).unwrap().is_one());
    }

    #[test]
    fn heisenberg_examples() {
        let b = alg(7, 2);
        let eps = b.gen_eps().unwrap();
        let a = b.from_i64(3);
        let one = LaurentSeries::one(&b);
        let f = ser(&b, &[(0, b.one()), (1, -&a)]).truncate(4);
        let g = ser(&b, &[(0, b.one()), (-1, -&eps)]);
        let x = HeisenbergElement::new(b.one(), 0, f, b.one(), one.clone()).unwrap();
        let y = HeisenbergElement::new(b.one(), 0, one.truncate(4), b.one(), g).unwrap();
        let c = heisenberg_commutator(&x, &y).unwrap();
        assert_eq!(c.value, &b.one() - &(&a * &eps));
        assert!(heisenberg_commutator(&x, &x).unwrap().is_one());
        let id = HeisenbergElement::identity(&b);
        let xy = heisenberg_mul(&id, &x).unwrap();
        assert_eq!(xy.alpha, x.alpha);
    }
}
