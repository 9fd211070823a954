//! Laurent series over an artinian algebra `A`, with explicit precision.
//!
//! A series stores the coefficients from its lowest nonzero exponent onward
//! and an absolute bound `end`: every coefficient at an exponent `>= end` is
//! unknown. Exact series (polynomials in `z`, `1/z`) have no bound.
//!
//! Every unit factors uniquely as
//!
//! ```text
//!   u = lambda z^n prod_{i>0} (1 - a_{-i} z^{-i}) prod_{i>0} (1 - a_i z^i)
//! ```
//!
//! with `lambda` a unit and every `a_{-i}` nilpotent; [`cc_decompose`] finds
//! it.

use std::fmt;

use crate::algebra::{Algebra, RingElement};
use crate::error::{Error, Result};
use crate::scalar::PrimeField;

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries<F: PrimeField> {
    alg: Algebra<F>,
    /// Exponent of `coeffs[0]`. For a zero series this is `end` (or 0).
    start: i64,
    /// No leading or trailing zeros.
    coeffs: Vec<RingElement<F>>,
    end: Option<i64>,
}

fn min_end(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<F: PrimeField> LaurentSeries<F> {
    /// `sum coeffs[k] z^{start+k} + O(z^end)`; coefficients at or past `end`
    /// are dropped.
    pub fn new(alg: &Algebra<F>, start: i64, mut coeffs: Vec<RingElement<F>>, end: Option<i64>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.algebra() == alg));
        if let Some(e) = end {
            let keep = (e - start).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        let start = if coeffs.is_empty() { end.unwrap_or(0) } else { start + lead as i64 };
        LaurentSeries { alg: alg.clone(), start, coeffs, end }
    }

    pub fn exact(alg: &Algebra<F>, start: i64, coeffs: Vec<RingElement<F>>) -> Self {
        Self::new(alg, start, coeffs, None)
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms(alg: &Algebra<F>, terms: &[(i64, RingElement<F>)], end: Option<i64>) -> Self {
        if terms.is_empty() {
            return Self::new(alg, 0, Vec::new(), end);
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut c = vec![alg.zero(); (hi - lo + 1) as usize];
        for (k, v) in terms {
            let i = (k - lo) as usize;
            c[i] = &c[i] + v;
        }
        Self::new(alg, lo, c, end)
    }

    pub fn zero(alg: &Algebra<F>) -> Self {
        Self::exact(alg, 0, Vec::new())
    }

    pub fn one(alg: &Algebra<F>) -> Self {
        Self::constant(alg.one())
    }

    pub fn constant(c: RingElement<F>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c z^k`, exact.
    pub fn monomial(c: RingElement<F>, k: i64) -> Self {
        let alg = c.algebra().clone();
        Self::exact(&alg, k, vec![c])
    }

    /// The uniformizer `z`.
    pub fn z(alg: &Algebra<F>) -> Self {
        Self::monomial(alg.one(), 1)
    }

    pub fn algebra(&self) -> &Algebra<F> {
        &self.alg
    }

    pub fn is_exact(&self) -> bool {
        self.end.is_none()
    }

    /// Exponent from which coefficients are unknown.
    pub fn end(&self) -> Option<i64> {
        self.end
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_index(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_index(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.start + self.coeffs.len() as i64 - 1)
    }

    /// Number of known coefficients counted from the lowest nonzero one;
    /// `None` for exact series.
    pub fn precision(&self) -> Option<i64> {
        self.end.map(|e| e - self.start)
    }

    /// Zero on the whole known range.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.end.is_none() && self.start == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Coefficient of `z^k`, or `PrecisionTooLow` past the known range.
    pub fn coeff(&self, k: i64) -> Result<RingElement<F>> {
        if self.end.is_some_and(|e| k >= e) {
            return Err(Error::PrecisionTooLow(format!("coefficient of z^{k} is beyond O(z^{})", self.end.unwrap())));
        }
        Ok(self.c(k))
    }

    /// Stored coefficient, zero outside the stored range.
    fn c(&self, k: i64) -> RingElement<F> {
        let i = k - self.start;
        if i < 0 || i >= self.coeffs.len() as i64 {
            self.alg.zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &RingElement<F>)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.start + i as i64, c))
    }

    /// Forget everything from `z^end` on.
    pub fn truncate(&self, end: i64) -> Self {
        let e = min_end(self.end, Some(end));
        Self::new(&self.alg, self.start, self.coeffs.clone(), e)
    }

    /// Keep `p` coefficients counted from the lowest nonzero one.
    pub fn with_precision(&self, p: i64) -> Self {
        self.truncate(self.start + p)
    }

    /// The same coefficients, with the unknown tail declared zero.
    pub fn to_exact(&self) -> Self {
        LaurentSeries { end: None, ..self.clone() }
    }

    /// Equal on the range where both are known.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let bound = min_end(self.end, other.end);
        let lo = self.start.min(other.start);
        let hi = match (self.max_index(), other.max_index()) {
            (Some(a), Some(b)) => a.max(b),
            (a, b) => a.or(b).unwrap_or(lo),
        };
        let hi = bound.map_or(hi, |b| hi.min(b - 1));
        (lo..=hi).all(|k| self.c(k) == other.c(k))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.alg == other.alg {
            Ok(())
        } else {
            Err(Error::Mismatch("series over different algebras".into()))
        }
    }

    fn combine(&self, other: &Self, sub: bool) -> Result<Self> {
        self.check(other)?;
        let end = min_end(self.end, other.end);
        if self.is_zero() && other.is_zero() {
            return Ok(Self::new(&self.alg, 0, Vec::new(), end));
        }
        let lo = match (self.min_index(), other.min_index()) {
            (Some(a), Some(b)) => a.min(b),
            (a, b) => a.or(b).unwrap(),
        };
        let hi = self.max_index().into_iter().chain(other.max_index()).max().unwrap();
        let coeffs = (lo..=hi)
            .map(|k| if sub { &self.c(k) - &other.c(k) } else { &self.c(k) + &other.c(k) })
            .collect();
        Ok(Self::new(&self.alg, lo, coeffs, end))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    /// Product; known up to `min(end_a + start_b, end_b + start_a)`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let end = min_end(self.end.map(|e| e + other.start), other.end.map(|e| e + self.start));
        if self.is_zero() || other.is_zero() {
            return Ok(Self::new(&self.alg, self.start + other.start, Vec::new(), end));
        }
        let start = self.start + other.start;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(e) = end {
            len = len.min((e - start).max(0) as usize);
        }
        let mut out = vec![self.alg.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j].add_mul_assign(a, b);
                }
            }
        }
        Ok(Self::new(&self.alg, start, out, end))
    }

    pub fn neg(&self) -> Self {
        LaurentSeries { coeffs: self.coeffs.iter().map(|c| -c).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &RingElement<F>) -> Self {
        Self::new(&self.alg, self.start, self.coeffs.iter().map(|a| a * c).collect(), self.end)
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries { start: self.start + k, end: self.end.map(|e| e + k), ..self.clone() }
    }

    /// Formal derivative `d/dz`.
    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| c * &self.alg.from_i64(self.start + i as i64)).collect();
        Self::new(&self.alg, self.start - 1, coeffs, self.end.map(|e| e - 1))
    }

    /// Apply `f` to each coefficient, landing in `alg`.
    pub fn map_coeffs(&self, alg: &Algebra<F>, f: impl Fn(&RingElement<F>) -> Result<RingElement<F>>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<_>>()?;
        Ok(Self::new(alg, self.start, coeffs, self.end))
    }

    /// Split into the parts with negative, zero and positive exponents.
    pub fn split(&self) -> (Self, RingElement<F>, Self) {
        let neg: Vec<_> = self.terms().filter(|t| t.0 < 0).map(|(k, c)| (k, c.clone())).collect();
        let pos: Vec<_> = self.terms().filter(|t| t.0 > 0).map(|(k, c)| (k, c.clone())).collect();
        (
            Self::from_terms(&self.alg, &neg, None),
            self.c(0),
            Self::from_terms(&self.alg, &pos, self.end),
        )
    }

    /// Units are the series whose reduction modulo nilpotents is nonzero.
    pub fn is_unit(&self) -> bool {
        self.coeffs.iter().any(|c| c.is_unit())
    }

    /// `z`-order of the reduction modulo nilpotents.
    pub fn valuation(&self) -> Result<i64> {
        self.terms().find(|t| t.1.is_unit()).map(|t| t.0).ok_or(Error::NotAUnit)
    }

    /// `(n, L)`: the valuation and how far the nilpotent tail reaches below it.
    pub fn shape(&self) -> Result<(i64, i64)> {
        let n = self.valuation()?;
        Ok((n, n - self.start))
    }

    /// Inverse, known as far as the input determines it.
    ///
    /// An exact input has an exact inverse only when everything above its
    /// valuation vanishes; otherwise use [`LaurentSeries::inverse_to`].
    pub fn inverse(&self) -> Result<Self> {
        self.inverse_impl(None)
    }

    /// Inverse known at least up to `z^end` (less if the input's precision
    /// does not allow it).
    pub fn inverse_to(&self, end: i64) -> Result<Self> {
        self.inverse_impl(Some(end))
    }

    fn inverse_impl(&self, target: Option<i64>) -> Result<Self> {
        let (n, l) = self.shape()?;
        let e = self.alg.nil_index() as i64;
        // Write u = z^n v. Perturbing u at z^E moves u^{-1} at
        // z^{E - 2n - L(e-1)} and above: the negative tail of any v^{-2}
        // has e-adic weight bounding its depth by L(e-1).
        let natural = self.end.map(|end| end - 2 * n - l * (e - 1));
        let v = self.to_exact().shift(-n);
        let monomial_top = v.max_index() == Some(0);
        let goal = match (natural, target) {
            (None, None) if monomial_top => None,
            (None, None) => {
                return Err(Error::PrecisionTooLow("inverse of an exact series needs a precision".into()));
            }
            (a, b) => min_end(a, b),
        };
        let vinv = match goal {
            None => v.newton_inverse(Self::constant(v.c(0).inverse()?))?,
            Some(g) => v.truncated_inverse(g + n, l, e)?,
        };
        Ok(vinv.shift(-n))
    }

    /// Inverse of `v` (valuation 0, exact) known up to `z^end`.
    fn truncated_inverse(&self, end: i64, l: i64, e: i64) -> Result<Self> {
        let steps = newton_steps(e);
        let mut margin = (l * e + l + 1) * (steps + 1) + 1;
        loop {
            let w = end + margin;
            let r0 = self.power_series_part().series_inverse(w)?;
            let r = self.newton_inverse(r0)?;
            if r.end.is_some_and(|x| x >= end) {
                return Ok(r.truncate(end));
            }
            margin *= 2;
        }
    }

    /// Newton iteration `r <- r + r(1 - v r)` from an inverse modulo
    /// nilpotents; the error's `e`-adic order doubles each round.
    fn newton_inverse(&self, mut r: Self) -> Result<Self> {
        let one = Self::one(&self.alg);
        for _ in 0..newton_steps(self.alg.nil_index() as i64) {
            let res = one.checked_sub(&self.checked_mul(&r)?)?;
            if res.is_zero() {
                break;
            }
            r = r.checked_add(&r.checked_mul(&res)?)?;
        }
        debug_assert!(one.checked_sub(&self.checked_mul(&r)?)?.is_zero(), "Newton iteration did not converge");
        Ok(r)
    }

    /// Terms with nonnegative exponent.
    fn power_series_part(&self) -> Self {
        let terms: Vec<_> = self.terms().filter(|t| t.0 >= 0).map(|(k, c)| (k, c.clone())).collect();
        Self::from_terms(&self.alg, &terms, self.end)
    }

    /// Inverse of a power series with unit constant term, up to `z^end`.
    fn series_inverse(&self, end: i64) -> Result<Self> {
        let b0 = self.c(0).inverse()?;
        let end = min_end(self.end, Some(end)).unwrap();
        let len = end.max(0) as usize;
        let mut b: Vec<RingElement<F>> = Vec::with_capacity(len);
        for k in 0..len {
            if k == 0 {
                b.push(b0.clone());
                continue;
            }
            let mut acc = self.alg.zero();
            for j in 1..=k {
                let d = self.c(j as i64);
                if !d.is_zero() && !b[k - j].is_zero() {
                    acc.add_mul_assign(&d, &b[k - j]);
                }
            }
            b.push(-&(&acc * &b0));
        }
        Ok(Self::new(&self.alg, 0, b, Some(end)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inverse()?)
    }

    /// Integer power; negative powers need a unit.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(&self.alg);
        for _ in 0..k.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }
}

fn newton_steps(e: i64) -> i64 {
    let mut k = 1;
    let mut steps = 0;
    while k < e {
        k *= 2;
        steps += 1;
    }
    steps + 1
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<F: PrimeField> std::ops::$tr<&LaurentSeries<F>> for &LaurentSeries<F> {
            type Output = LaurentSeries<F>;
            fn $m(self, rhs: &LaurentSeries<F>) -> LaurentSeries<F> {
                self.$checked(rhs).expect("series over different algebras")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

/// Renders as `e*z^-1+1+2*z+O(z^4)`.
impl<F: PrimeField> fmt::Display for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, c) in self.terms() {
            let cs = c.to_string();
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let compound = cs[1..].contains(['+', '-']) || cs.contains(['*', '/']);
            let term = match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                (false, _) if compound => format!("({cs})*{mono}"),
                (false, _) => format!("{cs}*{mono}"),
            };
            if !out.is_empty() && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        if let Some(e) = self.end {
            if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&format!("O(z^{e})"));
        } else if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl<F: PrimeField> fmt::Debug for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `u = lambda z^n prod (1 - neg[i-1] z^{-i}) prod (1 - pos[i-1] z^i)`.
///
/// `pos` holds the known positive factors. `pos_known` is how many of them
/// the source determined; `None` means all later ones are zero. Both lists
/// carry no trailing zeros.
#[derive(Clone, Debug)]
pub struct CCDecomposition<F: PrimeField> {
    pub n: i64,
    pub lambda: RingElement<F>,
    pub neg: Vec<RingElement<F>>,
    pub pos: Vec<RingElement<F>>,
    pub pos_known: Option<usize>,
}

/// Compares the factor data; `pos_known` is bookkeeping and is ignored.
impl<F: PrimeField> PartialEq for CCDecomposition<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.lambda == other.lambda && self.neg == other.neg && self.pos == other.pos
    }
}

impl<F: PrimeField> Eq for CCDecomposition<F> {}

fn trim<F: PrimeField>(mut v: Vec<RingElement<F>>) -> Vec<RingElement<F>> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

impl<F: PrimeField> CCDecomposition<F> {
    /// Build from factor data; validates that `lambda` is a unit and the
    /// negative factors are nilpotent.
    pub fn new(n: i64, lambda: RingElement<F>, neg: Vec<RingElement<F>>, pos: Vec<RingElement<F>>) -> Result<Self> {
        if !lambda.is_unit() {
            return Err(Error::NotAUnit);
        }
        if neg.iter().any(|a| a.is_unit()) {
            return Err(Error::NotNilpotent);
        }
        let alg = lambda.algebra();
        if neg.iter().chain(&pos).any(|a| a.algebra() != alg) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(CCDecomposition { n, lambda, neg: trim(neg), pos: trim(pos), pos_known: None })
    }

    pub fn algebra(&self) -> &Algebra<F> {
        self.lambda.algebra()
    }

    /// `a_i` for `i != 0` (zero past the stored lists).
    pub fn a(&self, i: i64) -> RingElement<F> {
        let list = if i < 0 { &self.neg } else { &self.pos };
        let k = i.unsigned_abs() as usize;
        if i == 0 || k > list.len() {
            self.algebra().zero()
        } else {
            list[k - 1].clone()
        }
    }

    /// `prod (1 - a_{-i} z^{-i})`, exact.
    pub fn neg_product(&self) -> LaurentSeries<F> {
        let alg = self.algebra();
        let mut acc = LaurentSeries::one(alg);
        for (i, a) in self.neg.iter().enumerate() {
            if !a.is_zero() {
                acc = &acc * &one_minus(a, -(i as i64 + 1), None);
            }
        }
        acc
    }

    /// `prod (1 - a_i z^i)` over the stored factors, exact.
    pub fn pos_product(&self) -> LaurentSeries<F> {
        let alg = self.algebra();
        let mut acc = LaurentSeries::one(alg);
        for (i, a) in self.pos.iter().enumerate() {
            if !a.is_zero() {
                acc = &acc * &one_minus(a, i as i64 + 1, None);
            }
        }
        acc
    }
}

/// `1 - a z^k`.
fn one_minus<F: PrimeField>(a: &RingElement<F>, k: i64, end: Option<i64>) -> LaurentSeries<F> {
    let alg = a.algebra();
    LaurentSeries::from_terms(alg, &[(0, alg.one()), (k, -a)], end)
}

/// `(1 - a z^k)^{-1} = sum_j a^j z^{jk}` up to `z^end`; finite when `a` is
/// nilpotent.
fn geometric<F: PrimeField>(a: &RingElement<F>, k: i64, end: Option<i64>) -> LaurentSeries<F> {
    let alg = a.algebra();
    let mut terms = vec![(0, alg.one())];
    let mut pw = a.clone();
    let mut exp = k;
    while !pw.is_zero() && end.is_none_or(|e| exp < e) {
        terms.push((exp, pw.clone()));
        pw = &pw * a;
        exp += k;
    }
    LaurentSeries::from_terms(alg, &terms, end)
}

/// Canonical factorization of a unit.
///
/// For an input known up to `z^E` the positive factors `a_i` are returned
/// for `i < E - n - h`, where `h` is the depth of the inverse of the
/// negative part: a change of `u` at `z^E` alters only those beyond. Exact
/// inputs are factored over a window past their last term and marked
/// complete when the factors multiply back to the input exactly.
pub fn cc_decompose<F: PrimeField>(u: &LaurentSeries<F>) -> Result<CCDecomposition<F>> {
    let (n, l) = u.shape()?;
    let alg = u.algebra().clone();
    let e = alg.nil_index() as i64;
    let v = u.to_exact().shift(-n);
    let window = match u.end() {
        Some(end) => end - n,
        None => v.max_index().unwrap_or(0) + l * e + 2,
    };

    let (nprod, lambda, pser) = factor_window(&v, window, l, e)?;
    let depth = -nprod.inverse()?.min_index().unwrap_or(0);
    let known = window - depth;
    if known < 1 {
        return Err(Error::PrecisionTooLow(format!(
            "need coefficients up to z^{}, have up to z^{}",
            n + depth,
            window + n - 1
        )));
    }

    let mut neg = Vec::new();
    let mut rest = nprod;
    let mut i = 1;
    while !rest.is_one() {
        let a = -&rest.c(-i);
        if !a.is_zero() {
            rest = &rest * &geometric(&a, -i, None);
        }
        neg.push(a);
        i += 1;
        assert!(i <= 1 + l * e * e + 64, "negative factor extraction does not terminate");
    }

    let mut pos = Vec::new();
    let mut p = pser.truncate(known);
    for i in 1..known {
        let a = -&p.c(i);
        if !a.is_zero() {
            p = &p * &geometric(&a, i, Some(known));
        }
        pos.push(a);
    }

    let mut d = CCDecomposition { n, lambda, neg: trim(neg), pos: trim(pos), pos_known: Some((known - 1) as usize) };
    if u.is_exact() {
        let back = cc_recompose_exact(&d);
        if back == *u {
            d.pos_known = None;
        }
    }
    Ok(d)
}

/// Solve `v = lambda N P` modulo `z^window`, with `N` a polynomial in `1/z`
/// with constant term 1 and `P` a power series with constant term 1.
///
/// Each round divides out the current guess and moves the negative, constant
/// and positive parts of the (nilpotent) error into `N`, `lambda`, `P`; the
/// error's `e`-adic order doubles every round.
#[allow(clippy::type_complexity)]
fn factor_window<F: PrimeField>(
    v: &LaurentSeries<F>,
    window: i64,
    l: i64,
    e: i64,
) -> Result<(LaurentSeries<F>, RingElement<F>, LaurentSeries<F>)> {
    let alg = v.algebra();
    let one = LaurentSeries::one(alg);
    let rounds = newton_steps(e) + 1;
    let mut margin = (l * e + l + 2) * (rounds + 1);
    'retry: loop {
        let w = window + margin;
        let mut lambda = v.c(0);
        let lambda_inv = lambda.inverse()?;
        let mut nprod = one.clone();
        let mut pser = one.checked_add(&v.power_series_part().split().2.scale(&lambda_inv))?.truncate(w);
        for _ in 0..=rounds + 2 {
            let r = v
                .checked_mul(&nprod.inverse()?)?
                .checked_mul(&pser.series_inverse(w)?)?
                .scale(&lambda.inverse()?);
            if r.end().is_some_and(|x| x < window.max(1)) {
                margin *= 2;
                continue 'retry;
            }
            let delta = r.checked_sub(&one)?;
            if delta.is_zero() {
                return Ok((nprod, lambda, pser));
            }
            let (dn, d0, dp) = delta.split();
            nprod = &nprod * &(&one + &dn);
            lambda = &lambda * &(&alg.one() + &d0);
            pser = &pser * &(&one + &dp);
        }
        unreachable!("decomposition failed to converge");
    }
}

/// `lambda z^n prod(neg) prod(pos)`, treating the stored data as exact.
pub fn cc_recompose_exact<F: PrimeField>(d: &CCDecomposition<F>) -> LaurentSeries<F> {
    let head = LaurentSeries::monomial(d.lambda.clone(), d.n);
    &(&head * &d.neg_product()) * &d.pos_product()
}

/// Expand the product to `p` coefficients counted from its lowest term.
pub fn cc_recompose<F: PrimeField>(d: &CCDecomposition<F>, p: i64) -> LaurentSeries<F> {
    let head = &LaurentSeries::monomial(d.lambda.clone(), d.n) * &d.neg_product();
    let start = head.min_index().unwrap_or(d.n);
    let mut tail = LaurentSeries::one(d.algebra()).truncate(p);
    for (i, a) in d.pos.iter().enumerate() {
        if !a.is_zero() && (i as i64) + 1 < p {
            tail = &tail * &one_minus(a, i as i64 + 1, Some(p));
        }
    }
    (&head * &tail).truncate(start + p)
}

/// Coefficient of `z^{-1}`.
pub fn residue<F: PrimeField>(u: &LaurentSeries<F>) -> Result<RingElement<F>> {
    u.coeff(-1)
}

/// `delta_s(f) = res(z^s f'/f)`.
pub fn delta<F: PrimeField>(s: i64, f: &LaurentSeries<F>) -> Result<RingElement<F>> {
    log_derivative(f)?.coeff(-1 - s)
}

/// `f'/f`, whose `z^{-1-s}` coefficient is `delta_s(f)`.
pub fn log_derivative<F: PrimeField>(f: &LaurentSeries<F>) -> Result<LaurentSeries<F>> {
    f.derivative().checked_mul(&f.inverse()?)
}

/// How many positive factors of one unit can meet the negative factors of a
/// unit whose nilpotent tail reaches `l` below its valuation: `a_i` pairs
/// with `b_{-j}` only while `i < j nil(b_{-j})`, and `b_{-j}` lies in the
/// `ceil(j/l)`-th power of the nilradical.
fn pairing_reach(l: i64, e: i64) -> i64 {
    if l == 0 || e == 1 {
        return 0;
    }
    (1..=l * (e - 1)).map(|j| j * ceil_div(e, ceil_div(j, l)) - 1).max().unwrap_or(0)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1) / b
}

/// A precision (coefficients counted from the lowest term) at which every
/// symbol formula on `(u, w)` is determined.
pub fn required_precision<F: PrimeField>(u: &LaurentSeries<F>, w: &LaurentSeries<F>) -> Result<i64> {
    let e = u.algebra().nil_index() as i64;
    let (n, lu) = u.shape()?;
    let (m, lw) = w.shape()?;
    let slack = n.abs() + m.abs() + 1;
    let ru = lu + lu * e + pairing_reach(lw, e) + slack;
    let rw = lw + lw * e + pairing_reach(lu, e) + slack;
    Ok(ru.max(rw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::scalar::{ModP, Rationals};

    fn alg(p: u64, e: usize) -> Algebra<ModP> {
        Algebra::new(FieldDescriptor::prime(p).unwrap(), e).unwrap()
    }

    fn s(a: &Algebra<ModP>, terms: &[(i64, RingElement<ModP>)], end: Option<i64>) -> LaurentSeries<ModP> {
        LaurentSeries::from_terms(a, terms, end)
    }

    #[test]
    fn inverse_examples() {
        let a = alg(5, 1);
        let u = s(&a, &[(0, a.one()), (1, a.from_i64(-1))], Some(4));
        let inv = u.inverse().unwrap();
        assert_eq!(inv, s(&a, &[(0, a.one()), (1, a.one()), (2, a.one()), (3, a.one())], Some(4)));
        assert_eq!(LaurentSeries::z(&a).inverse().unwrap(), LaurentSeries::monomial(a.one(), -1));

        let b = alg(3, 2);
        let eps = b.gen_eps().unwrap();
        let u = s(&b, &[(0, b.one()), (-1, -&eps)], None);
        assert_eq!(u.inverse().unwrap(), s(&b, &[(0, b.one()), (-1, eps)], None));
    }

    #[test]
    fn exact_inverse_needs_precision() {
        let a = alg(5, 1);
        let u = s(&a, &[(0, a.one()), (1, a.one())], None);
        assert!(matches!(u.inverse(), Err(Error::PrecisionTooLow(_))));
        let inv = u.inverse_to(6).unwrap();
        assert!((&u * &inv).agrees_with(&LaurentSeries::one(&a)));
    }

    #[test]
    fn valuation_examples() {
        let a = alg(5, 1);
        assert_eq!(LaurentSeries::monomial(a.one(), 2).valuation().unwrap(), 2);
        let b = alg(3, 2);
        let eps = b.gen_eps().unwrap();
        assert_eq!(s(&b, &[(-1, eps.clone()), (0, b.one())], None).valuation().unwrap(), 0);
        assert_eq!(s(&b, &[(-1, eps.clone()), (1, b.one())], None).valuation().unwrap(), 1);
        assert_eq!(s(&b, &[(-1, eps)], None).valuation().unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn decompose_examples() {
        let b = alg(3, 2);
        let eps = b.gen_eps().unwrap();
        let d = cc_decompose(&s(&b, &[(1, b.one()), (0, eps.clone())], None)).unwrap();
        assert_eq!(d, CCDecomposition::new(1, b.one(), vec![-&eps], vec![]).unwrap());
        assert_eq!(d.pos_known, None);

        let a = alg(5, 1);
        let d = cc_decompose(&LaurentSeries::monomial(a.from_i64(3), -2)).unwrap();
        assert_eq!(d, CCDecomposition::new(-2, a.from_i64(3), vec![], vec![]).unwrap());

        let c = alg(5, 2);
        let eps = c.gen_eps().unwrap();
        let lam = &c.one() + &eps;
        let u = s(&c, &[(0, lam.clone()), (1, &lam * &c.from_i64(-2))], None);
        let d = cc_decompose(&u).unwrap();
        assert_eq!(d, CCDecomposition::new(0, lam, vec![], vec![c.from_i64(2)]).unwrap());
    }

    #[test]
    fn recompose_examples() {
        let b = alg(3, 2);
        let eps = b.gen_eps().unwrap();
        let d = CCDecomposition::new(0, b.one(), vec![eps.clone()], vec![]).unwrap();
        assert_eq!(cc_recompose_exact(&d), s(&b, &[(0, b.one()), (-1, -&eps)], None));

        let a = alg(5, 1);
        let d = CCDecomposition::new(1, a.one(), vec![], vec![a.one()]).unwrap();
        let u = cc_recompose(&d, 3);
        assert_eq!(u, s(&a, &[(1, a.one()), (2, a.from_i64(-1))], Some(4)));

        let two = b.from_i64(2);
        let d = CCDecomposition::new(0, two.clone(), vec![eps.clone()], vec![b.one()]).unwrap();
        // 2(1 - e/z)(1 - z) = 2 - 2z - 2e/z + 2e
        let want = s(&b, &[(0, &two + &(&two * &eps)), (1, -&two), (-1, -&(&two * &eps))], None);
        assert_eq!(cc_recompose_exact(&d), want);
    }

    #[test]
    fn decompose_inexact_respects_precision() {
        let c = alg(5, 3);
        let eps = c.gen_eps().unwrap();
        let d = CCDecomposition::new(
            1,
            &c.from_i64(2) + &eps,
            vec![eps.clone(), &eps * &eps],
            vec![c.from_i64(3), eps.clone(), c.one()],
        )
        .unwrap();
        let u = cc_recompose(&d, 20);
        let back = cc_decompose(&u).unwrap();
        assert!(back.pos_known.unwrap() >= 3);
        assert_eq!(back, d);
        assert!(cc_recompose(&back, 20).agrees_with(&u));
    }

    #[test]
    fn residue_examples() {
        let a = alg(5, 1);
        assert!(residue(&LaurentSeries::monomial(a.one(), -1)).unwrap().is_one());
        assert!(residue(&s(&a, &[(0, a.one()), (1, a.one())], None)).unwrap().is_zero());
        let u = s(&a, &[(-1, a.from_i64(3)), (-2, a.one())], None);
        assert_eq!(residue(&u).unwrap(), a.from_i64(3));
        assert!(matches!(residue(&s(&a, &[(0, a.one())], Some(-1))), Err(Error::PrecisionTooLow(_))));
    }

    #[test]
    fn delta_examples() {
        let q = Algebra::new(FieldDescriptor::rationals(), 2).unwrap();
        let u = LaurentSeries::from_terms(&q, &[(0, q.one()), (1, q.from_i64(-2))], Some(6));
        assert_eq!(delta(-1, &u).unwrap(), q.from_i64(-2));
        let b = q.gen_eps().unwrap();
        let w = LaurentSeries::from_terms(&q, &[(0, q.one()), (-1, -&b)], None);
        assert_eq!(delta(1, &w).unwrap(), b);
        assert!(delta(0, &LaurentSeries::z(&q)).unwrap().is_one());
        let _ = Rationals;
    }

    #[test]
    fn required_precision_examples() {
        let a = alg(5, 1);
        let z = LaurentSeries::z(&a);
        let z3 = LaurentSeries::monomial(a.from_i64(2), -3);
        assert_eq!(required_precision(&z, &z3).unwrap(), 1 + 3 + 1);
        let one = LaurentSeries::one(&a);
        assert_eq!(required_precision(&one, &one).unwrap(), 1);
        let b = alg(3, 2);
        let eps = b.gen_eps().unwrap();
        let w = s(&b, &[(0, b.one()), (-1, eps)], None);
        let u = s(&b, &[(0, b.one()), (1, b.one())], None);
        assert!(required_precision(&u, &w).unwrap() >= 2);
    }
}
