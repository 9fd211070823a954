//! Artinian local algebras `L[e]/(e^n)` over a finite field or `Q`.
//!
//! An [`Algebra`] is the tower
//!
//! ```text
//!   prime field  ⊂  K = prime[x]/(mu)  ⊂  L = K[y]/(pi)  ⊂  A = L[e]/(e^n)
//! ```
//!
//! where `L = K` when no scalar extension is declared and `A = L` when the
//! nilpotency index is 1. Elements are stored as flat coordinate vectors over
//! the prime field, indexed by `(e-power, y-power, x-power)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::field::{smallest_irreducible, FieldDescriptor};
use crate::poly::Polynomial;
use crate::scalar::PrimeField;

#[derive(Debug, PartialEq, Eq)]
struct Spec<F: PrimeField> {
    base: FieldDescriptor<F>,
    /// Monic modulus of `L` over `K`, low to high; each coefficient is a
    /// `K` coordinate vector. Empty when `L = K`.
    ext: Vec<Vec<F::Elem>>,
    nil: usize,
    dk: usize,
    dl: usize,
    /// Products of the prime-field basis of `L`: entry `(i * m + j) * m + k`
    /// is the `k`-th coordinate of `b_i b_j`, with `m = dk * dl`.
    table: Vec<F::Elem>,
}

impl<F: PrimeField> Spec<F> {
    fn new(base: FieldDescriptor<F>, ext: Vec<Vec<F::Elem>>, nil: usize, dk: usize, dl: usize) -> Self {
        let bare = Algebra(Arc::new(Spec { base, ext, nil, dk, dl, table: Vec::new() }));
        let m = dk * dl;
        let pf = bare.prime_field();
        let mut table = Vec::with_capacity(m * m * m);
        if m > 1 {
            for i in 0..m {
                for j in 0..m {
                    let unit = |k: usize| (0..m).map(|t| if t == k { pf.one() } else { pf.zero() }).collect::<Vec<_>>();
                    table.extend(bare.l_mul(&unit(i), &unit(j)));
                }
            }
        }
        let mut spec = Arc::try_unwrap(bare.0).unwrap_or_else(|_| unreachable!("sole owner"));
        spec.table = table;
        spec
    }
}

/// Descriptor of `L ⊗_K K[e]/(e^n)`; cheap to clone and compare.
#[derive(Clone)]
pub struct Algebra<F: PrimeField>(Arc<Spec<F>>);

impl<F: PrimeField> PartialEq for Algebra<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl<F: PrimeField> Eq for Algebra<F> {}

impl<F: PrimeField> fmt::Debug for Algebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: PrimeField> fmt::Display for Algebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.0;
        let p = s.base.characteristic();
        if p == 0 {
            write!(f, "Q")?;
        } else {
            write!(f, "F{}", BigUint::from(p).pow(s.dk as u32))?;
            if let Some(m) = s.base.modulus() {
                let pf = s.base.prime_field();
                write!(f, ":{}", render_poly(m.iter().map(|c| pf.render(c)), "x"))?;
            }
        }
        if s.dl > 1 {
            let k = self.coefficient_field();
            let terms = s.ext.iter().map(|c| k.element(c.clone()).to_string());
            write!(f, "/{}", render_poly(terms, "y"))?;
        }
        if s.nil > 1 {
            write!(f, "[e^{}]", s.nil)?;
        }
        Ok(())
    }
}

fn render_poly(coeffs: impl Iterator<Item = String>, var: &str) -> String {
    let terms: Vec<String> = coeffs
        .enumerate()
        .filter(|(_, c)| c != "0")
        .map(|(i, c)| {
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            match (c.as_str(), mono.is_empty()) {
                (_, true) => c,
                ("1", false) => mono,
                _ if c.contains(['+', '-', '/', '*']) => format!("({c})*{mono}"),
                _ => format!("{c}{mono}"),
            }
        })
        .collect();
    terms.into_iter().rev().collect::<Vec<_>>().join("+")
}

impl<F: PrimeField> Algebra<F> {
    /// `K[e]/(e^nil)`. `nil = 1` gives the field `K` itself.
    pub fn new(base: FieldDescriptor<F>, nil: usize) -> Result<Self> {
        if nil == 0 {
            return Err(Error::InvalidDescriptor("nilpotency index must be at least 1".into()));
        }
        let dk = base.degree();
        Ok(Algebra(Arc::new(Spec::new(base, Vec::new(), nil, dk, 1))))
    }

    /// `L ⊗_K self` where `L = K[y]/(modulus)`. The modulus lives over the
    /// coefficient field `K` and must be monic irreducible.
    pub fn extend(&self, modulus: &Polynomial<F>) -> Result<Self> {
        if self.0.dl > 1 {
            return Err(Error::Unsupported("towers of more than one scalar extension".into()));
        }
        let k = self.coefficient_field();
        if *modulus.algebra() != k {
            return Err(Error::AlgebraMismatch);
        }
        if self.characteristic() == 0 {
            return Err(Error::Unsupported("extensions of Q are not supported".into()));
        }
        if !modulus.is_monic() || modulus.degree().unwrap_or(0) < 1 {
            return Err(Error::InvalidDescriptor("extension modulus must be monic of degree >= 1".into()));
        }
        if modulus.degree() == Some(1) {
            return Ok(self.clone());
        }
        if !is_irreducible(modulus)? {
            return Err(Error::InvalidDescriptor("extension modulus is reducible".into()));
        }
        let ext: Vec<Vec<F::Elem>> = modulus.coeffs().iter().map(|c| c.c.clone()).collect();
        let dl = ext.len() - 1;
        Ok(Algebra(Arc::new(Spec::new(self.0.base.clone(), ext, self.0.nil, self.0.dk, dl))))
    }

    /// Scalar extension of degree `d` using the smallest irreducible modulus.
    pub fn extend_by_degree(&self, d: usize) -> Result<Self> {
        let k = self.coefficient_field();
        let m = smallest_irreducible(&k, d)?;
        self.extend(&m)
    }

    /// The field `K` (no extension, no nilpotents).
    pub fn coefficient_field(&self) -> Self {
        if self.0.dl == 1 && self.0.nil == 1 {
            return self.clone();
        }
        Algebra(Arc::new(Spec::new(self.0.base.clone(), Vec::new(), 1, self.0.dk, 1)))
    }

    /// The residue field `L` (nilpotents dropped).
    pub fn residue_field(&self) -> Self {
        if self.0.nil == 1 {
            return self.clone();
        }
        Algebra(Arc::new(Spec { nil: 1, ..self.spec_clone() }))
    }

    /// `K[e]/(e^n)`: this algebra with the scalar extension removed.
    pub fn base_algebra(&self) -> Self {
        if self.0.dl == 1 {
            return self.clone();
        }
        Algebra(Arc::new(Spec::new(self.0.base.clone(), Vec::new(), self.0.nil, self.0.dk, 1)))
    }

    /// Same scalars with nilpotency index `nil`.
    pub fn with_nil_index(&self, nil: usize) -> Result<Self> {
        if nil == 0 {
            return Err(Error::InvalidDescriptor("nilpotency index must be at least 1".into()));
        }
        Ok(Algebra(Arc::new(Spec { nil, ..self.spec_clone() })))
    }

    fn spec_clone(&self) -> Spec<F> {
        let s = &self.0;
        Spec { base: s.base.clone(), ext: s.ext.clone(), nil: s.nil, dk: s.dk, dl: s.dl, table: s.table.clone() }
    }

    pub fn base_field(&self) -> &FieldDescriptor<F> {
        &self.0.base
    }

    pub fn prime_field(&self) -> &F {
        self.0.base.prime_field()
    }

    pub fn characteristic(&self) -> u64 {
        self.0.base.characteristic()
    }

    pub fn nil_index(&self) -> usize {
        self.0.nil
    }

    /// `[L : K]`, 1 when no extension is declared.
    pub fn ext_degree(&self) -> usize {
        self.0.dl
    }

    pub fn has_extension(&self) -> bool {
        self.0.dl > 1
    }

    /// `[K : prime field]`.
    pub fn base_degree(&self) -> usize {
        self.0.dk
    }

    /// Dimension over the prime field.
    pub fn dim(&self) -> usize {
        self.0.nil * self.0.dl * self.0.dk
    }

    fn block(&self) -> usize {
        self.0.dl * self.0.dk
    }

    pub fn is_field(&self) -> bool {
        self.0.nil == 1
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    /// `#K`, or `None` for `Q`.
    pub fn base_field_order(&self) -> Option<BigUint> {
        self.0.base.cardinality()
    }

    /// `#L`, the order of the residue field.
    pub fn residue_field_order(&self) -> Option<BigUint> {
        self.base_field_order().map(|q| q.pow(self.0.dl as u32))
    }

    /// `#A`.
    pub fn cardinality(&self) -> Option<BigUint> {
        match self.characteristic() {
            0 => None,
            p => Some(BigUint::from(p).pow(self.dim() as u32)),
        }
    }

    /// `#A^* = #A (1 - 1/#L)`: the units are exactly the elements with nonzero
    /// residue.
    pub fn unit_group_order(&self) -> Result<BigUint> {
        let r = self.residue_field_order().ok_or(Error::NotFinite)?;
        Ok(r.pow(self.0.nil as u32 - 1) * (r - BigUint::one()))
    }

    pub fn zero(&self) -> RingElement<F> {
        let z = self.prime_field().zero();
        RingElement { alg: self.clone(), c: vec![z; self.dim()] }
    }

    pub fn one(&self) -> RingElement<F> {
        self.from_prime(self.prime_field().one())
    }

    pub fn from_i64(&self, v: i64) -> RingElement<F> {
        self.from_prime(self.prime_field().from_i64(v))
    }

    pub fn from_prime(&self, v: F::Elem) -> RingElement<F> {
        let mut z = self.zero();
        z.c[0] = v;
        z
    }

    /// Element with the given prime-field coordinates.
    ///
    /// Panics if the length differs from [`Algebra::dim`].
    pub fn element(&self, coords: Vec<F::Elem>) -> RingElement<F> {
        assert_eq!(coords.len(), self.dim(), "coordinate vector has wrong length");
        RingElement { alg: self.clone(), c: coords }
    }

    /// Generator `x` of `K` over the prime field.
    pub fn gen_x(&self) -> Result<RingElement<F>> {
        if self.0.dk < 2 {
            return Err(Error::InvalidDescriptor("x is only defined for proper extensions of the prime field".into()));
        }
        let mut z = self.zero();
        z.c[1] = self.prime_field().one();
        Ok(z)
    }

    /// Generator `y` of `L` over `K`.
    pub fn gen_y(&self) -> Result<RingElement<F>> {
        if self.0.dl < 2 {
            return Err(Error::NoExtension);
        }
        let mut z = self.zero();
        z.c[self.0.dk] = self.prime_field().one();
        Ok(z)
    }

    /// The nilpotent generator `e`.
    pub fn gen_eps(&self) -> Result<RingElement<F>> {
        if self.0.nil < 2 {
            return Err(Error::InvalidDescriptor("algebra has no nilpotent generator".into()));
        }
        let mut z = self.zero();
        z.c[self.block()] = self.prime_field().one();
        Ok(z)
    }

    /// Image of `x` under the natural inclusion from a subalgebra sharing the
    /// field `K` (for instance `K` or `K[e]/(e^n)` into `L[e]/(e^n)`).
    pub fn embed(&self, x: &RingElement<F>) -> Result<RingElement<F>> {
        if x.alg == *self {
            return Ok(x.clone());
        }
        let src = &x.alg.0;
        if src.base != self.0.base || (src.dl > 1 && (src.ext != self.0.ext)) {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = self.zero();
        let (dk, sdl) = (src.dk, src.dl);
        for k in 0..src.nil {
            for j in 0..sdl {
                for i in 0..dk {
                    let v = &x.c[(k * sdl + j) * dk + i];
                    if self.prime_field().is_zero(v) {
                        continue;
                    }
                    if k >= self.0.nil {
                        return Err(Error::AlgebraMismatch);
                    }
                    out.c[(k * self.0.dl + j) * dk + i] = v.clone();
                }
            }
        }
        Ok(out)
    }

    /// Every element, in the order of the base-`p` integer formed by the
    /// coordinates (first coordinate least significant). `None` for `Q`.
    pub fn elements(&self) -> Option<Vec<RingElement<F>>> {
        let digits = self.prime_field().elements()?;
        let dim = self.dim();
        let total = digits.len().checked_pow(dim as u32)?;
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            out.push(self.element(idx.iter().map(|&i| digits[i].clone()).collect()));
            for d in idx.iter_mut() {
                *d += 1;
                if *d < digits.len() {
                    break;
                }
                *d = 0;
            }
        }
        Some(out)
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> RingElement<F> {
        let pf = self.prime_field();
        self.element((0..self.dim()).map(|_| pf.random(rng)).collect())
    }

    pub fn random_unit<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> RingElement<F> {
        loop {
            let x = self.random(rng);
            if x.is_unit() {
                return x;
            }
        }
    }

    /// Random element of the nilradical (zero when the algebra is a field).
    pub fn random_nilpotent<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> RingElement<F> {
        let mut x = self.random(rng);
        let pf = self.prime_field().clone();
        for v in x.c[..self.block()].iter_mut() {
            *v = pf.zero();
        }
        x
    }

    // ----- coordinate arithmetic -----

    fn k_mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let pf = self.prime_field();
        let dk = self.0.dk;
        if dk == 1 {
            return vec![pf.mul(&a[0], &b[0])];
        }
        let mut prod = vec![pf.zero(); 2 * dk - 1];
        for (i, ai) in a.iter().enumerate() {
            if pf.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !pf.is_zero(bj) {
                    prod[i + j] = pf.add(&prod[i + j], &pf.mul(ai, bj));
                }
            }
        }
        let m = self.0.base.modulus().expect("degree > 1 implies a modulus");
        for deg in (dk..2 * dk - 1).rev() {
            let c = prod[deg].clone();
            if pf.is_zero(&c) {
                continue;
            }
            for i in 0..dk {
                prod[deg - dk + i] = pf.sub(&prod[deg - dk + i], &pf.mul(&c, &m[i]));
            }
        }
        prod.truncate(dk);
        prod
    }

    fn k_add_into(&self, acc: &mut [F::Elem], x: &[F::Elem]) {
        let pf = self.prime_field();
        for (a, b) in acc.iter_mut().zip(x) {
            *a = pf.add(a, b);
        }
    }

    fn k_sub_into(&self, acc: &mut [F::Elem], x: &[F::Elem]) {
        let pf = self.prime_field();
        for (a, b) in acc.iter_mut().zip(x) {
            *a = pf.sub(a, b);
        }
    }

    fn is_zero_slice(&self, a: &[F::Elem]) -> bool {
        let pf = self.prime_field();
        a.iter().all(|v| pf.is_zero(v))
    }

    fn l_mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let (dk, dl) = (self.0.dk, self.0.dl);
        if dl == 1 {
            return self.k_mul(a, b);
        }
        let pf = self.prime_field();
        let mut prod = vec![pf.zero(); (2 * dl - 1) * dk];
        for i in 0..dl {
            let ai = &a[i * dk..(i + 1) * dk];
            if self.is_zero_slice(ai) {
                continue;
            }
            for j in 0..dl {
                let bj = &b[j * dk..(j + 1) * dk];
                if self.is_zero_slice(bj) {
                    continue;
                }
                let t = self.k_mul(ai, bj);
                self.k_add_into(&mut prod[(i + j) * dk..(i + j + 1) * dk], &t);
            }
        }
        for deg in (dl..2 * dl - 1).rev() {
            let c = prod[deg * dk..(deg + 1) * dk].to_vec();
            if self.is_zero_slice(&c) {
                continue;
            }
            for i in 0..dl {
                let t = self.k_mul(&c, &self.0.ext[i]);
                let lo = (deg - dl + i) * dk;
                self.k_sub_into(&mut prod[lo..lo + dk], &t);
            }
        }
        prod.truncate(dl * dk);
        prod
    }

    fn l_one(&self) -> Vec<F::Elem> {
        let pf = self.prime_field();
        let mut v = vec![pf.zero(); self.block()];
        v[0] = pf.one();
        v
    }

    fn l_pow(&self, a: &[F::Elem], exp: &BigUint) -> Vec<F::Elem> {
        let mut result = self.l_one();
        let bits = exp.bits();
        for i in (0..bits).rev() {
            result = self.l_mul(&result, &result);
            if exp.bit(i) {
                result = self.l_mul(&result, a);
            }
        }
        result
    }

    fn l_inv(&self, a: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if self.is_zero_slice(a) {
            return None;
        }
        if self.block() == 1 {
            return self.prime_field().inv(&a[0]).map(|v| vec![v]);
        }
        let order = self.residue_field_order().expect("extensions only exist over finite fields");
        Some(self.l_pow(a, &(order - BigUint::from(2u32))))
    }

    /// `out += a * b` in `L`.
    fn l_mul_acc(&self, out: &mut [F::Elem], a: &[F::Elem], b: &[F::Elem]) {
        let pf = self.prime_field();
        let m = self.block();
        if m == 1 {
            if !pf.is_zero(&a[0]) && !pf.is_zero(&b[0]) {
                out[0] = pf.add(&out[0], &pf.mul(&a[0], &b[0]));
            }
            return;
        }
        for (i, ai) in a.iter().enumerate() {
            if pf.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if pf.is_zero(bj) {
                    continue;
                }
                let c = pf.mul(ai, bj);
                let row = &self.0.table[(i * m + j) * m..(i * m + j + 1) * m];
                for (o, t) in out.iter_mut().zip(row) {
                    if !pf.is_zero(t) {
                        *o = pf.add(o, &pf.mul(&c, t));
                    }
                }
            }
        }
    }

    /// `out += a * b` on full coordinate vectors.
    fn mul_acc_coords(&self, out: &mut [F::Elem], a: &[F::Elem], b: &[F::Elem]) {
        let n = self.0.nil;
        let bl = self.block();
        for i in 0..n {
            let ai = &a[i * bl..(i + 1) * bl];
            if self.is_zero_slice(ai) {
                continue;
            }
            for j in 0..n - i {
                let bj = &b[j * bl..(j + 1) * bl];
                if !self.is_zero_slice(bj) {
                    self.l_mul_acc(&mut out[(i + j) * bl..(i + j + 1) * bl], ai, bj);
                }
            }
        }
    }

    fn mul_coords(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![self.prime_field().zero(); self.dim()];
        self.mul_acc_coords(&mut out, a, b);
        out
    }
}

/// An element of an [`Algebra`].
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement<F: PrimeField> {
    alg: Algebra<F>,
    c: Vec<F::Elem>,
}

impl<F: PrimeField> RingElement<F> {
    pub fn algebra(&self) -> &Algebra<F> {
        &self.alg
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.c
    }

    fn pf(&self) -> &F {
        self.alg.prime_field()
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.alg == other.alg {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alg.is_zero_slice(&self.c)
    }

    pub fn is_one(&self) -> bool {
        *self == self.alg.one()
    }

    /// Units are exactly the elements with nonzero residue in `L`.
    pub fn is_unit(&self) -> bool {
        !self.alg.is_zero_slice(&self.c[..self.alg.block()])
    }

    pub fn is_nilpotent(&self) -> bool {
        !self.is_unit()
    }

    /// The `e`-adic order: least `k` with a nonzero `e^k` block, `None` for 0.
    pub fn eps_order(&self) -> Option<usize> {
        let bl = self.alg.block();
        (0..self.alg.nil_index()).find(|k| !self.alg.is_zero_slice(&self.c[k * bl..(k + 1) * bl]))
    }

    /// Least `r >= 1` with `self^r = 0`; `None` for units.
    ///
    /// If `self = e^k u` with `u` a unit then `self^r = 0` iff `kr >= n`.
    pub fn nilindex(&self) -> Option<usize> {
        match self.eps_order() {
            None => Some(1),
            Some(0) => None,
            Some(k) => Some(self.alg.nil_index().div_ceil(k)),
        }
    }

    /// The `e^k` coefficient as an element of the residue field `L`.
    pub fn eps_coeff(&self, k: usize) -> RingElement<F> {
        let bl = self.alg.block();
        let l = self.alg.residue_field();
        if k >= self.alg.nil_index() {
            return l.zero();
        }
        l.element(self.c[k * bl..(k + 1) * bl].to_vec())
    }

    /// Image in the residue field.
    pub fn residue(&self) -> RingElement<F> {
        self.eps_coeff(0)
    }

    /// Coordinates of this element viewed in `K`, if it lies there.
    pub fn as_base_field(&self) -> Option<RingElement<F>> {
        let dk = self.alg.0.dk;
        if self.c[dk..].iter().any(|v| !self.pf().is_zero(v)) {
            return None;
        }
        Some(self.alg.coefficient_field().element(self.c[..dk].to_vec()))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let pf = self.pf();
        Ok(RingElement { alg: self.alg.clone(), c: self.c.iter().zip(&other.c).map(|(a, b)| pf.add(a, b)).collect() })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let pf = self.pf();
        Ok(RingElement { alg: self.alg.clone(), c: self.c.iter().zip(&other.c).map(|(a, b)| pf.sub(a, b)).collect() })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(RingElement { alg: self.alg.clone(), c: self.alg.mul_coords(&self.c, &other.c) })
    }

    /// `self += a * b` without intermediate allocation.
    pub(crate) fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        debug_assert!(self.alg == a.alg && self.alg == b.alg, "elements of different algebras");
        let RingElement { alg, c } = self;
        alg.mul_acc_coords(c, &a.c, &b.c);
    }

    pub fn neg(&self) -> Self {
        let pf = self.pf();
        RingElement { alg: self.alg.clone(), c: self.c.iter().map(|a| pf.neg(a)).collect() }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let pf = self.pf();
        RingElement { alg: self.alg.clone(), c: self.c.iter().map(|a| pf.mul(a, s)).collect() }
    }

    /// Multiplicative inverse; units only.
    pub fn inverse(&self) -> Result<Self> {
        let bl = self.alg.block();
        let r = self.alg.l_inv(&self.c[..bl]).ok_or(Error::NotAUnit)?;
        let mut y = self.alg.zero();
        y.c[..bl].clone_from_slice(&r);
        // Newton: the error e^k term squares each round
        let two = self.alg.from_i64(2);
        let mut k = 1;
        while k < self.alg.nil_index() {
            y = &y * &(&two - &(self * &y));
            k *= 2;
        }
        Ok(y)
    }

    /// Integer power; negative exponents need a unit.
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            Ok(self.inverse()?.pow_big(&BigUint::from(n.unsigned_abs())))
        } else {
            Ok(self.pow_big(&BigUint::from(n as u64)))
        }
    }

    pub fn pow_big(&self, exp: &BigUint) -> Self {
        let mut result = self.alg.one();
        for i in (0..exp.bits()).rev() {
            result = &result * &result;
            if exp.bit(i) {
                result = &result * self;
            }
        }
        result
    }

    /// Frobenius of `L` over `K`, acting on every `e`-coefficient.
    pub fn frobenius(&self) -> Result<Self> {
        let q = self.alg.base_field_order().ok_or(Error::NotFinite)?;
        if self.alg.ext_degree() == 1 {
            return Ok(self.clone());
        }
        let bl = self.alg.block();
        let mut c = Vec::with_capacity(self.c.len());
        for blk in self.c.chunks(bl) {
            c.extend(self.alg.l_pow(blk, &q));
        }
        Ok(RingElement { alg: self.alg.clone(), c })
    }

    /// Norm from `L ⊗ B` down to `K ⊗ B`: the product of the Frobenius
    /// conjugates, which is the determinant of multiplication by `self`.
    pub fn norm(&self) -> Result<RingElement<F>> {
        if !self.alg.has_extension() {
            return Err(Error::NoExtension);
        }
        let mut acc = self.clone();
        let mut conj = self.clone();
        for _ in 1..self.alg.ext_degree() {
            conj = conj.frobenius()?;
            acc = &acc * &conj;
        }
        let base = self.alg.base_algebra();
        let (dk, dl) = (self.alg.0.dk, self.alg.0.dl);
        let mut out = base.zero();
        for k in 0..self.alg.nil_index() {
            for j in 0..dl {
                for i in 0..dk {
                    let v = &acc.c[(k * dl + j) * dk + i];
                    if j == 0 {
                        out.c[k * dk + i] = v.clone();
                    } else {
                        debug_assert!(self.pf().is_zero(v), "norm left the base field");
                    }
                }
            }
        }
        Ok(out)
    }

    /// `exp(x) = sum x^k / k!`, a finite sum because `x` is nilpotent.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if self.alg.characteristic() != 0 {
            return Err(Error::CharNotZero);
        }
        if self.is_unit() {
            return Err(Error::NotNilpotent);
        }
        let pf = self.pf();
        let mut term = self.alg.one();
        let mut sum = self.alg.one();
        for k in 1..self.alg.nil_index() {
            term = (&term * self).scale(&pf.inv(&pf.from_i64(k as i64)).unwrap());
            sum = &sum + &term;
        }
        Ok(sum)
    }

    /// `log(u) = sum (-1)^{k+1} (u-1)^k / k` for `u` in `1 + nilradical`.
    pub fn log_unipotent(&self) -> Result<Self> {
        if self.alg.characteristic() != 0 {
            return Err(Error::CharNotZero);
        }
        let x = self - &self.alg.one();
        if x.is_unit() {
            return Err(Error::NotNilpotent);
        }
        let pf = self.pf();
        let mut pow = self.alg.one();
        let mut sum = self.alg.zero();
        for k in 1..self.alg.nil_index() {
            pow = &pow * &x;
            let mut c = pf.inv(&pf.from_i64(k as i64)).unwrap();
            if k % 2 == 0 {
                c = pf.neg(&c);
            }
            sum = &sum + &pow.scale(&c);
        }
        Ok(sum)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<F: PrimeField> std::ops::$tr<&RingElement<F>> for &RingElement<F> {
            type Output = RingElement<F>;
            /// Panics on operands from different algebras.
            fn $m(self, rhs: &RingElement<F>) -> RingElement<F> {
                self.$checked(rhs).expect("operands from different algebras")
            }
        }
        impl<F: PrimeField> std::ops::$tr<RingElement<F>> for RingElement<F> {
            type Output = RingElement<F>;
            fn $m(self, rhs: RingElement<F>) -> RingElement<F> {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<F: PrimeField> std::ops::Neg for &RingElement<F> {
    type Output = RingElement<F>;
    fn neg(self) -> RingElement<F> {
        RingElement::neg(self)
    }
}

impl<F: PrimeField> fmt::Debug for RingElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as a sum of monomials in `x`, `y`, `e`, e.g. `1+2e` or `x+2y*e^2`.
/// The output re-parses to the same element.
impl<F: PrimeField> fmt::Display for RingElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pf = self.pf();
        let (dk, dl) = (self.alg.0.dk, self.alg.0.dl);
        let mut out = String::new();
        for k in 0..self.alg.nil_index() {
            for j in 0..dl {
                for i in 0..dk {
                    let v = &self.c[(k * dl + j) * dk + i];
                    if pf.is_zero(v) {
                        continue;
                    }
                    let mut mono = Vec::new();
                    for (var, pw) in [("x", i), ("y", j), ("e", k)] {
                        match pw {
                            0 => {}
                            1 => mono.push(var.to_string()),
                            _ => mono.push(format!("{var}^{pw}")),
                        }
                    }
                    let mono = mono.join("*");
                    let coef = pf.render(v);
                    let term = if mono.is_empty() {
                        coef
                    } else if coef == "1" {
                        mono
                    } else if coef == "-1" {
                        format!("-{mono}")
                    } else if coef.contains('/') {
                        format!("{coef}*{mono}")
                    } else {
                        format!("{coef}{mono}")
                    };
                    if !out.is_empty() && !term.starts_with('-') {
                        out.push('+');
                    }
                    out.push_str(&term);
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ModP, Rationals};

    fn fp(p: u64, d: usize, nil: usize) -> Algebra<ModP> {
        Algebra::new(FieldDescriptor::galois(p, d).unwrap(), nil).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let f5 = fp(5, 1, 1);
        assert_eq!(f5.from_i64(2).inverse().unwrap(), f5.from_i64(3));
        let a = fp(3, 1, 2);
        let e = a.gen_eps().unwrap();
        assert_eq!((&a.one() + &e).inverse().unwrap(), &a.one() - &e);
        assert!(!e.is_unit());
        assert_eq!(e.nilindex(), Some(2));
        assert!(matches!(e.inverse(), Err(Error::NotAUnit)));
        assert!(matches!(e.checked_mul(&f5.one()), Err(Error::AlgebraMismatch)));
    }

    #[test]
    fn norm_examples() {
        let f3 = fp(3, 1, 1);
        let f9 = f3.extend(&Polynomial::new(&f3, vec![f3.one(), f3.zero(), f3.one()])).unwrap();
        let y = f9.gen_y().unwrap();
        assert_eq!(y.norm().unwrap().to_string(), "1");
        assert_eq!((&y + &f9.one()).norm().unwrap().to_string(), "2");
        assert!(f9.one().norm().unwrap().is_one());
        assert!(matches!(fp(3, 1, 1).one().norm(), Err(Error::NoExtension)));
    }

    #[test]
    fn unit_group_orders() {
        assert_eq!(fp(5, 1, 1).unit_group_order().unwrap(), BigUint::from(4u32));
        assert_eq!(fp(5, 1, 2).unit_group_order().unwrap(), BigUint::from(20u32));
        assert_eq!(fp(3, 2, 1).unit_group_order().unwrap(), BigUint::from(8u32));
        let q = Algebra::new(FieldDescriptor::<Rationals>::rationals(), 2).unwrap();
        assert!(matches!(q.unit_group_order(), Err(Error::NotFinite)));
    }

    #[test]
    fn exp_log_examples() {
        let q = Algebra::new(FieldDescriptor::<Rationals>::rationals(), 3).unwrap();
        let e = q.gen_eps().unwrap();
        assert_eq!(e.exp_nilpotent().unwrap().to_string(), "1+e+1/2*e^2");
        assert!(q.zero().exp_nilpotent().unwrap().is_one());
        let x = &e + &(&e * &e);
        assert_eq!(x.exp_nilpotent().unwrap().log_unipotent().unwrap(), x);
        assert!(matches!(fp(3, 1, 2).gen_eps().unwrap().exp_nilpotent(), Err(Error::CharNotZero)));
        assert!(matches!(q.one().exp_nilpotent(), Err(Error::NotNilpotent)));
    }

    #[test]
    fn table_product_matches_tower_product() {
        let a = fp(3, 2, 2).extend_by_degree(2).unwrap();
        let mut rng = crate::random::rng(3);
        for _ in 0..200 {
            let (x, y) = (a.random(&mut rng), a.random(&mut rng));
            let bl = a.block();
            let tower = a.l_mul(&x.c[..bl], &y.c[..bl]);
            let mut acc = vec![0; bl];
            a.l_mul_acc(&mut acc, &x.c[..bl], &y.c[..bl]);
            assert_eq!(acc, tower);
        }
    }
}
