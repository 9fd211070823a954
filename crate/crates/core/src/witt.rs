//! Three presentations of the unipotent group `1 + tA[t] mod t^{n+1}`.
//!
//! * [`WittVector`]: `A^n` with `c_i = a_i + b_i + sum_{h+k=i} a_h b_k`.
//! * [`TruncUnitSeries`]: `1 + a_1 t + ... + a_n t^n` under multiplication.
//! * [`BigWittVector`]: coordinates of `prod (1 - a_i t^i)`.

use crate::algebra::{Algebra, RingElement};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::PrimeField;

fn check_coords<F: PrimeField>(coords: &[RingElement<F>]) -> Result<Algebra<F>> {
    let first = coords.first().ok_or_else(|| Error::Mismatch("length must be at least 1".into()))?;
    let alg = first.algebra().clone();
    if coords.iter().any(|c| *c.algebra() != alg) {
        return Err(Error::AlgebraMismatch);
    }
    Ok(alg)
}

fn check_pair<F: PrimeField>(a: &[RingElement<F>], b: &[RingElement<F>]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Mismatch(format!("lengths {} and {}", a.len(), b.len())));
    }
    if a[0].algebra() != b[0].algebra() {
        return Err(Error::Mismatch("different coefficient algebras".into()));
    }
    Ok(())
}

macro_rules! coord_type {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq, Eq)]
        pub struct $name<F: PrimeField> {
            coords: Vec<RingElement<F>>,
        }

        impl<F: PrimeField> $name<F> {
            pub fn new(coords: Vec<RingElement<F>>) -> Result<Self> {
                check_coords(&coords)?;
                Ok($name { coords })
            }

            pub fn zero(alg: &Algebra<F>, n: usize) -> Self {
                assert!(n >= 1, "length must be at least 1");
                $name { coords: vec![alg.zero(); n] }
            }

            pub fn from_i64(alg: &Algebra<F>, v: &[i64]) -> Result<Self> {
                Self::new(v.iter().map(|&c| alg.from_i64(c)).collect())
            }

            pub fn len(&self) -> usize {
                self.coords.len()
            }

            pub fn is_empty(&self) -> bool {
                false
            }

            pub fn coords(&self) -> &[RingElement<F>] {
                &self.coords
            }

            pub fn algebra(&self) -> &Algebra<F> {
                self.coords[0].algebra()
            }

            pub fn is_zero(&self) -> bool {
                self.coords.iter().all(|c| c.is_zero())
            }
        }
    };
}

coord_type!(WittVector);
coord_type!(BigWittVector);
coord_type!(TruncUnitSeries);

impl<F: PrimeField> TruncUnitSeries<F> {
    /// The series `1`.
    pub fn one(alg: &Algebra<F>, n: usize) -> Self {
        Self::zero(alg, n)
    }

    pub fn is_one(&self) -> bool {
        self.is_zero()
    }

    /// Coefficient of `t^i`, `0 <= i <= n`.
    pub fn coeff(&self, i: usize) -> RingElement<F> {
        if i == 0 {
            self.algebra().one()
        } else {
            self.coords[i - 1].clone()
        }
    }

    /// `1 + sum a_i t^i` as a polynomial in `t`.
    pub fn to_polynomial(&self) -> Polynomial<F> {
        Polynomial::new(self.algebra(), (0..=self.len()).map(|i| self.coeff(i)).collect())
    }

    /// Product modulo `t^{n+1}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_pair(&self.coords, &other.coords)?;
        let n = self.len();
        let coords = (1..=n)
            .map(|i| {
                let mut acc = self.algebra().zero();
                for h in 0..=i {
                    acc = &acc + &(&self.coeff(h) * &other.coeff(i - h));
                }
                acc
            })
            .collect();
        Ok(TruncUnitSeries { coords })
    }

    /// Inverse modulo `t^{n+1}`: `b_i = -sum_{h=1}^{i} a_h b_{i-h}`.
    pub fn inverse(&self) -> Self {
        let n = self.len();
        let mut b = vec![self.algebra().one()];
        for i in 1..=n {
            let mut acc = self.algebra().zero();
            for h in 1..=i {
                acc = &acc - &(&self.coords[h - 1] * &b[i - h]);
            }
            b.push(acc);
        }
        b.remove(0);
        TruncUnitSeries { coords: b }
    }

    /// Multiply by `(1 - a t^i)^{-1} = sum_k a^k t^{ik}`.
    fn div_factor(&self, a: &RingElement<F>, i: usize) -> Self {
        let n = self.len();
        let mut geo = vec![self.algebra().zero(); n];
        let mut pw = a.clone();
        let mut k = i;
        while k <= n && !pw.is_zero() {
            geo[k - 1] = pw.clone();
            pw = &pw * a;
            k += i;
        }
        self.mul(&TruncUnitSeries { coords: geo }).expect("same shape")
    }
}

pub fn witt_add<F: PrimeField>(x: &WittVector<F>, y: &WittVector<F>) -> Result<WittVector<F>> {
    check_pair(&x.coords, &y.coords)?;
    let coords = (1..=x.len())
        .map(|i| {
            let mut c = &x.coords[i - 1] + &y.coords[i - 1];
            for h in 1..i {
                c = &c + &(&x.coords[h - 1] * &y.coords[i - h - 1]);
            }
            c
        })
        .collect();
    Ok(WittVector { coords })
}

/// Additive inverse for [`witt_add`].
pub fn witt_neg<F: PrimeField>(x: &WittVector<F>) -> WittVector<F> {
    series_to_witt(&witt_series_bridge(x).inverse())
}

/// `f_h(x, y) = sum_{i+j=h, i,j >= 1} x_i y_j` for vectors of length `h - 1`.
pub fn cocycle_f<F: PrimeField>(h: usize, x: &WittVector<F>, y: &WittVector<F>) -> Result<RingElement<F>> {
    if h < 2 {
        return Err(Error::BadIndex(format!("cocycle index {h} < 2")));
    }
    check_pair(&x.coords, &y.coords)?;
    if x.len() != h - 1 {
        return Err(Error::Mismatch(format!("f_{h} takes vectors of length {}, got {}", h - 1, x.len())));
    }
    let mut acc = x.algebra().zero();
    for i in 1..h {
        acc = &acc + &(&x.coords[i - 1] * &y.coords[h - i - 1]);
    }
    Ok(acc)
}

pub fn witt_series_bridge<F: PrimeField>(x: &WittVector<F>) -> TruncUnitSeries<F> {
    TruncUnitSeries { coords: x.coords.clone() }
}

pub fn series_to_witt<F: PrimeField>(s: &TruncUnitSeries<F>) -> WittVector<F> {
    WittVector { coords: s.coords.clone() }
}

/// `b_j = sum over sets {i_1 < ... < i_k} with sum j of (-1)^k a_{i_1} ... a_{i_k}`.
pub fn bigwitt_to_witt<F: PrimeField>(a: &BigWittVector<F>) -> WittVector<F> {
    let n = a.len();
    let alg = a.algebra().clone();
    let coords = (1..=n).map(|j| distinct_part_sum(&a.coords, j, 1, &alg.one(), &alg)).collect();
    WittVector { coords }
}

/// Sum of `(-1)^k prod a_i` over sets of indices `>= min` with sum `rest`,
/// each term multiplied by `acc`.
fn distinct_part_sum<F: PrimeField>(
    a: &[RingElement<F>],
    rest: usize,
    min: usize,
    acc: &RingElement<F>,
    alg: &Algebra<F>,
) -> RingElement<F> {
    if rest == 0 {
        return acc.clone();
    }
    let mut total = alg.zero();
    for i in min..=rest {
        if a[i - 1].is_zero() {
            continue;
        }
        let next = -&(acc * &a[i - 1]);
        total = &total + &distinct_part_sum(a, rest - i, i + 1, &next, alg);
    }
    total
}

/// `prod_{i=1}^{n} (1 - a_i t^i) mod t^{n+1}`.
pub fn bigwitt_to_series<F: PrimeField>(a: &BigWittVector<F>) -> TruncUnitSeries<F> {
    let n = a.len();
    let alg = a.algebra();
    let mut acc = TruncUnitSeries::one(alg, n);
    for (i, ai) in a.coords.iter().enumerate() {
        let mut f = vec![alg.zero(); n];
        f[i] = -ai;
        acc = acc.mul(&TruncUnitSeries { coords: f }).expect("same shape");
    }
    acc
}

/// Inverse of [`bigwitt_to_series`]: peel off `(1 - a_i t^i)` in ascending `i`.
pub fn series_to_bigwitt<F: PrimeField>(s: &TruncUnitSeries<F>) -> BigWittVector<F> {
    let mut rest = s.clone();
    let mut out = Vec::with_capacity(s.len());
    for i in 1..=s.len() {
        let a = -&rest.coeff(i);
        if !a.is_zero() {
            rest = rest.div_factor(&a, i);
        }
        out.push(a);
    }
    BigWittVector { coords: out }
}

pub fn witt_to_bigwitt<F: PrimeField>(x: &WittVector<F>) -> BigWittVector<F> {
    series_to_bigwitt(&witt_series_bridge(x))
}

/// Big-Witt addition, transported from series multiplication.
pub fn bigwitt_add<F: PrimeField>(a: &BigWittVector<F>, b: &BigWittVector<F>) -> Result<BigWittVector<F>> {
    check_pair(&a.coords, &b.coords)?;
    Ok(series_to_bigwitt(&bigwitt_to_series(a).mul(&bigwitt_to_series(b))?))
}

/// The class of a unit `u` of `B[tau]/(tau^n)` modulo constants, as a Witt
/// vector of length `n - 1`. Coefficients of `u` at `tau^n` and above are
/// ignored.
pub fn units_quotient_to_witt<F: PrimeField>(u: &Polynomial<F>, n: usize) -> Result<WittVector<F>> {
    if n < 2 {
        return Err(Error::BadIndex(format!("truncation order {n} < 2")));
    }
    let c0 = u.coeff(0).inverse()?;
    Ok(WittVector { coords: (1..n).map(|i| &u.coeff(i) * &c0).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::scalar::ModP;

    fn fp(p: u64) -> Algebra<ModP> {
        Algebra::new(FieldDescriptor::prime(p).unwrap(), 1).unwrap()
    }

    fn w(alg: &Algebra<ModP>, v: &[i64]) -> WittVector<ModP> {
        WittVector::from_i64(alg, v).unwrap()
    }

    #[test]
    fn add_examples() {
        let f3 = fp(3);
        assert_eq!(witt_add(&w(&f3, &[1, 0]), &w(&f3, &[1, 0])).unwrap(), w(&f3, &[2, 1]));
        let f2 = fp(2);
        assert_eq!(witt_add(&w(&f2, &[1, 1, 1]), &w(&f2, &[1, 1, 1])).unwrap(), w(&f2, &[0, 1, 0]));
        let x = w(&f3, &[2, 1]);
        assert_eq!(witt_add(&WittVector::zero(&f3, 2), &x).unwrap(), x);
    }

    #[test]
    fn add_rejects_shape_mismatch() {
        let f3 = fp(3);
        assert!(matches!(witt_add(&w(&f3, &[1]), &w(&f3, &[1, 0])), Err(Error::Mismatch(_))));
        let f5 = fp(5);
        assert!(matches!(witt_add(&w(&f3, &[1]), &w(&f5, &[1])), Err(Error::Mismatch(_))));
    }

    #[test]
    fn cocycle_examples() {
        let f5 = fp(5);
        assert_eq!(cocycle_f(2, &w(&f5, &[2]), &w(&f5, &[2])).unwrap(), f5.from_i64(4));
        let f3 = fp(3);
        assert_eq!(cocycle_f(3, &w(&f3, &[1, 1]), &w(&f3, &[1, 1])).unwrap(), f3.from_i64(2));
        assert!(cocycle_f(3, &w(&f3, &[1, 2]), &WittVector::zero(&f3, 2)).unwrap().is_zero());
        assert!(matches!(cocycle_f(1, &w(&f3, &[1]), &w(&f3, &[1])), Err(Error::BadIndex(_))));
    }

    #[test]
    fn bridge_examples() {
        let f3 = fp(3);
        let s = witt_series_bridge(&w(&f3, &[1, 2]));
        assert_eq!(s.to_polynomial().to_string(), "2*t^2+t+1");
        let x = w(&f3, &[1, 0]);
        let lhs = witt_series_bridge(&witt_add(&x, &x).unwrap());
        let rhs = witt_series_bridge(&x).mul(&witt_series_bridge(&x)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_polynomial().to_string(), "t^2+2*t+1");
        assert!(witt_series_bridge(&WittVector::zero(&f3, 3)).is_one());
    }

    #[test]
    fn bigwitt_examples() {
        let f7 = fp(7);
        let a = BigWittVector::from_i64(&f7, &[3, 5]).unwrap();
        assert_eq!(bigwitt_to_witt(&a), w(&f7, &[-3, -5]));
        assert_eq!(bigwitt_to_series(&a).coords(), w(&f7, &[-3, -5]).coords());
        let a3 = BigWittVector::from_i64(&f7, &[2, 3, 4]).unwrap();
        // b_3 = -a_3 + a_1 a_2
        assert_eq!(bigwitt_to_witt(&a3).coords()[2], f7.from_i64(-4 + 6));
        let f2 = fp(2);
        let s = bigwitt_to_series(&BigWittVector::from_i64(&f2, &[1, 1, 0]).unwrap());
        assert_eq!(s, TruncUnitSeries::from_i64(&f2, &[1, 1, 1]).unwrap());
        assert!(bigwitt_to_witt(&BigWittVector::zero(&f2, 3)).is_zero());
    }

    #[test]
    fn series_round_trip() {
        let f5 = fp(5);
        let s = TruncUnitSeries::from_i64(&f5, &[1, 4, 2, 3]).unwrap();
        assert_eq!(bigwitt_to_series(&series_to_bigwitt(&s)), s);
    }

    #[test]
    fn units_quotient_examples() {
        let f5 = fp(5);
        let u = Polynomial::new(&f5, vec![f5.from_i64(3), f5.from_i64(3)]);
        assert_eq!(units_quotient_to_witt(&u, 2).unwrap(), w(&f5, &[1]));
        let f3 = fp(3);
        let u = &Polynomial::new(&f3, vec![f3.one(), f3.one()]) * &Polynomial::new(&f3, vec![f3.one(), f3.zero(), f3.one()]);
        assert_eq!(units_quotient_to_witt(&u, 3).unwrap(), w(&f3, &[1, 1]));
        assert!(units_quotient_to_witt(&Polynomial::one(&f3), 4).unwrap().is_zero());
        let nonunit = Polynomial::var(&f3);
        assert_eq!(units_quotient_to_witt(&nonunit, 3).unwrap_err(), Error::NotAUnit);
    }
}
