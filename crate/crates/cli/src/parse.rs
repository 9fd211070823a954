//! Field descriptors and infix expressions.
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { [ "*" | "/" ] unary } ;
//! unary    = "-" unary | power ;
//! power    = atom [ "^" exponent ] ;
//! exponent = [ "-" ] integer | "(" [ "-" ] integer ")" ;
//! atom     = integer | "z" | "t" | "x" | "y" | "e" | "(" expr ")"
//!          | "O" "(" "z" "^" exponent ")" ;
//! ```
//!
//! Juxtaposition multiplies, so `2x*e` and `2(t+1)` are accepted. A series
//! may end in `@prec=N`, which expands quotients to and truncates at `O(z^N)`.

use num_bigint::BigInt;
use num_traits::One;

use locsym::verify::prime_power;
use locsym::{Algebra, Error, FieldDescriptor, LaurentSeries, ModP, Polynomial, PrimeField, RationalFunction, Rationals, Result, RingElement};

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(char, usize),
    /// `O(z^k)`.
    BigO(i64, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("decimal digits"))
    }

    fn small_integer(&mut self) -> Result<i64> {
        let at = self.pos;
        let n = self.integer()?;
        i64::try_from(n).or_else(|_| err(at, "exponent out of range"))
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        let k = self.small_integer()?;
        if paren {
            self.expect(b')')?;
        }
        Ok(if neg { -k } else { k })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'(' || b"ztxyeO".contains(&c))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
            } else if self.starts_atom() {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            return Ok(Expr::Pow(Box::new(base), self.exponent()?, at));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.integer()?)),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'O') => {
                self.pos += 1;
                self.expect(b'(')?;
                self.expect(b'z')?;
                self.expect(b'^')?;
                let k = self.exponent()?;
                self.expect(b')')?;
                Ok(Expr::BigO(k, at))
            }
            Some(c) if b"ztxye".contains(&c) => {
                self.pos += 1;
                Ok(Expr::Var(c as char, at))
            }
            Some(c) => err(at, format!("unexpected '{}'", c as char)),
            None => err(at, "unexpected end of input"),
        }
    }
}

/// Parse a whole expression.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src);
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return err(p.pos, format!("unexpected '{}'", c as char));
    }
    Ok(e)
}

/// Where expressions are evaluated.
trait Domain {
    type V: Clone;
    fn int(&self, n: &BigInt) -> Result<Self::V>;
    fn var(&self, c: char, pos: usize) -> Result<Self::V>;
    fn big_o(&self, _k: i64, pos: usize) -> Result<Self::V> {
        err(pos, "O(...) is only allowed in series")
    }
    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn neg(&self, a: Self::V) -> Self::V;
    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn div(&self, a: Self::V, b: Self::V, pos: usize) -> Result<Self::V>;
    fn pow(&self, a: Self::V, k: i64, pos: usize) -> Result<Self::V>;

    fn eval(&self, e: &Expr) -> Result<Self::V> {
        Ok(match e {
            Expr::Int(n) => self.int(n)?,
            Expr::Var(c, pos) => self.var(*c, *pos)?,
            Expr::BigO(k, pos) => self.big_o(*k, *pos)?,
            Expr::Neg(a) => self.neg(self.eval(a)?),
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?)?,
            Expr::Sub(a, b) => {
                let b = self.neg(self.eval(b)?);
                self.add(self.eval(a)?, b)?
            }
            Expr::Mul(a, b) => self.mul(self.eval(a)?, self.eval(b)?)?,
            Expr::Div(a, b, pos) => self.div(self.eval(a)?, self.eval(b)?, *pos)?,
            Expr::Pow(a, k, pos) => self.pow(self.eval(a)?, *k, *pos)?,
        })
    }
}

fn not_a_unit<T>(pos: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::NotAUnit => Error::NotAUnit,
        other => Error::Parse { pos, msg: other.to_string() },
    })
}

fn constant<F: PrimeField>(alg: &Algebra<F>, n: &BigInt) -> RingElement<F> {
    let v = alg.prime_field().from_ratio(n, &BigInt::one()).expect("denominator 1");
    alg.from_prime(v)
}

fn generator<F: PrimeField>(alg: &Algebra<F>, c: char, pos: usize) -> Result<RingElement<F>> {
    let g = match c {
        'x' => alg.gen_x(),
        'y' => alg.gen_y(),
        'e' => alg.gen_eps(),
        _ => return err(pos, format!("'{c}' is not allowed here")),
    };
    g.or_else(|_| err(pos, format!("'{c}' does not exist in {alg}")))
}

struct Elements<'a, F: PrimeField>(&'a Algebra<F>);

impl<F: PrimeField> Domain for Elements<'_, F> {
    type V = RingElement<F>;
    fn int(&self, n: &BigInt) -> Result<Self::V> {
        Ok(constant(self.0, n))
    }
    fn var(&self, c: char, pos: usize) -> Result<Self::V> {
        generator(self.0, c, pos)
    }
    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(&a + &b)
    }
    fn neg(&self, a: Self::V) -> Self::V {
        -&a
    }
    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(&a * &b)
    }
    fn div(&self, a: Self::V, b: Self::V, pos: usize) -> Result<Self::V> {
        Ok(&a * &not_a_unit(pos, b.inverse())?)
    }
    fn pow(&self, a: Self::V, k: i64, pos: usize) -> Result<Self::V> {
        not_a_unit(pos, a.pow(k))
    }
}

/// Laurent series in `z`; quotients are expanded to `prec` coefficients.
struct Series<'a, F: PrimeField> {
    alg: &'a Algebra<F>,
    prec: i64,
}

impl<F: PrimeField> Series<'_, F> {
    fn inverse(&self, b: &LaurentSeries<F>, pos: usize) -> Result<LaurentSeries<F>> {
        match b.inverse() {
            Err(Error::PrecisionTooLow(_)) => {
                let v = not_a_unit(pos, b.valuation())?;
                not_a_unit(pos, b.inverse_to(-v + self.prec))
            }
            r => not_a_unit(pos, r),
        }
    }
}

impl<F: PrimeField> Domain for Series<'_, F> {
    type V = LaurentSeries<F>;
    fn int(&self, n: &BigInt) -> Result<Self::V> {
        Ok(LaurentSeries::constant(constant(self.alg, n)))
    }
    fn var(&self, c: char, pos: usize) -> Result<Self::V> {
        if c == 'z' {
            return Ok(LaurentSeries::z(self.alg));
        }
        Ok(LaurentSeries::constant(generator(self.alg, c, pos)?))
    }
    fn big_o(&self, k: i64, _pos: usize) -> Result<Self::V> {
        Ok(LaurentSeries::zero(self.alg).truncate(k))
    }
    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(&a + &b)
    }
    fn neg(&self, a: Self::V) -> Self::V {
        a.neg()
    }
    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(&a * &b)
    }
    fn div(&self, a: Self::V, b: Self::V, pos: usize) -> Result<Self::V> {
        Ok(&a * &self.inverse(&b, pos)?)
    }
    fn pow(&self, a: Self::V, k: i64, pos: usize) -> Result<Self::V> {
        let base = if k < 0 { self.inverse(&a, pos)? } else { a };
        not_a_unit(pos, base.pow(k.abs()))
    }
}

/// Rational functions in `t` over `B`.
struct Functions<'a, F: PrimeField>(&'a Algebra<F>);

impl<F: PrimeField> Domain for Functions<'_, F> {
    type V = RationalFunction<F>;
    fn int(&self, n: &BigInt) -> Result<Self::V> {
        Ok(RationalFunction::constant(constant(self.0, n)).expect("denominator 1"))
    }
    fn var(&self, c: char, pos: usize) -> Result<Self::V> {
        if c == 't' {
            return RationalFunction::t(self.0);
        }
        RationalFunction::constant(generator(self.0, c, pos)?)
    }
    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        a.checked_add(&b)
    }
    fn neg(&self, a: Self::V) -> Self::V {
        a.neg()
    }
    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        a.checked_mul(&b)
    }
    fn div(&self, a: Self::V, b: Self::V, pos: usize) -> Result<Self::V> {
        a.checked_mul(&not_a_unit(pos, b.inverse())?)
    }
    fn pow(&self, a: Self::V, k: i64, pos: usize) -> Result<Self::V> {
        not_a_unit(pos, a.pow(k))
    }
}

/// Polynomials in `x` over the prime field, for field moduli.
struct Moduli<'a, F: PrimeField>(&'a Algebra<F>);

impl<F: PrimeField> Domain for Moduli<'_, F> {
    type V = Polynomial<F>;
    fn int(&self, n: &BigInt) -> Result<Self::V> {
        Ok(Polynomial::constant(constant(self.0, n)))
    }
    fn var(&self, c: char, pos: usize) -> Result<Self::V> {
        if c == 'x' {
            Ok(Polynomial::var(self.0))
        } else {
            err(pos, "a field modulus is a polynomial in x")
        }
    }
    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(&a + &b)
    }
    fn neg(&self, a: Self::V) -> Self::V {
        a.neg()
    }
    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(&a * &b)
    }
    fn div(&self, _a: Self::V, _b: Self::V, pos: usize) -> Result<Self::V> {
        err(pos, "division in a field modulus")
    }
    fn pow(&self, a: Self::V, k: i64, pos: usize) -> Result<Self::V> {
        match u32::try_from(k) {
            Ok(k) => Ok(a.pow(k)),
            Err(_) => err(pos, "negative power in a field modulus"),
        }
    }
}

/// Offset parse errors by `base` so they point into the enclosing input.
fn located<T>(base: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + base, msg },
        other => other,
    })
}

pub fn parse_element<F: PrimeField>(alg: &Algebra<F>, src: &str) -> Result<RingElement<F>> {
    Elements(alg).eval(&parse_expr(src)?)
}

pub fn parse_series<F: PrimeField>(alg: &Algebra<F>, src: &str, prec: i64) -> Result<LaurentSeries<F>> {
    let Some(at) = src.rfind('@') else {
        return Series { alg, prec }.eval(&parse_expr(src)?);
    };
    let n = src[at + 1..]
        .trim()
        .strip_prefix("prec")
        .and_then(|r| r.trim_start().strip_prefix('='))
        .and_then(|r| r.trim().parse::<i64>().ok());
    let Some(n) = n else {
        return err(at, "expected '@prec=<integer>'");
    };
    let u = Series { alg, prec: n }.eval(&parse_expr(&src[..at])?)?;
    Ok(u.truncate(n))
}

pub fn parse_function<F: PrimeField>(alg: &Algebra<F>, src: &str) -> Result<RationalFunction<F>> {
    Functions(alg).eval(&parse_expr(src)?)
}

/// A comma-separated list of elements, optionally in parentheses.
pub fn parse_vector<F: PrimeField>(alg: &Algebra<F>, src: &str) -> Result<Vec<RingElement<F>>> {
    let trimmed = src.trim();
    let (body, base) = match trimmed.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        Some(inner) => (inner, src.find('(').unwrap() + 1),
        None => (src, 0),
    };
    let mut out = Vec::new();
    let mut offset = base;
    for part in body.split(',') {
        out.push(located(offset, parse_element(alg, part))?);
        offset += part.len() + 1;
    }
    Ok(out)
}

/// An algebra over `F_q` or over `Q`.
#[derive(Clone, Debug)]
pub enum Context {
    Fp(Algebra<ModP>),
    Q(Algebra<Rationals>),
}

/// `F<q>`, `F<q>:<modulus in x>` or `Q`, optionally followed by `[e^n]`.
/// A separate `alg` descriptor `e^n` overrides the nilpotency index.
pub fn parse_context(field: &str, alg: Option<&str>) -> Result<Context> {
    let (field, mut nil) = match field.find('[') {
        Some(i) => {
            let inner = field[i + 1..].strip_suffix(']').map_or_else(|| err(field.len(), "expected ']'"), Ok)?;
            (&field[..i], located(i + 1, parse_nil(inner))?)
        }
        None => (field, 1),
    };
    if let Some(a) = alg {
        nil = parse_nil(a)?;
    }
    let field = field.trim();
    if field == "Q" {
        return Ok(Context::Q(Algebra::new(FieldDescriptor::rationals(), nil)?));
    }
    let Some(rest) = field.strip_prefix('F') else {
        return err(0, "expected F<q> or Q");
    };
    let (q_src, modulus) = match rest.split_once(':') {
        Some((q, m)) => (q, Some(m)),
        None => (rest, None),
    };
    let q: u64 = q_src.trim().parse().or_else(|_| err(1, "expected the field order"))?;
    let Some((p, d)) = prime_power(q) else {
        return err(1, format!("{q} is not a prime power"));
    };
    let desc = match modulus {
        None => FieldDescriptor::galois(p, d)?,
        Some(m) => {
            let prime = Algebra::new(FieldDescriptor::prime(p)?, 1)?;
            let poly = located(q_src.len() + 2, Moduli(&prime).eval(&parse_expr(m)?))?;
            if poly.degree() != Some(d) {
                return err(q_src.len() + 2, format!("modulus must have degree {d}"));
            }
            let coeffs = poly.monic()?.coeffs().iter().map(|c| c.coords()[0]).collect();
            FieldDescriptor::with_modulus(ModP::new(p).expect("prime"), coeffs)?
        }
    };
    Ok(Context::Fp(Algebra::new(desc, nil)?))
}

/// `e^n`, or `e` alone for `n = 1`.
fn parse_nil(src: &str) -> Result<usize> {
    let mut p = Parser::new(src);
    p.expect(b'e')?;
    let n = if p.eat(b'^') { p.small_integer()? } else { 1 };
    if p.peek().is_some() {
        return err(p.pos, "expected e^n");
    }
    if n < 1 {
        return err(0, "nilpotency index must be at least 1");
    }
    Ok(n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(field: &str) -> Algebra<ModP> {
        match parse_context(field, None).unwrap() {
            Context::Fp(a) => a,
            Context::Q(_) => panic!("expected a finite field"),
        }
    }

    #[test]
    fn precision_suffix() {
        let alg = Algebra::new(FieldDescriptor::prime(5).unwrap(), 1).unwrap();
        assert_eq!(parse_series(&alg, "1/(1-z) @prec=3", 16).unwrap().to_string(), "1+z+z^2+O(z^3)");
        assert_eq!(parse_series(&alg, "z^-1+1+2*z@prec=8", 16).unwrap().to_string(), "z^-1+1+2*z+O(z^8)");
        assert!(matches!(parse_series(&alg, "z@prc=2", 16), Err(Error::Parse { pos: 1, .. })));
    }

    #[test]
    fn contexts() {
        let a = fp("F9:x^2+1[e^2]");
        assert_eq!((a.characteristic(), a.base_degree(), a.nil_index()), (3, 2, 2));
        assert_eq!(fp("F5").nil_index(), 1);
        match parse_context("F5", Some("e^3")).unwrap() {
            Context::Fp(a) => assert_eq!(a.nil_index(), 3),
            _ => unreachable!(),
        }
        assert!(matches!(parse_context("Q[e^2]", None).unwrap(), Context::Q(_)));
        assert!(matches!(parse_context("F6", None), Err(Error::Parse { .. })));
        assert!(parse_context("F9:x^2+2x+2", None).is_ok());
        assert!(parse_context("F9:x^2+2", None).is_err());
    }

    #[test]
    fn elements_and_display_round_trip() {
        let a = fp("F3[e^2]");
        let v = parse_element(&a, "1 - e").unwrap();
        assert_eq!(v.to_string(), "1+2e");
        assert_eq!(parse_element(&a, &v.to_string()).unwrap(), v);
        assert_eq!(parse_element(&a, "2^-1").unwrap(), a.from_i64(2));
        assert_eq!(parse_element(&a, "e^2").unwrap(), a.zero());
        let k = fp("F9[e^2]");
        let w = parse_element(&k, "2x*e + x + 1").unwrap();
        assert_eq!(parse_element(&k, &w.to_string()).unwrap(), w);
    }

    #[test]
    fn rational_constants() {
        let Context::Q(q) = parse_context("Q[e^2]", None).unwrap() else { unreachable!() };
        let v = parse_element(&q, "-1/2*e").unwrap();
        assert_eq!(v.to_string(), "-1/2*e");
        assert_eq!(parse_element(&q, &v.to_string()).unwrap(), v);
    }

    #[test]
    fn series() {
        let a = fp("F3[e^2]");
        let u = parse_series(&a, "z + e", 8).unwrap();
        assert!(u.is_exact());
        assert_eq!(u.valuation().unwrap(), 1);
        let g = parse_series(&a, "1/(1-z)", 5).unwrap();
        assert_eq!(g.end(), Some(5));
        let s = parse_series(&a, "e*z^-1+1+2*z+O(z^4)", 8).unwrap();
        assert_eq!(s.to_string(), "e*z^-1+1+2*z+O(z^4)");
        assert_eq!(parse_series(&a, &s.to_string(), 8).unwrap(), s);
        assert!(!parse_series(&a, "e/z", 8).unwrap().is_unit());
        assert_eq!(parse_series(&a, "1/e", 8).unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn functions() {
        let a = fp("F3[e^2]");
        let f = parse_function(&a, "(t+e)/(1-t)").unwrap();
        assert!(f.is_unit());
        assert!(parse_function(&a, "1/t").is_ok());
        assert_eq!(parse_function(&a, "1/e").unwrap_err(), Error::NotAUnit);
        assert!(matches!(parse_function(&a, "z"), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn error_positions() {
        let a = fp("F5");
        assert_eq!(parse_element(&a, "1 + ").unwrap_err(), Error::Parse { pos: 4, msg: "unexpected end of input".into() });
        assert!(matches!(parse_element(&a, "1 + )"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_element(&a, "(1"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_series(&a, "z^", 4), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_element(&a, "x"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_vector(&a, "(1, ?)"), Err(Error::Parse { pos: 4, .. })));
    }

    #[test]
    fn vectors() {
        let a = fp("F3");
        assert_eq!(parse_vector(&a, "(1,0)").unwrap(), vec![a.one(), a.zero()]);
        assert_eq!(parse_vector(&a, "1, 2").unwrap(), vec![a.one(), a.from_i64(2)]);
    }

    #[test]
    fn implicit_multiplication() {
        let a = fp("F5");
        assert!(parse_function(&a, "2(t+1)").unwrap().same_function(&parse_function(&a, "2*t+2").unwrap()));
    }
}
