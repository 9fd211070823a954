//! Seeded property suites: each draws random inputs and checks one family
//! of identities, counting failures instead of stopping at the first.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::algebra::Algebra;
use crate::curve::reciprocity_product;
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::laurent::{cc_decompose, cc_recompose, cc_recompose_exact, required_precision, CCDecomposition, LaurentSeries};
use crate::random;
use crate::scalar::{ModP, PrimeField, Rationals};
use crate::symbols::{cc_symbol, cc_symbol_residue, heisenberg_commutator, Character, HeisenbergElement};
use crate::witt::{
    bigwitt_to_series, bigwitt_to_witt, cocycle_f, series_to_bigwitt, witt_add, witt_neg, witt_series_bridge,
    witt_to_bigwitt, BigWittVector, WittVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Witt,
    Decompose,
    Axioms,
    ResidueVsProduct,
    Reciprocity,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Witt, Suite::Decompose, Suite::Axioms, Suite::ResidueVsProduct, Suite::Reciprocity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Witt => "witt",
            Suite::Decompose => "decompose",
            Suite::Axioms => "axioms",
            Suite::ResidueVsProduct => "residue-vs-product",
            Suite::Reciprocity => "reciprocity",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown suite '{s}'")))
    }
}

/// Outcome of a suite run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// Record a failed computation as a failed check.
    pub fn check_result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.cases += other.cases;
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} cases, {} checks, {} failed", self.cases, self.checks, self.failures.len())
    }
}

pub fn run(suite: Suite, seed: u64, cases: usize) -> Report {
    match suite {
        Suite::Witt => witt_suite(seed, cases),
        Suite::Decompose => decompose_suite(seed, cases),
        Suite::Axioms => axioms_suite(seed, cases),
        Suite::ResidueVsProduct => residue_suite(seed, cases),
        Suite::Reciprocity => reciprocity_suite(seed, cases),
    }
}

pub fn fp_algebra(q: u64, nil: usize) -> Algebra<ModP> {
    let (p, d) = prime_power(q).expect("prime power");
    Algebra::new(FieldDescriptor::galois(p, d).expect("valid field"), nil).expect("valid algebra")
}

pub fn q_algebra(nil: usize) -> Algebra<Rationals> {
    Algebra::new(FieldDescriptor::rationals(), nil).expect("valid algebra")
}

/// `q = p^d` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    let p = (2..=q).find(|&p| q.is_multiple_of(p))?;
    let mut r = q;
    let mut d = 0;
    while r.is_multiple_of(p) {
        r /= p;
        d += 1;
    }
    (r == 1).then_some((p, d))
}

fn witt_vec<F: PrimeField, R: Rng>(alg: &Algebra<F>, n: usize, rng: &mut R) -> WittVector<F> {
    WittVector::new((0..n).map(|_| alg.random(rng)).collect()).expect("nonempty")
}

/// Group law, cocycle identity and the bridges among the three
/// presentations, over `F_5[e]/(e^2)` with lengths up to 5.
pub fn witt_suite(seed: u64, cases: usize) -> Report {
    let alg = fp_algebra(5, 2);
    let mut rng = random::rng(seed);
    let mut rep = Report::default();
    for _ in 0..cases {
        let n = rng.gen_range(1..=5);
        let (x, y, z) = (witt_vec(&alg, n, &mut rng), witt_vec(&alg, n, &mut rng), witt_vec(&alg, n, &mut rng));
        rep.cases += 1;
        check_witt_triple(&mut rep, &x, &y, &z);
    }
    rep
}

/// Every identity the witt suite checks, for one triple.
pub fn check_witt_triple<F: PrimeField>(rep: &mut Report, x: &WittVector<F>, y: &WittVector<F>, z: &WittVector<F>) {
    let add = |a: &WittVector<F>, b: &WittVector<F>| witt_add(a, b).expect("equal lengths");
    let show = || format!("x={:?} y={:?} z={:?}", x.coords(), y.coords(), z.coords());
    let n = x.len();
    let zero = WittVector::zero(x.algebra(), n);
    rep.check(add(&add(x, y), z) == add(x, &add(y, z)), || format!("associativity {}", show()));
    rep.check(add(x, y) == add(y, x), || format!("commutativity {}", show()));
    rep.check(add(x, &zero) == *x, || format!("identity {}", show()));
    rep.check(add(x, &witt_neg(x)).is_zero(), || format!("inverse {}", show()));
    let bridged = witt_series_bridge(&add(x, y));
    let product = witt_series_bridge(x).mul(&witt_series_bridge(y)).expect("same truncation");
    rep.check(bridged == product, || format!("bridge homomorphism {}", show()));
    let big = BigWittVector::new(x.coords().to_vec()).expect("nonempty");
    rep.check(bigwitt_to_series(&big) == witt_series_bridge(&bigwitt_to_witt(&big)), || format!("triangle {}", show()));
    rep.check(witt_to_bigwitt(&bigwitt_to_witt(&big)) == big, || format!("big Witt round trip {}", show()));
    rep.check(series_to_bigwitt(&bigwitt_to_series(&big)) == big, || format!("series round trip {}", show()));
    let h = n + 1;
    if h <= 5 {
        let f = |a: &WittVector<F>, b: &WittVector<F>| cocycle_f(h, a, b).expect("length h - 1");
        let lhs = &(&(&f(y, z) - &f(&add(x, y), z)) + &f(x, &add(y, z))) - &f(x, y);
        rep.check(lhs.is_zero(), || format!("cocycle f_{h} {}", show()));
    }
}

/// Random decomposition data over `F_5[e]/(e^3)` recomposes to a unit that
/// decomposes back to the same data; random units with support in
/// `[-3, 6]` recompose from their decomposition on the determined range.
pub fn decompose_suite(seed: u64, cases: usize) -> Report {
    let alg = fp_algebra(5, 3);
    let mut rng = random::rng(seed);
    let mut rep = Report::default();
    for _ in 0..cases {
        rep.cases += 1;
        let d = random_decomposition(&alg, 3, 4, &mut rng);
        let u = cc_recompose_exact(&d);
        let back = cc_decompose(&u);
        rep.check_result(back.map(|b| b == d && b.pos_known.is_none()), || format!("data round trip {d:?}"));

        let u = random::laurent_unit(&alg, -3, 6, &mut rng);
        rep.check_result(recomposes(&u), || format!("series round trip {u}"));
    }
    rep
}

/// `n` in `[-2, 2]`, a unit `lambda`, up to `neg_len` nilpotent negative
/// factors and `pos_len` arbitrary positive ones.
pub fn random_decomposition<F: PrimeField, R: Rng>(
    alg: &Algebra<F>,
    neg_len: usize,
    pos_len: usize,
    rng: &mut R,
) -> CCDecomposition<F> {
    let n = rng.gen_range(-2..=2);
    let neg = (0..neg_len).map(|_| alg.random_nilpotent(rng)).collect();
    let pos = (0..pos_len).map(|_| alg.random(rng)).collect();
    CCDecomposition::new(n, alg.random_unit(rng), neg, pos).expect("well-formed data")
}

/// The decomposition of `u` multiplies back to `u` wherever it is determined.
pub fn recomposes<F: PrimeField>(u: &LaurentSeries<F>) -> Result<bool> {
    let d = cc_decompose(u)?;
    Ok(match d.pos_known {
        None => cc_recompose_exact(&d) == *u,
        Some(k) => cc_recompose(&d, k as i64 + 1).agrees_with(u),
    })
}

/// The symbol's defining properties over `F_5[e]/(e^2)` and
/// `F_9 ⊗ F_3[e]/(e^2)`, half the cases each.
pub fn axioms_suite(seed: u64, cases: usize) -> Report {
    let f5 = fp_algebra(5, 2);
    let f9 = fp_algebra(3, 2).extend_by_degree(2).expect("F_9 over F_3");
    let mut rng = random::rng(seed);
    let mut rep = Report::default();
    for i in 0..cases {
        let alg = if i % 2 == 0 { &f5 } else { &f9 };
        rep.cases += 1;
        let mut draw = || random::sparse_laurent_unit(alg, -2, 2, 3, &mut rng);
        let (f, f2, g, g2) = (draw(), draw(), draw(), draw());
        check_axioms(&mut rep, &f, &f2, &g, &g2);
    }
    rep
}

fn is_one<F: PrimeField>(u: &LaurentSeries<F>, w: &LaurentSeries<F>) -> Result<bool> {
    Ok(cc_symbol(u, w)?.is_one())
}

/// Bimultiplicativity, `(f, -f) = 1`, antisymmetry, Steinberg and the
/// Heisenberg commutator at valuation zero.
pub fn check_axioms<F: PrimeField>(
    rep: &mut Report,
    f: &LaurentSeries<F>,
    f2: &LaurentSeries<F>,
    g: &LaurentSeries<F>,
    g2: &LaurentSeries<F>,
) {
    let s = |u: &LaurentSeries<F>, w: &LaurentSeries<F>| cc_symbol(u, w).map(|x| x.value);
    let show = || format!("f={f} f2={f2} g={g} g2={g2}");
    rep.check_result(
        (|| Ok(s(&(f * f2), g)? == &s(f, g)? * &s(f2, g)?))(),
        || format!("left multiplicativity {}", show()),
    );
    rep.check_result(
        (|| Ok(s(f, &(g * g2))? == &s(f, g)? * &s(f, g2)?))(),
        || format!("right multiplicativity {}", show()),
    );
    rep.check_result(is_one(f, &f.neg()), || format!("(f,-f) {}", show()));
    rep.check_result((|| Ok((&s(f, g)? * &s(g, f)?).is_one()))(), || format!("antisymmetry {}", show()));
    let one_minus = &LaurentSeries::one(f.algebra()) - f;
    if one_minus.is_unit() {
        rep.check_result(is_one(f, &one_minus), || format!("Steinberg {}", show()));
    }
    let f0 = f.shift(-f.valuation().unwrap_or(0));
    rep.check_result(commutator_agrees(&f0, g), || format!("commutator f0={f0} g={g}"));
}

/// At `v(u) = 0` the commutator of the Heisenberg lifts is the symbol.
pub fn commutator_agrees<F: PrimeField>(u: &LaurentSeries<F>, w: &LaurentSeries<F>) -> Result<bool> {
    let p = 2 * required_precision(u, w)?;
    let x = HeisenbergElement::from_unit(u, p)?;
    let y = HeisenbergElement::from_unit(w, p)?;
    Ok(heisenberg_commutator(&x, &y)? == cc_symbol(u, w)?)
}

/// Closed product formula against the residue formula over `Q[e]/(e^3)`.
pub fn residue_suite(seed: u64, cases: usize) -> Report {
    let alg = q_algebra(3);
    let mut rng = random::rng(seed);
    let mut rep = Report::default();
    for _ in 0..cases {
        rep.cases += 1;
        let u = random::sparse_laurent_unit(&alg, -2, 2, 3, &mut rng);
        let w = random::sparse_laurent_unit(&alg, -2, 2, 3, &mut rng);
        rep.check_result((|| Ok(cc_symbol(&u, &w)? == cc_symbol_residue(&u, &w)?))(), || format!("u={u} w={w}"));
    }
    rep
}

/// The configurations of the reciprocity suite: `(q, nil index)`.
pub const RECIPROCITY_CONFIGS: [(u64, usize); 12] =
    [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3), (7, 1), (7, 2), (7, 3), (9, 1), (9, 2), (9, 3)];

/// Product of local symbols over `P^1` is 1, cycling through
/// [`RECIPROCITY_CONFIGS`] with degrees up to 6.
pub fn reciprocity_suite(seed: u64, cases: usize) -> Report {
    let mut rng = random::rng(seed);
    let algs: Vec<_> = RECIPROCITY_CONFIGS.iter().map(|&(q, e)| fp_algebra(q, e)).collect();
    let mut rep = Report::default();
    for i in 0..cases {
        rep.merge(reciprocity_case(&algs[i % algs.len()], 6, &mut rng).0);
    }
    rep
}

/// One random pair; also reports whether the support had a point of degree
/// at least 2.
pub fn reciprocity_case<F: PrimeField, R: Rng>(alg: &Algebra<F>, deg: usize, rng: &mut R) -> (Report, bool) {
    let f = random::rational_unit(alg, deg, rng);
    let g = random::rational_unit(alg, deg, rng);
    let mut rep = Report { cases: 1, ..Report::default() };
    let mut wide = false;
    match reciprocity_product(&f, &g, &Character::identity()) {
        Ok((prod, locals)) => {
            wide = locals.iter().any(|(p, _)| p.degree() >= 2);
            rep.check(prod.is_one(), || {
                let rows: Vec<String> = locals.iter().map(|(p, s)| format!("{p}:{s}")).collect();
                format!("over {alg}: f={f} g={g} locals [{}] product {prod}", rows.join(", "))
            });
        }
        Err(e) => rep.check(false, || format!("over {alg}: f={f} g={g}: {e}")),
    }
    (rep, wide)
}
