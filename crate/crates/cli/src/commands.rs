//! One function per subcommand; each returns the text report, its JSON
//! form and the exit status.

use std::fmt::Write as _;

use serde::Serialize;

use locsym::curve::local_symbol_with_precision;
use locsym::symbols::{decompose_pair, hilbert_character};
use locsym::verify::{self, Suite};
use locsym::witt::{witt_add as add_vectors, witt_series_bridge};
use locsym::{
    cc_decompose, hilbert_symbol, phi_symbol, required_precision, support, Algebra, CCDecomposition, Character,
    Error, PrimeField, Result, RingElement, WittVector,
};

use crate::parse::{parse_function, parse_series, parse_vector};

#[derive(Serialize, Debug, Default)]
pub struct Json {
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decompositions: Option<Vec<DecompositionJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<String>,
    pub precision: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteJson>,
}

#[derive(Serialize, Debug)]
pub struct DecompositionJson {
    pub n: i64,
    pub lambda: String,
    pub neg: Vec<String>,
    pub pos: Vec<String>,
    /// Index of the last determined positive factor; absent when all later
    /// factors vanish.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pos_known: Option<usize>,
}

#[derive(Serialize, Debug)]
pub struct PointJson {
    pub point: String,
    pub degree: usize,
    pub local: String,
}

#[derive(Serialize, Debug)]
pub struct SuiteJson {
    pub name: String,
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

pub struct Outcome {
    pub text: String,
    pub json: Json,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String, json: Json) -> Self {
        Outcome { text, json, code: 0 }
    }
}

fn strings<F: PrimeField>(v: &[RingElement<F>]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn decomposition_json<F: PrimeField>(d: &CCDecomposition<F>) -> DecompositionJson {
    DecompositionJson {
        n: d.n,
        lambda: d.lambda.to_string(),
        neg: strings(&d.neg),
        pos: strings(&d.pos),
        pos_known: d.pos_known,
    }
}

fn describe<F: PrimeField>(d: &CCDecomposition<F>) -> String {
    let tail = match d.pos_known {
        None => String::new(),
        Some(k) => format!(" (determined through a_{k})"),
    };
    format!(
        "n={} lambda={} neg=[{}] pos=[{}]{tail}",
        d.n,
        d.lambda,
        strings(&d.neg).join(", "),
        strings(&d.pos).join(", ")
    )
}

fn character(n: Option<i64>) -> Character {
    n.map_or_else(Character::identity, Character::new)
}

pub fn symbol<F: PrimeField>(
    alg: &Algebra<F>,
    u: &str,
    w: &str,
    chr: Option<i64>,
    deg: usize,
    prec: i64,
) -> Result<Outcome> {
    let alg = if deg > 1 { alg.extend_by_degree(deg)? } else { alg.clone() };
    let u = parse_series(&alg, u, prec)?;
    let w = parse_series(&alg, w, prec)?;
    let p = required_precision(&u, &w)?;
    // exact inputs are shown through their own decomposition, not the
    // truncation the symbol works at
    let (du, dw) = match (u.is_exact(), w.is_exact()) {
        (true, true) => (cc_decompose(&u)?, cc_decompose(&w)?),
        _ => decompose_pair(&u, &w)?,
    };
    let value = phi_symbol(&u, &w, &character(chr), deg)?.value;
    let text = format!("value: {value}\nprecision: {p}\nu: {}\nw: {}\n", describe(&du), describe(&dw));
    let json = Json {
        value: value.to_string(),
        decompositions: Some(vec![decomposition_json(&du), decomposition_json(&dw)]),
        precision: Some(p),
        ..Json::default()
    };
    Ok(Outcome::ok(text, json))
}

pub fn hilbert<F: PrimeField>(alg: &Algebra<F>, u: &str, w: &str, m: u64, prec: i64) -> Result<Outcome> {
    let u = parse_series(alg, u, prec)?;
    let w = parse_series(alg, w, prec)?;
    let p = required_precision(&u, &w)?;
    let value = hilbert_symbol(&u, &w, m)?.value;
    let text = format!("value: {value} (in mu_{m})\nprecision: {p}\n");
    Ok(Outcome::ok(text, Json { value: value.to_string(), precision: Some(p), ..Json::default() }))
}

pub fn decompose<F: PrimeField>(alg: &Algebra<F>, u: &str, prec: i64) -> Result<Outcome> {
    let u = parse_series(alg, u, prec)?;
    let d = cc_decompose(&u)?;
    let text = format!("input: {u}\n{}\n", describe(&d));
    let json = Json {
        value: u.to_string(),
        decompositions: Some(vec![decomposition_json(&d)]),
        precision: u.precision(),
        ..Json::default()
    };
    Ok(Outcome::ok(text, json))
}

fn show_vector<F: PrimeField>(x: &WittVector<F>) -> String {
    format!("({})", strings(x.coords()).join(","))
}

pub fn witt_add<F: PrimeField>(alg: &Algebra<F>, x: &str, y: &str) -> Result<Outcome> {
    let x = WittVector::new(parse_vector(alg, x)?)?;
    let y = WittVector::new(parse_vector(alg, y)?)?;
    let s = add_vectors(&x, &y)?;
    let value = show_vector(&s);
    let json = Json { value: value.clone(), precision: Some(s.len() as i64), ..Json::default() };
    Ok(Outcome::ok(format!("{value}\n"), json))
}

pub fn witt_bridge<F: PrimeField>(alg: &Algebra<F>, x: &str) -> Result<Outcome> {
    let x = WittVector::new(parse_vector(alg, x)?)?;
    let value = witt_series_bridge(&x).to_polynomial().to_string();
    let json = Json { value: value.clone(), precision: Some(x.len() as i64), ..Json::default() };
    Ok(Outcome::ok(format!("{value}\n"), json))
}

/// `f(item)` for every item, over `jobs` scoped threads, in input order.
fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker thread panicked")).collect()
    })
}

pub fn reciprocity<F: PrimeField>(
    alg: &Algebra<F>,
    f: &str,
    g: &str,
    m: Option<u64>,
    chr: Option<i64>,
    jobs: usize,
) -> Result<Outcome> {
    let f = parse_function(alg, f)?;
    let g = parse_function(alg, g)?;
    let phi = match m {
        Some(m) => hilbert_character(alg, m)?,
        None => character(chr),
    };
    let points = support(&f, &g)?;
    let locals = par_map(&points, jobs, |p| local_symbol_with_precision(&f, &g, p, &phi))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut product = alg.one();
    let mut in_mu = true;
    let mut precision = 0;
    let mut rows = Vec::new();
    let mut text = String::new();
    if let Some(m) = m {
        writeln!(text, "values in mu_{m}").unwrap();
    }
    writeln!(text, "{:<16} {:>6}  local", "point", "degree").unwrap();
    for (p, (s, prec)) in points.iter().zip(&locals) {
        product = &product * &s.value;
        precision = precision.max(*prec);
        if let Some(m) = m {
            in_mu &= s.value.pow_big(&m.into()).is_one();
        }
        writeln!(text, "{:<16} {:>6}  {}", p.to_string(), p.degree(), s.value).unwrap();
        rows.push(PointJson { point: p.to_string(), degree: p.degree(), local: s.value.to_string() });
    }
    writeln!(text, "product: {product}").unwrap();
    let ok = product.is_one() && in_mu;
    if !in_mu {
        writeln!(text, "a local value is not an m-th root of unity").unwrap();
    }
    let json = Json {
        value: product.to_string(),
        points: Some(rows),
        product: Some(product.to_string()),
        precision: Some(precision),
        ..Json::default()
    };
    Ok(Outcome { text, json, code: if ok { 0 } else { 1 } })
}

pub fn verify(suite: &str, seed: u64, cases: usize) -> Result<Outcome> {
    let s: Suite = suite.parse().map_err(|_| Error::Parse { pos: 0, msg: format!("unknown suite '{suite}'") })?;
    let report = verify::run(s, seed, cases);
    let mut text = format!("{}: {report}\n", s.name());
    for f in &report.failures {
        writeln!(text, "FAIL {f}").unwrap();
    }
    let json = Json {
        value: if report.passed() { "pass" } else { "fail" }.to_string(),
        precision: None,
        seed: Some(seed),
        suite: Some(SuiteJson {
            name: s.name().to_string(),
            cases: report.cases,
            checks: report.checks,
            failures: report.failures.clone(),
        }),
        ..Json::default()
    };
    Ok(Outcome { text, json, code: if report.passed() { 0 } else { 1 } })
}
