use std::process::{Command, Output};

use locsym_cli::parse::{parse_context, parse_element, parse_series, Context};
use serde_json::Value;

fn locsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locsym"))
        .args(args)
        .env_remove("LS_DEFAULT_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let o = locsym(&a);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json from {args:?}: {e}"))
}

fn value_line(o: &Output) -> String {
    stdout(o).lines().find_map(|l| l.strip_prefix("value: ").map(str::to_string)).expect("value line")
}

#[test]
fn symbol_examples() {
    let o = locsym(&["symbol", "--field", "F5", "z", "z"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value_line(&o), "4");

    let o = locsym(&["symbol", "--field", "F3", "--alg", "e^2", "z+e", "1-z"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value_line(&o), "1+2e");

    let o = locsym(&["symbol", "1", "z^3"]);
    assert_eq!(value_line(&o), "1");
}

#[test]
fn symbol_json_has_decompositions() {
    let v = json(&["symbol", "--field", "F3", "--alg", "e^2", "z+e", "1-z"]);
    assert_eq!(v["value"], "1+2e");
    let d = v["decompositions"].as_array().unwrap();
    assert_eq!(d.len(), 2);
    assert_eq!(d[0]["n"], 1);
    assert_eq!(d[0]["neg"][0], "2e");
    assert_eq!(d[1]["pos"][0], "1");
    assert!(v["precision"].as_i64().unwrap() > 0);
}

#[test]
fn golden_reciprocity_table() {
    let o = locsym(&["reciprocity", "--field", "F3", "--alg", "e^2", "t+e", "1-t"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&["reciprocity", "--field", "F3", "--alg", "e^2", "t+e", "1-t"]);
    assert_eq!(v["product"], "1");
    let points: Vec<(String, String)> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["point"].as_str().unwrap().to_string(), p["local"].as_str().unwrap().to_string()))
        .collect();
    let expected = [("(t)", "1+2e"), ("(t+2)", "1+e"), ("inf", "1")];
    let expected: Vec<(String, String)> = expected.iter().map(|(p, l)| (p.to_string(), l.to_string())).collect();
    assert_eq!(points, expected);
}

#[test]
fn reciprocity_with_roots_of_unity() {
    let o = locsym(&["reciprocity", "--field", "F5", "--m", "4", "t", "t"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mu_4"));
    let v = json(&["reciprocity", "--field", "F5", "--m", "4", "t", "t"]);
    assert_eq!(v["product"], "1");
    for p in v["points"].as_array().unwrap() {
        assert_eq!(p["local"], "4");
    }
}

#[test]
fn hilbert_example() {
    let o = locsym(&["hilbert", "--field", "F5", "--m", "4", "z", "z"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(value_line(&o).starts_with('4'));
}

#[test]
fn witt_examples() {
    assert_eq!(stdout(&locsym(&["--field", "F2", "witt", "add", "1,0", "1,0"])).trim(), "(0,1)");
    let v = json(&["--field", "F5", "witt", "bridge", "1,2"]);
    assert_eq!(v["value"], "2*t^2+t+1");
}

#[test]
fn verify_suites_pass() {
    for (suite, cases) in [("witt", "200"), ("decompose", "50"), ("axioms", "50"), ("reciprocity", "20")] {
        let o = locsym(&["verify", suite, "--seed", "1", "--cases", cases]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).contains("0 failed"), "{suite}: {}", stdout(&o));
    }
    let v = json(&["verify", "witt", "--seed", "9", "--cases", "5"]);
    assert_eq!(v["value"], "pass");
    assert_eq!(v["seed"], 9);
    assert_eq!(v["suite"]["cases"], 5);
}

#[test]
fn exit_codes() {
    let o = locsym(&["symbol", "z+", "z"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("at 2"), "{err}");

    assert_eq!(locsym(&["--field", "F3", "--alg", "e^2", "symbol", "e", "z"]).status.code(), Some(3));
    assert_eq!(locsym(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(locsym(&["--field", "F6", "symbol", "z", "z"]).status.code(), Some(2));
    assert_eq!(locsym(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn json_values_reparse() {
    let ctx = parse_context("F3", Some("e^2")).unwrap();
    let Context::Fp(alg) = ctx else { panic!("expected a prime field") };

    let v = json(&["--field", "F3", "--alg", "e^2", "symbol", "z+e", "1-z"]);
    let value = parse_element(&alg, v["value"].as_str().unwrap()).unwrap();
    assert_eq!(value.to_string(), "1+2e");
    for d in v["decompositions"].as_array().unwrap() {
        parse_element(&alg, d["lambda"].as_str().unwrap()).unwrap();
        for key in ["neg", "pos"] {
            for c in d[key].as_array().unwrap() {
                parse_element(&alg, c.as_str().unwrap()).unwrap();
            }
        }
    }

    let v = json(&["--field", "F3", "--alg", "e^2", "--prec", "6", "decompose", "1/(1-e*z+z^2)"]);
    let shown = v["value"].as_str().unwrap();
    let back = parse_series(&alg, shown, 6).unwrap();
    assert_eq!(back.to_string(), shown);
}

#[test]
fn precision_from_environment() {
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_locsym"));
        c.args(["--json", "decompose", "1/(1-z)"]);
        match env {
            Some(p) => c.env("LS_DEFAULT_PREC", p),
            None => c.env_remove("LS_DEFAULT_PREC"),
        };
        let v: Value = serde_json::from_slice(&c.output().unwrap().stdout).unwrap();
        v["precision"].as_i64().unwrap()
    };
    assert_eq!(run(None), 16);
    assert_eq!(run(Some("7")), 7);
}

#[test]
fn deterministic_output() {
    let args = ["verify", "reciprocity", "--seed", "5", "--cases", "10", "--json"];
    assert_eq!(locsym(&args).stdout, locsym(&args).stdout);
    let args = ["--field", "F7", "reciprocity", "(t^2+3)/(t-1)", "t^3+t+1"];
    assert_eq!(locsym(&args).stdout, locsym(&args).stdout);
}

#[test]
fn jobs_do_not_change_results() {
    let base = ["--field", "F9", "--alg", "e^2", "reciprocity", "(t^2+e*t+1)/(t-2)", "t^3+x*t+1"];
    let serial = locsym(&base);
    assert_eq!(serial.status.code(), Some(0), "{}", stdout(&serial));
    let mut parallel = base.to_vec();
    parallel.extend(["--jobs", "4"]);
    assert_eq!(locsym(&parallel).stdout, serial.stdout);
}
