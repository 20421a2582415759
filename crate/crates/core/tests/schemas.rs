//! CLI JSON output checked against the shipped schemas.
//!
//! The validator covers the keywords the schemas use: `$ref` into `$defs`,
//! `type`, `required`, `properties`, `additionalProperties: false`, `items`,
//! `enum`, `const`, `oneOf`, `minimum`, `minProperties` and `pattern`.

use std::path::Path;
use std::process::Command;

use regex::Regex;
use serde_json::Value;

fn load(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn type_ok(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        other => panic!("unsupported type {other}"),
    }
}

fn check(root: &Value, schema: &Value, v: &Value, at: &str, errs: &mut Vec<String>) {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let key = r.strip_prefix("#/$defs/").expect("local ref");
        return check(root, &root["$defs"][key], v, at, errs);
    }
    match schema.get("type") {
        Some(Value::String(t)) if !type_ok(t, v) => return errs.push(format!("{at}: expected {t}")),
        Some(Value::Array(ts)) if !ts.iter().any(|t| type_ok(t.as_str().unwrap(), v)) => {
            return errs.push(format!("{at}: expected one of {ts:?}"))
        }
        _ => {}
    }
    if let Some(c) = schema.get("const") {
        if c != v {
            errs.push(format!("{at}: expected {c}"));
        }
    }
    if let Some(Value::Array(options)) = schema.get("enum") {
        if !options.contains(v) {
            errs.push(format!("{at}: {v} not in enum"));
        }
    }
    if let (Some(min), Some(x)) = (schema.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            errs.push(format!("{at}: {x} below {min}"));
        }
    }
    if let (Some(p), Some(s)) = (schema.get("pattern").and_then(Value::as_str), v.as_str()) {
        if !Regex::new(p).unwrap().is_match(s) {
            errs.push(format!("{at}: {s:?} does not match {p}"));
        }
    }
    if let Some(Value::Array(options)) = schema.get("oneOf") {
        let hits = options
            .iter()
            .filter(|o| {
                let mut sub = Vec::new();
                check(root, o, v, at, &mut sub);
                sub.is_empty()
            })
            .count();
        if hits != 1 {
            errs.push(format!("{at}: matches {hits} oneOf branches"));
        }
    }
    if let Value::Object(map) = v {
        if let Some(n) = schema.get("minProperties").and_then(Value::as_u64) {
            if (map.len() as u64) < n {
                errs.push(format!("{at}: fewer than {n} properties"));
            }
        }
        if let Some(Value::Array(req)) = schema.get("required") {
            for k in req {
                if !map.contains_key(k.as_str().unwrap()) {
                    errs.push(format!("{at}: missing {k}"));
                }
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (k, x) in map {
            match props.and_then(|p| p.get(k)) {
                Some(s) => check(root, s, x, &format!("{at}.{k}"), errs),
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    errs.push(format!("{at}: unexpected key {k}"))
                }
                None => {}
            }
        }
    }
    if let (Value::Array(xs), Some(items)) = (v, schema.get("items")) {
        for (i, x) in xs.iter().enumerate() {
            check(root, items, x, &format!("{at}[{i}]"), errs);
        }
    }
}

fn validate(schema: &str, v: &Value) -> Vec<String> {
    let root = load(schema);
    let mut errs = Vec::new();
    check(&root, &root, v, "$", &mut errs);
    errs
}

fn run(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_stopred"))
        .args(args)
        .env("STOPRED_THREADS", "1")
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn assert_valid(schema: &str, args: &[&str]) {
    let errs = validate(schema, &run(args));
    assert!(errs.is_empty(), "{args:?} against {schema}: {errs:#?}");
}

#[test]
fn bounds_outputs() {
    assert_valid("bounds", &["bounds", "--ell", "5"]);
    assert_valid("bounds", &["bounds", "--n", "155", "--k", "64", "--d", "20"]);
}

#[test]
fn spectrum_outputs() {
    assert_valid("spectrum", &["spectrum", "--ell", "4", "--coverable"]);
    assert_valid("spectrum", &["spectrum", "--ell", "4", "--estimate", "--N", "500", "--seed", "3"]);
}

#[test]
fn greedy_output() {
    assert_valid("greedy", &["greedy", "--ell", "3", "--restarts", "1", "--seed", "1"]);
}

#[test]
fn profile_outputs() {
    assert_valid("profile", &["profile", "--w-max", "5"]);
    assert_valid("profile", &["profile", "--decoder", "ml", "--exhaustive-to", "4", "--trials", "200", "--fer", "--seed", "2"]);
    assert_valid("profile", &["profile", "--compare", "it,ml", "--seed", "1"]);
}

#[test]
fn ensemble_outputs() {
    assert_valid("ensemble", &["ensemble", "sre", "--n", "12", "--m", "6", "--analytic"]);
    assert_valid(
        "ensemble",
        &["ensemble", "gallager", "--n", "12", "--J", "3", "--K", "6", "--estimate", "--N", "200", "--seed", "1"],
    );
}

#[test]
fn reproduce_output() {
    assert_valid("reproduce", &["reproduce", "--tables", "IV", "--json"]);
}

#[test]
fn validator_rejects_drift() {
    let mut v = run(&["spectrum", "--ell", "3"]);
    assert!(validate("spectrum", &v).is_empty());
    v["counts"][0] = Value::from(3);
    assert!(!validate("spectrum", &v).is_empty());
    v["counts"][0] = Value::from("0");
    v["extra"] = Value::Bool(true);
    assert!(!validate("spectrum", &v).is_empty());
}
