//! Helpers for driving the compiled binary and checking reports against
//! the shipped schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_heavytail")
}

pub struct Run {
    pub status: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn run_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(bin());
    cmd.current_dir(dir).args(args).env_remove("TAYLORLAW_SEED");
    for (key, value) in envs {
        cmd.env(key, value);
    }
    let Output { status, stdout, stderr } = cmd.output().expect("binary runs");
    Run {
        status: status.code().expect("no signal"),
        stdout,
        stderr: String::from_utf8_lossy(&stderr).into_owned(),
    }
}

pub fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schemas")
        .join(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("read {}: {e}", path.display()));
    serde_json::from_str(&text).expect("schema parses")
}

/// Structural validation: `type`, `const`, `enum`, `required`,
/// `properties`, and `items`, which is the subset the shipped schemas use.
pub fn validate(schema: &Value, value: &Value) -> Result<(), String> {
    check(schema, value, "$")
}

fn check(schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(expected) = schema.get("const") {
        if value != expected {
            return Err(format!("{path}: expected const {expected}, got {value}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            return Err(format!("{path}: {value} not in enum {options:?}"));
        }
    }
    if let Some(ty) = schema.get("type") {
        let allowed: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => return Err(format!("{path}: malformed schema type")),
        };
        if !allowed.iter().any(|t| matches_type(t, value)) {
            return Err(format!("{path}: {value} does not match type {allowed:?}"));
        }
    }
    if let Some(object) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !object.contains_key(key) {
                    return Err(format!("{path}: missing required key `{key}`"));
                }
            }
        }
        if let Some(props) = schema.get("properties").and_then(Value::as_object) {
            for (key, sub) in props {
                if let Some(v) = object.get(key) {
                    check(sub, v, &format!("{path}.{key}"))?;
                }
            }
        }
    }
    if let Some(array) = value.as_array() {
        if let Some(items) = schema.get("items") {
            for (i, v) in array.iter().enumerate() {
                check(items, v, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn matches_type(ty: &str, value: &Value) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        "integer" => value.as_i64().is_some() || value.as_u64().is_some(),
        "number" => value.is_number(),
        _ => false,
    }
}

/// Parse a report, check the envelope, and check the result payload
/// against the named schema.
pub fn check_report(bytes: &[u8], result_schema: &str) -> Value {
    let report: Value = serde_json::from_slice(bytes).expect("report is JSON");
    validate(&schema("envelope.v1.json"), &report).expect("envelope matches schema");
    validate(&schema(result_schema), &report["result"]).expect("result matches schema");
    report
}
