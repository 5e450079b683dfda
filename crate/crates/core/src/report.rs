//! Report persistence: JSON is written as-is, markdown is rendered from it.

use crate::error::{BrfError, Result};
use serde_json::Value;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Default tolerance, overridable through `BRF_TOL`.
pub fn default_tol() -> f64 {
    std::env::var("BRF_TOL").ok().and_then(|s| s.parse().ok()).filter(|t: &f64| *t > 0.0).unwrap_or(1e-10)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "–".into(),
        Value::String(s) => s.replace('|', "\\|"),
        Value::Object(o) if o.contains_key("num") && o.contains_key("den") => {
            let n = o["num"].as_str().map(str::to_string).unwrap_or_else(|| o["num"].to_string());
            let d = o["den"].as_str().map(str::to_string).unwrap_or_else(|| o["den"].to_string());
            if d == "1" { n } else { format!("{n}/{d}") }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !is_table_object(x)) => {
            format!("({})", a.iter().map(cell).collect::<Vec<_>>().join(", "))
        }
        Value::Array(a) => format!("[{}]", a.iter().map(cell).collect::<Vec<_>>().join("; ")),
        Value::Object(o) => o.iter().map(|(k, x)| format!("{k}={}", cell(x))).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn is_rational(v: &Value) -> bool {
    v.get("num").is_some() && v.get("den").is_some()
}

fn is_table_object(v: &Value) -> bool {
    v.is_object() && !is_rational(v)
}

fn table(out: &mut String, rows: &[Value]) {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        if let Some(o) = r.as_object() {
            for k in o.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
    }
    let _ = writeln!(out, "| {} |", cols.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(cols.len()));
    for r in rows {
        let cells: Vec<String> = cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
}

fn section(out: &mut String, title: &str, v: &Value, depth: usize) {
    let hashes = "#".repeat(depth.min(6));
    let _ = writeln!(out, "{hashes} {title}\n");
    let Some(obj) = v.as_object() else {
        let _ = writeln!(out, "{}\n", cell(v));
        return;
    };
    let scalars: Vec<(&String, &Value)> = obj.iter().filter(|(_, x)| !nested(x)).collect();
    if !scalars.is_empty() {
        let _ = writeln!(out, "| field | value |\n|---|---|");
        for (k, x) in scalars {
            let _ = writeln!(out, "| {k} | {} |", cell(x));
        }
        out.push('\n');
    }
    for (k, x) in obj.iter().filter(|(_, x)| nested(x)) {
        match x {
            Value::Array(a) => {
                let _ = writeln!(out, "{} {k}\n", "#".repeat((depth + 1).min(6)));
                table(out, a);
                out.push('\n');
            }
            _ => section(out, k, x, depth + 1),
        }
    }
}

fn nested(v: &Value) -> bool {
    match v {
        Value::Object(_) => !is_rational(v),
        Value::Array(a) => !a.is_empty() && a.iter().all(is_table_object),
        _ => false,
    }
}

/// Human-readable rendering of a report.
pub fn to_markdown(title: &str, v: &Value) -> String {
    let mut out = String::new();
    section(&mut out, title, v, 1);
    out
}

/// Serializes with stable key order and a trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

/// Writes `<stem>.json` and `<stem>.md` (plus any extra files) under `dir`.
pub fn write_report(dir: &Path, stem: &str, title: &str, v: &Value, extra: &[(&str, String)]) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| BrfError::Io(e.to_string());
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut written = Vec::new();
    let files = [(format!("{stem}.json"), to_json_string(v)), (format!("{stem}.md"), to_markdown(title, v))];
    for (name, body) in files.into_iter().chain(extra.iter().map(|(n, b)| (n.to_string(), b.clone()))) {
        let p = dir.join(name);
        std::fs::write(&p, body).map_err(io)?;
        written.push(p);
    }
    Ok(written)
}

/// Structured error document.
pub fn error_json(e: &BrfError) -> Value {
    serde_json::json!({
        "error": {
            "kind": e.kind(),
            "message": e.to_string(),
            "exit_code": e.exit_code(),
        }
    })
}
