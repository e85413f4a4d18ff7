//! The JSON run report and its text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub results: Map<String, Value>,
    /// Stage name → wall time in ms.
    pub timings: BTreeMap<String, f64>,
    pub tool_version: String,
}

impl RunReport {
    pub fn new(command: &str, inputs_digest: String) -> Self {
        RunReport {
            command: command.to_string(),
            inputs_digest,
            results: Map::new(),
            timings: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn time(&mut self, stage: &str, start: std::time::Instant) {
        self.timings.insert(stage.to_string(), start.elapsed().as_secs_f64() * 1e3);
    }

    pub fn to_json(&self) -> Value {
        let timings: Map<String, Value> = self.timings.iter().map(|(k, v)| (k.clone(), quantity(*v, "ms"))).collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "tool_version": self.tool_version,
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "timings": timings,
        })
    }

    pub fn render_pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "sturmint {} {}  (inputs {})", self.tool_version, self.command, &self.inputs_digest[..12]);
        for (k, v) in &self.results {
            render(&mut out, k, v, 0);
        }
        if !self.timings.is_empty() {
            let _ = writeln!(out, "timings");
            for (k, v) in &self.timings {
                let _ = writeln!(out, "  {k:<32} {v:>12.3} ms");
            }
        }
        out
    }
}

/// A scalar with its unit tag.
pub fn quantity(value: f64, unit: &str) -> Value {
    json!({ "value": value, "unit": unit })
}

/// Row-major matrix with one unit tag.
pub fn matrix(rows: Vec<Vec<f64>>, unit: &str) -> Value {
    json!({ "unit": unit, "rows": rows })
}

pub fn list(values: &[f64], unit: &str) -> Value {
    json!({ "unit": unit, "values": values })
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    let obj = match v {
        Value::Object(o) => o,
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{key}");
            for (i, item) in items.iter().enumerate() {
                match item {
                    Value::Object(o) if o.contains_key("label") => {
                        let _ = writeln!(out, "{pad}  {}", row_line(o));
                        for (k, x) in o.iter().filter(|(_, x)| x.is_object()) {
                            render(out, k, x, depth + 2);
                        }
                    }
                    _ => render(out, &format!("[{i}]"), item, depth + 1),
                }
            }
            return;
        }
        other => {
            let _ = writeln!(out, "{pad}{key:<24} {other}");
            return;
        }
    };
    let unit = obj.get("unit").and_then(Value::as_str).unwrap_or("");
    if let Some(x) = obj.get("value").and_then(Value::as_f64) {
        let _ = writeln!(out, "{pad}{key:<24} {x:>18.10} {unit}");
    } else if let Some(Value::Array(rows)) = obj.get("rows") {
        let _ = writeln!(out, "{pad}{key} ({unit})");
        for r in rows {
            let cells: Vec<String> = r
                .as_array()
                .map(|c| c.iter().map(|x| format!("{:>13.8}", x.as_f64().unwrap_or(f64::NAN))).collect())
                .unwrap_or_default();
            let _ = writeln!(out, "{pad}  {}", cells.join(" "));
        }
    } else if let Some(Value::Array(vals)) = obj.get("values") {
        let cells: Vec<String> = vals.iter().map(|x| format!("{:.8}", x.as_f64().unwrap_or(f64::NAN))).collect();
        let _ = writeln!(out, "{pad}{key} ({unit}): {}", cells.join(", "));
    } else {
        let _ = writeln!(out, "{pad}{key}");
        for (k, x) in obj {
            render(out, k, x, depth + 1);
        }
    }
}

fn row_line(o: &Map<String, Value>) -> String {
    let mut s = format!("{:<12}", o["label"].as_str().unwrap_or(""));
    if let Some(x) = o.get("value").and_then(Value::as_f64) {
        let _ = write!(s, " {x:>14.8} {}", o.get("unit").and_then(Value::as_str).unwrap_or(""));
    }
    for (k, x) in o {
        if !matches!(k.as_str(), "label" | "value" | "unit") && !x.is_object() {
            let _ = write!(s, "  {k}={x}");
        }
    }
    s
}
