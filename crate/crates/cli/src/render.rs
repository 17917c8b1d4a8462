//! Human-readable rendering for `--pretty`.

use qvir_core::config::Bounds;
use serde_json::Value;

pub fn bounds_text(b: &Bounds) -> String {
    b.to_text()
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    for row in rows {
        out.push_str(&line(row.clone()));
    }
    out
}

/// Scalar top-level fields as `key: value` lines.
fn fields(doc: &Value, skip: &[&str]) -> String {
    let mut out = String::new();
    if let Value::Object(map) = doc {
        for (k, v) in map {
            if skip.contains(&k.as_str()) {
                continue;
            }
            if !v.is_object() && !v.is_array() || k == "sector" || k == "partition" {
                out.push_str(&format!("{k}: {}\n", cell(v)));
            }
        }
    }
    out
}

pub fn pretty(doc: &Value) -> String {
    if let Some(Value::Array(cells)) = doc.get("cells") {
        let rows: Vec<Vec<String>> = cells
            .iter()
            .map(|c| {
                ["modes", "state", "status", "residual"]
                    .iter()
                    .map(|k| cell(&c[*k]))
                    .collect()
            })
            .collect();
        return fields(doc, &["cells"]) + &table(&["modes", "state", "status", "residual"], &rows);
    }
    if let Some(Value::Array(criteria)) = doc.get("criteria") {
        let rows: Vec<Vec<String>> = criteria
            .iter()
            .map(|c| {
                let mut row: Vec<String> = ["id", "status", "title"].iter().map(|k| cell(&c[*k])).collect();
                if let Some(ms) = c.get("elapsed_ms").and_then(Value::as_u64) {
                    row.push(format!("{:.1} s", ms as f64 / 1000.0));
                } else {
                    row.push(String::new());
                }
                row.push(cell(&c["detail"]));
                row
            })
            .collect();
        return table(&["id", "status", "criterion", "time", "detail"], &rows)
            + &format!("overall: {}\n", cell(&doc["status"]));
    }
    if let Some(Value::Array(matrix)) = doc.get("matrix") {
        let basis = doc["basis"].as_array().cloned().unwrap_or_default();
        let rows: Vec<Vec<String>> = matrix
            .iter()
            .zip(&basis)
            .flat_map(|(row, mu)| {
                row.as_array()
                    .into_iter()
                    .flatten()
                    .zip(&basis)
                    .map(move |(e, nu)| vec![cell(mu), cell(nu), cell(e)])
            })
            .collect();
        return fields(doc, &["matrix", "basis"]) + &table(&["row", "column", "entry"], &rows);
    }
    let mut out = fields(doc, &[]);
    if let Value::Object(map) = doc {
        for (k, v) in map {
            if (v.is_object() || v.is_array()) && k != "sector" && k != "partition" {
                let body = serde_json::to_string_pretty(v).expect("serializable");
                out.push_str(&format!("{k}:\n{body}\n"));
            }
        }
    }
    out
}
