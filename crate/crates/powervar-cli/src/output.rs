//! Deterministic document rendering. JSON carries 17 significant digits,
//! CSV 12; key order and column order are fixed so identical configs yield
//! byte-identical documents.

use crate::config::RunConfig;
use crate::CliError;

pub fn json_num(v: f64) -> String {
    debug_assert!(v.is_finite(), "non-finite value reached serialization");
    format!("{v:.16e}")
}

pub fn csv_num(v: f64) -> String {
    debug_assert!(v.is_finite(), "non-finite value reached serialization");
    format!("{v:.11e}")
}

pub fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn json_bool(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

/// One-line JSON object from already-encoded values, preserving pair order.
pub fn json_obj(pairs: &[(&str, String)]) -> String {
    let body: Vec<String> =
        pairs.iter().map(|(k, v)| format!("{}: {v}", json_str(k))).collect();
    format!("{{{}}}", body.join(", "))
}

fn json_f64_array(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|&v| json_num(v)).collect();
    format!("[{}]", items.join(", "))
}

fn json_usize_array(values: &[usize]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn config_echo(cfg: &RunConfig) -> String {
    json_obj(&[
        ("k", json_num(cfg.k)),
        ("r", json_num(cfg.r)),
        ("sigma", json_num(cfg.sigma)),
        ("A", json_num(cfg.amplitude)),
        ("alpha", json_num(cfg.decay)),
        ("p", json_num(cfg.p)),
        ("T", json_num(cfg.maturity)),
        ("t", json_num(cfg.valuation)),
        ("s", json_f64_array(&cfg.spots)),
        ("terms", cfg.terms.to_string()),
        ("method", json_str(cfg.method.name())),
        ("quad_nodes", cfg.quad_nodes.to_string()),
        ("fd_s_max", json_num(cfg.fd_s_max)),
        ("fd_space", cfg.fd_space.to_string()),
        ("fd_time", cfg.fd_time.to_string()),
        ("mc_paths", cfg.mc_paths.to_string()),
        ("mc_steps", cfg.mc_steps.to_string()),
        ("seed", cfg.seed.to_string()),
        ("rel_tol", json_num(cfg.rel_tol)),
        ("n_list", json_usize_array(&cfg.n_list)),
        ("format", json_str(cfg.format.name())),
        (
            "output",
            cfg.output.as_deref().map_or_else(|| "null".to_string(), json_str),
        ),
    ])
}

/// Assembles the top-level JSON document. `body_key` is "rows" for data
/// commands and "report" for validation.
pub fn render_json(cfg: &RunConfig, command: &str, body_key: &str, rows: &[String]) -> String {
    let mut doc = String::new();
    doc.push_str("{\n");
    doc.push_str("  \"schema_version\": \"1\",\n");
    doc.push_str(&format!("  \"command\": {},\n", json_str(command)));
    doc.push_str(&format!("  \"config_echo\": {},\n", config_echo(cfg)));
    doc.push_str(&format!("  {}: [\n", json_str(body_key)));
    for (i, row) in rows.iter().enumerate() {
        let sep = if i + 1 == rows.len() { "" } else { "," };
        doc.push_str(&format!("    {row}{sep}\n"));
    }
    doc.push_str("  ]\n}\n");
    doc
}

/// Header line plus data rows, comma-separated, `.` decimal point.
pub fn render_csv(header: &str, rows: &[String]) -> String {
    let mut doc = String::with_capacity(rows.len() * 48 + header.len() + 1);
    doc.push_str(header);
    doc.push('\n');
    for row in rows {
        doc.push_str(row);
        doc.push('\n');
    }
    doc
}

/// Writes to the configured path, or standard output when none is set.
pub fn write_document(cfg: &RunConfig, doc: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => std::fs::write(path, doc)
            .map_err(|e| CliError::Io(format!("cannot write '{path}': {e}"))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(doc.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}
