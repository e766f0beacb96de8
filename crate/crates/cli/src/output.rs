//! Shared output plumbing: the assumptions block and the three formats.

use serde::Serialize;
use serde_json::{json, Value};

use crate::Cli;

pub const INEQ2_READING: &str = "log_q(d*h)";
pub const INEQ2_ALTERNATIVE: &str = "log_q(d)*h";
pub const CLAMPS: [&str; 2] = [
    "arguments of log_q clamped below at 1",
    "graded height contributions clamped below at 0 per place",
];

#[derive(Serialize)]
pub struct Assumptions {
    pub log_c2: f64,
    pub exp_base: &'static str,
    pub ineq2_reading: &'static str,
    pub ineq2_alternative: &'static str,
    pub clamps: [&'static str; 2],
    pub log_base: &'static str,
    pub seed: u64,
}

pub fn assumptions(cli: &Cli) -> Assumptions {
    Assumptions {
        log_c2: cli.log_c2,
        exp_base: drinfeld::bounds::ExpBase::from(cli.exp_base).as_str(),
        ineq2_reading: INEQ2_READING,
        ineq2_alternative: INEQ2_ALTERNATIVE,
        clamps: CLAMPS,
        log_base: "q",
        seed: cli.seed,
    }
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn assumption_lines(cli: &Cli) -> Vec<String> {
    let a = assumptions(cli);
    vec![
        format!("log_c2 = {} (log base q)", a.log_c2),
        format!("exp_base = {}", a.exp_base),
        format!("ineq2 reading = {} (alternative {})", a.ineq2_reading, a.ineq2_alternative),
        format!("clamps: {}; {}", a.clamps[0], a.clamps[1]),
        format!("seed = {}", a.seed),
    ]
}

pub fn json_doc(cli: &Cli, command: &str, payload: Value) -> String {
    let mut doc = json!({
        "command": command,
        "assumptions": assumptions(cli),
        "result": payload,
    });
    if !cli.reproducible {
        doc["generated_at"] = Value::String(timestamp());
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

/// Comment preamble, then the rows through the csv writer.
pub fn csv_doc(cli: &Cli, command: &str, notes: &[String], header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    if !cli.reproducible {
        out.push_str(&format!("# generated_at: {}\n", timestamp()));
    }
    out.push_str(&format!("# command: {command}\n"));
    for line in assumption_lines(cli).iter().chain(notes) {
        out.push_str(&format!("# {line}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
    out
}

pub fn table_doc(cli: &Cli, command: &str, body: &str) -> String {
    let mut out = String::new();
    if !cli.reproducible {
        out.push_str(&format!("generated at {}\n", timestamp()));
    }
    out.push_str(&format!("{command}\nassumptions:\n"));
    for line in assumption_lines(cli) {
        out.push_str(&format!("  {line}\n"));
    }
    out.push('\n');
    out.push_str(body);
    if !body.ends_with('\n') {
        out.push('\n');
    }
    out
}

/// Left-aligned columns separated by two spaces.
pub fn columns(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}
