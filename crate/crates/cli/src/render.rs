use std::collections::BTreeMap;
use std::fmt::Write as _;

use godex::complexes::Degree;
use godex::godement::{EquivalenceReport, Witness};
use serde_json::{json, Map, Value};

pub fn betti_json(b: &BTreeMap<Degree, usize>) -> Value {
    Value::Object(b.iter().filter(|(_, v)| **v > 0).map(|(n, v)| (n.to_string(), json!(v))).collect::<Map<_, _>>())
}

pub fn betti_text(b: &BTreeMap<Degree, usize>) -> String {
    let parts: Vec<String> = b.iter().filter(|(_, v)| **v > 0).map(|(n, v)| format!("{n}:{v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn witnesses_json(ws: &[Witness]) -> Value {
    Value::Array(ws.iter().map(|w| json!({"place": w.place, "degree": w.degree})).collect())
}

pub fn report_json(r: &EquivalenceReport) -> Value {
    json!({
        "kind": format!("{:?}", r.kind).to_lowercase(),
        "verdict": r.verdict,
        "witnesses": witnesses_json(&r.witnesses),
        "certified_degree": r.certified_degree,
    })
}

pub fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> =
            cells.iter().enumerate().map(|(i, c)| format!("{c}{}", " ".repeat(widths[i] - c.chars().count()))).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    writeln!(out, "{}", line(headers.to_vec())).unwrap();
    writeln!(out, "{}", line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect())).unwrap();
    for r in rows {
        writeln!(out, "{}", line(r.iter().map(String::as_str).collect())).unwrap();
    }
    out
}
