//! Plain-text renderings of the JSON reports.

use std::fmt::Write;

use serde_json::Value;

fn s(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Long series are cut for reading; the JSON output keeps them whole.
fn short(v: &Value) -> String {
    const MAX: usize = 120;
    let full = s(v);
    match full.char_indices().nth(MAX) {
        Some((cut, _)) => format!("{} ... ({} chars)", &full[..cut], full.chars().count()),
        None => full,
    }
}

pub fn cd(body: &Value) -> String {
    let mut out = format!(
        "profile {}  (layers {}, residue characteristic {})\n",
        s(&body["profile"]),
        body["layers"],
        body["residue_characteristic"]
    );
    for row in body["primes"].as_array().into_iter().flatten() {
        let _ = write!(out, "  q = {:<3} r_q = {}  cd_q = {}", s(&row["q"]), row["r_q"], s(&row["cd_q"]));
        if let Some(n) = row.get("note") {
            let _ = write!(out, "  ({})", s(n));
        }
        out.push('\n');
    }
    out.trim_end().to_string()
}

pub fn classify(body: &Value) -> String {
    let r = &body["report"];
    let mut out = format!("{}\n  class: {}\n", s(&body["algebra"]), s(&body["class"]));
    for key in ["dimension", "degree", "index", "residue_degree", "defect", "is_division"] {
        let _ = writeln!(out, "  {key}: {}", s(&r[key]));
    }
    let g = &r["value_group"];
    let _ = writeln!(out, "  value group: (1/{}) rows {}", g["denominator"], g["integer_rows"]);
    let _ = writeln!(out, "  quotient: {}", r["quotient"]);
    let _ = write!(out, "  flags: {}", r["flags"]);
    out
}

pub fn witnesses(body: &Value) -> String {
    let mut out = format!("{} (seed {})\n", s(&body["algebra"]), body["seed"]);
    for (k, w) in body["witnesses"].as_array().into_iter().flatten().enumerate() {
        let mark = if w["verified"] == Value::Bool(true) { "ok" } else { "UNVERIFIED" };
        let _ = writeln!(out, "[{k}] {mark}\n  a = {}\n  a = {}", short(&w["element"]), short(&w["witness"]));
    }
    out.trim_end().to_string()
}

fn verdict_line(v: &Value) -> String {
    let mut line = format!("SK1 {} via {}", s(&v["conclusion"]), s(&v["case"]));
    if let Some(also) = v["also"].as_array().filter(|a| !a.is_empty()) {
        let names: Vec<String> = also.iter().map(s).collect();
        let _ = write!(line, " (also {})", names.join(", "));
    }
    let _ = write!(line, "\n    q = {}, r_q = {}, cd_q = {}\n    {}", v["q"], v["r_q"], s(&v["cd_q"]), s(&v["reasoning"]));
    line
}

pub fn verdict(body: &Value) -> String {
    format!("{}\n  profile {}\n  {}", s(&body["algebra"]), s(&body["profile"]), verdict_line(&body["verdict"]))
}

pub fn example(body: &Value) -> String {
    let mut out = format!("Example {}: {}\n", body["example"], s(&body["title"]));
    let _ = writeln!(out, "  profile {}  q = {}  r_q = {}  cd_q = {}", s(&body["profile"]), body["q"], body["r_q"], s(&body["cd_q"]));
    if !body["algebra"].is_null() {
        let _ = writeln!(out, "  algebra {}  class {}", s(&body["algebra"]), s(&body["class"]));
    }
    for n in body["notes"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "  note: {}", s(n));
    }
    if !body["kappa"].is_null() {
        let _ = writeln!(out, "  {}", s(&body["kappa"]));
    }
    let _ = writeln!(out, "  {}", verdict_line(&body["verdict"]));
    for v in body["variants"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "  variant {} ({})\n    {}", s(&v["profile"]), s(&v["note"]), verdict_line(&v["verdict"]));
    }
    for w in body["witnesses"].as_array().into_iter().flatten() {
        let mark = if w["verified"] == Value::Bool(true) { "ok" } else { "UNVERIFIED" };
        let _ = writeln!(out, "  witness [{mark}] {} = {}", short(&w["element"]), short(&w["witness"]));
    }
    if let Some(t) = body["twisted"].as_object() {
        let _ = writeln!(
            out,
            "  twisted series over {} ({}): center generated by {}, theta is Frobenius: {}",
            s(&t["field"]),
            s(&t["twist"]),
            s(&t["center_generator"]),
            t["theta_is_frobenius"]
        );
    }
    out.trim_end().to_string()
}
