//! Report assembly for the command-line tool.
//!
//! Every invocation prints one document: `{"tool_version": ..., "checks":
//! [...]}`. Maps are `serde_json`'s default sorted maps, so a report is a
//! pure function of the checks pushed into it and repeated runs stay
//! byte-identical. The plain-text rendering walks the same document.

use exchase::analysis::{Status, Verdict, Witness};
use exchase::printer::NullNamer;
use serde_json::{json, Map, Value};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct Report {
    checks: Vec<Value>,
}

impl Report {
    pub fn new() -> Report {
        Report { checks: Vec::new() }
    }

    pub fn push(&mut self, check: Value) {
        self.checks.push(check);
    }

    pub fn render(&self, human: bool) -> String {
        let doc = json!({ "tool_version": TOOL_VERSION, "checks": self.checks });
        if !human {
            let mut out = serde_json::to_string_pretty(&doc).expect("reports serialize");
            out.push('\n');
            return out;
        }
        let mut out = format!("exchase {TOOL_VERSION}\n");
        for check in &self.checks {
            out.push('\n');
            dump(check, 0, &mut out);
        }
        out
    }
}

/// YAML-ish dump of a check object: sorted keys, two-space indent, scalars
/// inline, strings unquoted.
fn dump(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if scalar(v) {
                    out.push_str(&format!("{pad}{k}: {}\n", plain(v)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    dump(v, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if scalar(item) {
                    out.push_str(&format!("{pad}- {}\n", plain(item)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    dump(item, indent + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", plain(value))),
    }
}

fn scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn exit_code(status: Status) -> u8 {
    match status {
        Status::Yes => 0,
        Status::No => 1,
        Status::Unknown => 2,
    }
}

/// Check object carrying a verdict: the caller's extra keys merge with the
/// verdict's own fields.
pub fn verdict_check(name: &str, verdict: &Verdict, extras: Map<String, Value>) -> Value {
    let mut m = extras;
    m.insert("check".into(), json!(name));
    merge_verdict(&mut m, verdict);
    Value::Object(m)
}

fn merge_verdict(m: &mut Map<String, Value>, verdict: &Verdict) {
    m.insert("verdict".into(), json!(verdict.status.label()));
    m.insert("rationale".into(), json!(verdict.rationale));
    m.insert("budget".into(), json!(verdict.budget));
    if let Some(w) = &verdict.witness {
        m.insert("witness".into(), witness_value(w));
    }
    if !verdict.parts.is_empty() {
        let parts: Vec<Value> = verdict
            .parts
            .iter()
            .map(|(name, v)| {
                let mut pm = Map::new();
                pm.insert("name".into(), json!(name));
                merge_verdict(&mut pm, v);
                Value::Object(pm)
            })
            .collect();
        m.insert("parts".into(), Value::Array(parts));
    }
}

fn witness_value(w: &Witness) -> Value {
    match w {
        Witness::Instance { instance, fact, rank } => {
            let mut namer = NullNamer::new();
            let atoms = namer.instance(instance);
            let fact = namer.atom(fact);
            json!({ "instance": atoms, "fact": fact, "rank": rank })
        }
        Witness::CriticalRank(r) => json!({ "critical_rank": r }),
        Witness::RankBound(b) => json!({ "rank_bound": b }),
        Witness::GrowthTrace(t) => json!({ "growth_trace": t }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_serialize_with_sorted_keys_and_trailing_newline() {
        let verdict = Verdict {
            status: Status::Yes,
            rationale: "every chase stops in time".into(),
            budget: 7,
            witness: Some(Witness::RankBound(1)),
            parts: Vec::new(),
        };
        let mut rep = Report::new();
        let mut extra = Map::new();
        extra.insert("k".into(), json!(1));
        rep.push(verdict_check("k-bounded", &verdict, extra));
        let text = rep.render(false);
        assert!(text.ends_with('\n'));
        let budget = text.find("\"budget\"").unwrap();
        let check = text.find("\"check\"").unwrap();
        let k = text.find("\"k\"").unwrap();
        let verdict = text.find("\"verdict\"").unwrap();
        assert!(budget < check && check < k && k < verdict);
    }

    #[test]
    fn the_plain_rendering_unquotes_strings() {
        let mut rep = Report::new();
        rep.push(json!({ "check": "chase", "result": ["p(a,b)"] }));
        let text = rep.render(true);
        assert!(text.contains("check: chase"));
        assert!(text.contains("- p(a,b)"));
        assert!(!text.contains('"'));
    }
}
