use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::report::{write_atomic, Failure, SCHEMA};

/// Acceptance criteria tracked by the summary document.
pub const CRITERIA: std::ops::RangeInclusive<u32> = 1..=13;

#[derive(Debug, Serialize)]
struct Entry {
    source: String,
    name: String,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct Criterion {
    id: u32,
    status: &'static str,
    checks: Vec<Entry>,
}

#[derive(Debug, Serialize)]
struct Summary {
    schema: &'static str,
    reports: Vec<String>,
    criteria: Vec<Criterion>,
    missing: Vec<u32>,
    untagged: Vec<Entry>,
}

/// Merges the `report-v1` files of `dir`. Timing fields are dropped, so the
/// document only depends on the report contents.
pub fn run(dir: &Path, out: Option<&Path>) -> Result<bool, Failure> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| Failure::Missing(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .filter(|p| out.is_none_or(|o| o.file_name() != p.file_name()))
        .collect();
    files.sort();
    let mut by_id: BTreeMap<u32, Vec<Entry>> = BTreeMap::new();
    let mut untagged = Vec::new();
    let mut reports = Vec::new();
    for path in &files {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        let Ok(value) = serde_json::from_str::<Value>(&text) else { continue };
        if value.get("schema").and_then(Value::as_str) != Some(SCHEMA) {
            continue;
        }
        let source = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        reports.push(source.clone());
        for check in value.get("checks").and_then(Value::as_array).into_iter().flatten() {
            let entry = Entry {
                source: source.clone(),
                name: check.get("name").and_then(Value::as_str).unwrap_or("").into(),
                passed: check.get("passed").and_then(Value::as_bool).unwrap_or(false),
            };
            match check.get("criterion").and_then(Value::as_u64) {
                Some(id) => by_id.entry(id as u32).or_default().push(entry),
                None => untagged.push(entry),
            }
        }
    }
    if reports.is_empty() {
        return Err(Failure::Missing(format!("no {SCHEMA} reports in {}", dir.display())));
    }
    let mut criteria = Vec::new();
    let mut missing = Vec::new();
    for id in CRITERIA {
        let checks = by_id.remove(&id).unwrap_or_default();
        let status = if checks.is_empty() {
            missing.push(id);
            "missing"
        } else if checks.iter().all(|c| c.passed) {
            "pass"
        } else {
            "fail"
        };
        criteria.push(Criterion { id, status, checks });
    }
    let all_pass = criteria.iter().all(|c| c.status == "pass");
    let summary = Summary { schema: "acceptance-v1", reports, criteria, missing, untagged };
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    match out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    for c in &summary.criteria {
        eprintln!("criterion {:>2}: {}", c.id, c.status);
    }
    if !summary.missing.is_empty() {
        return Err(Failure::Missing(format!("no reports for criteria {:?}", summary.missing)));
    }
    Ok(all_pass)
}
