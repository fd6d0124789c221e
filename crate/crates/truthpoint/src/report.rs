//! The machine-readable report envelope shared by every command. A report
//! carries the pool hash it describes plus a list of labelled payloads, and
//! serializes canonically: object keys sorted, arrays in a deterministic
//! order, no timestamps or timings, so identical inputs give byte-identical
//! files. Reports over the same pool can be merged into one.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// One report file: a pool hash (when the content is pool-specific) and a
/// list of labelled payloads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    /// Hash of the pool every entry describes; merging cross-checks it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pool_hash: Option<String>,
    /// The payloads, in canonical order.
    pub entries: Vec<Entry>,
}

/// One labelled payload inside a report, e.g. a fixed-point classification
/// or a categoricity sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    /// What the payload is: the producing command's name.
    pub kind: String,
    /// The payload itself. Maps are key-sorted on serialization.
    pub payload: Value,
}

/// Report construction and merging failures.
#[derive(Debug, Error)]
pub enum ReportError {
    /// Two reports claim different pools.
    #[error("pool hash mismatch: {0} vs {1}")]
    HashMismatch(String, String),
    /// A payload could not be serialized.
    #[error("serialization: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl Report {
    /// An empty report with no pool attached.
    pub fn empty() -> Self {
        Report { pool_hash: None, entries: Vec::new() }
    }

    /// A report for one pool.
    pub fn for_pool(pool_hash: &str) -> Self {
        Report { pool_hash: Some(pool_hash.to_string()), entries: Vec::new() }
    }

    /// Append a payload under the given label.
    pub fn push<T: Serialize>(&mut self, kind: &str, payload: &T) -> Result<(), ReportError> {
        self.entries.push(Entry { kind: kind.to_string(), payload: serde_json::to_value(payload)? });
        Ok(())
    }

    /// The canonical file form: pretty-printed JSON with sorted object keys
    /// and a trailing newline. Byte-identical for equal reports.
    pub fn canonical_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

/// Merge reports into one canonical report.
///
/// All reports that name a pool must name the same one. Exact duplicate
/// entries collapse; categoricity sweeps over the same theory and jump are
/// combined (checked counts summed, discrepancy lists unioned), so disjoint
/// sampled sweeps merge into one; everything else is concatenated. Entries
/// are sorted by label and content, so the merge is independent of input
/// order. Merging nothing gives the empty report.
pub fn merge(reports: &[Report]) -> Result<Report, ReportError> {
    let mut pool_hash: Option<String> = None;
    for r in reports {
        if let Some(h) = &r.pool_hash {
            match &pool_hash {
                None => pool_hash = Some(h.clone()),
                Some(prev) if prev != h => {
                    return Err(ReportError::HashMismatch(prev.clone(), h.clone()))
                }
                Some(_) => {}
            }
        }
    }

    let mut entries: Vec<Entry> = Vec::new();
    for r in reports {
        for e in &r.entries {
            if entries.contains(e) {
                continue; // exact duplicate
            }
            if e.kind == "categoricity" {
                if let Some(prev) = entries
                    .iter_mut()
                    .find(|p| p.kind == "categoricity" && same_sweep(&p.payload, &e.payload))
                {
                    prev.payload = combine_sweeps(&prev.payload, &e.payload);
                    continue;
                }
            }
            entries.push(e.clone());
        }
    }
    entries.sort_by(|a, b| {
        (a.kind.as_str(), a.payload.to_string()).cmp(&(b.kind.as_str(), b.payload.to_string()))
    });
    Ok(Report { pool_hash, entries })
}

/// Whether two sweep payloads describe the same theory, jump, and pool.
fn same_sweep(a: &Value, b: &Value) -> bool {
    ["theory", "jump", "poolHash"].iter().all(|k| a.get(k) == b.get(k))
}

/// Combine two sweeps over the same configuration: sum the checked counts
/// and union the discrepancy lists.
fn combine_sweeps(a: &Value, b: &Value) -> Value {
    let mut out = a.clone();
    let checked = a.get("checked").and_then(Value::as_u64).unwrap_or(0)
        + b.get("checked").and_then(Value::as_u64).unwrap_or(0);
    out["checked"] = Value::from(checked);
    let mut disc: Vec<Value> = a
        .get("discrepancies")
        .and_then(Value::as_array)
        .cloned()
        .unwrap_or_default();
    for d in b.get("discrepancies").and_then(Value::as_array).cloned().unwrap_or_default() {
        if !disc.contains(&d) {
            disc.push(d);
        }
    }
    disc.sort_by_key(|v| v.to_string());
    out["discrepancies"] = Value::Array(disc);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn merging_nothing_gives_the_empty_report() {
        let m = merge(&[]).unwrap();
        assert_eq!(m, Report::empty());
        assert_eq!(m.canonical_text(), "{\n  \"entries\": []\n}\n");
    }

    #[test]
    fn merge_is_order_independent_and_idempotent() {
        let mut a = Report::for_pool("h1");
        a.push("classify", &json!({"set": [1, 2], "consistent": true})).unwrap();
        let mut b = Report::for_pool("h1");
        b.push("classify", &json!({"set": [3], "consistent": false})).unwrap();

        let ab = merge(&[a.clone(), b.clone()]).unwrap();
        let ba = merge(&[b.clone(), a.clone()]).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.entries.len(), 2);
        assert_eq!(ab.pool_hash.as_deref(), Some("h1"));
        // Merging a report with itself changes nothing.
        assert_eq!(merge(&[a.clone(), a.clone()]).unwrap(), merge(&[a]).unwrap());
    }

    #[test]
    fn mismatched_pool_hashes_are_rejected() {
        let a = Report::for_pool("h1");
        let b = Report::for_pool("h2");
        assert!(matches!(merge(&[a, b]), Err(ReportError::HashMismatch(..))));
    }

    #[test]
    fn disjoint_sweeps_combine_into_one_entry() {
        let sweep = |checked: u64, disc: Value| {
            json!({
                "theory": "it", "jump": "theta", "poolHash": "h1",
                "checked": checked, "discrepancies": disc,
            })
        };
        let mut a = Report::for_pool("h1");
        a.push("categoricity", &sweep(100, json!([{"set": [5]}]))).unwrap();
        let mut b = Report::for_pool("h1");
        b.push("categoricity", &sweep(50, json!([{"set": [2]}]))).unwrap();

        let m = merge(&[a, b]).unwrap();
        assert_eq!(m.entries.len(), 1);
        let p = &m.entries[0].payload;
        assert_eq!(p["checked"], json!(150));
        assert_eq!(p["discrepancies"], json!([{"set": [2]}, {"set": [5]}]));
    }

    #[test]
    fn serialization_sorts_keys_and_is_stable() {
        let mut r = Report::for_pool("h1");
        r.push("probe", &json!({"zeta": 1, "alpha": 2})).unwrap();
        let t1 = r.canonical_text();
        let t2 = r.canonical_text();
        assert_eq!(t1, t2);
        assert!(t1.find("\"alpha\"").unwrap() < t1.find("\"zeta\"").unwrap());
        // Round-tripping preserves the report.
        let back: Report = serde_json::from_str(&t1).unwrap();
        assert_eq!(back, r);
    }
}
