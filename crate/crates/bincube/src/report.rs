//! Structured verification reports with canonical JSON serialization.
//!
//! Every check suite produces a [`Report`]: the suite id, the inputs it ran
//! on, one [`Check`] per verified statement, and an overall verdict. Reports
//! serialize to a canonical JSON form (sorted keys, shortest round-trip float
//! formatting) so that identical runs produce byte-identical files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Version of the report JSON schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Overall outcome of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every check passed.
    Pass,
    /// At least one mathematical statement failed its check.
    Violation,
}

/// One verified statement.
///
/// `anchor` names the mathematical identity or inequality the check
/// embodies, as a stable slug (e.g. `"two_point_inequality"`), so report
/// consumers can trace each number back to the statement it certifies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    /// The computed quantity under test.
    pub observed: f64,
    /// Reference value or bound the observation is compared against.
    pub expected: Option<f64>,
    /// Tolerance used in the comparison.
    pub tolerance: f64,
    /// Signed slack in the comparison; nonnegative iff the check passed
    /// (up to the stated tolerance semantics).
    pub margin: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Check that `observed` is within `tolerance` of `expected`.
    pub fn equality(
        id: impl Into<String>,
        anchor: impl Into<String>,
        observed: f64,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        let err = (observed - expected).abs();
        Check {
            id: id.into(),
            anchor: anchor.into(),
            observed,
            expected: Some(expected),
            tolerance,
            margin: tolerance - err,
            pass: err <= tolerance,
            note: None,
        }
    }

    /// Check that `observed <= bound + tolerance`.
    pub fn upper_bound(
        id: impl Into<String>,
        anchor: impl Into<String>,
        observed: f64,
        bound: f64,
        tolerance: f64,
    ) -> Self {
        let margin = bound + tolerance - observed;
        Check {
            id: id.into(),
            anchor: anchor.into(),
            observed,
            expected: Some(bound),
            tolerance,
            margin,
            pass: margin >= 0.0,
            note: None,
        }
    }

    /// Check that `observed >= bound - tolerance`.
    pub fn lower_bound(
        id: impl Into<String>,
        anchor: impl Into<String>,
        observed: f64,
        bound: f64,
        tolerance: f64,
    ) -> Self {
        let margin = observed - (bound - tolerance);
        Check {
            id: id.into(),
            anchor: anchor.into(),
            observed,
            expected: Some(bound),
            tolerance,
            margin,
            pass: margin >= 0.0,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Result record of one verification suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    /// Echo of the inputs the suite ran on (stringified, key-sorted).
    pub inputs: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            inputs: BTreeMap::new(),
            checks: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    pub fn input(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn push(&mut self, check: Check) {
        if !check.pass {
            self.verdict = Verdict::Violation;
        }
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Finalize: canonical check ordering (sorted by id).
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }

    /// Canonical JSON: object keys sorted, floats in shortest round-trip
    /// form, two-space indentation, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        write_canonical(&value, 0, &mut out);
        out.push('\n');
        out
    }
}

/// Serialize any serde value to canonical JSON (sorted keys).
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("value serializes");
    let mut out = String::new();
    write_canonical(&value, 0, &mut out);
    out.push('\n');
    out
}

fn write_canonical(value: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let sorted: BTreeMap<_, _> = map.iter().collect();
            out.push_str("{\n");
            for (i, (k, v)) in sorted.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).unwrap());
                out.push_str(": ");
                write_canonical(v, indent + 1, out);
                if i + 1 < sorted.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_canonical(v, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}
