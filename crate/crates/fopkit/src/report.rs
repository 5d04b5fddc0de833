//! Machine-readable reports, schema `fopkit-report/1`.
//!
//! ```json
//! {
//!   "schema": "fopkit-report/1",
//!   "command": "verify reduction",
//!   "verdict": "ok" | "counterexample" | "error",
//!   "value": true,                       // eval, image
//!   "sizes": { "min": 1, "max": 4 },     // exhaustive checks
//!   "checked": 262144,
//!   "counterexample": {
//!     "structure": "struct A : graph { ... }",
//!     "images": [ { "label": "p(A)", "value": "struct ..." } ],
//!     "memberships": [ { "label": "A in IS", "value": true } ]
//!   },
//!   "output": "...",                     // printed result (structure, formula, witness)
//!   "notes": [ "..." ],
//!   "message": "...",                    // errors
//!   "duration_ms": 12.5
//! }
//! ```
//!
//! Absent fields are omitted. The verdict determines the exit code: `ok` is
//! 0, `counterexample` is 1 and `error` is 2. A false sentence in `eval` is a
//! `counterexample` whose payload is the input structure.

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "fopkit-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Ok,
    Counterexample,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Ok => 0,
            Verdict::Counterexample => 1,
            Verdict::Error => 2,
        }
    }
}

impl From<fopkit_core::Verdict> for Verdict {
    fn from(v: fopkit_core::Verdict) -> Self {
        match v {
            fopkit_core::Verdict::Verified => Verdict::Ok,
            fopkit_core::Verdict::Counterexample => Verdict::Counterexample,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sizes {
    pub min: usize,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labelled<T> {
    pub label: String,
    #[serde(alias = "structure")]
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub structure: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub images: Vec<Labelled<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub memberships: Vec<Labelled<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Sizes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checked: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub duration_ms: f64,
}

impl Report {
    pub fn new(command: &str, verdict: Verdict) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            verdict,
            value: None,
            sizes: None,
            checked: None,
            counterexample: None,
            output: None,
            notes: Vec::new(),
            message: None,
            duration_ms: 0.0,
        }
    }

    pub fn error(command: &str, message: impl Into<String>) -> Self {
        Report {
            message: Some(message.into()),
            ..Report::new(command, Verdict::Error)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering (without timing).
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(o) = &self.output {
            out.push_str(o);
            if !o.ends_with('\n') {
                out.push('\n');
            }
        }
        let range = self
            .sizes
            .map(|s| format!(" for sizes {}..={}", s.min, s.max))
            .unwrap_or_default();
        let checked = self
            .checked
            .map(|c| format!(", {c} structures checked"))
            .unwrap_or_default();
        match self.verdict {
            Verdict::Ok if self.sizes.is_some() => {
                out.push_str(&format!("verified{range}{checked}\n"))
            }
            Verdict::Counterexample if self.sizes.is_some() => {
                out.push_str(&format!("counterexample{range}{checked}\n"))
            }
            Verdict::Error => out.push_str(&format!(
                "error: {}\n",
                self.message.as_deref().unwrap_or("failed")
            )),
            _ => {}
        }
        if let Some(cx) = &self.counterexample {
            out.push_str(&cx.structure);
            out.push('\n');
            for m in &cx.memberships {
                out.push_str(&format!("  {}: {}\n", m.label, m.value));
            }
            for i in &cx.images {
                out.push_str(&format!("  {} = {}\n", i.label, i.value));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("verify reduction", Verdict::Counterexample);
        r.sizes = Some(Sizes { min: 1, max: 3 });
        r.checked = Some(7);
        r.counterexample = Some(Counterexample {
            structure: "struct A : graph { size = 1; E = {}; k = 0; }".into(),
            images: vec![Labelled {
                label: "p(A)".into(),
                value: "struct B : graph { size = 1; E = {(0,0)}; k = 0; }".into(),
            }],
            memberships: vec![
                Labelled {
                    label: "A in IS".into(),
                    value: true,
                },
                Labelled {
                    label: "p(A) in IS".into(),
                    value: false,
                },
            ],
        });
        r.duration_ms = 1.5;
        let json = r.to_json();
        assert_eq!(Report::from_json(&json).unwrap(), r);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["verdict"], "counterexample");
        assert!(v.get("message").is_none());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Verdict::Ok.exit_code(), 0);
        assert_eq!(Verdict::Counterexample.exit_code(), 1);
        assert_eq!(Verdict::Error.exit_code(), 2);
        assert_eq!(Report::error("eval", "bad").render(), "error: bad\n");
    }
}
