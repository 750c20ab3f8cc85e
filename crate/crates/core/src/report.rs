//! Structured outcomes of verification runs.
//!
//! Reports form a tree. A node's verdict is the worst of its own verdict
//! and its children's, so the root fails as soon as any certificate fails.
//! Facts are kept in a `BTreeMap` and JSON is produced without timings, so
//! identical inputs give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::linalg::{ExactnessCertificate, Matrix, Scope};
use crate::ring::Element;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub subject: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<Scope>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub facts: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<VerificationReport>,
}

impl VerificationReport {
    pub fn new(check: &str, subject: impl Into<String>) -> Self {
        VerificationReport {
            check: check.to_string(),
            subject: subject.into(),
            verdict: Verdict::Pass,
            scope: None,
            facts: BTreeMap::new(),
            children: Vec::new(),
        }
    }

    pub fn fact(mut self, key: &str, value: impl Serialize) -> Self {
        self.facts.insert(key.to_string(), serde_json::to_value(value).expect("serializable fact"));
        self
    }

    pub fn with_scope(mut self, scope: Scope) -> Self {
        self.scope = Some(self.scope.map_or(scope, |s| s.merge(scope)));
        if !scope.is_conclusive() && self.verdict == Verdict::Pass {
            self.verdict = Verdict::Inconclusive;
        }
        self
    }

    pub fn verdict(mut self, v: Verdict) -> Self {
        self.verdict = self.verdict.max(v);
        self
    }

    /// Fail unless `ok`, recording `what` as the reason.
    pub fn require(self, ok: bool, what: &str) -> Self {
        if ok {
            self
        } else {
            self.fail(what)
        }
    }

    pub fn fail(mut self, reason: &str) -> Self {
        self.verdict = Verdict::Fail;
        self.facts
            .entry("failure".to_string())
            .or_insert_with(|| Value::String(reason.to_string()));
        self
    }

    pub fn child(mut self, c: VerificationReport) -> Self {
        self.verdict = self.verdict.max(c.verdict);
        self.children.push(c);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// The deepest first failing node in depth-first order.
    pub fn first_failure(&self) -> Option<&VerificationReport> {
        if self.verdict != Verdict::Fail {
            return None;
        }
        self.children.iter().find_map(|c| c.first_failure()).or(Some(self))
    }

    /// Depth-first search for a node by check key.
    pub fn find(&self, check: &str) -> Option<&VerificationReport> {
        if self.check == check {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(check))
    }

    /// Number of nodes with this check key.
    pub fn count(&self, check: &str) -> usize {
        (self.check == check) as usize + self.children.iter().map(|c| c.count(check)).sum::<usize>()
    }

    pub fn from_exactness(check: &str, subject: impl Into<String>, cert: &ExactnessCertificate) -> Self {
        let mut r = VerificationReport::new(check, subject)
            .with_scope(cert.scope)
            .fact("slices", &cert.slices);
        if let Some(w) = &cert.witness {
            r = r.fact("witness", w);
        }
        if !cert.pass {
            r = r.fail("kernel strictly larger than image");
        }
        r
    }

    /// Indented one-line-per-node text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, depth: usize) {
        let tag = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        let _ = write!(out, "{:indent$}[{tag}] {} :: {}", "", self.check, self.subject, indent = depth * 2);
        if let Some(s) = &self.scope {
            let _ = write!(out, " ({s})");
        }
        out.push('\n');
        for (k, v) in &self.facts {
            if matches!(v, Value::Array(a) if a.len() > 8) {
                continue;
            }
            let _ = writeln!(out, "{:indent$}  {k} = {v}", "", indent = depth * 2);
        }
        for c in &self.children {
            c.write_text(out, depth + 1);
        }
    }
}

/// Top-level JSON envelope.
pub fn envelope(report: &impl Serialize) -> Value {
    serde_json::json!({ "schema": SCHEMA_VERSION, "report": report })
}

pub(crate) fn ser_elements<S: Serializer>(v: &[Element], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|e| e.to_string()))
}

pub(crate) fn ser_matrix<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
    m.to_strings().serialize(s)
}

pub(crate) fn ser_matrices<S: Serializer>(v: &[Matrix], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|m| m.to_strings()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_propagate() {
        let r = VerificationReport::new("root", "x")
            .child(VerificationReport::new("a", "x"))
            .child(VerificationReport::new("b", "x").fail("broken"));
        assert!(r.failed());
        assert_eq!(r.first_failure().unwrap().check, "b");
        let inc = VerificationReport::new("root", "x")
            .child(VerificationReport::new("t", "x").with_scope(Scope::Truncated { degree: 3 }));
        assert_eq!(inc.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn json_is_deterministic() {
        let mk = || {
            VerificationReport::new("c", "s")
                .fact("zeta", 1)
                .fact("alpha", vec!["x", "y"])
                .with_scope(Scope::Degrees { lo: 0, hi: 8 })
        };
        let a = serde_json::to_string(&envelope(&mk())).unwrap();
        let b = serde_json::to_string(&envelope(&mk())).unwrap();
        assert_eq!(a, b);
        assert!(a.find("alpha").unwrap() < a.find("zeta").unwrap());
    }
}
