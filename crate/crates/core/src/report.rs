//! Verdict records and their canonical text and JSON output.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::extension::ExtensionDatum;
use crate::fixture::canonical_json;
use crate::group_ring::GroupRingElt;

pub const REPORT_SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

/// Outcome of one check on one target.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub target: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub witness: BTreeMap<String, String>,
    /// The violated precondition of a skipped check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precondition: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Verdict {
    fn base(check: &str, target: &str, status: Status) -> Self {
        Verdict {
            check: check.into(),
            target: target.into(),
            character: None,
            status,
            witness: BTreeMap::new(),
            precondition: None,
            elapsed: Duration::ZERO,
        }
    }

    /// Pass or fail; a failure always carries the witness.
    pub fn outcome(check: &str, target: &str, ok: bool, witness: Vec<(&str, String)>) -> Self {
        let mut v = Self::base(check, target, if ok { Status::Pass } else { Status::Fail });
        v.witness = witness
            .into_iter()
            .map(|(k, x)| (k.to_string(), x))
            .collect();
        if !ok && v.witness.is_empty() {
            v.witness
                .insert("reason".into(), "check returned false".into());
        }
        v
    }

    pub fn skip(check: &str, target: &str, precondition: impl Into<String>) -> Self {
        let mut v = Self::base(check, target, Status::Skip);
        v.precondition = Some(precondition.into());
        v
    }

    pub fn with_character(mut self, chi: impl Into<String>) -> Self {
        self.character = Some(chi.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed = start.elapsed();
        self
    }

    fn sort_key(&self) -> (&str, &str, &str) {
        (
            &self.check,
            &self.target,
            self.character.as_deref().unwrap_or(""),
        )
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.status, self.check, self.target)?;
        if let Some(c) = &self.character {
            write!(f, " {c}")?;
        }
        for (k, v) in &self.witness {
            write!(f, " {k}={v}")?;
        }
        if let Some(p) = &self.precondition {
            write!(f, " ({p})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(mut verdicts: Vec<Verdict>) -> Self {
        verdicts.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Report { verdicts }
    }

    pub fn count(&self, status: Status) -> usize {
        self.verdicts.iter().filter(|v| v.status == status).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "verdicts": self.verdicts,
        });
        canonical_json(&value)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.verdicts {
            writeln!(f, "{v}")?;
        }
        write!(
            f,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip)
        )
    }
}

/// `x` with group elements written `σ_a`.
pub fn format_element(ext: &ExtensionDatum, x: &GroupRingElt) -> String {
    x.format_with(|g| format!("σ_{}", ext.label(g)))
}

/// Coefficients keyed by `σ_a`, as `a/b` strings.
pub fn coefficient_map(ext: &ExtensionDatum, x: &GroupRingElt) -> BTreeMap<String, String> {
    let group = ext.group();
    x.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            (
                format!("σ_{}", ext.label(&group.element_at(i))),
                crate::arith::format_rational(c),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_carry_witnesses_and_order_is_canonical() {
        let r = Report::new(vec![
            Verdict::outcome("b", "t", true, vec![]),
            Verdict::outcome("a", "t", false, vec![]),
            Verdict::skip("a", "s", "p divides |G|"),
        ]);
        let names: Vec<_> = r
            .verdicts
            .iter()
            .map(|v| (v.check.as_str(), v.target.as_str()))
            .collect();
        assert_eq!(names, vec![("a", "s"), ("a", "t"), ("b", "t")]);
        assert!(!r.verdicts[1].witness.is_empty());
        assert_eq!(r.exit_code(), 1);
        let json = r.to_canonical_json();
        assert!(json.starts_with("{\"schema_version\":\"1.0\",\"verdicts\":[{\"check\":\"a\""));
        assert!(!json.contains("elapsed"));
    }

    #[test]
    fn theta_of_gaussian_field_prints_with_sigma() {
        let ext = ExtensionDatum::from_conductor(4, &[]).unwrap();
        let x = GroupRingElt::from_coeffs(
            ext.group(),
            vec![crate::arith::rational(1, 4), crate::arith::rational(-1, 4)],
        );
        assert_eq!(format_element(&ext, &x), "1/4 - 1/4*σ_3");
    }
}
