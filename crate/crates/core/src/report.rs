//! Machine-readable verdicts.

use std::fmt;
use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Inapplicable,
    Fail,
    Error,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inapplicable => "INAPPLICABLE",
            Verdict::Error => "ERROR",
        })
    }
}

/// Outcome of one check. A `Fail` always carries at least one witness line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub property: String,
    pub verdict: Verdict,
    pub witnesses: Vec<String>,
    pub parts: Vec<Report>,
    pub elapsed: Option<Duration>,
}

impl Report {
    fn with(property: impl Into<String>, verdict: Verdict, witnesses: Vec<String>) -> Self {
        Report {
            property: property.into(),
            verdict,
            witnesses,
            parts: Vec::new(),
            elapsed: None,
        }
    }

    pub fn pass(property: impl Into<String>) -> Self {
        Self::with(property, Verdict::Pass, Vec::new())
    }

    pub fn fail(property: impl Into<String>, witness: impl Into<String>) -> Self {
        Self::with(property, Verdict::Fail, vec![witness.into()])
    }

    pub fn inapplicable(property: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::with(property, Verdict::Inapplicable, vec![reason.into()])
    }

    pub fn error(property: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::with(property, Verdict::Error, vec![detail.into()])
    }

    /// Aggregates parts: the worst part verdict wins, except that a mix of
    /// passes and inapplicable parts still passes.
    pub fn from_parts(property: impl Into<String>, parts: Vec<Report>) -> Self {
        let verdict = if parts.is_empty() {
            Verdict::Pass
        } else if parts.iter().all(|p| p.verdict == Verdict::Inapplicable) {
            Verdict::Inapplicable
        } else {
            parts
                .iter()
                .map(|p| p.verdict)
                .filter(|v| *v != Verdict::Inapplicable)
                .max()
                .unwrap_or(Verdict::Pass)
        };
        let mut report = Self::with(property, verdict, Vec::new());
        if matches!(verdict, Verdict::Fail | Verdict::Error) {
            if let Some(first) = parts.iter().find(|p| p.verdict == verdict) {
                report
                    .witnesses
                    .push(format!("first failing part: {}", first.property));
            }
        }
        report.parts = parts;
        report
    }

    pub fn with_witness(mut self, line: impl Into<String>) -> Self {
        self.witnesses.push(line.into());
        self
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        self.elapsed = Some(elapsed);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn is(&self, verdict: Verdict) -> bool {
        self.verdict == verdict
    }

    /// Finds a part (or nested part) by property name.
    pub fn part(&self, property: &str) -> Option<&Report> {
        self.parts.iter().find_map(|p| {
            if p.property == property {
                Some(p)
            } else {
                p.part(property)
            }
        })
    }

    /// `PROPERTY <name> <verdict>` followed by indented witnesses, then parts.
    pub fn render(&self, timing: bool) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0, timing);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize, timing: bool) {
        let pad = "  ".repeat(depth);
        out.push_str(&format!(
            "{pad}PROPERTY {} {}\n",
            self.property, self.verdict
        ));
        for w in &self.witnesses {
            out.push_str(&format!("{pad}  {w}\n"));
        }
        if timing {
            if let Some(e) = self.elapsed {
                out.push_str(&format!("{pad}  time_ms={}\n", e.as_millis()));
            }
        }
        for p in &self.parts {
            p.render_into(out, depth + 1, timing);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregation_ignores_inapplicable_parts() {
        let r = Report::from_parts(
            "x",
            vec![Report::pass("a"), Report::inapplicable("b", "no kernels")],
        );
        assert_eq!(r.verdict, Verdict::Pass);
        let r = Report::from_parts("x", vec![Report::pass("a"), Report::fail("b", "g")]);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!r.witnesses.is_empty());
    }

    #[test]
    fn render_format() {
        let r = Report::fail("normal", "regular epi f");
        assert_eq!(r.render(false), "PROPERTY normal FAIL\n  regular epi f\n");
    }
}
