//! Pass/fail checks with means ± 2 standard errors.

use std::fmt;

/// Ordering checks need at least this many repetitions to be judged.
pub const MIN_REPETITIONS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Insufficient,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Insufficient => "insufficient repetitions",
        })
    }
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub label: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.label, self.verdict, self.detail)
    }
}

/// A sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    pub fn new(mean: f64, se: f64) -> Self {
        Estimate { mean, se }
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} ± {:.4}", self.mean, 2.0 * self.se)
    }
}

/// `a > b` by more than two combined standard errors.
pub fn greater(label: impl Into<String>, a: Estimate, b: Estimate, reps: usize) -> Check {
    let gap = a.mean - b.mean;
    let bound = 2.0 * a.se.hypot(b.se);
    Check {
        label: label.into(),
        verdict: gated(reps, gap > bound),
        detail: format!("{a} vs {b}, gap {gap:.4}, 2 combined s.e. {bound:.4}"),
    }
}

/// `a < b` with non-overlapping ±2 s.e. intervals.
pub fn separated_below(label: impl Into<String>, a: Estimate, b: Estimate, reps: usize) -> Check {
    Check {
        label: label.into(),
        verdict: gated(reps, a.mean + 2.0 * a.se < b.mean - 2.0 * b.se),
        detail: format!("{a} vs {b}"),
    }
}

pub fn gated(reps: usize, ok: bool) -> Verdict {
    if reps < MIN_REPETITIONS {
        Verdict::Insufficient
    } else {
        Verdict::from_bool(ok)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Report::default()
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn find(&self, label: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label == label)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for n in &self.notes {
            writeln!(f, "  {n}")?;
        }
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
