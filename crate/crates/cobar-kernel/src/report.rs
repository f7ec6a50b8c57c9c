use serde::Serialize;

/// Witnesses kept per report; the total count is always recorded.
const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one verified property on one space.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub property: String,
    pub space: String,
    pub bound: usize,
    pub status: Status,
    pub checked: usize,
    pub failures: usize,
    pub witnesses: Vec<String>,
}

impl Report {
    pub fn new(property: impl Into<String>, space: impl Into<String>, bound: usize) -> Report {
        Report {
            property: property.into(),
            space: space.into(),
            bound,
            status: Status::Pass,
            checked: 0,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    /// Records one check; `witness` is only evaluated on failure.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(witness());
        }
    }

    pub fn fail(&mut self, witness: String) {
        self.status = Status::Fail;
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Folds another report's outcome into this one.
    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        let kept = other.witnesses.len().min(other.failures);
        for w in other.witnesses {
            self.fail(format!("{}: {w}", other.property));
        }
        self.failures += other.failures - kept;
        if other.status == Status::Fail {
            self.status = Status::Fail;
        }
    }

    pub fn summary_line(&self) -> String {
        let verdict = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        let mut line = format!(
            "{verdict} {} on {} (bound {}, {} checks",
            self.property, self.space, self.bound, self.checked
        );
        if self.failures > 0 {
            line.push_str(&format!(", {} failures", self.failures));
        }
        line.push(')');
        if let Some(w) = self.witnesses.first() {
            line.push_str(&format!(" first witness: {w}"));
        }
        line
    }
}
