use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Confirmed,
    Contradicted,
    Unknown,
    /// Recorded for context; not checked here.
    Assumed,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Confirmed => "confirmed",
            Outcome::Contradicted => "contradicted",
            Outcome::Unknown => "unknown",
            Outcome::Assumed => "assumed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Checked,
    ExternalAssumption,
    Unknown,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Checked => "checked",
            Provenance::ExternalAssumption => "external-assumption",
            Provenance::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub outcome: Outcome,
    pub provenance: Provenance,
    /// Witnesses, traces, or counts backing the outcome.
    pub evidence: Vec<String>,
    /// The checked statement is a finite stand-in for the real one.
    pub proxy: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Claim {
    /// A checked claim: confirmed if `ok`, contradicted otherwise.
    pub fn checked(id: impl Into<String>, statement: impl Into<String>, ok: bool, evidence: Vec<String>) -> Claim {
        Claim {
            id: id.into(),
            statement: statement.into(),
            outcome: if ok { Outcome::Confirmed } else { Outcome::Contradicted },
            provenance: Provenance::Checked,
            evidence,
            proxy: false,
            note: None,
        }
    }

    pub fn unknown(id: impl Into<String>, statement: impl Into<String>, evidence: Vec<String>) -> Claim {
        Claim {
            id: id.into(),
            statement: statement.into(),
            outcome: Outcome::Unknown,
            provenance: Provenance::Unknown,
            evidence,
            proxy: false,
            note: None,
        }
    }

    pub fn external(id: impl Into<String>, statement: impl Into<String>, note: impl Into<String>) -> Claim {
        Claim {
            id: id.into(),
            statement: statement.into(),
            outcome: Outcome::Assumed,
            provenance: Provenance::ExternalAssumption,
            evidence: Vec::new(),
            proxy: false,
            note: Some(note.into()),
        }
    }

    pub fn as_proxy(mut self, note: impl Into<String>) -> Claim {
        self.proxy = true;
        self.note = Some(note.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Claim {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub status: Status,
    pub claims: Vec<Claim>,
}

impl ScenarioReport {
    /// External assumptions are carried along but never affect the status.
    pub fn new(scenario: impl Into<String>, claims: Vec<Claim>) -> ScenarioReport {
        let counted = claims.iter().filter(|c| c.provenance != Provenance::ExternalAssumption);
        let mut status = Status::Pass;
        for c in counted {
            match (c.outcome, c.provenance) {
                (Outcome::Contradicted, _) => return ScenarioReport { scenario: scenario.into(), status: Status::Fail, claims },
                (Outcome::Confirmed, Provenance::Checked) => {}
                _ => status = Status::Unknown,
            }
        }
        ScenarioReport { scenario: scenario.into(), status, claims }
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }

    /// `claim-id: verdict [witness]` lines under a header.
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for ScenarioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}: {}", self.scenario, self.status.as_str())?;
        for c in &self.claims {
            write!(f, "{}: {}", c.id, c.outcome.as_str())?;
            if !c.evidence.is_empty() {
                write!(f, " [{}]", c.evidence.join("; "))?;
            }
            if c.provenance != Provenance::Checked {
                write!(f, " ({})", c.provenance.as_str())?;
            }
            if c.proxy {
                write!(f, " (proxy)")?;
            }
            writeln!(f)?;
            writeln!(f, "  # {}", c.statement)?;
            if let Some(n) = &c.note {
                writeln!(f, "  # note: {n}")?;
            }
        }
        Ok(())
    }
}
