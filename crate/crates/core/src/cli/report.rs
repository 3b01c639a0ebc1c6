use std::fmt::Write as _;

use serde::Serialize;

use super::{Format, RunConfig};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    /// The statement being checked, in words.
    pub statement: String,
    pub passed: bool,
    /// Number of individual evaluations behind the verdict.
    pub evaluations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Serialized inputs reproducing a failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

impl CheckResult {
    pub fn pass(name: &str, statement: &str, evaluations: usize) -> Self {
        CheckResult {
            name: name.into(),
            statement: statement.into(),
            passed: true,
            evaluations,
            detail: None,
            counterexample: None,
            millis: None,
        }
    }

    pub fn fail(name: &str, statement: &str, evaluations: usize, counterexample: String) -> Self {
        CheckResult { passed: false, counterexample: Some(counterexample), ..Self::pass(name, statement, evaluations) }
    }

    /// Pass iff `bad` is empty; the first offender becomes the counterexample.
    pub fn from_failures(name: &str, statement: &str, evaluations: usize, bad: &[String]) -> Self {
        match bad.first() {
            None => Self::pass(name, statement, evaluations),
            Some(b) => {
                let mut c = Self::fail(name, statement, evaluations, b.clone());
                c.detail = Some(format!("{} failures", bad.len()));
                c
            }
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => {
                let mut s = String::from("suite,check,status,evaluations,detail,counterexample\n");
                for c in &self.checks {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        csv_field(&self.suite),
                        csv_field(&c.name),
                        if c.passed { "PASS" } else { "FAIL" },
                        c.evaluations,
                        csv_field(c.detail.as_deref().unwrap_or("")),
                        csv_field(c.counterexample.as_deref().unwrap_or(""))
                    );
                }
                s
            }
            Format::Text => {
                let mut s = format!("suite: {}\nconfig: {}\n", self.suite, self.config.echo());
                for c in &self.checks {
                    let _ = write!(s, "{}  {:<34} {:>8}  {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.evaluations, c.statement);
                    if let Some(d) = &c.detail {
                        let _ = write!(s, " [{d}]");
                    }
                    if let Some(ms) = c.millis {
                        let _ = write!(s, " ({ms} ms)");
                    }
                    s.push('\n');
                    if let Some(ce) = &c.counterexample {
                        let _ = writeln!(s, "      counterexample: {ce}");
                    }
                }
                let n = self.checks.len();
                let _ = writeln!(s, "result: {} ({}/{n} passed)", if self.passed() { "PASS" } else { "FAIL" }, n - self.failures());
                if let Some(ms) = self.millis {
                    let _ = writeln!(s, "elapsed: {ms} ms");
                }
                s
            }
        }
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
