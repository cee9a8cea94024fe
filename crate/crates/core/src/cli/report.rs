//! Pass/fail summary, one line per checked property.

use std::fmt;

use crate::numerics::format_g;

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: String,
    pub status: Status,
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound: format!("<= {}", format_g(bound, 6)),
            status: pass_if(measured <= bound),
        }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound: format!(">= {}", format_g(bound, 6)),
            status: pass_if(measured >= bound),
        }
    }

    pub fn greater(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound: format!("> {}", format_g(bound, 6)),
            status: pass_if(measured > bound),
        }
    }

    pub fn within(name: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound: format!("in [{}, {}]", format_g(lo, 6), format_g(hi, 6)),
            status: pass_if(measured >= lo && measured <= hi),
        }
    }

    pub fn not_applicable(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            measured: f64::NAN,
            bound: "-".into(),
            status: Status::NotApplicable(reason.into()),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::NotApplicable(why) => {
                write!(
                    f,
                    "{}  measured -  bound -  not applicable ({why})",
                    self.name
                )
            }
            s => write!(
                f,
                "{}  measured {}  bound {}  {}",
                self.name,
                format_g(self.measured, 6),
                self.bound,
                if *s == Status::Pass { "PASS" } else { "FAIL" }
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        !self.checks.iter().any(Check::failed)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s
    }
}
