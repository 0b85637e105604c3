use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Where a failing (or worst-case) residual was found. `row`/`col` are
/// basis labels of the window; `letters` are the generators involved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub letters: Vec<usize>,
    pub row: String,
    pub col: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayTable {
    pub mu: String,
    pub n: Vec<usize>,
    pub rows: Vec<DecayRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub beta: String,
    pub norms: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub params: Map<String, Value>,
    /// Residual, eigenvalue or count, depending on the check.
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<DecayTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_time_ms: f64,
}

impl CheckRecord {
    pub fn new(name: &str) -> Self {
        CheckRecord {
            name: name.into(),
            params: Map::new(),
            value: None,
            tolerance: None,
            pass: false,
            witness: None,
            table: None,
            error: None,
            wall_time_ms: 0.0,
        }
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.into(), v.into());
        self
    }

    /// `value <= tolerance`.
    pub fn below(mut self, value: f64, tol: f64) -> Self {
        self.value = Some(value);
        self.tolerance = Some(tol);
        self.pass = value <= tol;
        self
    }

    pub fn verdict(mut self, value: f64, pass: bool) -> Self {
        self.value = Some(value);
        self.pass = pass;
        self
    }

    pub fn witness(mut self, w: Option<Witness>) -> Self {
        self.witness = w;
        self
    }

    pub fn failed(mut self, e: impl std::fmt::Display) -> Self {
        self.error = Some(e.to_string());
        self.pass = false;
        self
    }
}

/// Times `f` and stamps the record.
pub fn timed(f: impl FnOnce() -> CheckRecord) -> CheckRecord {
    let start = Instant::now();
    let mut r = f();
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: crate::config::RunConfig,
    /// The resolved deformation, row-major `[re, im]`, diagonal `null`.
    pub q: Vec<Vec<Option<[f64; 2]>>>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Every decay table as CSV: `check,mu,beta,n,norm`.
    pub fn decay_csv(&self) -> String {
        let mut out = String::from("check,mu,beta,n,norm\n");
        for c in &self.checks {
            if let Some(t) = &c.table {
                for row in &t.rows {
                    for (n, v) in t.n.iter().zip(&row.norms) {
                        out.push_str(&format!("{},{},{},{n},{v:e}\n", c.name, csv_field(&t.mu), csv_field(&row.beta)));
                    }
                }
            }
        }
        out
    }

    /// Writes the JSON report to `path` and, if there are decay tables, the
    /// CSV next to it (`<stem>.decay.csv`).
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        if self.checks.iter().any(|c| c.table.is_some()) {
            std::fs::write(path.with_extension("decay.csv"), self.decay_csv())?;
        }
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', ';']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
