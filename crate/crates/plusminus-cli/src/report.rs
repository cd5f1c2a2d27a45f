use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::CampaignConfig;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 10] = ["p", "d", "n", "chi", "sign", "check", "expected", "measured", "residual_val", "pass"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    PrecisionExhausted,
    GateRejected,
}

/// One measured quantity next to its closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub p: u64,
    pub d: Option<usize>,
    pub n: Option<i64>,
    pub chi: Option<String>,
    pub sign: Option<String>,
    pub check: String,
    pub expected: String,
    pub measured: String,
    pub residual_val: Option<i64>,
    pub pass: bool,
    pub outcome: Outcome,
    /// The closed form the expected value comes from.
    pub formula: String,
}

impl Record {
    pub fn new(p: u64, check: &str, formula: &str) -> Self {
        Record {
            p,
            d: None,
            n: None,
            chi: None,
            sign: None,
            check: check.to_string(),
            expected: String::new(),
            measured: String::new(),
            residual_val: None,
            pass: false,
            outcome: Outcome::Fail,
            formula: formula.to_string(),
        }
    }

    pub fn d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }
    pub fn n(mut self, n: i64) -> Self {
        self.n = Some(n);
        self
    }
    pub fn chi(mut self, chi: usize) -> Self {
        self.chi = Some(chi_label(chi));
        self
    }
    pub fn sign(mut self, sign: &str) -> Self {
        self.sign = Some(sign.to_string());
        self
    }
    pub fn residual(mut self, v: i64) -> Self {
        self.residual_val = Some(v);
        self
    }

    /// Fills expected/measured and sets the verdict from `pass`.
    pub fn values(mut self, expected: impl ToString, measured: impl ToString, pass: bool) -> Self {
        self.expected = expected.to_string();
        self.measured = measured.to_string();
        self.pass = pass;
        self.outcome = if pass { Outcome::Pass } else { Outcome::Fail };
        self
    }

    pub fn failed_with(mut self, expected: impl ToString, err: &plusminus::Error) -> Self {
        self.expected = expected.to_string();
        self.measured = format!("error: {err}");
        self.pass = false;
        self.outcome = match err {
            plusminus::Error::PrecisionExhausted(_) => Outcome::PrecisionExhausted,
            _ => Outcome::Fail,
        };
        self
    }

    fn csv_fields(&self) -> [String; 10] {
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        [
            self.p.to_string(),
            self.d.map(|d| d.to_string()).unwrap_or_default(),
            self.n.map(|n| n.to_string()).unwrap_or_default(),
            opt(&self.chi),
            opt(&self.sign),
            self.check.clone(),
            self.expected.clone(),
            self.measured.clone(),
            self.residual_val.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
            self.pass.to_string(),
        ]
    }
}

/// "triv" for the trivial character, "w^j" for ω^j.
pub fn chi_label(j: usize) -> String {
    if j == 0 {
        "triv".into()
    } else {
        format!("w^{j}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub failed: usize,
    pub precision_exhausted: usize,
    pub gate_rejected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub seed: u64,
    pub config: Option<CampaignConfig>,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: Option<CampaignConfig>, seed: u64, records: Vec<Record>) -> Self {
        let count = |o: Outcome| records.iter().filter(|r| r.outcome == o).count();
        let summary = Summary {
            records: records.len(),
            failed: records.iter().filter(|r| !r.pass).count(),
            precision_exhausted: count(Outcome::PrecisionExhausted),
            gate_rejected: count(Outcome::GateRejected),
        };
        Report { schema_version: SCHEMA_VERSION, seed, config, records, summary }
    }

    /// 0 all pass, 1 check failure, 2 curve rejected by the gate, 3 precision exhausted.
    pub fn exit_code(&self) -> i32 {
        if self.summary.gate_rejected > 0 {
            2
        } else if self.summary.precision_exhausted > 0 {
            3
        } else if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let r: Report = serde_json::from_str(text).map_err(|e| CliError::Config(format!("report: {e}")))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!("unsupported schema_version {}", r.schema_version)));
        }
        Ok(r)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        for r in &self.records {
            w.write_record(r.csv_fields())?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    pub fn to_markdown(&self) -> String {
        let mut out = Vec::new();
        writeln!(out, "| {} |", CSV_HEADER.join(" | ")).unwrap();
        writeln!(out, "|{}", "---|".repeat(CSV_HEADER.len())).unwrap();
        for r in &self.records {
            let cells: Vec<String> = r.csv_fields().iter().map(|c| c.replace('|', "\\|")).collect();
            writeln!(out, "| {} |", cells.join(" | ")).unwrap();
        }
        String::from_utf8(out).expect("markdown is utf-8")
    }
}
