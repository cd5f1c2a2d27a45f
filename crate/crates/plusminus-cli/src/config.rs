use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use plusminus::formal::{preset, CurveParams};
use plusminus::padic::is_prime;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Trace,
    Ranks,
    Cyclicity,
    Torsion,
    Lambda,
    All,
}

impl CheckKind {
    pub const CONCRETE: [CheckKind; 5] =
        [CheckKind::Trace, CheckKind::Ranks, CheckKind::Cyclicity, CheckKind::Torsion, CheckKind::Lambda];

    pub fn parse(s: &str) -> Result<Self, CliError> {
        serde_json::from_value(serde_json::Value::String(s.trim().to_string()))
            .map_err(|_| CliError::Config(format!("unknown check {s:?}")))
    }
}

/// Either a preset name or the Weierstrass coefficients [a1, a2, a3, a4, a6].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveSpec {
    Preset(String),
    Coefficients([i64; 5]),
}

impl CurveSpec {
    pub fn coefficients(&self) -> Result<[i64; 5], CliError> {
        match self {
            CurveSpec::Preset(name) => preset(name).ok_or_else(|| CliError::Config(format!("unknown curve preset {name:?}"))),
            CurveSpec::Coefficients(a) => Ok(*a),
        }
    }
}

fn default_checks() -> Vec<CheckKind> {
    vec![CheckKind::All]
}
fn default_lattice_precision() -> u32 {
    12
}
fn default_module_precision() -> u32 {
    20
}
fn default_trials() -> usize {
    200
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub p: Vec<u64>,
    pub d: Vec<usize>,
    pub n_max: i64,
    /// Working precision of the trace checks.
    pub precision: u32,
    #[serde(default = "default_lattice_precision")]
    pub lattice_precision: u32,
    #[serde(default = "default_module_precision")]
    pub module_precision: u32,
    #[serde(default)]
    pub curve: Option<CurveSpec>,
    /// Per-prime overrides keyed by the decimal prime.
    #[serde(default)]
    pub curves: BTreeMap<String, CurveSpec>,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub lambda_trials: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl CampaignConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: CampaignConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.p.is_empty() {
            return Err(CliError::Config("empty p-list".into()));
        }
        if self.d.is_empty() {
            return Err(CliError::Config("empty d-list".into()));
        }
        if let Some(&p) = self.p.iter().find(|&&p| p == 2 || !is_prime(p)) {
            return Err(CliError::Config(format!("{p} is not an odd prime")));
        }
        if self.d.contains(&0) {
            return Err(CliError::Config("d must be at least 1".into()));
        }
        if self.n_max < -1 {
            return Err(CliError::Config(format!("n_max = {} is below -1", self.n_max)));
        }
        if self.precision == 0 || self.lattice_precision == 0 || self.module_precision == 0 {
            return Err(CliError::Config("precisions must be positive".into()));
        }
        if self.checks.is_empty() {
            return Err(CliError::Config("no checks selected".into()));
        }
        for &p in &self.p {
            self.curve_for(p)?;
        }
        Ok(())
    }

    pub fn curve_for(&self, p: u64) -> Result<[i64; 5], CliError> {
        self.curves
            .get(&p.to_string())
            .or(self.curve.as_ref())
            .ok_or_else(|| CliError::Config(format!("no curve given for p = {p}")))?
            .coefficients()
    }

    pub fn selected(&self) -> Vec<CheckKind> {
        if self.checks.contains(&CheckKind::All) {
            return CheckKind::CONCRETE.to_vec();
        }
        let mut v = self.checks.clone();
        v.sort();
        v.dedup();
        v
    }
}

/// The curve gate: the model must have good supersingular reduction with a_p = 0.
pub fn gate(a: [i64; 5], p: u64) -> Result<CurveParams, String> {
    CurveParams::new(a, p).map_err(|e| e.to_string())
}
