//! Report assembly and serialization. JSON reports are
//! `{config, claims, summary}`; CSV flattens the claims table; the human
//! format prints one line per claim. Identical configurations (including
//! seeds) produce byte-identical output: claims are emitted in generation
//! order, JSON objects serialize with sorted keys, and nothing depends on
//! time, floats, or hash iteration order.

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

use crate::Format;

/// Stable claim identifiers attached to every report row.
pub mod anchors {
    pub const THM1_BOUND: &str = "Thm1/Eq4";
    pub const THM1_EQUALITY_SET: &str = "Thm1/EqualitySet";
    pub const THM2_SANDWICH: &str = "Thm2/Eq2";
    pub const THM2_EQUALITY: &str = "Thm2/Eq3";
    pub const MANSOUR: &str = "Eq9/Mansour";
    pub const LCM_BINOM: &str = "Eq10/LcmBinom";
    pub const IDENTITY11: &str = "Eq11";
    pub const TAYLOR: &str = "Eq13/Taylor";
    pub const TAYLOR_EVAL: &str = "Eq13/Eval";
    pub const EQ14: &str = "Eq14";
    pub const EQ14_TELESCOPE: &str = "Eq14/Telescope";
    pub const EQINT1: &str = "Eqint1";
    pub const EQINT2: &str = "Eqint2/Dubickas";
    pub const LP_FUNCTIONAL: &str = "Lp/FunctionalEq";
    pub const LP_SERIES: &str = "Lp/Series";
}

#[derive(Serialize)]
pub struct Report {
    pub config: Value,
    pub claims: Vec<Claim>,
    pub summary: Summary,
}

#[derive(Serialize)]
pub struct Claim {
    pub anchor: &'static str,
    pub params: Value,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Claim {
    pub fn new(anchor: &'static str, params: Value, passed: bool, witness: Option<Value>) -> Self {
        Self {
            anchor,
            params,
            verdict: if passed { Verdict::Pass } else { Verdict::Fail },
            witness,
        }
    }
}

#[derive(Serialize, Copy, Clone, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn new(config: Value, claims: Vec<Claim>) -> Self {
        let total = claims.len();
        let passed = claims.iter().filter(|c| c.verdict == Verdict::Pass).count();
        Self {
            config,
            claims,
            summary: Summary {
                total,
                passed,
                failed: total - passed,
            },
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn emit(&self, format: Format) -> Result<()> {
        match format {
            Format::Json => println!("{}", serde_json::to_string_pretty(self)?),
            Format::Csv => {
                let mut writer = csv::Writer::from_writer(std::io::stdout());
                writer.write_record(["anchor", "verdict", "params", "witness"])?;
                for claim in &self.claims {
                    writer.write_record([
                        claim.anchor,
                        match claim.verdict {
                            Verdict::Pass => "pass",
                            Verdict::Fail => "fail",
                        },
                        &serde_json::to_string(&claim.params)?,
                        &claim
                            .witness
                            .as_ref()
                            .map(serde_json::to_string)
                            .transpose()?
                            .unwrap_or_default(),
                    ])?;
                }
                writer.flush()?;
            }
            Format::Human => {
                println!("config: {}", kv_string(&self.config));
                for claim in &self.claims {
                    let mark = match claim.verdict {
                        Verdict::Pass => "PASS",
                        Verdict::Fail => "FAIL",
                    };
                    let mut line =
                        format!("{mark} {:<18} {}", claim.anchor, kv_string(&claim.params));
                    if let Some(witness) = &claim.witness {
                        line.push_str(" | ");
                        line.push_str(&kv_string(witness));
                    }
                    println!("{line}");
                }
                println!(
                    "summary: {}/{} claims verified{}",
                    self.summary.passed,
                    self.summary.total,
                    if self.summary.failed > 0 {
                        format!(", {} FAILED", self.summary.failed)
                    } else {
                        String::new()
                    }
                );
            }
        }
        Ok(())
    }
}

fn kv_string(value: &Value) -> String {
    match value.as_object() {
        Some(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar(v)))
            .collect::<Vec<_>>()
            .join(" "),
        None => scalar(value),
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
