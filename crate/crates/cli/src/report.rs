//! Verdicts and output documents.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::config::SCHEMA;
use crate::error::{CliError, ExitStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Inconclusive,
    Fail,
}

impl Outcome {
    /// The worse of two outcomes.
    pub fn and(self, other: Outcome) -> Outcome {
        self.max(other)
    }

    pub fn from_pass(pass: bool) -> Outcome {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn all(it: impl IntoIterator<Item = Outcome>) -> Outcome {
        it.into_iter().fold(Outcome::Pass, Outcome::and)
    }

    pub fn exit_status(self) -> ExitStatus {
        match self {
            Outcome::Pass => ExitStatus::Pass,
            Outcome::Inconclusive => ExitStatus::Inconclusive,
            Outcome::Fail => ExitStatus::Fail,
        }
    }
}

/// Side files of an instance: path relative to the output directory →
/// contents.
pub type Files = BTreeMap<String, Vec<u8>>;

/// The result of one instance: its report section and any side files
/// (relative path → contents).
#[derive(Debug)]
pub struct InstanceOutput {
    pub name: String,
    pub outcome: Outcome,
    pub body: serde_json::Value,
    pub files: Files,
    pub millis: f64,
}

#[derive(Serialize)]
struct InstanceSection<'a> {
    name: &'a str,
    verdict: Outcome,
    #[serde(flatten)]
    body: &'a serde_json::Value,
}

#[derive(Serialize)]
struct Report<'a> {
    schema: &'static str,
    command: &'a str,
    seed: u64,
    verdict: Outcome,
    notes: &'a [&'static str],
    instances: Vec<InstanceSection<'a>>,
}

#[derive(Serialize)]
struct Timing<'a> {
    name: &'a str,
    millis: f64,
}

/// Writes `report.json`, the instances' side files, and `timings.json` to
/// `out`, and returns the overall outcome.
pub fn write(out: &Path, command: &str, seed: u64, notes: &[&'static str], outputs: &[InstanceOutput]) -> Result<Outcome, CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let verdict = Outcome::all(outputs.iter().map(|o| o.outcome));
    let report = Report {
        schema: SCHEMA,
        command,
        seed,
        verdict,
        notes,
        instances: outputs
            .iter()
            .map(|o| InstanceSection {
                name: &o.name,
                verdict: o.outcome,
                body: &o.body,
            })
            .collect(),
    };
    write_json(&out.join("report.json"), &report)?;
    for o in outputs {
        for (rel, bytes) in &o.files {
            let path = out.join(rel);
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        }
    }
    let timings: Vec<Timing> = outputs
        .iter()
        .map(|o| Timing {
            name: &o.name,
            millis: o.millis,
        })
        .collect();
    write_json(&out.join("timings.json"), &timings)?;
    Ok(verdict)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
