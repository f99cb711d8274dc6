//! Run reports: the structured record every run driver produces.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One elitist improvement: the evaluation count and elapsed time at which a
/// new best fitness appeared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub evaluations: u64,
    pub ms: u64,
    pub fitness: Vec<i64>,
}

/// One archive-improvement sample of normalized hypervolume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HvRecord {
    pub evaluations: u64,
    pub ms: u64,
    pub hypervolume: f64,
}

/// One elitist-archive member in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub fitness: [i64; 2],
    pub genotype: String,
}

/// The complete record of one run. Everything except the `ms` timing fields
/// is a pure function of (problem, algorithm, seed, limits).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: String,
    pub algorithm: String,
    pub seed: u64,
    pub success: bool,
    pub stop_reason: String,
    /// evaluations to the target when successful, else total consumed
    pub evaluations: u64,
    pub total_evaluations: u64,
    pub milliseconds: u64,
    pub best_fitness: Vec<i64>,
    pub population_sizes: Vec<usize>,
    pub population_evaluations: Vec<u64>,
    pub trace: Vec<TraceRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hv_trace: Vec<HvRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_hypervolume: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub archive: Option<Vec<ArchiveEntry>>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// The elitist-improvement trace as line-delimited records
    /// (`evaluations ms fitness...`), the run-trace log format.
    pub fn trace_text(&self) -> String {
        let mut out = String::new();
        for t in &self.trace {
            let fitness: Vec<String> = t.fitness.iter().map(|f| f.to_string()).collect();
            out.push_str(&format!("{} {} {}\n", t.evaluations, t.ms, fitness.join(" ")));
        }
        for h in &self.hv_trace {
            out.push_str(&format!("{} {} {}\n", h.evaluations, h.ms, h.hypervolume));
        }
        out
    }

    /// The report with wall-clock fields zeroed; two runs of the same seed
    /// must agree on this form byte-for-byte.
    pub fn canonical(&self) -> RunReport {
        let mut c = self.clone();
        c.milliseconds = 0;
        for t in &mut c.trace {
            t.ms = 0;
        }
        for h in &mut c.hv_trace {
            h.ms = 0;
        }
        c
    }
}
