//! Instance files, solver reports and similarity CSV output.
//!
//! Instance files are JSON:
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "examples": ["x1", "x2"],
//!   "concepts": ["c1", "c2"],
//!   "target": "c2",
//!   "consistency": [
//!     [1, 0],
//!     [0, 1]
//!   ],
//!   "gamma": [
//!     [0.1, 0.2],
//!     [0.1, 0.2]
//!   ]
//! }
//! ```
//!
//! An optional `example_weights` array replaces the uniform example
//! distribution. Decimals are written with 12 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heuristics::HeuristicScore;
use crate::instance::{Instance, SimilarityMode, TeachingSet};
use crate::optimize::{Objective, SolveResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Rounds to 12 significant digits.
pub fn round_sig(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

fn fmt_f64(v: f64) -> String {
    serde_json::to_string(&round_sig(v)).expect("finite float serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub examples: Vec<String>,
    pub concepts: Vec<String>,
    pub target: String,
    pub consistency: Vec<Vec<i64>>,
    pub gamma: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example_weights: Option<Vec<f64>>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::format(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        let target = self
            .concepts
            .iter()
            .position(|c| *c == self.target)
            .ok_or_else(|| Error::UnknownTarget(self.target.clone()))?;
        let mut consistency = Vec::with_capacity(self.consistency.len());
        for (c, row) in self.consistency.iter().enumerate() {
            let mut bits = Vec::with_capacity(row.len());
            for (x, &v) in row.iter().enumerate() {
                bits.push(match v {
                    0 => false,
                    1 => true,
                    other => {
                        return Err(Error::format(
                            format!(
                                "consistency (concept `{}`, example `{}`)",
                                name(&self.concepts, c),
                                name(&self.examples, x)
                            ),
                            format!("label {other} is not 0 or 1"),
                        ))
                    }
                });
            }
            consistency.push(bits);
        }
        let inst = Instance::new(self.examples, self.concepts, consistency, self.gamma, target)?;
        match self.example_weights {
            Some(w) => inst.with_example_weights(w),
            None => Ok(inst),
        }
    }
}

fn name(ids: &[String], i: usize) -> String {
    ids.get(i).cloned().unwrap_or_else(|| format!("#{i}"))
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        InstanceFile {
            schema_version: SCHEMA_VERSION,
            examples: inst.examples().to_vec(),
            concepts: inst.concepts().to_vec(),
            target: inst.concepts()[inst.target()].clone(),
            consistency: (0..inst.num_concepts())
                .map(|c| inst.consistency_row(c).iter().map(|&b| i64::from(b)).collect())
                .collect(),
            gamma: (0..inst.num_concepts()).map(|c| inst.gamma_row(c).to_vec()).collect(),
            example_weights: inst.example_weights().map(<[f64]>::to_vec),
        }
    }
}

pub fn parse_instance(bytes: &[u8]) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_slice(bytes).map_err(|e| {
        let location = format!("line {} column {}", e.line(), e.column());
        // serde_json appends the same location to its message
        let message = e.to_string();
        let message = message.strip_suffix(&format!(" at {location}")).unwrap_or(&message).to_string();
        Error::format(location, message)
    })?;
    file.into_instance()
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&std::fs::read(path)?)
}

/// Writes the instance with one matrix row per line.
pub fn serialize_instance(inst: &Instance) -> String {
    let file = InstanceFile::from(inst);
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"schema_version\": {},", file.schema_version);
    let _ = writeln!(out, "  \"examples\": {},", json(&file.examples));
    let _ = writeln!(out, "  \"concepts\": {},", json(&file.concepts));
    let _ = writeln!(out, "  \"target\": {},", json(&file.target));
    out.push_str("  \"consistency\": [\n");
    write_rows(&mut out, file.consistency.iter().map(|row| {
        row.iter().map(i64::to_string).collect::<Vec<_>>()
    }));
    out.push_str("  ],\n");
    out.push_str("  \"gamma\": [\n");
    write_rows(&mut out, file.gamma.iter().map(|row| row.iter().map(|&g| fmt_f64(g)).collect()));
    match &file.example_weights {
        Some(w) => {
            out.push_str("  ],\n");
            let cells: Vec<String> = w.iter().map(|&v| fmt_f64(v)).collect();
            let _ = writeln!(out, "  \"example_weights\": [{}]", cells.join(", "));
        }
        None => out.push_str("  ]\n"),
    }
    out.push_str("}\n");
    out
}

fn write_rows(out: &mut String, rows: impl ExactSizeIterator<Item = Vec<String>>) {
    let n = rows.len();
    for (i, row) in rows.enumerate() {
        let sep = if i + 1 < n { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", row.join(", "));
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

pub fn write_instance(path: impl AsRef<Path>, inst: &Instance) -> Result<()> {
    std::fs::write(path, serialize_instance(inst))?;
    Ok(())
}

/// `n × n` similarity matrix as CSV with concept ids on both axes.
pub fn similarity_csv(inst: &Instance, mode: SimilarityMode) -> String {
    let matrix = crate::instance::similarity_matrix(inst, mode);
    let mut out = String::from("concept");
    for id in inst.concepts() {
        out.push(',');
        out.push_str(id);
    }
    out.push('\n');
    for (id, row) in inst.concepts().iter().zip(matrix) {
        out.push_str(id);
        for v in row {
            let _ = write!(out, ",{}", round_sig(v));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportItem {
    pub example: String,
    pub label: u8,
}

pub fn report_items(inst: &Instance, set: &TeachingSet) -> Vec<ReportItem> {
    set.items()
        .iter()
        .map(|it| ReportItem {
            example: inst.examples()[it.example].clone(),
            label: u8::from(it.label),
        })
        .collect()
}

/// Solver inputs echoed into a report.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolveInputs {
    pub q: Option<f64>,
    pub p: Option<f64>,
    pub k: Option<usize>,
    pub d: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultReport {
    pub objective: Objective,
    pub mode: SimilarityMode,
    pub inputs: SolveInputs,
    pub feasible: bool,
    pub budget_exhausted: bool,
    pub teaching_set: Vec<ReportItem>,
    pub achieved_p: f64,
    pub achieved_q: f64,
    pub size: usize,
    pub good: Vec<String>,
    pub bad: Vec<String>,
    pub subsets_evaluated: u64,
    pub wall_time_ms: f64,
}

impl ResultReport {
    pub fn new(inst: &Instance, result: &SolveResult, inputs: SolveInputs) -> Self {
        let ids = |v: Vec<usize>| v.into_iter().map(|c| inst.concepts()[c].clone()).collect();
        ResultReport {
            objective: result.objective,
            mode: result.mode,
            inputs: SolveInputs {
                q: inputs.q.map(round_sig),
                p: inputs.p.map(round_sig),
                ..inputs
            },
            feasible: result.feasible,
            budget_exhausted: result.budget_exhausted,
            teaching_set: report_items(inst, &result.teaching_set),
            achieved_p: round_sig(result.achieved_p),
            achieved_q: round_sig(result.achieved_q),
            size: result.size,
            good: ids(result.partition.good()),
            bad: ids(result.partition.bad()),
            subsets_evaluated: result.subsets_evaluated,
            wall_time_ms: round_sig(result.elapsed.as_secs_f64() * 1e3),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let set: Vec<String> = self
            .teaching_set
            .iter()
            .map(|it| format!("({}, {})", it.example, it.label))
            .collect();
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        let _ = writeln!(out, "objective          {}", self.objective);
        let _ = writeln!(out, "mode               {}", self.mode);
        let _ = writeln!(
            out,
            "inputs             q={} p={} k={} d={}",
            opt(self.inputs.q.map(|v| v.to_string())),
            opt(self.inputs.p.map(|v| v.to_string())),
            opt(self.inputs.k.map(|v| v.to_string())),
            opt(self.inputs.d.map(|v| v.to_string())),
        );
        let status = match (self.feasible, self.budget_exhausted) {
            (_, true) => "budget exhausted",
            (true, false) => "feasible",
            (false, false) => "infeasible",
        };
        let _ = writeln!(out, "status             {status}");
        let _ = writeln!(out, "teaching set       {{{}}}", set.join(", "));
        let _ = writeln!(out, "size               {}", self.size);
        let _ = writeln!(out, "achieved p         {}", self.achieved_p);
        let _ = writeln!(out, "achieved q         {}", self.achieved_q);
        let _ = writeln!(out, "good               {}", self.good.join(", "));
        let _ = writeln!(out, "bad                {}", self.bad.join(", "));
        let _ = writeln!(out, "subsets evaluated  {}", self.subsets_evaluated);
        let _ = writeln!(out, "wall time (ms)     {}", self.wall_time_ms);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreRow {
    pub example: String,
    pub uniqueness: f64,
    pub homogeneity: f64,
    pub combined: f64,
}

pub fn score_rows(inst: &Instance, scores: &[HeuristicScore]) -> Vec<ScoreRow> {
    scores
        .iter()
        .map(|s| ScoreRow {
            example: inst.examples()[s.example].clone(),
            uniqueness: round_sig(s.uniqueness),
            homogeneity: round_sig(s.homogeneity),
            combined: round_sig(s.combined),
        })
        .collect()
}
