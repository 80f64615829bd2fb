//! Study manifests, stimulus directories, response and scored CSV files, and
//! analysis reports.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use omviz_core::chart::render;
use omviz_core::stats::{AnalysisReport, ScoredRecord};
use omviz_core::study::{build_study, score_answer, Answer, Task, TrialSpec};
use omviz_core::{ChartSpec, Design, OmcPalette};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series_io::{
    read_json, read_text, write_bytes, write_json, write_series, DatasetManifest,
};

pub const STUDY_MANIFEST: &str = "study.json";
pub const DATASET_DIR: &str = "datasets";
pub const CHART_DIR: &str = "charts";

pub const RESPONSE_HEADER: [&str; 8] = [
    "participant_id",
    "design",
    "task",
    "condition",
    "trial_id",
    "response",
    "confidence",
    "elapsed_ms",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyManifest {
    pub master_seed: u64,
    pub trials: Vec<TrialSpec>,
}

impl StudyManifest {
    pub fn build(master_seed: u64) -> Result<Self> {
        Ok(StudyManifest {
            master_seed,
            trials: build_study(master_seed)?,
        })
    }

    pub fn trial(&self, trial_id: &str) -> Option<&TrialSpec> {
        self.trials.iter().find(|t| t.trial_id == trial_id)
    }
}

pub fn dataset_path(out_dir: &Path, trial: &TrialSpec) -> PathBuf {
    out_dir
        .join(DATASET_DIR)
        .join(format!("{}.csv", trial.trial_id))
}

pub fn chart_path(out_dir: &Path, trial: &TrialSpec) -> PathBuf {
    out_dir
        .join(CHART_DIR)
        .join(format!("{}.svg", trial.trial_id))
}

/// Writes `study.json`, one CSV dataset with its sidecar per trial and,
/// when `render_charts` is set, the stimulus SVG of every trial.
pub fn write_study_dir(
    master_seed: u64,
    out_dir: &Path,
    render_charts: bool,
) -> Result<StudyManifest> {
    let manifest = StudyManifest::build(master_seed)?;
    let palette = OmcPalette::default();
    for trial in &manifest.trials {
        let series = trial.dataset.materialize()?;
        let sidecar = DatasetManifest {
            overrides: trial.dataset.overrides.clone(),
            ..DatasetManifest::of(&series)
        };
        write_series(&dataset_path(out_dir, trial), &series, &sidecar)?;
        if render_charts {
            let spec = ChartSpec::new(trial.design).with_markers(trial.marked.clone());
            let chart = render(&series, &spec, &palette)?;
            write_bytes(&chart_path(out_dir, trial), chart.document.as_bytes())?;
        }
    }
    write_json(&out_dir.join(STUDY_MANIFEST), &manifest)?;
    Ok(manifest)
}

pub fn read_study(path: &Path) -> Result<StudyManifest> {
    read_json(path)
}

/// One row of a responses CSV; empty cells are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseRow {
    pub participant_id: String,
    pub design: Design,
    pub task: Task,
    pub condition: u8,
    pub trial_id: String,
    pub response: Option<String>,
    pub confidence: Option<u8>,
    pub elapsed_ms: Option<u64>,
}

impl ResponseRow {
    /// A response giving `answer` to `trial`.
    pub fn answering(
        participant_id: &str,
        trial: &TrialSpec,
        answer: &Answer,
        confidence: u8,
        elapsed_ms: u64,
    ) -> Self {
        ResponseRow {
            participant_id: participant_id.to_string(),
            design: trial.design,
            task: trial.task,
            condition: trial.condition,
            trial_id: trial.trial_id.clone(),
            response: Some(answer.to_string()),
            confidence: Some(confidence),
            elapsed_ms: Some(elapsed_ms),
        }
    }
}

fn optional<T: FromStr>(
    cell: &str,
    what: &str,
    problems: &mut Vec<String>,
    line: usize,
) -> Option<T> {
    if cell.is_empty() {
        return None;
    }
    let parsed = cell.parse().ok();
    if parsed.is_none() {
        problems.push(format!("line {line}: {what} '{cell}' is invalid"));
    }
    parsed
}

fn required<T: FromStr>(
    cell: &str,
    what: &str,
    problems: &mut Vec<String>,
    line: usize,
) -> Option<T> {
    if cell.is_empty() {
        problems.push(format!("line {line}: {what} is empty"));
        return None;
    }
    optional(cell, what, problems, line)
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn check_header(path: &Path, reader: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<()> {
    let headers = reader.headers().map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    if headers != expected {
        return Err(Error::Rows {
            path: path.to_path_buf(),
            problems: vec![format!(
                "header must be '{}', found '{}'",
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            )],
        });
    }
    Ok(())
}

pub fn parse_responses(path: &Path, text: &str) -> Result<Vec<ResponseRow>> {
    let mut reader = csv_reader(text);
    check_header(path, &mut reader, &RESPONSE_HEADER)?;
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!("line {line}: {e}"));
                continue;
            }
        };
        let before = problems.len();
        let participant_id = record[0].to_string();
        if participant_id.is_empty() {
            problems.push(format!("line {line}: participant_id is empty"));
        }
        let design = required::<Design>(&record[1], "design", &mut problems, line);
        let task = required::<Task>(&record[2], "task", &mut problems, line);
        let condition = required::<u8>(&record[3], "condition", &mut problems, line);
        let trial_id = record[4].to_string();
        if trial_id.is_empty() {
            problems.push(format!("line {line}: trial_id is empty"));
        }
        let response = (!record[5].is_empty()).then(|| record[5].to_string());
        let confidence = optional::<u8>(&record[6], "confidence", &mut problems, line);
        if confidence.is_some_and(|c| !(1..=5).contains(&c)) {
            problems.push(format!(
                "line {line}: confidence '{}' is outside 1..=5",
                &record[6]
            ));
        }
        let elapsed_ms = optional::<u64>(&record[7], "elapsed_ms", &mut problems, line);
        if problems.len() > before {
            continue;
        }
        if let (Some(design), Some(task), Some(condition)) = (design, task, condition) {
            rows.push(ResponseRow {
                participant_id,
                design,
                task,
                condition,
                trial_id,
                response,
                confidence,
                elapsed_ms,
            });
        }
    }
    if problems.is_empty() {
        Ok(rows)
    } else {
        Err(Error::Rows {
            path: path.to_path_buf(),
            problems,
        })
    }
}

pub fn read_responses(path: &Path) -> Result<Vec<ResponseRow>> {
    parse_responses(path, &read_text(path)?)
}

fn csv_text<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    // Writing into memory cannot fail.
    writer.write_record(header).expect("in-memory csv write");
    for row in rows {
        writer.write_record(row).expect("in-memory csv write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory csv flush"))
        .expect("csv output is utf-8")
}

fn cell<T: ToString>(value: &Option<T>) -> String {
    value.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn responses_csv(rows: &[ResponseRow]) -> String {
    csv_text(
        &RESPONSE_HEADER,
        rows.iter().map(|r| {
            vec![
                r.participant_id.clone(),
                r.design.to_string(),
                r.task.to_string(),
                r.condition.to_string(),
                r.trial_id.clone(),
                cell(&r.response),
                cell(&r.confidence),
                cell(&r.elapsed_ms),
            ]
        }),
    )
}

/// Joins responses with the study's ground truth. Missing responses score as
/// missing; unknown trials, mismatched metadata and unparsable answers are
/// collected and reported together.
pub fn score_rows(
    study: &StudyManifest,
    rows: &[ResponseRow],
    source: &Path,
) -> Result<Vec<ScoredRecord>> {
    let trials: HashMap<&str, &TrialSpec> = study
        .trials
        .iter()
        .map(|t| (t.trial_id.as_str(), t))
        .collect();
    let mut scored = Vec::with_capacity(rows.len());
    let mut problems = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let line = i + 2;
        let Some(trial) = trials.get(row.trial_id.as_str()) else {
            problems.push(format!("line {line}: unknown trial '{}'", row.trial_id));
            continue;
        };
        if (trial.design, trial.task, trial.condition) != (row.design, row.task, row.condition) {
            problems.push(format!(
                "line {line}: design/task/condition do not match trial '{}'",
                row.trial_id
            ));
            continue;
        }
        let error = match row.response.as_deref() {
            None => None,
            Some(text) => {
                match Answer::parse(trial.task, text).and_then(|a| score_answer(trial, &a)) {
                    Ok(e) => Some(e),
                    Err(e) => {
                        problems.push(format!("line {line}: {e}"));
                        continue;
                    }
                }
            }
        };
        scored.push(ScoredRecord {
            participant_id: row.participant_id.clone(),
            design: row.design,
            task: row.task,
            condition: row.condition,
            trial_id: row.trial_id.clone(),
            error,
            confidence: row.confidence,
            elapsed_ms: row.elapsed_ms,
        });
    }
    if problems.is_empty() {
        Ok(scored)
    } else {
        Err(Error::Rows {
            path: source.to_path_buf(),
            problems,
        })
    }
}

pub const SCORED_HEADER: [&str; 8] = [
    "participant_id",
    "design",
    "task",
    "condition",
    "trial_id",
    "error",
    "confidence",
    "elapsed_ms",
];

pub fn scored_csv(records: &[ScoredRecord]) -> String {
    csv_text(
        &SCORED_HEADER,
        records.iter().map(|r| {
            vec![
                r.participant_id.clone(),
                r.design.to_string(),
                r.task.to_string(),
                r.condition.to_string(),
                r.trial_id.clone(),
                cell(&r.error),
                cell(&r.confidence),
                cell(&r.elapsed_ms),
            ]
        }),
    )
}

pub fn parse_scored(path: &Path, text: &str) -> Result<Vec<ScoredRecord>> {
    let mut reader = csv_reader(text);
    check_header(path, &mut reader, &SCORED_HEADER)?;
    let mut records = Vec::new();
    let mut problems = Vec::new();
    for (i, record) in reader.deserialize::<ScoredRecord>().enumerate() {
        match record {
            Ok(r) if r.error.is_some_and(|e| !e.is_finite() || e < 0.0) => {
                problems.push(format!(
                    "line {}: error must be a nonnegative number",
                    i + 2
                ));
            }
            Ok(r) if r.confidence.is_some_and(|c| !(1..=5).contains(&c)) => {
                problems.push(format!("line {}: confidence is outside 1..=5", i + 2));
            }
            Ok(r) => records.push(r),
            Err(e) => problems.push(format!("line {}: {e}", i + 2)),
        }
    }
    if problems.is_empty() {
        Ok(records)
    } else {
        Err(Error::Rows {
            path: path.to_path_buf(),
            problems,
        })
    }
}

pub fn read_scored(path: &Path) -> Result<Vec<ScoredRecord>> {
    parse_scored(path, &read_text(path)?)
}

/// `report.json` -> `report.txt`.
pub fn report_text_path(json_path: &Path) -> PathBuf {
    json_path.with_extension("txt")
}

/// Writes the report as JSON plus its triangle-matrix text rendering.
pub fn write_report(path: &Path, report: &AnalysisReport) -> Result<()> {
    write_json(path, report)?;
    write_bytes(&report_text_path(path), report.to_text().as_bytes())
}
