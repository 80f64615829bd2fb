//! Three-stage analysis of scored study responses.
//!
//! Per task: descriptive summaries per design, an omnibus test per measure
//! (Kruskal–Wallis on errors and response times, chi-squared independence on
//! confidence levels), and Bonferroni-adjusted pairwise post-hoc tests that
//! run only when the omnibus test is significant. Normality pre-testing is
//! not performed; the nonparametric tests are used unconditionally.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use super::descriptive::{adjusted_mean, box_stats, mean, BoxStats};
use super::nonparametric::{chi2_independence, kruskal_wallis, mann_whitney};
use super::{bonferroni, AnalysisConfig};
use crate::chart::Design;
use crate::error::Result;
use crate::study::Task;

/// Likert levels of the confidence rating.
pub const CONFIDENCE_LEVELS: u8 = 5;

/// One scored trial; `None` fields were missing in the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredRecord {
    pub participant_id: String,
    pub design: Design,
    pub task: Task,
    pub condition: u8,
    pub trial_id: String,
    pub error: Option<f64>,
    pub confidence: Option<u8>,
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Error,
    Confidence,
    Time,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Error, Measure::Confidence, Measure::Time];

    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Error => "error",
            Measure::Confidence => "confidence",
            Measure::Time => "time",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub n: usize,
    pub mean: f64,
    /// Mean without box-plot outliers.
    pub adjusted_mean: f64,
    pub box_stats: BoxStats,
}

impl MeasureSummary {
    fn of(xs: &[f64]) -> Result<Option<Self>> {
        let Some(mean) = mean(xs) else {
            return Ok(None);
        };
        Ok(Some(Self {
            n: xs.len(),
            mean,
            adjusted_mean: adjusted_mean(xs)?,
            box_stats: box_stats(xs)?,
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSummary {
    pub design: Design,
    pub records: usize,
    pub error: Option<MeasureSummary>,
    pub confidence: Option<MeasureSummary>,
    pub time: Option<MeasureSummary>,
    /// Counts of confidence levels 1..=5.
    pub confidence_counts: [u64; CONFIDENCE_LEVELS as usize],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmnibusTest {
    KruskalWallis,
    ChiSquared,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmnibusResult {
    pub measure: Measure,
    pub test: OmnibusTest,
    pub statistic: f64,
    pub df: u32,
    pub p: f64,
    pub significant: bool,
    /// Designs that contributed observations.
    pub designs: Vec<Design>,
}

/// Lower-triangle cell: `row` comes after `col` in [`Design::ALL`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCell {
    pub row: Design,
    pub col: Design,
    pub statistic: Option<f64>,
    pub p_raw: Option<f64>,
    /// Bonferroni-adjusted, capped at 1.
    pub p_adjusted: Option<f64>,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseMatrix {
    pub measure: Measure,
    pub cells: Vec<PairCell>,
}

impl PairwiseMatrix {
    pub fn cell(&self, a: Design, b: Design) -> Option<&PairCell> {
        self.cells
            .iter()
            .find(|c| (c.row == a && c.col == b) || (c.row == b && c.col == a))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub task: Task,
    pub summaries: Vec<DesignSummary>,
    pub omnibus: Vec<OmnibusResult>,
    /// Measures whose omnibus test could not run (fewer than two designs with data).
    pub missing: Vec<Measure>,
    pub pairwise: Vec<PairwiseMatrix>,
}

impl TaskReport {
    pub fn omnibus_for(&self, measure: Measure) -> Option<&OmnibusResult> {
        self.omnibus.iter().find(|o| o.measure == measure)
    }

    pub fn pairwise_for(&self, measure: Measure) -> Option<&PairwiseMatrix> {
        self.pairwise.iter().find(|m| m.measure == measure)
    }

    pub fn summary_for(&self, design: Design) -> Option<&DesignSummary> {
        self.summaries.iter().find(|s| s.design == design)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub config: AnalysisConfig,
    pub tasks: Vec<TaskReport>,
}

impl AnalysisReport {
    pub fn task(&self, task: Task) -> Option<&TaskReport> {
        self.tasks.iter().find(|t| t.task == task)
    }
}

struct DesignCell {
    errors: Vec<f64>,
    times: Vec<f64>,
    confidence: Vec<f64>,
    counts: [u64; CONFIDENCE_LEVELS as usize],
    records: usize,
}

impl DesignCell {
    fn collect<'a>(records: impl Iterator<Item = &'a ScoredRecord>) -> Self {
        let mut cell = DesignCell {
            errors: Vec::new(),
            times: Vec::new(),
            confidence: Vec::new(),
            counts: [0; CONFIDENCE_LEVELS as usize],
            records: 0,
        };
        for r in records {
            cell.records += 1;
            cell.errors.extend(r.error.filter(|e| e.is_finite()));
            cell.times.extend(r.elapsed_ms.map(|t| t as f64));
            if let Some(level) = r.confidence.filter(|c| (1..=CONFIDENCE_LEVELS).contains(c)) {
                cell.confidence.push(level as f64);
                cell.counts[(level - 1) as usize] += 1;
            }
        }
        cell
    }

    fn values(&self, measure: Measure) -> &[f64] {
        match measure {
            Measure::Error => &self.errors,
            Measure::Time => &self.times,
            Measure::Confidence => &self.confidence,
        }
    }
}

/// Drops all-zero columns so sparse Likert tables stay testable.
fn compact_table(rows: &[[u64; CONFIDENCE_LEVELS as usize]]) -> Vec<Vec<u64>> {
    let keep: Vec<usize> = (0..CONFIDENCE_LEVELS as usize)
        .filter(|&j| rows.iter().any(|r| r[j] > 0))
        .collect();
    rows.iter()
        .map(|r| keep.iter().map(|&j| r[j]).collect())
        .collect()
}

/// Test, statistic, df, p and contributing designs of one omnibus test.
type Omnibus = (OmnibusTest, f64, u32, f64, Vec<Design>);

/// The omnibus test for one measure, or `None` when fewer than two designs
/// have observations.
fn omnibus(cells: &[(Design, DesignCell)], measure: Measure) -> Result<Option<Omnibus>> {
    let present: Vec<&(Design, DesignCell)> = cells
        .iter()
        .filter(|(_, c)| !c.values(measure).is_empty())
        .collect();
    if present.len() < 2 {
        return Ok(None);
    }
    let designs = present.iter().map(|(d, _)| *d).collect();
    if measure == Measure::Confidence {
        let rows: Vec<_> = present.iter().map(|(_, c)| c.counts).collect();
        let test = chi2_independence(&compact_table(&rows))?;
        Ok(Some((
            OmnibusTest::ChiSquared,
            test.statistic,
            test.df,
            test.p,
            designs,
        )))
    } else {
        let groups: Vec<&[f64]> = present.iter().map(|(_, c)| c.values(measure)).collect();
        let test = kruskal_wallis(&groups)?;
        Ok(Some((
            OmnibusTest::KruskalWallis,
            test.h,
            test.df,
            test.p,
            designs,
        )))
    }
}

fn pairwise(
    cells: &[(Design, DesignCell)],
    measure: Measure,
    cfg: &AnalysisConfig,
) -> Result<PairwiseMatrix> {
    let mut out = Vec::new();
    for (i, (row, a)) in cells.iter().enumerate() {
        for (col, b) in cells[..i].iter().map(|(d, c)| (*d, c)) {
            let (xs, ys) = (a.values(measure), b.values(measure));
            let tested = if xs.is_empty() || ys.is_empty() {
                None
            } else if measure == Measure::Confidence {
                let t = chi2_independence(&compact_table(&[a.counts, b.counts]))?;
                Some((t.statistic, t.p))
            } else {
                let t = mann_whitney(xs, ys)?;
                Some((t.u, t.p))
            };
            let p_adjusted = tested.map(|(_, p)| bonferroni(p, cfg));
            out.push(PairCell {
                row: *row,
                col,
                statistic: tested.map(|(s, _)| s),
                p_raw: tested.map(|(_, p)| p),
                p_adjusted,
                significant: p_adjusted.is_some_and(|p| p < cfg.alpha),
            });
        }
    }
    Ok(PairwiseMatrix {
        measure,
        cells: out,
    })
}

/// Runs the full analysis. Records with unknown fields are kept as missing
/// observations rather than imputed.
pub fn analyze(records: &[ScoredRecord], cfg: &AnalysisConfig) -> Result<AnalysisReport> {
    cfg.validate()?;
    let mut tasks = Vec::with_capacity(Task::ALL.len());
    for task in Task::ALL {
        let cells: Vec<(Design, DesignCell)> = Design::ALL
            .iter()
            .map(|&d| {
                (
                    d,
                    DesignCell::collect(records.iter().filter(|r| r.task == task && r.design == d)),
                )
            })
            .collect();

        let summaries = cells
            .iter()
            .map(|(design, cell)| {
                Ok(DesignSummary {
                    design: *design,
                    records: cell.records,
                    error: MeasureSummary::of(&cell.errors)?,
                    confidence: MeasureSummary::of(&cell.confidence)?,
                    time: MeasureSummary::of(&cell.times)?,
                    confidence_counts: cell.counts,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut report = TaskReport {
            task,
            summaries,
            omnibus: Vec::new(),
            missing: Vec::new(),
            pairwise: Vec::new(),
        };
        for measure in Measure::ALL {
            match omnibus(&cells, measure)? {
                None => report.missing.push(measure),
                Some((test, statistic, df, p, designs)) => {
                    let significant = p < cfg.alpha;
                    report.omnibus.push(OmnibusResult {
                        measure,
                        test,
                        statistic,
                        df,
                        p,
                        significant,
                        designs,
                    });
                    if significant {
                        report.pairwise.push(pairwise(&cells, measure, cfg)?);
                    }
                }
            }
        }
        tasks.push(report);
    }
    Ok(AnalysisReport {
        config: *cfg,
        tasks,
    })
}

fn format_p(p: f64) -> String {
    if p < 0.0005 {
        String::from("~0.000")
    } else {
        format!("{p:.3}")
    }
}

impl AnalysisReport {
    /// Plain-text rendering with one lower-triangle p-value matrix per
    /// significant (task, measure); `*` marks adjusted p below alpha.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "alpha = {}, Bonferroni factor = {}",
            self.config.alpha, self.config.bonferroni_factor
        );
        for task in &self.tasks {
            let _ = writeln!(out, "\n== {} ==", task.task.as_str());
            let _ = writeln!(
                out,
                "{:<8} {:>4} {:>10} {:>10} {:>12}",
                "design", "n", "error", "confidence", "time_ms"
            );
            for s in &task.summaries {
                let adj = |m: &Option<MeasureSummary>, prec: usize| {
                    m.as_ref().map_or(String::from("-"), |m| {
                        format!("{:.*}", prec, m.adjusted_mean)
                    })
                };
                let _ = writeln!(
                    out,
                    "{:<8} {:>4} {:>10} {:>10} {:>12}",
                    s.design.label(),
                    s.records,
                    adj(&s.error, 3),
                    adj(&s.confidence, 2),
                    adj(&s.time, 0)
                );
            }
            for o in &task.omnibus {
                let name = match o.test {
                    OmnibusTest::KruskalWallis => "Kruskal-Wallis",
                    OmnibusTest::ChiSquared => "chi-squared",
                };
                let _ = writeln!(
                    out,
                    "{} {}: statistic = {:.4}, df = {}, p = {:.4e}{}",
                    o.measure.as_str(),
                    name,
                    o.statistic,
                    o.df,
                    o.p,
                    if o.significant { " (significant)" } else { "" }
                );
            }
            for m in &task.missing {
                let _ = writeln!(out, "{}: not enough data for an omnibus test", m.as_str());
            }
            for matrix in &task.pairwise {
                let _ = writeln!(
                    out,
                    "\npairwise {} p-values (adjusted):",
                    matrix.measure.as_str()
                );
                let _ = write!(out, "{:<9}", "p-value");
                for d in Design::ALL {
                    let _ = write!(out, "| {:<8}", d.label());
                }
                out.push('\n');
                for (i, row) in Design::ALL.iter().enumerate() {
                    let _ = write!(out, "{:<9}", row.label());
                    for (j, col) in Design::ALL.iter().enumerate() {
                        let cell = match j.cmp(&i) {
                            core::cmp::Ordering::Equal => String::from("-"),
                            core::cmp::Ordering::Greater => String::new(),
                            core::cmp::Ordering::Less => match matrix
                                .cell(*row, *col)
                                .and_then(|c| c.p_adjusted.map(|p| (p, c.significant)))
                            {
                                Some((p, sig)) => {
                                    format!("{}{}", format_p(p), if sig { "*" } else { "" })
                                }
                                None => String::from("n/a"),
                            },
                        };
                        let _ = write!(out, "| {cell:<8}");
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}
