//! Stimulus set construction and response scoring.
//!
//! A study crosses the five designs with four tasks and three data
//! conditions per task, giving 60 trials, each on its own dataset. Marked
//! samples are drawn at random among those satisfying the trial's
//! condition; datasets that offer none are regenerated from a fresh seed.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chart::{Design, Marker};
use crate::datagen::{random_walk, trend_series, Series, SeriesKind, TrendKind, STUDY_LENGTH};
use crate::error::{Error, Result};
use crate::magnitude::{compose, MagnitudeRange, MagnitudeValue};
use crate::math;
use crate::rng::StudyRng;
use crate::stats::{binary_error, relative_error};

/// Mantissa distance within which a value counts as sitting on a gridline.
pub const GRID_TOLERANCE: f64 = 0.05;
/// Mantissas drawn as gridlines: decade boundaries and the mantissa-5 line.
pub const GRID_MANTISSAS: [f64; 3] = [1.0, 5.0, 10.0];
/// Minimum index distance between the two markers of a pair.
pub const MIN_PAIR_SEPARATION: usize = 5;
/// Dataset regenerations per trial before giving up.
pub const MAX_REGENERATIONS: u32 = 50;
pub const CONDITIONS: [u8; 3] = [1, 2, 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Identification,
    Discrimination,
    Estimation,
    Trend,
}

impl Task {
    pub const ALL: [Task; 4] = [
        Task::Identification,
        Task::Discrimination,
        Task::Estimation,
        Task::Trend,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Identification => "identification",
            Task::Discrimination => "discrimination",
            Task::Estimation => "estimation",
            Task::Trend => "trend",
        }
    }

    /// Number of marked samples a trial of this task shows.
    pub fn marker_count(&self) -> usize {
        match self {
            Task::Identification => 1,
            Task::Discrimination | Task::Estimation => 2,
            Task::Trend => 0,
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown task '{s}'")))
    }
}

/// Trend choices offered to participants; `None` is never correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrendAnswer {
    Periodic,
    Linear,
    Exponential,
    None,
}

impl From<TrendKind> for TrendAnswer {
    fn from(kind: TrendKind) -> Self {
        match kind {
            TrendKind::Periodic => TrendAnswer::Periodic,
            TrendKind::Linear => TrendAnswer::Linear,
            TrendKind::Exponential => TrendAnswer::Exponential,
        }
    }
}

impl TrendAnswer {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrendAnswer::Periodic => "periodic",
            TrendAnswer::Linear => "linear",
            TrendAnswer::Exponential => "exponential",
            TrendAnswer::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Number(f64),
    Letter(char),
    Trend(TrendAnswer),
}

impl Answer {
    /// Parses a response cell according to the answer type of `task`.
    pub fn parse(task: Task, text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = |what: &str| Error::Scoring(format!("{task} response '{text}' is not {what}"));
        match task {
            Task::Identification | Task::Estimation => text
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Answer::Number)
                .ok_or_else(|| bad("a number")),
            Task::Discrimination => {
                let mut chars = text.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) if c.is_ascii_alphabetic() => {
                        Ok(Answer::Letter(c.to_ascii_uppercase()))
                    }
                    _ => Err(bad("a single letter")),
                }
            }
            Task::Trend => match text.to_ascii_lowercase().as_str() {
                "periodic" => Ok(Answer::Trend(TrendAnswer::Periodic)),
                "linear" => Ok(Answer::Trend(TrendAnswer::Linear)),
                "exponential" => Ok(Answer::Trend(TrendAnswer::Exponential)),
                "none" => Ok(Answer::Trend(TrendAnswer::None)),
                _ => Err(bad("a trend name")),
            },
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Number(v) => write!(f, "{v}"),
            Answer::Letter(c) => write!(f, "{c}"),
            Answer::Trend(t) => f.write_str(t.as_str()),
        }
    }
}

/// Everything needed to regenerate a trial's dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRef {
    pub seed: u64,
    pub kind: SeriesKind,
    pub n: usize,
    pub range: MagnitudeRange,
    /// Samples replaced after generation, as `(index, value)`.
    #[serde(default)]
    pub overrides: Vec<(usize, f64)>,
}

impl DatasetRef {
    pub fn materialize(&self) -> Result<Series> {
        let mut series = match self.kind {
            SeriesKind::Walk => random_walk(self.seed, self.n, self.range)?,
            SeriesKind::Periodic => {
                trend_series(TrendKind::Periodic, self.seed, self.n, self.range)?
            }
            SeriesKind::Linear => trend_series(TrendKind::Linear, self.seed, self.n, self.range)?,
            SeriesKind::Exponential => {
                trend_series(TrendKind::Exponential, self.seed, self.n, self.range)?
            }
            SeriesKind::Imported => {
                return Err(Error::Usage(
                    "imported datasets cannot be regenerated".to_string(),
                ));
            }
        };
        for &(index, value) in &self.overrides {
            let slot = series.values.get_mut(index).ok_or_else(|| {
                Error::InvalidChart(format!("override index {index} out of bounds"))
            })?;
            *slot = value;
        }
        series.validate()?;
        Ok(series)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSpec {
    pub trial_id: String,
    pub design: Design,
    pub task: Task,
    pub condition: u8,
    pub dataset: DatasetRef,
    pub marked: Vec<Marker>,
    pub correct_answer: Answer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub trial_id: String,
    pub response: Answer,
    /// 5-point Likert rating, 1..=5.
    pub confidence: u8,
    pub elapsed_ms: u64,
}

impl ResponseRecord {
    pub fn validate(&self) -> Result<()> {
        if !(1..=5).contains(&self.confidence) {
            return Err(Error::Scoring(format!(
                "confidence {} for {} is outside 1..=5",
                self.confidence, self.trial_id
            )));
        }
        Ok(())
    }
}

pub fn on_grid(mv: &MagnitudeValue) -> bool {
    GRID_MANTISSAS
        .iter()
        .any(|g| math::abs(mv.mantissa - g) <= GRID_TOLERANCE)
}

/// Condition of an identification trial: 1 on a gridline, 2 off-grid in one of
/// the two highest decades, 3 off-grid in the second or third lowest decade.
pub fn identification_condition_holds(value: f64, condition: u8, range: MagnitudeRange) -> bool {
    let Ok(mv) = range.locate(value) else {
        return false;
    };
    let e = mv.exponent;
    match condition {
        1 => on_grid(&mv),
        2 => (e == range.e_max() || e == range.e_max() - 1) && !on_grid(&mv),
        3 => (e == range.e_min() + 1 || e == range.e_min() + 2) && !on_grid(&mv),
        _ => false,
    }
}

/// Condition of a pair trial: 1 same decade, 2 neighbouring decades, 3 at
/// least two decades apart. The two values must differ.
pub fn pair_condition_holds(a: f64, b: f64, condition: u8, range: MagnitudeRange) -> bool {
    match (range.locate(a), range.locate(b)) {
        (Ok(ma), Ok(mb)) => a != b && gap_matches(ma.exponent, mb.exponent, condition),
        _ => false,
    }
}

fn gap_matches(ea: i32, eb: i32, condition: u8) -> bool {
    let gap = (ea - eb).unsigned_abs();
    match condition {
        1 => gap == 0,
        2 => gap == 1,
        3 => gap >= 2,
        _ => false,
    }
}

fn check_condition(condition: u8) -> Result<()> {
    if CONDITIONS.contains(&condition) {
        Ok(())
    } else {
        Err(Error::Usage(format!(
            "condition must be 1, 2 or 3, got {condition}"
        )))
    }
}

/// Picks a random sample satisfying the identification condition.
pub fn select_identification_point(
    series: &Series,
    condition: u8,
    rng: &mut StudyRng,
) -> Result<usize> {
    check_condition(condition)?;
    let candidates: Vec<usize> = (0..series.len())
        .filter(|&i| identification_condition_holds(series.values[i], condition, series.range))
        .collect();
    if candidates.is_empty() {
        return Err(Error::Selection {
            task: "identification",
            condition,
        });
    }
    Ok(candidates[rng.index(candidates.len())])
}

/// Picks a random pair `(a, b)`, `a + 5 <= b`, satisfying the pair condition.
pub fn select_pair(series: &Series, condition: u8, rng: &mut StudyRng) -> Result<(usize, usize)> {
    check_condition(condition)?;
    let v = &series.values;
    let exponents = v
        .iter()
        .map(|&x| series.range.locate(x).map(|mv| mv.exponent))
        .collect::<Result<Vec<i32>>>()?;
    let mut candidates = Vec::new();
    for a in 0..v.len() {
        for b in a + MIN_PAIR_SEPARATION..v.len() {
            if v[a] != v[b] && gap_matches(exponents[a], exponents[b], condition) {
                candidates.push((a, b));
            }
        }
    }
    if candidates.is_empty() {
        return Err(Error::Selection {
            task: "pair",
            condition,
        });
    }
    Ok(candidates[rng.index(candidates.len())])
}

/// Nearest gridline value in the sample's own decade.
fn snap_to_grid(value: f64, range: MagnitudeRange) -> Result<f64> {
    let mv = range.locate(value)?;
    let target = GRID_MANTISSAS
        .iter()
        .copied()
        .min_by(|a, b| math::abs(mv.mantissa - a).total_cmp(&math::abs(mv.mantissa - b)))
        .unwrap_or(1.0);
    compose(target, mv.exponent)
}

pub fn trial_id(design: Design, task: Task, condition: u8) -> String {
    format!("{design}-{task}-c{condition}")
}

fn trend_for_condition(condition: u8) -> TrendKind {
    match condition {
        1 => TrendKind::Periodic,
        2 => TrendKind::Linear,
        _ => TrendKind::Exponential,
    }
}

fn fresh_seed(rng: &mut StudyRng, used: &mut BTreeSet<u64>) -> u64 {
    loop {
        let seed = rng.next_u64();
        if used.insert(seed) {
            return seed;
        }
    }
}

fn attempt_trial(
    design: Design,
    task: Task,
    condition: u8,
    seed: u64,
    rng: &mut StudyRng,
) -> Result<TrialSpec> {
    let range = MagnitudeRange::STUDY;
    let id = trial_id(design, task, condition);
    if task == Task::Trend {
        let kind = trend_for_condition(condition);
        return Ok(TrialSpec {
            trial_id: id,
            design,
            task,
            condition,
            dataset: DatasetRef {
                seed,
                kind: kind.into(),
                n: STUDY_LENGTH,
                range,
                overrides: Vec::new(),
            },
            marked: Vec::new(),
            correct_answer: Answer::Trend(kind.into()),
        });
    }

    let mut dataset = DatasetRef {
        seed,
        kind: SeriesKind::Walk,
        n: STUDY_LENGTH,
        range,
        overrides: Vec::new(),
    };
    let mut series = random_walk(seed, STUDY_LENGTH, range)?;
    let (marked, correct_answer) = match task {
        Task::Identification => {
            if condition == 1 {
                let index = rng.index(series.len());
                let snapped = snap_to_grid(series.values[index], range)?;
                series.values[index] = snapped;
                dataset.overrides.push((index, snapped));
            }
            let i = select_identification_point(&series, condition, rng)?;
            (
                vec![Marker {
                    label: 'A',
                    index: i,
                }],
                Answer::Number(series.values[i]),
            )
        }
        _ => {
            let (a, b) = select_pair(&series, condition, rng)?;
            let (va, vb) = (series.values[a], series.values[b]);
            let answer = if task == Task::Discrimination {
                Answer::Letter(if vb > va { 'B' } else { 'A' })
            } else {
                Answer::Number(math::abs(vb - va))
            };
            (
                vec![
                    Marker {
                        label: 'A',
                        index: a,
                    },
                    Marker {
                        label: 'B',
                        index: b,
                    },
                ],
                answer,
            )
        }
    };
    Ok(TrialSpec {
        trial_id: id,
        design,
        task,
        condition,
        dataset,
        marked,
        correct_answer,
    })
}

/// Builds all 5 × 4 × 3 trials, ordered by design, task, then condition.
/// Every trial gets a distinct dataset seed drawn from `master_seed`.
pub fn build_study(master_seed: u64) -> Result<Vec<TrialSpec>> {
    let mut rng = StudyRng::new(master_seed);
    let mut used = BTreeSet::new();
    let mut trials = Vec::with_capacity(Design::ALL.len() * Task::ALL.len() * CONDITIONS.len());
    for design in Design::ALL {
        for task in Task::ALL {
            for condition in CONDITIONS {
                let mut built = None;
                for _ in 0..MAX_REGENERATIONS {
                    let seed = fresh_seed(&mut rng, &mut used);
                    match attempt_trial(design, task, condition, seed, &mut rng) {
                        Ok(trial) => {
                            built = Some(trial);
                            break;
                        }
                        Err(Error::Selection { .. }) => continue,
                        Err(other) => return Err(other),
                    }
                }
                let trial = built.ok_or_else(|| Error::Generation {
                    trial: trial_id(design, task, condition),
                    attempts: MAX_REGENERATIONS,
                })?;
                trials.push(trial);
            }
        }
    }
    Ok(trials)
}

/// Re-derives a trial's dataset and checks marker arity, ordering, spacing,
/// its condition and its stored answer. Returns a description of the first
/// violation found.
pub fn verify_trial(trial: &TrialSpec) -> Result<Option<String>> {
    let series = trial.dataset.materialize()?;
    let v = &series.values;
    let fail = |msg: String| Ok(Some(format!("{}: {msg}", trial.trial_id)));
    if trial.marked.len() != trial.task.marker_count() {
        return fail(format!("{} markers for {}", trial.marked.len(), trial.task));
    }
    if trial.marked.iter().any(|m| m.index >= v.len()) {
        return fail("marker beyond series".to_string());
    }
    match (trial.task, trial.correct_answer) {
        (Task::Identification, Answer::Number(c)) => {
            let i = trial.marked[0].index;
            if !identification_condition_holds(v[i], trial.condition, series.range) {
                return fail(format!(
                    "value {} violates condition {}",
                    v[i], trial.condition
                ));
            }
            if c != v[i] {
                return fail(format!("answer {c} differs from value {}", v[i]));
            }
        }
        (Task::Discrimination | Task::Estimation, answer) => {
            let (a, b) = (trial.marked[0], trial.marked[1]);
            if a.label != 'A' || b.label != 'B' || a.index + MIN_PAIR_SEPARATION > b.index {
                return fail("markers not ordered A before B with enough spacing".to_string());
            }
            let (va, vb) = (v[a.index], v[b.index]);
            if !pair_condition_holds(va, vb, trial.condition, series.range) {
                return fail(format!(
                    "pair ({va}, {vb}) violates condition {}",
                    trial.condition
                ));
            }
            let consistent = match answer {
                Answer::Letter(l) => l == if vb > va { 'B' } else { 'A' },
                Answer::Number(d) => math::abs(d - math::abs(vb - va)) <= 1e-9 * d.max(1.0),
                Answer::Trend(_) => false,
            };
            if !consistent {
                return fail(format!("answer {answer} inconsistent with ({va}, {vb})"));
            }
        }
        (Task::Trend, Answer::Trend(t)) => {
            let expected: TrendAnswer = trend_for_condition(trial.condition).into();
            let kind_matches =
                SeriesKind::from(trend_for_condition(trial.condition)) == trial.dataset.kind;
            if t != expected || !kind_matches {
                return fail(format!(
                    "trend answer {} does not match condition {}",
                    t.as_str(),
                    trial.condition
                ));
            }
        }
        (task, answer) => return fail(format!("answer {answer} has the wrong type for {task}")),
    }
    Ok(None)
}

/// Error of one response: relative error for numeric tasks, 0/1 otherwise.
pub fn score(trial: &TrialSpec, response: &ResponseRecord) -> Result<f64> {
    if trial.trial_id != response.trial_id {
        return Err(Error::Scoring(format!(
            "response for {} scored against trial {}",
            response.trial_id, trial.trial_id
        )));
    }
    score_answer(trial, &response.response)
}

/// Scores a bare answer against the trial's ground truth.
pub fn score_answer(trial: &TrialSpec, response: &Answer) -> Result<f64> {
    match (trial.task, trial.correct_answer, *response) {
        (Task::Identification | Task::Estimation, Answer::Number(c), Answer::Number(r)) => {
            relative_error(r, c)
        }
        (Task::Discrimination, Answer::Letter(c), Answer::Letter(r)) => Ok(binary_error(&r, &c)),
        (Task::Trend, Answer::Trend(c), Answer::Trend(r)) => Ok(binary_error(&r, &c)),
        (task, _, r) => Err(Error::Scoring(format!(
            "response '{r}' does not fit a {task} trial"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: Vec<f64>) -> Series {
        Series::imported(values, MagnitudeRange::STUDY).unwrap()
    }

    fn response(trial: &TrialSpec, answer: Answer) -> ResponseRecord {
        ResponseRecord {
            trial_id: trial.trial_id.clone(),
            response: answer,
            confidence: 3,
            elapsed_ms: 1000,
        }
    }

    #[test]
    fn study_shape() {
        let trials = build_study(7).unwrap();
        assert_eq!(trials.len(), 60);
        let seeds: BTreeSet<u64> = trials.iter().map(|t| t.dataset.seed).collect();
        assert_eq!(seeds.len(), 60);
        for t in &trials {
            assert_eq!(t.marked.len(), t.task.marker_count());
            assert_eq!(verify_trial(t).unwrap(), None);
        }
        assert_eq!(build_study(7).unwrap(), trials);
    }

    #[test]
    fn identification_condition_one_accepts_grid_values() {
        let s = series(vec![1234.0, 5000.0, 2345.0]);
        let mut rng = StudyRng::new(1);
        for _ in 0..20 {
            assert_eq!(select_identification_point(&s, 1, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn identification_condition_three_only_low_decades() {
        let s = series(vec![3.3, 23.0, 2345.0, 77.0, 23456.0, 770.0, 50.0]);
        let mut rng = StudyRng::new(2);
        for _ in 0..100 {
            let i = select_identification_point(&s, 3, &mut rng).unwrap();
            assert!([1, 3, 5].contains(&i), "picked {i}");
        }
        let none = series(vec![3.3, 2345.0]);
        assert!(matches!(
            select_identification_point(&none, 3, &mut rng),
            Err(Error::Selection { condition: 3, .. })
        ));
    }

    #[test]
    fn off_grid_tolerance() {
        let r = MagnitudeRange::STUDY;
        assert!(identification_condition_holds(5040.0, 1, r));
        assert!(!identification_condition_holds(5060.0, 1, r));
        assert!(identification_condition_holds(5060.0, 2, r));
        assert!(!identification_condition_holds(9970.0, 2, r));
        assert!(!identification_condition_holds(100_000.0, 2, r));
    }

    #[test]
    fn pair_conditions() {
        let values: Vec<f64> = (0..40)
            .map(|i| [3.0, 30.0, 300.0, 3000.0][i % 4] * (1.0 + i as f64 / 100.0))
            .collect();
        let s = series(values);
        let mut rng = StudyRng::new(3);
        for condition in CONDITIONS {
            for _ in 0..50 {
                let (a, b) = select_pair(&s, condition, &mut rng).unwrap();
                assert!(a + MIN_PAIR_SEPARATION <= b);
                let ea = s.range.locate(s.values[a]).unwrap().exponent;
                let eb = s.range.locate(s.values[b]).unwrap().exponent;
                let gap = (ea - eb).abs();
                match condition {
                    1 => assert_eq!(gap, 0),
                    2 => assert_eq!(gap, 1),
                    _ => assert!(gap >= 2),
                }
            }
        }
    }

    #[test]
    fn scoring_examples() {
        let trials = build_study(11).unwrap();
        let ident = trials
            .iter()
            .find(|t| t.task == Task::Identification)
            .unwrap();
        let mut fixed = ident.clone();
        fixed.correct_answer = Answer::Number(100.0);
        assert!(
            (score(&fixed, &response(&fixed, Answer::Number(10.0))).unwrap() - 0.9).abs() < 1e-15
        );

        let disc = trials
            .iter()
            .find(|t| t.task == Task::Discrimination)
            .unwrap();
        let mut fixed = disc.clone();
        fixed.correct_answer = Answer::Letter('B');
        assert_eq!(
            score(&fixed, &response(&fixed, Answer::Letter('B'))).unwrap(),
            0.0
        );
        assert_eq!(
            score(&fixed, &response(&fixed, Answer::Letter('A'))).unwrap(),
            1.0
        );

        let trend = trials
            .iter()
            .find(|t| t.task == Task::Trend && t.condition == 3)
            .unwrap();
        assert_eq!(
            trend.correct_answer,
            Answer::Trend(TrendAnswer::Exponential)
        );
        let none = response(trend, Answer::Trend(TrendAnswer::None));
        assert_eq!(score(trend, &none).unwrap(), 1.0);

        let mismatch = response(trend, Answer::Number(3.0));
        assert!(matches!(score(trend, &mismatch), Err(Error::Scoring(_))));
    }

    #[test]
    fn estimation_truth_is_absolute_difference() {
        for t in build_study(5)
            .unwrap()
            .iter()
            .filter(|t| t.task == Task::Estimation)
        {
            let s = t.dataset.materialize().unwrap();
            let d = (s.values[t.marked[1].index] - s.values[t.marked[0].index]).abs();
            match t.correct_answer {
                Answer::Number(c) => assert!((c - d).abs() <= 1e-9 * d.max(1.0)),
                _ => panic!("estimation answer must be numeric"),
            }
        }
    }

    #[test]
    fn answer_parsing() {
        assert_eq!(
            Answer::parse(Task::Identification, " 2500 ").unwrap(),
            Answer::Number(2500.0)
        );
        assert_eq!(
            Answer::parse(Task::Discrimination, "b").unwrap(),
            Answer::Letter('B')
        );
        assert_eq!(
            Answer::parse(Task::Trend, "None").unwrap(),
            Answer::Trend(TrendAnswer::None)
        );
        assert!(Answer::parse(Task::Estimation, "many").is_err());
        assert!(Answer::parse(Task::Discrimination, "AB").is_err());
    }
}
