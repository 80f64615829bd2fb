use omviz_core::datagen::random_walk;
use omviz_core::magnitude::decompose;
use omviz_core::rng::StudyRng;
use omviz_core::study::{
    build_study, score, score_answer, select_identification_point, select_pair, verify_trial,
    Answer, ResponseRecord, Task, TrendAnswer, CONDITIONS,
};
use omviz_core::{Design, MagnitudeRange, Series};
use proptest::prelude::*;
use std::collections::BTreeSet;

const RANGE: MagnitudeRange = MagnitudeRange::STUDY;

/// (mantissa, exponent) with the range top folded into the highest decade.
fn split(v: f64) -> (f64, i32) {
    let mv = decompose(v).unwrap();
    if mv.exponent > 4 {
        (mv.mantissa * 10.0, 4)
    } else {
        (mv.mantissa, mv.exponent)
    }
}

fn oracle_on_grid(m: f64) -> bool {
    [1.0, 5.0, 10.0]
        .iter()
        .any(|g| (m - g).abs() <= 0.05 + 1e-12)
}

fn oracle_identification(v: f64, condition: u8) -> bool {
    let (m, e) = split(v);
    match condition {
        1 => oracle_on_grid(m),
        2 => (3..=4).contains(&e) && !oracle_on_grid(m),
        3 => (1..=2).contains(&e) && !oracle_on_grid(m),
        _ => false,
    }
}

fn oracle_pair(a: f64, b: f64, condition: u8) -> bool {
    let gap = (split(a).1 - split(b).1).abs();
    a != b
        && match condition {
            1 => gap == 0,
            2 => gap == 1,
            _ => gap >= 2,
        }
}

/// Checks a study against the oracles above, returning the violations.
fn violations(master_seed: u64) -> Vec<String> {
    let trials = build_study(master_seed).unwrap();
    let mut out = Vec::new();
    for t in &trials {
        let v = t.dataset.materialize().unwrap().values;
        let ok = match t.task {
            Task::Identification => {
                let i = t.marked[0].index;
                oracle_identification(v[i], t.condition) && t.correct_answer == Answer::Number(v[i])
            }
            Task::Discrimination | Task::Estimation => {
                let (a, b) = (t.marked[0], t.marked[1]);
                let (va, vb) = (v[a.index], v[b.index]);
                let truth = match t.task {
                    Task::Discrimination => Answer::Letter(if vb > va { 'B' } else { 'A' }),
                    _ => Answer::Number((vb - va).abs()),
                };
                a.label == 'A'
                    && b.label == 'B'
                    && a.index + 5 <= b.index
                    && oracle_pair(va, vb, t.condition)
                    && t.correct_answer == truth
            }
            Task::Trend => t.marked.is_empty(),
        };
        if !ok {
            out.push(format!("seed {master_seed}: {}", t.trial_id));
        }
    }
    out
}

#[test]
fn studies_satisfy_their_conditions() {
    let bad: Vec<String> = (0..100).flat_map(violations).collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn every_design_gets_one_trial_per_cell() {
    let trials = build_study(3).unwrap();
    assert_eq!(trials.len(), 60);
    let cells: BTreeSet<(String, String, u8)> = trials
        .iter()
        .map(|t| (t.design.to_string(), t.task.to_string(), t.condition))
        .collect();
    assert_eq!(cells.len(), 60);
    for design in Design::ALL {
        for task in Task::ALL {
            for condition in CONDITIONS {
                assert_eq!(
                    trials
                        .iter()
                        .filter(|t| t.design == design
                            && t.task == task
                            && t.condition == condition)
                        .count(),
                    1
                );
            }
        }
    }
    let seeds: BTreeSet<u64> = trials.iter().map(|t| t.dataset.seed).collect();
    assert_eq!(seeds.len(), 60);
}

#[test]
fn studies_replay_per_master_seed() {
    assert_eq!(build_study(99).unwrap(), build_study(99).unwrap());
    assert_ne!(build_study(99).unwrap(), build_study(100).unwrap());
}

#[test]
fn stored_trials_verify() {
    for t in build_study(5).unwrap() {
        assert_eq!(verify_trial(&t).unwrap(), None);
    }
}

#[test]
fn tampered_trials_fail_verification() {
    let mut trials = build_study(5).unwrap();
    let estimation = trials
        .iter_mut()
        .find(|t| t.task == Task::Estimation)
        .unwrap();
    if let Answer::Number(d) = estimation.correct_answer {
        estimation.correct_answer = Answer::Number(d + 1.0);
    }
    assert!(verify_trial(estimation).unwrap().is_some());
}

#[test]
fn condition_one_identification_finds_a_mantissa_five() {
    let s = Series::imported(vec![1234.0, 5000.0, 2345.0], RANGE).unwrap();
    let mut rng = StudyRng::new(4);
    assert_eq!(select_identification_point(&s, 1, &mut rng).unwrap(), 1);
}

#[test]
fn selection_errors_when_nothing_qualifies() {
    let s = Series::imported(vec![1234.0; 20], RANGE).unwrap();
    let mut rng = StudyRng::new(4);
    assert!(select_identification_point(&s, 3, &mut rng).is_err());
    assert!(select_pair(&s, 2, &mut rng).is_err());
    assert!(select_identification_point(&s, 4, &mut rng).is_err());
}

#[test]
fn worked_scoring_examples() {
    let trials = build_study(8).unwrap();
    let find = |task| trials.iter().find(|t| t.task == task).unwrap();

    let mut identification = find(Task::Identification).clone();
    identification.correct_answer = Answer::Number(100.0);
    assert_eq!(
        score_answer(&identification, &Answer::Number(10.0)).unwrap(),
        0.9
    );

    let mut discrimination = find(Task::Discrimination).clone();
    discrimination.correct_answer = Answer::Letter('B');
    assert_eq!(
        score_answer(&discrimination, &Answer::Letter('B')).unwrap(),
        0.0
    );
    assert_eq!(
        score_answer(&discrimination, &Answer::Letter('A')).unwrap(),
        1.0
    );

    let trend = find(Task::Trend);
    let none = Answer::Trend(TrendAnswer::None);
    assert_eq!(score_answer(trend, &none).unwrap(), 1.0);
    assert_eq!(score_answer(trend, &trend.correct_answer).unwrap(), 0.0);

    assert!(score_answer(trend, &Answer::Number(3.0)).is_err());
    let response = ResponseRecord {
        trial_id: "somewhere-else".into(),
        response: none,
        confidence: 3,
        elapsed_ms: 10,
    };
    assert!(score(trend, &response).is_err());
}

#[test]
fn answers_parse_per_task() {
    assert_eq!(
        Answer::parse(Task::Estimation, "12.5").unwrap(),
        Answer::Number(12.5)
    );
    assert_eq!(
        Answer::parse(Task::Discrimination, "b").unwrap(),
        Answer::Letter('B')
    );
    assert_eq!(
        Answer::parse(Task::Trend, "linear").unwrap(),
        Answer::Trend(TrendAnswer::Linear)
    );
    assert!(Answer::parse(Task::Discrimination, "AB").is_err());
    assert!(Answer::parse(Task::Identification, "many").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn selected_pairs_match_the_oracle(seed in any::<u64>(), pick in any::<u64>(), condition in 1u8..=3) {
        let s = random_walk(seed, 100, RANGE).unwrap();
        let mut rng = StudyRng::new(pick);
        if let Ok((a, b)) = select_pair(&s, condition, &mut rng) {
            prop_assert!(a + 5 <= b);
            prop_assert!(oracle_pair(s.values[a], s.values[b], condition));
        }
    }

    #[test]
    fn selected_points_match_the_oracle(seed in any::<u64>(), pick in any::<u64>(), condition in 1u8..=3) {
        let s = random_walk(seed, 100, RANGE).unwrap();
        let mut rng = StudyRng::new(pick);
        match select_identification_point(&s, condition, &mut rng) {
            Ok(i) => prop_assert!(oracle_identification(s.values[i], condition)),
            Err(_) => prop_assert!(!s.values.iter().any(|&v| oracle_identification(v, condition))),
        }
    }
}
