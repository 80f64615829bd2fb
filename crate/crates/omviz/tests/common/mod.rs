//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::path::PathBuf;

use omviz::core::chart::{render, LayerName};
use omviz::core::datagen::random_walk;
use omviz::core::magnitude::decompose;
use omviz::core::study::{build_study, Answer, Task};
use omviz::core::{ChartSpec, Design, MagnitudeRange, Marker, OmcPalette};
use sha2::{Digest, Sha256};

pub const RANGE: MagnitudeRange = MagnitudeRange::STUDY;

/// Set to regenerate the golden SVGs instead of comparing against them.
pub const BLESS_ENV: &str = "OMVIZ_BLESS_GOLDEN";

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// One fixed stimulus per design: walk seed 2024 with markers A:20 and B:70.
pub fn golden_cases() -> Vec<(Design, String)> {
    let series = random_walk(2024, 100, RANGE).unwrap();
    let markers = vec![
        Marker {
            label: 'A',
            index: 20,
        },
        Marker {
            label: 'B',
            index: 70,
        },
    ];
    Design::ALL
        .iter()
        .map(|&design| {
            let spec = ChartSpec::new(design).with_markers(markers.clone());
            let doc = render(&series, &spec, &OmcPalette::default())
                .unwrap()
                .document;
            (design, doc)
        })
        .collect()
}

pub fn golden_path(design: Design) -> PathBuf {
    golden_dir().join(format!("{}.svg", design.as_str()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Value of attribute `name` in an element's source text.
pub fn attr<'a>(element: &'a str, name: &str) -> Option<&'a str> {
    let key = format!(" {name}=\"");
    let start = element.find(&key)? + key.len();
    let len = element[start..].find('"')?;
    Some(&element[start..start + len])
}

pub fn elements<'a>(doc: &'a str, tag: &str) -> Vec<&'a str> {
    let open = format!("<{tag} ");
    doc.match_indices(&open)
        .map(|(i, _)| {
            let end = doc[i..].find('>').unwrap();
            &doc[i..i + end]
        })
        .collect()
}

pub fn layer(doc: &str, name: LayerName) -> Option<&str> {
    let open = format!("<g id=\"{}\">", name.as_str());
    let start = doc.find(&open)?;
    let end = doc[start..].find("</g>")?;
    Some(&doc[start..start + end])
}

/// (mantissa, exponent) with the range top folded into the highest decade.
fn split(v: f64) -> (f64, i32) {
    let mv = decompose(v).unwrap();
    if mv.exponent > 4 {
        (mv.mantissa * 10.0, 4)
    } else {
        (mv.mantissa, mv.exponent)
    }
}

fn on_grid(m: f64) -> bool {
    [1.0, 5.0, 10.0]
        .iter()
        .any(|g| (m - g).abs() <= 0.05 + 1e-12)
}

pub fn identification_ok(v: f64, condition: u8) -> bool {
    let (m, e) = split(v);
    match condition {
        1 => on_grid(m),
        2 => (3..=4).contains(&e) && !on_grid(m),
        3 => (1..=2).contains(&e) && !on_grid(m),
        _ => false,
    }
}

pub fn pair_ok(a: f64, b: f64, condition: u8) -> bool {
    let gap = (split(a).1 - split(b).1).abs();
    a != b
        && match condition {
            1 => gap == 0,
            2 => gap == 1,
            3 => gap >= 2,
            _ => false,
        }
}

/// Trials of the study built from `master_seed` that break their condition,
/// re-checked from the regenerated datasets.
pub fn study_violations(master_seed: u64) -> Vec<String> {
    let trials = build_study(master_seed).unwrap();
    let mut out = Vec::new();
    for t in &trials {
        let v = t.dataset.materialize().unwrap().values;
        let ok = match t.task {
            Task::Identification => {
                let i = t.marked[0].index;
                t.marked.len() == 1
                    && identification_ok(v[i], t.condition)
                    && t.correct_answer == Answer::Number(v[i])
            }
            Task::Discrimination | Task::Estimation => {
                let (a, b) = (t.marked[0], t.marked[1]);
                let (va, vb) = (v[a.index], v[b.index]);
                let truth_ok = match (t.task, t.correct_answer) {
                    (Task::Discrimination, Answer::Letter(l)) => {
                        l == if vb > va { 'B' } else { 'A' }
                    }
                    (Task::Estimation, Answer::Number(d)) => (d - (vb - va).abs()).abs() <= 1e-9,
                    _ => false,
                };
                t.marked.len() == 2 && a.index < b.index && pair_ok(va, vb, t.condition) && truth_ok
            }
            Task::Trend => t.marked.is_empty(),
        };
        if !ok {
            out.push(format!("master seed {master_seed}: {}", t.trial_id));
        }
    }
    out
}
