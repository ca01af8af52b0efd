//! Built-in scenario documents. They are constructed in code so the
//! `check` subcommand needs no files on disk.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use crate::scenario::{
    BindingEntry, FigureOfMerit, RegimeName, ScenarioDoc, StateSpec, SweepSpec, TaskSpec,
};

pub const PRESET_NAMES: [&str; 6] = [
    "two-bases",
    "trine",
    "example-3-5-2",
    "bb84",
    "tetrahedron",
    "five-state",
];

fn states(entries: &[(&str, [f64; 3])]) -> BTreeMap<String, StateSpec> {
    entries
        .iter()
        .map(|(label, v)| {
            (
                label.to_string(),
                StateSpec {
                    bloch: Some(*v),
                    amplitudes: None,
                },
            )
        })
        .collect()
}

fn partition(name: &str, blocks: &[&[&str]]) -> BTreeMap<String, Vec<Vec<String>>> {
    let blocks = blocks
        .iter()
        .map(|b| b.iter().map(|s| s.to_string()).collect())
        .collect();
    BTreeMap::from([(name.to_string(), blocks)])
}

fn task(merit: FigureOfMerit) -> Vec<TaskSpec> {
    vec![TaskSpec {
        figure_of_merit: merit,
        regimes: vec![
            RegimeName::None,
            RegimeName::Pre,
            RegimeName::Post,
            RegimeName::Meta,
        ],
    }]
}

/// States of k orthonormal bases whose positive directions sit at the given
/// polar angles in the x-z plane.
fn basis_states(angles: &[f64]) -> BTreeMap<String, StateSpec> {
    let mut entries = BTreeMap::new();
    for (i, theta) in angles.iter().enumerate() {
        let n = [theta.sin(), 0.0, theta.cos()];
        entries.insert(
            format!("{}+", i + 1),
            StateSpec {
                bloch: Some(n),
                amplitudes: None,
            },
        );
        entries.insert(
            format!("{}-", i + 1),
            StateSpec {
                bloch: Some([-n[0], -n[1], -n[2]]),
                amplitudes: None,
            },
        );
    }
    entries
}

/// The built-in scenario with the given name, if any.
pub fn preset(name: &str) -> Option<ScenarioDoc> {
    match name {
        // Two orthonormal bases an angle theta apart, both the basis and the
        // parity partition, swept over theta.
        "two-bases" => Some(ScenarioDoc {
            name: "two-bases".into(),
            states: basis_states(&[0.0, FRAC_PI_2]),
            priors: None,
            partitions: {
                let mut p = partition("basis", &[&["1+", "1-"], &["2+", "2-"]]);
                p.extend(partition("parity", &[&["1+", "2+"], &["1-", "2-"]]));
                p
            },
            tasks: task(FigureOfMerit::MinError),
            sweep: Some(SweepSpec {
                parameter: "theta".into(),
                start: PI / 36.0,
                stop: 35.0 * PI / 36.0,
                steps: 35,
                binding: vec![
                    BindingEntry::Angle(0.0),
                    BindingEntry::Parameter("theta".into()),
                ],
            }),
        }),
        // Three bases at 60 degree spacing: six states forming two opposite
        // trines.
        "trine" => Some(ScenarioDoc {
            name: "trine".into(),
            states: basis_states(&[FRAC_PI_3, 2.0 * FRAC_PI_3, PI]),
            priors: None,
            partitions: partition("basis", &[&["1+", "1-"], &["2+", "2-"], &["3+", "3-"]]),
            tasks: task(FigureOfMerit::MinError),
            sweep: None,
        }),
        // Two tilted pure states paired with the sigma-x eigenstates, at the
        // default tilt theta = pi/2.
        "example-3-5-2" => {
            let (s, c) = (FRAC_PI_2 / 2.0).sin_cos();
            Some(ScenarioDoc {
                name: "example-3-5-2".into(),
                states: states(&[
                    ("1", [s, 0.0, c]),
                    ("2", [-s, 0.0, c]),
                    ("3", [1.0, 0.0, 0.0]),
                    ("4", [-1.0, 0.0, 0.0]),
                ]),
                priors: None,
                partitions: partition("pairs", &[&["1", "2"], &["3", "4"]]),
                tasks: task(FigureOfMerit::MinError),
                sweep: None,
            })
        }
        // The sigma-z and sigma-x eigenstates, grouped by basis.
        "bb84" => Some(ScenarioDoc {
            name: "bb84".into(),
            states: basis_states(&[0.0, FRAC_PI_2]),
            priors: None,
            partitions: partition("basis", &[&["1+", "1-"], &["2+", "2-"]]),
            tasks: task(FigureOfMerit::MaxConfidence),
            sweep: None,
        }),
        // Four pure states on tetrahedron vertices, split into two
        // anti-parallel pairs.
        "tetrahedron" => {
            let s = 8.0f64.sqrt() / 3.0;
            let (c3, s3) = ((2.0 * FRAC_PI_3).cos(), (2.0 * FRAC_PI_3).sin());
            Some(ScenarioDoc {
                name: "tetrahedron".into(),
                states: states(&[
                    ("1+", [0.0, 0.0, 1.0]),
                    ("1-", [s, 0.0, -1.0 / 3.0]),
                    ("2+", [s * c3, s * s3, -1.0 / 3.0]),
                    ("2-", [s * c3, -s * s3, -1.0 / 3.0]),
                ]),
                priors: None,
                partitions: partition("basis", &[&["1+", "1-"], &["2+", "2-"]]),
                tasks: task(FigureOfMerit::MaxConfidence),
                sweep: None,
            })
        }
        // A trine plus the orthogonal complements of two of its members.
        "five-state" => {
            let r = 3.0f64.sqrt() / 2.0;
            Some(ScenarioDoc {
                name: "five-state".into(),
                states: states(&[
                    ("1", [0.0, 0.0, 1.0]),
                    ("2", [r, 0.0, -0.5]),
                    ("3", [-r, 0.0, -0.5]),
                    ("4", [r, 0.0, 0.5]),
                    ("5", [-r, 0.0, 0.5]),
                ]),
                priors: None,
                partitions: partition("blocks", &[&["1", "2", "3"], &["4", "5"]]),
                tasks: task(FigureOfMerit::MaxConfidence),
                sweep: None,
            })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for name in PRESET_NAMES {
            let doc = preset(name).unwrap_or_else(|| panic!("missing preset {name}"));
            doc.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            doc.ensemble().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(preset("unknown").is_none());
    }
}
