//! Scenario document model: JSON schema, validation, and construction of
//! ensembles and partitions from a parsed document.

use std::collections::BTreeMap;

use num_complex::Complex64;
use qstate_core::{DensityMatrix, Ensemble, Partition};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Amplitude vectors further than this from unit norm are rejected instead
/// of silently normalized.
const NORM_TOL: f64 = 1e-6;
/// Priors must sum to one within this tolerance.
const PRIOR_SUM_TOL: f64 = 1e-9;

/// A guessing-game description: states, priors, partitions, the tasks to
/// evaluate, and an optional parameter sweep.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub name: String,
    /// Label-sorted map keeps symbol order deterministic.
    pub states: BTreeMap<String, StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priors: Option<BTreeMap<String, PriorValue>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub partitions: BTreeMap<String, Vec<Vec<String>>>,
    pub tasks: Vec<TaskSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

/// A qubit state, given either as a Bloch vector or as a pair of complex
/// amplitudes `[[re, im], [re, im]]`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<[[f64; 2]; 2]>,
}

/// A prior probability, written as a decimal or as a fraction string like
/// "1/4".
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PriorValue {
    Number(f64),
    Fraction(String),
}

impl PriorValue {
    pub fn value(&self) -> Result<f64> {
        match self {
            PriorValue::Number(v) => Ok(*v),
            PriorValue::Fraction(s) => {
                let parse = |part: &str| {
                    part.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Validation(format!("malformed prior {s:?}")))
                };
                match s.split_once('/') {
                    Some((num, den)) => {
                        let d = parse(den)?;
                        if d == 0.0 {
                            return Err(CliError::Validation(format!(
                                "prior {s:?} divides by zero"
                            )));
                        }
                        Ok(parse(num)? / d)
                    }
                    None => parse(s),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub enum FigureOfMerit {
    #[serde(rename = "min-error")]
    MinError,
    #[serde(rename = "max-confidence")]
    MaxConfidence,
}

impl FigureOfMerit {
    pub fn name(&self) -> &'static str {
        match self {
            FigureOfMerit::MinError => "min-error",
            FigureOfMerit::MaxConfidence => "max-confidence",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum RegimeName {
    None,
    Pre,
    Post,
    Meta,
}

impl RegimeName {
    pub fn name(&self) -> &'static str {
        match self {
            RegimeName::None => "none",
            RegimeName::Pre => "pre",
            RegimeName::Post => "post",
            RegimeName::Meta => "meta",
        }
    }

    /// True when the regime's value depends on a partition.
    pub fn needs_partition(&self) -> bool {
        !matches!(self, RegimeName::None)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub figure_of_merit: FigureOfMerit,
    pub regimes: Vec<RegimeName>,
}

/// Linear sweep of one parameter. The binding lists the polar angles of an
/// orthonormal-basis encoding; entries equal to the parameter name take the
/// sweep value.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub binding: Vec<BindingEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum BindingEntry {
    Angle(f64),
    Parameter(String),
}

impl SweepSpec {
    /// The evenly spaced sweep values, endpoints included.
    pub fn points(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// Basis angles with the parameter substituted.
    pub fn bound_angles(&self, value: f64) -> Vec<f64> {
        self.binding
            .iter()
            .map(|b| match b {
                BindingEntry::Angle(a) => *a,
                BindingEntry::Parameter(_) => value,
            })
            .collect()
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioDoc> {
    let doc: ScenarioDoc = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    doc.validate()?;
    Ok(doc)
}

impl ScenarioDoc {
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(CliError::Validation("scenario name is empty".into()));
        }
        if self.states.is_empty() {
            return Err(CliError::Validation(format!(
                "scenario {:?} has no states",
                self.name
            )));
        }
        for (label, spec) in &self.states {
            match (&spec.bloch, &spec.amplitudes) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Validation(format!(
                        "state {label:?} gives both bloch and amplitudes"
                    )))
                }
                (None, None) => {
                    return Err(CliError::Validation(format!(
                        "state {label:?} gives neither bloch nor amplitudes"
                    )))
                }
                (Some(v), None) => {
                    let r2: f64 = v.iter().map(|c| c * c).sum();
                    if r2 > 1.0 + NORM_TOL {
                        return Err(CliError::Validation(format!(
                            "state {label:?} has Bloch length {} > 1",
                            r2.sqrt()
                        )));
                    }
                }
                (None, Some(a)) => {
                    let norm2: f64 = a.iter().flatten().map(|c| c * c).sum();
                    if (norm2.sqrt() - 1.0).abs() > NORM_TOL {
                        return Err(CliError::Validation(format!(
                            "state {label:?} amplitudes have norm {}, expected 1 within {NORM_TOL}",
                            norm2.sqrt()
                        )));
                    }
                }
            }
        }
        if let Some(priors) = &self.priors {
            let mut sum = 0.0;
            for (label, prior) in priors {
                if !self.states.contains_key(label) {
                    return Err(CliError::Validation(format!(
                        "prior given for unknown label {label:?}"
                    )));
                }
                let v = prior.value()?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(CliError::Validation(format!(
                        "prior of {label:?} is {v}, outside [0, 1]"
                    )));
                }
                sum += v;
            }
            for label in self.states.keys() {
                if !priors.contains_key(label) {
                    return Err(CliError::Validation(format!(
                        "state {label:?} has no prior; give all priors or none"
                    )));
                }
            }
            if (sum - 1.0).abs() > PRIOR_SUM_TOL {
                return Err(CliError::Validation(format!(
                    "priors sum to {sum}, expected 1 within {PRIOR_SUM_TOL}"
                )));
            }
        }
        for (pname, blocks) in &self.partitions {
            let mut seen: Vec<&String> = Vec::new();
            for block in blocks {
                if block.is_empty() {
                    return Err(CliError::Validation(format!(
                        "partition {pname:?} has an empty block"
                    )));
                }
                for label in block {
                    if !self.states.contains_key(label) {
                        return Err(CliError::Validation(format!(
                            "partition {pname:?} uses unknown label {label:?}"
                        )));
                    }
                    if seen.contains(&label) {
                        return Err(CliError::Validation(format!(
                            "partition {pname:?} lists label {label:?} twice"
                        )));
                    }
                    seen.push(label);
                }
            }
            if seen.len() != self.states.len() {
                return Err(CliError::Validation(format!(
                    "partition {pname:?} covers {} of {} labels",
                    seen.len(),
                    self.states.len()
                )));
            }
        }
        for task in &self.tasks {
            if task.regimes.is_empty() {
                return Err(CliError::Validation("task lists no regimes".into()));
            }
            if task.regimes.iter().any(|r| r.needs_partition()) && self.partitions.is_empty() {
                return Err(CliError::Validation(
                    "task needs a partition but the scenario defines none".into(),
                ));
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.parameter != "theta" {
                return Err(CliError::Validation(format!(
                    "unsupported sweep parameter {:?}; only \"theta\" is supported",
                    sweep.parameter
                )));
            }
            if sweep.steps < 2 {
                return Err(CliError::Validation(format!(
                    "sweep needs at least 2 steps, got {}",
                    sweep.steps
                )));
            }
            if !(sweep.start < sweep.stop) {
                return Err(CliError::Validation(format!(
                    "sweep start {} must be below stop {}",
                    sweep.start, sweep.stop
                )));
            }
            if sweep.binding.is_empty() {
                return Err(CliError::Validation("sweep binding is empty".into()));
            }
            for entry in &sweep.binding {
                if let BindingEntry::Parameter(p) = entry {
                    if p != &sweep.parameter {
                        return Err(CliError::Validation(format!(
                            "binding names unknown parameter {p:?}"
                        )));
                    }
                }
            }
            if !sweep
                .binding
                .iter()
                .any(|b| matches!(b, BindingEntry::Parameter(_)))
            {
                return Err(CliError::Validation(
                    "sweep binding never uses the parameter".into(),
                ));
            }
            // The binding replaces the states by a basis encoding, whose
            // labels must be the declared ones.
            let expected = basis_labels(sweep.binding.len());
            let declared: Vec<&String> = self.states.keys().collect();
            if declared != expected.iter().collect::<Vec<_>>() {
                return Err(CliError::Validation(format!(
                    "sweep binding of {} bases needs state labels {expected:?}",
                    sweep.binding.len()
                )));
            }
        }
        Ok(())
    }

    /// The ensemble of the document's literal states, in label order.
    pub fn ensemble(&self) -> Result<Ensemble> {
        let mut entries = Vec::with_capacity(self.states.len());
        for (label, spec) in &self.states {
            let state = match (&spec.bloch, &spec.amplitudes) {
                (Some(v), None) => DensityMatrix::from_bloch(*v)?,
                (None, Some(a)) => {
                    let mut c0 = Complex64::new(a[0][0], a[0][1]);
                    let mut c1 = Complex64::new(a[1][0], a[1][1]);
                    let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
                    c0 /= norm;
                    c1 /= norm;
                    DensityMatrix::from_amplitudes(c0, c1)?
                }
                _ => unreachable!("validated to have exactly one form"),
            };
            entries.push((label.clone(), state, self.prior_of(label)?));
        }
        Ok(Ensemble::new(entries)?)
    }

    /// The ensemble at one sweep value: the basis encoding of the bound
    /// angles, under the document's priors.
    pub fn ensemble_at(&self, theta: Option<f64>) -> Result<Ensemble> {
        match (theta, &self.sweep) {
            (Some(t), Some(sweep)) => {
                let base = qstate_discrim::minerror::basis_encoding(&sweep.bound_angles(t))?;
                if self.priors.is_none() {
                    return Ok(base);
                }
                let entries = base
                    .labels()
                    .iter()
                    .enumerate()
                    .map(|(i, label)| {
                        Ok((label.clone(), base.state(i).clone(), self.prior_of(label)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Ensemble::new(entries)?)
            }
            (Some(_), None) => Err(CliError::Validation(format!(
                "scenario {:?} has no sweep binding",
                self.name
            ))),
            (None, _) => self.ensemble(),
        }
    }

    fn prior_of(&self, label: &str) -> Result<f64> {
        match &self.priors {
            Some(priors) => priors
                .get(label)
                .ok_or_else(|| CliError::Validation(format!("state {label:?} has no prior")))?
                .value(),
            None => Ok(1.0 / self.states.len() as f64),
        }
    }

    /// Named partitions in name order.
    pub fn partitions(&self, e: &Ensemble) -> Result<Vec<(String, Partition)>> {
        self.partitions
            .iter()
            .map(|(name, blocks)| {
                let p = Partition::new(e, blocks)?;
                Ok((name.clone(), p))
            })
            .collect()
    }
}

/// Labels "1+", "1-", ..., "k+", "k-" of a k-basis encoding, sorted.
pub fn basis_labels(k: usize) -> Vec<String> {
    let mut labels: Vec<String> = (1..=k)
        .flat_map(|i| [format!("{i}+"), format!("{i}-")])
        .collect();
    labels.sort();
    labels
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_document() {
        let doc = crate::presets::preset("two-bases").unwrap();
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back = parse_scenario(&text).unwrap();
        assert_eq!(doc, back);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_documents() {
        assert!(matches!(
            parse_scenario(r#"{"name":"x","states":{},"tasks":[],"extra":1}"#),
            Err(CliError::Parse(_))
        ));
        // label in two blocks
        let text = r#"{
            "name": "dup",
            "states": {"a": {"bloch": [0,0,1]}, "b": {"bloch": [1,0,0]}},
            "partitions": {"p": [["a","b"],["a"]]},
            "tasks": [{"figure_of_merit": "min-error", "regimes": ["none"]}]
        }"#;
        assert!(matches!(parse_scenario(text), Err(CliError::Validation(_))));
        // priors off by more than the tolerance
        let text = r#"{
            "name": "bad-priors",
            "states": {"a": {"bloch": [0,0,1]}, "b": {"bloch": [1,0,0]}},
            "priors": {"a": "1/2", "b": 0.4},
            "tasks": [{"figure_of_merit": "min-error", "regimes": ["none"]}]
        }"#;
        assert!(matches!(parse_scenario(text), Err(CliError::Validation(_))));
    }

    #[test]
    fn amplitudes_normalized_only_near_unit() {
        let near = r#"{
            "name": "amp",
            "states": {"a": {"amplitudes": [[1.0000004, 0], [0, 0]]}},
            "tasks": [{"figure_of_merit": "min-error", "regimes": ["none"]}]
        }"#;
        let doc = parse_scenario(near).unwrap();
        let e = doc.ensemble().unwrap();
        assert!((e.state(0).matrix().trace().re - 1.0).abs() < 1e-12);

        let far = near.replace("1.0000004", "1.1");
        assert!(matches!(parse_scenario(&far), Err(CliError::Validation(_))));
    }

    #[test]
    fn fraction_priors_parse() {
        assert!((PriorValue::Fraction("1/4".into()).value().unwrap() - 0.25).abs() < 1e-15);
        assert!(PriorValue::Fraction("x".into()).value().is_err());
    }
}
