//! Scenario evaluation: one result row per (sweep point, task, regime,
//! symbol), with optional independent oracle cross-checks, and the CSV
//! emission of those rows.

use qstate_core::{Ensemble, Partition};
use qstate_discrim::maxconf::{self, ConfidenceReport};
use qstate_discrim::minerror;
use qstate_discrim::oracle::{self, GridObjective, OracleConfig};

use crate::error::{CliError, Result};
use crate::scenario::{FigureOfMerit, RegimeName, ScenarioDoc};

/// The grid rate certificate handles at most this many free scales.
const CERT_MAX_VARS: usize = 5;

/// One output row. Minimum-error tasks use the symbol "P" and no rate;
/// confidence tasks emit one row per state symbol, with the regime's
/// conclusive rate repeated on each.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub scenario: String,
    pub theta: Option<f64>,
    pub regime: &'static str,
    pub merit: &'static str,
    pub symbol: String,
    pub value: f64,
    pub rate: Option<f64>,
    pub oracle_delta: Option<f64>,
}

/// Evaluates every task of the document, over the sweep when one is
/// defined. Rows come back sorted by (scenario, theta, regime, symbol).
pub fn run_evaluation(
    doc: &ScenarioDoc,
    oracle: bool,
    cfg: &OracleConfig,
) -> Result<Vec<ResultRow>> {
    let points: Vec<Option<f64>> = match &doc.sweep {
        Some(sweep) => sweep.points().into_iter().map(Some).collect(),
        None => vec![None],
    };
    let chunks = evaluate_points(doc, &points, oracle, cfg)?;
    let mut rows: Vec<ResultRow> = chunks.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        a.scenario
            .cmp(&b.scenario)
            .then_with(|| {
                a.theta
                    .unwrap_or(f64::NEG_INFINITY)
                    .total_cmp(&b.theta.unwrap_or(f64::NEG_INFINITY))
            })
            .then_with(|| a.regime.cmp(b.regime))
            .then_with(|| a.symbol.cmp(&b.symbol))
    });
    Ok(rows)
}

#[cfg(feature = "parallel")]
fn evaluate_points(
    doc: &ScenarioDoc,
    points: &[Option<f64>],
    oracle: bool,
    cfg: &OracleConfig,
) -> Result<Vec<Vec<ResultRow>>> {
    use rayon::prelude::*;
    points
        .par_iter()
        .map(|theta| evaluate_point(doc, *theta, oracle, cfg))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate_points(
    doc: &ScenarioDoc,
    points: &[Option<f64>],
    oracle: bool,
    cfg: &OracleConfig,
) -> Result<Vec<Vec<ResultRow>>> {
    points
        .iter()
        .map(|theta| evaluate_point(doc, *theta, oracle, cfg))
        .collect()
}

fn evaluate_point(
    doc: &ScenarioDoc,
    theta: Option<f64>,
    oracle: bool,
    cfg: &OracleConfig,
) -> Result<Vec<ResultRow>> {
    let e = doc.ensemble_at(theta)?;
    let partitions = doc.partitions(&e)?;
    let mut rows = Vec::new();
    for task in &doc.tasks {
        match task.figure_of_merit {
            FigureOfMerit::MinError => {
                min_error_rows(doc, &e, &partitions, &task.regimes, theta, oracle, cfg, &mut rows)?
            }
            FigureOfMerit::MaxConfidence => confidence_rows(
                doc,
                &e,
                &partitions,
                &task.regimes,
                theta,
                oracle,
                cfg,
                &mut rows,
            )?,
        }
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn min_error_rows(
    doc: &ScenarioDoc,
    e: &Ensemble,
    partitions: &[(String, Partition)],
    regimes: &[RegimeName],
    theta: Option<f64>,
    oracle: bool,
    cfg: &OracleConfig,
    rows: &mut Vec<ResultRow>,
) -> Result<()> {
    let row = |scenario: String, regime: &'static str, value: f64, delta: Option<f64>| ResultRow {
        scenario,
        theta,
        regime,
        merit: "min-error",
        symbol: "P".into(),
        value,
        rate: None,
        oracle_delta: delta,
    };

    if regimes.contains(&RegimeName::None) {
        let plain = minerror::solve_no_side_info(e, cfg)?;
        let delta = if oracle {
            Some((plain.probability - oracle::fixed_point_min_error(e, cfg)?.probability).abs())
        } else {
            None
        };
        rows.push(row(doc.name.clone(), "none", plain.probability, delta));
    }

    if regimes.iter().any(|r| r.needs_partition()) {
        for (pname, p) in partitions {
            // solve_all also asserts the regime ordering.
            let s = minerror::solve_all(e, p, cfg)?;
            let scenario = format!("{}/{}", doc.name, pname);
            for regime in regimes {
                let (name, value) = match regime {
                    RegimeName::None => continue,
                    RegimeName::Pre => ("pre", s.pre),
                    RegimeName::Post => ("post", s.post),
                    RegimeName::Meta => ("meta", s.meta),
                };
                let delta = if oracle {
                    Some(min_error_oracle_delta(e, p, regime, value, cfg)?)
                } else {
                    None
                };
                rows.push(row(scenario.clone(), name, value, delta));
            }
        }
    }
    Ok(())
}

/// Gap between a regime value and an independent solver: per-block fixed
/// points for pre, grid projective searches for post and meta.
fn min_error_oracle_delta(
    e: &Ensemble,
    p: &Partition,
    regime: &RegimeName,
    value: f64,
    cfg: &OracleConfig,
) -> Result<f64> {
    let reference = match regime {
        RegimeName::None => oracle::fixed_point_min_error(e, cfg)?.probability,
        RegimeName::Pre => {
            let mut total = 0.0;
            for (l, block) in p.blocks().iter().enumerate() {
                let q = p.block_prior(e, l);
                if q <= 1e-15 {
                    continue;
                }
                let sub = e.restrict(block)?;
                let v = if sub.len() == 1 {
                    1.0
                } else {
                    oracle::fixed_point_min_error(&sub, cfg)?.probability
                };
                total += q * v;
            }
            total
        }
        RegimeName::Post => {
            oracle::grid_projective_search(e, GridObjective::PostRelabel(p), cfg)?.value
        }
        RegimeName::Meta => oracle::grid_projective_search(e, GridObjective::Meta(p), cfg)?.value,
    };
    Ok((value - reference).abs())
}

#[allow(clippy::too_many_arguments)]
fn confidence_rows(
    doc: &ScenarioDoc,
    e: &Ensemble,
    partitions: &[(String, Partition)],
    regimes: &[RegimeName],
    theta: Option<f64>,
    oracle: bool,
    cfg: &OracleConfig,
    rows: &mut Vec<ResultRow>,
) -> Result<()> {
    let mut emit = |scenario: String, regime: &'static str, report: &ConfidenceReport| -> Result<()> {
        let delta = if oracle {
            rate_certificate_delta(report, cfg)?
        } else {
            None
        };
        for (x, label) in e.labels().iter().enumerate() {
            rows.push(ResultRow {
                scenario: scenario.clone(),
                theta,
                regime,
                merit: "max-confidence",
                symbol: label.clone(),
                value: report.confidences[x],
                rate: Some(report.rate),
                oracle_delta: delta,
            });
        }
        Ok(())
    };

    if regimes.contains(&RegimeName::None) {
        let report = maxconf::solve_plain_confidence(e, cfg)?;
        emit(doc.name.clone(), "none", &report)?;
    }
    if regimes.iter().any(|r| r.needs_partition()) {
        for (pname, p) in partitions {
            let scenario = format!("{}/{}", doc.name, pname);
            for regime in regimes {
                let (name, report) = match regime {
                    RegimeName::None => continue,
                    RegimeName::Pre => ("pre", maxconf::solve_pre_confidence(e, p, cfg)?),
                    RegimeName::Post => ("post", maxconf::solve_post_confidence(e, p, cfg)?),
                    RegimeName::Meta => ("meta", maxconf::solve_meta_confidence(e, p, cfg)?),
                };
                emit(scenario.clone(), name, &report)?;
            }
        }
    }
    Ok(())
}

/// Gap between the report's certified rate and an independent grid-based
/// maximization of the same linear systems; absent when a system has too
/// many free scales for the certificate.
fn rate_certificate_delta(report: &ConfidenceReport, cfg: &OracleConfig) -> Result<Option<f64>> {
    if report
        .rate_systems
        .iter()
        .any(|s| s.projections.len() > CERT_MAX_VARS)
    {
        return Ok(None);
    }
    let mut certified = 0.0;
    for system in &report.rate_systems {
        certified += system.multiplier
            * oracle::rate_grid_certificate(&system.projections, &system.weights, cfg)?;
    }
    Ok(Some((report.certified_rate() - certified).abs()))
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

pub const CSV_HEADER: &str = "scenario,theta,regime,merit,symbol,value,rate,oracle_delta";

/// Plain decimal with 12 significant digits.
fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let exponent = v.abs().log10().floor() as i32;
    let precision = (11 - exponent).max(0) as usize;
    format!("{v:.precision$}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_value).unwrap_or_default()
}

/// Renders sorted rows as CSV with LF line endings.
pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.scenario,
            fmt_opt(r.theta),
            r.regime,
            r.merit,
            r.symbol,
            fmt_value(r.value),
            fmt_opt(r.rate),
            fmt_opt(r.oracle_delta),
        ));
    }
    out
}

/// Writes the rows to a file in one shot.
pub fn sweep_to_csv(rows: &[ResultRow], path: &std::path::Path) -> Result<()> {
    if rows.is_empty() {
        return Err(CliError::Validation("no rows to write".into()));
    }
    std::fs::write(path, rows_to_csv(rows))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_value(0.75), "0.750000000000");
        assert_eq!(fmt_value(1.0), "1.00000000000");
        assert_eq!(fmt_value(0.5303), "0.530300000000");
        assert_eq!(fmt_value(3.0), "3.00000000000");
        assert_eq!(fmt_value(0.0), "0");
    }

    #[test]
    fn bb84_rows_match_known_table() {
        let doc = preset("bb84").unwrap();
        let rows = run_evaluation(&doc, false, &OracleConfig::fast()).unwrap();
        // 4 regimes x 4 symbols
        assert_eq!(rows.len(), 16);
        for r in &rows {
            match r.regime {
                "none" => {
                    assert_eq!(r.scenario, "bb84");
                    assert!((r.value - 0.5).abs() < 1e-9);
                    assert!((r.rate.unwrap() - 1.0).abs() < 1e-9);
                }
                "pre" => {
                    assert_eq!(r.scenario, "bb84/basis");
                    assert!((r.value - 1.0).abs() < 1e-9);
                    assert!((r.rate.unwrap() - 1.0).abs() < 1e-9);
                }
                "post" | "meta" => {
                    assert!((r.value - 1.0).abs() < 1e-9);
                    assert!((r.rate.unwrap() - 0.5).abs() < 1e-9);
                }
                other => panic!("unexpected regime {other}"),
            }
        }
        let csv = rows_to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn oracle_deltas_are_small_for_presets() {
        for name in ["bb84", "example-3-5-2"] {
            let doc = preset(name).unwrap();
            let rows = run_evaluation(&doc, true, &OracleConfig::fast()).unwrap();
            for r in &rows {
                let delta = r.oracle_delta.unwrap_or_else(|| {
                    panic!("{name}: missing oracle delta for {}/{}", r.regime, r.symbol)
                });
                assert!(delta < 1e-4, "{name} {} {}: delta {delta}", r.regime, r.symbol);
            }
        }
    }

    #[test]
    fn sweep_rows_are_sorted_and_counted() {
        let mut doc = preset("two-bases").unwrap();
        let sweep = doc.sweep.as_mut().unwrap();
        sweep.steps = 5;
        let rows = run_evaluation(&doc, false, &OracleConfig::fast()).unwrap();
        // per point: 1 none row + 2 partitions x 3 regimes
        assert_eq!(rows.len(), 5 * 7);
        let csv1 = rows_to_csv(&rows);
        let rows2 = run_evaluation(&doc, false, &OracleConfig::fast()).unwrap();
        assert_eq!(csv1, rows_to_csv(&rows2));
    }
}
