//! Maximum-confidence discrimination: per-symbol confidence, MCM
//! projections, and conclusive-rate optimization under the four
//! side-information regimes.

use qstate_core::{pseudo_inverse_sqrt, ComplexMatrix, Effect, Ensemble, Label, Partition, Povm};

use crate::error::{DiscrimError, Result};
use crate::oracle::{self, OracleConfig};
use crate::Regime;

/// States with purity below this are rejected where rank-1 projections are
/// required.
const PURITY_TOL: f64 = 1e-9;
/// Outcomes with block probability below this are excluded from conditional
/// maxima (the conditional probability is undefined there).
const SUPPORT_TOL: f64 = 1e-12;
/// Slack for collecting argmax level sets and for C(x) = 1 checks.
const LEVEL_TOL: f64 = 1e-9;

/// Per-symbol rank-1 projections with their scale parameters.
#[derive(Debug, Clone)]
pub struct McmProjectionSet {
    pub labels: Vec<Label>,
    pub projections: Vec<ComplexMatrix>,
}

/// One linear conclusive-rate subproblem behind a report: the certified
/// rate receives `multiplier` times the maximum of sum_x a_x weights[x]
/// over the feasible scale box of `projections`.
#[derive(Debug, Clone)]
pub struct RateSystem {
    pub projections: Vec<ComplexMatrix>,
    pub weights: Vec<f64>,
    pub multiplier: f64,
}

/// Confidence and conclusive-rate values for one regime.
#[derive(Debug, Clone)]
pub struct ConfidenceReport {
    pub regime: Regime,
    /// Per-symbol confidence in ensemble label order.
    pub confidences: Vec<f64>,
    pub rate: f64,
    /// Witnessing measurement(s): one POVM, or one per block for the
    /// pre-measurement regime.
    pub povms: Vec<Povm>,
    /// Conclusive outcome sets Y_x (outcome indices into the standard MCM),
    /// present for the post-measurement regime.
    pub conclusive_sets: Option<Vec<Vec<usize>>>,
    /// Rate maximized over the free scales of the MCM family, reported
    /// alongside the canonical-measurement rate for the post regime.
    pub rate_family: Option<f64>,
    /// Subproblems whose maxima sum to `certified_rate()`; lets callers
    /// recompute the rate with an independent solver.
    pub rate_systems: Vec<RateSystem>,
}

impl ConfidenceReport {
    /// The rate value that `rate_systems` certifies: the family-maximized
    /// rate when present, otherwise the reported rate.
    pub fn certified_rate(&self) -> f64 {
        self.rate_family.unwrap_or(self.rate)
    }
}

/// C(x): top eigenvalue of sqrt(rho)^-1 q_x rho_x sqrt(rho)^-1.
pub fn max_confidence(e: &Ensemble, x: usize) -> Result<f64> {
    let root = pseudo_inverse_sqrt(e.average().matrix())?;
    Ok((root * e.weighted_state(x) * root).max_eigenvalue())
}

/// All per-symbol confidences, sharing one inverse square root.
pub fn confidences(e: &Ensemble) -> Result<Vec<f64>> {
    let root = pseudo_inverse_sqrt(e.average().matrix())?;
    Ok((0..e.len())
        .map(|x| (root * e.weighted_state(x) * root).max_eigenvalue())
        .collect())
}

/// The unique confidence-attaining projection for a pure state:
/// Pi_x = rho^-1 rho_x rho^-1 / tr[rho^-1 rho_x rho^-1].
pub fn mcm_projection(e: &Ensemble, x: usize) -> Result<ComplexMatrix> {
    if !e.state(x).is_pure(PURITY_TOL) {
        return Err(DiscrimError::MixedStateUnsupported {
            label: e.labels()[x].clone(),
        });
    }
    let root = pseudo_inverse_sqrt(e.average().matrix())?;
    let inv = root * root;
    let m = inv * *e.state(x).matrix() * inv;
    let t = m.trace().re;
    if t <= SUPPORT_TOL {
        return Err(DiscrimError::InvalidConfig(format!(
            "state {:?} lies outside the ensemble support",
            e.labels()[x]
        )));
    }
    let p = m.scale(1.0 / t);
    Ok((p + p.adjoint()).scale(0.5))
}

/// MCM projections for every symbol of a pure-state ensemble.
pub fn mcm_projections(e: &Ensemble) -> Result<McmProjectionSet> {
    let projections = (0..e.len())
        .map(|x| mcm_projection(e, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(McmProjectionSet {
        labels: e.labels().to_vec(),
        projections,
    })
}

/// Assembles effects a_x Pi_x with the completing inconclusive effect.
fn assemble_povm(
    labels: &[Label],
    projections: &[ComplexMatrix],
    scales: &[f64],
) -> Result<Povm> {
    let mut sum = ComplexMatrix::zero();
    let mut outcomes = Vec::with_capacity(labels.len());
    for ((label, proj), &a) in labels.iter().zip(projections).zip(scales) {
        let m = proj.scale(a);
        sum = sum + m;
        outcomes.push((label.clone(), Effect::new(m)?));
    }
    let inconclusive = Effect::new(ComplexMatrix::identity() - sum)?;
    Ok(Povm::new(outcomes, Some(inconclusive))?)
}

/// The standard-MCM rate problem: projections and their occurrence
/// weights tr[rho Pi_x].
fn rate_problem(e: &Ensemble) -> Result<(McmProjectionSet, Vec<f64>)> {
    let set = mcm_projections(e)?;
    let rho = e.average();
    let weights = set
        .projections
        .iter()
        .map(|p| rho.matrix().trace_product(p))
        .collect();
    Ok((set, weights))
}

/// Optimal conclusive rate of the standard MCM: maximizes
/// sum_x a_x tr[rho Pi_x] over the scale box with POVM feasibility.
pub fn conclusive_rate(e: &Ensemble, cfg: &OracleConfig) -> Result<(Vec<f64>, f64, Povm)> {
    let (set, weights) = rate_problem(e)?;
    let sol = oracle::rate_maximize(&set.projections, &weights, cfg)?;
    let povm = assemble_povm(&set.labels, &set.projections, &sol.scales)?;
    Ok((sol.scales, sol.rate, povm))
}

/// No side information: standard MCM confidences and conclusive rate.
pub fn solve_plain_confidence(e: &Ensemble, cfg: &OracleConfig) -> Result<ConfidenceReport> {
    let confidences = confidences(e)?;
    let (set, weights) = rate_problem(e)?;
    let sol = oracle::rate_maximize(&set.projections, &weights, cfg)?;
    let povm = assemble_povm(&set.labels, &set.projections, &sol.scales)?;
    Ok(ConfidenceReport {
        regime: Regime::Plain,
        confidences,
        rate: sol.rate,
        povms: vec![povm],
        conclusive_sets: None,
        rate_family: None,
        rate_systems: vec![RateSystem {
            projections: set.projections,
            weights,
            multiplier: 1.0,
        }],
    })
}

/// Pre-measurement side information: per-block MCM, rate averaged over
/// blocks.
pub fn solve_pre_confidence(
    e: &Ensemble,
    p: &Partition,
    cfg: &OracleConfig,
) -> Result<ConfidenceReport> {
    let mut conf = vec![0.0; e.len()];
    let mut rate = 0.0;
    let mut povms = Vec::with_capacity(p.num_blocks());
    let mut systems = Vec::with_capacity(p.num_blocks());
    for (l, block) in p.blocks().iter().enumerate() {
        let q = p.block_prior(e, l);
        if q <= SUPPORT_TOL {
            continue;
        }
        let sub = e.restrict(block)?;
        let sub_conf = confidences(&sub)?;
        for (pos, &x) in block.iter().enumerate() {
            conf[x] = sub_conf[pos];
        }
        let (set, weights) = rate_problem(&sub)?;
        let sol = oracle::rate_maximize(&set.projections, &weights, cfg)?;
        let povm = assemble_povm(&set.labels, &set.projections, &sol.scales)?;
        rate += q * sol.rate;
        povms.push(povm);
        systems.push(RateSystem {
            projections: set.projections,
            weights,
            multiplier: q,
        });
    }
    Ok(ConfidenceReport {
        regime: Regime::Pre,
        confidences: conf,
        rate,
        povms,
        conclusive_sets: None,
        rate_family: None,
        rate_systems: systems,
    })
}

/// Post-measurement side information: the standard MCM is measured first,
/// then the revealed block selects the conclusive outcomes.
pub fn solve_post_confidence(
    e: &Ensemble,
    p: &Partition,
    cfg: &OracleConfig,
) -> Result<ConfidenceReport> {
    let set = mcm_projections(e)?;
    let (scales, _, povm) = conclusive_rate(e, cfg)?;
    let n = e.len();
    let num_y = set.projections.len();

    // Conditional probabilities are scale-free, so they are evaluated on the
    // projections themselves; outcomes with no block probability are skipped.
    let mut conf = vec![0.0; n];
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        let l = p.block_of(x);
        let block_weighted = p.block_weighted_state(e, l);
        let mut values = vec![f64::NEG_INFINITY; num_y];
        let mut best = f64::NEG_INFINITY;
        for y in 0..num_y {
            let den = block_weighted.trace_product(&set.projections[y]);
            if den <= SUPPORT_TOL {
                continue;
            }
            let num = e.weighted_state(x).trace_product(&set.projections[y]);
            values[y] = num / den;
            best = best.max(values[y]);
        }
        if best > f64::NEG_INFINITY {
            conf[x] = best;
            sets[x] = (0..num_y).filter(|&y| values[y] >= best - LEVEL_TOL).collect();
        }
    }

    // Conclusive outcomes per block, then the rate under the canonical
    // scales and its maximum over the whole MCM family.
    let mut rate = 0.0;
    let mut family_weights = vec![0.0; num_y];
    for (l, block) in p.blocks().iter().enumerate() {
        let block_weighted = p.block_weighted_state(e, l);
        let mut in_block = vec![false; num_y];
        for &x in block {
            for &y in &sets[x] {
                in_block[y] = true;
            }
        }
        for y in 0..num_y {
            if in_block[y] {
                let w = block_weighted.trace_product(&set.projections[y]);
                rate += scales[y] * w;
                family_weights[y] += w;
            }
        }
    }
    let family = oracle::rate_maximize(&set.projections, &family_weights, cfg)?;

    Ok(ConfidenceReport {
        regime: Regime::Post,
        confidences: conf,
        rate,
        povms: vec![povm],
        conclusive_sets: Some(sets),
        rate_family: Some(family.rate),
        rate_systems: vec![RateSystem {
            projections: set.projections,
            weights: family_weights,
            multiplier: 1.0,
        }],
    })
}

/// Post-measurement side information with metainformation: all
/// block-conditional projections implemented in one anticipative
/// measurement. Confidence equals the pre-measurement case; the rate is
/// maximized jointly.
pub fn solve_meta_confidence(
    e: &Ensemble,
    p: &Partition,
    cfg: &OracleConfig,
) -> Result<ConfidenceReport> {
    let pre = solve_pre_confidence(e, p, cfg)?;

    // Block-conditional projection per symbol.
    let mut projections: Vec<ComplexMatrix> = Vec::with_capacity(e.len());
    for (l, block) in p.blocks().iter().enumerate() {
        if p.block_prior(e, l) <= SUPPORT_TOL {
            continue;
        }
        let sub = e.restrict(block)?;
        for (pos, _) in block.iter().enumerate() {
            projections.push(mcm_projection(&sub, pos)?);
        }
    }
    let symbol_order: Vec<usize> = p
        .blocks()
        .iter()
        .enumerate()
        .filter(|(l, _)| p.block_prior(e, *l) > SUPPORT_TOL)
        .flat_map(|(_, b)| b.iter().copied())
        .collect();

    // Symbols from different blocks can share a projection; they are then
    // served by one physical outcome whose relabeled guess depends on the
    // revealed block, so their conclusive weights add up.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<ComplexMatrix> = Vec::new();
    for (i, proj) in projections.iter().enumerate() {
        match reps
            .iter()
            .position(|r| (*r - *proj).max_entry_norm() <= LEVEL_TOL)
        {
            Some(g) => groups[g].push(i),
            None => {
                reps.push(*proj);
                groups.push(vec![i]);
            }
        }
    }
    let mut weights = vec![0.0; groups.len()];
    for (g, members) in groups.iter().enumerate() {
        let mut blocks_seen: Vec<usize> = Vec::new();
        for &i in members {
            let l = p.block_of(symbol_order[i]);
            if !blocks_seen.contains(&l) {
                blocks_seen.push(l);
                weights[g] += p.block_weighted_state(e, l).trace_product(&reps[g]);
            }
        }
    }
    let sol = oracle::rate_maximize(&reps, &weights, cfg)?;
    if sol.rate > pre.rate + crate::minerror::HIERARCHY_TOL {
        return Err(DiscrimError::HierarchyViolation(format!(
            "rate with metainformation {} exceeds pre-measurement rate {}",
            sol.rate, pre.rate
        )));
    }
    let labels: Vec<Label> = groups
        .iter()
        .map(|members| {
            members
                .iter()
                .map(|&i| e.labels()[symbol_order[i]].as_str())
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect();
    let povm = assemble_povm(&labels, &reps, &sol.scales)?;

    Ok(ConfidenceReport {
        regime: Regime::Meta,
        confidences: pre.confidences,
        rate: sol.rate,
        povms: vec![povm],
        conclusive_sets: None,
        rate_family: None,
        rate_systems: vec![RateSystem {
            projections: reps,
            weights,
            multiplier: 1.0,
        }],
    })
}

/// True per symbol when confidence 1 is reached, i.e. the symbol can be
/// identified unambiguously.
pub fn unambiguous_check(report: &ConfidenceReport) -> Vec<bool> {
    report
        .confidences
        .iter()
        .map(|&c| c >= 1.0 - LEVEL_TOL)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use qstate_core::DensityMatrix;

    fn cfg() -> OracleConfig {
        OracleConfig::fast()
    }

    fn bb84() -> (Ensemble, Partition) {
        let e = Ensemble::uniform(vec![
            ("1+".into(), DensityMatrix::from_bloch([0.0, 0.0, 1.0]).unwrap()),
            ("1-".into(), DensityMatrix::from_bloch([0.0, 0.0, -1.0]).unwrap()),
            ("2+".into(), DensityMatrix::from_bloch([1.0, 0.0, 0.0]).unwrap()),
            ("2-".into(), DensityMatrix::from_bloch([-1.0, 0.0, 0.0]).unwrap()),
        ])
        .unwrap();
        let p = Partition::new(
            &e,
            &[
                vec!["1+".into(), "1-".into()],
                vec!["2+".into(), "2-".into()],
            ],
        )
        .unwrap();
        (e, p)
    }

    fn tetrahedron() -> (Ensemble, Partition) {
        let s = 8.0f64.sqrt() / 3.0;
        let e = Ensemble::uniform(vec![
            ("1+".into(), DensityMatrix::from_bloch([0.0, 0.0, 1.0]).unwrap()),
            ("1-".into(), DensityMatrix::from_bloch([s, 0.0, -1.0 / 3.0]).unwrap()),
            (
                "2+".into(),
                DensityMatrix::from_bloch([
                    s * (2.0 * std::f64::consts::FRAC_PI_3).cos(),
                    s * (2.0 * std::f64::consts::FRAC_PI_3).sin(),
                    -1.0 / 3.0,
                ])
                .unwrap(),
            ),
            (
                "2-".into(),
                DensityMatrix::from_bloch([
                    s * (2.0 * std::f64::consts::FRAC_PI_3).cos(),
                    -s * (2.0 * std::f64::consts::FRAC_PI_3).sin(),
                    -1.0 / 3.0,
                ])
                .unwrap(),
            ),
        ])
        .unwrap();
        let p = Partition::new(
            &e,
            &[
                vec!["1+".into(), "1-".into()],
                vec!["2+".into(), "2-".into()],
            ],
        )
        .unwrap();
        (e, p)
    }

    #[test]
    fn bb84_confidence_values() {
        let (e, p) = bb84();
        let plain = solve_plain_confidence(&e, &cfg()).unwrap();
        assert!(plain.confidences.iter().all(|c| (c - 0.5).abs() < 1e-9));
        assert!((plain.rate - 1.0).abs() < 1e-9);
        assert!(unambiguous_check(&plain).iter().all(|u| !u));

        let pre = solve_pre_confidence(&e, &p, &cfg()).unwrap();
        assert!(pre.confidences.iter().all(|c| (c - 1.0).abs() < 1e-9));
        assert!((pre.rate - 1.0).abs() < 1e-9);

        let post = solve_post_confidence(&e, &p, &cfg()).unwrap();
        assert!(post.confidences.iter().all(|c| (c - 1.0).abs() < 1e-9));
        assert!((post.rate - 0.5).abs() < 1e-9);
        assert!((post.rate_family.unwrap() - 0.5).abs() < 1e-9);
        assert!(unambiguous_check(&post).iter().all(|u| *u));
        let sets = post.conclusive_sets.unwrap();
        for (x, set) in sets.iter().enumerate() {
            assert_eq!(set, &vec![x]);
        }

        let meta = solve_meta_confidence(&e, &p, &cfg()).unwrap();
        assert!(meta.confidences.iter().all(|c| (c - 1.0).abs() < 1e-9));
        assert!((meta.rate - 0.5).abs() < 1e-9);
    }

    #[test]
    fn tetrahedron_confidence_values() {
        let (e, p) = tetrahedron();
        let plain = solve_plain_confidence(&e, &cfg()).unwrap();
        assert!(plain.confidences.iter().all(|c| (c - 0.5).abs() < 1e-9));
        assert!((plain.rate - 1.0).abs() < 1e-6);

        let pre = solve_pre_confidence(&e, &p, &cfg()).unwrap();
        assert!(pre.confidences.iter().all(|c| (c - 1.0).abs() < 1e-9));
        assert!((pre.rate - (1.0 - 1.0 / 3.0f64.sqrt())).abs() < 1e-6);

        let post = solve_post_confidence(&e, &p, &cfg()).unwrap();
        assert!(post.confidences.iter().all(|c| (c - 0.75).abs() < 1e-9));
        assert!((post.rate - 2.0 / 3.0).abs() < 1e-6);

        let meta = solve_meta_confidence(&e, &p, &cfg()).unwrap();
        assert!(meta.confidences.iter().all(|c| (c - 1.0).abs() < 1e-9));
        assert!((meta.rate - 1.0 / 3.0).abs() < 1e-6);
        assert!(pre.rate >= meta.rate - 1e-9);
    }

    #[test]
    fn five_state_confidence_values() {
        let mut entries = Vec::new();
        for x in 1..=3u32 {
            let ang = 2.0 * std::f64::consts::PI * (x - 1) as f64 / 3.0;
            entries.push((
                x.to_string(),
                DensityMatrix::from_bloch([ang.sin(), 0.0, ang.cos()]).unwrap(),
            ));
        }
        entries.push(("4".into(), entries[2].1.complement().unwrap()));
        entries.push(("5".into(), entries[1].1.complement().unwrap()));
        let e = Ensemble::uniform(entries).unwrap();
        let p = Partition::new(
            &e,
            &[
                vec!["1".into(), "2".into(), "3".into()],
                vec!["4".into(), "5".into()],
            ],
        )
        .unwrap();

        let set = mcm_projections(&e).unwrap();
        let z = ComplexMatrix::pauli_z();
        let x_ = ComplexMatrix::pauli_x();
        let expect = |cx: f64, cz: f64| {
            (ComplexMatrix::identity() + x_.scale(cx) + z.scale(cz)).scale(0.5)
        };
        let r3 = 3.0f64.sqrt();
        let cases = [
            expect(0.0, 1.0),
            expect(12.0 * r3 / 31.0, -23.0 / 31.0),
            expect(-12.0 * r3 / 31.0, -23.0 / 31.0),
            expect(4.0 * r3 / 7.0, 1.0 / 7.0),
            expect(-4.0 * r3 / 7.0, 1.0 / 7.0),
        ];
        for (proj, want) in set.projections.iter().zip(&cases) {
            assert!((*proj - *want).max_entry_norm() < 1e-9);
        }

        let c = confidences(&e).unwrap();
        let want_c = [1.0 / 3.0, 11.0 / 24.0, 11.0 / 24.0, 3.0 / 8.0, 3.0 / 8.0];
        for (got, want) in c.iter().zip(&want_c) {
            assert!((got - want).abs() < 1e-9);
        }

        let pre = solve_pre_confidence(&e, &p, &cfg()).unwrap();
        let want_pre = [2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0, 1.0];
        for (got, want) in pre.confidences.iter().zip(&want_pre) {
            assert!((got - want).abs() < 1e-9);
        }
        assert!((pre.rate - 0.8).abs() < 1e-6);

        let post = solve_post_confidence(&e, &p, &cfg()).unwrap();
        let want_post = [
            2.0 / 3.0,
            121.0 / 186.0,
            121.0 / 186.0,
            75.0 / 78.0,
            75.0 / 78.0,
        ];
        for (got, want) in post.confidences.iter().zip(&want_post) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        let sets = post.conclusive_sets.unwrap();
        assert_eq!(sets[0], vec![0]);
        assert_eq!(sets[3], vec![1]);
        assert_eq!(sets[4], vec![2]);

        let meta = solve_meta_confidence(&e, &p, &cfg()).unwrap();
        assert!((meta.rate - 0.8).abs() < 1e-6);
        for (got, want) in meta.confidences.iter().zip(&want_pre) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn confidence_weighted_success_identity() {
        let (e, _) = tetrahedron();
        let c = confidences(&e).unwrap();
        let (_, _, povm) = conclusive_rate(&e, &cfg()).unwrap();
        let rho = e.average();
        let lhs: f64 = povm
            .outcomes()
            .iter()
            .zip(&c)
            .map(|((_, eff), &cx)| cx * rho.matrix().trace_product(eff.matrix()))
            .sum();
        let rhs: f64 = povm
            .outcomes()
            .iter()
            .enumerate()
            .map(|(x, (_, eff))| e.weighted_state(x).trace_product(eff.matrix()))
            .sum();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
