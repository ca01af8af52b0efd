//! Minimum-error guessing probabilities for the four side-information
//! regimes: none, pre-measurement, post-measurement, and post-measurement
//! with metainformation.

use qstate_core::{
    eigen_hermitian, top_eigenprojection, ComplexMatrix, DensityMatrix, Effect, Ensemble, Label,
    Partition, Povm,
};

use crate::error::{DiscrimError, Result};
use crate::oracle::{self, OracleConfig};

/// Priors closer than this to each other count as uniform; Bloch vectors
/// closer than this to opposite count as an antipodal pair.
const SYMMETRY_TOL: f64 = 1e-9;
/// Slack when collecting the states that reach the maximal eigenvalue.
const LEVEL_TOL: f64 = 1e-9;
/// Hierarchy inequalities may be violated by at most this much.
pub const HIERARCHY_TOL: f64 = 1e-9;
/// Cap on the number of auxiliary product labels.
const AUX_CAP: u128 = 1_000_000;

/// How a plain discrimination value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Single state, success probability one.
    Certain,
    /// Two states, exact Helstrom expression.
    Helstrom,
    /// Uniform priors with antipodal Bloch pairs, exact spectral expression.
    PairSymmetry,
    /// Iterative fixed-point solver.
    FixedPoint,
}

/// Optimal measurement of the plain task; either unique up to the solver's
/// output, or a whole family of equally good projective measurements.
#[derive(Debug, Clone)]
pub enum StandardMeasurement {
    Single(Povm),
    /// Every member is optimal, and so is any convex combination.
    Family(Vec<Povm>),
}

impl StandardMeasurement {
    /// A concrete representative: the single POVM, or the uniform mixture of
    /// the family members with effects grouped by label.
    pub fn canonical(&self) -> Povm {
        match self {
            Self::Single(m) => m.clone(),
            Self::Family(members) => {
                let weight = 1.0 / members.len() as f64;
                let mut outcomes: Vec<(Label, ComplexMatrix)> = Vec::new();
                for member in members {
                    for (label, effect) in member.outcomes() {
                        match outcomes.iter_mut().find(|(l, _)| l == label) {
                            Some((_, m)) => *m = *m + effect.matrix().scale(weight),
                            None => outcomes.push((label.clone(), effect.matrix().scale(weight))),
                        }
                    }
                }
                let outcomes = outcomes
                    .into_iter()
                    .map(|(l, m)| (l, Effect::new(m).expect("mixture of effects is an effect")))
                    .collect();
                Povm::new(outcomes, None).expect("mixture of POVMs is a POVM")
            }
        }
    }
}

/// Plain minimum-error solution.
#[derive(Debug, Clone)]
pub struct MinErrorReport {
    pub probability: f64,
    pub measurement: StandardMeasurement,
    pub method: SolveMethod,
}

/// Trace norm of a Hermitian matrix.
fn trace_norm(m: &ComplexMatrix) -> f64 {
    let eig = eigen_hermitian(m).expect("trace norm needs a Hermitian matrix");
    eig.eigenvalues.iter().map(|l| l.abs()).sum()
}

/// Exact two-state solution: P = 1/2 (q_1 + q_2 + ||q_1 rho_1 - q_2 rho_2||_1)
/// with the positive-part projective measurement.
pub fn helstrom(e: &Ensemble) -> Result<MinErrorReport> {
    if e.len() != 2 {
        return Err(DiscrimError::InvalidConfig(format!(
            "Helstrom expression needs exactly 2 states, got {}",
            e.len()
        )));
    }
    let gamma = e.weighted_state(0) - e.weighted_state(1);
    let eig = eigen_hermitian(&gamma)?;
    let mut positive = ComplexMatrix::zero();
    for (lam, proj) in eig.eigenvalues.iter().zip(eig.projections.iter()) {
        if *lam > 0.0 {
            positive = positive + *proj;
        }
    }
    let probability = 0.5 * (e.prior(0) + e.prior(1) + trace_norm(&gamma));
    let outcomes = vec![
        (e.labels()[0].clone(), Effect::new(positive)?),
        (
            e.labels()[1].clone(),
            Effect::new(ComplexMatrix::identity() - positive)?,
        ),
    ];
    Ok(MinErrorReport {
        probability,
        measurement: StandardMeasurement::Single(Povm::new(outcomes, None)?),
        method: SolveMethod::Helstrom,
    })
}

/// For uniform priors where every state has exactly one partner with the
/// opposite Bloch vector, returns the partner index per state.
pub fn antipodal_pairing(e: &Ensemble) -> Option<Vec<usize>> {
    let n = e.len();
    if n < 2 || n % 2 != 0 {
        return None;
    }
    let q = 1.0 / n as f64;
    if (0..n).any(|i| (e.prior(i) - q).abs() > SYMMETRY_TOL) {
        return None;
    }
    let blochs: Vec<[f64; 3]> = (0..n).map(|i| e.state(i).bloch()).collect();
    let mut partner = vec![usize::MAX; n];
    for i in 0..n {
        let mut matches = (0..n).filter(|&j| {
            j != i
                && blochs[i]
                    .iter()
                    .zip(&blochs[j])
                    .all(|(a, b)| (a + b).abs() <= SYMMETRY_TOL)
        });
        partner[i] = matches.next()?;
        if matches.next().is_some() {
            return None;
        }
    }
    if (0..n).any(|i| partner[partner[i]] != i) {
        return None;
    }
    Some(partner)
}

/// Exact solution for antipodally paired ensembles: P = (2/n) lambda with
/// lambda the largest eigenvalue among the states, achieved by any convex
/// combination of projective measurements on the maximal-eigenvalue states.
fn solve_pair_symmetry(e: &Ensemble, partner: &[usize]) -> Result<MinErrorReport> {
    let n = e.len();
    let lambda = e.max_state_eigenvalue();
    let mut members = Vec::new();
    for i in 0..n {
        let j = partner[i];
        if j < i {
            continue;
        }
        if e.state(i).matrix().max_eigenvalue() < lambda - LEVEL_TOL {
            continue;
        }
        let (_, proj) = top_eigenprojection(e.state(i).matrix())?;
        let outcomes = vec![
            (e.labels()[i].clone(), Effect::new(proj)?),
            (
                e.labels()[j].clone(),
                Effect::new(ComplexMatrix::identity() - proj)?,
            ),
        ];
        members.push(Povm::new(outcomes, None)?);
    }
    Ok(MinErrorReport {
        probability: 2.0 * lambda / n as f64,
        measurement: StandardMeasurement::Family(members),
        method: SolveMethod::PairSymmetry,
    })
}

/// Optimal guessing probability without any side information.
pub fn solve_no_side_info(e: &Ensemble, cfg: &OracleConfig) -> Result<MinErrorReport> {
    if e.is_empty() {
        return Err(DiscrimError::EmptyEnsemble);
    }
    if e.len() == 1 {
        let m = Povm::new(vec![(e.labels()[0].clone(), Effect::identity())], None)?;
        return Ok(MinErrorReport {
            probability: 1.0,
            measurement: StandardMeasurement::Single(m),
            method: SolveMethod::Certain,
        });
    }
    if e.len() == 2 {
        return helstrom(e);
    }
    if let Some(partner) = antipodal_pairing(e) {
        return solve_pair_symmetry(e, &partner);
    }
    let out = oracle::fixed_point_min_error(e, cfg)?;
    Ok(MinErrorReport {
        probability: out.probability,
        measurement: StandardMeasurement::Single(out.povm),
        method: SolveMethod::FixedPoint,
    })
}

/// Per-block relabeling of the outcomes of a fixed measurement.
#[derive(Debug, Clone)]
pub struct Relabeling {
    /// `maps[block][outcome]` is the guessed symbol index.
    pub maps: Vec<Vec<usize>>,
    pub probability: f64,
}

/// Best guess per block and outcome: f_l(y) = argmax_{x in block} q_x
/// tr(rho_x M(y)), ties resolved toward the earliest symbol in block order.
pub fn optimal_relabeling(e: &Ensemble, p: &Partition, m: &Povm) -> Result<Relabeling> {
    let mut maps = Vec::with_capacity(p.num_blocks());
    let mut probability = 0.0;
    for block in p.blocks() {
        let mut map = Vec::with_capacity(m.outcomes().len());
        for (_, effect) in m.outcomes() {
            let mut best = block[0];
            let mut best_score = f64::NEG_INFINITY;
            for &x in block {
                let score = e.weighted_state(x).trace_product(effect.matrix());
                if score > best_score + 1e-15 {
                    best = x;
                    best_score = score;
                } else if best_score == f64::NEG_INFINITY {
                    best = x;
                    best_score = score;
                }
            }
            probability += best_score;
            map.push(best);
        }
        maps.push(map);
    }
    Ok(Relabeling { maps, probability })
}

/// Plain solution together with its best relabeled value.
#[derive(Debug, Clone)]
pub struct PostReport {
    pub probability: f64,
    /// Plain solution whose measurement is kept and relabeled.
    pub base: MinErrorReport,
    /// Index into the measurement family achieving the value, when a family
    /// exists.
    pub member: Option<usize>,
}

/// Optimal guessing probability when the block is announced after the
/// standard measurement. Relabeling a plain-optimal measurement is optimal;
/// over a family, the best member wins.
pub fn solve_post(e: &Ensemble, p: &Partition, cfg: &OracleConfig) -> Result<PostReport> {
    let base = solve_no_side_info(e, cfg)?;
    match &base.measurement {
        StandardMeasurement::Single(m) => {
            let relabeled = optimal_relabeling(e, p, m)?;
            Ok(PostReport {
                probability: relabeled.probability.max(base.probability),
                base,
                member: None,
            })
        }
        StandardMeasurement::Family(members) => {
            let mut best = f64::NEG_INFINITY;
            let mut member = 0;
            for (i, m) in members.iter().enumerate() {
                let relabeled = optimal_relabeling(e, p, m)?;
                if relabeled.probability > best {
                    best = relabeled.probability;
                    member = i;
                }
            }
            Ok(PostReport {
                probability: best.max(base.probability),
                base,
                member: Some(member),
            })
        }
    }
}

/// Product-label ensemble encoding one candidate symbol per block.
#[derive(Debug, Clone)]
pub struct AuxiliaryEnsemble {
    pub ensemble: Ensemble,
    /// Overall normalization; the anticipative value is delta times the
    /// auxiliary optimum.
    pub delta: f64,
    /// `tuples[t][block]` is the original symbol index the auxiliary label t
    /// picks in that block.
    pub tuples: Vec<Vec<usize>>,
}

/// Builds the auxiliary ensemble whose plain discrimination solves the
/// metainformation regime.
pub fn auxiliary_ensemble(e: &Ensemble, p: &Partition) -> Result<AuxiliaryEnsemble> {
    let blocks = p.blocks();
    let mut count: u128 = 1;
    for b in blocks {
        count = count.saturating_mul(b.len() as u128);
        if count > AUX_CAP {
            return Err(DiscrimError::ScenarioTooLarge {
                size: count,
                cap: AUX_CAP,
            });
        }
    }
    let delta: f64 = {
        let per_tuple = blocks.iter().map(|b| b.len() as f64).product::<f64>();
        (0..blocks.len())
            .map(|l| per_tuple * p.block_prior(e, l) / blocks[l].len() as f64)
            .sum()
    };

    let mut entries = Vec::new();
    let mut tuples = Vec::new();
    let mut counter = vec![0usize; blocks.len()];
    loop {
        let tuple: Vec<usize> = counter
            .iter()
            .enumerate()
            .map(|(l, &c)| blocks[l][c])
            .collect();
        let mut weighted = ComplexMatrix::zero();
        let mut delta_tuple = 0.0;
        for &x in &tuple {
            weighted = weighted + e.weighted_state(x);
            delta_tuple += e.prior(x);
        }
        if delta_tuple > 1e-15 {
            let label = tuple
                .iter()
                .map(|&x| e.labels()[x].as_str())
                .collect::<Vec<_>>()
                .join("|");
            let state = DensityMatrix::new(weighted.scale(1.0 / delta_tuple))?;
            entries.push((label, state, delta_tuple / delta));
            tuples.push(tuple);
        }
        // mixed-radix increment
        let mut pos = 0;
        loop {
            if pos == blocks.len() {
                let ensemble = Ensemble::new(entries)?;
                return Ok(AuxiliaryEnsemble {
                    ensemble,
                    delta,
                    tuples,
                });
            }
            counter[pos] += 1;
            if counter[pos] < blocks[pos].len() {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
    }
}

/// Anticipative solution: measurement chosen for the auxiliary ensemble,
/// block revealed afterwards.
#[derive(Debug, Clone)]
pub struct MetaReport {
    pub probability: f64,
    pub delta: f64,
    /// Plain solution of the auxiliary ensemble.
    pub auxiliary: MinErrorReport,
}

/// Optimal guessing probability with post-measurement side information and
/// metainformation. `post_floor` is the already known post value; both
/// strategies are realizable, so the larger one is reported, which also
/// shields the hierarchy from solver round-off.
pub fn solve_meta(
    e: &Ensemble,
    p: &Partition,
    post_floor: f64,
    cfg: &OracleConfig,
) -> Result<MetaReport> {
    let aux = auxiliary_ensemble(e, p)?;
    let auxiliary = solve_no_side_info(&aux.ensemble, cfg)?;
    let probability = (aux.delta * auxiliary.probability).max(post_floor);
    Ok(MetaReport {
        probability,
        delta: aux.delta,
        auxiliary,
    })
}

/// Pre-measurement side information: condition on the block, solve each
/// sub-ensemble separately.
#[derive(Debug, Clone)]
pub struct PreReport {
    pub probability: f64,
    /// Conditional optimum per block.
    pub block_values: Vec<f64>,
}

pub fn solve_pre(e: &Ensemble, p: &Partition, cfg: &OracleConfig) -> Result<PreReport> {
    let mut probability = 0.0;
    let mut block_values = Vec::with_capacity(p.num_blocks());
    for (l, block) in p.blocks().iter().enumerate() {
        let q = p.block_prior(e, l);
        if q <= 1e-15 {
            block_values.push(0.0);
            continue;
        }
        let sub = e.restrict(block)?;
        let report = solve_no_side_info(&sub, cfg)?;
        block_values.push(report.probability);
        probability += q * report.probability;
    }
    Ok(PreReport {
        probability,
        block_values,
    })
}

// ---------------------------------------------------------------------------
// Basis encodings and their closed forms
// ---------------------------------------------------------------------------

/// Maximum number of bases for the sign-pattern enumeration below.
const MAX_BASES: usize = 30;

/// Ensemble of k orthonormal qubit bases in the x-z plane of the Bloch ball.
/// Basis i (1-based labels "i+", "i-") has its positive direction at polar
/// angle `angles[i-1]`.
pub fn basis_encoding(angles: &[f64]) -> Result<Ensemble> {
    if angles.is_empty() {
        return Err(DiscrimError::InvalidConfig("no basis angles given".into()));
    }
    let mut entries = Vec::with_capacity(2 * angles.len());
    for (i, &theta) in angles.iter().enumerate() {
        let n = [theta.sin(), 0.0, theta.cos()];
        entries.push((format!("{}+", i + 1), DensityMatrix::from_bloch(n)?));
        entries.push((
            format!("{}-", i + 1),
            DensityMatrix::from_bloch([-n[0], -n[1], -n[2]])?,
        ));
    }
    Ok(Ensemble::uniform(entries)?)
}

/// Blocks {i+, i-} per basis, matched on the numeric label prefix.
pub fn basis_partition(e: &Ensemble) -> Result<Partition> {
    let mut blocks: Vec<(String, Vec<Label>)> = Vec::new();
    for label in e.labels() {
        let prefix = label
            .strip_suffix('+')
            .or_else(|| label.strip_suffix('-'))
            .ok_or_else(|| DiscrimError::UnknownLabel(label.clone()))?;
        match blocks.iter_mut().find(|(p, _)| p == prefix) {
            Some((_, b)) => b.push(label.clone()),
            None => blocks.push((prefix.to_string(), vec![label.clone()])),
        }
    }
    let by_label: Vec<Vec<Label>> = blocks.into_iter().map(|(_, b)| b).collect();
    Ok(Partition::new(e, &by_label)?)
}

/// Blocks {all "+" labels} and {all "-" labels}.
pub fn parity_partition(e: &Ensemble) -> Result<Partition> {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for label in e.labels() {
        if label.ends_with('+') {
            plus.push(label.clone());
        } else if label.ends_with('-') {
            minus.push(label.clone());
        } else {
            return Err(DiscrimError::UnknownLabel(label.clone()));
        }
    }
    Ok(Partition::new(e, &[plus, minus])?)
}

/// Closed forms for the basis-value side information:
/// post = 1/2 + (1/2k) max_i sum_j |cos(theta_i - theta_j)|,
/// meta = 1/2 + (1/2k) max over sign patterns of |sum_i s_i n_i|.
pub fn basis_value_closed_form(angles: &[f64]) -> Result<(f64, f64)> {
    let k = angles.len();
    if k == 0 || k > MAX_BASES {
        return Err(DiscrimError::SearchTooLarge(format!(
            "basis closed form supports 1..={MAX_BASES} bases, got {k}"
        )));
    }
    let post_sum = (0..k)
        .map(|i| (0..k).map(|j| (angles[i] - angles[j]).cos().abs()).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let post = 0.5 + post_sum / (2.0 * k as f64);

    let mut best = 0.0f64;
    for pattern in 0..(1u64 << (k - 1)) {
        let (mut sx, mut sz) = (0.0, 0.0);
        for (i, &theta) in angles.iter().enumerate() {
            // first sign fixed; global flips give the same length
            let s = if i == 0 || pattern >> (i - 1) & 1 == 0 {
                1.0
            } else {
                -1.0
            };
            sx += s * theta.sin();
            sz += s * theta.cos();
        }
        best = best.max((sx * sx + sz * sz).sqrt());
    }
    let meta = 0.5 + best / (2.0 * k as f64);
    Ok((post, meta))
}

/// Closed forms for the parity side information, in terms of the largest
/// pairwise angle theta* between positive directions:
/// post = (1/k)(3/2 - (1/2) cos theta*), meta = (1/k)(1 + sin(theta*/2)).
pub fn parity_closed_form(angles: &[f64]) -> Result<(f64, f64)> {
    let k = angles.len();
    if k == 0 {
        return Err(DiscrimError::InvalidConfig("no basis angles given".into()));
    }
    let mut theta_star = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let c = (angles[i] - angles[j]).cos().clamp(-1.0, 1.0);
            theta_star = theta_star.max(c.acos());
        }
    }
    let post = (1.5 - 0.5 * theta_star.cos()) / k as f64;
    let meta = (1.0 + (theta_star / 2.0).sin()) / k as f64;
    Ok((post, meta))
}

// ---------------------------------------------------------------------------
// Regime summary and hierarchy check
// ---------------------------------------------------------------------------

/// All four regime values for one ensemble and partition.
#[derive(Debug, Clone)]
pub struct MinErrorSummary {
    pub plain: f64,
    pub pre: f64,
    pub post: f64,
    pub meta: f64,
}

/// Solves every regime and checks the hierarchy before returning.
pub fn solve_all(e: &Ensemble, p: &Partition, cfg: &OracleConfig) -> Result<MinErrorSummary> {
    let post = solve_post(e, p, cfg)?;
    let meta = solve_meta(e, p, post.probability, cfg)?;
    let pre = solve_pre(e, p, cfg)?;
    let summary = MinErrorSummary {
        plain: post.base.probability,
        pre: pre.probability,
        post: post.probability,
        meta: meta.probability,
    };
    verify_hierarchy(&summary, e.max_prior())?;
    Ok(summary)
}

/// pre >= meta >= post >= plain >= best blind guess, within the tolerance.
pub fn verify_hierarchy(s: &MinErrorSummary, max_prior: f64) -> Result<()> {
    let checks = [
        ("pre >= meta", s.pre, s.meta),
        ("meta >= post", s.meta, s.post),
        ("post >= plain", s.post, s.plain),
        ("plain >= max prior", s.plain, max_prior),
    ];
    for (name, hi, lo) in checks {
        if hi < lo - HIERARCHY_TOL {
            return Err(DiscrimError::HierarchyViolation(format!(
                "{name} fails: {hi} < {lo}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> OracleConfig {
        OracleConfig::fast()
    }

    #[test]
    fn helstrom_orthogonal_and_parallel() {
        let e = Ensemble::uniform(vec![
            ("a".into(), DensityMatrix::from_bloch([0.0, 0.0, 1.0]).unwrap()),
            ("b".into(), DensityMatrix::from_bloch([0.0, 0.0, -1.0]).unwrap()),
        ])
        .unwrap();
        assert!((helstrom(&e).unwrap().probability - 1.0).abs() < 1e-12);

        let e = Ensemble::new(vec![
            ("a".into(), DensityMatrix::from_bloch([0.0, 0.0, 1.0]).unwrap(), 0.7),
            ("b".into(), DensityMatrix::from_bloch([0.0, 0.0, 1.0]).unwrap(), 0.3),
        ])
        .unwrap();
        assert!((helstrom(&e).unwrap().probability - 0.7).abs() < 1e-12);
    }

    #[test]
    fn two_bases_all_regimes() {
        let theta = 1.2f64;
        let e = basis_encoding(&[0.0, theta]).unwrap();
        let p = basis_partition(&e).unwrap();
        let s = solve_all(&e, &p, &cfg()).unwrap();
        assert!((s.plain - 0.5).abs() < 1e-9);
        assert!((s.pre - 1.0).abs() < 1e-9);
        let (post, meta) = basis_value_closed_form(&[0.0, theta]).unwrap();
        assert!((s.post - post).abs() < 1e-9, "post {} vs {}", s.post, post);
        assert!((s.meta - meta).abs() < 1e-9, "meta {} vs {}", s.meta, meta);
        assert!((post - 0.25 * (3.0 + theta.cos().abs())).abs() < 1e-12);
        assert!((meta - 0.5 * (1.0 + ((1.0 + theta.cos().abs()) / 2.0).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn two_bases_parity_regimes() {
        let theta = 1.2f64;
        let e = basis_encoding(&[0.0, theta]).unwrap();
        let p = parity_partition(&e).unwrap();
        let s = solve_all(&e, &p, &cfg()).unwrap();
        let (post, meta) = parity_closed_form(&[0.0, theta]).unwrap();
        assert!((s.post - post).abs() < 1e-9, "post {} vs {}", s.post, post);
        assert!((s.meta - meta).abs() < 1e-9, "meta {} vs {}", s.meta, meta);
        assert!((s.post - 0.25 * (3.0 - theta.cos())).abs() < 1e-12);
        // pre: Helstrom inside each parity block
        assert!((s.pre - 0.5 * (1.0 + (theta / 2.0).sin())).abs() < 1e-12);
        assert!((s.meta - s.pre).abs() < 1e-12);
    }

    #[test]
    fn bb84_values() {
        let e = basis_encoding(&[0.0, std::f64::consts::FRAC_PI_2]).unwrap();
        let p = basis_partition(&e).unwrap();
        let s = solve_all(&e, &p, &cfg()).unwrap();
        assert!((s.plain - 0.5).abs() < 1e-9);
        assert!((s.post - 0.75).abs() < 1e-9);
        let expect_meta = 0.5 * (1.0 + 0.5f64.sqrt());
        assert!((s.meta - expect_meta).abs() < 1e-9);
        assert!((s.pre - 1.0).abs() < 1e-9);
    }

    #[test]
    fn auxiliary_ensemble_two_bases() {
        let e = basis_encoding(&[0.0, 1.0]).unwrap();
        let p = basis_partition(&e).unwrap();
        let aux = auxiliary_ensemble(&e, &p).unwrap();
        assert_eq!(aux.ensemble.len(), 4);
        assert!((aux.delta - 2.0).abs() < 1e-12);
        assert!(aux.ensemble.labels().contains(&"1+|2-".to_string()));
        for i in 0..4 {
            assert!((aux.ensemble.prior(i) - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn relabeling_matches_exhaustive_enumeration() {
        let e = basis_encoding(&[0.0, 0.9, 2.0]).unwrap();
        let p = parity_partition(&e).unwrap();
        let base = solve_no_side_info(&e, &cfg()).unwrap();
        let m = base.measurement.canonical();
        let greedy = optimal_relabeling(&e, &p, &m).unwrap();
        let (_, exhaustive) = oracle::exhaustive_relabelings(&e, &p, &m).unwrap();
        assert!((greedy.probability - exhaustive).abs() < 1e-12);
    }

    #[test]
    fn antipodal_pairing_detection() {
        let e = basis_encoding(&[0.0, 0.7]).unwrap();
        let partner = antipodal_pairing(&e).unwrap();
        assert_eq!(partner, vec![1, 0, 3, 2]);

        let skew = Ensemble::new(vec![
            ("a".into(), DensityMatrix::from_bloch([0.0, 0.0, 1.0]).unwrap(), 0.6),
            ("b".into(), DensityMatrix::from_bloch([0.0, 0.0, -1.0]).unwrap(), 0.4),
        ])
        .unwrap();
        assert!(antipodal_pairing(&skew).is_none());
    }
}
