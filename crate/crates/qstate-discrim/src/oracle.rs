//! Independent brute-force and iterative solvers.
//!
//! These provide optima where no closed form applies and act as
//! cross-checks for every analytic result in the crate: a fixed-point
//! iteration for minimum-error discrimination, a Bloch-sphere grid search
//! over projective measurements, exhaustive relabeling enumeration, and a
//! multistart coordinate ascent for conclusive-rate maximization.

use qstate_core::{
    eigen_hermitian, pseudo_inverse_sqrt, ComplexMatrix, Effect, Ensemble, Partition, Povm,
};

use crate::error::{DiscrimError, Result};
use crate::minerror;
use crate::par;

/// Tuning knobs shared by the oracle solvers.
#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Polar samples of the projective-measurement grid.
    pub polar_samples: usize,
    /// Azimuthal samples of the projective-measurement grid.
    pub azimuthal_samples: usize,
    /// Iteration cap per fixed-point stage.
    pub max_iterations: usize,
    /// Optimality-gap target for the fixed-point solver.
    pub convergence_tol: f64,
    /// Stall tolerance for the coordinate ascent.
    pub rate_tol: f64,
    /// Halving passes when refining grid candidates.
    pub refinement_passes: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            polar_samples: 720,
            azimuthal_samples: 1440,
            max_iterations: 5000,
            convergence_tol: 1e-10,
            rate_tol: 1e-10,
            refinement_passes: 3,
        }
    }
}

impl OracleConfig {
    /// Coarser grid for test suites; still well above the minimum resolution.
    pub fn fast() -> Self {
        Self {
            polar_samples: 180,
            azimuthal_samples: 360,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.polar_samples < 90 || self.azimuthal_samples < 180 {
            return Err(DiscrimError::InvalidConfig(format!(
                "grid resolution {}x{} below the 90x180 minimum",
                self.polar_samples, self.azimuthal_samples
            )));
        }
        if self.max_iterations == 0
            || self.convergence_tol <= 0.0
            || self.rate_tol <= 0.0
            || self.refinement_passes == 0
        {
            return Err(DiscrimError::InvalidConfig(
                "iteration caps, tolerances and refinement passes must be positive".into(),
            ));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Fixed-point minimum-error solver
// ---------------------------------------------------------------------------

/// Result of [`fixed_point_min_error`].
#[derive(Debug, Clone)]
pub struct FixedPointOutcome {
    pub povm: Povm,
    pub probability: f64,
    pub iterations: usize,
    /// Certified distance to the optimum from the dual bound.
    pub dual_gap: f64,
    /// Set when the iteration cap was hit before reaching the gap target.
    pub warning: bool,
    /// Success value never decreased across iterations of the winning run.
    pub monotone: bool,
}

const MAX_FIXED_POINT_STATES: usize = 64;
/// Effect-trace thresholds for the staged support pruning. Slowly vanishing
/// effects make the plain iteration crawl sublinearly; restarting on the
/// pruned support converges fast, and the candidate is only kept if its
/// success value wins.
const PRUNE_THRESHOLDS: [f64; 3] = [1e-2, 1e-4, 1e-6];

/// Symmetrizes away the Hermiticity drift of repeated products.
fn herm(m: &ComplexMatrix) -> ComplexMatrix {
    (*m + m.adjoint()).scale(0.5)
}

struct FpRun {
    effects: Vec<ComplexMatrix>,
    success: f64,
    iterations: usize,
    monotone: bool,
}

fn fp_success(weighted: &[ComplexMatrix], effects: &[ComplexMatrix]) -> f64 {
    weighted
        .iter()
        .zip(effects)
        .map(|(w, e)| w.trace_product(e))
        .sum()
}

/// Upper bound minus achieved success, from the dual certificate
/// Y = herm(sum_x W_x E_x) + c I with c = max_x lambda_max(W_x - Y).
fn fp_dual_gap(weighted: &[ComplexMatrix], effects: &[ComplexMatrix]) -> f64 {
    let mut g = ComplexMatrix::zero();
    for (w, e) in weighted.iter().zip(effects) {
        g = g + *w * *e;
    }
    let g = (g + g.adjoint()).scale(0.5);
    let c = weighted
        .iter()
        .map(|w| (*w - g).max_eigenvalue())
        .fold(f64::NEG_INFINITY, f64::max);
    2.0 * c.max(0.0)
}

/// Pushes any completeness deficit (the iteration preserves only the support
/// of its symmetrizer) onto the outcome that profits most from it.
fn fp_absorb_deficit(weighted: &[ComplexMatrix], effects: &mut [ComplexMatrix]) {
    let mut sum = ComplexMatrix::zero();
    for e in effects.iter() {
        sum = sum + *e;
    }
    let deficit = ComplexMatrix::identity() - sum;
    if deficit.max_entry_norm() < 1e-13 {
        return;
    }
    let best = (0..weighted.len())
        .max_by(|&a, &b| {
            weighted[a]
                .trace_product(&deficit)
                .partial_cmp(&weighted[b].trace_product(&deficit))
                .unwrap()
        })
        .unwrap();
    effects[best] = effects[best] + deficit;
}

fn fp_iterate(
    weighted: &[ComplexMatrix],
    start: Vec<ComplexMatrix>,
    cap: usize,
    gap_target: f64,
) -> FpRun {
    let mut effects = start;
    let mut last = f64::NEG_INFINITY;
    let mut monotone = true;
    let mut iterations = 0;
    let mut stalled = 0usize;
    for _ in 0..cap {
        let mut symmetrizer = ComplexMatrix::zero();
        for (w, e) in weighted.iter().zip(effects.iter()) {
            symmetrizer = symmetrizer + *w * *e * *w;
        }
        let root = match pseudo_inverse_sqrt(&herm(&symmetrizer)) {
            Ok(r) => r,
            Err(_) => break,
        };
        for (e, w) in effects.iter_mut().zip(weighted) {
            *e = herm(&(root * *w * *e * *w * root));
        }
        fp_absorb_deficit(weighted, &mut effects);
        iterations += 1;
        let p = fp_success(weighted, &effects);
        if p < last - 1e-12 {
            monotone = false;
        }
        if (p - last).abs() < 1e-16 {
            stalled += 1;
            if stalled >= 5 {
                break;
            }
        } else {
            stalled = 0;
        }
        last = p;
        if iterations % 16 == 0 && fp_dual_gap(weighted, &effects) < gap_target {
            break;
        }
    }
    FpRun {
        success: fp_success(weighted, &effects),
        effects,
        iterations,
        monotone,
    }
}

/// Iterative minimum-error solver for arbitrary qubit ensembles.
///
/// Runs the symmetrized Lagrangian fixed-point update from the maximally
/// uninformative start, then retries on pruned supports whenever some
/// effects are decaying, keeping whichever candidate achieves the highest
/// success probability. The trivial guess-the-likeliest strategy is always
/// among the candidates, so the result never drops below `max_x q_x`.
pub fn fixed_point_min_error(e: &Ensemble, cfg: &OracleConfig) -> Result<FixedPointOutcome> {
    cfg.validate()?;
    if e.is_empty() {
        return Err(DiscrimError::EmptyEnsemble);
    }
    if e.len() > MAX_FIXED_POINT_STATES {
        return Err(DiscrimError::SearchTooLarge(format!(
            "{} states exceed the fixed-point cap of {MAX_FIXED_POINT_STATES}",
            e.len()
        )));
    }
    let n = e.len();
    let weighted: Vec<ComplexMatrix> = (0..n).map(|i| e.weighted_state(i)).collect();
    let gap_target = cfg.convergence_tol;

    let uniform: Vec<ComplexMatrix> = vec![ComplexMatrix::identity().scale(1.0 / n as f64); n];
    let warmup = fp_iterate(&weighted, uniform, 500.min(cfg.max_iterations), gap_target);

    let mut candidates: Vec<FpRun> = Vec::new();
    for thr in PRUNE_THRESHOLDS {
        let keep: Vec<usize> = (0..n)
            .filter(|&i| warmup.effects[i].trace().re > thr)
            .collect();
        if keep.is_empty() || keep.len() == n {
            continue;
        }
        let mut kept_sum = ComplexMatrix::zero();
        for &i in &keep {
            kept_sum = kept_sum + warmup.effects[i];
        }
        let root = match pseudo_inverse_sqrt(&kept_sum) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let start: Vec<ComplexMatrix> = (0..n)
            .map(|i| {
                if keep.contains(&i) {
                    herm(&(root * warmup.effects[i] * root))
                } else {
                    ComplexMatrix::zero()
                }
            })
            .collect();
        candidates.push(fp_iterate(&weighted, start, cfg.max_iterations, gap_target));
    }
    // Continue the unpruned run to the full cap.
    let full = fp_iterate(
        &weighted,
        warmup.effects.clone(),
        cfg.max_iterations,
        gap_target,
    );

    // Trivial strategy: always guess the likeliest symbol.
    let best_prior = (0..n)
        .max_by(|&a, &b| e.prior(a).partial_cmp(&e.prior(b)).unwrap())
        .unwrap();
    let mut trivial_effects = vec![ComplexMatrix::zero(); n];
    trivial_effects[best_prior] = ComplexMatrix::identity();
    candidates.push(FpRun {
        success: fp_success(&weighted, &trivial_effects),
        effects: trivial_effects,
        iterations: 0,
        monotone: true,
    });
    candidates.push(full);

    let mut best = warmup;
    for cand in candidates {
        if cand.success > best.success {
            best = cand;
        }
    }

    let dual_gap = fp_dual_gap(&weighted, &best.effects);
    let outcomes = e
        .labels()
        .iter()
        .zip(&best.effects)
        .map(|(l, m)| Ok((l.clone(), Effect::new(*m)?)))
        .collect::<Result<Vec<_>>>()?;
    let povm = Povm::new(outcomes, None)?;
    Ok(FixedPointOutcome {
        povm,
        probability: best.success,
        iterations: best.iterations,
        dual_gap,
        warning: dual_gap > gap_target,
        monotone: best.monotone,
    })
}

// ---------------------------------------------------------------------------
// Projective grid search
// ---------------------------------------------------------------------------

/// Which regime objective the grid search evaluates.
#[derive(Debug, Clone, Copy)]
pub enum GridObjective<'a> {
    /// Plain minimum-error value of the best two-outcome projective
    /// measurement with optimal outcome-to-symbol assignment.
    Plain,
    /// Relabeled success per block for post-measurement side information,
    /// restricted to axes that are optimal for the plain task.
    PostRelabel(&'a Partition),
    /// Anticipative value via the auxiliary-state reduction.
    Meta(&'a Partition),
}

#[derive(Debug, Clone, Copy)]
pub struct GridSearchResult {
    pub axis: [f64; 3],
    pub value: f64,
}

fn axis_from_angles(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Candidate with deterministic ordering: value descending, then angles.
#[derive(Debug, Clone, Copy)]
struct GridCell {
    value: f64,
    theta: f64,
    phi: f64,
}

fn cell_better(a: &GridCell, b: &GridCell) -> bool {
    if a.value != b.value {
        return a.value > b.value;
    }
    if a.theta != b.theta {
        return a.theta < b.theta;
    }
    a.phi < b.phi
}

fn push_top(top: &mut Vec<GridCell>, cell: GridCell, cap: usize) {
    let pos = top.partition_point(|c| cell_better(c, &cell));
    top.insert(pos, cell);
    top.truncate(cap);
}

/// Plain or per-block relabeled objective from weighted Bloch vectors.
/// `groups` holds, per block, the (prior, bloch) pairs of its symbols.
fn projective_value(groups: &[Vec<(f64, [f64; 3])>], axis: [f64; 3]) -> f64 {
    let mut total = 0.0;
    for block in groups {
        for sign in [1.0, -1.0] {
            let mut best = f64::NEG_INFINITY;
            for (q, v) in block {
                let dot = v[0] * axis[0] + v[1] * axis[1] + v[2] * axis[2];
                best = best.max(q * 0.5 * (1.0 + sign * dot));
            }
            total += best;
        }
    }
    total
}

fn block_groups(e: &Ensemble, p: Option<&Partition>) -> Vec<Vec<(f64, [f64; 3])>> {
    match p {
        None => vec![(0..e.len()).map(|i| (e.prior(i), e.state(i).bloch())).collect()],
        Some(p) => p
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&i| (e.prior(i), e.state(i).bloch())).collect())
            .collect(),
    }
}

/// Coarse grid scan followed by halving refinement around the best cells.
fn grid_optimize(
    groups: &[Vec<(f64, [f64; 3])>],
    cfg: &OracleConfig,
    extra_passes: usize,
) -> Vec<GridCell> {
    let pp = cfg.polar_samples;
    let aa = cfg.azimuthal_samples;
    let h_theta = std::f64::consts::PI / pp as f64;
    let h_phi = 2.0 * std::f64::consts::PI / aa as f64;

    // One top-10 list per polar row, merged afterwards; deterministic.
    let rows = par::map_collect(pp, |i| {
        let theta = (i as f64 + 0.5) * h_theta;
        let mut top: Vec<GridCell> = Vec::new();
        for j in 0..aa {
            let phi = (j as f64 + 0.5) * h_phi;
            let value = projective_value(groups, axis_from_angles(theta, phi));
            push_top(&mut top, GridCell { value, theta, phi }, 10);
        }
        top
    });
    let mut top: Vec<GridCell> = Vec::new();
    for row in rows {
        for cell in row {
            push_top(&mut top, cell, 10);
        }
    }

    let mut ht = h_theta;
    let mut hp = h_phi;
    for _ in 0..cfg.refinement_passes + extra_passes {
        ht *= 0.5;
        hp *= 0.5;
        let seeds = top.clone();
        for seed in seeds {
            for di in -2i32..=2 {
                for dj in -2i32..=2 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let theta = (seed.theta + di as f64 * ht).clamp(0.0, std::f64::consts::PI);
                    let phi = seed.phi + dj as f64 * hp;
                    let value = projective_value(groups, axis_from_angles(theta, phi));
                    push_top(&mut top, GridCell { value, theta, phi }, 10);
                }
            }
        }
    }
    top
}

const POST_PLAIN_SLACK: f64 = 1e-6;

/// Best projective measurement axis for the requested regime objective.
pub fn grid_projective_search(
    e: &Ensemble,
    objective: GridObjective<'_>,
    cfg: &OracleConfig,
) -> Result<GridSearchResult> {
    cfg.validate()?;
    if e.is_empty() {
        return Err(DiscrimError::EmptyEnsemble);
    }
    // Extra halving passes polish candidates well past the value tolerance.
    let polish = 18;
    match objective {
        GridObjective::Plain => {
            let groups = block_groups(e, None);
            let top = grid_optimize(&groups, cfg, polish);
            let best = top[0];
            Ok(GridSearchResult {
                axis: axis_from_angles(best.theta, best.phi),
                value: best.value,
            })
        }
        GridObjective::Meta(p) => {
            let aux = minerror::auxiliary_ensemble(e, p)?;
            let groups = block_groups(&aux.ensemble, None);
            let top = grid_optimize(&groups, cfg, polish);
            let best = top[0];
            Ok(GridSearchResult {
                axis: axis_from_angles(best.theta, best.phi),
                value: aux.delta * best.value,
            })
        }
        GridObjective::PostRelabel(p) => {
            // Phase 1: locate the plain-optimal axes.
            let plain_groups = block_groups(e, None);
            let top = grid_optimize(&plain_groups, cfg, polish);
            let best_plain = top[0].value;
            // Phase 2: among plain-optimal axes, maximize the relabeled value.
            let post_groups = block_groups(e, Some(p));
            let mut best: Option<GridCell> = None;
            for cell in &top {
                if cell.value < best_plain - POST_PLAIN_SLACK {
                    continue;
                }
                let value = projective_value(&post_groups, axis_from_angles(cell.theta, cell.phi));
                let cand = GridCell {
                    value,
                    theta: cell.theta,
                    phi: cell.phi,
                };
                if best.map_or(true, |b| cell_better(&cand, &b)) {
                    best = Some(cand);
                }
            }
            let best = best.expect("top list is nonempty");
            Ok(GridSearchResult {
                axis: axis_from_angles(best.theta, best.phi),
                value: best.value,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Exhaustive relabeling enumeration
// ---------------------------------------------------------------------------

const RELABEL_CAP: u128 = 10_000_000;

/// Exact maximum of the relabeled success over all per-block maps.
///
/// Returns, per block, the map outcome-position -> symbol index, and the
/// total success probability.
pub fn exhaustive_relabelings(
    e: &Ensemble,
    p: &Partition,
    m: &Povm,
) -> Result<(Vec<Vec<usize>>, f64)> {
    let outcomes = m.outcomes();
    let num_y = outcomes.len() as u32;
    let mut combos: u128 = 1;
    for block in p.blocks() {
        combos = combos.saturating_mul((block.len() as u128).saturating_pow(num_y));
        if combos > RELABEL_CAP {
            return Err(DiscrimError::SearchTooLarge(format!(
                "relabeling space exceeds {RELABEL_CAP}"
            )));
        }
    }

    // Score of guessing symbol x on outcome y.
    let score: Vec<Vec<f64>> = outcomes
        .iter()
        .map(|(_, eff)| {
            (0..e.len())
                .map(|x| e.weighted_state(x).trace_product(eff.matrix()))
                .collect()
        })
        .collect();

    let mut maps = Vec::with_capacity(p.num_blocks());
    let mut total = 0.0;
    for block in p.blocks() {
        let base = block.len();
        let count = base.pow(num_y);
        let mut best_value = f64::NEG_INFINITY;
        let mut best_map = vec![0usize; outcomes.len()];
        for code in 0..count {
            let mut c = code;
            let mut value = 0.0;
            let mut map = Vec::with_capacity(outcomes.len());
            for row in score.iter() {
                let choice = block[c % base];
                c /= base;
                value += row[choice];
                map.push(choice);
            }
            if value > best_value {
                best_value = value;
                best_map = map;
            }
        }
        total += best_value;
        maps.push(best_map);
    }
    Ok((maps, total))
}

// ---------------------------------------------------------------------------
// Conclusive-rate maximization
// ---------------------------------------------------------------------------

const MAX_RATE_VARS: usize = 12;
const FEAS_TOL: f64 = 1e-12;

/// Result of [`rate_maximize`].
#[derive(Debug, Clone)]
pub struct RateSolution {
    pub scales: Vec<f64>,
    pub rate: f64,
    /// Minimum eigenvalue of the completing inconclusive effect.
    pub completion_min_eigenvalue: f64,
}

fn completion(projections: &[ComplexMatrix], scales: &[f64]) -> ComplexMatrix {
    let mut sum = ComplexMatrix::zero();
    for (p, a) in projections.iter().zip(scales) {
        sum = sum + p.scale(*a);
    }
    ComplexMatrix::identity() - sum
}

fn feasible(projections: &[ComplexMatrix], scales: &[f64]) -> bool {
    completion(projections, scales).min_eigenvalue() >= -FEAS_TOL
}

/// Largest s in [0, 1] making s*a feasible.
fn repair_scale(projections: &[ComplexMatrix], scales: &[f64]) -> f64 {
    if feasible(projections, scales) {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let scaled: Vec<f64> = scales.iter().map(|a| a * mid).collect();
        if feasible(projections, &scaled) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Eigenvalues below this count as the null space of the remainder.
const NULL_TOL: f64 = 1e-11;

/// Largest a_i in [0, 1] keeping `rest - a_i P_i` positive semidefinite.
///
/// For rank-1 P = t|v><v| the cap is 1 / <v| rest^+ |v> / t on the support
/// of `rest`, and 0 as soon as P leaks into its null space; this closed form
/// replaces a minimum-eigenvalue bisection in the innermost loop.
/// Full-rank P keeps the bisection.
fn coordinate_max(rest: &ComplexMatrix, proj: &ComplexMatrix) -> f64 {
    if (*rest - *proj).min_eigenvalue() >= -FEAS_TOL {
        return 1.0;
    }
    if (*rest).min_eigenvalue() < -FEAS_TOL {
        return 0.0;
    }
    if proj.determinant().re.abs() <= 1e-12 {
        if let Ok(eig) = eigen_hermitian(rest) {
            let mut inverse_cap = 0.0;
            for (lam, pk) in eig.eigenvalues.iter().zip(&eig.projections) {
                let overlap = pk.trace_product(proj).max(0.0);
                if *lam <= NULL_TOL {
                    if overlap > NULL_TOL {
                        return 0.0;
                    }
                } else {
                    inverse_cap += overlap / lam;
                }
            }
            let cap = if inverse_cap <= 1.0 {
                1.0
            } else {
                1.0 / inverse_cap
            };
            // Near-degenerate eigenbases can overshoot; fall back to the
            // bisection only then.
            if (*rest - proj.scale(cap)).min_eigenvalue() >= -FEAS_TOL {
                return cap;
            }
        }
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..70 {
        let mid = 0.5 * (lo + hi);
        if (*rest - proj.scale(mid)).min_eigenvalue() >= -FEAS_TOL {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn ascend(
    projections: &[ComplexMatrix],
    weights: &[f64],
    start: &[f64],
    tol: f64,
) -> (Vec<f64>, f64) {
    let n = projections.len();
    let s = repair_scale(projections, start);
    let mut a: Vec<f64> = start.iter().map(|v| v * s).collect();
    for _ in 0..200 {
        let mut max_change: f64 = 0.0;
        for i in 0..n {
            let mut rest = ComplexMatrix::identity();
            for j in 0..n {
                if j != i {
                    rest = rest - projections[j].scale(a[j]);
                }
            }
            let new = coordinate_max(&rest, &projections[i]);
            max_change = max_change.max((new - a[i]).abs());
            a[i] = new;
        }
        if max_change < tol.max(1e-14) {
            break;
        }
    }
    let rate = a.iter().zip(weights).map(|(x, w)| x * w).sum();
    (a, rate)
}

/// One pass of exact two-coordinate steps. Single-coordinate ascent can
/// stall when improving a_i requires lowering a_j; for each pair this
/// maximizes w_i a_i + w_j a_j with the others fixed. The feasible region is
/// convex, so a_j's cap is concave in a_i and the pair objective is concave,
/// solved by ternary search. Returns whether the point moved.
fn pair_sweep(projections: &[ComplexMatrix], weights: &[f64], a: &mut [f64]) -> bool {
    let n = projections.len();
    let mut improved = false;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut rest = ComplexMatrix::identity();
            for k in 0..n {
                if k != i && k != j {
                    rest = rest - projections[k].scale(a[k]);
                }
            }
            let cap_i = coordinate_max(&rest, &projections[i]);
            let value = |ai: f64| {
                let left = rest - projections[i].scale(ai);
                weights[i] * ai + weights[j] * coordinate_max(&left, &projections[j])
            };
            let (mut lo, mut hi) = (0.0f64, cap_i);
            for _ in 0..48 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if value(m1) < value(m2) {
                    lo = m1;
                } else {
                    hi = m2;
                }
            }
            let ai = 0.5 * (lo + hi);
            let aj = coordinate_max(&(rest - projections[i].scale(ai)), &projections[j]);
            let before = weights[i] * a[i] + weights[j] * a[j];
            let after = weights[i] * ai + weights[j] * aj;
            if after > before + 1e-13 {
                a[i] = ai;
                a[j] = aj;
                improved = true;
            }
        }
    }
    improved
}

/// Directions in {-1, 0, 1}^n used for line searches along the feasibility
/// boundary. Pairwise steps stall when an improvement needs three or more
/// coordinates to move at once, so the dictionary holds every nonzero sign
/// pattern for small n and all patterns of support <= 3 for larger n; only
/// directions of positive objective slope are kept.
fn direction_dictionary(weights: &[f64]) -> Vec<Vec<f64>> {
    let n = weights.len();
    let mut dirs = Vec::new();
    let full = n <= 5;
    let total = 3usize.pow(n as u32);
    for code in 1..total {
        let mut c = code;
        let mut d = vec![0.0; n];
        let mut support = 0;
        for slot in d.iter_mut() {
            *slot = [0.0, 1.0, -1.0][c % 3];
            if *slot != 0.0 {
                support += 1;
            }
            c /= 3;
        }
        if !full && support > 3 {
            continue;
        }
        let slope: f64 = weights.iter().zip(&d).map(|(w, di)| w * di).sum();
        if slope > 0.0 {
            dirs.push(d);
        }
    }
    dirs
}

/// Largest t in [0, t_box] keeping Z - tD positive semidefinite. The
/// feasible t form an interval starting at 0, whose right endpoint is t_box,
/// a root of the quadratic det(Z - tD), or the root of the linear trace; the
/// largest candidate that passes the eigenvalue check is returned.
fn line_limit(z: &ComplexMatrix, d: &ComplexMatrix, t_box: f64) -> f64 {
    let mut cands = vec![t_box];
    let tz = z.trace().re;
    let td = d.trace().re;
    if td > 1e-15 {
        cands.push(tz / td);
    }
    // det(Z - tD) = det Z - t (tr Z tr D - tr(ZD)) + t^2 det D for 2x2.
    let a2 = d.determinant().re;
    let a1 = -(tz * td - z.trace_product(d));
    let a0 = z.determinant().re;
    if a2.abs() > 1e-15 {
        let disc = a1 * a1 - 4.0 * a2 * a0;
        if disc >= 0.0 {
            let s = disc.sqrt();
            cands.push((-a1 + s) / (2.0 * a2));
            cands.push((-a1 - s) / (2.0 * a2));
        }
    } else if a1.abs() > 1e-15 {
        cands.push(-a0 / a1);
    }
    let mut best = 0.0f64;
    for t in cands {
        if t > best && t <= t_box && (*z - d.scale(t)).min_eigenvalue() >= -FEAS_TOL {
            best = t;
        }
    }
    best
}

/// One greedy step along the best dictionary direction: the objective is
/// linear along a line, so the optimal step is the furthest feasible point.
/// Returns whether the point moved.
fn direction_sweep(
    projections: &[ComplexMatrix],
    weights: &[f64],
    dirs: &[Vec<f64>],
    dmats: &[ComplexMatrix],
    a: &mut [f64],
) -> bool {
    let z = completion(projections, a);
    let mut best: Option<(usize, f64, f64)> = None;
    for (k, d) in dirs.iter().enumerate() {
        let mut t_box = f64::INFINITY;
        for (ai, di) in a.iter().zip(d) {
            if *di > 0.0 {
                t_box = t_box.min((1.0 - ai) / di);
            } else if *di < 0.0 {
                t_box = t_box.min(ai / -di);
            }
        }
        if t_box <= 0.0 {
            continue;
        }
        let t = line_limit(&z, &dmats[k], t_box);
        let slope: f64 = weights.iter().zip(d).map(|(w, di)| w * di).sum();
        let gain = slope * t;
        if gain > 1e-13 && best.is_none_or(|(_, _, g)| gain > g) {
            best = Some((k, t, gain));
        }
    }
    if let Some((k, t, _)) = best {
        for (ai, di) in a.iter_mut().zip(&dirs[k]) {
            *ai = (*ai + t * di).clamp(0.0, 1.0);
        }
        return true;
    }
    false
}

/// Real coordinates of a Hermitian 2x2 matrix, scaled so that
/// tr(A B) = coords(A) . coords(B).
fn hermitian_coords(m: &ComplexMatrix) -> [f64; 4] {
    let sqrt2 = std::f64::consts::SQRT_2;
    [
        m.entry(0, 0).re,
        m.entry(1, 1).re,
        sqrt2 * m.entry(0, 1).re,
        sqrt2 * m.entry(0, 1).im,
    ]
}

/// Escape and slide moves at a corner point where the completion vanishes,
/// i.e. sum_x a_x P_x = I exactly. The constraint surface is not smooth
/// there, so the rank-1 tangent logic does not apply. Two move families
/// cover it:
/// - slide: directions in the kernel of e -> sum_x e_x P_x keep the
///   completion at zero, so the box limit can be taken outright;
/// - escape: a dual certificate Y is fitted from w_x = tr(P_x Y) on the
///   unpinned coordinates; a negative eigenvalue of Y with projector Q
///   yields the improving feasible direction solving sum_x e_x P_x = -Q,
///   whose objective slope is tr(QY) = -lambda_min > 0. If no such Y
///   direction exists the point is optimal on this face.
fn corner_sweep(projections: &[ComplexMatrix], weights: &[f64], a: &mut [f64]) -> bool {
    let n = projections.len();
    let cols: Vec<[f64; 4]> = projections.iter().map(hermitian_coords).collect();
    let free: Vec<usize> = (0..n)
        .filter(|&i| a[i] > 1e-12 && a[i] < 1.0 - 1e-12)
        .collect();
    let mut best: Option<(Vec<f64>, f64, f64)> = None;
    let mut offer = |e: Vec<f64>, t: f64, slope: f64| {
        let gain = slope * t;
        if gain > 1e-13 && best.as_ref().is_none_or(|(_, _, b)| gain > *b) {
            best = Some((e, t, gain));
        }
    };
    let box_limit = |a: &[f64], e: &[f64]| -> f64 {
        let mut t = f64::INFINITY;
        for (ai, ei) in a.iter().zip(e) {
            if *ei > 0.0 {
                t = t.min((1.0 - ai) / ei);
            } else if *ei < 0.0 {
                t = t.min(ai / -ei);
            }
        }
        t
    };

    // Slide moves along the kernel of the free columns.
    let m = free.len();
    if m > 0 {
        // Gaussian elimination on the 4 x m column matrix to find kernel
        // vectors: non-pivot columns parameterize the kernel.
        let mut mat: Vec<[f64; 4]> = free.iter().map(|&i| cols[i]).collect();
        let mut pivot_row = 0usize;
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        for col in 0..m {
            let Some(r) = (pivot_row..4)
                .filter(|&r| mat[col][r].abs() > 1e-9)
                .max_by(|&x, &y| mat[col][x].abs().partial_cmp(&mat[col][y].abs()).unwrap())
            else {
                continue;
            };
            for column in mat.iter_mut() {
                column.swap(pivot_row, r);
            }
            for rr in 0..4 {
                if rr != pivot_row && mat[col][rr].abs() > 0.0 {
                    let f = mat[col][rr] / mat[col][pivot_row];
                    for column in mat.iter_mut() {
                        column[rr] -= f * column[pivot_row];
                    }
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
            if pivot_row == 4 {
                break;
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        for fc in 0..m {
            if pivot_cols.contains(&fc) {
                continue;
            }
            let mut k = vec![0.0; m];
            k[fc] = 1.0;
            for &(r, c) in &pivots {
                k[c] = -mat[fc][r] / mat[c][r];
            }
            let mut e = vec![0.0; n];
            for (j, &i) in free.iter().enumerate() {
                e[i] = k[j];
            }
            let peak = e.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            let e: Vec<f64> = e.iter().map(|v| v / peak).collect();
            let slope: f64 = weights.iter().zip(&e).map(|(w, ei)| w * ei).sum();
            let (e, slope) = if slope >= 0.0 {
                (e, slope)
            } else {
                (e.iter().map(|v| -v).collect(), -slope)
            };
            let mut t = box_limit(a, &e);
            if slope > 0.0 && t.is_finite() && t > 0.0 {
                // The kernel vector is exact only up to elimination noise;
                // halve the slide until the completion stays nonnegative
                // within the noise floor ascend repairs afterwards.
                let z = completion(projections, a);
                let mut d = ComplexMatrix::zero();
                for (p, ei) in projections.iter().zip(&e) {
                    d = d + p.scale(*ei);
                }
                for _ in 0..40 {
                    if (z - d.scale(t)).min_eigenvalue() >= -1e-10 {
                        offer(e.clone(), t, slope);
                        break;
                    }
                    t *= 0.5;
                }
            }
        }
    }

    // Escape move from the fitted dual certificate.
    if m >= 1 {
        let normal: Vec<Vec<f64>> = (0..4)
            .map(|r| {
                (0..4)
                    .map(|c| free.iter().map(|&i| cols[i][r] * cols[i][c]).sum())
                    .collect()
            })
            .collect();
        let rhs: Vec<f64> = (0..4)
            .map(|r| free.iter().map(|&i| cols[i][r] * weights[i]).sum())
            .collect();
        if let Some(y) = solve_linear(&normal, &rhs) {
            let sqrt2 = std::f64::consts::SQRT_2;
            let ymat = ComplexMatrix::new([
                [
                    num_complex::Complex64::new(y[0], 0.0),
                    num_complex::Complex64::new(y[2] / sqrt2, y[3] / sqrt2),
                ],
                [
                    num_complex::Complex64::new(y[2] / sqrt2, -y[3] / sqrt2),
                    num_complex::Complex64::new(y[1], 0.0),
                ],
            ]);
            if let Ok(yeig) = eigen_hermitian(&ymat) {
                if yeig.eigenvalues[1] < -1e-11 {
                    let q = hermitian_coords(&yeig.projections[1]);
                    // Minimum-norm solution of sum_x e_x P_x = -Q over all
                    // coordinates, via the 4x4 Gram system.
                    let gram: Vec<Vec<f64>> = (0..4)
                        .map(|r| {
                            (0..4)
                                .map(|c| (0..n).map(|i| cols[i][r] * cols[i][c]).sum())
                                .collect()
                        })
                        .collect();
                    let target: Vec<f64> = (0..4).map(|r| -q[r]).collect();
                    if let Some(lam) = solve_linear(&gram, &target) {
                        let e: Vec<f64> = (0..n)
                            .map(|i| (0..4).map(|r| cols[i][r] * lam[r]).sum())
                            .collect();
                        // Verify the solve: the columns may not span.
                        let mut d = ComplexMatrix::zero();
                        for (p, ei) in projections.iter().zip(&e) {
                            d = d + p.scale(*ei);
                        }
                        let resid = (d + yeig.projections[1]).norm();
                        if resid < 1e-9 {
                            let slope: f64 =
                                weights.iter().zip(&e).map(|(w, ei)| w * ei).sum();
                            if slope > 0.0 {
                                let t_box = box_limit(a, &e);
                                let z = completion(projections, a);
                                let t = line_limit(&z, &d, t_box.min(1.0));
                                offer(e, t, slope);
                            }
                        }
                    }
                }
            }
        }
    }

    if let Some((e, t, _)) = best {
        for (ai, ei) in a.iter_mut().zip(&e) {
            *ai = (*ai + t * ei).clamp(0.0, 1.0);
        }
        return true;
    }
    false
}

/// One projected-gradient step along the positive-semidefiniteness boundary.
///
/// At a point where the completion Z is singular with null projector
/// |psi><psi|, the active constraint has gradient g_x = <psi|P_x|psi> in the
/// scales. The objective is projected onto the tangent of that constraint
/// (dropping coordinates pinned at the box) and bent inward by a geometric
/// family of corrections -beta g; the best feasible step is taken. This
/// escapes stalls where the improving direction needs component ratios that
/// coordinate, pair, and sign-pattern moves cannot express.
fn boundary_sweep(projections: &[ComplexMatrix], weights: &[f64], a: &mut [f64]) -> bool {
    let n = projections.len();
    let z = completion(projections, a);
    let eig = match eigen_hermitian(&z) {
        Ok(e) => e,
        Err(_) => return false,
    };
    if eig.eigenvalues[1] > 1e-9 {
        return false; // interior point: coordinate ascent already handles it
    }
    if eig.eigenvalues[0] <= 1e-9 {
        return corner_sweep(projections, weights, a);
    }
    let g: Vec<f64> = projections
        .iter()
        .map(|p| eig.projections[1].trace_product(p).max(0.0))
        .collect();
    // Tangent projection of the objective, with box-leaving coordinates
    // removed until the active set stabilizes.
    let mut free = vec![true; n];
    let mut d = vec![0.0; n];
    for _ in 0..=n {
        let (mut wg, mut gg) = (0.0, 0.0);
        for i in 0..n {
            if free[i] {
                wg += weights[i] * g[i];
                gg += g[i] * g[i];
            }
        }
        for (i, slot) in d.iter_mut().enumerate() {
            *slot = if free[i] {
                weights[i] - if gg > 1e-18 { wg / gg * g[i] } else { 0.0 }
            } else {
                0.0
            };
        }
        let mut changed = false;
        for i in 0..n {
            if free[i] && ((a[i] <= 1e-12 && d[i] < 0.0) || (a[i] >= 1.0 - 1e-12 && d[i] > 0.0)) {
                free[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let dn = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if dn <= 1e-12 {
        return false;
    }
    let gn = (0..n)
        .map(|i| if free[i] { g[i] * g[i] } else { 0.0 })
        .sum::<f64>()
        .sqrt();
    let steps = if gn > 1e-12 { 15 } else { 1 };
    let beta0 = if gn > 1e-12 { dn / gn } else { 0.0 };
    let mut best: Option<(Vec<f64>, f64, f64)> = None;
    for k in 0..steps {
        let beta = beta0 / f64::powi(2.0, k);
        let e: Vec<f64> = (0..n)
            .map(|i| if free[i] { d[i] - beta * g[i] } else { 0.0 })
            .collect();
        let slope: f64 = weights.iter().zip(&e).map(|(w, ei)| w * ei).sum();
        if slope <= 0.0 {
            continue;
        }
        let mut t_box = f64::INFINITY;
        for (ai, ei) in a.iter().zip(&e) {
            if *ei > 0.0 {
                t_box = t_box.min((1.0 - ai) / ei);
            } else if *ei < 0.0 {
                t_box = t_box.min(ai / -ei);
            }
        }
        if !(t_box > 0.0 && t_box.is_finite()) {
            continue;
        }
        let mut dmat = ComplexMatrix::zero();
        for (p, ei) in projections.iter().zip(&e) {
            dmat = dmat + p.scale(*ei);
        }
        let t = line_limit(&z, &dmat, t_box);
        let gain = slope * t;
        if gain > 1e-13 && best.as_ref().is_none_or(|(_, _, b)| gain > *b) {
            best = Some((e, t, gain));
        }
    }
    if let Some((e, t, _)) = best {
        for (ai, ei) in a.iter_mut().zip(&e) {
            *ai = (*ai + t * ei).clamp(0.0, 1.0);
        }
        return true;
    }
    false
}

/// Coordinate sweeps interleaved with pairwise steps until neither moves.
fn polish(
    projections: &[ComplexMatrix],
    weights: &[f64],
    start: &[f64],
    tol: f64,
) -> (Vec<f64>, f64) {
    let (mut a, mut rate) = ascend(projections, weights, start, tol);
    let dirs = direction_dictionary(weights);
    let dmats: Vec<ComplexMatrix> = dirs
        .iter()
        .map(|d| {
            let mut sum = ComplexMatrix::zero();
            for (p, di) in projections.iter().zip(d) {
                sum = sum + p.scale(*di);
            }
            sum
        })
        .collect();
    for _ in 0..40 {
        let mut moved = pair_sweep(projections, weights, &mut a);
        for _ in 0..400 {
            if !boundary_sweep(projections, weights, &mut a) {
                break;
            }
            moved = true;
        }
        for _ in 0..200 {
            if !direction_sweep(projections, weights, &dirs, &dmats, &mut a) {
                break;
            }
            moved = true;
        }
        if !moved {
            break;
        }
        let (b, r) = ascend(projections, weights, &a, tol);
        a = b;
        rate = r;
    }
    let rate_now = a.iter().zip(weights).map(|(x, w)| x * w).sum::<f64>();
    (a, rate_now.max(rate))
}

/// Maximizes sum_x a_x w_x over a in [0,1]^n with I - sum_x a_x P_x >= 0.
///
/// Deterministic multistart coordinate ascent: the uniform midpoint start is
/// tried first, followed by every vertex of the box in lexicographic order;
/// near-ties keep the earliest start so repeated runs agree bit for bit.
pub fn rate_maximize(
    projections: &[ComplexMatrix],
    weights: &[f64],
    cfg: &OracleConfig,
) -> Result<RateSolution> {
    cfg.validate()?;
    let n = projections.len();
    if n == 0 || n > MAX_RATE_VARS {
        return Err(DiscrimError::SearchTooLarge(format!(
            "rate maximization supports 1..={MAX_RATE_VARS} projections, got {n}"
        )));
    }
    let num_starts = (1usize << n) + 1;
    let results = par::map_collect(num_starts, |s| {
        let start: Vec<f64> = if s == 0 {
            vec![0.5; n]
        } else {
            (0..n)
                .map(|i| if (s - 1) >> i & 1 == 1 { 1.0 } else { 0.0 })
                .collect()
        };
        ascend(projections, weights, &start, cfg.rate_tol)
    });
    // Pairwise polish is costlier, so it runs only on the uniform start and
    // the best few vertex results, in a deterministic order.
    let mut order: Vec<usize> = (0..results.len()).collect();
    order.sort_by(|&x, &y| {
        results[y].1.partial_cmp(&results[x].1).unwrap().then(x.cmp(&y))
    });
    let mut candidates = vec![0usize];
    candidates.extend(order.into_iter().filter(|&i| i != 0).take(4));
    let mut best: Option<(Vec<f64>, f64)> = None;
    for idx in candidates {
        let (a, rate) = polish(projections, weights, &results[idx].0, cfg.rate_tol);
        let replace = match &best {
            None => true,
            Some((_, r)) => rate > r + 1e-12,
        };
        if replace {
            best = Some((a, rate));
        }
    }
    let (scales, rate) = best.expect("at least one start");
    let completion_min_eigenvalue = completion(projections, &scales).min_eigenvalue();
    Ok(RateSolution {
        scales,
        rate,
        completion_min_eigenvalue,
    })
}

/// Solves a small linear system by Gaussian elimination with partial
/// pivoting; `None` when the matrix is singular.
fn solve_linear(h: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let m = b.len();
    let mut aug: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row = h[i].clone();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&x, &y| aug[x][col].abs().partial_cmp(&aug[y][col].abs()).unwrap())?;
        if aug[pivot][col].abs() < 1e-12 {
            return None;
        }
        aug.swap(col, pivot);
        let pivot_row = aug[col].clone();
        for (row, entries) in aug.iter_mut().enumerate() {
            if row != col {
                let f = entries[col] / pivot_row[col];
                for (slot, pv) in entries.iter_mut().zip(&pivot_row).skip(col) {
                    *slot -= f * pv;
                }
            }
        }
    }
    Some((0..m).map(|i| aug[i][m] / aug[i][i]).collect())
}

/// Exact global maximum of the rate problem by stationary-point enumeration.
///
/// For 2x2 matrices det(I - sum_x a_x P_x) = 1 - p.a + a^T H a / 2 with
/// p_x = tr P_x and H = p p^T - G, G_xy = tr(P_x P_y), so the feasible
/// region is the box cut by one quadric (plus a trace half-space implied by
/// positive semidefiniteness). The linear objective attains its maximum at a
/// box corner or at a first-order point on the quadric; fixing each
/// coordinate to {0, 1, free} reduces the first-order conditions on the free
/// block to a scalar quadratic in the reciprocal multiplier. Every candidate
/// is verified feasible before being scored, so the best one is the global
/// maximum.
fn rate_stationary_maximum(projections: &[ComplexMatrix], weights: &[f64]) -> f64 {
    let n = projections.len();
    let p: Vec<f64> = projections.iter().map(|m| m.trace().re).collect();
    let mut h = vec![vec![0.0; n]; n];
    for x in 0..n {
        for y in 0..n {
            h[x][y] = p[x] * p[y] - projections[x].trace_product(&projections[y]);
        }
    }
    let q = |a: &[f64]| -> f64 {
        let mut v = 1.0 - a.iter().zip(&p).map(|(ai, pi)| ai * pi).sum::<f64>();
        for x in 0..n {
            for y in 0..n {
                v += 0.5 * a[x] * h[x][y] * a[y];
            }
        }
        v
    };
    let mut best = 0.0f64;
    let mut consider = |a: &[f64]| {
        if a.iter().any(|v| !(-1e-9..=1.0 + 1e-9).contains(v)) {
            return;
        }
        let clamped: Vec<f64> = a.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        if !feasible(projections, &clamped) {
            return;
        }
        let v: f64 = clamped.iter().zip(weights).map(|(x, w)| x * w).sum();
        if v > best {
            best = v;
        }
    };
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let mut state = vec![0u8; n]; // 0 free, 1 pinned at zero, 2 at one
        for s in state.iter_mut() {
            *s = (c % 3) as u8;
            c /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 0).collect();
        let mut a = vec![0.0; n];
        for i in 0..n {
            if state[i] == 2 {
                a[i] = 1.0;
            }
        }
        if free.is_empty() {
            consider(&a);
            continue;
        }
        // Corner candidates where the completion vanishes outright: solve
        // sum_F a_i P_i = I - sum_S a_j P_j as four real equations via the
        // normal equations. Such points are vertices of the feasible set that
        // the smooth single-constraint conditions below cannot produce.
        if free.len() <= 4 {
            let mut r = ComplexMatrix::identity();
            for i in 0..n {
                if state[i] != 0 {
                    r = r - projections[i].scale(a[i]);
                }
            }
            let rows = |m: &ComplexMatrix| {
                [
                    m.entry(0, 0).re,
                    m.entry(1, 1).re,
                    m.entry(0, 1).re,
                    m.entry(0, 1).im,
                ]
            };
            let cols: Vec<[f64; 4]> = free.iter().map(|&i| rows(&projections[i])).collect();
            let rhs = rows(&r);
            let m = free.len();
            let normal: Vec<Vec<f64>> = (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| (0..4).map(|k| cols[i][k] * cols[j][k]).sum())
                        .collect()
                })
                .collect();
            let nrhs: Vec<f64> = (0..m)
                .map(|i| (0..4).map(|k| cols[i][k] * rhs[k]).sum())
                .collect();
            if let Some(sol) = solve_linear(&normal, &nrhs) {
                let mut full = a.clone();
                for (k, &i) in free.iter().enumerate() {
                    full[i] = sol[k];
                }
                let residual: f64 = (0..4)
                    .map(|k| {
                        let lhs: f64 = (0..m).map(|i| cols[i][k] * sol[i]).sum();
                        (lhs - rhs[k]).powi(2)
                    })
                    .sum();
                if residual < 1e-18 {
                    consider(&full);
                }
            }
        }
        // Stationarity on the free block: grad_F q = -w_F / lambda, i.e.
        // H_FF a_F = p_F - H_FS a_S - mu w_F with mu = 1/lambda >= 0.
        let hff: Vec<Vec<f64>> = free
            .iter()
            .map(|&i| free.iter().map(|&j| h[i][j]).collect())
            .collect();
        let rhs_fixed: Vec<f64> = free
            .iter()
            .map(|&i| {
                p[i] - (0..n)
                    .filter(|&j| state[j] != 0)
                    .map(|j| h[i][j] * a[j])
                    .sum::<f64>()
            })
            .collect();
        let wf: Vec<f64> = free.iter().map(|&i| weights[i]).collect();
        let (Some(u), Some(v)) = (solve_linear(&hff, &rhs_fixed), solve_linear(&hff, &wf))
        else {
            continue;
        };
        let at = |mu: f64| -> Vec<f64> {
            let mut full = a.clone();
            for (k, &i) in free.iter().enumerate() {
                full[i] = u[k] - mu * v[k];
            }
            full
        };
        // q along a_F(mu) is quadratic in mu; fit it from three evaluations.
        let (q0, q1, qm1) = (q(&at(0.0)), q(&at(1.0)), q(&at(-1.0)));
        let c2 = 0.5 * (q1 + qm1) - q0;
        let c1 = 0.5 * (q1 - qm1);
        let c0 = q0;
        let roots: Vec<f64> = if c2.abs() > 1e-13 {
            let disc = c1 * c1 - 4.0 * c2 * c0;
            if disc < 0.0 {
                Vec::new()
            } else {
                let s = disc.sqrt();
                vec![(-c1 + s) / (2.0 * c2), (-c1 - s) / (2.0 * c2)]
            }
        } else if c1.abs() > 1e-13 {
            vec![-c0 / c1]
        } else {
            vec![0.0]
        };
        for mu in roots {
            if mu >= -1e-9 {
                consider(&at(mu));
            }
        }
    }
    best
}

const MAX_GRID_VARS: usize = 5;

/// Independent certificate for [`rate_maximize`]: a coarse product grid over
/// the box (infeasible points scaled back to the feasible set), halving
/// refinement around the incumbent, a 1e-3 lattice polish, exact sweeps from
/// the best seeds, and finally the closed-form stationary-point enumeration,
/// which pins the global maximum for systems this size.
pub fn rate_grid_certificate(
    projections: &[ComplexMatrix],
    weights: &[f64],
    cfg: &OracleConfig,
) -> Result<f64> {
    cfg.validate()?;
    let n = projections.len();
    if n == 0 || n > MAX_GRID_VARS {
        return Err(DiscrimError::SearchTooLarge(format!(
            "grid certificate supports 1..={MAX_GRID_VARS} projections, got {n}"
        )));
    }
    let value_of = |a: &[f64]| -> (Vec<f64>, f64) {
        let s = repair_scale(projections, a);
        let scaled: Vec<f64> = a.iter().map(|v| v * s).collect();
        let v = scaled.iter().zip(weights).map(|(x, w)| x * w).sum();
        (scaled, v)
    };

    let levels = [0.0, 0.25, 0.5, 0.75, 1.0];
    let total = levels.len().pow(n as u32);
    let coarse = par::map_collect(total, |code| {
        let mut c = code;
        let a: Vec<f64> = (0..n)
            .map(|_| {
                let v = levels[c % levels.len()];
                c /= levels.len();
                v
            })
            .collect();
        value_of(&a)
    });
    // Refining around a single incumbent can lock onto the wrong basin, so
    // the top few coarse points are kept as extra polish seeds below.
    let mut order: Vec<usize> = (0..coarse.len()).collect();
    order.sort_by(|&x, &y| {
        coarse[y].1.partial_cmp(&coarse[x].1).unwrap().then(x.cmp(&y))
    });
    let seeds: Vec<Vec<f64>> = order.iter().take(4).map(|&i| coarse[i].0.clone()).collect();
    let mut best = coarse[order[0]].clone();

    let mut span = 0.25f64;
    for _ in 0..cfg.refinement_passes {
        span *= 0.5;
        let center = best.0.clone();
        let offsets = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let total = offsets.len().pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let a: Vec<f64> = (0..n)
                .map(|i| {
                    let o = offsets[c % offsets.len()];
                    c /= offsets.len();
                    (center[i] + o * span).clamp(0.0, 1.0)
                })
                .collect();
            let cand = value_of(&a);
            if cand.1 > best.1 {
                best = cand;
            }
        }
    }

    // 1e-3 lattice polish, one coordinate at a time.
    let mut a = best.0.clone();
    for _ in 0..20 {
        let mut improved = false;
        for i in 0..n {
            let mut rest = ComplexMatrix::identity();
            for j in 0..n {
                if j != i {
                    rest = rest - projections[j].scale(a[j]);
                }
            }
            let cap = coordinate_max(&rest, &projections[i]);
            let lattice = (cap / 1e-3).floor() * 1e-3;
            if lattice > a[i] + 1e-15 {
                a[i] = lattice;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    // Exact sweeps from the lattice point and the best coarse seeds, then
    // the stationary-point enumeration, which pins the global maximum; the
    // grid value stays as a feasible floor for degenerate systems.
    let mut rate = best.1;
    for start in std::iter::once(&a).chain(seeds.iter()) {
        let (_, r) = polish(projections, weights, start, cfg.rate_tol);
        rate = rate.max(r);
    }
    Ok(rate.max(rate_stationary_maximum(projections, weights)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qstate_core::DensityMatrix;

    fn bloch(v: [f64; 3]) -> DensityMatrix {
        DensityMatrix::from_bloch(v).unwrap()
    }

    fn two_bases(theta: f64) -> Ensemble {
        let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
        Ensemble::uniform(vec![
            ("1+".into(), bloch([s, 0.0, c])),
            ("1-".into(), bloch([-s, 0.0, -c])),
            ("2+".into(), bloch([-s, 0.0, c])),
            ("2-".into(), bloch([s, 0.0, -c])),
        ])
        .unwrap()
    }

    #[test]
    fn fixed_point_orthogonal_pair() {
        let e = Ensemble::uniform(vec![
            ("a".into(), bloch([0.0, 0.0, 1.0])),
            ("b".into(), bloch([0.0, 0.0, -1.0])),
        ])
        .unwrap();
        let out = fixed_point_min_error(&e, &OracleConfig::fast()).unwrap();
        assert!((out.probability - 1.0).abs() < 1e-9);
        assert!(out.monotone);
    }

    #[test]
    fn fixed_point_two_bases() {
        let out = fixed_point_min_error(&two_bases(1.1), &OracleConfig::fast()).unwrap();
        assert!((out.probability - 0.5).abs() < 1e-6);
    }

    #[test]
    fn fixed_point_trine() {
        let mut entries = Vec::new();
        for j in 1..=3u32 {
            let ang = j as f64 * std::f64::consts::FRAC_PI_3;
            for sign in [1.0, -1.0] {
                entries.push((
                    format!("{j}{}", if sign > 0.0 { "+" } else { "-" }),
                    bloch([sign * ang.sin(), 0.0, sign * ang.cos()]),
                ));
            }
        }
        let e = Ensemble::uniform(entries).unwrap();
        let out = fixed_point_min_error(&e, &OracleConfig::fast()).unwrap();
        assert!((out.probability - 1.0 / 3.0).abs() < 1e-6);
        // Prop. 1 bound for uniform priors.
        assert!(out.probability <= 2.0 / 6.0 * e.max_state_eigenvalue() + 1e-9);
    }

    #[test]
    fn grid_plain_single_state() {
        let e = Ensemble::new(vec![("a".into(), bloch([0.6, 0.0, 0.8]), 1.0)]).unwrap();
        let r = grid_projective_search(&e, GridObjective::Plain, &OracleConfig::fast()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn grid_meta_two_bases_basis_partition() {
        let theta = 1.0f64;
        let e = two_bases(theta);
        let p = Partition::new(
            &e,
            &[
                vec!["1+".into(), "1-".into()],
                vec!["2+".into(), "2-".into()],
            ],
        )
        .unwrap();
        let r = grid_projective_search(&e, GridObjective::Meta(&p), &OracleConfig::fast()).unwrap();
        let expect = 0.5 * (1.0 + ((1.0 + theta.cos().abs()) / 2.0).sqrt());
        assert!((r.value - expect).abs() < 1e-4, "value {} expect {}", r.value, expect);
        // optimal axis is z within a degree
        assert!(r.axis[2].abs() > (1.0f64).to_radians().cos());
    }

    #[test]
    fn grid_post_two_bases_parity_partition() {
        let theta = 1.0f64;
        let e = two_bases(theta);
        let p = Partition::new(
            &e,
            &[
                vec!["1+".into(), "2+".into()],
                vec!["1-".into(), "2-".into()],
            ],
        )
        .unwrap();
        let r =
            grid_projective_search(&e, GridObjective::PostRelabel(&p), &OracleConfig::fast())
                .unwrap();
        let expect = 0.25 * (3.0 - theta.cos());
        assert!((r.value - expect).abs() < 1e-4, "value {} expect {}", r.value, expect);
    }

    #[test]
    fn rate_single_projection() {
        let proj = *bloch([0.0, 0.0, 1.0]).matrix();
        let sol = rate_maximize(&[proj], &[0.7], &OracleConfig::fast()).unwrap();
        assert!((sol.scales[0] - 1.0).abs() < 1e-9);
        assert!((sol.rate - 0.7).abs() < 1e-9);
    }

    #[test]
    fn rate_bb84_projections() {
        let projs: Vec<ComplexMatrix> = [
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
        ]
        .iter()
        .map(|&v| *bloch(v).matrix())
        .collect();
        let weights = vec![0.5; 4];
        let sol = rate_maximize(&projs, &weights, &OracleConfig::fast()).unwrap();
        assert!((sol.rate - 1.0).abs() < 1e-9);
        assert!(sol.completion_min_eigenvalue > -1e-9);
        let cert = rate_grid_certificate(&projs, &weights, &OracleConfig::fast()).unwrap();
        assert!((cert - sol.rate).abs() < 1e-4);
    }
}
