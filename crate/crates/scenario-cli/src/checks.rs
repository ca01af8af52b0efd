//! The built-in verification table: every published closed-form value the
//! library reproduces, each checked against the independent solvers.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use qstate_discrim::maxconf;
use qstate_discrim::minerror::{
    self, basis_encoding, basis_partition, basis_value_closed_form, parity_closed_form,
    parity_partition, StandardMeasurement,
};
use qstate_discrim::oracle::{self, GridObjective, OracleConfig};

pub type CheckResult = std::result::Result<String, String>;

/// 5 degree spaced grid over the open interval (0, pi).
fn theta_grid() -> Vec<f64> {
    (1..36).map(|i| i as f64 * PI / 36.0).collect()
}

fn ensure(ok: bool, detail: String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail)
    }
}

/// Basis side information for two bases: exact values on the angle grid,
/// each confirmed by the grid-search solver.
pub fn two_bases_basis_values(cfg: &OracleConfig) -> CheckResult {
    for theta in theta_grid() {
        let e = basis_encoding(&[0.0, theta]).map_err(|e| e.to_string())?;
        let p = basis_partition(&e).map_err(|e| e.to_string())?;
        let s = minerror::solve_all(&e, &p, cfg).map_err(|e| e.to_string())?;
        let post = 0.25 * (3.0 + theta.cos().abs());
        let meta = 0.5 * (1.0 + ((1.0 + theta.cos().abs()) / 2.0).sqrt());
        ensure(
            (s.plain - 0.5).abs() < 1e-9
                && (s.pre - 1.0).abs() < 1e-9
                && (s.post - post).abs() < 1e-9
                && (s.meta - meta).abs() < 1e-9,
            format!("theta {theta}: closed forms missed ({s:?})"),
        )?;
        let g_plain = oracle::grid_projective_search(&e, GridObjective::Plain, cfg)
            .map_err(|e| e.to_string())?;
        let g_post = oracle::grid_projective_search(&e, GridObjective::PostRelabel(&p), cfg)
            .map_err(|e| e.to_string())?;
        let g_meta = oracle::grid_projective_search(&e, GridObjective::Meta(&p), cfg)
            .map_err(|e| e.to_string())?;
        ensure(
            (g_plain.value - 0.5).abs() < 1e-4
                && (g_post.value - post).abs() < 1e-4
                && (g_meta.value - meta).abs() < 1e-4,
            format!(
                "theta {theta}: grid search disagrees (plain {}, post {}, meta {})",
                g_plain.value, g_post.value, g_meta.value
            ),
        )?;
    }
    Ok("35 angles, all regimes within 1e-9 of closed form and 1e-4 of grid search".into())
}

/// Parity side information for two bases: exact values, with the
/// pre/meta coincidence tight to 1e-12.
pub fn two_bases_parity_values(cfg: &OracleConfig) -> CheckResult {
    for theta in theta_grid() {
        let e = basis_encoding(&[0.0, theta]).map_err(|e| e.to_string())?;
        let p = parity_partition(&e).map_err(|e| e.to_string())?;
        let s = minerror::solve_all(&e, &p, cfg).map_err(|e| e.to_string())?;
        let shared = 0.5 * (1.0 + (theta / 2.0).sin());
        let post = 0.25 * (3.0 - theta.cos());
        ensure(
            (s.pre - shared).abs() < 1e-9
                && (s.meta - shared).abs() < 1e-9
                && (s.post - post).abs() < 1e-9,
            format!("theta {theta}: closed forms missed ({s:?})"),
        )?;
        ensure(
            (s.pre - s.meta).abs() < 1e-12,
            format!("theta {theta}: pre {} != meta {}", s.pre, s.meta),
        )?;
    }
    Ok("35 angles within 1e-9; pre = meta to 1e-12".into())
}

/// Six equally spaced states grouped into three bases.
pub fn trine_values(cfg: &OracleConfig) -> CheckResult {
    let angles = [FRAC_PI_3, 2.0 * FRAC_PI_3, PI];
    let e = basis_encoding(&angles).map_err(|e| e.to_string())?;
    let p = basis_partition(&e).map_err(|e| e.to_string())?;
    let s = minerror::solve_all(&e, &p, cfg).map_err(|e| e.to_string())?;
    ensure(
        (s.plain - 1.0 / 3.0).abs() < 1e-9
            && (s.pre - 1.0).abs() < 1e-9
            && (s.post - 5.0 / 6.0).abs() < 1e-9
            && (s.meta - 5.0 / 6.0).abs() < 1e-9,
        format!("regime values missed ({s:?})"),
    )?;
    // independent confirmations of the anticipative value
    let (_, sign_pattern) = basis_value_closed_form(&angles).map_err(|e| e.to_string())?;
    ensure(
        (sign_pattern - 5.0 / 6.0).abs() < 1e-9,
        format!("sign-pattern search gave {sign_pattern}"),
    )?;
    let g = oracle::grid_projective_search(&e, GridObjective::Meta(&p), cfg)
        .map_err(|e| e.to_string())?;
    ensure(
        (g.value - 5.0 / 6.0).abs() < 1e-4,
        format!("grid search gave {}", g.value),
    )?;
    Ok("P=1/3, pre=1, post=meta=5/6; confirmed by sign-pattern and grid searches".into())
}

/// Two tilted antipodal-free pairs: the three side-informed values
/// coincide. The value quoted in the source text, 3/4 (1 + sin(theta/2)),
/// disagrees with every solver (it exceeds 1 for large theta); the solver
/// value 3/4 + 1/4 sin(theta/2) is recorded as authoritative.
pub fn paired_blocks_example(cfg: &OracleConfig) -> CheckResult {
    let mut flagged = String::new();
    for degrees in [30.0, 60.0, 90.0] {
        let theta = degrees * PI / 180.0;
        let (sn, cs) = (theta / 2.0).sin_cos();
        let e = qstate_core::Ensemble::uniform(vec![
            ("1".into(), qstate_core::DensityMatrix::from_bloch([sn, 0.0, cs]).unwrap()),
            ("2".into(), qstate_core::DensityMatrix::from_bloch([-sn, 0.0, cs]).unwrap()),
            ("3".into(), qstate_core::DensityMatrix::from_bloch([1.0, 0.0, 0.0]).unwrap()),
            ("4".into(), qstate_core::DensityMatrix::from_bloch([-1.0, 0.0, 0.0]).unwrap()),
        ])
        .map_err(|e| e.to_string())?;
        let p = qstate_core::Partition::from_indices(&e, vec![vec![0, 1], vec![2, 3]])
            .map_err(|e| e.to_string())?;
        let s = minerror::solve_all(&e, &p, cfg).map_err(|e| e.to_string())?;
        ensure(
            (s.plain - 0.5).abs() < 1e-9,
            format!("{degrees} deg: plain value {}", s.plain),
        )?;
        ensure(
            (s.pre - s.meta).abs() < 1e-9 && (s.meta - s.post).abs() < 1e-9,
            format!("{degrees} deg: pre {} meta {} post {}", s.pre, s.meta, s.post),
        )?;
        let g = oracle::grid_projective_search(&e, GridObjective::PostRelabel(&p), cfg)
            .map_err(|e| e.to_string())?;
        ensure(
            (g.value - s.post).abs() < 1e-4,
            format!("{degrees} deg: grid {} vs post {}", g.value, s.post),
        )?;
        let quoted = 0.75 * (1.0 + sn);
        if (quoted - s.post).abs() > 1e-6 {
            flagged = format!(
                "; quoted expression deviates from the solvers (at {degrees} deg: {quoted} vs {})",
                s.post
            );
        }
    }
    Ok(format!(
        "P=1/2 and pre=meta=post at 30/60/90 deg, confirmed by grid search{flagged}"
    ))
}

/// The parity-information value for two bases: the proof-derived
/// coefficient 1/2 on cos(theta*) matches the exhaustive relabeling solver
/// exactly; the coefficient-2 variant fails it by a wide margin away from
/// theta* = pi/2, the one angle where both agree.
pub fn parity_coefficient_check(cfg: &OracleConfig) -> CheckResult {
    for theta in theta_grid() {
        let e = basis_encoding(&[0.0, theta]).map_err(|e| e.to_string())?;
        let p = parity_partition(&e).map_err(|e| e.to_string())?;
        let (post, _) = parity_closed_form(&[0.0, theta]).map_err(|e| e.to_string())?;
        ensure(
            (post - 0.25 * (3.0 - theta.cos())).abs() < 1e-12,
            format!("theta {theta}: implemented form {post}"),
        )?;
        let base = minerror::solve_no_side_info(&e, cfg).map_err(|e| e.to_string())?;
        let members = match &base.measurement {
            StandardMeasurement::Family(members) => members.clone(),
            StandardMeasurement::Single(m) => vec![m.clone()],
        };
        let mut best = f64::NEG_INFINITY;
        for m in &members {
            let (_, v) = oracle::exhaustive_relabelings(&e, &p, m).map_err(|e| e.to_string())?;
            best = best.max(v);
        }
        ensure(
            (best - post).abs() < 1e-12,
            format!("theta {theta}: exhaustive relabeling gave {best}, formula {post}"),
        )?;
    }
    let theta = FRAC_PI_3;
    let variant = 0.5 * (1.5 - 2.0 * theta.cos());
    let correct = 0.25 * (3.0 - theta.cos());
    ensure(
        (variant - correct).abs() > 0.1,
        format!("variant {variant} unexpectedly close to {correct}"),
    )?;
    Ok(
        "coefficient 1/2 exact to 1e-12 on 35 angles; coefficient-2 variant off by > 0.1 \
         at 60 deg (the two coincide only at 90 deg)"
            .into(),
    )
}

/// Conjugate-bases encoding: confidences and conclusive rates.
pub fn bb84_confidence_table(cfg: &OracleConfig) -> CheckResult {
    let e = basis_encoding(&[0.0, FRAC_PI_2]).map_err(|e| e.to_string())?;
    let p = basis_partition(&e).map_err(|e| e.to_string())?;
    let plain = maxconf::solve_plain_confidence(&e, cfg).map_err(|e| e.to_string())?;
    let pre = maxconf::solve_pre_confidence(&e, &p, cfg).map_err(|e| e.to_string())?;
    let post = maxconf::solve_post_confidence(&e, &p, cfg).map_err(|e| e.to_string())?;
    let meta = maxconf::solve_meta_confidence(&e, &p, cfg).map_err(|e| e.to_string())?;
    let conf_ok = |r: &maxconf::ConfidenceReport, want: f64| {
        r.confidences.iter().all(|c| (c - want).abs() < 1e-9)
    };
    ensure(
        conf_ok(&plain, 0.5) && (plain.rate - 1.0).abs() < 1e-9,
        format!("plain: C {:?} R {}", plain.confidences, plain.rate),
    )?;
    ensure(
        conf_ok(&pre, 1.0) && (pre.rate - 1.0).abs() < 1e-9,
        format!("pre: C {:?} R {}", pre.confidences, pre.rate),
    )?;
    ensure(
        conf_ok(&post, 1.0) && (post.rate - 0.5).abs() < 1e-9,
        format!("post: C {:?} R {}", post.confidences, post.rate),
    )?;
    ensure(
        conf_ok(&meta, 1.0) && (meta.rate - 0.5).abs() < 1e-9,
        format!("meta: C {:?} R {}", meta.confidences, meta.rate),
    )?;
    Ok("C=1/2 R=1 plain; C=1 with R = 1, 1/2, 1/2 for pre, post, meta".into())
}

/// Tetrahedral states in two antipodal-free pairs.
pub fn tetrahedron_confidence_table(cfg: &OracleConfig) -> CheckResult {
    let doc = crate::presets::preset("tetrahedron").expect("built-in");
    let e = doc.ensemble().map_err(|e| e.to_string())?;
    let p = doc
        .partitions(&e)
        .map_err(|e| e.to_string())?
        .remove(0)
        .1;
    let plain = maxconf::solve_plain_confidence(&e, cfg).map_err(|e| e.to_string())?;
    let pre = maxconf::solve_pre_confidence(&e, &p, cfg).map_err(|e| e.to_string())?;
    let post = maxconf::solve_post_confidence(&e, &p, cfg).map_err(|e| e.to_string())?;
    let meta = maxconf::solve_meta_confidence(&e, &p, cfg).map_err(|e| e.to_string())?;
    let conf_ok = |r: &maxconf::ConfidenceReport, want: f64| {
        r.confidences.iter().all(|c| (c - want).abs() < 1e-9)
    };
    let rate_pre = 1.0 - 1.0 / 3.0f64.sqrt();
    ensure(
        conf_ok(&plain, 0.5) && (plain.rate - 1.0).abs() < 1e-6,
        format!("plain: C {:?} R {}", plain.confidences, plain.rate),
    )?;
    ensure(
        conf_ok(&pre, 1.0) && (pre.rate - rate_pre).abs() < 1e-6,
        format!("pre: C {:?} R {}", pre.confidences, pre.rate),
    )?;
    ensure(
        conf_ok(&post, 0.75) && (post.rate - 2.0 / 3.0).abs() < 1e-6,
        format!("post: C {:?} R {}", post.confidences, post.rate),
    )?;
    ensure(
        conf_ok(&meta, 1.0) && (meta.rate - 1.0 / 3.0).abs() < 1e-6,
        format!("meta: C {:?} R {}", meta.confidences, meta.rate),
    )?;
    // certificates agree with the ascent rates
    for r in [&plain, &pre, &meta] {
        let mut certified = 0.0;
        for sys in &r.rate_systems {
            certified += sys.multiplier
                * oracle::rate_grid_certificate(&sys.projections, &sys.weights, cfg)
                    .map_err(|e| e.to_string())?;
        }
        ensure(
            (certified - r.certified_rate()).abs() < 1e-6,
            format!("{:?}: certificate {certified} vs rate {}", r.regime, r.certified_rate()),
        )?;
    }
    Ok("C and R match for all four regimes; grid certificates within 1e-6".into())
}

/// A trine with two added orthogonal complements: projection coefficients,
/// confidences and rates.
pub fn five_state_confidence_table(cfg: &OracleConfig) -> CheckResult {
    let doc = crate::presets::preset("five-state").expect("built-in");
    let e = doc.ensemble().map_err(|e| e.to_string())?;
    let p = doc
        .partitions(&e)
        .map_err(|e| e.to_string())?
        .remove(0)
        .1;

    let set = maxconf::mcm_projections(&e).map_err(|e| e.to_string())?;
    let r3 = 3.0f64.sqrt();
    let id = qstate_core::ComplexMatrix::identity();
    let sx = qstate_core::ComplexMatrix::pauli_x();
    let sz = qstate_core::ComplexMatrix::pauli_z();
    let projection = |cx: f64, cz: f64| (id + sx.scale(cx) + sz.scale(cz)).scale(0.5);
    let expected = [
        projection(0.0, 1.0),
        projection(12.0 * r3 / 31.0, -23.0 / 31.0),
        projection(-12.0 * r3 / 31.0, -23.0 / 31.0),
        projection(4.0 * r3 / 7.0, 1.0 / 7.0),
        projection(-4.0 * r3 / 7.0, 1.0 / 7.0),
    ];
    for (i, (got, want)) in set.projections.iter().zip(&expected).enumerate() {
        ensure(
            (*got - *want).max_entry_norm() < 1e-9,
            format!("projection {i} off by {}", (*got - *want).max_entry_norm()),
        )?;
    }

    let close = |got: &[f64], want: &[f64]| {
        got.iter().zip(want).all(|(g, w)| (g - w).abs() < 1e-9)
    };
    let c = maxconf::confidences(&e).map_err(|e| e.to_string())?;
    ensure(
        close(&c, &[1.0 / 3.0, 11.0 / 24.0, 11.0 / 24.0, 3.0 / 8.0, 3.0 / 8.0]),
        format!("plain confidences {c:?}"),
    )?;
    let pre = maxconf::solve_pre_confidence(&e, &p, cfg).map_err(|e| e.to_string())?;
    ensure(
        close(&pre.confidences, &[2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0, 1.0]),
        format!("pre confidences {:?}", pre.confidences),
    )?;
    let post = maxconf::solve_post_confidence(&e, &p, cfg).map_err(|e| e.to_string())?;
    ensure(
        close(
            &post.confidences,
            &[2.0 / 3.0, 121.0 / 186.0, 121.0 / 186.0, 75.0 / 78.0, 75.0 / 78.0],
        ),
        format!("post confidences {:?}", post.confidences),
    )?;
    let meta = maxconf::solve_meta_confidence(&e, &p, cfg).map_err(|e| e.to_string())?;
    ensure(
        (pre.rate - 0.8).abs() < 1e-6 && (meta.rate - 0.8).abs() < 1e-6,
        format!("rates: pre {} meta {}", pre.rate, meta.rate),
    )?;
    Ok("projection coefficients, confidences, and the shared 4/5 rate all match".into())
}

/// Every check with its short name, in presentation order.
pub fn run_all(cfg: &OracleConfig) -> Vec<(&'static str, CheckResult)> {
    vec![
        ("two-bases basis values", two_bases_basis_values(cfg)),
        ("two-bases parity values", two_bases_parity_values(cfg)),
        ("trine values", trine_values(cfg)),
        ("paired-blocks example", paired_blocks_example(cfg)),
        ("parity coefficient", parity_coefficient_check(cfg)),
        ("bb84 confidence table", bb84_confidence_table(cfg)),
        ("tetrahedron confidence table", tetrahedron_confidence_table(cfg)),
        ("five-state confidence table", five_state_confidence_table(cfg)),
    ]
}
