//! Property-based checks of the solver primitives.

use proptest::prelude::*;
use qstate_core::{pseudo_inverse_sqrt, ComplexMatrix, DensityMatrix, Effect, Ensemble, Povm};
use qstate_discrim::minerror::{helstrom, optimal_relabeling};
use qstate_discrim::oracle::{
    exhaustive_relabelings, fixed_point_min_error, rate_grid_certificate, rate_maximize,
    OracleConfig,
};
use qstate_core::Partition;

fn bloch_strategy() -> impl Strategy<Value = [f64; 3]> {
    (-1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        [r * phi.cos(), r * phi.sin(), z]
    })
}

fn ensemble_strategy(n: usize) -> impl Strategy<Value = Ensemble> {
    (
        proptest::collection::vec(bloch_strategy(), n),
        proptest::collection::vec(0.05f64..1.0, n),
    )
        .prop_map(|(blochs, raw)| {
            let total: f64 = raw.iter().sum();
            Ensemble::new(
                blochs
                    .into_iter()
                    .zip(raw)
                    .enumerate()
                    .map(|(i, (v, w))| {
                        (format!("s{i}"), DensityMatrix::from_bloch(v).unwrap(), w / total)
                    })
                    .collect(),
            )
            .unwrap()
        })
}

/// Random full-rank POVM with `n` outcomes from random PSD pieces.
fn povm_strategy(n: usize) -> impl Strategy<Value = Povm> {
    proptest::collection::vec((bloch_strategy(), 0.1f64..1.0), n).prop_map(|parts| {
        let pieces: Vec<ComplexMatrix> = parts
            .iter()
            .map(|(v, w)| {
                (*DensityMatrix::from_bloch(*v).unwrap().matrix()).scale(*w)
                    + ComplexMatrix::identity().scale(0.05)
            })
            .collect();
        let mut sum = ComplexMatrix::zero();
        for p in &pieces {
            sum = sum + *p;
        }
        let root = pseudo_inverse_sqrt(&sum).unwrap();
        let outcomes = pieces
            .into_iter()
            .enumerate()
            .map(|(i, p)| (format!("y{i}"), Effect::new(root * p * root).unwrap()))
            .collect();
        Povm::new(outcomes, None).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fixed_point_matches_helstrom(e in ensemble_strategy(2)) {
        let exact = helstrom(&e).unwrap().probability;
        let iterated = fixed_point_min_error(&e, &OracleConfig::fast()).unwrap();
        prop_assert!((iterated.probability - exact).abs() < 1e-7,
            "{} vs {}", iterated.probability, exact);
    }

    #[test]
    fn success_equals_confidence_weighted_outcomes(
        e in ensemble_strategy(3),
        m in povm_strategy(3),
    ) {
        // sum_x c(x) tr[rho M(x)] = sum_x q_x tr[rho_x M(x)] where c(x) is
        // the posterior of x at outcome x.
        let rho = e.average();
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for (x, (_, eff)) in m.outcomes().iter().enumerate() {
            let outcome_prob = rho.matrix().trace_product(eff.matrix());
            let joint = e.weighted_state(x).trace_product(eff.matrix());
            let c = if outcome_prob > 1e-15 { joint / outcome_prob } else { 0.0 };
            lhs += c * outcome_prob;
            rhs += joint;
        }
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn greedy_relabeling_is_exact(
        e in ensemble_strategy(4),
        m in povm_strategy(3),
        mask in 1u8..7,
    ) {
        let a: Vec<usize> = (0..4).filter(|&i| i < 3 && mask >> i & 1 == 1).collect();
        let b: Vec<usize> = (0..4).filter(|&i| !a.contains(&i)).collect();
        prop_assume!(!a.is_empty() && !b.is_empty());
        let p = Partition::from_indices(&e, vec![a, b]).unwrap();
        let greedy = optimal_relabeling(&e, &p, &m).unwrap();
        let (_, exact) = exhaustive_relabelings(&e, &p, &m).unwrap();
        prop_assert!((greedy.probability - exact).abs() < 1e-12);
    }

    #[test]
    fn rate_ascent_is_feasible_and_certified(
        blochs in proptest::collection::vec(bloch_strategy(), 4),
        weights in proptest::collection::vec(0.0f64..1.0, 4),
    ) {
        let projections: Vec<ComplexMatrix> = blochs
            .iter()
            .map(|&v| *DensityMatrix::from_bloch(v).unwrap().matrix())
            .collect();
        let cfg = OracleConfig::fast();
        let sol = rate_maximize(&projections, &weights, &cfg).unwrap();
        prop_assert!(sol.completion_min_eigenvalue >= -1e-9);
        prop_assert!(sol.scales.iter().all(|a| (-1e-12..=1.0 + 1e-12).contains(a)));
        let cert = rate_grid_certificate(&projections, &weights, &cfg).unwrap();
        prop_assert!((cert - sol.rate).abs() < 1e-4, "{cert} vs {}", sol.rate);
    }
}
