//! Qubit states, effects, measurements, ensembles and label partitions.

use crate::error::{CoreError, Result};
use crate::matrix::{eigen_hermitian, ComplexMatrix, HERMITIAN_TOL};

/// Tolerance on trace/prior normalization.
pub const UNIT_TOL: f64 = 1e-12;
/// Entrywise tolerance on POVM completeness.
pub const POVM_TOL: f64 = 1e-10;
/// Slack allowed below zero before a probability is rejected.
pub const PROB_TOL: f64 = 1e-12;
/// Slack on effect spectra around [0, 1].
pub const EFFECT_TOL: f64 = 1e-9;

pub type Label = String;

/// A unit-trace positive semidefinite Hermitian 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let residual = matrix.hermiticity_residual();
        if residual > HERMITIAN_TOL {
            return Err(CoreError::NotHermitian { residual });
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > 1e-9 {
            return Err(CoreError::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = matrix.min_eigenvalue();
        if min < -1e-9 {
            return Err(CoreError::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// 1/2 (I + v . sigma) for a Bloch vector of length at most one.
    pub fn from_bloch(v: [f64; 3]) -> Result<Self> {
        let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if len > 1.0 + UNIT_TOL {
            return Err(CoreError::InvalidState(format!(
                "Bloch vector length {len} exceeds 1"
            )));
        }
        let m = (ComplexMatrix::identity()
            + ComplexMatrix::pauli_x().scale(v[0])
            + ComplexMatrix::pauli_y().scale(v[1])
            + ComplexMatrix::pauli_z().scale(v[2]))
        .scale(0.5);
        Ok(Self { matrix: m })
    }

    /// Pure state from a (normalized) amplitude pair.
    pub fn from_amplitudes(a: num_complex::Complex64, b: num_complex::Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(CoreError::InvalidState(format!(
                "amplitude norm {norm} is not 1"
            )));
        }
        let a = a / norm;
        let b = b / norm;
        let m = ComplexMatrix::new([
            [a * a.conj(), a * b.conj()],
            [b * a.conj(), b * b.conj()],
        ]);
        Self::new(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Bloch coordinates v_k = tr(rho sigma_k).
    pub fn bloch(&self) -> [f64; 3] {
        [
            self.matrix.trace_product(&ComplexMatrix::pauli_x()),
            self.matrix.trace_product(&ComplexMatrix::pauli_y()),
            self.matrix.trace_product(&ComplexMatrix::pauli_z()),
        ]
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix)
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity() - 1.0).abs() <= tol
    }

    /// Orthogonal complement of a pure state.
    pub fn complement(&self) -> Result<Self> {
        Self::new(ComplexMatrix::identity() - self.matrix)
    }
}

/// A POVM element: Hermitian with spectrum inside [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Effect {
    matrix: ComplexMatrix,
}

impl Effect {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let residual = matrix.hermiticity_residual();
        if residual > HERMITIAN_TOL {
            return Err(CoreError::NotHermitian { residual });
        }
        let min = matrix.min_eigenvalue();
        let max = matrix.max_eigenvalue();
        if min < -EFFECT_TOL {
            return Err(CoreError::InvalidEffect(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        if max > 1.0 + EFFECT_TOL {
            return Err(CoreError::InvalidEffect(format!(
                "eigenvalue {max} exceeds 1"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn zero() -> Self {
        Self {
            matrix: ComplexMatrix::zero(),
        }
    }

    pub fn identity() -> Self {
        Self {
            matrix: ComplexMatrix::identity(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// tr(rho E), clamped to [0, 1] after a small negative-tolerance check.
pub fn born_probability(rho: &DensityMatrix, e: &Effect) -> Result<f64> {
    let p = rho.matrix().trace_product(e.matrix());
    if p < -PROB_TOL * 10.0 {
        return Err(CoreError::NegativeProbability { value: p });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// A labeled measurement; effects must sum to the identity, with an optional
/// inconclusive effect completing the sum.
#[derive(Debug, Clone)]
pub struct Povm {
    outcomes: Vec<(Label, Effect)>,
    inconclusive: Option<Effect>,
}

/// Completeness diagnostics from [`Povm::validate`].
#[derive(Debug, Clone)]
pub struct PovmReport {
    pub deficit_norm: f64,
}

impl Povm {
    pub fn new(outcomes: Vec<(Label, Effect)>, inconclusive: Option<Effect>) -> Result<Self> {
        let povm = Self {
            outcomes,
            inconclusive,
        };
        povm.validate()?;
        Ok(povm)
    }

    /// Builds without the completeness check; callers that assemble a POVM
    /// incrementally validate at the end.
    pub fn new_unchecked(outcomes: Vec<(Label, Effect)>, inconclusive: Option<Effect>) -> Self {
        Self {
            outcomes,
            inconclusive,
        }
    }

    pub fn validate(&self) -> Result<PovmReport> {
        let mut sum = ComplexMatrix::zero();
        for (_, e) in &self.outcomes {
            sum = sum + *e.matrix();
        }
        if let Some(e) = &self.inconclusive {
            sum = sum + *e.matrix();
        }
        let deficit = sum - ComplexMatrix::identity();
        let deficit_norm = deficit.max_entry_norm();
        if deficit_norm > POVM_TOL {
            return Err(CoreError::IncompletePovm { deficit_norm });
        }
        Ok(PovmReport { deficit_norm })
    }

    pub fn outcomes(&self) -> &[(Label, Effect)] {
        &self.outcomes
    }

    pub fn inconclusive(&self) -> Option<&Effect> {
        self.inconclusive.as_ref()
    }

    pub fn effect(&self, label: &str) -> Option<&Effect> {
        self.outcomes
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, e)| e)
    }
}

/// Labeled states with prior probabilities.
#[derive(Debug, Clone)]
pub struct Ensemble {
    labels: Vec<Label>,
    states: Vec<DensityMatrix>,
    priors: Vec<f64>,
}

impl Ensemble {
    pub fn new(entries: Vec<(Label, DensityMatrix, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(CoreError::InvalidEnsemble("empty ensemble".into()));
        }
        let mut labels = Vec::with_capacity(entries.len());
        let mut states = Vec::with_capacity(entries.len());
        let mut priors = Vec::with_capacity(entries.len());
        for (label, state, prior) in entries {
            if labels.contains(&label) {
                return Err(CoreError::InvalidEnsemble(format!(
                    "duplicate label {label:?}"
                )));
            }
            if prior < -PROB_TOL {
                return Err(CoreError::InvalidEnsemble(format!(
                    "negative prior {prior} for {label:?}"
                )));
            }
            labels.push(label);
            states.push(state);
            priors.push(prior.max(0.0));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(CoreError::InvalidEnsemble(format!(
                "priors sum to {total}, not 1"
            )));
        }
        Ok(Self {
            labels,
            states,
            priors,
        })
    }

    pub fn uniform(entries: Vec<(Label, DensityMatrix)>) -> Result<Self> {
        let n = entries.len();
        Self::new(
            entries
                .into_iter()
                .map(|(l, s)| (l, s, 1.0 / n as f64))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn state(&self, i: usize) -> &DensityMatrix {
        &self.states[i]
    }

    pub fn prior(&self, i: usize) -> f64 {
        self.priors[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// q_x rho_x for symbol index i.
    pub fn weighted_state(&self, i: usize) -> ComplexMatrix {
        self.states[i].matrix().scale(self.priors[i])
    }

    /// The ensemble average sum_x q_x rho_x.
    pub fn average(&self) -> DensityMatrix {
        let mut m = ComplexMatrix::zero();
        for i in 0..self.len() {
            m = m + self.weighted_state(i);
        }
        DensityMatrix::new(m).expect("mixture of valid states is a valid state")
    }

    pub fn max_prior(&self) -> f64 {
        self.priors.iter().cloned().fold(0.0, f64::max)
    }

    /// Largest eigenvalue over all states in the ensemble.
    pub fn max_state_eigenvalue(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.matrix().max_eigenvalue())
            .fold(0.0, f64::max)
    }

    /// Sub-ensemble over the given indices with renormalized priors.
    pub fn restrict(&self, indices: &[usize]) -> Result<Ensemble> {
        let total: f64 = indices.iter().map(|&i| self.priors[i]).sum();
        if total <= 0.0 {
            return Err(CoreError::InvalidEnsemble(
                "sub-ensemble has zero total prior".into(),
            ));
        }
        Ensemble::new(
            indices
                .iter()
                .map(|&i| (self.labels[i].clone(), self.states[i], self.priors[i] / total))
                .collect(),
        )
    }
}

/// A disjoint cover of the label set into nonempty blocks, stored as indices
/// into the ensemble's label order.
#[derive(Debug, Clone)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(ensemble: &Ensemble, blocks_by_label: &[Vec<Label>]) -> Result<Self> {
        let mut blocks = Vec::with_capacity(blocks_by_label.len());
        let mut seen = vec![false; ensemble.len()];
        for block in blocks_by_label {
            if block.is_empty() {
                return Err(CoreError::InvalidPartition("empty block".into()));
            }
            let mut indices = Vec::with_capacity(block.len());
            for label in block {
                let i = ensemble.index_of(label).ok_or_else(|| {
                    CoreError::InvalidPartition(format!("unknown label {label:?}"))
                })?;
                if seen[i] {
                    return Err(CoreError::InvalidPartition(format!(
                        "label {label:?} appears in two blocks"
                    )));
                }
                seen[i] = true;
                indices.push(i);
            }
            blocks.push(indices);
        }
        if seen.iter().any(|s| !s) {
            return Err(CoreError::InvalidPartition(
                "blocks do not cover the label set".into(),
            ));
        }
        Ok(Self { blocks })
    }

    pub fn from_indices(ensemble: &Ensemble, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let by_label: Vec<Vec<Label>> = blocks
            .iter()
            .map(|b| b.iter().map(|&i| ensemble.labels()[i].clone()).collect())
            .collect();
        Self::new(ensemble, &by_label)
    }

    /// The trivial one-block partition.
    pub fn single_block(ensemble: &Ensemble) -> Self {
        Self {
            blocks: vec![(0..ensemble.len()).collect()],
        }
    }

    /// Each label alone in its own block.
    pub fn singletons(ensemble: &Ensemble) -> Self {
        Self {
            blocks: (0..ensemble.len()).map(|i| vec![i]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_prior(&self, ensemble: &Ensemble, block: usize) -> f64 {
        self.blocks[block].iter().map(|&i| ensemble.prior(i)).sum()
    }

    /// Unnormalized block state sum_{x in block} q_x rho_x.
    pub fn block_weighted_state(&self, ensemble: &Ensemble, block: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zero();
        for &i in &self.blocks[block] {
            m = m + ensemble.weighted_state(i);
        }
        m
    }

    /// Normalized block state rho_ell.
    pub fn block_state(&self, ensemble: &Ensemble, block: usize) -> DensityMatrix {
        let q = self.block_prior(ensemble, block);
        DensityMatrix::new(self.block_weighted_state(ensemble, block).scale(1.0 / q))
            .expect("block mixture is a valid state")
    }

    pub fn block_of(&self, index: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&index))
            .expect("partition covers all labels")
    }
}

/// Eigenvector-free optimality helper: top eigenprojection of a Hermitian matrix.
pub fn top_eigenprojection(m: &ComplexMatrix) -> Result<(f64, ComplexMatrix)> {
    let eig = eigen_hermitian(m)?;
    Ok((eig.eigenvalues[0], eig.projections[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bloch(v: [f64; 3]) -> DensityMatrix {
        DensityMatrix::from_bloch(v).unwrap()
    }

    #[test]
    fn bloch_round_trip() {
        let rho = bloch([0.0, 0.0, 1.0]);
        assert!((rho.matrix().entry(0, 0).re - 1.0).abs() < 1e-12);
        assert_eq!(rho.bloch(), [0.0, 0.0, 1.0]);
        assert_eq!(bloch([0.0, 0.0, 0.0]).bloch(), [0.0, 0.0, 0.0]);
        let v = [(0.25_f64 * std::f64::consts::PI).sin(), 0.0, (0.25_f64 * std::f64::consts::PI).cos()];
        let rho = bloch(v);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(rho.is_pure(1e-12));
    }

    #[test]
    fn long_bloch_vector_rejected() {
        assert!(DensityMatrix::from_bloch([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn born_probability_examples() {
        let zp = bloch([0.0, 0.0, 1.0]);
        let zm = bloch([0.0, 0.0, -1.0]);
        let e_up = Effect::new(*zp.matrix()).unwrap();
        assert_eq!(born_probability(&zp, &e_up).unwrap(), 1.0);
        assert_eq!(born_probability(&zm, &e_up).unwrap(), 0.0);
        let mixed = bloch([0.0, 0.0, 0.0]);
        let half = Effect::new(ComplexMatrix::identity().scale(0.5)).unwrap();
        assert!((born_probability(&mixed, &half).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn povm_completeness() {
        let half = Effect::new(ComplexMatrix::identity().scale(0.5)).unwrap();
        assert!(Povm::new(vec![("a".into(), half), ("b".into(), half)], None).is_ok());

        let bad = Povm::new_unchecked(
            vec![("a".into(), Effect::identity()), ("b".into(), half)],
            None,
        );
        match bad.validate() {
            Err(CoreError::IncompletePovm { deficit_norm }) => {
                assert!((deficit_norm - 0.5).abs() < 1e-12)
            }
            other => panic!("expected completeness failure, got {other:?}"),
        }
    }

    #[test]
    fn ensemble_average_of_bb84_is_maximally_mixed() {
        let e = Ensemble::uniform(vec![
            ("1+".into(), bloch([0.0, 0.0, 1.0])),
            ("1-".into(), bloch([0.0, 0.0, -1.0])),
            ("2+".into(), bloch([1.0, 0.0, 0.0])),
            ("2-".into(), bloch([-1.0, 0.0, 0.0])),
        ])
        .unwrap();
        let avg = e.average();
        assert!((avg.matrix().entry(0, 0).re - 0.5).abs() < 1e-12);
        assert!(avg.bloch().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn partition_validation() {
        let e = Ensemble::uniform(vec![
            ("a".into(), bloch([0.0, 0.0, 1.0])),
            ("b".into(), bloch([0.0, 0.0, -1.0])),
        ])
        .unwrap();
        assert!(Partition::new(&e, &[vec!["a".into()], vec!["b".into()]]).is_ok());
        assert!(Partition::new(&e, &[vec!["a".into()], vec!["a".into(), "b".into()]]).is_err());
        assert!(Partition::new(&e, &[vec!["a".into()]]).is_err());
        assert!(Partition::new(&e, &[vec![], vec!["a".into(), "b".into()]]).is_err());
    }
}
