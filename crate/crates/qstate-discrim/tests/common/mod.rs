use qstate_core::{DensityMatrix, Ensemble, Partition};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_bloch_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Random pure-state ensemble with n states; uniform or random priors.
pub fn random_pure_ensemble(rng: &mut ChaCha8Rng, n: usize, uniform: bool) -> Ensemble {
    let mut priors: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = priors.iter().sum();
    for p in priors.iter_mut() {
        *p /= total;
    }
    let entries: Vec<_> = (0..n)
        .map(|i| {
            let state = DensityMatrix::from_bloch(random_bloch_unit(rng)).unwrap();
            let q = if uniform { 1.0 / n as f64 } else { priors[i] };
            (format!("s{i}"), state, q)
        })
        .collect();
    Ensemble::new(entries).unwrap()
}

/// Random two-block partition with nonempty blocks.
pub fn random_partition(rng: &mut ChaCha8Rng, e: &Ensemble) -> Partition {
    let n = e.len();
    loop {
        let mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        if mask.iter().any(|&b| b) && mask.iter().any(|&b| !b) {
            let a: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
            let b: Vec<usize> = (0..n).filter(|&i| !mask[i]).collect();
            return Partition::from_indices(e, vec![a, b]).unwrap();
        }
    }
}
