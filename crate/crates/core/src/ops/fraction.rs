use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Aggregator, OpsError};

/// Monte-Carlo estimate of the fraction of `[0,1]^n` on which at least one
/// partial derivative of `kind` is nonzero.
pub fn nonvanishing_fraction_mc(
    kind: Aggregator,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<f64, OpsError> {
    if n < 2 || samples == 0 {
        return Err(OpsError::InvalidSampling { n, samples });
    }
    kind.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = vec![0.0; n];
    let mut hits = 0usize;
    for _ in 0..samples {
        for x in xs.iter_mut() {
            *x = rng.random::<f64>();
        }
        if kind.grad(&xs).grad.iter().any(|g| *g != 0.0) {
            hits += 1;
        }
    }
    Ok(hits as f64 / samples as f64)
}
