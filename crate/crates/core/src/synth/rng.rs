use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::SynthError;

#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub(crate) enum Stream {
    UnigramPseudoCounts = 1,
    BigramPseudoCounts = 2,
    Document = 3,
    Query = 4,
}

/// An independent generator for item `index` of `stream`.
pub(crate) fn stream_rng(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((stream as u64) << 48) | index);
    rng
}

/// Rate of a Poisson whose zero-truncated mean is `mean`, i.e. the root of
/// `rate / (1 - exp(-rate)) = mean`. Requires `mean > 1`.
pub(crate) fn zero_truncated_rate(mean: f64) -> f64 {
    // g is convex and positive at `mean`, so Newton descends monotonically.
    let mut rate = mean;
    for _ in 0..100 {
        let e = (-rate).exp();
        let g = rate - mean * (1.0 - e);
        let step = g / (1.0 - mean * e);
        rate -= step;
        if step.abs() <= 1e-14 * rate {
            break;
        }
    }
    rate
}

/// Lengths >= 1 from a zero-truncated Poisson with the requested mean.
#[derive(Debug, Clone)]
pub(crate) struct LengthSampler {
    poisson: Poisson<f64>,
}

impl LengthSampler {
    pub(crate) fn with_mean(mean: f64) -> Result<Self, SynthError> {
        if !(mean > 1.0 && mean.is_finite()) {
            return Err(SynthError::InvalidConfig(format!(
                "mean length must be finite and > 1, got {mean}"
            )));
        }
        let poisson = Poisson::new(zero_truncated_rate(mean))
            .map_err(|e| SynthError::InvalidConfig(e.to_string()))?;
        Ok(Self { poisson })
    }

    pub(crate) fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> usize {
        loop {
            let n = self.poisson.sample(rng) as usize;
            if n > 0 {
                return n;
            }
        }
    }
}
