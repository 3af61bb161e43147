use rand::Rng;
use rand_distr::StandardNormal;

use crate::env::Arm;
use crate::rng::Stream;

use super::Learner;

/// Gaussian Thompson sampling with an N(0, 1) prior and unit-variance
/// likelihood: arm k's posterior is N(sum_k / (n_k + 1), 1 / (n_k + 1)).
#[derive(Debug, Clone)]
pub struct GaussianThompson {
    counts: Vec<u64>,
    sums: Vec<f64>,
}

impl GaussianThompson {
    pub fn new(num_arms: usize) -> Self {
        assert!(num_arms > 0, "Thompson sampling needs at least one arm");
        GaussianThompson {
            counts: vec![0; num_arms],
            sums: vec![0.0; num_arms],
        }
    }

    pub fn choose(&self, rng: &mut Stream) -> usize {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (k, (&n, &s)) in self.counts.iter().zip(&self.sums).enumerate() {
            let prec = n as f64 + 1.0;
            let z: f64 = rng.sample(StandardNormal);
            let v = s / prec + z / prec.sqrt();
            if v > best_val {
                best_val = v;
                best = k;
            }
        }
        best
    }

    pub fn update(&mut self, arm: usize, reward: f64) {
        self.counts[arm] += 1;
        self.sums[arm] += reward;
    }
}

impl Learner for GaussianThompson {
    fn select(&mut self, rng: &mut Stream) -> Arm {
        Arm::Index(self.choose(rng))
    }

    fn observe(&mut self, arm: &Arm, reward: f64) {
        self.update(arm.index().expect("finite arm"), reward);
    }
}
