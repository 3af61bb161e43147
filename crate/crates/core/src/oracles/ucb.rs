use crate::env::Arm;
use crate::rng::Stream;

use super::Learner;

/// UCB over K arms with index μ̂_k + √(2·ln(1 + t·ln²t) / n_k).
///
/// One initialization pull per arm in index order, then the largest index
/// wins with ties going to the lowest arm.
#[derive(Debug, Clone)]
pub struct FiniteUcb {
    counts: Vec<u64>,
    sums: Vec<f64>,
    steps: u64,
}

impl FiniteUcb {
    pub fn new(num_arms: usize) -> Self {
        assert!(num_arms > 0, "UCB needs at least one arm");
        FiniteUcb {
            counts: vec![0; num_arms],
            sums: vec![0.0; num_arms],
            steps: 0,
        }
    }

    pub fn num_arms(&self) -> usize {
        self.counts.len()
    }

    /// Exploration bonus numerator log(1 + t·log²t) at step t.
    fn log_f(t: f64) -> f64 {
        let lt = t.ln();
        (1.0 + t * lt * lt).ln()
    }

    /// Index values for the next step; `None` while the arm is unpulled.
    pub fn indices(&self) -> Vec<Option<f64>> {
        let log_f = Self::log_f((self.steps + 1) as f64);
        self.counts
            .iter()
            .zip(&self.sums)
            .map(|(&n, &s)| {
                (n > 0).then(|| {
                    let n = n as f64;
                    s / n + (2.0 * log_f / n).sqrt()
                })
            })
            .collect()
    }

    pub fn choose(&self) -> usize {
        if let Some(k) = self.counts.iter().position(|&n| n == 0) {
            return k;
        }
        let log_f = Self::log_f((self.steps + 1) as f64);
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (k, (&n, &s)) in self.counts.iter().zip(&self.sums).enumerate() {
            let n = n as f64;
            let v = s / n + (2.0 * log_f / n).sqrt();
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
        self.steps += 1;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

impl Learner for FiniteUcb {
    fn select(&mut self, _rng: &mut Stream) -> Arm {
        Arm::Index(self.choose())
    }

    fn observe(&mut self, arm: &Arm, reward: f64) {
        self.update(arm.index().expect("finite arm"), reward);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_sweep_then_highest_index() {
        let mut ucb = FiniteUcb::new(4);
        for (k, y) in [0.0, 0.0, 0.0, 1.0].into_iter().enumerate() {
            assert_eq!(ucb.choose(), k);
            ucb.update(k, y);
        }
        assert_eq!(ucb.choose(), 3);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let mut ucb = FiniteUcb::new(3);
        for k in 0..3 {
            ucb.update(k, 0.5);
        }
        assert_eq!(ucb.choose(), 0);
    }

    #[test]
    fn hand_computed_index() {
        let mut ucb = FiniteUcb::new(2);
        ucb.update(0, 1.0);
        ucb.update(1, 0.0);
        // next step t = 3: ln(1 + 3·ln²3)
        let lf = (1.0 + 3.0 * 3f64.ln().powi(2)).ln();
        let idx = ucb.indices();
        assert!((idx[0].unwrap() - (1.0 + (2.0 * lf).sqrt())).abs() < 1e-15);
        assert!((idx[1].unwrap() - (2.0 * lf).sqrt()).abs() < 1e-15);
    }
}
