use crate::env::Arm;
use crate::rng::Stream;

use super::Learner;

/// Epoch-based trisection for one-dimensional concave rewards.
///
/// Each epoch pulls l + w/4, l + w/2 and l + 3w/4 in round robin. After every
/// full cycle of n pulls per point, an endpoint whose confidence interval
/// (radius √(2 ln t / n), t the session horizon) lies entirely below another
/// point's is provably worse, and the quarter next to it cannot contain the
/// maximizer of a concave function. Dropping a quarter starts a new epoch.
#[derive(Debug, Clone)]
pub struct EpochTrisection {
    lo: f64,
    hi: f64,
    log_horizon: f64,
    counts: [u64; 3],
    sums: [f64; 3],
    next: usize,
    epochs: u64,
}

const MIN_WIDTH: f64 = 1e-12;

impl EpochTrisection {
    pub fn new(lo: f64, hi: f64, horizon: u64) -> Self {
        EpochTrisection {
            lo,
            hi,
            log_horizon: (horizon.max(2) as f64).ln(),
            counts: [0; 3],
            sums: [0.0; 3],
            next: 0,
            epochs: 0,
        }
    }

    /// Current working interval.
    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Completed epochs (interval reductions so far).
    pub fn epochs(&self) -> u64 {
        self.epochs
    }

    fn point(&self, j: usize) -> f64 {
        self.lo + (self.hi - self.lo) * (j + 1) as f64 / 4.0
    }

    fn try_shrink(&mut self) {
        let n = self.counts[0] as f64;
        let rad = (2.0 * self.log_horizon / n).sqrt();
        let mean = |j: usize| self.sums[j] / n;
        let below = |a: usize, b: usize| mean(a) + rad < mean(b) - rad;
        let drop_left = below(0, 1) || below(0, 2);
        let drop_right = below(2, 1) || below(2, 0);
        if !(drop_left || drop_right) || self.hi - self.lo < MIN_WIDTH {
            return;
        }
        let (l1, l3) = (self.point(0), self.point(2));
        if drop_left {
            self.lo = l1;
        }
        if drop_right {
            self.hi = l3;
        }
        self.counts = [0; 3];
        self.sums = [0.0; 3];
        self.epochs += 1;
    }
}

impl Learner for EpochTrisection {
    fn select(&mut self, _rng: &mut Stream) -> Arm {
        Arm::Point(vec![self.point(self.next)])
    }

    fn observe(&mut self, _arm: &Arm, reward: f64) {
        self.counts[self.next] += 1;
        self.sums[self.next] += reward;
        self.next = (self.next + 1) % 3;
        if self.next == 0 {
            self.try_shrink();
        }
    }
}
