use serde::{Deserialize, Serialize};

use crate::env::Arm;
use crate::rng::Stream;

use super::Learner;

/// Hyperparameters of the linear-features pricing oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearUcbSettings {
    /// Number of equally spaced candidate prices on the domain.
    pub grid_points: usize,
    /// Ridge regularization λ.
    pub regularization: f64,
    /// Additive constant in the confidence width √(2 ln t) + offset.
    pub width_offset: f64,
    /// C₁ reported for this oracle.
    pub c1: f64,
}

impl Default for LinearUcbSettings {
    fn default() -> Self {
        LinearUcbSettings {
            grid_points: 401,
            regularization: 1.0,
            width_offset: 1.0,
            c1: 1.0,
        }
    }
}

/// Optimism over a ridge-regression confidence ellipsoid for revenue
/// θ·φ(p) with θ = (g, h) and φ(p) = (p, −p²).
#[derive(Debug, Clone)]
pub struct LinearUcb {
    prices: Vec<f64>,
    // V = λI + Σ φφᵀ (symmetric 2×2), b = Σ φ·y
    v11: f64,
    v12: f64,
    v22: f64,
    b1: f64,
    b2: f64,
    steps: u64,
    width_offset: f64,
}

impl LinearUcb {
    pub fn new(lo: f64, hi: f64, settings: &LinearUcbSettings) -> Self {
        let n = settings.grid_points.max(2);
        let prices = (0..n)
            .map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64)
            .collect();
        LinearUcb {
            prices,
            v11: settings.regularization,
            v12: 0.0,
            v22: settings.regularization,
            b1: 0.0,
            b2: 0.0,
            steps: 0,
            width_offset: settings.width_offset,
        }
    }

    fn features(p: f64) -> (f64, f64) {
        (p, -p * p)
    }

    /// Ridge estimate of (g, h).
    pub fn estimate(&self) -> (f64, f64) {
        let det = self.v11 * self.v22 - self.v12 * self.v12;
        (
            (self.v22 * self.b1 - self.v12 * self.b2) / det,
            (self.v11 * self.b2 - self.v12 * self.b1) / det,
        )
    }

    pub fn choose(&self) -> usize {
        let det = self.v11 * self.v22 - self.v12 * self.v12;
        let (i11, i12, i22) = (self.v22 / det, -self.v12 / det, self.v11 / det);
        let (g, h) = self.estimate();
        let t = (self.steps + 1) as f64;
        let width = (2.0 * t.ln()).sqrt() + self.width_offset;
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (j, &p) in self.prices.iter().enumerate() {
            let (f1, f2) = Self::features(p);
            let quad = f1 * f1 * i11 + 2.0 * f1 * f2 * i12 + f2 * f2 * i22;
            let v = g * f1 + h * f2 + width * quad.max(0.0).sqrt();
            if v > best_val {
                best_val = v;
                best = j;
            }
        }
        best
    }

    pub fn update(&mut self, price: f64, reward: f64) {
        let (f1, f2) = Self::features(price);
        self.v11 += f1 * f1;
        self.v12 += f1 * f2;
        self.v22 += f2 * f2;
        self.b1 += f1 * reward;
        self.b2 += f2 * reward;
        self.steps += 1;
    }
}

impl Learner for LinearUcb {
    fn select(&mut self, _rng: &mut Stream) -> Arm {
        Arm::Point(vec![self.prices[self.choose()]])
    }

    fn observe(&mut self, arm: &Arm, reward: f64) {
        self.update(arm.point().expect("price arm")[0], reward);
    }
}
