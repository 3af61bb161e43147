//! Bandit environments: arm spaces, mean-reward functions, Gaussian
//! observation noise, and the regret ledger computed from run traces.

use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Stream;

/// An arm: an index into a finite arm set, or a point of a continuum box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Arm {
    Index(usize),
    Point(Vec<f64>),
}

impl Arm {
    pub fn index(&self) -> Option<usize> {
        match self {
            Arm::Index(k) => Some(*k),
            Arm::Point(_) => None,
        }
    }

    pub fn point(&self) -> Option<&[f64]> {
        match self {
            Arm::Index(_) => None,
            Arm::Point(p) => Some(p),
        }
    }
}

impl std::fmt::Display for Arm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Arm::Index(k) => write!(f, "{k}"),
            Arm::Point(p) => {
                let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(";"))
            }
        }
    }
}

/// How revenue noise enters a linear-pricing observation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PricingNoise {
    /// Revenue p·(g − h·p + σε): the demand is noisy, so revenue noise scales with p.
    #[default]
    PriceScaled,
    /// Revenue p·(g − h·p) + σε.
    Additive,
}

/// Structural class and closed-form parameters of a mean-reward function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    /// K arms with the given means.
    Finite { means: Vec<f64> },
    /// r(x) = peak − curvature·(x − center)² on [lo, hi].
    Concave1d {
        peak: f64,
        curvature: f64,
        center: f64,
        lo: f64,
        hi: f64,
    },
    /// r(x) = min{cap, scale·exp(−bandwidth·‖x − center‖₂²)} on [0,1]^d,
    /// Lipschitz with constant `lipschitz` in the ∞-norm.
    Lipschitz {
        scale: f64,
        bandwidth: f64,
        center: Vec<f64>,
        cap: f64,
        lipschitz: f64,
    },
    /// Revenue p·(g − h·p) for a price p in [price_lo, price_hi].
    LinearPricing {
        g: f64,
        h: f64,
        price_lo: f64,
        price_hi: f64,
        #[serde(default)]
        noise: PricingNoise,
    },
}

fn default_noise_std() -> f64 {
    1.0
}

/// A bandit instance. Immutable once built; share it freely across replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardModel {
    #[serde(flatten)]
    pub kind: ModelKind,
    /// Standard deviation of the Gaussian observation noise.
    #[serde(default = "default_noise_std")]
    pub noise_std: f64,
}

/// Avocado-calibrated demand intercept and slope (weekly volume units) and
/// the residual standard deviation used to normalize them.
pub const PRICING_G: f64 = 32724.0;
pub const PRICING_H: f64 = 7678.0;
pub const PRICING_SIGMA: f64 = 4100.0;

impl RewardModel {
    pub fn new(kind: ModelKind, noise_std: f64) -> Result<Self> {
        let model = RewardModel { kind, noise_std };
        model.validate()?;
        Ok(model)
    }

    pub fn finite(means: Vec<f64>) -> Result<Self> {
        Self::new(ModelKind::Finite { means }, 1.0)
    }

    /// r(x) = 1 − 16(x − 0.25)² on [0, 1].
    pub fn concave_parabola() -> Self {
        RewardModel {
            kind: ModelKind::Concave1d {
                peak: 1.0,
                curvature: 16.0,
                center: 0.25,
                lo: 0.0,
                hi: 1.0,
            },
            noise_std: 1.0,
        }
    }

    /// f(x, y) = min{1, 3·exp(−100((x − 0.5)² + (y − 0.7)²))} on [0,1]².
    pub fn lipschitz_bump() -> Self {
        let (scale, bandwidth, d) = (3.0, 100.0, 2.0);
        RewardModel {
            kind: ModelKind::Lipschitz {
                scale,
                bandwidth,
                center: vec![0.5, 0.7],
                cap: 1.0,
                lipschitz: radial_gaussian_lipschitz(scale, bandwidth, d),
            },
            noise_std: 1.0,
        }
    }

    /// Linear-demand pricing with unit-variance normalized coefficients, p ∈ [0, 4].
    pub fn avocado_pricing() -> Self {
        RewardModel {
            kind: ModelKind::LinearPricing {
                g: PRICING_G / PRICING_SIGMA,
                h: PRICING_H / PRICING_SIGMA,
                price_lo: 0.0,
                price_hi: 4.0,
                noise: PricingNoise::PriceScaled,
            },
            noise_std: 1.0,
        }
    }

    pub fn with_noise_std(mut self, noise_std: f64) -> Self {
        self.noise_std = noise_std;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(Error::Config(format!(
                "noise_std must be finite and >= 0, got {}",
                self.noise_std
            )));
        }
        match &self.kind {
            ModelKind::Finite { means } => {
                if means.is_empty() {
                    return Err(Error::Config("finite model needs at least one arm".into()));
                }
                if means.iter().any(|m| !m.is_finite()) {
                    return Err(Error::Config("finite means must be finite".into()));
                }
            }
            ModelKind::Concave1d {
                curvature, lo, hi, ..
            } => {
                if *curvature < 0.0 {
                    return Err(Error::Config("concave model needs curvature >= 0".into()));
                }
                if lo.partial_cmp(hi) != Some(std::cmp::Ordering::Less) {
                    return Err(Error::Config(format!("empty domain [{lo}, {hi}]")));
                }
            }
            ModelKind::Lipschitz {
                center,
                bandwidth,
                lipschitz,
                ..
            } => {
                if center.is_empty() {
                    return Err(Error::Config("lipschitz model needs dimension >= 1".into()));
                }
                if *bandwidth < 0.0 || *lipschitz <= 0.0 {
                    return Err(Error::Config(
                        "lipschitz model needs bandwidth >= 0 and lipschitz > 0".into(),
                    ));
                }
            }
            ModelKind::LinearPricing {
                price_lo, price_hi, ..
            } => {
                if price_lo.partial_cmp(price_hi) != Some(std::cmp::Ordering::Less) {
                    return Err(Error::Config(format!(
                        "empty price domain [{price_lo}, {price_hi}]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of arms for finite models.
    pub fn num_arms(&self) -> Option<usize> {
        match &self.kind {
            ModelKind::Finite { means } => Some(means.len()),
            _ => None,
        }
    }

    /// Dimension of the continuum arm space (0 for finite models).
    pub fn dimension(&self) -> usize {
        match &self.kind {
            ModelKind::Finite { .. } => 0,
            ModelKind::Concave1d { .. } | ModelKind::LinearPricing { .. } => 1,
            ModelKind::Lipschitz { center, .. } => center.len(),
        }
    }

    /// Per-coordinate domain box of a continuum model.
    pub fn domain(&self) -> Vec<(f64, f64)> {
        match &self.kind {
            ModelKind::Finite { .. } => Vec::new(),
            ModelKind::Concave1d { lo, hi, .. } => vec![(*lo, *hi)],
            ModelKind::Lipschitz { center, .. } => vec![(0.0, 1.0); center.len()],
            ModelKind::LinearPricing {
                price_lo, price_hi, ..
            } => vec![(*price_lo, *price_hi)],
        }
    }

    pub fn declared_lipschitz(&self) -> Option<f64> {
        match &self.kind {
            ModelKind::Lipschitz { lipschitz, .. } => Some(*lipschitz),
            _ => None,
        }
    }

    pub fn check_arm(&self, arm: &Arm) -> Result<()> {
        match (&self.kind, arm) {
            (ModelKind::Finite { means }, Arm::Index(k)) => {
                if *k < means.len() {
                    Ok(())
                } else {
                    Err(Error::InvalidArm(format!(
                        "index {k} out of range for {} arms",
                        means.len()
                    )))
                }
            }
            (ModelKind::Finite { .. }, Arm::Point(_)) => Err(Error::InvalidArm(
                "finite model expects an arm index".into(),
            )),
            (_, Arm::Index(_)) => Err(Error::InvalidArm(
                "continuum model expects a point".into(),
            )),
            (_, Arm::Point(p)) => {
                let dom = self.domain();
                if p.len() != dom.len() {
                    return Err(Error::InvalidArm(format!(
                        "point has dimension {}, model has {}",
                        p.len(),
                        dom.len()
                    )));
                }
                for (x, (lo, hi)) in p.iter().zip(&dom) {
                    if !(x >= lo && x <= hi) {
                        return Err(Error::InvalidArm(format!(
                            "coordinate {x} outside [{lo}, {hi}]"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Noise-free mean reward r(arm).
    pub fn mean_reward(&self, arm: &Arm) -> Result<f64> {
        self.check_arm(arm)?;
        Ok(self.mean_unchecked(arm))
    }

    pub(crate) fn mean_unchecked(&self, arm: &Arm) -> f64 {
        match (&self.kind, arm) {
            (ModelKind::Finite { means }, Arm::Index(k)) => means[*k],
            (
                ModelKind::Concave1d {
                    peak,
                    curvature,
                    center,
                    ..
                },
                Arm::Point(p),
            ) => {
                let dx = p[0] - center;
                peak - curvature * dx * dx
            }
            (
                ModelKind::Lipschitz {
                    scale,
                    bandwidth,
                    center,
                    cap,
                    ..
                },
                Arm::Point(p),
            ) => {
                let d2: f64 = p.iter().zip(center).map(|(x, c)| (x - c) * (x - c)).sum();
                cap.min(scale * (-bandwidth * d2).exp())
            }
            (ModelKind::LinearPricing { g, h, .. }, Arm::Point(p)) => {
                let price = p[0];
                price * (g - h * price)
            }
            _ => unreachable!("arm kind checked against model kind"),
        }
    }

    /// One noisy observation of `arm`.
    pub fn pull(&self, arm: &Arm, rng: &mut Stream) -> Result<f64> {
        self.check_arm(arm)?;
        Ok(self.pull_unchecked(arm, rng))
    }

    pub(crate) fn pull_unchecked(&self, arm: &Arm, rng: &mut Stream) -> f64 {
        let eps: f64 = rng.sample(StandardNormal);
        match (&self.kind, arm) {
            (
                ModelKind::LinearPricing {
                    g,
                    h,
                    noise: PricingNoise::PriceScaled,
                    ..
                },
                Arm::Point(p),
            ) => {
                let price = p[0];
                price * (g - h * price + self.noise_std * eps)
            }
            _ => self.mean_unchecked(arm) + self.noise_std * eps,
        }
    }

    /// The maximizing arm and its mean.
    ///
    /// Finite models scan (ties to the lowest index). Parabolic models use the
    /// vertex clipped to the domain. The radial Lipschitz bump is maximized by
    /// the box projection of its center, since its value decreases with
    /// Euclidean distance to the center.
    pub fn best_mean(&self) -> (Arm, f64) {
        match &self.kind {
            ModelKind::Finite { means } => {
                let mut best = 0;
                for (k, m) in means.iter().enumerate() {
                    if *m > means[best] {
                        best = k;
                    }
                }
                (Arm::Index(best), means[best])
            }
            ModelKind::Concave1d {
                curvature,
                center,
                lo,
                hi,
                ..
            } => {
                let x = if *curvature == 0.0 { *lo } else { center.clamp(*lo, *hi) };
                let arm = Arm::Point(vec![x]);
                let v = self.mean_unchecked(&arm);
                (arm, v)
            }
            ModelKind::Lipschitz { center, .. } => {
                let arm = Arm::Point(center.iter().map(|c| c.clamp(0.0, 1.0)).collect());
                let v = self.mean_unchecked(&arm);
                (arm, v)
            }
            ModelKind::LinearPricing {
                g,
                h,
                price_lo,
                price_hi,
                ..
            } => {
                let p = if *h > 0.0 {
                    (g / (2.0 * h)).clamp(*price_lo, *price_hi)
                } else {
                    // revenue is convex or linear in p: an endpoint is optimal
                    let lo = price_lo * (g - h * price_lo);
                    let hi = price_hi * (g - h * price_hi);
                    if hi > lo {
                        *price_hi
                    } else {
                        *price_lo
                    }
                };
                let arm = Arm::Point(vec![p]);
                let v = self.mean_unchecked(&arm);
                (arm, v)
            }
        }
    }

    /// An arm drawn uniformly from the arm space.
    pub fn sample_uniform_arm(&self, rng: &mut Stream) -> Arm {
        match &self.kind {
            ModelKind::Finite { means } => Arm::Index(rng.random_range(0..means.len())),
            _ => Arm::Point(
                self.domain()
                    .into_iter()
                    .map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>())
                    .collect(),
            ),
        }
    }

    /// Satisficing gap Δ_S = min{S − r(A) : r(A) < S}.
    ///
    /// Exact for finite models. For continuum models a grid probe reports 0
    /// when some probed mean lies within 1e-3 below S, and `None` otherwise.
    pub fn satisficing_gap(&self, level: f64) -> Option<f64> {
        match &self.kind {
            ModelKind::Finite { means } => means
                .iter()
                .filter(|&&m| m < level)
                .map(|m| level - m)
                .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d)))),
            _ => {
                const BAND: f64 = 1e-3;
                let dom = self.domain();
                let per_axis = if dom.len() == 1 { 100_001 } else { 401 };
                let mut idx = vec![0usize; dom.len()];
                let mut point = vec![0.0; dom.len()];
                loop {
                    for (j, (lo, hi)) in dom.iter().enumerate() {
                        point[j] = lo + (hi - lo) * idx[j] as f64 / (per_axis - 1) as f64;
                    }
                    let m = self.mean_unchecked(&Arm::Point(point.clone()));
                    if m < level && m >= level - BAND {
                        return Some(0.0);
                    }
                    // odometer increment
                    let mut j = 0;
                    loop {
                        if j == idx.len() {
                            return None;
                        }
                        idx[j] += 1;
                        if idx[j] < per_axis {
                            break;
                        }
                        idx[j] = 0;
                        j += 1;
                    }
                }
            }
        }
    }
}

/// ∞-norm Lipschitz constant of x ↦ scale·exp(−bandwidth·‖x − c‖₂²) in d dimensions.
///
/// The gradient's ℓ1 norm is at most √d times its ℓ2 norm, which peaks at
/// scale·√(2·bandwidth)·e^{−1/2}.
pub fn radial_gaussian_lipschitz(scale: f64, bandwidth: f64, d: f64) -> f64 {
    scale * (2.0 * bandwidth).sqrt() * d.sqrt() * (-0.5f64).exp()
}

/// Which part of a round produced a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    OracleStep,
    ForcedSample,
    LcbTest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    /// 1-based time index.
    pub t: u64,
    pub arm: Arm,
    pub reward: f64,
    pub phase: Phase,
    /// 1-based round index.
    pub round: u32,
}

/// Per-step record of one simulated episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub horizon: u64,
    pub steps: Vec<Step>,
}

impl RunTrace {
    pub fn new(horizon: u64) -> Self {
        RunTrace {
            horizon,
            steps: Vec::with_capacity(horizon.min(1 << 24) as usize),
        }
    }

    pub fn push(&mut self, arm: Arm, reward: f64, phase: Phase, round: u32) {
        let t = self.steps.len() as u64 + 1;
        self.steps.push(Step {
            t,
            arm,
            reward,
            phase,
            round,
        });
    }

    pub fn len(&self) -> u64 {
        self.steps.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.len() >= self.horizon
    }

    pub fn remaining(&self) -> u64 {
        self.horizon.saturating_sub(self.len())
    }

    /// Highest round index that produced at least one step.
    pub fn rounds_used(&self) -> u32 {
        self.steps.last().map_or(0, |s| s.round)
    }

    /// Checks the structural invariants: exactly `horizon` steps, t = 1..=T,
    /// non-decreasing rounds starting at 1.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.len() != self.horizon {
            return Err(format!("{} steps for horizon {}", self.len(), self.horizon));
        }
        let mut prev_round = 1;
        for (i, s) in self.steps.iter().enumerate() {
            if s.t != i as u64 + 1 {
                return Err(format!("step {i} has t = {}", s.t));
            }
            if s.round < prev_round {
                return Err(format!("round decreased at t = {}", s.t));
            }
            prev_round = s.round;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRegret {
    pub round: u32,
    pub satisficing_regret: f64,
    pub oracle_steps: u64,
    pub forced_steps: u64,
    pub test_steps: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretSummary {
    pub satisficing_regret: f64,
    pub standard_regret: f64,
    pub per_round: Vec<RoundRegret>,
    pub satisficing_level: f64,
    pub best_mean: f64,
    /// r(A*) − S; negative when no arm reaches the level.
    pub exceeding_gap: f64,
    /// Δ_S for finite models; `None` for continuum models or when every arm satisfices.
    pub satisficing_gap: Option<f64>,
}

/// Satisficing and standard regret of `trace` against `model`.
pub fn summarize(model: &RewardModel, trace: &RunTrace, level: f64) -> Result<RegretSummary> {
    let (_, best) = model.best_mean();
    let mut sat = 0.0;
    let mut collected = 0.0;
    let mut per_round: Vec<RoundRegret> = Vec::new();
    for step in &trace.steps {
        let m = model.mean_reward(&step.arm)?;
        let deficit = (level - m).max(0.0);
        sat += deficit;
        collected += m;
        if per_round.last().is_none_or(|r| r.round != step.round) {
            per_round.push(RoundRegret {
                round: step.round,
                satisficing_regret: 0.0,
                oracle_steps: 0,
                forced_steps: 0,
                test_steps: 0,
            });
        }
        let entry = per_round.last_mut().expect("pushed above");
        entry.satisficing_regret += deficit;
        match step.phase {
            Phase::OracleStep => entry.oracle_steps += 1,
            Phase::ForcedSample => entry.forced_steps += 1,
            Phase::LcbTest => entry.test_steps += 1,
        }
    }
    let standard = trace.len() as f64 * best - collected;
    let satisficing_gap = match model.kind {
        ModelKind::Finite { .. } => model.satisficing_gap(level),
        _ => None,
    };
    Ok(RegretSummary {
        satisficing_regret: sat,
        standard_regret: standard,
        per_round,
        satisficing_level: level,
        best_mean: best,
        exceeding_gap: best - level,
        satisficing_gap,
    })
}

/// An instance file: a reward model plus its satisficing level.
///
/// ```json
/// {"kind": "finite", "means": [0.6, 0.7, 0.8, 1.0], "noise_std": 1.0, "satisficing_level": 0.93}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(flatten)]
    pub model: RewardModel,
    pub satisficing_level: f64,
}

impl InstanceFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let inst: InstanceFile = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        inst.model.validate()?;
        Ok(inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn karm() -> RewardModel {
        RewardModel::finite(vec![0.6, 0.7, 0.8, 1.0]).unwrap()
    }

    fn trace_of(arms: &[Arm]) -> RunTrace {
        let mut tr = RunTrace::new(arms.len() as u64);
        for a in arms {
            tr.push(a.clone(), 0.0, Phase::OracleStep, 1);
        }
        tr
    }

    #[test]
    fn mean_reward_examples() {
        assert_eq!(karm().mean_reward(&Arm::Index(3)).unwrap(), 1.0);
        let c = RewardModel::concave_parabola();
        assert_eq!(c.mean_reward(&Arm::Point(vec![0.25])).unwrap(), 1.0);
        let l = RewardModel::lipschitz_bump();
        assert_eq!(l.mean_reward(&Arm::Point(vec![0.5, 0.7])).unwrap(), 1.0);
        let p = RewardModel::avocado_pricing();
        let v = p.mean_reward(&Arm::Point(vec![2.0])).unwrap();
        // 2·(32724 − 2·7678)/4100 = 34736/4100
        assert!((v - 8.472_195_121_951_22).abs() < 1e-12);
    }

    #[test]
    fn invalid_arms_are_domain_errors() {
        assert!(matches!(
            karm().mean_reward(&Arm::Index(4)),
            Err(Error::InvalidArm(_))
        ));
        let l = RewardModel::lipschitz_bump();
        assert!(l.mean_reward(&Arm::Point(vec![1.2, 0.5])).is_err());
        assert!(l.mean_reward(&Arm::Point(vec![0.5])).is_err());
        assert!(l.mean_reward(&Arm::Index(0)).is_err());
        assert!(karm().mean_reward(&Arm::Point(vec![0.0])).is_err());
    }

    #[test]
    fn zero_noise_pull_is_exact() {
        let mut rng = stream(1);
        let m = karm().with_noise_std(0.0);
        for k in 0..4 {
            let arm = Arm::Index(k);
            assert_eq!(m.pull(&arm, &mut rng).unwrap(), m.mean_reward(&arm).unwrap());
        }
    }

    #[test]
    fn zero_price_revenue_is_zero() {
        let mut rng = stream(2);
        let p = RewardModel::avocado_pricing();
        for _ in 0..100 {
            assert_eq!(p.pull(&Arm::Point(vec![0.0]), &mut rng).unwrap(), 0.0);
        }
    }

    #[test]
    fn empirical_mean_of_pulls() {
        let m = RewardModel::finite(vec![0.5]).unwrap();
        let mut rng = stream(3);
        let n = 100_000;
        let s: f64 = (0..n).map(|_| m.pull(&Arm::Index(0), &mut rng).unwrap()).sum();
        assert!((s / n as f64 - 0.5).abs() < 0.02);
    }

    #[test]
    fn best_mean_examples() {
        assert_eq!(karm().best_mean(), (Arm::Index(3), 1.0));
        let (arm, v) = RewardModel::concave_parabola().best_mean();
        assert_eq!(arm, Arm::Point(vec![0.25]));
        assert_eq!(v, 1.0);
        let (arm, v) = RewardModel::avocado_pricing().best_mean();
        let p = arm.point().unwrap()[0];
        assert!((p - 2.131_023_704_089_606).abs() < 1e-9);
        assert!((v - 8.504_3).abs() < 1e-4);
    }

    #[test]
    fn summarize_examples() {
        let m = karm();
        let s = summarize(&m, &trace_of(&[Arm::Index(0), Arm::Index(3)]), 0.93).unwrap();
        assert!((s.satisficing_regret - 0.33).abs() < 1e-12);
        assert!((s.standard_regret - 0.4).abs() < 1e-12);
        assert!((s.exceeding_gap - 0.07).abs() < 1e-12);
        assert!((s.satisficing_gap.unwrap() - 0.13).abs() < 1e-12);

        let s = summarize(&m, &trace_of(&vec![Arm::Index(3); 5]), 0.9).unwrap();
        assert_eq!(s.satisficing_regret, 0.0);
        assert_eq!(s.standard_regret, 0.0);

        let arms = [Arm::Index(0), Arm::Index(1), Arm::Index(2), Arm::Index(3)];
        let s = summarize(&m, &trace_of(&arms), 1.5).unwrap();
        assert!((s.satisficing_regret - (0.9 + 0.8 + 0.7 + 0.5)).abs() < 1e-12);
        assert!(s.exceeding_gap < 0.0);
    }

    #[test]
    fn per_round_decomposition() {
        let m = karm();
        let mut tr = RunTrace::new(4);
        tr.push(Arm::Index(0), 0.0, Phase::OracleStep, 1);
        tr.push(Arm::Index(0), 0.0, Phase::ForcedSample, 1);
        tr.push(Arm::Index(1), 0.0, Phase::OracleStep, 2);
        tr.push(Arm::Index(3), 0.0, Phase::LcbTest, 2);
        let s = summarize(&m, &tr, 0.93).unwrap();
        assert_eq!(s.per_round.len(), 2);
        assert!((s.per_round[0].satisficing_regret - 0.66).abs() < 1e-12);
        assert_eq!(s.per_round[1].oracle_steps, 1);
        assert_eq!(s.per_round[1].test_steps, 1);
        assert!(tr.check_invariants().is_ok());
    }

    #[test]
    fn continuum_satisficing_gap_probe() {
        let c = RewardModel::concave_parabola();
        assert_eq!(c.satisficing_gap(0.3), Some(0.0));
        // no arm below -20 on [0,1] (min is 1 − 16·0.5625 = −8)
        assert_eq!(c.satisficing_gap(-20.0), None);
    }

    #[test]
    fn lipschitz_constant_is_valid_on_sampled_pairs() {
        use rand::Rng;
        let m = RewardModel::lipschitz_bump();
        let l = m.declared_lipschitz().unwrap();
        assert!((l - 60.0 * (-0.5f64).exp()).abs() < 1e-12);
        let mut rng = stream(11);
        for i in 0..200_000 {
            let x: Vec<f64> = (0..2).map(|_| rng.random::<f64>()).collect();
            // half the pairs local, where the gradient bound is tight
            let scale = if i % 2 == 0 { 1.0 } else { 1e-3 };
            let y: Vec<f64> = x
                .iter()
                .map(|v| (v + scale * (rng.random::<f64>() - 0.5)).clamp(0.0, 1.0))
                .collect();
            let dx = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let fx = m.mean_reward(&Arm::Point(x.clone())).unwrap();
            let fy = m.mean_reward(&Arm::Point(y)).unwrap();
            assert!((fx - fy).abs() <= l * dx + 1e-12);
        }
    }

    #[test]
    fn instance_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        std::fs::write(
            &path,
            r#"{"kind":"finite","means":[0.6,0.7,0.8,1.0],"noise_std":0.5,"satisficing_level":0.93}"#,
        )
        .unwrap();
        let inst = InstanceFile::load(&path).unwrap();
        assert_eq!(inst.model.num_arms(), Some(4));
        assert_eq!(inst.model.noise_std, 0.5);
        assert_eq!(inst.satisficing_level, 0.93);

        std::fs::write(
            &path,
            r#"{"kind":"linear_pricing","g":7.98,"h":1.87,"price_lo":0,"price_hi":4,"satisficing_level":8}"#,
        )
        .unwrap();
        let inst = InstanceFile::load(&path).unwrap();
        assert_eq!(inst.model.noise_std, 1.0);
        assert!(matches!(
            inst.model.kind,
            ModelKind::LinearPricing {
                noise: PricingNoise::PriceScaled,
                ..
            }
        ));
    }
}
