//! Standard-regret learning oracles.
//!
//! An oracle for horizon t runs as an [`OracleSession`]: a strict
//! select/observe protocol that records the arm-pull trajectory. Each oracle
//! kind advertises the constants (C₁, α, β) of its regret bound
//! C₁·t^α·log(t)^β, which drive the round schedules of the SELECT family.

mod linear;
mod thompson;
mod trisection;
mod ucb;
mod uniform;

use serde::{Deserialize, Serialize};

use crate::env::{Arm, ModelKind, RewardModel};
use crate::error::{Error, Result};
use crate::rng::{fork, Stream};

pub use linear::{LinearUcb, LinearUcbSettings};
pub use thompson::GaussianThompson;
pub use trisection::EpochTrisection;
pub use ucb::FiniteUcb;
pub use uniform::{grid_size, UniformUcb};

/// A stateful learner driven one step at a time.
pub trait Learner: Send {
    fn select(&mut self, rng: &mut Stream) -> Arm;
    fn observe(&mut self, arm: &Arm, reward: f64);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    FiniteUcb,
    Thompson,
    UniformUcb,
    Trisection,
    LinearUcb,
}

impl OracleKind {
    pub fn name(self) -> &'static str {
        match self {
            OracleKind::FiniteUcb => "finite_ucb",
            OracleKind::Thompson => "thompson",
            OracleKind::UniformUcb => "uniform_ucb",
            OracleKind::Trisection => "trisection",
            OracleKind::LinearUcb => "linear_ucb",
        }
    }

    /// Light-tailed standard-regret guarantee, if the oracle has one.
    ///
    /// None of the bundled oracles carries such a guarantee; SELECT-LITE+
    /// still runs with them.
    pub fn light_tail(self) -> Option<LightTailCapability> {
        None
    }

    pub fn is_finite_armed(self) -> bool {
        matches!(self, OracleKind::FiniteUcb | OracleKind::Thompson)
    }
}

impl std::str::FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "finite_ucb" | "ucb" => Ok(OracleKind::FiniteUcb),
            "thompson" | "ts" => Ok(OracleKind::Thompson),
            "uniform_ucb" => Ok(OracleKind::UniformUcb),
            "trisection" => Ok(OracleKind::Trisection),
            "linear_ucb" => Ok(OracleKind::LinearUcb),
            other => Err(Error::Config(format!("unknown oracle kind `{other}`"))),
        }
    }
}

/// Light-tailed oracle guarantee: expected regret C·K^{α₁}·t^{α₂}·log(t)^β
/// with regret tails decaying like exp(−x^ζ/Λ'). Documentation only; no
/// runtime computation uses these exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightTailCapability {
    pub k_exponent: f64,
    pub t_exponent: f64,
}

/// Oracle choice plus its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub kind: OracleKind,
    #[serde(default)]
    pub linear: LinearUcbSettings,
}

impl OracleConfig {
    pub fn new(kind: OracleKind) -> Self {
        OracleConfig {
            kind,
            linear: LinearUcbSettings::default(),
        }
    }

    /// The oracle each built-in model class uses by default.
    pub fn default_for(model: &RewardModel) -> Self {
        Self::new(match model.kind {
            ModelKind::Finite { .. } => OracleKind::Thompson,
            ModelKind::Concave1d { .. } => OracleKind::Trisection,
            ModelKind::Lipschitz { .. } => OracleKind::UniformUcb,
            ModelKind::LinearPricing { .. } => OracleKind::LinearUcb,
        })
    }

    pub fn check_compatible(&self, model: &RewardModel) -> Result<()> {
        let ok = matches!(
            (self.kind, &model.kind),
            (OracleKind::FiniteUcb | OracleKind::Thompson, ModelKind::Finite { .. })
                | (OracleKind::UniformUcb, ModelKind::Lipschitz { .. })
                | (
                    OracleKind::Trisection,
                    ModelKind::Concave1d { .. } | ModelKind::LinearPricing { .. }
                )
                | (OracleKind::LinearUcb, ModelKind::LinearPricing { .. })
        );
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "oracle {} cannot run on a {} model",
                self.kind.name(),
                model_class(model)
            )))
        }
    }
}

fn model_class(model: &RewardModel) -> &'static str {
    match model.kind {
        ModelKind::Finite { .. } => "finite",
        ModelKind::Concave1d { .. } => "concave_1d",
        ModelKind::Lipschitz { .. } => "lipschitz",
        ModelKind::LinearPricing { .. } => "linear_pricing",
    }
}

/// Constants of a sublinear regret bound C₁·t^α·log(t)^β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleParams {
    pub c1: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl OracleParams {
    /// Checks C₁ ≥ 1, 1/2 ≤ α < 1, β ≥ 0.
    pub fn new(c1: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(c1 >= 1.0 && (0.5..1.0).contains(&alpha) && beta >= 0.0) {
            return Err(Error::Config(format!(
                "oracle constants out of range: C1={c1}, alpha={alpha}, beta={beta}"
            )));
        }
        Ok(OracleParams { c1, alpha, beta })
    }
}

/// Regret-bound constants for `oracle` on `model`.
///
/// Finite UCB: C₁ = 11√K, α = β = 1/2 (Thompson sampling reuses these).
/// 1-D concave trisection: C₁ = 108 / ln(4/3), α = 1/2, β = 3/2.
/// Uniform-grid UCB on [0,1]^d: C₁ = 12·L^{d/(d+2)}, α = (d+1)/(d+2), β = 1/2.
/// Linear pricing: α = 1/2, β = 1, C₁ from the oracle settings.
pub fn oracle_params(oracle: &OracleConfig, model: &RewardModel) -> Result<OracleParams> {
    oracle.check_compatible(model)?;
    match oracle.kind {
        OracleKind::FiniteUcb | OracleKind::Thompson => {
            let k = model.num_arms().expect("finite model") as f64;
            OracleParams::new(11.0 * k.sqrt(), 0.5, 0.5)
        }
        OracleKind::Trisection => OracleParams::new(108.0 / (4.0f64 / 3.0).ln(), 0.5, 1.5),
        OracleKind::UniformUcb => {
            let d = model.dimension() as f64;
            let l = model.declared_lipschitz().expect("lipschitz model");
            // C₁ ≥ 1 requires L ≥ 1/12^{(d+2)/d}; clamp tiny constants
            let c1 = (12.0 * l.powf(d / (d + 2.0))).max(1.0);
            OracleParams::new(c1, (d + 1.0) / (d + 2.0), 0.5)
        }
        OracleKind::LinearUcb => OracleParams::new(oracle.linear.c1, 0.5, 1.0),
    }
}

/// One run of an oracle for a fixed horizon.
pub struct OracleSession {
    horizon: u64,
    learner: Box<dyn Learner>,
    trajectory: Vec<(Arm, f64)>,
    pending: Option<Arm>,
    rng: Stream,
}

impl std::fmt::Debug for OracleSession {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OracleSession")
            .field("horizon", &self.horizon)
            .field("steps", &self.trajectory.len())
            .field("pending", &self.pending)
            .finish()
    }
}

/// Fresh session of `oracle` for `horizon` steps on `model`.
///
/// The session forks its own stream from `rng`, so the trajectory is a
/// deterministic function of the parent stream's state.
pub fn new_session(
    oracle: &OracleConfig,
    model: &RewardModel,
    horizon: u64,
    rng: &mut Stream,
) -> Result<OracleSession> {
    if horizon < 2 {
        return Err(Error::Config(format!(
            "oracle horizon must be at least 2, got {horizon}"
        )));
    }
    oracle.check_compatible(model)?;
    let learner: Box<dyn Learner> = match (oracle.kind, &model.kind) {
        (OracleKind::FiniteUcb, ModelKind::Finite { means }) => {
            Box::new(FiniteUcb::new(means.len()))
        }
        (OracleKind::Thompson, ModelKind::Finite { means }) => {
            Box::new(GaussianThompson::new(means.len()))
        }
        (OracleKind::UniformUcb, ModelKind::Lipschitz { center, lipschitz, .. }) => {
            Box::new(UniformUcb::for_horizon(*lipschitz, horizon, center.len()))
        }
        (OracleKind::Trisection, _) => {
            let (lo, hi) = model.domain()[0];
            Box::new(EpochTrisection::new(lo, hi, horizon))
        }
        (OracleKind::LinearUcb, _) => {
            let (lo, hi) = model.domain()[0];
            Box::new(LinearUcb::new(lo, hi, &oracle.linear))
        }
        _ => unreachable!("compatibility checked above"),
    };
    Ok(OracleSession {
        horizon,
        learner,
        trajectory: Vec::with_capacity(horizon.min(1 << 20) as usize),
        pending: None,
        rng: fork(rng),
    })
}

impl OracleSession {
    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn steps(&self) -> u64 {
        self.trajectory.len() as u64
    }

    pub fn is_exhausted(&self) -> bool {
        self.steps() >= self.horizon
    }

    /// Arms pulled so far with their observed rewards.
    pub fn trajectory(&self) -> &[(Arm, f64)] {
        &self.trajectory
    }

    pub fn into_trajectory(self) -> Vec<(Arm, f64)> {
        self.trajectory
    }

    pub fn select_arm(&mut self) -> Result<Arm> {
        if self.pending.is_some() {
            return Err(Error::Protocol(
                "select_arm called twice without observe".into(),
            ));
        }
        if self.is_exhausted() {
            return Err(Error::Protocol(format!(
                "session exhausted after {} steps",
                self.horizon
            )));
        }
        let arm = self.learner.select(&mut self.rng);
        self.pending = Some(arm.clone());
        Ok(arm)
    }

    pub fn observe(&mut self, reward: f64) -> Result<()> {
        let arm = self
            .pending
            .take()
            .ok_or_else(|| Error::Protocol("observe called without select_arm".into()))?;
        self.learner.observe(&arm, reward);
        self.trajectory.push((arm, reward));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn karm() -> RewardModel {
        RewardModel::finite(vec![0.6, 0.7, 0.8, 1.0]).unwrap()
    }

    #[test]
    fn ucb_session_starts_with_sweep() {
        let model = karm();
        let mut rng = stream(0);
        let mut s = new_session(&OracleConfig::new(OracleKind::FiniteUcb), &model, 100, &mut rng)
            .unwrap();
        for k in 0..4 {
            assert_eq!(s.select_arm().unwrap(), Arm::Index(k));
            s.observe(if k == 3 { 1.0 } else { 0.0 }).unwrap();
        }
        assert_eq!(s.select_arm().unwrap(), Arm::Index(3));
    }

    #[test]
    fn horizon_below_two_is_rejected() {
        let mut rng = stream(0);
        let err = new_session(&OracleConfig::new(OracleKind::Thompson), &karm(), 1, &mut rng);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn incompatible_pairing_is_rejected() {
        let mut rng = stream(0);
        let cfg = OracleConfig::new(OracleKind::UniformUcb);
        assert!(matches!(
            new_session(&cfg, &karm(), 10, &mut rng),
            Err(Error::Config(_))
        ));
        let cfg = OracleConfig::new(OracleKind::LinearUcb);
        assert!(new_session(&cfg, &RewardModel::concave_parabola(), 10, &mut rng).is_err());
        assert!(oracle_params(&cfg, &karm()).is_err());
    }

    #[test]
    fn protocol_violations() {
        let mut rng = stream(0);
        let mut s =
            new_session(&OracleConfig::new(OracleKind::Thompson), &karm(), 2, &mut rng).unwrap();
        assert!(matches!(s.observe(0.0), Err(Error::Protocol(_))));
        s.select_arm().unwrap();
        assert!(matches!(s.select_arm(), Err(Error::Protocol(_))));
        s.observe(0.1).unwrap();
        s.select_arm().unwrap();
        s.observe(0.2).unwrap();
        assert!(s.is_exhausted());
        assert!(matches!(s.select_arm(), Err(Error::Protocol(_))));
        assert_eq!(s.trajectory().len(), 2);
    }

    #[test]
    fn thompson_is_reproducible_under_a_seed() {
        let pick = |seed| {
            let mut rng = stream(seed);
            let mut s = new_session(&OracleConfig::new(OracleKind::Thompson), &karm(), 10, &mut rng)
                .unwrap();
            s.select_arm().unwrap()
        };
        assert_eq!(pick(5), pick(5));
    }

    #[test]
    fn uniform_ucb_grid_matches_formula() {
        let model = RewardModel::lipschitz_bump();
        let l = model.declared_lipschitz().unwrap();
        let m = ((l * l * 5000.0 / 5000f64.ln()).powf(0.25)).ceil() as usize;
        let u = UniformUcb::for_horizon(l, 5000, 2);
        assert_eq!(u.num_cells(), m * m);
    }

    #[test]
    fn noiseless_trisection_keeps_the_maximizer() {
        let model = RewardModel::concave_parabola().with_noise_std(0.0);
        let mut tri = EpochTrisection::new(0.0, 1.0, 1000);
        let mut rng = stream(0);
        let mut steps = 0;
        while tri.epochs() < 1 {
            let arm = tri.select(&mut rng);
            let y = model.pull(&arm, &mut rng).unwrap();
            tri.observe(&arm, y);
            steps += 1;
            assert!(steps < 10_000);
        }
        let (lo, hi) = tri.interval();
        assert!(lo <= 0.25 && 0.25 <= hi);
        assert!(hi - lo < 1.0);
    }

    #[test]
    fn params_match_regret_bound_constants() {
        let p = oracle_params(&OracleConfig::new(OracleKind::FiniteUcb), &karm()).unwrap();
        assert_eq!((p.c1, p.alpha, p.beta), (22.0, 0.5, 0.5));
        let p = oracle_params(&OracleConfig::new(OracleKind::Thompson), &karm()).unwrap();
        assert_eq!(p.c1, 22.0);

        let p = oracle_params(
            &OracleConfig::new(OracleKind::Trisection),
            &RewardModel::concave_parabola(),
        )
        .unwrap();
        assert!((p.c1 - 375.414_425_652_478_3).abs() < 1e-9);
        assert_eq!((p.alpha, p.beta), (0.5, 1.5));

        let mut lip = RewardModel::lipschitz_bump();
        if let ModelKind::Lipschitz { lipschitz, .. } = &mut lip.kind {
            *lipschitz = 10.0;
        }
        let p = oracle_params(&OracleConfig::new(OracleKind::UniformUcb), &lip).unwrap();
        assert_eq!(p.alpha, 0.75);
        assert!((p.c1 - 37.947_331_922_020_55).abs() < 1e-9);

        let p = oracle_params(
            &OracleConfig::new(OracleKind::LinearUcb),
            &RewardModel::avocado_pricing(),
        )
        .unwrap();
        assert_eq!((p.alpha, p.beta), (0.5, 1.0));
    }

    #[test]
    fn param_ranges_are_enforced() {
        assert!(OracleParams::new(0.5, 0.5, 0.5).is_err());
        assert!(OracleParams::new(1.0, 1.0, 0.5).is_err());
        assert!(OracleParams::new(1.0, 0.4, 0.5).is_err());
        assert!(OracleParams::new(1.0, 0.5, -0.1).is_err());
    }
}
