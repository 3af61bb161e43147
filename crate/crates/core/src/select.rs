//! SELECT: rounds of oracle-driven candidate search, forced sampling and a
//! lower-confidence-bound test against the satisficing level.
//!
//! Round i with γ_i = λ·2^{−i(1−α)/α}:
//! 1. run a fresh oracle for t_i = ⌈γ_i^{−1/(1−α)}⌉ steps and draw the
//!    candidate uniformly from its trajectory;
//! 2. pull the candidate T_i = ⌈γ_i^{−2}⌉ times;
//! 3. keep pulling it while its LCB r̂/n − √(4 ln n / n) stays at or above S.
//!
//! Every phase is cut at the horizon; the episode ends there.

use serde::{Deserialize, Serialize};

use crate::env::{Arm, Phase, RewardModel, RunTrace};
use crate::error::{Error, Result};
use crate::oracles::{new_session, oracle_params, OracleConfig, OracleParams};
use crate::rng::Stream;

use rand::Rng;

/// Which step of a round to remove.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ablation {
    #[default]
    Full,
    /// Candidate drawn uniformly from the arm space; no oracle steps.
    SkipStep1,
    /// No forced sampling: the LCB test starts from the candidate's first pull.
    SkipStep2,
    /// The round ends after forced sampling.
    SkipStep3,
}

impl Ablation {
    pub const ALL: [Ablation; 4] = [
        Ablation::Full,
        Ablation::SkipStep1,
        Ablation::SkipStep2,
        Ablation::SkipStep3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ablation::Full => "full",
            Ablation::SkipStep1 => "skip_step1",
            Ablation::SkipStep2 => "skip_step2",
            Ablation::SkipStep3 => "skip_step3",
        }
    }
}

impl std::str::FromStr for Ablation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ablation::ALL
            .into_iter()
            .find(|a| a.name() == s.replace('-', "_"))
            .ok_or_else(|| Error::Config(format!("unknown ablation {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectConfig {
    pub satisficing_level: f64,
    pub params: OracleParams,
    pub horizon: u64,
    /// Multiplier λ applied to every γ_i.
    pub gamma_scale: f64,
    pub ablation: Ablation,
    pub oracle: OracleConfig,
}

impl SelectConfig {
    /// Configuration with the model's default oracle and its constants.
    pub fn for_model(model: &RewardModel, level: f64, horizon: u64) -> Result<Self> {
        Self::with_oracle(model, OracleConfig::default_for(model), level, horizon)
    }

    pub fn with_oracle(
        model: &RewardModel,
        oracle: OracleConfig,
        level: f64,
        horizon: u64,
    ) -> Result<Self> {
        Ok(SelectConfig {
            satisficing_level: level,
            params: oracle_params(&oracle, model)?,
            horizon,
            gamma_scale: 1.0,
            ablation: Ablation::Full,
            oracle,
        })
    }

    pub fn validate(&self, model: &RewardModel) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if !(self.gamma_scale > 0.0 && self.gamma_scale.is_finite()) {
            return Err(Error::Config(format!(
                "gamma scale must be positive, got {}",
                self.gamma_scale
            )));
        }
        OracleParams::new(self.params.c1, self.params.alpha, self.params.beta)?;
        self.oracle.check_compatible(model)
    }
}

/// Round lengths derived from γ_i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub gamma: f64,
    /// Oracle horizon t_i.
    pub oracle_steps: u64,
    /// Forced-sampling length T_i.
    pub forced_steps: u64,
}

/// ⌈v⌉ for v > 0, snapping values within floating-point noise of an integer
/// first so that exact powers such as 2^{2i} do not round up by one. Never
/// below 1, since γ > 0 makes every length positive.
pub(crate) fn ceil_snapped(v: f64) -> u64 {
    let r = v.round();
    let c = if (v - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as u64
    } else {
        v.ceil() as u64
    };
    c.max(1)
}

/// Lengths derived from ln γ: t = ⌈γ^{−1/(1−α)}⌉, T = ⌈γ^{−2}⌉.
pub(crate) fn lengths_from_log_gamma(ln_gamma: f64, alpha: f64) -> (u64, u64) {
    (
        ceil_snapped((-ln_gamma / (1.0 - alpha)).exp()),
        ceil_snapped((-2.0 * ln_gamma).exp()),
    )
}

/// γ_i = λ·2^{−i(1−α)/α} with t_i and T_i. Values too large for u64 saturate.
pub fn schedule(i: u32, params: &OracleParams, gamma_scale: f64) -> Schedule {
    let alpha = params.alpha;
    let log2_gamma = gamma_scale.log2() - i as f64 * (1.0 - alpha) / alpha;
    // powers of two go through exp2 so integer exponents stay exact
    let gamma = log2_gamma.exp2();
    let oracle_steps = ceil_snapped((-log2_gamma / (1.0 - alpha)).exp2());
    let forced_steps = ceil_snapped((-2.0 * log2_gamma).exp2());
    Schedule {
        gamma,
        oracle_steps,
        forced_steps,
    }
}

/// LCB r_tot/n − √(4 ln n / n); −∞ when n = 0.
pub fn lcb(r_tot: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::NEG_INFINITY;
    }
    let n = n as f64;
    r_tot / n - (4.0 * n.ln() / n).sqrt()
}

/// How a round picks its candidate from the oracle trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CandidateRule {
    /// Uniform draw from the trajectory; the test starts from fresh data.
    UniformDraw,
    /// Most-pulled arm (ties to the lowest index); its in-round observations
    /// seed the test.
    MostPulled,
}

/// Round loop shared by the SELECT family.
pub(crate) struct RoundRunner<'a> {
    pub model: &'a RewardModel,
    pub oracle: &'a OracleConfig,
    pub horizon: u64,
    pub level: f64,
    pub ablation: Ablation,
    pub rule: CandidateRule,
}

impl RoundRunner<'_> {
    /// Runs rounds until the horizon. `plan(i)` gives (t_i, forced length);
    /// `guard(r_tot, n_base, k)` is the LCB compared against the level, where
    /// n_base counts the pre-test samples and k the extra test pulls.
    pub fn run(
        &self,
        plan: impl Fn(u32) -> (u64, u64),
        guard: impl Fn(f64, u64, u64) -> f64,
        rng: &mut Stream,
    ) -> Result<RunTrace> {
        let model = self.model;
        let mut trace = RunTrace::new(self.horizon);
        let mut round: u32 = 0;
        while !trace.is_complete() {
            round += 1;
            let (oracle_steps, forced_steps) = plan(round);

            // Step 1: candidate search
            let (candidate, mut r_tot, n_base) = if self.ablation == Ablation::SkipStep1 {
                (model.sample_uniform_arm(rng), 0.0, 0)
            } else {
                let mut session = new_session(self.oracle, model, oracle_steps.max(2), rng)?;
                let run = oracle_steps.min(trace.remaining());
                for _ in 0..run {
                    let arm = session.select_arm()?;
                    let y = model.pull_unchecked(&arm, rng);
                    session.observe(y)?;
                    trace.push(arm, y, Phase::OracleStep, round);
                }
                if trace.is_complete() {
                    break;
                }
                let traj = session.into_trajectory();
                match self.rule {
                    CandidateRule::UniformDraw => {
                        let q = rng.random_range(0..traj.len());
                        (traj[q].0.clone(), 0.0, 0)
                    }
                    CandidateRule::MostPulled => most_pulled(&traj),
                }
            };

            // Step 2: forced sampling
            let forced = match self.ablation {
                Ablation::SkipStep2 => 0,
                _ => forced_steps.min(trace.remaining()),
            };
            for _ in 0..forced {
                let y = model.pull_unchecked(&candidate, rng);
                r_tot += y;
                trace.push(candidate.clone(), y, Phase::ForcedSample, round);
            }
            if trace.is_complete() {
                break;
            }
            if self.ablation == Ablation::SkipStep3 {
                continue;
            }

            // Step 3: LCB test
            let n_base = n_base + forced;
            let mut k: u64 = 0;
            if n_base == 0 {
                // no data yet: the test starts with one pull
                let y = model.pull_unchecked(&candidate, rng);
                r_tot += y;
                k = 1;
                trace.push(candidate.clone(), y, Phase::LcbTest, round);
            }
            while !trace.is_complete() && guard(r_tot, n_base, k) >= self.level {
                let y = model.pull_unchecked(&candidate, rng);
                r_tot += y;
                k += 1;
                trace.push(candidate.clone(), y, Phase::LcbTest, round);
            }
        }
        Ok(trace)
    }
}

/// Most frequent arm in a finite-arm trajectory, its pull count and reward sum.
pub(crate) fn most_pulled(traj: &[(Arm, f64)]) -> (Arm, f64, u64) {
    let k_max = traj
        .iter()
        .map(|(a, _)| a.index().expect("finite arm"))
        .max()
        .unwrap_or(0);
    let mut counts = vec![0u64; k_max + 1];
    let mut sums = vec![0.0; k_max + 1];
    for (a, y) in traj {
        let k = a.index().expect("finite arm");
        counts[k] += 1;
        sums[k] += y;
    }
    let mut best = 0;
    for (k, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = k;
        }
    }
    (Arm::Index(best), sums[best], counts[best])
}

/// One SELECT episode on `model`.
pub fn run_select(model: &RewardModel, cfg: &SelectConfig, rng: &mut Stream) -> Result<RunTrace> {
    cfg.validate(model)?;
    let runner = RoundRunner {
        model,
        oracle: &cfg.oracle,
        horizon: cfg.horizon,
        level: cfg.satisficing_level,
        ablation: cfg.ablation,
        rule: CandidateRule::UniformDraw,
    };
    let params = cfg.params;
    let scale = cfg.gamma_scale;
    runner.run(
        |i| {
            let s = schedule(i, &params, scale);
            (s.oracle_steps, s.forced_steps)
        },
        |r_tot, n_base, k| lcb(r_tot, n_base + k),
        rng,
    )
}
