//! SELECT-LITE+ for finite arm sets: the candidate is the arm the oracle
//! pulled most often, its in-round observations seed the test, and there is
//! no forced sampling. The radius doubles the k-exponent term:
//! √((2k^ζ + D)/(τ + k)) with τ the candidate's pull count.

use crate::env::{Arm, ModelKind, RewardModel, RunTrace};
use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::select::{schedule, Ablation, CandidateRule, RoundRunner};
use crate::select_lite::LiteConfig;

/// mean − √((2k^ζ + D)/(τ + k)), with 0^ζ = 0.
pub fn lite_plus_lcb(r_tot: f64, tau: u64, k: u64, zeta: f64, d: f64) -> f64 {
    let n = (tau + k) as f64;
    let kz = if k == 0 { 0.0 } else { (k as f64).powf(zeta) };
    r_tot / n - ((2.0 * kz + d) / n).sqrt()
}

/// Most-pulled arm of a finite-arm trajectory (ties to the lowest index),
/// with its pull count τ and reward sum.
pub fn most_pulled_arm(trajectory: &[(Arm, f64)]) -> Result<(usize, u64, f64)> {
    if trajectory.iter().any(|(a, _)| a.index().is_none()) {
        return Err(Error::InvalidArm("most-pulled arm needs finite arms".into()));
    }
    if trajectory.is_empty() {
        return Err(Error::Protocol("empty trajectory".into()));
    }
    let (arm, sum, tau) = crate::select::most_pulled(trajectory);
    Ok((arm.index().expect("finite arm"), tau, sum))
}

/// One SELECT-LITE+ episode. Uses the geometric γ schedule; the ablation
/// field of the base configuration is ignored.
pub fn run_select_lite_plus(
    model: &RewardModel,
    cfg: &LiteConfig,
    rng: &mut Stream,
) -> Result<RunTrace> {
    if !matches!(model.kind, ModelKind::Finite { .. }) {
        return Err(Error::Config(
            "SELECT-LITE+ runs on finite arm sets only".into(),
        ));
    }
    cfg.validate(model)?;
    let base = &cfg.base;
    let runner = RoundRunner {
        model,
        oracle: &base.oracle,
        horizon: base.horizon,
        level: base.satisficing_level,
        ablation: Ablation::Full,
        rule: CandidateRule::MostPulled,
    };
    let (params, scale, zeta, d) = (base.params, base.gamma_scale, cfg.zeta, cfg.radius_constant);
    runner.run(
        |i| (schedule(i, &params, scale).oracle_steps, 0),
        |r_tot, tau, k| lite_plus_lcb(r_tot, tau, k, zeta, d),
        rng,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{summarize, Phase};
    use crate::rng::stream;
    use crate::select::SelectConfig;

    #[test]
    fn most_pulled_examples() {
        let traj: Vec<_> = [(0, 0.3), (1, 0.9), (0, -0.1), (0, 0.5)]
            .into_iter()
            .map(|(k, y)| (Arm::Index(k), y))
            .collect();
        let (arm, tau, sum) = most_pulled_arm(&traj).unwrap();
        assert_eq!((arm, tau), (0, 3));
        assert!((sum - 0.7).abs() < 1e-15);
        let tie = vec![(Arm::Index(0), 0.0), (Arm::Index(1), 0.0)];
        assert_eq!(most_pulled_arm(&tie).unwrap().0, 0);
        assert!(most_pulled_arm(&[]).is_err());
    }

    #[test]
    fn lcb_uses_doubled_exponent() {
        let d = 16f64.ln();
        let v = lite_plus_lcb(10.0, 12, 4, 0.5, d);
        assert!((v - (10.0 / 16.0 - ((4.0 + d) / 16.0f64).sqrt())).abs() < 1e-15);
        assert_eq!(lite_plus_lcb(3.0, 3, 0, 0.5, d), 1.0 - (d / 3.0f64).sqrt());
    }

    #[test]
    fn rejects_continuum_models() {
        let model = RewardModel::concave_parabola();
        let base = SelectConfig::for_model(&model, 0.3, 100).unwrap();
        let cfg = LiteConfig::new(base, 0.5).unwrap();
        assert!(matches!(
            run_select_lite_plus(&model, &cfg, &mut stream(0)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn no_forced_sampling_and_history_reuse() {
        let model = RewardModel::finite(vec![0.2, 0.4, 0.6, 0.8]).unwrap();
        let base = SelectConfig::for_model(&model, 0.7, 5000).unwrap();
        let cfg = LiteConfig::new(base, 0.4).unwrap();
        let trace = run_select_lite_plus(&model, &cfg, &mut stream(21)).unwrap();
        trace.check_invariants().unwrap();
        assert!(trace.steps.iter().all(|s| s.phase != Phase::ForcedSample));
        let sum = summarize(&model, &trace, 0.7).unwrap();
        let total: u64 = sum.per_round.iter().map(|r| r.oracle_steps + r.test_steps).sum();
        assert_eq!(total, 5000);
        // every test pull goes to the most-pulled arm of that round's oracle phase
        for r in &sum.per_round {
            let oracle: Vec<_> = trace
                .steps
                .iter()
                .filter(|s| s.round == r.round && s.phase == Phase::OracleStep)
                .map(|s| (s.arm.clone(), s.reward))
                .collect();
            if oracle.is_empty() {
                continue;
            }
            let (cand, _, _) = most_pulled_arm(&oracle).unwrap();
            assert!(trace
                .steps
                .iter()
                .filter(|s| s.round == r.round && s.phase == Phase::LcbTest)
                .all(|s| s.arm == Arm::Index(cand)));
        }
    }
}
