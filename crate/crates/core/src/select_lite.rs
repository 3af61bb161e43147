//! SELECT-LITE: SELECT with a polynomial schedule γ_i = i^{−(1/ζ−1)(1−α)}
//! and the radius √((k^ζ + D)/(T' + k)), D = ln(8·ζ⁻¹·Γ(ζ⁻¹)), which widens
//! as the test runs on and so ejects long-lived candidates with a
//! light-tailed probability.

use serde::{Deserialize, Serialize};

use crate::env::{RewardModel, RunTrace};
use crate::error::{Error, Result};
use crate::oracles::OracleParams;
use crate::rng::Stream;
use crate::select::{ceil_snapped, lengths_from_log_gamma, CandidateRule, RoundRunner, SelectConfig, Schedule};
use crate::numeric::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiteConfig {
    #[serde(flatten)]
    pub base: SelectConfig,
    pub zeta: f64,
    /// ln(8·ζ⁻¹·Γ(ζ⁻¹)), cached.
    pub radius_constant: f64,
}

impl LiteConfig {
    pub fn new(base: SelectConfig, zeta: f64) -> Result<Self> {
        Ok(LiteConfig {
            base,
            zeta,
            radius_constant: lite_radius_constant(zeta)?,
        })
    }

    pub fn validate(&self, model: &RewardModel) -> Result<()> {
        self.base.validate(model)?;
        let d = lite_radius_constant(self.zeta)?;
        if (d - self.radius_constant).abs() > 1e-9 * d.abs() {
            return Err(Error::Config(format!(
                "radius constant {} does not match zeta {}",
                self.radius_constant, self.zeta
            )));
        }
        Ok(())
    }
}

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta > 0.0 && zeta < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("zeta must lie in (0, 1), got {zeta}")))
    }
}

/// γ_i = i^{−(1/ζ−1)(1−α)}, t'_i = ⌈γ_i^{−1/(1−α)}⌉, T'_i = ⌈γ_i^{−2}⌉.
pub fn lite_schedule(i: u32, params: &OracleParams, zeta: f64) -> Schedule {
    lite_schedule_scaled(i, params, zeta, 1.0)
}

pub(crate) fn lite_schedule_scaled(
    i: u32,
    params: &OracleParams,
    zeta: f64,
    gamma_scale: f64,
) -> Schedule {
    let alpha = params.alpha;
    let exponent = (1.0 / zeta - 1.0) * (1.0 - alpha);
    let ln_gamma_i = gamma_scale.ln() - exponent * (i as f64).ln();
    // t' = i^{1/ζ−1}·λ^{−1/(1−α)}; evaluate the pure power directly when λ = 1
    // so integer results such as 7 or 512 come out exact
    let (oracle_steps, forced_steps) = if gamma_scale == 1.0 {
        let p = 1.0 / zeta - 1.0;
        (
            ceil_snapped((i as f64).powf(p)),
            ceil_snapped((i as f64).powf(2.0 * exponent)),
        )
    } else {
        lengths_from_log_gamma(ln_gamma_i, alpha)
    };
    Schedule {
        gamma: ln_gamma_i.exp(),
        oracle_steps,
        forced_steps,
    }
}

/// D = ln(8·ζ⁻¹·Γ(ζ⁻¹)).
pub fn lite_radius_constant(zeta: f64) -> Result<f64> {
    check_zeta(zeta)?;
    let inv = 1.0 / zeta;
    Ok(8f64.ln() + inv.ln() + ln_gamma(inv))
}

/// r_tot/(T'+k) − √((k^ζ + D)/(T'+k)), with 0^ζ = 0.
pub fn lite_lcb(r_tot: f64, t_prime: u64, k: u64, zeta: f64, d: f64) -> f64 {
    let n = (t_prime + k) as f64;
    let kz = if k == 0 { 0.0 } else { (k as f64).powf(zeta) };
    r_tot / n - ((kz + d) / n).sqrt()
}

/// One SELECT-LITE episode on `model`.
pub fn run_select_lite(model: &RewardModel, cfg: &LiteConfig, rng: &mut Stream) -> Result<RunTrace> {
    cfg.validate(model)?;
    let base = &cfg.base;
    let runner = RoundRunner {
        model,
        oracle: &base.oracle,
        horizon: base.horizon,
        level: base.satisficing_level,
        ablation: base.ablation,
        rule: CandidateRule::UniformDraw,
    };
    let (params, scale, zeta, d) = (base.params, base.gamma_scale, cfg.zeta, cfg.radius_constant);
    runner.run(
        |i| {
            let s = lite_schedule_scaled(i, &params, zeta, scale);
            (s.oracle_steps, s.forced_steps)
        },
        |r_tot, n_base, k| lite_lcb(r_tot, n_base, k, zeta, d),
        rng,
    )
}
