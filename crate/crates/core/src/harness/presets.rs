//! Named experiment instances.

use crate::env::RewardModel;
use crate::error::{Error, Result};
use crate::oracles::{OracleConfig, OracleKind};

/// A reward model with its satisficing level, oracle and default grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub model: RewardModel,
    pub satisficing_level: f64,
    pub oracle: OracleConfig,
    pub horizons: Vec<u64>,
    pub zeta: f64,
    pub description: &'static str,
}

pub const PRESET_NAMES: [&str; 14] = [
    "karm-realizable",
    "karm-nonrealizable",
    "concave-realizable",
    "concave-nonrealizable",
    "lipschitz-realizable",
    "lipschitz-nonrealizable",
    "lipschitz-ablation",
    "tail",
    "tail-zeta04",
    "tail-nonrealizable",
    "pricing",
    "pricing-nonrealizable",
    "two-arm-heavy",
    "lite-plus",
];

fn grid(start: u64, stop: u64, step: u64) -> Vec<u64> {
    (start..=stop).step_by(step as usize).collect()
}

pub fn preset(name: &str) -> Result<Preset> {
    let karm = || RewardModel::finite(vec![0.6, 0.7, 0.8, 1.0]).expect("valid means");
    let tail = || RewardModel::finite(vec![0.2, 0.4, 0.6, 0.8]).expect("valid means");
    let thompson = OracleConfig::new(OracleKind::Thompson);
    let p = |name, model, level, oracle, horizons, zeta, description| Preset {
        name,
        model,
        satisficing_level: level,
        oracle,
        horizons,
        zeta,
        description,
    };
    let short = grid(500, 5000, 500);
    let long = grid(1000, 10_000, 1000);
    Ok(match name {
        "karm-realizable" => p(
            "karm-realizable",
            karm(),
            0.93,
            thompson,
            short,
            0.1,
            "4 arms {0.6, 0.7, 0.8, 1}, S = 0.93, Thompson oracle",
        ),
        "karm-nonrealizable" => p(
            "karm-nonrealizable",
            karm(),
            1.5,
            thompson,
            short,
            0.1,
            "4 arms {0.6, 0.7, 0.8, 1}, S = 1.5",
        ),
        "concave-realizable" => p(
            "concave-realizable",
            RewardModel::concave_parabola(),
            0.3,
            OracleConfig::new(OracleKind::Trisection),
            short,
            0.1,
            "r(x) = 1 - 16(x - 0.25)^2 on [0, 1], S = 0.3, trisection oracle",
        ),
        "concave-nonrealizable" => p(
            "concave-nonrealizable",
            RewardModel::concave_parabola(),
            1.5,
            OracleConfig::new(OracleKind::Trisection),
            short,
            0.1,
            "r(x) = 1 - 16(x - 0.25)^2 on [0, 1], S = 1.5",
        ),
        "lipschitz-realizable" => p(
            "lipschitz-realizable",
            RewardModel::lipschitz_bump(),
            0.5,
            OracleConfig::new(OracleKind::UniformUcb),
            short,
            0.1,
            "min{1, 3 exp(-100 |x - (0.5, 0.7)|^2)} on [0, 1]^2, S = 0.5, uniform-grid UCB",
        ),
        "lipschitz-nonrealizable" => p(
            "lipschitz-nonrealizable",
            RewardModel::lipschitz_bump(),
            1.5,
            OracleConfig::new(OracleKind::UniformUcb),
            short,
            0.1,
            "Lipschitz bump, S = 1.5",
        ),
        "lipschitz-ablation" => p(
            "lipschitz-ablation",
            RewardModel::lipschitz_bump(),
            0.7,
            OracleConfig::new(OracleKind::UniformUcb),
            short,
            0.1,
            "Lipschitz bump, S = 0.7, used by the ablation and robustness runs",
        ),
        "tail" => p(
            "tail",
            tail(),
            0.7,
            thompson,
            long,
            0.1,
            "4 arms {0.2, 0.4, 0.6, 0.8}, S = 0.7, zeta = 0.1",
        ),
        "tail-zeta04" => p(
            "tail-zeta04",
            tail(),
            0.7,
            thompson,
            long,
            0.4,
            "4 arms {0.2, 0.4, 0.6, 0.8}, S = 0.7, zeta = 0.4",
        ),
        "tail-nonrealizable" => p(
            "tail-nonrealizable",
            tail(),
            1.5,
            thompson,
            long,
            0.1,
            "4 arms {0.2, 0.4, 0.6, 0.8}, S = 1.5",
        ),
        "pricing" => p(
            "pricing",
            RewardModel::avocado_pricing(),
            8.0,
            OracleConfig::new(OracleKind::LinearUcb),
            grid(500, 8000, 500),
            0.1,
            "linear-demand pricing (g, h) = (32724, 7678)/4100 on [0, 4], S = 8",
        ),
        "pricing-nonrealizable" => p(
            "pricing-nonrealizable",
            RewardModel::avocado_pricing(),
            10.0,
            OracleConfig::new(OracleKind::LinearUcb),
            short,
            0.1,
            "linear-demand pricing, S = 10",
        ),
        "two-arm-heavy" => p(
            "two-arm-heavy",
            RewardModel::finite(vec![1.0, 0.0]).expect("valid means"),
            0.5,
            thompson,
            vec![2000],
            0.1,
            "arms {1, 0}, S = 0.5: heavy-tail diagnostic for plain SELECT",
        ),
        "lite-plus" => p(
            "lite-plus",
            tail(),
            0.7,
            thompson,
            long,
            0.1,
            "finite instance for SELECT-LITE+: arms {0.2, 0.4, 0.6, 0.8}, S = 0.7",
        ),
        other => {
            return Err(Error::Config(format!(
                "unknown preset {other:?}; expected one of {}",
                PRESET_NAMES.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_preset_resolves_and_is_consistent() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            assert_eq!(p.name, name);
            p.model.validate().unwrap();
            p.oracle.check_compatible(&p.model).unwrap();
            assert!(!p.horizons.is_empty());
        }
        assert!(preset("nope").is_err());
    }

    #[test]
    fn horizon_grids() {
        assert_eq!(preset("karm-realizable").unwrap().horizons.len(), 10);
        assert_eq!(*preset("tail").unwrap().horizons.last().unwrap(), 10_000);
        assert_eq!(*preset("pricing").unwrap().horizons.last().unwrap(), 8000);
    }
}
