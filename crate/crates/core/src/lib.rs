//! Satisficing multi-armed bandits.
//!
//! The SELECT family turns any standard-regret learner with a sublinear
//! regret bound into an algorithm whose satisficing regret stays bounded
//! whenever some arm reaches the level `S`, while keeping a sublinear
//! standard regret otherwise.
//!
//! - [`env`]: reward models, noise, traces and regret accounting
//! - [`oracles`]: the learning oracles and their regret constants
//! - [`select`], [`select_lite`], [`select_lite_plus`]: the algorithms
//! - [`harness`]: presets, replicated experiments, tail statistics, CSV output

pub mod env;
pub mod error;
pub mod harness;
pub mod oracles;
pub mod rng;
pub mod select;
pub mod select_lite;
pub mod select_lite_plus;
pub mod numeric;

pub use env::{Arm, ModelKind, Phase, RegretSummary, RewardModel, RunTrace};
pub use error::{Error, Result};
pub use oracles::{OracleConfig, OracleKind, OracleParams};
pub use select::{lcb, run_select, schedule, Ablation, SelectConfig};
pub use select_lite::{lite_lcb, lite_radius_constant, lite_schedule, run_select_lite, LiteConfig};
pub use select_lite_plus::run_select_lite_plus;
