//! Parallel kinodynamic motion planning core.
//!
//! The crate is `no_std` (it needs `alloc`). Hosts supply an [`Executor`]
//! that runs independent work items and a [`Clock`] for time budgets; file
//! formats, threads and the command line live in the `kinopax` crate.

#![no_std]

extern crate alloc;

pub mod config;
pub mod decomposition;
pub mod dynamics;
pub mod env;
pub mod error;
pub mod exec;
pub mod integrate;
pub mod planner;
pub mod result;
pub mod rng;
pub mod rrt;
pub mod state;
pub mod validity;

pub use config::{validate_config, CheckedConfig, PlannerConfig};
pub use decomposition::{Decomposition, RegionId, RegionSnapshot};
pub use dynamics::{DynamicsModel, Model};
pub use env::{Aabb, Environment, GoalBall, StateSpace};
pub use error::{ConfigError, Error, Result};
pub use exec::{Clock, Executor, Serial};
pub use integrate::{propagate_ode, TrajectorySegment};
pub use planner::{plan, IterationState, KinoPax};
pub use result::{PlanResult, PlanStats, PlanStatus};
pub use state::{ControlVec, StateVec};
pub use validity::ValidityChecker;
