use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::{DynamicsModel, Model};
use crate::error::ConfigError;

/// Largest grid the planner will allocate.
pub const DEFAULT_REGION_CAP: u64 = 2_000_000;
/// Largest visited bitset, in bits.
pub const DEFAULT_SUBREGION_CAP: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    /// Expected tree size; the arena is allocated with exactly this many slots.
    pub t_e: usize,
    pub lambda_max: u32,
    /// Longest propagation duration in seconds.
    pub t_prop: f64,
    /// Floor added to every acceptance probability.
    pub epsilon: f64,
    /// Free-volume prior.
    pub delta: f64,
    /// One entry per state dimension, or a single entry used for all of them.
    pub cells_per_dim: Vec<u32>,
    /// Sub-cells per workspace axis inside each region.
    pub subcells_per_dim: u32,
    /// Wall-clock budget in seconds.
    pub t_max: f64,
    pub seed: u64,
    pub threads: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            t_e: 200_000,
            lambda_max: 32,
            t_prop: 1.0,
            epsilon: 0.005,
            delta: 1.0,
            cells_per_dim: vec![4],
            subcells_per_dim: 4,
            t_max: 60.0,
            seed: 0,
            threads: 1,
        }
    }
}

impl PlannerConfig {
    /// Defaults tuned per benchmark system.
    pub fn for_model(model: &Model) -> Self {
        let mut cfg = Self {
            t_prop: model.default_t_prop(),
            cells_per_dim: vec![model.default_cells_per_dim()],
            ..Self::default()
        };
        if model.state_dim() > 6 {
            cfg.t_e = 400_000;
        }
        cfg
    }
}

/// A configuration whose invariants hold for a particular model.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckedConfig {
    pub config: PlannerConfig,
    /// Cells per state dimension, expanded to the model's dimension.
    pub cells: Vec<u32>,
    pub region_count: usize,
    pub subregions_per_region: usize,
}

impl core::ops::Deref for CheckedConfig {
    type Target = PlannerConfig;
    fn deref(&self) -> &PlannerConfig {
        &self.config
    }
}

pub fn validate_config<M: DynamicsModel + ?Sized>(
    cfg: &PlannerConfig,
    model: &M,
) -> Result<CheckedConfig, ConfigError> {
    validate_config_with_cap(cfg, model, DEFAULT_REGION_CAP)
}

pub fn validate_config_with_cap<M: DynamicsModel + ?Sized>(
    cfg: &PlannerConfig,
    model: &M,
    region_cap: u64,
) -> Result<CheckedConfig, ConfigError> {
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0) {
        return Err(ConfigError::Epsilon(cfg.epsilon));
    }
    if !(cfg.delta > 0.0) || !cfg.delta.is_finite() {
        return Err(ConfigError::Delta(cfg.delta));
    }
    if cfg.t_e == 0 || cfg.t_e > u32::MAX as usize {
        return Err(ConfigError::ZeroTreeSize);
    }
    if cfg.lambda_max == 0 {
        return Err(ConfigError::ZeroBranching);
    }
    if !(cfg.t_prop > 0.0) || !cfg.t_prop.is_finite() {
        return Err(ConfigError::PropagationTime(cfg.t_prop));
    }
    if !(cfg.t_max > 0.0) {
        return Err(ConfigError::TimeBudget(cfg.t_max));
    }
    if cfg.threads == 0 {
        return Err(ConfigError::ZeroThreads);
    }
    if cfg.subcells_per_dim == 0 {
        return Err(ConfigError::ZeroSubcells);
    }
    let n = model.state_dim();
    let cells: Vec<u32> = match cfg.cells_per_dim.len() {
        1 => vec![cfg.cells_per_dim[0]; n],
        len if len == n => cfg.cells_per_dim.clone(),
        len => return Err(ConfigError::CellsLength { expected: n, got: len }),
    };
    if cells.contains(&0) {
        return Err(ConfigError::ZeroCells);
    }
    let regions = cells
        .iter()
        .fold(1u128, |acc, &c| acc.saturating_mul(c as u128));
    if regions > region_cap as u128 {
        return Err(ConfigError::RegionCap {
            regions,
            cap: region_cap,
            suggested_cells: largest_uniform_cells(n, region_cap),
        });
    }
    let per_region = (cfg.subcells_per_dim as u128).pow(3);
    let subregions = regions.saturating_mul(per_region);
    if subregions > DEFAULT_SUBREGION_CAP as u128 {
        return Err(ConfigError::SubregionCap { subregions, cap: DEFAULT_SUBREGION_CAP });
    }
    Ok(CheckedConfig {
        config: cfg.clone(),
        cells,
        region_count: regions as usize,
        subregions_per_region: per_region as usize,
    })
}

/// Largest `c >= 1` with `c^n <= cap`.
fn largest_uniform_cells(n: usize, cap: u64) -> u32 {
    let mut c = 1u32;
    while (c as u128 + 1).checked_pow(n as u32).is_some_and(|v| v <= cap as u128) {
        c += 1;
    }
    c
}
