use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid environment: {0}")]
    Environment(String),
    #[error("start state is invalid: {0}")]
    InvalidStart(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("propagation produced a non-finite state")]
    NonFiniteState,
    #[error("duration must be positive and finite, got {0}")]
    InvalidDuration(f64),
    #[error("tree invariant violated: {0}")]
    CorruptTree(String),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    Epsilon(f64),
    #[error("delta must be positive and finite, got {0}")]
    Delta(f64),
    #[error("expected tree size t_e must be at least 1")]
    ZeroTreeSize,
    #[error("lambda_max must be at least 1")]
    ZeroBranching,
    #[error("propagation time bound must be positive and finite, got {0}")]
    PropagationTime(f64),
    #[error("time budget must be positive, got {0}")]
    TimeBudget(f64),
    #[error("thread count must be at least 1")]
    ZeroThreads,
    #[error("grid needs a positive cell count for every dimension")]
    ZeroCells,
    #[error("cells_per_dim has {got} entries but the model has {expected} state dimensions")]
    CellsLength { expected: usize, got: usize },
    #[error("subcells_per_dim must be at least 1")]
    ZeroSubcells,
    #[error(
        "grid has {regions} regions which exceeds the cap of {cap}; \
         try cells_per_dim={suggested_cells}"
    )]
    RegionCap {
        regions: u128,
        cap: u64,
        suggested_cells: u32,
    },
    #[error("grid has {subregions} sub-regions which exceeds the cap of {cap}")]
    SubregionCap { subregions: u128, cap: u64 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
