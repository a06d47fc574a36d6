use alloc::vec::Vec;

use crate::integrate::TrajectorySegment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlanStatus {
    Solved,
    Timeout,
    CapacityExhausted,
    Error,
}

impl PlanStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlanStatus::Solved => "solved",
            PlanStatus::Timeout => "timeout",
            PlanStatus::CapacityExhausted => "capacity_exhausted",
            PlanStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlanStats {
    pub iterations: u64,
    pub tree_size: usize,
    pub wall_time_ms: f64,
    /// Sum of segment durations of the returned trajectory.
    pub solution_duration_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub status: PlanStatus,
    /// Root-to-goal segments; empty unless solved (and empty when the start
    /// already lies in the goal).
    pub trajectory: Vec<TrajectorySegment>,
    pub stats: PlanStats,
}

impl PlanResult {
    pub fn unsolved(status: PlanStatus, stats: PlanStats) -> Self {
        Self { status, trajectory: Vec::new(), stats }
    }

    pub fn is_solved(&self) -> bool {
        self.status == PlanStatus::Solved
    }
}
