//! Uniform state-space grid with per-region exploration estimates.
//!
//! Each region tracks how many propagations ending inside it were valid or
//! invalid and how many of its workspace sub-cells already hold a tree node.
//! From these the estimate pass derives
//!
//! ```text
//! free_vol = (delta + n_valid) * vol / (delta + n_valid + n_invalid)
//! score    = free_vol^4 / ((1 + cov) * (1 + (n_valid + n_invalid)^2))
//! p_accept = min(1, score / sum(score over available regions) + epsilon)
//! ```
//!
//! Counters and the visited bitset are atomics so propagation work items can
//! update them concurrently. The float estimates are written only during the
//! estimate pass, one work item per region.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, Ordering::Relaxed};

use crate::env::StateSpace;
use crate::exec::{chunked_sum, Executor};
use crate::state::StateVec;

pub type RegionId = u32;

#[derive(Debug)]
struct RegionRecord {
    n_valid: AtomicU32,
    n_invalid: AtomicU32,
    cov: AtomicU32,
    free_vol: AtomicU64,
    score: AtomicU64,
    p_accept: AtomicU64,
    available: AtomicBool,
}

impl RegionRecord {
    fn new() -> Self {
        Self {
            n_valid: AtomicU32::new(0),
            n_invalid: AtomicU32::new(0),
            cov: AtomicU32::new(0),
            free_vol: AtomicU64::new(0),
            score: AtomicU64::new(0),
            p_accept: AtomicU64::new(1.0f64.to_bits()),
            available: AtomicBool::new(false),
        }
    }
}

/// Plain copy of one region's counters and estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSnapshot {
    pub n_valid: u32,
    pub n_invalid: u32,
    pub cov: u32,
    pub free_vol: f64,
    pub score: f64,
    pub p_accept: f64,
    pub vol: f64,
    pub available: bool,
}

/// Region-level formulas, shared by the incremental passes.
pub fn free_volume(delta: f64, n_valid: u32, n_invalid: u32, vol: f64) -> f64 {
    let nv = n_valid as f64;
    (delta + nv) * vol / (delta + nv + n_invalid as f64)
}

pub fn region_score(free_vol: f64, cov: u32, n_valid: u32, n_invalid: u32) -> f64 {
    let n = n_valid as f64 + n_invalid as f64;
    let fv2 = free_vol * free_vol;
    fv2 * fv2 / ((1.0 + cov as f64) * (1.0 + n * n))
}

#[derive(Debug)]
pub struct Decomposition {
    lo: StateVec,
    widths: StateVec,
    cells: Vec<u32>,
    strides: Vec<usize>,
    subcells: u32,
    subregions_per_region: usize,
    position_dims: [usize; 3],
    vol: f64,
    delta: f64,
    epsilon: f64,
    records: Vec<RegionRecord>,
    visited: Vec<AtomicU64>,
    available: Vec<RegionId>,
}

impl Decomposition {
    pub fn new(
        space: &StateSpace,
        cells: &[u32],
        subcells_per_dim: u32,
        position_dims: [usize; 3],
        delta: f64,
        epsilon: f64,
    ) -> Self {
        let n = space.dim();
        assert_eq!(cells.len(), n, "one cell count per state dimension");
        assert!(subcells_per_dim >= 1);
        let mut widths = StateVec::zeros(n);
        let mut strides = vec![0usize; n];
        let mut stride = 1usize;
        for d in 0..n {
            assert!(cells[d] >= 1);
            widths[d] = (space.hi[d] - space.lo[d]) / cells[d] as f64;
            strides[d] = stride;
            stride *= cells[d] as usize;
        }
        let regions = stride;
        let vol = position_dims.iter().map(|&d| widths[d]).product();
        let per = (subcells_per_dim as usize).pow(3);
        let bits = regions * per;
        Self {
            lo: space.lo,
            widths,
            cells: cells.to_vec(),
            strides,
            subcells: subcells_per_dim,
            subregions_per_region: per,
            position_dims,
            vol,
            delta,
            epsilon,
            records: (0..regions).map(|_| RegionRecord::new()).collect(),
            visited: (0..bits.div_ceil(64)).map(|_| AtomicU64::new(0)).collect(),
            available: Vec::new(),
        }
    }

    pub fn region_count(&self) -> usize {
        self.records.len()
    }

    pub fn subregions_per_region(&self) -> usize {
        self.subregions_per_region
    }

    /// Workspace volume of one cell.
    pub fn region_volume(&self) -> f64 {
        self.vol
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    #[inline]
    fn cell_coord(&self, d: usize, v: f64) -> u32 {
        let c = libm::floor((v - self.lo[d]) / self.widths[d]);
        if c <= 0.0 || c.is_nan() {
            0
        } else {
            (c as u32).min(self.cells[d] - 1)
        }
    }

    /// Flattened index of the cell containing `x`; dimension 0 varies
    /// fastest. Coordinates on the upper face of the box clamp into the last
    /// cell.
    #[inline]
    pub fn region_index(&self, x: &[f64]) -> RegionId {
        let mut idx = 0usize;
        for (d, (&xd, &stride)) in x.iter().zip(&self.strides).enumerate() {
            idx += self.cell_coord(d, xd) as usize * stride;
        }
        idx as RegionId
    }

    /// Index of the workspace sub-cell of `region` containing `x`.
    #[inline]
    pub fn subregion_index(&self, x: &[f64], region: RegionId) -> u32 {
        let s = self.subcells;
        let mut idx = 0u32;
        let mut mul = 1u32;
        for &d in &self.position_dims {
            let cell = (region as usize / self.strides[d]) % self.cells[d] as usize;
            let corner = self.lo[d] + cell as f64 * self.widths[d];
            let sub_w = self.widths[d] / s as f64;
            let k = libm::floor((x[d] - corner) / sub_w);
            let k = if k <= 0.0 || k.is_nan() { 0 } else { (k as u32).min(s - 1) };
            idx += k * mul;
            mul *= s;
        }
        idx
    }

    #[inline]
    pub fn record_outcome(&self, region: RegionId, valid: bool) {
        let r = &self.records[region as usize];
        if valid {
            r.n_valid.fetch_add(1, Relaxed);
        } else {
            r.n_invalid.fetch_add(1, Relaxed);
        }
    }

    /// Sets the visited bit; true only for the call that flipped it.
    #[inline]
    pub fn try_mark_subregion_visited(&self, region: RegionId, sub: u32) -> bool {
        let bit = region as usize * self.subregions_per_region + sub as usize;
        let mask = 1u64 << (bit % 64);
        let prev = self.visited[bit / 64].fetch_or(mask, Relaxed);
        if prev & mask == 0 {
            self.records[region as usize].cov.fetch_add(1, Relaxed);
            true
        } else {
            false
        }
    }

    pub fn is_subregion_visited(&self, region: RegionId, sub: u32) -> bool {
        let bit = region as usize * self.subregions_per_region + sub as usize;
        self.visited[bit / 64].load(Relaxed) & (1u64 << (bit % 64)) != 0
    }

    /// Adds `region` to the available set if it is not there yet.
    pub fn mark_available(&mut self, region: RegionId) -> bool {
        let r = &self.records[region as usize];
        if r.available.swap(true, Relaxed) {
            return false;
        }
        self.available.push(region);
        true
    }

    /// Regions holding at least one tree node, in the order they joined.
    pub fn available_regions(&self) -> &[RegionId] {
        &self.available
    }

    #[inline]
    pub fn p_accept(&self, region: RegionId) -> f64 {
        f64::from_bits(self.records[region as usize].p_accept.load(Relaxed))
    }

    /// Recomputes `free_vol` and `score` from one counter snapshot and
    /// returns the score.
    pub fn update_region_estimates(&self, region: RegionId) -> f64 {
        let r = &self.records[region as usize];
        let nv = r.n_valid.load(Relaxed);
        let ni = r.n_invalid.load(Relaxed);
        let cov = r.cov.load(Relaxed);
        let fv = free_volume(self.delta, nv, ni, self.vol);
        let score = region_score(fv, cov, nv, ni);
        r.free_vol.store(fv.to_bits(), Relaxed);
        r.score.store(score.to_bits(), Relaxed);
        score
    }

    /// Sets `p_accept` for every available region from the current scores.
    pub fn update_accept<E: Executor>(&self, exec: &E) {
        let mut scores: Vec<f64> = self
            .available
            .iter()
            .map(|&r| f64::from_bits(self.records[r as usize].score.load(Relaxed)))
            .collect();
        self.apply_accept(exec, &mut scores);
    }

    fn apply_accept<E: Executor>(&self, exec: &E, scores: &mut [f64]) {
        let total = chunked_sum(exec, scores);
        let eps = self.epsilon;
        let avail = &self.available;
        exec.for_each_mut(scores, |i, s| {
            let p = if total > 0.0 { (*s / total + eps).min(1.0) } else { eps.min(1.0) };
            self.records[avail[i] as usize].p_accept.store(p.to_bits(), Relaxed);
        });
    }

    /// Estimate pass over all available regions followed, after a barrier,
    /// by the acceptance pass.
    pub fn update_estimates<E: Executor>(&self, exec: &E) {
        let mut scores = vec![0.0f64; self.available.len()];
        let avail = &self.available;
        exec.for_each_mut(&mut scores, |i, s| *s = self.update_region_estimates(avail[i]));
        self.apply_accept(exec, &mut scores);
    }

    pub fn snapshot(&self, region: RegionId) -> RegionSnapshot {
        let r = &self.records[region as usize];
        RegionSnapshot {
            n_valid: r.n_valid.load(Relaxed),
            n_invalid: r.n_invalid.load(Relaxed),
            cov: r.cov.load(Relaxed),
            free_vol: f64::from_bits(r.free_vol.load(Relaxed)),
            score: f64::from_bits(r.score.load(Relaxed)),
            p_accept: f64::from_bits(r.p_accept.load(Relaxed)),
            vol: self.vol,
            available: r.available.load(Relaxed),
        }
    }

    /// Grid coordinates of `region`, one per state dimension.
    pub fn region_coords(&self, region: RegionId) -> Vec<u32> {
        (0..self.cells.len())
            .map(|d| ((region as usize / self.strides[d]) % self.cells[d] as usize) as u32)
            .collect()
    }
}
