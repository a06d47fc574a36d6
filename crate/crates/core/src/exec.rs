//! Execution and timing hooks supplied by the host.
//!
//! A pass hands independent work items to an [`Executor`]; returning from
//! `for_each_mut` is the barrier. Running every item on the calling thread is
//! a legal schedule, and [`Serial`] does exactly that.

/// Runs independent work items, in any order, before returning.
pub trait Executor: Sync {
    fn threads(&self) -> usize;

    /// Calls `f(i, &mut items[i])` once for every index.
    fn for_each_mut<T, F>(&self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn threads(&self) -> usize {
        1
    }

    fn for_each_mut<T, F>(&self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        for (i, item) in items.iter_mut().enumerate() {
            f(i, item);
        }
    }
}

/// Wall-clock source and cancellation flag.
pub trait Clock {
    /// Seconds since the run started.
    fn elapsed_secs(&self) -> f64;

    /// Set when another worker already finished; planners stop early.
    fn cancelled(&self) -> bool {
        false
    }
}

/// A clock that advances by a fixed amount on every query. Useful for
/// deterministic tests of time budgets.
#[derive(Debug, Default)]
pub struct TickClock {
    ticks: core::cell::Cell<u64>,
    pub seconds_per_tick: f64,
}

impl TickClock {
    pub fn new(seconds_per_tick: f64) -> Self {
        Self { ticks: core::cell::Cell::new(0), seconds_per_tick }
    }
}

impl Clock for TickClock {
    fn elapsed_secs(&self) -> f64 {
        let t = self.ticks.get();
        self.ticks.set(t + 1);
        t as f64 * self.seconds_per_tick
    }
}

/// Sums `values` in fixed-size chunks so the rounding does not depend on the
/// number of workers.
pub fn chunked_sum<E: Executor>(exec: &E, values: &[f64]) -> f64 {
    const CHUNK: usize = 1024;
    let mut partials = alloc::vec![0.0f64; values.len().div_ceil(CHUNK)];
    exec.for_each_mut(&mut partials, |i, p| {
        let end = ((i + 1) * CHUNK).min(values.len());
        *p = values[i * CHUNK..end].iter().sum();
    });
    partials.iter().sum()
}
