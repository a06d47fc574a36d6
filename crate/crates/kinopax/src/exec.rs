use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use kinopax_core::exec::{Clock, Executor};
use rayon::prelude::*;

/// Runs work items on a dedicated rayon pool.
pub struct PoolExecutor {
    pool: rayon::ThreadPool,
    threads: usize,
}

impl PoolExecutor {
    pub fn new(threads: usize) -> Self {
        let threads = threads.max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .thread_name(|i| format!("kinopax-{i}"))
            .build()
            .expect("failed to start worker pool");
        Self { pool, threads }
    }
}

impl Executor for PoolExecutor {
    fn threads(&self) -> usize {
        self.threads
    }

    fn for_each_mut<T, F>(&self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        if self.threads == 1 || items.len() < 2 {
            items.iter_mut().enumerate().for_each(|(i, t)| f(i, t));
            return;
        }
        self.pool.install(|| {
            items
                .par_iter_mut()
                .enumerate()
                .with_min_len(16)
                .for_each(|(i, t)| f(i, t))
        });
    }
}

/// Wall clock started at construction, with an optional shared stop flag.
pub struct WallClock {
    start: Instant,
    stop: Option<Arc<AtomicBool>>,
}

impl WallClock {
    pub fn start() -> Self {
        Self { start: Instant::now(), stop: None }
    }

    pub fn with_stop(stop: Arc<AtomicBool>) -> Self {
        Self { start: Instant::now(), stop: Some(stop) }
    }
}

impl Clock for WallClock {
    fn elapsed_secs(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    fn cancelled(&self) -> bool {
        self.stop.as_ref().is_some_and(|s| s.load(Ordering::Relaxed))
    }
}
