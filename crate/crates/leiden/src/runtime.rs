//! Thread-pool backed [`Runtime`].

use std::time::Instant;

use leiden_core::Runtime;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

/// Runs library phases on a dedicated rayon pool of fixed size.
pub struct ThreadPoolRuntime {
    pool: ThreadPool,
    epoch: Instant,
}

impl ThreadPoolRuntime {
    /// `threads == 0` picks the number of available CPUs.
    pub fn new(threads: usize) -> Result<Self, ThreadPoolBuildError> {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .thread_name(|i| format!("leiden-{i}"))
            .build()?;
        Ok(Self {
            pool,
            epoch: Instant::now(),
        })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Runtime for ThreadPoolRuntime {
    fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    fn broadcast(&self, job: &(dyn Fn(usize) + Sync)) {
        self.pool.broadcast(|ctx| job(ctx.index()));
    }

    fn now(&self) -> f64 {
        self.epoch.elapsed().as_secs_f64()
    }
}
