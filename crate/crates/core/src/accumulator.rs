//! Per-thread dense accumulators keyed by community id.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::UnsafeCell;
use core::sync::atomic::{AtomicBool, Ordering};

use crate::rng::Xorshift32;

/// Dense `community -> weight` table with a list of touched keys, so that
/// clearing costs `O(touched)` instead of `O(capacity)`.
///
/// Only strictly positive additions are recorded; a key is listed in
/// `touched` exactly when its value is non-zero.
#[derive(Debug, Clone)]
pub struct ThreadAccumulator {
    values: Vec<f64>,
    touched: Vec<u32>,
}

impl ThreadAccumulator {
    pub fn new(capacity: usize) -> Self {
        ThreadAccumulator {
            values: vec![0.0; capacity],
            touched: Vec::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.values.len()
    }

    /// Grows the key space to at least `capacity`.
    pub fn reserve_keys(&mut self, capacity: usize) {
        if capacity > self.values.len() {
            self.values.resize(capacity, 0.0);
        }
    }

    #[inline]
    pub fn add(&mut self, key: u32, w: f64) {
        if !(w > 0.0) {
            return;
        }
        let slot = &mut self.values[key as usize];
        if *slot == 0.0 {
            self.touched.push(key);
        }
        *slot += w;
    }

    #[inline]
    pub fn get(&self, key: u32) -> f64 {
        self.values[key as usize]
    }

    pub fn touched(&self) -> &[u32] {
        &self.touched
    }

    pub fn is_empty(&self) -> bool {
        self.touched.is_empty()
    }

    /// `(key, value)` pairs in first-touch order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.touched.iter().map(|&k| (k, self.values[k as usize]))
    }

    pub fn clear(&mut self) {
        for &k in &self.touched {
            self.values[k as usize] = 0.0;
        }
        self.touched.clear();
    }
}

/// Everything a worker keeps across chunks and phases.
#[derive(Debug)]
pub(crate) struct WorkerScratch {
    pub acc: ThreadAccumulator,
    pub rng: Xorshift32,
    pub candidates: Vec<(u32, f64)>,
}

struct Slot {
    busy: AtomicBool,
    scratch: UnsafeCell<WorkerScratch>,
}

// Access to `scratch` is gated by `busy`; see `ScratchPool::with`.
unsafe impl Sync for Slot {}

/// One [`WorkerScratch`] per runtime worker, indexed by worker id.
pub(crate) struct ScratchPool {
    slots: Vec<Slot>,
}

impl core::fmt::Debug for ScratchPool {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ScratchPool")
            .field("workers", &self.slots.len())
            .finish()
    }
}

impl ScratchPool {
    pub fn new(workers: usize, capacity: usize, seed: u32) -> Self {
        let slots = (0..workers.max(1))
            .map(|w| Slot {
                busy: AtomicBool::new(false),
                scratch: UnsafeCell::new(WorkerScratch {
                    acc: ThreadAccumulator::new(capacity),
                    rng: Xorshift32::for_worker(seed, w),
                    candidates: Vec::new(),
                }),
            })
            .collect();
        ScratchPool { slots }
    }

    pub fn workers(&self) -> usize {
        self.slots.len()
    }

    /// Runs `f` with exclusive access to worker `worker`'s scratch.
    ///
    /// Panics if the same slot is already checked out, i.e. if the runtime
    /// handed one worker id to two concurrent calls.
    pub fn with<T>(&self, worker: usize, f: impl FnOnce(&mut WorkerScratch) -> T) -> T {
        let slot = &self.slots[worker];
        assert!(
            !slot.busy.swap(true, Ordering::Acquire),
            "worker scratch {worker} checked out twice"
        );
        // SAFETY: the `busy` flag was clear and is now set by us, so no other
        // reference to this slot's scratch exists until we clear it below.
        let out = f(unsafe { &mut *slot.scratch.get() });
        slot.busy.store(false, Ordering::Release);
        out
    }

    pub fn reserve_keys(&mut self, capacity: usize) {
        for s in &mut self.slots {
            s.scratch.get_mut().acc.reserve_keys(capacity);
        }
    }
}
