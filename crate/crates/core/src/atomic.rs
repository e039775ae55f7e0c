//! Atomic `f64` cell built on `AtomicU64` bit storage.

use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

/// An `f64` that can be shared between threads.
///
/// Compare-and-swap compares raw bit patterns, so `0.0` and `-0.0` are
/// distinct and a NaN only matches the identical NaN payload.
#[repr(transparent)]
pub struct AtomicF64(AtomicU64);

impl AtomicF64 {
    pub const fn from_bits(bits: u64) -> Self {
        AtomicF64(AtomicU64::new(bits))
    }

    pub fn new(v: f64) -> Self {
        AtomicF64(AtomicU64::new(v.to_bits()))
    }

    #[inline]
    pub fn load(&self, order: Ordering) -> f64 {
        f64::from_bits(self.0.load(order))
    }

    #[inline]
    pub fn store(&self, v: f64, order: Ordering) {
        self.0.store(v.to_bits(), order)
    }

    /// Adds `v` and returns the previous value.
    #[inline]
    pub fn fetch_add(&self, v: f64, order: Ordering) -> f64 {
        let mut cur = self.0.load(Ordering::Relaxed);
        loop {
            let next = (f64::from_bits(cur) + v).to_bits();
            match self
                .0
                .compare_exchange_weak(cur, next, order, Ordering::Relaxed)
            {
                Ok(prev) => return f64::from_bits(prev),
                Err(actual) => cur = actual,
            }
        }
    }

    #[inline]
    pub fn fetch_sub(&self, v: f64, order: Ordering) -> f64 {
        self.fetch_add(-v, order)
    }

    /// Bitwise compare-and-swap. Returns the value observed before the
    /// operation, which equals `current` exactly when the swap happened.
    #[inline]
    pub fn compare_exchange(&self, current: f64, new: f64, order: Ordering) -> Result<f64, f64> {
        self.0
            .compare_exchange(current.to_bits(), new.to_bits(), order, Ordering::Relaxed)
            .map(f64::from_bits)
            .map_err(f64::from_bits)
    }

    pub fn into_inner(self) -> f64 {
        f64::from_bits(self.0.into_inner())
    }
}

impl Default for AtomicF64 {
    fn default() -> Self {
        AtomicF64::new(0.0)
    }
}

impl fmt::Debug for AtomicF64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.load(Ordering::Relaxed), f)
    }
}
