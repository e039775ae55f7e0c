use core::num::NonZeroU32;

/// Marsaglia's 32-bit xorshift generator with shifts (13, 17, 5).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xorshift32 {
    state: u32,
}

impl Xorshift32 {
    pub fn new(seed: NonZeroU32) -> Self {
        Xorshift32 { state: seed.get() }
    }

    /// Generator for worker `worker` of a run seeded with `seed`. Worker 0
    /// uses `seed` itself; a zero seed is replaced by 1.
    pub fn for_worker(seed: u32, worker: usize) -> Self {
        let s = seed.wrapping_add((worker as u32).wrapping_mul(0x9E37_79B9));
        Xorshift32 {
            state: if s == 0 { 0x9E37_79B9 } else { s },
        }
    }

    pub fn state(&self) -> u32 {
        self.state
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 17;
        x ^= x << 5;
        self.state = x;
        x
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        self.next_u32() as f64 / 4_294_967_296.0
    }
}
