//! Worker-broadcast runtime abstraction and the loop helpers built on it.
//!
//! A [`Runtime`] only has to run one closure on each of its workers and wait
//! for all of them. Dynamic scheduling is layered on top with a shared chunk
//! cursor, which is how every vertex- and community-parallel loop in the
//! crate distributes work.

use core::ops::Range;
use core::sync::atomic::{AtomicUsize, Ordering};

/// Default number of vertices handed to a worker per scheduling step.
pub const DEFAULT_CHUNK: usize = 2048;

pub trait Runtime: Sync {
    /// Number of workers `broadcast` runs the job on. Always at least 1.
    fn workers(&self) -> usize;

    /// Runs `job(worker_id)` once on every worker, `worker_id` in
    /// `0..self.workers()`, and returns once all calls have finished. No two
    /// concurrent calls receive the same id.
    fn broadcast(&self, job: &(dyn Fn(usize) + Sync));

    /// Monotonic time in seconds. Runtimes without a clock return 0.
    fn now(&self) -> f64 {
        0.0
    }
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Runtime for Sequential {
    fn workers(&self) -> usize {
        1
    }

    fn broadcast(&self, job: &(dyn Fn(usize) + Sync)) {
        job(0)
    }
}

impl<R: Runtime + ?Sized> Runtime for &R {
    fn workers(&self) -> usize {
        (**self).workers()
    }

    fn broadcast(&self, job: &(dyn Fn(usize) + Sync)) {
        (**self).broadcast(job)
    }

    fn now(&self) -> f64 {
        (**self).now()
    }
}

/// Dynamically scheduled loop over `0..len` in chunks of `chunk`.
///
/// `init` runs once per participating worker to build its private state,
/// which is then threaded through every chunk that worker claims and finally
/// handed to `finish`.
pub fn for_each_chunk_with<R, S, I, F, D>(
    rt: &R,
    len: usize,
    chunk: usize,
    init: I,
    body: F,
    finish: D,
) where
    R: Runtime + ?Sized,
    I: Fn(usize) -> S + Sync,
    F: Fn(&mut S, Range<usize>) + Sync,
    D: Fn(S) + Sync,
{
    if len == 0 {
        return;
    }
    let chunk = chunk.max(1);
    let cursor = AtomicUsize::new(0);
    rt.broadcast(&|worker| {
        let mut state: Option<S> = None;
        loop {
            let start = cursor.fetch_add(chunk, Ordering::Relaxed);
            if start >= len {
                break;
            }
            let s = state.get_or_insert_with(|| init(worker));
            body(s, start..(start + chunk).min(len));
        }
        if let Some(s) = state {
            finish(s);
        }
    });
}

/// Dynamically scheduled loop without per-worker state.
pub fn for_each_chunk<R, F>(rt: &R, len: usize, chunk: usize, body: F)
where
    R: Runtime + ?Sized,
    F: Fn(usize, Range<usize>) + Sync,
{
    for_each_chunk_with(rt, len, chunk, |w| w, |w, r| body(*w, r), |_| {});
}

struct SharedMut<T>(*mut T);

// Workers only touch disjoint sub-slices carved from the pointer, see
// `for_each_slice_mut`.
unsafe impl<T: Send> Send for SharedMut<T> {}
unsafe impl<T: Send> Sync for SharedMut<T> {}

impl<T> SharedMut<T> {
    #[inline]
    fn ptr(&self) -> *mut T {
        self.0
    }
}

/// Parallel loop handing out disjoint mutable chunks of `out`.
/// `body` receives the start index of its chunk.
pub fn for_each_slice_mut<R, T, F>(rt: &R, out: &mut [T], chunk: usize, body: F)
where
    R: Runtime + ?Sized,
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    let len = out.len();
    let base = SharedMut(out.as_mut_ptr());
    for_each_chunk(rt, len, chunk, |_, range| {
        // SAFETY: the chunk cursor hands every index range to exactly one
        // worker, ranges never overlap, and `out` stays mutably borrowed for
        // the duration of the loop.
        let part =
            unsafe { core::slice::from_raw_parts_mut(base.ptr().add(range.start), range.len()) };
        body(range.start, part);
    });
}

/// Fills `out[i] = f(i)` in parallel.
pub fn par_fill<R, T, F>(rt: &R, out: &mut [T], chunk: usize, f: F)
where
    R: Runtime + ?Sized,
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    for_each_slice_mut(rt, out, chunk, |start, part| {
        for (off, slot) in part.iter_mut().enumerate() {
            *slot = f(start + off);
        }
    });
}
