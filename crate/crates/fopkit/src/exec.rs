//! Multi-threaded [`Executor`].

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use fopkit_core::Executor;

/// Splits the index range into chunks handed out in order to `jobs` scoped
/// threads. Chunks starting after the best hit so far are skipped, and the
/// smallest hit wins, so results match [`fopkit_core::Sequential`].
#[derive(Debug, Clone, Copy)]
pub struct Parallel {
    jobs: usize,
    chunk: u64,
}

impl Parallel {
    pub fn new(jobs: usize) -> Self {
        Parallel {
            jobs: jobs.max(1),
            chunk: 4096,
        }
    }

    pub fn with_chunk(self, chunk: u64) -> Self {
        Parallel {
            chunk: chunk.max(1),
            ..self
        }
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }
}

impl Default for Parallel {
    fn default() -> Self {
        Parallel::new(std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

impl Executor for Parallel {
    fn find_first<T, E, F>(&self, len: u64, check: F) -> Result<Option<(u64, T)>, E>
    where
        T: Send,
        E: Send,
        F: Fn(u64) -> Result<Option<T>, E> + Sync,
    {
        if self.jobs == 1 {
            return fopkit_core::Sequential.find_first(len, check);
        }
        let next = AtomicU64::new(0);
        let best = AtomicU64::new(u64::MAX);
        let found: Mutex<Option<(u64, Result<T, E>)>> = Mutex::new(None);
        std::thread::scope(|scope| {
            for _ in 0..self.jobs {
                scope.spawn(|| loop {
                    let start = next.fetch_add(self.chunk, Ordering::Relaxed);
                    if start >= len || start > best.load(Ordering::Relaxed) {
                        return;
                    }
                    for i in start..(start + self.chunk).min(len) {
                        let outcome = match check(i) {
                            Ok(None) => continue,
                            Ok(Some(hit)) => Ok(hit),
                            Err(e) => Err(e),
                        };
                        best.fetch_min(i, Ordering::Relaxed);
                        let mut slot = found.lock().unwrap();
                        if slot.as_ref().is_none_or(|(j, _)| i < *j) {
                            *slot = Some((i, outcome));
                        }
                        break;
                    }
                });
            }
        });
        match found.into_inner().unwrap() {
            None => Ok(None),
            Some((i, Ok(hit))) => Ok(Some((i, hit))),
            Some((_, Err(e))) => Err(e),
        }
    }
}
