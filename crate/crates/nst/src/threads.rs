use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

use nst_core::montecarlo::Executor;

/// Runs substreams on a pool of scoped threads. Results are returned by
/// substream index, so estimates do not depend on the thread count.
#[derive(Debug, Clone, Copy)]
pub struct Threads {
    n: usize,
}

impl Threads {
    pub fn new(n: usize) -> Self {
        Self { n: n.max(1) }
    }

    pub fn available() -> Self {
        Self::new(thread::available_parallelism().map_or(1, NonZeroUsize::get))
    }

    pub fn count(&self) -> usize {
        self.n
    }
}

impl Executor for Threads {
    fn run_streams<T, F>(&self, n_streams: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let workers = self.n.min(n_streams);
        if workers <= 1 {
            return (0..n_streams).map(job).collect();
        }
        let next = AtomicUsize::new(0);
        let mut slots: Vec<Option<T>> = (0..n_streams).map(|_| None).collect();
        thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    s.spawn(|| {
                        let mut done = Vec::new();
                        loop {
                            let i = next.fetch_add(1, Ordering::Relaxed);
                            if i >= n_streams {
                                break done;
                            }
                            done.push((i, job(i)));
                        }
                    })
                })
                .collect();
            for h in handles {
                let done = h.join().unwrap_or_else(|p| std::panic::resume_unwind(p));
                for (i, v) in done {
                    slots[i] = Some(v);
                }
            }
        });
        slots
            .into_iter()
            .map(|v| v.expect("every substream ran"))
            .collect()
    }
}
