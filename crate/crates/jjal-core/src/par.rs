//! Minimal deterministic worker pool for embarrassingly parallel sweeps.
//!
//! Results are placed by index, so the output never depends on thread
//! scheduling. The pool size honors the `JJAL_THREADS` environment
//! variable and otherwise falls back to the machine's parallelism.

/// Worker count: `JJAL_THREADS` if set and >= 1, else available
/// parallelism, else 1.
pub fn thread_cap() -> usize {
    if let Ok(v) = std::env::var("JJAL_THREADS") {
        if let Ok(t) = v.trim().parse::<usize>() {
            if t >= 1 {
                return t;
            }
        }
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Maps `f` over `0..n` on up to [`thread_cap`] scoped threads.
///
/// Worker w takes the indices congruent to w modulo the pool size; the
/// result vector is assembled by index.
pub fn par_map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = thread_cap().min(n.max(1));
    if threads <= 1 || n == 0 {
        return (0..n).map(f).collect();
    }
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    (w..n)
                        .step_by(threads)
                        .map(|i| (i, f(i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            // a worker panic is a bug in the mapped closure; propagate it
            for (i, value) in handle.join().expect("worker panicked") {
                slots[i] = Some(value);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("index filled")).collect()
}
