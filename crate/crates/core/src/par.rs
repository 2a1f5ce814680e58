//! Optional fan-out for independent checks. `ROSENTHAL_LP_THREADS` picks the
//! worker count (default 1); results always come back in input order, so the
//! thread count never changes any output byte.

use std::env;

pub const THREADS_ENV: &str = "ROSENTHAL_LP_THREADS";

pub fn lp_threads() -> usize {
    env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let threads = lp_threads().min(items.len().max(1));
    if threads <= 1 {
        return items.iter().map(f).collect();
    }
    let mut out: Vec<Option<U>> = (0..items.len()).map(|_| None).collect();
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (inputs, slots) in items.chunks(chunk).zip(out.chunks_mut(chunk)) {
            let f = &f;
            scope.spawn(move || {
                for (x, slot) in inputs.iter().zip(slots.iter_mut()) {
                    *slot = Some(f(x));
                }
            });
        }
    });
    out.into_iter().map(|o| o.expect("worker filled slot")).collect()
}
