use rayon::prelude::*;

/// Evaluates `f(i)` for `i in 0..n` on a rayon pool, returning results in
/// index order. `threads = None` uses the global pool.
pub(crate) fn map_indexed<T, F>(threads: Option<usize>, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match threads {
        Some(k) => match rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
            // Pool creation only fails on resource exhaustion; fall back to serial.
            Err(_) => (0..n).map(f).collect(),
        },
        None => (0..n).into_par_iter().map(f).collect(),
    }
}
