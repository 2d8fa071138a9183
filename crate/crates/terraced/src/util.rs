//! Small shared helpers: thread budget, deterministic parallel map, complex
//! formatting for CSV output.

use std::sync::mpsc;

use num_complex::Complex64;

/// Number of worker threads to use, capped by the `TERRACED_THREADS`
/// environment variable when set.
pub fn thread_budget() -> usize {
    let hw = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match std::env::var("TERRACED_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n.min(hw),
            _ => hw,
        },
        Err(_) => hw,
    }
}

/// Applies `f` to `0..n` on up to `thread_budget()` threads and returns the
/// results in index order. Output is independent of scheduling because every
/// item is computed independently and placed by index.
pub fn parallel_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = thread_budget().min(n.max(1));
    if workers <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|scope| {
        for w in 0..workers {
            let tx = tx.clone();
            let f = &f;
            scope.spawn(move || {
                let mut i = w;
                while i < n {
                    let _ = tx.send((i, f(i)));
                    i += workers;
                }
            });
        }
    });
    drop(tx);
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    for (i, v) in rx {
        slots[i] = Some(v);
    }
    slots.into_iter().map(|s| s.unwrap()).collect()
}

/// Formats a complex number as `re+imj` / `re-imj` with 17 significant
/// digits, the form used in CSV dumps.
pub fn fmt_complex(z: Complex64) -> String {
    if z.im >= 0.0 || z.im.is_nan() {
        format!("{:.16e}+{:.16e}j", z.re, z.im)
    } else {
        format!("{:.16e}-{:.16e}j", z.re, -z.im)
    }
}
