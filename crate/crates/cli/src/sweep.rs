//! Worker-pool evaluation of sweep grids. Points are claimed from an atomic
//! counter and results are reassembled in grid order, so the output is
//! independent of the thread count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use dispersion_kernel::KernelError;

use crate::error::{CliError, Result};

pub const THREADS_ENV: &str = "DISPERSION_KERNEL_THREADS";

/// Number of worker threads to use for `points` sweep points, honoring the
/// environment override (0 or unset picks the machine parallelism).
pub fn thread_budget(points: usize) -> Result<usize> {
    let configured = match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => 0,
        Err(e) => {
            return Err(CliError::Config(format!("{THREADS_ENV}: {e}")));
        }
        Ok(raw) => raw.trim().parse::<usize>().map_err(|e| {
            CliError::Config(format!(
                "{THREADS_ENV} must be a nonnegative integer, got '{raw}': {e}"
            ))
        })?,
    };
    let auto = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let budget = if configured == 0 { auto } else { configured };
    Ok(budget.clamp(1, points.max(1)))
}

/// Applies `f` to every input and returns the results in input order. On
/// multiple failures the one at the lowest index wins, keeping error output
/// deterministic too.
pub fn map_ordered<T, F>(inputs: &[f64], threads: usize, f: F) -> std::result::Result<Vec<T>, KernelError>
where
    T: Send,
    F: Fn(f64) -> std::result::Result<T, KernelError> + Sync,
{
    if threads <= 1 || inputs.len() <= 1 {
        return inputs.iter().map(|&x| f(x)).collect();
    }
    let next = AtomicUsize::new(0);
    let (sender, receiver) = mpsc::channel();
    let mut slots: Vec<Option<std::result::Result<T, KernelError>>> =
        (0..inputs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let f = &f;
        let next = &next;
        for _ in 0..threads.min(inputs.len()) {
            let sender = sender.clone();
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= inputs.len() {
                    break;
                }
                if sender.send((i, f(inputs[i]))).is_err() {
                    break;
                }
            });
        }
        drop(sender);
        for (i, result) in receiver {
            slots[i] = Some(result);
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.expect("every sweep point is claimed exactly once"))
        .collect()
}
